//! Full experiment pipeline: generate, certify, verify scaling laws, run the
//! Riesz scan, and write all artifacts with a digest manifest.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::config::{ExperimentConfig, FamilyKind};
use crate::error::PipelineError;
use crate::fit::geometric_radii;
use crate::generate::{generate, ExpectedExponents, GeneratorSpec};
use crate::graph::WeightedGraph;
use crate::io::{fmt_sig, sha256_digest, write_csv, write_graph, Artifact};
use crate::riesz::{
    phase_diagram, Method, MethodContext, PhaseDiagram, ScanPlan,
};
use crate::scaling::{
    fit_escape_exponent, fit_volume_growth, verify_dkue, verify_ue_shape,
};
use crate::spectral::{spectral_decompose, SpectralDecomposition, DEFAULT_DENSE_CAP};
use crate::witness::WitnessFamily;

/// Paths of every artifact a pipeline run produces.
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub graph_path: PathBuf,
    pub fits_path: PathBuf,
    pub phase_path: PathBuf,
    pub manifest_path: PathBuf,
}

fn stage<T, E: std::fmt::Display>(
    name: &'static str,
    r: Result<T, E>,
) -> Result<T, PipelineError> {
    r.map_err(|e| PipelineError::new(name, e))
}

/// Binds config-level family kinds to concrete witness families using the
/// generator's expected escape exponent and the run seed.
pub fn bind_families(
    kinds: &[FamilyKind],
    expected: &ExpectedExponents,
    seed: u64,
) -> Vec<WitnessFamily> {
    kinds
        .iter()
        .map(|k| match k {
            FamilyKind::Tent => WitnessFamily::Tent,
            FamilyKind::HeatCutoff => WitnessFamily::HeatCutoff {
                beta: expected.escape,
            },
            FamilyKind::RandomMeanZero => WitnessFamily::RandomMeanZero { seed },
            FamilyKind::EigenmodeBand => WitnessFamily::EigenmodeBand {
                target: 1.0,
                width: 0.5,
                seed,
            },
        })
        .collect()
}

/// Default scale ladder for a graph: geometric in `[2, pseudo_diameter/4]`,
/// clamped so tents stay interior.
pub fn default_scales(g: &WeightedGraph) -> Vec<usize> {
    let hi = (g.pseudo_diameter() / 4).max(5);
    geometric_radii(2, hi, 5)
}

/// Runs generate -> certify -> verify-scaling -> riesz-scan, writing
/// `graph.txt`, `fits.csv`, `phase.csv`, and `manifest.txt` in the config's
/// output directory. Fails with the stage name on the first error; files
/// being written at failure time remain under their `.partial` name.
pub fn run_pipeline(config: &ExperimentConfig) -> Result<PipelineOutput, PipelineError> {
    let out_dir = config.effective_output_dir();
    stage("setup", std::fs::create_dir_all(&out_dir))?;
    let mut manifest = String::new();
    let started = Instant::now();
    writeln!(manifest, "tool subgauss {}", env!("CARGO_PKG_VERSION")).unwrap();
    writeln!(manifest, "--- config ---").unwrap();
    manifest.push_str(&config.emit());
    writeln!(manifest, "--- stages ---").unwrap();

    // Stage: generate.
    let t0 = Instant::now();
    let mut spec = GeneratorSpec::new(config.family, config.level, config.dimension);
    spec.vertex_cap = crate::generate::DEFAULT_VERTEX_CAP;
    let (raw, expected) = stage("generate", generate(&spec))?;
    let g = if config.laziness > 0.0 {
        stage("generate", raw.lazify(config.laziness))?
    } else {
        raw
    };
    let graph_art = Artifact::new(out_dir.join("graph.txt"));
    stage(
        "generate",
        write_graph(graph_art.partial_path(), &g, Some(&expected)),
    )?;
    stage("generate", graph_art.finalize())?;
    writeln!(
        manifest,
        "generate: {} vertices, {} edges, {:.3}s",
        g.n_vertices(),
        g.n_edges(),
        t0.elapsed().as_secs_f64()
    )
    .unwrap();

    // Stage: certify.
    let t0 = Instant::now();
    let m = g.uniform_finiteness();
    let eps = g.certify_nondegeneracy();
    let (ell, an_eps) = stage("certify", g.certify_analyticity(4))?;
    writeln!(
        manifest,
        "certify: M={m} epsilon={} analytic ell={ell} eps={} {:.3}s",
        fmt_sig(eps),
        fmt_sig(an_eps),
        t0.elapsed().as_secs_f64()
    )
    .unwrap();

    // Stage: verify-scaling.
    let t0 = Instant::now();
    let center = g.center_vertex();
    let mut fit_rows: Vec<Vec<String>> = Vec::new();
    let push_fit = |rows: &mut Vec<Vec<String>>, quantity: &str, fit: &crate::fit::ScalingFit| {
        for &(scale, value) in &fit.sample {
            rows.push(vec![
                quantity.to_string(),
                fmt_sig(scale),
                fmt_sig(value),
                fmt_sig(fit.exponent),
                fmt_sig(fit.residual),
            ]);
        }
    };

    let diam = g.pseudo_diameter();
    let vol_radii = geometric_radii(2, (diam / 2).max(5), 6);
    let vol_fit = stage(
        "verify-scaling",
        fit_volume_growth(&g, &[center], &vol_radii),
    )?;
    push_fit(&mut fit_rows, "volume", &vol_fit);

    // Escape radii: geometric in [4, diam/4], clamped so the largest ball
    // stays a proper subset, widened to consecutive integers on small graphs.
    let ecc = g.eccentricity(center);
    let esc_hi = (diam / 4).max(8).min(ecc.saturating_sub(1));
    let mut esc_radii = geometric_radii(4.min(esc_hi.saturating_sub(3)).max(1), esc_hi, 4);
    if esc_radii.len() < 4 && esc_hi >= 4 {
        esc_radii = (esc_hi - 3..=esc_hi).collect();
    }
    let esc_fit = stage(
        "verify-scaling",
        fit_escape_exponent(&g, center, &esc_radii),
    )?;
    push_fit(&mut fit_rows, "escape", &esc_fit);

    let ks = [8usize, 16, 32, 64];
    let ue = stage(
        "verify-scaling",
        verify_ue_shape(&g, center, &ks, esc_fit.exponent, config.kernel_floor),
    )?;
    fit_rows.push(vec![
        "ue".into(),
        fmt_sig(*ks.last().unwrap() as f64),
        fmt_sig(ue.rate),
        fmt_sig(ue.on_diagonal_slope),
        fmt_sig(ue.violation),
    ]);
    let dk = stage(
        "verify-scaling",
        verify_dkue(&g, center, &ks, esc_fit.exponent, config.kernel_floor),
    )?;
    fit_rows.push(vec![
        "dkue".into(),
        fmt_sig(*ks.last().unwrap() as f64),
        fmt_sig(dk.rate),
        fmt_sig(dk.on_diagonal_slope),
        fmt_sig(dk.violation),
    ]);

    let fits_art = Artifact::new(out_dir.join("fits.csv"));
    stage(
        "verify-scaling",
        write_csv(
            fits_art.partial_path(),
            &["quantity", "scale", "value", "fit_exponent", "residual"],
            &fit_rows,
        ),
    )?;
    stage("verify-scaling", fits_art.finalize())?;
    writeln!(
        manifest,
        "verify-scaling: D={} beta={} ue_violation={} {:.3}s",
        fmt_sig(vol_fit.exponent),
        fmt_sig(esc_fit.exponent),
        fmt_sig(ue.violation),
        t0.elapsed().as_secs_f64()
    )
    .unwrap();

    // Stage: riesz-scan.
    let t0 = Instant::now();
    let dec: Option<SpectralDecomposition> = if g.n_vertices() <= DEFAULT_DENSE_CAP {
        Some(stage("riesz-scan", spectral_decompose(&g, DEFAULT_DENSE_CAP))?)
    } else {
        None
    };
    let families = bind_families(&config.families, &expected, config.seed);
    let scales = if config.scales.is_empty() {
        default_scales(&g)
    } else {
        config.scales.clone()
    };
    let mut plan = ScanPlan::new(center, scales, families);
    plan.slope_min = config.slope_min;
    plan.slope_eps = config.slope_eps;
    match &dec {
        Some(dec) => {
            plan.method = Method::Spectral;
            plan.ctx = MethodContext::with_spectral(dec);
        }
        None => {
            plan.method = Method::LpFunctional;
            plan.ctx = MethodContext::new();
        }
    }
    plan.ctx.series_tol = config.tail_tol;
    let pd = stage(
        "riesz-scan",
        phase_diagram(&g, &config.p_grid, &config.gamma_grid, &plan),
    )?;
    let phase_art = Artifact::new(out_dir.join("phase.csv"));
    stage(
        "riesz-scan",
        write_csv(
            phase_art.partial_path(),
            &["p", "gamma", "direction", "family", "slope", "residual", "classification"],
            &phase_rows(&pd),
        ),
    )?;
    stage("riesz-scan", phase_art.finalize())?;
    writeln!(
        manifest,
        "riesz-scan: {} cells, {:.3}s",
        pd.cells.len(),
        t0.elapsed().as_secs_f64()
    )
    .unwrap();

    // Manifest with digests of every output.
    let output = PipelineOutput {
        graph_path: out_dir.join("graph.txt"),
        fits_path: out_dir.join("fits.csv"),
        phase_path: out_dir.join("phase.csv"),
        manifest_path: out_dir.join("manifest.txt"),
    };
    writeln!(manifest, "--- artifacts ---").unwrap();
    for path in [&output.graph_path, &output.fits_path, &output.phase_path] {
        let digest = stage("manifest", sha256_digest(path))?;
        writeln!(
            manifest,
            "{} sha256={digest}",
            path.file_name().unwrap().to_string_lossy()
        )
        .unwrap();
    }
    writeln!(
        manifest,
        "total {:.3}s",
        started.elapsed().as_secs_f64()
    )
    .unwrap();
    stage("manifest", std::fs::write(&output.manifest_path, manifest))?;
    Ok(output)
}

/// CSV rows of a phase diagram in deterministic grid order.
pub fn phase_rows(pd: &PhaseDiagram) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for cell in &pd.cells {
        for fam in &cell.families {
            rows.push(vec![
                fmt_sig(cell.p),
                fmt_sig(cell.gamma),
                cell.direction.name().to_string(),
                fam.family.name().to_string(),
                if fam.degenerate {
                    "degenerate".to_string()
                } else {
                    fmt_sig(fam.slope)
                },
                if fam.degenerate {
                    "degenerate".to_string()
                } else {
                    fmt_sig(fam.residual)
                },
                cell.classification.name().to_string(),
            ]);
        }
    }
    rows
}

/// Emits a plain-text gnuplot script rendering the (1/p, gamma) diagram from
/// a phase CSV, with the theoretical region boundaries for the given beta.
pub fn write_plot_script(path: &Path, phase_csv: &Path, beta: f64) -> Result<(), std::io::Error> {
    let mut s = String::new();
    writeln!(s, "# gnuplot script: (1/p, gamma) phase diagram").unwrap();
    writeln!(s, "set datafile separator ','").unwrap();
    writeln!(s, "set xlabel '1/p'").unwrap();
    writeln!(s, "set ylabel 'gamma'").unwrap();
    writeln!(s, "set xrange [0:1]").unwrap();
    writeln!(s, "set yrange [0:1]").unwrap();
    writeln!(s, "b = {beta}").unwrap();
    writeln!(s, "# region boundaries of the validity theorem").unwrap();
    writeln!(s, "rr_holds(x)  = (x > 0.5) ? x : 0.5").unwrap();
    writeln!(s, "r_holds(x)   = (x < 0.5) ? x : 0.5").unwrap();
    writeln!(
        s,
        "rr_fails(x)  = (1/b + x*(1 - 2/b) < ((x > 1/b) ? x : 1/b)) ? 1/b + x*(1 - 2/b) : ((x > 1/b) ? x : 1/b)"
    )
    .unwrap();
    writeln!(
        s,
        "r_fails(x)   = (1/b + x*(1 - 2/b) > ((x < 1 - 1/b) ? x : 1 - 1/b)) ? 1/b + x*(1 - 2/b) : ((x < 1 - 1/b) ? x : 1 - 1/b)"
    )
    .unwrap();
    writeln!(
        s,
        "plot '{}' every ::1 using (1/column(1)):2 with points pt 7 title 'cells', \\",
        phase_csv.display()
    )
    .unwrap();
    writeln!(s, "     rr_holds(x) with lines title 'RR holds above', \\").unwrap();
    writeln!(s, "     r_holds(x) with lines title 'R holds below', \\").unwrap();
    writeln!(s, "     rr_fails(x) with lines title 'RR fails below', \\").unwrap();
    writeln!(s, "     r_fails(x) with lines title 'R fails above'").unwrap();
    std::fs::write(path, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config_str;
    use tempfile::tempdir;

    #[test]
    fn minimal_pipeline_single_isometry_cell() {
        let dir = tempdir().unwrap();
        let text = format!(
            "family = lattice_box\nlevel = 16\ndimension = 1\np_grid = 2\ngamma_grid = 0.5\noutput_dir = {}\n",
            dir.path().display()
        );
        let config = parse_config_str(&text).unwrap();
        let out = run_pipeline(&config).unwrap();
        let phase = std::fs::read_to_string(&out.phase_path).unwrap();
        let lines: Vec<&str> = phase.lines().collect();
        assert_eq!(
            lines[0],
            "p,gamma,direction,family,slope,residual,classification"
        );
        // One cell, both directions, tent family only; the isometry pins the
        // RR ratio so both directions read bounded.
        assert_eq!(lines.len(), 3);
        for line in &lines[1..] {
            assert!(line.ends_with("bounded"), "line: {line}");
        }
        assert!(out.graph_path.exists());
        assert!(out.fits_path.exists());
        assert!(out.manifest_path.exists());
        let manifest = std::fs::read_to_string(&out.manifest_path).unwrap();
        assert!(manifest.contains("sha256="));
        assert!(manifest.contains("generate:"));
    }

    #[test]
    fn pipeline_rejects_bad_stage_with_name() {
        // Escape fit needs radii below diameter/2; a tiny graph cannot supply
        // them, so the verify-scaling stage must fail by name.
        let dir = tempdir().unwrap();
        let text = format!(
            "family = lattice_box\nlevel = 4\ndimension = 1\np_grid = 2\ngamma_grid = 0.5\noutput_dir = {}\n",
            dir.path().display()
        );
        let config = parse_config_str(&text).unwrap();
        let err = run_pipeline(&config).unwrap_err();
        assert_eq!(err.stage, "verify-scaling");
    }

    #[test]
    fn plot_script_mentions_boundaries() {
        let dir = tempdir().unwrap();
        let script = dir.path().join("plot.gp");
        write_plot_script(&script, Path::new("phase.csv"), 2.465).unwrap();
        let text = std::fs::read_to_string(&script).unwrap();
        assert!(text.contains("rr_fails"));
        assert!(text.contains("set xlabel '1/p'"));
    }
}
