//! Thin command-line wrapper over the library: each subcommand parses
//! arguments, calls one library entry point, and prints or writes the result.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use subgauss::config::FamilyKind;
use subgauss::fit::geometric_radii;
use subgauss::generate::{generate, Family, GeneratorSpec};
use subgauss::graph::WeightedGraph;
use subgauss::io::{fmt_sig, read_graph, write_csv, write_graph};
use subgauss::pipeline::{bind_families, default_scales, phase_rows, write_plot_script};
use subgauss::riesz::{check_poincare, phase_diagram, Method, MethodContext, ScanPlan};
use subgauss::scaling::{
    fit_escape_exponent, fit_volume_growth, verify_dkue, verify_ue_shape, KERNEL_FLOOR,
};
use subgauss::spectral::{spectral_decompose, DEFAULT_DENSE_CAP};
use subgauss::witness::tent_witness;

#[derive(Parser)]
#[command(name = "subgauss", version, about = "Scaling laws and Riesz inequalities on fractal graphs")]
struct Cli {
    /// Cap the worker thread count.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArg {
    /// Edge-list graph file.
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an example graph and write its edge list.
    Generate {
        /// vicsek | sierpinski | lattice_box
        #[arg(long)]
        family: String,
        /// Iteration level (side length for lattice_box).
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Self-loop mass to add (0 keeps the raw walk).
        #[arg(long, default_value_t = 0.0)]
        laziness: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the graph's validity certificates.
    Certify {
        #[command(flatten)]
        graph: GraphArg,
    },
    /// Fit a scaling law and write the samples as CSV.
    VerifyScaling {
        #[command(flatten)]
        graph: GraphArg,
        /// volume | escape | ue | dkue
        #[arg(long)]
        what: String,
        /// Escape exponent for ue/dkue; defaults to the file's sidecar value.
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the Laplacian eigenvalues as CSV.
    Spectrum {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sweep the (p, gamma) grid and classify each cell.
    RieszScan {
        #[command(flatten)]
        graph: GraphArg,
        /// Comma list of p values (> 1).
        #[arg(long)]
        p: String,
        /// Comma list or lo:hi:step shorthand of gamma values.
        #[arg(long)]
        gamma: String,
        /// Comma list of witness families.
        #[arg(long, default_value = "tent")]
        families: String,
        /// Escape exponent for heat-cutoff witnesses.
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Also emit a gnuplot script next to the CSV.
        #[arg(long)]
        plot_script: Option<PathBuf>,
    },
    /// Evaluate the Poincare ratio for tent witnesses across scales.
    Poincare {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the full pipeline from a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

fn load(graph: &GraphArg) -> Result<(WeightedGraph, Option<subgauss::generate::ExpectedExponents>), String> {
    read_graph(&graph.graph).map_err(|e| e.to_string())
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    subgauss::config::parse_grid("grid", s).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Generate {
            family,
            level,
            dim,
            laziness,
            out,
        } => {
            let family = Family::parse(&family).ok_or_else(|| format!("unknown family `{family}`"))?;
            let (g, expected) =
                generate(&GeneratorSpec::new(family, level, dim)).map_err(|e| e.to_string())?;
            let g = if laziness > 0.0 {
                g.lazify(laziness).map_err(|e| e.to_string())?
            } else {
                g
            };
            write_graph(&out, &g, Some(&expected)).map_err(|e| e.to_string())?;
            println!(
                "wrote {} ({} vertices, {} edges)",
                out.display(),
                g.n_vertices(),
                g.n_edges()
            );
            Ok(())
        }
        Command::Certify { graph } => {
            let (g, _) = load(&graph)?;
            println!("vertices {}", g.n_vertices());
            println!("edges {}", g.n_edges());
            println!("uniform_finiteness {}", g.uniform_finiteness());
            println!("nondegeneracy_epsilon {}", fmt_sig(g.certify_nondegeneracy()));
            match g.certify_analyticity(4) {
                Ok((ell, eps)) => println!("analytic ell={ell} eps={}", fmt_sig(eps)),
                Err(e) => println!("analyticity FAILED: {e}"),
            }
            Ok(())
        }
        Command::VerifyScaling {
            graph,
            what,
            beta,
            out,
        } => {
            let (g, expected) = load(&graph)?;
            let center = g.center_vertex();
            let diam = g.pseudo_diameter();
            let mut rows: Vec<Vec<String>> = Vec::new();
            let mut push_fit = |quantity: &str, fit: &subgauss::fit::ScalingFit| {
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
            let beta_in = beta
                .or(expected.map(|e| e.escape))
                .ok_or("need --beta (no sidecar exponents in graph file)");
            match what.as_str() {
                "volume" => {
                    let radii = geometric_radii(2, (diam / 2).max(5), 6);
                    let fit =
                        fit_volume_growth(&g, &[center], &radii).map_err(|e| e.to_string())?;
                    push_fit("volume", &fit);
                }
                "escape" => {
                    let radii = geometric_radii(4, (diam / 4).max(8), 4);
                    let fit =
                        fit_escape_exponent(&g, center, &radii).map_err(|e| e.to_string())?;
                    push_fit("escape", &fit);
                }
                "ue" | "dkue" => {
                    let b = beta_in?;
                    let ks = [8usize, 16, 32, 64, 128];
                    let fit = if what == "ue" {
                        verify_ue_shape(&g, center, &ks, b, KERNEL_FLOOR)
                    } else {
                        verify_dkue(&g, center, &ks, b, KERNEL_FLOOR)
                    }
                    .map_err(|e| e.to_string())?;
                    rows.push(vec![
                        what.clone(),
                        fmt_sig(*ks.last().unwrap() as f64),
                        fmt_sig(fit.rate),
                        fmt_sig(fit.on_diagonal_slope),
                        fmt_sig(fit.violation),
                    ]);
                }
                other => return Err(format!("unknown quantity `{other}`")),
            }
            write_csv(
                &out,
                &["quantity", "scale", "value", "fit_exponent", "residual"],
                &rows,
            )
            .map_err(|e| e.to_string())?;
            println!("wrote {}", out.display());
            Ok(())
        }
        Command::Spectrum { graph, out } => {
            let (g, _) = load(&graph)?;
            let dec = spectral_decompose(&g, DEFAULT_DENSE_CAP).map_err(|e| e.to_string())?;
            let rows: Vec<Vec<String>> = dec
                .eigenvalues
                .iter()
                .enumerate()
                .map(|(i, &l)| vec![i.to_string(), fmt_sig(l)])
                .collect();
            write_csv(&out, &["index", "eigenvalue"], &rows).map_err(|e| e.to_string())?;
            println!("wrote {} ({} eigenvalues)", out.display(), dec.n());
            Ok(())
        }
        Command::RieszScan {
            graph,
            p,
            gamma,
            families,
            beta,
            seed,
            out,
            plot_script,
        } => {
            let (g, expected) = load(&graph)?;
            let p_grid = parse_f64_list(&p)?;
            let gamma_grid = parse_f64_list(&gamma)?;
            let kinds: Vec<FamilyKind> = families
                .split(',')
                .map(|t| {
                    FamilyKind::parse(t.trim()).ok_or_else(|| format!("unknown family `{t}`"))
                })
                .collect::<Result<_, _>>()?;
            let beta_val = beta.or(expected.map(|e| e.escape)).unwrap_or(2.0);
            let exps = subgauss::generate::ExpectedExponents {
                growth: expected.map(|e| e.growth).unwrap_or(2.0),
                escape: beta_val,
            };
            let dec = if g.n_vertices() <= DEFAULT_DENSE_CAP {
                Some(spectral_decompose(&g, DEFAULT_DENSE_CAP).map_err(|e| e.to_string())?)
            } else {
                None
            };
            let mut plan = ScanPlan::new(
                g.center_vertex(),
                default_scales(&g),
                bind_families(&kinds, &exps, seed),
            );
            match &dec {
                Some(dec) => {
                    plan.method = Method::Spectral;
                    plan.ctx = MethodContext::with_spectral(dec);
                }
                None => {
                    plan.method = Method::LpFunctional;
                }
            }
            let pd = phase_diagram(&g, &p_grid, &gamma_grid, &plan).map_err(|e| e.to_string())?;
            write_csv(
                &out,
                &["p", "gamma", "direction", "family", "slope", "residual", "classification"],
                &phase_rows(&pd),
            )
            .map_err(|e| e.to_string())?;
            println!("wrote {} ({} cells)", out.display(), pd.cells.len());
            if let Some(script) = plot_script {
                write_plot_script(&script, &out, beta_val).map_err(|e| e.to_string())?;
                println!("wrote {}", script.display());
            }
            Ok(())
        }
        Command::Poincare { graph, p, alpha, out } => {
            let (g, _) = load(&graph)?;
            let anchor = g.center_vertex();
            let scales = default_scales(&g);
            let mut rows = Vec::new();
            for &r in &scales {
                let f = tent_witness(&g, anchor, r).map_err(|e| e.to_string())?;
                let ball = g.ball(anchor, r).map_err(|e| e.to_string())?;
                let chk = check_poincare(&g, &ball, &f, p, alpha).map_err(|e| e.to_string())?;
                rows.push(vec![
                    r.to_string(),
                    fmt_sig(chk.lhs),
                    fmt_sig(chk.rhs),
                    fmt_sig(chk.ratio),
                ]);
            }
            write_csv(&out, &["scale", "lhs", "rhs", "ratio"], &rows)
                .map_err(|e| e.to_string())?;
            println!("wrote {}", out.display());
            Ok(())
        }
        Command::Run { config } => {
            let cfg = subgauss::config::parse_config(&config).map_err(|e| e.to_string())?;
            let outputs = subgauss::pipeline::run_pipeline(&cfg).map_err(|e| e.to_string())?;
            println!("graph    {}", outputs.graph_path.display());
            println!("fits     {}", outputs.fits_path.display());
            println!("phase    {}", outputs.phase_path.display());
            println!("manifest {}", outputs.manifest_path.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("warning: could not set thread count: {e}");
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
