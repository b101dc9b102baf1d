//! Experiment configuration: strict `key = value` text files with `#`
//! comments, grid shorthand expansion, and canonical re-emission.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use crate::error::ConfigError;
use crate::generate::Family;

/// Environment variable that overrides `output_dir` when set.
pub const OUTPUT_DIR_ENV: &str = "SUBGAUSS_OUT";

/// Witness family selector as named in config files; parameters (escape
/// exponent, seeds) are bound later from the rest of the config.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Tent,
    HeatCutoff,
    RandomMeanZero,
    EigenmodeBand,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Tent => "tent",
            FamilyKind::HeatCutoff => "heat_cutoff",
            FamilyKind::RandomMeanZero => "random_mean_zero",
            FamilyKind::EigenmodeBand => "eigenmode_band",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "tent" => Some(FamilyKind::Tent),
            "heat_cutoff" => Some(FamilyKind::HeatCutoff),
            "random_mean_zero" => Some(FamilyKind::RandomMeanZero),
            "eigenmode_band" => Some(FamilyKind::EigenmodeBand),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub family: Family,
    /// Iteration level (side length for lattice boxes).
    pub level: usize,
    pub dimension: usize,
    pub laziness: f64,
    pub p_grid: Vec<f64>,
    pub gamma_grid: Vec<f64>,
    pub families: Vec<FamilyKind>,
    /// Witness scales; empty means a geometric ladder chosen from the graph.
    pub scales: Vec<usize>,
    pub tail_tol: f64,
    pub slope_min: f64,
    pub slope_eps: f64,
    pub kernel_floor: f64,
    pub seed: u64,
    pub output_dir: PathBuf,
}

const KNOWN_KEYS: &[&str] = &[
    "family",
    "level",
    "dimension",
    "laziness",
    "p_grid",
    "gamma_grid",
    "families",
    "scales",
    "tail_tol",
    "slope_min",
    "slope_eps",
    "kernel_floor",
    "seed",
    "output_dir",
];

fn bad_value(key: &str, value: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
        reason: reason.into(),
    }
}

/// Expands a grid: either a comma list `1.5,2,4` or the shorthand
/// `lo:hi:step` (inclusive endpoints).
pub fn parse_grid(key: &str, s: &str) -> Result<Vec<f64>, ConfigError> {
    let values: Vec<f64> = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad_value(key, s, "expected lo:hi:step"));
        }
        let lo: f64 = parts[0]
            .trim()
            .parse()
            .map_err(|_| bad_value(key, s, "bad lower bound"))?;
        let hi: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| bad_value(key, s, "bad upper bound"))?;
        let step: f64 = parts[2]
            .trim()
            .parse()
            .map_err(|_| bad_value(key, s, "bad step"))?;
        if !(step > 0.0) || hi < lo {
            return Err(bad_value(key, s, "need step > 0 and hi >= lo"));
        }
        let count = ((hi - lo) / step).round() as usize;
        (0..=count).map(|i| lo + i as f64 * step).collect()
    } else {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| bad_value(key, s, format!("bad number `{}`", t.trim())))
            })
            .collect::<Result<_, _>>()?
    };
    if values.is_empty() {
        return Err(bad_value(key, s, "empty grid"));
    }
    Ok(values)
}

/// Strict parse: unknown keys, duplicate keys, and malformed lines are all
/// errors with line numbers.
pub fn parse_config_str(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut seen: HashSet<String> = HashSet::new();
    let mut family = None;
    let mut level = None;
    let mut dimension = 2usize;
    let mut laziness = 0.5f64;
    let mut p_grid = None;
    let mut gamma_grid = None;
    let mut families = vec![FamilyKind::Tent];
    let mut scales = Vec::new();
    let mut tail_tol = 1e-6f64;
    let mut slope_min = crate::riesz::SLOPE_MIN;
    let mut slope_eps = crate::riesz::SLOPE_EPS;
    let mut kernel_floor = crate::scaling::KERNEL_FLOOR;
    let mut seed = 0u64;
    let mut output_dir = PathBuf::from("out");

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or(ConfigError::Malformed { line: lineno })?;
        let key = key.trim();
        let value = value.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey {
                line: lineno,
                key: key.to_string(),
            });
        }
        if !seen.insert(key.to_string()) {
            return Err(ConfigError::DuplicateKey {
                line: lineno,
                key: key.to_string(),
            });
        }
        match key {
            "family" => {
                family = Some(
                    Family::parse(value)
                        .ok_or_else(|| bad_value(key, value, "unknown family"))?,
                );
            }
            "level" => {
                level = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| bad_value(key, value, "not a nonnegative integer"))?,
                );
            }
            "dimension" => {
                dimension = value
                    .parse::<usize>()
                    .map_err(|_| bad_value(key, value, "not a positive integer"))?;
                if dimension == 0 {
                    return Err(bad_value(key, value, "dimension must be >= 1"));
                }
            }
            "laziness" => {
                laziness = value
                    .parse::<f64>()
                    .map_err(|_| bad_value(key, value, "not a number"))?;
                if !(0.0..1.0).contains(&laziness) {
                    return Err(bad_value(key, value, "laziness must lie in [0, 1)"));
                }
            }
            "p_grid" => {
                let grid = parse_grid(key, value)?;
                if grid.iter().any(|&p| p <= 1.0) {
                    return Err(bad_value(key, value, "all p values must exceed 1"));
                }
                p_grid = Some(grid);
            }
            "gamma_grid" => {
                let grid = parse_grid(key, value)?;
                if grid.iter().any(|&g| !(0.0..=1.0).contains(&g)) {
                    return Err(bad_value(key, value, "gamma values must lie in [0, 1]"));
                }
                gamma_grid = Some(grid);
            }
            "families" => {
                let parsed: Option<Vec<FamilyKind>> =
                    value.split(',').map(|t| FamilyKind::parse(t.trim())).collect();
                families =
                    parsed.ok_or_else(|| bad_value(key, value, "unknown witness family"))?;
                if families.is_empty() {
                    return Err(bad_value(key, value, "empty family list"));
                }
            }
            "scales" => {
                scales = value
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<usize>()
                            .map_err(|_| bad_value(key, value, "bad scale"))
                    })
                    .collect::<Result<_, _>>()?;
                if scales.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(bad_value(key, value, "scales must strictly increase"));
                }
            }
            "tail_tol" => {
                tail_tol = value
                    .parse::<f64>()
                    .map_err(|_| bad_value(key, value, "not a number"))?;
                if !(tail_tol > 0.0) {
                    return Err(bad_value(key, value, "must be positive"));
                }
            }
            "slope_min" => {
                slope_min = value
                    .parse::<f64>()
                    .map_err(|_| bad_value(key, value, "not a number"))?;
            }
            "slope_eps" => {
                slope_eps = value
                    .parse::<f64>()
                    .map_err(|_| bad_value(key, value, "not a number"))?;
            }
            "kernel_floor" => {
                kernel_floor = value
                    .parse::<f64>()
                    .map_err(|_| bad_value(key, value, "not a number"))?;
            }
            "seed" => {
                seed = value
                    .parse::<u64>()
                    .map_err(|_| bad_value(key, value, "not an unsigned integer"))?;
            }
            "output_dir" => {
                output_dir = PathBuf::from(value);
            }
            _ => unreachable!(),
        }
    }

    Ok(ExperimentConfig {
        family: family.ok_or(ConfigError::MissingKey { key: "family" })?,
        level: level.ok_or(ConfigError::MissingKey { key: "level" })?,
        dimension,
        laziness,
        p_grid: p_grid.ok_or(ConfigError::MissingKey { key: "p_grid" })?,
        gamma_grid: gamma_grid.ok_or(ConfigError::MissingKey { key: "gamma_grid" })?,
        families,
        scales,
        tail_tol,
        slope_min,
        slope_eps,
        kernel_floor,
        seed,
        output_dir,
    })
}

pub fn parse_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path)?;
    parse_config_str(&text)
}

fn emit_grid(grid: &[f64]) -> String {
    grid.iter()
        .map(|v| format!("{v}"))
        .collect::<Vec<_>>()
        .join(",")
}

impl ExperimentConfig {
    /// Canonical text form: fixed key order, grids expanded, defaults
    /// explicit. `emit(parse(x))` is the normal form of `x`.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        let mut push = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        push("family", self.family.name().to_string());
        push("level", self.level.to_string());
        push("dimension", self.dimension.to_string());
        push("laziness", format!("{}", self.laziness));
        push("p_grid", emit_grid(&self.p_grid));
        push("gamma_grid", emit_grid(&self.gamma_grid));
        push(
            "families",
            self.families
                .iter()
                .map(|f| f.name())
                .collect::<Vec<_>>()
                .join(","),
        );
        if !self.scales.is_empty() {
            push(
                "scales",
                self.scales
                    .iter()
                    .map(|s| s.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            );
        }
        push("tail_tol", format!("{}", self.tail_tol));
        push("slope_min", format!("{}", self.slope_min));
        push("slope_eps", format!("{}", self.slope_eps));
        push("kernel_floor", format!("{}", self.kernel_floor));
        push("seed", self.seed.to_string());
        push("output_dir", self.output_dir.display().to_string());
        out
    }

    /// Output directory after applying the environment override.
    pub fn effective_output_dir(&self) -> PathBuf {
        match std::env::var_os(OUTPUT_DIR_ENV) {
            Some(dir) if !dir.is_empty() => PathBuf::from(dir),
            _ => self.output_dir.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
family = lattice_box
level = 16
dimension = 1
p_grid = 2
gamma_grid = 0.5
";

    #[test]
    fn minimal_config_parses_with_defaults() {
        let c = parse_config_str(MINIMAL).unwrap();
        assert_eq!(c.family, Family::LatticeBox);
        assert_eq!(c.level, 16);
        assert_eq!(c.p_grid, vec![2.0]);
        assert_eq!(c.gamma_grid, vec![0.5]);
        assert_eq!(c.laziness, 0.5);
        assert_eq!(c.families, vec![FamilyKind::Tent]);
    }

    #[test]
    fn grid_shorthand_expands() {
        let grid = parse_grid("gamma_grid", "0.1:0.9:0.05").unwrap();
        assert_eq!(grid.len(), 17);
        assert!((grid[0] - 0.1).abs() < 1e-12);
        assert!((grid[16] - 0.9).abs() < 1e-12);
    }

    #[test]
    fn unknown_key_rejected_with_line() {
        let text = format!("{MINIMAL}frobnicate = 3\n");
        match parse_config_str(&text) {
            Err(ConfigError::UnknownKey { line, key }) => {
                assert_eq!(line, 6);
                assert_eq!(key, "frobnicate");
            }
            other => panic!("expected unknown-key error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_key_rejected_with_line() {
        let text = format!("{MINIMAL}level = 4\n");
        match parse_config_str(&text) {
            Err(ConfigError::DuplicateKey { line, key }) => {
                assert_eq!(line, 6);
                assert_eq!(key, "level");
            }
            other => panic!("expected duplicate-key error, got {other:?}"),
        }
    }

    #[test]
    fn missing_required_key_named() {
        match parse_config_str("family = vicsek\nlevel = 3\np_grid = 2\n") {
            Err(ConfigError::MissingKey { key }) => assert_eq!(key, "gamma_grid"),
            other => panic!("expected missing-key error, got {other:?}"),
        }
    }

    #[test]
    fn out_of_range_gamma_names_field() {
        let text = "family = vicsek\nlevel = 3\np_grid = 2\ngamma_grid = 1.5\n";
        match parse_config_str(text) {
            Err(ConfigError::BadValue { key, .. }) => assert_eq!(key, "gamma_grid"),
            other => panic!("expected bad-value error, got {other:?}"),
        }
    }

    #[test]
    fn round_trip_is_idempotent() {
        let text = "\
family = vicsek
level = 5   # reference level
laziness = 0.5
p_grid = 1.5,2,3,4
gamma_grid = 0.1:0.9:0.1
families = tent,heat_cutoff
seed = 7
";
        let once = parse_config_str(text).unwrap().emit();
        let twice = parse_config_str(&once).unwrap().emit();
        assert_eq!(once, twice);
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let text = format!("# header comment\n\n{MINIMAL}\n# trailing\n");
        assert!(parse_config_str(&text).is_ok());
    }
}
