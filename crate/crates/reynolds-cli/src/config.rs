//! TOML problem descriptions.
//!
//! Every section rejects unknown keys so a typo fails loudly instead of
//! silently falling back to a default.  Paths inside the config (field data
//! files, CSV outputs) are resolved relative to the config file's directory,
//! which keeps a run reproducible no matter where the process is started.

use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub grid: Option<GridConfig>,
    pub coefficients: Option<CoefficientsConfig>,
    pub physical: Option<PhysicalConfig>,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub output: OutputConfig,
    pub bench: Option<BenchConfig>,
    #[serde(default)]
    pub verify: VerifyConfig,
}

/// Grid geometry.  `kind = "line"` takes `nodes`; `kind = "rect"` takes
/// `nodes_x`/`nodes_y` and the y extent.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub kind: String,
    pub nodes: Option<usize>,
    pub nodes_x: Option<usize>,
    pub nodes_y: Option<usize>,
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: Option<f64>,
    pub y_max: Option<f64>,
}

/// One scalar field: either a constant applied everywhere or a file of
/// whitespace-separated numbers, one per sample point.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Constant(f64),
    File(FileRef),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileRef {
    pub file: PathBuf,
}

/// Equation coefficients given directly: `f1` (and `f2` on rectangles) are
/// diffusivities sampled at cell midpoints, `f3` is the nodal source term.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientsConfig {
    pub f1: FieldSpec,
    pub f2: Option<FieldSpec>,
    pub f3: FieldSpec,
}

/// Film data per node; the equation coefficients are derived from these.
/// `vy` only applies to rectangles.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalConfig {
    pub h: FieldSpec,
    pub rho: FieldSpec,
    pub eta: FieldSpec,
    pub vx: f64,
    pub vy: Option<f64>,
    pub d_rho_h_dt: Option<FieldSpec>,
    pub law: Option<LawConfig>,
}

/// How film thickness turns into diffusivity: a named preset
/// (`"h_squared"` for h²/η, `"h_cubed_over_12"` for h³/(12η)) or explicit
/// `{ h_exponent, divisor }` parameters.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum LawConfig {
    Named(String),
    Custom(LawParams),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LawParams {
    pub h_exponent: f64,
    pub divisor: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    /// "auto" (default), "fast1d", "sor1d", "projected", or "oracle".
    pub method: Option<String>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub omega: Option<f64>,
    pub per_node_clamp: Option<bool>,
    pub record_history: Option<bool>,
    pub oracle_limit: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub csv: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub n_values: Vec<usize>,
    pub repetitions: Option<usize>,
    pub omega: Option<f64>,
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub problems: Option<usize>,
    pub seed: Option<u64>,
    pub limit: Option<usize>,
}

/// Read and parse a config file.  Parse errors keep toml's line/column
/// anchoring so the offending key is easy to find.
pub fn load(path: &Path) -> Result<ProblemConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Directory that relative paths inside the config resolve against.
pub fn base_dir(config_path: &Path) -> PathBuf {
    match config_path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => dir.to_path_buf(),
        _ => PathBuf::from("."),
    }
}

/// Resolve a possibly-relative path from the config against its base dir.
pub fn resolve_path(base: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base.join(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_line_config_parses() {
        let cfg: ProblemConfig = toml::from_str(
            r#"
            [grid]
            kind = "line"
            nodes = 7
            x_min = -3.0
            x_max = 3.0

            [coefficients]
            f1 = 1.0
            f3 = -2.0
            "#,
        )
        .unwrap();
        let grid = cfg.grid.unwrap();
        assert_eq!(grid.kind, "line");
        assert_eq!(grid.nodes, Some(7));
        let coef = cfg.coefficients.unwrap();
        assert!(matches!(coef.f1, FieldSpec::Constant(v) if v == 1.0));
        assert!(coef.f2.is_none());
        assert!(cfg.solver.method.is_none());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = toml::from_str::<ProblemConfig>(
            r#"
            [grid]
            kind = "line"
            nodes = 7
            x_min = 0.0
            x_max = 1.0
            dz = 0.5
            "#,
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("dz"), "message should name the bad key: {err}");
    }

    #[test]
    fn field_specs_accept_constants_and_files() {
        let cfg: ProblemConfig = toml::from_str(
            r#"
            [grid]
            kind = "line"
            nodes = 5
            x_min = 0.0
            x_max = 1.0

            [coefficients]
            f1 = { file = "f1.txt" }
            f3 = -2.0
            "#,
        )
        .unwrap();
        let coef = cfg.coefficients.unwrap();
        match coef.f1 {
            FieldSpec::File(ref f) => assert_eq!(f.file, PathBuf::from("f1.txt")),
            FieldSpec::Constant(_) => panic!("expected a file reference"),
        }
    }

    #[test]
    fn law_parses_both_shapes() {
        let named: PhysicalConfig = toml::from_str(
            r#"
            h = 1.0
            rho = 1.0
            eta = 1.0
            vx = 1.0
            law = "h_cubed_over_12"
            "#,
        )
        .unwrap();
        assert!(matches!(named.law, Some(LawConfig::Named(ref s)) if s == "h_cubed_over_12"));

        let custom: PhysicalConfig = toml::from_str(
            r#"
            h = 1.0
            rho = 1.0
            eta = 1.0
            vx = 1.0
            law = { h_exponent = 2.5, divisor = 6.0 }
            "#,
        )
        .unwrap();
        match custom.law {
            Some(LawConfig::Custom(ref p)) => {
                assert_eq!(p.h_exponent, 2.5);
                assert_eq!(p.divisor, 6.0);
            }
            _ => panic!("expected custom law parameters"),
        }
    }

    #[test]
    fn paths_resolve_against_the_config_directory() {
        let base = Path::new("/tmp/case");
        assert_eq!(
            resolve_path(base, Path::new("data/f1.txt")),
            PathBuf::from("/tmp/case/data/f1.txt")
        );
        assert_eq!(resolve_path(base, Path::new("/abs/f1.txt")), PathBuf::from("/abs/f1.txt"));
        assert_eq!(base_dir(Path::new("case.toml")), PathBuf::from("."));
        assert_eq!(base_dir(Path::new("/tmp/case/case.toml")), PathBuf::from("/tmp/case"));
    }
}
