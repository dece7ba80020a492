//! Turn a parsed config into solver-ready problem objects.

use crate::config::{
    resolve_path, CoefficientsConfig, FieldSpec, GridConfig, LawConfig, PhysicalConfig,
    ProblemConfig,
};
use reynolds_core::discretize::{
    build_reynolds_coefficients, build_reynolds_coefficients_1d, build_stencil_2d,
    build_tridiagonal_1d, CoefficientFields1D, CoefficientFields2D, CoefficientGrid2D,
    DiffusivityLaw, PhysicalFields1D, PhysicalFields2D, Tridiag1D,
};
use reynolds_core::{Grid1D, Grid2D};
use std::path::Path;

/// A fully assembled problem, ready for any solver.
#[derive(Debug)]
pub enum Problem {
    Line(Tridiag1D),
    Rect(CoefficientGrid2D),
}

impl Problem {
    pub fn node_count(&self) -> usize {
        match self {
            Problem::Line(tri) => tri.grid().n_nodes(),
            Problem::Rect(coeffs) => coeffs.grid().node_count(),
        }
    }
}

/// Build the problem described by `cfg`; `base` anchors relative data paths.
pub fn build(cfg: &ProblemConfig, base: &Path) -> Result<Problem, String> {
    let grid = cfg.grid.as_ref().ok_or("config needs a [grid] section")?;
    match grid.kind.as_str() {
        "line" => build_line(cfg, grid, base),
        "rect" => build_rect(cfg, grid, base),
        other => Err(format!("unknown grid kind {other:?}; use \"line\" or \"rect\"")),
    }
}

fn core_err(e: reynolds_core::Error) -> String {
    e.to_string()
}

fn build_line(cfg: &ProblemConfig, g: &GridConfig, base: &Path) -> Result<Problem, String> {
    for (key, present) in [
        ("nodes_x", g.nodes_x.is_some()),
        ("nodes_y", g.nodes_y.is_some()),
        ("y_min", g.y_min.is_some()),
        ("y_max", g.y_max.is_some()),
    ] {
        if present {
            return Err(format!("line grids do not take {key}"));
        }
    }
    let nodes = g.nodes.ok_or("line grids need a nodes count")?;
    let grid = Grid1D::from_extent(g.x_min, g.x_max, nodes).map_err(core_err)?;

    let coef = match (&cfg.coefficients, &cfg.physical) {
        (Some(c), None) => coefficients_1d(grid, c, base)?,
        (None, Some(p)) => physical_1d(grid, p, base)?,
        (Some(_), Some(_)) => {
            return Err("give a [coefficients] or a [physical] section, not both".into())
        }
        (None, None) => return Err("config needs a [coefficients] or [physical] section".into()),
    };
    let tri = build_tridiagonal_1d(&coef).map_err(core_err)?;
    Ok(Problem::Line(tri))
}

fn build_rect(cfg: &ProblemConfig, g: &GridConfig, base: &Path) -> Result<Problem, String> {
    if g.nodes.is_some() {
        return Err("rect grids take nodes_x and nodes_y, not nodes".into());
    }
    let nodes_x = g.nodes_x.ok_or("rect grids need nodes_x")?;
    let nodes_y = g.nodes_y.ok_or("rect grids need nodes_y")?;
    let y_min = g.y_min.ok_or("rect grids need y_min")?;
    let y_max = g.y_max.ok_or("rect grids need y_max")?;
    let grid = Grid2D::from_extent(g.x_min, g.x_max, nodes_x, y_min, y_max, nodes_y)
        .map_err(core_err)?;

    let coef = match (&cfg.coefficients, &cfg.physical) {
        (Some(c), None) => coefficients_2d(grid, c, base)?,
        (None, Some(p)) => physical_2d(grid, p, base)?,
        (Some(_), Some(_)) => {
            return Err("give a [coefficients] or a [physical] section, not both".into())
        }
        (None, None) => return Err("config needs a [coefficients] or [physical] section".into()),
    };
    let stencil = build_stencil_2d(&coef).map_err(core_err)?;
    Ok(Problem::Rect(stencil))
}

/// Expand a field spec to `count` values, reading and length-checking a
/// data file when one is referenced.
fn resolve_field(
    spec: &FieldSpec,
    what: &str,
    count: usize,
    base: &Path,
) -> Result<Vec<f64>, String> {
    match spec {
        FieldSpec::Constant(v) => Ok(vec![*v; count]),
        FieldSpec::File(f) => {
            let path = resolve_path(base, &f.file);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| format!("cannot read {} ({what}): {e}", path.display()))?;
            let mut values = Vec::new();
            for (k, token) in text.split_whitespace().enumerate() {
                let value: f64 = token.parse().map_err(|_| {
                    format!("{}: entry {} ({token:?}) is not a number", path.display(), k + 1)
                })?;
                values.push(value);
            }
            if values.len() != count {
                return Err(format!(
                    "{}: {what} needs {count} values, found {}",
                    path.display(),
                    values.len()
                ));
            }
            Ok(values)
        }
    }
}

fn coefficients_1d(
    grid: Grid1D,
    c: &CoefficientsConfig,
    base: &Path,
) -> Result<CoefficientFields1D, String> {
    if c.f2.is_some() {
        return Err("line problems do not take f2".into());
    }
    let n = grid.n_nodes();
    let f1 = resolve_field(&c.f1, "f1 (midpoint diffusivity)", n - 1, base)?;
    let f3 = resolve_field(&c.f3, "f3 (nodal source)", n, base)?;
    CoefficientFields1D::from_values(grid, f1, f3).map_err(core_err)
}

fn coefficients_2d(
    grid: Grid2D,
    c: &CoefficientsConfig,
    base: &Path,
) -> Result<CoefficientFields2D, String> {
    let f2_spec = c.f2.as_ref().ok_or("rect problems need f2")?;
    let (nx, ny) = (grid.nx(), grid.ny());
    let f1 = resolve_field(&c.f1, "f1 (x-midpoint diffusivity)", (nx - 1) * ny, base)?;
    let f2 = resolve_field(f2_spec, "f2 (y-midpoint diffusivity)", nx * (ny - 1), base)?;
    let f3 = resolve_field(&c.f3, "f3 (nodal source)", nx * ny, base)?;
    CoefficientFields2D::from_values(grid, f1, f2, f3).map_err(core_err)
}

fn law_of(cfg: &Option<LawConfig>) -> Result<DiffusivityLaw, String> {
    match cfg {
        None => Ok(DiffusivityLaw::default()),
        Some(LawConfig::Named(name)) => match name.as_str() {
            "h_squared" => Ok(DiffusivityLaw::default()),
            "h_cubed_over_12" => Ok(DiffusivityLaw::classical()),
            other => Err(format!(
                "unknown law {other:?}; use \"h_squared\", \"h_cubed_over_12\", \
                 or {{ h_exponent, divisor }}"
            )),
        },
        Some(LawConfig::Custom(p)) => {
            Ok(DiffusivityLaw { h_exponent: p.h_exponent, divisor: p.divisor })
        }
    }
}

fn physical_1d(
    grid: Grid1D,
    p: &PhysicalConfig,
    base: &Path,
) -> Result<CoefficientFields1D, String> {
    if p.vy.is_some() {
        return Err("line problems do not take vy".into());
    }
    let n = grid.n_nodes();
    let h = resolve_field(&p.h, "h (film thickness)", n, base)?;
    let rho = resolve_field(&p.rho, "rho (density)", n, base)?;
    let eta = resolve_field(&p.eta, "eta (viscosity)", n, base)?;
    let squeeze = match &p.d_rho_h_dt {
        Some(spec) => Some(resolve_field(spec, "d_rho_h_dt (squeeze term)", n, base)?),
        None => None,
    };
    let fields = PhysicalFields1D::new(grid, h, rho, eta, p.vx, squeeze).map_err(core_err)?;
    build_reynolds_coefficients_1d(&fields, law_of(&p.law)?).map_err(core_err)
}

fn physical_2d(
    grid: Grid2D,
    p: &PhysicalConfig,
    base: &Path,
) -> Result<CoefficientFields2D, String> {
    let vy = p.vy.ok_or("rect problems need vy")?;
    let count = grid.node_count();
    let h = resolve_field(&p.h, "h (film thickness)", count, base)?;
    let rho = resolve_field(&p.rho, "rho (density)", count, base)?;
    let eta = resolve_field(&p.eta, "eta (viscosity)", count, base)?;
    let squeeze = match &p.d_rho_h_dt {
        Some(spec) => Some(resolve_field(spec, "d_rho_h_dt (squeeze term)", count, base)?),
        None => None,
    };
    let fields =
        PhysicalFields2D::new(grid, h, rho, eta, p.vx, vy, squeeze).map_err(core_err)?;
    build_reynolds_coefficients(&fields, law_of(&p.law)?).map_err(core_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn line_config(body: &str) -> ProblemConfig {
        toml::from_str(body).expect("config should parse")
    }

    #[test]
    fn constant_coefficients_build_a_line_problem() {
        let cfg = line_config(
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
        );
        let problem = build(&cfg, Path::new(".")).unwrap();
        match problem {
            Problem::Line(tri) => {
                assert_eq!(tri.grid().n_nodes(), 7);
                assert_eq!(tri.a(3), 1.0);
                assert_eq!(tri.c(3), -2.0);
            }
            Problem::Rect(_) => panic!("expected a line problem"),
        }
    }

    #[test]
    fn file_fields_are_read_and_length_checked() {
        let dir = tempfile::tempdir().unwrap();
        let data = dir.path().join("f3.txt");
        let mut fh = std::fs::File::create(&data).unwrap();
        writeln!(fh, "0 -1 -2\n-1 0").unwrap();

        let cfg = line_config(
            r#"
            [grid]
            kind = "line"
            nodes = 5
            x_min = 0.0
            x_max = 4.0

            [coefficients]
            f1 = 1.0
            f3 = { file = "f3.txt" }
            "#,
        );
        let problem = build(&cfg, dir.path()).unwrap();
        match problem {
            Problem::Line(tri) => assert_eq!(tri.c(2), -2.0),
            Problem::Rect(_) => panic!("expected a line problem"),
        }

        // Wrong count: same file against a larger grid.
        let cfg = line_config(
            r#"
            [grid]
            kind = "line"
            nodes = 9
            x_min = 0.0
            x_max = 4.0

            [coefficients]
            f1 = 1.0
            f3 = { file = "f3.txt" }
            "#,
        );
        let err = build(&cfg, dir.path()).unwrap_err();
        assert!(err.contains("needs 9 values, found 5"), "got: {err}");
    }

    #[test]
    fn dimension_mismatches_are_named() {
        let cfg = line_config(
            r#"
            [grid]
            kind = "line"
            nodes = 5
            x_min = 0.0
            x_max = 1.0
            y_min = 0.0

            [coefficients]
            f1 = 1.0
            f3 = -1.0
            "#,
        );
        let err = build(&cfg, Path::new(".")).unwrap_err();
        assert!(err.contains("y_min"), "got: {err}");

        let cfg = line_config(
            r#"
            [grid]
            kind = "rect"
            nodes_x = 5
            nodes_y = 4
            x_min = 0.0
            x_max = 1.0
            y_min = 0.0
            y_max = 1.0

            [coefficients]
            f1 = 1.0
            f3 = -1.0
            "#,
        );
        let err = build(&cfg, Path::new(".")).unwrap_err();
        assert!(err.contains("need f2"), "got: {err}");
    }

    #[test]
    fn physical_route_matches_direct_coefficients() {
        // Constant h, rho, eta and zero velocity: f1 = rho h^2 / eta = 4,
        // f3 = 12 * d_rho_h_dt = -12 with the default law.
        let cfg = line_config(
            r#"
            [grid]
            kind = "line"
            nodes = 5
            x_min = 0.0
            x_max = 4.0

            [physical]
            h = 2.0
            rho = 1.0
            eta = 1.0
            vx = 0.0
            d_rho_h_dt = -1.0
            "#,
        );
        let problem = build(&cfg, Path::new(".")).unwrap();
        match problem {
            Problem::Line(tri) => {
                assert!((tri.a(2) - 4.0).abs() < 1e-15);
                assert!((tri.c(2) - (-12.0)).abs() < 1e-12);
            }
            Problem::Rect(_) => panic!("expected a line problem"),
        }
    }

    #[test]
    fn both_field_sections_is_an_error() {
        let cfg = line_config(
            r#"
            [grid]
            kind = "line"
            nodes = 5
            x_min = 0.0
            x_max = 1.0

            [coefficients]
            f1 = 1.0
            f3 = -1.0

            [physical]
            h = 1.0
            rho = 1.0
            eta = 1.0
            vx = 0.0
            "#,
        );
        let err = build(&cfg, Path::new(".")).unwrap_err();
        assert!(err.contains("not both"), "got: {err}");
    }
}
