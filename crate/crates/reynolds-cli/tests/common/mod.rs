//! The regression suite shared by the acceptance tests: a fixed set of
//! named problems covering full films, isolated pockets, boundary-touching
//! free boundaries, graded couplings, and seeded random draws.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reynolds_cli::bench;
use reynolds_core::discretize::{
    build_stencil_2d, build_tridiagonal_1d, CoefficientFields1D, CoefficientFields2D,
    CoefficientGrid2D, Tridiag1D,
};
use reynolds_core::{Grid1D, Grid2D};

pub struct LineProblem {
    pub name: String,
    pub tri: Tridiag1D,
}

pub struct RectProblem {
    pub name: String,
    pub coeffs: CoefficientGrid2D,
}

fn line(name: &str, tri: Tridiag1D) -> LineProblem {
    LineProblem { name: name.to_owned(), tri }
}

fn tri_from(grid: Grid1D, f1: Vec<f64>, f3: Vec<f64>) -> Tridiag1D {
    let coef = CoefficientFields1D::from_values(grid, f1, f3).expect("valid suite fields");
    build_tridiagonal_1d(&coef).expect("valid suite stencil")
}

/// A random line problem small enough for the enumeration oracle, with a
/// source that changes sign somewhere in the interior.
pub fn random_small_tri(rng: &mut ChaCha8Rng) -> Tridiag1D {
    let n = rng.random_range(5..=10);
    let dx = rng.random_range(0.1..1.0);
    let grid = Grid1D::new(n, 0.0, dx).expect("valid grid");
    let f1: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.2..5.0)).collect();
    let f3 = loop {
        let f3: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        let interior = &f3[1..n - 1];
        if interior.iter().any(|&v| v < 0.0) && interior.iter().any(|&v| v > 0.0) {
            break f3;
        }
    };
    tri_from(grid, f1, f3)
}

/// A random rectangle problem with at most 16 interior nodes and a source
/// that changes sign inside.
pub fn random_small_rect(rng: &mut ChaCha8Rng) -> CoefficientGrid2D {
    let (nx, ny) = loop {
        let nx = rng.random_range(4..=6);
        let ny = rng.random_range(4..=6);
        if (nx - 2) * (ny - 2) <= 16 {
            break (nx, ny);
        }
    };
    let step = rng.random_range(0.1..1.0);
    let grid = Grid2D::new(nx, ny, 0.0, 0.0, step, step).expect("valid grid");
    let f1: Vec<f64> = (0..(nx - 1) * ny).map(|_| rng.random_range(0.2..5.0)).collect();
    let f2: Vec<f64> = (0..nx * (ny - 1)).map(|_| rng.random_range(0.2..5.0)).collect();
    let f3 = loop {
        let f3: Vec<f64> = (0..nx * ny).map(|_| rng.random_range(-3.0..3.0)).collect();
        let interior: Vec<f64> = grid.interior_nodes().map(|(i, j)| f3[j * nx + i]).collect();
        if interior.iter().any(|&v| v < 0.0) && interior.iter().any(|&v| v > 0.0) {
            break f3;
        }
    };
    let coef = CoefficientFields2D::from_values(grid, f1, f2, f3).expect("valid fields");
    build_stencil_2d(&coef).expect("valid stencil")
}

/// Every 1D problem the acceptance criteria sweep over.
pub fn suite_1d() -> Vec<LineProblem> {
    let mut suite = Vec::new();

    let grid = Grid1D::from_extent(-3.0, 3.0, 7).unwrap();
    suite.push(line("coarse parabola", tri_from(grid, vec![1.0; 6], vec![-2.0; 7])));

    let grid = Grid1D::from_extent(-3.0, 3.0, 601).unwrap();
    suite.push(line("fine parabola", tri_from(grid, vec![1.0; 600], vec![-2.0; 601])));

    // The pocket's test value at node 1 is exactly zero: the free boundary
    // sits on a node and must not be claimed.
    let grid = Grid1D::new(7, 0.0, 1.0).unwrap();
    let c = vec![0.0, 0.5, 0.5, -2.0, 0.5, 0.5, 0.0];
    suite.push(line(
        "free boundary on a node",
        Tridiag1D::from_parts(grid, vec![1.0; 7], vec![1.0; 7], c).unwrap(),
    ));

    // Two wells separated by a strongly positive barrier stay two pockets.
    let grid = Grid1D::new(9, 0.0, 1.0).unwrap();
    let c = vec![0.0, 4.0, -3.0, 4.0, 4.0, -3.0, 4.0, 4.0, 0.0];
    suite.push(line(
        "two separated wells",
        Tridiag1D::from_parts(grid, vec![1.0; 9], vec![1.0; 9], c).unwrap(),
    ));

    // A positive-source node held up by strong wells on both sides.
    let grid = Grid1D::new(9, 0.0, 1.0).unwrap();
    let c = vec![0.0, 0.1, -20.0, 0.1, 10.0, 0.1, -20.0, 0.1, 0.0];
    suite.push(line(
        "node supported from both sides",
        Tridiag1D::from_parts(grid, vec![1.0; 9], vec![1.0; 9], c).unwrap(),
    ));

    // Gently graded couplings with a sign-mixed source.
    let n = 201;
    let grid = Grid1D::new(n, 0.0, 0.05).unwrap();
    let f1: Vec<f64> = (0..n - 1).map(|i| 0.98f64.powi(i as i32)).collect();
    let f3: Vec<f64> =
        (0..n).map(|i| if (60..140).contains(&i) { -2.0 } else { 2.0 }).collect();
    suite.push(line("graded couplings", tri_from(grid, f1, f3)));

    suite.push(line("periodic wells", bench::well_family(10_001)));

    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED1D);
    for k in 0..20 {
        let n = rng.random_range(5..=60);
        let dx = rng.random_range(0.05..0.25);
        let grid = Grid1D::new(n, 0.0, dx).unwrap();
        let f1: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.2..5.0)).collect();
        let f3: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        suite.push(line(&format!("random mix {k:02}"), tri_from(grid, f1, f3)));
    }

    suite
}

/// Every 2D problem the acceptance criteria sweep over.
pub fn suite_2d() -> Vec<RectProblem> {
    let mut suite = Vec::new();

    let grid = Grid2D::from_extent(0.0, 1.0, 6, 0.0, 0.8, 5).unwrap();
    let coef = CoefficientFields2D::constant(grid, 1.0, 1.0, -1.0).unwrap();
    suite.push(RectProblem {
        name: "full film 6x5".into(),
        coeffs: build_stencil_2d(&coef).unwrap(),
    });

    let grid = Grid2D::from_extent(0.0, 1.0, 6, 0.0, 1.0, 6).unwrap();
    let mut f3 = vec![0.0; 36];
    f3[3 * 6 + 2] = -4.0;
    let coef =
        CoefficientFields2D::from_values(grid, vec![1.0; 30], vec![1.0; 30], f3).unwrap();
    suite.push(RectProblem {
        name: "single hot node 6x6".into(),
        coeffs: build_stencil_2d(&coef).unwrap(),
    });

    let grid = Grid2D::from_extent(0.0, 1.0, 5, 0.0, 0.75, 4).unwrap();
    let f3: Vec<f64> = (0..20)
        .map(|k| if (k % 5 + k / 5) % 2 == 0 { -3.0 } else { 2.0 })
        .collect();
    let coef =
        CoefficientFields2D::from_values(grid, vec![1.0; 16], vec![1.0; 15], f3).unwrap();
    suite.push(RectProblem {
        name: "checkered sources 5x4".into(),
        coeffs: build_stencil_2d(&coef).unwrap(),
    });

    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED2D);
    for k in 0..10 {
        suite.push(RectProblem {
            name: format!("random rect {k:02}"),
            coeffs: random_small_rect(&mut rng),
        });
    }

    suite
}
