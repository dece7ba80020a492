//! Small direct solvers used by the active-set and segment machinery.
//!
//! Every system assembled in this crate is (weakly) diagonally dominant with
//! a positive diagonal, so the tridiagonal and banded eliminations run
//! without pivoting.  Singularity still has to be detected: an active set
//! can enclose a patch that is completely decoupled from the boundary, and
//! its subsystem is then a discrete Neumann problem with no unique solution.

use crate::error::{Error, Result};

/// Relative pivot floor: a pivot this far below its own row's magnitude is
/// treated as a structural zero.  The comparison is per row — coefficient
/// grids graded over many orders of magnitude produce rows that are tiny
/// yet perfectly well conditioned.
const PIVOT_FLOOR: f64 = 1e-12;

/// Solve a tridiagonal system with the Thomas algorithm.
///
/// Row `i` reads `sub[i] * x[i-1] + diag[i] * x[i] + sup[i] * x[i+1] = rhs[i]`
/// (`sub[0]` and `sup[n-1]` are ignored).
pub(crate) fn solve_tridiagonal(
    sub: &[f64],
    diag: &[f64],
    sup: &[f64],
    rhs: &[f64],
) -> Result<Vec<f64>> {
    let n = diag.len();
    assert!(sub.len() == n && sup.len() == n && rhs.len() == n);
    if n == 0 {
        return Ok(Vec::new());
    }

    let row_scale = |i: usize| {
        let mut s = diag[i].abs();
        if i > 0 {
            s += sub[i].abs();
        }
        if i + 1 < n {
            s += sup[i].abs();
        }
        s
    };

    let mut c_prime = vec![0.0; n];
    let mut d_prime = vec![0.0; n];

    if diag[0].abs() <= row_scale(0) * PIVOT_FLOOR {
        return Err(Error::SingularSystem("zero pivot in tridiagonal solve at row 0".into()));
    }
    c_prime[0] = sup[0] / diag[0];
    d_prime[0] = rhs[0] / diag[0];

    for i in 1..n {
        let denom = diag[i] - sub[i] * c_prime[i - 1];
        if denom.abs() <= row_scale(i) * PIVOT_FLOOR {
            return Err(Error::SingularSystem(format!(
                "zero pivot in tridiagonal solve at row {i}"
            )));
        }
        c_prime[i] = sup[i] / denom;
        d_prime[i] = (rhs[i] - sub[i] * d_prime[i - 1]) / denom;
    }

    let mut x = d_prime;
    for i in (0..n - 1).rev() {
        x[i] -= c_prime[i] * x[i + 1];
    }
    Ok(x)
}

/// Dense storage of a banded matrix: row `r` keeps the entries for columns
/// `r - half_bw ..= r + half_bw` in a strip of width `2 * half_bw + 1`.
pub(crate) struct Banded {
    n: usize,
    half_bw: usize,
    strip: Vec<f64>,
}

impl Banded {
    pub(crate) fn zeros(n: usize, half_bw: usize) -> Self {
        Self { n, half_bw, strip: vec![0.0; n * (2 * half_bw + 1)] }
    }

    #[inline]
    fn pos(&self, r: usize, c: usize) -> usize {
        debug_assert!(r < self.n && c < self.n);
        debug_assert!(c + self.half_bw >= r && c <= r + self.half_bw);
        r * (2 * self.half_bw + 1) + (c + self.half_bw - r)
    }

    pub(crate) fn add(&mut self, r: usize, c: usize, v: f64) {
        let p = self.pos(r, c);
        self.strip[p] += v;
    }

    /// In-place unpivoted elimination; consumes the matrix.
    ///
    /// Only safe for diagonally dominant systems, which is all this crate
    /// ever builds.  Returns the solution of `A x = rhs`.
    pub(crate) fn solve(mut self, mut rhs: Vec<f64>) -> Result<Vec<f64>> {
        let n = self.n;
        assert_eq!(rhs.len(), n);
        let hbw = self.half_bw;
        let width = 2 * hbw + 1;

        let row_scale: Vec<f64> = (0..n)
            .map(|r| self.strip[r * width..(r + 1) * width].iter().map(|v| v.abs()).sum())
            .collect();

        for r in 0..n {
            let pivot = self.strip[r * width + hbw];
            if pivot.abs() <= row_scale[r] * PIVOT_FLOOR {
                return Err(Error::SingularSystem(format!(
                    "zero pivot in banded solve at row {r}"
                )));
            }
            let last = (r + hbw).min(n - 1);
            for below in r + 1..=last {
                let factor = self.strip[self.pos(below, r)] / pivot;
                if factor == 0.0 {
                    continue;
                }
                // Row_below -= factor * Row_r over the overlapping columns.
                for c in r..=last {
                    let v = self.strip[self.pos(r, c)];
                    if v != 0.0 {
                        let p = self.pos(below, c);
                        self.strip[p] -= factor * v;
                    }
                }
                rhs[below] -= factor * rhs[r];
            }
        }

        let mut x = rhs;
        for r in (0..n).rev() {
            let last = (r + hbw).min(n - 1);
            let mut acc = x[r];
            #[allow(clippy::needless_range_loop)]
            for c in r + 1..=last {
                acc -= self.strip[self.pos(r, c)] * x[c];
            }
            x[r] = acc / self.strip[r * width + hbw];
        }
        Ok(x)
    }
}

/// Conjugate gradient with Jacobi preconditioning, for active subsystems too
/// large for the banded direct path.  The assembled matrices are symmetric
/// positive definite whenever they are nonsingular.
pub(crate) struct SparseRows {
    /// Per row: (column, value) pairs, diagonal included.
    pub rows: Vec<Vec<(usize, f64)>>,
}

impl SparseRows {
    fn mul(&self, x: &[f64], out: &mut [f64]) {
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc = 0.0;
            for &(c, v) in row {
                acc += v * x[c];
            }
            out[r] = acc;
        }
    }

    // `!(pap > 0)` instead of `pap <= 0`: a NaN direction must fail too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub(crate) fn solve_cg(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.rows.len();
        assert_eq!(rhs.len(), n);

        let mut inv_diag = vec![0.0; n];
        for (r, row) in self.rows.iter().enumerate() {
            let d = row
                .iter()
                .find(|&&(c, _)| c == r)
                .map(|&(_, v)| v)
                .unwrap_or(0.0);
            if d <= 0.0 {
                return Err(Error::SingularSystem(format!(
                    "nonpositive diagonal {d} at row {r} in iterative solve"
                )));
            }
            inv_diag[r] = 1.0 / d;
        }

        let norm_b = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm_b == 0.0 {
            return Ok(vec![0.0; n]);
        }
        let target = norm_b * 1e-14;

        let mut x = vec![0.0; n];
        let mut r: Vec<f64> = rhs.to_vec();
        let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(a, d)| a * d).collect();
        let mut p = z.clone();
        let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let mut ap = vec![0.0; n];

        let max_iter = 40 * n + 200;
        for _ in 0..max_iter {
            self.mul(&p, &mut ap);
            let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
            if !(pap > 0.0) {
                return Err(Error::SingularSystem(
                    "iterative solve met a nonpositive curvature direction".into(),
                ));
            }
            let alpha = rz / pap;
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            let norm_r = r.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm_r <= target {
                return Ok(x);
            }
            for i in 0..n {
                z[i] = r[i] * inv_diag[i];
            }
            let rz_next: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
            let beta = rz_next / rz;
            rz = rz_next;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
        Err(Error::SingularSystem(
            "iterative active-set solve failed to reach rounding accuracy".into(),
        ))
    }
}
