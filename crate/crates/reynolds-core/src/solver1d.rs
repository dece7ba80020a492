//! Direct O(N) solver for 1D complementarity problems.
//!
//! Away from the unknown free boundaries the pressure satisfies the
//! tridiagonal recurrence, so every solution of the interior equations is a
//! combination of three sequences: two homogeneous solutions seeded at the
//! first two nodes and one particular solution,
//!
//! ```text
//!     p(i) = m(i) * p(0) + n(i) * p(1) + c(i).
//! ```
//!
//! Pinning the pressure to zero at two anchor nodes therefore costs a 2x2
//! solve, after which the pressure at any node between the anchors is a dot
//! product — no elimination needed.  The solver uses this to locate the
//! positive regions:
//!
//! 1. every maximal run of nodes with a negative source must be positive in
//!    the solution, and seeds one [`Segment`];
//! 2. each segment is grown: with anchors just outside the segment, the
//!    pressure the candidate node *would* take is evaluated, and the node is
//!    claimed when that value is positive (a positive test under the
//!    pessimistic zero anchor certifies the node, by the discrete minimum
//!    principle).  Growth alternates between sweep directions until neither
//!    moves; segments that touch are merged;
//! 3. a stalemate is checked against the complementarity conditions: a
//!    pinned node whose stencil candidate is positive can happen when a node
//!    needs support from both of its sides at once, which no one-sided test
//!    can see.  Such nodes are certified active (the constrained solution is
//!    a pointwise lower bound for the true one), seeded as fresh segments,
//!    and the growth loop re-enters.  At termination the conditions hold by
//!    construction.
//!
//! The superposition columns exist in two forms.  The global form
//! ([`compute_basis`] / [`eval_segment`]) seeds at the first two nodes and
//! answers any anchored query in O(1); it is ideal for studying small
//! problems but its columns grow with the grid — they can overflow outright
//! on skewed couplings, and on long grids the anchored 2x2 solve cancels
//! catastrophically.  The production solver therefore runs its growth tests
//! on the re-anchored form: the same recurrence with fresh seeds at each
//! segment's left anchor, carried as a rolling pair of values and rescaled
//! on the fly, which neither overflows nor cancels.  Final pressures are
//! recomputed per segment with the Thomas algorithm rather than taken from
//! superposition values at all.

use crate::discretize::Tridiag1D;
use crate::error::{Error, Result};
use crate::field::PressureField1D;
use crate::grid::Grid1D;
use crate::linalg::solve_tridiagonal;
use crate::solver2d::{SolveOptions, SolveReport};

/// Basis columns beyond this magnitude abort [`compute_basis`].
const BASIS_LIMIT: f64 = 1e150;

/// Rolling-pair evaluator values are renormalized past this magnitude.
const RESCALE_LIMIT: f64 = 1e140;

/// The three superposition columns; `p(i) = m(i) p(0) + n(i) p(1) + c(i)`
/// satisfies the interior equations for any boundary pair `(p(0), p(1))`.
#[derive(Debug, Clone)]
pub struct SuperpositionBasis {
    pub m: Vec<f64>,
    pub n: Vec<f64>,
    pub c: Vec<f64>,
}

impl SuperpositionBasis {
    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }
}

/// Run the three-column recurrence across the whole grid.
///
/// Fails with [`Error::BasisOverflow`] when any column leaves `±1e150`;
/// callers should then switch to segment-local evaluation (which
/// [`solve_fast_1d`] does automatically).
pub fn compute_basis(tri: &Tridiag1D) -> Result<SuperpositionBasis> {
    let n_nodes = tri.grid().n_nodes();
    let mut m = vec![0.0; n_nodes];
    let mut n = vec![0.0; n_nodes];
    let mut c = vec![0.0; n_nodes];
    m[0] = 1.0;
    n[1] = 1.0;

    for i in tri.grid().interior() {
        let (a, b, src) = (tri.a(i), tri.b(i), tri.c(i));
        let s = a + b;
        m[i + 1] = (s * m[i] - a * m[i - 1]) / b;
        n[i + 1] = (s * n[i] - a * n[i - 1]) / b;
        c[i + 1] = (s * c[i] - a * c[i - 1] + src) / b;
        let bad = |v: f64| !v.is_finite() || v.abs() > BASIS_LIMIT;
        if bad(m[i + 1]) || bad(n[i + 1]) || bad(c[i + 1]) {
            return Err(Error::BasisOverflow { node: i + 1 });
        }
    }
    Ok(SuperpositionBasis { m, n, c })
}

/// Pressure at `query` of the solution that is pinned to zero at `left` and
/// `right` and satisfies the interior equations strictly between them.
///
/// Requires `left < query < right`.  Fails with
/// [`Error::DegenerateAnchor`] when the 2x2 anchor system cannot be solved
/// to working precision.
pub fn eval_segment(
    basis: &SuperpositionBasis,
    left: usize,
    right: usize,
    query: usize,
) -> Result<f64> {
    if !(left < query && query < right && right < basis.len()) {
        return Err(Error::Domain(format!(
            "anchors and query must satisfy left < query < right < {}, got ({left}, {query}, {right})",
            basis.len()
        )));
    }
    let (ma, na, ca) = (basis.m[left], basis.n[left], basis.c[left]);
    let (mb, nb, cb) = (basis.m[right], basis.n[right], basis.c[right]);
    let det = ma * nb - mb * na;
    let scale = (ma * nb).abs() + (mb * na).abs();
    if !det.is_finite() || det.abs() <= scale * 1e-13 {
        return Err(Error::DegenerateAnchor { left, right });
    }
    let p0 = (cb * na - ca * nb) / det;
    let p1 = (ca * mb - cb * ma) / det;
    Ok(basis.m[query] * p0 + basis.n[query] * p1 + basis.c[query])
}

/// A maximal run of nodes asserted positive, `start..=end`, both interior.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
}

impl Segment {
    // No `is_empty`: the inclusive range makes a segment nonempty by
    // construction.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }
}

/// Sorted, disjoint segments with at least one pinned node between any two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentList {
    segments: Vec<Segment>,
}

impl SegmentList {
    /// Validate and wrap a list of segments for the given grid.
    pub fn new(grid: Grid1D, segments: Vec<Segment>) -> Result<Self> {
        let last = grid.n_nodes() - 2;
        for (k, s) in segments.iter().enumerate() {
            if s.start > s.end || s.start < 1 || s.end > last {
                return Err(Error::Domain(format!(
                    "segment {k} [{}, {}] is not a valid interior run",
                    s.start, s.end
                )));
            }
            if k > 0 && segments[k - 1].end + 2 > s.start {
                return Err(Error::Domain(format!(
                    "segments {} and {k} must be separated by a pinned node",
                    k - 1
                )));
            }
        }
        Ok(Self { segments })
    }

    fn from_sorted(segments: Vec<Segment>) -> Self {
        debug_assert!(segments.windows(2).all(|w| w[0].end + 2 <= w[1].start));
        Self { segments }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Total number of covered nodes.
    pub fn covered(&self) -> usize {
        self.segments.iter().map(Segment::len).sum()
    }

    pub fn contains(&self, node: usize) -> bool {
        self.segments.iter().any(|s| s.start <= node && node <= s.end)
    }
}

/// Seed segments: the maximal runs of interior nodes with a strictly
/// negative source.  Any solution must be positive on these runs — a pinned
/// node there would violate its slack condition outright.
pub fn initial_segments(tri: &Tridiag1D) -> SegmentList {
    let grid = tri.grid();
    let mut segments = Vec::new();
    let mut open: Option<Segment> = None;
    for i in grid.interior() {
        if tri.c(i) < 0.0 {
            match open.as_mut() {
                Some(s) => s.end = i,
                None => open = Some(Segment { start: i, end: i }),
            }
        } else if let Some(s) = open.take() {
            segments.push(s);
        }
    }
    if let Some(s) = open {
        segments.push(s);
    }
    SegmentList::from_sorted(segments)
}

/// Segment-edge test evaluator: pressure the candidate node would take.
trait EdgeEval {
    /// Value at `cand` of the solution pinned to zero at `start - 1` and
    /// `cand + 1` with the equations enforced on `start..=cand`.
    fn pressure_at(&mut self, tri: &Tridiag1D, start: usize, cand: usize) -> Result<f64>;
}

struct GlobalEval<'a> {
    basis: &'a SuperpositionBasis,
}

impl EdgeEval for GlobalEval<'_> {
    fn pressure_at(&mut self, _tri: &Tridiag1D, start: usize, cand: usize) -> Result<f64> {
        eval_segment(self.basis, start - 1, cand + 1, cand)
    }
}

/// Overflow-proof fallback evaluator.
///
/// Keeps only the frontier pair of a homogeneous column `w` (zero at the
/// left anchor, one at the next node) and a particular column `v` (zero at
/// both), advancing them with the same recurrence as the global basis.  The
/// candidate value is `v(cand) - v(cand+1) * w(cand) / w(cand+1)`, which is
/// invariant under rescaling `w` and under subtracting multiples of `w`
/// from `v` — exactly the two renormalizations applied when the pair grows
/// past `1e140`.  `w` stays strictly positive and increasing for positive
/// couplings, so the division is safe.
struct LocalEval {
    anchor: usize,
    hi: usize,
    w: (f64, f64),
    v: (f64, f64),
}

impl LocalEval {
    fn new() -> Self {
        Self { anchor: usize::MAX, hi: 0, w: (0.0, 1.0), v: (0.0, 0.0) }
    }
}

impl EdgeEval for LocalEval {
    // `!(w > 0)` instead of `w <= 0`: a NaN column must fail too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    fn pressure_at(&mut self, tri: &Tridiag1D, start: usize, cand: usize) -> Result<f64> {
        let anchor = start - 1;
        if self.anchor != anchor || self.hi > cand + 1 {
            self.anchor = anchor;
            self.hi = anchor + 1;
            self.w = (0.0, 1.0);
            self.v = (0.0, 0.0);
        }
        while self.hi < cand + 1 {
            // Step the pair from (hi-1, hi) to (hi, hi+1) via the equation
            // at node hi.
            let i = self.hi;
            let (a, b, src) = (tri.a(i), tri.b(i), tri.c(i));
            let s = a + b;
            let w_next = (s * self.w.1 - a * self.w.0) / b;
            let v_next = (s * self.v.1 - a * self.v.0 + src) / b;
            if !w_next.is_finite() || !v_next.is_finite() {
                return Err(Error::BasisOverflow { node: i + 1 });
            }
            self.w = (self.w.1, w_next);
            self.v = (self.v.1, v_next);
            self.hi += 1;

            if self.w.1.abs() > RESCALE_LIMIT || self.v.1.abs() > RESCALE_LIMIT {
                // Re-anchor v against w, then normalize w.
                let g = self.v.1 / self.w.1;
                self.v.0 -= g * self.w.0;
                self.v.1 = 0.0;
                let s = 1.0 / self.w.1;
                self.w.0 *= s;
                self.w.1 = 1.0;
            }
        }
        if !(self.w.1 > 0.0) {
            return Err(Error::Internal(format!(
                "homogeneous column lost positivity at node {}",
                self.hi
            )));
        }
        Ok(self.v.0 - self.v.1 * self.w.0 / self.w.1)
    }
}

/// Mirror segments through the node relabeling `i -> n-1-i`.
fn reverse_segments(segments: &[Segment], n_nodes: usize) -> Vec<Segment> {
    segments
        .iter()
        .rev()
        .map(|s| Segment { start: n_nodes - 1 - s.end, end: n_nodes - 1 - s.start })
        .collect()
}

/// One left-to-right growth pass.  Each segment's end is pushed right while
/// the candidate test stays positive; segments that become adjacent merge.
fn forward_pass<E: EdgeEval>(
    tri: &Tridiag1D,
    eval: &mut E,
    segments: Vec<Segment>,
    moves: &mut usize,
    budget: usize,
) -> Result<(Vec<Segment>, bool)> {
    let last = tri.grid().n_nodes() - 2;
    let mut out: Vec<Segment> = Vec::with_capacity(segments.len());
    let mut moved = false;
    let mut it = segments.into_iter().peekable();

    while let Some(mut cur) = it.next() {
        loop {
            if let Some(next) = it.peek() {
                if cur.end + 1 >= next.start {
                    // Adjacent runs are one segment.
                    cur.end = cur.end.max(next.end);
                    it.next();
                    moved = true;
                    bump(moves, budget)?;
                    continue;
                }
            }
            if cur.end >= last {
                break;
            }
            let cand = cur.end + 1;
            let p = eval.pressure_at(tri, cur.start, cand)?;
            if p > 0.0 {
                cur.end = cand;
                moved = true;
                bump(moves, budget)?;
            } else {
                // Zero counts as pinned: a node exactly on the free
                // boundary satisfies its slack condition with equality.
                break;
            }
        }
        out.push(cur);
    }
    Ok((out, moved))
}

fn bump(moves: &mut usize, budget: usize) -> Result<()> {
    *moves += 1;
    if *moves > budget {
        return Err(Error::Internal(format!(
            "segment expansion exceeded its move budget of {budget}"
        )));
    }
    Ok(())
}

/// Solve the interior equations on each segment with zero anchors.
fn assemble(tri: &Tridiag1D, segments: &[Segment]) -> Result<Vec<f64>> {
    let mut p = vec![0.0; tri.grid().n_nodes()];
    for s in segments {
        let span = s.len();
        let mut sub = vec![0.0; span];
        let mut diag = vec![0.0; span];
        let mut sup = vec![0.0; span];
        let mut rhs = vec![0.0; span];
        for (r, i) in (s.start..=s.end).enumerate() {
            // a p(i-1) + b p(i+1) - (a+b) p(i) = c, negated for a positive
            // diagonal; the anchor terms vanish.
            diag[r] = tri.a(i) + tri.b(i);
            if r > 0 {
                sub[r] = -tri.a(i);
            }
            if r + 1 < span {
                sup[r] = -tri.b(i);
            }
            rhs[r] = -tri.c(i);
        }
        let x = solve_tridiagonal(&sub, &diag, &sup, &rhs)?;
        p[s.start..=s.end].copy_from_slice(&x);
    }
    Ok(p)
}

/// Pinned interior nodes whose stencil candidate is positive beyond
/// rounding noise.
fn slack_violations(tri: &Tridiag1D, p: &[f64], segments: &[Segment]) -> Vec<usize> {
    let grid = tri.grid();
    let scale = p.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-12 * (1.0 + scale);
    let mut out = Vec::new();
    let mut cursor = 0usize;
    for i in grid.interior() {
        while cursor < segments.len() && segments[cursor].end < i {
            cursor += 1;
        }
        if cursor < segments.len() && segments[cursor].start <= i {
            continue;
        }
        let candidate = (tri.a(i) * p[i - 1] + tri.b(i) * p[i + 1] - tri.c(i)) / (tri.a(i) + tri.b(i));
        if candidate > tol {
            out.push(i);
        }
    }
    out
}

/// Insert single-node seeds and re-establish the separation invariant.
fn merge_seeds(mut segments: Vec<Segment>, seeds: &[usize]) -> Vec<Segment> {
    segments.extend(seeds.iter().map(|&i| Segment { start: i, end: i }));
    segments.sort_unstable_by_key(|s| s.start);
    let mut out: Vec<Segment> = Vec::with_capacity(segments.len());
    for s in segments {
        match out.last_mut() {
            Some(prev) if prev.end + 1 >= s.start => prev.end = prev.end.max(s.end),
            _ => out.push(s),
        }
    }
    out
}

fn expand_impl<EF: EdgeEval, EB: EdgeEval>(
    tri: &Tridiag1D,
    rev_tri: &Tridiag1D,
    fwd: &mut EF,
    bwd: &mut EB,
    mut segments: Vec<Segment>,
) -> Result<Vec<Segment>> {
    let n_nodes = tri.grid().n_nodes();
    let budget = 4 * n_nodes + 16;
    let mut moves = 0usize;
    let mut rounds = 0usize;

    loop {
        // Every round but the last performs at least one counted move, so
        // this guard is strictly weaker than the move budget; it only
        // protects against a bookkeeping bug.
        rounds += 1;
        if rounds > budget + 8 {
            return Err(Error::Internal("segment expansion failed to stabilize".into()));
        }
        let (grown, moved_f) = forward_pass(tri, fwd, segments, &mut moves, budget)?;
        let mirrored = reverse_segments(&grown, n_nodes);
        let (grown_rev, moved_b) = forward_pass(rev_tri, bwd, mirrored, &mut moves, budget)?;
        segments = reverse_segments(&grown_rev, n_nodes);

        if moved_f || moved_b {
            continue;
        }

        // Stalemate: certify, or seed the nodes the one-sided tests missed.
        let p = assemble(tri, &segments)?;
        let missed = slack_violations(tri, &p, &segments);
        if missed.is_empty() {
            return Ok(segments);
        }
        for _ in &missed {
            bump(&mut moves, budget)?;
        }
        segments = merge_seeds(segments, &missed);
    }
}

/// Grow and merge segments until the complementarity conditions hold,
/// testing candidates through the global basis columns.
///
/// `basis` must come from [`compute_basis`] on the same problem.  Fails
/// with [`Error::BasisOverflow`] / [`Error::DegenerateAnchor`] when the
/// basis is unusable.  Intended for studying small problems;
/// [`solve_fast_1d`] runs the same expansion on the re-anchored evaluator,
/// which stays accurate at any grid size.
pub fn expand_segments(
    tri: &Tridiag1D,
    basis: &SuperpositionBasis,
    initial: &SegmentList,
) -> Result<SegmentList> {
    if basis.len() != tri.grid().n_nodes() {
        return Err(Error::Domain(format!(
            "basis covers {} nodes but the grid has {}",
            basis.len(),
            tri.grid().n_nodes()
        )));
    }
    let rev_tri = tri.reversed();
    let rev_basis = compute_basis(&rev_tri)?;
    let mut fwd = GlobalEval { basis };
    let mut bwd = GlobalEval { basis: &rev_basis };
    let segments =
        expand_impl(tri, &rev_tri, &mut fwd, &mut bwd, initial.segments().to_vec())?;
    Ok(SegmentList::from_sorted(segments))
}

/// Solve the 1D complementarity problem by segment expansion.
///
/// Runs in O(N) per growth round.  Growth tests use the re-anchored
/// (segment-local) form of the superposition recurrence rather than the
/// global columns: globally seeded columns grow with the grid, and by a few
/// hundred thousand nodes expressing a small anchored span through them
/// cancels more digits than the tests have — wrongly claimed nodes can
/// never be un-claimed, so the tests must stay trustworthy at any size.
/// The local form is algebraically the same superposition with fresh seeds
/// at each segment's anchor, is immune to both the cancellation and the
/// overflow failure modes, and costs the same O(1) per test.
///
/// The returned pressures are recomputed per segment by the Thomas
/// algorithm, so they satisfy the segment equations to elimination accuracy
/// regardless of how the growth tests were evaluated.
pub fn solve_fast_1d(tri: &Tridiag1D) -> Result<(PressureField1D, SegmentList)> {
    let initial = initial_segments(tri);
    let rev_tri = tri.reversed();
    let mut fwd = LocalEval::new();
    let mut bwd = LocalEval::new();
    let segments =
        expand_impl(tri, &rev_tri, &mut fwd, &mut bwd, initial.segments().to_vec())?;

    let mut values = assemble(tri, &segments)?;
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if values.iter().any(|&v| v < -1e-9 * (1.0 + scale)) {
        // Growth only ever claims nodes certified positive, so a genuinely
        // negative assembled value means the invariants were broken.
        return Err(Error::Internal(
            "assembled segment solution turned negative".into(),
        ));
    }
    for v in values.iter_mut() {
        // Elimination noise can leave a boundary-touching node a hair below
        // zero; the complementarity residual stays accountable either way.
        *v = v.max(0.0);
    }
    let field = PressureField1D::from_values(tri.grid(), values)?;
    Ok((field, SegmentList::from_sorted(segments)))
}

/// Projected SOR on the tridiagonal problem, starting from zero pressure.
///
/// The 1D counterpart of [`crate::solver2d::solve_projected`]; same
/// options, same report semantics.
pub fn solve_sor_1d(tri: &Tridiag1D, opts: &SolveOptions) -> Result<(PressureField1D, SolveReport)> {
    opts.validate()?;
    let grid = tri.grid();
    let n = grid.n_nodes();
    let mut p = vec![0.0f64; n];
    let mut before: Vec<f64> = Vec::new();

    let mut history = opts.record_history.then(Vec::new);
    let mut shrink_events = 0usize;
    let mut iterations = 0usize;
    let mut final_change = f64::INFINITY;
    let mut converged = false;

    while iterations < opts.max_iter {
        let mut max_change = 0.0f64;
        if opts.per_node_clamp {
            for i in 1..n - 1 {
                let (a, b, c) = (tri.a(i), tri.b(i), tri.c(i));
                let candidate = (a * p[i - 1] + b * p[i + 1] - c) / (a + b);
                let old = p[i];
                let new = ((1.0 - opts.omega) * old + opts.omega * candidate).max(0.0);
                if new == 0.0 && old > 0.0 {
                    shrink_events += 1;
                }
                max_change = max_change.max((new - old).abs());
                p[i] = new;
            }
        } else {
            before.clear();
            before.extend_from_slice(&p);
            for i in 1..n - 1 {
                let (a, b, c) = (tri.a(i), tri.b(i), tri.c(i));
                let candidate = (a * p[i - 1] + b * p[i + 1] - c) / (a + b);
                p[i] = (1.0 - opts.omega) * p[i] + opts.omega * candidate;
            }
            for i in 1..n - 1 {
                let new = p[i].max(0.0);
                if new == 0.0 && before[i] > 0.0 {
                    shrink_events += 1;
                }
                max_change = max_change.max((new - before[i]).abs());
                p[i] = new;
            }
        }
        iterations += 1;
        final_change = max_change;
        if let Some(h) = history.as_mut() {
            h.push(p.iter().filter(|&&v| v > 0.0).count());
        }
        if max_change < opts.tol {
            converged = true;
            break;
        }
    }

    let field = PressureField1D::from_values(grid, p)?;
    let report = SolveReport {
        iterations,
        final_change,
        converged,
        active_history: history,
        active_shrink_events: shrink_events,
    };
    Ok((field, report))
}

/// 1D complementarity residuals in pressure units; see
/// [`crate::solver2d::complementarity_residual`].
pub fn complementarity_residual_1d(tri: &Tridiag1D, p: &PressureField1D) -> Result<(f64, f64)> {
    if tri.grid() != p.grid() {
        return Err(Error::GridMismatch(
            "pressure field and stencil live on different grids".into(),
        ));
    }
    let grid = tri.grid();
    let values = p.values();
    for (i, &v) in values.iter().enumerate() {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::Domain(format!(
                "pressure at node {i} must be finite and nonnegative, got {v}"
            )));
        }
        if v != 0.0 && !grid.is_interior(i) {
            return Err(Error::Domain(format!(
                "pressure must vanish on the boundary, node {i} is {v}"
            )));
        }
    }

    let mut eq = 0.0f64;
    let mut slack = 0.0f64;
    for i in grid.interior() {
        let candidate =
            (tri.a(i) * values[i - 1] + tri.b(i) * values[i + 1] - tri.c(i)) / (tri.a(i) + tri.b(i));
        if values[i] > 0.0 {
            eq = eq.max((candidate - values[i]).abs());
        } else {
            slack = slack.max(candidate);
        }
    }
    Ok((eq, slack.max(0.0)))
}
