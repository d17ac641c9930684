//! Evaluation of `F_{γ,λ}(u, W) = λ ν_γ(E_{γ,λ}(u, W))` for exact 1D BV
//! functions.
//!
//! Cells of `W × W` are bounded by enclosing `u(y) - u(x)` between two
//! affine functions of `D = |x - y|`. The pairs certainly in `E` and the
//! pairs possibly in `E` are then bands `{D ∈ I}` whose kernel mass is
//! known in closed form, so every cell carries a lower and an upper bound
//! on `ν_γ(E ∩ cell)`. Cells with the largest gap are refined first.

mod bounds;
pub mod mc;
pub mod sweep;

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::bvcalc::{Bv1d, OpenSet1D};
use crate::error::{domain, param, Result};
use crate::kernel::Cell;
use bounds::{nu_bounds, DeltaBounds};

pub use mc::f_eval_mc;
pub use sweep::{geometric_grid, lambda_sweep, tail_stats, write_sweep_csv, SweepResult, SweepRow, TailStats};

/// Value of `F_{γ,λ}` with a two-sided error bound.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FunctionalEstimate {
    pub value: f64,
    pub error_bound: f64,
    pub cells_inside: u64,
    pub cells_boundary: u64,
    pub depth_max: u32,
    /// False when the tolerance was not reached within the depth or cell
    /// budget; `error_bound` is still valid.
    pub converged: bool,
}

/// Verdict of [`classify_cell`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CellClass {
    Inside,
    Outside,
    Boundary,
}

/// Stopping rule for [`f_eval_with`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Tolerance {
    Absolute(f64),
    /// Relative to the running value estimate.
    Relative(f64),
}

/// Evaluation options.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub tol: Tolerance,
    pub max_depth: u32,
    pub max_cells: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self { tol: Tolerance::Relative(1e-4), max_depth: 40, max_cells: 8_000_000 }
    }
}

fn check(gamma: f64, lambda: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return param(format!("gamma must be positive, got {gamma}"));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return param(format!("lambda must be positive, got {lambda}"));
    }
    Ok(())
}

/// `|u(x) - u(y)| > λ|x - y|^{1+γ}`.
pub fn superlevel_indicator(u: &Bv1d, gamma: f64, lambda: f64, x: f64, y: f64) -> Result<bool> {
    check(gamma, lambda)?;
    if !u.domain().closure_contains(x) || !u.domain().closure_contains(y) {
        return domain(format!("({x}, {y}) outside the domain"));
    }
    if x == y {
        return Ok(false);
    }
    Ok((u.value(x) - u.value(y)).abs() > lambda * (x - y).abs().powf(1.0 + gamma))
}

/// Rigorous classification of a cell against `E_{γ,λ}`.
pub fn classify_cell(u: &Bv1d, gamma: f64, lambda: f64, cell: &Cell) -> Result<CellClass> {
    check(gamma, lambda)?;
    let db = DeltaBounds::for_cell(u, cell);
    let (lo, hi) = nu_bounds(cell, &db, gamma, lambda);
    let whole = crate::kernel::nu_cell(cell, gamma);
    Ok(if hi == 0.0 && outside(&db, gamma, lambda) {
        CellClass::Outside
    } else if lo >= whole && inside(&db, gamma, lambda) {
        CellClass::Inside
    } else {
        CellClass::Boundary
    })
}

fn inside(db: &DeltaBounds, gamma: f64, lambda: f64) -> bool {
    let full = |iv: Option<(f64, f64)>| iv.is_some_and(|(a, b)| a <= db.d_min && b >= db.d_max);
    full(bounds::positive_interval(db.s_lo, db.m_lo, lambda, gamma, db.d_min, db.d_max))
        || full(bounds::positive_interval(-db.s_hi, -db.m_hi, lambda, gamma, db.d_min, db.d_max))
}

fn outside(db: &DeltaBounds, gamma: f64, lambda: f64) -> bool {
    bounds::positive_interval(db.s_hi, db.m_hi, lambda, gamma, db.d_min, db.d_max).is_none()
        && bounds::positive_interval(-db.s_lo, -db.m_lo, lambda, gamma, db.d_min, db.d_max).is_none()
}

/// `F_{γ,λ}(u, W)` to absolute tolerance `tol`.
pub fn f_eval(u: &Bv1d, w: &OpenSet1D, gamma: f64, lambda: f64, tol: f64) -> Result<FunctionalEstimate> {
    if !(tol > 0.0) {
        return param(format!("tolerance must be positive, got {tol}"));
    }
    f_eval_with(u, w, gamma, lambda, &EvalOptions { tol: Tolerance::Absolute(tol), ..Default::default() })
}

#[derive(Clone, Copy)]
struct Node {
    cell: Cell,
    diagonal: bool,
    weight: f64,
    lower: f64,
    upper: f64,
    depth: u32,
    seq: u64,
}

impl Node {
    fn unc(&self) -> f64 {
        self.weight * (self.upper - self.lower)
    }
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.unc().total_cmp(&other.unc()).then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Neumaier compensated sum.
#[derive(Default, Clone, Copy)]
struct Sum {
    s: f64,
    c: f64,
}

impl Sum {
    fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    fn get(&self) -> f64 {
        self.s + self.c
    }
}

struct Quadtree<'a> {
    u: &'a Bv1d,
    gamma: f64,
    lambda: f64,
    heap: BinaryHeap<Node>,
    frozen: Vec<Node>,
    resolved: Sum,
    pending_lower: f64,
    pending_unc: f64,
    seq: u64,
    inside: u64,
    created: u64,
    depth_max: u32,
}

impl<'a> Quadtree<'a> {
    fn push(&mut self, cell: Cell, diagonal: bool, weight: f64, depth: u32) {
        let db = if diagonal {
            DeltaBounds::diagonal(self.u, cell.x.0, cell.x.1)
        } else {
            DeltaBounds::off_diagonal(self.u, cell.x.0, cell.x.1, cell.y.0, cell.y.1)
        };
        let (lower, upper) = nu_bounds(&cell, &db, self.gamma, self.lambda);
        self.created += 1;
        self.depth_max = self.depth_max.max(depth);
        if upper <= lower {
            if lower > 0.0 {
                self.inside += 1;
            }
            self.resolved.add(weight * lower);
            return;
        }
        let node = Node { cell, diagonal, weight, lower, upper, depth, seq: self.seq };
        self.seq += 1;
        self.pending_lower += weight * lower;
        self.pending_unc += node.unc();
        self.heap.push(node);
    }

    fn value(&self) -> f64 {
        self.lambda * (self.resolved.get() + self.pending_lower + 0.5 * self.pending_unc)
    }

    fn error(&self) -> f64 {
        0.5 * self.lambda * self.pending_unc
    }

    fn split(&mut self, n: Node) {
        let (a, b) = n.cell.x;
        let (c, d) = n.cell.y;
        let d1 = n.depth + 1;
        if n.diagonal {
            let pts = split_points(self.u, a, b);
            for i in 0..pts.len() - 1 {
                let xi = (pts[i], pts[i + 1]);
                self.push(Cell { x: xi, y: xi }, true, n.weight, d1);
                for j in i + 1..pts.len() - 1 {
                    self.push(Cell { x: xi, y: (pts[j], pts[j + 1]) }, false, 2.0 * n.weight, d1);
                }
            }
            return;
        }
        let (mx, my) = (self.u.cantor_mass(a, b), self.u.cantor_mass(c, d));
        let (mx, my) = (mx.0 + mx.1, my.0 + my.1);
        let split_x = if mx > 0.0 || my > 0.0 { mx >= my } else { b - a >= d - c };
        if split_x {
            let pts = split_points(self.u, a, b);
            for w in pts.windows(2) {
                self.push(Cell { x: (w[0], w[1]), y: (c, d) }, false, n.weight, d1);
            }
        } else {
            let pts = split_points(self.u, c, d);
            for w in pts.windows(2) {
                self.push(Cell { x: (a, b), y: (w[0], w[1]) }, false, n.weight, d1);
            }
        }
    }

    fn splittable(n: &Node, max_depth: u32) -> bool {
        let (a, b) = n.cell.x;
        let (c, d) = n.cell.y;
        let w = (b - a).max(d - c);
        n.depth < max_depth && w > 1e-14 * (1.0 + a.abs().max(d.abs()))
    }
}

/// `F_{γ,λ}(u, W)` with explicit options.
pub fn f_eval_with(u: &Bv1d, w: &OpenSet1D, gamma: f64, lambda: f64, opts: &EvalOptions) -> Result<FunctionalEstimate> {
    check(gamma, lambda)?;
    w.require_subset_of(u.domain())?;
    let wt = u.working_domain(w)?;
    let mut cuts: Vec<f64> = wt.intervals().iter().flat_map(|&(a, b)| [a, b]).collect();
    cuts.extend(u.breakpoints().into_iter().filter(|&x| wt.contains(x)));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let elems: Vec<(f64, f64)> = cuts
        .windows(2)
        .map(|p| (p[0], p[1]))
        .filter(|&(a, b)| wt.contains(0.5 * (a + b)))
        .collect();

    let mut qt = Quadtree {
        u,
        gamma,
        lambda,
        heap: BinaryHeap::new(),
        frozen: Vec::new(),
        resolved: Sum::default(),
        pending_lower: 0.0,
        pending_unc: 0.0,
        seq: 0,
        inside: 0,
        created: 0,
        depth_max: 0,
    };
    for (i, &(a, b)) in elems.iter().enumerate() {
        qt.push(Cell { x: (a, b), y: (a, b) }, true, 1.0, 0);
        for &(c, d) in &elems[i + 1..] {
            qt.push(Cell { x: (a, b), y: (c, d) }, false, 2.0, 0);
        }
    }

    let target = |qt: &Quadtree| match opts.tol {
        Tolerance::Absolute(t) => t,
        Tolerance::Relative(r) => (r * qt.value()).max(1e-13),
    };
    let mut steps = 0u64;
    while qt.error() > target(&qt) && qt.created < opts.max_cells {
        let Some(n) = qt.heap.pop() else { break };
        qt.pending_lower -= n.weight * n.lower;
        qt.pending_unc -= n.unc();
        if Quadtree::splittable(&n, opts.max_depth) {
            qt.split(n);
        } else {
            qt.frozen.push(n);
        }
        steps += 1;
        // periodically clear drift in the running sums
        if steps.is_multiple_of(65_536) {
            let (l, e) = tally(qt.heap.iter().chain(qt.frozen.iter()));
            qt.pending_lower = l;
            qt.pending_unc = e;
        }
    }
    // exact final tally in a fixed order
    let mut rest: Vec<Node> = qt.heap.drain().chain(qt.frozen.drain(..)).collect();
    rest.sort_by_key(|n| n.seq);
    let (l, e) = tally(rest.iter());
    qt.pending_lower = l;
    qt.pending_unc = e;
    let error_bound = qt.error();
    let value = qt.value();
    let converged = error_bound <= target(&qt);
    Ok(FunctionalEstimate {
        value,
        error_bound,
        cells_inside: qt.inside,
        cells_boundary: rest.len() as u64,
        depth_max: qt.depth_max,
        converged,
    })
}

/// Subdivision of `[p, q]`: at the largest Cantor gap meeting the interval
/// when it carries Cantor mass, so that gap cells become exact; otherwise at
/// the midpoint.
fn split_points(u: &Bv1d, p: f64, q: f64) -> Vec<f64> {
    let mut best: Option<(f64, f64)> = None;
    let mut best_mass = 0.0;
    for k in u.cantor_components() {
        let m = k.measure(p, q).abs();
        if m > best_mass {
            best_mass = m;
            best = k.largest_gap(p, q);
        }
    }
    let mut pts = vec![p];
    if let Some((g0, g1)) = best {
        for g in [g0, g1] {
            if p < g && g < q {
                pts.push(g);
            }
        }
    }
    if pts.len() == 1 {
        pts.push(0.5 * (p + q));
    }
    pts.push(q);
    pts
}

fn tally<'n>(nodes: impl Iterator<Item = &'n Node>) -> (f64, f64) {
    let (mut l, mut e) = (Sum::default(), Sum::default());
    for n in nodes {
        l.add(n.weight * n.lower);
        e.add(n.unc());
    }
    (l.get(), e.get())
}

/// Default evaluation: relative tolerance `1e-4`.
pub fn f_eval_default(u: &Bv1d, w: &OpenSet1D, gamma: f64, lambda: f64) -> Result<FunctionalEstimate> {
    f_eval_with(u, w, gamma, lambda, &EvalOptions::default())
}
