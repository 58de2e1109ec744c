//! Piecewise adaptive quadrature.
//!
//! Integrands here are smooth between known breakpoints (LoS grid cells,
//! antenna-pattern nulls, power-law saturation radii), so each piece is
//! integrated with adaptive Simpson refinement and pieces are summed.

/// Quadrature tolerances: refinement stops when the local error estimate
/// is below `max(abs, rel * |running total|)` shared across pieces.
#[derive(Debug, Clone, Copy)]
pub struct QuadTol {
    pub rel: f64,
    pub abs: f64,
}

impl Default for QuadTol {
    fn default() -> Self {
        QuadTol {
            rel: 1e-6,
            abs: 1e-10,
        }
    }
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    (fa + 4.0 * fm + fb) * h / 6.0
}

fn adaptive_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let err = left + right - whole;
    if depth == 0 || err.abs() <= 15.0 * eps {
        return left + right + err / 15.0;
    }
    adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)
        + adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)
}

/// Adaptive Simpson integration of `f` over `[a, b]` to absolute
/// tolerance `eps`.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> f64 {
    if a >= b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    adaptive_step(&f, a, b, fa, fm, fb, whole, eps, 48)
}

/// Integrates `f` over consecutive pairs of `edges` (sorted ascending).
///
/// A coarse first pass sizes the per-piece absolute tolerance from the
/// requested relative tolerance.
pub fn integrate_piecewise(f: impl Fn(f64) -> f64, edges: &[f64], tol: QuadTol) -> f64 {
    if edges.len() < 2 {
        return 0.0;
    }
    let mut rough = 0.0;
    for w in edges.windows(2) {
        let m = 0.5 * (w[0] + w[1]);
        rough += simpson(f(w[0]), f(m), f(w[1]), w[1] - w[0]);
    }
    let eps_total = tol.abs.max(tol.rel * rough.abs());
    let eps_piece = eps_total / (edges.len() - 1) as f64;
    let mut total = 0.0;
    for w in edges.windows(2) {
        total += adaptive_simpson(&f, w[0], w[1], eps_piece);
    }
    total
}

/// Builds a sorted, deduplicated edge list for `[lo, hi]` from interior
/// candidate breakpoints (out-of-range candidates are dropped).
pub fn edges_with_breakpoints(lo: f64, hi: f64, candidates: &[f64]) -> Vec<f64> {
    let mut edges = vec![lo];
    let mut inner: Vec<f64> = candidates
        .iter()
        .copied()
        .filter(|&x| x > lo && x < hi)
        .collect();
    inner.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let min_gap = (hi - lo) * 1e-12;
    for x in inner {
        if x - edges.last().unwrap() > min_gap {
            edges.push(x);
        }
    }
    if hi - edges.last().unwrap() > min_gap {
        edges.push(hi);
    } else {
        *edges.last_mut().unwrap() = hi;
    }
    edges
}
