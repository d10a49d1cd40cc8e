//! One-dimensional search over an exponent interval.
//!
//! Every supremum and infimum over `p` in the crate goes through
//! [`scalar_extremize`]: a deterministic grid scan followed by golden-section
//! refinement of the best bracket. Root finding for the implicit modulus
//! equation uses [`bisect`].

use crate::scalar::Scalar;

/// Whether to maximize or minimize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sup,
    Inf,
}

/// Search interval. Objectives are evaluated on the closure of a bounded
/// interval; the caller supplies one-sided limits through the objective itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain<T> {
    Bounded {
        lo: T,
        hi: T,
    },
    /// `(lo, ∞)`: probed on a log-spaced grid up to `OptConfig::p_max`, then
    /// compared against `tail`, the limit of the objective as `p → ∞`.
    UpperUnbounded {
        lo: T,
        tail: T,
    },
}

impl<T: Scalar> Domain<T> {
    pub fn lo(&self) -> T {
        match *self {
            Domain::Bounded { lo, .. } | Domain::UpperUnbounded { lo, .. } => lo,
        }
    }
}

/// Grid layout for bounded domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Spacing {
    #[default]
    Uniform,
    /// Uniform grid plus offsets `10^{-12} .. 1` (relative) above `lo`.
    DenseNearLo,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptConfig<T> {
    pub grid_size: usize,
    pub refine_iters: usize,
    /// Largest probed exponent when the interval is unbounded above.
    pub p_max: T,
    pub spacing: Spacing,
}

impl<T: Scalar> Default for OptConfig<T> {
    fn default() -> Self {
        Self { grid_size: 512, refine_iters: 60, p_max: T::lit(65536.0), spacing: Spacing::Uniform }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarOptResult<T> {
    pub value: T,
    /// Argument of the extremum; `+∞` when the tail limit wins.
    pub arg_p: T,
    pub converged: bool,
    pub probes: usize,
    pub tail_dominated: bool,
}

/// Relative margin below which two candidate values count as tied; ties keep the smaller `p`.
const TIE_REL: f64 = 1e-12;
/// Final bracket width, relative to the domain span, required for convergence.
const BRACKET_REL: f64 = 1e-10;

/// Grid scan plus golden-section refinement of the best bracket.
pub fn scalar_extremize<T, F>(objective: F, domain: Domain<T>, mode: Mode, config: &OptConfig<T>) -> ScalarOptResult<T>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    let sign = match mode {
        Mode::Sup => T::one(),
        Mode::Inf => -T::one(),
    };
    let score = |p: T| sign * objective(p);
    let grid = build_grid(domain, config);
    let span = grid[grid.len() - 1] - grid[0];

    let mut converged = true;
    let mut probes = 0usize;
    let mut best: Option<(usize, T)> = None;
    for (i, &p) in grid.iter().enumerate() {
        let s = score(p);
        probes += 1;
        if s.is_nan() {
            converged = false;
            continue;
        }
        if best.is_none_or(|(_, b)| better(s, b)) {
            best = Some((i, s));
        }
    }

    let Some((best_i, grid_score)) = best else {
        return ScalarOptResult { value: T::nan(), arg_p: T::nan(), converged: false, probes, tail_dominated: false };
    };
    let mut best_p = grid[best_i];
    let mut best_score = grid_score;

    if grid.len() > 1 && config.refine_iters > 0 {
        let left = grid[best_i.saturating_sub(1)];
        let right = grid[(best_i + 1).min(grid.len() - 1)];
        let refined = golden_max(&score, left, right, config.refine_iters);
        probes += refined.probes;
        if better(refined.score, best_score) {
            best_p = refined.arg;
            best_score = refined.score;
        }
        if refined.width > T::lit(BRACKET_REL) * span {
            converged = false;
        }
    }

    let mut tail_dominated = false;
    if let Domain::UpperUnbounded { tail, .. } = domain {
        let tail_score = sign * tail;
        if better(tail_score, best_score) {
            best_score = tail_score;
            best_p = T::infinity();
            tail_dominated = true;
        }
    }

    ScalarOptResult { value: sign * best_score, arg_p: best_p, converged, probes, tail_dominated }
}

fn better<T: Scalar>(candidate: T, incumbent: T) -> bool {
    if incumbent.is_infinite() || candidate.is_infinite() {
        return candidate > incumbent;
    }
    candidate > incumbent + T::lit(TIE_REL) * incumbent.abs()
}

fn build_grid<T: Scalar>(domain: Domain<T>, config: &OptConfig<T>) -> Vec<T> {
    let n = config.grid_size.max(2);
    let last = T::from_count(n - 1);
    match domain {
        Domain::Bounded { lo, hi } => {
            let width = hi - lo;
            let mut grid: Vec<T> = (0..n).map(|i| lo + width * T::from_count(i) / last).collect();
            grid[n - 1] = hi;
            if config.spacing == Spacing::DenseNearLo {
                let m = (n / 4).max(2);
                let decades = T::lit(12.0);
                let ten = T::lit(10.0);
                grid.extend((0..m).map(|i| {
                    let e = -decades * (T::one() - T::from_count(i) / T::from_count(m - 1));
                    lo + width * ten.powf(e)
                }));
                grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
                grid.dedup();
            }
            grid
        }
        Domain::UpperUnbounded { lo, .. } => {
            let top = config.p_max.max(lo * T::lit(2.0));
            let ratio = (top / lo).ln();
            let mut grid: Vec<T> = (0..n).map(|i| lo * (ratio * T::from_count(i) / last).exp()).collect();
            grid[0] = lo;
            grid[n - 1] = top;
            grid
        }
    }
}

struct Golden<T> {
    arg: T,
    score: T,
    width: T,
    probes: usize,
}

/// Golden-section maximization on `[a, b]`, returning the best probe seen.
fn golden_max<T: Scalar, F: Fn(T) -> T>(f: &F, mut a: T, mut b: T, iters: usize) -> Golden<T> {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut probes = 2;
    let mut best = if fd > fc { (d, fd) } else { (c, fc) };
    for _ in 0..iters {
        // NaN probes drop out of the comparison and shrink towards the other side.
        if fc >= fd || fd.is_nan() {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
            if fc > best.1 || best.1.is_nan() {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
            if fd > best.1 || best.1.is_nan() {
                best = (d, fd);
            }
        }
        probes += 1;
    }
    Golden { arg: best.0, score: best.1, width: b - a, probes }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BisectResult<T> {
    pub root: T,
    pub residual: T,
    pub iterations: usize,
}

/// Bisection on a bracket where `f(lo)` and `f(hi)` do not share a strict sign.
///
/// Stops when the midpoint no longer splits the bracket or after `max_iter`
/// halvings. Returns `None` if the bracket does not straddle a root.
pub fn bisect<T: Scalar, F: Fn(T) -> T>(f: F, mut lo: T, mut hi: T, max_iter: usize) -> Option<BisectResult<T>> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo.is_zero() {
        return Some(BisectResult { root: lo, residual: f_lo, iterations: 0 });
    }
    if f_hi.is_zero() {
        return Some(BisectResult { root: hi, residual: f_hi, iterations: 0 });
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return None;
    }
    let mut iterations = 0;
    while iterations < max_iter {
        let mid = lo + (hi - lo) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let f_mid = f(mid);
        if f_mid.is_zero() {
            return Some(BisectResult { root: mid, residual: f_mid, iterations });
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let f_hi = f(hi);
    let (root, residual) = if f_lo.abs() <= f_hi.abs() { (lo, f_lo) } else { (hi, f_hi) };
    Some(BisectResult { root, residual, iterations })
}
