//! Moduli of convexity of `L_p`, the refined triangle inequality, and the
//! weak-convexity bounds for Grand Lebesgue spaces.
//!
//! For `p > 2` the modulus has the closed form `1 - (1 - (ε/2)^p)^{1/p}`; for
//! `p ∈ (1, 2]` it is the root `δ` of
//! `(1 - δ + ε/2)^p + |1 - δ - ε/2|^p = 2`, found by bisection.
//!
//! The two weak-convexity checks verify, for `x, y` in the unit ball of `Gψ`,
//!
//! - interval inside `(1, 2]`: `||x+y|| ≤ 2 - (a-1)/4 · κ(x-y)`;
//! - interval inside `(2, ∞)`: `||x+y|| ≤ 2 - θ(x-y)`.
//!
//! Both results also carry the chain bound `2 - 2 inf_p δ_p(||x-y||_p / ψ(p))`
//! that the bounds are derived from, and the slack of the stronger reading
//! `2 - 2·Δ` with `Δ` equal to the stated coefficient.

use crate::error::{Error, Result};
use crate::gls::GlSpace;
use crate::measure::SimpleFunction;
use crate::optimize::{bisect, scalar_extremize, Domain, Mode, OptConfig};
use crate::scalar::{abs_pow, Scalar};

/// Norms up to `1 + BALL_TOL` count as inside the unit ball.
pub const BALL_TOL: f64 = 1e-12;
/// Slack below `-VIOLATION_TOL` counts as a violation.
pub const VIOLATION_TOL: f64 = 1e-9;
/// Iteration cap for the implicit-equation bisection.
pub const IMPLICIT_MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MocMethod {
    ClosedForm,
    ImplicitRoot,
    EmpiricalRandom,
    EmpiricalTwoAtom,
}

impl MocMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            MocMethod::ClosedForm => "closed_form",
            MocMethod::ImplicitRoot => "implicit_root",
            MocMethod::EmpiricalRandom => "empirical_random",
            MocMethod::EmpiricalTwoAtom => "empirical_two_atom",
        }
    }
}

/// A modulus-of-convexity value `δ(ε)` with provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MocResult<T> {
    pub epsilon: T,
    pub p: T,
    pub delta: T,
    pub method: MocMethod,
    pub iterations: usize,
    /// Root residual for `ImplicitRoot`, achieved distance error for the
    /// two-atom search, zero otherwise.
    pub residual: T,
}

fn check_moc_args<T: Scalar>(p: T, eps: T) -> Result<()> {
    if !(p.is_finite() && p > T::one()) {
        return Err(Error::BadExponent(p.as_f64()));
    }
    if !(eps >= T::zero() && eps <= T::lit(2.0)) {
        return Err(Error::BadEpsilon(eps.as_f64()));
    }
    Ok(())
}

/// `1 - (1 - (ε/2)^p)^{1/p}`, valid as the modulus of `L_p` for `p ≥ 2`.
pub fn delta_lp_closed_form<T: Scalar>(p: T, eps: T) -> Result<T> {
    check_moc_args(p, eps)?;
    let x = abs_pow(eps / T::lit(2.0), p);
    let d = -((-x).ln_1p() / p).exp_m1();
    Ok(d.max(T::zero()).min(T::one()))
}

/// Root of `(1 - δ + ε/2)^p + |1 - δ - ε/2|^p = 2` on `δ ∈ [0, 1]`; the modulus
/// of `L_p` for `p ∈ (1, 2]`. Defined for every `p > 1`.
pub fn delta_lp_implicit<T: Scalar>(p: T, eps: T) -> Result<MocResult<T>> {
    check_moc_args(p, eps)?;
    let half = eps / T::lit(2.0);
    let two = T::lit(2.0);
    let residual = |d: T| abs_pow(T::one() - d + half, p) + abs_pow(T::one() - d - half, p) - two;
    // residual(0) ≥ 0 by convexity of |t|^p, residual(1) = 2 (ε/2)^p - 2 ≤ 0.
    let r = bisect(residual, T::zero(), T::one(), IMPLICIT_MAX_ITER)
        .ok_or_else(|| Error::Unsupported("implicit modulus equation has no bracketed root".into()))?;
    Ok(MocResult {
        epsilon: eps,
        p,
        delta: r.root,
        method: MocMethod::ImplicitRoot,
        iterations: r.iterations,
        residual: r.residual.abs(),
    })
}

/// Exact modulus of convexity of `L_p`, `p > 1`, `ε ∈ [0, 2]`.
pub fn delta_lp_exact<T: Scalar>(p: T, eps: T) -> Result<MocResult<T>> {
    check_moc_args(p, eps)?;
    if p > T::lit(2.0) {
        Ok(MocResult {
            epsilon: eps,
            p,
            delta: delta_lp_closed_form(p, eps)?,
            method: MocMethod::ClosedForm,
            iterations: 0,
            residual: T::zero(),
        })
    } else {
        delta_lp_implicit(p, eps)
    }
}

/// `(p-1) ε² / 8` for `p ∈ (1, 2]`, `ε^p / (p 2^p)` for `p > 2`.
pub fn delta_lp_lower_bound<T: Scalar>(p: T, eps: T) -> Result<T> {
    check_moc_args(p, eps)?;
    if p > T::lit(2.0) {
        Ok(abs_pow(eps / T::lit(2.0), p) / p)
    } else {
        Ok((p - T::one()) / T::lit(8.0) * eps * eps)
    }
}

/// Outcome of the refined triangle inequality `||x+y||_p ≤ 2 - 2 δ_p(||x-y||_p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleCheck<T> {
    pub norm_x: T,
    pub norm_y: T,
    /// `||x - y||_p`, clamped into `[0, 2]`.
    pub diff_norm: T,
    pub sum_norm: T,
    pub delta: T,
    pub slack: T,
}

fn check_ball<T: Scalar>(norm: T) -> Result<()> {
    if norm <= T::one() + T::lit(BALL_TOL) {
        Ok(())
    } else {
        Err(Error::OutsideBall { norm: norm.as_f64() })
    }
}

/// Slack of the refined triangle inequality in `L_p` for `x, y` in the unit ball.
pub fn refined_triangle_check<T: Scalar>(
    x: &SimpleFunction<T>,
    y: &SimpleFunction<T>,
    p: T,
) -> Result<TriangleCheck<T>> {
    if !(p.is_finite() && p > T::one()) {
        return Err(Error::BadExponent(p.as_f64()));
    }
    let norm_x = x.lp_norm(p)?;
    let norm_y = y.lp_norm(p)?;
    check_ball(norm_x)?;
    check_ball(norm_y)?;
    let diff_norm = x.sub(y)?.lp_norm(p)?.min(T::lit(2.0));
    let sum_norm = x.add(y)?.lp_norm(p)?;
    let delta = delta_lp_exact(p, diff_norm)?.delta;
    let slack = T::lit(2.0) - T::lit(2.0) * delta - sum_norm;
    Ok(TriangleCheck { norm_x, norm_y, diff_norm, sum_norm, delta, slack })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WcocKind {
    /// Interval inside `(1, 2]`, functional κ.
    Thm21,
    /// Interval inside `(2, ∞)`, functional θ.
    Thm31,
}

/// Weak characteristic of convexity bound for one pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WcocBound<T> {
    pub kind: WcocKind,
    /// Right-hand side of the checked inequality: `2 - (a-1)/4 · κ` or `2 - θ`.
    pub bound_value: T,
    /// `Δ` with `bound_value = 2 - 2Δ`: `(a-1)/8 · κ` or `θ / 2`.
    pub delta_component: T,
    /// The coefficient as stated for `Δ`: `(a-1)/4 · κ` or `θ`.
    pub stated_delta: T,
    /// κ or θ of `x - y`.
    pub functional_value: T,
    pub arg_p: T,
}

/// Full record of a weak-convexity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WcocCheck<T> {
    pub bound: WcocBound<T>,
    pub norm_x: T,
    pub norm_y: T,
    /// `||x + y||_{Gψ}`.
    pub lhs: T,
    /// `bound_value - lhs`.
    pub slack: T,
    /// `2 - 2 · stated_delta - lhs`; negative values flag a gap between the
    /// stated `Δ` and the checked inequality. Reported, never asserted.
    pub stated_form_slack: T,
    /// `2 - 2 inf_p δ_p(||x-y||_p / ψ(p))`.
    pub chain_bound: T,
    pub chain_slack: T,
    /// The functional vanished for `x ≠ y`.
    pub vacuous: bool,
    pub converged: bool,
}

impl<T: Scalar> WcocCheck<T> {
    pub fn is_violation(&self) -> bool {
        self.slack < -T::lit(VIOLATION_TOL)
    }
}

/// Verifies `||x+y|| ≤ 2 - (a-1)/4 · κ(x-y)` on a space with `1 < a < b ≤ 2`.
pub fn wcoc_bound_thm21<T: Scalar>(
    x: &SimpleFunction<T>,
    y: &SimpleFunction<T>,
    space: &GlSpace<T>,
) -> Result<WcocCheck<T>> {
    let (a, b) = (space.a(), space.b());
    if !(a > T::one() && b <= T::lit(2.0)) {
        return Err(Error::BadInterval { a: a.as_f64(), b: b.as_f64() });
    }
    wcoc_check(x, y, space, WcocKind::Thm21)
}

/// Verifies `||x+y|| ≤ 2 - θ(x-y)` on a space with `2 < a < b < ∞`.
pub fn wcoc_bound_thm31<T: Scalar>(
    x: &SimpleFunction<T>,
    y: &SimpleFunction<T>,
    space: &GlSpace<T>,
) -> Result<WcocCheck<T>> {
    let (a, b) = (space.a(), space.b());
    if !(a > T::lit(2.0) && b.is_finite()) {
        return Err(Error::BadInterval { a: a.as_f64(), b: b.as_f64() });
    }
    wcoc_check(x, y, space, WcocKind::Thm31)
}

fn wcoc_check<T: Scalar>(
    x: &SimpleFunction<T>,
    y: &SimpleFunction<T>,
    space: &GlSpace<T>,
    kind: WcocKind,
) -> Result<WcocCheck<T>> {
    let nx = space.norm(x);
    let ny = space.norm(y);
    check_ball(nx.value)?;
    check_ball(ny.value)?;
    let diff = x.sub(y)?;
    let sum = x.add(y)?;
    let lhs = space.norm(&sum);
    let two = T::lit(2.0);
    let (functional, delta_component, stated_delta) = match kind {
        WcocKind::Thm21 => {
            let k = space.kappa(&diff);
            let coeff = (space.a() - T::one()) / T::lit(4.0);
            (k, coeff * k.value() / two, coeff * k.value())
        }
        WcocKind::Thm31 => {
            let t = space.theta(&diff);
            (t, t.value() / two, t.value())
        }
    };
    let bound_value = two - two * delta_component;
    let chain = chain_infimum(&diff, space);
    let chain_bound = two - two * chain.0;
    Ok(WcocCheck {
        bound: WcocBound {
            kind,
            bound_value,
            delta_component,
            stated_delta,
            functional_value: functional.value(),
            arg_p: functional.opt.arg_p,
        },
        norm_x: nx.value,
        norm_y: ny.value,
        lhs: lhs.value,
        slack: bound_value - lhs.value,
        stated_form_slack: two - two * stated_delta - lhs.value,
        chain_bound,
        chain_slack: chain_bound - lhs.value,
        vacuous: functional.vacuous && !diff.is_zero(),
        converged: nx.converged && ny.converged && lhs.converged && functional.opt.converged && chain.1,
    })
}

/// `inf_p δ_p(min(2, ||u||_p / ψ(p)))` over the closed interval.
fn chain_infimum<T: Scalar>(u: &SimpleFunction<T>, space: &GlSpace<T>) -> (T, bool) {
    if u.is_zero() {
        return (T::zero(), true);
    }
    let profile = u.profile();
    let psi = space.psi();
    let objective = |p: T| {
        let ratio = profile.lp_norm(p) / psi.eval_closure(p);
        if p <= T::one() || ratio.is_nan() {
            return T::zero();
        }
        let eps = ratio.min(T::lit(2.0));
        delta_lp_exact(p, eps).map(|m| m.delta).unwrap_or(T::zero())
    };
    let base = space.config();
    let config = OptConfig { grid_size: (base.grid_size / 4).max(16), refine_iters: base.refine_iters, ..*base };
    let domain = if psi.is_bounded() {
        Domain::Bounded { lo: space.a(), hi: space.b() }
    } else {
        Domain::UpperUnbounded { lo: space.a(), tail: T::zero() }
    };
    let r = scalar_extremize(objective, domain, Mode::Inf, &config);
    (r.value, r.converged)
}

/// Which bounded-ψ example inequality applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExampleKind {
    /// `1 < a < b ≤ 2`: `||x+y|| ≤ 2 - (a-1)/4 · ||x-y||_a² / d²`.
    Lyapunov,
    /// `2 ≤ a < b < ∞`: `||x+y|| ≤ 2 - ||x-y||_a^a / (b 2^b d^b)`, checked as
    /// written and only reported.
    Retained,
}

/// Validated setup for the bounded-ψ examples on a probability space.
#[derive(Debug, Clone)]
pub struct ExampleCheck<'a, T: Scalar> {
    space: &'a GlSpace<T>,
    d: T,
    kind: ExampleKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExampleOutcome<T> {
    pub kind: ExampleKind,
    /// `||x - y||_a`.
    pub diff_norm_a: T,
    pub bound: T,
    pub lhs: T,
    pub slack: T,
    /// Whether a negative slack is an asserted failure (Lyapunov) or only reported.
    pub asserting: bool,
}

impl<'a, T: Scalar> ExampleCheck<'a, T> {
    /// Picks the example from the interval and checks `ψ ≤ d` on the probe grid.
    pub fn new(space: &'a GlSpace<T>, d: T) -> Result<Self> {
        let (a, b) = (space.a(), space.b());
        let kind = if a > T::one() && b <= T::lit(2.0) {
            ExampleKind::Lyapunov
        } else if a >= T::lit(2.0) && b.is_finite() {
            ExampleKind::Retained
        } else {
            return Err(Error::BadInterval { a: a.as_f64(), b: b.as_f64() });
        };
        if !(d.is_finite() && d > T::zero()) {
            return Err(Error::BadPsi(format!("upper bound d = {d} must be finite and positive")));
        }
        let sup = space.psi().probe_sup();
        if sup > d * (T::one() + T::lit(BALL_TOL)) {
            return Err(Error::BadPsi(format!("psi reaches {sup} > d = {d} on the probe grid")));
        }
        Ok(Self { space, d, kind })
    }

    pub fn kind(&self) -> ExampleKind {
        self.kind
    }

    pub fn d(&self) -> T {
        self.d
    }

    pub fn check(&self, x: &SimpleFunction<T>, y: &SimpleFunction<T>) -> Result<ExampleOutcome<T>> {
        if !x.partition().is_probability() {
            return Err(Error::NotProbability(x.partition().total_mass().as_f64()));
        }
        check_ball(self.space.norm(x).value)?;
        check_ball(self.space.norm(y).value)?;
        let a = self.space.a();
        let b = self.space.b();
        let diff_norm_a = x.sub(y)?.lp_norm(a)?;
        let lhs = self.space.norm(&x.add(y)?).value;
        let two = T::lit(2.0);
        let bound = match self.kind {
            ExampleKind::Lyapunov => two - (a - T::one()) / T::lit(4.0) * (diff_norm_a / self.d).powi(2),
            ExampleKind::Retained => {
                let denom_ln = b.ln() + b * T::LN_2() + b * self.d.ln();
                two - (a * diff_norm_a.ln() - denom_ln).exp()
            }
        };
        Ok(ExampleOutcome {
            kind: self.kind,
            diff_norm_a,
            bound,
            lhs,
            slack: bound - lhs,
            asserting: self.kind == ExampleKind::Lyapunov,
        })
    }
}
