//! Empirical estimates of the modulus of convexity
//! `δ(ε) = inf { 1 - ||x+y||/2 : x, y in the unit ball, ||x-y|| ≥ ε }`.
//!
//! Every estimate is an infimum over a subset of the feasible pairs, hence an
//! upper estimate of the true modulus.

use std::sync::Arc;

use crate::convexity::{MocMethod, MocResult};
use crate::error::{Error, Result};
use crate::gls::GlSpace;
use crate::measure::{MeasurePartition, SimpleFunction};
use crate::optimize::{bisect, scalar_extremize, Domain, Mode, OptConfig};
use crate::sampling::{random_sphere_pair, trial_rng, SamplerConfig};
use crate::scalar::{abs_pow, Scalar};

/// Space whose modulus is estimated.
#[derive(Debug, Clone, Copy)]
pub enum MocTarget<'a, T: Scalar> {
    Lp(T),
    Gls(&'a GlSpace<T>),
}

impl<T: Scalar> MocTarget<'_, T> {
    pub fn norm(&self, f: &SimpleFunction<T>) -> T {
        match self {
            MocTarget::Lp(p) => f.profile().lp_norm(*p),
            MocTarget::Gls(space) => space.norm(f).value,
        }
    }

    fn label_p(&self) -> T {
        match self {
            MocTarget::Lp(p) => *p,
            MocTarget::Gls(_) => T::nan(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Random {
        trials: usize,
        seed: u64,
    },
    /// Two-cell configurations on masses `(w, 1 - w)`; `L_p` only.
    TwoAtomDirected,
}

/// Estimate plus the pair that realizes it.
#[derive(Debug, Clone)]
pub struct EmpiricalMoc<T: Scalar> {
    pub result: MocResult<T>,
    pub feasible: usize,
    pub rejected: usize,
    /// `||x - y||` of the minimizing pair.
    pub distance: T,
    pub minimizer: Option<(SimpleFunction<T>, SimpleFunction<T>)>,
}

pub fn empirical_moc<T: Scalar>(
    target: MocTarget<'_, T>,
    eps: T,
    strategy: Strategy,
    sampler: &SamplerConfig,
) -> Result<EmpiricalMoc<T>> {
    check_eps(eps)?;
    match strategy {
        Strategy::Random { trials, seed } => {
            random_sweep(target, &[eps], trials, seed, sampler).pop().expect("one epsilon requested")
        }
        Strategy::TwoAtomDirected => match target {
            MocTarget::Lp(p) => two_atom_directed(p, eps),
            MocTarget::Gls(_) => Err(Error::Unsupported("two-atom directed search is defined for L_p only".into())),
        },
    }
}

fn check_eps<T: Scalar>(eps: T) -> Result<()> {
    if eps >= T::zero() && eps <= T::lit(2.0) {
        Ok(())
    } else {
        Err(Error::BadEpsilon(eps.as_f64()))
    }
}

struct Candidate<T: Scalar> {
    distance: T,
    value: T,
    x: SimpleFunction<T>,
    y: SimpleFunction<T>,
}

/// Random sphere pairs shared across an ε grid.
///
/// Each trial contributes the candidates `(x, y)`, `(x, -y)` and `(x, x)`;
/// a trial is rejected for a given ε when none of them reaches distance ε.
pub fn random_sweep<T: Scalar>(
    target: MocTarget<'_, T>,
    eps_grid: &[T],
    trials: usize,
    seed: u64,
    sampler: &SamplerConfig,
) -> Vec<Result<EmpiricalMoc<T>>> {
    let mut best: Vec<Option<Candidate<T>>> = eps_grid.iter().map(|_| None).collect();
    let mut feasible = vec![0usize; eps_grid.len()];
    let mut rejected = vec![0usize; eps_grid.len()];
    let norm = |f: &SimpleFunction<T>| target.norm(f);
    let two = T::lit(2.0);
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial as u64);
        let (x, y) = random_sphere_pair(&mut rng, sampler, norm);
        let sum = x.add(&y).expect("shared partition");
        let diff = x.sub(&y).expect("shared partition");
        let n_sum = norm(&sum);
        let n_diff = norm(&diff);
        let n_x = norm(&x);
        // Reflection y ↦ -y swaps the roles of the sum and the difference.
        let candidates = [
            (n_diff, T::one() - n_sum / two, false, false),
            (n_sum, T::one() - n_diff / two, true, false),
            (T::zero(), T::one() - n_x, false, true),
        ];
        for (i, &eps) in eps_grid.iter().enumerate() {
            let mut any = false;
            for &(distance, value, reflected, degenerate) in &candidates {
                if distance < eps {
                    continue;
                }
                any = true;
                if best[i].as_ref().is_none_or(|b| value < b.value) {
                    let y_used = if degenerate {
                        x.clone()
                    } else if reflected {
                        y.neg()
                    } else {
                        y.clone()
                    };
                    best[i] = Some(Candidate { distance, value, x: x.clone(), y: y_used });
                }
            }
            if any {
                feasible[i] += 1;
            } else {
                rejected[i] += 1;
            }
        }
    }
    eps_grid
        .iter()
        .enumerate()
        .map(|(i, &eps)| {
            check_eps(eps)?;
            let cand = best[i].take().ok_or(Error::Infeasible { eps: eps.as_f64() })?;
            Ok(EmpiricalMoc {
                result: MocResult {
                    epsilon: eps,
                    p: target.label_p(),
                    delta: cand.value.max(T::zero()).min(T::one()),
                    method: MocMethod::EmpiricalRandom,
                    iterations: trials,
                    residual: T::zero(),
                },
                feasible: feasible[i],
                rejected: rejected[i],
                distance: cand.distance,
                minimizer: Some((cand.x, cand.y)),
            })
        })
        .collect()
}

/// Point of the unit sphere of `L_p` on masses `(w, 1-w)` at angle `s`.
fn sphere_point<T: Scalar>(w: T, p: T, s: T) -> (T, T) {
    let e = T::lit(2.0) / p;
    let (sn, c) = s.sin_cos();
    let cx = c.signum() * abs_pow(c, e);
    let sx = sn.signum() * abs_pow(sn, e);
    (cx * (-(w.ln()) / p).exp(), sx * (-((T::one() - w).ln()) / p).exp())
}

fn two_cell_norm<T: Scalar>(w: T, p: T, u: (T, T)) -> T {
    let s = w * abs_pow(u.0, p) + (T::one() - w) * abs_pow(u.1, p);
    if s.is_zero() {
        T::zero()
    } else {
        (s.ln() / p).exp()
    }
}

struct TwoAtomBest<T> {
    value: T,
    w: T,
    s: T,
    t: T,
    distance: T,
}

/// For fixed masses and `x = x(s)`, the smallest `1 - ||x+y||/2` over `y = x(t)`
/// at distance exactly ε, searching both directions from `s`.
fn best_partner<T: Scalar>(w: T, p: T, eps: T, s: T) -> TwoAtomBest<T> {
    let x = sphere_point(w, p, s);
    let pi = T::PI();
    let two = T::lit(2.0);
    let mut out = TwoAtomBest { value: T::infinity(), w, s, t: s, distance: T::nan() };
    for end in [s + pi, s - pi] {
        let gap = |t: T| {
            let y = sphere_point(w, p, t);
            two_cell_norm(w, p, (x.0 - y.0, x.1 - y.1)) - eps
        };
        let (lo, hi) = if end > s { (s, end) } else { (end, s) };
        let Some(root) = bisect(gap, lo, hi, 200) else { continue };
        let y = sphere_point(w, p, root.root);
        let value = T::one() - two_cell_norm(w, p, (x.0 + y.0, x.1 + y.1)) / two;
        if value < out.value {
            out = TwoAtomBest { value, w, s, t: root.root, distance: root.residual + eps };
        }
    }
    out
}

/// Nested search over two-cell sphere pairs: masses `w` (outer), angle of `x`
/// (inner), partner `y` solved by bisection on `||x - y||_p = ε`.
///
/// The family contains `x = (α, β)`, `y = (α, -β)` for every `w` and the swap
/// pair `x = (A, B)`, `y = (B, A)` at `w = 1/2`.
pub fn two_atom_directed<T: Scalar>(p: T, eps: T) -> Result<EmpiricalMoc<T>> {
    check_eps(eps)?;
    if !(p.is_finite() && p > T::one()) {
        return Err(Error::BadExponent(p.as_f64()));
    }
    let inner_cfg = OptConfig { grid_size: 128, refine_iters: 50, ..OptConfig::default() };
    let outer_cfg = OptConfig { grid_size: 24, refine_iters: 40, ..OptConfig::default() };
    let mut probes = 0usize;
    let inner = |w: T| {
        let r = scalar_extremize(
            |s| best_partner(w, p, eps, s).value,
            Domain::Bounded { lo: T::zero(), hi: T::PI() },
            Mode::Inf,
            &inner_cfg,
        );
        (r.arg_p, r.value, r.probes)
    };
    let margin = T::lit(1e-3);
    let outer =
        scalar_extremize(|w| inner(w).1, Domain::Bounded { lo: margin, hi: T::one() - margin }, Mode::Inf, &outer_cfg);
    probes += outer.probes;
    let (s, _, inner_probes) = inner(outer.arg_p);
    probes += inner_probes;
    let best = best_partner(outer.arg_p, p, eps, s);
    if !best.value.is_finite() {
        return Err(Error::Infeasible { eps: eps.as_f64() });
    }
    let w = best.w;
    let partition = Arc::new(MeasurePartition::new(vec![w, T::one() - w])?);
    let xs = sphere_point(w, p, best.s);
    let ys = sphere_point(w, p, best.t);
    let x = SimpleFunction::new(Arc::clone(&partition), vec![xs.0, xs.1])?;
    let y = SimpleFunction::new(partition, vec![ys.0, ys.1])?;
    Ok(EmpiricalMoc {
        result: MocResult {
            epsilon: eps,
            p,
            delta: best.value.max(T::zero()).min(T::one()),
            method: MocMethod::EmpiricalTwoAtom,
            iterations: probes,
            residual: (best.distance - eps).abs(),
        },
        feasible: 1,
        rejected: 0,
        distance: best.distance,
        minimizer: Some((x, y)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convexity::delta_lp_exact;

    #[test]
    fn sphere_points_have_unit_norm() {
        for &(w, p) in &[(0.3, 1.5), (0.5, 2.0), (0.9, 6.0)] {
            for k in 0..16 {
                let s = k as f64 * 0.4;
                let u = sphere_point(w, p, s);
                assert!((two_cell_norm(w, p, u) - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn zero_epsilon_is_zero() {
        let r = two_atom_directed(3.0f64, 0.0).unwrap();
        assert!(r.result.delta.abs() < 1e-15);
        let r = empirical_moc(
            MocTarget::Lp(2.0f64),
            0.0,
            Strategy::Random { trials: 20, seed: 1 },
            &SamplerConfig::default(),
        )
        .unwrap();
        assert_eq!(r.result.delta, 0.0);
    }

    #[test]
    fn two_atom_matches_closed_form_at_p3() {
        let r = two_atom_directed(3.0f64, 1.0).unwrap();
        let exact = delta_lp_exact(3.0, 1.0).unwrap().delta;
        assert!((r.result.delta - exact).abs() < 1e-9, "{} vs {}", r.result.delta, exact);
        let (x, y) = r.minimizer.unwrap();
        assert!((x.lp_norm(3.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((x.sub(&y).unwrap().lp_norm(3.0).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn random_estimate_is_upper_estimate() {
        let r = empirical_moc(
            MocTarget::Lp(3.0f64),
            1.0,
            Strategy::Random { trials: 200, seed: 5 },
            &SamplerConfig::default(),
        )
        .unwrap();
        assert!(r.result.delta >= delta_lp_exact(3.0, 1.0).unwrap().delta - 1e-9);
        assert_eq!(r.feasible + r.rejected, 200);
    }

    #[test]
    fn gls_target_rejects_two_atom() {
        let space = GlSpace::new(crate::psi::PsiSpec::constant(1.2, 2.0, 1.0).unwrap());
        assert!(matches!(
            empirical_moc(MocTarget::Gls(&space), 1.0, Strategy::TwoAtomDirected, &SamplerConfig::default()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn bad_epsilon() {
        assert!(matches!(two_atom_directed(3.0f64, 2.5), Err(Error::BadEpsilon(_))));
    }
}
