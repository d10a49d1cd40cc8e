//! Grand Lebesgue norm `sup_p ||f||_p / ψ(p)` and the auxiliary functionals
//! κ (squared ratio infimum) and θ (power-weighted ratio infimum).

use crate::measure::{NormProfile, SimpleFunction};
use crate::optimize::{scalar_extremize, Domain, Mode, OptConfig, ScalarOptResult};
use crate::psi::PsiSpec;
use crate::scalar::Scalar;

/// A Grand Lebesgue space: generating function plus optimizer settings.
#[derive(Debug, Clone)]
pub struct GlSpace<T: Scalar> {
    psi: PsiSpec<T>,
    config: OptConfig<T>,
}

/// Value of κ or θ together with degeneracy flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalResult<T> {
    pub opt: ScalarOptResult<T>,
    /// The infimum is 0 although the argument is nonzero, so the theorem
    /// bound built on it collapses to the plain triangle inequality.
    pub vacuous: bool,
    /// The interval lies outside the range where the functional feeds a theorem.
    pub outside_theorem_range: bool,
}

impl<T> FunctionalResult<T> {
    pub fn value(&self) -> T
    where
        T: Copy,
    {
        self.opt.value
    }
}

impl<T: Scalar> GlSpace<T> {
    pub fn new(psi: PsiSpec<T>) -> Self {
        Self { psi, config: OptConfig::default() }
    }

    pub fn with_config(psi: PsiSpec<T>, config: OptConfig<T>) -> Self {
        Self { psi, config }
    }

    pub fn psi(&self) -> &PsiSpec<T> {
        &self.psi
    }

    pub fn config(&self) -> &OptConfig<T> {
        &self.config
    }

    pub fn a(&self) -> T {
        self.psi.a()
    }

    pub fn b(&self) -> T {
        self.psi.b()
    }

    fn domain(&self, tail: T) -> Domain<T> {
        if self.psi.is_bounded() {
            Domain::Bounded { lo: self.a(), hi: self.b() }
        } else {
            Domain::UpperUnbounded { lo: self.a(), tail }
        }
    }

    /// `ln(||f||_p / ψ(p))` on the closed interval; `-∞` where ψ diverges.
    fn ln_ratio(&self, profile: &NormProfile<T>, p: T) -> T {
        let ln_psi = self.psi.ln_eval_closure(p);
        if ln_psi.is_infinite() {
            return T::neg_infinity();
        }
        profile.ln_lp_norm(p) - ln_psi
    }

    /// `lim_{p→∞} ||f||_p / ψ(p)`, only meaningful for `b = ∞`.
    fn tail_ratio(&self, profile: &NormProfile<T>) -> T {
        let limit = self.psi.limit_at_b();
        if limit.is_infinite() {
            T::zero()
        } else {
            profile.ess_sup() / limit
        }
    }

    /// `||f||_{Gψ} = sup_{p∈(a,b)} ||f||_p / ψ(p)`.
    pub fn norm(&self, f: &SimpleFunction<T>) -> ScalarOptResult<T> {
        let profile = f.profile();
        if profile.is_zero() {
            return exact(T::zero(), self.a());
        }
        if let Some(r) = self.psi.extremal_exponent() {
            return exact(profile.lp_norm(r), r);
        }
        let tail = if self.psi.is_bounded() { T::zero() } else { self.tail_ratio(&profile) };
        scalar_extremize(|p| self.ln_ratio(&profile, p).exp(), self.domain(tail), Mode::Sup, &self.config)
    }

    /// `κ(u) = inf_p ||u||_p² / ψ(p)²`.
    pub fn kappa(&self, u: &SimpleFunction<T>) -> FunctionalResult<T> {
        let profile = u.profile();
        let outside_theorem_range = !(self.a() > T::one() && self.b() <= T::lit(2.0));
        if profile.is_zero() {
            return FunctionalResult { opt: exact(T::zero(), self.a()), vacuous: false, outside_theorem_range };
        }
        let two = T::lit(2.0);
        let tail = if self.psi.is_bounded() { T::zero() } else { self.tail_ratio(&profile).powi(2) };
        let opt =
            scalar_extremize(|p| (two * self.ln_ratio(&profile, p)).exp(), self.domain(tail), Mode::Inf, &self.config);
        FunctionalResult { opt, vacuous: opt.value <= T::zero(), outside_theorem_range }
    }

    /// `θ(u) = inf_p ||u||_p^p / (p 2^p ψ(p)^p)`, evaluated in log space.
    pub fn theta(&self, u: &SimpleFunction<T>) -> FunctionalResult<T> {
        let profile = u.profile();
        let outside_theorem_range = !(self.a() > T::lit(2.0) && self.b().is_finite());
        if profile.is_zero() {
            return FunctionalResult { opt: exact(T::zero(), self.a()), vacuous: false, outside_theorem_range };
        }
        let ln2 = T::LN_2();
        let tail = if self.psi.is_bounded() {
            T::zero()
        } else {
            let half_ratio = self.tail_ratio(&profile) / T::lit(2.0);
            if half_ratio > T::one() {
                T::infinity()
            } else {
                T::zero()
            }
        };
        let objective = |p: T| (p * (self.ln_ratio(&profile, p) - ln2) - p.ln()).exp();
        let opt = scalar_extremize(objective, self.domain(tail), Mode::Inf, &self.config);
        FunctionalResult { opt, vacuous: opt.value <= T::zero(), outside_theorem_range }
    }
}

fn exact<T: Scalar>(value: T, arg_p: T) -> ScalarOptResult<T> {
    ScalarOptResult { value, arg_p, converged: true, probes: 0, tail_dominated: false }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn two_step() -> SimpleFunction<f64> {
        SimpleFunction::from_atoms(&[(0.5, 2.0), (0.5, 0.0)]).unwrap()
    }

    #[test]
    fn zero_function() {
        let space = GlSpace::new(PsiSpec::constant(1.0, 2.0, 1.0).unwrap());
        let z = SimpleFunction::from_atoms(&[(1.0, 0.0)]).unwrap();
        assert_eq!(space.norm(&z).value, 0.0);
        assert_eq!(space.kappa(&z).value(), 0.0);
        assert!(!space.kappa(&z).vacuous);
        assert_eq!(space.theta(&z).value(), 0.0);
    }

    #[test]
    fn constant_psi_takes_endpoint_limit() {
        let space = GlSpace::new(PsiSpec::constant(1.0, 2.0, 1.0).unwrap());
        let r = space.norm(&two_step());
        assert_relative_eq!(r.value, std::f64::consts::SQRT_2, max_relative = 1e-14);
        assert_eq!(r.arg_p, 2.0);
    }

    #[test]
    fn natural_psi_gives_unit_norm() {
        let f = SimpleFunction::from_atoms(&[(0.2, -3.0), (0.5, 0.5), (0.3, 7.0)]).unwrap();
        for (a, b) in [(1.0, 2.0), (1.5, 9.0), (1.0, f64::INFINITY)] {
            let space = GlSpace::new(PsiSpec::natural(&f, a, b).unwrap());
            assert_relative_eq!(space.norm(&f).value, 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn extremal_norm_is_lr_norm() {
        let f = SimpleFunction::from_atoms(&[(0.25, 1.0), (0.75, -5.0)]).unwrap();
        let space = GlSpace::new(PsiSpec::extremal(1.0, 6.0, 3.0).unwrap());
        assert_eq!(space.norm(&f).value, f.lp_norm(3.0).unwrap());
        assert_eq!(space.kappa(&f).value(), 0.0);
    }

    #[test]
    fn kappa_two_step_limit() {
        // ||u||_p² = 2^{2 - 2/p}, increasing in p, inf at p → 1.2.
        let space = GlSpace::new(PsiSpec::constant(1.2, 2.0, 1.0).unwrap());
        let k = space.kappa(&two_step());
        assert_relative_eq!(k.value(), 2f64.powf(2.0 - 2.0 / 1.2), max_relative = 1e-13);
        assert_relative_eq!(k.value(), 2f64.cbrt(), max_relative = 1e-13);
        assert_eq!(k.opt.arg_p, 1.2);
        assert!(!k.vacuous && !k.outside_theorem_range);
    }

    #[test]
    fn theta_constant_one() {
        let one = SimpleFunction::from_atoms(&[(1.0, 1.0)]).unwrap();
        let space = GlSpace::new(PsiSpec::constant(2.5, 8.0, 1.0).unwrap());
        let t = space.theta(&one);
        assert_relative_eq!(t.value(), 1.0 / 2048.0, max_relative = 1e-13);
        assert_eq!(t.opt.arg_p, 8.0);
        assert!(!t.outside_theorem_range);
    }

    #[test]
    fn singular_psi_makes_kappa_vacuous() {
        let space = GlSpace::new(PsiSpec::endpoint_singular(1.2, 2.0, 1.0, 0.5).unwrap());
        let k = space.kappa(&two_step());
        assert_eq!(k.value(), 0.0);
        assert!(k.vacuous);
    }

    #[test]
    fn range_flags() {
        let space = GlSpace::new(PsiSpec::constant(2.5, 8.0, 1.0).unwrap());
        assert!(space.kappa(&two_step()).outside_theorem_range);
        let space = GlSpace::new(PsiSpec::constant(1.2, 2.0, 1.0).unwrap());
        assert!(space.theta(&two_step()).outside_theorem_range);
    }

    #[test]
    fn subgaussian_tail_is_zero() {
        let space = GlSpace::new(PsiSpec::power_root(1.0, f64::INFINITY, 2.0).unwrap());
        let r = space.norm(&two_step());
        assert!(!r.tail_dominated);
        // 2^{1-1/p}/√p peaks in the interior of (1, ∞).
        assert!(r.arg_p > 1.0 && r.arg_p.is_finite());
    }

    #[test]
    fn constant_psi_unbounded_is_tail_dominated() {
        let space = GlSpace::new(PsiSpec::constant(1.0, f64::INFINITY, 1.0).unwrap());
        let r = space.norm(&two_step());
        assert!(r.tail_dominated);
        assert_eq!(r.value, 2.0);
    }
}
