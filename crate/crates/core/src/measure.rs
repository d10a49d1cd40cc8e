//! Simple functions on finite weighted partitions and their L_p quantities.
//!
//! A [`MeasurePartition`] is a finite list of cell masses; a
//! [`SimpleFunction`] assigns one real value per cell. Every norm in the crate
//! reduces to weighted power sums over these cells.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{compensated_sum, Scalar};

/// Relative tolerance for the cached total mass.
const MASS_REL_TOL: f64 = 1e-12;
/// Unit-mass gate used by the Lyapunov check.
const PROBABILITY_TOL: f64 = 1e-9;
/// Slack allowed when comparing consecutive norms along a p grid.
const MONOTONE_SLACK: f64 = 1e-12;

/// Finite partition of the underlying measure space, one positive mass per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurePartition<T: Scalar> {
    weights: Vec<T>,
    total_mass: T,
}

impl<T: Scalar> MeasurePartition<T> {
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyPartition);
        }
        for (index, &w) in weights.iter().enumerate() {
            if !(w.is_finite() && w > T::zero()) {
                return Err(Error::BadWeight { index, weight: w.as_f64() });
            }
        }
        let total_mass = compensated_sum(weights.iter().copied());
        debug_assert!({
            let naive: T = weights.iter().copied().sum();
            (naive - total_mass).abs() <= T::lit(MASS_REL_TOL) * total_mass
        });
        Ok(Self { weights, total_mass })
    }

    /// `n` cells of mass `1/n`.
    pub fn uniform(n: usize) -> Result<Self> {
        let w = T::one() / T::from_count(n.max(1));
        Self::new(vec![w; n])
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn total_mass(&self) -> T {
        self.total_mass
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Whether the total mass is 1 within `1e-9`.
    pub fn is_probability(&self) -> bool {
        (self.total_mass - T::one()).abs() <= T::lit(PROBABILITY_TOL)
    }
}

/// Step function: one value per cell of a shared partition.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleFunction<T: Scalar> {
    partition: Arc<MeasurePartition<T>>,
    values: Vec<T>,
}

impl<T: Scalar> SimpleFunction<T> {
    pub fn new(partition: Arc<MeasurePartition<T>>, values: Vec<T>) -> Result<Self> {
        if values.len() != partition.len() {
            return Err(Error::LengthMismatch { expected: partition.len(), got: values.len() });
        }
        for (index, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteValue { index, value: v.as_f64() });
            }
        }
        Ok(Self { partition, values })
    }

    /// Builds a function from `(weight, value)` atoms.
    pub fn from_atoms(atoms: &[(T, T)]) -> Result<Self> {
        let partition = MeasurePartition::new(atoms.iter().map(|a| a.0).collect())?;
        Self::new(Arc::new(partition), atoms.iter().map(|a| a.1).collect())
    }

    pub fn zero(partition: Arc<MeasurePartition<T>>) -> Self {
        let n = partition.len();
        Self { partition, values: vec![T::zero(); n] }
    }

    pub fn partition(&self) -> &Arc<MeasurePartition<T>> {
        &self.partition
    }

    pub fn weights(&self) -> &[T] {
        self.partition.weights()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn atoms(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.weights().iter().copied().zip(self.values.iter().copied())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn scale(&self, c: T) -> Self {
        Self { partition: Arc::clone(&self.partition), values: self.values.iter().map(|&v| c * v).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(-T::one())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(T, T) -> T) -> Result<Self> {
        let same =
            Arc::ptr_eq(&self.partition, &other.partition) || self.partition.weights() == other.partition.weights();
        if !same {
            return Err(Error::PartitionMismatch);
        }
        Ok(Self {
            partition: Arc::clone(&self.partition),
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| op(a, b)).collect(),
        })
    }

    /// `(Σ w_i |v_i|^p)^{1/p}` for finite `p ≥ 1`.
    pub fn lp_norm(&self, p: T) -> Result<T> {
        check_exponent(p)?;
        Ok(self.profile().lp_norm(p))
    }

    /// Maximum of `|v_i|` over cells of positive mass.
    pub fn ess_sup(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Precomputes the log-magnitudes used by repeated norm evaluations.
    pub fn profile(&self) -> NormProfile<T> {
        NormProfile::new(self)
    }

    /// Checks that `p ↦ ||f||_p` is nondecreasing along `p_grid` (Lyapunov's
    /// inequality on a probability space).
    pub fn lyapunov_monotone(&self, p_grid: &[T]) -> Result<LyapunovOutcome<T>> {
        if !self.partition.is_probability() {
            return Err(Error::NotProbability(self.partition.total_mass().as_f64()));
        }
        let mut grid = p_grid.to_vec();
        for &p in &grid {
            check_exponent(p)?;
        }
        grid.sort_by(|a, b| a.partial_cmp(b).expect("finite exponents"));
        let profile = self.profile();
        let slack = T::lit(MONOTONE_SLACK);
        let mut prev: Option<(T, T)> = None;
        for &p in &grid {
            let norm = profile.lp_norm(p);
            if let Some((p0, n0)) = prev {
                if norm < n0 - slack * (T::one() + n0) {
                    return Ok(LyapunovOutcome { monotone: false, first_violation: Some((p0, p)) });
                }
            }
            prev = Some((p, norm));
        }
        Ok(LyapunovOutcome { monotone: true, first_violation: None })
    }

    /// Parses the line-oriented `<weight> <value>` function format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut atoms = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (w, v) = match (fields.next(), fields.next(), fields.next()) {
                (Some(w), Some(v), None) => (w, v),
                _ => return Err(Error::Parse { line: i + 1, msg: "expected `<weight> <value>`".into() }),
            };
            atoms.push((parse_decimal::<T>(w, i + 1)?, parse_decimal::<T>(v, i + 1)?));
        }
        Self::from_atoms(&atoms)
    }

    /// Serializes in the function file format with 17 significant digits.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for (w, v) in self.atoms() {
            let _ = writeln!(out, "{:.16e} {:.16e}", w.as_f64(), v.as_f64());
        }
        out
    }
}

pub(crate) fn parse_decimal<T: Scalar>(field: &str, line: usize) -> Result<T> {
    field
        .parse::<f64>()
        .ok()
        .and_then(T::from_f64)
        .ok_or_else(|| Error::Parse { line, msg: format!("not a decimal number: `{field}`") })
}

fn check_exponent<T: Scalar>(p: T) -> Result<()> {
    if p.is_finite() && p >= T::one() {
        Ok(())
    } else {
        Err(Error::BadExponent(p.as_f64()))
    }
}

/// Result of [`SimpleFunction::lyapunov_monotone`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovOutcome<T> {
    pub monotone: bool,
    /// Consecutive grid exponents `(p_prev, p_next)` where the norm dropped.
    pub first_violation: Option<(T, T)>,
}

/// Cached `ln(|v_i| / max|v|)` for the nonzero cells of a function.
///
/// Evaluating `||f||_p` as `max|v| · (Σ w_i e^{p l_i})^{1/p}` keeps every
/// exponentiated term in `[0, 1]`, so large `p` neither overflows nor loses
/// the dominant cell.
#[derive(Debug, Clone)]
pub struct NormProfile<T: Scalar> {
    weights: Vec<T>,
    log_ratio: Vec<T>,
    ess_sup: T,
    ln_ess_sup: T,
}

impl<T: Scalar> NormProfile<T> {
    fn new(f: &SimpleFunction<T>) -> Self {
        let ess_sup = f.ess_sup();
        let mut weights = Vec::with_capacity(f.values.len());
        let mut log_ratio = Vec::with_capacity(f.values.len());
        if ess_sup > T::zero() {
            for (w, v) in f.atoms() {
                if !v.is_zero() {
                    weights.push(w);
                    log_ratio.push((v.abs() / ess_sup).ln());
                }
            }
        }
        Self { weights, log_ratio, ess_sup, ln_ess_sup: ess_sup.ln() }
    }

    pub fn is_zero(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn ess_sup(&self) -> T {
        self.ess_sup
    }

    fn scaled_power_sum(&self, p: T) -> T {
        compensated_sum(self.weights.iter().zip(&self.log_ratio).map(
            |(&w, &l)| {
                if l.is_zero() {
                    w
                } else {
                    w * (p * l).exp()
                }
            },
        ))
    }

    /// `||f||_p`; no exponent validation.
    pub fn lp_norm(&self, p: T) -> T {
        if self.is_zero() {
            return T::zero();
        }
        self.ess_sup * (self.scaled_power_sum(p).ln() / p).exp()
    }

    /// `ln ||f||_p`, `-∞` for the zero function.
    pub fn ln_lp_norm(&self, p: T) -> T {
        if self.is_zero() {
            return T::neg_infinity();
        }
        self.ln_ess_sup + self.scaled_power_sum(p).ln() / p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn two_step() -> SimpleFunction<f64> {
        SimpleFunction::from_atoms(&[(0.5, 2.0), (0.5, 0.0)]).unwrap()
    }

    #[test]
    fn zero_function_has_zero_norm() {
        let f = SimpleFunction::from_atoms(&[(1.0, 0.0)]).unwrap();
        assert_eq!(f.lp_norm(2.0).unwrap(), 0.0);
        assert_eq!(f.ess_sup(), 0.0);
    }

    #[test]
    fn two_step_norm_matches_closed_form() {
        let f = two_step();
        // (0.5 * 2^p)^{1/p} = 2^{1 - 1/p}
        assert_relative_eq!(f.lp_norm(2.0).unwrap(), std::f64::consts::SQRT_2, max_relative = 1e-15);
        for p in [1.0, 1.5, 3.0, 7.25] {
            assert_relative_eq!(f.lp_norm(p).unwrap(), 2f64.powf(1.0 - 1.0 / p), max_relative = 1e-14);
        }
        assert_eq!(f.ess_sup(), 2.0);
    }

    #[test]
    fn single_atom_of_unit_mass() {
        let f = SimpleFunction::from_atoms(&[(1.0, -3.0)]).unwrap();
        for p in [1.0, 2.0, 9.5] {
            assert_relative_eq!(f.lp_norm(p).unwrap(), 3.0, max_relative = 1e-15);
        }
        assert_eq!(f.ess_sup(), 3.0);
    }

    #[test]
    fn constant_on_unit_mass() {
        let f = SimpleFunction::from_atoms(&[(0.2, 1.0), (0.8, 1.0)]).unwrap();
        assert_eq!(f.ess_sup(), 1.0);
        for p in [1.0, 2.0, 50.0] {
            assert_relative_eq!(f.lp_norm(p).unwrap(), 1.0, max_relative = 1e-15);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(MeasurePartition::<f64>::new(vec![]), Err(Error::EmptyPartition));
        assert!(matches!(MeasurePartition::new(vec![1.0, 0.0]), Err(Error::BadWeight { index: 1, .. })));
        assert!(matches!(SimpleFunction::from_atoms(&[(1.0, f64::NAN)]), Err(Error::NonFiniteValue { index: 0, .. })));
        let f = two_step();
        assert_eq!(f.lp_norm(0.5), Err(Error::BadExponent(0.5)));
        assert!(f.lp_norm(f64::INFINITY).is_err());
    }

    #[test]
    fn lyapunov_checks() {
        let c = SimpleFunction::from_atoms(&[(0.3, 1.0), (0.7, 1.0)]).unwrap();
        assert!(c.lyapunov_monotone(&[1.0, 1.5, 2.0, 4.0]).unwrap().monotone);
        assert!(two_step().lyapunov_monotone(&[3.0, 1.0, 2.0]).unwrap().monotone);
        let heavy = SimpleFunction::from_atoms(&[(1.0, 2.0), (1.0, 0.0)]).unwrap();
        assert_eq!(heavy.lyapunov_monotone(&[1.0, 2.0]), Err(Error::NotProbability(2.0)));
    }

    #[test]
    fn lyapunov_reports_violation_on_heavy_mass() {
        // On mass 2 the norm of a constant decreases in p; bypass the gate through a
        // check on the profile directly.
        let f = SimpleFunction::from_atoms(&[(2.0, 1.0)]).unwrap();
        let prof = f.profile();
        assert!(prof.lp_norm(2.0) < prof.lp_norm(1.0));
    }

    #[test]
    fn arithmetic_requires_common_partition() {
        let f = two_step();
        let g = SimpleFunction::from_atoms(&[(0.25, 1.0), (0.75, 1.0)]).unwrap();
        assert_eq!(f.add(&g), Err(Error::PartitionMismatch));
        let h = SimpleFunction::new(Arc::clone(f.partition()), vec![1.0, -1.0]).unwrap();
        assert_eq!(f.add(&h).unwrap().values(), &[3.0, -1.0]);
        assert_eq!(f.sub(&h).unwrap().values(), &[1.0, 1.0]);
    }

    #[test]
    fn file_format_round_trip_and_comments() {
        let text = "# header\n0.5 2   # trailing\n\n0.5 -0.125\n";
        let f = SimpleFunction::<f64>::parse(text).unwrap();
        assert_eq!(f.values(), &[2.0, -0.125]);
        let g = SimpleFunction::<f64>::parse(&f.to_file_string()).unwrap();
        assert_eq!(f, g);
        assert!(matches!(SimpleFunction::<f64>::parse("0.5"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(SimpleFunction::<f64>::parse("1 2\n0,5 1"), Err(Error::Parse { line: 2, .. })));
        assert_eq!(SimpleFunction::<f64>::parse("# nothing"), Err(Error::EmptyPartition));
    }

    #[test]
    fn large_exponents_do_not_overflow() {
        let f = SimpleFunction::<f64>::from_atoms(&[(0.5, 1e300), (0.5, 3e299)]).unwrap();
        let n: f64 = f.lp_norm(4096.0).unwrap();
        assert!(n.is_finite() && n <= 1e300 && n > 0.99e300);
    }

    #[test]
    fn works_in_single_precision() {
        let f = SimpleFunction::<f32>::from_atoms(&[(0.5, 2.0), (0.5, 0.0)]).unwrap();
        assert!((f.lp_norm(2.0).unwrap() - std::f32::consts::SQRT_2).abs() < 1e-6);
    }
}
