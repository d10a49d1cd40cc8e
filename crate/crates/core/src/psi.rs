//! Generating functions ψ on an exponent interval `(a, b)`.
//!
//! A [`PsiSpec`] pairs an interval with one of the built-in families. The
//! Grand Lebesgue norm divides `||f||_p` by `ψ(p)`, so every family must be
//! strictly positive on the interval; construction validates that on a probe
//! grid.

use std::path::Path;

use crate::error::{Error, Result};
use crate::measure::{parse_decimal, NormProfile, SimpleFunction};
use crate::optimize::{scalar_extremize, Domain, Mode, OptConfig, ScalarOptResult, Spacing};
use crate::scalar::Scalar;

/// Number of interior probes used for positivity validation.
pub const PROBE_POINTS: usize = 1000;
/// Largest probed exponent when `b = ∞`.
const PROBE_P_MAX: f64 = 65536.0;

#[derive(Debug, Clone)]
pub enum PsiKind<T: Scalar> {
    /// `p^{1/m}`.
    PowerRoot {
        m: T,
    },
    /// `(p - a)^{-β1} (b - p)^{-β2}`; requires finite `b`.
    EndpointSingular {
        beta1: T,
        beta2: T,
    },
    /// `1` at `p = r`, `+∞` elsewhere. The space coincides with `L_r`.
    Extremal {
        r: T,
    },
    Constant {
        c: T,
    },
    /// `p ↦ ||f||_p`.
    Natural(NaturalPsi<T>),
    /// Log-linear interpolation through `(p, ψ(p))` nodes, constant beyond the ends.
    Tabulated(Vec<(T, T)>),
}

/// A function together with its cached norm profile.
#[derive(Debug, Clone)]
pub struct NaturalPsi<T: Scalar> {
    function: SimpleFunction<T>,
    profile: NormProfile<T>,
}

impl<T: Scalar> NaturalPsi<T> {
    pub fn function(&self) -> &SimpleFunction<T> {
        &self.function
    }
}

/// Generating function on `(a, b)`; `b` may be `+∞`.
#[derive(Debug, Clone)]
pub struct PsiSpec<T: Scalar> {
    a: T,
    b: T,
    kind: PsiKind<T>,
}

impl<T: Scalar> PsiSpec<T> {
    pub fn new(a: T, b: T, kind: PsiKind<T>) -> Result<Self> {
        if !(a.is_finite() && a >= T::one() && b > a) || b.is_nan() {
            return Err(Error::BadInterval { a: a.as_f64(), b: b.as_f64() });
        }
        let bad = |msg: &str| Err(Error::BadPsi(msg.to_string()));
        match &kind {
            PsiKind::PowerRoot { m } => {
                if !(m.is_finite() && *m > T::zero()) {
                    return bad("power_root needs m > 0");
                }
            }
            PsiKind::EndpointSingular { beta1, beta2 } => {
                if !(beta1.is_finite() && beta2.is_finite() && *beta1 >= T::zero() && *beta2 >= T::zero()) {
                    return bad("endpoint needs beta1, beta2 >= 0");
                }
                if b.is_infinite() {
                    return bad("endpoint family needs a finite upper end b");
                }
            }
            PsiKind::Extremal { r } => {
                if !(r.is_finite() && *r >= T::one() && *r >= a && *r <= b) {
                    return bad("extremal needs a finite r >= 1 inside [a, b]");
                }
            }
            PsiKind::Constant { c } => {
                if !(c.is_finite() && *c > T::zero()) {
                    return bad("const needs c > 0");
                }
            }
            PsiKind::Natural(n) => {
                if n.function.is_zero() {
                    return Err(Error::ZeroFunction);
                }
            }
            PsiKind::Tabulated(table) => {
                if table.is_empty() {
                    return bad("table needs at least one node");
                }
                if table.iter().any(|&(p, v)| !(p.is_finite() && v.is_finite() && v > T::zero())) {
                    return bad("table nodes need finite p and finite positive psi");
                }
                if table.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return bad("table exponents must be strictly increasing");
                }
            }
        }
        let spec = Self { a, b, kind };
        spec.validate_positive()?;
        Ok(spec)
    }

    pub fn power_root(a: T, b: T, m: T) -> Result<Self> {
        Self::new(a, b, PsiKind::PowerRoot { m })
    }

    pub fn endpoint_singular(a: T, b: T, beta1: T, beta2: T) -> Result<Self> {
        Self::new(a, b, PsiKind::EndpointSingular { beta1, beta2 })
    }

    pub fn extremal(a: T, b: T, r: T) -> Result<Self> {
        Self::new(a, b, PsiKind::Extremal { r })
    }

    pub fn constant(a: T, b: T, c: T) -> Result<Self> {
        Self::new(a, b, PsiKind::Constant { c })
    }

    /// Natural generating function `ψ^{(f)}(p) = ||f||_p`; the zero function is rejected.
    pub fn natural(f: &SimpleFunction<T>, a: T, b: T) -> Result<Self> {
        let natural = NaturalPsi { function: f.clone(), profile: f.profile() };
        Self::new(a, b, PsiKind::Natural(natural))
    }

    pub fn tabulated(a: T, b: T, table: Vec<(T, T)>) -> Result<Self> {
        Self::new(a, b, PsiKind::Tabulated(table))
    }

    /// The endpoint family on `(1, b)` compared against `||·||_{b,θ}`:
    /// singular only at `b`, with exponent `θ / b`.
    pub fn matched_to_btheta(b: T, theta: T) -> Result<Self> {
        Self::endpoint_singular(T::one(), b, T::zero(), theta / b)
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn kind(&self) -> &PsiKind<T> {
        &self.kind
    }

    pub fn is_bounded(&self) -> bool {
        self.b.is_finite()
    }

    /// `Some(r)` for the extremal family.
    pub fn extremal_exponent(&self) -> Option<T> {
        match self.kind {
            PsiKind::Extremal { r } => Some(r),
            _ => None,
        }
    }

    /// ψ(p) for `p` in the open interval `(a, b)`.
    pub fn eval(&self, p: T) -> Result<T> {
        if !(p > self.a && p < self.b) {
            return Err(Error::OutsideInterval { p: p.as_f64(), a: self.a.as_f64(), b: self.b.as_f64() });
        }
        Ok(self.eval_closure(p))
    }

    /// One-sided limit of ψ at `a`.
    pub fn limit_at_a(&self) -> T {
        self.eval_closure(self.a)
    }

    /// One-sided limit of ψ at `b` (as `p → ∞` when `b = ∞`).
    pub fn limit_at_b(&self) -> T {
        if self.b.is_finite() {
            return self.eval_closure(self.b);
        }
        match &self.kind {
            PsiKind::PowerRoot { .. } | PsiKind::Extremal { .. } => T::infinity(),
            PsiKind::Constant { c } => *c,
            PsiKind::Natural(n) => n.profile.ess_sup(),
            PsiKind::Tabulated(table) => table[table.len() - 1].1,
            PsiKind::EndpointSingular { .. } => unreachable!("endpoint family has finite b"),
        }
    }

    /// ψ on the closed interval, with endpoint values replaced by one-sided limits.
    pub(crate) fn eval_closure(&self, p: T) -> T {
        match &self.kind {
            PsiKind::PowerRoot { m } => p.powf(T::one() / *m),
            PsiKind::EndpointSingular { beta1, beta2 } => {
                singular_factor(p - self.a, *beta1) * singular_factor(self.b - p, *beta2)
            }
            PsiKind::Extremal { r } => {
                if p == *r {
                    T::one()
                } else {
                    T::infinity()
                }
            }
            PsiKind::Constant { c } => *c,
            PsiKind::Natural(n) => n.profile.lp_norm(p),
            PsiKind::Tabulated(table) => interpolate_log(table, p),
        }
    }

    /// `ln ψ(p)` on the closed interval.
    pub(crate) fn ln_eval_closure(&self, p: T) -> T {
        match &self.kind {
            PsiKind::Natural(n) => n.profile.ln_lp_norm(p),
            PsiKind::PowerRoot { m } => p.ln() / *m,
            _ => self.eval_closure(p).ln(),
        }
    }

    /// Interior probe exponents: uniform for finite `b`, log-spaced up to `2^16` otherwise.
    pub fn probe_grid(&self, n: usize) -> Vec<T> {
        let n = n.max(1);
        let denom = T::from_count(n + 1);
        if self.b.is_finite() {
            let w = self.b - self.a;
            (1..=n).map(|i| self.a + w * T::from_count(i) / denom).collect()
        } else {
            let top = T::lit(PROBE_P_MAX).max(self.a * T::lit(2.0));
            let ratio = (top / self.a).ln();
            (1..=n).map(|i| self.a * (ratio * T::from_count(i) / denom).exp()).collect()
        }
    }

    /// Largest ψ value on the probe grid; the `d` of the bounded-ψ examples.
    pub fn probe_sup(&self) -> T {
        self.probe_grid(PROBE_POINTS).into_iter().map(|p| self.eval_closure(p)).fold(T::zero(), T::max)
    }

    fn validate_positive(&self) -> Result<()> {
        if self.extremal_exponent().is_some() {
            return Ok(());
        }
        let mut inf = T::infinity();
        for p in self.probe_grid(PROBE_POINTS) {
            let v = self.eval_closure(p);
            if !(v.is_finite() && v > T::zero()) {
                return Err(Error::BadPsi(format!("psi({}) = {} is not finite and positive", p, v)));
            }
            inf = inf.min(v);
        }
        if self.b.is_infinite() {
            inf = inf.min(self.limit_at_b());
        }
        if inf > T::zero() {
            Ok(())
        } else {
            Err(Error::BadPsi("infimum of psi over the interval is not positive".into()))
        }
    }

    /// Parses the CLI grammar (`power_root:m=2`, `endpoint:beta1=1,beta2=0.5`,
    /// `const:c=1`, `extremal:r=3`, `natural:file=PATH`, `table:file=PATH`).
    pub fn parse(spec: &str, a: T, b: T) -> Result<Self> {
        let (family, params) = spec.split_once(':').unwrap_or((spec, ""));
        let mut pairs = Vec::new();
        for item in params.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) =
                item.split_once('=').ok_or_else(|| Error::BadPsi(format!("expected key=value, got `{item}`")))?;
            pairs.push((k.trim(), v.trim()));
        }
        let get = |key: &str| -> Result<&str> {
            pairs
                .iter()
                .find(|(k, _)| *k == key)
                .map(|(_, v)| *v)
                .ok_or_else(|| Error::BadPsi(format!("`{family}` needs parameter `{key}`")))
        };
        let num = |key: &str| -> Result<T> {
            let raw = get(key)?;
            raw.parse::<f64>()
                .ok()
                .and_then(T::from_f64)
                .ok_or_else(|| Error::BadPsi(format!("parameter `{key}` is not a number: `{raw}`")))
        };
        match family.trim() {
            "power_root" => Self::power_root(a, b, num("m")?),
            "endpoint" => {
                let beta1 = if pairs.iter().any(|(k, _)| *k == "beta1") { num("beta1")? } else { T::zero() };
                let beta2 = if pairs.iter().any(|(k, _)| *k == "beta2") { num("beta2")? } else { T::zero() };
                Self::endpoint_singular(a, b, beta1, beta2)
            }
            "const" => Self::constant(a, b, num("c")?),
            "extremal" => Self::extremal(a, b, num("r")?),
            "natural" => {
                let text = std::fs::read_to_string(get("file")?)?;
                Self::natural(&SimpleFunction::parse(&text)?, a, b)
            }
            "table" => Self::tabulated(a, b, read_table(get("file")?)?),
            other => Err(Error::BadPsi(format!("unknown family `{other}`"))),
        }
    }
}

fn singular_factor<T: Scalar>(distance: T, beta: T) -> T {
    if beta.is_zero() {
        T::one()
    } else if distance <= T::zero() {
        T::infinity()
    } else {
        (-beta * distance.ln()).exp()
    }
}

fn interpolate_log<T: Scalar>(table: &[(T, T)], p: T) -> T {
    let first = table[0];
    let last = table[table.len() - 1];
    if p <= first.0 {
        return first.1;
    }
    if p >= last.0 {
        return last.1;
    }
    let hi = table.partition_point(|&(q, _)| q <= p);
    let (p0, v0) = table[hi - 1];
    let (p1, v1) = table[hi];
    let t = (p - p0) / (p1 - p0);
    (v0.ln() * (T::one() - t) + v1.ln() * t).exp()
}

/// Reads a ψ table file: lines `<p> <psi>`, `#` comments allowed.
pub fn read_table<T: Scalar>(path: impl AsRef<Path>) -> Result<Vec<(T, T)>> {
    parse_table(&std::fs::read_to_string(path)?)
}

pub fn parse_table<T: Scalar>(text: &str) -> Result<Vec<(T, T)>> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse { line: i + 1, msg: "expected `<p> <psi>`".into() });
        }
        rows.push((parse_decimal(fields[0], i + 1)?, parse_decimal(fields[1], i + 1)?));
    }
    Ok(rows)
}

/// `sup_{0<ε≤b-1} ε^{θ/(b-ε)} ||f||_{b-ε}`, the comparison norm for the
/// endpoint-singular family.
pub fn btheta_norm<T: Scalar>(f: &SimpleFunction<T>, b: T, theta: T) -> Result<ScalarOptResult<T>> {
    if !(b.is_finite() && b > T::one()) {
        return Err(Error::BadInterval { a: 1.0, b: b.as_f64() });
    }
    if !(theta.is_finite() && theta >= T::zero()) {
        return Err(Error::BadPsi(format!("theta = {theta} must be finite and >= 0")));
    }
    if f.is_zero() {
        return Ok(ScalarOptResult {
            value: T::zero(),
            arg_p: b - T::one(),
            converged: true,
            probes: 0,
            tail_dominated: false,
        });
    }
    let profile = f.profile();
    let objective = |eps: T| {
        if eps <= T::zero() {
            // ε → 0 limit: the weight vanishes unless θ = 0.
            return if theta.is_zero() { profile.lp_norm(b) } else { T::zero() };
        }
        let p = (b - eps).max(T::one());
        (theta / p * eps.ln() + profile.ln_lp_norm(p)).exp()
    };
    let config = OptConfig { spacing: Spacing::DenseNearLo, ..OptConfig::default() };
    Ok(scalar_extremize(objective, Domain::Bounded { lo: T::zero(), hi: b - T::one() }, Mode::Sup, &config))
}
