//! Seeded random simple functions for verification campaigns.
//!
//! Each trial draws from its own ChaCha stream selected by `(seed, trial)`,
//! so a campaign produces identical pairs whatever order trials run in.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StudentT};

use crate::measure::{MeasurePartition, SimpleFunction};
use crate::scalar::Scalar;

/// Degrees of freedom of the Student-t law used for values.
const VALUE_DOF: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    pub atoms_min: usize,
    pub atoms_max: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self { atoms_min: 2, atoms_max: 64 }
    }
}

/// Independent random stream for one trial of a seeded campaign.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Unit-mass partition with `k ∈ [atoms_min, atoms_max]` cells and
/// normalized exponential masses (a flat Dirichlet draw).
pub fn random_partition<T: Scalar, R: Rng + ?Sized>(rng: &mut R, cfg: &SamplerConfig) -> Arc<MeasurePartition<T>> {
    let lo = cfg.atoms_min.max(1);
    let hi = cfg.atoms_max.max(lo);
    let k = rng.gen_range(lo..=hi);
    let raw: Vec<f64> = (0..k)
        .map(|_| {
            let e: f64 = Exp1.sample(rng);
            e.max(f64::MIN_POSITIVE)
        })
        .collect();
    let total: f64 = raw.iter().sum();
    let weights = raw.into_iter().map(|w| T::lit(w / total)).collect();
    Arc::new(MeasurePartition::new(weights).expect("exponential draws are positive"))
}

/// Symmetric heavy-tailed values on a given partition; never identically zero.
pub fn random_function_on<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    partition: &Arc<MeasurePartition<T>>,
) -> SimpleFunction<T> {
    let law = StudentT::new(VALUE_DOF).expect("valid degrees of freedom");
    loop {
        let values: Vec<T> = (0..partition.len()).map(|_| T::lit(law.sample(rng))).collect();
        if values.iter().any(|v| !v.is_zero()) {
            return SimpleFunction::new(Arc::clone(partition), values).expect("finite draws");
        }
    }
}

/// Two functions on a shared random partition, each rescaled to norm `ρ`
/// with `ρ ~ U[0, 1]` drawn independently.
pub fn random_ball_pair<T, R, N>(rng: &mut R, cfg: &SamplerConfig, norm: N) -> (SimpleFunction<T>, SimpleFunction<T>)
where
    T: Scalar,
    R: Rng + ?Sized,
    N: Fn(&SimpleFunction<T>) -> T,
{
    let partition = random_partition(rng, cfg);
    let x = random_function_on(rng, &partition);
    let y = random_function_on(rng, &partition);
    let rx: f64 = rng.gen();
    let ry: f64 = rng.gen();
    (rescale(&x, T::lit(rx), &norm), rescale(&y, T::lit(ry), &norm))
}

/// Two functions on a shared random partition, each rescaled to norm 1.
pub fn random_sphere_pair<T, R, N>(rng: &mut R, cfg: &SamplerConfig, norm: N) -> (SimpleFunction<T>, SimpleFunction<T>)
where
    T: Scalar,
    R: Rng + ?Sized,
    N: Fn(&SimpleFunction<T>) -> T,
{
    let partition = random_partition(rng, cfg);
    let x = random_function_on(rng, &partition);
    let y = random_function_on(rng, &partition);
    (rescale(&x, T::one(), &norm), rescale(&y, T::one(), &norm))
}

fn rescale<T: Scalar, N: Fn(&SimpleFunction<T>) -> T>(f: &SimpleFunction<T>, radius: T, norm: &N) -> SimpleFunction<T> {
    let n = norm(f);
    if n > T::zero() && n.is_finite() {
        f.scale(radius / n)
    } else {
        f.scale(T::zero())
    }
}
