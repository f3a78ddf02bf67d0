//! Discrete and continuous phase averages of multilinear expressions.
//!
//! `discrete_average` enumerates the full roots-of-unity grid exactly;
//! `mc_average` estimates the continuous average over independent uniform
//! phases with a counter-based generator, so estimates are reproducible
//! for a fixed seed regardless of scheduling.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::grid::{self, CompensatedSum};
use crate::tensor::{contract_first_axis, ComplexTensor};
use crate::torus;
use crate::ExecPolicy;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// Samples per Monte Carlo block. Each block owns one generator stream,
/// so the block grid (not the thread count) fixes the random numbers.
const MC_BLOCK: u64 = 4096;

/// A reproducible Monte Carlo estimate of a rooted moment.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MonteCarloEstimate {
    /// Estimate of `(E|…|^p)^{1/p}`.
    pub mean: f64,
    /// Delta-method standard error of `mean`.
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
    pub p: f64,
}

/// Exact `(1/M)^{Nm}`-weighted grid average
/// `(Σ |Σ a e^{it…}|^p)^{1/p}` over all phase assignments.
///
/// Rectangular arrays are zero-padded to the largest slot length first.
pub fn discrete_average(a: &ComplexTensor, order: u32, p: f64) -> Result<f64> {
    discrete_average_with(a, order, p, &ExecPolicy::default())
}

pub fn discrete_average_with(
    a: &ComplexTensor,
    order: u32,
    p: f64,
    policy: &ExecPolicy,
) -> Result<f64> {
    if !p.is_finite() || p <= 0.0 {
        return Err(Error::Domain(format!("moment exponent must be positive, got {p}")));
    }
    if order < 2 {
        return Err(Error::Domain(format!("order must be at least 2, got {order}")));
    }
    let n = a.shape().iter().copied().max().expect("tensor has slots");
    let padded = a.zero_pad_to(n);
    let points = grid::check_budget(order, padded.shape(), policy)?;
    let roots = torus::roots_of_unity(order)?;

    let total = if padded.order() == 1 {
        let mut acc = CompensatedSum::default();
        grid::sum_abs_pow_over_phases(padded.data(), &roots, p, &mut acc);
        acc
    } else {
        let first_total = (order as u128).pow(padded.shape()[0] as u32) as u64;
        let ranges = grid::chunk_ranges(first_total);
        let partials = grid::run_chunks(ranges.len(), policy.threads, |i| {
            let mut acc = CompensatedSum::default();
            grid::walk_coeff_vectors(padded.data(), padded.shape(), &roots, ranges[i], &mut |c| {
                grid::sum_abs_pow_over_phases(c, &roots, p, &mut acc);
            });
            acc
        });
        let mut acc = CompensatedSum::default();
        for part in partials {
            acc.merge(part);
        }
        acc
    };

    let mean = total.total() / points as f64;
    Ok(root_power(mean, p))
}

/// Unbiased Monte Carlo estimate of the continuous phase average, with
/// the standard error of the power mean propagated through the `1/p`
/// root by the delta method.
pub fn mc_average(a: &ComplexTensor, p: f64, samples: u64, seed: u64) -> Result<MonteCarloEstimate> {
    mc_average_with(a, p, samples, seed, &ExecPolicy::default())
}

pub fn mc_average_with(
    a: &ComplexTensor,
    p: f64,
    samples: u64,
    seed: u64,
    policy: &ExecPolicy,
) -> Result<MonteCarloEstimate> {
    if !p.is_finite() || p <= 0.0 {
        return Err(Error::Domain(format!("moment exponent must be positive, got {p}")));
    }
    if samples < 2 {
        return Err(Error::Domain(format!("need at least 2 samples, got {samples}")));
    }
    let blocks = samples.div_ceil(MC_BLOCK);
    let shape = a.shape().to_vec();
    let partials = grid::run_chunks(blocks as usize, policy.threads, |b| {
        let b = b as u64;
        let count = MC_BLOCK.min(samples - b * MC_BLOCK);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(b);
        let mut xs: Vec<Vec<Complex64>> = shape.iter().map(|&n| vec![Complex64::new(0.0, 0.0); n]).collect();
        let mut pow_sum = CompensatedSum::default();
        let mut sq_sum = CompensatedSum::default();
        for _ in 0..count {
            for x in xs.iter_mut() {
                for e in x.iter_mut() {
                    let t = core::f64::consts::TAU * unit_f64(&mut rng);
                    *e = Complex64::from_polar(1.0, t);
                }
            }
            let mut cur = a.data().to_vec();
            for x in &xs {
                cur = contract_first_axis(&cur, x);
            }
            let m2 = cur[0].norm_sqr();
            let v = if p == 2.0 { m2 } else { m2.powf(0.5 * p) };
            pow_sum.add(v);
            sq_sum.add(v * v);
        }
        (pow_sum, sq_sum)
    });

    let mut pow_sum = CompensatedSum::default();
    let mut sq_sum = CompensatedSum::default();
    for (ps, ss) in partials {
        pow_sum.merge(ps);
        sq_sum.merge(ss);
    }
    let n = samples as f64;
    let mean_pow = pow_sum.total() / n;
    let var = ((sq_sum.total() / n - mean_pow * mean_pow) * n / (n - 1.0)).max(0.0);
    let se_pow = (var / n).sqrt();
    let mean = root_power(mean_pow, p);
    let std_error = if mean_pow > 0.0 {
        se_pow * (1.0 / p) * mean_pow.powf(1.0 / p - 1.0)
    } else {
        0.0
    };
    Ok(MonteCarloEstimate { mean, std_error, samples, seed, p })
}

/// The two extremal coefficient arrays of the multiple Khinchine
/// inequality for phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremalKind {
    /// Ones on the `{1,2}^m` corner, zero elsewhere.
    PairOnes,
    /// Every entry equal to `N^{-m/2}`.
    Uniform,
}

pub fn extremal_array(kind: ExtremalKind, m: u32, n: u32) -> Result<ComplexTensor> {
    if m < 1 || n < 1 {
        return Err(Error::Domain(format!("need m >= 1 and N >= 1, got m={m}, N={n}")));
    }
    let shape = vec![n as usize; m as usize];
    match kind {
        ExtremalKind::PairOnes => {
            if n < 2 {
                return Err(Error::Domain("the pair array needs N >= 2".into()));
            }
            ComplexTensor::from_fn(shape, |idx| {
                if idx.iter().all(|&i| i < 2) {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
        }
        ExtremalKind::Uniform => {
            let v = (n as f64).powf(-(m as f64) / 2.0);
            ComplexTensor::from_fn(shape, |_| Complex64::new(v, 0.0))
        }
    }
}

/// Multiplies each entry by the unit phases `e^{i s^{(j)}_{n_j}}`, where
/// every phase must lie on the order-`M` grid (within 1e-12).
pub fn translate(a: &ComplexTensor, phases: &[Vec<f64>], order: u32) -> Result<ComplexTensor> {
    if order < 2 {
        return Err(Error::Domain(format!("order must be at least 2, got {order}")));
    }
    let m = a.order();
    if phases.len() != m {
        return Err(Error::Usage(format!(
            "got {} phase vectors for an order-{m} array",
            phases.len()
        )));
    }
    for (j, (row, &n)) in phases.iter().zip(a.shape()).enumerate() {
        if row.len() != n {
            return Err(Error::Usage(format!(
                "slot {} has {n} indices but {} phases",
                j + 1,
                row.len()
            )));
        }
        for &s in row {
            let step = core::f64::consts::TAU / order as f64;
            let k = (s / step).round();
            if (s - k * step).abs() > 1e-12 {
                return Err(Error::Domain(format!(
                    "phase {s} is not a multiple of 2*pi/{order}"
                )));
            }
        }
    }
    let factors: Vec<Vec<Complex64>> = phases
        .iter()
        .map(|row| row.iter().map(|&s| Complex64::from_polar(1.0, s)).collect())
        .collect();
    let mut idx = vec![0usize; m];
    let data = a
        .data()
        .iter()
        .map(|&z| {
            let mut w = z;
            for (j, &i) in idx.iter().enumerate() {
                w *= factors[j][i];
            }
            for k in (0..m).rev() {
                idx[k] += 1;
                if idx[k] == a.shape()[k] {
                    idx[k] = 0;
                } else {
                    break;
                }
            }
            w
        })
        .collect();
    ComplexTensor::new(a.shape().to_vec(), data)
}

fn root_power(mean: f64, p: f64) -> f64 {
    if p == 2.0 {
        mean.sqrt()
    } else if p == 1.0 {
        mean
    } else {
        mean.powf(1.0 / p)
    }
}

fn unit_f64(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
}
