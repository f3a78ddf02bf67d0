//! Certified bounds for sup-norms of complex multilinear forms.
//!
//! `grid_norm` is the exact maximum of `|T|` over all assignments of
//! roots-of-unity vectors; `mixed_grid_norm` additionally lets one slot
//! range over an `ℓ_p` unit ball, where the supremum is the dual norm of
//! the induced coefficient vector. `norm_bounds` turns a grid value into
//! a two-sided sandwich for the true sup-norm via the apothem factor, and
//! `ascent_lower_bound` is a seeded alternating-maximization heuristic
//! for shapes too large to exhaust.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::grid;
use crate::tensor::{contract_first_axis, ComplexTensor};
use crate::torus;
use crate::ExecPolicy;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// The `(m, N, M)` triple describing an enumeration lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GridSpec {
    /// Number of slots.
    pub slots: u32,
    /// Vector length per slot (the largest, for rectangular shapes).
    pub len: u32,
    /// Roots-of-unity order.
    pub order: u32,
}

/// Two-sided bounds on the sup-norm of a form.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct NormBounds {
    pub lower: f64,
    pub upper: f64,
    pub method: String,
    pub grid: GridSpec,
    /// Slots that were constrained to the grid (0-based).
    pub slots_on_grid: Vec<usize>,
}

/// Exact maximum of `|T|` over all roots-of-unity vertex assignments.
pub fn grid_norm(t: &ComplexTensor, order: u32) -> Result<f64> {
    grid_norm_with(t, order, &ExecPolicy::default())
}

pub fn grid_norm_with(t: &ComplexTensor, order: u32, policy: &ExecPolicy) -> Result<f64> {
    if order < 2 {
        return Err(Error::Domain(format!("order must be at least 2, got {order}")));
    }
    grid::check_budget(order, t.shape(), policy)?;
    let roots = torus::roots_of_unity(order)?;
    if t.order() == 1 {
        return Ok(grid::max_abs_over_phases(t.data(), &roots));
    }
    let first_total = (order as u128).pow(t.shape()[0] as u32) as u64;
    let ranges = grid::chunk_ranges(first_total);
    let partials = grid::run_chunks(ranges.len(), policy.threads, |i| {
        let mut best = 0.0f64;
        grid::walk_coeff_vectors(t.data(), t.shape(), &roots, ranges[i], &mut |c| {
            let v = grid::max_abs_over_phases(c, &roots);
            if v > best {
                best = v;
            }
        });
        best
    });
    Ok(partials.into_iter().fold(0.0, f64::max))
}

/// Grid norm with the slots in `slots_on_grid` constrained to the vertex
/// grid and the remaining slot (at most one) ranging over its `ℓ_p` unit
/// ball. Requires `p_j = inf` for every grid slot.
pub fn mixed_grid_norm(
    t: &ComplexTensor,
    slots_on_grid: &[usize],
    order: u32,
    p: &[Exponent],
) -> Result<f64> {
    mixed_grid_norm_with(t, slots_on_grid, order, p, &ExecPolicy::default())
}

pub fn mixed_grid_norm_with(
    t: &ComplexTensor,
    slots_on_grid: &[usize],
    order: u32,
    p: &[Exponent],
    policy: &ExecPolicy,
) -> Result<f64> {
    let m = t.order();
    validate_slot_subset(slots_on_grid, m)?;
    if p.len() != m {
        return Err(Error::Usage(format!(
            "got {} domain exponents for an order-{m} form",
            p.len()
        )));
    }
    for &j in slots_on_grid {
        if !p[j].is_infinite() {
            return Err(Error::Usage(format!(
                "slot {} is constrained to the grid but has finite exponent {}",
                j + 1,
                p[j]
            )));
        }
    }
    let free: Vec<usize> = (0..m).filter(|j| !slots_on_grid.contains(j)).collect();
    match free.len() {
        0 => grid_norm_with(t, order, policy),
        1 => {
            if order < 2 {
                return Err(Error::Domain(format!("order must be at least 2, got {order}")));
            }
            let f = free[0];
            if !p[f].is_infinite() && p[f].value() < 1.0 {
                return Err(Error::Domain(format!(
                    "free slot {} needs an exponent in [1, inf], got {}",
                    f + 1,
                    p[f]
                )));
            }
            let dual = p[f].conjugate();
            let mut perm: Vec<usize> = slots_on_grid.to_vec();
            perm.push(f);
            let view = t.transpose(&perm);
            let grid_dims = &view.shape()[..m - 1];
            grid::check_budget(order, grid_dims, policy)?;
            let roots = torus::roots_of_unity(order)?;
            let first_total = (order as u128).pow(grid_dims[0] as u32) as u64;
            let ranges = grid::chunk_ranges(first_total);
            let partials = grid::run_chunks(ranges.len(), policy.threads, |i| {
                let mut best = 0.0f64;
                grid::walk_coeff_vectors(view.data(), view.shape(), &roots, ranges[i], &mut |c| {
                    let v = dual_norm(c, dual);
                    if v > best {
                        best = v;
                    }
                });
                best
            });
            Ok(partials.into_iter().fold(0.0, f64::max))
        }
        _ => Err(Error::Unsupported(format!(
            "{} slots off the grid; exact mixed norms support at most one \
             (use ascent_lower_bound for a heuristic lower bound)",
            free.len()
        ))),
    }
}

/// Basic sandwich: `lower = ‖T‖_{A,M}` and `upper = r_M^{-|A|} · lower`
/// bound the true sup-norm from both sides.
pub fn norm_bounds(
    t: &ComplexTensor,
    slots_on_grid: &[usize],
    order: u32,
    p: &[Exponent],
) -> Result<NormBounds> {
    norm_bounds_with(t, slots_on_grid, order, p, &ExecPolicy::default())
}

pub fn norm_bounds_with(
    t: &ComplexTensor,
    slots_on_grid: &[usize],
    order: u32,
    p: &[Exponent],
    policy: &ExecPolicy,
) -> Result<NormBounds> {
    if order < 3 {
        return Err(Error::Domain(format!(
            "the sandwich needs an inscribed circle (order >= 3), got {order}"
        )));
    }
    let lower = mixed_grid_norm_with(t, slots_on_grid, order, p, policy)?;
    let r = torus::apothem(order)?;
    let upper = lower * r.powi(-(slots_on_grid.len() as i32));
    let method = if slots_on_grid.len() == t.order() {
        String::from("grid-exhaustive")
    } else {
        String::from("grid-dual")
    };
    Ok(NormBounds {
        lower,
        upper,
        method,
        grid: GridSpec {
            slots: t.order() as u32,
            len: t.shape().iter().copied().max().unwrap_or(0) as u32,
            order,
        },
        slots_on_grid: slots_on_grid.to_vec(),
    })
}

/// Alternating-maximization lower bound on the sup-norm over the product
/// of `ℓ_p` unit balls.
///
/// Each sweep rotates an `ℓ_∞` slot onto the conjugate phases of its
/// partial contraction and sets an `ℓ_p` slot to the dual norming vector;
/// the objective never decreases. Restart `r` draws its starting phases
/// from stream `r` of a generator seeded with `seed`, so the result is
/// reproducible and scheduling-independent.
pub fn ascent_lower_bound(
    t: &ComplexTensor,
    p: &[Exponent],
    restarts: u32,
    seed: u64,
) -> Result<f64> {
    let m = t.order();
    if p.len() != m {
        return Err(Error::Usage(format!(
            "got {} domain exponents for an order-{m} form",
            p.len()
        )));
    }
    if restarts < 1 {
        return Err(Error::Usage("ascent needs at least one restart".into()));
    }
    for (j, e) in p.iter().enumerate() {
        if !e.is_infinite() && e.value() < 1.0 {
            return Err(Error::Domain(format!(
                "slot {} needs an exponent in [1, inf], got {e}",
                j + 1
            )));
        }
    }

    // One transposed copy per slot, others in increasing order, target last.
    let views: Vec<(ComplexTensor, Vec<usize>)> = (0..m)
        .map(|j| {
            let mut perm: Vec<usize> = (0..m).filter(|&k| k != j).collect();
            perm.push(j);
            (t.transpose(&perm), perm)
        })
        .collect();

    let mut best = 0.0f64;
    for r in 0..restarts {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(r as u64);
        let mut xs: Vec<Vec<Complex64>> = (0..m)
            .map(|j| {
                let n = t.shape()[j];
                let scale = if p[j].is_infinite() {
                    1.0
                } else {
                    (n as f64).powf(-p[j].recip())
                };
                (0..n)
                    .map(|_| Complex64::from_polar(scale, core::f64::consts::TAU * unit_f64(&mut rng)))
                    .collect()
            })
            .collect();

        let mut current = 0.0f64;
        for _sweep in 0..64 {
            let before = current;
            for j in 0..m {
                let (view, perm) = &views[j];
                let mut c = view.data().to_vec();
                for &axis in &perm[..m - 1] {
                    c = contract_first_axis(&c, &xs[axis]);
                }
                xs[j] = norming_vector(&c, p[j]);
                current = dual_norm(&c, p[j].conjugate());
            }
            if current - before <= 1e-13 * current.max(1.0) {
                break;
            }
        }
        if current > best {
            best = current;
        }
    }
    Ok(best)
}

/// `‖c‖_q` for `q ∈ [1, inf]`.
pub(crate) fn dual_norm(c: &[Complex64], q: Exponent) -> f64 {
    if q.is_infinite() {
        return c.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max).sqrt();
    }
    let qv = q.value();
    if qv == 1.0 {
        let mut acc = grid::CompensatedSum::default();
        for z in c {
            acc.add(z.norm());
        }
        acc.total()
    } else if qv == 2.0 {
        let mut acc = grid::CompensatedSum::default();
        for z in c {
            acc.add(z.norm_sqr());
        }
        acc.total().sqrt()
    } else {
        let mut acc = grid::CompensatedSum::default();
        for z in c {
            acc.add(z.norm_sqr().powf(0.5 * qv));
        }
        acc.total().powf(1.0 / qv)
    }
}

/// A vector of unit `ℓ_p` norm maximizing `Re Σ c_k x_k = ‖c‖_{p*}`;
/// `0/0` contributions are taken as zero.
fn norming_vector(c: &[Complex64], p: Exponent) -> Vec<Complex64> {
    if p.is_infinite() {
        return c
            .iter()
            .map(|&z| {
                let n = z.norm();
                if n == 0.0 { Complex64::new(0.0, 0.0) } else { z.conj() / n }
            })
            .collect();
    }
    let pv = p.value();
    if pv == 1.0 {
        let mut k_best = 0usize;
        let mut n_best = -1.0f64;
        for (k, z) in c.iter().enumerate() {
            let n = z.norm();
            if n > n_best {
                n_best = n;
                k_best = k;
            }
        }
        let mut out = vec![Complex64::new(0.0, 0.0); c.len()];
        if n_best > 0.0 {
            out[k_best] = c[k_best].conj() / n_best;
        }
        return out;
    }
    let q = p.conjugate().value();
    let norm_q = dual_norm(c, p.conjugate());
    if norm_q == 0.0 {
        return vec![Complex64::new(0.0, 0.0); c.len()];
    }
    let denom = norm_q.powf(q / pv);
    c.iter()
        .map(|&z| {
            let n = z.norm();
            if n == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                z.conj() * n.powf(q - 2.0) / denom
            }
        })
        .collect()
}

fn validate_slot_subset(slots: &[usize], m: usize) -> Result<()> {
    if slots.is_empty() {
        return Err(Error::Usage("the grid slot subset must be non-empty".into()));
    }
    for w in slots.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::Usage(format!(
                "grid slots must be strictly increasing, got {slots:?}"
            )));
        }
    }
    if *slots.last().unwrap() >= m {
        return Err(Error::Usage(format!(
            "slot {} out of range for an order-{m} form",
            slots.last().unwrap() + 1
        )));
    }
    Ok(())
}

/// Convenience: every slot index of an order-`m` form.
pub fn all_slots(m: usize) -> Vec<usize> {
    (0..m).collect()
}

fn unit_f64(rng: &mut impl RngCore) -> f64 {
    // 53 uniform bits in [0, 1)
    (rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn littlewood() -> ComplexTensor {
        ComplexTensor::new(
            vec![2, 2],
            vec![c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)],
        )
        .unwrap()
    }

    /// Independent oracle: enumerate every assignment by index arithmetic
    /// and evaluate the form from scratch.
    fn oracle_grid_norm(t: &ComplexTensor, order: u32) -> f64 {
        let roots = torus::roots_of_unity(order).unwrap();
        let digits: usize = t.shape().iter().sum();
        let total = (order as u64).pow(digits as u32);
        let mut best = 0.0f64;
        for idx in 0..total {
            let mut rem = idx;
            let mut xs: Vec<Vec<Complex64>> = Vec::new();
            for &n in t.shape().iter().rev() {
                let mut v = Vec::with_capacity(n);
                for _ in 0..n {
                    v.push(roots[(rem % order as u64) as usize]);
                    rem /= order as u64;
                }
                v.reverse();
                xs.push(v);
            }
            xs.reverse();
            let refs: Vec<&[Complex64]> = xs.iter().map(|v| v.as_slice()).collect();
            best = best.max(t.evaluate(&refs).unwrap().norm());
        }
        best
    }

    #[test]
    fn littlewood_grid_norms_match_oracle() {
        let t = littlewood();
        // M = 3: exhausting the 3^4 assignments attains |T|^2 in {1, 4, 7},
        // so the maximum is sqrt(7).
        let g3 = grid_norm(&t, 3).unwrap();
        assert!((g3 - 7.0f64.sqrt()).abs() < 1e-13, "got {g3}");
        assert!((g3 - oracle_grid_norm(&t, 3)).abs() < 1e-13);

        // M = 4: maximizer x = (1, 1), y = (1, i) gives 2*sqrt(2).
        let g4 = grid_norm(&t, 4).unwrap();
        assert!((g4 - 2.0 * 2.0f64.sqrt()).abs() < 1e-13, "got {g4}");
        assert!((g4 - oracle_grid_norm(&t, 4)).abs() < 1e-13);

        let g8 = grid_norm(&t, 8).unwrap();
        assert!((g8 - 2.0 * 2.0f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn random_grid_norms_match_oracle() {
        use rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for case in 0..12 {
            let m = 1 + (case % 3) as usize;
            let shape: Vec<usize> = (0..m).map(|_| 1 + (rng.next_u64() % 3) as usize).collect();
            let count: usize = shape.iter().product();
            let data: Vec<Complex64> = (0..count)
                .map(|_| c(2.0 * unit_f64(&mut rng) - 1.0, 2.0 * unit_f64(&mut rng) - 1.0))
                .collect();
            let t = ComplexTensor::new(shape, data).unwrap();
            for order in [2u32, 3, 4] {
                let fast = grid_norm(&t, order).unwrap();
                let slow = oracle_grid_norm(&t, order);
                assert!((fast - slow).abs() < 1e-12, "case {case} order {order}");
            }
        }
    }

    #[test]
    fn rank_one_norm_is_one() {
        let mut data = vec![c(0.0, 0.0); 9];
        data[0] = c(1.0, 0.0);
        let t = ComplexTensor::new(vec![3, 3], data).unwrap();
        for order in [2u32, 3, 4, 8] {
            assert!((grid_norm(&t, order).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn mixed_grid_norm_examples() {
        // bilinear identity on N = 3: for unit-modulus y the dual l2 norm
        // of the induced coefficients is sqrt(3) regardless of phases
        let id3 = ComplexTensor::from_fn(vec![3, 3], |idx| {
            if idx[0] == idx[1] { c(1.0, 0.0) } else { c(0.0, 0.0) }
        })
        .unwrap();
        let p = [Exponent::TWO, Exponent::INF];
        let v = mixed_grid_norm(&id3, &[1], 4, &p).unwrap();
        assert!((v - 3.0f64.sqrt()).abs() < 1e-13);

        // constraining every slot reproduces the plain grid norm
        let t = littlewood();
        let all = all_slots(2);
        let pinf = [Exponent::INF, Exponent::INF];
        assert_eq!(
            mixed_grid_norm(&t, &all, 3, &pinf).unwrap(),
            grid_norm(&t, 3).unwrap()
        );

        // slot 2 free in the sup ball: max over x of |x1+x2| + |x1-x2|;
        // at M = 3 this is 1 + sqrt(3) (the value sqrt(7) relaxes to)
        let v13 = mixed_grid_norm(&t, &[0], 3, &[Exponent::INF, Exponent::INF]).unwrap();
        assert!((v13 - (1.0 + 3.0f64.sqrt())).abs() < 1e-13);
        assert!(v13 >= grid_norm(&t, 3).unwrap());
    }

    #[test]
    fn mixed_grid_norm_rejects_bad_requests() {
        let t = ComplexTensor::new(vec![2, 2, 2], vec![c(1.0, 0.0); 8]).unwrap();
        let p = [Exponent::TWO, Exponent::INF, Exponent::INF];
        // grid slot with finite exponent
        assert!(matches!(
            mixed_grid_norm(&t, &[0, 1], 4, &p),
            Err(Error::Usage(_))
        ));
        // two slots off the grid
        assert!(matches!(
            mixed_grid_norm(&t, &[1], 4, &[Exponent::TWO, Exponent::INF, Exponent::TWO]),
            Err(Error::Unsupported(_))
        ));
        // empty subset
        assert!(mixed_grid_norm(&t, &[], 4, &p).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let t = ComplexTensor::new(vec![4, 4], vec![c(1.0, 0.0); 16]).unwrap();
        let policy = ExecPolicy::new(100, 1);
        let err = grid_norm_with(&t, 4, &policy).unwrap_err();
        match err {
            Error::Resource { required, budget } => {
                assert_eq!(required, 4u128.pow(8));
                assert_eq!(budget, 100);
            }
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn sandwich_bounds() {
        let t = littlewood();
        let pinf = [Exponent::INF, Exponent::INF];
        let nb3 = norm_bounds(&t, &all_slots(2), 3, &pinf).unwrap();
        let s7 = 7.0f64.sqrt();
        assert!((nb3.lower - s7).abs() < 1e-13);
        assert!((nb3.upper - 4.0 * s7).abs() < 1e-12);
        assert_eq!(nb3.method, "grid-exhaustive");

        let nb4 = norm_bounds(&t, &all_slots(2), 4, &pinf).unwrap();
        let g4 = 2.0 * 2.0f64.sqrt();
        assert!((nb4.lower - g4).abs() < 1e-13);
        assert!((nb4.upper - 2.0 * g4).abs() < 1e-12);

        let zero = ComplexTensor::new(vec![2, 2], vec![c(0.0, 0.0); 4]).unwrap();
        let nbz = norm_bounds(&zero, &all_slots(2), 4, &pinf).unwrap();
        assert_eq!((nbz.lower, nbz.upper), (0.0, 0.0));

        assert!(norm_bounds(&t, &all_slots(2), 2, &pinf).is_err());
    }

    #[test]
    fn ascent_reaches_the_littlewood_maximum() {
        let t = littlewood();
        let p = [Exponent::INF, Exponent::INF];
        let v = ascent_lower_bound(&t, &p, 8, 0).unwrap();
        assert!(v >= 2.0 * 2.0f64.sqrt() - 1e-9, "got {v}");
        // a lower bound never exceeds the certified upper bound
        let nb = norm_bounds(&t, &all_slots(2), 16, &p).unwrap();
        assert!(v <= nb.upper + 1e-9);
    }

    #[test]
    fn ascent_on_rank_one_and_zero() {
        let mut data = vec![c(0.0, 0.0); 4];
        data[0] = c(1.0, 0.0);
        let t = ComplexTensor::new(vec![2, 2], data).unwrap();
        let p = [Exponent::INF, Exponent::INF];
        let v = ascent_lower_bound(&t, &p, 4, 7).unwrap();
        assert!((v - 1.0).abs() < 1e-12);

        let zero = ComplexTensor::new(vec![2, 2], vec![c(0.0, 0.0); 4]).unwrap();
        assert_eq!(ascent_lower_bound(&zero, &p, 2, 0).unwrap(), 0.0);

        assert!(ascent_lower_bound(&t, &p, 0, 0).is_err());
    }

    #[test]
    fn ascent_with_finite_exponents() {
        // identity bilinear form on l2 x linf: sup norm is sqrt(2)
        let id2 = ComplexTensor::from_fn(vec![2, 2], |idx| {
            if idx[0] == idx[1] { c(1.0, 0.0) } else { c(0.0, 0.0) }
        })
        .unwrap();
        let p = [Exponent::TWO, Exponent::INF];
        let v = ascent_lower_bound(&id2, &p, 6, 3).unwrap();
        assert!((v - 2.0f64.sqrt()).abs() < 1e-9, "got {v}");
        let direct = mixed_grid_norm(&id2, &[1], 64, &p).unwrap();
        assert!(v <= direct + 1e-9);
    }

    #[test]
    fn parallel_enumeration_is_deterministic() {
        use rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let data: Vec<Complex64> = (0..27)
            .map(|_| c(2.0 * unit_f64(&mut rng) - 1.0, 2.0 * unit_f64(&mut rng) - 1.0))
            .collect();
        let t = ComplexTensor::new(vec![3, 3, 3], data).unwrap();
        let serial = grid_norm_with(&t, 4, &ExecPolicy::new(1 << 30, 1)).unwrap();
        let parallel = grid_norm_with(&t, 4, &ExecPolicy::new(1 << 30, 8)).unwrap();
        assert_eq!(serial.to_bits(), parallel.to_bits());
    }
}
