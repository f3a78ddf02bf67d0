//! End-to-end inequality verifiers.
//!
//! Each verifier computes both sides of a claimed inequality with
//! certified machinery only (grid sandwiches for sup-norm upper bounds,
//! never the ascent heuristic) and returns a structured report.
//! Deterministic claims pass when `margin >= -tolerance` with the
//! tolerance scaled by the magnitude of the left-hand side; Monte Carlo
//! claims may return `inconclusive` when the margin is inside the
//! three-sigma band of the estimator.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::constants::{
    mixed_littlewood_constant, multiple_constant, ConstantQuery, ConstantValue, Family,
    ScalarField,
};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::norms::{all_slots, mixed_grid_norm_with, norm_bounds_with};
use crate::steinhaus::{discrete_average_with, mc_average_with};
use crate::tensor::{ComplexTensor, MixedNormSpec};
use crate::torus::{apothem, roots_of_unity};
use crate::ExecPolicy;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// Shared verification settings.
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub policy: ExecPolicy,
    /// Base absolute tolerance for deterministic claims; scaled by the
    /// magnitude of the left-hand side.
    pub tolerance: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { policy: ExecPolicy::default(), tolerance: 1e-9 }
    }
}

impl VerifyOptions {
    fn effective_tol(&self, lhs: f64) -> f64 {
        self.tolerance * lhs.abs().max(1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// Outcome of one verified claim.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct VerificationReport {
    pub claim_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: ConstantValue,
    /// `rhs - lhs`.
    pub margin: f64,
    pub verdict: Verdict,
    pub params: BTreeMap<String, String>,
    pub notes: String,
}

/// Admissibility of a Hardy–Littlewood exponent tuple.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct HlExponentVerdict {
    pub admissible: bool,
    pub sum_inv_p: f64,
    pub sum_inv_t: f64,
    /// `(m+1)/2 - Σ 1/p`.
    pub bound: f64,
    /// Admissible range for each `t_j`.
    pub t_range: (f64, f64),
    pub violations: Vec<String>,
}

const EDGE_TOL: f64 = 1e-12;

/// Checks the admissibility conditions on domain exponents
/// `p_j ∈ [2, ∞]` and summing exponents `t_j`:
/// `Σ 1/p ≤ 1/2`, every `t_j ∈ [1/(1 - Σ1/p), 2]`, and
/// `Σ 1/t ≤ (m+1)/2 - Σ 1/p`. Out-of-range entries are listed as
/// violations, not errors. `Σ 1/p = 0` (every `p_j = ∞`) is admissible.
pub fn check_hl_exponents(p: &[Exponent], t: &[Exponent]) -> Result<HlExponentVerdict> {
    if p.is_empty() || p.len() != t.len() {
        return Err(Error::Usage(format!(
            "need matching non-empty exponent lists, got {} and {}",
            p.len(),
            t.len()
        )));
    }
    let m = p.len();
    let mut violations = Vec::new();
    for (j, e) in p.iter().enumerate() {
        if !e.is_infinite() && e.value() < 2.0 - EDGE_TOL {
            violations.push(format!("p[{}] = {e} is below 2", j + 1));
        }
    }
    let sum_inv_p: f64 = p.iter().map(|e| e.recip()).sum();
    if sum_inv_p > 0.5 + EDGE_TOL {
        violations.push(format!("sum of 1/p = {sum_inv_p} exceeds 1/2"));
    }
    let t_lo = if sum_inv_p < 1.0 { 1.0 / (1.0 - sum_inv_p) } else { f64::INFINITY };
    for (j, e) in t.iter().enumerate() {
        let tv = e.value();
        if tv < t_lo - EDGE_TOL {
            violations.push(format!("t[{}] = {e} is below {t_lo}", j + 1));
        }
        if tv > 2.0 + EDGE_TOL {
            violations.push(format!("t[{}] = {e} exceeds 2", j + 1));
        }
    }
    let sum_inv_t: f64 = t.iter().map(|e| e.recip()).sum();
    let bound = (m as f64 + 1.0) / 2.0 - sum_inv_p;
    if sum_inv_t > bound + EDGE_TOL {
        violations.push(format!("sum of 1/t = {sum_inv_t} exceeds {bound}"));
    }
    Ok(HlExponentVerdict {
        admissible: violations.is_empty(),
        sum_inv_p,
        sum_inv_t,
        bound,
        t_range: (t_lo, 2.0),
        violations,
    })
}

/// How to estimate the m-fold phase average.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KhinchineMode {
    /// Exact enumeration over the order-`M` grid.
    Discrete { order: u32 },
    /// Seeded Monte Carlo over continuous phases.
    MonteCarlo { samples: u64, seed: u64 },
}

/// Verifies the m-fold Khinchine inequality for phases on an array.
///
/// Monte Carlo mode checks the two-sided sandwich
/// `(Ã_p)^m ℓ2 ≤ E^{1/p} ≤ (B̃_p)^m ℓ2` and may return `inconclusive`
/// inside the three-sigma band. Discrete mode checks the one-sided grid
/// bound `ℓ2 ≤ (Ã_p)^{-m} r_M^{-m} E_{m,M,p}` deterministically
/// (`M ≥ 3`, `p ∈ [1, 2]`).
pub fn verify_multiple_khinchine(
    a: &ComplexTensor,
    p: f64,
    mode: KhinchineMode,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let m = a.order() as u32;
    let pe = Exponent::new(p)?;
    let l2 = a.l2_norm();
    let mut params = BTreeMap::new();
    params.insert("m".into(), format!("{m}"));
    params.insert("shape".into(), format!("{:?}", a.shape()));
    params.insert("p".into(), format!("{p}"));

    match mode {
        KhinchineMode::MonteCarlo { samples, seed } => {
            let est = mc_average_with(a, p, samples, seed, &opts.policy)?;
            let lower = multiple_constant(
                &ConstantQuery::new(Family::MultipleLower, pe)
                    .with_m(m)
                    .with_field(ScalarField::Complex),
            )?;
            let upper = multiple_constant(
                &ConstantQuery::new(Family::MultipleUpper, pe)
                    .with_m(m)
                    .with_field(ScalarField::Complex),
            )?;
            let low_margin = est.mean - lower.value * l2;
            let high_margin = upper.value * l2 - est.mean;
            params.insert("samples".into(), format!("{samples}"));
            params.insert("seed".into(), format!("{seed}"));
            params.insert("mode".into(), "monte-carlo".into());
            let (lhs, rhs, constant) = if low_margin <= high_margin {
                (lower.value * l2, est.mean, lower)
            } else {
                (est.mean, upper.value * l2, upper)
            };
            let margin = rhs - lhs;
            let verdict = if margin.abs() < 3.0 * est.std_error {
                Verdict::Inconclusive
            } else if margin >= -opts.effective_tol(lhs) {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            Ok(VerificationReport {
                claim_id: "multiple-khinchine-mc".into(),
                lhs,
                rhs,
                constant,
                margin,
                verdict,
                params,
                notes: format!(
                    "estimate {} +- {} (1 sigma); lower margin {low_margin}, upper margin \
                     {high_margin}; lower constant taken as the optimal (Atilde_p)^m",
                    est.mean, est.std_error
                ),
            })
        }
        KhinchineMode::Discrete { order } => {
            if order < 3 {
                return Err(Error::Domain(format!(
                    "discrete mode needs order >= 3 for the apothem factor, got {order}"
                )));
            }
            if !(1.0..=2.0).contains(&p) {
                return Err(Error::Domain(format!(
                    "the discrete grid bound holds for p in [1, 2], got {p}"
                )));
            }
            let avg = discrete_average_with(a, order, p, &opts.policy)?;
            let lower = multiple_constant(
                &ConstantQuery::new(Family::MultipleLower, pe)
                    .with_m(m)
                    .with_field(ScalarField::Complex),
            )?;
            let r = apothem(order)?;
            let rhs = avg / lower.value * r.powi(-(m as i32));
            let margin = rhs - l2;
            params.insert("M".into(), format!("{order}"));
            params.insert("mode".into(), "discrete".into());
            let verdict = if margin >= -opts.effective_tol(l2) {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            Ok(VerificationReport {
                claim_id: "multiple-khinchine-discrete".into(),
                lhs: l2,
                rhs,
                constant: lower,
                margin,
                verdict,
                params,
                notes: format!(
                    "grid average {avg}; bound (Atilde_p)^-m r_M^-m E with r_M = {r}; \
                     lower constant taken as the optimal (Atilde_p)^m"
                ),
            })
        }
    }
}

/// Which nesting of the mixed Littlewood norm to verify.
///
/// `Swap(j)` transposes slot 1 with slot `j` (1-based, `2 ≤ j ≤ m`): the
/// `ℓ_{p*}` level moves to depth `j` of the nesting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LittlewoodVariant {
    Identity,
    Swap(usize),
}

impl LittlewoodVariant {
    fn label(&self) -> String {
        match self {
            LittlewoodVariant::Identity => "id".into(),
            LittlewoodVariant::Swap(j) => format!("sigma{j}"),
        }
    }
}

/// The nested-norm spec of a mixed Littlewood left-hand side: exponent
/// `p*` on the level that visits slot 1, `ℓ_2` everywhere else.
pub fn littlewood_norm_spec(
    m: usize,
    pstar: Exponent,
    variant: LittlewoodVariant,
) -> Result<MixedNormSpec> {
    if m < 2 {
        return Err(Error::Usage(format!("the mixed norm needs m >= 2 slots, got {m}")));
    }
    let (sigma, t) = match variant {
        LittlewoodVariant::Identity => {
            let mut t = vec![Exponent::TWO; m];
            t[0] = pstar;
            ((0..m).collect::<Vec<_>>(), t)
        }
        LittlewoodVariant::Swap(j) => {
            if !(2..=m).contains(&j) {
                return Err(Error::Usage(format!(
                    "swap target must lie in 2..={m}, got {j}"
                )));
            }
            let j0 = j - 1;
            let mut sigma = Vec::with_capacity(m);
            sigma.push(j0);
            for k in 1..m {
                sigma.push(if k == j0 { 0 } else { k });
            }
            let mut t = vec![Exponent::TWO; m];
            t[j0] = pstar;
            (sigma, t)
        }
    };
    MixedNormSpec::new(sigma, t, vec![Exponent::INF; m])
}

/// Verifies the mixed `(ℓ_{p*}, ℓ_2)` Littlewood inequality on a form
/// with slot 1 on `ℓ_p` and the others on `ℓ_∞`, using the optimal
/// complex constant and a certified sandwich upper bound for the
/// sup-norm. The report also records the nesting chain
/// `LHS(sigma_m) ≤ … ≤ LHS(sigma_2) ≤ LHS(id)`.
pub fn verify_mixed_littlewood(
    t: &ComplexTensor,
    p: Exponent,
    variant: LittlewoodVariant,
    order: u32,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let m = t.order();
    if m < 2 {
        return Err(Error::Usage(format!("need an m-linear form with m >= 2, got {m}")));
    }
    if !p.is_infinite() && p.value() < 2.0 {
        return Err(Error::Domain(format!("the mixed inequality needs p in [2, inf], got {p}")));
    }
    let pstar = p.conjugate();
    let lhs = t.mixed_norm(&littlewood_norm_spec(m, pstar, variant)?)?;

    // nesting chain, deepest p* level first
    let mut chain: Vec<(String, f64)> = Vec::with_capacity(m);
    for j in (2..=m).rev() {
        let v = LittlewoodVariant::Swap(j);
        chain.push((v.label(), t.mixed_norm(&littlewood_norm_spec(m, pstar, v)?)?));
    }
    chain.push(("id".into(), t.mixed_norm(&littlewood_norm_spec(m, pstar, LittlewoodVariant::Identity)?)?));
    let mut chain_ok = true;
    for w in chain.windows(2) {
        if w[0].1 > w[1].1 + EDGE_TOL * w[1].1.abs().max(1.0) {
            chain_ok = false;
        }
    }

    let bounds = if p.is_infinite() {
        norm_bounds_with(t, &all_slots(m), order, &vec![Exponent::INF; m], &opts.policy)?
    } else {
        let mut exps = vec![Exponent::INF; m];
        exps[0] = p;
        let slots: Vec<usize> = (1..m).collect();
        norm_bounds_with(t, &slots, order, &exps, &opts.policy)?
    };
    let constant = mixed_littlewood_constant(m as u32, p, ScalarField::Complex)?;
    let rhs = constant.value * bounds.upper;
    let margin = rhs - lhs;
    let verdict = if chain_ok && margin >= -opts.effective_tol(lhs) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };

    let mut params = BTreeMap::new();
    params.insert("m".into(), format!("{m}"));
    params.insert("shape".into(), format!("{:?}", t.shape()));
    params.insert("p".into(), format!("{p}"));
    params.insert("p*".into(), format!("{pstar}"));
    params.insert("M".into(), format!("{order}"));
    params.insert("variant".into(), variant.label());
    Ok(VerificationReport {
        claim_id: "mixed-littlewood".into(),
        lhs,
        rhs,
        constant,
        margin,
        verdict,
        params,
        notes: format!(
            "sup-norm upper bound {} via {}; nesting chain {:?} ordered: {chain_ok}",
            bounds.upper, bounds.method, chain
        ),
    })
}

/// Verifies the `(λ, 2)` mixed-norm bound with the classical constant
/// `(√2)^{m-1}` for forms on `ℓ_{p_1} × … × ℓ_{p_m}` with
/// `Σ 1/p_j < 1/2` and `1/λ = 1 - Σ 1/p_j`.
pub fn verify_lambda_mixed_bound(
    t: &ComplexTensor,
    p: &[Exponent],
    order: u32,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let m = t.order();
    if p.len() != m {
        return Err(Error::Usage(format!(
            "got {} domain exponents for an order-{m} form",
            p.len()
        )));
    }
    let sum_inv: f64 = p.iter().map(|e| e.recip()).sum();
    if sum_inv >= 0.5 {
        return Err(Error::Domain(format!(
            "lambda is undefined in this range: sum of 1/p_j = {sum_inv} must be below 1/2"
        )));
    }
    let lambda = 1.0 / (1.0 - sum_inv);
    let mut tvec = vec![Exponent::TWO; m];
    tvec[0] = Exponent::new(lambda)?;
    let spec = MixedNormSpec::new((0..m).collect(), tvec, p.to_vec())?;
    let lhs = t.mixed_norm(&spec)?;

    let grid_slots: Vec<usize> = (0..m).filter(|&j| p[j].is_infinite()).collect();
    if m - grid_slots.len() > 1 {
        return Err(Error::Unsupported(format!(
            "{} slots carry finite exponents; certified upper bounds support at most one",
            m - grid_slots.len()
        )));
    }
    let bounds = norm_bounds_with(t, &grid_slots, order, p, &opts.policy)?;
    let constant = ConstantValue {
        value: 2.0f64.sqrt().powi(m as i32 - 1),
        branch: "classical-sqrt2".into(),
        critical_points_used: Vec::new(),
    };
    let rhs = constant.value * bounds.upper;
    let margin = rhs - lhs;
    let verdict = if margin >= -opts.effective_tol(lhs) { Verdict::Pass } else { Verdict::Fail };

    let mut params = BTreeMap::new();
    params.insert("m".into(), format!("{m}"));
    params.insert("shape".into(), format!("{:?}", t.shape()));
    params.insert("p".into(), format!("{:?}", p.iter().map(|e| format!("{e}")).collect::<Vec<_>>()));
    params.insert("lambda".into(), format!("{lambda}"));
    params.insert("M".into(), format!("{order}"));
    Ok(VerificationReport {
        claim_id: "lambda-mixed-bound".into(),
        lhs,
        rhs,
        constant,
        margin,
        verdict,
        params,
        notes: format!("sup-norm upper bound {} via {}", bounds.upper, bounds.method),
    })
}

/// The `(m+1)`-linear lift of an array over the full phase grid, used to
/// re-derive the discrete Khinchine bound through the mixed Littlewood
/// machinery.
#[derive(Debug, Clone)]
pub struct PhaseLift {
    /// Coefficients of shape `(M^{Nm}, N, …, N)`: entry
    /// `(i, n_1, …, n_m)` is `a_{n} τ^{(i)}_{n} / M^{Nm/p}` for the
    /// normalized array `a`.
    pub tensor: ComplexTensor,
    /// The grid average of the input; the lift is built from the input
    /// divided by this factor.
    pub normalization: f64,
    /// `‖T‖_{{2..m+1},M}` of the lift; at most `1 + 1e-9` by
    /// construction.
    pub certificate: f64,
}

/// Builds the phase-grid lift of `a`: slot 1 enumerates the `M^{Nm}`
/// grid assignments through the lexicographic bijection τ (slot-major,
/// index-major, phase index fastest) and the remaining `m` slots carry
/// the original indices.
pub fn phase_lift_form(
    a: &ComplexTensor,
    order: u32,
    p: f64,
    opts: &VerifyOptions,
) -> Result<PhaseLift> {
    if !(1.0..=2.0).contains(&p) {
        return Err(Error::Domain(format!("the lift needs p in [1, 2], got {p}")));
    }
    if order < 2 {
        return Err(Error::Domain(format!("order must be at least 2, got {order}")));
    }
    let m = a.order();
    let n = a.shape().iter().copied().max().expect("tensor has slots");
    let digits = n * m;
    let count = (order as u128).checked_pow(digits as u32).ok_or(Error::Resource {
        required: u128::MAX,
        budget: opts.policy.budget,
    })?;
    // The certificate enumerates the grid again with an M^{Nm}-long dual
    // norm per point, so the effective work is count^2.
    let work = count.saturating_mul(count);
    if work > opts.policy.budget as u128 {
        return Err(Error::Resource { required: work, budget: opts.policy.budget });
    }
    let normalization = discrete_average_with(a, order, p, &opts.policy)?;
    if normalization == 0.0 {
        return Err(Error::Domain("cannot normalize the zero array".into()));
    }
    let padded = a.zero_pad_to(n).scale(Complex64::new(1.0 / normalization, 0.0));

    let count = count as usize;
    let cells = n.pow(m as u32);
    let roots = roots_of_unity(order)?;
    let scale = if p == 2.0 {
        (count as f64).sqrt()
    } else if p == 1.0 {
        count as f64
    } else {
        (count as f64).powf(1.0 / p)
    };

    let mut shape = vec![count];
    shape.extend(core::iter::repeat(n).take(m));
    let mut data = Vec::with_capacity(count * cells);
    let mut tau_digits = vec![0u32; digits];
    let mut multi = vec![0usize; m];
    for _ in 0..count {
        for cell in 0..cells {
            let mut f = padded.data()[cell] / scale;
            for (j, &nj) in multi.iter().enumerate() {
                f *= roots[tau_digits[j * n + nj] as usize];
            }
            data.push(f);
            for k in (0..m).rev() {
                multi[k] += 1;
                if multi[k] == n {
                    multi[k] = 0;
                } else {
                    break;
                }
            }
        }
        for d in tau_digits.iter_mut().rev() {
            *d += 1;
            if *d == order {
                *d = 0;
            } else {
                break;
            }
        }
    }
    let tensor = ComplexTensor::new(shape, data)?;

    let mut exps = vec![Exponent::INF; m + 1];
    exps[0] = Exponent::new(p)?.conjugate();
    let grid_slots: Vec<usize> = (1..=m).collect();
    let certificate = mixed_grid_norm_with(&tensor, &grid_slots, order, &exps, &opts.policy)?;
    if certificate > 1.0 + 1e-9 {
        return Err(Error::Numeric(format!(
            "phase-lift certificate {certificate} exceeds 1 + 1e-9"
        )));
    }
    Ok(PhaseLift { tensor, normalization, certificate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_core::{RngCore, SeedableRng};

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

    fn unit(rng: &mut impl RngCore) -> f64 {
        (rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    fn random_tensor(rng: &mut impl RngCore, shape: Vec<usize>) -> ComplexTensor {
        let count: usize = shape.iter().product();
        let data = (0..count)
            .map(|_| c(2.0 * unit(rng) - 1.0, 2.0 * unit(rng) - 1.0))
            .collect();
        ComplexTensor::new(shape, data).unwrap()
    }

    #[test]
    fn hl_exponent_examples() {
        let inf = Exponent::INF;
        let one = Exponent::ONE;
        let two = Exponent::TWO;
        let v = check_hl_exponents(&[inf, inf], &[one, two]).unwrap();
        assert!(v.admissible);
        assert!((v.sum_inv_t - 1.5).abs() < 1e-15);
        assert!((v.bound - 1.5).abs() < 1e-15);
        assert_eq!(v.t_range, (1.0, 2.0));

        let ft = Exponent::new(4.0 / 3.0).unwrap();
        assert!(check_hl_exponents(&[inf, inf], &[ft, ft]).unwrap().admissible);

        let bad = check_hl_exponents(&[inf, inf], &[one, one]).unwrap();
        assert!(!bad.admissible);
        assert_eq!(bad.violations.len(), 1);

        let below = check_hl_exponents(&[one, inf], &[two, two]).unwrap();
        assert!(!below.admissible);
        assert!(below.violations.iter().any(|v| v.contains("below 2")));

        assert!(check_hl_exponents(&[], &[]).is_err());
        assert!(check_hl_exponents(&[inf], &[one, two]).is_err());
    }

    #[test]
    fn discrete_khinchine_bound_holds_exactly_at_p2() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let a = random_tensor(&mut rng, vec![3, 3]);
        let rep = verify_multiple_khinchine(
            &a,
            2.0,
            KhinchineMode::Discrete { order: 4 },
            &VerifyOptions::default(),
        )
        .unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        assert!(rep.margin >= 0.0);
        assert_eq!(rep.claim_id, "multiple-khinchine-discrete");
        assert!(rep.notes.contains("Atilde"));
    }

    #[test]
    fn discrete_mode_preconditions() {
        let a = littlewood();
        let opts = VerifyOptions::default();
        assert!(verify_multiple_khinchine(&a, 2.0, KhinchineMode::Discrete { order: 2 }, &opts)
            .is_err());
        assert!(verify_multiple_khinchine(&a, 2.5, KhinchineMode::Discrete { order: 4 }, &opts)
            .is_err());
        assert!(verify_multiple_khinchine(&a, 0.5, KhinchineMode::Discrete { order: 4 }, &opts)
            .is_err());
    }

    #[test]
    fn mc_khinchine_sandwich_on_the_pair_witness() {
        let a = crate::steinhaus::extremal_array(crate::steinhaus::ExtremalKind::PairOnes, 2, 2)
            .unwrap();
        let rep = verify_multiple_khinchine(
            &a,
            1.0,
            KhinchineMode::MonteCarlo { samples: 100_000, seed: 4 },
            &VerifyOptions::default(),
        )
        .unwrap();
        assert_ne!(rep.verdict, Verdict::Fail);
        assert_eq!(rep.claim_id, "multiple-khinchine-mc");
    }

    #[test]
    fn mixed_littlewood_on_the_identity() {
        let n = 2usize;
        let id = ComplexTensor::from_fn(vec![n, n], |idx| {
            if idx[0] == idx[1] { c(1.0, 0.0) } else { c(0.0, 0.0) }
        })
        .unwrap();
        let rep = verify_mixed_littlewood(
            &id,
            Exponent::INF,
            LittlewoodVariant::Identity,
            8,
            &VerifyOptions::default(),
        )
        .unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        assert!((rep.lhs - n as f64).abs() < 1e-12);
    }

    #[test]
    fn mixed_littlewood_on_the_littlewood_matrix() {
        let rep = verify_mixed_littlewood(
            &littlewood(),
            Exponent::INF,
            LittlewoodVariant::Identity,
            8,
            &VerifyOptions::default(),
        )
        .unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        let two_sqrt2 = 2.0 * 2.0f64.sqrt();
        assert!((rep.lhs - two_sqrt2).abs() < 1e-12);
        // certified upper bound dominates the true sup-norm 2*sqrt(2)
        assert!(rep.rhs >= 2.0 / core::f64::consts::PI.sqrt() * two_sqrt2 - 1e-12);

        let zero = ComplexTensor::new(vec![2, 2], vec![c(0.0, 0.0); 4]).unwrap();
        let zrep = verify_mixed_littlewood(
            &zero,
            Exponent::INF,
            LittlewoodVariant::Identity,
            4,
            &VerifyOptions::default(),
        )
        .unwrap();
        assert_eq!(zrep.verdict, Verdict::Pass);
        assert_eq!(zrep.lhs, 0.0);
    }

    #[test]
    fn mixed_littlewood_rejects_small_p() {
        let err = verify_mixed_littlewood(
            &littlewood(),
            Exponent::new(1.5).unwrap(),
            LittlewoodVariant::Identity,
            4,
            &VerifyOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn chain_ordering_on_random_trilinear_forms() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10 {
            let t = random_tensor(&mut rng, vec![2, 2, 2]);
            for pv in [2.0, 4.0, f64::INFINITY] {
                let p = if pv.is_infinite() { Exponent::INF } else { Exponent::new(pv).unwrap() };
                let pstar = p.conjugate();
                let l_id = t
                    .mixed_norm(&littlewood_norm_spec(3, pstar, LittlewoodVariant::Identity).unwrap())
                    .unwrap();
                let l_s2 = t
                    .mixed_norm(&littlewood_norm_spec(3, pstar, LittlewoodVariant::Swap(2)).unwrap())
                    .unwrap();
                let l_s3 = t
                    .mixed_norm(&littlewood_norm_spec(3, pstar, LittlewoodVariant::Swap(3)).unwrap())
                    .unwrap();
                assert!(l_s3 <= l_s2 + 1e-12, "p = {pv}");
                assert!(l_s2 <= l_id + 1e-12, "p = {pv}");
            }
        }
    }

    #[test]
    fn lambda_bound_examples() {
        let opts = VerifyOptions::default();
        // all-inf slots reduce to the (1, 2, ..., 2) nesting
        let rep = verify_lambda_mixed_bound(
            &littlewood(),
            &[Exponent::INF, Exponent::INF],
            8,
            &opts,
        )
        .unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        assert_eq!(rep.params["lambda"], "1");
        assert!((rep.lhs - 2.0 * 2.0f64.sqrt()).abs() < 1e-12);

        let rep4 = verify_lambda_mixed_bound(
            &littlewood(),
            &[Exponent::new(4.0).unwrap(), Exponent::INF],
            8,
            &opts,
        )
        .unwrap();
        assert!((rep4.params["lambda"].parse::<f64>().unwrap() - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(rep4.verdict, Verdict::Pass);

        // sum 1/p = 1/2 is outside the theorem's range
        assert!(verify_lambda_mixed_bound(
            &littlewood(),
            &[Exponent::TWO, Exponent::INF],
            8,
            &opts
        )
        .is_err());
    }

    #[test]
    fn phase_lift_smallest_case() {
        let a = ComplexTensor::new(vec![1], vec![c(1.0, 0.0)]).unwrap();
        let lift = phase_lift_form(&a, 2, 2.0, &VerifyOptions::default()).unwrap();
        assert_eq!(lift.tensor.shape(), &[2, 1]);
        let s = 1.0 / 2.0f64.sqrt();
        assert!((lift.tensor.data()[0] - c(s, 0.0)).norm() < 1e-15);
        assert!((lift.tensor.data()[1] - c(-s, 0.0)).norm() < 1e-15);
        assert!((lift.certificate - 1.0).abs() < 1e-12);
        assert!((lift.normalization - 1.0).abs() < 1e-15);
    }

    #[test]
    fn phase_lift_reproduces_the_l2_norm() {
        let s = 1.0 / 2.0f64.sqrt();
        let a = ComplexTensor::new(vec![2], vec![c(s, 0.0), c(s, 0.0)]).unwrap();
        let lift = phase_lift_form(&a, 2, 2.0, &VerifyOptions::default()).unwrap();
        assert_eq!(lift.tensor.shape(), &[4, 2]);
        // nested (2, ..., 2, p) norm with the grid slot innermost equals
        // the l2 norm of the normalized array
        let spec = MixedNormSpec::new(
            vec![1, 0],
            vec![Exponent::TWO, Exponent::TWO],
            vec![Exponent::INF; 2],
        )
        .unwrap();
        let rederived = lift.tensor.mixed_norm(&spec).unwrap();
        let expected = a.l2_norm() / lift.normalization;
        assert!((rederived - expected).abs() < 1e-12);
    }

    #[test]
    fn phase_lift_agrees_with_the_discrete_verifier() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let opts = VerifyOptions::default();
        for shape in [vec![2], vec![2, 2]] {
            let a = random_tensor(&mut rng, shape);
            for (order, p) in [(2u32, 1.0), (3, 1.5), (4, 2.0)] {
                let m = a.order() as u32;
                let lift = phase_lift_form(&a, order, p, &opts).unwrap();
                let rep = verify_multiple_khinchine(
                    &a,
                    p,
                    KhinchineMode::Discrete { order: order.max(3) },
                    &opts,
                )
                .unwrap();
                assert_eq!(rep.verdict, Verdict::Pass);

                // re-derive the bound through the lift: the certificate
                // replaces E_{m,M,p}(a / normalization) = 1
                let atil_m = multiple_constant(
                    &ConstantQuery::new(Family::MultipleLower, Exponent::new(p).unwrap())
                        .with_m(m)
                        .with_field(ScalarField::Complex),
                )
                .unwrap()
                .value;
                let r = apothem(order).unwrap();
                let lhs_scaled = a.l2_norm() / lift.normalization;
                let rhs_construction = lift.certificate / atil_m * r.powi(-(m as i32));
                assert!(
                    lhs_scaled <= rhs_construction + 1e-9,
                    "order {order} p {p}: {lhs_scaled} vs {rhs_construction}"
                );
                // same margin as the direct route, up to the certificate slack
                let direct = verify_multiple_khinchine(
                    &a,
                    p,
                    KhinchineMode::Discrete { order },
                    &opts,
                );
                if order >= 3 {
                    let direct = direct.unwrap();
                    let margin_rederived =
                        (rhs_construction - lhs_scaled) * lift.normalization;
                    assert!((margin_rederived - direct.margin).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn phase_lift_rejects_bad_inputs() {
        let a = ComplexTensor::new(vec![2], vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let opts = VerifyOptions::default();
        assert!(phase_lift_form(&a, 2, 0.5, &opts).is_err());
        assert!(phase_lift_form(&a, 2, 2.5, &opts).is_err());
        let zero = ComplexTensor::new(vec![2], vec![c(0.0, 0.0); 2]).unwrap();
        assert!(phase_lift_form(&zero, 2, 1.0, &opts).is_err());
        let tight = VerifyOptions { policy: ExecPolicy::new(8, 1), ..opts };
        assert!(matches!(
            phase_lift_form(&a, 4, 1.0, &tight),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn constant_consistency_between_the_two_verifiers() {
        // the optimal mixed constant never exceeds the classical sqrt2 power,
        // and both verifiers pass on the same input
        let t = littlewood();
        let opts = VerifyOptions::default();
        let ml = verify_mixed_littlewood(&t, Exponent::INF, LittlewoodVariant::Identity, 8, &opts)
            .unwrap();
        let pra =
            verify_lambda_mixed_bound(&t, &[Exponent::INF, Exponent::INF], 8, &opts).unwrap();
        assert_eq!(ml.verdict, Verdict::Pass);
        assert_eq!(pra.verdict, Verdict::Pass);
        assert!(ml.constant.value <= pra.constant.value + 1e-15);
        assert_eq!(ml.lhs, pra.lhs);
    }
}
