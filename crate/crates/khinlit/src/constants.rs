//! Closed forms for the optimal constants of the classical inequalities:
//! the real-sign Khinchine constants `A_p`, `B_p`, their Steinhaus
//! counterparts `Ã_p`, `B̃_p`, the multiple (m-fold) powers, the mixed
//! Littlewood constants, and the real-scalar case table.
//!
//! Branch boundaries are the critical exponents from
//! [`crate::special::critical_points`]; they are solved once at first use
//! and cached, never hard-coded. At an exact branch point the left branch
//! label is reported (the values agree by continuity).

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::special::{critical_points, gamma_pos};

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// The constant families the library evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `A_p`: lower constant for real signs.
    KhinchineLowerReal,
    /// `B_p`: upper constant for real signs.
    KhinchineUpperReal,
    /// `Ã_p`: lower constant for Steinhaus phases.
    SteinhausLower,
    /// `B̃_p`: upper constant for Steinhaus phases.
    SteinhausUpper,
    /// `(lower)^m` for the m-fold inequality.
    MultipleLower,
    /// `(upper)^m` for the m-fold inequality.
    MultipleUpper,
    /// Optimal constant of the mixed Littlewood inequality.
    MixedLittlewood,
    /// Real-scalar case table (i)-(iv).
    CaseTable,
}

/// Scalar field a constant refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarField {
    Real,
    Complex,
}

/// Rows of the real-scalar case table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseId {
    I,
    II,
    III,
    IV,
}

/// A constant lookup request.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantQuery {
    pub family: Family,
    pub p: Exponent,
    pub m: u32,
    pub field: ScalarField,
    pub case_id: Option<CaseId>,
}

impl ConstantQuery {
    pub fn new(family: Family, p: Exponent) -> Self {
        Self { family, p, m: 1, field: ScalarField::Complex, case_id: None }
    }

    pub fn with_m(mut self, m: u32) -> Self {
        self.m = m;
        self
    }

    pub fn with_field(mut self, field: ScalarField) -> Self {
        self.field = field;
        self
    }

    pub fn with_case(mut self, case_id: CaseId) -> Self {
        self.case_id = Some(case_id);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(Error::Usage("degree m must be at least 1".into()));
        }
        let needs_case = self.family == Family::CaseTable;
        if needs_case != self.case_id.is_some() {
            return Err(Error::Usage(
                "case_id must be present exactly for case-table queries".into(),
            ));
        }
        Ok(())
    }
}

/// An evaluated constant together with the formula branch that produced
/// it and the critical points the branch decision consulted.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConstantValue {
    pub value: f64,
    pub branch: String,
    pub critical_points_used: Vec<(String, f64)>,
}

impl ConstantValue {
    fn plain(value: f64, branch: &str) -> Self {
        Self { value, branch: branch.into(), critical_points_used: Vec::new() }
    }

    fn with_points(value: f64, branch: &str, pts: Vec<(String, f64)>) -> Self {
        Self { value, branch: branch.into(), critical_points_used: pts }
    }
}

fn sqrt_pi() -> f64 {
    PI.sqrt()
}

/// `√2 (Γ((p+1)/2)/√π)^{1/p}` — the Gaussian-flavoured branch shared by
/// `A_p` (below 2) and `B_p` (above 2).
fn gaussian_branch(p: f64) -> f64 {
    2.0f64.sqrt() * (gamma_pos((p + 1.0) / 2.0) / sqrt_pi()).powf(1.0 / p)
}

/// `Γ((p+2)/2)^{1/p}`.
fn gamma_root_branch(p: f64) -> f64 {
    gamma_pos((p + 2.0) / 2.0).powf(1.0 / p)
}

/// `√2 (Γ((p+1)/2)/(Γ((p+2)/2)√π))^{1/p}` — the pair-witness branch of
/// the Steinhaus lower constant.
fn pair_branch(p: f64) -> f64 {
    2.0f64.sqrt()
        * (gamma_pos((p + 1.0) / 2.0) / (gamma_pos((p + 2.0) / 2.0) * sqrt_pi())).powf(1.0 / p)
}

/// Single-variable (m = 1) Khinchine constant for either field.
///
/// Accepts only the four single-constant families.
pub fn khinchine_constant(q: &ConstantQuery) -> Result<ConstantValue> {
    q.validate()?;
    match q.family {
        Family::KhinchineLowerReal => lower_real(q.p),
        Family::KhinchineUpperReal => upper_real(q.p),
        Family::SteinhausLower => steinhaus_lower(q.p),
        Family::SteinhausUpper => steinhaus_upper(q.p),
        other => Err(Error::Usage(format!(
            "khinchine_constant expects a single-constant family, got {other:?}"
        ))),
    }
}

fn lower_real(p: Exponent) -> Result<ConstantValue> {
    if p.is_infinite() {
        return Ok(ConstantValue::plain(1.0, "A.one"));
    }
    let pv = p.value();
    let p0 = critical_points().p0.root;
    if pv <= p0 {
        Ok(ConstantValue::with_points(
            2.0f64.powf(0.5 - 1.0 / pv),
            "A.two-point",
            vec![("p0".into(), p0)],
        ))
    } else if pv <= 2.0 {
        Ok(ConstantValue::with_points(
            gaussian_branch(pv),
            "A.gaussian",
            vec![("p0".into(), p0)],
        ))
    } else {
        Ok(ConstantValue::plain(1.0, "A.one"))
    }
}

fn upper_real(p: Exponent) -> Result<ConstantValue> {
    if p.is_infinite() {
        return Err(Error::Domain(
            "the upper Khinchine constant diverges as p -> inf".into(),
        ));
    }
    let pv = p.value();
    if pv <= 2.0 {
        Ok(ConstantValue::plain(1.0, "B.one"))
    } else {
        Ok(ConstantValue::plain(gaussian_branch(pv), "B.gaussian"))
    }
}

fn steinhaus_lower(p: Exponent) -> Result<ConstantValue> {
    if p.is_infinite() {
        return Ok(ConstantValue::plain(1.0, "Atilde.one"));
    }
    let pv = p.value();
    let p1 = critical_points().p1.root;
    let value = gamma_root_branch(pv).min(pair_branch(pv)).min(1.0);
    let branch = if pv <= p1 {
        "Atilde.pair"
    } else if pv <= 2.0 {
        "Atilde.gamma-root"
    } else {
        "Atilde.one"
    };
    Ok(ConstantValue::with_points(value, branch, vec![("p1".into(), p1)]))
}

fn steinhaus_upper(p: Exponent) -> Result<ConstantValue> {
    if p.is_infinite() {
        return Err(Error::Domain(
            "the upper Steinhaus constant diverges as p -> inf".into(),
        ));
    }
    let pv = p.value();
    let value = gamma_root_branch(pv).max(1.0);
    let branch = if pv <= 2.0 { "Btilde.one" } else { "Btilde.gamma-root" };
    Ok(ConstantValue::plain(value, branch))
}

/// `(base)^m` with the base constant selected by field and direction.
pub fn multiple_constant(q: &ConstantQuery) -> Result<ConstantValue> {
    q.validate()?;
    let base_family = match (q.family, q.field) {
        (Family::MultipleLower, ScalarField::Real) => Family::KhinchineLowerReal,
        (Family::MultipleLower, ScalarField::Complex) => Family::SteinhausLower,
        (Family::MultipleUpper, ScalarField::Real) => Family::KhinchineUpperReal,
        (Family::MultipleUpper, ScalarField::Complex) => Family::SteinhausUpper,
        (other, _) => {
            return Err(Error::Usage(format!(
                "multiple_constant expects a multiple family, got {other:?}"
            )))
        }
    };
    let base = khinchine_constant(&ConstantQuery::new(base_family, q.p))?;
    Ok(ConstantValue {
        value: base.value.powi(q.m as i32),
        branch: format!("{}^m", base.branch),
        critical_points_used: base.critical_points_used,
    })
}

/// Optimal constant of the mixed `(ℓ_{p*}, ℓ_2)` Littlewood inequality
/// for `m`-linear forms on `ℓ_p × ℓ_∞ × … × ℓ_∞`, `p ∈ [2, ∞]`.
///
/// Complex scalars: `(Ã_{p*})^{-(m-1)}` with `p* = p/(p-1)` (`p* = 1`
/// at `p = ∞`). Real scalars: the case table — (i) at `p = ∞`, (ii) for
/// `p ≥ alpha`, (iv) for `2 ≤ p < alpha`.
pub fn mixed_littlewood_constant(
    m: u32,
    p: Exponent,
    field: ScalarField,
) -> Result<ConstantValue> {
    if m < 2 {
        return Err(Error::Usage(format!("the mixed inequality needs m >= 2, got {m}")));
    }
    if !p.is_infinite() && p.value() < 2.0 {
        return Err(Error::Domain(format!("the mixed inequality needs p in [2, inf], got {p}")));
    }
    match field {
        ScalarField::Complex => {
            let pstar = p.conjugate();
            let base = steinhaus_lower(pstar)?;
            let mut pts = base.critical_points_used;
            pts.push(("p*".into(), pstar.value()));
            Ok(ConstantValue {
                value: base.value.powi(-(m as i32 - 1)),
                branch: format!("complex.inverse-{}", base.branch),
                critical_points_used: pts,
            })
        }
        ScalarField::Real => {
            let alpha = critical_points().alpha.root;
            if p.is_infinite() {
                let mut v = case_table_constant(CaseId::I, m, p)?;
                v.branch = format!("real.{}", v.branch);
                Ok(v)
            } else if p.value() >= alpha {
                let mut v = case_table_constant(CaseId::II, m, p)?;
                v.branch = format!("real.{}", v.branch);
                Ok(v)
            } else {
                let mut v = case_table_constant(CaseId::IV, m, p)?;
                v.branch = format!("real.{}", v.branch);
                Ok(v)
            }
        }
    }
}

/// Real-scalar case table. Cases (i) and (iii) ignore `p`; (ii) needs
/// `p ≥ alpha` and (iv) needs `2 ≤ p < alpha`.
pub fn case_table_constant(case_id: CaseId, m: u32, p: Exponent) -> Result<ConstantValue> {
    if m < 1 {
        return Err(Error::Usage("degree m must be at least 1".into()));
    }
    let e = m as i32 - 1;
    let alpha = critical_points().alpha.root;
    match case_id {
        CaseId::I => Ok(ConstantValue::plain(2.0f64.sqrt().powi(e), "case-i")),
        CaseId::III => Ok(ConstantValue::plain(2.0f64.sqrt().powi(e), "case-iii")),
        CaseId::II => {
            if !p.is_infinite() && p.value() < alpha {
                return Err(Error::Domain(format!(
                    "case (ii) needs p >= alpha = {alpha}, got {p}"
                )));
            }
            let base = 2.0f64.powf(0.5 - p.recip());
            Ok(ConstantValue::with_points(
                base.powi(e),
                "case-ii",
                vec![("alpha".into(), alpha)],
            ))
        }
        CaseId::IV => {
            if p.is_infinite() || p.value() >= alpha || p.value() < 2.0 {
                return Err(Error::Domain(format!(
                    "case (iv) needs 2 <= p < alpha = {alpha}, got {p}"
                )));
            }
            let pv = p.value();
            let base = (1.0 / 2.0f64.sqrt())
                * (gamma_pos((2.0 * pv - 1.0) / (2.0 * pv - 2.0)) / sqrt_pi())
                    .powf(1.0 / pv - 1.0);
            Ok(ConstantValue::with_points(
                base.powi(e),
                "case-iv",
                vec![("alpha".into(), alpha)],
            ))
        }
    }
}

/// Routes a query to the family-specific evaluator.
pub fn evaluate(q: &ConstantQuery) -> Result<ConstantValue> {
    q.validate()?;
    match q.family {
        Family::KhinchineLowerReal
        | Family::KhinchineUpperReal
        | Family::SteinhausLower
        | Family::SteinhausUpper => khinchine_constant(q),
        Family::MultipleLower | Family::MultipleUpper => multiple_constant(q),
        Family::MixedLittlewood => mixed_littlewood_constant(q.m, q.p, q.field),
        Family::CaseTable => case_table_constant(q.case_id.expect("validated"), q.m, q.p),
    }
}
