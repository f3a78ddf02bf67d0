//! Gamma function, bracketed root-finding for the critical exponents, and
//! 1-D adaptive quadrature.
//!
//! Every constant formula in [`crate::constants`] is built from these
//! three primitives, so they are kept dependency-free and deterministic.

use alloc::boxed::Box;
use alloc::format;
use core::f64::consts::PI;

use once_cell::race::OnceBox;

use crate::error::{Error, Result};

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// Lanczos approximation with `g = 607/128`, 15 coefficients
/// (Godfrey's set, as tabulated in Numerical Recipes, 3rd edition).
/// Relative error is below 2e-15 on the positive axis.
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEFFS: [f64; 15] = [
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
];

/// Γ(x) for positive real x.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!(
            "gamma requires a finite positive argument, got {x}"
        )));
    }
    Ok(gamma_pos(x))
}

/// Γ(x) assuming x > 0.
pub(crate) fn gamma_pos(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x <= 170.0 && x.fract() == 0.0 {
        // exact at integers (factorials up to 22! are exact in f64)
        let mut acc = 1.0f64;
        let mut k = 2.0f64;
        while k < x {
            acc *= k;
            k += 1.0;
        }
        return acc;
    }
    if x < 0.5 {
        // Reflection keeps the Lanczos sum on its accurate range.
        PI / ((PI * x).sin() * gamma_pos(1.0 - x))
    } else {
        let z = x - 1.0;
        let mut acc = LANCZOS_COEFFS[0];
        for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
            acc += c / (z + i as f64);
        }
        let w = z + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * w.powf(z + 0.5) * (-w).exp() * acc
    }
}

/// Result of a bracketed root solve.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RootResult {
    /// Location of the root.
    pub root: f64,
    /// `|f(root)|` at the returned point.
    pub residual: f64,
    /// Function evaluations spent inside the bracket.
    pub iterations: u32,
    /// The bracket the solve was started with (endpoints of opposite sign).
    pub bracket: (f64, f64),
}

/// The three critical exponents used by the branch formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalExponent {
    /// `p0 ∈ (1, 2)`: where `Γ((p+1)/2) = √π/2`.
    P0,
    /// `p1 ∈ (0, 1)`: where the two lower Steinhaus branches meet.
    P1,
    /// `alpha = p0/(p0 - 1)`.
    Alpha,
}

/// Bisection-secant hybrid on a sign-changing bracket.
///
/// A secant step is taken whenever it lands strictly inside the current
/// bracket and the bracket has been shrinking; otherwise the midpoint is
/// used, so convergence is guaranteed.
fn solve_bracketed(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> Result<RootResult> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    let mut iterations = 2u32;
    if fa == 0.0 {
        return Ok(RootResult { root: a, residual: 0.0, iterations, bracket: (lo, hi) });
    }
    if fb == 0.0 {
        return Ok(RootResult { root: b, residual: 0.0, iterations, bracket: (lo, hi) });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Numeric(format!(
            "bracket failure: f({a}) = {fa} and f({b}) = {fb} have the same sign"
        )));
    }
    let mut width_two_ago = b - a;
    for step in 0..200u32 {
        let mut x = b - fb * (b - a) / (fb - fa);
        // Force bisection if the secant stalls or escapes the bracket.
        let stalled = step >= 2 && (b - a) > 0.5 * width_two_ago;
        if !x.is_finite() || x <= a || x >= b || stalled {
            x = 0.5 * (a + b);
        }
        width_two_ago = b - a;
        let fx = f(x);
        iterations += 1;
        if fx == 0.0 {
            return Ok(RootResult { root: x, residual: 0.0, iterations, bracket: (lo, hi) });
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        if b - a <= f64::EPSILON * (1.0 + a.abs().max(b.abs())) {
            break;
        }
    }
    let (root, res) = if fa.abs() <= fb.abs() { (a, fa) } else { (b, fb) };
    Ok(RootResult { root, residual: res.abs(), iterations, bracket: (lo, hi) })
}

fn p0_equation(p: f64) -> f64 {
    gamma_pos((p + 1.0) / 2.0) - PI.sqrt() / 2.0
}

fn p1_equation(p: f64) -> f64 {
    let ratio = gamma_pos((p + 1.0) / 2.0) / (PI.sqrt() * gamma_pos(p / 2.0 + 1.0).powi(2));
    1.0 - 2.0f64.sqrt() * ratio.powf(1.0 / p)
}

#[derive(Debug)]
pub struct CriticalPoints {
    pub p0: RootResult,
    pub p1: RootResult,
    pub alpha: RootResult,
}

static CRITICAL: OnceBox<CriticalPoints> = OnceBox::new();

/// The critical exponents, solved once and cached for the process lifetime.
///
/// Both functions are monotone on their brackets: `[1.5, 1.99]` for `p0`
/// and `[0.1, 0.9]` for `p1`.
pub fn critical_points() -> &'static CriticalPoints {
    CRITICAL.get_or_init(|| {
        let p0 = solve_bracketed(&p0_equation, 1.5, 1.99)
            .expect("p0 bracket carries a sign change");
        let p1 = solve_bracketed(&p1_equation, 0.1, 0.9)
            .expect("p1 bracket carries a sign change");
        // alpha is the conjugate index of p0; the map p -> p/(p-1) is
        // decreasing, so the bracket endpoints swap.
        let (lo, hi) = p0.bracket;
        let alpha = RootResult {
            root: p0.root / (p0.root - 1.0),
            residual: p0.residual,
            iterations: p0.iterations,
            bracket: (hi / (hi - 1.0), lo / (lo - 1.0)),
        };
        Box::new(CriticalPoints { p0, p1, alpha })
    })
}

/// Solves for one of the critical exponents.
pub fn solve_critical(which: CriticalExponent) -> Result<RootResult> {
    let table = critical_points();
    Ok(match which {
        CriticalExponent::P0 => table.p0.clone(),
        CriticalExponent::P1 => table.p1.clone(),
        CriticalExponent::Alpha => table.alpha.clone(),
    })
}

/// `E|ε₁ + ε₂|^p` for independent Steinhaus variables, as the p-th power
/// (not the 1/p root): `2^p Γ((p+1)/2) / (Γ((p+2)/2) √π)`.
pub fn steinhaus_pair_moment(p: f64) -> Result<f64> {
    if !p.is_finite() || p <= 0.0 {
        return Err(Error::Domain(format!(
            "pair moment requires a finite positive exponent, got {p}"
        )));
    }
    Ok(2.0f64.powf(p) * gamma_pos((p + 1.0) / 2.0) / (gamma_pos((p + 2.0) / 2.0) * PI.sqrt()))
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
///
/// Subdivision is forced down to a minimum depth before the local error
/// estimate is trusted, which protects against integrands whose symmetry
/// fools the first Richardson estimate. Fails if the accumulated error
/// estimate exceeds `tol`.
pub fn quadrature<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    const MAX_DEPTH: u32 = 60;
    const MIN_DEPTH: u32 = 8;

    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!("invalid interval [{a}, {b}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }

    let eval = |t: f64| -> Result<f64> {
        let v = f(t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain(format!("integrand is not finite at t = {t}")))
        }
    };

    struct Rec<'a> {
        f: &'a dyn Fn(f64) -> Result<f64>,
        err_acc: f64,
    }

    impl Rec<'_> {
        fn go(
            &mut self,
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> Result<f64> {
            let m = 0.5 * (a + b);
            let flm = (self.f)(0.5 * (a + m))?;
            let frm = (self.f)(0.5 * (m + b))?;
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            let delta = left + right - whole;
            if depth >= MAX_DEPTH || (depth >= MIN_DEPTH && delta.abs() <= 15.0 * tol) {
                self.err_acc += delta.abs() / 15.0;
                return Ok(left + right + delta / 15.0);
            }
            let l = self.go(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)?;
            let r = self.go(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)?;
            Ok(l + r)
        }
    }

    let fa = eval(a)?;
    let fb = eval(b)?;
    let fm = eval(0.5 * (a + b))?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut rec = Rec { f: &eval, err_acc: 0.0 };
    let value = rec.go(a, b, fa, fm, fb, whole, tol, 0)?;
    if rec.err_acc > tol.max(1e-14 * value.abs()) * 4.0 {
        return Err(Error::Numeric(format!(
            "quadrature did not converge: estimated error {} exceeds tolerance {tol}",
            rec.err_acc
        )));
    }
    Ok(value)
}
