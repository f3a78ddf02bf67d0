//! Roots-of-unity geometry: vertex sets, the apothem of the inscribed
//! polygon, the Minkowski gauge of the polygon product, and an independent
//! membership oracle.
//!
//! The order-`M` polygon is the convex hull of the `M`-th roots of unity.
//! `M = 2` degenerates to the segment `[-1, 1]` (the real sign case); it is
//! accepted for vertex enumeration but rejected by `gauge` and
//! `membership_oracle`, which need a polygon with nonempty interior.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// The `M`-th roots of unity `exp(2πij/M)`, `j = 0..M-1`.
pub fn roots_of_unity(order: u32) -> Result<Vec<Complex64>> {
    if order < 2 {
        return Err(Error::Domain(format!("order must be at least 2, got {order}")));
    }
    Ok((0..order)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / order as f64))
        .collect())
}

/// Inradius of the order-`M` polygon: `(1/2 + (1/2)cos(2π/M))^{1/2}`,
/// which equals `cos(π/M)` by the half-angle identity.
pub fn apothem(order: u32) -> Result<f64> {
    if order < 2 {
        return Err(Error::Domain(format!("order must be at least 2, got {order}")));
    }
    Ok((0.5 + 0.5 * (2.0 * PI / order as f64).cos()).sqrt())
}

/// Minkowski gauge of a vector against the polygon product: the smallest
/// `t > 0` with every coordinate in `t` times the order-`M` polygon.
///
/// Per coordinate this is the maximum over the `M` edge normals
/// `e^{i(2k+1)π/M}` of `Re(z e^{-i(2k+1)π/M}) / cos(π/M)`, clamped below
/// at zero. The closed form is validated against [`membership_oracle`],
/// which decides containment by an independent edge scan.
pub fn gauge(z: &[Complex64], order: u32) -> Result<f64> {
    if order < 3 {
        return Err(Error::Domain(format!(
            "gauge needs a polygon with nonempty interior (order >= 3), got {order}"
        )));
    }
    let m = order as f64;
    let cos_half = (PI / m).cos();
    let mut worst = 0.0f64;
    for &zj in z {
        if !zj.re.is_finite() || !zj.im.is_finite() {
            return Err(Error::Domain(format!("gauge requires finite coordinates, got {zj}")));
        }
        let mut best = 0.0f64;
        for k in 0..order {
            let normal_angle = (2.0 * k as f64 + 1.0) * PI / m;
            let proj = zj.re * normal_angle.cos() + zj.im * normal_angle.sin();
            if proj > best {
                best = proj;
            }
        }
        worst = worst.max(best / cos_half);
    }
    Ok(worst)
}

/// Decides `z ∈ t·D_M` for a single complex coordinate by scanning the
/// polygon edges: the point is inside iff it lies on the inner side of
/// every edge of the scaled polygon.
///
/// This is deliberately a different computation from [`gauge`] (cross
/// products against edge vectors rather than projections on precomputed
/// normals divided by the apothem), so the two can check each other.
pub fn membership_oracle(z: Complex64, t: f64, order: u32) -> Result<bool> {
    if order < 3 {
        return Err(Error::Domain(format!(
            "membership needs a polygon with nonempty interior (order >= 3), got {order}"
        )));
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!("scale must be positive, got {t}")));
    }
    let vertices = roots_of_unity(order)?;
    let w = z / t;
    // Vertices are in counterclockwise order; inside means every cross
    // product (v_{k+1} - v_k) x (w - v_k) is nonnegative.
    for k in 0..order as usize {
        let a = vertices[k];
        let b = vertices[(k + 1) % order as usize];
        let edge = b - a;
        let rel = w - a;
        let cross = edge.re * rel.im - edge.im * rel.re;
        if cross < 0.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_vertex_sets() {
        let t2 = roots_of_unity(2).unwrap();
        assert!((t2[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((t2[1] - Complex64::new(-1.0, 0.0)).norm() < 1e-15);

        let t4 = roots_of_unity(4).unwrap();
        assert!((t4[1] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((t4[2] - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        assert!((t4[3] - Complex64::new(0.0, -1.0)).norm() < 1e-15);

        let t3 = roots_of_unity(3).unwrap();
        let s3 = 3.0f64.sqrt() / 2.0;
        assert!((t3[1] - Complex64::new(-0.5, s3)).norm() < 1e-15);
        assert!((t3[2] - Complex64::new(-0.5, -s3)).norm() < 1e-15);

        for &v in roots_of_unity(7).unwrap().iter() {
            assert!((v.norm() - 1.0).abs() < 1e-15);
        }
        assert!(roots_of_unity(1).is_err());
    }

    #[test]
    fn apothem_values() {
        assert!((apothem(3).unwrap() - 0.5).abs() < 1e-15);
        assert!((apothem(4).unwrap() - 2.0f64.sqrt() / 2.0).abs() < 1e-15);
        assert!(apothem(2).unwrap().abs() < 1e-15);
        for order in [3u32, 5, 8, 64, 1024] {
            let r = apothem(order).unwrap();
            assert!((r - (PI / order as f64).cos()).abs() < 1e-15);
        }
        assert!(apothem(1).is_err());
    }

    #[test]
    fn gauge_examples() {
        // a vertex lies on the polygon boundary
        let z = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        assert!((gauge(&z, 6).unwrap() - 1.0).abs() < 1e-14);

        // the edge midpoint direction scaled to the apothem is on the boundary
        let r5 = apothem(5).unwrap();
        let mid = Complex64::from_polar(r5, PI / 5.0);
        assert!((gauge(&[mid, Complex64::new(0.0, 0.0)], 5).unwrap() - 1.0).abs() < 1e-14);

        // zero vector has gauge zero
        let zeros = [Complex64::new(0.0, 0.0); 3];
        assert_eq!(gauge(&zeros, 4).unwrap(), 0.0);

        assert!(gauge(&z, 2).is_err());
    }

    #[test]
    fn membership_examples() {
        let r3 = apothem(3).unwrap();
        assert!(membership_oracle(Complex64::new(0.99 * r3, 0.0), 1.0, 3).unwrap());
        assert!(!membership_oracle(Complex64::new(1.01, 0.0), 1.0, 8).unwrap());
        let just_out = Complex64::from_polar(apothem(5).unwrap() + 1e-6, PI / 5.0);
        assert!(!membership_oracle(just_out, 1.0, 5).unwrap());
        assert!(membership_oracle(Complex64::new(0.0, 0.0), 1.0, 5).unwrap());
        assert!(membership_oracle(Complex64::new(0.1, 0.0), 1.0, 2).is_err());
        assert!(membership_oracle(Complex64::new(0.1, 0.0), 0.0, 4).is_err());
    }

    #[test]
    fn vertices_have_unit_gauge() {
        for order in [3u32, 4, 5, 8, 16] {
            for v in roots_of_unity(order).unwrap() {
                assert!((gauge(&[v], order).unwrap() - 1.0).abs() < 1e-12);
            }
        }
    }
}
