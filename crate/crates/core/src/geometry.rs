//! Helicoid embedding, metric and curvature, plus the curvature-induced
//! potential felt by a particle squeezed onto the surface.
//!
//! The radial coordinate runs over the whole real line, so the surface is the
//! two-sided ribbon and the parity operator `rho -> -rho` is a symmetry.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Helicoid `(rho cos(omega z), rho sin(omega z), z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Helicoid {
    /// Twist rate in radians per unit length.
    pub omega: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceCoords {
    pub rho: f64,
    pub z: f64,
}

impl SurfaceCoords {
    pub fn new(rho: f64, z: f64) -> Self {
        Self { rho, z }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvaturePair {
    pub kappa1: f64,
    pub kappa2: f64,
    pub mean: f64,
    pub gaussian: f64,
}

impl CurvaturePair {
    pub fn from_principal(kappa1: f64, kappa2: f64) -> Self {
        Self {
            kappa1,
            kappa2,
            mean: 0.5 * (kappa1 + kappa2),
            gaussian: kappa1 * kappa2,
        }
    }

    /// Principal curvatures sorted in descending order.
    pub fn sorted(&self) -> (f64, f64) {
        if self.kappa1 >= self.kappa2 {
            (self.kappa1, self.kappa2)
        } else {
            (self.kappa2, self.kappa1)
        }
    }
}

/// First fundamental form `[[E, F], [F, G]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metric {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
}

impl Metric {
    pub fn det(&self) -> f64 {
        self.g11 * self.g22 - self.g12 * self.g12
    }

    pub fn as_matrix(&self) -> [[f64; 2]; 2] {
        [[self.g11, self.g12], [self.g12, self.g22]]
    }
}

impl Helicoid {
    pub fn new(omega: f64) -> Self {
        Self { omega }
    }

    /// Helicoid with `twists` complete turns per unit length.
    pub fn from_twists(twists: f64) -> Self {
        Self { omega: TAU * twists }
    }

    pub fn twists(&self) -> f64 {
        self.omega / TAU
    }

    pub fn embed(&self, p: SurfaceCoords) -> [f64; 3] {
        let angle = self.omega * p.z;
        [p.rho * angle.cos(), p.rho * angle.sin(), p.z]
    }

    pub fn metric(&self, rho: f64) -> Metric {
        Metric {
            g11: 1.0,
            g12: 0.0,
            g22: 1.0 + self.omega * self.omega * rho * rho,
        }
    }

    /// `kappa1 = omega / (1 + omega^2 rho^2)`, `kappa2 = -kappa1`.
    pub fn principal_curvatures(&self, rho: f64) -> CurvaturePair {
        let k = self.omega / (1.0 + self.omega * self.omega * rho * rho);
        CurvaturePair {
            kappa1: k,
            kappa2: -k,
            mean: 0.0,
            gaussian: -k * k,
        }
    }

    /// Geometric potential `-(hbar^2 / 2 M2) (M^2 - K)` for normal mass `m2`.
    ///
    /// On the helicoid this is `-(hbar^2 / 2 M2) omega^2 / (1 + omega^2 rho^2)^2`.
    /// A negative normal mass flips the sign and makes the potential repulsive.
    pub fn geometric_potential(&self, m2: f64, hbar: f64, rho: f64) -> Result<f64> {
        if m2 == 0.0 {
            return Err(Error::ZeroMass);
        }
        let c = self.principal_curvatures(rho);
        Ok(-(hbar * hbar) / (2.0 * m2) * (c.mean * c.mean - c.gaussian))
    }
}

pub const DEFAULT_CURVATURE_STEP: f64 = 1e-4;

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Curvatures of an arbitrary parametrized surface by central differences.
///
/// Both fundamental forms are assembled from difference quotients with the
/// same `step` in both coordinates, and the Weingarten matrix `I^-1 II` is
/// diagonalized as a 2x2 eigenproblem. Agrees with the analytic curvatures to
/// `O(step^2)`; the sign of the pair follows the orientation of `r_u x r_v`.
pub fn numeric_curvatures<F>(embedding: F, p: SurfaceCoords, step: f64) -> Result<CurvaturePair>
where
    F: Fn(f64, f64) -> [f64; 3],
{
    if !(step > 0.0) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {step}")));
    }
    let (u, v, h) = (p.rho, p.z, step);
    let r = |du: f64, dv: f64| embedding(u + du * h, v + dv * h);

    let c = r(0.0, 0.0);
    let (up, um) = (r(1.0, 0.0), r(-1.0, 0.0));
    let (vp, vm) = (r(0.0, 1.0), r(0.0, -1.0));

    let ru = scale(sub(up, um), 0.5 / h);
    let rv = scale(sub(vp, vm), 0.5 / h);
    let ruu = scale(sub(add(up, um), scale(c, 2.0)), 1.0 / (h * h));
    let rvv = scale(sub(add(vp, vm), scale(c, 2.0)), 1.0 / (h * h));
    let ruv = scale(
        sub(add(r(1.0, 1.0), r(-1.0, -1.0)), add(r(1.0, -1.0), r(-1.0, 1.0))),
        0.25 / (h * h),
    );

    let first = Metric {
        g11: dot(ru, ru),
        g12: dot(ru, rv),
        g22: dot(rv, rv),
    };
    let det_i = first.det();
    if !(det_i > 0.0) {
        return Err(Error::DegenerateMetric(det_i));
    }

    let n = cross(ru, rv);
    let n = scale(n, 1.0 / dot(n, n).sqrt());
    let (l, m, nn) = (dot(ruu, n), dot(ruv, n), dot(rvv, n));

    // shape operator I^-1 II
    let inv = 1.0 / det_i;
    let a11 = inv * (first.g22 * l - first.g12 * m);
    let a12 = inv * (first.g22 * m - first.g12 * nn);
    let a21 = inv * (first.g11 * m - first.g12 * l);
    let a22 = inv * (first.g11 * nn - first.g12 * m);

    let half_trace = 0.5 * (a11 + a22);
    let det = a11 * a22 - a12 * a21;
    // eigenvalues of a self-adjoint (w.r.t. I) operator are real
    let disc = (half_trace * half_trace - det).max(0.0).sqrt();
    Ok(CurvaturePair {
        kappa1: half_trace + disc,
        kappa2: half_trace - disc,
        mean: half_trace,
        gaussian: det,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn embed_examples() {
        let h = Helicoid::new(1.0);
        assert_eq!(h.embed(SurfaceCoords::new(0.0, 5.0)), [0.0, 0.0, 5.0]);
        assert_eq!(h.embed(SurfaceCoords::new(2.0, 0.0)), [2.0, 0.0, 0.0]);

        let h = Helicoid::from_twists(0.5);
        assert!((h.omega - PI).abs() < 1e-15);
        let p = h.embed(SurfaceCoords::new(1.0, 0.25));
        assert!((p[0] - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((p[1] - FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(p[2], 0.25);
    }

    #[test]
    fn metric_examples() {
        assert_eq!(Helicoid::new(1.0).metric(0.0).as_matrix(), [[1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(Helicoid::new(0.0).metric(7.3).as_matrix(), [[1.0, 0.0], [0.0, 1.0]]);
        let g = Helicoid::new(1.0).metric(2.0);
        assert_eq!(g.as_matrix(), [[1.0, 0.0], [0.0, 5.0]]);
        assert_eq!(g.det(), 5.0);
    }

    #[test]
    fn curvature_examples() {
        let c = Helicoid::new(1.0).principal_curvatures(0.0);
        assert_eq!((c.kappa1, c.kappa2, c.mean, c.gaussian), (1.0, -1.0, 0.0, -1.0));

        let c = Helicoid::new(0.0).principal_curvatures(3.0);
        assert_eq!((c.kappa1, c.kappa2, c.mean), (0.0, 0.0, 0.0));
        assert_eq!(c.gaussian, 0.0);

        let c = Helicoid::new(1.0).principal_curvatures(2.0);
        assert!((c.kappa1 - 0.2).abs() < 1e-15);
        assert!((c.kappa2 + 0.2).abs() < 1e-15);
        assert!((c.gaussian + 0.04).abs() < 1e-15);
    }

    #[test]
    fn geometric_potential_examples() {
        let h = Helicoid::new(1.0);
        assert_eq!(h.geometric_potential(1.0, 1.0, 0.0).unwrap(), -0.5);
        assert_eq!(Helicoid::new(0.0).geometric_potential(1.0, 1.0, 1.0).unwrap(), 0.0);
        assert!((h.geometric_potential(-0.01, 1.0, 0.0).unwrap() - 50.0).abs() < 1e-12);
        assert_eq!(h.geometric_potential(0.0, 1.0, 0.0), Err(Error::ZeroMass));
    }

    #[test]
    fn numeric_helicoid_is_minimal() {
        let h = Helicoid::new(1.0);
        let c = numeric_curvatures(|u, v| h.embed(SurfaceCoords::new(u, v)), SurfaceCoords::new(0.7, 0.3), 1e-4)
            .unwrap();
        assert!(c.mean.abs() < 1e-6);
    }

    #[test]
    fn numeric_plane_and_sphere() {
        let plane = |u: f64, v: f64| [u, v, 0.0];
        let c = numeric_curvatures(plane, SurfaceCoords::new(0.4, -1.2), 1e-4).unwrap();
        assert!(c.kappa1.abs() < 1e-9 && c.kappa2.abs() < 1e-9);

        let radius = 2.0;
        let sphere = |u: f64, v: f64| {
            [radius * u.sin() * v.cos(), radius * u.sin() * v.sin(), radius * u.cos()]
        };
        for &(u, v) in &[(0.7, 0.3), (1.3, -2.0), (2.2, 4.0)] {
            let c = numeric_curvatures(sphere, SurfaceCoords::new(u, v), 1e-4).unwrap();
            assert!((c.gaussian - 0.25).abs() < 1e-6, "{c:?}");
            assert!((c.mean.abs() - 0.5).abs() < 1e-6);
        }
    }

    #[test]
    fn numeric_degenerate_metric() {
        let line = |u: f64, _v: f64| [u, 0.0, 0.0];
        assert!(matches!(
            numeric_curvatures(line, SurfaceCoords::new(0.0, 0.0), 1e-4),
            Err(Error::DegenerateMetric(_))
        ));
        assert!(numeric_curvatures(line, SurfaceCoords::new(0.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn arc_length_along_constant_z_is_delta_rho() {
        let h = Helicoid::new(1.7);
        let (a, b) = (h.embed(SurfaceCoords::new(-0.3, 0.8)), h.embed(SurfaceCoords::new(1.9, 0.8)));
        let d = sub(b, a);
        assert!((dot(d, d).sqrt() - 2.2).abs() < 1e-14);
    }
}
