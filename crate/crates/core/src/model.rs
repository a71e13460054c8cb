//! Physical configuration and the effective radial potential.
//!
//! After separating `chi = exp(i m omega z) f(rho)` and absorbing the metric
//! factor, the radial problem is a 1D Schrödinger equation
//! `-(hbar^2 / 2 M1) f'' + V_eff f = E f` with
//!
//! ```text
//! V_eff = hbar^2/(2 M1) [ m^2 w^2/(1+w^2 r^2)
//!                         - w^2/(2 (1+w^2 r^2)^2) (w^2 r^2/2 + 2 M1/M2 - 1) ]
//!         + M1 Omega^2 r^2 / 2
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Surface mass `m1` (tangent to the helicoid) and normal mass `m2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassPair {
    pub m1: f64,
    pub m2: f64,
}

impl MassPair {
    pub fn new(m1: f64, m2: f64) -> Result<Self> {
        if !(m1 > 0.0) || !m1.is_finite() {
            return Err(Error::NonPositiveSurfaceMass(m1));
        }
        if m2 == 0.0 || !m2.is_finite() {
            return Err(Error::ZeroMass);
        }
        Ok(Self { m1, m2 })
    }

    pub fn isotropic(m: f64) -> Result<Self> {
        Self::new(m, m)
    }

    /// `M1 / M2`.
    pub fn ratio(&self) -> f64 {
        self.m1 / self.m2
    }

    /// Anisotropy parameter `x = sqrt(4 M1/M2 + 1)`.
    pub fn anisotropy_x(&self) -> Result<f64> {
        let arg = 4.0 * self.ratio() + 1.0;
        if arg < 0.0 {
            return Err(Error::ComplexAnisotropy(arg));
        }
        Ok(arg.sqrt())
    }
}

/// Full physical configuration of the radial problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub hbar: f64,
    /// Helicoid twist rate.
    pub omega: f64,
    /// Oscillator angular frequency.
    #[serde(rename = "Omega")]
    pub frequency: f64,
    /// Angular quantum number. Only `m^2` enters, so negative values are accepted.
    pub m: i64,
    pub masses: MassPair,
}

impl ModelParams {
    /// Natural units `hbar = omega = Omega = 1`.
    pub fn natural(masses: MassPair, m: i64) -> Self {
        Self {
            hbar: 1.0,
            omega: 1.0,
            frequency: 1.0,
            m,
            masses,
        }
    }

    pub fn with_frequency(mut self, frequency: f64) -> Self {
        self.frequency = frequency;
        self
    }

    pub fn with_m(mut self, m: i64) -> Self {
        self.m = m;
        self
    }

    pub fn effective_potential(&self, rho: f64) -> f64 {
        let MassPair { m1, m2 } = self.masses;
        let w2 = self.omega * self.omega;
        let u = w2 * rho * rho;
        let m_sq = (self.m * self.m) as f64;
        let bracket = m_sq * w2 / (1.0 + u)
            - w2 / (2.0 * (1.0 + u) * (1.0 + u)) * (0.5 * u + 2.0 * m1 / m2 - 1.0);
        self.hbar * self.hbar / (2.0 * m1) * bracket + self.oscillator(rho)
    }

    /// `M1 Omega^2 rho^2 / 2`.
    pub fn oscillator(&self, rho: f64) -> f64 {
        0.5 * self.masses.m1 * self.frequency * self.frequency * rho * rho
    }

    pub fn potential_profile(&self, grid: &[f64]) -> Result<PotentialProfile> {
        check_increasing(grid)?;
        Ok(PotentialProfile {
            rho: grid.to_vec(),
            value: grid.iter().map(|&r| self.effective_potential(r)).collect(),
        })
    }
}

/// Samples of `V_eff` on an increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialProfile {
    pub rho: Vec<f64>,
    pub value: Vec<f64>,
}

impl PotentialProfile {
    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    pub fn rows(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.rho.iter().copied().zip(self.value.iter().copied())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub rho: f64,
    pub value: f64,
}

/// Interior strict local minima by three-point comparison.
///
/// A run of equal samples counts once, located at its leftmost sample, when
/// both neighbours of the run are strictly higher. Profiles shorter than three
/// samples have no interior minima.
pub fn classify_minima(profile: &PotentialProfile) -> Vec<Minimum> {
    let v = &profile.value;
    let n = v.len();
    let mut out = Vec::new();
    if n < 3 {
        return out;
    }
    let mut i = 1;
    while i < n - 1 {
        let mut j = i;
        while j + 1 < n - 1 && v[j + 1] == v[i] {
            j += 1;
        }
        if v[i - 1] > v[i] && v[j + 1] > v[i] {
            out.push(Minimum {
                rho: profile.rho[i],
                value: v[i],
            });
        }
        i = j + 1;
    }
    out
}

pub const DEFAULT_MINIMA_STEP: f64 = 1e-3;
pub const DEFAULT_MINIMA_RANGE: (f64, f64) = (-6.0, 6.0);

/// `lo, lo + step, ..., hi` with the sample count rounded to the nearest
/// integer number of steps; samples are computed as `lo + i * step` so a grid
/// symmetric about zero contains `0.0` exactly.
pub fn uniform_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(hi >= lo) {
        return Err(Error::InvalidGrid(format!("[{lo}, {hi}] with step {step}")));
    }
    let n = ((hi - lo) / step).round() as usize;
    Ok((0..=n)
        .map(|i| {
            let k = i as f64 - n as f64 / 2.0;
            // centre-referenced so symmetric ranges mirror exactly
            0.5 * (lo + hi) + k * step
        })
        .collect())
}

/// `count` equispaced samples on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    match count {
        0 => Err(Error::InvalidGrid("empty grid".into())),
        1 => Ok(vec![lo]),
        _ => {
            let h = (hi - lo) / (count - 1) as f64;
            let mid = 0.5 * (lo + hi);
            let c = (count - 1) as f64 / 2.0;
            Ok((0..count).map(|i| mid + (i as f64 - c) * h).collect())
        }
    }
}

fn check_increasing(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid("grid must be strictly increasing".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iso(m: i64) -> ModelParams {
        ModelParams::natural(MassPair::isotropic(1.0).unwrap(), m)
    }

    #[test]
    fn mass_validation() {
        assert_eq!(MassPair::new(0.0, 1.0), Err(Error::NonPositiveSurfaceMass(0.0)));
        assert_eq!(MassPair::new(-1.0, 1.0), Err(Error::NonPositiveSurfaceMass(-1.0)));
        assert_eq!(MassPair::new(1.0, 0.0), Err(Error::ZeroMass));
    }

    #[test]
    fn anisotropy_examples() {
        let x = MassPair::new(1.0, 1.0).unwrap().anisotropy_x().unwrap();
        assert!((x - 2.236_067_977_499_79).abs() < 1e-14);
        assert_eq!(MassPair::new(1.0, -4.0).unwrap().anisotropy_x().unwrap(), 0.0);
        assert_eq!(
            MassPair::new(1.0, -2.0).unwrap().anisotropy_x(),
            Err(Error::ComplexAnisotropy(-1.0))
        );
    }

    #[test]
    fn effective_potential_examples() {
        assert!((iso(0).effective_potential(0.0) + 0.25).abs() < 1e-15);
        assert!((iso(2).effective_potential(0.0) - 1.75).abs() < 1e-15);
        for m in 0..4 {
            let flat = ModelParams { omega: 0.0, ..iso(m) };
            assert_eq!(flat.effective_potential(2.0), 2.0);
        }
    }

    #[test]
    fn profile_preserves_grid() {
        let p = iso(3);
        let prof = p.potential_profile(&[0.0]).unwrap();
        assert_eq!(prof.value, vec![p.effective_potential(0.0)]);
        assert!(p.potential_profile(&[]).is_err());
        assert!(p.potential_profile(&[0.0, 0.0]).is_err());
        assert!(p.potential_profile(&[1.0, 0.0]).is_err());
    }

    #[test]
    fn minima_of_parabola() {
        let grid = uniform_grid(-2.0, 2.0, 0.01).unwrap();
        let prof = PotentialProfile {
            value: grid.iter().map(|r| r * r).collect(),
            rho: grid,
        };
        let mins = classify_minima(&prof);
        assert_eq!(mins.len(), 1);
        assert_eq!(mins[0].rho, 0.0);
    }

    #[test]
    fn minima_plateau_reports_leftmost() {
        let prof = PotentialProfile {
            rho: vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0],
            value: vec![3.0, 1.0, 1.0, 1.0, 2.0, 0.0],
        };
        let mins = classify_minima(&prof);
        assert_eq!(mins, vec![Minimum { rho: 1.0, value: 1.0 }]);
        let short = PotentialProfile { rho: vec![0.0, 1.0], value: vec![1.0, 0.0] };
        assert!(classify_minima(&short).is_empty());
    }

    // Scan of V_eff on [-6, 6] at step 1e-3 (natural units), computed
    // independently with numpy; locations rounded to the grid.
    #[test]
    fn narrow_ring_minima_for_isotropic_m4() {
        let grid = uniform_grid(-6.0, 6.0, DEFAULT_MINIMA_STEP).unwrap();
        let mins = classify_minima(&iso(4).potential_profile(&grid).unwrap());
        assert_eq!(mins.len(), 2);
        assert!((mins[0].rho + 1.718).abs() < 1e-9);
        assert!((mins[1].rho - 1.718).abs() < 1e-9);
    }

    #[test]
    fn anisotropic_two_well_profiles() {
        let grid = uniform_grid(-6.0, 6.0, DEFAULT_MINIMA_STEP).unwrap();
        let masses = MassPair::new(0.2, 0.01).unwrap();
        let count = |m| {
            classify_minima(&ModelParams::natural(masses, m).potential_profile(&grid).unwrap())
                .into_iter()
                .filter(|mn| mn.rho >= 0.0)
                .map(|mn| mn.rho)
                .collect::<Vec<_>>()
        };
        // m = 2 keeps a single well at the origin; the second (ring) well
        // opens up from m = 3.
        assert_eq!(count(2), vec![0.0]);
        let m3 = count(3);
        assert_eq!(m3.len(), 2);
        assert!((m3[1] - 3.267).abs() < 1e-9);
    }

    #[test]
    fn uniform_grid_contains_zero() {
        let g = uniform_grid(-6.0, 6.0, 1e-3).unwrap();
        assert_eq!(g.len(), 12001);
        assert_eq!(g[6000], 0.0);
        assert_eq!(g[0], -6.0);
        assert_eq!(g[12000], 6.0);
        for i in 0..g.len() {
            assert_eq!(g[i], -g[g.len() - 1 - i]);
        }
    }
}
