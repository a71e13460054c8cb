//! Finite-difference eigensolver for the radial equation.
//!
//! Central differences on a symmetric grid with Dirichlet walls at `+-L` give a
//! symmetric tridiagonal matrix. Eigenvalues come from Sturm-sequence
//! bisection, eigenvectors from inverse iteration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{linspace, ModelParams};
use crate::spectrum::Parity;

pub const DEFAULT_POINTS: usize = 6001;
pub const MIN_HALF_WIDTH: f64 = 12.0;
pub const BISECTION_TOLERANCE: f64 = 1e-12;
pub const MAX_INVERSE_ITERATIONS: usize = 50;
const MIN_INVERSE_ITERATIONS: usize = 3;
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;
pub const PARITY_TOLERANCE: f64 = 1e-6;
/// How far a requested energy may sit from an eigenvalue (scaled by `max(1, |E|)`).
pub const EIGENVALUE_MATCH: f64 = 1e-6;

const START_SEED: u64 = 0x5eed_cafe;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub half_width: f64,
    pub points: usize,
}

impl RadialGrid {
    pub fn new(half_width: f64, points: usize) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidGrid(format!("half width {half_width} must be positive")));
        }
        if points < 3 || points.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("point count {points} must be odd and at least 3")));
        }
        Ok(Self { half_width, points })
    }

    /// `L = max(12, 6/sqrt(varpi))` with `varpi = M1 Omega / hbar`, and 6001 points.
    pub fn default_for(p: &ModelParams) -> Result<Self> {
        Self::new(default_half_width(p)?, DEFAULT_POINTS)
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.points - 1) as f64
    }

    /// All nodes including the two walls. The centre node is exactly zero.
    pub fn nodes(&self) -> Vec<f64> {
        let mut v = linspace(-self.half_width, self.half_width, self.points).expect("validated grid");
        v[self.points / 2] = 0.0;
        v
    }

    /// Same width, spacing halved.
    pub fn refined(&self) -> Self {
        Self { half_width: self.half_width, points: 2 * self.points - 1 }
    }
}

pub fn default_half_width(p: &ModelParams) -> Result<f64> {
    let varpi = p.masses.m1 * p.frequency / p.hbar;
    if !(varpi > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "no default width without confinement (M1 Omega/hbar = {varpi})"
        )));
    }
    Ok(MIN_HALF_WIDTH.max(6.0 / varpi.sqrt()))
}

/// Symmetric tridiagonal matrix on the interior nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteOperator {
    pub grid: RadialGrid,
    pub rho: Vec<f64>,
    pub diagonal: Vec<f64>,
    pub off_diagonal: f64,
}

impl DiscreteOperator {
    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let e = self.off_diagonal;
        (0..n)
            .map(|i| {
                let mut s = self.diagonal[i] * v[i];
                if i > 0 {
                    s += e * v[i - 1];
                }
                if i + 1 < n {
                    s += e * v[i + 1];
                }
                s
            })
            .collect()
    }

    /// Whether the diagonal reads the same in reverse.
    pub fn is_mirror_symmetric(&self) -> bool {
        self.diagonal.iter().eq(self.diagonal.iter().rev())
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn spectral_bounds(&self) -> (f64, f64) {
        let r = 2.0 * self.off_diagonal.abs();
        let (lo, hi) = self
            .diagonal
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &d| (lo.min(d), hi.max(d)));
        (lo - r, hi + r)
    }
}

pub fn discretize(p: &ModelParams, grid: RadialGrid) -> Result<DiscreteOperator> {
    let h = grid.spacing();
    let kinetic = p.hbar * p.hbar / (p.masses.m1 * h * h);
    let nodes = grid.nodes();
    let rho = nodes[1..nodes.len() - 1].to_vec();
    let diagonal: Vec<f64> = rho.iter().map(|&r| kinetic + p.effective_potential(r)).collect();
    if let Some(i) = diagonal.iter().position(|d| !d.is_finite()) {
        return Err(Error::InvalidArgument(format!("effective potential not finite at rho = {}", rho[i])));
    }
    Ok(DiscreteOperator { grid, rho, diagonal, off_diagonal: -0.5 * kinetic })
}

/// Number of eigenvalues strictly below `sigma`.
pub fn sturm_count(op: &DiscreteOperator, sigma: f64) -> usize {
    let e2 = op.off_diagonal * op.off_diagonal;
    let tiny = f64::EPSILON * op.off_diagonal.abs().max(f64::MIN_POSITIVE);
    let mut count = 0;
    let mut q = 1.0;
    for (i, &d) in op.diagonal.iter().enumerate() {
        q = if i == 0 { d - sigma } else { d - sigma - e2 / q };
        if q == 0.0 {
            q = -tiny;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k` smallest eigenvalues, ascending.
pub fn lowest_eigenvalues(op: &DiscreteOperator, k: usize) -> Result<Vec<f64>> {
    if k == 0 || k > op.dim() {
        return Err(Error::InvalidArgument(format!("k = {k} outside 1..={}", op.dim())));
    }
    let (lo0, hi0) = op.spectral_bounds();
    let mut out = Vec::with_capacity(k);
    let mut floor = lo0;
    for j in 0..k {
        let (mut lo, mut hi) = (floor, hi0);
        while hi - lo > BISECTION_TOLERANCE {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if sturm_count(op, mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let ev = 0.5 * (lo + hi);
        out.push(ev);
        floor = lo;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    /// Rayleigh quotient of the polished vector.
    pub energy: f64,
    pub rho: Vec<f64>,
    /// Interior values, unit Euclidean norm, largest component positive.
    pub values: Vec<f64>,
    pub parity: Option<Parity>,
    pub nodes: usize,
    /// `||(H - E) f|| / ||f||`.
    pub residual: f64,
    pub grid: RadialGrid,
}

pub fn eigenfunction(op: &DiscreteOperator, energy: f64) -> Result<Eigenpair> {
    let n = op.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    normalize(&mut v);
    let lu = ShiftedLu::factor(op, energy);

    let mut lambda = energy;
    let mut residual = f64::INFINITY;
    for it in 0..MAX_INVERSE_ITERATIONS {
        v = lu.solve(&v);
        if !normalize(&mut v) {
            break;
        }
        (lambda, residual) = rayleigh(op, &v);
        // extra sweeps suppress a nearly degenerate partner, which barely moves the residual
        if it >= MIN_INVERSE_ITERATIONS && residual <= 1e-3 * RESIDUAL_TOLERANCE {
            break;
        }
    }
    // Rounding leaves a trace of a nearly degenerate partner of opposite parity
    // (about eps ||H|| / gap). On a mirror-symmetric operator the dominant
    // parity component is itself an eigenvector; keep it when it passes.
    if op.is_mirror_symmetric() {
        let mut part = dominant_parity_part(&v);
        if normalize(&mut part) {
            let (l, r) = rayleigh(op, &part);
            if r <= RESIDUAL_TOLERANCE {
                (v, lambda, residual) = (part, l, r);
            }
        }
    }
    if !(residual <= RESIDUAL_TOLERANCE) || (lambda - energy).abs() > EIGENVALUE_MATCH * energy.abs().max(1.0) {
        return Err(Error::NotAnEigenvalue { energy, residual });
    }

    let imax = (0..n).max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs())).unwrap_or(0);
    if v[imax] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    Ok(Eigenpair {
        energy: lambda,
        rho: op.rho.clone(),
        parity: classify_parity(&v),
        nodes: count_nodes(&v),
        values: v,
        residual,
        grid: op.grid,
    })
}

fn rayleigh(op: &DiscreteOperator, v: &[f64]) -> (f64, f64) {
    let hv = op.apply(v);
    let lambda = dot(v, &hv);
    let residual = hv.iter().zip(v).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt();
    (lambda, residual)
}

/// `(v + Rv)/2` or `(v - Rv)/2`, whichever carries more weight.
fn dominant_parity_part(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let even: Vec<f64> = (0..n).map(|i| 0.5 * (v[i] + v[n - 1 - i])).collect();
    let odd: Vec<f64> = (0..n).map(|i| 0.5 * (v[i] - v[n - 1 - i])).collect();
    if dot(&even, &even) >= dot(&odd, &odd) {
        even
    } else {
        odd
    }
}

/// Even or odd when mirrored samples agree to `1e-6` of the peak; `None` otherwise.
pub fn classify_parity(v: &[f64]) -> Option<Parity> {
    let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if peak == 0.0 {
        return None;
    }
    let n = v.len();
    let (mut even, mut odd) = (0.0f64, 0.0f64);
    for i in 0..n / 2 + 1 {
        let (a, b) = (v[i], v[n - 1 - i]);
        even = even.max((a - b).abs());
        odd = odd.max((a + b).abs());
    }
    if even <= PARITY_TOLERANCE * peak {
        Some(Parity::Even)
    } else if odd <= PARITY_TOLERANCE * peak {
        Some(Parity::Odd)
    } else {
        None
    }
}

/// Sign changes, ignoring samples below `1e-8` of the peak.
pub fn count_nodes(v: &[f64]) -> usize {
    let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let floor = 1e-8 * peak;
    let mut last = 0.0f64;
    let mut nodes = 0;
    for &x in v {
        if x.abs() <= floor {
            continue;
        }
        if last != 0.0 && x.signum() != last.signum() {
            nodes += 1;
        }
        last = x;
    }
    nodes
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> bool {
    let norm = dot(v, v).sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= norm);
    true
}

/// LU factors of `T - sigma I` with partial pivoting.
///
/// Row swaps in a tridiagonal matrix fill one extra superdiagonal, so `U`
/// keeps three bands.
struct ShiftedLu {
    u0: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
    mult: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(op: &DiscreteOperator, sigma: f64) -> Self {
        let n = op.dim();
        let e = op.off_diagonal;
        let tiny = f64::EPSILON * e.abs().max(1.0);
        let mut u0 = vec![0.0; n];
        let mut u1 = vec![0.0; n];
        let mut u2 = vec![0.0; n];
        let mut mult = vec![0.0; n];
        let mut swapped = vec![false; n];

        // current row i: (a, b, c) at columns i, i+1, i+2
        let mut a = op.diagonal[0] - sigma;
        let mut b = if n > 1 { e } else { 0.0 };
        let mut c = 0.0;
        for i in 0..n {
            if i + 1 == n {
                u0[i] = if a == 0.0 { tiny } else { a };
                u1[i] = 0.0;
                u2[i] = 0.0;
                break;
            }
            // next row: (sub, diag, sup) at columns i, i+1, i+2
            let sub = e;
            let diag = op.diagonal[i + 1] - sigma;
            let sup = if i + 2 < n { e } else { 0.0 };
            if sub.abs() > a.abs() {
                swapped[i] = true;
                u0[i] = sub;
                u1[i] = diag;
                u2[i] = sup;
                let l = a / sub;
                mult[i] = l;
                a = b - l * diag;
                b = c - l * sup;
            } else {
                let piv = if a == 0.0 { tiny } else { a };
                u0[i] = piv;
                u1[i] = b;
                u2[i] = c;
                let l = sub / piv;
                mult[i] = l;
                a = diag - l * b;
                b = sup - l * c;
            }
            c = 0.0;
        }
        Self { u0, u1, u2, mult, swapped }
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = rhs.len();
        let mut y = rhs.to_vec();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                y.swap(i, i + 1);
            }
            y[i + 1] -= self.mult[i] * y[i];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = y[i];
            if i + 1 < n {
                s -= self.u1[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= self.u2[i] * x[i + 2];
            }
            x[i] = s / self.u0[i];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::MassPair;

    fn oscillator(frequency: f64) -> ModelParams {
        ModelParams {
            hbar: 1.0,
            omega: 0.0,
            frequency,
            m: 0,
            masses: MassPair::isotropic(1.0).unwrap(),
        }
    }

    #[allow(clippy::needless_range_loop)]
    fn dense_solve(op: &DiscreteOperator, sigma: f64, rhs: &[f64]) -> Vec<f64> {
        let n = op.dim();
        let mut a = vec![vec![0.0; n + 1]; n];
        for i in 0..n {
            a[i][i] = op.diagonal[i] - sigma;
            if i > 0 {
                a[i][i - 1] = op.off_diagonal;
            }
            if i + 1 < n {
                a[i][i + 1] = op.off_diagonal;
            }
            a[i][n] = rhs[i];
        }
        for k in 0..n {
            let p = (k..n).max_by(|&x, &y| a[x][k].abs().total_cmp(&a[y][k].abs())).unwrap();
            a.swap(k, p);
            for r in k + 1..n {
                let f = a[r][k] / a[k][k];
                for c in k..=n {
                    a[r][c] -= f * a[k][c];
                }
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
            x[i] = (a[i][n] - s) / a[i][i];
        }
        x
    }

    #[test]
    fn grid_validation() {
        assert!(RadialGrid::new(1.0, 4).is_err());
        assert!(RadialGrid::new(1.0, 1).is_err());
        assert!(RadialGrid::new(0.0, 5).is_err());
        let g = RadialGrid::new(2.0, 5).unwrap();
        assert_eq!(g.nodes(), vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert_eq!(g.refined().points, 9);
        assert_eq!(RadialGrid::default_for(&oscillator(1.0)).unwrap().half_width, 12.0);
        assert_eq!(RadialGrid::default_for(&oscillator(0.01)).unwrap().half_width, 60.0);
        assert!(RadialGrid::default_for(&oscillator(-1.0)).is_err());
    }

    #[test]
    fn lu_matches_dense_elimination() {
        let p = ModelParams::natural(MassPair::isotropic(1.0).unwrap(), 2);
        let op = discretize(&p, RadialGrid::new(3.0, 41).unwrap()).unwrap();
        let rhs: Vec<f64> = (0..op.dim()).map(|i| (i as f64 * 0.37).sin()).collect();
        for sigma in [-3.0, 0.7, 150.0, 400.0] {
            let a = ShiftedLu::factor(&op, sigma).solve(&rhs);
            let b = dense_solve(&op, sigma, &rhs);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-9 * y.abs().max(1.0), "{sigma}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn operator_structure() {
        let p = ModelParams::natural(MassPair::isotropic(1.0).unwrap(), 2);
        let op = discretize(&p, RadialGrid::new(6.0, 1201).unwrap()).unwrap();
        let n = op.dim();
        for i in 0..n {
            assert_eq!(op.diagonal[i], op.diagonal[n - 1 - i]);
        }
        let imin = (0..n).min_by(|&a, &b| op.diagonal[a].total_cmp(&op.diagonal[b])).unwrap();
        assert!((op.rho[imin].abs() - 0.931).abs() <= op.grid.spacing());
    }

    #[test]
    fn oscillator_levels() {
        let op = discretize(&oscillator(1.0), RadialGrid::new(10.0, 6001).unwrap()).unwrap();
        let ev = lowest_eigenvalues(&op, 3).unwrap();
        for (i, e) in ev.iter().enumerate() {
            assert!((e - (i as f64 + 0.5)).abs() < 1e-5, "{i}: {e}");
        }
        let g = eigenfunction(&op, ev[0]).unwrap();
        assert_eq!((g.parity, g.nodes), (Some(Parity::Even), 0));
        let x = eigenfunction(&op, ev[1]).unwrap();
        assert_eq!((x.parity, x.nodes), (Some(Parity::Odd), 1));
        assert!(x.residual <= RESIDUAL_TOLERANCE);
    }

    #[test]
    fn box_ground_state() {
        let op = discretize(&oscillator(0.0), RadialGrid::new(1.0, 4001).unwrap()).unwrap();
        let e = lowest_eigenvalues(&op, 1).unwrap()[0];
        assert!((e - std::f64::consts::PI.powi(2) / 8.0).abs() < 1e-5);
    }

    #[test]
    fn sturm_count_brackets() {
        let op = discretize(&oscillator(1.0), RadialGrid::new(10.0, 801).unwrap()).unwrap();
        let ev = lowest_eigenvalues(&op, 4).unwrap();
        assert_eq!(sturm_count(&op, ev[0] - 1e-6), 0);
        assert_eq!(sturm_count(&op, ev[0] + 1e-6), 1);
        assert_eq!(sturm_count(&op, ev[3] + 1e-6), 4);
        let (lo, hi) = op.spectral_bounds();
        assert_eq!(sturm_count(&op, lo), 0);
        assert_eq!(sturm_count(&op, hi), op.dim());
        assert!(lowest_eigenvalues(&op, 0).is_err());
    }

    #[test]
    fn contains_ground_line() {
        let p = ModelParams::natural(MassPair::isotropic(1.0).unwrap(), 2).with_frequency(0.326_237_921_249_263_93);
        let op = discretize(&p, RadialGrid::new(12.0, 6001).unwrap()).unwrap();
        let ev = lowest_eigenvalues(&op, 3).unwrap();
        assert!(ev.iter().any(|e| ((e - 0.854_101_966_249_684_5) / 0.854_101_966_249_684_5).abs() < 1e-4));
    }

    #[test]
    fn rejects_non_eigenvalue() {
        let op = discretize(&oscillator(1.0), RadialGrid::new(10.0, 801).unwrap()).unwrap();
        assert!(matches!(eigenfunction(&op, 1.0), Err(Error::NotAnEigenvalue { .. })));
    }

    #[test]
    fn parity_and_nodes_helpers() {
        assert_eq!(classify_parity(&[1.0, 2.0, 1.0]), Some(Parity::Even));
        assert_eq!(classify_parity(&[-1.0, 0.0, 1.0]), Some(Parity::Odd));
        assert_eq!(classify_parity(&[1.0, 0.0, 0.5]), None);
        assert_eq!(count_nodes(&[1.0, -1.0, 1e-20, 1.0, 0.5]), 2);
    }
}
