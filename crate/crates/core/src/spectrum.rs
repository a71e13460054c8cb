//! Quantized levels from polynomial termination of the confluent Heun series.
//!
//! The radial equation maps onto the confluent Heun equation in
//! `z = -omega^2 rho^2` with
//!
//! ```text
//! alpha = varpi/omega^2, beta = -1/2, gamma = x/2, delta = -k^2/(4 omega^2),
//! eta = (3 - 2 m^2)/8 + M1/(4 M2) + k^2/(4 omega^2),
//! varpi = M1 Omega/hbar, k^2 = 2 M1 E/hbar^2, x = sqrt(4 M1/M2 + 1).
//! ```
//!
//! A bound state needs `HeunC` to be a polynomial of degree `n`, which takes
//! two conditions at once: `C_{n+2} = 0`, giving `E = hbar Omega (2n + x/2 + 3/2)`,
//! and `v_{n+1} = 0`. Energy and oscillator frequency are therefore fixed
//! together; `Omega` is an output of the quantization, not an input.
//!
//! Odd states use the second local solution `rho HeunC(alpha, +1/2, ...)`, whose
//! energy condition reads `E = hbar Omega (2n + x/2 + 5/2)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heun::{self, HeunParams, POLYNOMIAL_TOLERANCE};
use crate::model::{MassPair, ModelParams};

/// Everything that fixes a level except the oscillator frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumProblem {
    pub masses: MassPair,
    pub m: i64,
    pub omega: f64,
    pub hbar: f64,
}

impl SpectrumProblem {
    pub fn natural(masses: MassPair, m: i64) -> Self {
        Self { masses, m, omega: 1.0, hbar: 1.0 }
    }

    pub fn model(&self, frequency: f64) -> ModelParams {
        ModelParams {
            hbar: self.hbar,
            omega: self.omega,
            frequency,
            m: self.m,
            masses: self.masses,
        }
    }

    /// `hbar^2 omega^2 / M1`, the natural energy scale of the closed forms.
    fn energy_unit(&self) -> f64 {
        self.hbar * self.hbar * self.omega * self.omega / self.masses.m1
    }

    fn m_sq(&self) -> f64 {
        (self.m * self.m) as f64
    }
}

impl From<&ModelParams> for SpectrumProblem {
    fn from(p: &ModelParams) -> Self {
        Self { masses: p.masses, m: p.m, omega: p.omega, hbar: p.hbar }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Ground,
    N1Minus,
    N1Plus,
    Generic,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Ground => "ground",
            Branch::N1Minus => "n1_minus",
            Branch::N1Plus => "n1_plus",
            Branch::Generic => "generic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "ground" => Branch::Ground,
            "n1_minus" => Branch::N1Minus,
            "n1_plus" => Branch::N1Plus,
            "generic" => Branch::Generic,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub x_real: bool,
    pub frequency_positive: bool,
    pub discriminant_real: bool,
    pub nondegenerate_x: bool,
}

impl Flags {
    pub fn allowed(frequency: f64) -> Self {
        Self {
            x_real: true,
            frequency_positive: frequency > 0.0,
            discriminant_real: true,
            nondegenerate_x: true,
        }
    }
}

/// One quantized `(E, Omega)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumLine {
    /// Degree of the Heun polynomial.
    pub n: u32,
    pub m: i64,
    pub energy: f64,
    /// Oscillator frequency fixed by the termination conditions.
    pub frequency: f64,
    pub x: f64,
    pub branch: Branch,
    pub parity: Parity,
    pub flags: Flags,
}

impl SpectrumLine {
    fn new(problem: &SpectrumProblem, n: u32, x: f64, energy: f64, branch: Branch, parity: Parity) -> Self {
        let frequency = frequency_from_cnd_a(energy, n, x, problem.hbar, parity);
        Self {
            n,
            m: problem.m,
            energy,
            frequency,
            x,
            branch,
            parity,
            flags: Flags::allowed(frequency),
        }
    }

    /// Relative violation of `E = hbar Omega (2n + x/2 + 3/2)` (`5/2` for odd).
    pub fn energy_condition_error(&self, hbar: f64) -> f64 {
        let e = energy_from_cnd_a(self.frequency, self.n, self.x, hbar, self.parity);
        (e - self.energy).abs() / self.energy.abs().max(e.abs()).max(f64::MIN_POSITIVE)
    }
}

pub const ENERGY_CONDITION_TOLERANCE: f64 = 1e-12;

/// Heun parameters for given `(E, Omega)` plus the auxiliaries `x`, `varpi`, `k^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeunReduction {
    pub params: HeunParams,
    pub x: f64,
    pub varpi: f64,
    pub k_sq: f64,
}

pub fn heun_parameters(p: &ModelParams, energy: f64) -> Result<HeunReduction> {
    let x = p.masses.anisotropy_x()?;
    if p.omega == 0.0 {
        return Err(Error::ZeroTwist);
    }
    let MassPair { m1, m2 } = p.masses;
    let w2 = p.omega * p.omega;
    let varpi = m1 * p.frequency / p.hbar;
    let k_sq = 2.0 * m1 * energy / (p.hbar * p.hbar);
    let m_sq = (p.m * p.m) as f64;
    let params = HeunParams {
        alpha: varpi / w2,
        beta: -0.5,
        gamma: 0.5 * x,
        delta: -k_sq / (4.0 * w2),
        eta: (3.0 - 2.0 * m_sq) / 8.0 + m1 / (4.0 * m2) + k_sq / (4.0 * w2),
    };
    Ok(HeunReduction { params, x, varpi, k_sq })
}

fn level_factor(n: u32, x: f64, parity: Parity) -> f64 {
    let base = 2.0 * n as f64 + 0.5 * x + 1.5;
    match parity {
        Parity::Even => base,
        Parity::Odd => base + 1.0,
    }
}

/// `E = hbar Omega (2n + x/2 + 3/2)` for even states, `+1` inside for odd.
pub fn energy_from_cnd_a(frequency: f64, n: u32, x: f64, hbar: f64, parity: Parity) -> f64 {
    hbar * frequency * level_factor(n, x, parity)
}

pub fn frequency_from_cnd_a(energy: f64, n: u32, x: f64, hbar: f64, parity: Parity) -> f64 {
    energy / (hbar * level_factor(n, x, parity))
}

/// Frequency for which the degree-0 series terminates (`B_1 = 0`) at energy `E`:
/// `Omega = (hbar omega^2/M1)(x/2 - m^2 + 2 M1 E/(hbar^2 omega^2) + M1/M2 + 1/2)`.
pub fn omega_constraint_n0(problem: &SpectrumProblem, energy: f64) -> Result<f64> {
    let x = problem.masses.anisotropy_x()?;
    let SpectrumProblem { masses, omega, hbar, .. } = *problem;
    let w2 = omega * omega;
    Ok(hbar * w2 / masses.m1
        * (0.5 * x - problem.m_sq() + 2.0 * masses.m1 * energy / (hbar * hbar * w2) + masses.ratio() + 0.5))
}

/// The `n = 0` level: `E = (hbar^2 omega^2/4M1) (x+3)/(x+2) (2m^2 - x - 2M1/M2 - 1)`.
pub fn ground_state(problem: &SpectrumProblem) -> Result<SpectrumLine> {
    let x = problem.masses.anisotropy_x()?;
    let energy = 0.25 * problem.energy_unit() * (x + 3.0) / (x + 2.0)
        * (2.0 * problem.m_sq() - x - 2.0 * problem.masses.ratio() - 1.0);
    let mut line = SpectrumLine::new(problem, 0, x, energy, Branch::Ground, Parity::Even);
    // both termination conditions give the same Omega; keep the B_1 = 0 route
    line.frequency = omega_constraint_n0(problem, energy)?;
    line.flags = Flags::allowed(line.frequency);
    Ok(line)
}

/// The two `n = 1` levels, lower (`n1_minus`) first.
///
/// With `cnd_a` at `n = 1` imposed, `v_2 = 0` is a quadratic in `E` whose roots
/// are
///
/// ```text
/// E = (hbar^2 omega^2/M1) (x + 7)(-P -+ 2 sqrt(D)) / (8 (x + 2)(x + 6))
/// P = x^3 + 10x^2 + 45x + 60 - 4m^2 x - 16m^2
/// D = 16m^4 - 24m^2 x^2 - 128m^2 x - 168m^2 + 9x^4 + 112x^3 + 542x^2 + 1120x + 825
/// ```
///
/// `D >= 16 (x+2)^2 (x+6) > 0` for real `x`, so both levels always exist.
pub fn n1_spectrum(problem: &SpectrumProblem) -> Result<[SpectrumLine; 2]> {
    let x = problem.masses.anisotropy_x()?;
    let m2 = problem.m_sq();
    let p = x.powi(3) + 10.0 * x * x + 45.0 * x + 60.0 - 4.0 * m2 * x - 16.0 * m2;
    let d = 16.0 * m2 * m2 - 24.0 * m2 * x * x - 128.0 * m2 * x - 168.0 * m2
        + 9.0 * x.powi(4)
        + 112.0 * x.powi(3)
        + 542.0 * x * x
        + 1120.0 * x
        + 825.0;
    if d < 0.0 {
        return Err(Error::ComplexDiscriminant(d));
    }
    let scale = problem.energy_unit() * (x + 7.0) / (8.0 * (x + 2.0) * (x + 6.0));
    let root = 2.0 * d.sqrt();
    let lower = scale * (-p - root);
    let upper = scale * (-p + root);
    Ok([
        SpectrumLine::new(problem, 1, x, lower, Branch::N1Minus, Parity::Even),
        SpectrumLine::new(problem, 1, x, upper, Branch::N1Plus, Parity::Even),
    ])
}

/// Frequencies at which the degree-1 condition `v_2 = 0` holds for a given
/// energy, ascending. `None` when the quadratic in `Omega` has no real root.
///
/// `v_2 = (B_1 B_2 + A_1 C_2) / (A_1 A_2)` is quadratic in `alpha`; its
/// coefficients are read off from three evaluations of the recurrence terms.
pub fn n1_frequencies(problem: &SpectrumProblem, energy: f64) -> Result<Option<(f64, f64)>> {
    let base = heun_parameters(&problem.model(0.0), energy)?.params;
    let g = |alpha: f64| {
        let p = HeunParams { alpha, ..base };
        p.rec_b(1) * p.rec_b(2) + p.rec_a(1) * p.rec_c(2)
    };
    let (g0, gp, gm) = (g(0.0), g(1.0), g(-1.0));
    let a = 0.5 * (gp + gm) - g0;
    let b = 0.5 * (gp - gm);
    let c = g0;
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Ok(None);
    }
    // numerically stable quadratic roots
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let (mut r1, mut r2) = if q == 0.0 { (0.0, 0.0) } else { (q / a, c / q) };
    if r1 > r2 {
        std::mem::swap(&mut r1, &mut r2);
    }
    let to_freq = |alpha: f64| alpha * problem.hbar * problem.omega * problem.omega / problem.masses.m1;
    Ok(Some((to_freq(r1), to_freq(r2))))
}

pub const SCAN_POINTS: usize = 2000;
pub const ROOT_MERGE_TOLERANCE: f64 = 1e-8;

/// Levels of degree `n` (even states) found by root search in `window`.
///
/// `cnd_a` is imposed exactly, so `Omega` follows from `E`; the remaining
/// condition `v_{n+1}(E) = 0` is bracketed on a uniform scan and refined by
/// bisection. Each root is kept only if the series at that `(E, Omega)` is
/// detected as a polynomial of degree `n`.
pub fn generic_spectrum(problem: &SpectrumProblem, n: u32, window: (f64, f64)) -> Result<Vec<SpectrumLine>> {
    termination_spectrum(problem, n, Parity::Even, window)
}

/// As [`generic_spectrum`], for either parity.
pub fn termination_spectrum(
    problem: &SpectrumProblem,
    n: u32,
    parity: Parity,
    window: (f64, f64),
) -> Result<Vec<SpectrumLine>> {
    let x = problem.masses.anisotropy_x()?;
    if problem.omega == 0.0 {
        return Err(Error::ZeroTwist);
    }
    let (lo, hi) = window;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::NoRootInWindow(lo, hi));
    }
    let target = n as usize + 1;
    let coefficient = |energy: f64| -> f64 {
        let params = branch_params(problem, energy, n, x, parity);
        heun::Coefficients::new(params)
            .nth(target)
            .and_then(|c| c.ok())
            .unwrap_or(f64::NAN)
    };

    let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
    let samples: Vec<(f64, f64)> = (0..SCAN_POINTS)
        .map(|i| {
            let e = if i == SCAN_POINTS - 1 { hi } else { lo + i as f64 * step };
            (e, coefficient(e))
        })
        .collect();

    let mut roots: Vec<f64> = Vec::new();
    for w in samples.windows(2) {
        let ((a, fa), (b, fb)) = (w[0], w[1]);
        if fa == 0.0 {
            roots.push(a);
        } else if fa * fb < 0.0 {
            roots.push(bisect(&coefficient, a, b, fa));
        }
    }
    if let Some(&(e, f)) = samples.last() {
        if f == 0.0 {
            roots.push(e);
        }
    }
    roots.dedup_by(|b, a| (*b - *a).abs() <= ROOT_MERGE_TOLERANCE * a.abs().max(1.0));

    let lines: Vec<SpectrumLine> = roots
        .into_iter()
        .filter(|&e| {
            let params = branch_params(problem, e, n, x, parity);
            heun::is_polynomial(params, n as usize + 1, POLYNOMIAL_TOLERANCE) == Some(n as usize)
        })
        .map(|e| SpectrumLine::new(problem, n, x, e, Branch::Generic, parity))
        .collect();
    if lines.is_empty() {
        return Err(Error::NoRootInWindow(lo, hi));
    }
    Ok(lines)
}

fn branch_params(problem: &SpectrumProblem, energy: f64, n: u32, x: f64, parity: Parity) -> HeunParams {
    let frequency = frequency_from_cnd_a(energy, n, x, problem.hbar, parity);
    // x is known to be real here, so the reduction cannot fail
    let p = heun_parameters(&problem.model(frequency), energy)
        .expect("anisotropy checked by caller")
        .params;
    match parity {
        Parity::Even => p,
        Parity::Odd => p.reflected(),
    }
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

/// Heun parameters at a line, for the branch of the given parity.
pub fn line_heun_params(problem: &SpectrumProblem, line: &SpectrumLine, parity: Parity) -> Result<HeunParams> {
    let p = heun_parameters(&problem.model(line.frequency), line.energy)?.params;
    Ok(match parity {
        Parity::Even => p,
        Parity::Odd => p.reflected(),
    })
}

/// Whether the Heun series of the line's own parity terminates.
pub fn line_terminates(problem: &SpectrumProblem, line: &SpectrumLine) -> Result<bool> {
    let p = line_heun_params(problem, line, line.parity)?;
    Ok(heun::is_polynomial(p, line.n as usize + 4, POLYNOMIAL_TOLERANCE).is_some())
}

/// Normalized radial wavefunction on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionSample {
    pub rho: Vec<f64>,
    pub f: Vec<f64>,
    pub parity: Parity,
    /// L2 norm before scaling.
    pub norm: f64,
}

/// `f(rho) = (omega^2 rho^2 + 1)^((gamma+1)/2) exp(-varpi rho^2/2) [rho] HeunC(..., -omega^2 rho^2)`,
/// normalized by the trapezoidal rule on `grid`.
///
/// The even branch uses `HeunC(alpha, beta, ...)`; the odd branch carries the
/// explicit `rho` factor and `HeunC(alpha, -beta, ...)`.
pub fn radial_wavefunction(
    problem: &SpectrumProblem,
    line: &SpectrumLine,
    parity: Parity,
    grid: &[f64],
) -> Result<WavefunctionSample> {
    if line.energy_condition_error(problem.hbar) > ENERGY_CONDITION_TOLERANCE {
        return Err(Error::InvalidLine { energy: line.energy, frequency: line.frequency });
    }
    if grid.len() < 2 {
        return Err(Error::InvalidGrid("need at least two points".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid("grid must be strictly increasing".into()));
    }
    let red = heun_parameters(&problem.model(line.frequency), line.energy)?;
    let params = match parity {
        Parity::Even => red.params,
        Parity::Odd => red.params.reflected(),
    };
    let w2 = problem.omega * problem.omega;
    let zs: Vec<f64> = grid.iter().map(|r| -w2 * r * r).collect();
    let heun_vals = heun::heunc_eval_many(params, &zs)?;
    let power = 0.5 * (red.params.gamma + 1.0);
    let f: Vec<f64> = grid
        .iter()
        .zip(heun_vals)
        .map(|(&r, h)| {
            let env = (1.0 + w2 * r * r).powf(power) * (-0.5 * red.varpi * r * r).exp();
            match parity {
                Parity::Even => env * h,
                Parity::Odd => env * r * h,
            }
        })
        .collect();
    let norm_sq: f64 = grid
        .windows(2)
        .zip(f.windows(2))
        .map(|(r, v)| 0.5 * (r[1] - r[0]) * (v[0] * v[0] + v[1] * v[1]))
        .sum();
    let norm = norm_sq.sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::InvalidArgument(format!("wavefunction norm {norm} is not usable")));
    }
    Ok(WavefunctionSample {
        rho: grid.to_vec(),
        f: f.into_iter().map(|v| v / norm).collect(),
        parity,
        norm,
    })
}

/// Max over interior points of `|-(hbar^2/2M1) f'' + (V_eff - E) f|` divided
/// by `max |V_eff f|`, with `f''` from a five-point stencil. Assumes a uniform grid.
pub fn radial_residual(params: &ModelParams, energy: f64, sample: &WavefunctionSample) -> f64 {
    let (rho, f) = (&sample.rho, &sample.f);
    let n = rho.len();
    if n < 5 {
        return f64::NAN;
    }
    let h = (rho[n - 1] - rho[0]) / (n - 1) as f64;
    let kinetic = params.hbar * params.hbar / (2.0 * params.masses.m1);
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for i in 0..n {
        scale = scale.max((params.effective_potential(rho[i]) * f[i]).abs());
    }
    for i in 2..n - 2 {
        let d2 = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / (12.0 * h * h);
        let r = -kinetic * d2 + (params.effective_potential(rho[i]) - energy) * f[i];
        worst = worst.max(r.abs());
    }
    worst / scale.max(f64::MIN_POSITIVE)
}

/// The Q/W closed form for the `n = 1` levels and the X/Y frequency branches.
///
/// These levels do not satisfy the termination conditions and are not
/// eigenvalues of the radial problem. [`n1_spectrum`] is the consistent form.
pub mod qw_form {
    use super::*;

    /// `(E1, E2) = hbar^2 omega^2 (3+x) / (4 M1 (4-x^2)) (Q -+ 2 sqrt(W))`.
    pub fn energies(problem: &SpectrumProblem) -> Result<(f64, f64)> {
        let x = problem.masses.anisotropy_x()?;
        let denom = 4.0 - x * x;
        if denom.abs() < 1e-12 {
            return Err(Error::DegenerateAnisotropy);
        }
        let (q, w) = qw(problem, x);
        if w < 0.0 {
            return Err(Error::ComplexDiscriminant(w));
        }
        let pre = problem.energy_unit() * (3.0 + x) / (4.0 * denom);
        Ok((pre * (q - 2.0 * w.sqrt()), pre * (q + 2.0 * w.sqrt())))
    }

    pub fn qw(problem: &SpectrumProblem, x: f64) -> (f64, f64) {
        let r = problem.masses.ratio();
        let m2 = problem.m_sq();
        let q = 3.0 * x * x - 2.0 * m2 * x + 2.0 * x * r + 11.0 * x + 4.0;
        let w = 4.0 * m2 * m2 - 4.0 * m2 * x * x + x.powi(4) - 8.0 * r * m2 + 4.0 * r * x * x + 12.0 * x.powi(3)
            - 16.0 * m2 * x
            + 4.0 * r * r
            + 16.0 * r * x
            + 38.0 * x * x
            - 28.0 * m2
            + 28.0 * r
            + 40.0 * x
            + 17.0;
        (q, w)
    }

    /// `Omega_{1,2} = [hbar^2 omega^2 X + 6/5 M1 E +- 2/5 sqrt(Y)] / (M1 hbar)`.
    pub fn frequencies(problem: &SpectrumProblem, energy: f64) -> Result<(f64, f64)> {
        let x = problem.masses.anisotropy_x()?;
        let SpectrumProblem { masses, omega, hbar, .. } = *problem;
        let (m1, r, m2) = (masses.m1, masses.ratio(), problem.m_sq());
        let h4w4 = hbar.powi(4) * omega.powi(4);
        let h2w2 = hbar * hbar * omega * omega;
        let big_x = 0.5 * x - 0.6 * m2 + 0.6 * r + 1.7;
        let y = h4w4 * (m2 * m2 - 2.0 * r * m2 + r * r - 4.0 * m2 + 4.0 * r + 5.0 * x + 14.0)
            + energy * h2w2 * (-4.0 * m2 * m1 + 4.0 * m1 * m1 / masses.m2 + 8.0 * m1)
            + 4.0 * energy * energy * m1 * m1;
        if y < 0.0 {
            return Err(Error::ComplexDiscriminant(y));
        }
        let base = h2w2 * big_x + 1.2 * m1 * energy;
        let spread = 0.4 * y.sqrt();
        Ok(((base + spread) / (m1 * hbar), (base - spread) / (m1 * hbar)))
    }
}
