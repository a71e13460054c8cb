//! Confluent Heun functions `HeunC(alpha, beta, gamma, delta, eta; z)`.
//!
//! `HeunC` is the solution of
//!
//! ```text
//! y'' + (alpha + (beta + 1)/z + (gamma + 1)/(z - 1)) y' + (mu/z + nu/(z - 1)) y = 0
//! ```
//!
//! regular at the origin with `y(0) = 1`, where
//! `mu = (alpha - beta - gamma + alpha beta - beta gamma)/2 - eta` and
//! `nu = (alpha + beta + gamma + alpha gamma + beta gamma)/2 + delta + eta`.
//! Its Taylor coefficients obey the three-term recurrence
//! `A_s v_s = B_s v_{s-1} + C_s v_{s-2}` with `v_{-1} = 0`, `v_0 = 1`.
//!
//! Inside `|z| <= 0.75` the series is summed directly. Further out the ODE is
//! integrated along the real axis from `z = +-0.5`. When two consecutive
//! coefficients vanish the function is a polynomial and is evaluated as such
//! everywhere.

use crate::error::{Error, Result};
use crate::ode::{self, Tolerance};

pub const SERIES_RADIUS: f64 = 0.75;
pub const CONTINUATION_START: f64 = 0.5;
pub const MAX_SERIES_TERMS: usize = 512;
pub const SERIES_TOLERANCE: f64 = 1e-14;
pub const POLYNOMIAL_TOLERANCE: f64 = 1e-10;
/// Largest polynomial degree `heunc_eval` looks for before treating the
/// parameters as generic.
pub const POLYNOMIAL_SEARCH_DEGREE: usize = 64;
pub const CONTINUATION_RTOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeunParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub eta: f64,
}

impl HeunParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64, eta: f64) -> Self {
        Self { alpha, beta, gamma, delta, eta }
    }

    pub fn mu(&self) -> f64 {
        let Self { alpha, beta, gamma, eta, .. } = *self;
        0.5 * (alpha - beta - gamma + alpha * beta - beta * gamma) - eta
    }

    pub fn nu(&self) -> f64 {
        let Self { alpha, beta, gamma, delta, eta } = *self;
        0.5 * (alpha + beta + gamma + alpha * gamma + beta * gamma) + delta + eta
    }

    /// Parameters of the second local solution `z^-beta HeunC(alpha, -beta, ...)`.
    pub fn reflected(&self) -> Self {
        Self { beta: -self.beta, ..*self }
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.alpha, self.beta, self.gamma, self.delta, self.eta]
    }

    /// `A_s = 1 + beta/s`.
    pub fn rec_a(&self, s: usize) -> f64 {
        1.0 + self.beta / s as f64
    }

    /// `B_s = 1 + (beta + gamma - alpha - 1)/s + [eta - (beta + gamma - alpha)/2 - alpha beta/2 + beta gamma/2]/s^2`.
    pub fn rec_b(&self, s: usize) -> f64 {
        let Self { alpha, beta, gamma, eta, .. } = *self;
        let s = s as f64;
        1.0 + (beta + gamma - alpha - 1.0) / s
            + (eta - 0.5 * (beta + gamma - alpha) - 0.5 * alpha * beta + 0.5 * beta * gamma) / (s * s)
    }

    /// `C_s = (delta + alpha ((beta + gamma)/2 + s - 1)) / s^2`.
    ///
    /// Written without dividing by `alpha` so `alpha = 0` is admissible.
    pub fn rec_c(&self, s: usize) -> f64 {
        let s = s as f64;
        (self.delta + self.alpha * (0.5 * (self.beta + self.gamma) + s - 1.0)) / (s * s)
    }
}

/// Streams the series coefficients `v_0, v_1, ...`.
#[derive(Debug, Clone)]
pub struct Coefficients {
    params: HeunParams,
    s: usize,
    prev: f64,
    prev2: f64,
}

impl Coefficients {
    pub fn new(params: HeunParams) -> Self {
        Self { params, s: 0, prev: 0.0, prev2: 0.0 }
    }
}

impl Iterator for Coefficients {
    type Item = Result<f64>;

    fn next(&mut self) -> Option<Result<f64>> {
        let s = self.s;
        let v = if s == 0 {
            1.0
        } else {
            let a = self.params.rec_a(s);
            if a == 0.0 {
                return Some(Err(Error::RecurrenceBreakdown(s)));
            }
            (self.params.rec_b(s) * self.prev + self.params.rec_c(s) * self.prev2) / a
        };
        self.prev2 = self.prev;
        self.prev = v;
        self.s += 1;
        Some(Ok(v))
    }
}

/// Leading series coefficients and the detected polynomial degree, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct HeunSeries {
    pub params: HeunParams,
    pub coeffs: Vec<f64>,
    pub polynomial_degree: Option<usize>,
}

impl HeunSeries {
    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    /// Partial sum of the retained terms.
    pub fn eval(&self, z: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * z + c)
    }
}

pub fn series_coefficients(params: HeunParams, n_terms: usize) -> Result<HeunSeries> {
    if n_terms == 0 {
        return Err(Error::InvalidArgument("n_terms must be at least 1".into()));
    }
    let coeffs = Coefficients::new(params).take(n_terms).collect::<Result<Vec<_>>>()?;
    let polynomial_degree = termination_degree(&coeffs, POLYNOMIAL_TOLERANCE);
    Ok(HeunSeries { params, coeffs, polynomial_degree })
}

fn termination_degree(coeffs: &[f64], tol: f64) -> Option<usize> {
    let mut running_max = 0.0f64;
    for s0 in 1..coeffs.len().saturating_sub(1) {
        running_max = running_max.max(coeffs[s0 - 1].abs());
        let bound = tol * running_max;
        if coeffs[s0].abs() <= bound && coeffs[s0 + 1].abs() <= bound {
            return Some(s0 - 1);
        }
    }
    None
}

/// Degree of the Heun polynomial when the series terminates.
///
/// Finds the smallest `s0` with `|v_s0|` and `|v_{s0+1}|` both at most
/// `tol * max_{s < s0} |v_s|` and reports `s0 - 1`. Returns `None` when no
/// such `s0 <= max_degree + 2` exists or the recurrence breaks down first.
pub fn is_polynomial(params: HeunParams, max_degree: usize, tol: f64) -> Option<usize> {
    let coeffs: Vec<f64> = Coefficients::new(params)
        .take(max_degree + 4)
        .map_while(|c| c.ok())
        .collect();
    termination_degree(&coeffs, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMethod {
    Series,
    Continuation,
    Polynomial,
}

impl EvalMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            EvalMethod::Series => "series",
            EvalMethod::Continuation => "continuation",
            EvalMethod::Polynomial => "polynomial",
        }
    }
}

/// `HeunC` and its first two derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeunValue {
    pub value: f64,
    pub derivative: f64,
    pub second_derivative: f64,
    pub method: EvalMethod,
}

pub fn heunc_eval(params: HeunParams, z: f64) -> Result<f64> {
    evaluate(params, z, false).map(|v| v.value)
}

/// Value plus derivatives. Derivatives come from term-wise differentiation on
/// the series and polynomial paths; on the continuation path `Phi'` is the
/// integrator state and `Phi''` a five-point difference of `Phi'` along the
/// same path.
pub fn heunc_eval_full(params: HeunParams, z: f64) -> Result<HeunValue> {
    evaluate(params, z, true)
}

fn evaluate(params: HeunParams, z: f64, second: bool) -> Result<HeunValue> {
    if !z.is_finite() {
        return Err(Error::InvalidArgument(format!("z = {z}")));
    }
    if let Some(degree) = is_polynomial(params, POLYNOMIAL_SEARCH_DEGREE, POLYNOMIAL_TOLERANCE) {
        let series = series_coefficients(params, degree + 1)?;
        let [v, d1, d2] = sum_terms(&series.coeffs, z);
        return Ok(HeunValue {
            value: v,
            derivative: d1,
            second_derivative: d2,
            method: EvalMethod::Polynomial,
        });
    }
    if z.abs() <= SERIES_RADIUS {
        return series_eval(params, z);
    }
    if z >= 1.0 {
        return Err(Error::SingularPath(z));
    }
    continuation_eval(params, z, second)
}

fn sum_terms(coeffs: &[f64], z: f64) -> [f64; 3] {
    let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
    for &c in coeffs.iter().rev() {
        d2 = d2 * z + d1 * 2.0;
        d1 = d1 * z + v;
        v = v * z + c;
    }
    [v, d1, d2]
}

/// Direct summation of the Taylor series, valid for `|z| < 1`.
pub fn series_eval(params: HeunParams, z: f64) -> Result<HeunValue> {
    let (mut v, mut d1, mut d2) = (0.0f64, 0.0f64, 0.0f64);
    let (mut scale0, mut scale1, mut scale2) = (0.0f64, 0.0f64, 0.0f64);
    let tail = 1.0 / (1.0 - z.abs()).max(1e-3);
    let mut quiet = 0;
    let mut zs = 1.0; // z^s
    let mut zs1 = 0.0; // z^(s-1)
    let mut zs2 = 0.0; // z^(s-2)
    for (s, c) in Coefficients::new(params).take(MAX_SERIES_TERMS).enumerate() {
        let c = c?;
        let sf = s as f64;
        let t0 = c * zs;
        let t1 = sf * c * zs1;
        let t2 = sf * (sf - 1.0) * c * zs2;
        v += t0;
        d1 += t1;
        d2 += t2;
        scale0 = scale0.max(v.abs());
        scale1 = scale1.max(d1.abs());
        scale2 = scale2.max(d2.abs());

        let small = |t: f64, sc: f64| t.abs() * tail <= SERIES_TOLERANCE * sc || t == 0.0 && sc == 0.0;
        if s >= 2 && small(t0, scale0) && small(t1, scale1) && small(t2, scale2) {
            quiet += 1;
            if quiet >= 2 {
                return Ok(HeunValue {
                    value: v,
                    derivative: d1,
                    second_derivative: d2,
                    method: EvalMethod::Series,
                });
            }
        } else {
            quiet = 0;
        }
        zs2 = zs1;
        zs1 = zs;
        zs *= z;
        if s == 0 {
            zs1 = 1.0;
        }
    }
    Err(Error::NonConvergence(MAX_SERIES_TERMS))
}

fn heun_rhs(p: HeunParams) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] {
    let (mu, nu) = (p.mu(), p.nu());
    move |z, y| {
        let drift = p.alpha + (p.beta + 1.0) / z + (p.gamma + 1.0) / (z - 1.0);
        let pot = mu / z + nu / (z - 1.0);
        [y[1], -drift * y[1] - pot * y[0]]
    }
}

/// Integrates the Heun ODE from `z = +-0.5` (same sign as `z`) using series
/// initial data.
pub fn continuation_eval(params: HeunParams, z: f64, second: bool) -> Result<HeunValue> {
    if z >= 1.0 {
        return Err(Error::SingularPath(z));
    }
    if z == 0.0 {
        return series_eval(params, z);
    }
    let z0 = CONTINUATION_START.copysign(z);
    let start = series_eval(params, z0)?;
    let y0 = [start.value, start.derivative];
    let rhs = heun_rhs(params);

    if !second {
        let tol = Tolerance { rtol: CONTINUATION_RTOL, atol: 1e-14 };
        let y = ode::integrate(rhs, z0, y0, &[z], tol)?;
        let [value, derivative] = y[0];
        let (mu, nu) = (params.mu(), params.nu());
        let drift = params.alpha + (params.beta + 1.0) / z + (params.gamma + 1.0) / (z - 1.0);
        return Ok(HeunValue {
            value,
            derivative,
            second_derivative: -drift * derivative - (mu / z + nu / (z - 1.0)) * value,
            method: EvalMethod::Continuation,
        });
    }

    // five-point stencil on Phi', kept clear of both singular points
    let mut h: f64 = 1e-3;
    if z > 0.0 {
        h = h.min((1.0 - z) / 40.0).min(0.25 * z);
    } else {
        h = h.min(0.25 * z.abs());
    }
    let dir = z.signum();
    let mut pts: Vec<f64> = (-2..=2).map(|k| z + k as f64 * h).collect();
    if dir < 0.0 {
        pts.reverse();
    }
    let split = pts.iter().position(|&p| (p - z0) * dir > 0.0).unwrap_or(pts.len());
    let tol = Tolerance { rtol: 1e-13, atol: 1e-16 };
    // stencil points on the near side of z0 are integrated backwards
    let mut states = [[0.0; 2]; 5];
    if split > 0 {
        let back: Vec<f64> = pts[..split].iter().rev().copied().collect();
        let ys = ode::integrate(&rhs, z0, y0, &back, tol)?;
        for (i, y) in ys.into_iter().enumerate() {
            states[split - 1 - i] = y;
        }
    }
    let ys = ode::integrate(&rhs, z0, y0, &pts[split..], tol)?;
    for (i, y) in ys.into_iter().enumerate() {
        states[split + i] = y;
    }
    if dir < 0.0 {
        states.reverse();
    }
    // states now ordered by z - 2h, ..., z + 2h
    let d = |i: usize| states[i][1];
    let second_derivative = (d(0) - 8.0 * d(1) + 8.0 * d(3) - d(4)) / (12.0 * h);
    Ok(HeunValue {
        value: states[2][0],
        derivative: states[2][1],
        second_derivative,
        method: EvalMethod::Continuation,
    })
}

/// Evaluates `HeunC` at many points, sharing one integration sweep per side
/// of the origin when continuation is needed.
pub fn heunc_eval_many(params: HeunParams, zs: &[f64]) -> Result<Vec<f64>> {
    if let Some(degree) = is_polynomial(params, POLYNOMIAL_SEARCH_DEGREE, POLYNOMIAL_TOLERANCE) {
        let series = series_coefficients(params, degree + 1)?;
        return Ok(zs.iter().map(|&z| series.eval(z)).collect());
    }
    let mut out = vec![0.0; zs.len()];
    let mut far_neg = Vec::new();
    let mut far_pos = Vec::new();
    for (i, &z) in zs.iter().enumerate() {
        if !z.is_finite() {
            return Err(Error::InvalidArgument(format!("z = {z}")));
        }
        if z.abs() <= SERIES_RADIUS {
            out[i] = series_eval(params, z)?.value;
        } else if z >= 1.0 {
            return Err(Error::SingularPath(z));
        } else if z < 0.0 {
            far_neg.push(i);
        } else {
            far_pos.push(i);
        }
    }
    let tol = Tolerance { rtol: CONTINUATION_RTOL, atol: 1e-14 };
    for (mut idx, z0) in [(far_neg, -CONTINUATION_START), (far_pos, CONTINUATION_START)] {
        if idx.is_empty() {
            continue;
        }
        // sort along the direction of travel away from the origin
        idx.sort_by(|&a, &b| zs[a].abs().total_cmp(&zs[b].abs()));
        let start = series_eval(params, z0)?;
        let targets: Vec<f64> = idx.iter().map(|&i| zs[i]).collect();
        let ys = ode::integrate(heun_rhs(params), z0, [start.value, start.derivative], &targets, tol)?;
        for (i, y) in idx.into_iter().zip(ys) {
            out[i] = y[0];
        }
    }
    Ok(out)
}

/// `|Phi'' + (alpha + (beta+1)/z + (gamma+1)/(z-1)) Phi' + (mu/z + nu/(z-1)) Phi|`.
pub fn ode_residual(params: HeunParams, z: f64, f: f64, df: f64, d2f: f64) -> Result<f64> {
    if z == 0.0 || z == 1.0 {
        return Err(Error::SingularArgument(z));
    }
    let drift = params.alpha + (params.beta + 1.0) / z + (params.gamma + 1.0) / (z - 1.0);
    let pot = params.mu() / z + params.nu() / (z - 1.0);
    Ok((d2f + drift * df + pot * f).abs())
}
