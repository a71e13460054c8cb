//! Cross-checks of a quantized line against the finite-difference solver and
//! against its own wavefunction.

use serde::Serialize;

use crate::error::Result;
use crate::heun::{self, POLYNOMIAL_TOLERANCE};
use crate::solver::{self, RadialGrid};
use crate::spectrum::{self, Parity, SpectrumLine, SpectrumProblem};

pub const ENERGY_MATCH: f64 = 1e-4;
pub const WAVEFUNCTION_RESIDUAL: f64 = 1e-6;
/// Edge value relative to the peak; a non-terminating branch grows like `exp(+varpi rho^2 / 2)`.
pub const EDGE_DECAY: f64 = 1e-2;

/// How one parity branch fares at a line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchCheck {
    pub parity: Parity,
    pub terminates: bool,
    /// `None` when the wavefunction could not be built.
    pub residual: Option<f64>,
    pub decays: bool,
}

impl BranchCheck {
    pub fn consistent(&self) -> bool {
        self.terminates && self.decays && self.residual.is_some_and(|r| r < WAVEFUNCTION_RESIDUAL)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Outcome {
    Skipped(String),
    Checked(LineCheck),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineCheck {
    pub numeric_energy: f64,
    pub relative_error: f64,
    pub even: BranchCheck,
    pub odd: BranchCheck,
    /// Parity of the branch that passes every wavefunction check.
    pub parity: Option<Parity>,
    pub numeric_parity: Option<Parity>,
}

impl LineCheck {
    pub fn terminates(&self) -> bool {
        self.even.terminates || self.odd.terminates
    }

    pub fn passed(&self) -> bool {
        self.relative_error < ENERGY_MATCH
            && self.terminates()
            && self.parity.is_some()
            && self.parity == self.numeric_parity
    }
}

/// Nearest eigenvalue of the discretized problem at the line's frequency.
pub fn nearest_eigenvalue(op: &solver::DiscreteOperator, energy: f64) -> Result<f64> {
    let k = (solver::sturm_count(op, energy) + 1).min(op.dim());
    let ev = solver::lowest_eigenvalues(op, k)?;
    Ok(ev
        .into_iter()
        .min_by(|a, b| (a - energy).abs().total_cmp(&(b - energy).abs()))
        .expect("k >= 1"))
}

/// Runs every check on a line. `grid` defaults to [`RadialGrid::default_for`].
pub fn check_line(problem: &SpectrumProblem, line: &SpectrumLine, grid: Option<RadialGrid>) -> Result<Outcome> {
    if !(line.frequency > 0.0) {
        return Ok(Outcome::Skipped("constrained Omega <= 0".into()));
    }
    let model = problem.model(line.frequency);
    let grid = match grid {
        Some(g) => g,
        None => RadialGrid::default_for(&model)?,
    };
    let op = solver::discretize(&model, grid)?;
    let numeric_energy = nearest_eigenvalue(&op, line.energy)?;
    let relative_error = (numeric_energy - line.energy).abs() / line.energy.abs().max(f64::MIN_POSITIVE);
    let numeric_parity = solver::eigenfunction(&op, numeric_energy).ok().and_then(|p| p.parity);

    let nodes = grid.nodes();
    let branch = |parity: Parity| -> Result<BranchCheck> {
        let params = spectrum::line_heun_params(problem, line, parity)?;
        let terminates = heun::is_polynomial(params, line.n as usize + 4, POLYNOMIAL_TOLERANCE).is_some();
        let sample = spectrum::radial_wavefunction(problem, line, parity, &nodes).ok();
        let (residual, decays) = match sample {
            Some(s) if s.f.iter().all(|v| v.is_finite()) => {
                let peak = s.f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let edge = s.f[0].abs().max(s.f[s.f.len() - 1].abs());
                (Some(spectrum::radial_residual(&model, line.energy, &s)), edge <= EDGE_DECAY * peak)
            }
            _ => (None, false),
        };
        Ok(BranchCheck { parity, terminates, residual, decays })
    };
    let even = branch(Parity::Even)?;
    let odd = branch(Parity::Odd)?;
    let parity = match (even.consistent(), odd.consistent()) {
        (true, false) => Some(Parity::Even),
        (false, true) => Some(Parity::Odd),
        _ => None,
    };
    Ok(Outcome::Checked(LineCheck { numeric_energy, relative_error, even, odd, parity, numeric_parity }))
}
