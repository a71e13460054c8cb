//! Run configuration: a JSON document, overridden by command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::heun::HeunParams;
use crate::model::MassPair;
use crate::solver::RadialGrid;

pub const DEFAULT_M: [i64; 5] = [0, 1, 2, 3, 4];

/// Which `n = 1` formula the spectrum command reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum N1Form {
    /// Levels that satisfy both termination conditions.
    #[default]
    Consistent,
    /// The Q/W expressions, kept for comparison.
    Qw,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub hbar: f64,
    pub omega: f64,
    #[serde(rename = "Omega")]
    pub frequency: f64,
    /// `[M1, M2]` pairs.
    pub masses: Vec<[f64; 2]>,
    /// Angular quantum numbers; `0..=4` when absent.
    pub m: Option<Vec<i64>>,
    /// Polynomial degree; both 0 and 1 when absent.
    pub n: Option<u32>,
    pub n1_form: N1Form,
    pub grid: GridConfig,
    pub potential: PotentialConfig,
    pub surface: SurfaceConfig,
    /// Energy window for the termination search at `n >= 2`.
    pub window: [f64; 2],
    pub heun: HeunConfig,
    /// Spectrum CSV to re-check instead of recomputing lines.
    pub spectrum_csv: Option<PathBuf>,
    pub out: PathBuf,
    pub parallel: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            omega: 1.0,
            frequency: 1.0,
            masses: vec![[1.0, 1.0]],
            m: None,
            n: None,
            n1_form: N1Form::default(),
            grid: GridConfig::default(),
            potential: PotentialConfig::default(),
            surface: SurfaceConfig::default(),
            window: [-100.0, 100.0],
            heun: HeunConfig::default(),
            spectrum_csv: None,
            out: PathBuf::from("out"),
            parallel: None,
        }
    }
}

/// Finite-difference grid; `L` falls back to the confinement-based default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    #[serde(rename = "L")]
    pub half_width: Option<f64>,
    #[serde(rename = "N")]
    pub points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { half_width: None, points: crate::solver::DEFAULT_POINTS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PotentialConfig {
    pub rho_min: f64,
    pub rho_max: f64,
    pub rho_step: f64,
}

impl Default for PotentialConfig {
    fn default() -> Self {
        let (rho_min, rho_max) = crate::model::DEFAULT_MINIMA_RANGE;
        Self { rho_min, rho_max, rho_step: crate::model::DEFAULT_MINIMA_STEP }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SurfaceConfig {
    pub rho_min: f64,
    pub rho_max: f64,
    pub rho_points: usize,
    pub z_min: f64,
    pub z_max: f64,
    pub z_points: usize,
    /// Keep `m = 1` in the default list; its profile repeats `m = 0`.
    pub include_m1: bool,
}

impl Default for SurfaceConfig {
    fn default() -> Self {
        Self {
            rho_min: -6.0,
            rho_max: 6.0,
            rho_points: 121,
            z_min: -3.0,
            z_max: 3.0,
            z_points: 61,
            include_m1: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HeunConfig {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub eta: f64,
    pub z: Vec<f64>,
}

impl Default for HeunConfig {
    fn default() -> Self {
        Self { alpha: 0.3, beta: -0.5, gamma: 1.1, delta: 0.2, eta: 0.4, z: vec![-0.6, 0.0, 0.3] }
    }
}

impl HeunConfig {
    pub fn params(&self) -> HeunParams {
        HeunParams::new(self.alpha, self.beta, self.gamma, self.delta, self.eta)
    }
}

/// Values given on the command line; each one replaces the file value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub hbar: Option<f64>,
    pub omega: Option<f64>,
    pub frequency: Option<f64>,
    pub masses: Option<Vec<[f64; 2]>>,
    pub m: Option<Vec<i64>>,
    pub n: Option<u32>,
    pub grid_l: Option<f64>,
    pub grid_n: Option<usize>,
    pub parallel: Option<usize>,
    pub heun: Option<[f64; 5]>,
    pub z: Option<Vec<f64>>,
    pub from: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn apply(&mut self, o: Overrides) {
        macro_rules! set {
            ($src:expr => $dst:expr) => {
                if let Some(v) = $src {
                    $dst = v;
                }
            };
        }
        set!(o.out => self.out);
        set!(o.hbar => self.hbar);
        set!(o.omega => self.omega);
        set!(o.frequency => self.frequency);
        set!(o.masses => self.masses);
        if o.m.is_some() {
            self.m = o.m;
        }
        set!(o.z => self.heun.z);
        if o.n.is_some() {
            self.n = o.n;
        }
        if o.grid_l.is_some() {
            self.grid.half_width = o.grid_l;
        }
        set!(o.grid_n => self.grid.points);
        if o.parallel.is_some() {
            self.parallel = o.parallel;
        }
        if let Some([alpha, beta, gamma, delta, eta]) = o.heun {
            self.heun = HeunConfig { alpha, beta, gamma, delta, eta, z: std::mem::take(&mut self.heun.z) };
        }
        if o.from.is_some() {
            self.spectrum_csv = o.from;
        }
    }

    /// Mass pairs, each validated.
    pub fn mass_pairs(&self) -> Result<Vec<MassPair>, CliError> {
        if self.masses.is_empty() {
            return Err(CliError::Usage("mass list is empty".into()));
        }
        self.masses
            .iter()
            .map(|&[m1, m2]| MassPair::new(m1, m2).map_err(|e| CliError::Usage(format!("mass pair {m1}:{m2}: {e}"))))
            .collect()
    }

    pub fn m_values(&self) -> Result<Vec<i64>, CliError> {
        match &self.m {
            None => Ok(DEFAULT_M.to_vec()),
            Some(v) if v.is_empty() => Err(CliError::Usage("m list is empty".into())),
            Some(v) => Ok(v.clone()),
        }
    }

    pub fn check_constants(&self) -> Result<(), CliError> {
        for (name, v) in [("hbar", self.hbar), ("omega", self.omega), ("Omega", self.frequency)] {
            if !v.is_finite() {
                return Err(CliError::Usage(format!("{name} must be finite")));
            }
        }
        if !(self.hbar > 0.0) {
            return Err(CliError::Usage("hbar must be positive".into()));
        }
        Ok(())
    }

    /// Explicit grid, or `None` to let each line pick the default width.
    pub fn explicit_grid(&self) -> Result<Option<RadialGrid>, CliError> {
        match self.grid.half_width {
            Some(l) => RadialGrid::new(l, self.grid.points).map(Some).map_err(|e| CliError::Usage(e.to_string())),
            None => {
                RadialGrid::new(crate::solver::MIN_HALF_WIDTH, self.grid.points)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                Ok(None)
            }
        }
    }

    /// Grid for a line at `model`, honouring an explicit `L` and `N`.
    pub fn grid_for(&self, model: &crate::model::ModelParams) -> crate::Result<RadialGrid> {
        let l = match self.grid.half_width {
            Some(l) => l,
            None => crate::solver::default_half_width(model)?,
        };
        RadialGrid::new(l, self.grid.points)
    }
}

/// `"1:1,0.2:0.01"`.
pub fn parse_masses(s: &str) -> Result<Vec<[f64; 2]>, String> {
    let out: Result<Vec<_>, String> = s
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|pair| {
            let (a, b) = pair.split_once(':').ok_or_else(|| format!("expected M1:M2, got {pair:?}"))?;
            let m1 = a.trim().parse::<f64>().map_err(|e| format!("{a:?}: {e}"))?;
            let m2 = b.trim().parse::<f64>().map_err(|e| format!("{b:?}: {e}"))?;
            Ok([m1, m2])
        })
        .collect();
    let out = out?;
    if out.is_empty() {
        return Err("mass list is empty".into());
    }
    Ok(out)
}

/// `"0..4"` (inclusive), `"0,2,3"`, or a mix such as `"-1..1,4"`.
pub fn parse_m_list(s: &str) -> Result<Vec<i64>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let lo: i64 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
            let hi: i64 = b.trim().trim_start_matches('=').parse().map_err(|e| format!("{b:?}: {e}"))?;
            if lo > hi {
                return Err(format!("empty range {part:?}"));
            }
            out.extend(lo..=hi);
        } else {
            out.push(part.parse().map_err(|e| format!("{part:?}: {e}"))?);
        }
    }
    if out.is_empty() {
        return Err("m list is empty".into());
    }
    Ok(out)
}

pub fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect()
}

pub fn parse_heun_params(s: &str) -> Result<[f64; 5], String> {
    let v = parse_f64_list(s)?;
    v.try_into().map_err(|v: Vec<f64>| format!("expected 5 parameters, got {}", v.len()))
}
