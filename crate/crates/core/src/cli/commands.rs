//! The five subcommands. Each returns the files it wrote and an optional report.

use std::path::PathBuf;

use rayon::prelude::*;

use super::config::{N1Form, RunConfig};
use super::output::{fmt_f64, fmt_opt, read_table, tag, write_atomic, write_table, Table};
use super::CliError;
use crate::error::Error;
use crate::geometry::{Helicoid, SurfaceCoords};
use crate::heun;
use crate::model::{classify_minima, linspace, uniform_grid, MassPair, ModelParams};
use crate::spectrum::{self, Branch, Flags, Parity, SpectrumLine, SpectrumProblem};
use crate::verify::{self, Outcome};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CommandOutput {
    pub files: Vec<PathBuf>,
    pub report: Option<String>,
    /// Set when a verification check failed.
    pub failed: bool,
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn model(cfg: &RunConfig, masses: MassPair, m: i64) -> ModelParams {
    ModelParams { hbar: cfg.hbar, omega: cfg.omega, frequency: cfg.frequency, m, masses }
}

fn problem(cfg: &RunConfig, masses: MassPair, m: i64) -> SpectrumProblem {
    SpectrumProblem { masses, m, omega: cfg.omega, hbar: cfg.hbar }
}

fn mass_tag(p: MassPair) -> String {
    format!("m1_{}_m2_{}", tag(p.m1), tag(p.m2))
}

fn m_column(m: i64) -> String {
    if m < 0 {
        format!("veff_mneg{}", -m)
    } else {
        format!("veff_m{m}")
    }
}

pub fn potential(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    cfg.check_constants()?;
    let masses = cfg.mass_pairs()?;
    let ms = cfg.m_values()?;
    let pc = cfg.potential;
    let rho = uniform_grid(pc.rho_min, pc.rho_max, pc.rho_step).map_err(usage)?;

    let cells: Vec<_> = masses
        .par_iter()
        .map(|&mp| {
            let mut profiles = Vec::with_capacity(ms.len());
            for &m in &ms {
                profiles.push(model(cfg, mp, m).potential_profile(&rho)?);
            }
            Ok::<_, Error>((mp, profiles))
        })
        .collect::<Result<_, _>>()?;

    let mut out = CommandOutput::default();
    let mut summary = Table::new(["m1", "m2", "m", "minima_count", "minima_count_nonnegative", "locations"]);
    for (mp, profiles) in &cells {
        let mut header = vec!["rho".to_string()];
        header.extend(ms.iter().map(|&m| m_column(m)));
        let mut table = Table::new(header);
        for (i, &r) in rho.iter().enumerate() {
            let mut row = vec![fmt_f64(r)];
            row.extend(profiles.iter().map(|p| fmt_f64(p.value[i])));
            table.push(row);
        }
        let name = format!("potential_{}.csv", mass_tag(*mp));
        out.files.push(write_table(&cfg.out, &name, "potential", &table, cfg)?);

        for (&m, p) in ms.iter().zip(profiles) {
            let minima = classify_minima(p);
            let nonneg = minima.iter().filter(|x| x.rho >= 0.0).count();
            let locations: Vec<String> = minima.iter().map(|x| fmt_f64(x.rho)).collect();
            summary.push(vec![
                fmt_f64(mp.m1),
                fmt_f64(mp.m2),
                m.to_string(),
                minima.len().to_string(),
                nonneg.to_string(),
                locations.join(";"),
            ]);
        }
    }
    out.files.push(write_table(&cfg.out, "minima.csv", "potential", &summary, cfg)?);
    Ok(out)
}

fn axis(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>, CliError> {
    linspace(lo, hi, count).map_err(usage)
}

pub fn surface3d(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    cfg.check_constants()?;
    let masses = cfg.mass_pairs()?;
    let ms: Vec<i64> = match cfg.m {
        Some(_) => cfg.m_values()?,
        None => cfg.m_values()?.into_iter().filter(|&m| m != 1 || cfg.surface.include_m1).collect(),
    };
    let sc = cfg.surface;
    let rho = axis(sc.rho_min, sc.rho_max, sc.rho_points)?;
    let zs = axis(sc.z_min, sc.z_max, sc.z_points)?;
    let helicoid = Helicoid::new(cfg.omega);

    let cells: Vec<(MassPair, i64)> = masses.iter().flat_map(|&mp| ms.iter().map(move |&m| (mp, m))).collect();
    let tables: Vec<Table> = cells
        .par_iter()
        .map(|&(mp, m)| {
            let p = model(cfg, mp, m);
            let mut t = Table::new(["rho", "z", "x", "y", "veff"]);
            for &r in &rho {
                let v = fmt_f64(p.effective_potential(r));
                for &z in &zs {
                    let [x, y, _] = helicoid.embed(SurfaceCoords::new(r, z));
                    t.push(vec![fmt_f64(r), fmt_f64(z), fmt_f64(x), fmt_f64(y), v.clone()]);
                }
            }
            t
        })
        .collect();

    let mut out = CommandOutput::default();
    for ((mp, m), t) in cells.iter().zip(&tables) {
        let name = format!("surface_{}_m{m}.csv", mass_tag(*mp));
        out.files.push(write_table(&cfg.out, &name, "surface3d", t, cfg)?);
    }
    Ok(out)
}

pub const SPECTRUM_COLUMNS: [&str; 12] = [
    "m1",
    "m2",
    "m",
    "n",
    "branch",
    "energy",
    "frequency",
    "x",
    "x_real",
    "frequency_positive",
    "discriminant_real",
    "nondegenerate_x",
];

/// A spectrum row: a valid line, or the reason a state is not allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    pub masses: MassPair,
    pub m: i64,
    pub n: u32,
    pub branch: Branch,
    pub energy: Option<f64>,
    pub frequency: Option<f64>,
    pub x: Option<f64>,
    pub flags: Flags,
}

impl SpectrumRow {
    fn valid(masses: MassPair, line: &SpectrumLine) -> Self {
        Self {
            masses,
            m: line.m,
            n: line.n,
            branch: line.branch,
            energy: Some(line.energy),
            frequency: Some(line.frequency),
            x: Some(line.x),
            flags: line.flags,
        }
    }

    fn invalid(masses: MassPair, m: i64, n: u32, branch: Branch, x: Option<f64>, flags: Flags) -> Self {
        Self { masses, m, n, branch, energy: None, frequency: None, x, flags }
    }

    fn cells(&self) -> Vec<String> {
        let f = self.flags;
        vec![
            fmt_f64(self.masses.m1),
            fmt_f64(self.masses.m2),
            self.m.to_string(),
            self.n.to_string(),
            self.branch.as_str().into(),
            fmt_opt(self.energy),
            fmt_opt(self.frequency),
            fmt_opt(self.x),
            f.x_real.to_string(),
            f.frequency_positive.to_string(),
            f.discriminant_real.to_string(),
            f.nondegenerate_x.to_string(),
        ]
    }

    fn parse(cells: &[String]) -> Result<Self, String> {
        if cells.len() != SPECTRUM_COLUMNS.len() {
            return Err(format!("expected {} columns, got {}", SPECTRUM_COLUMNS.len(), cells.len()));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| format!("{s:?}: {e}"));
        let opt = |s: &str| if s.is_empty() { Ok(None) } else { num(s).map(Some) };
        let flag = |s: &str| s.parse::<bool>().map_err(|e| format!("{s:?}: {e}"));
        let masses = MassPair::new(num(&cells[0])?, num(&cells[1])?).map_err(|e| e.to_string())?;
        Ok(Self {
            masses,
            m: cells[2].parse().map_err(|e| format!("m: {e}"))?,
            n: cells[3].parse().map_err(|e| format!("n: {e}"))?,
            branch: Branch::parse(&cells[4]).ok_or_else(|| format!("unknown branch {:?}", cells[4]))?,
            energy: opt(&cells[5])?,
            frequency: opt(&cells[6])?,
            x: opt(&cells[7])?,
            flags: Flags {
                x_real: flag(&cells[8])?,
                frequency_positive: flag(&cells[9])?,
                discriminant_real: flag(&cells[10])?,
                nondegenerate_x: flag(&cells[11])?,
            },
        })
    }

    pub fn line(&self) -> Option<SpectrumLine> {
        Some(SpectrumLine {
            n: self.n,
            m: self.m,
            energy: self.energy?,
            frequency: self.frequency?,
            x: self.x?,
            branch: self.branch,
            parity: Parity::Even,
            flags: self.flags,
        })
    }
}

fn degrees(cfg: &RunConfig) -> Vec<u32> {
    match cfg.n {
        Some(n) => vec![n],
        None => vec![0, 1],
    }
}

fn complex_x() -> Flags {
    Flags { x_real: false, frequency_positive: false, discriminant_real: true, nondegenerate_x: true }
}

/// All rows for one `(masses, m)` cell at degree `n`.
pub fn spectrum_rows(cfg: &RunConfig, masses: MassPair, m: i64, n: u32) -> Result<Vec<SpectrumRow>, CliError> {
    let pr = problem(cfg, masses, m);
    let x = masses.anisotropy_x().ok();
    let n1_branches = [Branch::N1Minus, Branch::N1Plus];
    let rows = match n {
        0 => match spectrum::ground_state(&pr) {
            Ok(line) => vec![SpectrumRow::valid(masses, &line)],
            Err(Error::ComplexAnisotropy(_)) => vec![SpectrumRow::invalid(masses, m, 0, Branch::Ground, None, complex_x())],
            Err(e) => return Err(e.into()),
        },
        1 if cfg.n1_form == N1Form::Consistent => match spectrum::n1_spectrum(&pr) {
            Ok(lines) => lines.iter().map(|l| SpectrumRow::valid(masses, l)).collect(),
            Err(Error::ComplexAnisotropy(_)) => n1_branches
                .iter()
                .map(|&b| SpectrumRow::invalid(masses, m, 1, b, None, complex_x()))
                .collect(),
            Err(e) => return Err(e.into()),
        },
        1 => {
            let Some(xv) = x else {
                return Ok(n1_branches
                    .iter()
                    .map(|&b| SpectrumRow::invalid(masses, m, 1, b, None, complex_x()))
                    .collect());
            };
            let blank = |flags: Flags| -> Vec<SpectrumRow> {
                n1_branches.iter().map(|&b| SpectrumRow::invalid(masses, m, 1, b, x, flags)).collect()
            };
            match spectrum::qw_form::energies(&pr) {
                Ok((e1, e2)) => [(e1, Branch::N1Minus), (e2, Branch::N1Plus)]
                    .iter()
                    .map(|&(e, b)| {
                        let freq = spectrum::frequency_from_cnd_a(e, 1, xv, cfg.hbar, Parity::Even);
                        SpectrumRow {
                            masses,
                            m,
                            n: 1,
                            branch: b,
                            energy: Some(e),
                            frequency: Some(freq),
                            x,
                            flags: Flags::allowed(freq),
                        }
                    })
                    .collect(),
                Err(Error::DegenerateAnisotropy) => {
                    blank(Flags { nondegenerate_x: false, frequency_positive: false, ..Flags::allowed(0.0) })
                }
                Err(Error::ComplexDiscriminant(_)) => {
                    blank(Flags { discriminant_real: false, frequency_positive: false, ..Flags::allowed(0.0) })
                }
                Err(e) => return Err(e.into()),
            }
        }
        _ => {
            let [lo, hi] = cfg.window;
            match spectrum::generic_spectrum(&pr, n, (lo, hi)) {
                Ok(lines) => lines.iter().map(|l| SpectrumRow::valid(masses, l)).collect(),
                Err(Error::ComplexAnisotropy(_)) => {
                    vec![SpectrumRow::invalid(masses, m, n, Branch::Generic, None, complex_x())]
                }
                Err(Error::NoRootInWindow(..)) => Vec::new(),
                Err(e) => return Err(e.into()),
            }
        }
    };
    Ok(rows)
}

pub fn spectrum(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    cfg.check_constants()?;
    if cfg.omega == 0.0 {
        return Err(CliError::Usage("omega must be nonzero for the spectrum".into()));
    }
    let masses = cfg.mass_pairs()?;
    let ms = cfg.m_values()?;
    let ns = degrees(cfg);
    let cells: Vec<(MassPair, i64)> = masses.iter().flat_map(|&mp| ms.iter().map(move |&m| (mp, m))).collect();
    let rows: Vec<Vec<SpectrumRow>> = cells
        .par_iter()
        .map(|&(mp, m)| {
            let mut v = Vec::new();
            for &n in &ns {
                v.extend(spectrum_rows(cfg, mp, m, n)?);
            }
            Ok::<_, CliError>(v)
        })
        .collect::<Result<_, _>>()?;
    let mut table = Table::new(SPECTRUM_COLUMNS);
    for r in rows.iter().flatten() {
        table.push(r.cells());
    }
    let path = write_table(&cfg.out, "spectrum.csv", "spectrum", &table, cfg)?;
    Ok(CommandOutput { files: vec![path], ..Default::default() })
}

/// Reads rows from a spectrum CSV.
pub fn read_spectrum(path: &std::path::Path) -> Result<Vec<SpectrumRow>, CliError> {
    let t = read_table(path)?;
    if t.header != SPECTRUM_COLUMNS {
        return Err(CliError::Config(format!("{}: not a spectrum table", path.display())));
    }
    t.rows
        .iter()
        .enumerate()
        .map(|(i, r)| SpectrumRow::parse(r).map_err(|e| CliError::Config(format!("{} row {}: {e}", path.display(), i + 1))))
        .collect()
}

const VERIFY_COLUMNS: [&str; 17] = [
    "m1",
    "m2",
    "m",
    "n",
    "branch",
    "energy",
    "frequency",
    "status",
    "reason",
    "numeric_energy",
    "relative_error",
    "terminates",
    "residual_even",
    "residual_odd",
    "parity",
    "numeric_parity",
    "pass",
];

fn parity_str(p: Option<Parity>) -> String {
    p.map(|p| p.as_str().to_string()).unwrap_or_else(|| "none".into())
}

pub fn verify(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    cfg.check_constants()?;
    cfg.explicit_grid()?;
    let rows: Vec<SpectrumRow> = match &cfg.spectrum_csv {
        Some(path) => read_spectrum(path)?,
        None => {
            let masses = cfg.mass_pairs()?;
            let ms = cfg.m_values()?;
            let mut rows = Vec::new();
            for &mp in &masses {
                for &m in &ms {
                    for n in degrees(cfg) {
                        rows.extend(spectrum_rows(cfg, mp, m, n)?);
                    }
                }
            }
            rows
        }
    };

    let results: Vec<(Vec<String>, Option<bool>, String)> = rows
        .par_iter()
        .map(|row| verify_row(cfg, row))
        .collect::<Result<_, _>>()?;

    let mut table = Table::new(VERIFY_COLUMNS);
    let (mut checked, mut passed, mut skipped) = (0, 0, 0);
    let mut detail = String::new();
    for (cells, pass, note) in results {
        match pass {
            None => skipped += 1,
            Some(true) => {
                checked += 1;
                passed += 1;
            }
            Some(false) => {
                checked += 1;
                detail.push_str(&note);
                detail.push('\n');
            }
        }
        table.push(cells);
    }
    let failed = checked - passed;
    let mut report = format!("{checked} checked, {passed} passed, {failed} failed, {skipped} skipped\n");
    report.push_str(&detail);

    let path = write_table(&cfg.out, "verify.csv", "verify", &table, cfg)?;
    let report_path = cfg.out.join("verify_report.txt");
    write_atomic(&report_path, report.as_bytes())?;
    Ok(CommandOutput { files: vec![path, report_path], report: Some(report), failed: failed > 0 })
}

fn verify_row(cfg: &RunConfig, row: &SpectrumRow) -> Result<(Vec<String>, Option<bool>, String), CliError> {
    let mut cells = vec![
        fmt_f64(row.masses.m1),
        fmt_f64(row.masses.m2),
        row.m.to_string(),
        row.n.to_string(),
        row.branch.as_str().into(),
        fmt_opt(row.energy),
        fmt_opt(row.frequency),
    ];
    let skip = |mut cells: Vec<String>, reason: &str| {
        cells.extend([String::from("skipped"), reason.into()]);
        cells.extend(std::iter::repeat_n(String::new(), 7));
        cells.push(String::new());
        (cells, None, String::new())
    };
    let Some(line) = row.line() else {
        return Ok(skip(cells, "state not allowed"));
    };
    if !(line.frequency > 0.0) {
        return Ok(skip(cells, "constrained Omega <= 0"));
    }
    let pr = problem(cfg, row.masses, row.m);
    let grid = cfg.grid_for(&pr.model(line.frequency))?;
    let outcome = match verify::check_line(&pr, &line, Some(grid)) {
        Ok(o) => o,
        Err(Error::InvalidLine { .. }) => return Ok(skip(cells, "energy condition violated")),
        Err(e) => return Err(e.into()),
    };
    let c = match outcome {
        Outcome::Skipped(reason) => return Ok(skip(cells, &reason)),
        Outcome::Checked(c) => c,
    };
    let pass = c.passed();
    cells.extend([
        "checked".into(),
        String::new(),
        fmt_f64(c.numeric_energy),
        fmt_f64(c.relative_error),
        c.terminates().to_string(),
        fmt_opt(c.even.residual),
        fmt_opt(c.odd.residual),
        parity_str(c.parity),
        parity_str(c.numeric_parity),
        pass.to_string(),
    ]);
    let note = format!(
        "FAIL m1={} m2={} m={} n={} {}: E={} numeric={} rel_err={:e} terminates={} parity={} numeric_parity={}",
        row.masses.m1,
        row.masses.m2,
        row.m,
        row.n,
        row.branch.as_str(),
        line.energy,
        c.numeric_energy,
        c.relative_error,
        c.terminates(),
        parity_str(c.parity),
        parity_str(c.numeric_parity),
    );
    Ok((cells, Some(pass), note))
}

pub fn heun_table(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let zs = &cfg.heun.z;
    if zs.is_empty() {
        return Err(CliError::Usage("z list is empty".into()));
    }
    if let Some(z) = zs.iter().find(|&&z| !(z < 1.0)) {
        return Err(CliError::Usage(format!("z = {z} is at or beyond the singular point z = 1")));
    }
    let params = cfg.heun.params();
    let rows: Vec<Vec<String>> = zs
        .par_iter()
        .map(|&z| {
            let v = heun::heunc_eval_full(params, z)?;
            let residual = heun::ode_residual(params, z, v.value, v.derivative, v.second_derivative).ok();
            Ok::<_, Error>(vec![fmt_f64(z), fmt_f64(v.value), v.method.as_str().into(), fmt_opt(residual)])
        })
        .collect::<Result<_, _>>()?;
    let mut table = Table::new(["z", "value", "method", "residual"]);
    rows.into_iter().for_each(|r| table.push(r));
    let path = write_table(&cfg.out, "heun.csv", "heun", &table, cfg)?;
    Ok(CommandOutput { files: vec![path], ..Default::default() })
}
