//! Root search for levels of higher degree where no closed form is available,
//! each confirmed by the finite-difference solver.

use helix_spectra::model::MassPair;
use helix_spectra::spectrum::{termination_spectrum, Parity, SpectrumProblem};
use helix_spectra::verify::{check_line, Outcome};

fn main() -> helix_spectra::Result<()> {
    let pr = SpectrumProblem::natural(MassPair::isotropic(1.0)?, 3);
    for n in 1..=3 {
        for parity in [Parity::Even, Parity::Odd] {
            for line in termination_spectrum(&pr, n, parity, (-100.0, 100.0))? {
                let status = match check_line(&pr, &line, None)? {
                    Outcome::Skipped(why) => why,
                    Outcome::Checked(c) => format!("numeric {:+.10} rel_err {:.1e} passed={}", c.numeric_energy, c.relative_error, c.passed()),
                };
                println!("n={n} {:<4} E={:+.10} Omega={:+.8}  {status}", parity.as_str(), line.energy, line.frequency);
            }
        }
    }
    Ok(())
}
