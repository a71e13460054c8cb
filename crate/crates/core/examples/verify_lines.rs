//! Full verification of the closed-form lines for one mass pair.

use helix_spectra::model::MassPair;
use helix_spectra::spectrum::{ground_state, n1_spectrum, SpectrumProblem};
use helix_spectra::verify::{check_line, Outcome};

fn main() -> helix_spectra::Result<()> {
    let masses = MassPair::new(1.0, -4.0)?;
    for m in 0..=4 {
        let pr = SpectrumProblem::natural(masses, m);
        let mut lines = vec![ground_state(&pr)?];
        lines.extend(n1_spectrum(&pr)?);
        for line in lines {
            match check_line(&pr, &line, None)? {
                Outcome::Skipped(why) => println!("m={m} {:<8} skipped: {why}", line.branch.as_str()),
                Outcome::Checked(c) => println!(
                    "m={m} {:<8} rel_err {:.1e} even={} odd={} parity {:?} numeric {:?} -> {}",
                    line.branch.as_str(),
                    c.relative_error,
                    c.even.consistent(),
                    c.odd.consistent(),
                    c.parity,
                    c.numeric_parity,
                    if c.passed() { "PASS" } else { "FAIL" },
                ),
            }
        }
    }
    Ok(())
}
