//! Closed-form levels of degree 0 and 1 and the trap frequencies they require.

use helix_spectra::model::MassPair;
use helix_spectra::spectrum::{ground_state, n1_spectrum, SpectrumProblem};

fn main() -> helix_spectra::Result<()> {
    for (m1, m2) in [(1.0, 1.0), (0.2, 0.01), (1.0, -4.0)] {
        println!("surface mass {m1}, normal mass {m2}");
        for m in 0..=4 {
            let pr = SpectrumProblem::natural(MassPair::new(m1, m2)?, m);
            let g = ground_state(&pr)?;
            let [lo, hi] = n1_spectrum(&pr)?;
            for line in [g, lo, hi] {
                println!(
                    "  m={m} {:<9} E={:>+14.8} Omega={:>+12.8} allowed={}",
                    line.branch.as_str(),
                    line.energy,
                    line.frequency,
                    line.flags.frequency_positive,
                );
            }
        }
    }
    Ok(())
}
