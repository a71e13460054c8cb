//! The degree-1 levels from the termination conditions next to the Q/W form,
//! and whether each makes the Heun series terminate.

use helix_spectra::heun::{is_polynomial, POLYNOMIAL_TOLERANCE};
use helix_spectra::model::MassPair;
use helix_spectra::spectrum::{heun_parameters, n1_spectrum, qw_form, Parity, SpectrumProblem, energy_from_cnd_a};

fn terminates(pr: &SpectrumProblem, energy: f64, frequency: f64) -> bool {
    heun_parameters(&pr.model(frequency), energy)
        .map(|r| is_polynomial(r.params, 6, POLYNOMIAL_TOLERANCE).is_some())
        .unwrap_or(false)
}

fn main() -> helix_spectra::Result<()> {
    for (m1, m2) in [(1.0, 1.0), (1.0, 2.2), (1.0, -5.0)] {
        for m in 0..=3 {
            let pr = SpectrumProblem::natural(MassPair::new(m1, m2)?, m);
            let x = pr.masses.anisotropy_x()?;
            let [lo, hi] = n1_spectrum(&pr)?;
            print!("({m1},{m2}) m={m}: consistent {:+.6} {:+.6} [{} {}]", lo.energy, hi.energy,
                terminates(&pr, lo.energy, lo.frequency), terminates(&pr, hi.energy, hi.frequency));
            match qw_form::energies(&pr) {
                Ok((a, b)) => {
                    let f = |e: f64| e / energy_from_cnd_a(1.0, 1, x, 1.0, Parity::Even);
                    println!("  qw {a:+.6} {b:+.6} [{} {}]", terminates(&pr, a, f(a)), terminates(&pr, b, f(b)));
                }
                Err(e) => println!("  qw: {e}"),
            }
        }
    }
    Ok(())
}
