//! Finite-difference eigenvalues of the radial problem at the frequency fixed
//! by each closed-form level, compared with the closed form.

use helix_spectra::model::MassPair;
use helix_spectra::solver::{discretize, lowest_eigenvalues, RadialGrid};
use helix_spectra::spectrum::{ground_state, n1_spectrum, SpectrumProblem};

fn main() -> helix_spectra::Result<()> {
    for (m1, m2) in [(1.0, 1.0), (0.2, 0.01), (2.0, 2.0)] {
        for m in 2..=4 {
            let pr = SpectrumProblem::natural(MassPair::new(m1, m2)?, m);
            let mut lines = vec![ground_state(&pr)?];
            lines.extend(n1_spectrum(&pr)?);
            for line in lines.into_iter().filter(|l| l.frequency > 0.0) {
                let model = pr.model(line.frequency);
                let op = discretize(&model, RadialGrid::default_for(&model)?)?;
                let ev = lowest_eigenvalues(&op, 6)?;
                let best = ev.iter().copied().min_by(|a, b| (a - line.energy).abs().total_cmp(&(b - line.energy).abs())).unwrap();
                let index = ev.iter().position(|&e| e == best).unwrap();
                println!(
                    "({m1},{m2}) m={m} {:<8} E={:+.10} numeric={:+.10} level #{index} rel_err={:.1e}",
                    line.branch.as_str(),
                    line.energy,
                    best,
                    (best - line.energy).abs() / line.energy.abs(),
                );
            }
        }
    }
    Ok(())
}
