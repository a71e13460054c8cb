//! Closed-form radial wavefunction of a level against the finite-difference
//! eigenvector at the same energy.

use helix_spectra::model::MassPair;
use helix_spectra::solver::{discretize, eigenfunction, RadialGrid};
use helix_spectra::spectrum::{n1_spectrum, radial_residual, radial_wavefunction, SpectrumProblem};

fn main() -> helix_spectra::Result<()> {
    let pr = SpectrumProblem::natural(MassPair::isotropic(1.0)?, 3);
    let [_, line] = n1_spectrum(&pr)?;
    let model = pr.model(line.frequency);
    let grid = RadialGrid::default_for(&model)?;
    let sample = radial_wavefunction(&pr, &line, line.parity, &grid.nodes())?;
    let pair = eigenfunction(&discretize(&model, grid)?, line.energy)?;

    // both unit-normalized; align sign and scale of the interior values
    let h = grid.spacing();
    let interior = &sample.f[1..sample.f.len() - 1];
    let sign = if interior.iter().zip(&pair.values).map(|(a, b)| a * b).sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
    let gap = interior
        .iter()
        .zip(&pair.values)
        .map(|(a, b)| (a - sign * b / h.sqrt()).abs())
        .fold(0.0f64, f64::max);
    println!("E={:.10} Omega={:.10}", line.energy, line.frequency);
    println!("ODE residual {:.2e}, numeric residual {:.2e}", radial_residual(&model, line.energy, &sample), pair.residual);
    println!("numeric parity {:?}, nodes {}, max pointwise gap {gap:.2e}", pair.parity, pair.nodes);
    for i in (0..grid.points).step_by(grid.points / 12) {
        println!("  rho={:>+8.3} f={:>+.6e}", sample.rho[i], sample.f[i]);
    }
    Ok(())
}
