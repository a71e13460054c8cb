//! Radial effective potential for several mass pairs and angular numbers,
//! with the location of its interior minima.

use helix_spectra::model::{classify_minima, uniform_grid, MassPair, ModelParams};

fn main() -> helix_spectra::Result<()> {
    let grid = uniform_grid(-6.0, 6.0, 1e-3)?;
    for (m1, m2) in [(1.0, 1.0), (0.1, -0.01), (0.2, 0.01), (0.1, 0.02)] {
        println!("surface mass {m1}, normal mass {m2}");
        for m in 0..=4 {
            let p = ModelParams::natural(MassPair::new(m1, m2)?, m);
            let profile = p.potential_profile(&grid)?;
            let minima = classify_minima(&profile);
            let at: Vec<String> = minima.iter().map(|x| format!("{:+.3} ({:.4})", x.rho, x.value)).collect();
            println!("  m={m}: V(0)={:+.5} minima: {}", p.effective_potential(0.0), at.join(", "));
        }
    }
    Ok(())
}
