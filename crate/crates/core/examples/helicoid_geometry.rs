//! Metric, principal curvatures and the curvature-induced potential of a helicoid,
//! with the analytic curvatures checked against finite differences.

use helix_spectra::geometry::{numeric_curvatures, Helicoid, SurfaceCoords, DEFAULT_CURVATURE_STEP};

fn main() -> helix_spectra::Result<()> {
    let surface = Helicoid::new(1.0);
    println!("twists per unit length: {:.6}", surface.twists());
    println!("{:>6} {:>10} {:>14} {:>14} {:>12} {:>16}", "rho", "g_zz", "kappa", "numeric", "gaussian", "geom_potential");
    for rho in [0.0, 0.5, 1.0, 2.0, 4.0] {
        let p = SurfaceCoords::new(rho, 0.3);
        let exact = surface.principal_curvatures(rho);
        let numeric = numeric_curvatures(|u, v| surface.embed(SurfaceCoords::new(u, v)), p, DEFAULT_CURVATURE_STEP)?;
        println!(
            "{rho:>6.2} {:>10.4} {:>14.10} {:>14.10} {:>12.6} {:>16.8}",
            surface.metric(rho).g22,
            exact.sorted().0,
            numeric.sorted().0,
            exact.gaussian,
            surface.geometric_potential(1.0, 1.0, rho)?,
        );
    }
    Ok(())
}
