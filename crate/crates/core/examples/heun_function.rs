//! Confluent Heun function on the real axis: method used, value and ODE residual.

use helix_spectra::heun::{heunc_eval_full, is_polynomial, ode_residual, HeunParams, POLYNOMIAL_TOLERANCE};

fn main() -> helix_spectra::Result<()> {
    let generic = HeunParams::new(0.3, -0.5, 1.1, 0.2, 0.4);
    // B_1 = 0 and C_2 = 0: the series stops after the constant term
    let constant = HeunParams::new(1.0, 0.0, 0.0, -1.0, 0.5);
    for (name, p) in [("generic", generic), ("terminating", constant)] {
        println!("{name}: {:?}, polynomial degree {:?}", p.as_array(), is_polynomial(p, 16, POLYNOMIAL_TOLERANCE));
        for z in [-8.0, -2.0, -0.6, -0.1, 0.1, 0.6, 0.9] {
            let v = heunc_eval_full(p, z)?;
            let r = ode_residual(p, z, v.value, v.derivative, v.second_derivative)?;
            println!("  z={z:>5}: {:>22.15e}  [{:<12}] residual {r:.1e}", v.value, v.method.as_str());
        }
    }
    Ok(())
}
