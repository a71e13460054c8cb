//! Adaptive Dormand–Prince 5(4) integrator for small real first-order systems.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-14 }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// 5th-order weights equal the last row of A (FSAL); these are b5 - b4.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const MAX_STEPS: usize = 200_000;

/// Integrates `y' = f(t, y)` from `t0` and returns the state at each target.
///
/// Targets must be ordered along the direction of integration. The step size
/// is clipped so every target is hit exactly.
pub fn integrate<const N: usize, F>(
    f: F,
    t0: f64,
    y0: [f64; N],
    targets: &[f64],
    tol: Tolerance,
) -> Result<Vec<[f64; N]>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let mut out = Vec::with_capacity(targets.len());
    let Some(&last) = targets.last() else {
        return Ok(out);
    };
    let dir = if last >= t0 { 1.0 } else { -1.0 };
    let mut t = t0;
    let mut y = y0;
    let mut k0 = f(t, &y);
    let span = (last - t0).abs();
    let mut h = (span / 64.0).clamp(1e-6, 0.05);
    let mut steps = 0;

    for &target in targets {
        if (target - t) * dir < 0.0 {
            return Err(Error::InvalidArgument("integration targets out of order".into()));
        }
        while (target - t) * dir > 0.0 {
            steps += 1;
            if steps > MAX_STEPS {
                return Err(Error::NonConvergence(MAX_STEPS));
            }
            let remaining = (target - t).abs();
            let step = h.min(remaining);
            let hs = dir * step;

            let mut k = [[0.0; N]; 7];
            k[0] = k0;
            for s in 1..7 {
                let mut ys = y;
                for (j, kj) in k.iter().enumerate().take(s) {
                    let a = A[s][j];
                    if a != 0.0 {
                        for i in 0..N {
                            ys[i] += hs * a * kj[i];
                        }
                    }
                }
                k[s] = f(t + C[s] * hs, &ys);
            }
            let mut y_new = y;
            for i in 0..N {
                for s in 0..6 {
                    y_new[i] += hs * A[6][s] * k[s][i];
                }
            }
            let mut err = 0.0f64;
            for i in 0..N {
                let e: f64 = (0..7).map(|s| E[s] * k[s][i]).sum::<f64>() * hs;
                let sc = tol.atol + tol.rtol * y[i].abs().max(y_new[i].abs());
                err = err.max((e / sc).abs());
            }
            if err <= 1.0 {
                t = if step == remaining { target } else { t + hs };
                y = y_new;
                k0 = k[6];
                let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).min(5.0) };
                // keep the untruncated step size when the step was clipped to a target
                if step == h || grow < 1.0 {
                    h *= grow;
                }
            } else {
                h = step * (0.9 * err.powf(-0.2)).max(0.1);
            }
            if h < 1e-14 * (1.0 + t.abs()) {
                return Err(Error::NonConvergence(steps));
            }
        }
        out.push(y);
    }
    Ok(out)
}
