//! Adaptive Dormand–Prince 5(4) integrator for complex linear-size systems.

use alloc::vec;
use alloc::vec::Vec;

use crate::{math, Error, Result, C64};

/// Error control for [`integrate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    /// Total accepted plus rejected steps before giving up.
    pub max_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rtol: 1e-9,
            atol: 1e-12,
            max_steps: 10_000_000,
        }
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
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates `dy/dt = f(t, y)` from `times[0]` and returns `y` at every
/// entry of `times` (the first being `y0`). The integrator lands exactly on
/// each requested time.
pub fn integrate<F>(mut f: F, y0: &[C64], times: &[f64], tol: &Tolerances) -> Result<Vec<Vec<C64>>>
where
    F: FnMut(f64, &[C64], &mut [C64]),
{
    if times.is_empty() {
        return Err(Error::InvalidGrid("empty time grid"));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) || times.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidGrid("times must be finite and strictly increasing"));
    }
    let n = y0.len();
    let mut out = Vec::with_capacity(times.len());
    out.push(y0.to_vec());
    if times.len() == 1 {
        return Ok(out);
    }

    let mut t = times[0];
    let mut y = y0.to_vec();
    let mut k: Vec<Vec<C64>> = vec![vec![C64::new(0.0, 0.0); n]; 7];
    let mut stage = vec![C64::new(0.0, 0.0); n];
    let mut y_new = vec![C64::new(0.0, 0.0); n];
    f(t, &y, &mut k[0]);

    let span = times[times.len() - 1] - times[0];
    let mut h = initial_step(&y, &k[0], tol).min(span);
    let mut steps = 0usize;

    for &target in &times[1..] {
        while t < target {
            steps += 1;
            if steps > tol.max_steps {
                return Err(Error::StepLimit { t, steps: tol.max_steps });
            }
            let remaining = target - t;
            let last = h >= remaining;
            let step = if last { remaining } else { h };
            if step <= 16.0 * f64::EPSILON * t.abs().max(1.0) && !last {
                return Err(Error::StepUnderflow { t });
            }

            for s in 1..7 {
                for i in 0..n {
                    let mut acc = C64::new(0.0, 0.0);
                    for (j, kj) in k.iter().enumerate().take(s) {
                        acc += kj[i] * A[s][j];
                    }
                    stage[i] = y[i] + acc * step;
                }
                f(t + C[s] * step, &stage, &mut k[s]);
            }
            // stage 7 evaluates at y_new (first-same-as-last)
            y_new.copy_from_slice(&stage);

            let mut err_sq = 0.0;
            for i in 0..n {
                let mut e = C64::new(0.0, 0.0);
                for (j, kj) in k.iter().enumerate() {
                    e += kj[i] * E[j];
                }
                let scale = tol.atol + tol.rtol * y[i].norm().max(y_new[i].norm());
                let r = (e * step).norm() / scale;
                err_sq += r * r;
            }
            let err = math::sqrt(err_sq / n as f64);

            if err <= 1.0 {
                t = if last { target } else { t + step };
                core::mem::swap(&mut y, &mut y_new);
                k.swap(0, 6);
                let factor = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * libm::pow(err, -0.2)).clamp(0.2, 5.0)
                };
                if !last {
                    h = step * factor;
                } else {
                    h = h.max(step * factor);
                }
            } else {
                h = step * (0.9 * libm::pow(err, -0.2)).max(0.2);
                if h <= 16.0 * f64::EPSILON * t.abs().max(1.0) {
                    return Err(Error::StepUnderflow { t });
                }
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}

fn initial_step(y: &[C64], dy: &[C64], tol: &Tolerances) -> f64 {
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for (yi, fi) in y.iter().zip(dy) {
        let scale = tol.atol + tol.rtol * yi.norm();
        d0 += (yi.norm() / scale).powi(2);
        d1 += (fi.norm() / scale).powi(2);
    }
    let (d0, d1) = (math::sqrt(d0), math::sqrt(d1));
    if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        (0.01 * d0 / d1).clamp(1e-10, 0.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotating_exponential() {
        // y' = (−0.3 + 2i) y
        let rate = C64::new(-0.3, 2.0);
        let times: Vec<f64> = (0..=50).map(|i| i as f64 * 0.2).collect();
        let ys = integrate(
            |_, y, dy| dy[0] = rate * y[0],
            &[C64::new(1.0, 0.0)],
            &times,
            &Tolerances::default(),
        )
        .unwrap();
        for (t, y) in times.iter().zip(&ys) {
            let exact = (rate * *t).exp();
            assert!((y[0] - exact).norm() < 1e-9, "t={t}");
        }
    }

    #[test]
    fn time_dependent_rhs() {
        // y' = cos t, y(0) = 0
        let times = [0.0, 0.5, 3.0, 7.25];
        let ys = integrate(
            |t, _, dy| dy[0] = C64::new(libm::cos(t), 0.0),
            &[C64::new(0.0, 0.0)],
            &times,
            &Tolerances::default(),
        )
        .unwrap();
        for (t, y) in times.iter().zip(&ys) {
            assert!((y[0].re - libm::sin(*t)).abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_bad_grid() {
        let r = integrate(|_, _, _| {}, &[C64::new(1.0, 0.0)], &[0.0, 1.0, 1.0], &Tolerances::default());
        assert!(matches!(r, Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn step_limit_reports_time() {
        let tol = Tolerances {
            max_steps: 3,
            ..Tolerances::default()
        };
        let r = integrate(
            |_, y, dy| dy[0] = y[0] * C64::new(0.0, 50.0),
            &[C64::new(1.0, 0.0)],
            &[0.0, 10.0],
            &tol,
        );
        assert!(matches!(r, Err(Error::StepLimit { .. })));
    }
}
