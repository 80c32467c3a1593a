//! Trace-distance dynamics and information backflow.

use alloc::vec::Vec;

use crate::dynamics::{evolve, TimeGrid};
use crate::linalg::trace_norm;
use crate::{DensityMatrix, Error, ModelParams, Result, Subsystem};

/// Slope above which a reduced trace distance counts as increasing.
pub const TOL_REV: f64 = 1e-9;
/// Minimum number of consecutive increasing steps forming a revival.
pub const MIN_REVIVAL_STEPS: usize = 2;
/// Tolerated rise of the joint trace distance.
pub const TOL_MONO: f64 = 1e-7;

/// `½ ‖ρ₁ − ρ₂‖₁`.
pub fn trace_distance(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::Dimension {
            expected: rho1.dim(),
            found: rho2.dim(),
        });
    }
    Ok(0.5 * trace_norm(&(rho1.as_operator() - rho2.as_operator()))?)
}

/// A time window `[start, end]` with an associated magnitude.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
    /// Rise of the series for revivals; most negative value for negative windows.
    pub amplitude: f64,
}

impl Interval {
    pub fn overlaps(&self, other: &Interval) -> bool {
        self.start <= other.end && other.start <= self.end
    }
}

/// Trace distances of a pair of initial states evolved with a common ancilla.
#[derive(Clone, Debug)]
pub struct DistanceTrajectory {
    pub times: Vec<f64>,
    pub d_sa: Vec<f64>,
    pub d_s: Vec<f64>,
    /// Forward-difference slope of `d_s` on each grid step.
    pub slope_s: Vec<f64>,
    pub revivals: Vec<Interval>,
}

impl DistanceTrajectory {
    /// Number of grid steps where `d_sa` rises above its running minimum by
    /// more than `tol`.
    pub fn joint_monotonicity_violations(&self, tol: f64) -> usize {
        monotonicity_violations(&self.d_sa, tol)
    }
}

pub fn distance_trajectory(
    p: &ModelParams,
    pair_s: (&DensityMatrix, &DensityMatrix),
    rho_a0: &DensityMatrix,
    grid: &TimeGrid,
) -> Result<DistanceTrajectory> {
    let a = evolve(p, &DensityMatrix::product(pair_s.0, rho_a0), grid)?;
    let b = evolve(p, &DensityMatrix::product(pair_s.1, rho_a0), grid)?;
    let mut d_sa = Vec::with_capacity(a.len());
    let mut d_s = Vec::with_capacity(a.len());
    for (ra, rb) in a.states.iter().zip(&b.states) {
        d_sa.push(trace_distance(ra, rb)?);
        d_s.push(trace_distance(&ra.reduced(Subsystem::S), &rb.reduced(Subsystem::S))?);
    }
    let slope_s = forward_slopes(&a.times, &d_s);
    let revivals = find_revivals(&a.times, &d_s, TOL_REV, MIN_REVIVAL_STEPS);
    Ok(DistanceTrajectory {
        times: a.times,
        d_sa,
        d_s,
        slope_s,
        revivals,
    })
}

fn forward_slopes(times: &[f64], series: &[f64]) -> Vec<f64> {
    times
        .windows(2)
        .zip(series.windows(2))
        .map(|(t, d)| (d[1] - d[0]) / (t[1] - t[0]))
        .collect()
}

/// Maximal runs of at least `min_steps` consecutive grid steps whose slope
/// exceeds `tol`.
pub fn find_revivals(times: &[f64], series: &[f64], tol: f64, min_steps: usize) -> Vec<Interval> {
    let slopes = forward_slopes(times, series);
    let mut out = Vec::new();
    let mut i = 0;
    while i < slopes.len() {
        if slopes[i] > tol {
            let start = i;
            while i < slopes.len() && slopes[i] > tol {
                i += 1;
            }
            if i - start >= min_steps {
                out.push(Interval {
                    start: times[start],
                    end: times[i],
                    amplitude: series[i] - series[start],
                });
            }
        } else {
            i += 1;
        }
    }
    out
}

/// Total distance regained over all revival intervals.
pub fn backflow_summary(d: &DistanceTrajectory) -> f64 {
    d.revivals.iter().map(|r| r.amplitude).sum()
}

/// Maximal runs where `series < −tol`, with the minimum value as amplitude.
pub fn negative_windows(times: &[f64], series: &[f64], tol: f64) -> Vec<Interval> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < series.len() {
        if series[i] < -tol {
            let start = i;
            let mut min = series[i];
            while i < series.len() && series[i] < -tol {
                min = min.min(series[i]);
                i += 1;
            }
            out.push(Interval {
                start: times[start],
                end: times[i - 1],
                amplitude: min,
            });
        } else {
            i += 1;
        }
    }
    out
}

/// Points where the series exceeds its running minimum by more than `tol`.
pub fn monotonicity_violations(series: &[f64], tol: f64) -> usize {
    let mut min = f64::INFINITY;
    let mut count = 0;
    for &d in series {
        if d > min + tol {
            count += 1;
        }
        min = min.min(d);
    }
    count
}

/// Side-by-side comparison of revivals and negative entropy-production windows.
#[derive(Clone, Debug, PartialEq)]
pub struct OverlapReport {
    pub revivals: Vec<Interval>,
    pub negative_windows: Vec<Interval>,
    /// Revivals that intersect no negative window.
    pub revivals_without_negative_rate: usize,
    /// Negative windows that intersect no revival.
    pub negative_rates_without_revival: usize,
}

pub fn overlap_report(revivals: &[Interval], negative: &[Interval]) -> OverlapReport {
    let unmatched = |xs: &[Interval], ys: &[Interval]| xs.iter().filter(|x| !ys.iter().any(|y| x.overlaps(y))).count();
    OverlapReport {
        revivals: revivals.to_vec(),
        negative_windows: negative.to_vec(),
        revivals_without_negative_rate: unmatched(revivals, negative),
        negative_rates_without_revival: unmatched(negative, revivals),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Operator;
    use approx::assert_relative_eq;

    #[test]
    fn trace_distance_values() {
        let r = DensityMatrix::from_bloch(0.3, 0.1, 0.2).unwrap();
        assert!(trace_distance(&r, &r).unwrap() < 1e-15);
        assert_relative_eq!(
            trace_distance(&DensityMatrix::ground(), &DensityMatrix::excited()).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        let q = DensityMatrix::new(Operator::from_real_diagonal(&[0.75, 0.25]).unwrap()).unwrap();
        assert_relative_eq!(
            trace_distance(&q, &DensityMatrix::maximally_mixed(2)).unwrap(),
            0.25,
            epsilon = 1e-14
        );
    }

    #[test]
    fn backflow_of_monotone_and_dip() {
        let times = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let flat = [0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3];
        assert!(find_revivals(&times, &flat, TOL_REV, MIN_REVIVAL_STEPS).is_empty());

        let dip = [0.5, 0.2, 0.25, 0.3, 0.2, 0.1, 0.05];
        let rev = find_revivals(&times, &dip, TOL_REV, MIN_REVIVAL_STEPS);
        let d = DistanceTrajectory {
            times: times.to_vec(),
            d_sa: flat.to_vec(),
            d_s: dip.to_vec(),
            slope_s: forward_slopes(&times, &dip),
            revivals: rev,
        };
        assert_relative_eq!(backflow_summary(&d), 0.1, epsilon = 1e-15);
        assert_eq!(d.revivals[0].start, 1.0);
        assert_eq!(d.revivals[0].end, 3.0);
        assert_eq!(d.joint_monotonicity_violations(TOL_MONO), 0);
    }

    #[test]
    fn single_step_rise_is_not_a_revival() {
        let times = [0.0, 1.0, 2.0, 3.0];
        let series = [0.5, 0.4, 0.45, 0.3];
        assert!(find_revivals(&times, &series, TOL_REV, MIN_REVIVAL_STEPS).is_empty());
        assert_eq!(monotonicity_violations(&series, 1e-7), 1);
    }

    #[test]
    fn windows_and_overlap() {
        let times = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0];
        let sigma = [1.0, -0.5, -0.2, 0.3, -0.1, 0.2];
        let w = negative_windows(&times, &sigma, 1e-8);
        assert_eq!(w.len(), 2);
        assert_eq!(w[0].amplitude, -0.5);
        let rev = [Interval {
            start: 1.5,
            end: 2.5,
            amplitude: 0.1,
        }];
        let report = overlap_report(&rev, &w);
        assert_eq!(report.revivals_without_negative_rate, 0);
        assert_eq!(report.negative_rates_without_revival, 1);
    }

    #[test]
    fn uncoupled_reduced_distance_is_monotone() {
        let p = ModelParams::new(1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.1).unwrap();
        let grid = TimeGrid::uniform(20.0, 400).unwrap();
        let d = distance_trajectory(
            &p,
            (&DensityMatrix::ground(), &DensityMatrix::excited()),
            &DensityMatrix::plus(),
            &grid,
        )
        .unwrap();
        assert!(d.revivals.is_empty());
        assert_eq!(monotonicity_violations(&d.d_s, TOL_MONO), 0);
    }
}
