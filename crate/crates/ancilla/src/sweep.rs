//! Steady-state correlation sweeps over one or two parameters.

use ancilla_core::correlations::{correlation_record, CorrelationRecord};
use ancilla_core::dynamics::steady_state;
use ancilla_core::ModelParams;
use rayon::prelude::*;

use crate::config::{Param, RunConfig};
use crate::output::{Cell, Table};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointResult {
    pub record: CorrelationRecord,
    pub null_dim: usize,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    /// Grid indices along the first and second axis.
    pub index: [usize; 2],
    pub params: ModelParams,
    pub outcome: Result<PointResult, String>,
}

pub fn solve_point(p: &ModelParams) -> ancilla_core::Result<PointResult> {
    p.validate()?;
    let ss = steady_state(p)?;
    Ok(PointResult {
        record: correlation_record(&ss.state, p)?,
        null_dim: ss.null_dim,
        residual: ss.residual,
    })
}

/// Evaluates every grid point in parallel; failures are kept per point.
pub fn run_points(config: &RunConfig) -> crate::Result<Vec<SweepPoint>> {
    config.validate()?;
    let axes = config.sweep_axes();
    let first = axes[0].values();
    let second = axes.get(1).map_or(vec![f64::NAN], |a| a.values());
    let jobs: Vec<([usize; 2], ModelParams)> = first
        .iter()
        .enumerate()
        .flat_map(|(i, &x)| {
            let axes = &axes;
            second.iter().enumerate().map(move |(j, &y)| {
                let mut p = config.params;
                axes[0].param.set(&mut p, x);
                if let Some(b) = axes.get(1) {
                    b.param.set(&mut p, y);
                }
                ([i, j], p)
            })
        })
        .collect();
    Ok(jobs
        .into_par_iter()
        .map(|(index, params)| SweepPoint {
            index,
            params,
            outcome: solve_point(&params).map_err(|e| e.to_string()),
        })
        .collect())
}

pub fn steady_sweep(config: &RunConfig) -> crate::Result<Table> {
    let points = run_points(config)?;
    let mut headers: Vec<String> = vec!["i".into(), "j".into()];
    headers.extend(Param::ALL.iter().map(|p| p.name().to_string()));
    headers.extend(
        ["eof", "mutual_info", "beta_eff_s", "beta_eff_a", "null_dim", "residual", "error"].map(String::from),
    );
    let mut table = Table::new(headers);
    let base = config.log_base;
    for pt in points {
        let mut row: Vec<Cell> = vec![pt.index[0].into(), pt.index[1].into()];
        row.extend(Param::ALL.iter().map(|p| Cell::from(p.get(&pt.params))));
        match pt.outcome {
            Ok(r) => row.extend([
                base.from_bits(r.record.eof).into(),
                base.from_nats(r.record.mutual_info).into(),
                r.record.beta_eff_s.into(),
                r.record.beta_eff_a.into(),
                r.null_dim.into(),
                r.residual.into(),
                Cell::Empty,
            ]),
            Err(e) => {
                row.extend(std::iter::repeat_n(Cell::Empty, 6));
                row.push(Cell::Text(e));
            }
        }
        table.push(row);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SweepAxis;

    #[test]
    fn single_point_sweep_gives_one_row() {
        let mut c = RunConfig::default();
        c.sweeps = vec!["jx:0.5:0.5:1".parse().unwrap()];
        let t = steady_sweep(&c).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0][t.column("error").unwrap()], Cell::Empty);
    }

    #[test]
    fn failing_points_do_not_stop_the_sweep() {
        let mut c = RunConfig::default();
        c.sweeps = vec![SweepAxis {
            param: Param::BigGamma,
            min: -1.0,
            max: 1.0,
            n: 3,
        }];
        let t = steady_sweep(&c).unwrap();
        assert_eq!(t.rows.len(), 3);
        let err = t.column("error").unwrap();
        assert!(matches!(t.rows[0][err], Cell::Text(_)));
        assert!(matches!(t.rows[1][err], Cell::Text(_)));
        assert_eq!(t.rows[2][err], Cell::Empty);
    }

    #[test]
    fn rows_follow_grid_order() {
        let mut c = RunConfig::default();
        c.sweeps = vec!["omega_a:0.5:1.5:3".parse().unwrap(), "jx:0:1:4".parse().unwrap()];
        let t = steady_sweep(&c).unwrap();
        let i = t.floats("i").unwrap();
        let j = t.floats("j").unwrap();
        for (k, (a, b)) in i.iter().zip(&j).enumerate() {
            assert_eq!((*a as usize, *b as usize), (k / 4, k % 4));
        }
    }
}
