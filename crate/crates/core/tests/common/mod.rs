#![allow(dead_code)]

use ancilla_core::{DensityMatrix, ModelParams, Operator, C64};
use proptest::prelude::*;
use rand::Rng;

/// Full-rank state `G G† / Tr` from a Ginibre matrix, mixed with a little identity.
pub fn state_from_entries(dim: usize, entries: &[f64]) -> DensityMatrix {
    let n = dim * dim;
    let g: Vec<C64> = (0..n).map(|k| C64::new(entries[2 * k], entries[2 * k + 1])).collect();
    let g = Operator::from_rows(dim, &g).unwrap();
    let gg = &(&g * &g.adjoint()) + &(&Operator::identity(dim) * 1e-3);
    let tr = gg.trace().re;
    DensityMatrix::from_hermitized(&(&gg * (1.0 / tr)), 1e-10).unwrap()
}

pub fn arb_state(dim: usize) -> impl Strategy<Value = DensityMatrix> {
    prop::collection::vec(-1.0f64..1.0, 2 * dim * dim).prop_map(move |v| state_from_entries(dim, &v))
}

pub fn arb_hermitian(dim: usize) -> impl Strategy<Value = Operator> {
    prop::collection::vec(-1.0f64..1.0, 2 * dim * dim).prop_map(move |v| {
        let m: Vec<C64> = (0..dim * dim).map(|k| C64::new(v[2 * k], v[2 * k + 1])).collect();
        Operator::from_rows(dim, &m).unwrap().hermitian_part()
    })
}

pub fn arb_params() -> impl Strategy<Value = ModelParams> {
    (0.3f64..2.0, 0.3f64..2.0, -1.5f64..1.5, -1.5f64..1.5, -1.0f64..1.0, 0.5f64..10.0, 0.05f64..2.0)
        .prop_map(|(ws, wa, jx, jy, jz, g, gg)| ModelParams::new(ws, wa, jx, jy, jz, g, gg).unwrap())
}

pub fn random_state<R: Rng>(rng: &mut R, dim: usize) -> DensityMatrix {
    let v: Vec<f64> = (0..2 * dim * dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    state_from_entries(dim, &v)
}
