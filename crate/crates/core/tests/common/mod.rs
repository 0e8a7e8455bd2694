#![allow(dead_code)]

use ldcu_mhd::ldcu1d::Field1d;
use ldcu_mhd::ldcu2d::Field2d;
use ldcu_mhd::mesh::{Boundary, Grid1d, Grid2d};
use ldcu_mhd::mhd::{conserved_from_primitive, GasParams, Primitive};
use ldcu_mhd::ctransport::StaggeredField;
use proptest::prelude::*;

pub const GAMMAS: [f64; 3] = [5.0 / 3.0, 1.4, 2.0];

/// Admissible primitive states with densities and pressures spanning three decades.
pub fn primitive_state() -> impl Strategy<Value = Primitive> {
    (
        -2.0f64..1.0,
        prop::array::uniform3(-5.0f64..5.0),
        prop::array::uniform3(-5.0f64..5.0),
        -2.0f64..1.0,
    )
        .prop_map(|(lr, v, b, lp)| Primitive::new(10f64.powf(lr), v, b, 10f64.powf(lp)))
}

pub fn gas_choice() -> impl Strategy<Value = GasParams> {
    (0usize..3).prop_map(|k| GasParams::new(GAMMAS[k]).unwrap())
}

/// Brio-Wu states with the transverse field rotated into `B3`.
pub fn brio_wu_b3(x: f64) -> Primitive {
    if x < 0.0 {
        Primitive::new(1.0, [0.0; 3], [0.75, 0.0, 1.0], 1.0)
    } else {
        Primitive::new(0.125, [0.0; 3], [0.75, 0.0, -1.0], 0.1)
    }
}

pub fn brio_wu_b3_1d(n: usize) -> (Field1d, GasParams) {
    let gas = GasParams::new(2.0).unwrap();
    let grid = Grid1d::new(n, -1.0, 1.0).unwrap();
    let cells = (0..n as isize)
        .map(|j| conserved_from_primitive(&brio_wu_b3(grid.center(j)), gas).unwrap())
        .collect();
    (Field1d::new(grid, Boundary::Outflow, 0.75, cells).unwrap(), gas)
}

/// The same data, invariant in y, on an `n x ny` periodic-in-y grid.
pub fn brio_wu_b3_2d(n: usize, ny: usize) -> (Field2d, GasParams) {
    let gas = GasParams::new(2.0).unwrap();
    let grid = Grid2d::new(n, ny, (-1.0, 1.0), (0.0, 2.0 * ny as f64 / n as f64)).unwrap();
    let faces = StaggeredField::from_fn(n, ny, |_, _| 0.75, |_, _| 0.0);
    let field = Field2d::from_parts(grid, (Boundary::Outflow, Boundary::Periodic), faces, gas, |i, _| {
        brio_wu_b3(grid.xc(i))
    })
    .unwrap();
    (field, gas)
}

pub fn rel_close(a: f64, b: f64, scale: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * scale.max(a.abs()).max(b.abs()).max(f64::MIN_POSITIVE)
}
