//! Two-dimensional semi-discrete LDCU scheme on a staggered mesh.
//!
//! Hydrodynamic variables and `B3` are cell averages evolved by
//! dimension-by-dimension central-upwind fluxes; `B1`, `B2` live on faces
//! and are evolved by [`crate::ctransport`].

use crate::ctransport::{
    corner_emf, max_relative_divergence, rhs_faces, sync_centers, EdgeEmf, FaceTransport, StaggeredField,
};
use crate::error::{Location, Result};
use crate::ldcu1d::{correction_k_star, solve_face, CorrectionTerm};
use crate::mesh::{fill_cell_ghosts, Array2, Boundary, Grid2d, NGHOST};
use crate::mhd::{
    interface_speeds, primitive_from_conserved, Axis, Conserved, GasParams, Primitive, WaveSpeeds, BX, BY,
    SPEED_FLOOR,
};
use crate::reconstruct::{state_slope, Limiter};

/// Numerical choices shared by every right-hand-side evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scheme {
    pub gas: GasParams,
    pub limiter: Limiter,
    /// Limiter for the transverse face-to-corner reconstruction.
    pub corner_limiter: Limiter,
    pub use_correction: bool,
}

impl Scheme {
    /// Corner reconstruction uses MC-theta unless cell reconstruction is unlimited.
    pub fn new(gas: GasParams, limiter: Limiter, theta: f64, use_correction: bool) -> Self {
        let corner_limiter = match limiter {
            Limiter::None => Limiter::None,
            _ => Limiter::McTheta(theta),
        };
        Self {
            gas,
            limiter,
            corner_limiter,
            use_correction,
        }
    }
}

/// Cell-centred state plus face-centred normal field.
#[derive(Clone, Debug, PartialEq)]
pub struct Field2d {
    pub grid: Grid2d,
    pub bc: (Boundary, Boundary),
    /// `(nx + 4) x (ny + 4)` cells with two ghost layers; `B1`, `B2` mirror face averages.
    pub cells: Array2<Conserved>,
    pub faces: StaggeredField,
}

impl Field2d {
    /// Assembles a field from face values and per-cell primitive states.
    ///
    /// The centred `B1`, `B2` of `cell` are replaced by face averages before the
    /// energy is formed, so the prescribed pressure is kept exactly.
    pub fn from_parts(
        grid: Grid2d,
        bc: (Boundary, Boundary),
        mut faces: StaggeredField,
        gas: GasParams,
        mut cell: impl FnMut(isize, isize) -> Primitive,
    ) -> Result<Self> {
        faces.fill_ghosts(bc);
        let (nx, ny) = (grid.nx, grid.ny);
        let mut cells = Array2::new(nx + 2 * NGHOST, ny + 2 * NGHOST, NGHOST, NGHOST, Conserved::ZERO);
        sync_centers(&faces, &mut cells);
        for j in 0..ny as isize {
            for i in 0..nx as isize {
                let mut w = cell(i, j);
                w.b[0] = cells[(i, j)][BX];
                w.b[1] = cells[(i, j)][BY];
                cells[(i, j)] = crate::mhd::conserved_from_primitive(&w, gas).map_err(|e| e.located(Location::Cell2d(i, j)))?;
            }
        }
        let mut field = Self { grid, bc, cells, faces };
        field.refresh();
        Ok(field)
    }

    /// Fills face and cell ghosts and re-syncs centred `B1`, `B2`.
    pub fn refresh(&mut self) {
        self.faces.fill_ghosts(self.bc);
        sync_centers(&self.faces, &mut self.cells);
        fill_cell_ghosts(&mut self.cells, self.grid.nx, self.grid.ny, self.bc);
    }

    pub fn nx(&self) -> usize {
        self.grid.nx
    }

    pub fn ny(&self) -> usize {
        self.grid.ny
    }

    /// `sum Q dx dy` over interior cells.
    pub fn totals(&self) -> Conserved {
        let mut t = Conserved::ZERO;
        for j in 0..self.ny() as isize {
            for i in 0..self.nx() as isize {
                t += self.cells[(i, j)];
            }
        }
        t * self.grid.cell_area()
    }

    pub fn max_relative_divergence(&self) -> f64 {
        max_relative_divergence(&self.faces, &self.cells, &self.grid)
    }

    pub fn primitive(&self, i: isize, j: isize, gas: GasParams) -> Result<Primitive> {
        primitive_from_conserved(&self.cells[(i, j)], gas).map_err(|e| e.located(Location::Cell2d(i, j)))
    }

    /// Interior cell values as an unghosted `nx x ny` array.
    pub fn interior(&self) -> Array2<Conserved> {
        let mut out = Array2::new(self.nx(), self.ny(), 0, 0, Conserved::ZERO);
        for j in 0..self.ny() as isize {
            for i in 0..self.nx() as isize {
                out[(i, j)] = self.cells[(i, j)];
            }
        }
        out
    }
}

/// Time derivative of a [`Field2d`].
#[derive(Clone, Debug)]
pub struct Rhs2d {
    /// `nx x ny`; the `B1`, `B2` rows are zero.
    pub cells: Array2<Conserved>,
    pub db1: Array2<f64>,
    pub db2: Array2<f64>,
    /// `max(max(a+, -a-) / dx, max(b+, -b-) / dy)` over interior faces.
    pub max_rate: f64,
    /// Faces where the correction was dropped because `rho* <= 0`.
    pub skipped_corrections: usize,
}

struct Sweep {
    xflux: Array2<Conserved>,
    yflux: Array2<Conserved>,
    xt: Array2<FaceTransport>,
    yt: Array2<FaceTransport>,
    max_rate: f64,
    skipped: usize,
}

/// Fluxes and transport data on x-faces `fi in [0, nx]`, rows `[-2, ny + 1]`
/// and y-faces `fj in [0, ny]`, columns `[-2, nx + 1]`.
fn sweep(field: &Field2d, scheme: &Scheme) -> Result<Sweep> {
    let (nx, ny) = (field.nx() as isize, field.ny() as isize);
    let g = NGHOST as isize;
    let cells = &field.cells;
    let lim = scheme.limiter;

    let mut sx = Array2::new(nx as usize + 4, ny as usize + 4, 2, 2, Conserved::ZERO);
    let mut sy = sx.clone();
    for j in -g..ny + g {
        for i in -g + 1..nx + g - 1 {
            sx[(i, j)] = state_slope(&cells[(i - 1, j)], &cells[(i, j)], &cells[(i + 1, j)], lim);
        }
    }
    for j in -g + 1..ny + g - 1 {
        for i in -g..nx + g {
            sy[(i, j)] = state_slope(&cells[(i, j - 1)], &cells[(i, j)], &cells[(i, j + 1)], lim);
        }
    }

    let zero_t = FaceTransport::new(WaveSpeeds::new(-1.0, 1.0), 0.0, 0.0);
    let mut xflux = Array2::new(nx as usize + 1, ny as usize + 4, 0, 2, Conserved::ZERO);
    let mut xt = Array2::new(nx as usize + 1, ny as usize + 4, 0, 2, zero_t);
    let mut yflux = Array2::new(nx as usize + 4, ny as usize + 1, 2, 0, Conserved::ZERO);
    let mut yt = Array2::new(nx as usize + 4, ny as usize + 1, 2, 0, zero_t);
    let mut rate = 0.0f64;
    let mut skipped = 0;

    for j in -g..ny + g {
        let interior = (0..ny).contains(&j);
        for fi in 0..=nx {
            let ql = cells[(fi - 1, j)] + 0.5 * sx[(fi - 1, j)];
            let qr = cells[(fi, j)] - 0.5 * sx[(fi, j)];
            let sol = solve_face(&ql, &qr, scheme.gas, Axis::X, scheme.use_correction, false)
                .map_err(|e| e.located(Location::XFace(fi, j)))?;
            skipped += sol.skipped as usize;
            if interior {
                rate = rate.max(sol.speeds.max_abs() / field.grid.dx);
            }
            xflux[(fi, j)] = sol.flux;
            xt[(fi, j)] = FaceTransport::new(sol.speeds, sol.wl.v[1], sol.wr.v[1]);
        }
    }
    for fj in 0..=ny {
        for i in -g..nx + g {
            let ql = cells[(i, fj - 1)] + 0.5 * sy[(i, fj - 1)];
            let qr = cells[(i, fj)] - 0.5 * sy[(i, fj)];
            let sol = solve_face(&ql, &qr, scheme.gas, Axis::Y, scheme.use_correction, false)
                .map_err(|e| e.located(Location::YFace(i, fj)))?;
            skipped += sol.skipped as usize;
            if (0..nx).contains(&i) {
                rate = rate.max(sol.speeds.max_abs() / field.grid.dy);
            }
            yflux[(i, fj)] = sol.flux;
            yt[(i, fj)] = FaceTransport::new(sol.speeds, sol.wl.v[0], sol.wr.v[0]);
        }
    }
    Ok(Sweep {
        xflux,
        yflux,
        xt,
        yt,
        max_rate: rate,
        skipped,
    })
}

fn hydro_divergence(sw: &Sweep, grid: &Grid2d) -> Array2<Conserved> {
    let (nx, ny) = (grid.nx, grid.ny);
    let mut out = Array2::new(nx, ny, 0, 0, Conserved::ZERO);
    let (ix, iy) = (1.0 / grid.dx, 1.0 / grid.dy);
    for j in 0..ny as isize {
        for i in 0..nx as isize {
            let mut d = (sw.xflux[(i, j)] - sw.xflux[(i + 1, j)]) * ix + (sw.yflux[(i, j)] - sw.yflux[(i, j + 1)]) * iy;
            d[BX] = 0.0;
            d[BY] = 0.0;
            out[(i, j)] = d;
        }
    }
    out
}

/// Full right-hand side: hydrodynamic rows and `B3` from fluxes, face fields from the corner EMF.
///
/// Ghosts of `field` must be current (see [`Field2d::refresh`]).
pub fn rhs_2d(field: &Field2d, scheme: &Scheme) -> Result<Rhs2d> {
    let sw = sweep(field, scheme)?;
    let cells = hydro_divergence(&sw, &field.grid);
    let emf = corner_emf(&field.faces, &sw.xt, &sw.yt, scheme.corner_limiter);
    let (db1, db2) = rhs_faces(&emf, &field.grid);
    Ok(Rhs2d {
        cells,
        db1,
        db2,
        max_rate: sw.max_rate,
        skipped_corrections: sw.skipped,
    })
}

/// `dU/dt` (and `dB3/dt`) alone.
pub fn rhs_hydro_2d(field: &Field2d, scheme: &Scheme) -> Result<Array2<Conserved>> {
    let sw = sweep(field, scheme)?;
    Ok(hydro_divergence(&sw, &field.grid))
}

/// Corner electric field of the current state.
pub fn emf_2d(field: &Field2d, scheme: &Scheme) -> Result<EdgeEmf> {
    let sw = sweep(field, scheme)?;
    Ok(corner_emf(&field.faces, &sw.xt, &sw.yt, scheme.corner_limiter))
}

/// y-direction correction term (speeds `b-`, `b+`).
pub fn correction_k_star_y(
    qs: &Conserved,
    qn: &Conserved,
    s: WaveSpeeds,
    gas: GasParams,
) -> Result<CorrectionTerm> {
    correction_k_star(qs, qn, s, gas, Axis::Y)
}

/// `cfl * min(dx / max(a+, -a-), dy / max(b+, -b-))` over interior faces.
pub fn dt_2d(field: &Field2d, scheme: &Scheme, cfl: f64) -> Result<f64> {
    let (nx, ny) = (field.nx() as isize, field.ny() as isize);
    let cells = &field.cells;
    let lim = scheme.limiter;
    let mut rate = 0.0f64;
    for j in 0..ny {
        for fi in 0..=nx {
            let sl = state_slope(&cells[(fi - 2, j)], &cells[(fi - 1, j)], &cells[(fi, j)], lim);
            let sr = state_slope(&cells[(fi - 1, j)], &cells[(fi, j)], &cells[(fi + 1, j)], lim);
            let ql = cells[(fi - 1, j)] + 0.5 * sl;
            let qr = cells[(fi, j)] - 0.5 * sr;
            let s = interface_speeds(&ql, &qr, scheme.gas, Axis::X, SPEED_FLOOR)
                .map_err(|e| e.located(Location::XFace(fi, j)))?;
            rate = rate.max(s.max_abs() / field.grid.dx);
        }
    }
    for fj in 0..=ny {
        for i in 0..nx {
            let sl = state_slope(&cells[(i, fj - 2)], &cells[(i, fj - 1)], &cells[(i, fj)], lim);
            let sr = state_slope(&cells[(i, fj - 1)], &cells[(i, fj)], &cells[(i, fj + 1)], lim);
            let ql = cells[(i, fj - 1)] + 0.5 * sl;
            let qr = cells[(i, fj)] - 0.5 * sr;
            let s = interface_speeds(&ql, &qr, scheme.gas, Axis::Y, SPEED_FLOOR)
                .map_err(|e| e.located(Location::YFace(i, fj)))?;
            rate = rate.max(s.max_abs() / field.grid.dy);
        }
    }
    Ok(cfl / rate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mhd::{conserved_from_primitive, NCOMP};

    const G53: GasParams = GasParams { gamma: 5.0 / 3.0 };

    fn scheme() -> Scheme {
        Scheme::new(G53, Limiter::Minmod, 1.3, true)
    }

    fn uniform(n: usize, w: Primitive) -> Field2d {
        let grid = Grid2d::new(n, n, (0.0, 1.0), (0.0, 1.0)).unwrap();
        let faces = StaggeredField::from_fn(n, n, |_, _| w.b[0], |_, _| w.b[1]);
        let bc = (Boundary::Periodic, Boundary::Periodic);
        Field2d::from_parts(grid, bc, faces, G53, |_, _| w).unwrap()
    }

    #[test]
    fn uniform_state_is_a_fixed_point() {
        let f = uniform(6, Primitive::new(1.2, [0.3, -0.4, 0.1], [0.5, 0.2, -0.3], 0.8));
        let r = rhs_2d(&f, &scheme()).unwrap();
        assert!(r.cells.as_slice().iter().all(|q| q.abs_max() < 1e-13));
        assert!(r.db1.as_slice().iter().chain(r.db2.as_slice()).all(|v| v.abs() < 1e-13));
        assert_eq!(r.skipped_corrections, 0);
    }

    #[test]
    fn dt_for_isotropic_rest_state() {
        // gamma p / rho = 1
        let w = Primitive::new(1.0, [0.0; 3], [0.0; 3], 0.6);
        let f = uniform(10, w);
        let dt = dt_2d(&f, &scheme(), 0.45).unwrap();
        assert!((dt - 0.45 * 0.1).abs() < 1e-14);
        let r = rhs_2d(&f, &scheme()).unwrap();
        assert!((0.45 / r.max_rate - dt).abs() < 1e-15);
    }

    #[test]
    fn y_correction_is_permuted_x_correction() {
        let ws = Primitive::new(1.0, [0.2, 0.5, -0.1], [0.3, 0.75, 0.2], 1.0);
        let wn = Primitive::new(0.4, [0.1, 0.1, 0.3], [-0.2, 0.75, 0.4], 0.3);
        let qs = conserved_from_primitive(&ws, G53).unwrap();
        let qn = conserved_from_primitive(&wn, G53).unwrap();
        let s = interface_speeds(&qs, &qn, G53, Axis::Y, SPEED_FLOOR).unwrap();
        let ky = correction_k_star_y(&qs, &qn, s, G53).unwrap();
        let kx = correction_k_star(&qs.swap_xy(), &qn.swap_xy(), s, G53, Axis::X).unwrap();
        assert_eq!(ky.delta, kx.delta);
        assert_eq!(ky.alpha, kx.alpha);
        assert_eq!(ky.vector, kx.vector.swap_xy());
        assert_eq!(ky.vector[crate::mhd::BZ], 0.0);

        let k0 = correction_k_star_y(&qs, &qs, s, G53).unwrap();
        assert_eq!(k0.vector, Conserved::ZERO);
    }

    #[test]
    fn periodic_rhs_sums_to_zero() {
        let n = 12;
        let grid = Grid2d::new(n, n, (0.0, 1.0), (0.0, 1.0)).unwrap();
        let tau = 2.0 * std::f64::consts::PI;
        // A = sin(2 pi x) sin(2 pi y) / 10 sampled at corners
        let a = |x: f64, y: f64| 0.1 * (tau * x).sin() * (tau * y).sin();
        let faces = StaggeredField::from_fn(
            n,
            n,
            |fi, j| (a(grid.xf(fi), grid.yf(j + 1)) - a(grid.xf(fi), grid.yf(j))) / grid.dy + 0.4,
            |i, fj| -(a(grid.xf(i + 1), grid.yf(fj)) - a(grid.xf(i), grid.yf(fj))) / grid.dx,
        );
        let bc = (Boundary::Periodic, Boundary::Periodic);
        let f = Field2d::from_parts(grid, bc, faces, G53, |i, j| {
            let (x, y) = (grid.xc(i), grid.yc(j));
            Primitive::new(
                1.0 + 0.5 * (tau * x).sin() * (tau * y).cos(),
                [0.3 * (tau * y).sin(), -0.2 * (tau * x).cos(), 0.1],
                [0.0, 0.0, 0.2 * (tau * (x + y)).sin()],
                1.0,
            )
        })
        .unwrap();
        let r = rhs_2d(&f, &scheme()).unwrap();
        for c in 0..NCOMP {
            let total: f64 = r.cells.as_slice().iter().map(|q| q[c]).sum();
            let scale: f64 = r.cells.as_slice().iter().map(|q| q[c].abs()).sum::<f64>().max(1.0);
            assert!(total.abs() < 1e-13 * scale, "component {c}: {total}");
        }
        let div = crate::ctransport::divergence_b(&f.faces, &f.grid);
        assert!(div.as_slice().iter().all(|d| d.abs() < 1e-12));
    }
}
