//! Constrained transport of the face-centred magnetic field.
//!
//! `B1` lives on x-faces, `B2` on y-faces. The corner electric field is an
//! HLL-type upwind average built from transverse reconstructions of face
//! data, and the induction update is a pure curl of that corner field, so
//! the discrete divergence never changes.

use crate::mesh::{fill_xface_ghosts, fill_yface_ghosts, Array2, Boundary, Grid2d, NGHOST};
use crate::mhd::{Conserved, WaveSpeeds, BX, BY};
use crate::reconstruct::{undivided_slope, Limiter};

/// Face-centred normal field components with [`NGHOST`] ghost layers.
///
/// `b1` is indexed `(fi, j)` for x-face `fi` in `[-NGHOST, nx + NGHOST]`,
/// `b2` is indexed `(i, fj)` likewise.
#[derive(Clone, Debug, PartialEq)]
pub struct StaggeredField {
    pub nx: usize,
    pub ny: usize,
    pub b1: Array2<f64>,
    pub b2: Array2<f64>,
}

impl StaggeredField {
    pub fn zeros(nx: usize, ny: usize) -> Self {
        let g = 2 * NGHOST;
        Self {
            nx,
            ny,
            b1: Array2::new(nx + 1 + g, ny + g, NGHOST, NGHOST, 0.0),
            b2: Array2::new(nx + g, ny + 1 + g, NGHOST, NGHOST, 0.0),
        }
    }

    /// Samples `b1(fi, j)` and `b2(i, fj)` on the interior faces.
    pub fn from_fn(
        nx: usize,
        ny: usize,
        mut b1: impl FnMut(isize, isize) -> f64,
        mut b2: impl FnMut(isize, isize) -> f64,
    ) -> Self {
        let mut s = Self::zeros(nx, ny);
        for j in 0..ny as isize {
            for fi in 0..=nx as isize {
                s.b1[(fi, j)] = b1(fi, j);
            }
        }
        for fj in 0..=ny as isize {
            for i in 0..nx as isize {
                s.b2[(i, fj)] = b2(i, fj);
            }
        }
        s
    }

    pub fn fill_ghosts(&mut self, bc: (Boundary, Boundary)) {
        fill_xface_ghosts(&mut self.b1, self.nx, self.ny, bc);
        fill_yface_ghosts(&mut self.b2, self.nx, self.ny, bc);
    }

    /// `self += c * (db1, db2)` on interior faces.
    pub fn add_scaled(&mut self, c: f64, db1: &Array2<f64>, db2: &Array2<f64>) {
        for j in 0..self.ny as isize {
            for fi in 0..=self.nx as isize {
                self.b1[(fi, j)] += c * db1[(fi, j)];
            }
        }
        for fj in 0..=self.ny as isize {
            for i in 0..self.nx as isize {
                self.b2[(i, fj)] += c * db2[(i, fj)];
            }
        }
    }
}

/// Per-face input to the corner field: one-sided speeds and the upwinded
/// transverse velocity `(a+ v^- - a- v^+) / (a+ - a-)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FaceTransport {
    pub speeds: WaveSpeeds,
    pub vt: f64,
}

impl FaceTransport {
    pub fn new(speeds: WaveSpeeds, v_minus: f64, v_plus: f64) -> Self {
        let vt = (speeds.plus * v_minus - speeds.minus * v_plus) / speeds.width();
        Self { speeds, vt }
    }
}

/// Scalar electric field at cell corners, indexed `(fi, fj)` in `[0, nx] x [0, ny]`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeEmf {
    pub omega: Array2<f64>,
}

#[inline]
fn hll_product(ap: f64, am: f64, fl: f64, fr: f64, ul: f64, ur: f64) -> f64 {
    let sum = ap + am;
    if sum > 0.0 {
        (ap * fl + am * fr - ap * am * (ur - ul)) / sum
    } else {
        0.5 * (fl + fr)
    }
}

/// Upwind corner electric field.
///
/// `xt` covers x-faces `fi in [0, nx]` on rows `j in [-2, ny + 1]`
/// (storage offset `(0, 2)`); `yt` covers y-faces `fj in [0, ny]` on columns
/// `i in [-2, nx + 1]` (offset `(2, 0)`). Face ghosts of `faces` must be filled.
pub fn corner_emf(
    faces: &StaggeredField,
    xt: &Array2<FaceTransport>,
    yt: &Array2<FaceTransport>,
    lim: Limiter,
) -> EdgeEmf {
    let (nx, ny) = (faces.nx as isize, faces.ny as isize);
    let mut omega = Array2::new(nx as usize + 1, ny as usize + 1, 0, 0, 0.0);
    let b1 = &faces.b1;
    let b2 = &faces.b2;
    for fj in 0..=ny {
        for fi in 0..=nx {
            let (xs, xn) = (xt[(fi, fj - 1)], xt[(fi, fj)]);
            let (yw, ye) = (yt[(fi - 1, fj)], yt[(fi, fj)]);
            let ax_p = xs.speeds.plus.max(xn.speeds.plus).max(0.0);
            let ax_m = (-xs.speeds.minus).max(-xn.speeds.minus).max(0.0);
            let ay_p = yw.speeds.plus.max(ye.speeds.plus).max(0.0);
            let ay_m = (-yw.speeds.minus).max(-ye.speeds.minus).max(0.0);

            // West/east corner values from y-face data reconstructed along x.
            let half_slope = |i: isize, f: &dyn Fn(isize) -> f64| 0.5 * undivided_slope(f(i - 1), f(i), f(i + 1), lim);
            let vt_y = |i: isize| yt[(i, fj)].vt;
            let b2_at = |i: isize| b2[(i, fj)];
            let v1_w = vt_y(fi - 1) + half_slope(fi - 1, &vt_y);
            let v1_e = vt_y(fi) - half_slope(fi, &vt_y);
            let b2_w = b2_at(fi - 1) + half_slope(fi - 1, &b2_at);
            let b2_e = b2_at(fi) - half_slope(fi, &b2_at);

            // South/north corner values from x-face data reconstructed along y.
            let vt_x = |j: isize| xt[(fi, j)].vt;
            let b1_at = |j: isize| b1[(fi, j)];
            let v2_s = vt_x(fj - 1) + half_slope(fj - 1, &vt_x);
            let v2_n = vt_x(fj) - half_slope(fj, &vt_x);
            let b1_s = b1_at(fj - 1) + half_slope(fj - 1, &b1_at);
            let b1_n = b1_at(fj) - half_slope(fj, &b1_at);

            let x_part = hll_product(ax_p, ax_m, v1_w * b2_w, v1_e * b2_e, b2_w, b2_e);
            let y_part = hll_product(ay_p, ay_m, v2_s * b1_s, v2_n * b1_n, b1_s, b1_n);
            omega[(fi, fj)] = -x_part + y_part;
        }
    }
    EdgeEmf { omega }
}

/// Induction right-hand side: `dB1/dt = -dOmega/dy` on x-faces, `dB2/dt = +dOmega/dx` on y-faces.
///
/// Returned arrays are unghosted: `(nx + 1) x ny` and `nx x (ny + 1)`.
pub fn rhs_faces(emf: &EdgeEmf, grid: &Grid2d) -> (Array2<f64>, Array2<f64>) {
    let (nx, ny) = (grid.nx, grid.ny);
    let om = &emf.omega;
    let mut db1 = Array2::new(nx + 1, ny, 0, 0, 0.0);
    let mut db2 = Array2::new(nx, ny + 1, 0, 0, 0.0);
    for j in 0..ny as isize {
        for fi in 0..=nx as isize {
            db1[(fi, j)] = -(om[(fi, j + 1)] - om[(fi, j)]) / grid.dy;
        }
    }
    for fj in 0..=ny as isize {
        for i in 0..nx as isize {
            db2[(i, fj)] = (om[(i + 1, fj)] - om[(i, fj)]) / grid.dx;
        }
    }
    (db1, db2)
}

/// Discrete divergence per interior cell, unghosted `nx x ny`.
pub fn divergence_b(faces: &StaggeredField, grid: &Grid2d) -> Array2<f64> {
    let mut div = Array2::new(grid.nx, grid.ny, 0, 0, 0.0);
    for j in 0..grid.ny as isize {
        for i in 0..grid.nx as isize {
            div[(i, j)] = (faces.b1[(i + 1, j)] - faces.b1[(i, j)]) / grid.dx
                + (faces.b2[(i, j + 1)] - faces.b2[(i, j)]) / grid.dy;
        }
    }
    div
}

/// Cells whose field magnitude is below this are left out of the relative divergence.
pub const B_MAGNITUDE_CUTOFF: f64 = 1e-12;

/// `max |div B| dx / |B|` over cells with `|B|` above [`B_MAGNITUDE_CUTOFF`].
pub fn max_relative_divergence(faces: &StaggeredField, cells: &Array2<Conserved>, grid: &Grid2d) -> f64 {
    let div = divergence_b(faces, grid);
    let mut worst = 0.0f64;
    for j in 0..grid.ny as isize {
        for i in 0..grid.nx as isize {
            let b = cells[(i, j)].b();
            let mag = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
            if mag > B_MAGNITUDE_CUTOFF {
                worst = worst.max(div[(i, j)].abs() * grid.dx / mag);
            }
        }
    }
    worst
}

/// Writes face averages into the cell-centred `B1`, `B2` of interior cells.
pub fn sync_centers(faces: &StaggeredField, cells: &mut Array2<Conserved>) {
    for j in 0..faces.ny as isize {
        for i in 0..faces.nx as isize {
            let q = &mut cells[(i, j)];
            q[BX] = 0.5 * (faces.b1[(i, j)] + faces.b1[(i + 1, j)]);
            q[BY] = 0.5 * (faces.b2[(i, j)] + faces.b2[(i, j + 1)]);
        }
    }
}
