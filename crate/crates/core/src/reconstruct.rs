//! Slope-limited piecewise-linear reconstruction of cell averages.
//!
//! Reconstruction acts componentwise on conserved variables. Interface
//! arrays use the convention that entry `f` holds the pair
//! `(Q^-, Q^+)` at the face between cells `f-1` and `f`.

use crate::mesh::{Array2, NGHOST};
use crate::mhd::Conserved;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Limiter {
    Minmod,
    /// Monotonized-central limiter with parameter `theta` in `[1, 2]`.
    McTheta(f64),
    /// Unlimited central differences.
    None,
}

impl Limiter {
    pub fn mc(theta: f64) -> crate::Result<Self> {
        if (1.0..=2.0).contains(&theta) {
            Ok(Limiter::McTheta(theta))
        } else {
            Err(crate::Error::Config(format!(
                "MC limiter parameter must lie in [1, 2], got {theta}"
            )))
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Limiter::Minmod => "minmod",
            Limiter::McTheta(_) => "mc",
            Limiter::None => "none",
        }
    }
}

#[inline]
pub fn minmod(a: f64, b: f64) -> f64 {
    if a > 0.0 && b > 0.0 {
        a.min(b)
    } else if a < 0.0 && b < 0.0 {
        a.max(b)
    } else {
        0.0
    }
}

#[inline]
pub fn minmod3(a: f64, b: f64, c: f64) -> f64 {
    if a > 0.0 && b > 0.0 && c > 0.0 {
        a.min(b).min(c)
    } else if a < 0.0 && b < 0.0 && c < 0.0 {
        a.max(b).max(c)
    } else {
        0.0
    }
}

/// Limited slope of cell `q0` from its neighbours `qm`, `qp` at spacing `h`.
#[inline]
pub fn limited_slope(qm: f64, q0: f64, qp: f64, h: f64, lim: Limiter) -> f64 {
    undivided_slope(qm, q0, qp, lim) / h
}

/// Limited slope multiplied by the cell width.
#[inline]
pub(crate) fn undivided_slope(qm: f64, q0: f64, qp: f64, lim: Limiter) -> f64 {
    match lim {
        Limiter::Minmod => minmod(q0 - qm, qp - q0),
        Limiter::McTheta(theta) => minmod3(theta * (q0 - qm), 0.5 * (qp - qm), theta * (qp - q0)),
        Limiter::None => 0.5 * (qp - qm),
    }
}

/// Componentwise limited slope of a conserved state, multiplied by the cell width.
#[inline]
pub(crate) fn state_slope(qm: &Conserved, q0: &Conserved, qp: &Conserved, lim: Limiter) -> Conserved {
    Conserved(std::array::from_fn(|c| undivided_slope(qm[c], q0[c], qp[c], lim)))
}

/// Face states of a 1-D array whose first and last [`NGHOST`] entries are ghosts.
///
/// Returns `n + 1` pairs for the `n` interior cells; pair `f` sits between
/// interior cells `f - 1` and `f`.
pub fn interface_states_1d(cells: &[Conserved], lim: Limiter) -> Vec<(Conserved, Conserved)> {
    assert!(cells.len() > 2 * NGHOST, "need ghost layers on both sides");
    let n = cells.len() - 2 * NGHOST;
    let slopes: Vec<Conserved> = (1..cells.len() - 1)
        .map(|k| state_slope(&cells[k - 1], &cells[k], &cells[k + 1], lim))
        .collect();
    // slopes[k - 1] belongs to cells[k]
    (0..=n)
        .map(|f| {
            let left = NGHOST + f - 1;
            let right = NGHOST + f;
            let ql = cells[left] + 0.5 * slopes[left - 1];
            let qr = cells[right] - 0.5 * slopes[right - 1];
            (ql, qr)
        })
        .collect()
}

/// Dimension-by-dimension face states of a ghosted 2-D cell array.
///
/// The x-face array has shape `(nx + 1) x ny` indexed by `(fi, j)`, the
/// y-face array `nx x (ny + 1)` indexed by `(i, fj)`, both without ghost
/// offsets.
#[allow(clippy::type_complexity)]
pub fn interface_states_2d(
    cells: &Array2<Conserved>,
    nx: usize,
    ny: usize,
    lim: Limiter,
) -> (Array2<(Conserved, Conserved)>, Array2<(Conserved, Conserved)>) {
    let zero = (Conserved::ZERO, Conserved::ZERO);
    let mut xf = Array2::new(nx + 1, ny, 0, 0, zero);
    let mut yf = Array2::new(nx, ny + 1, 0, 0, zero);
    for j in 0..ny as isize {
        for fi in 0..=nx as isize {
            xf[(fi, j)] = x_face_pair(cells, fi, j, lim);
        }
    }
    for fj in 0..=ny as isize {
        for i in 0..nx as isize {
            yf[(i, fj)] = y_face_pair(cells, i, fj, lim);
        }
    }
    (xf, yf)
}

#[inline]
pub(crate) fn x_face_pair(cells: &Array2<Conserved>, fi: isize, j: isize, lim: Limiter) -> (Conserved, Conserved) {
    let sl = state_slope(&cells[(fi - 2, j)], &cells[(fi - 1, j)], &cells[(fi, j)], lim);
    let sr = state_slope(&cells[(fi - 1, j)], &cells[(fi, j)], &cells[(fi + 1, j)], lim);
    (cells[(fi - 1, j)] + 0.5 * sl, cells[(fi, j)] - 0.5 * sr)
}

#[inline]
pub(crate) fn y_face_pair(cells: &Array2<Conserved>, i: isize, fj: isize, lim: Limiter) -> (Conserved, Conserved) {
    let sl = state_slope(&cells[(i, fj - 2)], &cells[(i, fj - 1)], &cells[(i, fj)], lim);
    let sr = state_slope(&cells[(i, fj - 1)], &cells[(i, fj)], &cells[(i, fj + 1)], lim);
    (cells[(i, fj - 1)] + 0.5 * sl, cells[(i, fj)] - 0.5 * sr)
}
