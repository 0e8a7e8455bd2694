//! One-dimensional LDCU scheme: the semi-discrete numerical flux with its
//! low-dissipation correction, and the fully-discrete
//! reconstruct/evolve/project step it is derived from.

use crate::error::{Error, Location, Result};
use crate::mesh::{fill_ghosts_1d, Boundary, Grid1d, NGHOST};
use crate::mhd::{
    flux, flux_from_primitive, hll_average, interface_speeds, primitive_from_conserved, speeds_from_primitive, Axis,
    Conserved, GasParams, Primitive, WaveSpeeds, BX, EN, MX, RHO, SPEED_FLOOR,
};
use crate::reconstruct::{interface_states_1d, minmod, state_slope, Limiter};

/// The correction `K*` added to the central-upwind flux at one interface.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrectionTerm {
    pub delta: f64,
    pub alpha: f64,
    /// `alpha * delta * (1, v1*, v2*, v3*, 0, 0, 0, |V*|^2 / 2)`.
    pub vector: Conserved,
}

impl CorrectionTerm {
    pub const ZERO: CorrectionTerm = CorrectionTerm {
        delta: 0.0,
        alpha: 0.0,
        vector: Conserved::ZERO,
    };
}

/// Correction term from a precomputed HLL state. `None` when `rho* <= 0`.
pub(crate) fn correction_from_star(
    ql: &Conserved,
    qr: &Conserved,
    star: &Conserved,
    s: WaveSpeeds,
    axis: Axis,
) -> Option<CorrectionTerm> {
    let rho = star.rho();
    if !(rho > 0.0) {
        return None;
    }
    let v = [star[MX] / rho, star[MX + 1] / rho, star[MX + 2] / rho];
    let vn = v[axis.index()];
    let delta = minmod((vn - s.minus) * (rho - ql.rho()), (s.plus - vn) * (qr.rho() - rho));
    let alpha = if vn >= 0.0 {
        s.minus / (s.minus - vn)
    } else {
        s.plus / (s.plus - vn)
    };
    let ad = alpha * delta;
    let mut k = Conserved::ZERO;
    k[RHO] = ad;
    for i in 0..3 {
        k[MX + i] = ad * v[i];
    }
    k[EN] = ad * 0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    Some(CorrectionTerm { delta, alpha, vector: k })
}

pub fn correction_k_star(
    ql: &Conserved,
    qr: &Conserved,
    s: WaveSpeeds,
    gas: GasParams,
    axis: Axis,
) -> Result<CorrectionTerm> {
    let fl = flux(ql, gas, axis)?;
    let fr = flux(qr, gas, axis)?;
    let star = hll_average(ql, qr, &fl, &fr, s);
    correction_from_star(ql, qr, &star, s, axis).ok_or_else(|| Error::inadmissible("intermediate density", star.rho()))
}

/// Everything the 2-D assembly needs from one interface.
#[derive(Clone, Copy, Debug)]
pub(crate) struct FaceSolution {
    pub flux: Conserved,
    pub speeds: WaveSpeeds,
    pub wl: Primitive,
    pub wr: Primitive,
    /// Set when the correction was requested but dropped because `rho* <= 0`.
    pub skipped: bool,
}

/// Central-upwind flux at one interface with optional correction.
///
/// With `strict`, a non-positive intermediate density is an error; otherwise
/// the correction is dropped and `skipped` is set.
pub(crate) fn solve_face(
    ql: &Conserved,
    qr: &Conserved,
    gas: GasParams,
    axis: Axis,
    use_correction: bool,
    strict: bool,
) -> Result<FaceSolution> {
    let wl = primitive_from_conserved(ql, gas)?;
    let wr = primitive_from_conserved(qr, gas)?;
    let s = speeds_from_primitive(&wl, &wr, gas, axis, SPEED_FLOOR);
    let fl = flux_from_primitive(&wl, ql, axis);
    let fr = flux_from_primitive(&wr, qr, axis);
    let inv = 1.0 / s.width();
    let diff = s.plus * s.minus * inv;
    let mut f = Conserved(std::array::from_fn(|c| {
        (s.plus * fl[c] - s.minus * fr[c]) * inv + diff * (qr[c] - ql[c])
    }));
    let mut skipped = false;
    if use_correction {
        let star = hll_average(ql, qr, &fl, &fr, s);
        match correction_from_star(ql, qr, &star, s, axis) {
            Some(k) => f += k.vector,
            None if strict => return Err(Error::inadmissible("intermediate density", star.rho())),
            None => skipped = true,
        }
    }
    f[BX + axis.index()] = 0.0;
    Ok(FaceSolution {
        flux: f,
        speeds: s,
        wl,
        wr,
        skipped,
    })
}

/// Semi-discrete numerical flux along x (speeds supplied by the caller).
pub fn semi_discrete_flux(
    ql: &Conserved,
    qr: &Conserved,
    s: WaveSpeeds,
    gas: GasParams,
    use_correction: bool,
) -> Result<Conserved> {
    let axis = Axis::X;
    let fl = flux(ql, gas, axis)?;
    let fr = flux(qr, gas, axis)?;
    let inv = 1.0 / s.width();
    let diff = s.plus * s.minus * inv;
    let mut f = Conserved(std::array::from_fn(|c| {
        (s.plus * fl[c] - s.minus * fr[c]) * inv + diff * (qr[c] - ql[c])
    }));
    if use_correction {
        f += correction_k_star(ql, qr, s, gas, axis)?.vector;
    }
    f[BX] = 0.0;
    Ok(f)
}

/// Semi-discrete right-hand side and the largest `max(a+, -a-) / dx` over interfaces.
pub fn rhs_1d_with_rate(
    cells: &[Conserved],
    grid: &Grid1d,
    gas: GasParams,
    lim: Limiter,
    use_correction: bool,
) -> Result<(Vec<Conserved>, f64)> {
    let faces = interface_states_1d(cells, lim);
    let mut fluxes = Vec::with_capacity(faces.len());
    let mut rate = 0.0f64;
    for (f, (ql, qr)) in faces.iter().enumerate() {
        let sol = solve_face(ql, qr, gas, Axis::X, use_correction, true)
            .map_err(|e| e.located(Location::Face1d(f as isize)))?;
        rate = rate.max(sol.speeds.max_abs() / grid.dx);
        fluxes.push(sol.flux);
    }
    let inv = 1.0 / grid.dx;
    let rhs = fluxes.windows(2).map(|w| (w[0] - w[1]) * inv).collect();
    Ok((rhs, rate))
}

/// `dQ_j/dt = -(F_{j+1/2} - F_{j-1/2}) / dx` on the interior cells of a ghosted array.
pub fn rhs_1d(
    cells: &[Conserved],
    grid: &Grid1d,
    gas: GasParams,
    lim: Limiter,
    use_correction: bool,
) -> Result<Vec<Conserved>> {
    rhs_1d_with_rate(cells, grid, gas, lim, use_correction).map(|(r, _)| r)
}

/// Time step `cfl * min dx / max(a+, -a-)` from the reconstructed interface states.
pub fn dt_1d(cells: &[Conserved], grid: &Grid1d, gas: GasParams, lim: Limiter, cfl: f64) -> Result<f64> {
    let mut smax = 0.0f64;
    for (f, (ql, qr)) in interface_states_1d(cells, lim).iter().enumerate() {
        let s = interface_speeds(ql, qr, gas, Axis::X, SPEED_FLOOR).map_err(|e| e.located(Location::Face1d(f as isize)))?;
        smax = smax.max(s.max_abs());
    }
    Ok(cfl * grid.dx / smax)
}

/// Splits a fan average into the states left and right of the contact.
///
/// Returns `(Q^L, Q^R, v)` with `v` the contact speed clamped into the fan.
fn split_fan(qint: &Conserved, s: WaveSpeeds, delta: f64) -> (Conserved, Conserved, f64) {
    let rho = qint.rho();
    let v = [qint[MX] / rho, qint[MX + 1] / rho, qint[MX + 2] / rho];
    let vn = v[0].clamp(s.minus, s.plus);
    if delta == 0.0 {
        return (*qint, *qint, vn);
    }
    let rho_l = rho - delta / (vn - s.minus);
    let rho_r = rho + delta / (s.plus - vn);
    let ke = 0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    let side = |r: f64| {
        let mut q = *qint;
        q[RHO] = r;
        for i in 0..3 {
            q[MX + i] = r * v[i];
        }
        q[EN] = qint[EN] + (r - rho) * ke;
        q
    };
    (side(rho_l), side(rho_r), vn)
}

/// One fully-discrete LDCU step of size `dt` on a ghosted array; returns the interior cells.
///
/// `dt` must keep neighbouring Riemann fans apart, which any `cfl <= 0.5`
/// step from [`dt_1d`] does.
pub fn fully_discrete_step_1d(
    cells: &[Conserved],
    grid: &Grid1d,
    gas: GasParams,
    lim: Limiter,
    dt: f64,
    use_correction: bool,
) -> Result<Vec<Conserved>> {
    assert!(cells.len() > 2 * NGHOST);
    let n = cells.len() - 2 * NGHOST;
    let dx = grid.dx;
    let cell_loc = |k: usize| Location::Cell1d(k as isize - NGHOST as isize);
    let face_loc = |f: usize| Location::Face1d(f as isize);

    // Undivided slopes and the half-step flux derivative for cells 1..=n+2.
    let mut sig = vec![Conserved::ZERO; cells.len()];
    let mut fx = vec![Conserved::ZERO; cells.len()];
    for k in 1..cells.len() - 1 {
        sig[k] = state_slope(&cells[k - 1], &cells[k], &cells[k + 1], lim);
        let hi = flux(&(cells[k] + 0.5 * sig[k]), gas, Axis::X).map_err(|e| e.located(cell_loc(k)))?;
        let lo = flux(&(cells[k] - 0.5 * sig[k]), gas, Axis::X).map_err(|e| e.located(cell_loc(k)))?;
        fx[k] = (hi - lo) * (1.0 / dx);
    }

    // Face f sits between cells k = NGHOST + f - 1 and k + 1.
    let nf = n + 1;
    let mut speeds = Vec::with_capacity(nf);
    let mut f_left = Vec::with_capacity(nf);
    let mut f_right = Vec::with_capacity(nf);
    for f in 0..nf {
        let (l, r) = (NGHOST + f - 1, NGHOST + f);
        let ql = cells[l] + 0.5 * sig[l];
        let qr = cells[r] - 0.5 * sig[r];
        let s = interface_speeds(&ql, &qr, gas, Axis::X, SPEED_FLOOR).map_err(|e| e.located(face_loc(f)))?;
        let cl = 0.5 + s.minus * dt / dx;
        let cr = 0.5 - s.plus * dt / dx;
        let half_l = cells[l] + cl * sig[l] - (0.5 * dt) * fx[l];
        let half_r = cells[r] - cr * sig[r] - (0.5 * dt) * fx[r];
        f_left.push(flux(&half_l, gas, Axis::X).map_err(|e| e.located(face_loc(f)))?);
        f_right.push(flux(&half_r, gas, Axis::X).map_err(|e| e.located(face_loc(f)))?);
        speeds.push(s);
    }

    // Averages over the smooth part of each interior cell.
    let mut qint = Vec::with_capacity(n);
    let mut width = Vec::with_capacity(n);
    for j in 0..n {
        let k = NGHOST + j;
        let (sw, se) = (speeds[j], speeds[j + 1]);
        let dxj = dx - (sw.plus - se.minus) * dt;
        let mean = cells[k] + ((se.minus + sw.plus) * 0.5 * dt / dx) * sig[k];
        qint.push(mean - (dt / dxj) * (f_left[j + 1] - f_right[j]));
        width.push(dxj);
    }

    // Fan averages, their split at the contact, and the update contributions.
    let mut split = Vec::with_capacity(nf);
    for f in 0..nf {
        let (l, r) = (NGHOST + f - 1, NGHOST + f);
        let s = speeds[f];
        let left = cells[l] + (0.5 + 0.5 * s.minus * dt / dx) * sig[l];
        let right = cells[r] - (0.5 - 0.5 * s.plus * dt / dx) * sig[r];
        let fan = Conserved(std::array::from_fn(|c| {
            (s.plus * right[c] - s.minus * left[c] - (f_right[f][c] - f_left[f][c])) / s.width()
        }));
        if !(fan.rho() > 0.0) {
            return Err(Error::inadmissible("fan density", fan.rho()).located(face_loc(f)));
        }
        let delta = if use_correction && f > 0 && f < n {
            let (jl, jr) = (f - 1, f);
            let rho_edge_l = qint[jl].rho() + 0.5 * width[jl] / dx * sig[l][RHO];
            let rho_edge_r = qint[jr].rho() - 0.5 * width[jr] / dx * sig[r][RHO];
            let vn = (fan[MX] / fan.rho()).clamp(s.minus, s.plus);
            minmod((vn - s.minus) * (fan.rho() - rho_edge_l), (s.plus - vn) * (rho_edge_r - fan.rho()))
        } else if use_correction {
            // Boundary fans need edge values from a ghost cell's smooth region.
            let rho_edge_l = cells[l].rho() + (0.5 + 0.5 * s.minus * dt / dx) * sig[l][RHO];
            let rho_edge_r = cells[r].rho() - (0.5 - 0.5 * s.plus * dt / dx) * sig[r][RHO];
            let vn = (fan[MX] / fan.rho()).clamp(s.minus, s.plus);
            minmod((vn - s.minus) * (fan.rho() - rho_edge_l), (s.plus - vn) * (rho_edge_r - fan.rho()))
        } else {
            0.0
        };
        split.push(split_fan(&fan, s, delta));
    }

    let lam = dt / dx;
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let (sw, se) = (speeds[j], speeds[j + 1]);
        let (lw, rw, vw) = split[j];
        let (le, _, ve) = split[j + 1];
        let re = split[j + 1].1;
        let q = qint[j];
        let mut next = q + lam * (sw.plus * (rw - q) + vw.max(0.0) * (lw - rw));
        next += lam * (-se.minus * (le - q) + ve.min(0.0) * (le - re));
        next[BX] = cells[NGHOST + j][BX];
        out.push(next);
    }
    Ok(out)
}

/// A 1-D solution: ghosted cell array, run-constant `B1` and boundary rule.
#[derive(Clone, Debug, PartialEq)]
pub struct Field1d {
    pub grid: Grid1d,
    pub bc: Boundary,
    pub b1: f64,
    pub cells: Vec<Conserved>,
}

impl Field1d {
    /// Builds a field from interior cell values and fills the ghosts.
    pub fn new(grid: Grid1d, bc: Boundary, b1: f64, interior: Vec<Conserved>) -> Result<Self> {
        if interior.len() != grid.n {
            return Err(Error::ShapeMismatch {
                expected: grid.n,
                actual: interior.len(),
            });
        }
        let mut cells = Vec::with_capacity(grid.n + 2 * NGHOST);
        cells.extend(std::iter::repeat(Conserved::ZERO).take(NGHOST));
        cells.extend(interior);
        cells.extend(std::iter::repeat(Conserved::ZERO).take(NGHOST));
        for q in cells.iter_mut() {
            q[BX] = b1;
        }
        let mut field = Self { grid, bc, b1, cells };
        field.fill_ghosts();
        Ok(field)
    }

    pub fn fill_ghosts(&mut self) {
        fill_ghosts_1d(&mut self.cells, self.bc);
    }

    pub fn interior(&self) -> &[Conserved] {
        &self.cells[NGHOST..NGHOST + self.grid.n]
    }

    pub fn interior_mut(&mut self) -> &mut [Conserved] {
        let n = self.grid.n;
        &mut self.cells[NGHOST..NGHOST + n]
    }

    /// `sum_j Q_j dx` per component.
    pub fn totals(&self) -> Conserved {
        let mut t = Conserved::ZERO;
        for q in self.interior() {
            t += *q;
        }
        t * self.grid.dx
    }

    pub fn primitives(&self, gas: GasParams) -> Result<Vec<Primitive>> {
        self.interior()
            .iter()
            .enumerate()
            .map(|(j, q)| primitive_from_conserved(q, gas).map_err(|e| e.located(Location::Cell1d(j as isize))))
            .collect()
    }

    /// Replaces the interior by `values` (length `n`), keeping `B1` pinned.
    pub fn set_interior(&mut self, values: &[Conserved]) {
        let b1 = self.b1;
        for (dst, src) in self.interior_mut().iter_mut().zip(values) {
            *dst = *src;
            dst[BX] = b1;
        }
        self.fill_ghosts();
    }
}
