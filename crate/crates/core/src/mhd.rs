//! Ideal-MHD state algebra: conserved/primitive conversion, physical fluxes,
//! fast magnetosonic speeds and the HLL average of a Riemann fan.
//!
//! Component ordering is fixed everywhere as
//! `(rho, rho*v1, rho*v2, rho*v3, B1, B2, B3, E)`. In 1-D runs `B1` is a
//! run constant: its flux row is zero and it is never evolved.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

pub const NCOMP: usize = 8;

pub const RHO: usize = 0;
pub const MX: usize = 1;
pub const MY: usize = 2;
pub const MZ: usize = 3;
pub const BX: usize = 4;
pub const BY: usize = 5;
pub const BZ: usize = 6;
pub const EN: usize = 7;

/// Lower bound applied to one-sided wave speeds in the semi-discrete schemes.
pub const SPEED_FLOOR: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GasParams {
    pub gamma: f64,
}

impl GasParams {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma > 1.0 && gamma.is_finite() {
            Ok(Self { gamma })
        } else {
            Err(Error::Config(format!("adiabatic index must exceed 1, got {gamma}")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Primitive {
    pub rho: f64,
    pub v: [f64; 3],
    pub b: [f64; 3],
    pub p: f64,
}

impl Primitive {
    pub fn new(rho: f64, v: [f64; 3], b: [f64; 3], p: f64) -> Self {
        Self { rho, v, b, p }
    }

    pub fn magnetic_pressure(&self) -> f64 {
        0.5 * norm2(self.b)
    }
}

/// Cell-averaged conserved variables.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Conserved(pub [f64; NCOMP]);

impl Conserved {
    pub const ZERO: Conserved = Conserved([0.0; NCOMP]);

    #[inline]
    pub fn rho(&self) -> f64 {
        self.0[RHO]
    }

    #[inline]
    pub fn mom(&self) -> [f64; 3] {
        [self.0[MX], self.0[MY], self.0[MZ]]
    }

    #[inline]
    pub fn b(&self) -> [f64; 3] {
        [self.0[BX], self.0[BY], self.0[BZ]]
    }

    #[inline]
    pub fn energy(&self) -> f64 {
        self.0[EN]
    }

    /// Gas pressure without admissibility checks (diagnostics only).
    #[inline]
    pub fn pressure_unchecked(&self, gas: GasParams) -> f64 {
        let rho = self.rho();
        (gas.gamma - 1.0) * (self.energy() - 0.5 * norm2(self.mom()) / rho - 0.5 * norm2(self.b()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Swaps the x and y roles of momentum and magnetic field.
    pub fn swap_xy(&self) -> Conserved {
        let mut out = *self;
        out.0.swap(MX, MY);
        out.0.swap(BX, BY);
        out
    }

    pub fn abs_max(&self) -> f64 {
        self.0.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }
}

impl Index<usize> for Conserved {
    type Output = f64;
    #[inline]
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Conserved {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for Conserved {
    type Output = Conserved;
    #[inline]
    fn add(self, rhs: Conserved) -> Conserved {
        Conserved(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for Conserved {
    type Output = Conserved;
    #[inline]
    fn sub(self, rhs: Conserved) -> Conserved {
        Conserved(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for Conserved {
    type Output = Conserved;
    #[inline]
    fn neg(self) -> Conserved {
        Conserved(self.0.map(|c| -c))
    }
}

impl Mul<f64> for Conserved {
    type Output = Conserved;
    #[inline]
    fn mul(self, a: f64) -> Conserved {
        Conserved(self.0.map(|c| c * a))
    }
}

impl Mul<Conserved> for f64 {
    type Output = Conserved;
    #[inline]
    fn mul(self, q: Conserved) -> Conserved {
        q * self
    }
}

impl AddAssign for Conserved {
    #[inline]
    fn add_assign(&mut self, rhs: Conserved) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}

impl SubAssign for Conserved {
    #[inline]
    fn sub_assign(&mut self, rhs: Conserved) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a -= b;
        }
    }
}

#[inline]
pub(crate) fn norm2(v: [f64; 3]) -> f64 {
    v[0] * v[0] + v[1] * v[1] + v[2] * v[2]
}

#[inline]
fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// One-sided local speeds bounding a Riemann fan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveSpeeds {
    pub minus: f64,
    pub plus: f64,
}

impl WaveSpeeds {
    pub fn new(minus: f64, plus: f64) -> Self {
        debug_assert!(minus <= 0.0 && plus >= 0.0);
        Self { minus, plus }
    }

    /// Largest speed magnitude, `max(a+, -a-)`.
    #[inline]
    pub fn max_abs(&self) -> f64 {
        self.plus.max(-self.minus)
    }

    /// Builds speeds from the extreme eigenvalues of both sides, clamped by `floor`.
    #[inline]
    pub fn from_eigenvalues(lambda_min: f64, lambda_max: f64, floor: f64) -> Self {
        Self {
            minus: lambda_min.min(-floor),
            plus: lambda_max.max(floor),
        }
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.plus - self.minus
    }
}

pub fn conserved_from_primitive(w: &Primitive, gas: GasParams) -> Result<Conserved> {
    if !(w.rho > 0.0) {
        return Err(Error::inadmissible("density", w.rho));
    }
    if !(w.p > 0.0) {
        return Err(Error::inadmissible("pressure", w.p));
    }
    let rho = w.rho;
    let e = w.p / (gas.gamma - 1.0) + 0.5 * rho * norm2(w.v) + 0.5 * norm2(w.b);
    Ok(Conserved([
        rho,
        rho * w.v[0],
        rho * w.v[1],
        rho * w.v[2],
        w.b[0],
        w.b[1],
        w.b[2],
        e,
    ]))
}

pub fn primitive_from_conserved(q: &Conserved, gas: GasParams) -> Result<Primitive> {
    let rho = q.rho();
    if !(rho > 0.0) {
        return Err(Error::inadmissible("density", rho));
    }
    let inv = 1.0 / rho;
    let v = [q[MX] * inv, q[MY] * inv, q[MZ] * inv];
    let b = q.b();
    let p = (gas.gamma - 1.0) * (q.energy() - 0.5 * rho * norm2(v) - 0.5 * norm2(b));
    if !(p > 0.0) {
        return Err(Error::inadmissible("pressure", p));
    }
    Ok(Primitive { rho, v, b, p })
}

/// Physical flux along `axis` evaluated from primitive variables.
///
/// The row of the normal magnetic component is identically zero.
#[inline]
pub fn flux_from_primitive(w: &Primitive, q: &Conserved, axis: Axis) -> Conserved {
    let n = axis.index();
    let vn = w.v[n];
    let bn = w.b[n];
    let pmag = 0.5 * norm2(w.b);
    let ptot = w.p + pmag;
    let mut f = [0.0; NCOMP];
    f[RHO] = q.rho() * vn;
    for i in 0..3 {
        f[MX + i] = q[MX + i] * vn - bn * w.b[i];
        f[BX + i] = w.b[i] * vn - bn * w.v[i];
    }
    f[MX + n] += ptot;
    f[BX + n] = 0.0;
    f[EN] = (q.energy() + ptot) * vn - bn * dot(w.b, w.v);
    Conserved(f)
}

pub fn flux(q: &Conserved, gas: GasParams, axis: Axis) -> Result<Conserved> {
    let w = primitive_from_conserved(q, gas)?;
    Ok(flux_from_primitive(&w, q, axis))
}

pub fn flux_x(q: &Conserved, gas: GasParams) -> Result<Conserved> {
    flux(q, gas, Axis::X)
}

pub fn flux_y(q: &Conserved, gas: GasParams) -> Result<Conserved> {
    flux(q, gas, Axis::Y)
}

/// Fast magnetosonic speed along `axis`.
#[inline]
pub fn fast_speed(w: &Primitive, gas: GasParams, axis: Axis) -> f64 {
    let inv_rho = 1.0 / w.rho;
    let a2 = gas.gamma * w.p * inv_rho;
    let b2 = norm2(w.b) * inv_rho;
    let bn = w.b[axis.index()];
    let bn2 = bn * bn * inv_rho;
    let sum = a2 + b2;
    let disc = (sum * sum - 4.0 * a2 * bn2).max(0.0);
    (0.5 * (sum + disc.sqrt())).sqrt()
}

/// `(lambda_1, lambda_d) = (v_n - c_f, v_n + c_f)`.
#[inline]
pub fn extreme_eigenvalues(w: &Primitive, gas: GasParams, axis: Axis) -> (f64, f64) {
    let cf = fast_speed(w, gas, axis);
    let vn = w.v[axis.index()];
    (vn - cf, vn + cf)
}

#[inline]
pub fn speeds_from_primitive(
    wl: &Primitive,
    wr: &Primitive,
    gas: GasParams,
    axis: Axis,
    floor: f64,
) -> WaveSpeeds {
    let (l1, ld) = extreme_eigenvalues(wl, gas, axis);
    let (r1, rd) = extreme_eigenvalues(wr, gas, axis);
    WaveSpeeds::from_eigenvalues(l1.min(r1), ld.max(rd), floor)
}

/// Local one-sided speeds at an interface with left/right states `ql`, `qr`.
///
/// `floor` is `0` for the literal 1-D definition and [`SPEED_FLOOR`] for the
/// semi-discrete schemes.
pub fn interface_speeds(
    ql: &Conserved,
    qr: &Conserved,
    gas: GasParams,
    axis: Axis,
    floor: f64,
) -> Result<WaveSpeeds> {
    let wl = primitive_from_conserved(ql, gas)?;
    let wr = primitive_from_conserved(qr, gas)?;
    Ok(speeds_from_primitive(&wl, &wr, gas, axis, floor))
}

/// HLL average of the Riemann fan given precomputed physical fluxes.
#[inline]
pub fn hll_average(ql: &Conserved, qr: &Conserved, fl: &Conserved, fr: &Conserved, s: WaveSpeeds) -> Conserved {
    let inv = 1.0 / (s.plus - s.minus);
    Conserved(std::array::from_fn(|i| {
        (s.plus * qr[i] - s.minus * ql[i] - (fr[i] - fl[i])) * inv
    }))
}

pub fn hll_intermediate(
    ql: &Conserved,
    qr: &Conserved,
    s: WaveSpeeds,
    gas: GasParams,
    axis: Axis,
) -> Result<Conserved> {
    let fl = flux(ql, gas, axis)?;
    let fr = flux(qr, gas, axis)?;
    Ok(hll_average(ql, qr, &fl, &fr, s))
}
