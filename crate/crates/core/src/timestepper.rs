//! Three-stage Runge-Kutta integration and the main time loop.

use crate::error::{Error, Location, Result};
use crate::ldcu1d::{dt_1d, fully_discrete_step_1d, rhs_1d_with_rate, Field1d};
use crate::ldcu2d::{rhs_2d, Field2d, Rhs2d, Scheme};
use crate::mhd::{Conserved, GasParams, NCOMP};
use crate::reconstruct::Limiter;

/// A semi-discrete system `dQ/dt = C[Q]`.
pub trait OdeSystem {
    type State: Clone;
    type Rate;

    fn rhs(&self, state: &Self::State) -> Result<Self::Rate>;

    /// Largest wave speed over cell width seen while building `rate`.
    fn max_rate(&self, rate: &Self::Rate) -> f64;

    /// `state += c * rate` on the evolved unknowns.
    fn add_scaled(&self, state: &mut Self::State, c: f64, rate: &Self::Rate);

    /// Restores derived data (ghosts, synced centres) after an update.
    fn refresh(&self, state: &mut Self::State);
}

fn staged<T>(stage: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Stage {
        stage,
        source: Box::new(e),
    })
}

/// One step from a precomputed first-stage rate:
///
/// ```text
/// Q1 = Q + dt C[Q]
/// Q2 = Q1 + dt/4 (-3 C[Q] + C[Q1])
/// Q3 = Q2 + dt/12 (-C[Q] - C[Q1] + 8 C[Q2])
/// ```
pub fn rk3_step_from<S: OdeSystem>(sys: &S, q: &S::State, c0: &S::Rate, dt: f64) -> Result<S::State> {
    let mut q1 = q.clone();
    sys.add_scaled(&mut q1, dt, c0);
    sys.refresh(&mut q1);
    let c1 = staged(2, sys.rhs(&q1))?;

    let mut q2 = q1;
    sys.add_scaled(&mut q2, -0.75 * dt, c0);
    sys.add_scaled(&mut q2, 0.25 * dt, &c1);
    sys.refresh(&mut q2);
    let c2 = staged(3, sys.rhs(&q2))?;

    let mut q3 = q2;
    let w = dt / 12.0;
    sys.add_scaled(&mut q3, -w, c0);
    sys.add_scaled(&mut q3, -w, &c1);
    sys.add_scaled(&mut q3, 8.0 * w, &c2);
    sys.refresh(&mut q3);
    Ok(q3)
}

/// One step of size `dt` with exactly three right-hand-side evaluations.
pub fn rk3_step<S: OdeSystem>(sys: &S, q: &S::State, dt: f64) -> Result<S::State> {
    let c0 = staged(1, sys.rhs(q))?;
    rk3_step_from(sys, q, &c0, dt)
}

/// Semi-discrete 1-D system.
#[derive(Clone, Copy, Debug)]
pub struct Semi1d {
    pub gas: GasParams,
    pub limiter: Limiter,
    pub use_correction: bool,
}

impl OdeSystem for Semi1d {
    type State = Field1d;
    type Rate = (Vec<Conserved>, f64);

    fn rhs(&self, s: &Field1d) -> Result<Self::Rate> {
        rhs_1d_with_rate(&s.cells, &s.grid, self.gas, self.limiter, self.use_correction)
    }

    fn max_rate(&self, rate: &Self::Rate) -> f64 {
        rate.1
    }

    fn add_scaled(&self, s: &mut Field1d, c: f64, rate: &Self::Rate) {
        for (q, r) in s.interior_mut().iter_mut().zip(&rate.0) {
            *q += c * *r;
        }
    }

    fn refresh(&self, s: &mut Field1d) {
        s.fill_ghosts();
    }
}

/// Semi-discrete 2-D system with constrained transport.
#[derive(Clone, Copy, Debug)]
pub struct Semi2d {
    pub scheme: Scheme,
}

impl OdeSystem for Semi2d {
    type State = Field2d;
    type Rate = Rhs2d;

    fn rhs(&self, s: &Field2d) -> Result<Rhs2d> {
        rhs_2d(s, &self.scheme)
    }

    fn max_rate(&self, rate: &Rhs2d) -> f64 {
        rate.max_rate
    }

    fn add_scaled(&self, s: &mut Field2d, c: f64, rate: &Rhs2d) {
        for j in 0..s.ny() as isize {
            for i in 0..s.nx() as isize {
                s.cells[(i, j)] += c * rate.cells[(i, j)];
            }
        }
        s.faces.add_scaled(c, &rate.db1, &rate.db2);
    }

    fn refresh(&self, s: &mut Field2d) {
        s.refresh();
    }
}

/// Scalar diagnostics recorded after every accepted step (and at the start).
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DiagRecord {
    pub step: usize,
    pub t: f64,
    pub dt: f64,
    /// Domain integrals of the eight conserved components.
    pub totals: [f64; NCOMP],
    pub max_rel_div: f64,
    pub min_rho: f64,
    pub min_p: f64,
    pub skipped_corrections: usize,
}

/// A model the time loop can advance.
pub trait Evolution {
    type Field: Clone;

    /// Advances `field` by at most `max_dt`; returns the step taken and the
    /// number of dropped corrections.
    fn advance(&self, field: &mut Self::Field, cfl: f64, max_dt: f64) -> Result<(f64, usize)>;

    fn totals(&self, field: &Self::Field) -> Conserved;

    fn max_rel_div(&self, field: &Self::Field) -> f64;

    /// `(min rho, min p)` over interior cells.
    fn extrema(&self, field: &Self::Field) -> (f64, f64);

    fn first_non_finite(&self, field: &Self::Field) -> Option<Location>;
}

impl Evolution for Semi1d {
    type Field = Field1d;

    fn advance(&self, f: &mut Field1d, cfl: f64, max_dt: f64) -> Result<(f64, usize)> {
        let c0 = staged(1, self.rhs(f))?;
        let dt = (cfl / c0.1).min(max_dt);
        *f = rk3_step_from(self, f, &c0, dt)?;
        Ok((dt, 0))
    }

    fn totals(&self, f: &Field1d) -> Conserved {
        f.totals()
    }

    fn max_rel_div(&self, _: &Field1d) -> f64 {
        0.0
    }

    fn extrema(&self, f: &Field1d) -> (f64, f64) {
        extrema(f.interior().iter(), self.gas)
    }

    fn first_non_finite(&self, f: &Field1d) -> Option<Location> {
        f.interior().iter().position(|q| !q.is_finite()).map(|j| Location::Cell1d(j as isize))
    }
}

impl Evolution for Semi2d {
    type Field = Field2d;

    fn advance(&self, f: &mut Field2d, cfl: f64, max_dt: f64) -> Result<(f64, usize)> {
        let c0 = staged(1, self.rhs(f))?;
        let dt = (cfl / c0.max_rate).min(max_dt);
        let skipped = c0.skipped_corrections;
        *f = rk3_step_from(self, f, &c0, dt)?;
        Ok((dt, skipped))
    }

    fn totals(&self, f: &Field2d) -> Conserved {
        f.totals()
    }

    fn max_rel_div(&self, f: &Field2d) -> f64 {
        f.max_relative_divergence()
    }

    fn extrema(&self, f: &Field2d) -> (f64, f64) {
        extrema(f.interior().as_slice().iter(), self.scheme.gas)
    }

    fn first_non_finite(&self, f: &Field2d) -> Option<Location> {
        for j in 0..f.ny() as isize {
            for i in 0..f.nx() as isize {
                if !f.cells[(i, j)].is_finite() {
                    return Some(Location::Cell2d(i, j));
                }
            }
        }
        None
    }
}

/// The single-stage fully-discrete 1-D scheme.
#[derive(Clone, Copy, Debug)]
pub struct Fully1d {
    pub gas: GasParams,
    pub limiter: Limiter,
    pub use_correction: bool,
}

impl Evolution for Fully1d {
    type Field = Field1d;

    fn advance(&self, f: &mut Field1d, cfl: f64, max_dt: f64) -> Result<(f64, usize)> {
        let dt = dt_1d(&f.cells, &f.grid, self.gas, self.limiter, cfl)?.min(max_dt);
        let next = fully_discrete_step_1d(&f.cells, &f.grid, self.gas, self.limiter, dt, self.use_correction)?;
        f.set_interior(&next);
        Ok((dt, 0))
    }

    fn totals(&self, f: &Field1d) -> Conserved {
        f.totals()
    }

    fn max_rel_div(&self, _: &Field1d) -> f64 {
        0.0
    }

    fn extrema(&self, f: &Field1d) -> (f64, f64) {
        extrema(f.interior().iter(), self.gas)
    }

    fn first_non_finite(&self, f: &Field1d) -> Option<Location> {
        f.interior().iter().position(|q| !q.is_finite()).map(|j| Location::Cell1d(j as isize))
    }
}

fn extrema<'a>(cells: impl Iterator<Item = &'a Conserved>, gas: GasParams) -> (f64, f64) {
    cells.fold((f64::INFINITY, f64::INFINITY), |(r, p), q| {
        (r.min(q.rho()), p.min(q.pressure_unchecked(gas)))
    })
}

fn record<E: Evolution>(model: &E, field: &E::Field, step: usize, t: f64, dt: f64, skipped: usize) -> DiagRecord {
    let (min_rho, min_p) = model.extrema(field);
    DiagRecord {
        step,
        t,
        dt,
        totals: model.totals(field).0,
        max_rel_div: model.max_rel_div(field),
        min_rho,
        min_p,
        skipped_corrections: skipped,
    }
}

/// Solution together with its clock.
#[derive(Clone, Debug)]
pub struct SimState<F> {
    pub field: F,
    pub t: f64,
    pub step: usize,
}

impl<F> SimState<F> {
    pub fn new(field: F) -> Self {
        Self { field, t: 0.0, step: 0 }
    }
}

/// Advances to `t_final`, clamping the last step, and returns one record per
/// step plus the initial one. `observer` sees the state after every step.
pub fn run_to_time<E: Evolution>(
    model: &E,
    state: &mut SimState<E::Field>,
    t_final: f64,
    cfl: f64,
    mut observer: impl FnMut(&SimState<E::Field>) -> Result<()>,
) -> Result<Vec<DiagRecord>> {
    if !(t_final >= state.t) {
        return Err(Error::Config(format!("final time {t_final} precedes current time {}", state.t)));
    }
    if !(cfl > 0.0 && cfl < 1.0) {
        return Err(Error::Config(format!("CFL number must lie in (0, 1), got {cfl}")));
    }
    let mut log = vec![record(model, &state.field, state.step, state.t, 0.0, 0)];
    while state.t < t_final {
        let remaining = t_final - state.t;
        let (dt, skipped) = model.advance(&mut state.field, cfl, remaining)?;
        state.step += 1;
        state.t = if dt >= remaining { t_final } else { state.t + dt };
        if let Some(at) = model.first_non_finite(&state.field) {
            return Err(Error::NonFinite {
                step: state.step,
                at: Some(at),
            });
        }
        log.push(record(model, &state.field, state.step, state.t, dt, skipped));
        observer(state)?;
    }
    Ok(log)
}
