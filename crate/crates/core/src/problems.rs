//! Benchmark problem catalog: initial data, domains, boundary rules and
//! exact solutions where they exist.

use std::f64::consts::PI;

use crate::ctransport::{divergence_b, StaggeredField};
use crate::error::{Error, Location, Result};
use crate::ldcu1d::Field1d;
use crate::ldcu2d::Field2d;
use crate::mesh::{Boundary, Grid1d, Grid2d};
use crate::mhd::{conserved_from_primitive, GasParams, Primitive};
use crate::reconstruct::Limiter;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Problem {
    BrioWu1d,
    DaiWoodward,
    RyuJones,
    Vortex,
    Sine,
    BrioWu2d,
    OrszagTang,
    Rotor,
    Blast,
    ChallengingBlast,
}

impl Problem {
    pub const ALL: [Problem; 10] = [
        Problem::BrioWu1d,
        Problem::DaiWoodward,
        Problem::RyuJones,
        Problem::Vortex,
        Problem::Sine,
        Problem::BrioWu2d,
        Problem::OrszagTang,
        Problem::Rotor,
        Problem::Blast,
        Problem::ChallengingBlast,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Problem::BrioWu1d => "brio-wu-1d",
            Problem::DaiWoodward => "dai-woodward",
            Problem::RyuJones => "ryu-jones",
            Problem::Vortex => "vortex",
            Problem::Sine => "sine",
            Problem::BrioWu2d => "brio-wu-2d",
            Problem::OrszagTang => "orszag-tang",
            Problem::Rotor => "rotor",
            Problem::Blast => "blast",
            Problem::ChallengingBlast => "challenging-blast",
        }
    }

    pub fn from_name(name: &str) -> Result<Problem> {
        Problem::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| Error::UnknownProblem(name.to_string()))
    }

    pub fn spec(self) -> ProblemSpec {
        match self {
            Problem::BrioWu1d => brio_wu_1d(),
            Problem::DaiWoodward => dai_woodward_1d(),
            Problem::RyuJones => ryu_jones_1d(),
            Problem::Vortex => balsara_vortex_2d(),
            Problem::Sine => smooth_sine_2d(),
            Problem::BrioWu2d => brio_wu_2d(),
            Problem::OrszagTang => orszag_tang_2d(),
            Problem::Rotor => rotor_2d(),
            Problem::Blast => blast_2d(),
            Problem::ChallengingBlast => challenging_blast_2d(),
        }
    }
}

impl std::str::FromStr for Problem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Problem> {
        Problem::from_name(s)
    }
}

impl TryFrom<String> for Problem {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        Problem::from_name(&s)
    }
}

impl From<Problem> for String {
    fn from(p: Problem) -> String {
        p.name().to_string()
    }
}

impl std::fmt::Display for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Everything needed to set up and judge one benchmark run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProblemSpec {
    pub problem: Problem,
    pub dim: usize,
    pub x: (f64, f64),
    /// Unused in 1-D.
    pub y: (f64, f64),
    pub gamma: f64,
    pub t_final: f64,
    /// Boundary rule along x and y.
    pub bc: (Boundary, Boundary),
    pub default_limiter: Limiter,
    pub default_cells: (usize, usize),
}

fn spec_1d(problem: Problem, x: (f64, f64), gamma: f64, t_final: f64, n: usize) -> ProblemSpec {
    ProblemSpec {
        problem,
        dim: 1,
        x,
        y: (0.0, 0.0),
        gamma,
        t_final,
        bc: (Boundary::Outflow, Boundary::Outflow),
        default_limiter: Limiter::Minmod,
        default_cells: (n, 1),
    }
}

fn spec_2d(problem: Problem, half: f64, centre: f64, gamma: f64, t_final: f64, bc: Boundary, n: usize) -> ProblemSpec {
    ProblemSpec {
        problem,
        dim: 2,
        x: (centre - half, centre + half),
        y: (centre - half, centre + half),
        gamma,
        t_final,
        bc: (bc, bc),
        default_limiter: Limiter::Minmod,
        default_cells: (n, n),
    }
}

const SQRT_4PI: f64 = 3.544_907_701_811_032;

pub fn brio_wu_1d() -> ProblemSpec {
    spec_1d(Problem::BrioWu1d, (-1.0, 1.0), 2.0, 0.2, 800)
}

pub fn dai_woodward_1d() -> ProblemSpec {
    spec_1d(Problem::DaiWoodward, (0.0, 1.0), 5.0 / 3.0, 0.2, 512)
}

pub fn ryu_jones_1d() -> ProblemSpec {
    spec_1d(Problem::RyuJones, (0.0, 1.0), 5.0 / 3.0, 0.08, 516)
}

pub fn balsara_vortex_2d() -> ProblemSpec {
    let mut s = spec_2d(Problem::Vortex, 5.0, 0.0, 5.0 / 3.0, 10.0, Boundary::Periodic, 100);
    s.default_limiter = Limiter::McTheta(1.3);
    s
}

pub fn smooth_sine_2d() -> ProblemSpec {
    spec_2d(Problem::Sine, 0.5, 0.5, 5.0 / 3.0, 0.1, Boundary::Periodic, 100)
}

pub fn brio_wu_2d() -> ProblemSpec {
    let mut s = spec_2d(Problem::BrioWu2d, 1.0, 0.0, 2.0, 0.2, Boundary::Outflow, 200);
    s.bc = (Boundary::Outflow, Boundary::Periodic);
    s
}

pub fn orszag_tang_2d() -> ProblemSpec {
    spec_2d(Problem::OrszagTang, PI, PI, 5.0 / 3.0, 4.0, Boundary::Periodic, 200)
}

pub fn rotor_2d() -> ProblemSpec {
    spec_2d(Problem::Rotor, 0.5, 0.5, 1.4, 0.295, Boundary::Outflow, 200)
}

pub fn blast_2d() -> ProblemSpec {
    spec_2d(Problem::Blast, 0.5, 0.0, 1.4, 0.2, Boundary::Outflow, 200)
}

pub fn challenging_blast_2d() -> ProblemSpec {
    spec_2d(Problem::ChallengingBlast, 0.5, 0.0, 1.4, 0.01, Boundary::Periodic, 200)
}

fn prim(rho: f64, v: [f64; 3], b: [f64; 3], p: f64) -> Primitive {
    Primitive::new(rho, v, b, p)
}

const VORTEX_XI: f64 = 1.0 / (2.0 * PI);
const VORTEX_MU: f64 = 1.0 / (2.0 * PI);

/// Out-of-plane vector potential of the vortex field, `B = (dA/dy, -dA/dx)`.
fn vortex_potential(x: f64, y: f64) -> f64 {
    VORTEX_MU * (0.5 * (1.0 - x * x - y * y)).exp()
}

fn vortex(x: f64, y: f64) -> Primitive {
    let r2 = x * x + y * y;
    let e = (0.5 * (1.0 - r2)).exp();
    let dv = VORTEX_XI * e;
    let db = VORTEX_MU * e;
    let dp = 0.5 * (VORTEX_MU * VORTEX_MU * (1.0 - r2) - VORTEX_XI * VORTEX_XI) * e * e;
    prim(1.0, [1.0 - y * dv, 1.0 + x * dv, 0.0], [-y * db, x * db, 0.0], 1.0 + dp)
}

fn sine(x: f64, y: f64, t: f64) -> Primitive {
    let rho = 1.0 + 0.99 * (2.0 * PI * (x + y - 2.0 * t)).sin();
    prim(rho, [1.0, 1.0, 0.0], [0.1, 0.1, 0.0], 1.0)
}

fn wrap(v: f64, lo: f64, hi: f64) -> f64 {
    lo + (v - lo).rem_euclid(hi - lo)
}

impl ProblemSpec {
    pub fn name(&self) -> &'static str {
        self.problem.name()
    }

    pub fn gas(&self) -> GasParams {
        GasParams { gamma: self.gamma }
    }

    /// Initial primitive state at a point (`y` ignored in 1-D).
    pub fn init(&self, x: f64, y: f64) -> Primitive {
        match self.problem {
            Problem::BrioWu1d | Problem::BrioWu2d => {
                if x < 0.0 {
                    prim(1.0, [0.0; 3], [0.75, 1.0, 0.0], 1.0)
                } else {
                    prim(0.125, [0.0; 3], [0.75, -1.0, 0.0], 0.1)
                }
            }
            Problem::DaiWoodward => {
                let b1 = 2.0 / SQRT_4PI;
                if x < 0.5 {
                    prim(1.08, [1.2, 0.01, 0.5], [b1, 3.6 / SQRT_4PI, 2.0 / SQRT_4PI], 0.95)
                } else {
                    prim(1.0, [0.0; 3], [b1, 4.0 / SQRT_4PI, 2.0 / SQRT_4PI], 1.0)
                }
            }
            Problem::RyuJones => {
                let b = [5.0 / SQRT_4PI, 5.0 / SQRT_4PI, 0.0];
                if x <= 0.5 {
                    prim(1.0, [10.0, 0.0, 0.0], b, 20.0)
                } else {
                    prim(1.0, [-10.0, 0.0, 0.0], b, 1.0)
                }
            }
            Problem::Vortex => vortex(x, y),
            Problem::Sine => sine(x, y, 0.0),
            Problem::OrszagTang => {
                let g = self.gamma;
                prim(g * g, [-y.sin(), x.sin(), 0.0], [-y.sin(), (2.0 * x).sin(), 0.0], g)
            }
            Problem::Rotor => {
                let (r0, r1, v0) = (0.1, 0.115, 1.0);
                let (dx, dy) = (x - 0.5, y - 0.5);
                let r = (dx * dx + dy * dy).sqrt();
                let f = (r1 - r) / (r1 - r0);
                let (rho, w) = if r <= r0 {
                    (10.0, v0 / r0)
                } else if r < r1 {
                    (1.0 + 9.0 * f, f * v0 / r0)
                } else {
                    (1.0, 0.0)
                };
                prim(rho, [-w * dy, w * dx, 0.0], [2.5 / SQRT_4PI, 0.0, 0.0], 0.5)
            }
            Problem::Blast => {
                let p = if (x * x + y * y).sqrt() < 0.1 { 10.0 } else { 0.1 };
                let b = std::f64::consts::FRAC_1_SQRT_2;
                prim(1.0, [0.0; 3], [b, b, 0.0], p)
            }
            Problem::ChallengingBlast => {
                let p = if (x * x + y * y).sqrt() <= 0.1 { 1000.0 } else { 0.1 };
                prim(1.0, [0.0; 3], [100.0 / SQRT_4PI, 0.0, 0.0], p)
            }
        }
    }

    /// Exact solution for the smooth problems.
    pub fn exact(&self, x: f64, y: f64, t: f64) -> Option<Primitive> {
        match self.problem {
            Problem::Vortex => Some(vortex(wrap(x - t, self.x.0, self.x.1), wrap(y - t, self.y.0, self.y.1))),
            Problem::Sine => Some(sine(x, y, t)),
            _ => None,
        }
    }

    pub fn has_exact(&self) -> bool {
        self.exact(self.x.0, self.y.0, 0.0).is_some()
    }

    pub fn grid_1d(&self, n: usize) -> Result<Grid1d> {
        self.require_dim(1)?;
        Grid1d::new(n, self.x.0, self.x.1)
    }

    pub fn grid_2d(&self, nx: usize, ny: usize) -> Result<Grid2d> {
        self.require_dim(2)?;
        Grid2d::new(nx, ny, self.x, self.y)
    }

    fn require_dim(&self, dim: usize) -> Result<()> {
        if self.dim == dim {
            Ok(())
        } else {
            Err(Error::Config(format!("problem '{}' is {}-D", self.name(), self.dim)))
        }
    }

    /// Initial 1-D field sampled at cell centres.
    pub fn setup_1d(&self, n: usize) -> Result<Field1d> {
        let grid = self.grid_1d(n)?;
        let gas = self.gas();
        let cells = (0..n as isize)
            .map(|j| {
                conserved_from_primitive(&self.init(grid.center(j), 0.0), gas).map_err(|e| e.located(Location::Cell1d(j)))
            })
            .collect::<Result<Vec<_>>>()?;
        let b1 = self.init(grid.center(0), 0.0).b[0];
        Field1d::new(grid, self.bc.0, b1, cells)
    }

    /// Initial face field: face-midpoint sampling, or a vector potential for the vortex.
    pub fn initial_faces(&self, grid: &Grid2d) -> StaggeredField {
        let (nx, ny) = (grid.nx, grid.ny);
        match self.problem {
            Problem::Vortex => {
                let a = |fi: isize, fj: isize| vortex_potential(grid.xf(fi), grid.yf(fj));
                StaggeredField::from_fn(
                    nx,
                    ny,
                    |fi, j| (a(fi, j + 1) - a(fi, j)) / grid.dy,
                    |i, fj| -(a(i + 1, fj) - a(i, fj)) / grid.dx,
                )
            }
            _ => StaggeredField::from_fn(
                nx,
                ny,
                |fi, j| self.init(grid.xf(fi), grid.yc(j)).b[0],
                |i, fj| self.init(grid.xc(i), grid.yf(fj)).b[1],
            ),
        }
    }

    /// Initial 2-D field; rejects face data that is not divergence-free.
    pub fn setup_2d(&self, nx: usize, ny: usize) -> Result<Field2d> {
        let grid = self.grid_2d(nx, ny)?;
        let faces = self.initial_faces(&grid);
        let scale = faces
            .b1
            .as_slice()
            .iter()
            .chain(faces.b2.as_slice())
            .fold(0.0f64, |m, b| m.max(b.abs()))
            .max(1e-300);
        let worst = divergence_b(&faces, &grid)
            .as_slice()
            .iter()
            .fold(0.0f64, |m, d| m.max(d.abs()));
        if worst * grid.dx.min(grid.dy) / scale > 1e-12 {
            return Err(Error::Config(format!(
                "initial face field of '{}' has divergence {worst:e}",
                self.name()
            )));
        }
        Field2d::from_parts(grid, self.bc, faces, self.gas(), |i, j| self.init(grid.xc(i), grid.yc(j)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for p in Problem::ALL {
            assert_eq!(Problem::from_name(p.name()).unwrap(), p);
            assert_eq!(p.spec().problem, p);
        }
        assert!(matches!(Problem::from_name("nope"), Err(Error::UnknownProblem(_))));
    }

    #[test]
    fn shock_tube_data() {
        let bw = brio_wu_1d();
        assert_eq!(bw.init(-0.5, 0.0).rho, 1.0);
        assert_eq!(bw.init(0.5, 0.0).p, 0.1);
        assert!(bw.setup_1d(40).unwrap().interior().iter().all(|q| q[crate::mhd::BX] == 0.75));

        let dw = dai_woodward_1d();
        assert_eq!(dw.init(0.25, 0.0).v[0], 1.2);
        assert!((dw.init(0.75, 0.0).b[1] - 1.12838).abs() < 1e-5);
        assert_eq!(dw.gamma, 5.0 / 3.0);

        let rj = ryu_jones_1d();
        assert_eq!(rj.init(0.25, 0.0).v[0], 10.0);
        assert_eq!(rj.init(0.75, 0.0).v[0], -10.0);
        assert_eq!(rj.init(0.25, 0.0).p / rj.init(0.75, 0.0).p, 20.0);
    }

    #[test]
    fn vortex_data() {
        let v = balsara_vortex_2d();
        let far = v.init(5.0, 5.0);
        assert!((far.v[0] - 1.0).abs() < 1e-9 && far.b[0].abs() < 1e-9 && (far.p - 1.0).abs() < 1e-9);
        let w = v.init(1.0, 0.0);
        let xi = VORTEX_XI;
        assert!((w.p - (1.0 - 0.5 * xi * xi)).abs() < 1e-15);
        for (x, y) in [(0.3, -1.2), (4.9, 4.9), (-2.0, 3.0)] {
            let a = v.exact(x, y, 10.0).unwrap();
            let b = v.init(x, y);
            assert!((a.rho - b.rho).abs() < 1e-12 && (a.p - b.p).abs() < 1e-12 && (a.v[0] - b.v[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn sine_data() {
        let s = smooth_sine_2d();
        assert_eq!(s.exact(0.0, 0.0, 0.0).unwrap().rho, 1.0);
        let min = (0..200).map(|k| s.init(k as f64 / 200.0, 0.0).rho).fold(f64::INFINITY, f64::min);
        assert!((min - 0.01).abs() < 1e-12);
    }

    #[test]
    fn two_d_data() {
        let ot = orszag_tang_2d();
        let w = ot.init(PI / 2.0, 0.0);
        assert!(w.v[0].abs() < 1e-15 && (w.v[1] - 1.0).abs() < 1e-15 && w.b[1].abs() < 1e-15);
        let r = rotor_2d().init(0.5, 0.5);
        assert_eq!((r.rho, r.v[0], r.v[1]), (10.0, 0.0, 0.0));
        let cb = challenging_blast_2d();
        assert_eq!(cb.init(0.0, 0.0).p / cb.init(0.4, 0.4).p, 1e4);
    }

    #[test]
    fn every_2d_setup_is_divergence_free() {
        for p in Problem::ALL {
            let spec = p.spec();
            if spec.dim != 2 {
                continue;
            }
            let f = spec.setup_2d(24, 20).unwrap();
            let div = divergence_b(&f.faces, &f.grid);
            let worst = div.as_slice().iter().fold(0.0f64, |m, d| m.max(d.abs()));
            assert!(worst * f.grid.dx < 1e-12, "{}: {worst}", p.name());
            for j in 0..20 {
                for i in 0..24 {
                    assert!((f.primitive(i, j, spec.gas()).unwrap().p - spec.init(f.grid.xc(i), f.grid.yc(j)).p).abs() < 1e-9);
                }
            }
        }
    }
}
