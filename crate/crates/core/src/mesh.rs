//! Uniform Cartesian grids, ghost-padded arrays and boundary fills.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Ghost layers on every side: one for slopes, one more for corner reconstruction.
pub const NGHOST: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Outflow,
    Periodic,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid1d {
    pub n: usize,
    pub dx: f64,
    pub x0: f64,
}

impl Grid1d {
    pub fn new(n: usize, x_min: f64, x_max: f64) -> Result<Self> {
        if n < 4 {
            return Err(Error::Config(format!("1-D grid needs at least 4 cells, got {n}")));
        }
        if !(x_max > x_min) {
            return Err(Error::Config(format!("empty domain [{x_min}, {x_max}]")));
        }
        Ok(Self {
            n,
            dx: (x_max - x_min) / n as f64,
            x0: x_min,
        })
    }

    /// Centre of interior cell `i` (ghosts have negative or `>= n` indices).
    #[inline]
    pub fn center(&self, i: isize) -> f64 {
        self.x0 + (i as f64 + 0.5) * self.dx
    }

    #[inline]
    pub fn face(&self, f: isize) -> f64 {
        self.x0 + f as f64 * self.dx
    }

    pub fn len_with_ghosts(&self) -> usize {
        self.n + 2 * NGHOST
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid2d {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub x0: f64,
    pub y0: f64,
}

impl Grid2d {
    pub fn new(nx: usize, ny: usize, x: (f64, f64), y: (f64, f64)) -> Result<Self> {
        if nx < 4 || ny < 4 {
            return Err(Error::Config(format!("2-D grid needs at least 4x4 cells, got {nx}x{ny}")));
        }
        if !(x.1 > x.0 && y.1 > y.0) {
            return Err(Error::Config("empty 2-D domain".into()));
        }
        Ok(Self {
            nx,
            ny,
            dx: (x.1 - x.0) / nx as f64,
            dy: (y.1 - y.0) / ny as f64,
            x0: x.0,
            y0: y.0,
        })
    }

    #[inline]
    pub fn xc(&self, i: isize) -> f64 {
        self.x0 + (i as f64 + 0.5) * self.dx
    }

    #[inline]
    pub fn yc(&self, j: isize) -> f64 {
        self.y0 + (j as f64 + 0.5) * self.dy
    }

    #[inline]
    pub fn xf(&self, fi: isize) -> f64 {
        self.x0 + fi as f64 * self.dx
    }

    #[inline]
    pub fn yf(&self, fj: isize) -> f64 {
        self.y0 + fj as f64 * self.dy
    }

    pub fn cell_area(&self) -> f64 {
        self.dx * self.dy
    }
}

/// Dense 2-D array addressed by signed `(i, j)` with a fixed origin offset.
///
/// Storage is row-major in `j` (x is the fast index).
#[derive(Clone, Debug, PartialEq)]
pub struct Array2<T> {
    nx: usize,
    ny: usize,
    ox: isize,
    oy: isize,
    data: Vec<T>,
}

impl<T: Clone> Array2<T> {
    /// `nx x ny` entries whose `(0, 0)` element sits at storage position `(ox, oy)`.
    pub fn new(nx: usize, ny: usize, ox: usize, oy: usize, fill: T) -> Self {
        Self {
            nx,
            ny,
            ox: ox as isize,
            oy: oy as isize,
            data: vec![fill; nx * ny],
        }
    }

    pub fn fill(&mut self, value: T) {
        self.data.iter_mut().for_each(|v| *v = value.clone());
    }
}

impl<T> Array2<T> {
    /// Storage extent `(nx, ny)` including any ghost region.
    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    /// Signed index range covered along x.
    pub fn i_range(&self) -> std::ops::Range<isize> {
        -self.ox..self.nx as isize - self.ox
    }

    pub fn j_range(&self) -> std::ops::Range<isize> {
        -self.oy..self.ny as isize - self.oy
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    #[inline]
    fn offset(&self, i: isize, j: isize) -> usize {
        let si = i + self.ox;
        let sj = j + self.oy;
        debug_assert!(
            si >= 0 && sj >= 0 && (si as usize) < self.nx && (sj as usize) < self.ny,
            "index ({i}, {j}) out of bounds"
        );
        sj as usize * self.nx + si as usize
    }
}

impl<T> Index<(isize, isize)> for Array2<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (isize, isize)) -> &T {
        &self.data[self.offset(i, j)]
    }
}

impl<T> IndexMut<(isize, isize)> for Array2<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (isize, isize)) -> &mut T {
        let k = self.offset(i, j);
        &mut self.data[k]
    }
}

/// Fills the [`NGHOST`] layers at both ends of a 1-D array.
pub fn fill_ghosts_1d<T: Copy>(cells: &mut [T], bc: Boundary) {
    let n = cells.len() - 2 * NGHOST;
    for g in 0..NGHOST {
        let (lo, hi) = match bc {
            Boundary::Outflow => (NGHOST, NGHOST + n - 1),
            Boundary::Periodic => (n + g, NGHOST + g),
        };
        cells[g] = cells[lo];
        cells[NGHOST + n + g] = cells[hi];
    }
}

/// Fills ghost cells of a cell-centred array covering `[-NGHOST, n + NGHOST)` per axis.
pub fn fill_cell_ghosts<T: Copy>(a: &mut Array2<T>, nx: usize, ny: usize, bc: (Boundary, Boundary)) {
    let (nx, ny) = (nx as isize, ny as isize);
    let g = NGHOST as isize;
    for j in 0..ny {
        for k in 1..=g {
            let (lo, hi) = match bc.0 {
                Boundary::Outflow => (0, nx - 1),
                Boundary::Periodic => (nx - k, k - 1),
            };
            a[(-k, j)] = a[(lo, j)];
            a[(nx - 1 + k, j)] = a[(hi, j)];
        }
    }
    for i in -g..nx + g {
        for k in 1..=g {
            let (lo, hi) = match bc.1 {
                Boundary::Outflow => (0, ny - 1),
                Boundary::Periodic => (ny - k, k - 1),
            };
            a[(i, -k)] = a[(i, lo)];
            a[(i, ny - 1 + k)] = a[(i, hi)];
        }
    }
}

/// Fills ghosts of an x-face array covering faces `[-NGHOST, nx + NGHOST]`
/// and rows `[-NGHOST, ny + NGHOST)`.
///
/// For periodic x the duplicate face `nx` is reset to face `0`.
pub fn fill_xface_ghosts(b1: &mut Array2<f64>, nx: usize, ny: usize, bc: (Boundary, Boundary)) {
    let (nx, ny) = (nx as isize, ny as isize);
    let g = NGHOST as isize;
    for j in 0..ny {
        if bc.0 == Boundary::Periodic {
            b1[(nx, j)] = b1[(0, j)];
        }
        for k in 1..=g {
            let (lo, hi) = match bc.0 {
                Boundary::Outflow => (0, nx),
                Boundary::Periodic => (nx - k, k),
            };
            b1[(-k, j)] = b1[(lo, j)];
            b1[(nx + k, j)] = b1[(hi, j)];
        }
    }
    for fi in -g..=nx + g {
        for k in 1..=g {
            let (lo, hi) = match bc.1 {
                Boundary::Outflow => (0, ny - 1),
                Boundary::Periodic => (ny - k, k - 1),
            };
            b1[(fi, -k)] = b1[(fi, lo)];
            b1[(fi, ny - 1 + k)] = b1[(fi, hi)];
        }
    }
}

/// Mirror of [`fill_xface_ghosts`] for y-faces indexed `(i, fj)`.
pub fn fill_yface_ghosts(b2: &mut Array2<f64>, nx: usize, ny: usize, bc: (Boundary, Boundary)) {
    let (nx, ny) = (nx as isize, ny as isize);
    let g = NGHOST as isize;
    for i in 0..nx {
        if bc.1 == Boundary::Periodic {
            b2[(i, ny)] = b2[(i, 0)];
        }
        for k in 1..=g {
            let (lo, hi) = match bc.1 {
                Boundary::Outflow => (0, ny),
                Boundary::Periodic => (ny - k, k),
            };
            b2[(i, -k)] = b2[(i, lo)];
            b2[(i, ny + k)] = b2[(i, hi)];
        }
    }
    for fj in -g..=ny + g {
        for k in 1..=g {
            let (lo, hi) = match bc.0 {
                Boundary::Outflow => (0, nx - 1),
                Boundary::Periodic => (nx - k, k - 1),
            };
            b2[(-k, fj)] = b2[(lo, fj)];
            b2[(nx - 1 + k, fj)] = b2[(hi, fj)];
        }
    }
}
