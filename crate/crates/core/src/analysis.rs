//! Error norms, convergence tables and contact-resolution metrics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mhd::Primitive;

/// Names of the primitive components in the order of [`primitive_components`].
pub const PRIMITIVE_NAMES: [&str; 8] = ["rho", "v1", "v2", "v3", "B1", "B2", "B3", "p"];

pub fn primitive_components(w: &Primitive) -> [f64; 8] {
    [w.rho, w.v[0], w.v[1], w.v[2], w.b[0], w.b[1], w.b[2], w.p]
}

/// `sum |a - b| * measure` for one scalar field.
pub fn l1_distance(a: &[f64], b: &[f64], measure: f64) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch {
            expected: b.len(),
            actual: a.len(),
        });
    }
    Ok(a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() * measure)
}

/// Per-component l1 error of primitive fields; `measure` is the cell width or area.
pub fn l1_error(numeric: &[Primitive], exact: &[Primitive], measure: f64) -> Result<[f64; 8]> {
    if numeric.len() != exact.len() {
        return Err(Error::ShapeMismatch {
            expected: exact.len(),
            actual: numeric.len(),
        });
    }
    let mut err = [0.0; 8];
    for (n, e) in numeric.iter().zip(exact) {
        let (a, b) = (primitive_components(n), primitive_components(e));
        for c in 0..8 {
            err[c] += (a[c] - b[c]).abs();
        }
    }
    Ok(err.map(|e| e * measure))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorRow {
    pub nx: usize,
    pub ny: usize,
    /// l1 errors of the primitive components, named by [`PRIMITIVE_NAMES`].
    pub errors: [f64; 8],
}

/// Errors on successively refined grids.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ErrorRow>,
}

pub fn component_index(name: &str) -> Option<usize> {
    PRIMITIVE_NAMES.iter().position(|n| *n == name)
}

impl ConvergenceTable {
    pub fn push(&mut self, row: ErrorRow) {
        self.rows.push(row);
    }

    pub fn errors(&self, component: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.errors[component]).collect()
    }

    /// `log2(E_coarse / E_fine)` between consecutive rows (assumes grid doubling).
    pub fn orders(&self, component: usize) -> Vec<f64> {
        self.rows
            .windows(2)
            .map(|w| (w[0].errors[component] / w[1].errors[component]).log2())
            .collect()
    }

    /// Plain-text table: grid, then error and order for each requested component.
    pub fn to_text(&self, components: &[usize]) -> String {
        let mut out = format!("{:<12}", "grid");
        for &c in components {
            out += &format!(" {:>12} {:>7}", format!("{}-error", PRIMITIVE_NAMES[c]), "order");
        }
        out.push('\n');
        for (k, row) in self.rows.iter().enumerate() {
            out += &format!("{:<12}", format!("{}x{}", row.nx, row.ny));
            for &c in components {
                let order = if k == 0 {
                    "-".to_string()
                } else {
                    format!("{:.2}", (self.rows[k - 1].errors[c] / row.errors[c]).log2())
                };
                out += &format!(" {:>12.3e} {:>7}", row.errors[c], order);
            }
            out.push('\n');
        }
        out
    }
}

/// Number of cells strictly between the 5% and 95% levels of the jump from
/// `levels.0` to `levels.1`. `None` when the jump is negligible.
pub fn contact_sharpness(profile: &[f64], levels: (f64, f64)) -> Option<usize> {
    let (a, b) = levels;
    let jump = b - a;
    if !(jump.abs() > 1e-12 * a.abs().max(b.abs()).max(1e-300)) {
        return None;
    }
    let l5 = a + 0.05 * jump;
    let l95 = a + 0.95 * jump;
    let (lo, hi) = (l5.min(l95), l5.max(l95));
    Some(profile.iter().filter(|v| **v > lo && **v < hi).count())
}

/// Cell averages of a piecewise-constant fine profile on a coarse uniform grid.
///
/// Both grids start at `x0`; `fine_dx * fine.len()` must cover `coarse_dx * n`.
pub fn remap_conservative(fine: &[f64], fine_dx: f64, n: usize, coarse_dx: f64) -> Vec<f64> {
    (0..n)
        .map(|j| {
            let (a, b) = (j as f64 * coarse_dx, (j + 1) as f64 * coarse_dx);
            let first = ((a / fine_dx).floor() as usize).min(fine.len() - 1);
            let last = ((b / fine_dx).ceil() as usize).min(fine.len());
            let mut sum = 0.0;
            for (k, v) in fine.iter().enumerate().take(last).skip(first) {
                let lo = (k as f64 * fine_dx).max(a);
                let hi = ((k + 1) as f64 * fine_dx).min(b);
                if hi > lo {
                    sum += v * (hi - lo);
                }
            }
            sum / coarse_dx
        })
        .collect()
}

/// Index of the most contact-like cell: largest relative density variation
/// in excess of the relative pressure variation.
///
/// Shocks and rarefactions move pressure at least as much as density, while a
/// contact moves density alone, so the score isolates it.
pub fn locate_contact(rho: &[f64], p: &[f64]) -> Option<usize> {
    let n = rho.len();
    if n < 3 || p.len() != n {
        return None;
    }
    (1..n - 1)
        .map(|j| {
            let dr = (rho[j + 1] - rho[j - 1]).abs() / rho[j];
            let dp = (p[j + 1] - p[j - 1]).abs() / p[j];
            (j, dr - dp)
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .filter(|(_, s)| *s > 0.0)
        .map(|(j, _)| j)
}

/// Contact-resolution comparison of one profile against a reference.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContactMetrics {
    /// Cells strictly inside the 5%..95% band of the contact jump.
    pub sharpness: usize,
    /// l1 distance to the reference over the comparison window.
    pub l1_window: f64,
}

/// Where and how to measure around a contact.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContactWindow {
    pub center: usize,
    /// Half-width of the window in which transition cells are counted.
    pub count_half_width: usize,
    /// Offset from the centre at which the plateau levels are read.
    pub plateau_offset: usize,
    /// Half-width of the l1 comparison window.
    pub l1_half_width: usize,
    pub level_left: f64,
    pub level_right: f64,
}

impl ContactWindow {
    /// Locates the contact on a reference profile (already on the coarse grid).
    pub fn from_reference(rho_ref: &[f64], p_ref: &[f64], count_half_width: usize, plateau_offset: usize, l1_half_width: usize) -> Option<Self> {
        let center = locate_contact(rho_ref, p_ref)?;
        let n = rho_ref.len();
        let left = center.checked_sub(plateau_offset)?;
        let right = center + plateau_offset;
        if right >= n {
            return None;
        }
        Some(Self {
            center,
            count_half_width,
            plateau_offset,
            l1_half_width,
            level_left: rho_ref[left],
            level_right: rho_ref[right],
        })
    }

    fn range(&self, half: usize, n: usize) -> std::ops::Range<usize> {
        self.center.saturating_sub(half)..(self.center + half + 1).min(n)
    }

    pub fn measure(&self, rho: &[f64], rho_ref: &[f64], dx: f64) -> Result<ContactMetrics> {
        let n = rho.len();
        let count = self.range(self.count_half_width, n);
        let sharpness = contact_sharpness(&rho[count], (self.level_left, self.level_right))
            .ok_or_else(|| Error::Config("no detectable contact jump in the reference".into()))?;
        let win = self.range(self.l1_half_width, n);
        let l1_window = l1_distance(&rho[win.clone()], &rho_ref[win], dx)?;
        Ok(ContactMetrics { sharpness, l1_window })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l1_basics() {
        let a = [1.0, 2.0, 3.0];
        assert_eq!(l1_distance(&a, &a, 0.1).unwrap(), 0.0);
        let b = [1.5, 2.5, 3.5];
        // offset 0.5 on a domain of total measure 2
        assert!((l1_distance(&a, &b, 2.0 / 3.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(l1_distance(&a, &b[..2], 1.0).is_err());

        let w = Primitive::new(1.0, [0.0; 3], [0.0; 3], 1.0);
        let mut v = w;
        v.p += 0.25;
        let e = l1_error(&[w, w], &[v, w], 0.5).unwrap();
        assert_eq!(e[7], 0.125);
        assert_eq!(e[0], 0.0);
    }

    #[test]
    fn convergence_orders() {
        let mut t = ConvergenceTable::default();
        for (n, e) in [(50, 4e-2), (100, 1e-2), (200, 2.5e-3)] {
            t.push(ErrorRow {
                nx: n,
                ny: n,
                errors: [e; 8],
            });
        }
        for o in t.orders(0) {
            assert!((o - 2.0).abs() < 1e-12);
        }
        let text = t.to_text(&[0, 7]);
        assert!(text.contains("200x200"));
        assert!(text.contains("2.00"));

        let single = ConvergenceTable {
            rows: vec![ErrorRow {
                nx: 8,
                ny: 8,
                errors: [1.0; 8],
            }],
        };
        assert!(single.orders(0).is_empty());
        assert_eq!(single.to_text(&[0]).lines().count(), 2);
    }

    #[test]
    fn sharpness_counts() {
        let step = [1.0, 1.0, 1.0, 0.0, 0.0];
        assert_eq!(contact_sharpness(&step, (1.0, 0.0)), Some(0));
        let mut ramp = vec![0.0, 0.0];
        ramp.extend((1..10).map(|k| k as f64 / 10.0));
        ramp.extend([1.0, 1.0]);
        assert_eq!(contact_sharpness(&ramp, (0.0, 1.0)), Some(9));
        assert_eq!(contact_sharpness(&ramp, (0.5, 0.5)), None);
    }

    #[test]
    fn remap_preserves_integral() {
        let fine: Vec<f64> = (0..6000).map(|k| (k as f64 * 0.01).sin() + 2.0).collect();
        let dxf = 2.0 / 6000.0;
        let coarse = remap_conservative(&fine, dxf, 800, 2.0 / 800.0);
        let a: f64 = fine.iter().sum::<f64>() * dxf;
        let b: f64 = coarse.iter().sum::<f64>() * (2.0 / 800.0);
        assert!((a - b).abs() < 1e-12);
        let flat = remap_conservative(&[3.0; 30], 0.1, 7, 3.0 / 7.0);
        assert!(flat.iter().all(|v| (v - 3.0).abs() < 1e-14));
    }

    #[test]
    fn contact_is_found_between_shock_and_rarefaction() {
        // rarefaction-like ramp, contact at 20, shock at 30
        let mut rho = vec![];
        let mut p = vec![];
        for j in 0..40 {
            let (r, q) = match j {
                0..=4 => (1.0, 1.0),
                5..=9 => (1.0 - 0.05 * (j - 4) as f64, (1.0 - 0.05 * (j - 4) as f64).powf(2.0)),
                10..=19 => (0.75, 0.5625),
                20..=29 => (0.3, 0.5625),
                _ => (0.1, 0.1),
            };
            rho.push(r);
            p.push(q);
        }
        let j = locate_contact(&rho, &p).unwrap();
        assert!((19..=20).contains(&j), "{j}");
    }
}
