//! Output writers: 1-D CSV profiles, 2-D text grid dumps with a JSON sidecar,
//! legacy VTK files, diagnostics series and run manifests.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ldcu1d::Field1d;
use crate::ldcu2d::Field2d;
use crate::mesh::Array2;
use crate::mhd::{primitive_from_conserved, GasParams, Primitive, EN};
use crate::timestepper::DiagRecord;

/// 17 significant digits: enough for an exact `f64` round trip.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn finish(path: &Path, mut w: BufWriter<fs::File>) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes `text` to `path`, creating parent directories.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut w = create(path)?;
    w.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))?;
    finish(path, w)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    write_text(path, &text)
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub const CSV_1D_HEADER: &str = "x,rho,v1,v2,v3,B2,B3,p,E";

/// One row per interior cell: `x, rho, v1, v2, v3, B2, B3, p, E`.
pub fn write_csv_1d(path: &Path, field: &Field1d, gas: GasParams) -> Result<()> {
    let prims = field.primitives(gas)?;
    let mut w = create(path)?;
    let mut body = String::with_capacity(prims.len() * 9 * 24);
    body += CSV_1D_HEADER;
    body.push('\n');
    for (j, (w, q)) in prims.iter().zip(field.interior()).enumerate() {
        let row = [
            field.grid.center(j as isize),
            w.rho,
            w.v[0],
            w.v[1],
            w.v[2],
            w.b[1],
            w.b[2],
            w.p,
            q[EN],
        ];
        body += &row.map(num).join(",");
        body.push('\n');
    }
    w.write_all(body.as_bytes()).map_err(|e| Error::io(path, e))?;
    finish(path, w)
}

/// Parses a CSV written by [`write_csv_1d`] into its header and numeric rows.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let parse_err = |message: String| Error::Parse {
        path: path.to_path_buf(),
        message,
    };
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| parse_err("empty file".into()))?
        .split(',')
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let row = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| parse_err(format!("line {}: {e}", k + 2)))?;
        if row.len() != header.len() {
            return Err(parse_err(format!("line {}: {} columns, expected {}", k + 2, row.len(), header.len())));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

/// Metadata sidecar of a 2-D grid dump.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DumpMeta {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
    pub t: f64,
    pub step: usize,
    pub problem: String,
    /// Component names; component `c` is stored in `files[c]`, relative to the sidecar.
    pub components: Vec<String>,
    pub files: Vec<String>,
}

/// A 2-D dump in memory: one `nx x ny` array per component.
#[derive(Clone, Debug, PartialEq)]
pub struct GridDump {
    pub meta: DumpMeta,
    pub data: Vec<Array2<f64>>,
}

impl GridDump {
    pub fn component(&self, name: &str) -> Option<&Array2<f64>> {
        self.meta.components.iter().position(|c| c == name).map(|k| &self.data[k])
    }
}

pub const DUMP_COMPONENTS: [&str; 9] = ["rho", "v1", "v2", "v3", "B1", "B2", "B3", "p", "E"];

/// Cell-centred primitive fields plus energy of a 2-D state.
pub fn dump_from_field(field: &Field2d, gas: GasParams, problem: &str, t: f64, step: usize) -> Result<GridDump> {
    let (nx, ny) = (field.nx(), field.ny());
    let mut data = vec![Array2::new(nx, ny, 0, 0, 0.0); DUMP_COMPONENTS.len()];
    for j in 0..ny as isize {
        for i in 0..nx as isize {
            let q = &field.cells[(i, j)];
            let w = field.primitive(i, j, gas)?;
            let vals = [w.rho, w.v[0], w.v[1], w.v[2], w.b[0], w.b[1], w.b[2], w.p, q[EN]];
            for (a, v) in data.iter_mut().zip(vals) {
                a[(i, j)] = v;
            }
        }
    }
    let g = &field.grid;
    Ok(GridDump {
        meta: DumpMeta {
            nx,
            ny,
            x0: g.x0,
            y0: g.y0,
            dx: g.dx,
            dy: g.dy,
            t,
            step,
            problem: problem.to_string(),
            components: DUMP_COMPONENTS.iter().map(|s| s.to_string()).collect(),
            files: Vec::new(),
        },
        data,
    })
}

/// Writes `{stem}.json` and one `{stem}_{component}.txt` matrix per component
/// into `dir`. Matrix row `k` holds `j = k`, columns run over `i`.
pub fn write_grid_dump(dir: &Path, stem: &str, dump: &GridDump) -> Result<PathBuf> {
    let mut meta = dump.meta.clone();
    meta.files = meta.components.iter().map(|c| format!("{stem}_{c}.txt")).collect();
    for (file, a) in meta.files.iter().zip(&dump.data) {
        let path = dir.join(file);
        let (nx, ny) = a.shape();
        let mut text = String::with_capacity(nx * ny * 24);
        for j in 0..ny as isize {
            let row: Vec<String> = (0..nx as isize).map(|i| num(a[(i, j)])).collect();
            text += &row.join(" ");
            text.push('\n');
        }
        write_text(&path, &text)?;
    }
    let sidecar = dir.join(format!("{stem}.json"));
    write_json(&sidecar, &meta)?;
    Ok(sidecar)
}

/// Reads a dump back from its JSON sidecar.
pub fn read_grid_dump(sidecar: &Path) -> Result<GridDump> {
    let meta: DumpMeta = read_json(sidecar)?;
    let dir = sidecar.parent().unwrap_or(Path::new("."));
    let mut data = Vec::with_capacity(meta.files.len());
    for file in &meta.files {
        let path = dir.join(file);
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let parse_err = |message: String| Error::Parse {
            path: path.clone(),
            message,
        };
        let mut a = Array2::new(meta.nx, meta.ny, 0, 0, 0.0);
        let rows: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        if rows.len() != meta.ny {
            return Err(parse_err(format!("{} rows, expected {}", rows.len(), meta.ny)));
        }
        for (j, line) in rows.iter().enumerate() {
            let vals: Vec<&str> = line.split_whitespace().collect();
            if vals.len() != meta.nx {
                return Err(parse_err(format!("row {j}: {} values, expected {}", vals.len(), meta.nx)));
            }
            for (i, v) in vals.iter().enumerate() {
                a[(i as isize, j as isize)] = v.parse().map_err(|e| parse_err(format!("row {j}: {e}")))?;
            }
        }
        data.push(a);
    }
    Ok(GridDump { meta, data })
}

/// Legacy ASCII VTK, `STRUCTURED_POINTS` with cell data: density, pressure,
/// energy, velocity and magnetic field.
pub fn write_vtk(path: &Path, field: &Field2d, gas: GasParams, title: &str) -> Result<()> {
    let (nx, ny) = (field.nx(), field.ny());
    let g = &field.grid;
    let mut prims: Vec<Primitive> = Vec::with_capacity(nx * ny);
    let mut energy = Vec::with_capacity(nx * ny);
    for j in 0..ny as isize {
        for i in 0..nx as isize {
            let q = &field.cells[(i, j)];
            prims.push(primitive_from_conserved(q, gas)?);
            energy.push(q[EN]);
        }
    }
    let mut s = String::with_capacity(nx * ny * 160);
    s += "# vtk DataFile Version 3.0\n";
    s += &title.replace('\n', " ");
    s += "\nASCII\nDATASET STRUCTURED_POINTS\n";
    s += &format!("DIMENSIONS {} {} 1\n", nx + 1, ny + 1);
    s += &format!("ORIGIN {} {} 0\n", num(g.x0), num(g.y0));
    s += &format!("SPACING {} {} 1\n", num(g.dx), num(g.dy));
    s += &format!("CELL_DATA {}\n", nx * ny);
    let scalars: [(&str, Box<dyn Fn(usize) -> f64>); 3] = [
        ("density", Box::new(|k| prims[k].rho)),
        ("pressure", Box::new(|k| prims[k].p)),
        ("energy", Box::new(|k| energy[k])),
    ];
    for (name, f) in scalars {
        s += &format!("SCALARS {name} double 1\nLOOKUP_TABLE default\n");
        for k in 0..nx * ny {
            s += &num(f(k));
            s.push('\n');
        }
    }
    for (name, vec) in [("velocity", 0), ("magnetic_field", 1)] {
        s += &format!("VECTORS {name} double\n");
        for w in &prims {
            let v = if vec == 0 { w.v } else { w.b };
            s += &v.map(num).join(" ");
            s.push('\n');
        }
    }
    write_text(path, &s)
}

pub const DIAGNOSTICS_HEADER: &str =
    "step,t,dt,mass,mom1,mom2,mom3,B1,B2,B3,energy,max_rel_div,min_rho,min_p,skipped_corrections";

/// Time series of [`DiagRecord`]s as CSV.
pub fn write_diagnostics(path: &Path, log: &[DiagRecord]) -> Result<()> {
    let mut s = String::from(DIAGNOSTICS_HEADER);
    s.push('\n');
    for r in log {
        s += &format!("{},{},{},", r.step, num(r.t), num(r.dt));
        s += &r.totals.map(num).join(",");
        s += &format!(
            ",{},{},{},{}\n",
            num(r.max_rel_div),
            num(r.min_rho),
            num(r.min_p),
            r.skipped_corrections
        );
    }
    write_text(path, &s)
}
