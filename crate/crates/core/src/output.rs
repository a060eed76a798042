//! Field writers (CSV, legacy VTK) and a CSV reader.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::mesh::{BathymetryData, StateField};

pub const CSV_HEADER: &str = "x,y,h,qx,qy,b,eta";

/// One row per interior cell, x running fastest.
pub fn write_csv(path: &Path, u: &StateField, bathy: &BathymetryData) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{CSV_HEADER}")?;
    let g = u.grid;
    for (i, j, v) in u.interior() {
        let (i, j) = (i as isize, j as isize);
        let b = bathy.avg(i, j);
        writeln!(
            w,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            g.xc(i),
            g.yc(j),
            v[0],
            v[1],
            v[2],
            b,
            v[0] + b
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Rows of a file written by [`write_csv`].
pub fn read_csv(path: &Path) -> Result<Vec<[f64; 7]>> {
    let r = BufReader::new(File::open(path)?);
    let mut lines = r.lines();
    match lines.next() {
        Some(Ok(h)) if h.trim() == CSV_HEADER => {}
        _ => return Err(Error::Usage(format!("{}: missing header `{CSV_HEADER}`", path.display()))),
    }
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        let line = line?;
        let vals: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Usage(format!("{}:{}: {e}", path.display(), n + 2)))?;
        let row: [f64; 7] = vals
            .try_into()
            .map_err(|_| Error::Usage(format!("{}:{}: expected 7 columns", path.display(), n + 2)))?;
        rows.push(row);
    }
    Ok(rows)
}

/// Legacy ASCII structured-points file with cell data.
pub fn write_vtk(path: &Path, u: &StateField, bathy: &BathymetryData, t: f64) -> Result<()> {
    let g = u.grid;
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "shallow water t={t:.16e}")?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET STRUCTURED_POINTS")?;
    writeln!(w, "DIMENSIONS {} {} 2", g.nx + 1, g.ny + 1)?;
    writeln!(w, "ORIGIN {:e} {:e} 0", g.x0, g.y0)?;
    writeln!(w, "SPACING {:e} {:e} 1", g.dx, g.dy)?;
    writeln!(w, "CELL_DATA {}", g.nx * g.ny)?;
    let columns: [(&str, fn([f64; 3], f64) -> f64); 5] = [
        ("h", |v, _| v[0]),
        ("qx", |v, _| v[1]),
        ("qy", |v, _| v[2]),
        ("b", |_, b| b),
        ("eta", |v, b| v[0] + b),
    ];
    for (name, f) in columns {
        writeln!(w, "SCALARS {name} double 1")?;
        writeln!(w, "LOOKUP_TABLE default")?;
        for (i, j, v) in u.interior() {
            writeln!(w, "{:.16e}", f(v, bathy.avg(i as isize, j as isize)))?;
        }
    }
    w.flush()?;
    Ok(())
}
