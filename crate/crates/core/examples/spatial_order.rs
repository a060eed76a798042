//! Spatial order of the semi-discrete operator on a smooth periodic field.
//! The exact cell-average time derivative is the boundary integral of the
//! physical flux, taken with a high-order edge rule.

use std::f64::consts::PI;
use swe::mesh::{fill_ghosts, gauss_legendre, sample_bathymetry, BoundarySpec, FlatBottom, GridSpec, StateField};
use swe::scenarios::cell_average;
use swe::semidiscretization::{IndicatorState, SpatialOperator, WbMode};

const G: f64 = 9.81;

fn state(x: f64, y: f64) -> [f64; 3] {
    let k = 2.0 * PI / 3.0;
    let h = 1.0 + 0.1 * (k * x).sin() * (k * y).cos();
    let u = 0.5 + 0.1 * (k * y).sin();
    let v = -0.3 + 0.1 * (k * x).cos();
    [h, h * u, h * v]
}

fn flux(p: [f64; 3], dir: usize) -> [f64; 3] {
    let (h, qx, qy) = (p[0], p[1], p[2]);
    if dir == 0 {
        [qx, qx * qx / h + 0.5 * G * h * h, qx * qy / h]
    } else {
        [qy, qx * qy / h, qy * qy / h + 0.5 * G * h * h]
    }
}

fn main() -> swe::Result<()> {
    let edge = gauss_legendre(8)?;
    let mut prev: Option<(f64, usize)> = None;
    for n in [12usize, 25, 50, 100] {
        let grid = GridSpec::new(n, n, (0.0, 3.0), (0.0, 3.0))?;
        let bc = BoundarySpec::periodic();
        let bathy = sample_bathymetry(&FlatBottom, grid, &gauss_legendre(4)?);
        let op = SpatialOperator::new(grid, bathy, bc.clone(), G, WbMode::Off)?;
        let mut u = StateField::zeros(grid);
        for j in 0..n as isize {
            for i in 0..n as isize {
                u.set(i, j, cell_average(&grid, i, j, state));
            }
        }
        fill_ghosts(&mut u, &bc, 0.0);
        let (r, _) = op.compute_rhs(&u, &IndicatorState::default())?;
        let mut err = 0.0;
        for j in 0..n as isize {
            for i in 0..n as isize {
                let (x0, x1) = (grid.xc(i) - 0.5 * grid.dx, grid.xc(i) + 0.5 * grid.dx);
                let (y0, y1) = (grid.yc(j) - 0.5 * grid.dy, grid.yc(j) + 0.5 * grid.dy);
                let mut d = [0.0; 3];
                for (s, w) in edge.nodes.iter().zip(&edge.weights) {
                    let (x, y) = (grid.xc(i) + s * grid.dx, grid.yc(j) + s * grid.dy);
                    let (fe, fw) = (flux(state(x1, y), 0), flux(state(x0, y), 0));
                    let (fn_, fs) = (flux(state(x, y1), 1), flux(state(x, y0), 1));
                    for c in 0..3 {
                        d[c] -= w * ((fe[c] - fw[c]) / grid.dx + (fn_[c] - fs[c]) / grid.dy);
                    }
                }
                let k = (i + j * n as isize) as usize;
                err += (0..3).map(|c| (d[c] - r.data[k][c]).abs()).sum::<f64>() * grid.cell_area();
            }
        }
        match prev {
            Some((p, m)) => println!("{n:>4}  L1 residual error {err:.3e}  order {:.2}", (p / err).ln() / (n as f64 / m as f64).ln()),
            None => println!("{n:>4}  L1 residual error {err:.3e}"),
        }
        prev = Some((err, n));
    }
    Ok(())
}
