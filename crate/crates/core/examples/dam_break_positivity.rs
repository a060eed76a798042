//! Dam break onto a dry bed at CFL 0.9. The water height must never go
//! negative, however far the time step is from the explicit positivity bound.

use swe::mesh::{gauss_legendre, sample_bathymetry, BoundaryCondition, BoundarySpec, FlatBottom, GridSpec, StateField};
use swe::semidiscretization::{SpatialOperator, WbMode};
use swe::timeint::{build_dec_tableau, Solver};

fn main() -> swe::Result<()> {
    let steps: usize = std::env::args().nth(1).map(|s| s.parse().expect("step count")).unwrap_or(500);
    let grid = GridSpec::new(200, 1, (0.0, 1.0), (0.0, 0.005))?;
    let bc = BoundarySpec {
        left: BoundaryCondition::Transmissive,
        right: BoundaryCondition::Transmissive,
        bottom: BoundaryCondition::Periodic,
        top: BoundaryCondition::Periodic,
    };
    let bathy = sample_bathymetry(&FlatBottom, grid, &gauss_legendre(4)?);
    let mut u = StateField::zeros(grid);
    for i in 0..grid.nx as isize {
        u.set(i, 0, [if grid.xc(i) < 0.5 { 1.0 } else { 0.0 }, 0.0, 0.0]);
    }
    let op = SpatialOperator::new(grid, bathy, bc, 9.81, WbMode::Blended)?;
    let mut solver = Solver::new(op, u, build_dec_tableau(3, 5)?);
    let mut min_h = f64::INFINITY;
    for _ in 0..steps {
        let dt = solver.stable_dt(0.9, f64::INFINITY);
        let r = solver.advance(dt)?;
        min_h = min_h.min(r.min_h);
    }
    println!("steps {}  t {:.4}  min h {min_h:e}  mass {:.6}", solver.steps, solver.t, solver.state.mass());
    Ok(())
}
