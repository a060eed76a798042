//! Lake at rest over smooth and emerging bathymetry, with and without the
//! well-balanced blending.

use swe::scenarios::{convergence_orders, Scenario};
use swe::semidiscretization::WbMode;
use swe::timeint::build_dec_tableau;

fn run(name: &str, n: usize, mode: WbMode) -> swe::Result<Vec<f64>> {
    let sc = Scenario::by_name(name)?.with_mesh(n, n);
    let (mut solver, setup) = sc.solver(mode, build_dec_tableau(3, 5)?)?;
    let tf = sc.spec.t_final;
    while solver.t < tf {
        let dt = solver.stable_dt(sc.spec.cfl, tf);
        solver.advance(dt)?;
    }
    let e = sc.errors(&solver.state, &setup, solver.t).expect("lake has a reference");
    Ok(e.iter().map(|v| v.1).collect())
}

fn main() -> swe::Result<()> {
    let meshes = [25, 50, 100];
    for name in ["lake-at-rest-wet", "lake-at-rest-wetdry"] {
        println!("{name}");
        for n in &meshes[..2] {
            let e = run(name, *n, WbMode::Blended)?;
            println!("  wb  {n:>4}  h {:.3e}  qx {:.3e}  qy {:.3e}", e[0], e[1], e[2]);
        }
        let mut errs = Vec::new();
        for n in meshes {
            let e = run(name, n, WbMode::Off)?;
            println!("  off {n:>4}  h {:.3e}  qx {:.3e}  qy {:.3e}", e[0], e[1], e[2]);
            errs.push(e);
        }
        for o in convergence_orders(&errs, &meshes) {
            println!("  off order  h {:.2}  qx {:.2}  qy {:.2}", o[0], o[1], o[2]);
        }
    }
    Ok(())
}
