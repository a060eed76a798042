//! Moving vortex on a sequence of meshes, printing L1 errors and orders.

use swe::scenarios::{convergence_orders, Scenario};
use swe::semidiscretization::WbMode;
use swe::timeint::build_dec_tableau;

fn main() -> swe::Result<()> {
    let meshes: Vec<usize> = std::env::args()
        .nth(1)
        .map(|s| s.split(',').map(|n| n.parse().expect("mesh size")).collect())
        .unwrap_or_else(|| vec![25, 50, 100]);
    let mode = match std::env::var("WB").as_deref() {
        Ok("off") => WbMode::Off,
        Ok("forced") => WbMode::Forced,
        _ => WbMode::Blended,
    };
    let mut errs = Vec::new();
    for &n in &meshes {
        let sc = Scenario::by_name("vortex")?.with_mesh(n, n);
        let (mut solver, setup) = sc.solver(mode, build_dec_tableau(3, 5)?)?;
        let tf = sc.spec.t_final;
        while solver.t < tf {
            let dt = solver.stable_dt(sc.spec.cfl, tf);
            solver.advance(dt)?;
        }
        let e = sc.errors(&solver.state, &setup, solver.t).expect("vortex has a reference");
        println!("{n:>5} steps {:>4}  h {:.3e}  qx {:.3e}  qy {:.3e}", solver.steps, e[0].1, e[1].1, e[2].1);
        errs.push(e.iter().map(|v| v.1).collect::<Vec<_>>());
    }
    for (w, o) in meshes.windows(2).zip(convergence_orders(&errs, &meshes)) {
        println!("{:>4} -> {:<4} orders h {:.2} qx {:.2} qy {:.2}", w[0], w[1], o[0], o[1], o[2]);
    }
    Ok(())
}
