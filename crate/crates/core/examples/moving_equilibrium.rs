//! Sub- and supercritical channel flows started on their discrete steady
//! state. Prints the largest drift of discharge and head over the run.

use swe::scenarios::{ReferenceKind, Scenario};
use swe::semidiscretization::WbMode;
use swe::timeint::build_dec_tableau;
use swe::wellbalanced::equilibrium_vars;

fn main() -> swe::Result<()> {
    let steps: usize = std::env::args().nth(1).map(|s| s.parse().expect("step count")).unwrap_or(100);
    for name in ["channel-subcritical", "channel-supercritical"] {
        let mut sc = Scenario::by_name(name)?;
        sc.start_steady()?;
        let ReferenceKind::Steady(r) = sc.reference else { unreachable!() };
        let (mut solver, setup) = sc.solver(WbMode::Blended, build_dec_tableau(3, 5)?)?;
        let (mut dq, mut de) = (0.0f64, 0.0f64);
        for _ in 0..steps {
            let dt = solver.stable_dt(sc.spec.cfl, sc.spec.t_final);
            solver.advance(dt)?;
            for (i, j, u) in solver.state.interior() {
                let b = setup.bathy.avg(i as isize, j as isize);
                dq = dq.max((u[1] - r.q0).abs());
                de = de.max((equilibrium_vars(u[0], u[1], b, r.g).head - r.e0).abs());
            }
        }
        println!("{name}: E0 {:.5}  t {:.3}  max |q - q0| {dq:.3e}  max |E - E0| {de:.3e}", r.e0, solver.t);
    }
    Ok(())
}
