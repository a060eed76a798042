//! Modified-Patankar DeC on a two-component linear exchange system: observed
//! order on the smooth problem, positivity and conservation on the stiff one.

use swe::semidiscretization::{PdsLedger, PdsTopology};
use swe::timeint::{build_dec_tableau, mpdec_ode_step, PatankarParams, ProductionDestruction};

struct Exchange {
    a: f64,
    b: f64,
    topo: PdsTopology,
}

impl ProductionDestruction for Exchange {
    fn topology(&self) -> &PdsTopology {
        &self.topo
    }
    fn rates(&self, _t: f64, c: &[f64]) -> PdsLedger {
        let (f12, f21) = (self.a * c[0], self.b * c[1]);
        PdsLedger { p: vec![vec![f21], vec![f12]], d: vec![vec![f12], vec![f21]] }
    }
}

fn exact(sys: &Exchange, c0: [f64; 2], t: f64) -> [f64; 2] {
    let s = c0[0] + c0[1];
    let eq = sys.b / (sys.a + sys.b) * s;
    let c1 = eq + (c0[0] - eq) * (-(sys.a + sys.b) * t).exp();
    [c1, s - c1]
}

fn main() -> swe::Result<()> {
    let tab = build_dec_tableau(3, 5)?;
    let params = PatankarParams::default();
    let sys = Exchange { a: 2.0, b: 1.0, topo: PdsTopology::dense(2) };
    let c0 = [0.9, 0.1];
    let mut prev: Option<f64> = None;
    for k in 0..6 {
        let n = 5 << k;
        let dt = 1.0 / n as f64;
        let mut c = c0.to_vec();
        for s in 0..n {
            c = mpdec_ode_step(&sys, &tab, s as f64 * dt, &c, dt, &params)?;
        }
        let ex = exact(&sys, c0, 1.0);
        let err = (c[0] - ex[0]).abs() + (c[1] - ex[1]).abs();
        match prev {
            Some(p) => println!("dt {dt:.5}  error {err:.3e}  order {:.2}", (p / err).log2()),
            None => println!("dt {dt:.5}  error {err:.3e}"),
        }
        prev = Some(err);
    }

    let stiff = Exchange { a: 1.0e4, b: 1.0, topo: PdsTopology::dense(2) };
    let dt = 100.0 / (stiff.a + stiff.b);
    let mut c = c0.to_vec();
    let (mut min_c, mut drift) = (f64::INFINITY, 0.0f64);
    for s in 0..50 {
        let next = mpdec_ode_step(&stiff, &tab, s as f64 * dt, &c, dt, &params)?;
        min_c = min_c.min(next[0]).min(next[1]);
        drift = drift.max((next[0] + next[1] - c[0] - c[1]).abs());
        c = next;
    }
    println!("stiff: dt {dt:.3e}  min c {min_c:.3e}  max mass change per step {drift:.1e}  final {:?}", c);
    Ok(())
}
