//! Test-case catalog: bathymetries, initial and boundary data, reference
//! solutions and error measurement.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mesh::{
    gauss_legendre, sample_bathymetry, Bathymetry, BathymetryData, BoundaryCondition, BoundarySpec,
    FnBathymetry, GridSpec, StateField, TimeFn,
};
use crate::semidiscretization::{SpatialOperator, WbMode};
use crate::timeint::{DecTableau, Solver};
use crate::wellbalanced::equilibrium_vars;

pub const SCENARIOS: [&str; 8] = [
    "vortex",
    "lake-at-rest-wet",
    "lake-at-rest-wetdry",
    "lake-at-rest-perturbation",
    "channel-subcritical",
    "channel-supercritical",
    "island-flood",
    "tsunami-three-obstacles",
];

#[derive(Debug, Clone)]
pub struct ScenarioSpec {
    pub name: String,
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub nx: usize,
    pub ny: usize,
    pub g: f64,
    pub t_final: f64,
    pub cfl: f64,
    pub bc: BoundarySpec,
    pub wb: WbMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Subcritical,
    Supercritical,
}

/// Smooth 1D steady flow with constant discharge and head.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyReference {
    pub q0: f64,
    pub e0: f64,
    pub branch: Branch,
    pub g: f64,
}

impl SteadyReference {
    /// Depth over bed level `b` on the reference branch.
    pub fn h_at(&self, b: f64) -> Result<f64> {
        let (g, q0, e0) = (self.g, self.q0, self.e0);
        if q0 == 0.0 {
            return Ok((e0 / g - b).max(0.0));
        }
        let f = |h: f64| 2.0 * g * h * h * h + 2.0 * (g * b - e0) * h * h + q0 * q0;
        let df = |h: f64| 6.0 * g * h * h + 4.0 * (g * b - e0) * h;
        let hc = 2.0 * (e0 - g * b) / (3.0 * g);
        if hc <= 0.0 || f(hc) >= 0.0 {
            return Err(Error::Scenario(format!("no steady depth over bed level {b} (choked flow)")));
        }
        let (mut lo, mut hi) = match self.branch {
            Branch::Subcritical => (hc, (e0 - g * b) / g),
            Branch::Supercritical => (0.0, hc),
        };
        // f is increasing through the subcritical root and decreasing through the supercritical one
        let rising = self.branch == Branch::Subcritical;
        let mut h = 0.5 * (lo + hi);
        for _ in 0..200 {
            let fh = f(h);
            if fh == 0.0 {
                break;
            }
            if (fh > 0.0) == rising {
                hi = h;
            } else {
                lo = h;
            }
            let step = fh / df(h);
            let mut next = h - step;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - h).abs() <= 4.0 * f64::EPSILON * h {
                h = next;
                break;
            }
            h = next;
        }
        Ok(h)
    }

    pub fn froude(&self, h: f64) -> f64 {
        self.q0 / (h * (self.g * h).sqrt())
    }
}

/// Steady reference through `(h_anchor, b_anchor)`.
pub fn steady_reference(q0: f64, anchor: (f64, f64), branch: Branch, g: f64) -> Result<SteadyReference> {
    let (h, b) = anchor;
    if h <= 0.0 {
        return Err(Error::Scenario("anchor depth must be positive".into()));
    }
    let e0 = equilibrium_vars(h, q0, b, g).head;
    let r = SteadyReference { q0, e0, branch, g };
    let fr = r.froude(h).abs();
    let ok = match branch {
        Branch::Subcritical => fr < 1.0,
        Branch::Supercritical => fr > 1.0,
    };
    if q0 != 0.0 && !ok {
        return Err(Error::Scenario(format!("anchor Froude number {fr} does not match {branch:?}")));
    }
    Ok(r)
}

/// Exact vortex `(h, u, v)` at `(x, y, t)` with gravity `g`.
pub fn vortex_state(x: f64, y: f64, t: f64, g: f64) -> (f64, f64, f64) {
    let (h0, u0, v0, gamma) = (1.0, 2.0, 3.0, 0.1);
    let period = 3.0;
    let wrapd = |d: f64| d - period * (d / period).round();
    let dx = wrapd(x - (1.5 + u0 * t));
    let dy = wrapd(y - (1.5 + v0 * t));
    let r2 = dx * dx + dy * dy;
    if r2 >= 1.0 {
        return (h0, u0, v0);
    }
    let s = 1.0 - r2;
    let a = s.atan();
    let e = (-1.0 / (a * a * a)).exp();
    if e == 0.0 {
        return (h0, u0, v0);
    }
    let dh = -gamma * e;
    // dh/dr divided by r
    let dhr = 6.0 * gamma * e / (a.powi(4) * (1.0 + s * s));
    let w = (g * dhr).sqrt();
    (h0 + dh, u0 + w * dy, v0 - w * dx)
}

#[derive(Clone)]
pub enum Initial {
    /// Cell averages of pointwise conserved data.
    Pointwise(Arc<dyn Fn(f64, f64) -> [f64; 3] + Send + Sync>),
    /// Discrete lake: `h = max(eta - b_i, 0)` with velocity `(u, v)` where wet.
    Surface { eta: f64, u: f64, v: f64 },
    /// Discrete moving equilibrium over the stored bed averages.
    Steady(SteadyReference),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReferenceKind {
    None,
    Vortex,
    /// The initial discrete state is itself the exact solution.
    InitialState,
    Steady(SteadyReference),
}

#[derive(Clone)]
pub struct Scenario {
    pub spec: ScenarioSpec,
    pub bathymetry: Arc<dyn Bathymetry>,
    pub initial: Initial,
    pub reference: ReferenceKind,
}

/// Everything needed to run a scenario on a concrete mesh.
pub struct Setup {
    pub grid: GridSpec,
    pub bathy: BathymetryData,
    pub initial: StateField,
}

fn bump(x: f64, y: f64) -> f64 {
    let r2 = x * x + y * y;
    if r2 < 1.0 {
        (1.0 - 1.0 / (1.0 - r2)).exp()
    } else {
        0.0
    }
}

fn bump_grad(x: f64, y: f64) -> [f64; 2] {
    let r2 = x * x + y * y;
    if r2 < 1.0 {
        let s = 1.0 - r2;
        let f = -(1.0 - 1.0 / s).exp() * 2.0 / (s * s);
        [f * x, f * y]
    } else {
        [0.0, 0.0]
    }
}

fn island() -> Arc<dyn Bathymetry> {
    Arc::new(FnBathymetry { b: bump, grad: bump_grad })
}

fn channel_bed(x: f64) -> f64 {
    let s = x - 12.5;
    0.05 * s.sin() * (1.0 - s * s).exp()
}

fn channel_bed_dx(x: f64) -> f64 {
    let s = x - 12.5;
    0.05 * (1.0 - s * s).exp() * (s.cos() - 2.0 * s * s.sin())
}

fn cone(x: f64, y: f64, xc: f64, yc: f64) -> (f64, [f64; 2]) {
    let (r, a) = (0.5, 3.0);
    let d = (x - xc).hypot(y - yc);
    if d < r {
        let gr = if d > 0.0 { [-(a / r) * (x - xc) / d, -(a / r) * (y - yc) / d] } else { [0.0, 0.0] };
        (a / r * (r - d), gr)
    } else {
        (0.0, [0.0, 0.0])
    }
}

const CONES: [(f64, f64); 3] = [(1.0, -1.0), (1.0, 1.0), (2.0, 0.0)];

fn tsunami_bed(x: f64, y: f64) -> f64 {
    let ramp = if x < 0.0 {
        1.0 + 0.2 * x
    } else if x <= 3.0 {
        1.0
    } else {
        1.0 + 0.4 * (x - 3.0)
    };
    ramp + CONES.iter().map(|&(xc, yc)| cone(x, y, xc, yc).0).sum::<f64>()
}

fn tsunami_grad(x: f64, y: f64) -> [f64; 2] {
    let ramp = if x < 0.0 {
        0.2
    } else if x <= 3.0 {
        0.0
    } else {
        0.4
    };
    CONES.iter().fold([ramp, 0.0], |acc, &(xc, yc)| {
        let g = cone(x, y, xc, yc).1;
        [acc[0] + g[0], acc[1] + g[1]]
    })
}

impl Scenario {
    pub fn by_name(name: &str) -> Result<Scenario> {
        use BoundaryCondition::*;
        let periodic = BoundarySpec::periodic();
        let spec = |x: (f64, f64), y: (f64, f64), n: (usize, usize), g: f64, tf: f64, cfl: f64, bc: BoundarySpec, wb| {
            ScenarioSpec { name: name.to_string(), x, y, nx: n.0, ny: n.1, g, t_final: tf, cfl, bc, wb }
        };
        let sc = match name {
            "vortex" => Scenario {
                spec: spec((0.0, 3.0), (0.0, 3.0), (50, 50), 9.81, 0.1, 0.9, periodic, WbMode::Blended),
                bathymetry: Arc::new(crate::mesh::FlatBottom),
                initial: Initial::Pointwise(Arc::new(|x, y| {
                    let (h, u, v) = vortex_state(x, y, 0.0, 9.81);
                    [h, h * u, h * v]
                })),
                reference: ReferenceKind::Vortex,
            },
            "lake-at-rest-wet" => Scenario {
                spec: spec((0.0, 1.0), (0.0, 1.0), (50, 50), 9.81, 0.1, 0.9, periodic, WbMode::Blended),
                bathymetry: Arc::new(FnBathymetry {
                    b: |x: f64, y: f64| 0.1 * (2.0 * PI * x).sin() * (2.0 * PI * y).cos(),
                    grad: |x: f64, y: f64| {
                        [
                            0.2 * PI * (2.0 * PI * x).cos() * (2.0 * PI * y).cos(),
                            -0.2 * PI * (2.0 * PI * x).sin() * (2.0 * PI * y).sin(),
                        ]
                    },
                }),
                initial: Initial::Surface { eta: 1.0, u: 0.0, v: 0.0 },
                reference: ReferenceKind::InitialState,
            },
            "lake-at-rest-wetdry" => Scenario {
                spec: spec((-5.0, 5.0), (-5.0, 5.0), (50, 50), 9.81, 1.0, 0.9, periodic, WbMode::Blended),
                bathymetry: island(),
                initial: Initial::Surface { eta: 0.7, u: 0.0, v: 0.0 },
                reference: ReferenceKind::InitialState,
            },
            "lake-at-rest-perturbation" => Scenario {
                spec: spec((-5.0, 5.0), (-2.0, 2.0), (100, 30), 9.81, 0.375, 0.8, periodic, WbMode::Forced),
                bathymetry: island(),
                initial: Initial::Pointwise(Arc::new(|x, y| {
                    let rho2 = 9.0 * ((x + 2.0).powi(2) + (y - 0.5).powi(2));
                    let mut eta = 1.5;
                    if rho2 < 1.0 {
                        eta += 0.05 * (1.0 - 1.0 / (1.0 - rho2).powi(2)).exp();
                    }
                    [(eta - bump(x, y)).max(0.0), 0.0, 0.0]
                })),
                reference: ReferenceKind::None,
            },
            "channel-subcritical" | "channel-supercritical" => {
                let g = 9.812;
                let sub = name == "channel-subcritical";
                let (bc, tf, steady) = if sub {
                    (
                        BoundarySpec {
                            left: Dirichlet { h: None, q: Some(4.42) },
                            right: Dirichlet { h: Some(2.0), q: None },
                            bottom: Periodic,
                            top: Periodic,
                        },
                        200.0,
                        steady_reference(4.42, (2.0, channel_bed(25.0)), Branch::Subcritical, g)?,
                    )
                } else {
                    (
                        BoundarySpec {
                            left: Dirichlet { h: Some(2.0), q: Some(24.0) },
                            right: Transmissive,
                            bottom: Periodic,
                            top: Periodic,
                        },
                        50.0,
                        steady_reference(24.0, (2.0, channel_bed(0.0)), Branch::Supercritical, g)?,
                    )
                };
                Scenario {
                    spec: spec((0.0, 25.0), (0.0, 1.0), (100, 5), g, tf, 0.9, bc, WbMode::Blended),
                    bathymetry: Arc::new(FnBathymetry {
                        b: |x: f64, _y: f64| channel_bed(x),
                        grad: |x: f64, _y: f64| [channel_bed_dx(x), 0.0],
                    }),
                    initial: Initial::Surface { eta: 2.0, u: 0.0, v: 0.0 },
                    reference: ReferenceKind::Steady(steady),
                }
            }
            "island-flood" => Scenario {
                spec: spec(
                    (-5.0, 5.0),
                    (-2.0, 2.0),
                    (400, 120),
                    9.81,
                    5.0,
                    0.9,
                    BoundarySpec {
                        left: Dirichlet { h: Some(0.7), q: Some(0.7) },
                        right: Transmissive,
                        bottom: Wall,
                        top: Wall,
                    },
                    WbMode::Blended,
                ),
                bathymetry: island(),
                initial: Initial::Surface { eta: 0.7, u: 1.0, v: 0.0 },
                reference: ReferenceKind::None,
            },
            "tsunami-three-obstacles" => Scenario {
                spec: spec(
                    (-5.0, 7.0),
                    (-2.0, 2.0),
                    (960, 320),
                    9.81,
                    3.0,
                    0.8,
                    BoundarySpec {
                        left: Inflow {
                            q_of_t: TimeFn::new(|t| 3.0 * (1.0 + (2.0 * PI * t).cos()) * (-2.0 * t).exp()),
                        },
                        right: Transmissive,
                        bottom: Wall,
                        top: Wall,
                    },
                    WbMode::Blended,
                ),
                bathymetry: Arc::new(FnBathymetry { b: tsunami_bed, grad: tsunami_grad }),
                initial: Initial::Pointwise(Arc::new(|x, y| {
                    if x < -3.5 {
                        let h = 1.5 - tsunami_bed(x, y);
                        [h, 4.0 * h, 0.0]
                    } else {
                        [0.0; 3]
                    }
                })),
                reference: ReferenceKind::None,
            },
            other => {
                return Err(Error::Usage(format!(
                    "unknown scenario `{other}` (expected one of {})",
                    SCENARIOS.join(", ")
                )))
            }
        };
        Ok(sc)
    }

    /// Start the channel flows on their discrete moving equilibrium instead
    /// of the lake at rest.
    pub fn start_steady(&mut self) -> Result<()> {
        match self.reference {
            ReferenceKind::Steady(r) => {
                self.initial = Initial::Steady(r);
                Ok(())
            }
            _ => Err(Error::Usage(format!("scenario `{}` has no steady state", self.spec.name))),
        }
    }

    pub fn with_mesh(mut self, nx: usize, ny: usize) -> Self {
        self.spec.nx = nx;
        self.spec.ny = ny;
        self
    }

    pub fn setup(&self) -> Result<Setup> {
        let s = &self.spec;
        s.bc.validate()?;
        let grid = GridSpec::new(s.nx, s.ny, s.x, s.y)?;
        let rule = gauss_legendre(4)?;
        let mut bathy = sample_bathymetry(self.bathymetry.as_ref(), grid, &rule);
        bathy.wrap_periodic(&s.bc);
        let mut u = StateField::zeros(grid);
        for j in 0..grid.ny as isize {
            for i in 0..grid.nx as isize {
                let b = bathy.avg(i, j);
                let v = match &self.initial {
                    Initial::Pointwise(f) => cell_average(&grid, i, j, |x, y| f(x, y)),
                    Initial::Surface { eta, u, v } => {
                        let h = (eta - b).max(0.0);
                        [h, h * u, h * v]
                    }
                    Initial::Steady(r) => [r.h_at(b)?, r.q0, 0.0],
                };
                u.set(i, j, v);
            }
        }
        Ok(Setup { grid, bathy, initial: u })
    }

    pub fn solver(&self, mode: WbMode, tableau: DecTableau) -> Result<(Solver, Setup)> {
        let setup = self.setup()?;
        let op = SpatialOperator::new(setup.grid, setup.bathy.clone(), self.spec.bc.clone(), self.spec.g, mode)?;
        Ok((Solver::new(op, setup.initial.clone(), tableau), setup))
    }

    /// Names and L1 errors of the solution at time `t` against the
    /// scenario's reference, if it has one.
    pub fn errors(&self, u: &StateField, setup: &Setup, t: f64) -> Option<Vec<(&'static str, f64)>> {
        let grid = setup.grid;
        match self.reference {
            ReferenceKind::None => None,
            ReferenceKind::Vortex => {
                let g = self.spec.g;
                let r = field_from(&grid, |i, j| {
                    cell_average(&grid, i, j, |x, y| {
                        let (h, a, b) = vortex_state(x, y, t, g);
                        [h, h * a, h * b]
                    })
                });
                let e = error_norms(u, &r).ok()?;
                Some(vec![("h", e[0]), ("qx", e[1]), ("qy", e[2])])
            }
            ReferenceKind::InitialState => {
                let e = error_norms(u, &setup.initial).ok()?;
                Some(vec![("h", e[0]), ("qx", e[1]), ("qy", e[2])])
            }
            ReferenceKind::Steady(r) => {
                let disc = field_from(&grid, |i, j| [r.h_at(setup.bathy.avg(i, j)).unwrap_or(f64::NAN), r.q0, 0.0]);
                let exact = field_from(&grid, |i, j| {
                    let b = self.bathymetry.clone();
                    cell_average(&grid, i, j, move |x, y| [r.h_at(b.value(x, y)).unwrap_or(f64::NAN), r.q0, 0.0])
                });
                let ed = error_norms(u, &disc).ok()?;
                let ee = error_norms(u, &exact).ok()?;
                let mut e_head = 0.0;
                for (i, j, v) in u.interior() {
                    let b = setup.bathy.avg(i as isize, j as isize);
                    e_head += (equilibrium_vars(v[0], v[1], b, r.g).head - r.e0).abs();
                }
                e_head *= grid.cell_area();
                Some(vec![("h_discrete_b", ed[0]), ("h_exact_b", ee[0]), ("qx", ed[1]), ("E", e_head)])
            }
        }
    }
}

fn field_from(grid: &GridSpec, f: impl Fn(isize, isize) -> [f64; 3]) -> StateField {
    let mut u = StateField::zeros(*grid);
    for j in 0..grid.ny as isize {
        for i in 0..grid.nx as isize {
            u.set(i, j, f(i, j));
        }
    }
    u
}

/// Tensor Gauss average of pointwise data over cell `(i, j)`.
pub fn cell_average(grid: &GridSpec, i: isize, j: isize, f: impl Fn(f64, f64) -> [f64; 3]) -> [f64; 3] {
    let rule = gauss_legendre(5).expect("five-point rule");
    let (xc, yc) = (grid.xc(i), grid.yc(j));
    let mut s = [0.0; 3];
    for (qy, wy) in rule.nodes.iter().zip(&rule.weights) {
        for (qx, wx) in rule.nodes.iter().zip(&rule.weights) {
            let v = f(xc + qx * grid.dx, yc + qy * grid.dy);
            for k in 0..3 {
                s[k] += wx * wy * v[k];
            }
        }
    }
    s
}

/// Per-variable L1 errors over the interior.
pub fn error_norms(u: &StateField, reference: &StateField) -> Result<[f64; 3]> {
    if u.grid != reference.grid {
        return Err(Error::Usage("error norms need matching grids".into()));
    }
    let mut e = [0.0; 3];
    for ((_, _, a), (_, _, b)) in u.interior().zip(reference.interior()) {
        for k in 0..3 {
            e[k] += (a[k] - b[k]).abs();
        }
    }
    let area = u.grid.cell_area();
    Ok(e.map(|v| v * area))
}

/// Observed orders between consecutive refinements.
pub fn convergence_orders(errors: &[Vec<f64>], sizes: &[usize]) -> Vec<Vec<f64>> {
    errors
        .windows(2)
        .zip(sizes.windows(2))
        .map(|(e, n)| {
            let r = (n[1] as f64 / n[0] as f64).ln();
            e[0].iter().zip(&e[1]).map(|(a, b)| (a / b).ln() / r).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn vortex_values() {
        assert_eq!(vortex_state(0.2, 2.9, 0.0, 9.81), (1.0, 2.0, 3.0));
        let (h, u, v) = vortex_state(1.5, 1.5, 0.0, 9.81);
        assert_relative_eq!(h, 1.0 - 0.1 * (-(4.0 / PI).powi(3)).exp(), epsilon = 1e-15);
        assert!((h - 0.987313).abs() < 1e-5);
        assert_eq!((u, v), (2.0, 3.0));
        let a = vortex_state(1.3, 1.6, 0.0, 9.81);
        let b = vortex_state(1.5, 1.9, 0.1, 9.81);
        assert_relative_eq!(a.0, b.0, epsilon = 1e-14);
        assert_relative_eq!(a.1, b.1, epsilon = 1e-14);
        // tangential perturbation
        let (x, y) = (1.9, 1.2);
        let (_, u, v) = vortex_state(x, y, 0.0, 9.81);
        assert!(((u - 2.0) * (x - 1.5) + (v - 3.0) * (y - 1.5)).abs() < 1e-15);
    }

    #[test]
    fn vortex_derivative_matches_height() {
        let g = 9.81;
        for r in [0.2, 0.5, 0.8] {
            let h = |r: f64| vortex_state(1.5 + r, 1.5, 0.0, g).0;
            let fd = (h(r + 1e-6) - h(r - 1e-6)) / 2e-6;
            let (_, _, v) = vortex_state(1.5 + r, 1.5, 0.0, g);
            // (v - 3)^2 = g r dh/dr
            let dhdr = (v - 3.0).powi(2) / (g * r);
            assert!((fd - dhdr).abs() < 1e-6, "r={r}");
        }
    }

    #[test]
    fn steady_references() {
        let r = steady_reference(4.42, (2.0, 0.0), Branch::Subcritical, 9.812).unwrap();
        assert_relative_eq!(r.e0, 22.06605, epsilon = 1e-12);
        assert_relative_eq!(r.h_at(0.0).unwrap(), 2.0, epsilon = 1e-14);
        let r2 = steady_reference(24.0, (2.0, 0.0), Branch::Supercritical, 9.812).unwrap();
        assert_relative_eq!(r2.e0, 91.624, epsilon = 1e-12);
        for b in [-0.05, 0.0, 0.03, 0.05] {
            for (rr, sub) in [(r, true), (r2, false)] {
                let h = rr.h_at(b).unwrap();
                let e = equilibrium_vars(h, rr.q0, b, rr.g).head;
                assert!((e - rr.e0).abs() <= 1e-12 * rr.e0);
                assert_eq!(rr.froude(h) < 1.0, sub);
            }
        }
        let lake = steady_reference(0.0, (1.0, 0.2), Branch::Subcritical, 9.81).unwrap();
        assert_relative_eq!(lake.h_at(0.5).unwrap(), 0.7, epsilon = 1e-14);
        assert!(steady_reference(24.0, (2.0, 0.0), Branch::Subcritical, 9.812).is_err());
        assert!(r.h_at(1.5).is_err());
    }

    #[test]
    fn catalog_data() {
        for name in SCENARIOS {
            let s = Scenario::by_name(name).unwrap();
            s.spec.bc.validate().unwrap();
        }
        assert!(Scenario::by_name("nope").is_err());
        let t = Scenario::by_name("tsunami-three-obstacles").unwrap();
        assert_relative_eq!(t.bathymetry.value(2.0, 0.0), 4.0);
        if let Initial::Pointwise(f) = &t.initial {
            let v = f(-4.0, 0.3);
            assert_relative_eq!(v[0], 1.5 - t.bathymetry.value(-4.0, 0.3));
            assert_relative_eq!(v[1], 4.0 * v[0]);
        } else {
            panic!("pointwise initial data expected");
        }
        let i = Scenario::by_name("island-flood").unwrap();
        assert_eq!(i.bathymetry.value(0.0, 0.0), 1.0);
        // continuity across the island rim and cone rims
        let e = 1e-9;
        assert!((bump(1.0 - e, 0.0) - bump(1.0 + e, 0.0)).abs() < 1e-12);
        assert!((tsunami_bed(1.5 - e, 0.0) - tsunami_bed(1.5 + e, 0.0)).abs() < 1e-8);
    }

    #[test]
    fn norms_and_orders() {
        let grid = GridSpec::new(2, 2, (0.0, 1.0), (0.0, 1.0)).unwrap();
        let a = StateField::zeros(grid);
        assert_eq!(error_norms(&a, &a).unwrap(), [0.0; 3]);
        let o = convergence_orders(&[vec![1.0], vec![1.0 / 32.0]], &[10, 20]);
        assert_relative_eq!(o[0][0], 5.0, epsilon = 1e-14);
        let other = StateField::zeros(GridSpec::new(3, 2, (0.0, 1.0), (0.0, 1.0)).unwrap());
        assert!(error_norms(&a, &other).is_err());
    }
}
