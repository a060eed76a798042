//! Cartesian grid, ghosted field storage, boundary conditions and quadrature rules.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Ghost layers needed by the five-cell WENO stencil.
pub const GHOST: usize = 3;

/// Uniform Cartesian grid over `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub dx: f64,
    pub dy: f64,
    pub ghost: usize,
}

impl GridSpec {
    pub fn new(nx: usize, ny: usize, x: (f64, f64), y: (f64, f64)) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::Config("cell counts must be positive".into()));
        }
        if !(x.1 > x.0) || !(y.1 > y.0) {
            return Err(Error::Config("domain bounds must be increasing".into()));
        }
        Ok(GridSpec {
            nx,
            ny,
            x0: x.0,
            x1: x.1,
            y0: y.0,
            y1: y.1,
            dx: (x.1 - x.0) / nx as f64,
            dy: (y.1 - y.0) / ny as f64,
            ghost: GHOST,
        })
    }

    /// Row length including ghosts.
    #[inline]
    pub fn sx(&self) -> usize {
        self.nx + 2 * self.ghost
    }

    #[inline]
    pub fn sy(&self) -> usize {
        self.ny + 2 * self.ghost
    }

    /// Storage index of cell `(i, j)`; negative indices address ghosts.
    #[inline]
    pub fn idx(&self, i: isize, j: isize) -> usize {
        let g = self.ghost as isize;
        ((i + g) + (j + g) * self.sx() as isize) as usize
    }

    #[inline]
    pub fn xc(&self, i: isize) -> f64 {
        self.x0 + (i as f64 + 0.5) * self.dx
    }

    #[inline]
    pub fn yc(&self, j: isize) -> f64 {
        self.y0 + (j as f64 + 0.5) * self.dy
    }

    pub fn cell_area(&self) -> f64 {
        self.dx * self.dy
    }

    pub fn interior_len(&self) -> usize {
        self.nx * self.ny
    }
}

/// Cell averages of `(h, qx, qy)` with ghost layers.
#[derive(Debug, Clone, PartialEq)]
pub struct StateField {
    pub grid: GridSpec,
    pub data: Vec<[f64; 3]>,
}

impl StateField {
    pub fn zeros(grid: GridSpec) -> Self {
        StateField { grid, data: vec![[0.0; 3]; grid.sx() * grid.sy()] }
    }

    #[inline]
    pub fn get(&self, i: isize, j: isize) -> [f64; 3] {
        self.data[self.grid.idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: isize, j: isize, u: [f64; 3]) {
        let k = self.grid.idx(i, j);
        self.data[k] = u;
    }

    /// Iterator over interior cells as `(i, j, u)`.
    pub fn interior(&self) -> impl Iterator<Item = (usize, usize, [f64; 3])> + '_ {
        let g = self.grid;
        (0..g.ny).flat_map(move |j| (0..g.nx).map(move |i| (i, j, self.get(i as isize, j as isize))))
    }

    /// Water volume over the interior.
    pub fn mass(&self) -> f64 {
        self.interior().map(|(_, _, u)| u[0]).sum::<f64>() * self.grid.cell_area()
    }

    pub fn min_h(&self) -> f64 {
        self.interior().map(|(_, _, u)| u[0]).fold(f64::INFINITY, f64::min)
    }

    pub fn all_finite(&self) -> bool {
        self.interior().all(|(_, _, u)| u.iter().all(|v| v.is_finite()))
    }
}

/// Analytic bed elevation.
pub trait Bathymetry: Send + Sync {
    fn value(&self, x: f64, y: f64) -> f64;
    fn gradient(&self, x: f64, y: f64) -> [f64; 2];
}

/// Bathymetry built from two closures.
pub struct FnBathymetry<B, G> {
    pub b: B,
    pub grad: G,
}

impl<B, G> Bathymetry for FnBathymetry<B, G>
where
    B: Fn(f64, f64) -> f64 + Send + Sync,
    G: Fn(f64, f64) -> [f64; 2] + Send + Sync,
{
    fn value(&self, x: f64, y: f64) -> f64 {
        (self.b)(x, y)
    }
    fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        (self.grad)(x, y)
    }
}

pub struct FlatBottom;

impl Bathymetry for FlatBottom {
    fn value(&self, _: f64, _: f64) -> f64 {
        0.0
    }
    fn gradient(&self, _: f64, _: f64) -> [f64; 2] {
        [0.0, 0.0]
    }
}

/// Sampled bathymetry.
///
/// Edge arrays hold `nq` point values per edge. X-edges are indexed
/// `i + j * (nx + 1)` for the edge at `x_{i-1/2}`, y-edges `i + j * nx`
/// for the edge at `y_{j-1/2}`. Interior arrays hold `nq * nq` values per
/// interior cell with the x node running fastest.
#[derive(Debug, Clone)]
pub struct BathymetryData {
    pub grid: GridSpec,
    pub nq: usize,
    pub cell_avg: Vec<f64>,
    pub edge_x: Vec<f64>,
    pub edge_y: Vec<f64>,
    pub interior: Vec<f64>,
    pub interior_grad: Vec<[f64; 2]>,
}

impl BathymetryData {
    #[inline]
    pub fn avg(&self, i: isize, j: isize) -> f64 {
        self.cell_avg[self.grid.idx(i, j)]
    }

    #[inline]
    pub fn edge_x_at(&self, i: usize, j: usize, q: usize) -> f64 {
        self.edge_x[(i + j * (self.grid.nx + 1)) * self.nq + q]
    }

    #[inline]
    pub fn edge_y_at(&self, i: usize, j: usize, q: usize) -> f64 {
        self.edge_y[(i + j * self.grid.nx) * self.nq + q]
    }

    /// Replace ghost cell averages by wrapped interior copies along periodic axes.
    pub fn wrap_periodic(&mut self, bc: &BoundarySpec) {
        let g = self.grid;
        let gh = g.ghost as isize;
        let (nx, ny) = (g.nx as isize, g.ny as isize);
        if bc.periodic_x() {
            for j in -gh..ny + gh {
                for k in 1..=gh {
                    self.cell_avg[g.idx(-k, j)] = self.cell_avg[g.idx(wrap(-k, nx), wrap(j, ny))];
                    self.cell_avg[g.idx(nx - 1 + k, j)] =
                        self.cell_avg[g.idx(wrap(nx - 1 + k, nx), wrap(j, ny))];
                }
            }
        }
        if bc.periodic_y() {
            for i in -gh..nx + gh {
                for k in 1..=gh {
                    let src_i = if bc.periodic_x() { wrap(i, nx) } else { i };
                    self.cell_avg[g.idx(i, -k)] = self.cell_avg[g.idx(src_i, wrap(-k, ny))];
                    self.cell_avg[g.idx(i, ny - 1 + k)] =
                        self.cell_avg[g.idx(src_i, wrap(ny - 1 + k, ny))];
                }
            }
        }
    }
}

#[inline]
fn wrap(i: isize, n: isize) -> isize {
    i.rem_euclid(n)
}

/// Sample `b` on the grid: tensor-rule cell averages (ghosts included) and
/// exact point values at every edge and interior quadrature node.
pub fn sample_bathymetry(b: &dyn Bathymetry, grid: GridSpec, rule: &QuadratureRule) -> BathymetryData {
    let nq = rule.len();
    let gh = grid.ghost as isize;
    let (nx, ny) = (grid.nx, grid.ny);
    let mut cell_avg = vec![0.0; grid.sx() * grid.sy()];
    for j in -gh..ny as isize + gh {
        for i in -gh..nx as isize + gh {
            let (xc, yc) = (grid.xc(i), grid.yc(j));
            let mut s = 0.0;
            for (qy, wy) in rule.nodes.iter().zip(&rule.weights) {
                for (qx, wx) in rule.nodes.iter().zip(&rule.weights) {
                    s += wx * wy * b.value(xc + qx * grid.dx, yc + qy * grid.dy);
                }
            }
            cell_avg[grid.idx(i, j)] = s;
        }
    }
    let mut edge_x = Vec::with_capacity((nx + 1) * ny * nq);
    for j in 0..ny {
        for i in 0..=nx {
            let x = grid.x0 + i as f64 * grid.dx;
            for q in &rule.nodes {
                edge_x.push(b.value(x, grid.yc(j as isize) + q * grid.dy));
            }
        }
    }
    let mut edge_y = Vec::with_capacity(nx * (ny + 1) * nq);
    for j in 0..=ny {
        for i in 0..nx {
            let y = grid.y0 + j as f64 * grid.dy;
            for q in &rule.nodes {
                edge_y.push(b.value(grid.xc(i as isize) + q * grid.dx, y));
            }
        }
    }
    let mut interior = Vec::with_capacity(nx * ny * nq * nq);
    let mut interior_grad = Vec::with_capacity(nx * ny * nq * nq);
    for j in 0..ny {
        for i in 0..nx {
            let (xc, yc) = (grid.xc(i as isize), grid.yc(j as isize));
            for qy in &rule.nodes {
                for qx in &rule.nodes {
                    let (x, y) = (xc + qx * grid.dx, yc + qy * grid.dy);
                    interior.push(b.value(x, y));
                    interior_grad.push(b.gradient(x, y));
                }
            }
        }
    }
    BathymetryData { grid, nq, cell_avg, edge_x, edge_y, interior, interior_grad }
}

/// Normalized Gauss rule on `[-1/2, 1/2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Legendre polynomial `P_n(x)` and its derivative.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    let dp = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss-Legendre rule with `q` points, nodes sorted ascending.
pub fn gauss_legendre(q: usize) -> Result<QuadratureRule> {
    if !(1..=8).contains(&q) {
        return Err(Error::Config(format!("Gauss-Legendre point count {q} outside 1..=8")));
    }
    let mut nodes = vec![0.0; q];
    let mut weights = vec![0.0; q];
    for k in 0..q {
        let mut x = -(std::f64::consts::PI * (k as f64 + 0.75) / (q as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(q, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(q, x);
        nodes[k] = 0.5 * x;
        // weights on [-1,1] sum to 2; halve for the normalized convention
        weights[k] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    if q % 2 == 1 {
        nodes[q / 2] = 0.0;
    }
    for k in 0..q / 2 {
        let m = 0.5 * (nodes[q - 1 - k] - nodes[k]);
        nodes[k] = -m;
        nodes[q - 1 - k] = m;
        let w = 0.5 * (weights[k] + weights[q - 1 - k]);
        weights[k] = w;
        weights[q - 1 - k] = w;
    }
    Ok(QuadratureRule { nodes, weights })
}

/// Gauss-Lobatto nodes on `[0, 1]`, endpoints included.
pub fn gauss_lobatto(n: usize) -> Result<Vec<f64>> {
    if !(2..=8).contains(&n) {
        return Err(Error::Config(format!("Gauss-Lobatto point count {n} outside 2..=8")));
    }
    // interior nodes are the roots of P'_{n-1}
    let m = n - 1;
    let mut nodes = vec![0.0; n];
    nodes[n - 1] = 1.0;
    for k in 1..m {
        let mut x = -(std::f64::consts::PI * k as f64 / m as f64).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(m, x);
            // P'' from the Legendre ODE
            let d2p = (2.0 * x * dp - (m * (m + 1)) as f64 * p) / (1.0 - x * x);
            let dx = dp / d2p;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[k] = 0.5 * (x + 1.0);
    }
    for k in 1..n / 2 {
        let s = 0.5 * (nodes[k] + 1.0 - nodes[n - 1 - k]);
        nodes[k] = s;
        nodes[n - 1 - k] = 1.0 - s;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.5;
    }
    Ok(nodes)
}

/// Scalar function of time used for inflow data.
#[derive(Clone)]
pub struct TimeFn(pub Arc<dyn Fn(f64) -> f64 + Send + Sync>);

impl TimeFn {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        TimeFn(Arc::new(f))
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.0)(t)
    }
}

impl fmt::Debug for TimeFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("TimeFn(..)")
    }
}

/// Ghost treatment on one side. `q` values are the discharge along the
/// side's normal axis (qx on left/right, qy on bottom/top).
#[derive(Debug, Clone)]
pub enum BoundaryCondition {
    Periodic,
    Transmissive,
    Wall,
    Dirichlet { h: Option<f64>, q: Option<f64> },
    Inflow { q_of_t: TimeFn },
}

impl BoundaryCondition {
    fn is_periodic(&self) -> bool {
        matches!(self, BoundaryCondition::Periodic)
    }
}

#[derive(Debug, Clone)]
pub struct BoundarySpec {
    pub left: BoundaryCondition,
    pub right: BoundaryCondition,
    pub bottom: BoundaryCondition,
    pub top: BoundaryCondition,
}

impl BoundarySpec {
    pub fn periodic() -> Self {
        use BoundaryCondition::Periodic;
        BoundarySpec { left: Periodic, right: Periodic, bottom: Periodic, top: Periodic }
    }

    pub fn validate(&self) -> Result<()> {
        if self.left.is_periodic() != self.right.is_periodic()
            || self.bottom.is_periodic() != self.top.is_periodic()
        {
            return Err(Error::Config("periodic boundaries must be paired".into()));
        }
        Ok(())
    }

    pub fn periodic_x(&self) -> bool {
        self.left.is_periodic()
    }

    pub fn periodic_y(&self) -> bool {
        self.bottom.is_periodic()
    }
}

/// Apply one boundary condition to a ghost value. `near` is the adjacent
/// interior cell, `mirror` the cell mirrored across the boundary and `n`
/// the index of the normal momentum component.
fn ghost_value(bc: &BoundaryCondition, near: [f64; 3], mirror: [f64; 3], n: usize, t: f64) -> [f64; 3] {
    match bc {
        BoundaryCondition::Periodic => unreachable!("periodic ghosts are wrapped"),
        BoundaryCondition::Transmissive => near,
        BoundaryCondition::Wall => {
            let mut u = mirror;
            u[n] = -u[n];
            u
        }
        BoundaryCondition::Dirichlet { h, q } => {
            let mut u = near;
            if let Some(h) = h {
                u[0] = *h;
            }
            if let Some(q) = q {
                u[n] = *q;
            }
            u
        }
        BoundaryCondition::Inflow { q_of_t } => {
            let mut u = near;
            u[n] = q_of_t.eval(t);
            u
        }
    }
}

/// Fill all ghost layers at time `t`. X-sides are filled over interior
/// rows first, then y-sides over the extended rows so corners are defined.
pub fn fill_ghosts(field: &mut StateField, spec: &BoundarySpec, t: f64) {
    let g = field.grid;
    let gh = g.ghost as isize;
    let (nx, ny) = (g.nx as isize, g.ny as isize);
    for j in 0..ny {
        for k in 1..=gh {
            let (l, r) = if spec.periodic_x() {
                (field.get(wrap(-k, nx), j), field.get(wrap(nx - 1 + k, nx), j))
            } else {
                let l = ghost_value(&spec.left, field.get(0, j), field.get(k - 1, j), 1, t);
                let r = ghost_value(&spec.right, field.get(nx - 1, j), field.get(nx - k, j), 1, t);
                (l, r)
            };
            field.set(-k, j, l);
            field.set(nx - 1 + k, j, r);
        }
    }
    for i in -gh..nx + gh {
        for k in 1..=gh {
            let (b, tp) = if spec.periodic_y() {
                (field.get(i, wrap(-k, ny)), field.get(i, wrap(ny - 1 + k, ny)))
            } else {
                let b = ghost_value(&spec.bottom, field.get(i, 0), field.get(i, k - 1), 2, t);
                let tp = ghost_value(&spec.top, field.get(i, ny - 1), field.get(i, ny - k), 2, t);
                (b, tp)
            };
            field.set(i, -k, b);
            field.set(i, ny - 1 + k, tp);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn legendre_four_points() {
        let r = gauss_legendre(4).unwrap();
        let a = 0.5 * (3.0 / 7.0 + 2.0 / 7.0 * (6.0f64 / 5.0).sqrt()).sqrt();
        let b = 0.5 * (3.0 / 7.0 - 2.0 / 7.0 * (6.0f64 / 5.0).sqrt()).sqrt();
        let want = [-a, -b, b, a];
        for (n, w) in r.nodes.iter().zip(want) {
            assert_relative_eq!(*n, w, epsilon = 1e-15);
        }
        assert!((r.nodes[3] - 0.430568).abs() < 1e-6);
        assert!((r.nodes[2] - 0.169991).abs() < 1e-6);
    }

    #[test]
    fn legendre_exactness() {
        for q in 1..=8 {
            let r = gauss_legendre(q).unwrap();
            assert_relative_eq!(r.weights.iter().sum::<f64>(), 1.0, epsilon = 1e-14);
            for deg in 0..2 * q {
                let num: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 0.5f64.powi(deg as i32) / (deg as f64 + 1.0) };
                assert!((num - exact).abs() <= 1e-14 * exact.abs() + 1e-16, "q={q} deg={deg}");
            }
        }
        assert!(gauss_legendre(0).is_err());
        assert!(gauss_legendre(9).is_err());
    }

    #[test]
    fn lobatto_nodes() {
        assert_eq!(gauss_lobatto(2).unwrap(), vec![0.0, 1.0]);
        assert_eq!(gauss_lobatto(3).unwrap(), vec![0.0, 0.5, 1.0]);
        let n4 = gauss_lobatto(4).unwrap();
        let s = 1.0 / 5.0f64.sqrt();
        assert_relative_eq!(n4[1], 0.5 * (1.0 - s), epsilon = 1e-15);
        assert_relative_eq!(n4[2], 0.5 * (1.0 + s), epsilon = 1e-15);
        for n in 2..=8 {
            let v = gauss_lobatto(n).unwrap();
            for k in 0..n {
                assert_relative_eq!(v[k] + v[n - 1 - k], 1.0, epsilon = 1e-15);
            }
        }
        assert!(gauss_lobatto(1).is_err());
    }

    fn numbered(grid: GridSpec) -> StateField {
        let mut f = StateField::zeros(grid);
        for j in 0..grid.ny as isize {
            for i in 0..grid.nx as isize {
                f.set(i, j, [1.0 + i as f64 + 10.0 * j as f64, i as f64 - 2.0, j as f64 + 0.5]);
            }
        }
        f
    }

    #[test]
    fn periodic_and_wall_ghosts() {
        let grid = GridSpec::new(4, 3, (0.0, 4.0), (0.0, 3.0)).unwrap();
        let mut f = numbered(grid);
        fill_ghosts(&mut f, &BoundarySpec::periodic(), 0.0);
        assert_eq!(f.get(-1, 1), f.get(3, 1));
        assert_eq!(f.get(4, 2), f.get(0, 2));
        assert_eq!(f.get(-2, -1), f.get(2, 2));

        let spec = BoundarySpec {
            left: BoundaryCondition::Transmissive,
            right: BoundaryCondition::Transmissive,
            bottom: BoundaryCondition::Wall,
            top: BoundaryCondition::Wall,
        };
        let mut f = numbered(grid);
        let mass = f.mass();
        fill_ghosts(&mut f, &spec, 0.0);
        let u = f.get(2, 0);
        assert_eq!(f.get(2, -1), [u[0], u[1], -u[2]]);
        let u = f.get(2, 1);
        assert_eq!(f.get(2, -2), [u[0], u[1], -u[2]]);
        assert_eq!(f.mass(), mass);
        let once = f.clone();
        fill_ghosts(&mut f, &spec, 0.0);
        assert_eq!(once, f);
    }

    #[test]
    fn inflow_and_dirichlet() {
        let grid = GridSpec::new(4, 2, (0.0, 4.0), (0.0, 2.0)).unwrap();
        let q = TimeFn::new(|t: f64| 3.0 * (1.0 + (2.0 * std::f64::consts::PI * t).cos()) * (-2.0 * t).exp());
        let spec = BoundarySpec {
            left: BoundaryCondition::Inflow { q_of_t: q },
            right: BoundaryCondition::Dirichlet { h: Some(2.0), q: None },
            bottom: BoundaryCondition::Periodic,
            top: BoundaryCondition::Periodic,
        };
        spec.validate().unwrap();
        let mut f = numbered(grid);
        fill_ghosts(&mut f, &spec, 0.0);
        for k in 1..=3 {
            assert_eq!(f.get(-k, 1)[1], 6.0);
            assert_eq!(f.get(-k, 1)[0], f.get(0, 1)[0]);
            assert_eq!(f.get(3 + k, 0), [2.0, f.get(3, 0)[1], f.get(3, 0)[2]]);
        }
        let bad = BoundarySpec { left: BoundaryCondition::Wall, ..BoundarySpec::periodic() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn bathymetry_sampling() {
        let grid = GridSpec::new(1, 1, (0.0, 1.0), (0.0, 1.0)).unwrap();
        let rule = gauss_legendre(4).unwrap();
        let b = FnBathymetry { b: |x: f64, _y: f64| x, grad: |_, _| [1.0, 0.0] };
        let d = sample_bathymetry(&b, grid, &rule);
        assert_relative_eq!(d.avg(0, 0), 0.5, epsilon = 1e-15);
        assert_eq!(d.edge_x_at(1, 0, 2), 1.0);
        let flat = sample_bathymetry(&FlatBottom, grid, &rule);
        assert!(flat.cell_avg.iter().chain(&flat.edge_x).all(|v| *v == 0.0));
    }
}
