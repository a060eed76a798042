//! Finite-volume right-hand side and the production-destruction ledger of
//! the water height.

use crate::error::{Error, Result};
use crate::mesh::{gauss_legendre, BathymetryData, BoundarySpec, GridSpec, QuadratureRule, StateField};
use crate::weno::{sweep, y_sweep, CellRecon, WenoParams};
use crate::wellbalanced::{
    blend_flux, blend_reconstruction, blend_source, lf_flux, steady_indicator, wb_flux, Direction, WBParams,
};

/// How the blending coefficient is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WbMode {
    /// Pure high-order scheme (`theta = 1`).
    Off,
    /// Indicator-driven blending.
    Blended,
    /// Pure well-balanced scheme (`theta = 0`).
    Forced,
}

/// Previous-step time residual `(U^n - U^{n-1}) / dt` per interior cell.
#[derive(Debug, Clone, Default)]
pub struct IndicatorState {
    pub c_prev: Option<Vec<[f64; 3]>>,
}

/// Quadrature-summed edge data. X-edges are indexed `i + j * (nx + 1)`
/// (edge at `x_{i-1/2}`), y-edges `i + j * nx`.
#[derive(Debug, Clone)]
pub struct EdgeFluxes {
    pub fx: Vec<[f64; 3]>,
    pub fy: Vec<[f64; 3]>,
    /// Interface source density of the normal momentum.
    pub sx: Vec<f64>,
    pub sy: Vec<f64>,
    pub theta_x: Vec<f64>,
    pub theta_y: Vec<f64>,
}

impl EdgeFluxes {
    pub fn max_theta(&self) -> f64 {
        self.theta_x.iter().chain(&self.theta_y).copied().fold(0.0, f64::max)
    }
}

/// `dU/dt` per interior cell, row-major in x.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub data: Vec<[f64; 3]>,
}

/// Edge slots of a cell in the ledger.
pub const WEST: usize = 0;
pub const EAST: usize = 1;
pub const SOUTH: usize = 2;
pub const NORTH: usize = 3;

/// Neighbour of each interior cell across each edge slot; `None` marks a
/// boundary edge whose partner is outside the system.
#[derive(Debug, Clone)]
pub struct PdsTopology {
    pub nbr: Vec<Vec<Option<usize>>>,
}

impl PdsTopology {
    pub fn grid(grid: &GridSpec, bc: &BoundarySpec) -> Self {
        let (nx, ny) = (grid.nx, grid.ny);
        let mut nbr = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                let w = if i > 0 { Some(i - 1 + j * nx) } else { bc.periodic_x().then(|| nx - 1 + j * nx) };
                let e = if i + 1 < nx { Some(i + 1 + j * nx) } else { bc.periodic_x().then_some(j * nx) };
                let s = if j > 0 { Some(i + (j - 1) * nx) } else { bc.periodic_y().then(|| i + (ny - 1) * nx) };
                let n = if j + 1 < ny { Some(i + (j + 1) * nx) } else { bc.periodic_y().then_some(i) };
                nbr.push(vec![w, e, s, n]);
            }
        }
        PdsTopology { nbr }
    }

    /// Every component exchanges with every other one.
    pub fn dense(n: usize) -> Self {
        PdsTopology { nbr: (0..n).map(|a| (0..n).filter(|&b| b != a).map(Some).collect()).collect() }
    }

    pub fn len(&self) -> usize {
        self.nbr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nbr.is_empty()
    }
}

/// Nonnegative production and destruction rates per cell and edge slot,
/// laid out like `PdsTopology::nbr`.
#[derive(Debug, Clone, PartialEq)]
pub struct PdsLedger {
    pub p: Vec<Vec<f64>>,
    pub d: Vec<Vec<f64>>,
}

impl PdsLedger {
    pub fn zeros(topo: &PdsTopology) -> Self {
        PdsLedger {
            p: topo.nbr.iter().map(|n| vec![0.0; n.len()]).collect(),
            d: topo.nbr.iter().map(|n| vec![0.0; n.len()]).collect(),
        }
    }

    /// Net rate `sum p - sum d` of one unknown.
    pub fn net(&self, a: usize) -> f64 {
        self.p[a].iter().sum::<f64>() - self.d[a].iter().sum::<f64>()
    }
}

/// Sign-split the height fluxes of every interior cell.
pub fn extract_pds(ef: &EdgeFluxes, grid: &GridSpec) -> PdsLedger {
    let (nx, ny) = (grid.nx, grid.ny);
    let mut p = Vec::with_capacity(nx * ny);
    let mut d = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let fw = ef.fx[i + j * (nx + 1)][0] / grid.dx;
            let fe = ef.fx[i + 1 + j * (nx + 1)][0] / grid.dx;
            let fs = ef.fy[i + j * nx][0] / grid.dy;
            let fn_ = ef.fy[i + (j + 1) * nx][0] / grid.dy;
            p.push(vec![fw.max(0.0), (-fe).max(0.0), fs.max(0.0), (-fn_).max(0.0)]);
            d.push(vec![(-fw).max(0.0), fe.max(0.0), (-fs).max(0.0), fn_.max(0.0)]);
        }
    }
    PdsLedger { p, d }
}

/// Semi-discrete operator on a fixed grid and bathymetry.
#[derive(Debug, Clone)]
pub struct SpatialOperator {
    pub grid: GridSpec,
    pub bathy: BathymetryData,
    pub bc: BoundarySpec,
    pub g: f64,
    pub weno: WenoParams,
    pub wb: WBParams,
    pub mode: WbMode,
    pub rule: QuadratureRule,
}

/// Offsets of the extended reconstruction region `i, j in -1..=n`.
struct Region {
    nx: usize,
    ny: usize,
}

impl Region {
    #[inline]
    fn cell(&self, i: isize, j: isize) -> usize {
        (i + 1) as usize + (j + 1) as usize * (self.nx + 2)
    }

    /// X-swept lines for `i in -1..=nx`, `j in -3..=ny+2`.
    #[inline]
    fn line(&self, i: isize, j: isize) -> usize {
        (i + 1) as usize + (j + 3) as usize * (self.nx + 2)
    }

    fn n_cells(&self) -> usize {
        (self.nx + 2) * (self.ny + 2)
    }

    fn n_lines(&self) -> usize {
        (self.nx + 2) * (self.ny + 6)
    }
}

impl SpatialOperator {
    pub fn new(grid: GridSpec, bathy: BathymetryData, bc: BoundarySpec, g: f64, mode: WbMode) -> Result<Self> {
        bc.validate()?;
        let rule = gauss_legendre(4)?;
        if bathy.nq != rule.len() {
            return Err(Error::Config("bathymetry must be sampled with the 4-point rule".into()));
        }
        Ok(SpatialOperator { grid, bathy, bc, g, weno: WenoParams::standard(), wb: WBParams::default(), mode, rule })
    }

    fn c_at(&self, c: &[[f64; 3]], i: isize, j: isize) -> [f64; 3] {
        let (nx, ny) = (self.grid.nx as isize, self.grid.ny as isize);
        let i = if self.bc.periodic_x() { i.rem_euclid(nx) } else { i.clamp(0, nx - 1) };
        let j = if self.bc.periodic_y() { j.rem_euclid(ny) } else { j.clamp(0, ny - 1) };
        c[(i + j * nx) as usize]
    }

    fn edge_theta(&self, u: &StateField, ind: &IndicatorState, a: (isize, isize), b: (isize, isize), dir: Direction) -> f64 {
        match self.mode {
            WbMode::Off => 1.0,
            WbMode::Forced => 0.0,
            WbMode::Blended => {
                let (cl, cr) = match &ind.c_prev {
                    Some(c) => (self.c_at(c, a.0, a.1), self.c_at(c, b.0, b.1)),
                    None => ([1.0, 0.0, 0.0], [1.0, 0.0, 0.0]),
                };
                let h = if dir == Direction::X { self.grid.dx } else { self.grid.dy };
                steady_indicator(
                    dir.to_normal(u.get(a.0, a.1)),
                    dir.to_normal(u.get(b.0, b.1)),
                    self.bathy.avg(a.0, a.1),
                    self.bathy.avg(b.0, b.1),
                    cl,
                    cr,
                    h,
                    self.g,
                    &self.wb,
                )
            }
        }
    }

    /// Blending coefficients of all edges.
    pub fn indicators(&self, u: &StateField, ind: &IndicatorState) -> (Vec<f64>, Vec<f64>) {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let mut tx = vec![0.0; (nx + 1) * ny];
        let mut ty = vec![0.0; nx * (ny + 1)];
        for j in 0..ny {
            for i in 0..=nx {
                tx[i + j * (nx + 1)] = if i == nx && self.bc.periodic_x() {
                    tx[j * (nx + 1)]
                } else {
                    let (i, j) = (i as isize, j as isize);
                    self.edge_theta(u, ind, (i - 1, j), (i, j), Direction::X)
                };
            }
        }
        for j in 0..=ny {
            for i in 0..nx {
                ty[i + j * nx] = if j == ny && self.bc.periodic_y() {
                    ty[i]
                } else {
                    let (i, j) = (i as isize, j as isize);
                    self.edge_theta(u, ind, (i, j - 1), (i, j), Direction::Y)
                };
            }
        }
        (tx, ty)
    }

    /// Limited two-sweep reconstructions of the cells that need them.
    fn reconstruct(&self, u: &StateField, tx: &[f64], ty: &[f64]) -> Vec<Option<CellRecon>> {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let reg = Region { nx, ny };
        let mut need = vec![false; reg.n_cells()];
        for j in 0..ny {
            for i in 0..=nx {
                if tx[i + j * (nx + 1)] > 0.0 {
                    let (i, j) = (i as isize, j as isize);
                    need[reg.cell(i - 1, j)] = true;
                    need[reg.cell(i, j)] = true;
                }
            }
        }
        for j in 0..=ny {
            for i in 0..nx {
                if ty[i + j * nx] > 0.0 {
                    let (i, j) = (i as isize, j as isize);
                    need[reg.cell(i, j - 1)] = true;
                    need[reg.cell(i, j)] = true;
                }
            }
        }
        let mut lines: Vec<Option<[[f64; 3]; 6]>> = vec![None; reg.n_lines()];
        let mut out = vec![None; reg.n_cells()];
        for j in -1..=ny as isize {
            for i in -1..=nx as isize {
                if !need[reg.cell(i, j)] {
                    continue;
                }
                for jj in j - 2..=j + 2 {
                    let k = reg.line(i, jj);
                    if lines[k].is_none() {
                        let w = [u.get(i - 2, jj), u.get(i - 1, jj), u.get(i, jj), u.get(i + 1, jj), u.get(i + 2, jj)];
                        lines[k] = Some(sweep(&w, &self.weno));
                    }
                }
                let l = |jj: isize| lines[reg.line(i, jj)].as_ref().expect("line computed");
                let mut rec = y_sweep([l(j - 2), l(j - 1), l(j), l(j + 1), l(j + 2)], &self.weno);
                rec.limit_height(u.get(i, j));
                out[reg.cell(i, j)] = Some(rec);
            }
        }
        out
    }

    /// Flux and interface source density of one edge.
    #[allow(clippy::too_many_arguments)]
    fn edge_flux(
        &self,
        dir: Direction,
        theta: f64,
        avg: ([f64; 3], [f64; 3]),
        bavg: (f64, f64),
        bpt: &[f64],
        traces: Option<([[f64; 3]; 4], [[f64; 3]; 4])>,
        width: f64,
    ) -> ([f64; 3], f64) {
        let g = self.g;
        let (ul, ur) = (dir.to_normal(avg.0), dir.to_normal(avg.1));
        if theta == 0.0 {
            let (f, s) = wb_flux(ul, ur, bavg.0, bavg.1, g, &self.wb);
            return (dir.from_normal(f), s / width);
        }
        let (tl, tr) = traces.expect("traces for a blended edge");
        let mut f = [0.0; 3];
        let mut s = 0.0;
        for q in 0..4 {
            let w = self.rule.weights[q];
            let l = dir.to_normal(blend_reconstruction(avg.0, tl[q], theta));
            let r = dir.to_normal(blend_reconstruction(avg.1, tr[q], theta));
            let lf = lf_flux(l, r, g);
            let (fq, sq) = if theta < 1.0 {
                let bl = (1.0 - theta) * bavg.0 + theta * bpt[q];
                let br = (1.0 - theta) * bavg.1 + theta * bpt[q];
                let (wbf, sdx) = wb_flux(l, r, bl, br, g, &self.wb);
                (blend_flux(theta, wbf, lf), sdx)
            } else {
                (lf, 0.0)
            };
            for k in 0..3 {
                f[k] += w * fq[k];
            }
            s += w * sq;
        }
        (dir.from_normal(f), s / width)
    }

    /// Right-hand side at time `t`; ghosts of `u` must be filled.
    pub fn compute_rhs(&self, u: &StateField, ind: &IndicatorState) -> Result<(Residual, EdgeFluxes)> {
        let grid = self.grid;
        let (nx, ny) = (grid.nx, grid.ny);
        let reg = Region { nx, ny };
        let (tx, ty) = self.indicators(u, ind);
        let rec = self.reconstruct(u, &tx, &ty);
        let b = &self.bathy;

        let mut fx = vec![[0.0; 3]; (nx + 1) * ny];
        let mut sx = vec![0.0; (nx + 1) * ny];
        for j in 0..ny {
            for i in 0..=nx {
                let e = i + j * (nx + 1);
                if i == nx && self.bc.periodic_x() {
                    fx[e] = fx[j * (nx + 1)];
                    sx[e] = sx[j * (nx + 1)];
                    continue;
                }
                let (i, j) = (i as isize, j as isize);
                let traces = (tx[e] > 0.0).then(|| {
                    let l = rec[reg.cell(i - 1, j)].as_ref().expect("left recon");
                    let r = rec[reg.cell(i, j)].as_ref().expect("right recon");
                    (
                        std::array::from_fn(|q| l.x_trace(1, q)),
                        std::array::from_fn(|q| r.x_trace(0, q)),
                    )
                });
                let bpt = &b.edge_x[e * 4..e * 4 + 4];
                let (f, s) = self.edge_flux(
                    Direction::X,
                    tx[e],
                    (u.get(i - 1, j), u.get(i, j)),
                    (b.avg(i - 1, j), b.avg(i, j)),
                    bpt,
                    traces,
                    grid.dx,
                );
                fx[e] = f;
                sx[e] = s;
            }
        }

        let mut fy = vec![[0.0; 3]; nx * (ny + 1)];
        let mut sy = vec![0.0; nx * (ny + 1)];
        for j in 0..=ny {
            for i in 0..nx {
                let e = i + j * nx;
                if j == ny && self.bc.periodic_y() {
                    fy[e] = fy[i];
                    sy[e] = sy[i];
                    continue;
                }
                let (i, j) = (i as isize, j as isize);
                let traces = (ty[e] > 0.0).then(|| {
                    let l = rec[reg.cell(i, j - 1)].as_ref().expect("lower recon");
                    let r = rec[reg.cell(i, j)].as_ref().expect("upper recon");
                    (
                        std::array::from_fn(|q| l.y_trace(1, q)),
                        std::array::from_fn(|q| r.y_trace(0, q)),
                    )
                });
                let bpt = &b.edge_y[e * 4..e * 4 + 4];
                let (f, s) = self.edge_flux(
                    Direction::Y,
                    ty[e],
                    (u.get(i, j - 1), u.get(i, j)),
                    (b.avg(i, j - 1), b.avg(i, j)),
                    bpt,
                    traces,
                    grid.dy,
                );
                fy[e] = f;
                sy[e] = s;
            }
        }

        let mut res = Vec::with_capacity(nx * ny);
        let w = &self.rule.weights;
        for j in 0..ny {
            for i in 0..nx {
                let (ew, ee) = (i + j * (nx + 1), i + 1 + j * (nx + 1));
                let (es, en) = (i + j * nx, i + (j + 1) * nx);
                let mut r = [0.0; 3];
                for k in 0..3 {
                    r[k] = -(fx[ee][k] - fx[ew][k]) / grid.dx - (fy[en][k] - fy[es][k]) / grid.dy;
                }
                let (ax, ay) = (tx[ew] + tx[ee], ty[es] + ty[en]);
                let mut sho = [0.0; 2];
                if ax > 0.0 || ay > 0.0 {
                    let c = rec[reg.cell(i as isize, j as isize)].as_ref().expect("cell recon");
                    let base = (i + j * nx) * 16;
                    for qy in 0..4 {
                        for qx in 0..4 {
                            let h = c.interior(qx, qy)[0];
                            let gb = b.interior_grad[base + qy * 4 + qx];
                            let wq = w[qx] * w[qy] * self.g * h;
                            sho[0] -= wq * gb[0];
                            sho[1] -= wq * gb[1];
                        }
                    }
                }
                let src_x = blend_source(tx[ew], tx[ee], [0.0, sho[0], 0.0], [0.0, sx[ew], 0.0], [0.0, sx[ee], 0.0]);
                let src_y = blend_source(ty[es], ty[en], [0.0, 0.0, sho[1]], [0.0, 0.0, sy[es]], [0.0, 0.0, sy[en]]);
                r[1] += src_x[1];
                r[2] += src_y[2];
                if !r.iter().all(|v| v.is_finite()) {
                    return Err(Error::NonFinite { i: i as isize, j: j as isize, stage: "residual".into() });
                }
                res.push(r);
            }
        }
        Ok((Residual { data: res }, EdgeFluxes { fx, fy, sx, sy, theta_x: tx, theta_y: ty }))
    }
}
