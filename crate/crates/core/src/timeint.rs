//! Deferred-correction time stepping: explicit DeC for the discharges and the
//! modified-Patankar DeC for the water height.

use crate::error::{Error, Result};
use crate::mesh::{fill_ghosts, gauss_legendre, gauss_lobatto, StateField};
use crate::semidiscretization::{
    extract_pds, IndicatorState, PdsLedger, PdsTopology, Residual, SpatialOperator,
};
use crate::wellbalanced::velocity;

/// Subtimenodes and integration weights of one DeC step.
#[derive(Debug, Clone, PartialEq)]
pub struct DecTableau {
    pub m: usize,
    pub p: usize,
    pub nodes: Vec<f64>,
    /// `theta[m][l]`: weight of node `l` for the integral over `[0, nodes[m]]`.
    pub theta: Vec<Vec<f64>>,
}

fn lagrange(nodes: &[f64], l: usize, s: f64) -> f64 {
    nodes
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != l)
        .map(|(_, &x)| (s - x) / (nodes[l] - x))
        .product()
}

pub fn build_dec_tableau(m: usize, p: usize) -> Result<DecTableau> {
    if m < 1 || p < 1 {
        return Err(Error::Config("DeC needs M >= 1 and P >= 1".into()));
    }
    let nodes = gauss_lobatto(m + 1)?;
    let rule = gauss_legendre(8)?;
    let theta = nodes
        .iter()
        .map(|&tm| {
            (0..=m)
                .map(|l| {
                    rule.nodes
                        .iter()
                        .zip(&rule.weights)
                        .map(|(x, w)| w * tm * lagrange(&nodes, l, tm * (x + 0.5)))
                        .sum()
                })
                .collect()
        })
        .collect();
    Ok(DecTableau { m, p, nodes, theta })
}

/// Index whose value enters the Patankar ratio.
#[inline]
pub fn gamma_switch(alpha: usize, beta: usize, theta: f64) -> usize {
    if theta >= 0.0 {
        alpha
    } else {
        beta
    }
}

/// Smooth replacement of `n / d` for `d >= 0`.
#[inline]
pub fn mollified_ratio(n: f64, d: f64) -> f64 {
    if d < 1e-8 {
        0.0
    } else {
        2.0 * d * n / (d * d + (d * d).max(1e-8))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatankarParams {
    pub moll_threshold: f64,
    pub jacobi_rtol: f64,
    pub jacobi_maxiter: usize,
}

impl Default for PatankarParams {
    fn default() -> Self {
        PatankarParams { moll_threshold: 1e-8, jacobi_rtol: 1e-13, jacobi_maxiter: 1000 }
    }
}

/// Square operator stored as a diagonal plus row-compressed off-diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    pub diag: Vec<f64>,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<f64>,
}

impl SparseOperator {
    pub fn identity(n: usize) -> Self {
        SparseOperator { diag: vec![1.0; n], row_ptr: vec![0; n + 1], cols: vec![], vals: vec![] }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.len())
            .map(|a| {
                let off: f64 = (self.row_ptr[a]..self.row_ptr[a + 1]).map(|k| self.vals[k] * x[self.cols[k]]).sum();
                self.diag[a] * x[a] + off
            })
            .collect()
    }

    /// `diag - sum |off|` per column.
    pub fn column_excess(&self) -> Vec<f64> {
        let mut e = self.diag.clone();
        for a in 0..self.len() {
            for k in self.row_ptr[a]..self.row_ptr[a + 1] {
                e[self.cols[k]] -= self.vals[k].abs();
            }
        }
        e
    }
}

/// Linear system of one modified-Patankar subtimenode update. Exchanges
/// with the outside enter `rhs` when they add mass and the diagonal
/// (through `ext_diag`) when they remove it.
#[derive(Debug, Clone)]
pub struct MpdecSystem {
    pub op: SparseOperator,
    pub ext_rhs: Vec<f64>,
    pub ext_diag: Vec<f64>,
}

impl MpdecSystem {
    /// Net external gain for a solution `x`.
    pub fn external_exchange(&self, x: &[f64]) -> f64 {
        self.ext_rhs.iter().sum::<f64>() - self.ext_diag.iter().zip(x).map(|(d, v)| d * v).sum::<f64>()
    }
}

/// Assemble the mPDeC operator of subtimenode `m`. `ledgers[l]` are the
/// rates at node `l` from the previous iteration; `c_old` the previous
/// iterate at node `m`.
pub fn mpdec_matrix(
    topo: &PdsTopology,
    ledgers: &[PdsLedger],
    c_old: &[f64],
    tab: &DecTableau,
    m: usize,
    dt: f64,
) -> MpdecSystem {
    let n = topo.len();
    let inv: Vec<f64> = c_old.iter().map(|&c| mollified_ratio(1.0, c)).collect();
    let mut diag = vec![1.0; n];
    let mut row_ptr = Vec::with_capacity(n + 1);
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    let mut ext_rhs = vec![0.0; n];
    let mut ext_diag = vec![0.0; n];
    row_ptr.push(0);
    for a in 0..n {
        let start = cols.len();
        let mut ext = 0.0;
        for (k, nb) in topo.nbr[a].iter().enumerate() {
            // a: destruction-like weight on the diagonal, b: production-like weight on the column
            let (mut wa, mut wb) = (0.0, 0.0);
            for (l, th) in tab.theta[m].iter().enumerate() {
                let (p, d) = (ledgers[l].p[a][k], ledgers[l].d[a][k]);
                if gamma_switch(0, 1, *th) == 0 {
                    wa += th * d;
                    wb += th * p;
                } else {
                    wa -= th * p;
                    wb -= th * d;
                }
            }
            match nb {
                None => {
                    for (l, th) in tab.theta[m].iter().enumerate() {
                        ext += th * (ledgers[l].p[a][k] - ledgers[l].d[a][k]);
                    }
                }
                Some(b) if *b == a => {
                    diag[a] += dt * (wa - wb) * inv[a];
                }
                Some(b) => {
                    diag[a] += dt * wa * inv[a];
                    let v = -dt * wb * inv[*b];
                    if v != 0.0 {
                        if let Some(pos) = cols[start..].iter().position(|c| c == b) {
                            vals[start + pos] += v;
                        } else {
                            cols.push(*b);
                            vals.push(v);
                        }
                    }
                }
            }
        }
        let ext = dt * ext;
        if ext >= 0.0 {
            ext_rhs[a] = ext;
        } else {
            ext_diag[a] = -ext * inv[a];
            diag[a] += ext_diag[a];
        }
        row_ptr.push(cols.len());
    }
    MpdecSystem { op: SparseOperator { diag, row_ptr, cols, vals }, ext_rhs, ext_diag }
}

/// Jacobi iteration from the warm start `x`. Returns the solution and the
/// number of sweeps.
pub fn jacobi_solve(op: &SparseOperator, rhs: &[f64], mut x: Vec<f64>, params: &PatankarParams) -> Result<(Vec<f64>, usize)> {
    let norm: f64 = rhs.iter().map(|v| v.abs()).sum();
    if norm == 0.0 {
        return Ok((vec![0.0; rhs.len()], 0));
    }
    let mut next = vec![0.0; x.len()];
    let mut res = f64::INFINITY;
    for it in 1..=params.jacobi_maxiter {
        res = 0.0;
        // size of M x, for the round-off floor of the residual
        let mut scale = 0.0;
        for a in 0..op.len() {
            let mut off = 0.0;
            for k in op.row_ptr[a]..op.row_ptr[a + 1] {
                let v = op.vals[k] * x[op.cols[k]];
                off += v;
                scale += v.abs();
            }
            scale += (op.diag[a] * x[a]).abs();
            next[a] = (rhs[a] - off) / op.diag[a];
            res += (op.diag[a] * (next[a] - x[a])).abs();
        }
        std::mem::swap(&mut x, &mut next);
        if res <= params.jacobi_rtol * norm || res <= 32.0 * f64::EPSILON * scale {
            return Ok((x, it));
        }
    }
    Err(Error::JacobiDiverged { iterations: params.jacobi_maxiter, residual: res / norm })
}

/// Jacobi from the warm start, falling back to a polished direct solve
/// when Jacobi runs out of sweeps.
pub fn patankar_solve(op: &SparseOperator, rhs: &[f64], x0: Vec<f64>, params: &PatankarParams) -> Result<(Vec<f64>, usize)> {
    match jacobi_solve(op, rhs, x0, params) {
        Err(Error::JacobiDiverged { iterations, .. }) => {
            let x = direct_solve(op, rhs)?;
            let (x, it) = jacobi_solve(op, rhs, x, params)?;
            Ok((x, it + iterations))
        }
        other => other,
    }
}

/// Sparse LU solve of the Patankar system. Used when Jacobi stalls on
/// nearly dry cells, where the diagonal dwarfs the mass it multiplies.
pub fn direct_solve(op: &SparseOperator, rhs: &[f64]) -> Result<Vec<f64>> {
    use faer::linalg::solvers::Solve;
    use faer::sparse::{SparseColMat, Triplet};
    let n = op.len();
    let mut entries = Vec::with_capacity(n + op.vals.len());
    for a in 0..n {
        entries.push(Triplet::new(a, a, op.diag[a]));
        for k in op.row_ptr[a]..op.row_ptr[a + 1] {
            entries.push(Triplet::new(a, op.cols[k], op.vals[k]));
        }
    }
    let fail = |what: &str| Error::Consistency(format!("sparse LU of the Patankar system: {what}"));
    let m = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &entries).map_err(|e| fail(&format!("{e:?}")))?;
    let lu = m.sp_lu().map_err(|e| fail(&format!("{e:?}")))?;
    let b = faer::Col::<f64>::from_fn(n, |a| rhs[a]);
    let x = lu.solve(&b);
    // an M-matrix solve is nonnegative up to round-off
    Ok((0..n).map(|a| x[a].max(0.0)).collect())
}

/// Largest stable step, clipped to land on `t_final`.
pub fn compute_dt(u: &StateField, g: f64, cfl: f64, t: f64, t_final: f64) -> f64 {
    let grid = u.grid;
    let mut rate: f64 = 0.0;
    for (_, _, v) in u.interior() {
        let c = (g * v[0].max(0.0)).sqrt();
        let lx = velocity(v[0], v[1]).abs() + c;
        let ly = velocity(v[0], v[2]).abs() + c;
        rate = rate.max(lx / grid.dx + ly / grid.dy);
    }
    let rest = t_final - t;
    if rate == 0.0 {
        return rest;
    }
    let dt = cfl / rate;
    if dt >= rest {
        rest
    } else {
        dt
    }
}

/// Bound on the flow speed of thin layers: a dam-break front speed from the
/// deepest cell plus the fastest velocity among cells deeper than a tenth of it.
pub fn velocity_cap(u: &StateField, g: f64) -> f64 {
    let h_max = u.interior().fold(0.0f64, |m, (_, _, v)| m.max(v[0]));
    let u_max = u
        .interior()
        .filter(|(_, _, v)| v[0] >= 0.1 * h_max)
        .fold(0.0f64, |m, (_, _, v)| m.max(velocity(v[0], v[1]).hypot(velocity(v[0], v[2]))));
    2.0 * (g * h_max).sqrt() + u_max
}

/// Diagnostics of one completed step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub t: f64,
    pub dt: f64,
    pub min_h: f64,
    pub mass: f64,
    /// Volume that entered through non-periodic boundaries during the step.
    pub boundary_inflow: f64,
    pub max_theta: f64,
    pub jacobi_sweeps: usize,
}

/// Time integrator state for the shallow water system.
#[derive(Debug, Clone)]
pub struct Solver {
    pub op: SpatialOperator,
    pub tableau: DecTableau,
    pub patankar: PatankarParams,
    pub topology: PdsTopology,
    pub state: StateField,
    pub t: f64,
    pub steps: usize,
    pub indicators: IndicatorState,
}

impl Solver {
    pub fn new(op: SpatialOperator, state: StateField, tableau: DecTableau) -> Self {
        let topology = PdsTopology::grid(&op.grid, &op.bc);
        let mut state = state;
        fill_ghosts(&mut state, &op.bc, 0.0);
        Solver {
            op,
            tableau,
            patankar: PatankarParams::default(),
            topology,
            state,
            t: 0.0,
            steps: 0,
            indicators: IndicatorState::default(),
        }
    }

    fn evaluate(&self, stage: &mut StateField, t: f64) -> Result<(Residual, PdsLedger, f64)> {
        fill_ghosts(stage, &self.op.bc, t);
        let (r, ef) = self.op.compute_rhs(stage, &self.indicators)?;
        let led = extract_pds(&ef, &self.op.grid);
        Ok((r, led, ef.max_theta()))
    }

    /// Advance by `dt`.
    pub fn advance(&mut self, dt: f64) -> Result<StepReport> {
        let grid = self.op.grid;
        let tab = &self.tableau;
        let (mm, pp) = (tab.m, tab.p);
        let n = grid.interior_len();
        let nxs = grid.nx;
        let at = |a: usize| ((a % nxs) as isize, (a / nxs) as isize);

        let u0 = self.state.clone();
        let c0: Vec<f64> = (0..n).map(|a| u0.get(at(a).0, at(a).1)[0]).collect();
        let mut stages = vec![u0.clone(); mm + 1];
        let mut evals: Vec<Option<(Residual, PdsLedger)>> = vec![None; mm + 1];
        let mut max_theta: f64 = 0.0;
        let mut sweeps = 0;
        let mut inflow = 0.0;
        let cap = velocity_cap(&u0, self.op.g);

        let (r0, l0, th0) = self.evaluate(&mut stages[0], self.t)?;
        max_theta = max_theta.max(th0);
        evals[0] = Some((r0, l0));

        for p in 1..=pp {
            if p == 1 {
                for l in 1..=mm {
                    evals[l] = evals[0].clone();
                }
            } else {
                for l in 1..=mm {
                    let tl = self.t + tab.nodes[l] * dt;
                    let (r, led, th) = self.evaluate(&mut stages[l], tl)?;
                    max_theta = max_theta.max(th);
                    evals[l] = Some((r, led));
                }
            }
            let ledgers: Vec<PdsLedger> = evals.iter().map(|e| e.as_ref().expect("evaluated").1.clone()).collect();
            let mut next = stages.clone();
            for m in 1..=mm {
                let c_old: Vec<f64> = (0..n).map(|a| stages[m].get(at(a).0, at(a).1)[0]).collect();
                let sys = mpdec_matrix(&self.topology, &ledgers, &c_old, tab, m, dt);
                let rhs: Vec<f64> = c0.iter().zip(&sys.ext_rhs).map(|(c, e)| c + e).collect();
                let (h, it) = patankar_solve(&sys.op, &rhs, c_old, &self.patankar)?;
                sweeps += it;
                if m == mm && p == pp {
                    inflow = sys.external_exchange(&h) * grid.cell_area();
                }
                for a in 0..n {
                    let (i, j) = at(a);
                    let base = u0.get(i, j);
                    let mut q = [base[1], base[2]];
                    for (l, th) in tab.theta[m].iter().enumerate() {
                        let r = &evals[l].as_ref().expect("evaluated").0.data[a];
                        q[0] += dt * th * r[1];
                        q[1] += dt * th * r[2];
                    }
                    // momentum of near-dry cells follows the desingularized velocity
                    let (mut ux, mut uy) = (velocity(h[a], q[0]), velocity(h[a], q[1]));
                    let speed = ux.hypot(uy);
                    if speed > cap {
                        ux *= cap / speed;
                        uy *= cap / speed;
                    }
                    let v = [h[a], h[a] * ux, h[a] * uy];
                    if !v.iter().all(|x| x.is_finite()) {
                        return Err(Error::NonFinite { i, j, stage: format!("update of subnode {m}, iteration {p}") });
                    }
                    next[m].set(i, j, v);
                }
            }
            stages = next;
        }

        let new = stages.pop().expect("final stage");
        let c: Vec<[f64; 3]> = (0..n)
            .map(|a| {
                let (i, j) = at(a);
                let (x, y) = (new.get(i, j), u0.get(i, j));
                [(x[0] - y[0]) / dt, (x[1] - y[1]) / dt, (x[2] - y[2]) / dt]
            })
            .collect();
        self.indicators.c_prev = Some(c);
        self.state = new;
        self.t += dt;
        self.steps += 1;
        fill_ghosts(&mut self.state, &self.op.bc, self.t);
        Ok(StepReport {
            t: self.t,
            dt,
            min_h: self.state.min_h(),
            mass: self.state.mass(),
            boundary_inflow: inflow,
            max_theta,
            jacobi_sweeps: sweeps,
        })
    }

    pub fn stable_dt(&self, cfl: f64, t_final: f64) -> f64 {
        compute_dt(&self.state, self.op.g, cfl, self.t, t_final)
    }
}

/// A production-destruction ODE system `c' = P(c) - D(c)`.
pub trait ProductionDestruction {
    fn topology(&self) -> &PdsTopology;
    fn rates(&self, t: f64, c: &[f64]) -> PdsLedger;
}

/// One modified-Patankar DeC step of an ODE system.
pub fn mpdec_ode_step<S: ProductionDestruction>(
    sys: &S,
    tab: &DecTableau,
    t: f64,
    c0: &[f64],
    dt: f64,
    params: &PatankarParams,
) -> Result<Vec<f64>> {
    let mm = tab.m;
    let mut stages = vec![c0.to_vec(); mm + 1];
    for _ in 1..=tab.p {
        let ledgers: Vec<PdsLedger> = (0..=mm).map(|l| sys.rates(t + tab.nodes[l] * dt, &stages[l])).collect();
        let mut next = stages.clone();
        for m in 1..=mm {
            let s = mpdec_matrix(sys.topology(), &ledgers, &stages[m], tab, m, dt);
            let rhs: Vec<f64> = c0.iter().zip(&s.ext_rhs).map(|(c, e)| c + e).collect();
            next[m] = patankar_solve(&s.op, &rhs, stages[m].clone(), params)?.0;
        }
        stages = next;
    }
    Ok(stages.pop().expect("final stage"))
}

/// One explicit DeC step of `y' = f(t, y)`.
pub fn dec_ode_step(f: impl Fn(f64, &[f64]) -> Vec<f64>, tab: &DecTableau, t: f64, y0: &[f64], dt: f64) -> Vec<f64> {
    let mm = tab.m;
    let mut stages = vec![y0.to_vec(); mm + 1];
    for _ in 1..=tab.p {
        let rates: Vec<Vec<f64>> = (0..=mm).map(|l| f(t + tab.nodes[l] * dt, &stages[l])).collect();
        for m in 1..=mm {
            for k in 0..y0.len() {
                stages[m][k] = y0[k] + dt * (0..=mm).map(|l| tab.theta[m][l] * rates[l][k]).sum::<f64>();
            }
        }
    }
    stages.pop().expect("final stage")
}
