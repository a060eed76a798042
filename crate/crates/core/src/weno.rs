//! Runtime fifth-order WENO reconstruction and the positivity limiter.

use crate::weno_gen::Weno5Table;

/// Offsets are evaluated in this order: left interface, right interface,
/// then the four Gauss nodes ascending.
pub const LEFT: usize = 0;
pub const RIGHT: usize = 1;
pub const GP: [usize; 4] = [2, 3, 4, 5];

#[derive(Debug, Clone)]
pub struct WenoParams {
    pub eps_w: f64,
    pub power: i32,
    pub table: Weno5Table,
}

impl WenoParams {
    pub fn standard() -> Self {
        WenoParams {
            eps_w: 1e-6,
            power: 2,
            table: Weno5Table::standard().expect("built-in WENO5 table"),
        }
    }
}

pub fn smoothness_indicators(q: &[f64; 5]) -> [f64; 3] {
    let [qm2, qm1, q0, qp1, qp2] = *q;
    let c = 13.0 / 12.0;
    let sq = |x: f64| x * x;
    [
        c * sq(q0 - 2.0 * qp1 + qp2) + 0.25 * sq(3.0 * q0 - 4.0 * qp1 + qp2),
        c * sq(qm1 - 2.0 * q0 + qp1) + 0.25 * sq(qm1 - qp1),
        c * sq(qm2 - 2.0 * qm1 + q0) + 0.25 * sq(qm2 - 4.0 * qm1 + 3.0 * q0),
    ]
}

#[inline]
fn inv_weight(beta: f64, params: &WenoParams) -> f64 {
    let s = params.eps_w + beta;
    if params.power == 2 {
        1.0 / (s * s)
    } else {
        s.powi(-params.power)
    }
}

pub fn nonlinear_weights(d: &[f64; 3], beta: &[f64; 3], params: &WenoParams) -> [f64; 3] {
    let a = [
        d[0] * inv_weight(beta[0], params),
        d[1] * inv_weight(beta[1], params),
        d[2] * inv_weight(beta[2], params),
    ];
    let s = a[0] + a[1] + a[2];
    [a[0] / s, a[1] / s, a[2] / s]
}

/// Substencil polynomial values at one tabulated point.
#[inline]
fn substencil_values(q: &[f64; 5], c: &[[f64; 3]; 3]) -> [f64; 3] {
    [
        c[0][0] * q[2] + c[0][1] * q[3] + c[0][2] * q[4],
        c[1][0] * q[1] + c[1][1] * q[2] + c[1][2] * q[3],
        c[2][0] * q[0] + c[2][1] * q[1] + c[2][2] * q[2],
    ]
}

pub fn reconstruct_1d(q: &[f64; 5], point: usize, params: &WenoParams) -> f64 {
    let beta = smoothness_indicators(q);
    let w = nonlinear_weights(&params.table.d[point], &beta, params);
    let p = substencil_values(q, &params.table.c_lo[point]);
    w[0] * p[0] + w[1] * p[1] + w[2] * p[2]
}

/// Reconstruction with the ideal weights, i.e. the full-stencil polynomial.
pub fn reconstruct_linear(q: &[f64; 5], point: usize, table: &Weno5Table) -> f64 {
    let d = table.d[point];
    let p = substencil_values(q, &table.c_lo[point]);
    d[0] * p[0] + d[1] * p[1] + d[2] * p[2]
}

/// All six point values of one scalar stencil, sharing the indicators.
pub fn reconstruct_points(q: &[f64; 5], params: &WenoParams) -> [f64; 6] {
    let beta = smoothness_indicators(q);
    let inv = [
        inv_weight(beta[0], params),
        inv_weight(beta[1], params),
        inv_weight(beta[2], params),
    ];
    let t = &params.table;
    let mut out = [0.0; 6];
    for (p, o) in out.iter_mut().enumerate() {
        let d = t.d[p];
        let a = [d[0] * inv[0], d[1] * inv[1], d[2] * inv[2]];
        let v = substencil_values(q, &t.c_lo[p]);
        *o = (a[0] * v[0] + a[1] * v[1] + a[2] * v[2]) / (a[0] + a[1] + a[2]);
    }
    out
}

/// Sweep a stencil of conserved-variable triples.
#[inline]
pub fn sweep(q: &[[f64; 3]; 5], params: &WenoParams) -> [[f64; 3]; 6] {
    let mut out = [[0.0; 3]; 6];
    for v in 0..3 {
        let s = [q[0][v], q[1][v], q[2][v], q[3][v], q[4][v]];
        let r = reconstruct_points(&s, params);
        for p in 0..6 {
            out[p][v] = r[p];
        }
    }
    out
}

/// Composite two-sweep values of one cell: `comp[a][b]` is the value at
/// x-offset `a` and y-offset `b` (offset order as in the table).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellRecon {
    pub comp: [[[f64; 3]; 6]; 6],
}

impl CellRecon {
    /// Trace on the left (`side = 0`) or right x-face at y-Gauss node `q`.
    #[inline]
    pub fn x_trace(&self, side: usize, q: usize) -> [f64; 3] {
        self.comp[side][GP[q]]
    }

    /// Trace on the bottom (`side = 0`) or top y-face at x-Gauss node `q`.
    #[inline]
    pub fn y_trace(&self, side: usize, q: usize) -> [f64; 3] {
        self.comp[GP[q]][side]
    }

    #[inline]
    pub fn interior(&self, qx: usize, qy: usize) -> [f64; 3] {
        self.comp[GP[qx]][GP[qy]]
    }

    /// Limit the water height over all composite points. The momenta are
    /// pulled towards their averages by the same factor.
    pub fn limit_height(&mut self, avg: [f64; 3]) -> f64 {
        let mut vals = [0.0; 36];
        for a in 0..6 {
            for b in 0..6 {
                vals[a * 6 + b] = self.comp[a][b][0];
            }
        }
        let th = positivity_limit(&mut vals, avg[0]);
        if th < 1.0 {
            for a in 0..6 {
                for b in 0..6 {
                    let p = &mut self.comp[a][b];
                    p[0] = vals[a * 6 + b];
                    p[1] = avg[1] + th * (p[1] - avg[1]);
                    p[2] = avg[2] + th * (p[2] - avg[2]);
                }
            }
        }
        th
    }
}

/// Complete the second sweep from five x-swept rows (bottom to top).
pub fn y_sweep(lines: [&[[f64; 3]; 6]; 5], params: &WenoParams) -> CellRecon {
    let mut comp = [[[0.0; 3]; 6]; 6];
    for a in 0..6 {
        let col = [lines[0][a], lines[1][a], lines[2][a], lines[3][a], lines[4][a]];
        comp[a] = sweep(&col, params);
    }
    CellRecon { comp }
}

/// Reconstruct a cell from its 5x5 window `w[j][i]` (row `j` = y offset
/// `j - 2`, column `i` = x offset `i - 2`). No limiting is applied.
pub fn reconstruct_cell_2d(w: &[[[f64; 3]; 5]; 5], params: &WenoParams) -> CellRecon {
    let rows: Vec<[[f64; 3]; 6]> = w.iter().map(|r| sweep(r, params)).collect();
    y_sweep([&rows[0], &rows[1], &rows[2], &rows[3], &rows[4]], params)
}

/// Scale point values of `h` linearly about the cell average so that none
/// falls below `min(1e-13, h_avg)`. Returns the scaling factor.
pub fn positivity_limit(values: &mut [f64], h_avg: f64) -> f64 {
    if h_avg <= 0.0 {
        values.iter_mut().for_each(|v| *v = 0.0);
        return 0.0;
    }
    let floor = h_avg.min(1e-13);
    let m = values.iter().copied().fold(f64::INFINITY, f64::min);
    if m >= floor {
        return 1.0;
    }
    let th = ((h_avg - floor) / (h_avg - m)).min(1.0);
    for v in values.iter_mut() {
        *v = h_avg + th * (*v - h_avg);
        if *v < floor {
            *v = floor;
        }
    }
    th
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn indicators() {
        assert_eq!(smoothness_indicators(&[3.0; 5]), [0.0; 3]);
        for b in smoothness_indicators(&[0.0, 1.0, 2.0, 3.0, 4.0]) {
            assert_relative_eq!(b, 1.0, epsilon = 1e-15);
        }
        let b = smoothness_indicators(&[4.0, 1.0, 0.0, 1.0, 4.0]);
        assert_relative_eq!(b[1], 13.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn weights() {
        let p = WenoParams::standard();
        let d = [0.3, 0.6, 0.1];
        let w = nonlinear_weights(&d, &[2.0, 2.0, 2.0], &p);
        for (a, b) in w.iter().zip(d) {
            assert_relative_eq!(*a, b, epsilon = 1e-15);
        }
        let w = nonlinear_weights(&d, &[0.0, 0.0, 1e6], &p);
        assert!(w[2] <= 1e-12);
        assert_relative_eq!(w[0] / w[1], 0.5, epsilon = 1e-14);
    }

    #[test]
    fn constants_everywhere() {
        let p = WenoParams::standard();
        let w = [[[1.5, -0.25, 2.0]; 5]; 5];
        let r = reconstruct_cell_2d(&w, &p);
        for a in 0..6 {
            for b in 0..6 {
                for v in 0..3 {
                    assert_relative_eq!(r.comp[a][b][v], w[0][0][v], epsilon = 1e-14);
                }
            }
        }
    }

    #[test]
    fn quartic_exact_with_linear_weights() {
        let p = WenoParams::standard();
        // unit cells centred at -2..2; average of x^4 over [c-1/2, c+1/2]
        let avg = |c: f64| ((c + 0.5).powi(5) - (c - 0.5).powi(5)) / 5.0;
        let q = [avg(-2.0), avg(-1.0), avg(0.0), avg(1.0), avg(2.0)];
        for k in 0..6 {
            let x: f64 = p.table.points[k];
            assert_relative_eq!(reconstruct_linear(&q, k, &p.table), x.powi(4), epsilon = 1e-12);
        }
    }

    #[test]
    fn limiter() {
        let mut v = [1.0, 2.0, 0.5];
        assert_eq!(positivity_limit(&mut v, 1.0), 1.0);
        assert_eq!(v, [1.0, 2.0, 0.5]);
        let mut v = [-1.0, 3.0];
        let th = positivity_limit(&mut v, 1.0);
        assert!((th - 0.5 * (1.0 - 1e-13)).abs() < 1e-12);
        assert!(v[0] >= 1e-13);
        let mut v = [0.3, -0.2];
        positivity_limit(&mut v, 0.0);
        assert_eq!(v, [0.0, 0.0]);
    }
}
