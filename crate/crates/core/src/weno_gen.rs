//! Generation of WENO reconstruction coefficients and ideal linear weights.
//!
//! Coefficients come from differentiating the polynomial that interpolates
//! the primitive of the data at the stencil interfaces. Rational offsets are
//! handled in exact arithmetic; irrational ones in double precision.

use std::fmt::Write as _;
use std::ops::{Add, Div, Mul, Sub};

use num_rational::Ratio;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::mesh::gauss_legendre;

/// Cells `i+k1 ..= i+k2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StencilSpec {
    pub k1: i64,
    pub k2: i64,
}

impl StencilSpec {
    pub fn new(k1: i64, k2: i64) -> Self {
        StencilSpec { k1, k2 }
    }

    pub fn width(&self) -> usize {
        (self.k2 - self.k1 + 1) as usize
    }
}

/// Minimal field arithmetic shared by `f64` and exact rationals.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
    fn from_frac(n: i64, d: i64) -> Self;
    fn to_f64(self) -> f64;
}

impl Scalar for f64 {
    fn from_frac(n: i64, d: i64) -> Self {
        n as f64 / d as f64
    }
    fn to_f64(self) -> f64 {
        self
    }
}

impl Scalar for Ratio<i128> {
    fn from_frac(n: i64, d: i64) -> Self {
        Ratio::new(n as i128, d as i128)
    }
    fn to_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

/// Evaluation offset relative to the cell centre, in cell widths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Offset {
    Rational(i64, i64),
    Real(f64),
}

impl Offset {
    pub fn value(&self) -> f64 {
        match *self {
            Offset::Rational(n, d) => n as f64 / d as f64,
            Offset::Real(x) => x,
        }
    }
}

/// Coefficients `c_l` with `v(xi) = sum_l c_l u_{i+l}`, `l = k1..=k2`.
pub fn point_coeffs<T: Scalar>(stencil: StencilSpec, xi: T) -> Result<Vec<T>> {
    if stencil.k1 > stencil.k2 {
        return Err(Error::Config(format!("degenerate stencil ({}, {})", stencil.k1, stencil.k2)));
    }
    let n = stencil.width() + 1;
    let nodes: Vec<T> = (0..n).map(|m| T::from_frac(2 * (stencil.k1 + m as i64) - 1, 2)).collect();
    let zero = T::from_frac(0, 1);
    let one = T::from_frac(1, 1);
    // derivative of each Lagrange basis polynomial at xi
    let dphi: Vec<T> = (0..n)
        .map(|m| {
            let mut s = zero;
            for k in (0..n).filter(|&k| k != m) {
                let mut term = one / (nodes[m] - nodes[k]);
                for l in (0..n).filter(|&l| l != m && l != k) {
                    term = term * (xi - nodes[l]) / (nodes[m] - nodes[l]);
                }
                s = s + term;
            }
            s
        })
        .collect();
    // the primitive at node m sums the cells left of it
    Ok((0..n - 1)
        .map(|l| (l + 1..n).fold(zero, |acc, m| acc + dphi[m]))
        .collect())
}

fn coeffs_f64(stencil: StencilSpec, xi: Offset) -> Result<Vec<f64>> {
    match xi {
        Offset::Rational(n, d) => Ok(point_coeffs(stencil, Ratio::<i128>::from_frac(n, d))?
            .into_iter()
            .map(Scalar::to_f64)
            .collect()),
        Offset::Real(x) => point_coeffs(stencil, x),
    }
}

/// Solve the overdetermined system `sum_j d_j c_lo[j] = c_ho` on the full
/// stencil by Householder QR and check that every equation holds.
pub fn ideal_weights(c_ho: &[f64], c_lo: &[Vec<f64>]) -> Result<Vec<f64>> {
    let r = c_lo.len();
    let rows = c_ho.len();
    if rows != 2 * r - 1 {
        return Err(Error::Consistency(format!("expected {} high-order coefficients, got {rows}", 2 * r - 1)));
    }
    // substencil j covers offsets -j ..= r-1-j, i.e. rows r-1-j ..
    let mut a = vec![vec![0.0; r]; rows];
    for (j, cj) in c_lo.iter().enumerate() {
        for (k, v) in cj.iter().enumerate() {
            a[r - 1 - j + k][j] = *v;
        }
    }
    let d = least_squares(a.clone(), c_ho.to_vec());
    for (row, rhs) in a.iter().zip(c_ho) {
        let res = row.iter().zip(&d).map(|(x, y)| x * y).sum::<f64>() - rhs;
        if res.abs() > 1e-12 {
            return Err(Error::Consistency(format!("ideal-weight equation residual {res:e}")));
        }
    }
    let sum: f64 = d.iter().sum();
    if (sum - 1.0).abs() > 1e-13 {
        return Err(Error::Consistency(format!("ideal weights sum to {sum}")));
    }
    Ok(d)
}

fn least_squares(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let (m, n) = (a.len(), a[0].len());
    for k in 0..n {
        let norm = (k..m).map(|i| a[i][k] * a[i][k]).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..m).map(|i| a[i][k]).collect();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        if vv == 0.0 {
            continue;
        }
        for c in k..n {
            let s = 2.0 * (k..m).map(|i| v[i - k] * a[i][c]).sum::<f64>() / vv;
            for i in k..m {
                a[i][c] -= s * v[i - k];
            }
        }
        let s = 2.0 * (k..m).map(|i| v[i - k] * b[i]).sum::<f64>() / vv;
        for i in k..m {
            b[i] -= s * v[i - k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|c| a[k][c] * x[c]).sum();
        x[k] = (b[k] - s) / a[k][k];
    }
    x
}

/// Coefficients and ideal weights for a list of evaluation points.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconTable {
    pub r: usize,
    pub points: Vec<f64>,
    pub c_ho: Vec<Vec<f64>>,
    pub c_lo: Vec<Vec<Vec<f64>>>,
    pub d: Vec<Vec<f64>>,
}

pub fn generate_table(r: usize, points: &[Offset]) -> Result<ReconTable> {
    if r < 1 {
        return Err(Error::Config("stencil radius must be positive".into()));
    }
    if points.is_empty() {
        return Err(Error::Config("no evaluation points".into()));
    }
    let r_i = r as i64;
    let full = StencilSpec::new(-(r_i - 1), r_i - 1);
    let mut table = ReconTable { r, points: vec![], c_ho: vec![], c_lo: vec![], d: vec![] };
    for p in points {
        let c_ho = coeffs_f64(full, *p)?;
        let c_lo = (0..r_i)
            .map(|j| coeffs_f64(StencilSpec::new(-j, r_i - 1 - j), *p))
            .collect::<Result<Vec<_>>>()?;
        let d = ideal_weights(&c_ho, &c_lo)?;
        table.points.push(p.value());
        table.c_ho.push(c_ho);
        table.c_lo.push(c_lo);
        table.d.push(d);
    }
    Ok(table)
}

/// Parse a comma-separated point list: `interfaces`, `gaussN`, `p/q` or a decimal.
pub fn parse_points(spec: &str) -> Result<Vec<Offset>> {
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if item == "interfaces" {
            out.push(Offset::Rational(-1, 2));
            out.push(Offset::Rational(1, 2));
        } else if let Some(n) = item.strip_prefix("gauss") {
            let n: usize = n.parse().map_err(|_| Error::Usage(format!("bad point set `{item}`")))?;
            out.extend(gauss_legendre(n)?.nodes.into_iter().map(Offset::Real));
        } else if let Some((n, d)) = item.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| Error::Usage(format!("bad offset `{item}`")))?;
            let d: i64 = d.trim().parse().map_err(|_| Error::Usage(format!("bad offset `{item}`")))?;
            if d == 0 {
                return Err(Error::Usage(format!("bad offset `{item}`")));
            }
            out.push(Offset::Rational(n, d));
        } else {
            let x: f64 = item.parse().map_err(|_| Error::Usage(format!("bad offset `{item}`")))?;
            out.push(Offset::Real(x));
        }
    }
    if out.is_empty() {
        return Err(Error::Usage("empty point list".into()));
    }
    if let Some(p) = out.iter().find(|p| p.value().abs() > 0.5 + 1e-12) {
        return Err(Error::Usage(format!("offset {} lies outside the cell", p.value())));
    }
    Ok(out)
}

/// One line per point: offset, high-order coefficients, substencil
/// coefficients (substencil-major), ideal weights.
pub fn format_table(t: &ReconTable) -> String {
    let mut s = String::new();
    for k in 0..t.points.len() {
        let vals = std::iter::once(t.points[k])
            .chain(t.c_ho[k].iter().copied())
            .chain(t.c_lo[k].iter().flatten().copied())
            .chain(t.d[k].iter().copied());
        let line: Vec<String> = vals.map(|v| format!("{v:.16e}")).collect();
        let _ = writeln!(s, "{}", line.join(" "));
    }
    s
}

/// Runtime table for fifth-order reconstruction at the points
/// `[-1/2, +1/2, g1, g2, g3, g4]` (Gauss nodes ascending).
#[derive(Debug, Clone, PartialEq)]
pub struct Weno5Table {
    pub points: [f64; 6],
    /// `c_lo[point][substencil][cell]`, cells ordered left to right.
    pub c_lo: [[[f64; 3]; 3]; 6],
    pub d: [[f64; 3]; 6],
}

impl Weno5Table {
    pub fn standard() -> Result<Self> {
        let mut pts = vec![Offset::Rational(-1, 2), Offset::Rational(1, 2)];
        pts.extend(gauss_legendre(4)?.nodes.into_iter().map(Offset::Real));
        let t = generate_table(3, &pts)?;
        let mut out = Weno5Table { points: [0.0; 6], c_lo: [[[0.0; 3]; 3]; 6], d: [[0.0; 3]; 6] };
        for p in 0..6 {
            out.points[p] = t.points[p];
            for j in 0..3 {
                out.d[p][j] = t.d[p][j];
                for k in 0..3 {
                    out.c_lo[p][j][k] = t.c_lo[p][j][k];
                }
            }
        }
        Ok(out)
    }
}
