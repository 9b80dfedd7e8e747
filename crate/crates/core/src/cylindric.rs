//! Cylindric diagrams of parking sorted configurations.
//!
//! Sink chip `s = qn + t` (floor division, `0 <= t < n`) labels the cell in
//! row `t` and column `b_{t+1} + q`. The cell lies right of the red cut when
//! its column is at least `ρ(t) = |{j : a_j <= t - 1}|`, equivalently when
//! `q >= 1 - r_{t+1}`.

use serde::Serialize;

use crate::config::Configuration;
use crate::error::{Result, SandpileError};
use crate::rank::{r_vector, rank_formula, RVector};
use crate::series::{Caps, TruncatedSeries, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CylCell {
    pub s: i64,
    pub column: i64,
    pub row: usize,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundarySets {
    pub s_plus: Vec<i64>,
    pub s_minus: Vec<i64>,
}

/// Precomputed row data of a parking sorted configuration.
pub struct Cylinder {
    b: Vec<i64>,
    r: RVector,
}

impl Cylinder {
    pub fn new(u: &Configuration) -> Result<Self> {
        let r = r_vector(u)?;
        if r.entries.iter().any(|&x| x > 1) {
            return Err(SandpileError::Precondition(format!("needs a parking sorted configuration, got {u}")));
        }
        Ok(Cylinder { b: u.b().to_vec(), r })
    }

    pub fn label(&self, s: i64) -> CylCell {
        let n = self.b.len() as i64;
        let (q, t) = (s.div_euclid(n), s.rem_euclid(n) as usize);
        let column = self.b[t] + q;
        let rho = self.b[t] + 1 - self.r.entries[t];
        let side = if column >= rho { Side::Right } else { Side::Left };
        CylCell { s, column, row: t, side }
    }
}

pub fn label_cell(u: &Configuration, s: i64) -> Result<CylCell> {
    Ok(Cylinder::new(u)?.label(s))
}

/// `-1 +` the number of right-side labels among `0..=sink`.
pub fn rank_via_cylindric(u: &Configuration) -> Result<i64> {
    let cyl = Cylinder::new(u)?;
    let sink = u.sink_value()?;
    Ok(-1 + (0..=sink).filter(|&s| cyl.label(s).side == Side::Right).count() as i64)
}

/// Number of visited right cells: `rank + 1`.
pub fn ypara(u: &Configuration) -> Result<i64> {
    Ok(rank_formula(u)? + 1)
}

/// Number of unvisited left cells: `(m-1)(n-1) + rank - degree`.
pub fn xpara(u: &Configuration) -> Result<i64> {
    let s = u.shape();
    Ok(((s.m - 1) * (s.n - 1)) as i64 + rank_formula(u)? - u.degree()?)
}

/// `(xpara, ypara)` by counting cells row by row: in row `t` the left cells
/// are `q <= -r_{t+1}` and the right cells `q >= 1 - r_{t+1}`.
pub fn para_by_cells(u: &Configuration) -> Result<(i64, i64)> {
    let r = r_vector(u)?;
    let sink = u.sink_value()?;
    let n = u.shape().n as i64;
    let (mut x, mut y) = (0, 0);
    for (t, &rt) in r.entries.iter().enumerate() {
        let top_q = (sink - t as i64).div_euclid(n);
        x += (-rt - top_q).max(0);
        y += (top_q + rt).max(0);
    }
    Ok((x, y))
}

/// Sink values where the label sequence crosses the red cut.
pub fn boundary_sets(u: &Configuration) -> Result<BoundarySets> {
    let cyl = Cylinder::new(u)?;
    let (m, n) = (u.shape().m as i64, u.shape().n as i64);
    let (lo, hi) = (-1, n * m + n);
    if cyl.label(lo).side != Side::Left || cyl.label(hi).side != Side::Right {
        return Err(SandpileError::Internal(format!("boundary scan window [{lo}, {hi}] too small for {u}")));
    }
    let mut sets = BoundarySets { s_plus: Vec::new(), s_minus: Vec::new() };
    let mut prev = cyl.label(lo).side;
    for s in lo..hi {
        let next = cyl.label(s + 1).side;
        match (prev, next) {
            (Side::Left, Side::Right) => sets.s_plus.push(s),
            (Side::Right, Side::Left) => sets.s_minus.push(s),
            _ => {}
        }
        prev = next;
    }
    Ok(sets)
}

fn para_at(u: &Configuration, s: i64) -> Result<(i64, i64)> {
    let full = u.with_sink(Some(s));
    Ok((xpara(&full)?, ypara(&full)?))
}

fn xy_monomial(caps: Caps, x: i64, y: i64) -> Option<[u32; 4]> {
    let (x, y) = (u32::try_from(x).ok()?, u32::try_from(y).ok()?);
    (x <= caps.get(Var::X) && y <= caps.get(Var::Y)).then_some([x, y, 0, 0])
}

/// `F_u = (1-xy)/((1-x)(1-y)) (Σ_{S+} x^xpara y^ypara - Σ_{S-} x^xpara y^ypara)`.
pub fn f_u_series(u: &Configuration, cap_x: u32, cap_y: u32) -> Result<TruncatedSeries> {
    let caps = Caps::new(cap_x, cap_y, 0, 0);
    let sets = boundary_sets(u)?;
    let mut numerator = TruncatedSeries::zero(caps);
    for (list, sign) in [(&sets.s_plus, 1), (&sets.s_minus, -1)] {
        for &s in list {
            let (x, y) = para_at(u, s)?;
            if let Some(e) = xy_monomial(caps, x, y) {
                numerator.accumulate(e, sign);
            }
        }
    }
    let one = TruncatedSeries::one(caps);
    let x = TruncatedSeries::var(caps, Var::X);
    let y = TruncatedSeries::var(caps, Var::Y);
    let kernel_num = one.sub(&x.mul(&y)?)?;
    let kernel_den = one.sub(&x)?.mul(&one.sub(&y)?)?;
    numerator.mul(&kernel_num)?.mul(&kernel_den.geom_inverse()?)
}

/// The sink range whose monomials can fall within the caps.
///
/// Below `-1` only xpara moves (up by one per step) and above `nm + n` only
/// ypara moves, so both ends are found by walking outwards.
pub fn contributing_sinks(u: &Configuration, cap_x: u32, cap_y: u32) -> Result<(i64, i64)> {
    let (m, n) = (u.shape().m as i64, u.shape().n as i64);
    let mut lo = -1i64;
    while para_at(u, lo)?.0 <= cap_x as i64 {
        lo -= 1;
    }
    let mut hi = n * m + n;
    while para_at(u, hi)?.1 <= cap_y as i64 {
        hi += 1;
    }
    Ok((lo + 1, hi - 1))
}

/// `Σ_s x^xpara(u[s]) y^ypara(u[s])` summed directly over sink values.
pub fn f_u_direct(u: &Configuration, cap_x: u32, cap_y: u32) -> Result<TruncatedSeries> {
    let caps = Caps::new(cap_x, cap_y, 0, 0);
    let mut out = TruncatedSeries::zero(caps);
    let (lo, hi) = contributing_sinks(u, cap_x, cap_y)?;
    for s in lo..=hi {
        let (x, y) = para_at(u, s)?;
        if let Some(e) = xy_monomial(caps, x, y) {
            out.accumulate(e, 1);
        }
    }
    Ok(out)
}
