//! Parking sorted families, the `(degree, rank)` and `(xpara, ypara)`
//! tables, parallelogram polyomino series and the generating function checks.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serialize;

use crate::config::{Configuration, GraphShape};
use crate::cylindric::{boundary_sets, f_u_direct, xpara, ypara};
use crate::error::{Result, SandpileError};
use crate::rank::{is_parking_sorted, rank_formula};
use crate::series::{Caps, Exponents, TruncatedSeries, Var};

/// Largest number of candidate tuple pairs `enumerate_parking_sorted` will scan.
pub const ENUMERATION_LIMIT: u128 = 100_000_000;

#[derive(Debug, Clone)]
pub struct ParkingFamily {
    pub shape: GraphShape,
    pub configs: Vec<Configuration>,
}

impl ParkingFamily {
    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }
}

/// Number of nondecreasing tuples of length `len` over `0..values`.
fn multisets(values: u128, len: u128) -> u128 {
    // C(values + len - 1, len), saturating
    let mut acc: u128 = 1;
    for i in 0..len {
        acc = acc.saturating_mul(values + i) / (i + 1);
    }
    acc
}

/// Calls `visit` on every nondecreasing tuple of length `len` with entries in `lo..=hi`.
fn for_each_sorted_tuple(len: usize, lo: i64, hi: i64, visit: &mut dyn FnMut(&[i64]) -> Result<()>) -> Result<()> {
    let mut t = vec![lo; len];
    loop {
        visit(&t)?;
        let Some(i) = (0..len).rev().find(|&i| t[i] < hi) else { return Ok(()) };
        let v = t[i] + 1;
        for x in &mut t[i..] {
            *x = v;
        }
    }
}

pub fn candidate_count(shape: GraphShape) -> u128 {
    let (m, n) = (shape.m as u128, shape.n as u128);
    multisets(m, n - 1).saturating_mul(multisets(n, m - 1))
}

/// All parking sorted partial configurations on `K_{m,n}`.
pub fn enumerate_parking_sorted(shape: GraphShape) -> Result<ParkingFamily> {
    let candidates = candidate_count(shape);
    if candidates > ENUMERATION_LIMIT {
        return Err(SandpileError::GuardExceeded(format!(
            "K_{{{},{}}} has {candidates} sorted tuple pairs, limit is {ENUMERATION_LIMIT}",
            shape.m, shape.n
        )));
    }
    let (m, n) = (shape.m as i64, shape.n as i64);
    let mut configs = Vec::new();
    for_each_sorted_tuple(shape.n - 1, 0, m - 1, &mut |tail| {
        let mut b = Vec::with_capacity(shape.n);
        b.push(0);
        b.extend_from_slice(tail);
        for_each_sorted_tuple(shape.m - 1, 0, n - 1, &mut |a| {
            let u = Configuration::new(shape, a.to_vec(), None, b.clone())?;
            if is_parking_sorted(&u)? {
                configs.push(u);
            }
            Ok(())
        })
    })?;
    Ok(ParkingFamily { shape, configs })
}

fn non_sink_total(u: &Configuration) -> i64 {
    u.a().iter().chain(u.b()).sum()
}

/// Counts of `(degree, rank)` over parking sorted configurations whose degree
/// lies in `dmin..=dmax`.
pub fn k_tilde_table(shape: GraphShape, dmin: i64, dmax: i64) -> Result<BTreeMap<(i64, i64), u64>> {
    let family = enumerate_parking_sorted(shape)?;
    let mut table = BTreeMap::new();
    for u in &family.configs {
        let base = non_sink_total(u);
        for d in dmin..=dmax {
            let full = u.with_sink(Some(d - base));
            *table.entry((d, rank_formula(&full)?)).or_insert(0) += 1;
        }
    }
    Ok(table)
}

/// `K_{m,n}(x, y)` truncated to `x <= cap_x`, `y <= cap_y`.
pub fn k_xy_table(shape: GraphShape, cap_x: u32, cap_y: u32) -> Result<TruncatedSeries> {
    let family = enumerate_parking_sorted(shape)?;
    let mut out = TruncatedSeries::zero(Caps::new(cap_x, cap_y, 0, 0));
    for u in &family.configs {
        out = out.add(&f_u_direct(u, cap_x, cap_y)?)?;
    }
    Ok(out)
}

/// `(xpara, ypara)` of the cell that `(degree, rank)` maps to on `shape`.
pub fn xy_of_degree_rank(shape: GraphShape, degree: i64, rank: i64) -> (i64, i64) {
    (((shape.m - 1) * (shape.n - 1)) as i64 + rank - degree, rank + 1)
}

/// Grid dump with the highest rank row first and one column per degree.
pub fn k_tilde_csv(table: &BTreeMap<(i64, i64), u64>) -> String {
    let (dmin, dmax) = bounds(table.keys().map(|k| k.0));
    let (rmin, rmax) = bounds(table.keys().map(|k| k.1));
    let header: Vec<String> = (dmin..=dmax).map(|d| d.to_string()).collect();
    let mut out = format!("rank\\degree,{}\n", header.join(","));
    for r in (rmin..=rmax).rev() {
        let cells: Vec<String> =
            (dmin..=dmax).map(|d| table.get(&(d, r)).map(|c| c.to_string()).unwrap_or_default()).collect();
        writeln!(out, "{r},{}", cells.join(",")).expect("write to string");
    }
    out
}

/// Grid dump of an `x, y` series with the highest `y` row first.
pub fn k_xy_csv(series: &TruncatedSeries) -> String {
    let caps = series.caps();
    let (cx, cy) = (caps.get(Var::X), caps.get(Var::Y));
    let header: Vec<String> = (0..=cx).map(|x| x.to_string()).collect();
    let mut out = format!("ypara\\xpara,{}\n", header.join(","));
    for y in (0..=cy).rev() {
        let cells: Vec<String> = (0..=cx)
            .map(|x| {
                let c = series.coefficient([x, y, 0, 0]).expect("within caps");
                if c == BigInt::from(0) { String::new() } else { c.to_string() }
            })
            .collect();
        writeln!(out, "{y},{}", cells.join(",")).expect("write to string");
    }
    out
}

fn bounds(it: impl Iterator<Item = i64>) -> (i64, i64) {
    it.fold(None, |acc: Option<(i64, i64)>, v| Some(acc.map_or((v, v), |(lo, hi)| (lo.min(v), hi.max(v)))))
        .unwrap_or((0, -1))
}

/// How polyomino area and height combine into the exponent of the area variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AreaExponent {
    /// `q^area`, the plain `P(q; w, h)`.
    Area,
    /// `q^(area + height)`, that is `P(q; w, qh)`.
    AreaPlusHeight,
    /// `q^(area - height)`, that is `P(q; w, h/q)`.
    AreaMinusHeight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolyominoWeights {
    pub area_var: Var,
    pub exponent: AreaExponent,
}

impl PolyominoWeights {
    pub fn plain(area_var: Var) -> Self {
        PolyominoWeights { area_var, exponent: AreaExponent::Area }
    }

    pub fn twisted(area_var: Var, exponent: AreaExponent) -> Self {
        PolyominoWeights { area_var, exponent }
    }
}

/// Counts keyed by `(area, width, height)` with `width <= max_width`,
/// `height <= max_height`, `area <= max_area`.
///
/// Columns are processed left to right; the state is the row interval
/// `[lo, hi)` of the current column and the area so far. The next column
/// `[lo', hi')` needs `lo <= lo' < hi <= hi'`.
pub fn polyomino_counts(max_width: u32, max_height: u32, max_area: u32) -> BTreeMap<(u32, u32, u32), BigInt> {
    let (hmax, amax) = (max_height as usize, max_area as usize);
    let mut counts = BTreeMap::new();
    if max_width == 0 || max_height == 0 {
        return counts;
    }
    // layer[lo][hi][area]
    let mut layer = vec![vec![vec![BigInt::from(0); amax + 1]; hmax + 1]; hmax + 1];
    for hi in 1..=hmax.min(amax) {
        layer[0][hi][hi] = BigInt::from(1);
    }
    for width in 1..=max_width {
        for row in &layer {
            for (hi, areas) in row.iter().enumerate() {
                for (area, c) in areas.iter().enumerate() {
                    if c != &BigInt::from(0) {
                        *counts.entry((area as u32, width, hi as u32)).or_insert_with(|| BigInt::from(0)) += c;
                    }
                }
            }
        }
        if width == max_width {
            break;
        }
        let mut next = vec![vec![vec![BigInt::from(0); amax + 1]; hmax + 1]; hmax + 1];
        for lo in 0..hmax {
            for hi in lo + 1..=hmax {
                for area in 0..=amax {
                    let c = &layer[lo][hi][area];
                    if c == &BigInt::from(0) {
                        continue;
                    }
                    for nlo in lo..hi {
                        for nhi in hi..=hmax {
                            let na = area + nhi - nlo;
                            if na <= amax {
                                next[nlo][nhi][na] += c;
                            }
                        }
                    }
                }
            }
        }
        layer = next;
    }
    counts
}

/// Parallelogram polyominoes as a series in the area variable, `w` (width)
/// and `h` (height), truncated to `caps`.
pub fn polyomino_series(weights: PolyominoWeights, caps: Caps) -> TruncatedSeries {
    let cap = caps.get(weights.area_var);
    let (wmax, hmax) = (caps.get(Var::W), caps.get(Var::H));
    let max_area = match weights.exponent {
        AreaExponent::Area => cap,
        AreaExponent::AreaPlusHeight => cap,
        AreaExponent::AreaMinusHeight => cap + hmax,
    };
    let mut out = TruncatedSeries::zero(caps);
    for ((area, width, height), c) in polyomino_counts(wmax, hmax, max_area) {
        // every polyomino has area >= height, so the difference stays non-negative
        let exp = match weights.exponent {
            AreaExponent::Area => area,
            AreaExponent::AreaPlusHeight => area + height,
            AreaExponent::AreaMinusHeight => area - height,
        };
        let mut e: Exponents = [0; 4];
        e[weights.area_var as usize] = exp;
        e[Var::W as usize] = width;
        e[Var::H as usize] = height;
        out.accumulate(e, c);
    }
    out
}

/// `1 / (q)_k = 1 / ((1-q)(1-q^2)...(1-q^k))` in the `q` slot.
fn inverse_q_pochhammer(caps: Caps, q: Var, k: u32) -> Result<TruncatedSeries> {
    let mut prod = TruncatedSeries::one(caps);
    for i in 1..=k {
        let mut e = [0; 4];
        e[q as usize] = i;
        let factor = TruncatedSeries::one(caps).sub(&TruncatedSeries::monomial(caps, e, 1))?;
        prod = prod.mul(&factor)?;
    }
    prod.geom_inverse()
}

/// `L(w, h) = Σ (-1)^(i+j) h^j w^i q^C(i+j+1, 2) / ((q)_j (q)_i)` with `q` in
/// the `x` slot. With `shifted` each term picks up `q^(i+j)`, giving `L(qw, qh)`.
pub fn l_series(caps: Caps, shifted: bool) -> Result<TruncatedSeries> {
    let q = Var::X;
    let (qcap, wmax, hmax) = (caps.get(q), caps.get(Var::W), caps.get(Var::H));
    let inverses: Vec<TruncatedSeries> =
        (0..=wmax.max(hmax)).map(|k| inverse_q_pochhammer(caps, q, k)).collect::<Result<_>>()?;
    let mut out = TruncatedSeries::zero(caps);
    for i in 0..=wmax {
        for j in 0..=hmax {
            let s = i + j;
            let qexp = s * (s + 1) / 2 + if shifted { s } else { 0 };
            if qexp > qcap {
                continue;
            }
            let sign = if s % 2 == 0 { 1 } else { -1 };
            let mono = TruncatedSeries::monomial(caps, [qexp, 0, i, j], sign);
            out = out.add(&mono.mul(&inverses[j as usize])?.mul(&inverses[i as usize])?)?;
        }
    }
    Ok(out)
}

/// `P(q; w, h) = qwh L(qw, qh) / L(w, h)`, with `q` in the `x` slot.
pub fn p_via_l(caps: Caps) -> Result<TruncatedSeries> {
    let qwh = TruncatedSeries::monomial(caps, [1, 0, 1, 1], 1);
    qwh.mul(&l_series(caps, true)?)?.mul(&l_series(caps, false)?.geom_inverse()?)
}

/// Direct sums of `K⁺_{m,n}` and `K⁻_{m,n}` times `w^m h^n` over `1 <= m <= caps.w`, `1 <= n <= caps.h`.
pub fn boundary_series_direct(caps: Caps) -> Result<(TruncatedSeries, TruncatedSeries)> {
    let mut plus = TruncatedSeries::zero(caps);
    let mut minus = TruncatedSeries::zero(caps);
    for m in 1..=caps.get(Var::W) {
        for n in 1..=caps.get(Var::H) {
            let shape = GraphShape::new(m as usize, n as usize)?;
            for u in enumerate_parking_sorted(shape)?.configs {
                let sets = boundary_sets(&u)?;
                for (list, target) in [(&sets.s_plus, &mut plus), (&sets.s_minus, &mut minus)] {
                    for &s in list {
                        let full = u.with_sink(Some(s));
                        let (x, y) = (xpara(&full)?, ypara(&full)?);
                        if let (Ok(x), Ok(y)) = (u32::try_from(x), u32::try_from(y)) {
                            target.accumulate([x, y, m, n], 1);
                        }
                    }
                }
            }
        }
    }
    Ok((plus, minus))
}

fn var(caps: Caps, v: Var) -> TruncatedSeries {
    TruncatedSeries::var(caps, v)
}

fn mono(caps: Caps, e: Exponents) -> TruncatedSeries {
    TruncatedSeries::monomial(caps, e, 1)
}

/// The closed forms for the positive and negative boundary sums.
pub fn boundary_series_closed(caps: Caps) -> Result<(TruncatedSeries, TruncatedSeries)> {
    let one = TruncatedSeries::one(caps);
    let (w, h) = (var(caps, Var::W), var(caps, Var::H));
    let px = polyomino_series(PolyominoWeights::plain(Var::X), caps);
    let py = polyomino_series(PolyominoWeights::plain(Var::Y), caps);
    let px_t = polyomino_series(PolyominoWeights::twisted(Var::X, AreaExponent::AreaPlusHeight), caps);
    let py_t = polyomino_series(PolyominoWeights::twisted(Var::Y, AreaExponent::AreaMinusHeight), caps);
    let one_minus_w = one.sub(&w)?;

    let minus_den = one_minus_w.mul(&one.sub(&h)?.sub(&w)?.sub(&px)?.sub(&py)?)?;
    let minus = px.mul(&py)?.mul(&minus_den.geom_inverse()?)?;

    let hx = mono(caps, [1, 0, 0, 1]);
    let hw = mono(caps, [0, 0, 1, 1]);
    let xw = mono(caps, [1, 0, 1, 0]);
    let base = one.sub(&hx)?.sub(&w)?;
    let numerator = base
        .mul(&hw)?
        .add(&w.sub(&h)?.mul(&px_t)?.mul(&py_t)?)?
        .add(&base.add(&xw)?.mul(&h)?.mul(&py_t)?)?
        .sub(&hw.mul(&px_t)?)?;
    let plus_den = one_minus_w.mul(&one.sub(&w)?.sub(&hx)?.sub(&py_t)?.sub(&px_t)?)?;
    let plus = numerator.mul(&plus_den.geom_inverse()?)?;
    Ok((plus, minus))
}

/// Outcome of comparing two truncated series coefficient by coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesComparison {
    pub passed: bool,
    pub compared: usize,
    pub first_mismatch: Option<Mismatch>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub exponents: Exponents,
    pub lhs: String,
    pub rhs: String,
}

pub fn compare_series(lhs: &TruncatedSeries, rhs: &TruncatedSeries) -> Result<SeriesComparison> {
    let caps = lhs.caps();
    if caps != rhs.caps() {
        return Err(SandpileError::Precondition("compared series have different caps".into()));
    }
    let mut compared = 0;
    for x in 0..=caps.get(Var::X) {
        for y in 0..=caps.get(Var::Y) {
            for w in 0..=caps.get(Var::W) {
                for h in 0..=caps.get(Var::H) {
                    let e = [x, y, w, h];
                    let (l, r) = (lhs.coefficient(e)?, rhs.coefficient(e)?);
                    compared += 1;
                    if l != r {
                        let first_mismatch = Some(Mismatch { exponents: e, lhs: l.to_string(), rhs: r.to_string() });
                        return Ok(SeriesComparison { passed: false, compared, first_mismatch });
                    }
                }
            }
        }
    }
    Ok(SeriesComparison { passed: true, compared, first_mismatch: None })
}

/// `Σ_{1<=m<=caps.w, 1<=n<=caps.h} K_{m,n}(x, y) w^m h^n`.
pub fn gf_by_enumeration(caps: Caps) -> Result<TruncatedSeries> {
    let mut out = TruncatedSeries::zero(caps);
    for m in 1..=caps.get(Var::W) {
        for n in 1..=caps.get(Var::H) {
            let table = k_xy_table(GraphShape::new(m as usize, n as usize)?, caps.get(Var::X), caps.get(Var::Y))?;
            for ([x, y, _, _], c) in table.terms() {
                out.accumulate([x, y, m, n], c.clone());
            }
        }
    }
    Ok(out)
}

/// `(1-xy)(hw - P(x;w,h) P(y;w,h)) / ((1-x)(1-y)(1-h-w-P(x;w,h)-P(y;w,h)))`.
pub fn gf_closed_form(caps: Caps) -> Result<TruncatedSeries> {
    let one = TruncatedSeries::one(caps);
    let (x, y) = (var(caps, Var::X), var(caps, Var::Y));
    let (w, h) = (var(caps, Var::W), var(caps, Var::H));
    let px = polyomino_series(PolyominoWeights::plain(Var::X), caps);
    let py = polyomino_series(PolyominoWeights::plain(Var::Y), caps);
    let numerator = one.sub(&x.mul(&y)?)?.mul(&mono(caps, [0, 0, 1, 1]).sub(&px.mul(&py)?)?)?;
    let denominator =
        one.sub(&x)?.mul(&one.sub(&y)?)?.mul(&one.sub(&h)?.sub(&w)?.sub(&px)?.sub(&py)?)?;
    numerator.mul(&denominator.geom_inverse()?)
}

/// Compares the enumerated generating function with its closed form.
pub fn verify_gf_theorem(caps: Caps) -> Result<SeriesComparison> {
    compare_series(&gf_by_enumeration(caps)?, &gf_closed_form(caps)?)
}

/// Checks `P(q;w,h) = (qh + P(q;w,qh))(w + P(q;w,h))` within `caps` (`q` in the `x` slot).
pub fn polyomino_identity(caps: Caps) -> Result<SeriesComparison> {
    let p = polyomino_series(PolyominoWeights::plain(Var::X), caps);
    let p_shift = polyomino_series(PolyominoWeights::twisted(Var::X, AreaExponent::AreaPlusHeight), caps);
    let rhs = mono(caps, [1, 0, 0, 1]).add(&p_shift)?.mul(&var(caps, Var::W).add(&p)?)?;
    compare_series(&p, &rhs)
}
