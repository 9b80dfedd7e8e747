//! r-vectors, the grid-shift operators, φ/ψ/ψ₀, the one-shot park formula
//! and the three rank algorithms (greedy, scan, closed formula).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::{counting_sort_order, Configuration, GraphShape};
use crate::error::{overflow, Result, SandpileError};

/// Per-row gap between the green and red paths of a stable sorted configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RVector {
    pub shape: GraphShape,
    pub entries: Vec<i64>,
}

impl RVector {
    pub fn new(shape: GraphShape, entries: Vec<i64>) -> Result<Self> {
        if entries.len() != shape.n {
            return Err(SandpileError::LengthMismatch { part: "r-vector", expected: shape.n, got: entries.len() });
        }
        Ok(RVector { shape, entries })
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }
}

impl fmt::Display for RVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|r| r.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// `(k_a, k_b)` with `u = T_a^{k_a} T_b^{k_b} sort(park(u))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridShift {
    pub k_a: i64,
    pub k_b: i64,
}

/// A non-negative `f` such that `u - f` is not effective and `degree(f) = rank(u) + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofOfRank {
    pub f: Configuration,
}

fn require_stable_sorted(u: &Configuration, op: &str) -> Result<()> {
    if !u.is_stable() || !u.is_sorted() {
        return Err(SandpileError::Precondition(format!("{op} needs a stable sorted configuration, got {u}")));
    }
    Ok(())
}

/// Two-finger scan: `r_i = b_i + 1 - |{j : a_j + 1 <= i - 1}|`.
fn r_entries(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut below = 0usize;
    b.iter()
        .enumerate()
        .map(|(i, &bi)| {
            // i is 0-based here, so the row threshold reads a_j <= i - 1
            while below < a.len() && a[below] + 1 <= i as i64 {
                below += 1;
            }
            bi + 1 - below as i64
        })
        .collect()
}

pub fn r_vector(u: &Configuration) -> Result<RVector> {
    require_stable_sorted(u, "r_vector")?;
    Ok(RVector { shape: u.shape, entries: r_entries(&u.a, &u.b) })
}

pub fn is_parking_sorted(u: &Configuration) -> Result<bool> {
    Ok(r_vector(u)?.entries.iter().all(|&r| r <= 1))
}

/// The intersection area is edge-connected and holds the cells `(1,1)` and `(m,n)`.
///
/// Column `i` of the area is the row interval where `b_j >= i - 1` (a suffix,
/// since `b` is sorted) meets `j <= a_i + 1`; the sink column reaches row `n`.
pub fn is_recurrent_sorted(u: &Configuration) -> Result<bool> {
    require_stable_sorted(u, "is_recurrent_sorted")?;
    let (m, n) = (u.shape.m, u.shape.n);
    let mut lo = 0usize; // first row (0-based) with b_j >= column index
    let mut prev_hi: Option<usize> = None;
    for col in 0..m {
        while lo < n && u.b[lo] < col as i64 {
            lo += 1;
        }
        let top = if col + 1 < m { u.a[col] as usize } else { n - 1 };
        let hi = top.min(n - 1);
        if lo >= n || lo > hi {
            return Ok(false);
        }
        if col == 0 && lo != 0 {
            return Ok(false);
        }
        if let Some(ph) = prev_hi {
            if lo > ph {
                return Ok(false);
            }
        }
        prev_hi = Some(hi);
    }
    Ok(prev_hi == Some(n - 1))
}

fn require_compact_sorted(u: &Configuration, op: &str) -> Result<()> {
    if !u.is_compact() || !u.is_sorted() {
        return Err(SandpileError::Precondition(format!("{op} needs a compact sorted configuration, got {u}")));
    }
    Ok(())
}

fn dec(x: i64, by: i64) -> Result<i64> {
    x.checked_sub(by).ok_or(overflow("grid shift"))
}

fn inc(x: i64, by: i64) -> Result<i64> {
    x.checked_add(by).ok_or(overflow("grid shift"))
}

/// One step east on the periodic diagram: `sort(u + Δ^{(a_1)})`.
pub fn t_a(u: &Configuration) -> Result<Configuration> {
    require_compact_sorted(u, "t_a")?;
    let mut out = u.clone();
    if let Some((&first, rest)) = u.a.split_first() {
        out.a = rest.to_vec();
        out.a.push(inc(first, u.shape.a_degree())?);
    }
    out.b = u.b.iter().map(|&x| dec(x, 1)).collect::<Result<_>>()?;
    Ok(out)
}

pub fn t_a_inv(u: &Configuration) -> Result<Configuration> {
    require_compact_sorted(u, "t_a_inv")?;
    let mut out = u.clone();
    if let Some((&last, rest)) = u.a.split_last() {
        out.a = Vec::with_capacity(u.a.len());
        out.a.push(dec(last, u.shape.a_degree())?);
        out.a.extend_from_slice(rest);
    }
    out.b = u.b.iter().map(|&x| inc(x, 1)).collect::<Result<_>>()?;
    Ok(out)
}

/// One step north on the periodic diagram: `sort(u + Δ^{(b_1)})`.
pub fn t_b(u: &Configuration) -> Result<Configuration> {
    require_compact_sorted(u, "t_b")?;
    let mut out = u.clone();
    out.a = u.a.iter().map(|&x| dec(x, 1)).collect::<Result<_>>()?;
    out.sink = u.sink.map(|s| dec(s, 1)).transpose()?;
    let (&first, rest) = u.b.split_first().expect("n >= 1");
    out.b = rest.to_vec();
    out.b.push(inc(first, u.shape.b_degree())?);
    Ok(out)
}

pub fn t_b_inv(u: &Configuration) -> Result<Configuration> {
    require_compact_sorted(u, "t_b_inv")?;
    let mut out = u.clone();
    out.a = u.a.iter().map(|&x| inc(x, 1)).collect::<Result<_>>()?;
    out.sink = u.sink.map(|s| inc(s, 1)).transpose()?;
    let (&last, rest) = u.b.split_last().expect("n >= 1");
    out.b = Vec::with_capacity(u.b.len());
    out.b.push(dec(last, u.shape.b_degree())?);
    out.b.extend_from_slice(rest);
    Ok(out)
}

/// The periodic extension of a compact sorted configuration:
/// `A(k) = a_{k mod (m-1)} + n floor(k/(m-1))` and `B(k) = b_{k mod n} + m floor(k/n)`.
/// `T_a^x T_b^y(u)` has a-values `A(i+x) - y`, b-values `B(j+y) - x`, sink `s - y`.
struct Periodic<'a> {
    a: &'a [i64],
    b: &'a [i64],
    m: i128,
    n: i128,
}

impl<'a> Periodic<'a> {
    fn new(u: &'a Configuration) -> Self {
        Periodic { a: &u.a, b: &u.b, m: u.shape.m as i128, n: u.shape.n as i128 }
    }

    fn big_a(&self, k: i128) -> i128 {
        let len = self.a.len() as i128;
        self.a[k.rem_euclid(len) as usize] as i128 + self.n * k.div_euclid(len)
    }

    fn big_b(&self, k: i128) -> i128 {
        self.b[k.rem_euclid(self.n) as usize] as i128 + self.m * k.div_euclid(self.n)
    }

    /// Least `y` with `B(y) >= x`, so that `B(y-1) < x <= B(y)`.
    fn green_row(&self, x: i128) -> i128 {
        let q = x.div_euclid(self.m);
        let (mut lo, mut hi) = (self.n * (q - 2), self.n * (q + 1));
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.big_b(mid) >= x {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// Whether `T_a^x T_b^y(u)` is stable.
    fn stable_at(&self, x: i128, y: i128) -> bool {
        let red = self.a.is_empty() || (self.big_a(x - 1) < y && y <= self.big_a(x));
        red && self.big_b(y - 1) < x && x <= self.big_b(y)
    }
}

fn narrow(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| overflow("grid shift"))
}

/// `T_a^{k_a} T_b^{k_b}(u)` in closed form, for compact sorted `u` and any integers.
pub fn shift(u: &Configuration, k_a: i64, k_b: i64) -> Result<Configuration> {
    require_compact_sorted(u, "shift")?;
    let p = Periodic::new(u);
    let (x, y) = (k_a as i128, k_b as i128);
    let a = if u.a.is_empty() {
        Vec::new()
    } else {
        (0..u.a.len() as i128).map(|i| narrow(p.big_a(i + x) - y)).collect::<Result<_>>()?
    };
    let b = (0..u.b.len() as i128).map(|j| narrow(p.big_b(j + y) - x)).collect::<Result<_>>()?;
    let sink = u.sink.map(|s| narrow(s as i128 - y)).transpose()?;
    Ok(Configuration { shape: u.shape, a, sink, b })
}

/// Stable grid positions lie within this many columns of the origin.
fn search_radius(shape: GraphShape) -> i128 {
    2 * shape.m as i128 * (shape.m + shape.n) as i128 + 2
}

/// Next stable configuration strictly down the periodic diagram; fixes parking ones.
pub fn phi(u: &Configuration) -> Result<Configuration> {
    require_stable_sorted(u, "phi")?;
    if u.shape.m == 1 {
        return Ok(u.clone());
    }
    let p = Periodic::new(u);
    for x in (-search_radius(u.shape)..0).rev() {
        let y = p.green_row(x);
        if p.stable_at(x, y) {
            return shift(u, narrow(x)?, narrow(y)?);
        }
    }
    Ok(u.clone())
}

/// Next stable configuration strictly up the periodic diagram; fixes recurrent ones.
pub fn psi(u: &Configuration) -> Result<Configuration> {
    require_stable_sorted(u, "psi")?;
    if u.shape.m == 1 {
        return Ok(u.clone());
    }
    let p = Periodic::new(u);
    for x in 1..=search_radius(u.shape) {
        let y = p.green_row(x);
        if p.stable_at(x, y) {
            return shift(u, narrow(x)?, narrow(y)?);
        }
    }
    Ok(u.clone())
}

/// Intermediate data of the one-shot park formula (1-based `h` and `k`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParkTrace {
    pub h: usize,
    pub r_h: i64,
    pub k: usize,
    /// `u'` before the cyclic rotation, in the labelling of the input.
    pub unrotated: Configuration,
    pub result: Configuration,
}

/// Accepts sorted configurations with a-values in `[0, n-1]` and b-values in
/// `[-1, m-1]`; the extra `-1` is what ψ₀ feeds in.
fn park_trace_relaxed(u: &Configuration) -> Result<ParkTrace> {
    let (m, n) = (u.shape.m, u.shape.n);
    let ok_a = u.a.iter().all(|&x| (0..n as i64).contains(&x));
    let ok_b = u.b.iter().all(|&x| (-1..m as i64).contains(&x));
    if !u.is_sorted() || !ok_a || !ok_b {
        return Err(SandpileError::Precondition(format!("park formula needs a stable sorted configuration, got {u}")));
    }
    let r = r_entries(&u.a, &u.b);
    let (h0, r_h) = r.iter().enumerate().fold((0, r[0]), |best, (i, &x)| if x > best.1 { (i, x) } else { best });
    let h = h0 + 1;
    let k = usize::try_from(u.b[h0] - r_h + 2).map_err(|_| SandpileError::Internal("park index k".into()))?;
    if k == 0 || k > m {
        return Err(SandpileError::Internal(format!("park index k = {k} outside [1, {m}]")));
    }
    let b_h = u.b[h0];
    let b: Vec<i64> = u.b.iter().enumerate().map(|(i, &x)| x - b_h + if i < h0 { m as i64 } else { 0 }).collect();
    let a: Vec<i64> =
        u.a.iter().enumerate().map(|(j, &x)| x - h0 as i64 + if j + 1 < k { n as i64 } else { 0 }).collect();
    let sink = match u.sink {
        None => None,
        Some(s) => Some(
            (r_h - 2)
                .checked_mul(n as i64)
                .and_then(|t| t.checked_add(s))
                .and_then(|t| t.checked_add((n - h0) as i64))
                .ok_or(overflow("park_sort_fast"))?,
        ),
    };
    let unrotated = Configuration { shape: u.shape, a, sink, b };
    let mut ra = unrotated.a[k - 1..].to_vec();
    ra.extend_from_slice(&unrotated.a[..k - 1]);
    let mut rb = unrotated.b[h0..].to_vec();
    rb.extend_from_slice(&unrotated.b[..h0]);
    let result = Configuration { shape: u.shape, a: ra, sink, b: rb };
    Ok(ParkTrace { h, r_h, k, unrotated, result })
}

/// `sort(park(u))` for stable sorted `u`, in O(m+n). A partial input gives a partial output.
pub fn park_sort_fast(u: &Configuration) -> Result<Configuration> {
    Ok(park_sort_fast_trace(u)?.result)
}

pub fn park_sort_fast_trace(u: &Configuration) -> Result<ParkTrace> {
    require_stable_sorted(u, "park_sort_fast")?;
    park_trace_relaxed(u)
}

/// `sort(park(u))` for any full configuration: stabilize, counting sort, park formula.
pub fn park_sort(u: &Configuration) -> Result<Configuration> {
    park_sort_fast(&u.stabilize_equiv()?.sort_config()?)
}

/// The parking representative of `u`, keeping the original vertex labels.
pub fn park(u: &Configuration) -> Result<Configuration> {
    let st = u.stabilize_equiv()?;
    let (m, n) = (u.shape.m, u.shape.n);
    let order_a = counting_sort_order(n - 1, &st.a)?;
    let order_b = counting_sort_order(m - 1, &st.b)?;
    let sorted = Configuration {
        shape: u.shape,
        a: order_a.iter().map(|&i| st.a[i]).collect(),
        sink: st.sink,
        b: order_b.iter().map(|&j| st.b[j]).collect(),
    };
    let moved = park_trace_relaxed(&sorted)?.unrotated;
    let mut out = st;
    for (slot, &i) in order_a.iter().enumerate() {
        out.a[i] = moved.a[slot];
    }
    for (slot, &j) in order_b.iter().enumerate() {
        out.b[j] = moved.b[slot];
    }
    out.sink = moved.sink;
    Ok(out)
}

/// `sort(park(u - 1_{b_1}))` for parking sorted `u`.
pub fn psi0(u: &Configuration) -> Result<Configuration> {
    if !is_parking_sorted(u)? {
        return Err(SandpileError::Precondition(format!("psi0 needs a parking sorted configuration, got {u}")));
    }
    let mut v = u.clone();
    v.b[0] -= 1;
    Ok(park_trace_relaxed(&v)?.result)
}

/// ψ₀ read on r-vectors: rotate left, append 1 if `r_1 = 1` else `r_1 + 1`.
pub fn psi0_tilde(r: &RVector) -> Result<RVector> {
    if let Some(&bad) = r.entries.iter().find(|&&x| x > 1) {
        return Err(SandpileError::Precondition(format!("psi0_tilde needs entries <= 1, found {bad}")));
    }
    let first = r.entries[0];
    let mut entries = r.entries[1..].to_vec();
    entries.push(if first == 1 { 1 } else { first + 1 });
    Ok(RVector { shape: r.shape, entries })
}

/// The decomposition `sink + 1 = nQ + R` and the per-row summands of the rank formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTerms {
    pub q: i64,
    pub r: i64,
    pub summands: Vec<i64>,
    pub rank: i64,
}

fn rank_terms_unchecked(sink: i64, r: &[i64]) -> Result<RankTerms> {
    if sink < 0 {
        return Ok(RankTerms { q: 0, r: 0, summands: vec![0; r.len()], rank: -1 });
    }
    let n = r.len() as i64;
    let total = sink.checked_add(1).ok_or(overflow("rank_formula"))?;
    let (q, rem) = (total.div_euclid(n), total.rem_euclid(n));
    let mut summands = Vec::with_capacity(r.len());
    let mut rank: i64 = -1;
    for (i, &ri) in r.iter().enumerate() {
        let bump = if (i as i64) < rem { 1 } else { 0 };
        let term = q.checked_add(bump + ri - 1).ok_or(overflow("rank_formula"))?.max(0);
        rank = rank.checked_add(term).ok_or(overflow("rank_formula"))?;
        summands.push(term);
    }
    Ok(RankTerms { q, r: rem, summands, rank })
}

pub fn rank_formula_terms(u: &Configuration) -> Result<RankTerms> {
    let r = r_vector(u)?;
    if r.entries.iter().any(|&x| x > 1) {
        return Err(SandpileError::Precondition(format!("rank_formula needs a parking sorted configuration, got {u}")));
    }
    rank_terms_unchecked(u.sink_value()?, &r.entries)
}

/// Rank of a parking sorted configuration by the closed formula.
pub fn rank_formula(u: &Configuration) -> Result<i64> {
    Ok(rank_formula_terms(u)?.rank)
}

/// Rank of any full configuration in O(m+n).
pub fn rank_of(u: &Configuration) -> Result<i64> {
    let p = park_sort(u)?;
    rank_terms_unchecked(p.sink_value()?, &r_entries(&p.a, &p.b)).map(|t| t.rank)
}

/// The greedy algorithm: repeatedly remove a chip from a b-vertex holding
/// zero in the parking form until the sink goes negative.
pub fn rank_greedy(u: &Configuration) -> Result<(i64, ProofOfRank)> {
    let mut current = park(u)?;
    let mut f = Configuration::zero(u.shape);
    let mut rank = -1i64;
    while current.sink_value()? >= 0 {
        let j = current
            .b
            .iter()
            .position(|&x| x == 0)
            .ok_or_else(|| SandpileError::Internal(format!("parking form {current} has no empty b-vertex")))?;
        current.b[j] -= 1;
        f.b[j] += 1;
        rank += 1;
        current = park(&current)?;
    }
    Ok((rank, ProofOfRank { f }))
}

/// Lazy view of `T_a^x T_b^y(p)` that answers the few queries the scan needs in O(1).
pub struct GridWalk<'a> {
    base: &'a Configuration,
    periodic: Periodic<'a>,
    x: i128,
    y: i128,
}

impl<'a> GridWalk<'a> {
    pub fn new(base: &'a Configuration) -> Result<Self> {
        require_compact_sorted(base, "GridWalk")?;
        base.sink_value()?;
        Ok(GridWalk { base, periodic: Periodic::new(base), x: 0, y: 0 })
    }

    pub fn t_a(&mut self) {
        self.x += 1;
    }

    pub fn t_b(&mut self) {
        self.y += 1;
    }

    pub fn b_first(&self) -> i128 {
        self.periodic.big_b(self.y) - self.x
    }

    /// Value of `a_{m-1}`, or `None` when `m = 1`.
    pub fn a_last(&self) -> Option<i128> {
        let len = self.base.a.len() as i128;
        (len > 0).then(|| self.periodic.big_a(self.x + len - 1) - self.y)
    }

    pub fn sink(&self) -> i128 {
        self.base.sink.expect("checked in new") as i128 - self.y
    }

    pub fn materialize(&self) -> Result<Configuration> {
        shift(self.base, narrow(self.x)?, narrow(self.y)?)
    }
}

/// The grid-scan algorithm: move east while `b_1 >= 0`, then one step north
/// (consuming one sink chip); count the north steps that land on the right
/// of the red cut, detected by `a_{m-1} >= n - 1`.
pub fn rank_scan(u: &Configuration) -> Result<i64> {
    let parked = park_sort(u)?;
    let mut walk = GridWalk::new(&parked)?;
    let n = u.shape.n as i128;
    let mut rank = -1i64;
    while walk.sink() >= 0 {
        while walk.b_first() >= 0 {
            walk.t_a();
        }
        walk.t_b();
        if walk.a_last().map_or(true, |x| x >= n - 1) {
            rank += 1;
        }
    }
    Ok(rank)
}

/// `n - 2` on every A-vertex (sink included) and `m - 2` on every B-vertex.
pub fn canonical_divisor(shape: GraphShape) -> Configuration {
    let (m, n) = (shape.m as i64, shape.n as i64);
    Configuration { shape, a: vec![n - 2; shape.m - 1], sink: Some(n - 2), b: vec![m - 2; shape.n] }
}

/// Finds the unique grid shift of a compact sorted configuration relative to
/// its parking sorted form. A partial input is read as `u[0]`.
pub fn decompose_compact(u: &Configuration) -> Result<GridShift> {
    require_compact_sorted(u, "decompose_compact")?;
    let full = if u.is_partial() { u.with_sink(Some(0)) } else { u.clone() };
    let base = park_sort(&full)?;
    let w = (u.shape.m + u.shape.n) as i64;
    let mut found = Vec::new();
    for k_a in -w..=w {
        for k_b in -w..=w {
            if shift(&base, k_a, k_b)? == full {
                found.push(GridShift { k_a, k_b });
            }
        }
    }
    match found.as_slice() {
        [one] => Ok(*one),
        [] => Err(SandpileError::Internal(format!("no grid shift of {base} reaches {full} within {w}"))),
        _ => Err(SandpileError::Internal(format!("grid shift of {full} is not unique: {found:?}"))),
    }
}
