//! Exponential-time implementations straight from the definitions, used to
//! validate the fast algorithms on small graphs.
//!
//! Nothing here calls into `rank`: parking forms come from subset firing,
//! effectiveness from the sign of the parking sink.

use std::collections::{BTreeMap, HashMap};

use crate::config::{Configuration, GraphShape, Vertex};
use crate::error::{Result, SandpileError};

/// Largest number of non-sink vertices the subset searches accept.
pub const MAX_NON_SINK: usize = 20;

/// Order in which nonempty subsets are tried by the parking fixpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetOrder {
    Ascending,
    Descending,
}

fn guard(shape: GraphShape) -> Result<usize> {
    let count = shape.m - 1 + shape.n;
    if count > MAX_NON_SINK {
        return Err(SandpileError::GuardExceeded(format!("{shape} has {count} non-sink vertices, limit {MAX_NON_SINK}")));
    }
    Ok(count)
}

/// Non-sink values in vertex order `a_1..a_{m-1}, b_1..b_n`.
fn non_sink(u: &Configuration) -> Vec<i64> {
    u.a().iter().chain(u.b()).copied().collect()
}

/// Whether `u -/+ Δ^{(C)}` (sign `-1` topples, `+1` untopples) passes `keep`
/// on every non-sink vertex, for `C` given as a bitmask over non-sink vertices.
fn fire_passes(u: &[i64], shape: GraphShape, mask: u32, sign: i64, keep: impl Fn(usize, i64) -> bool) -> bool {
    let ma = shape.m - 1;
    let in_c = |i: usize| mask >> i & 1 == 1;
    let ca = (0..ma).filter(|&i| in_c(i)).count() as i64;
    let cb = (ma..u.len()).filter(|&i| in_c(i)).count() as i64;
    (0..u.len()).all(|i| {
        let (deg, gain) = if i < ma { (shape.n as i64, cb) } else { (shape.m as i64, ca) };
        let fired = if in_c(i) { deg } else { 0 };
        keep(i, u[i] + sign * (fired - gain))
    })
}

fn mask_to_set(shape: GraphShape, mask: u32) -> Vec<Vertex> {
    let ma = shape.m - 1;
    (0..ma + shape.n)
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| if i < ma { Vertex::A(i) } else { Vertex::B(i - ma) })
        .collect()
}

/// Non-negative outside the sink, and toppling any nonempty set of non-sink
/// vertices drives some non-sink value negative.
pub fn is_parking_by_definition(u: &Configuration) -> Result<bool> {
    let count = guard(u.shape())?;
    if !u.is_nonnegative_outside_sink() {
        return Ok(false);
    }
    let vals = non_sink(u);
    Ok((1u32..1 << count).all(|mask| !fire_passes(&vals, u.shape(), mask, -1, |_, x| x >= 0)))
}

/// Stable, and untoppling any nonempty set of non-sink vertices breaks stability.
pub fn is_recurrent_by_definition(u: &Configuration) -> Result<bool> {
    let count = guard(u.shape())?;
    if !u.is_stable() {
        return Ok(false);
    }
    let shape = u.shape();
    let vals = non_sink(u);
    let stable = |i: usize, x: i64| x >= 0 && x < if i + 1 < shape.m { shape.n as i64 } else { shape.m as i64 };
    Ok((1u32..1 << count).all(|mask| !fire_passes(&vals, shape, mask, 1, stable)))
}

/// Subsets ordered by size, then lexicographically in `a_1 < .. < a_{m-1} < b_1 < .. < b_n`.
fn subsets_by_size_then_lex(count: usize) -> Vec<u32> {
    let mut all: Vec<u32> = (1u32..1 << count).collect();
    all.sort_by_key(|&mask| {
        let members: Vec<u32> = (0..count as u32).filter(|&i| mask >> i & 1 == 1).collect();
        (members.len(), members)
    });
    all
}

fn stable_after(u: &Configuration, mask: u32, sign: i64) -> bool {
    let shape = u.shape();
    let vals = non_sink(u);
    let ma = shape.m - 1;
    fire_passes(&vals, shape, mask, sign, |i, x| x >= 0 && x < if i < ma { shape.n as i64 } else { shape.m as i64 })
}

fn minimal_subset_move(u: &Configuration, sign: i64) -> Result<Configuration> {
    let count = guard(u.shape())?;
    if !u.is_stable() || !u.is_sorted() {
        return Err(SandpileError::Precondition(format!("needs a stable sorted configuration, got {u}")));
    }
    for mask in subsets_by_size_then_lex(count) {
        if stable_after(u, mask, sign) {
            let set = mask_to_set(u.shape(), mask);
            let moved = if sign < 0 {
                u.topple_set(&set)?
            } else {
                // u + Δ^{(C)} = 2u - (u - Δ^{(C)})
                let undo = u.topple_set(&set)?;
                u.checked_add(u)?.checked_sub(&undo)?
            };
            return moved.sort_config();
        }
    }
    Ok(u.clone())
}

/// `sort(u - Δ^{(C)})` for the least `C` (by size, then lexicographic) keeping `u` stable.
pub fn phi_by_definition(u: &Configuration) -> Result<Configuration> {
    minimal_subset_move(u, -1)
}

/// `sort(u + Δ^{(C)})` for the least `C` keeping `u` stable.
pub fn psi_by_definition(u: &Configuration) -> Result<Configuration> {
    minimal_subset_move(u, 1)
}

/// Definition-based parking with a cache keyed by non-sink values.
///
/// Adding chips to the sink commutes with parking, so a parking form is
/// determined by the non-sink values up to a sink offset.
pub struct DefinitionOracle {
    shape: GraphShape,
    order: SubsetOrder,
    cache: HashMap<Vec<i64>, (Vec<i64>, i64)>,
}

impl DefinitionOracle {
    pub fn new(shape: GraphShape) -> Result<Self> {
        Self::with_order(shape, SubsetOrder::Ascending)
    }

    pub fn with_order(shape: GraphShape, order: SubsetOrder) -> Result<Self> {
        guard(shape)?;
        Ok(DefinitionOracle { shape, order, cache: HashMap::new() })
    }

    fn check_shape(&self, u: &Configuration) -> Result<()> {
        if u.shape() != self.shape {
            return Err(SandpileError::Precondition(format!("oracle for {} got {}", self.shape, u.shape())));
        }
        Ok(())
    }

    /// The unique parking configuration toppling-equivalent to `u`.
    /// A partial input yields a partial output.
    pub fn park(&mut self, u: &Configuration) -> Result<Configuration> {
        self.check_shape(u)?;
        let key = non_sink(u);
        let (values, offset) = match self.cache.get(&key) {
            Some(hit) => hit.clone(),
            None => {
                let parked = self.park_uncached(&u.with_sink(Some(0)))?;
                let entry = (non_sink(&parked), parked.sink_value()?);
                self.cache.insert(key, entry.clone());
                entry
            }
        };
        let ma = self.shape.m - 1;
        let sink = u.sink().map(|s| s + offset);
        Configuration::new(self.shape, values[..ma].to_vec(), sink, values[ma..].to_vec())
    }

    fn park_uncached(&self, u: &Configuration) -> Result<Configuration> {
        let shape = self.shape;
        let mut w = u.clone();
        // pump chips in through the sink until nothing outside it is negative
        while !w.is_nonnegative_outside_sink() {
            w = w.topple(Vertex::Sink)?;
            w = relax(w)?;
        }
        let count = shape.m - 1 + shape.n;
        let masks: Vec<u32> = match self.order {
            SubsetOrder::Ascending => (1u32..1 << count).collect(),
            SubsetOrder::Descending => (1u32..1 << count).rev().collect(),
        };
        loop {
            let vals = non_sink(&w);
            let next = masks.iter().find(|&&mask| fire_passes(&vals, shape, mask, -1, |_, x| x >= 0));
            match next {
                Some(&mask) => w = w.topple_set(&mask_to_set(shape, mask))?,
                None => return Ok(w),
            }
        }
    }

    pub fn is_effective(&mut self, u: &Configuration) -> Result<bool> {
        Ok(self.park(u)?.sink_value()? >= 0)
    }

    /// Baker–Norine rank with a witness `f`, by breadth-first search over the
    /// toppling classes of `u - f` for growing `degree(f)`.
    ///
    /// Each class is represented by its parking form. With `only_b` the
    /// chips are removed from b-vertices only.
    pub fn rank(&mut self, u: &Configuration, only_b: bool) -> Result<(i64, Configuration)> {
        self.check_shape(u)?;
        let degree = u.degree()?;
        if degree > 10_000 {
            return Err(SandpileError::GuardExceeded(format!("degree {degree} too large for the oracle")));
        }
        let zero = Configuration::zero(self.shape);
        let start = self.park(u)?;
        if start.sink_value()? < 0 {
            return Ok((-1, zero));
        }
        let targets: Vec<Vertex> = if only_b {
            (0..self.shape.n).map(Vertex::B).collect()
        } else {
            u.vertices().collect()
        };
        let key = |c: &Configuration| (c.a().to_vec(), c.sink(), c.b().to_vec());
        let mut frontier = BTreeMap::new();
        frontier.insert(key(&start), (start, zero));
        for d in 0.. {
            let mut next = BTreeMap::new();
            for (p, f) in frontier.values() {
                for &v in &targets {
                    let one = Configuration::zero(self.shape).with_value(v, 1)?;
                    let child = self.park(&p.checked_sub(&one)?)?;
                    let g = f.checked_add(&one)?;
                    if child.sink_value()? < 0 {
                        return Ok((d, g));
                    }
                    next.entry(key(&child)).or_insert((child, g));
                }
            }
            frontier = next;
        }
        unreachable!("degree decreases every level")
    }
}

/// Legal topplings of non-sink vertices holding at least their degree, until none is left.
fn relax(mut w: Configuration) -> Result<Configuration> {
    loop {
        let shape = w.shape();
        let unstable = w
            .non_sink_vertices()
            .find(|&v| match v {
                Vertex::A(i) => w.a()[i] >= shape.n as i64,
                Vertex::B(j) => w.b()[j] >= shape.m as i64,
                Vertex::Sink => false,
            });
        match unstable {
            Some(v) => w = w.topple(v)?,
            None => return Ok(w),
        }
    }
}

pub fn park_by_definition(u: &Configuration) -> Result<Configuration> {
    DefinitionOracle::new(u.shape())?.park(u)
}

pub fn rank_by_definition(u: &Configuration) -> Result<i64> {
    Ok(DefinitionOracle::new(u.shape())?.rank(u, false)?.0)
}

/// Counts of parallelogram polyominoes keyed by `(area, width, height)`,
/// from all pairs of lattice paths meeting only at their two ends.
pub fn polyomino_bruteforce(width_cap: usize, height_cap: usize) -> Result<BTreeMap<(u32, u32, u32), u64>> {
    if width_cap > 6 || height_cap > 6 {
        return Err(SandpileError::GuardExceeded(format!("polyomino brute force limited to 6x6, got {width_cap}x{height_cap}")));
    }
    let mut counts = BTreeMap::new();
    for w in 1..=width_cap {
        for h in 1..=height_cap {
            let paths = lattice_paths(w, h);
            for upper in paths.iter().filter(|p| !p.east_first) {
                for lower in paths.iter().filter(|p| p.east_first) {
                    let shared = upper.points.iter().filter(|pt| lower.points.binary_search(pt).is_ok()).count();
                    if shared == 2 {
                        let area: i64 = upper.column_heights.iter().zip(&lower.column_heights).map(|(t, b)| t - b).sum();
                        *counts.entry((area as u32, w as u32, h as u32)).or_insert(0) += 1;
                    }
                }
            }
        }
    }
    Ok(counts)
}

struct LatticePath {
    east_first: bool,
    /// Visited points, sorted.
    points: Vec<(i64, i64)>,
    /// Height of the east step in each column.
    column_heights: Vec<i64>,
}

fn lattice_paths(w: usize, h: usize) -> Vec<LatticePath> {
    let len = w + h;
    (0u32..1 << len)
        .filter(|mask| mask.count_ones() as usize == w)
        .map(|mask| {
            let (mut x, mut y) = (0i64, 0i64);
            let mut points = vec![(0, 0)];
            let mut column_heights = Vec::with_capacity(w);
            for step in 0..len {
                if mask >> step & 1 == 1 {
                    column_heights.push(y);
                    x += 1;
                } else {
                    y += 1;
                }
                points.push((x, y));
            }
            points.sort_unstable();
            LatticePath { east_first: mask & 1 == 1, points, column_heights }
        })
        .collect()
}
