//! Configurations on K_{m,n}: toppling, degree, stability predicates,
//! stabilization by Euclidean division and counting sort.
//!
//! The vertices are `a_1..a_{m-1}` and the sink `a_m` on one side and
//! `b_1..b_n` on the other. Indices are 0-based in code.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{overflow, Result, SandpileError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphShape {
    pub m: usize,
    pub n: usize,
}

impl GraphShape {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(SandpileError::InvalidShape { m, n });
        }
        Ok(GraphShape { m, n })
    }

    /// Degree of every vertex on the A side.
    pub fn a_degree(&self) -> i64 {
        self.n as i64
    }

    /// Degree of every vertex on the B side.
    pub fn b_degree(&self) -> i64 {
        self.m as i64
    }

    /// Cycle rank `mn - m - n + 1`.
    pub fn genus(&self) -> i64 {
        (self.m * self.n) as i64 - self.m as i64 - self.n as i64 + 1
    }
}

impl fmt::Display for GraphShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K_{{{},{}}}", self.m, self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    /// Non-sink vertex `a_{i+1}`.
    A(usize),
    Sink,
    /// Vertex `b_{j+1}`.
    B(usize),
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::A(i) => write!(f, "a_{}", i + 1),
            Vertex::Sink => write!(f, "sink"),
            Vertex::B(j) => write!(f, "b_{}", j + 1),
        }
    }
}

/// Integer values on `a_1..a_{m-1}`, the sink and `b_1..b_n`.
///
/// A missing sink value makes this a partial configuration `u[*]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ConfigurationJson", into = "ConfigurationJson")]
pub struct Configuration {
    pub(crate) shape: GraphShape,
    pub(crate) a: Vec<i64>,
    pub(crate) sink: Option<i64>,
    pub(crate) b: Vec<i64>,
}

impl Configuration {
    pub fn new(shape: GraphShape, a: Vec<i64>, sink: Option<i64>, b: Vec<i64>) -> Result<Self> {
        if a.len() != shape.m - 1 {
            return Err(SandpileError::LengthMismatch { part: "a", expected: shape.m - 1, got: a.len() });
        }
        if b.len() != shape.n {
            return Err(SandpileError::LengthMismatch { part: "b", expected: shape.n, got: b.len() });
        }
        Ok(Configuration { shape, a, sink, b })
    }

    /// Builds a configuration whose shape is read off the slice lengths.
    pub fn from_parts(a: &[i64], sink: Option<i64>, b: &[i64]) -> Result<Self> {
        let shape = GraphShape::new(a.len() + 1, b.len())?;
        Configuration::new(shape, a.to_vec(), sink, b.to_vec())
    }

    pub fn zero(shape: GraphShape) -> Self {
        Configuration { shape, a: vec![0; shape.m - 1], sink: Some(0), b: vec![0; shape.n] }
    }

    pub fn shape(&self) -> GraphShape {
        self.shape
    }

    pub fn a(&self) -> &[i64] {
        &self.a
    }

    pub fn b(&self) -> &[i64] {
        &self.b
    }

    pub fn sink(&self) -> Option<i64> {
        self.sink
    }

    pub fn is_partial(&self) -> bool {
        self.sink.is_none()
    }

    pub fn sink_value(&self) -> Result<i64> {
        self.sink.ok_or(SandpileError::PartialConfiguration)
    }

    pub fn with_sink(&self, sink: Option<i64>) -> Self {
        Configuration { sink, ..self.clone() }
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        let (m, n) = (self.shape.m, self.shape.n);
        (0..m - 1).map(Vertex::A).chain(std::iter::once(Vertex::Sink)).chain((0..n).map(Vertex::B))
    }

    pub fn non_sink_vertices(&self) -> impl Iterator<Item = Vertex> {
        self.vertices().filter(|v| *v != Vertex::Sink)
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        match v {
            Vertex::A(i) if i + 1 >= self.shape.m => Err(SandpileError::InvalidVertex(format!("{v} on {}", self.shape))),
            Vertex::B(j) if j >= self.shape.n => Err(SandpileError::InvalidVertex(format!("{v} on {}", self.shape))),
            _ => Ok(()),
        }
    }

    /// Value at `v`; `None` only for the sink of a partial configuration.
    pub fn value(&self, v: Vertex) -> Result<Option<i64>> {
        self.check_vertex(v)?;
        Ok(match v {
            Vertex::A(i) => Some(self.a[i]),
            Vertex::Sink => self.sink,
            Vertex::B(j) => Some(self.b[j]),
        })
    }

    pub fn with_value(&self, v: Vertex, x: i64) -> Result<Self> {
        self.check_vertex(v)?;
        let mut out = self.clone();
        match v {
            Vertex::A(i) => out.a[i] = x,
            Vertex::Sink => out.sink = Some(x),
            Vertex::B(j) => out.b[j] = x,
        }
        Ok(out)
    }

    /// Sum of all values, sink included.
    pub fn degree(&self) -> Result<i64> {
        let sink = self.sink_value()?;
        self.a
            .iter()
            .chain(self.b.iter())
            .try_fold(sink, |acc, &x| acc.checked_add(x))
            .ok_or(overflow("degree"))
    }

    /// `u - Δ^{(v)}`: `v` loses its degree and each neighbour gains one.
    pub fn topple(&self, v: Vertex) -> Result<Self> {
        self.sink_value()?;
        self.check_vertex(v)?;
        let (na, nb) = (self.shape.a_degree(), self.shape.b_degree());
        let mut out = self.clone();
        match v {
            Vertex::A(_) | Vertex::Sink => {
                let slot = match v {
                    Vertex::A(i) => &mut out.a[i],
                    _ => out.sink.as_mut().expect("sink checked"),
                };
                *slot = slot.checked_sub(na).ok_or(overflow("topple"))?;
                for x in out.b.iter_mut() {
                    *x = x.checked_add(1).ok_or(overflow("topple"))?;
                }
            }
            Vertex::B(j) => {
                out.b[j] = out.b[j].checked_sub(nb).ok_or(overflow("topple"))?;
                for x in out.a.iter_mut() {
                    *x = x.checked_add(1).ok_or(overflow("topple"))?;
                }
                let s = out.sink.as_mut().expect("sink checked");
                *s = s.checked_add(1).ok_or(overflow("topple"))?;
            }
        }
        Ok(out)
    }

    /// `u - Δ^{(C)}` for a set of non-sink vertices. Repeated entries count once.
    /// The sink of a partial configuration stays absent.
    pub fn topple_set(&self, set: &[Vertex]) -> Result<Self> {
        let (m, n) = (self.shape.m, self.shape.n);
        let mut in_a = vec![false; m - 1];
        let mut in_b = vec![false; n];
        for &v in set {
            self.check_vertex(v)?;
            match v {
                Vertex::A(i) => in_a[i] = true,
                Vertex::B(j) => in_b[j] = true,
                Vertex::Sink => return Err(SandpileError::SinkInSet),
            }
        }
        let ca = in_a.iter().filter(|&&x| x).count() as i64;
        let cb = in_b.iter().filter(|&&x| x).count() as i64;
        let ov = || overflow("topple_set");
        let mut out = self.clone();
        for (x, &hit) in out.a.iter_mut().zip(&in_a) {
            let lost = if hit { self.shape.a_degree() } else { 0 };
            *x = x.checked_add(cb).and_then(|y| y.checked_sub(lost)).ok_or_else(ov)?;
        }
        for (x, &hit) in out.b.iter_mut().zip(&in_b) {
            let lost = if hit { self.shape.b_degree() } else { 0 };
            *x = x.checked_add(ca).and_then(|y| y.checked_sub(lost)).ok_or_else(ov)?;
        }
        if let Some(s) = out.sink.as_mut() {
            *s = s.checked_add(cb).ok_or_else(ov)?;
        }
        Ok(out)
    }

    pub fn checked_add(&self, other: &Configuration) -> Result<Self> {
        self.zip_with(other, i64::checked_add)
    }

    pub fn checked_sub(&self, other: &Configuration) -> Result<Self> {
        self.zip_with(other, i64::checked_sub)
    }

    fn zip_with(&self, other: &Configuration, op: fn(i64, i64) -> Option<i64>) -> Result<Self> {
        if self.shape != other.shape {
            return Err(SandpileError::Precondition(format!("shapes {} and {} differ", self.shape, other.shape)));
        }
        let sink = match (self.sink, other.sink) {
            (Some(x), Some(y)) => Some(op(x, y).ok_or(overflow("configuration arithmetic"))?),
            (None, None) => None,
            _ => return Err(SandpileError::PartialConfiguration),
        };
        let zip = |p: &[i64], q: &[i64]| -> Result<Vec<i64>> {
            p.iter().zip(q).map(|(&x, &y)| op(x, y).ok_or(overflow("configuration arithmetic"))).collect()
        };
        Ok(Configuration { shape: self.shape, a: zip(&self.a, &other.a)?, sink, b: zip(&self.b, &other.b)? })
    }

    /// Every non-sink value below the vertex degree.
    pub fn is_quasi_stable(&self) -> bool {
        let (na, nb) = (self.shape.a_degree(), self.shape.b_degree());
        self.a.iter().all(|&x| x < na) && self.b.iter().all(|&x| x < nb)
    }

    pub fn is_stable(&self) -> bool {
        self.is_quasi_stable() && self.is_nonnegative_outside_sink()
    }

    pub fn is_nonnegative_outside_sink(&self) -> bool {
        self.a.iter().chain(self.b.iter()).all(|&x| x >= 0)
    }

    pub fn is_sorted(&self) -> bool {
        self.a.windows(2).all(|w| w[0] <= w[1]) && self.b.windows(2).all(|w| w[0] <= w[1])
    }

    /// Spread of the a-values at most `n` and of the b-values at most `m`.
    pub fn is_compact(&self) -> bool {
        fn spread(v: &[i64]) -> i128 {
            match (v.iter().min(), v.iter().max()) {
                (Some(&lo), Some(&hi)) => hi as i128 - lo as i128,
                _ => 0,
            }
        }
        spread(&self.a) <= self.shape.n as i128 && spread(&self.b) <= self.shape.m as i128
    }

    /// A stable configuration toppling-equivalent to `self`, in O(m+n).
    ///
    /// The b-values are reduced mod `m` first; the quotients are pushed onto
    /// every a-vertex, which are then reduced mod `n`. The sink absorbs the
    /// difference so that the degree is unchanged.
    pub fn stabilize_equiv(&self) -> Result<Self> {
        let degree = self.degree()?;
        let (m, n) = (self.shape.b_degree(), self.shape.a_degree());
        let mut quotient_sum: i64 = 0;
        let mut b = Vec::with_capacity(self.b.len());
        for &x in &self.b {
            quotient_sum = quotient_sum.checked_add(x.div_euclid(m)).ok_or(overflow("stabilize_equiv"))?;
            b.push(x.rem_euclid(m));
        }
        let mut a = Vec::with_capacity(self.a.len());
        for &x in &self.a {
            let shifted = x.checked_add(quotient_sum).ok_or(overflow("stabilize_equiv"))?;
            a.push(shifted.rem_euclid(n));
        }
        let rest: i64 = a.iter().chain(b.iter()).sum();
        let sink = degree.checked_sub(rest).ok_or(overflow("stabilize_equiv"))?;
        Ok(Configuration { shape: self.shape, a, sink: Some(sink), b })
    }

    /// Sorts both parts of a stable configuration by counting sort.
    pub fn sort_config(&self) -> Result<Self> {
        if !self.is_stable() {
            return Err(SandpileError::Precondition("sort_config needs a stable configuration".into()));
        }
        Ok(Configuration {
            shape: self.shape,
            a: counting_sort(self.shape.n - 1, &self.a)?,
            sink: self.sink,
            b: counting_sort(self.shape.m - 1, &self.b)?,
        })
    }

    /// Whether the configuration is toppling-equivalent to a non-negative one.
    pub fn is_effective(&self) -> Result<bool> {
        Ok(crate::rank::park_sort(self)?.sink_value()? >= 0)
    }
}

/// Weakly increasing rearrangement of values in `[0, bound]`.
pub fn counting_sort(bound: usize, values: &[i64]) -> Result<Vec<i64>> {
    let counts = histogram(bound, values)?;
    let mut out = Vec::with_capacity(values.len());
    for (v, &c) in counts.iter().enumerate() {
        out.extend(std::iter::repeat(v as i64).take(c));
    }
    Ok(out)
}

/// Stable sorting permutation: `values[order[k]]` is weakly increasing in `k`.
pub fn counting_sort_order(bound: usize, values: &[i64]) -> Result<Vec<usize>> {
    let counts = histogram(bound, values)?;
    let mut start = Vec::with_capacity(counts.len());
    let mut acc = 0;
    for &c in &counts {
        start.push(acc);
        acc += c;
    }
    let mut order = vec![0; values.len()];
    for (i, &x) in values.iter().enumerate() {
        let slot = &mut start[x as usize];
        order[*slot] = i;
        *slot += 1;
    }
    Ok(order)
}

fn histogram(bound: usize, values: &[i64]) -> Result<Vec<usize>> {
    let mut counts = vec![0usize; bound + 1];
    for &x in values {
        if x < 0 || x as u64 > bound as u64 {
            return Err(SandpileError::OutOfRange { value: x, bound });
        }
        counts[x as usize] += 1;
    }
    Ok(counts)
}

#[derive(Serialize, Deserialize)]
struct ConfigurationJson {
    m: usize,
    n: usize,
    a: Vec<i64>,
    #[serde(default)]
    sink: Option<i64>,
    b: Vec<i64>,
}

impl TryFrom<ConfigurationJson> for Configuration {
    type Error = SandpileError;

    fn try_from(j: ConfigurationJson) -> Result<Self> {
        Configuration::new(GraphShape::new(j.m, j.n)?, j.a, j.sink, j.b)
    }
}

impl From<Configuration> for ConfigurationJson {
    fn from(u: Configuration) -> Self {
        ConfigurationJson { m: u.shape.m, n: u.shape.n, a: u.a, sink: u.sink, b: u.b }
    }
}

fn join(v: &[i64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// `<a_1,...,a_{m-1};sink|b_1,...,b_n>` with `*` for a missing sink.
impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sink = self.sink.map_or("*".to_string(), |s| s.to_string());
        write!(f, "<{};{}|{}>", join(&self.a), sink, join(&self.b))
    }
}

impl FromStr for Configuration {
    type Err = SandpileError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || SandpileError::Parse(format!("expected <a..;sink|b..>, got {s:?}"));
        let body = s.trim();
        let body = body
            .strip_prefix('<')
            .or_else(|| body.strip_prefix('⟨'))
            .and_then(|t| t.strip_suffix('>').or_else(|| t.strip_suffix('⟩')))
            .ok_or_else(bad)?;
        let (a_part, rest) = body.split_once(';').ok_or_else(bad)?;
        let (sink_part, b_part) = rest.split_once('|').ok_or_else(bad)?;
        let list = |t: &str| -> Result<Vec<i64>> {
            let t = t.trim();
            if t.is_empty() {
                return Ok(Vec::new());
            }
            t.split(',').map(|x| x.trim().parse::<i64>().map_err(|_| bad())).collect()
        };
        let sink = match sink_part.trim() {
            "*" => None,
            t => Some(t.parse::<i64>().map_err(|_| bad())?),
        };
        Configuration::from_parts(&list(a_part)?, sink, &list(b_part)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(s: &str) -> Configuration {
        s.parse().unwrap()
    }

    #[test]
    fn degree_of_running_example() {
        assert_eq!(cfg("<0,0,0,3,3,3;21|0,0,0,3,3>").degree().unwrap(), 36);
        assert_eq!(Configuration::zero(GraphShape::new(2, 2).unwrap()).degree().unwrap(), 0);
        assert_eq!(cfg("<0;*|0,0>").degree(), Err(SandpileError::PartialConfiguration));
    }

    #[test]
    fn topple_a_vertex_on_zero() {
        let u = Configuration::zero(GraphShape::new(2, 2).unwrap());
        let t = u.topple(Vertex::A(0)).unwrap();
        assert_eq!(t, cfg("<-2;0|1,1>"));
        assert!(u.topple(Vertex::A(1)).is_err());
        assert!(u.topple(Vertex::B(2)).is_err());
    }

    #[test]
    fn toppling_everything_is_identity() {
        let u = cfg("<3,-1;4|2,7,0>");
        let mut t = u.clone();
        for v in u.vertices().collect::<Vec<_>>() {
            t = t.topple(v).unwrap();
        }
        assert_eq!(t, u);
    }

    #[test]
    fn topple_set_of_all_non_sink_untopples_sink() {
        let u = cfg("<3,-1;4|2,7,0>");
        let all: Vec<_> = u.non_sink_vertices().collect();
        let untoppled = u.topple_set(&all).unwrap();
        // u + Δ^{(sink)}: sink gains n, each b loses one
        assert_eq!(untoppled, cfg("<3,-1;7|1,6,-1>"));
        assert_eq!(u.topple_set(&[]).unwrap(), u);
        assert_eq!(u.topple_set(&[Vertex::Sink]), Err(SandpileError::SinkInSet));
    }

    #[test]
    fn stability_predicates() {
        let u = cfg("<0,0,0,2,2,2;*|0,0,4,4,4>");
        assert!(u.is_stable() && u.is_sorted());
        let v = cfg("<2,0,2,2,0,0;*|4,4,0,0,4>");
        assert!(v.is_stable() && !v.is_sorted());
        let w = cfg("<5,0,0,0,0,0;*|0,0,0,0,0>");
        assert!(!w.is_quasi_stable());
        assert!(cfg("<-3;*|0,1>").is_quasi_stable());
        assert!(!cfg("<-3;*|0,1>").is_stable());
    }

    #[test]
    fn sort_example() {
        let v = cfg("<2,0,2,2,0,0;*|4,4,0,0,4>");
        assert_eq!(v.sort_config().unwrap(), cfg("<0,0,0,2,2,2;*|0,0,4,4,4>"));
        assert_eq!(counting_sort(6, &[4, 4, 0, 0, 4]).unwrap(), vec![0, 0, 4, 4, 4]);
        assert!(counting_sort(3, &[4]).is_err());
        assert!(cfg("<7;0|0,0>").sort_config().is_err());
    }

    #[test]
    fn counting_sort_order_is_stable() {
        let order = counting_sort_order(3, &[2, 0, 2, 1, 0]).unwrap();
        assert_eq!(order, vec![1, 4, 3, 0, 2]);
    }

    #[test]
    fn stabilize_small() {
        let u = cfg("<5;0|7,-3>");
        let s = u.stabilize_equiv().unwrap();
        assert!(s.is_stable());
        assert_eq!(s.degree().unwrap(), u.degree().unwrap());
        let stable = cfg("<1,0;9|2,0,1>");
        assert_eq!(stable.stabilize_equiv().unwrap(), stable);
    }

    #[test]
    fn compactness() {
        assert!(cfg("<0,0,0,3,3,3;*|1,1,1,4,4>").is_compact());
        assert!(cfg("<-1,2;*|0,2,-1>").is_compact());
        assert!(!cfg("<-1,2;*|0,3,-1>").is_compact());
        assert!(!cfg("<0,6;*|0,0,0>").is_compact());
    }

    #[test]
    fn text_and_json_round_trip() {
        let u = cfg("<0,0,0,3,3,3;21|0,0,0,3,3>");
        assert_eq!(u.to_string().parse::<Configuration>().unwrap(), u);
        let j = serde_json::to_string(&u).unwrap();
        assert_eq!(j, r#"{"m":7,"n":5,"a":[0,0,0,3,3,3],"sink":21,"b":[0,0,0,3,3]}"#);
        assert_eq!(serde_json::from_str::<Configuration>(&j).unwrap(), u);
        let p: Configuration = serde_json::from_str(r#"{"m":2,"n":1,"a":[0],"b":[0]}"#).unwrap();
        assert!(p.is_partial());
        assert!(serde_json::from_str::<Configuration>(r#"{"m":2,"n":1,"a":[],"b":[0]}"#).is_err());
        let k11: Configuration = "<;3|0>".parse().unwrap();
        assert_eq!(k11.shape(), GraphShape::new(1, 1).unwrap());
    }
}
