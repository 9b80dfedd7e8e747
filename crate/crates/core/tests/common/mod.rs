#![allow(dead_code)]

use kmn_sandpile::{Configuration, GraphShape};
use rand::Rng;

/// All weakly increasing sequences of length `len` with entries in `[lo, hi]`.
pub fn sorted_tuples(len: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    fn go(len: usize, from: i64, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for x in from..=hi {
            cur.push(x);
            go(len, x, hi, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(len, lo, hi, &mut Vec::new(), &mut out);
    out
}

/// Every stable sorted configuration of the shape, with the given sink.
pub fn stable_sorted(shape: GraphShape, sink: Option<i64>) -> Vec<Configuration> {
    let (m, n) = (shape.m, shape.n);
    let mut out = Vec::new();
    for a in sorted_tuples(m - 1, 0, n as i64 - 1) {
        for b in sorted_tuples(n, 0, m as i64 - 1) {
            out.push(Configuration::new(shape, a.clone(), sink, b).unwrap());
        }
    }
    out
}

pub fn shape(m: usize, n: usize) -> GraphShape {
    GraphShape::new(m, n).unwrap()
}

pub fn random_config(rng: &mut impl Rng, shape: GraphShape, lo: i64, hi: i64) -> Configuration {
    let a = (0..shape.m - 1).map(|_| rng.gen_range(lo..=hi)).collect();
    let b = (0..shape.n).map(|_| rng.gen_range(lo..=hi)).collect();
    Configuration::new(shape, a, Some(rng.gen_range(lo..=hi)), b).unwrap()
}

pub fn cfg(s: &str) -> Configuration {
    s.parse().unwrap()
}
