//! Exact truncated power series in `x, y, w, h` with per-variable caps.
//!
//! Single-variable q-series reuse the `x` slot (see [`Q`]). Coefficients are
//! arbitrary-precision integers stored densely; terms beyond a cap are dropped.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Result, SandpileError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X = 0,
    Y = 1,
    W = 2,
    H = 3,
}

/// The area variable of polyomino series shares the `x` slot.
pub const Q: Var = Var::X;

pub type Exponents = [u32; 4];

const NAMES: [&str; 4] = ["x", "y", "w", "h"];

/// Largest exponent kept for each of `x, y, w, h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Caps(pub Exponents);

impl Caps {
    pub fn new(x: u32, y: u32, w: u32, h: u32) -> Self {
        Caps([x, y, w, h])
    }

    pub fn get(&self, v: Var) -> u32 {
        self.0[v as usize]
    }

    pub fn contains(&self, e: &Exponents) -> bool {
        e.iter().zip(self.0.iter()).all(|(a, c)| a <= c)
    }

    fn strides(&self) -> [usize; 4] {
        let d = self.0.map(|c| c as usize + 1);
        [d[1] * d[2] * d[3], d[2] * d[3], d[3], 1]
    }

    fn len(&self) -> usize {
        self.0.iter().map(|&c| c as usize + 1).product()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    caps: Caps,
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    pub fn zero(caps: Caps) -> Self {
        TruncatedSeries { caps, coeffs: vec![BigInt::zero(); caps.len()] }
    }

    pub fn one(caps: Caps) -> Self {
        Self::monomial(caps, [0; 4], 1)
    }

    /// `coeff * x^a y^b w^c h^d`, or zero when the exponents exceed the caps.
    pub fn monomial(caps: Caps, e: Exponents, coeff: impl Into<BigInt>) -> Self {
        let mut s = Self::zero(caps);
        s.accumulate(e, coeff);
        s
    }

    /// Single variable `v` to the first power.
    pub fn var(caps: Caps, v: Var) -> Self {
        let mut e = [0; 4];
        e[v as usize] = 1;
        Self::monomial(caps, e, 1)
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    fn index(&self, e: &Exponents) -> usize {
        let st = self.caps.strides();
        (0..4).map(|i| e[i] as usize * st[i]).sum()
    }

    fn exponents(&self, mut idx: usize) -> Exponents {
        let st = self.caps.strides();
        let mut e = [0; 4];
        for i in 0..4 {
            e[i] = (idx / st[i]) as u32;
            idx %= st[i];
        }
        e
    }

    /// Adds `coeff` to the coefficient of `e`; terms beyond the caps are discarded.
    pub fn accumulate(&mut self, e: Exponents, coeff: impl Into<BigInt>) {
        if self.caps.contains(&e) {
            let i = self.index(&e);
            self.coeffs[i] += coeff.into();
        }
    }

    pub fn coefficient(&self, e: Exponents) -> Result<BigInt> {
        if !self.caps.contains(&e) {
            return Err(SandpileError::Precondition(format!("exponents {e:?} exceed caps {:?}", self.caps.0)));
        }
        Ok(self.coeffs[self.index(&e)].clone())
    }

    /// Nonzero terms in lexicographic order of `(x, y, w, h)` exponents.
    pub fn terms(&self) -> impl Iterator<Item = (Exponents, &BigInt)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (self.exponents(i), c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn same_caps(&self, other: &Self) -> Result<()> {
        if self.caps != other.caps {
            return Err(SandpileError::Precondition(format!(
                "series caps differ: {:?} vs {:?}",
                self.caps.0, other.caps.0
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_caps(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(TruncatedSeries { caps: self.caps, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_caps(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(TruncatedSeries { caps: self.caps, coeffs })
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries { caps: self.caps, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        TruncatedSeries { caps: self.caps, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Convolution product, dropping everything beyond the caps.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_caps(other)?;
        let caps = self.caps.0;
        let st = self.caps.strides();
        let mut out = Self::zero(self.caps);
        for (e1, c1) in self.terms() {
            let base = self.index(&e1);
            for x in 0..=caps[0] - e1[0] {
                for y in 0..=caps[1] - e1[1] {
                    for w in 0..=caps[2] - e1[2] {
                        let row = x as usize * st[0] + y as usize * st[1] + w as usize * st[2];
                        for h in 0..=caps[3] - e1[3] {
                            let c2 = &other.coeffs[row + h as usize];
                            if !c2.is_zero() {
                                out.coeffs[base + row + h as usize] += c1 * c2;
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `g` with `self * g = 1` within the caps. Needs constant term 1.
    ///
    /// Solves `g_α = -Σ_{0 < β ≤ α} f_β g_{α-β}` in lexicographic order,
    /// which is the coefficient form of expanding `1/(1 - (1 - f))`.
    pub fn geom_inverse(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(SandpileError::Precondition(format!(
                "geom_inverse needs constant term 1, got {}",
                self.coeffs[0]
            )));
        }
        let nonzero: Vec<(Exponents, usize)> =
            self.terms().map(|(e, _)| e).filter(|e| *e != [0; 4]).map(|e| (e, self.index(&e))).collect();
        let mut g = Self::zero(self.caps);
        g.coeffs[0] = BigInt::one();
        for idx in 1..g.coeffs.len() {
            let alpha = g.exponents(idx);
            let mut acc = BigInt::zero();
            for (beta, bidx) in &nonzero {
                if beta.iter().zip(alpha.iter()).all(|(b, a)| b <= a) {
                    acc -= &self.coeffs[*bidx] * &g.coeffs[idx - bidx];
                }
            }
            g.coeffs[idx] = acc;
        }
        Ok(g)
    }

    /// Exchanges two variables; their caps must agree.
    pub fn swap(&self, u: Var, v: Var) -> Result<Self> {
        if self.caps.get(u) != self.caps.get(v) {
            return Err(SandpileError::Precondition("swap needs equal caps".into()));
        }
        let mut out = Self::zero(self.caps);
        for (mut e, c) in self.terms() {
            e.swap(u as usize, v as usize);
            out.accumulate(e, c.clone());
        }
        Ok(out)
    }

    /// Same series under other caps: terms beyond the new caps are dropped.
    pub fn recap(&self, caps: Caps) -> Self {
        let mut out = Self::zero(caps);
        for (e, c) in self.terms() {
            out.accumulate(e, c.clone());
        }
        out
    }

    /// One `x^a y^b w^c h^d: coeff` line per nonzero term, lexicographically sorted.
    pub fn dump(&self) -> String {
        self.dump_with(NAMES)
    }

    pub fn dump_with(&self, names: [&str; 4]) -> String {
        let mut out = String::new();
        for (e, c) in self.terms() {
            let mono: Vec<String> = (0..4).map(|i| format!("{}^{}", names[i], e[i])).collect();
            writeln!(out, "{}: {}", mono.join(" "), c).expect("write to string");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_products() {
        let caps = Caps::new(2, 2, 0, 0);
        let one = TruncatedSeries::one(caps);
        let x = TruncatedSeries::var(caps, Var::X);
        let y = TruncatedSeries::var(caps, Var::Y);
        let p = one.add(&x).unwrap().mul(&one.add(&y).unwrap()).unwrap();
        assert_eq!(p.dump(), "x^0 y^0 w^0 h^0: 1\nx^0 y^1 w^0 h^0: 1\nx^1 y^0 w^0 h^0: 1\nx^1 y^1 w^0 h^0: 1\n");
        assert_eq!(p.mul(&one).unwrap(), p);
        assert_eq!(p.add(&TruncatedSeries::zero(caps)).unwrap(), p);
        assert!(p.add(&TruncatedSeries::zero(Caps::new(1, 1, 0, 0))).is_err());
    }

    #[test]
    fn geometric_series() {
        let caps = Caps::new(6, 0, 0, 0);
        let f = TruncatedSeries::one(caps).sub(&TruncatedSeries::var(caps, Var::X)).unwrap();
        let g = f.geom_inverse().unwrap();
        for k in 0..=6 {
            assert_eq!(g.coefficient([k, 0, 0, 0]).unwrap(), BigInt::one());
        }
        assert!(g.coefficient([7, 0, 0, 0]).is_err());
        assert!(TruncatedSeries::zero(caps).geom_inverse().is_err());
    }

    #[test]
    fn axis_kernel() {
        // (1 - xy) / ((1 - x)(1 - y)) keeps exactly the monomials on the two axes
        let caps = Caps::new(5, 5, 0, 0);
        let one = TruncatedSeries::one(caps);
        let x = TruncatedSeries::var(caps, Var::X);
        let y = TruncatedSeries::var(caps, Var::Y);
        let den = one.sub(&x).unwrap().mul(&one.sub(&y).unwrap()).unwrap();
        let k = one.sub(&x.mul(&y).unwrap()).unwrap().mul(&den.geom_inverse().unwrap()).unwrap();
        for a in 0..=5 {
            for b in 0..=5 {
                let expected = if a == 0 || b == 0 { 1 } else { 0 };
                assert_eq!(k.coefficient([a, b, 0, 0]).unwrap(), BigInt::from(expected), "{a},{b}");
            }
        }
    }

    #[test]
    fn coefficients_beyond_64_bits() {
        let caps = Caps::new(1, 0, 0, 0);
        let big = TruncatedSeries::monomial(caps, [0; 4], BigInt::from(u64::MAX));
        let sq = big.mul(&big).unwrap();
        let expected = BigInt::from(u64::MAX) * BigInt::from(u64::MAX);
        assert_eq!(sq.coefficient([0; 4]).unwrap(), expected);
    }
}
