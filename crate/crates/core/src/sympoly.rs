//! Scalar rings for operator coefficients.
//!
//! The operator engines are generic over a commutative coefficient ring:
//! plain rationals for state-space operators, and `SymPoly` — polynomials in
//! two formal symbols with rational coefficients — wherever a formal
//! deformation parameter is carried along exactly (the symbols are never
//! evaluated).

use crate::rat::{fmt_q, Q};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Commutative ring of operator coefficients.
pub trait Scalar: Clone + PartialEq + Eq + std::fmt::Debug + Zero + One {
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn from_q(c: &Q) -> Self;
    fn render(&self) -> String;
}

impl Scalar for Q {
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_q(c: &Q) -> Self {
        c.clone()
    }
    fn render(&self) -> String {
        fmt_q(self)
    }
}

/// Polynomial in two formal symbols `u`, `v` over the rationals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SymPoly {
    pub terms: BTreeMap<(u32, u32), Q>,
}

impl SymPoly {
    pub fn constant(c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((0, 0), c);
        }
        SymPoly { terms }
    }

    /// `c * u^i * v^j`.
    pub fn term(c: Q, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        SymPoly { terms }
    }

    pub fn u() -> Self {
        Self::term(Q::one(), 1, 0)
    }

    pub fn v() -> Self {
        Self::term(Q::one(), 0, 1)
    }

    fn add_term(&mut self, key: (u32, u32), c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if Zero::is_zero(e.get()) {
                    e.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    /// Total degree in each symbol: `(deg_u, deg_v)`.
    pub fn degrees(&self) -> (u32, u32) {
        let du = self.terms.keys().map(|k| k.0).max().unwrap_or(0);
        let dv = self.terms.keys().map(|k| k.1).max().unwrap_or(0);
        (du, dv)
    }

    /// Exact division; `None` when the divisor does not divide evenly.
    pub fn div_exact(&self, d: &SymPoly) -> Option<SymPoly> {
        if d.is_zero() {
            return None;
        }
        let mut rem = self.clone();
        let mut quo = SymPoly::constant(Q::zero());
        let (dk, dc) = d.terms.iter().next_back().map(|(k, c)| (*k, c.clone()))?;
        while !rem.is_zero() {
            let (rk, rc) = rem
                .terms
                .iter()
                .next_back()
                .map(|(k, c)| (*k, c.clone()))
                .unwrap();
            if rk.0 < dk.0 || rk.1 < dk.1 {
                return None;
            }
            let qk = (rk.0 - dk.0, rk.1 - dk.1);
            let qc = rc / &dc;
            let piece = SymPoly::term(qc, qk.0, qk.1);
            rem = rem.sub_ref(&piece.mul_ref(d));
            quo = quo.add_ref(&piece);
        }
        Some(quo)
    }

    /// Render with the given symbol names.
    pub fn render_with(&self, u: &str, v: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for ((i, j), c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            if !c.is_one() || (*i == 0 && *j == 0) {
                factors.push(fmt_q(c));
            }
            if *i == 1 {
                factors.push(u.to_string());
            } else if *i > 1 {
                factors.push(format!("{u}^{i}"));
            }
            if *j == 1 {
                factors.push(v.to_string());
            } else if *j > 1 {
                factors.push(format!("{v}^{j}"));
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

impl std::ops::Add for SymPoly {
    type Output = SymPoly;
    fn add(self, other: SymPoly) -> SymPoly {
        self.add_ref(&other)
    }
}

impl std::ops::Mul for SymPoly {
    type Output = SymPoly;
    fn mul(self, other: SymPoly) -> SymPoly {
        self.mul_ref(&other)
    }
}

impl Zero for SymPoly {
    fn zero() -> Self {
        SymPoly::constant(Q::zero())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for SymPoly {
    fn one() -> Self {
        SymPoly::constant(Q::one())
    }
}

impl Scalar for SymPoly {
    fn add_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        out
    }
    fn sub_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, -c.clone());
        }
        out
    }
    fn mul_ref(&self, other: &Self) -> Self {
        let mut out = SymPoly::constant(Q::zero());
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                out.add_term((k1.0 + k2.0, k1.1 + k2.1), c1 * c2);
            }
        }
        out
    }
    fn neg_ref(&self) -> Self {
        SymPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }
    fn from_q(c: &Q) -> Self {
        SymPoly::constant(c.clone())
    }
    fn render(&self) -> String {
        self.render_with("u", "v")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qi;

    #[test]
    fn exact_division() {
        // (u^2 v - u v^2) / (u v) = u - v
        let p = SymPoly::term(qi(1), 2, 1).sub_ref(&SymPoly::term(qi(1), 1, 2));
        let d = SymPoly::term(qi(1), 1, 1);
        let q = p.div_exact(&d).unwrap();
        let expect = SymPoly::term(qi(1), 1, 0).sub_ref(&SymPoly::term(qi(1), 0, 1));
        assert_eq!(q, expect);
        // non-divisible
        assert!(SymPoly::u().div_exact(&SymPoly::v()).is_none());
    }

    #[test]
    fn render_names() {
        let p = SymPoly::term(qi(-3), 2, 4);
        assert_eq!(p.render_with("C", "t"), "-3*C^2*t^4");
    }
}
