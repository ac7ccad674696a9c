//! Truncated super-Weyl algebra in the variables `t_m^a`.
//!
//! A `WeylMonomial` is a normal-ordered word `hbar^p t... d...` with all
//! creators left of all annihilators and each group sorted by index. The
//! variable `t_m^a` carries the parity of the basis element `phi_a`; odd
//! symbols anticommute among themselves and square to zero, and every sign
//! in the engine arises from counting odd-odd transpositions.
//!
//! `hbar` is a formal central even variable with integer power. The dilaton
//! operator's `hbar d/d hbar` piece is carried as a separate scalar tag that
//! participates in linear arithmetic and equality but not in products.

use crate::rat::Q;
use crate::sympoly::Scalar;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Index of the variable `t_m^a` (level `m`, basis slot `a`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct VarIdx {
    pub level: i64,
    pub a: usize,
}

impl VarIdx {
    pub fn new(level: i64, a: usize) -> Self {
        VarIdx { level, a }
    }
}

/// Normal-ordered monomial `hbar^h * t[c1] ... t[ck] * d[a1] ... d[al]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct WeylMonomial {
    pub hbar: i32,
    pub creators: Vec<VarIdx>,
    pub annihilators: Vec<VarIdx>,
}

impl WeylMonomial {
    pub fn constant(hbar: i32) -> Self {
        WeylMonomial {
            hbar,
            creators: Vec::new(),
            annihilators: Vec::new(),
        }
    }

    pub fn max_level(&self) -> i64 {
        self.creators
            .iter()
            .chain(&self.annihilators)
            .map(|v| v.level)
            .max()
            .unwrap_or(0)
    }
}

/// Sort a symbol list, tracking the sign from odd-odd transpositions.
/// `None` when an odd symbol repeats (the term vanishes).
fn canonical_sort(mut v: Vec<VarIdx>, parities: &[i8]) -> Option<(Vec<VarIdx>, i32)> {
    let mut sign = 1i32;
    // insertion sort; each adjacent swap of two odd symbols flips the sign
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j] < v[j - 1] {
            if parities[v[j].a] < 0 && parities[v[j - 1].a] < 0 {
                sign = -sign;
            }
            v.swap(j, j - 1);
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] && parities[w[0].a] < 0 {
            return None;
        }
    }
    Some((v, sign))
}

/// A finite linear combination of normal-ordered monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffOperator<S: Scalar> {
    pub terms: BTreeMap<WeylMonomial, S>,
    /// Parity (+1/-1) of each basis slot.
    pub parities: Vec<i8>,
    /// Coefficient of the formal `hbar d/d hbar` tag.
    pub hbar_euler: S,
}

impl<S: Scalar> DiffOperator<S> {
    pub fn zero(parities: &[i8]) -> Self {
        DiffOperator {
            terms: BTreeMap::new(),
            parities: parities.to_vec(),
            hbar_euler: S::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.hbar_euler.is_zero()
    }

    fn insert(&mut self, m: WeylMonomial, c: S) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                let s = e.get().add_ref(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    /// Add `coeff * hbar^h * t[creators] d[annihilators]` (any symbol order;
    /// canonicalization handles signs and odd squares).
    pub fn add_term(&mut self, creators: Vec<VarIdx>, annihilators: Vec<VarIdx>, hbar: i32, coeff: S) {
        if coeff.is_zero() {
            return;
        }
        let Some((cs, s1)) = canonical_sort(creators, &self.parities) else {
            return;
        };
        let Some((ds, s2)) = canonical_sort(annihilators, &self.parities) else {
            return;
        };
        let mut c = coeff;
        if s1 * s2 < 0 {
            c = c.neg_ref();
        }
        self.insert(
            WeylMonomial {
                hbar,
                creators: cs,
                annihilators: ds,
            },
            c,
        );
    }

    pub fn add_constant(&mut self, hbar: i32, coeff: S) {
        self.add_term(Vec::new(), Vec::new(), hbar, coeff);
    }

    pub fn add(&self, other: &DiffOperator<S>) -> DiffOperator<S> {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out.hbar_euler = out.hbar_euler.add_ref(&other.hbar_euler);
        out
    }

    pub fn sub(&self, other: &DiffOperator<S>) -> DiffOperator<S> {
        self.add(&other.scale_neg())
    }

    fn scale_neg(&self) -> DiffOperator<S> {
        DiffOperator {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg_ref()))
                .collect(),
            parities: self.parities.clone(),
            hbar_euler: self.hbar_euler.neg_ref(),
        }
    }

    pub fn scale(&self, c: &S) -> DiffOperator<S> {
        if c.is_zero() {
            return DiffOperator::zero(&self.parities);
        }
        DiffOperator {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.mul_ref(c)))
                .collect(),
            parities: self.parities.clone(),
            hbar_euler: self.hbar_euler.mul_ref(c),
        }
    }

    pub fn scale_q(&self, c: &Q) -> DiffOperator<S> {
        self.scale(&S::from_q(c))
    }

    fn parity_of(&self, v: VarIdx) -> bool {
        self.parities[v.a] < 0
    }

    /// Normal-order `d[...] t[...]`: returns `(sign, surviving creators,
    /// surviving annihilators)` triples with creators/annihilators in the
    /// word order they had.
    fn reorder(&self, d: &[VarIdx], t: &[VarIdx]) -> Vec<(i32, Vec<VarIdx>, Vec<VarIdx>)> {
        if d.is_empty() {
            return vec![(1, t.to_vec(), Vec::new())];
        }
        // peel the rightmost annihilator u: D T = D' (u T)
        let u = *d.last().unwrap();
        let d_rest = &d[..d.len() - 1];
        let u_odd = self.parity_of(u);
        let mut out = Vec::new();
        // u passes t_1 ... t_q, contracting where indices match
        let mut pass_sign = 1i32;
        for (k, &tv) in t.iter().enumerate() {
            if tv == u {
                // contraction: delete t_k, sign from symbols crossed so far
                let mut t2 = t.to_vec();
                t2.remove(k);
                for r in self.reorder(d_rest, &t2) {
                    out.push((r.0 * pass_sign, r.1, r.2));
                }
            }
            if u_odd && self.parity_of(tv) {
                pass_sign = -pass_sign;
            }
        }
        // u survives to the right of all of t
        for r in self.reorder(d_rest, t) {
            let mut ds = r.2;
            ds.push(u);
            out.push((r.0 * pass_sign, r.1, ds));
        }
        out
    }

    /// Operator composition with normal ordering.
    pub fn mul(&self, other: &DiffOperator<S>) -> DiffOperator<S> {
        assert!(
            self.hbar_euler.is_zero() && other.hbar_euler.is_zero(),
            "hbar-Euler tags do not participate in products"
        );
        let mut out = DiffOperator::zero(&self.parities);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let c = c1.mul_ref(c2);
                for (sign, t_surv, d_surv) in self.reorder(&m1.annihilators, &m2.creators) {
                    let mut creators = m1.creators.clone();
                    creators.extend(t_surv);
                    let mut annihilators = d_surv;
                    annihilators.extend(m2.annihilators.iter().copied());
                    let cc = if sign < 0 { c.neg_ref() } else { c.clone() };
                    out.add_term(creators, annihilators, m1.hbar + m2.hbar, cc);
                }
            }
        }
        out
    }

    /// Plain commutator `AB - BA`.
    pub fn commutator(&self, other: &DiffOperator<S>) -> DiffOperator<S> {
        self.mul(other).sub(&other.mul(self))
    }

    /// Parity of the operator: `Some(false)` even, `Some(true)` odd,
    /// `None` when inhomogeneous.
    pub fn op_parity(&self) -> Option<bool> {
        let mut parity = None;
        for m in self.terms.keys() {
            let p = m
                .creators
                .iter()
                .chain(&m.annihilators)
                .filter(|v| self.parity_of(**v))
                .count()
                % 2
                == 1;
            match parity {
                None => parity = Some(p),
                Some(q) if q == p => {}
                _ => return None,
            }
        }
        parity.or(Some(false)).into()
    }

    /// Super-commutator `AB - (-1)^{|A||B|} BA` for homogeneous operators.
    pub fn super_commutator(&self, other: &DiffOperator<S>) -> DiffOperator<S> {
        let pa = self.op_parity().expect("left operand inhomogeneous");
        let pb = other.op_parity().expect("right operand inhomogeneous");
        let ba = other.mul(self);
        if pa && pb {
            self.mul(other).add(&ba)
        } else {
            self.mul(other).sub(&ba)
        }
    }

    /// Drop every term that touches a level above `max_level`.
    pub fn truncate_levels(&self, max_level: i64) -> DiffOperator<S> {
        DiffOperator {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.max_level() <= max_level)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
            parities: self.parities.clone(),
            hbar_euler: self.hbar_euler.clone(),
        }
    }

    /// Substitute `t_{level}^{a} -> t_{level}^{a} - 1` on the creator side
    /// (the dilaton shift). The shifted slot must be even.
    pub fn shift_creator(&self, level: i64, a: usize) -> DiffOperator<S> {
        assert!(self.parities[a] > 0, "dilaton shift slot must be even");
        let target = VarIdx::new(level, a);
        let mut out = DiffOperator::zero(&self.parities);
        out.hbar_euler = self.hbar_euler.clone();
        for (m, c) in &self.terms {
            let k = m.creators.iter().filter(|v| **v == target).count();
            if k == 0 {
                out.insert(m.clone(), c.clone());
                continue;
            }
            let others: Vec<VarIdx> = m
                .creators
                .iter()
                .copied()
                .filter(|v| *v != target)
                .collect();
            // (t - 1)^k = sum_j C(k, j) t^j (-1)^(k-j)
            let mut binom = 1i64;
            for j in 0..=k {
                // C(k, j)
                if j > 0 {
                    binom = binom * (k - j + 1) as i64 / j as i64;
                }
                let mut creators = others.clone();
                creators.extend(std::iter::repeat(target).take(j));
                let mut coeff = c.mul_ref(&S::from_q(&crate::rat::qi(binom)));
                if (k - j) % 2 == 1 {
                    coeff = coeff.neg_ref();
                }
                out.add_term(creators, m.annihilators.clone(), m.hbar, coeff);
            }
        }
        out
    }

    /// Sorted dump, one term per line: `coeff * hbar^p * t[m,a]... * d[m,a]...`.
    pub fn dump(&self) -> String {
        let mut lines = Vec::new();
        for (m, c) in &self.terms {
            let mut line = String::new();
            write!(line, "{}", c.render()).unwrap();
            if m.hbar != 0 {
                write!(line, " * hbar^{}", m.hbar).unwrap();
            }
            for v in &m.creators {
                write!(line, " * t[{},{}]", v.level, v.a).unwrap();
            }
            for v in &m.annihilators {
                write!(line, " * d[{},{}]", v.level, v.a).unwrap();
            }
            lines.push(line);
        }
        if !self.hbar_euler.is_zero() {
            lines.push(format!("{} * hbar_d_hbar", self.hbar_euler.render()));
        }
        lines.join("\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qi};
    use proptest::prelude::*;

    fn op(parities: &[i8]) -> DiffOperator<Q> {
        DiffOperator::zero(parities)
    }

    #[test]
    fn even_contraction() {
        // [d_x, t_x] = 1 on a single even slot
        let p = [1i8];
        let x = VarIdx::new(0, 0);
        let mut dd = op(&p);
        dd.add_term(vec![], vec![x], 0, qi(1));
        let mut tt = op(&p);
        tt.add_term(vec![x], vec![], 0, qi(1));
        let c = dd.commutator(&tt);
        let mut expect = op(&p);
        expect.add_constant(0, qi(1));
        assert_eq!(c, expect);
    }

    #[test]
    fn odd_square_vanishes() {
        let p = [-1i8];
        let x = VarIdx::new(0, 0);
        let mut tt = op(&p);
        tt.add_term(vec![x], vec![], 0, qi(1));
        assert!(tt.mul(&tt).is_zero());
    }

    #[test]
    fn odd_anticommutation_signs() {
        // two odd slots: t_a t_b = -t_b t_a
        let p = [-1i8, -1i8];
        let a = VarIdx::new(0, 0);
        let b = VarIdx::new(0, 1);
        let mut ta = op(&p);
        ta.add_term(vec![a], vec![], 0, qi(1));
        let mut tb = op(&p);
        tb.add_term(vec![b], vec![], 0, qi(1));
        let anti = ta.mul(&tb).add(&tb.mul(&ta));
        assert!(anti.is_zero());
        // d_a anti-commutes with t_b and contracts with t_a
        let mut da = op(&p);
        da.add_term(vec![], vec![a], 0, qi(1));
        let prod = da.mul(&ta); // = 1 - t_a d_a
        let mut expect = op(&p);
        expect.add_constant(0, qi(1));
        expect.add_term(vec![a], vec![a], 0, qi(-1));
        assert_eq!(prod, expect);
    }

    #[test]
    fn dilaton_shift_expands_binomially() {
        let p = [1i8];
        let v = VarIdx::new(1, 0);
        let mut tt = op(&p);
        tt.add_term(vec![v, v], vec![], 0, qi(1)); // t^2
        let shifted = tt.shift_creator(1, 0);
        let mut expect = op(&p);
        expect.add_term(vec![v, v], vec![], 0, qi(1));
        expect.add_term(vec![v], vec![], 0, qi(-2));
        expect.add_constant(0, qi(1));
        assert_eq!(shifted, expect);
    }

    #[test]
    fn truncation_drops_high_levels() {
        let p = [1i8];
        let mut a = op(&p);
        a.add_term(vec![VarIdx::new(5, 0)], vec![VarIdx::new(2, 0)], 0, qi(1));
        a.add_term(vec![VarIdx::new(1, 0)], vec![], 0, q(1, 2));
        let t = a.truncate_levels(3);
        assert_eq!(t.terms.len(), 1);
    }

    // random small operators over a two-slot space (one even, one odd)
    fn arb_operator() -> impl Strategy<Value = DiffOperator<Q>> {
        let parities = vec![1i8, -1i8];
        let sym = (0i64..3, 0usize..2).prop_map(|(l, a)| VarIdx::new(l, a));
        let term = (
            prop::collection::vec(sym.clone(), 0..2),
            prop::collection::vec(sym, 0..2),
            -2i64..3,
        );
        prop::collection::vec(term, 1..4).prop_map(move |ts| {
            let mut o = DiffOperator::zero(&parities);
            for (cs, ds, c) in ts {
                o.add_term(cs, ds, 0, qi(c));
            }
            o
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn multiplication_is_associative(a in arb_operator(), b in arb_operator(), c in arb_operator()) {
            let left = a.mul(&b).mul(&c);
            let right = a.mul(&b.mul(&c));
            prop_assert_eq!(left.terms, right.terms);
        }

        #[test]
        fn super_jacobi_identity(a in arb_operator(), b in arb_operator(), c in arb_operator()) {
            // restrict to homogeneous samples
            let (Some(pa), Some(pb), Some(_)) = (a.op_parity(), b.op_parity(), c.op_parity()) else {
                return Ok(());
            };
            // [A,[B,C]] = [[A,B],C] + (-1)^{|A||B|} [B,[A,C]]
            let lhs = a.super_commutator(&b.super_commutator(&c));
            let mut rhs = a.super_commutator(&b).super_commutator(&c);
            let t = b.super_commutator(&a.super_commutator(&c));
            rhs = if pa && pb { rhs.sub(&t) } else { rhs.add(&t) };
            prop_assert_eq!(lhs.terms, rhs.terms);
        }
    }
}
