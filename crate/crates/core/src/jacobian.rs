//! Jacobian ideals, Groebner normal forms, Milnor algebra monomial bases,
//! and the Grothendieck residue pairing.
//!
//! The monomial order is weighted degree (using the polynomial's own weight
//! system, cleared to integers) with graded reverse lexicographic
//! tie-breaking, so Buchberger runs degree by degree on quasi-homogeneous
//! input. The residue is normalized by `Res(hess W) = mu`, which reproduces
//! the classical one-variable residue integral.

use crate::error::{Error, Result};
use crate::poly::{hessian, Monomial, QHPolynomial};
use crate::rat::{denominator_lcm, mul_to_integer, qi, Q};
use num_bigint::BigInt;
use num_traits::Zero;
use std::cmp::Ordering;


/// Weighted-degrevlex monomial order with exact integer weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialOrder {
    pub int_weights: Vec<BigInt>,
}

impl MonomialOrder {
    pub fn from_weights(weights: &[Q]) -> Self {
        let l = denominator_lcm(weights.iter());
        MonomialOrder {
            int_weights: weights.iter().map(|w| mul_to_integer(w, &l)).collect(),
        }
    }

    pub fn weighted_degree(&self, m: &Monomial) -> BigInt {
        m.0.iter()
            .zip(&self.int_weights)
            .map(|(&e, w)| w * BigInt::from(e))
            .sum()
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.weighted_degree(a).cmp(&self.weighted_degree(b)) {
            Ordering::Equal => {}
            o => return o,
        }
        // grevlex tie-break: the last differing exponent decides, smaller wins
        for i in (0..a.0.len()).rev() {
            match a.0[i].cmp(&b.0[i]) {
                Ordering::Equal => {}
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
            }
        }
        Ordering::Equal
    }

    pub fn leading_monomial<'a>(&self, p: &'a QHPolynomial) -> Option<&'a Monomial> {
        p.terms.keys().max_by(|a, b| self.cmp(a, b))
    }
}

/// Reduced Groebner basis with monic inter-reduced generators.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    pub generators: Vec<QHPolynomial>,
    pub order: MonomialOrder,
    leading: Vec<Monomial>,
}

impl GroebnerBasis {
    pub fn leading_monomials(&self) -> &[Monomial] {
        &self.leading
    }
}

/// The partial derivatives of `W`.
pub fn jacobian_ideal(w: &QHPolynomial) -> Vec<QHPolynomial> {
    (0..w.nvars).map(|i| w.derivative(i)).collect()
}

fn reduce_once(p: &QHPolynomial, basis: &[(Monomial, QHPolynomial)], order: &MonomialOrder) -> QHPolynomial {
    // full normal form: every term is reduced, not just the leading one
    let mut rem = QHPolynomial::zero(p.nvars);
    let mut work = p.clone();
    'outer: while !work.is_zero() {
        let lt = order.leading_monomial(&work).unwrap().clone();
        let lc = work.terms[&lt].clone();
        for (lm, g) in basis {
            if lm.divides(&lt) {
                let shift = lm.quotient(&lt);
                work = work.sub(&g.mul_term(&shift, &lc));
                continue 'outer;
            }
        }
        work.terms.remove(&lt);
        rem.add_term(lt, lc);
    }
    rem
}

/// Buchberger's algorithm with the product criterion, followed by full
/// inter-reduction to the unique reduced basis.
pub fn groebner_basis(gens: &[QHPolynomial], order: &MonomialOrder) -> GroebnerBasis {
    let _nvars = gens.first().map(|g| g.nvars).unwrap_or(0);
    let mut basis: Vec<(Monomial, QHPolynomial)> = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        let lm = order.leading_monomial(g).unwrap().clone();
        let lc = g.terms[&lm].clone();
        basis.push((lm, g.scale(&lc.recip())));
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }
    while let Some((i, j)) = pairs.pop() {
        let (lmi, fi) = basis[i].clone();
        let (lmj, fj) = basis[j].clone();
        let lcm = lmi.lcm(&lmj);
        // product criterion: coprime leading monomials reduce to zero
        if lcm == lmi.mul(&lmj) {
            continue;
        }
        let s = fi
            .mul_term(&lmi.quotient(&lcm), &Q::from_integer(1.into()))
            .sub(&fj.mul_term(&lmj.quotient(&lcm), &Q::from_integer(1.into())));
        let r = reduce_once(&s, &basis, order);
        if !r.is_zero() {
            let lm = order.leading_monomial(&r).unwrap().clone();
            let lc = r.terms[&lm].clone();
            let k = basis.len();
            basis.push((lm, r.scale(&lc.recip())));
            for t in 0..k {
                pairs.push((t, k));
            }
        }
    }
    // minimalize: drop generators whose leading monomial is divisible by another's
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            if i != j
                && keep[j]
                && keep[i]
                && basis[j].0.divides(&basis[i].0)
                && (basis[j].0 != basis[i].0 || j < i)
            {
                keep[i] = false;
            }
        }
    }
    let minimal: Vec<(Monomial, QHPolynomial)> = basis
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(b, _)| b)
        .collect();
    // reduce tails against the rest
    let mut reduced = Vec::new();
    for i in 0..minimal.len() {
        let others: Vec<(Monomial, QHPolynomial)> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, b)| b.clone())
            .collect();
        let r = reduce_once(&minimal[i].1, &others, order);
        if !r.is_zero() {
            let lm = order.leading_monomial(&r).unwrap().clone();
            let lc = r.terms[&lm].clone();
            reduced.push((lm, r.scale(&lc.recip())));
        }
    }
    reduced.sort_by(|a, b| order.cmp(&a.0, &b.0));
    GroebnerBasis {
        leading: reduced.iter().map(|(lm, _)| lm.clone()).collect(),
        generators: reduced.iter().map(|(_, g)| g.clone()).collect(),
        order: order.clone(),
    }
}

/// Remainder of `p` modulo the basis, supported on standard monomials.
pub fn normal_form(p: &QHPolynomial, gb: &GroebnerBasis) -> QHPolynomial {
    let pairs: Vec<(Monomial, QHPolynomial)> = gb
        .leading
        .iter()
        .cloned()
        .zip(gb.generators.iter().cloned())
        .collect();
    reduce_once(p, &pairs, &gb.order)
}

/// Monomial basis of the Milnor algebra: the standard monomials.
#[derive(Debug, Clone)]
pub struct MilnorBasis {
    pub monomials: Vec<Monomial>,
    pub weights: Vec<Q>,
}

impl MilnorBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.monomials.iter().position(|x| x == m)
    }
}

fn standard_monomials(gb: &GroebnerBasis, nvars: usize, weights: &[Q]) -> Result<MilnorBasis> {
    // finiteness: every variable needs a pure power among the leading monomials
    let mut caps = vec![None; nvars];
    for lm in gb.leading_monomials() {
        let nz: Vec<usize> = (0..nvars).filter(|&i| lm.0[i] > 0).collect();
        if nz.len() == 1 {
            let i = nz[0];
            let e = lm.0[i];
            if caps[i].map(|c| e < c).unwrap_or(true) {
                caps[i] = Some(e);
            }
        }
    }
    let caps: Vec<u32> = caps
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or(Error::NonIsolatedSingularity)?;
    let mut monomials = Vec::new();
    let mut cur = vec![0u32; nvars];
    loop {
        let m = Monomial(cur.clone());
        if !gb.leading_monomials().iter().any(|lm| lm.divides(&m)) {
            monomials.push(m);
        }
        // odometer over the box prod [0, caps_i)
        let mut i = 0;
        loop {
            if i == nvars {
                let mut out = monomials;
                out.sort_by(|a, b| gb.order.cmp(a, b));
                let weights_per: Vec<Q> =
                    out.iter().map(|m| m.weighted_degree(weights)).collect();
                return Ok(MilnorBasis {
                    monomials: out,
                    weights: weights_per,
                });
            }
            cur[i] += 1;
            if cur[i] < caps[i] {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

/// A Milnor algebra with everything needed for the residue pairing.
///
/// The zero-variable convention: the empty restriction has `Jac = <1>`,
/// a single basis element, and `residue(1, 1) = 1`.
#[derive(Debug, Clone)]
pub struct JacobianRing {
    pub w: QHPolynomial,
    pub weights: Vec<Q>,
    pub gb: GroebnerBasis,
    pub basis: MilnorBasis,
    pub socle: Monomial,
    /// `mu / (coefficient of the socle in NF(hess W))`.
    res_factor: Q,
}

impl JacobianRing {
    pub fn new(w: &QHPolynomial, weights: &[Q]) -> Result<JacobianRing> {
        let nvars = w.nvars;
        let order = MonomialOrder::from_weights(weights);
        if nvars == 0 {
            let gb = GroebnerBasis {
                generators: Vec::new(),
                order,
                leading: Vec::new(),
            };
            return Ok(JacobianRing {
                w: w.clone(),
                weights: Vec::new(),
                gb,
                basis: MilnorBasis {
                    monomials: vec![Monomial(vec![])],
                    weights: vec![Q::zero()],
                },
                socle: Monomial(vec![]),
                res_factor: Q::from_integer(1.into()),
            });
        }
        let gens = jacobian_ideal(w);
        let gb = groebner_basis(&gens, &order);
        let basis = standard_monomials(&gb, nvars, weights)?;
        if basis.is_empty() {
            return Err(Error::NonIsolatedSingularity);
        }
        // unique top-weight standard monomial
        let top_w = basis.weights.iter().max().unwrap().clone();
        let top: Vec<&Monomial> = basis
            .monomials
            .iter()
            .zip(&basis.weights)
            .filter(|(_, w)| **w == top_w)
            .map(|(m, _)| m)
            .collect();
        assert_eq!(
            top.len(),
            1,
            "socle of a quasi-homogeneous Milnor algebra must be one-dimensional"
        );
        let socle = top[0].clone();
        let hess_nf = normal_form(&hessian(w), &gb);
        let hess_c = hess_nf.terms.get(&socle).cloned().unwrap_or_else(Q::zero);
        if hess_c.is_zero() {
            return Err(Error::DegenerateResidue);
        }
        let mu = qi(basis.len() as i64);
        Ok(JacobianRing {
            w: w.clone(),
            weights: weights.to_vec(),
            gb,
            basis,
            socle,
            res_factor: mu / hess_c,
        })
    }

    pub fn normal_form(&self, p: &QHPolynomial) -> QHPolynomial {
        if self.w.nvars == 0 {
            return p.clone();
        }
        normal_form(p, &self.gb)
    }

    /// Grothendieck residue of a class: the socle coefficient of its normal
    /// form, scaled so that `Res(hess W) = mu`.
    pub fn residue(&self, p: &QHPolynomial) -> Q {
        let nf = self.normal_form(p);
        nf.terms
            .get(&self.socle)
            .map(|c| c * &self.res_factor)
            .unwrap_or_else(Q::zero)
    }

    /// `Res(f g)`, the residue pairing of two classes.
    pub fn residue_pairing(&self, f: &QHPolynomial, g: &QHPolynomial) -> Q {
        self.residue(&f.mul(g))
    }

    /// Residue pairing of two basis monomials.
    pub fn residue_pairing_monomials(&self, a: &Monomial, b: &Monomial) -> Q {
        let prod = QHPolynomial::monomial(a.mul(b), Q::from_integer(1.into()));
        self.residue(&prod)
    }

    /// Gram matrix of the residue pairing on the monomial basis.
    pub fn gram_matrix(&self) -> Vec<Vec<Q>> {
        let n = self.basis.len();
        let socle_w = self.basis.weights.iter().max().unwrap().clone();
        let mut g = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                // graded pairing: skip weight-incompatible pairs
                let wsum = &self.basis.weights[i] + &self.basis.weights[j];
                if wsum != socle_w {
                    continue;
                }
                g[i][j] =
                    self.residue_pairing_monomials(&self.basis.monomials[i], &self.basis.monomials[j]);
            }
        }
        g
    }
}

/// Monomial basis of the Milnor algebra of `W` (standalone entry point).
pub fn monomial_basis(w: &QHPolynomial) -> Result<MilnorBasis> {
    let ws = crate::poly::weight_system(w)?;
    let ring = JacobianRing::new(w, &ws.weights)?;
    Ok(ring.basis)
}

/// Exact determinant of a square rational matrix.
pub fn det_q(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Q::from_integer(1.into());
    for col in 0..n {
        let Some(pr) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Q::zero();
        };
        if pr != col {
            a.swap(col, pr);
            det = -det;
        }
        det *= a[col][col].clone();
        let inv = a[col][col].recip();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            for c in col..n {
                let sub = &a[col][c] * &f;
                a[r][c] -= sub;
            }
        }
    }
    det
}
