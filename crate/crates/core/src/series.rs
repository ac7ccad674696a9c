//! Graded Poincare series and exact root-of-unity arithmetic.
//!
//! A `GradedSeries` is a finite Laurent polynomial in `y` with rational
//! exponents (internally `y^(1/D)` for `D` the lcm of the exponent
//! denominators). The group-averaged sector series needs sums over roots of
//! unity; those run in the cyclotomic field `Q[x]/Phi_N(x)`, and the final
//! coefficients are asserted to be rational.

use crate::error::{Error, Result};
use crate::rat::{denominator_lcm, qi, Q};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Finite Laurent polynomial with rational exponents and rational
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedSeries {
    pub terms: BTreeMap<Q, Q>,
}

impl GradedSeries {
    pub fn zero() -> Self {
        GradedSeries {
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, exponent: Q, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exponent) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn add(&self, other: &GradedSeries) -> GradedSeries {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> GradedSeries {
        if c.is_zero() {
            return GradedSeries::zero();
        }
        GradedSeries {
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), v * c))
                .collect(),
        }
    }

    /// Multiply by `y^e`.
    pub fn shift(&self, e: &Q) -> GradedSeries {
        GradedSeries {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k + e, v.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &GradedSeries) -> GradedSeries {
        let mut out = GradedSeries::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    /// lcm of the exponent denominators (the `D` of `y^(1/D)`).
    pub fn exponent_denominator(&self) -> BigInt {
        denominator_lcm(self.terms.keys())
    }

    /// `(chi, Str theta^2)`: the value at `y = 1` and the termwise sum of
    /// `coeff * exponent^2` (the limit of `d/dy (y dP/dy)`).
    pub fn limits(&self) -> (Q, Q) {
        let chi = self.terms.values().fold(Q::zero(), |a, c| a + c);
        let s = self
            .terms
            .iter()
            .fold(Q::zero(), |a, (e, c)| a + c * e * e);
        (chi, s)
    }
}

// ---------------------------------------------------------------------------
// Cyclotomic field Q[x]/Phi_N(x)
// ---------------------------------------------------------------------------

fn poly_div_exact(num: &[Q], den: &[Q]) -> Vec<Q> {
    // exact division of dense rational polynomials (highest degree last)
    let mut rem: Vec<Q> = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    let mut quo = vec![Q::zero(); rem.len().saturating_sub(dd)];
    for i in (dd..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let f = &rem[i] / &lead;
        quo[i - dd] = f.clone();
        for (j, dc) in den.iter().enumerate() {
            let sub = dc * &f;
            rem[i - dd + j] -= sub;
        }
    }
    assert!(rem.iter().all(Q::is_zero), "polynomial division not exact");
    quo
}

/// The N-th cyclotomic polynomial, dense coefficients (constant first).
pub fn cyclotomic_polynomial(n: u64) -> Vec<Q> {
    // x^n - 1 divided by the product of Phi_d over proper divisors d | n
    let mut num = vec![Q::zero(); (n + 1) as usize];
    num[0] = -Q::one();
    num[n as usize] = Q::one();
    let mut result = num;
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            result = poly_div_exact(&result, &phi_d);
        }
    }
    result
}

/// Exact arithmetic in `Q[x]/Phi_N(x)`; `x` is a primitive N-th root of
/// unity.
#[derive(Debug, Clone)]
pub struct CyclotomicField {
    pub n: u64,
    /// Powers x^k mod Phi_N for k in [0, n), each of length deg(Phi_N).
    power_table: Vec<Vec<Q>>,
    deg: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycElt(pub Vec<Q>);

impl CyclotomicField {
    pub fn new(n: u64) -> Self {
        let phi = cyclotomic_polynomial(n);
        let deg = phi.len() - 1;
        // reduce x^k mod phi iteratively
        let mut table: Vec<Vec<Q>> = Vec::with_capacity(n as usize);
        let mut cur = vec![Q::zero(); deg];
        if deg > 0 {
            cur[0] = Q::one();
        }
        for _ in 0..n {
            table.push(cur.clone());
            // multiply by x
            let carry = cur[deg - 1].clone();
            for i in (1..deg).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = Q::zero();
            if !carry.is_zero() {
                // x^deg = -(phi[0] + phi[1] x + ... + phi[deg-1] x^(deg-1))
                for i in 0..deg {
                    let sub = &phi[i] * &carry;
                    cur[i] -= sub;
                }
            }
        }
        CyclotomicField {
            n,
            power_table: table,
            deg,
        }
    }

    pub fn zero(&self) -> CycElt {
        CycElt(vec![Q::zero(); self.deg])
    }

    pub fn one(&self) -> CycElt {
        self.root_power(0)
    }

    pub fn from_q(&self, c: &Q) -> CycElt {
        let mut e = self.zero();
        e.0[0] = c.clone();
        e
    }

    /// `x^k` for any integer k (reduced mod N).
    pub fn root_power(&self, k: i64) -> CycElt {
        let k = k.rem_euclid(self.n as i64) as usize;
        CycElt(self.power_table[k].clone())
    }

    pub fn add(&self, a: &CycElt, b: &CycElt) -> CycElt {
        CycElt(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &CycElt, b: &CycElt) -> CycElt {
        CycElt(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }

    pub fn mul(&self, a: &CycElt, b: &CycElt) -> CycElt {
        let mut conv = vec![Q::zero(); 2 * self.deg];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                conv[i + j] += x * y;
            }
        }
        // fold high powers through the table (x^k = power_table[k] for k < n;
        // 2*deg - 2 < 2n so reduce via root_power)
        let mut out = self.zero();
        for (k, c) in conv.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < self.deg {
                out.0[k] += c;
            } else {
                let p = self.root_power((k % self.n as usize) as i64);
                for i in 0..self.deg {
                    out.0[i] += &p.0[i] * &c;
                }
            }
        }
        out
    }

    pub fn is_zero(&self, a: &CycElt) -> bool {
        a.0.iter().all(Q::is_zero)
    }

    /// Extract the rational value if the element is a constant.
    pub fn to_rational(&self, a: &CycElt) -> Option<Q> {
        if a.0[1..].iter().all(Q::is_zero) {
            Some(a.0[0].clone())
        } else {
            None
        }
    }
}

// ---------------------------------------------------------------------------
// Truncated power series with cyclotomic coefficients
// ---------------------------------------------------------------------------

/// Dense truncated series in `t` of length `len` over the cyclotomic field.
pub struct CycSeries {
    pub coeffs: Vec<CycElt>,
}

impl CycSeries {
    pub fn one(field: &CyclotomicField, len: usize) -> Self {
        let mut coeffs = vec![field.zero(); len];
        coeffs[0] = field.one();
        CycSeries { coeffs }
    }

    /// Multiply by the polynomial `t^a - x^e t^b` (a != b).
    pub fn mul_binomial(&mut self, field: &CyclotomicField, a: usize, e: i64, b: usize) {
        let len = self.coeffs.len();
        let root = field.root_power(e);
        let mut out = vec![field.zero(); len];
        for (k, c) in self.coeffs.iter().enumerate() {
            if field.is_zero(c) {
                continue;
            }
            if k + a < len {
                out[k + a] = field.add(&out[k + a], c);
            }
            if k + b < len {
                let m = field.mul(c, &root);
                out[k + b] = field.sub(&out[k + b], &m);
            }
        }
        self.coeffs = out;
    }

    /// Multiply by the geometric series `1/(1 - x^e t^b)`, `b >= 1`.
    pub fn mul_geometric(&mut self, field: &CyclotomicField, e: i64, b: usize) {
        let len = self.coeffs.len();
        let root = field.root_power(e);
        // out[k] = self[k] + x^e * out[k-b]
        let mut out = self.coeffs.clone();
        for k in b..len {
            let add = field.mul(&out[k - b], &root);
            out[k] = field.add(&out[k], &add);
        }
        self.coeffs = out;
    }
}

/// Divide dense rational polynomials exactly (used by the product formula).
/// Errors if the division leaves a remainder.
pub fn poly_div_exact_checked(num: &[Q], den: &[Q]) -> Result<Vec<Q>> {
    if den.iter().all(Q::is_zero) {
        return Err(Error::NotQuasiHomogeneous);
    }
    let mut rem: Vec<Q> = num.to_vec();
    let dd = den.iter().rposition(|c| !c.is_zero()).unwrap();
    let lead = den[dd].clone();
    let nd = match rem.iter().rposition(|c| !c.is_zero()) {
        Some(v) => v,
        None => return Ok(vec![Q::zero()]),
    };
    if nd < dd {
        return Err(Error::NotQuasiHomogeneous);
    }
    let mut quo = vec![Q::zero(); nd - dd + 1];
    for i in (dd..=nd).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let f = &rem[i] / &lead;
        quo[i - dd] = f.clone();
        for (j, dc) in den.iter().enumerate().take(dd + 1) {
            let sub = dc * &f;
            rem[i - dd + j] -= sub;
        }
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return Err(Error::NotQuasiHomogeneous);
    }
    Ok(quo)
}

/// Product formula for the Poincare series of `Jac(W) dx`:
/// `P_W(y) = prod (y - y^{q_i}) / (1 - y^{q_i})`, exact.
pub fn poincare_series_product(weights: &[Q]) -> GradedSeries {
    let d = denominator_lcm(weights.iter());
    let du: usize = usize::try_from(&d).expect("exponent denominator fits usize");
    // numerator and denominator as dense polynomials in t = y^(1/D)
    let mut num = vec![Q::one()];
    let mut den = vec![Q::one()];
    for qw in weights {
        let k: usize = usize::try_from(crate::rat::mul_to_integer(qw, &d))
            .expect("weight numerator fits usize");
        // (t^D - t^k)
        let mut f = vec![Q::zero(); du.max(k) + 1];
        f[du] += Q::one();
        f[k] -= Q::one();
        num = dense_mul(&num, &f);
        // (1 - t^k)
        let mut g = vec![Q::zero(); k + 1];
        g[0] = Q::one();
        g[k] -= Q::one();
        den = dense_mul(&den, &g);
    }
    let quo = poly_div_exact_checked(&num, &den).expect("Poincare series is a polynomial");
    let mut out = GradedSeries::zero();
    let dq = Q::from_integer(d);
    for (k, c) in quo.into_iter().enumerate() {
        out.add_term(qi(k as i64) / dq.clone(), c);
    }
    out
}

fn dense_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            out[i + j] += x * y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::q;

    #[test]
    fn product_formula_one_variable() {
        // x^3: -(y^{1/3} + y^{2/3})
        let p = poincare_series_product(&[q(1, 3)]);
        let mut expect = GradedSeries::zero();
        expect.add_term(q(1, 3), qi(-1));
        expect.add_term(q(2, 3), qi(-1));
        assert_eq!(p, expect);
        // x^2: -y^{1/2}
        let p = poincare_series_product(&[q(1, 2)]);
        let mut expect = GradedSeries::zero();
        expect.add_term(q(1, 2), qi(-1));
        assert_eq!(p, expect);
    }

    #[test]
    fn product_formula_cubic_is_signed_cube() {
        let p = poincare_series_product(&[q(1, 3), q(1, 3), q(1, 3)]);
        // (-(y^{1/3}+y^{2/3}))^3 has 8 terms, total coefficient sum -8... sign (-1)^3
        let (chi, _) = p.limits();
        assert_eq!(chi, qi(-8));
        assert_eq!(p.terms.len(), 4); // exponents 1, 4/3, 5/3, 2 with multiplicities
        assert_eq!(p.terms[&qi(1)], qi(-1));
        assert_eq!(p.terms[&qi(2)], qi(-1));
        assert_eq!(p.terms[&q(4, 3)], qi(-3));
        assert_eq!(p.terms[&q(5, 3)], qi(-3));
    }

    #[test]
    fn cyclotomic_basics() {
        let f = CyclotomicField::new(6);
        // Phi_6 = x^2 - x + 1
        assert_eq!(f.deg, 2);
        let z = f.root_power(1);
        let z6 = f.root_power(6);
        assert_eq!(f.to_rational(&z6), Some(qi(1)));
        // 1 + z + ... + z^5 = 0
        let mut s = f.zero();
        for k in 0..6 {
            s = f.add(&s, &f.root_power(k));
        }
        assert!(f.is_zero(&s));
        // z^3 = -1
        let z3 = f.mul(&f.mul(&z, &z), &z);
        assert_eq!(f.to_rational(&z3), Some(qi(-1)));
    }

    #[test]
    fn series_limits() {
        let mut p = GradedSeries::zero();
        p.add_term(q(-1, 6), qi(1));
        p.add_term(q(1, 6), qi(1));
        let (chi, s) = p.limits();
        assert_eq!(chi, qi(2));
        assert_eq!(s, q(1, 18));
        assert_eq!(GradedSeries::zero().limits(), (qi(0), qi(0)));
    }
}
