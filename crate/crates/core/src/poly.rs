//! Sparse multivariate polynomials over exact rationals.
//!
//! A `QHPolynomial` is a map from exponent vectors to nonzero rational
//! coefficients, with a fixed ambient variable count. Variables are
//! positional: `x1 .. xn` in the text grammar map to indices `0 .. n-1`.
//!
//! The text grammar (whitespace insignificant):
//!
//! ```text
//! poly   := term ('+' term)*
//! term   := [coeff '*'] factor ('*' factor)*
//! factor := var ['^' posint]
//! coeff  := int ['/' posint]
//! var    := 'x' posint
//! ```

use crate::error::{Error, Result};
use crate::rat::{fmt_q, is_integer, q, qi, Q};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector; length equals the ambient variable count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn constant(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Quotient `other / self`; caller must ensure divisibility.
    pub fn quotient(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    /// Weighted degree `sum m_i q_i`.
    pub fn weighted_degree(&self, weights: &[Q]) -> Q {
        let mut d = Q::zero();
        for (e, w) in self.0.iter().zip(weights) {
            if *e > 0 {
                d += w * qi(*e as i64);
            }
        }
        d
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }
}

/// Sparse polynomial with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QHPolynomial {
    pub terms: BTreeMap<Monomial, Q>,
    pub nvars: usize,
}

impl QHPolynomial {
    pub fn zero(nvars: usize) -> Self {
        QHPolynomial {
            terms: BTreeMap::new(),
            nvars,
        }
    }

    pub fn constant(c: Q, nvars: usize) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::constant(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(Q::one(), nvars)
    }

    pub fn monomial(m: Monomial, c: Q) -> Self {
        let nvars = m.nvars();
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &QHPolynomial) -> QHPolynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &QHPolynomial) -> QHPolynomial {
        self.add(&other.scale(&qi(-1)))
    }

    pub fn scale(&self, c: &Q) -> QHPolynomial {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        QHPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
            nvars: self.nvars,
        }
    }

    pub fn mul(&self, other: &QHPolynomial) -> QHPolynomial {
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn mul_term(&self, m: &Monomial, c: &Q) -> QHPolynomial {
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            out.add_term(m1.mul(m), c1 * c);
        }
        out
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> QHPolynomial {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut m2 = m.clone();
                m2.0[i] = e - 1;
                out.add_term(m2, c * qi(e as i64));
            }
        }
        out
    }

    /// Restrict to the variables in `keep` (in order), setting all others to 0.
    pub fn restrict(&self, keep: &[usize]) -> QHPolynomial {
        let mut out = QHPolynomial::zero(keep.len());
        'term: for (m, c) in &self.terms {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 && !keep.contains(&i) {
                    continue 'term;
                }
            }
            let e2: Vec<u32> = keep.iter().map(|&i| m.0[i]).collect();
            out.add_term(Monomial(e2), c.clone());
        }
        out
    }

    /// Apply a variable permutation: new variable `i` is old variable `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> QHPolynomial {
        let mut out = QHPolynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e2: Vec<u32> = perm.iter().map(|&j| m.0[j]).collect();
            out.add_term(Monomial(e2), c.clone());
        }
        out
    }

    /// Exponent rows, one per monomial, in canonical (descending) term
    /// order — the order `to_text` prints.
    pub fn exponent_rows(&self) -> Vec<Vec<u32>> {
        self.terms.keys().rev().map(|m| m.0.clone()).collect()
    }

    /// Reinterpret in a larger ambient variable set (new variables unused).
    pub fn pad_to(&self, nvars: usize) -> QHPolynomial {
        assert!(nvars >= self.nvars);
        let mut out = QHPolynomial::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.resize(nvars, 0);
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Canonical text form; `parse` of the result reproduces `self`.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 1 {
                    factors.push(format!("x{}", i + 1));
                } else if e > 1 {
                    factors.push(format!("x{}^{}", i + 1, e));
                }
            }
            if factors.is_empty() {
                parts.push(fmt_q(c));
            } else if c.is_one() {
                parts.push(factors.join("*"));
            } else {
                parts.push(format!("{}*{}", fmt_q(c), factors.join("*")));
            }
        }
        parts.join("+")
    }
}

impl fmt::Display for QHPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    Var(usize), // 1-based subscript
    Plus,
    Star,
    Caret,
    Slash,
    Minus,
    End,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek_pos(&mut self) -> usize {
        self.skip_ws();
        self.pos
    }

    fn next(&mut self) -> Result<(Tok, usize)> {
        self.skip_ws();
        let pos = self.pos;
        if self.pos >= self.src.len() {
            return Ok((Tok::End, pos));
        }
        let c = self.src[self.pos];
        match c {
            b'+' => {
                self.pos += 1;
                Ok((Tok::Plus, pos))
            }
            b'*' => {
                self.pos += 1;
                Ok((Tok::Star, pos))
            }
            b'^' => {
                self.pos += 1;
                Ok((Tok::Caret, pos))
            }
            b'/' => {
                self.pos += 1;
                Ok((Tok::Slash, pos))
            }
            b'-' => {
                self.pos += 1;
                Ok((Tok::Minus, pos))
            }
            b'x' | b'X' => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(Error::Syntax {
                        pos,
                        msg: "variable needs a positive subscript".into(),
                    });
                }
                let n: usize = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .parse()
                    .map_err(|_| Error::Syntax {
                        pos,
                        msg: "subscript out of range".into(),
                    })?;
                if n == 0 {
                    return Err(Error::Syntax {
                        pos,
                        msg: "variable subscripts start at 1".into(),
                    });
                }
                Ok((Tok::Var(n), pos))
            }
            b'0'..=b'9' => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: i64 = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .parse()
                    .map_err(|_| Error::Syntax {
                        pos,
                        msg: "integer out of range".into(),
                    })?;
                Ok((Tok::Int(n), pos))
            }
            _ => Err(Error::UnknownToken { pos }),
        }
    }

    fn peek(&mut self) -> Result<(Tok, usize)> {
        let save = self.pos;
        let t = self.next();
        self.pos = save;
        t
    }
}

struct RawTerm {
    coeff: Q,
    factors: Vec<(usize, u32)>, // (1-based var, exponent)
}

fn parse_posint(lx: &mut Lexer, what: &str) -> Result<i64> {
    let (t, pos) = lx.next()?;
    match t {
        Tok::Int(n) if n > 0 => Ok(n),
        Tok::Minus => Err(Error::NegativeExponent { pos }),
        _ => Err(Error::Syntax {
            pos,
            msg: format!("expected positive integer {what}"),
        }),
    }
}

fn parse_factor(lx: &mut Lexer) -> Result<(usize, u32)> {
    let (t, pos) = lx.next()?;
    let v = match t {
        Tok::Var(v) => v,
        _ => {
            return Err(Error::Syntax {
                pos,
                msg: "expected a variable".into(),
            })
        }
    };
    let (t2, _) = lx.peek()?;
    if t2 == Tok::Caret {
        lx.next()?;
        let e = parse_posint(lx, "exponent")?;
        Ok((v, e as u32))
    } else {
        Ok((v, 1))
    }
}

fn parse_term(lx: &mut Lexer) -> Result<RawTerm> {
    let mut coeff = Q::one();
    let (t, pos) = lx.peek()?;
    let negative = t == Tok::Minus;
    if negative {
        lx.next()?;
    }
    let (t, _) = lx.peek()?;
    if let Tok::Int(_) = t {
        // coefficient, possibly rational, must be followed by '*'
        let n = match lx.next()? {
            (Tok::Int(n), _) => n,
            _ => unreachable!(),
        };
        coeff = qi(n);
        let (t2, _) = lx.peek()?;
        if t2 == Tok::Slash {
            lx.next()?;
            let d = parse_posint(lx, "denominator")?;
            coeff = q(n, d);
        }
        let (t3, pos3) = lx.next()?;
        if t3 != Tok::Star {
            return Err(Error::Syntax {
                pos: pos3,
                msg: "expected '*' after coefficient".into(),
            });
        }
    } else if negative && !matches!(t, Tok::Var(_)) {
        return Err(Error::Syntax {
            pos,
            msg: "expected coefficient or variable after '-'".into(),
        });
    }
    if negative {
        coeff = -coeff;
    }
    let mut factors = vec![parse_factor(lx)?];
    loop {
        let (t, _) = lx.peek()?;
        if t == Tok::Star {
            lx.next()?;
            factors.push(parse_factor(lx)?);
        } else {
            break;
        }
    }
    Ok(RawTerm { coeff, factors })
}

/// Parse a polynomial from the text grammar. Variable order is fixed by
/// subscript; `nvars` is the largest subscript seen.
pub fn parse_polynomial(text: &str) -> Result<QHPolynomial> {
    let mut lx = Lexer::new(text);
    let mut raw = vec![parse_term(&mut lx)?];
    loop {
        let (t, pos) = lx.next()?;
        match t {
            Tok::Plus => raw.push(parse_term(&mut lx)?),
            Tok::End => break,
            _ => {
                return Err(Error::Syntax {
                    pos,
                    msg: "expected '+' or end of input".into(),
                })
            }
        }
    }
    let _ = lx.peek_pos();
    let nvars = raw
        .iter()
        .flat_map(|t| t.factors.iter().map(|&(v, _)| v))
        .max()
        .unwrap_or(0);
    let mut p = QHPolynomial::zero(nvars);
    for t in raw {
        let mut m = Monomial::constant(nvars);
        for (v, e) in t.factors {
            m.0[v - 1] += e;
        }
        p.add_term(m, t.coeff);
    }
    Ok(p)
}

// ---------------------------------------------------------------------------
// Weight systems
// ---------------------------------------------------------------------------

/// Weights `q_i in (0, 1/2]` making every monomial of the source polynomial
/// weighted-degree one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    pub weights: Vec<Q>,
}

impl WeightSystem {
    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    pub fn sum(&self) -> Q {
        self.weights.iter().fold(Q::zero(), |a, b| a + b)
    }

    pub fn central_charge(&self) -> Q {
        self.weights
            .iter()
            .fold(Q::zero(), |a, w| a + (Q::one() - qi(2) * w))
    }
}

/// Solve the linear system `E_W q = 1` by exact Gaussian elimination.
/// Over-determined consistent systems are accepted.
pub fn weight_system(w: &QHPolynomial) -> Result<WeightSystem> {
    let n = w.nvars;
    if w.terms.is_empty() || n == 0 {
        return Err(Error::NotQuasiHomogeneous);
    }
    // rows: [exponents | 1]
    let mut rows: Vec<Vec<Q>> = w
        .terms
        .keys()
        .map(|m| {
            let mut r: Vec<Q> = m.0.iter().map(|&e| qi(e as i64)).collect();
            r.push(Q::one());
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut rank = 0usize;
    for col in 0..n {
        let Some(pr) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = rows[rank][col].recip();
        for x in rows[rank].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in 0..=n {
                    let sub = &rows[rank][c] * &f;
                    rows[r][c] -= sub;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    // consistency: leftover rows must be all-zero
    for r in rank..rows.len() {
        if rows[r][..n].iter().all(|x| x.is_zero()) && !rows[r][n].is_zero() {
            return Err(Error::NotQuasiHomogeneous);
        }
    }
    if rank < n {
        return Err(Error::NonUniqueWeights);
    }
    let mut weights = vec![Q::zero(); n];
    for (r, &col) in pivot_cols.iter().enumerate() {
        weights[col] = rows[r][n].clone();
    }
    for q_i in &weights {
        if q_i <= &Q::zero() || q_i > &q(1, 2) {
            return Err(Error::WeightOutOfRange(fmt_q(q_i)));
        }
    }
    Ok(WeightSystem { weights })
}

/// Central charge `sum (1 - 2 q_i)`.
pub fn central_charge(ws: &WeightSystem) -> Q {
    ws.central_charge()
}

/// Calabi-Yau test: `c_W = n - 2`, equivalently `sum q_i = 1`.
pub fn is_calabi_yau(w: &QHPolynomial) -> Result<bool> {
    let ws = weight_system(w)?;
    Ok(ws.sum() == Q::one())
}

/// Milnor number `prod (1/q_i - 1)`; errors unless a positive integer.
pub fn milnor_number(ws: &WeightSystem) -> Result<u64> {
    let mut mu = Q::one();
    for w in &ws.weights {
        mu *= w.recip() - Q::one();
    }
    if !is_integer(&mu) || mu <= Q::zero() {
        return Err(Error::NonIntegerMilnorNumber(fmt_q(&mu)));
    }
    Ok(u64::try_from(mu.to_integer()).expect("Milnor number fits in u64"))
}

/// Determinant of the matrix of second partial derivatives, expanded exactly.
pub fn hessian(w: &QHPolynomial) -> QHPolynomial {
    let n = w.nvars;
    let mut h = Vec::with_capacity(n);
    for i in 0..n {
        let di = w.derivative(i);
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            row.push(di.derivative(j));
        }
        h.push(row);
    }
    poly_det(&h, n)
}

/// Determinant of a polynomial matrix by Laplace expansion along the first
/// remaining row, skipping zero entries.
fn poly_det(m: &[Vec<QHPolynomial>], n: usize) -> QHPolynomial {
    fn go(m: &[Vec<QHPolynomial>], row: usize, cols: &mut Vec<usize>, nvars: usize) -> QHPolynomial {
        if cols.is_empty() {
            return QHPolynomial::one(nvars);
        }
        let mut acc = QHPolynomial::zero(nvars);
        for k in 0..cols.len() {
            let col = cols[k];
            if m[row][col].is_zero() {
                continue;
            }
            let mut rest = cols.clone();
            rest.remove(k);
            let minor = go(m, row + 1, &mut rest, nvars);
            let signed = if k % 2 == 0 {
                m[row][col].mul(&minor)
            } else {
                m[row][col].mul(&minor).scale(&qi(-1))
            };
            acc = acc.add(&signed);
        }
        acc
    }
    if n == 0 {
        return QHPolynomial::one(0);
    }
    let nvars = m[0][0].nvars;
    let mut cols: Vec<usize> = (0..n).collect();
    go(m, 0, &mut cols, nvars)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> QHPolynomial {
        parse_polynomial(s).unwrap()
    }

    #[test]
    fn parse_fermat_cubic() {
        let w = p("x1^3+x2^3+x3^3");
        assert_eq!(w.nvars, 3);
        assert_eq!(w.num_terms(), 3);
        assert_eq!(w.terms[&Monomial(vec![3, 0, 0])], qi(1));
    }

    #[test]
    fn parse_chain_e6() {
        let w = p("x1^2*x2 + x2^2*x3 + x3^3");
        assert_eq!(w.nvars, 3);
        assert_eq!(w.terms[&Monomial(vec![2, 1, 0])], qi(1));
        assert_eq!(w.terms[&Monomial(vec![0, 2, 1])], qi(1));
    }

    #[test]
    fn parse_merges_repeated_terms() {
        let w = p("x1^3 + x1^3");
        assert_eq!(w.num_terms(), 1);
        assert_eq!(w.terms[&Monomial(vec![3])], qi(2));
    }

    #[test]
    fn parse_rational_coefficient_and_sign() {
        let w = p("1/2*x1^2 + -3*x2");
        assert_eq!(w.terms[&Monomial(vec![2, 0])], q(1, 2));
        assert_eq!(w.terms[&Monomial(vec![0, 1])], qi(-3));
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse_polynomial("x1^3 + y^2") {
            Err(Error::UnknownToken { pos }) => assert_eq!(pos, 7),
            other => panic!("expected unknown token, got {other:?}"),
        }
        match parse_polynomial("x1^-2") {
            Err(Error::NegativeExponent { pos }) => assert_eq!(pos, 3),
            other => panic!("expected negative exponent, got {other:?}"),
        }
        assert!(matches!(
            parse_polynomial("x1^3 + + x2"),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn print_parse_roundtrip_is_identity() {
        for s in [
            "x1^3+x2^3+x3^3",
            "x1^2*x2+x2^2*x3+x3^3",
            "2*x1^3+1/2*x1*x2",
            "-1*x1^4+x2",
        ] {
            let w = p(s);
            assert_eq!(parse_polynomial(&w.to_text()).unwrap(), w);
        }
    }

    #[test]
    fn weights_of_catalog_polynomials() {
        assert_eq!(
            weight_system(&p("x1^3+x2^3+x3^3")).unwrap().weights,
            vec![q(1, 3), q(1, 3), q(1, 3)]
        );
        // chain: 2q1+q2=1, 2q2+q3=1, 3q3=1
        assert_eq!(
            weight_system(&p("x1^2*x2+x2^2*x3+x3^3")).unwrap().weights,
            vec![q(1, 3), q(1, 3), q(1, 3)]
        );
        assert_eq!(weight_system(&p("x1^2")).unwrap().weights, vec![q(1, 2)]);
    }

    #[test]
    fn weight_errors() {
        assert!(matches!(
            weight_system(&p("x1^2+x1^3")),
            Err(Error::NotQuasiHomogeneous)
        ));
        assert!(matches!(
            weight_system(&p("x1*x2")),
            Err(Error::NonUniqueWeights)
        ));
        assert!(matches!(
            weight_system(&p("x1")),
            Err(Error::WeightOutOfRange(_))
        ));
    }

    #[test]
    fn central_charges() {
        let cubic = weight_system(&p("x1^3+x2^3+x3^3")).unwrap();
        assert_eq!(central_charge(&cubic), qi(1));
        let a1 = weight_system(&p("x1^2")).unwrap();
        assert_eq!(central_charge(&a1), qi(0));
        let quintic = weight_system(&p("x1^5+x2^5+x3^5+x4^5+x5^5")).unwrap();
        assert_eq!(central_charge(&quintic), qi(3));
    }

    #[test]
    fn calabi_yau_detection() {
        assert!(is_calabi_yau(&p("x1^3+x2^3+x3^3")).unwrap());
        assert!(!is_calabi_yau(&p("x1^3")).unwrap());
        assert!(is_calabi_yau(&p("x1^5+x2^5+x3^5+x4^5+x5^5")).unwrap());
    }

    #[test]
    fn milnor_numbers() {
        let cubic = weight_system(&p("x1^3+x2^3+x3^3")).unwrap();
        assert_eq!(milnor_number(&cubic).unwrap(), 8);
        let a1 = weight_system(&p("x1^2")).unwrap();
        assert_eq!(milnor_number(&a1).unwrap(), 1);
        let f44 = weight_system(&p("x1^4+x2^4")).unwrap();
        assert_eq!(milnor_number(&f44).unwrap(), 9);
    }

    #[test]
    fn hessian_examples() {
        assert_eq!(hessian(&p("x1^3")), p("6*x1"));
        assert_eq!(hessian(&p("x1^3+x2^3+x3^3")), p("216*x1*x2*x3"));
        // x^d + y^d -> d^2 (d-1)^2 (xy)^(d-2)
        for d in 2..=6u32 {
            let w = p(&format!("x1^{d}+x2^{d}"));
            let c = qi((d * d) as i64 * ((d - 1) * (d - 1)) as i64);
            let expect = QHPolynomial::monomial(Monomial(vec![d - 2, d - 2]), c);
            assert_eq!(hessian(&w), expect);
        }
    }
}
