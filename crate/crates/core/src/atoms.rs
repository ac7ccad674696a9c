//! Invertible polynomials: exponent matrices, Kreuzer-Skarke atomic
//! decomposition, and the transpose construction.
//!
//! An invertible polynomial has exactly `n` monomials in `n` variables and an
//! invertible exponent matrix. Up to rescaling of variables it is a direct
//! sum of atoms: Fermat `x^a`, chain `x1^a1 x2 + ... + xk^ak`, and loop
//! `x1^a1 x2 + ... + xk^ak x1`, with all exponents at least 2.

use crate::error::{Error, Result};
use crate::poly::{Monomial, QHPolynomial};
use crate::rat::{qi, Q};
use num_traits::Zero;

/// One atomic block with its variable-index assignment (ambient indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Fermat { exponent: u32, var: usize },
    Chain { exponents: Vec<u32>, vars: Vec<usize> },
    Loop { exponents: Vec<u32>, vars: Vec<usize> },
}

impl Atom {
    pub fn vars(&self) -> Vec<usize> {
        match self {
            Atom::Fermat { var, .. } => vec![*var],
            Atom::Chain { vars, .. } | Atom::Loop { vars, .. } => vars.clone(),
        }
    }

    /// The monomials of this atom as a polynomial in `nvars` ambient variables.
    pub fn to_polynomial(&self, nvars: usize) -> QHPolynomial {
        let mut p = QHPolynomial::zero(nvars);
        match self {
            Atom::Fermat { exponent, var } => {
                let mut m = Monomial::constant(nvars);
                m.0[*var] = *exponent;
                p.add_term(m, qi(1));
            }
            Atom::Chain { exponents, vars } => {
                for (k, (&a, &v)) in exponents.iter().zip(vars).enumerate() {
                    let mut m = Monomial::constant(nvars);
                    m.0[v] = a;
                    if k + 1 < vars.len() {
                        m.0[vars[k + 1]] += 1;
                    }
                    p.add_term(m, qi(1));
                }
            }
            Atom::Loop { exponents, vars } => {
                for (k, (&a, &v)) in exponents.iter().zip(vars).enumerate() {
                    let mut m = Monomial::constant(nvars);
                    m.0[v] = a;
                    m.0[vars[(k + 1) % vars.len()]] += 1;
                    p.add_term(m, qi(1));
                }
            }
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomicDecomposition {
    pub atoms: Vec<Atom>,
}

impl AtomicDecomposition {
    /// Rebuild the polynomial (coefficients 1) from the blocks.
    pub fn reassemble(&self, nvars: usize) -> QHPolynomial {
        let mut p = QHPolynomial::zero(nvars);
        for a in &self.atoms {
            p = p.add(&a.to_polynomial(nvars));
        }
        p
    }
}

/// The exponent matrix `E_W` with one row per monomial, in canonical term
/// order. Errors unless the polynomial is square (terms = variables).
pub fn exponent_matrix(w: &QHPolynomial) -> Result<Vec<Vec<u32>>> {
    if w.num_terms() != w.nvars || w.nvars == 0 {
        return Err(Error::NotInvertible(format!(
            "{} monomials in {} variables",
            w.num_terms(),
            w.nvars
        )));
    }
    Ok(w.exponent_rows())
}

/// Determinant of an integer matrix, exact.
pub fn det_i64(rows: &[Vec<u32>]) -> Q {
    let n = rows.len();
    let mut m: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| r.iter().map(|&e| qi(e as i64)).collect())
        .collect();
    let mut det = Q::from_integer(1.into());
    for col in 0..n {
        let Some(pr) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Q::zero();
        };
        if pr != col {
            m.swap(col, pr);
            det = -det;
        }
        det *= m[col][col].clone();
        let inv = m[col][col].recip();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] * &inv;
            for c in col..n {
                let sub = &m[col][c] * &f;
                m[r][c] -= sub;
            }
        }
    }
    det
}

/// Kreuzer-Skarke decomposition of an invertible polynomial into atoms.
/// Coefficients are ignored ("up to rescaling of the variables").
pub fn classify_invertible(w: &QHPolynomial) -> Result<AtomicDecomposition> {
    let rows = exponent_matrix(w)?;
    let n = w.nvars;
    if det_i64(&rows).is_zero() {
        return Err(Error::NotInvertible("singular exponent matrix".into()));
    }

    // Each monomial must be x_i^a (a >= 2) or x_i^a * x_j (a >= 2, j != i).
    // `base[i]` = exponent of the monomial based at variable i,
    // `next[i]`  = the pointed-to variable, if any.
    let mut base: Vec<Option<u32>> = vec![None; n];
    let mut next: Vec<Option<usize>> = vec![None; n];
    for row in &rows {
        let nz: Vec<(usize, u32)> = row
            .iter()
            .enumerate()
            .filter(|&(_, &e)| e > 0)
            .map(|(i, &e)| (i, e))
            .collect();
        let (b, e, ptr) = match nz.as_slice() {
            [(i, e)] if *e >= 2 => (*i, *e, None),
            [(i, ei), (j, 1)] if *ei >= 2 => (*i, *ei, Some(*j)),
            [(i, 1), (j, ej)] if *ej >= 2 => (*j, *ej, Some(*i)),
            _ => {
                return Err(Error::UnclassifiableAtom(format!(
                    "monomial with exponents {row:?}"
                )))
            }
        };
        if base[b].is_some() {
            return Err(Error::UnclassifiableAtom(format!(
                "variable x{} is the base of two monomials",
                b + 1
            )));
        }
        base[b] = Some(e);
        next[b] = ptr;
    }
    if base.iter().any(Option::is_none) {
        return Err(Error::UnclassifiableAtom(
            "some variable is the base of no monomial".into(),
        ));
    }
    // in-degree at most 1 or the sum is not direct
    let mut indeg = vec![0usize; n];
    for t in next.iter().flatten() {
        indeg[*t] += 1;
        if indeg[*t] > 1 {
            return Err(Error::UnclassifiableAtom(format!(
                "variable x{} is pointed to twice",
                t + 1
            )));
        }
    }

    let mut seen = vec![false; n];
    let mut atoms = Vec::new();
    // chains start at in-degree-0 variables and follow pointers to a Fermat row
    for start in 0..n {
        if indeg[start] != 0 || seen[start] {
            continue;
        }
        let mut vars = vec![start];
        let mut cur = start;
        seen[start] = true;
        while let Some(t) = next[cur] {
            if seen[t] {
                return Err(Error::UnclassifiableAtom(
                    "a chain feeds into a cycle".into(),
                ));
            }
            seen[t] = true;
            vars.push(t);
            cur = t;
        }
        let exponents: Vec<u32> = vars.iter().map(|&v| base[v].unwrap()).collect();
        if vars.len() == 1 {
            atoms.push(Atom::Fermat {
                exponent: exponents[0],
                var: vars[0],
            });
        } else {
            atoms.push(Atom::Chain { exponents, vars });
        }
    }
    // what remains is a disjoint union of cycles
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut vars = vec![start];
        seen[start] = true;
        let mut cur = next[start].expect("cycle variable has a pointer");
        while cur != start {
            seen[cur] = true;
            vars.push(cur);
            cur = next[cur].expect("cycle variable has a pointer");
        }
        let exponents: Vec<u32> = vars.iter().map(|&v| base[v].unwrap()).collect();
        atoms.push(Atom::Loop { exponents, vars });
    }
    Ok(AtomicDecomposition { atoms })
}

/// The Berglund-Huebsch transpose: exponent matrix transposed, coefficients 1.
pub fn transpose(w: &QHPolynomial) -> Result<QHPolynomial> {
    let rows = exponent_matrix(w)?;
    if det_i64(&rows).is_zero() {
        return Err(Error::NotInvertible("singular exponent matrix".into()));
    }
    let n = w.nvars;
    let mut out = QHPolynomial::zero(n);
    for j in 0..n {
        let mut m = Monomial::constant(n);
        for (i, row) in rows.iter().enumerate() {
            m.0[i] = row[j];
        }
        out.add_term(m, qi(1));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn p(s: &str) -> QHPolynomial {
        parse_polynomial(s).unwrap()
    }

    #[test]
    fn fermat_cubic_is_three_fermats() {
        let d = classify_invertible(&p("x1^3+x2^3+x3^3")).unwrap();
        assert_eq!(d.atoms.len(), 3);
        assert!(d
            .atoms
            .iter()
            .all(|a| matches!(a, Atom::Fermat { exponent: 3, .. })));
    }

    #[test]
    fn loop_222() {
        let d = classify_invertible(&p("x1^2*x2+x2^2*x3+x3^2*x1")).unwrap();
        assert_eq!(d.atoms.len(), 1);
        match &d.atoms[0] {
            Atom::Loop { exponents, .. } => assert_eq!(exponents, &vec![2, 2, 2]),
            other => panic!("expected loop, got {other:?}"),
        }
    }

    #[test]
    fn mixed_chain_and_fermat() {
        let d = classify_invertible(&p("x1^3*x2+x2^4+x3^2")).unwrap();
        assert_eq!(d.atoms.len(), 2);
        let mut kinds: Vec<String> = d
            .atoms
            .iter()
            .map(|a| match a {
                Atom::Chain { exponents, .. } => format!("chain{exponents:?}"),
                Atom::Fermat { exponent, .. } => format!("fermat{exponent}"),
                Atom::Loop { exponents, .. } => format!("loop{exponents:?}"),
            })
            .collect();
        kinds.sort();
        assert_eq!(kinds, vec!["chain[3, 4]", "fermat2"]);
    }

    #[test]
    fn reassembly_roundtrip() {
        for s in [
            "x1^3+x2^3+x3^3",
            "x1^2*x2+x2^2*x3+x3^3",
            "x1^2*x2+x2^2*x3+x3^2*x1",
            "x1^3*x2+x2^4+x3^2",
            "x1^2*x2+x1*x2^2+x3^3",
        ] {
            let w = p(s);
            let d = classify_invertible(&w).unwrap();
            assert_eq!(d.reassemble(w.nvars), w, "roundtrip failed for {s}");
        }
    }

    #[test]
    fn unclassifiable_inputs() {
        // a linear monomial matches no atom
        assert!(matches!(
            classify_invertible(&p("x1^2+x2")),
            Err(Error::UnclassifiableAtom(_))
        ));
        // wrong term count
        assert!(matches!(
            classify_invertible(&p("x1^3+x1^2*x2+x2^3")),
            Err(Error::NotInvertible(_))
        ));
        // invertible matrix but in-degree 2: not a direct sum of atoms
        assert!(matches!(
            classify_invertible(&p("x1^2*x3+x2^2*x3+x3^2")),
            Err(Error::UnclassifiableAtom(_))
        ));
        // plain Fermats classify fine
        assert!(classify_invertible(&p("x1^3+x2^3")).is_ok());
        assert!(classify_invertible(&p("x1^3")).is_ok());
    }

    #[test]
    fn transpose_examples() {
        let fermat = p("x1^3+x2^3+x3^3");
        assert_eq!(transpose(&fermat).unwrap(), fermat);
        let chain = p("x1^2*x2+x2^2*x3+x3^3");
        assert_eq!(transpose(&chain).unwrap(), p("x1^2+x1*x2^2+x2*x3^3"));
        for s in [
            "x1^3+x2^3+x3^3",
            "x1^2*x2+x2^2*x3+x3^3",
            "x1^2*x2+x2^2*x3+x3^2*x1",
            "x1^3*x2+x2^4+x3^2",
        ] {
            let w = p(s);
            assert_eq!(transpose(&transpose(&w).unwrap()).unwrap(), w);
        }
    }
}
