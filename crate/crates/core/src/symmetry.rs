//! Finite diagonal symmetry groups as sets of rational phase vectors.
//!
//! A group element `gamma = (exp(2 pi i theta_1), ..., exp(2 pi i theta_n))`
//! is stored as its phase vector `(theta_1, ..., theta_n)` with each phase
//! reduced mod 1 into `[0, 1)`. Addition of phase vectors is composition of
//! group elements, so everything here is exact and hash-free (ordered sets).

use crate::atoms::{det_i64, exponent_matrix};
use crate::error::{Error, Result};
use crate::poly::{QHPolynomial, WeightSystem};
use crate::rat::{is_integer, mod1, qi, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

/// A diagonal group element encoded by rational phases in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PhaseVector {
    pub phases: Vec<Q>,
}

impl PhaseVector {
    pub fn new(phases: Vec<Q>) -> Self {
        PhaseVector {
            phases: phases.iter().map(mod1).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        PhaseVector {
            phases: vec![Q::zero(); n],
        }
    }

    pub fn nvars(&self) -> usize {
        self.phases.len()
    }

    pub fn is_identity(&self) -> bool {
        self.phases.iter().all(Q::is_zero)
    }

    pub fn add(&self, other: &PhaseVector) -> PhaseVector {
        PhaseVector::new(
            self.phases
                .iter()
                .zip(&other.phases)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn inverse(&self) -> PhaseVector {
        PhaseVector::new(self.phases.iter().map(|a| -a).collect())
    }

    pub fn age(&self) -> Q {
        self.phases.iter().fold(Q::zero(), |a, b| a + b)
    }

    pub fn fixed_indices(&self) -> Vec<usize> {
        self.phases
            .iter()
            .enumerate()
            .filter(|(_, t)| t.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// Multiplicative order (lcm of phase denominators).
    pub fn order(&self) -> BigInt {
        let mut l = BigInt::one();
        for p in &self.phases {
            l = l.lcm(p.denom());
        }
        l
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.phases.iter().map(crate::rat::fmt_q).collect();
        format!("({})", parts.join(","))
    }
}

/// A finite group of diagonal symmetries, fully materialized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalGroup {
    pub elements: Vec<PhaseVector>, // sorted, deduplicated
    pub generators: Vec<PhaseVector>,
}

impl DiagonalGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &PhaseVector) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &DiagonalGroup) -> bool {
        self.elements.iter().all(|g| other.contains(g))
    }

    /// Express `gamma` as a power of `j`, if possible (smallest exponent).
    pub fn as_power_of(j: &PhaseVector, gamma: &PhaseVector) -> Option<u64> {
        let mut cur = PhaseVector::identity(j.nvars());
        let ord: u64 = u64::try_from(j.order()).ok()?;
        for k in 0..ord {
            if &cur == gamma {
                return Some(k);
            }
            cur = cur.add(j);
        }
        None
    }
}

/// Closure of a generator list under addition mod 1.
pub fn subgroup_generated(gens: &[PhaseVector], nvars: usize) -> DiagonalGroup {
    let mut elements: BTreeSet<PhaseVector> = BTreeSet::new();
    elements.insert(PhaseVector::identity(nvars));
    let mut frontier: Vec<PhaseVector> = vec![PhaseVector::identity(nvars)];
    while let Some(e) = frontier.pop() {
        for g in gens {
            let h = e.add(g);
            if elements.insert(h.clone()) {
                frontier.push(h);
            }
        }
    }
    DiagonalGroup {
        elements: elements.into_iter().collect(),
        generators: gens.to_vec(),
    }
}

/// The exponential grading element `J_W` with phases `q_i mod 1`.
pub fn exponential_grading_element(ws: &WeightSystem) -> PhaseVector {
    PhaseVector::new(ws.weights.clone())
}

// ---------------------------------------------------------------------------
// Maximal group
// ---------------------------------------------------------------------------

/// Inverse of a square rational matrix; `None` when singular.
fn invert_matrix(rows: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = rows.len();
    let mut a: Vec<Vec<Q>> = rows.to_vec();
    let mut inv: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Q::one() } else { Q::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pr = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pr);
        inv.swap(col, pr);
        let f = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &f;
        }
        for x in inv[col].iter_mut() {
            *x *= &f;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..n {
                    let s = &a[col][c] * &f;
                    a[r][c] -= s;
                    let s = &inv[col][c] * &f;
                    inv[r][c] -= s;
                }
            }
        }
    }
    Some(inv)
}

/// The generators `rho_j` of `G_W` for invertible `W`: the columns of
/// `E_W^{-1}`, read as phase vectors.
pub fn invertible_group_generators(w: &QHPolynomial) -> Result<Vec<PhaseVector>> {
    let rows = exponent_matrix(w)?;
    let n = w.nvars;
    let rational: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| r.iter().map(|&e| qi(e as i64)).collect())
        .collect();
    let inv = invert_matrix(&rational)
        .ok_or_else(|| Error::NotInvertible("singular exponent matrix".into()))?;
    Ok((0..n)
        .map(|j| PhaseVector::new((0..n).map(|i| inv[i][j].clone()).collect()))
        .collect())
}

/// Smith normal form of an integer matrix: returns `(diag, v)` with
/// `u a v = diag(d_1..d_r, 0..)` and `v` the accumulated column operations
/// (an n x n unimodular matrix).
fn smith_normal_form(a: &[Vec<BigInt>]) -> (Vec<BigInt>, Vec<Vec<BigInt>>) {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut s: Vec<Vec<BigInt>> = a.to_vec();
    let mut v: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut t = 0usize;
    while t < m.min(n) {
        // find a nonzero pivot with minimal absolute value
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !s[i][j].is_zero()
                    && best
                        .map(|(bi, bj)| s[i][j].abs() < s[bi][bj].abs())
                        .unwrap_or(true)
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        s.swap(t, pi);
        if pj != t {
            for row in s.iter_mut() {
                row.swap(t, pj);
            }
            v.swap(t, pj); // v rows track columns of the product
        }
        let mut dirty = false;
        // clear the pivot column with row ops (these only touch s)
        for i in t + 1..m {
            if !s[i][t].is_zero() {
                let f = &s[i][t] / &s[t][t];
                for j in t..n {
                    let sub = &s[t][j] * &f;
                    s[i][j] -= sub;
                }
                if !s[i][t].is_zero() {
                    dirty = true;
                }
            }
        }
        // clear the pivot row with column ops (mirrored into v)
        for j in t + 1..n {
            if !s[t][j].is_zero() {
                let f = &s[t][j] / &s[t][t];
                for i in 0..m {
                    let sub = &s[i][t] * &f;
                    s[i][j] -= sub;
                }
                for k in 0..n {
                    let sub = &v[t][k] * &f;
                    v[j][k] -= sub;
                }
                if !s[t][j].is_zero() {
                    dirty = true;
                }
            }
        }
        if !dirty {
            if s[t][t].is_negative() {
                for j in t..n {
                    s[t][j] = -s[t][j].clone();
                }
                // flipping a diagonal entry is a row op; v untouched
            }
            t += 1;
        }
    }
    let r = (0..m.min(n)).take_while(|&i| !s[i][i].is_zero()).count();
    let diag: Vec<BigInt> = (0..r).map(|i| s[i][i].clone()).collect();
    // v rows currently track column vectors: v[j][k] is component k of new col j
    (diag, v)
}

/// The full group of diagonal symmetries of `W`.
///
/// Invertible polynomials use the `rho_j` generator route; otherwise the
/// integer congruence system `E_W theta in Z^m` is solved by Smith normal
/// form (accepted for up to 24 monomials).
pub fn maximal_group(w: &QHPolynomial) -> Result<DiagonalGroup> {
    if w.num_terms() == w.nvars {
        if let Ok(gens) = invertible_group_generators(w) {
            return Ok(subgroup_generated(&gens, w.nvars));
        }
    }
    if w.num_terms() > 24 {
        return Err(Error::NotInvertible(
            "too many monomials for the congruence route".into(),
        ));
    }
    maximal_group_snf(w)
}

/// Congruence-system route: all phase vectors with `E_W theta` integral.
pub fn maximal_group_snf(w: &QHPolynomial) -> Result<DiagonalGroup> {
    let n = w.nvars;
    let a: Vec<Vec<BigInt>> = w
        .terms
        .keys()
        .map(|m| m.0.iter().map(|&e| BigInt::from(e)).collect())
        .collect();
    let (diag, v) = smith_normal_form(&a);
    if diag.len() < n {
        return Err(Error::NotInvertible(
            "continuous symmetries: exponent matrix is rank-deficient".into(),
        ));
    }
    let mut gens = Vec::new();
    for (i, d) in diag.iter().enumerate() {
        if d.abs() > BigInt::one() {
            // theta = v-column i scaled by 1/d_i
            let phases: Vec<Q> = (0..n)
                .map(|k| Q::new(v[i][k].clone(), d.abs().clone()))
                .collect();
            gens.push(PhaseVector::new(phases));
        }
    }
    Ok(subgroup_generated(&gens, n))
}

// ---------------------------------------------------------------------------
// Sector data and predicates
// ---------------------------------------------------------------------------

/// Age, degree shift, and fixed-locus data of a group element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorData {
    pub gamma: PhaseVector,
    pub age: Q,
    pub iota: Q,
    pub fixed_indices: Vec<usize>,
    pub n_gamma: usize,
}

pub fn sector_data(gamma: &PhaseVector, ws: &WeightSystem) -> SectorData {
    let age = gamma.age();
    let iota = &age - ws.sum();
    let fixed_indices = gamma.fixed_indices();
    let n_gamma = fixed_indices.len();
    SectorData {
        gamma: gamma.clone(),
        age,
        iota,
        fixed_indices,
        n_gamma,
    }
}

/// `true` iff the age is an integer (the element lies in SL(n, C)).
pub fn is_special_linear(gamma: &PhaseVector) -> bool {
    is_integer(&gamma.age())
}

/// Does `g` fix every monomial of `W` (integer total phase)?
pub fn preserves_polynomial(g: &PhaseVector, w: &QHPolynomial) -> bool {
    w.terms.keys().all(|m| {
        let total = m
            .0
            .iter()
            .zip(&g.phases)
            .fold(Q::zero(), |acc, (&e, t)| acc + t * qi(e as i64));
        is_integer(&total)
    })
}

/// Admissibility: the group preserves `W` and contains `J_W`.
pub fn is_admissible(g: &DiagonalGroup, w: &QHPolynomial) -> Result<bool> {
    let ws = crate::poly::weight_system(w)?;
    for gen in &g.generators {
        if !preserves_polynomial(gen, w) {
            return Err(Error::NotASymmetryGroup(gen.label()));
        }
    }
    let j = exponential_grading_element(&ws);
    Ok(g.contains(&j))
}

// ---------------------------------------------------------------------------
// Mirror (dual) group
// ---------------------------------------------------------------------------

/// The Berglund-Henningson dual group `G^T` inside `G_{W^T}`.
///
/// An element `h` of `G_{W^T}` belongs to `G^T` iff the integrality pairing
/// `theta(h) . (E_W theta(g))` is an integer for every `g` in `G`.
pub fn mirror_group(g: &DiagonalGroup, w: &QHPolynomial) -> Result<DiagonalGroup> {
    let rows = exponent_matrix(w)?;
    if det_i64(&rows).is_zero() {
        return Err(Error::NotInvertible("singular exponent matrix".into()));
    }
    let g_max = maximal_group(w)?;
    if !g.is_subgroup_of(&g_max) {
        return Err(Error::NotASubgroup);
    }
    let wt = crate::atoms::transpose(w)?;
    let g_max_t = maximal_group(&wt)?;

    // precompute E_W theta(g) for the generators of G (always integral)
    let mut pair_vectors: Vec<Vec<Q>> = Vec::new();
    for gen in &g.generators {
        let v: Vec<Q> = rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&gen.phases)
                    .fold(Q::zero(), |acc, (&e, t)| acc + t * qi(e as i64))
            })
            .collect();
        debug_assert!(v.iter().all(is_integer));
        pair_vectors.push(v);
    }

    let mut dual_elements = Vec::new();
    for h in &g_max_t.elements {
        let ok = pair_vectors.iter().all(|v| {
            let s = h
                .phases
                .iter()
                .zip(v)
                .fold(Q::zero(), |acc, (t, c)| acc + t * c);
            is_integer(&s)
        });
        if ok {
            dual_elements.push(h.clone());
        }
    }
    Ok(DiagonalGroup {
        generators: dual_elements
            .iter()
            .filter(|e| !e.is_identity())
            .cloned()
            .collect(),
        elements: dual_elements,
    })
}
