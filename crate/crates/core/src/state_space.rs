//! State spaces of admissible pairs: sector-by-sector bases, bigradings,
//! the residue pairing matrix, Euler characteristics, supertraces, and the
//! Poincare-series cross-checks.
//!
//! For each group element `gamma` the sector carries the invariant classes
//! of `Jac(W_gamma) dx_gamma`; the group acts on a monomial class `x^m dx`
//! with total phase `sum (m_i + 1) theta_i`, so invariance is monomial-wise.

use crate::error::{Error, Result};
use crate::jacobian::{det_q, JacobianRing};
use crate::poly::{Monomial, QHPolynomial, WeightSystem};
use crate::rat::{is_integer, q, qi, Q};
use crate::series::{CycSeries, CyclotomicField, GradedSeries};
use crate::symmetry::{exponential_grading_element, DiagonalGroup, PhaseVector};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// One basis vector `x^m dx_gamma |gamma>` with its gradings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorElement {
    pub gamma: PhaseVector,
    /// Exponents over the fixed indices of `gamma`, in increasing index order.
    pub monomial: Monomial,
    pub wt: Q,
    pub mu_plus: Q,
    pub mu_minus: Q,
    pub parity: i8,
    pub deg_c: Q,
}

impl SectorElement {
    pub fn is_narrow(&self) -> bool {
        self.monomial.0.is_empty()
    }

    pub fn label(&self, j: &PhaseVector) -> String {
        let sector = match DiagonalGroup::as_power_of(j, &self.gamma) {
            Some(k) => format!("J^{k}"),
            None => self.gamma.label(),
        };
        if self.is_narrow() {
            format!("1|{sector}>")
        } else {
            let fixed = self.gamma.fixed_indices();
            let mut factors = Vec::new();
            for (pos, &i) in fixed.iter().enumerate() {
                let e = self.monomial.0[pos];
                if e == 1 {
                    factors.push(format!("x{}", i + 1));
                } else if e > 1 {
                    factors.push(format!("x{}^{}", i + 1, e));
                }
            }
            let m = if factors.is_empty() {
                String::new()
            } else {
                factors.join("*")
            };
            format!("{m}dx|{sector}>")
        }
    }
}

/// The full state space of an admissible pair.
#[derive(Debug, Clone)]
pub struct StateSpace {
    pub w: QHPolynomial,
    pub group: DiagonalGroup,
    pub weights: WeightSystem,
    pub c_hat: Q,
    pub j: PhaseVector,
    pub basis: Vec<SectorElement>,
    pub eta: Vec<Vec<Q>>,
    pub eta_inv: Vec<Vec<Q>>,
}

impl StateSpace {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn find(&self, gamma: &PhaseVector, monomial: &Monomial) -> Option<usize> {
        self.basis
            .iter()
            .position(|e| &e.gamma == gamma && &e.monomial == monomial)
    }

    /// Parities as +-1, aligned with the basis.
    pub fn parities(&self) -> Vec<i8> {
        self.basis.iter().map(|e| e.parity).collect()
    }

    pub fn mu_plus(&self) -> Vec<Q> {
        self.basis.iter().map(|e| e.mu_plus.clone()).collect()
    }
}

/// Is the monomial class `x^m dx_gamma` invariant under every generator?
fn is_invariant(
    monomial: &Monomial,
    fixed: &[usize],
    generators: &[PhaseVector],
) -> bool {
    generators.iter().all(|g| {
        let total = fixed
            .iter()
            .enumerate()
            .fold(Q::zero(), |acc, (pos, &i)| {
                acc + &g.phases[i] * qi(monomial.0[pos] as i64 + 1)
            });
        is_integer(&total)
    })
}

/// Restriction rings cached by fixed-index set.
pub struct SectorRings {
    pub rings: BTreeMap<Vec<usize>, JacobianRing>,
}

impl SectorRings {
    pub fn new() -> Self {
        SectorRings {
            rings: BTreeMap::new(),
        }
    }

    pub fn get(
        &mut self,
        w: &QHPolynomial,
        ws: &WeightSystem,
        fixed: &[usize],
    ) -> Result<&JacobianRing> {
        if !self.rings.contains_key(fixed) {
            let restricted = w.restrict(fixed);
            let sub_weights: Vec<Q> = fixed.iter().map(|&i| ws.weights[i].clone()).collect();
            let ring = JacobianRing::new(&restricted, &sub_weights)
                .map_err(|_| Error::DegenerateRestriction(fixed.to_vec()))?;
            self.rings.insert(fixed.to_vec(), ring);
        }
        Ok(self.rings.get(fixed).unwrap())
    }
}

impl Default for SectorRings {
    fn default() -> Self {
        Self::new()
    }
}

/// Build the state space, pairing matrix included.
pub fn build_state_space(w: &QHPolynomial, group: &DiagonalGroup) -> Result<StateSpace> {
    build_state_space_inner(w, group, true)
}

/// Sector-by-sector invariant monomial census for a (not necessarily
/// admissible) pair: the group only needs to preserve `W`. Used by the
/// B-model side of the mirror map.
pub fn sector_census(
    w: &QHPolynomial,
    group: &DiagonalGroup,
) -> Result<Vec<(PhaseVector, Monomial)>> {
    let ws = crate::poly::weight_system(w)?;
    for gen in &group.generators {
        if !crate::symmetry::preserves_polynomial(gen, w) {
            return Err(Error::NotASymmetryGroup(gen.label()));
        }
    }
    let mut rings = SectorRings::new();
    let mut out = Vec::new();
    for gamma in &group.elements {
        let fixed = gamma.fixed_indices();
        let ring = rings.get(w, &ws, &fixed)?;
        for m in &ring.basis.monomials {
            if is_invariant(m, &fixed, &group.generators) {
                out.push((gamma.clone(), m.clone()));
            }
        }
    }
    Ok(out)
}

/// Basis and gradings only (no pairing matrix); used by large sweeps that
/// never contract indices.
pub fn build_state_space_unpaired(w: &QHPolynomial, group: &DiagonalGroup) -> Result<StateSpace> {
    build_state_space_inner(w, group, false)
}

fn build_state_space_inner(
    w: &QHPolynomial,
    group: &DiagonalGroup,
    with_pairing: bool,
) -> Result<StateSpace> {
    let ws = crate::poly::weight_system(w)?;
    if !crate::symmetry::is_admissible(group, w)? {
        return Err(Error::NotAdmissible);
    }
    let c_hat = ws.central_charge();
    let j = exponential_grading_element(&ws);
    let half_c = &c_hat / qi(2);

    let mut rings = SectorRings::new();
    let mut basis: Vec<SectorElement> = Vec::new();
    for gamma in &group.elements {
        let fixed = gamma.fixed_indices();
        let ring = rings.get(w, &ws, &fixed)?;
        let iota = gamma.age() - ws.sum();
        let n_gamma = fixed.len();
        let parity = if n_gamma % 2 == 0 { 1 } else { -1 };
        let sum_q_fixed: Q = fixed
            .iter()
            .map(|&i| ws.weights[i].clone())
            .fold(Q::zero(), |a, b| a + b);
        for m in &ring.basis.monomials {
            if !is_invariant(m, &fixed, &group.generators) {
                continue;
            }
            let wt = m.weighted_degree(
                &fixed
                    .iter()
                    .map(|&i| ws.weights[i].clone())
                    .collect::<Vec<_>>(),
            ) + &sum_q_fixed;
            let mu_plus = &wt + &iota - &half_c;
            let mu_minus = qi(n_gamma as i64) - &wt + &iota - &half_c;
            let deg_c = (&mu_plus + &mu_minus + &c_hat) / qi(2);
            basis.push(SectorElement {
                gamma: gamma.clone(),
                monomial: m.clone(),
                wt,
                mu_plus,
                mu_minus,
                parity,
                deg_c,
            });
        }
    }
    // the flat identity 1|J> comes first
    let j_pos = basis
        .iter()
        .position(|e| e.gamma == j && e.is_narrow())
        .expect("admissible pair has the element 1|J>");
    basis.swap(0, j_pos);
    basis[1..].sort_by(|a, b| (&a.gamma, &a.monomial).cmp(&(&b.gamma, &b.monomial)));

    let n = basis.len();
    let mut eta = vec![vec![Q::zero(); n]; n];
    let mut eta_inv = vec![vec![Q::zero(); n]; n];
    if with_pairing {
        for a in 0..n {
            for b in 0..n {
                if basis[b].gamma != basis[a].gamma.inverse() {
                    continue;
                }
                let fixed = basis[a].gamma.fixed_indices();
                let ring = rings.get(w, &ws, &fixed)?;
                let socle_w = ring.basis.weights.iter().max().unwrap().clone();
                let wa = basis[a].monomial.weighted_degree(&ring.weights);
                let wb = basis[b].monomial.weighted_degree(&ring.weights);
                if wa + wb != socle_w {
                    continue;
                }
                eta[a][b] = ring.residue_pairing_monomials(&basis[a].monomial, &basis[b].monomial);
            }
        }
        eta_inv = invert_blockwise(&basis, &eta)?;
    }

    Ok(StateSpace {
        w: w.clone(),
        group: group.clone(),
        weights: ws,
        c_hat,
        j,
        basis,
        eta,
        eta_inv,
    })
}

/// Invert `eta` using its sector/weight block structure.
fn invert_blockwise(basis: &[SectorElement], eta: &[Vec<Q>]) -> Result<Vec<Vec<Q>>> {
    let n = basis.len();
    // block key: the unordered pair {(gamma, wt), (gamma^-1, complement wt)};
    // two indices can pair only within a key class
    let mut classes: BTreeMap<Vec<(PhaseVector, Q)>, Vec<usize>> = BTreeMap::new();
    for (i, e) in basis.iter().enumerate() {
        let inv = e.gamma.inverse();
        // complement weight: for b to pair with i we need wt_i + wt_b = socle
        // weight of the shared ring; recover it from mu_plus duality instead:
        // mu_plus_b = -mu_plus_i characterizes the partner class exactly.
        let mut key = vec![
            (e.gamma.clone(), e.mu_plus.clone()),
            (inv, -e.mu_plus.clone()),
        ];
        key.sort();
        classes.entry(key).or_default().push(i);
    }
    let mut inv = vec![vec![Q::zero(); n]; n];
    for (_, idx) in classes {
        let k = idx.len();
        let mut block = vec![vec![Q::zero(); k]; k];
        for (r, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                block[r][c] = eta[i][j].clone();
            }
        }
        let binv = invert_dense(&block).ok_or_else(|| {
            Error::DegenerateRestriction(vec![]) // nondegeneracy failure surfaces here
        })?;
        for (r, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                inv[i][j] = binv[r][c].clone();
            }
        }
    }
    Ok(inv)
}

fn invert_dense(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a = m.to_vec();
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

/// `chi = sum of parities`.
pub fn euler_characteristic(s: &StateSpace) -> i64 {
    s.basis.iter().map(|e| e.parity as i64).sum()
}

/// `Str(theta^2 - 1/4) = sum parity (mu+ - 1/2)(mu+ + 1/2)`.
pub fn supertrace_theta(s: &StateSpace) -> Q {
    s.basis.iter().fold(Q::zero(), |acc, e| {
        acc + qi(e.parity as i64) * (&e.mu_plus - q(1, 2)) * (&e.mu_plus + q(1, 2))
    })
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SupertraceReport {
    pub lhs: String,
    pub rhs: String,
    pub chi: i64,
    pub equal: bool,
}

/// Check `Str(theta^2 - 1/4) = (c - 3)/12 chi` exactly.
pub fn check_supertrace_formula(s: &StateSpace) -> SupertraceReport {
    let lhs = supertrace_theta(s);
    let chi = euler_characteristic(s);
    let rhs = (&s.c_hat - qi(3)) / qi(12) * qi(chi);
    SupertraceReport {
        equal: lhs == rhs,
        lhs: crate::rat::fmt_q(&lhs),
        rhs: crate::rat::fmt_q(&rhs),
        chi,
    }
}

// ---------------------------------------------------------------------------
// Poincare series routes
// ---------------------------------------------------------------------------

/// Direct census: `sum_a parity_a y^{mu+_a}`.
pub fn poincare_census(s: &StateSpace) -> GradedSeries {
    let mut p = GradedSeries::zero();
    for e in &s.basis {
        p.add_term(e.mu_plus.clone(), qi(e.parity as i64));
    }
    p
}

/// Per-fixed-locus check: the Kouchnirenko/Steenbrink product formula equals
/// the census over all standard monomials of the restriction.
pub fn check_sector_product_formula(s: &StateSpace) -> Result<bool> {
    let mut rings = SectorRings::new();
    let mut seen = std::collections::BTreeSet::new();
    for gamma in &s.group.elements {
        let fixed = gamma.fixed_indices();
        if !seen.insert(fixed.clone()) {
            continue;
        }
        if fixed.is_empty() {
            continue;
        }
        let ring = rings.get(&s.w, &s.weights, &fixed)?;
        let sub_weights: Vec<Q> = fixed.iter().map(|&i| s.weights.weights[i].clone()).collect();
        let product = crate::series::poincare_series_product(&sub_weights);
        let mut census = GradedSeries::zero();
        let sign = if fixed.len() % 2 == 0 { qi(1) } else { qi(-1) };
        let shift: Q = sub_weights.iter().fold(Q::zero(), |a, b| a + b);
        for m in &ring.basis.monomials {
            census.add_term(m.weighted_degree(&sub_weights) + &shift, sign.clone());
        }
        if product != census {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Group-averaged sector sum over roots of unity:
/// `sum_gamma y^{iota - c/2} (1/|G|) sum_g prod_{i in Fix}
///  (y - lambda_i(g) y^{q_i}) / (1 - lambda_i(g) y^{q_i})`.
pub fn poincare_group_averaged(s: &StateSpace) -> Result<GradedSeries> {
    // exponent N of the group: lcm of all phase denominators
    let mut n = BigInt::one();
    for e in &s.group.elements {
        n = n.lcm(&e.order());
    }
    let n_u: u64 = u64::try_from(&n).expect("group exponent fits u64");
    let field = CyclotomicField::new(n_u);
    let d = crate::rat::denominator_lcm(s.weights.weights.iter());
    let d_u: usize = usize::try_from(&d).expect("weight denominator fits usize");
    let order_q = qi(s.group.order() as i64);

    let mut total = GradedSeries::zero();
    for gamma in &s.group.elements {
        let fixed = gamma.fixed_indices();
        let iota = gamma.age() - s.weights.sum();
        let shift = &iota - &s.c_hat / qi(2);
        if fixed.is_empty() {
            total.add_term(shift, Q::one());
            continue;
        }
        let len = d_u * (fixed.len() + 1) + 1;
        let mut acc: Vec<crate::series::CycElt> = vec![field.zero(); len];
        for g in &s.group.elements {
            let mut series = CycSeries::one(&field, len);
            for &i in &fixed {
                let k: usize = usize::try_from(crate::rat::mul_to_integer(
                    &s.weights.weights[i],
                    &d,
                ))
                .unwrap();
                let e_big = crate::rat::mul_to_integer(&g.phases[i], &n);
                let e: i64 = i64::try_from(&e_big).expect("phase numerator fits i64");
                series.mul_binomial(&field, d_u, e, k);
                series.mul_geometric(&field, e, k);
            }
            for (idx, c) in series.coeffs.iter().enumerate() {
                acc[idx] = field.add(&acc[idx], c);
            }
        }
        // rationality and margin checks, then assemble
        let margin_start = d_u * fixed.len() + 1;
        for (idx, c) in acc.iter().enumerate() {
            let r = field
                .to_rational(c)
                .ok_or(Error::NotQuasiHomogeneous)
                .map_err(|_| Error::DegenerateRestriction(fixed.clone()))?;
            let r = r / &order_q;
            if idx >= margin_start {
                assert!(
                    r.is_zero(),
                    "group-averaged series exceeded its polynomial bound"
                );
            }
            if !r.is_zero() {
                total.add_term(qi(idx as i64) / Q::from_integer(d.clone()) + &shift, r);
            }
        }
    }
    Ok(total)
}

/// The census, averaged, and per-sector product verdicts in one bundle.
#[derive(Debug, Clone)]
pub struct PoincareCrossCheck {
    pub census: GradedSeries,
    pub averaged: GradedSeries,
    pub product_formula_ok: bool,
    pub chi_census: Q,
    pub str_theta2_census: Q,
}

pub fn poincare_series_pair(s: &StateSpace) -> Result<PoincareCrossCheck> {
    let census = poincare_census(s);
    let averaged = poincare_group_averaged(s)?;
    let product_formula_ok = check_sector_product_formula(s)?;
    let (chi, str2) = census.limits();
    Ok(PoincareCrossCheck {
        census,
        averaged,
        product_formula_ok,
        chi_census: chi,
        str_theta2_census: str2,
    })
}

/// Exact determinant of the pairing matrix (nondegeneracy witness).
pub fn eta_determinant(s: &StateSpace) -> Q {
    det_q(&s.eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::symmetry::{maximal_group, subgroup_generated};

    pub fn minimal_pair(s: &str) -> StateSpace {
        let w = parse_polynomial(s).unwrap();
        let ws = crate::poly::weight_system(&w).unwrap();
        let j = exponential_grading_element(&ws);
        let g = subgroup_generated(&[j], w.nvars);
        build_state_space(&w, &g).unwrap()
    }

    #[test]
    fn cubic_reproduces_table_one() {
        let s = minimal_pair("x1^3+x2^3+x3^3");
        assert_eq!(s.rank(), 4);
        let j = s.j.clone();
        let j2 = j.add(&j);
        let id = PhaseVector::identity(3);

        let a = &s.basis[s.find(&j, &Monomial(vec![])).unwrap()];
        assert_eq!((a.mu_plus.clone(), a.mu_minus.clone()), (q(-1, 2), q(-1, 2)));
        assert_eq!(a.parity, 1);
        assert_eq!(a.deg_c, qi(0));

        let b = &s.basis[s.find(&j2, &Monomial(vec![])).unwrap()];
        assert_eq!((b.mu_plus.clone(), b.mu_minus.clone()), (q(1, 2), q(1, 2)));
        assert_eq!(b.parity, 1);
        assert_eq!(b.deg_c, qi(1));

        let c = &s.basis[s.find(&id, &Monomial(vec![0, 0, 0])).unwrap()];
        assert_eq!((c.mu_plus.clone(), c.mu_minus.clone()), (q(-1, 2), q(1, 2)));
        assert_eq!(c.parity, -1);
        assert_eq!(c.deg_c, q(1, 2));

        let d = &s.basis[s.find(&id, &Monomial(vec![1, 1, 1])).unwrap()];
        assert_eq!((d.mu_plus.clone(), d.mu_minus.clone()), (q(1, 2), q(-1, 2)));
        assert_eq!(d.parity, -1);
        assert_eq!(d.deg_c, q(1, 2));
    }

    #[test]
    fn one_variable_cubic_sector_census() {
        let s = minimal_pair("x1^3");
        assert_eq!(s.rank(), 2);
        assert!(s.basis.iter().all(|e| e.is_narrow()));
        assert_eq!(euler_characteristic(&s), 2);
        assert_eq!(supertrace_theta(&s), q(-4, 9));
        let r = check_supertrace_formula(&s);
        assert!(r.equal);
        // eta is the antidiagonal 1
        assert_eq!(s.eta[0][1], qi(1));
        assert_eq!(s.eta[1][0], qi(1));
        assert_eq!(s.eta[0][0], qi(0));
    }

    #[test]
    fn x_squared_supertrace() {
        let s = minimal_pair("x1^2");
        assert_eq!(s.rank(), 1);
        assert_eq!(s.basis[0].mu_plus, qi(0));
        assert_eq!(supertrace_theta(&s), q(-1, 4));
        assert!(check_supertrace_formula(&s).equal);
    }

    #[test]
    fn two_variable_fermat_ranks() {
        for d in 2..=8u32 {
            let s = minimal_pair(&format!("x1^{d}+x2^{d}"));
            assert_eq!(s.rank() as u32, 2 * d - 2, "rank mismatch for d={d}");
            let narrow = s.basis.iter().filter(|e| e.is_narrow()).count() as u32;
            assert_eq!(narrow, d - 1);
            assert!(s.basis.iter().all(|e| e.parity == 1));
            assert_eq!(euler_characteristic(&s) as u32, 2 * d - 2);
            // mu+ = mu- everywhere (two-variable Fermat with minimal group)
            assert!(s.basis.iter().all(|e| e.mu_plus == e.mu_minus));
            assert!(check_supertrace_formula(&s).equal);
        }
    }

    #[test]
    fn cubic_chi_vanishes() {
        let s = minimal_pair("x1^3+x2^3+x3^3");
        assert_eq!(euler_characteristic(&s), 0);
        assert_eq!(supertrace_theta(&s), qi(0));
        assert!(check_supertrace_formula(&s).equal);
    }

    #[test]
    fn maximal_group_ranks_match_census() {
        // ranks of the three Fermat CY state spaces with the maximal group
        for (s, expected) in [
            ("x1^3+x2^3+x3^3", 8usize),
            ("x1^4+x2^4+x3^2", 9),
            ("x1^6+x2^3+x3^2", 10),
        ] {
            let w = parse_polynomial(s).unwrap();
            let g = maximal_group(&w).unwrap();
            let sp = build_state_space(&w, &g).unwrap();
            assert_eq!(sp.rank(), expected, "rank mismatch for {s}");
            // invertible W with maximal group: mu+ = mu- everywhere
            assert!(sp.basis.iter().all(|e| e.mu_plus == e.mu_minus));
            assert!(check_supertrace_formula(&sp).equal);
        }
    }

    #[test]
    fn pairing_duality() {
        for s in ["x1^3+x2^3+x3^3", "x1^4+x2^4", "x1^2*x2+x2^2*x3+x3^3"] {
            let sp = minimal_pair(s);
            let n = sp.rank();
            for a in 0..n {
                let mut found = false;
                for b in 0..n {
                    if !sp.eta[a][b].is_zero() {
                        found = true;
                        assert_eq!(
                            &sp.basis[a].mu_plus + &sp.basis[b].mu_plus,
                            Q::zero(),
                            "mu+ duality fails in {s}"
                        );
                    }
                }
                assert!(found, "no pairing partner in {s}");
            }
            // eta symmetric, nondegenerate, inverse correct
            assert!(!eta_determinant(&sp).is_zero());
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(sp.eta[i][j], sp.eta[j][i]);
                    let mut dot = Q::zero();
                    for k in 0..n {
                        dot += &sp.eta[i][k] * &sp.eta_inv[k][j];
                    }
                    assert_eq!(dot, if i == j { Q::one() } else { Q::zero() });
                }
            }
        }
    }

    #[test]
    fn deg_c_of_identity_is_zero() {
        for s in ["x1^3+x2^3+x3^3", "x1^5+x2^5", "x1^2"] {
            let sp = minimal_pair(s);
            assert_eq!(sp.basis[0].gamma, sp.j);
            assert_eq!(sp.basis[0].deg_c, qi(0));
            assert_eq!(sp.basis[0].mu_plus, -&sp.c_hat / qi(2));
        }
    }

    #[test]
    fn poincare_routes_agree_for_cubic() {
        let sp = minimal_pair("x1^3+x2^3+x3^3");
        let cc = poincare_series_pair(&sp).unwrap();
        assert_eq!(cc.census, cc.averaged);
        assert!(cc.product_formula_ok);
        // census: the four Table-1 terms cancel pairwise
        assert_eq!(cc.chi_census, qi(0));
    }

    #[test]
    fn poincare_routes_agree_for_x3() {
        let sp = minimal_pair("x1^3");
        let cc = poincare_series_pair(&sp).unwrap();
        assert_eq!(cc.census, cc.averaged);
        assert!(cc.product_formula_ok);
        let mut expect = GradedSeries::zero();
        expect.add_term(q(-1, 6), qi(1));
        expect.add_term(q(1, 6), qi(1));
        assert_eq!(cc.census, expect);
        assert_eq!(cc.chi_census, qi(2));
        assert_eq!(cc.str_theta2_census, q(1, 18));
        // Str(theta^2) = Str(theta^2 - 1/4) + chi/4
        assert_eq!(
            cc.str_theta2_census,
            supertrace_theta(&sp) + qi(euler_characteristic(&sp)) / qi(4)
        );
    }

    #[test]
    fn pillowcase_pair_builds() {
        let w = parse_polynomial("x1^4+x2^4+x3^2").unwrap();
        let g = subgroup_generated(
            &[
                PhaseVector::new(vec![q(1, 4), q(1, 4), qi(0)]),
                PhaseVector::new(vec![qi(0), qi(0), q(1, 2)]),
            ],
            3,
        );
        assert_eq!(g.order(), 8);
        let sp = build_state_space(&w, &g).unwrap();
        assert_eq!(sp.rank(), 6);
        assert!(sp.basis.iter().all(|e| e.parity == 1));
        assert!(check_supertrace_formula(&sp).equal);
        let cc = poincare_series_pair(&sp).unwrap();
        assert_eq!(cc.census, cc.averaged);
    }

    #[test]
    fn not_admissible_is_an_error() {
        let w = parse_polynomial("x1^3+x2^3+x3^3").unwrap();
        let trivial = subgroup_generated(&[], 3);
        assert!(matches!(
            build_state_space(&w, &trivial),
            Err(Error::NotAdmissible)
        ));
    }
}
