//! The Berglund-Huebsch/Henningson/Krawitz mirror: transpose polynomial,
//! dual group, the monomial-level basis bijection, and B-model gradings.
//!
//! The map sends `x^m dx_gamma | gamma >` with `gamma = prod rho_i^{c_i}`
//! (the `rho_i` are the columns of `E_W^{-1}`) to the B-side element whose
//! sector is `prod rhobar_j^{u_j}` with `u_j = m_j + 1` on the fixed locus
//! and `0` elsewhere, and whose monomial exponents are `c_i - 1` over the
//! fixed locus of the image sector. The exponent vector `c` is pinned down
//! by scanning the finite B-side sector basis for the unique representative
//! whose exponents reproduce `gamma`.

use crate::atoms::{exponent_matrix, transpose};
use crate::error::{Error, Result};
use crate::poly::{Monomial, QHPolynomial, WeightSystem};
use crate::rat::{qi, Q};
use crate::state_space::{sector_census, SectorElement, StateSpace};
use crate::symmetry::{mirror_group, DiagonalGroup, PhaseVector};
use num_traits::Zero;
use serde::Serialize;

/// A B-model basis vector with its B-gradings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BModelElement {
    pub gamma: PhaseVector,
    pub monomial: Monomial,
    pub mu_plus_b: Q,
    pub mu_minus_b: Q,
    pub parity_b: i8,
}

impl BModelElement {
    pub fn label(&self, j: &PhaseVector) -> String {
        let sector = match DiagonalGroup::as_power_of(j, &self.gamma) {
            Some(k) => format!("J^{k}"),
            None => self.gamma.label(),
        };
        if self.gamma.fixed_indices().is_empty() {
            format!("1|{sector}>")
        } else {
            let fixed = self.gamma.fixed_indices();
            let factors: Vec<String> = fixed
                .iter()
                .enumerate()
                .filter(|(pos, _)| self.monomial.0[*pos] > 0)
                .map(|(pos, &i)| {
                    let e = self.monomial.0[pos];
                    if e == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, e)
                    }
                })
                .collect();
            format!("{}dx|{sector}>", factors.join("*"))
        }
    }
}

/// The full mirror correspondence for an admissible pair.
#[derive(Debug, Clone)]
pub struct MirrorCorrespondence {
    pub w: QHPolynomial,
    pub w_t: QHPolynomial,
    pub group_t: DiagonalGroup,
    pub b_weights: WeightSystem,
    pub b_basis: Vec<BModelElement>,
    /// `forward[i]` = index into `b_basis` of the image of A-basis vector `i`.
    pub forward: Vec<usize>,
}

/// B-model gradings of a sector monomial over `(W^T, G^T)`.
fn b_gradings(
    gamma: &PhaseVector,
    monomial: &Monomial,
    ws: &WeightSystem,
    c_hat: &Q,
) -> BModelElement {
    let n = ws.nvars();
    let fixed = gamma.fixed_indices();
    let wt = monomial.weighted_degree(
        &fixed
            .iter()
            .map(|&i| ws.weights[i].clone())
            .collect::<Vec<_>>(),
    ) + fixed
        .iter()
        .map(|&i| ws.weights[i].clone())
        .fold(Q::zero(), |a, b| a + b);
    let iota = gamma.age() - ws.sum();
    let iota_inv = gamma.inverse().age() - ws.sum();
    let half_c = c_hat / qi(2);
    BModelElement {
        gamma: gamma.clone(),
        monomial: monomial.clone(),
        mu_plus_b: &wt + &iota - &half_c,
        mu_minus_b: &wt + &iota_inv - &half_c,
        parity_b: if (n - fixed.len()) % 2 == 0 { 1 } else { -1 },
    }
}

/// Construct the Krawitz basis bijection from a built A-model state space.
pub fn krawitz_map(space_a: &StateSpace) -> Result<MirrorCorrespondence> {
    let w = &space_a.w;
    let n = w.nvars;
    let rows = exponent_matrix(w)?;
    let w_t = transpose(w)?;
    let group_t = mirror_group(&space_a.group, w)?;
    let b_weights = crate::poly::weight_system(&w_t)?;
    let c_hat_b = b_weights.central_charge();

    // independently built B-side basis with gradings
    let b_raw = sector_census(&w_t, &group_t)?;
    let b_basis: Vec<BModelElement> = b_raw
        .iter()
        .map(|(g, m)| b_gradings(g, m, &b_weights, &c_hat_b))
        .collect();

    // rhobar_j = row j of E_W^{-1}; the image sector of an A-element is
    // prod_j rhobar_j^{u_j}.
    let e_inv = invert_rows(&rows).ok_or_else(|| {
        Error::NotInvertible("singular exponent matrix".into())
    })?;

    if space_a.basis.len() != b_basis.len() {
        return Err(Error::MapNotWellDefined(format!(
            "rank mismatch: {} vs {}",
            space_a.basis.len(),
            b_basis.len()
        )));
    }
    // candidate images per A-element; loop atoms can admit several
    // exponent-rule representatives of equal weight, so the assignment is a
    // perfect matching over the candidate sets (gradings filter the sets)
    let mut candidates = Vec::with_capacity(space_a.basis.len());
    for elem in &space_a.basis {
        let c = image_candidates(elem, n, &e_inv, &b_basis)?;
        if c.is_empty() {
            return Err(Error::MapNotWellDefined(format!(
                "no image for {}",
                elem.label(&space_a.j)
            )));
        }
        candidates.push(c);
    }
    let forward = match_candidates(&candidates).ok_or_else(|| {
        Error::MapNotWellDefined("no consistent bijective assignment".into())
    })?;
    Ok(MirrorCorrespondence {
        w: w.clone(),
        w_t,
        group_t,
        b_weights,
        b_basis,
        forward,
    })
}

fn invert_rows(rows: &[Vec<u32>]) -> Option<Vec<Vec<Q>>> {
    let n = rows.len();
    let mut a: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| r.iter().map(|&e| qi(e as i64)).collect())
        .collect();
    let mut inv: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Q::from_integer(1.into()) } else { Q::zero() })
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

/// All B-basis indices satisfying the exponent rule for one A-element,
/// filtered by bigrading and parity preservation.
fn image_candidates(
    elem: &SectorElement,
    n: usize,
    e_inv: &[Vec<Q>],
    b_basis: &[BModelElement],
) -> Result<Vec<usize>> {
    let fixed = elem.gamma.fixed_indices();
    // u_j = m_j + 1 on the fixed locus, 0 elsewhere
    let mut u = vec![0u32; n];
    for (pos, &j) in fixed.iter().enumerate() {
        u[j] = elem.monomial.0[pos] + 1;
    }
    // image sector: phases of prod rhobar_j^{u_j} = sum_j u_j (row j of E^{-1})
    let gamma_b = PhaseVector::new(
        (0..n)
            .map(|slot| {
                (0..n).fold(Q::zero(), |acc, j| {
                    acc + &e_inv[j][slot] * qi(u[j] as i64)
                })
            })
            .collect(),
    );
    // scan the B-sector basis for monomials r with
    // prod rho_i^{r_i + 1 on Fix, 0 off} = gamma_A
    let fixed_b = gamma_b.fixed_indices();
    let mut found = Vec::new();
    for (idx, b) in b_basis.iter().enumerate() {
        if b.gamma != gamma_b {
            continue;
        }
        let mut c = vec![0u32; n];
        for (pos, &i) in fixed_b.iter().enumerate() {
            c[i] = b.monomial.0[pos] + 1;
        }
        // phases of prod rho_i^{c_i} = E^{-1} c
        let phases = PhaseVector::new(
            (0..n)
                .map(|row| {
                    (0..n).fold(Q::zero(), |acc, i| {
                        acc + &e_inv[row][i] * qi(c[i] as i64)
                    })
                })
                .collect(),
        );
        if phases == elem.gamma
            && b.mu_plus_b == elem.mu_plus
            && b.mu_minus_b == elem.mu_minus
            && b.parity_b == elem.parity
        {
            found.push(idx);
        }
    }
    Ok(found)
}

/// Deterministic perfect matching over small candidate sets (backtracking,
/// scarcest element first).
fn match_candidates(candidates: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = candidates.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (candidates[i].len(), i));
    let mut assignment = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        pos: usize,
        order: &[usize],
        candidates: &[Vec<usize>],
        assignment: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let i = order[pos];
        for &c in &candidates[i] {
            if !used[c] {
                used[c] = true;
                assignment[i] = c;
                if go(pos + 1, order, candidates, assignment, used) {
                    return true;
                }
                used[c] = false;
            }
        }
        false
    }
    if go(0, &order, candidates, &mut assignment, &mut used) {
        Some(assignment)
    } else {
        None
    }
}

/// One row of the mirror verification report.
#[derive(Debug, Clone, Serialize)]
pub struct MirrorRow {
    pub a_label: String,
    pub b_label: String,
    pub mu_plus: String,
    pub mu_minus: String,
    pub parity: i8,
    pub gradings_match: bool,
    pub parity_match: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MirrorReport {
    pub rows: Vec<MirrorRow>,
    pub bijective: bool,
    pub rank_a: usize,
    pub rank_b: usize,
    pub c_hat_equal: bool,
    pub chi_preserved: bool,
    pub str_theta2_preserved: bool,
    pub pass: bool,
}

/// Verify bijectivity, bigrading and parity preservation, central-charge
/// equality, and the chi / Str(theta^2) transports.
pub fn verify_mirror(space_a: &StateSpace, corr: &MirrorCorrespondence) -> MirrorReport {
    let mut rows = Vec::new();
    let mut all_gradings = true;
    let mut all_parity = true;
    let j_b = crate::symmetry::exponential_grading_element(&corr.b_weights);
    for (i, a) in space_a.basis.iter().enumerate() {
        let b = &corr.b_basis[corr.forward[i]];
        let gradings_match = a.mu_plus == b.mu_plus_b && a.mu_minus == b.mu_minus_b;
        let parity_match = a.parity == b.parity_b;
        all_gradings &= gradings_match;
        all_parity &= parity_match;
        rows.push(MirrorRow {
            a_label: a.label(&space_a.j),
            b_label: b.label(&j_b),
            mu_plus: crate::rat::fmt_q(&a.mu_plus),
            mu_minus: crate::rat::fmt_q(&a.mu_minus),
            parity: a.parity,
            gradings_match,
            parity_match,
        });
    }
    let rank_a = space_a.basis.len();
    let rank_b = corr.b_basis.len();
    let c_hat_equal = corr.b_weights.central_charge() == space_a.c_hat;
    let chi_a: i64 = space_a.basis.iter().map(|e| e.parity as i64).sum();
    let chi_b: i64 = corr.b_basis.iter().map(|e| e.parity_b as i64).sum();
    let str_a = space_a.basis.iter().fold(Q::zero(), |acc, e| {
        acc + qi(e.parity as i64) * &e.mu_plus * &e.mu_plus
    });
    let str_b = corr.b_basis.iter().fold(Q::zero(), |acc, e| {
        acc + qi(e.parity_b as i64) * &e.mu_plus_b * &e.mu_plus_b
    });
    let bijective = rank_a == rank_b;
    let pass = bijective && all_gradings && all_parity && c_hat_equal && chi_a == chi_b
        && str_a == str_b;
    MirrorReport {
        rows,
        bijective,
        rank_a,
        rank_b,
        c_hat_equal,
        chi_preserved: chi_a == chi_b,
        str_theta2_preserved: str_a == str_b,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::state_space::build_state_space;
    use crate::symmetry::{exponential_grading_element, maximal_group, subgroup_generated};

    fn minimal_pair(s: &str) -> StateSpace {
        let w = parse_polynomial(s).unwrap();
        let ws = crate::poly::weight_system(&w).unwrap();
        let j = exponential_grading_element(&ws);
        let g = subgroup_generated(&[j], w.nvars);
        build_state_space(&w, &g).unwrap()
    }

    #[test]
    fn fermat_cubic_matches_the_b_model_table() {
        let sp = minimal_pair("x1^3+x2^3+x3^3");
        let corr = krawitz_map(&sp).unwrap();
        let report = verify_mirror(&sp, &corr);
        assert!(report.pass);
        assert_eq!(report.rank_a, 4);
        // entrywise images: 1|J> -> dx|J^0>, 1|J^2> -> x1x2x3 dx|J^0>,
        // dx|J^0> -> 1|J>, x1x2x3 dx|J^0> -> 1|J^2>
        let j = sp.j.clone();
        let j2 = j.add(&j);
        let id = PhaseVector::identity(3);
        let expect: Vec<(PhaseVector, Monomial, PhaseVector, Monomial)> = vec![
            (j.clone(), Monomial(vec![]), id.clone(), Monomial(vec![0, 0, 0])),
            (j2.clone(), Monomial(vec![]), id.clone(), Monomial(vec![1, 1, 1])),
            (id.clone(), Monomial(vec![0, 0, 0]), j.clone(), Monomial(vec![])),
            (id.clone(), Monomial(vec![1, 1, 1]), j2.clone(), Monomial(vec![])),
        ];
        for (ga, ma, gb, mb) in expect {
            let ai = sp.find(&ga, &ma).unwrap();
            let b = &corr.b_basis[corr.forward[ai]];
            assert_eq!(b.gamma, gb);
            assert_eq!(b.monomial, mb);
        }
        // B-table gradings for the images of the narrow elements
        let ai = sp.find(&j, &Monomial(vec![])).unwrap();
        let b = &corr.b_basis[corr.forward[ai]];
        assert_eq!(b.mu_plus_b, crate::rat::q(-1, 2));
        assert_eq!(b.mu_minus_b, crate::rat::q(-1, 2));
        assert_eq!(b.parity_b, 1);
    }

    #[test]
    fn maximal_group_mirrors_to_the_full_jacobian_ring() {
        let w = parse_polynomial("x1^3+x2^3+x3^3").unwrap();
        let g = maximal_group(&w).unwrap();
        let sp = build_state_space(&w, &g).unwrap();
        let corr = krawitz_map(&sp).unwrap();
        assert_eq!(corr.group_t.order(), 1);
        // all images in the identity sector
        assert!(corr.b_basis.iter().all(|b| b.gamma.is_identity()));
        assert!(verify_mirror(&sp, &corr).pass);
    }

    #[test]
    fn one_variable_self_mirror() {
        let sp = minimal_pair("x1^3");
        let corr = krawitz_map(&sp).unwrap();
        assert_eq!(corr.b_basis.len(), 2);
        assert!(verify_mirror(&sp, &corr).pass);
    }

    #[test]
    fn chain_and_loop_minimal_pairs_verify() {
        for s in [
            "x1^2*x2+x2^2*x3+x3^3",
            "x1^2*x2+x2^2*x3+x3^2*x1",
            "x1^3*x2+x2^4+x3^2",
            "x1^4+x2^4",
            "x1^5+x2^5",
        ] {
            let sp = minimal_pair(s);
            let corr = krawitz_map(&sp).unwrap();
            let report = verify_mirror(&sp, &corr);
            assert!(report.pass, "mirror verification failed for {s}");
        }
    }

    #[test]
    fn chain_with_maximal_group_covers_broad_sectors() {
        let w = parse_polynomial("x1^3*x2+x2^2*x3+x3^2").unwrap();
        let g = maximal_group(&w).unwrap();
        let sp = build_state_space(&w, &g).unwrap();
        // rank = Milnor number of the transpose (weights (1/3,1/3,1/3))
        assert_eq!(sp.rank(), 8);
        // broad sectors genuinely occur here
        assert!(sp.basis.iter().any(|e| !e.is_narrow()));
        let corr = krawitz_map(&sp).unwrap();
        assert!(verify_mirror(&sp, &corr).pass);
    }

    #[test]
    fn corrupted_image_is_rejected() {
        // a corrupted sector phase no longer lies in the dual group's census
        let sp = minimal_pair("x1^3+x2^3+x3^3");
        let corr = krawitz_map(&sp).unwrap();
        let mut bad = corr.b_basis[0].gamma.clone();
        bad.phases[0] = crate::rat::q(1, 5);
        let bad = PhaseVector::new(bad.phases);
        assert!(corr.b_basis.iter().all(|b| b.gamma != bad));
        assert!(!corr.group_t.contains(&bad));
    }
}
