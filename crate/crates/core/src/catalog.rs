//! The built-in catalog of named polynomials and pairs, group-spec parsing,
//! and the census of invertible Calabi-Yau polynomials in three variables.

use crate::error::{Error, Result};
use crate::poly::{parse_polynomial, QHPolynomial};
use crate::rat::{Q};
use crate::symmetry::{
    exponential_grading_element, is_special_linear, maximal_group, subgroup_generated,
    DiagonalGroup, PhaseVector,
};
use num_bigint::BigInt;

use serde::Serialize;

/// Named polynomials: the three-variable CY table plus the one- and
/// two-variable Fermat families.
pub fn named_polynomials() -> Vec<(&'static str, &'static str)> {
    let mut v = vec![
        ("cubic", "x1^3+x2^3+x3^3"),
        ("fermat_333", "x1^3+x2^3+x3^3"),
        ("chain_333", "x1^2*x2+x2^2*x3+x3^3"),
        ("loop_333", "x1^2*x2+x2^2*x3+x3^2*x1"),
        ("mixed_333_a", "x1^3+x2^2*x3+x3^3"),
        ("mixed_333_b", "x1^2*x2+x1*x2^2+x3^3"),
        ("fermat_442", "x1^4+x2^4+x3^2"),
        ("chain_442", "x1^3*x2+x2^2*x3+x3^2"),
        ("mixed_442_a", "x1^3*x2+x2^4+x3^2"),
        ("mixed_442_b", "x1^4+x2^2*x3+x3^2"),
        ("mixed_442_c", "x1^3*x2+x2^3*x1+x3^2"),
        ("fermat_632", "x1^6+x2^3+x3^2"),
        ("mixed_632_a", "x1^4*x2+x2^3+x3^2"),
        ("mixed_632_b", "x1^3+x2^3*x3+x3^2"),
        ("quintic", "x1^5+x2^5+x3^5+x4^5+x5^5"),
    ];
    for a in 2..=6 {
        v.push(match a {
            2 => ("x2", "x1^2"),
            3 => ("x3", "x1^3"),
            4 => ("x4", "x1^4"),
            5 => ("x5", "x1^5"),
            _ => ("x6", "x1^6"),
        });
    }
    for d in 2..=8 {
        v.push(match d {
            2 => ("fermat2_2", "x1^2+x2^2"),
            3 => ("fermat2_3", "x1^3+x2^3"),
            4 => ("fermat2_4", "x1^4+x2^4"),
            5 => ("fermat2_5", "x1^5+x2^5"),
            6 => ("fermat2_6", "x1^6+x2^6"),
            7 => ("fermat2_7", "x1^7+x2^7"),
            _ => ("fermat2_8", "x1^8+x2^8"),
        });
    }
    v
}

pub fn lookup_polynomial(name: &str) -> Result<QHPolynomial> {
    for (n, text) in named_polynomials() {
        if n == name {
            return parse_polynomial(text);
        }
    }
    Err(Error::Config(format!("unknown catalog polynomial '{name}'")))
}

/// Group specs: `"J"` (minimal), `"max"`, `"SL"` (SL cap G_W), or explicit
/// generator lists of rational pairs, e.g. `[[1,3],[1,3],[1,3]]` for the
/// single generator `(1/3, 1/3, 1/3)` or a list of such lists.
pub fn resolve_group(spec: &str, w: &QHPolynomial) -> Result<DiagonalGroup> {
    match spec {
        "J" => {
            let ws = crate::poly::weight_system(w)?;
            let j = exponential_grading_element(&ws);
            Ok(subgroup_generated(&[j], w.nvars))
        }
        "max" => maximal_group(w),
        "SL" => {
            let g = maximal_group(w)?;
            let sl: Vec<PhaseVector> = g
                .elements
                .iter()
                .filter(|e| is_special_linear(e))
                .cloned()
                .collect();
            Ok(DiagonalGroup {
                generators: sl.iter().filter(|e| !e.is_identity()).cloned().collect(),
                elements: sl,
            })
        }
        _ => {
            let v: serde_json::Value = serde_json::from_str(spec)
                .map_err(|e| Error::Config(format!("bad group spec: {e}")))?;
            let gens = parse_generator_spec(&v, w.nvars)?;
            Ok(subgroup_generated(&gens, w.nvars))
        }
    }
}

fn parse_rational_pair(v: &serde_json::Value) -> Result<Q> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::Config("phase must be a [num, den] pair".into()))?;
    let n = arr[0]
        .as_i64()
        .ok_or_else(|| Error::Config("phase numerator must be an integer".into()))?;
    let d = arr[1]
        .as_i64()
        .filter(|d| *d != 0)
        .ok_or_else(|| Error::Config("phase denominator must be nonzero".into()))?;
    Ok(Q::new(BigInt::from(n), BigInt::from(d)))
}

fn parse_generator(v: &serde_json::Value, nvars: usize) -> Result<PhaseVector> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Config("generator must be a list of phases".into()))?;
    if arr.len() != nvars {
        return Err(Error::Config(format!(
            "generator has {} phases, polynomial has {} variables",
            arr.len(),
            nvars
        )));
    }
    Ok(PhaseVector::new(
        arr.iter()
            .map(parse_rational_pair)
            .collect::<Result<Vec<Q>>>()?,
    ))
}

fn parse_generator_spec(v: &serde_json::Value, nvars: usize) -> Result<Vec<PhaseVector>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Config("generator spec must be a JSON list".into()))?;
    if arr.is_empty() {
        return Ok(Vec::new());
    }
    // one generator ([[n,d],...]) or several ([[[n,d],...], ...])
    if arr[0]
        .as_array()
        .map(|inner| inner.first().map(|x| x.is_i64()).unwrap_or(false))
        .unwrap_or(false)
    {
        Ok(vec![parse_generator(v, nvars)?])
    } else {
        arr.iter().map(|g| parse_generator(g, nvars)).collect()
    }
}

/// One standard catalog pair for the sweep suites.
#[derive(Debug, Clone)]
pub struct CatalogPair {
    pub name: String,
    pub poly: QHPolynomial,
    pub group: DiagonalGroup,
}

/// The standard sweep: all CY-3 table entries with the minimal and maximal
/// groups, the two-variable Fermat family with the minimal group, the
/// one-variable Fermat family, and the pillowcase pair.
pub fn catalog_pairs() -> Vec<CatalogPair> {
    let mut out = Vec::new();
    let cy3 = [
        "fermat_333",
        "chain_333",
        "loop_333",
        "mixed_333_a",
        "mixed_333_b",
        "fermat_442",
        "chain_442",
        "mixed_442_a",
        "mixed_442_b",
        "mixed_442_c",
        "fermat_632",
        "mixed_632_a",
        "mixed_632_b",
    ];
    for name in cy3 {
        let w = lookup_polynomial(name).unwrap();
        for spec in ["J", "max"] {
            let g = resolve_group(spec, &w).unwrap();
            out.push(CatalogPair {
                name: format!("{name}/{spec}"),
                poly: w.clone(),
                group: g,
            });
        }
    }
    for d in 2..=8 {
        let name = format!("fermat2_{d}");
        let w = lookup_polynomial(&name).unwrap();
        let g = resolve_group("J", &w).unwrap();
        out.push(CatalogPair {
            name: format!("{name}/J"),
            poly: w,
            group: g,
        });
    }
    for a in 2..=6 {
        let name = format!("x{a}");
        let w = lookup_polynomial(&name).unwrap();
        let g = resolve_group("J", &w).unwrap();
        out.push(CatalogPair {
            name: format!("{name}/J"),
            poly: w,
            group: g,
        });
    }
    // the pillowcase pair
    let w = lookup_polynomial("fermat_442").unwrap();
    let g = resolve_group("[[[1,4],[1,4],[0,1]],[[0,1],[0,1],[1,2]]]", &w).unwrap();
    out.push(CatalogPair {
        name: "pillowcase".into(),
        poly: w,
        group: g,
    });
    out
}

pub fn lookup_pair(name: &str) -> Result<CatalogPair> {
    catalog_pairs()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::Config(format!("unknown catalog pair '{name}'")))
}

// ---------------------------------------------------------------------------
// CY-3 census
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct CensusEntry {
    pub weights: Vec<String>,
    pub kind: String,
    pub polynomial: String,
}

/// Canonical key of a polynomial up to variable permutation: the
/// lexicographically minimal sorted exponent-row list over all
/// permutations.
fn canonical_key(w: &QHPolynomial) -> Vec<Vec<u32>> {
    let n = w.nvars;
    let mut perms = vec![];
    let mut idx: Vec<usize> = (0..n).collect();
    permutations(&mut idx, 0, &mut perms);
    let mut best: Option<Vec<Vec<u32>>> = None;
    for p in perms {
        let wp = w.permute_vars(&p);
        let mut rows = wp.exponent_rows();
        rows.sort();
        if best.as_ref().map(|b| rows < *b).unwrap_or(true) {
            best = Some(rows);
        }
    }
    best.unwrap()
}

fn permutations(idx: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == idx.len() {
        out.push(idx.clone());
        return;
    }
    for i in k..idx.len() {
        idx.swap(k, i);
        permutations(idx, k + 1, out);
        idx.swap(k, i);
    }
}

fn atom_kind(w: &QHPolynomial) -> String {
    match crate::atoms::classify_invertible(w) {
        Ok(d) => {
            let kinds: Vec<&str> = d
                .atoms
                .iter()
                .map(|a| match a {
                    crate::atoms::Atom::Fermat { .. } => "fermat",
                    crate::atoms::Atom::Chain { .. } => "chain",
                    crate::atoms::Atom::Loop { .. } => "loop",
                })
                .collect();
            if kinds.iter().all(|k| *k == "fermat") {
                "fermat".into()
            } else if kinds.len() == 1 && kinds[0] == "chain" {
                "chain".into()
            } else if kinds.len() == 1 && kinds[0] == "loop" {
                "loop".into()
            } else {
                "mixed".into()
            }
        }
        Err(_) => "unclassified".into(),
    }
}

/// Enumerate all invertible CY polynomials of three variables (exponents up
/// to `max_exp`), deduplicated up to variable permutation.
pub fn cy3_census(max_exp: u32) -> Vec<CensusEntry> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    let push = |w: QHPolynomial, out: &mut Vec<CensusEntry>,
                    seen: &mut std::collections::BTreeSet<Vec<Vec<u32>>>| {
        let Ok(ws) = crate::poly::weight_system(&w) else {
            return;
        };
        if ws.sum() != Q::from_integer(1.into()) {
            return;
        }
        if crate::atoms::classify_invertible(&w).is_err() {
            return;
        }
        let key = canonical_key(&w);
        if seen.insert(key) {
            let mut weights: Vec<Q> = ws.weights.clone();
            weights.sort();
            out.push(CensusEntry {
                weights: weights.iter().map(crate::rat::fmt_q).collect(),
                kind: atom_kind(&w),
                polynomial: w.to_text(),
            });
        }
    };
    let r = 2..=max_exp;
    // three Fermats
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                let w = parse_polynomial(&format!("x1^{a}+x2^{b}+x3^{c}")).unwrap();
                push(w, &mut out, &mut seen);
            }
        }
    }
    // chain2 + Fermat, loop2 + Fermat
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                let w = parse_polynomial(&format!("x1^{a}*x2+x2^{b}+x3^{c}")).unwrap();
                push(w, &mut out, &mut seen);
                let w = parse_polynomial(&format!("x1^{a}*x2+x2^{b}*x1+x3^{c}")).unwrap();
                push(w, &mut out, &mut seen);
            }
        }
    }
    // chain3, loop3
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                let w = parse_polynomial(&format!("x1^{a}*x2+x2^{b}*x3+x3^{c}")).unwrap();
                push(w, &mut out, &mut seen);
                let w = parse_polynomial(&format!("x1^{a}*x2+x2^{b}*x3+x3^{c}*x1")).unwrap();
                push(w, &mut out, &mut seen);
            }
        }
    }
    out.sort_by(|a, b| (&a.weights, &a.kind, &a.polynomial).cmp(&(&b.weights, &b.kind, &b.polynomial)));
    out
}

/// Compare the census against the built-in table up to variable permutation.
pub fn cy3_census_matches_table(census: &[CensusEntry]) -> bool {
    let table = [
        "fermat_333",
        "chain_333",
        "loop_333",
        "mixed_333_a",
        "mixed_333_b",
        "fermat_442",
        "chain_442",
        "mixed_442_a",
        "mixed_442_b",
        "mixed_442_c",
        "fermat_632",
        "mixed_632_a",
        "mixed_632_b",
    ];
    if census.len() != table.len() {
        return false;
    }
    let census_keys: std::collections::BTreeSet<Vec<Vec<u32>>> = census
        .iter()
        .map(|e| canonical_key(&parse_polynomial(&e.polynomial).unwrap()))
        .collect();
    table.iter().all(|name| {
        let w = lookup_polynomial(name).unwrap();
        census_keys.contains(&canonical_key(&w))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn census_reproduces_the_table() {
        let census = cy3_census(24);
        assert_eq!(census.len(), 13);
        assert!(cy3_census_matches_table(&census));
        // the loop entry sits under weights (1/3,1/3,1/3)
        assert!(census.iter().any(|e| e.kind == "loop"
            && e.weights == vec!["1/3", "1/3", "1/3"]));
        // no chain entry under (1/6,1/3,1/2)
        let w632: Vec<String> = vec!["1/6".into(), "1/3".into(), "1/2".into()];
        assert!(!census
            .iter()
            .any(|e| e.kind == "chain" && e.weights == w632));
        // weight groups are exactly the three systems
        let mut systems: Vec<Vec<String>> =
            census.iter().map(|e| e.weights.clone()).collect();
        systems.sort();
        systems.dedup();
        assert_eq!(systems.len(), 3);
    }

    #[test]
    fn catalog_has_at_least_the_required_pairs() {
        let pairs = catalog_pairs();
        assert!(pairs.len() >= 30);
        assert!(pairs.iter().any(|p| p.name == "pillowcase"));
        let pillow = lookup_pair("pillowcase").unwrap();
        assert_eq!(pillow.group.order(), 8);
    }

    #[test]
    fn group_specs_resolve() {
        let w = lookup_polynomial("cubic").unwrap();
        assert_eq!(resolve_group("J", &w).unwrap().order(), 3);
        assert_eq!(resolve_group("max", &w).unwrap().order(), 27);
        assert_eq!(resolve_group("SL", &w).unwrap().order(), 9);
        let g = resolve_group("[[1,3],[1,3],[1,3]]", &w).unwrap();
        assert_eq!(g.order(), 3);
        let g2 = resolve_group("[[[1,4],[1,4],[0,1]],[[0,1],[0,1],[1,2]]]",
            &lookup_polynomial("fermat_442").unwrap()).unwrap();
        assert_eq!(g2.order(), 8);
        assert!(resolve_group("bogus", &w).is_err());
    }

    #[test]
    fn sl_subgroup_without_j_is_not_admissible() {
        // an SL subgroup of G_W for x1^4+x2^4+x3^2 that misses J
        let w = lookup_polynomial("fermat_442").unwrap();
        let g = resolve_group("[[1,2],[1,2],[0,1]]", &w).unwrap();
        assert!(g
            .elements
            .iter()
            .all(crate::symmetry::is_special_linear));
        assert!(!crate::symmetry::is_admissible(&g, &w).unwrap());
        // while SL cap G_W here does contain J (age 1) and is admissible
        let sl = resolve_group("SL", &w).unwrap();
        assert!(crate::symmetry::is_admissible(&sl, &w).unwrap());
    }
}
