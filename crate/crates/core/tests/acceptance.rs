//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! with its runtime (visible under `cargo test --test acceptance --
//! --nocapture`). Every tolerance is exact rational equality; the stated
//! runtime budgets are asserted.

use lgvw::catalog::{catalog_pairs, lookup_pair, lookup_polynomial, resolve_group};
use lgvw::loopspace;
use lgvw::mirror;
use lgvw::poly::Monomial;
use lgvw::rat::{q, qi, Q};
use lgvw::state_space::{
    build_state_space, build_state_space_unpaired, check_supertrace_formula,
    euler_characteristic, poincare_series_pair, supertrace_theta,
};
use lgvw::symmetry::PhaseVector;
use lgvw::virasoro::{check_virasoro_relations, OperatorSpace};
use num_traits::Zero;
use std::time::Instant;

fn report(criterion: &str, pass: bool, start: Instant, budget_s: f64) {
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "criterion {criterion}: {} ({elapsed:.2} s, budget {budget_s} s)",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed");
    assert!(
        elapsed < budget_s,
        "criterion {criterion} exceeded its {budget_s} s budget ({elapsed:.2} s)"
    );
}

#[test]
fn criterion_01_table_one_reproduction() {
    let start = Instant::now();
    let p = lookup_pair("fermat_333/J").unwrap();
    let sp = build_state_space(&p.poly, &p.group).unwrap();
    let j = sp.j.clone();
    let j2 = j.add(&j);
    let id = PhaseVector::identity(3);
    // rows: (element, mu+, mu-, parity, deg_c)
    let rows: [(&PhaseVector, Monomial, Q, Q, i8, Q); 4] = [
        (&j, Monomial(vec![]), q(-1, 2), q(-1, 2), 1, qi(0)),
        (&j2, Monomial(vec![]), q(1, 2), q(1, 2), 1, qi(1)),
        (&id, Monomial(vec![0, 0, 0]), q(-1, 2), q(1, 2), -1, q(1, 2)),
        (&id, Monomial(vec![1, 1, 1]), q(1, 2), q(-1, 2), -1, q(1, 2)),
    ];
    let mut pass = sp.rank() == 4;
    for (gamma, mono, mp, mm, parity, degc) in rows {
        let Some(i) = sp.find(gamma, &mono) else {
            pass = false;
            break;
        };
        let e = &sp.basis[i];
        pass &= e.mu_plus == mp && e.mu_minus == mm && e.parity == parity && e.deg_c == degc;
    }
    report("1 (Table 1 reproduction)", pass, start, 1.0);
}

#[test]
fn criterion_02_supertrace_formula_catalog() {
    let start = Instant::now();
    let pairs = catalog_pairs();
    assert!(pairs.len() >= 30, "catalog must cover at least 30 pairs");
    let mut pass = true;
    for p in &pairs {
        let sp = build_state_space(&p.poly, &p.group).unwrap();
        let r = check_supertrace_formula(&sp);
        if !r.equal {
            eprintln!("supertrace formula fails on {}", p.name);
            pass = false;
        }
    }
    report("2 (supertrace formula)", pass, start, 30.0);
}

#[test]
fn criterion_03_poincare_cross_checks() {
    let start = Instant::now();
    let mut pass = true;
    for p in &catalog_pairs() {
        let sp = build_state_space(&p.poly, &p.group).unwrap();
        let cc = poincare_series_pair(&sp).unwrap();
        let (chi_limit, str2_limit) = cc.census.limits();
        let chi = euler_characteristic(&sp);
        let str2 = supertrace_theta(&sp) + qi(chi) / qi(4);
        let ok = cc.product_formula_ok
            && cc.census == cc.averaged
            && chi_limit == qi(chi)
            && str2_limit == str2;
        if !ok {
            eprintln!("Poincare cross-check fails on {}", p.name);
            pass = false;
        }
    }
    report("3 (Poincare series cross-check)", pass, start, 30.0);
}

#[test]
fn criterion_04_virasoro_relations() {
    let start = Instant::now();
    let mut pass = true;
    let mut super_space_seen = false;
    let mut checked = 0;
    for p in &catalog_pairs() {
        let sp = build_state_space(&p.poly, &p.group).unwrap();
        if sp.rank() > 10 {
            continue;
        }
        super_space_seen |= sp.basis.iter().any(|e| e.parity < 0);
        let space = OperatorSpace::from_state_space(&sp);
        for c in check_virasoro_relations(&space, 3, 8).unwrap() {
            if !c.pass {
                eprintln!("[L_{}, L_{}] fails on {}", c.m, c.n, p.name);
                pass = false;
            }
        }
        checked += 1;
    }
    pass &= super_space_seen && checked >= 20;
    report("4 (Virasoro relations)", pass, start, 120.0);
}

#[test]
fn criterion_05_quantization_identity() {
    let start = Instant::now();
    let mut pass = true;
    for p in &catalog_pairs() {
        let sp = build_state_space(&p.poly, &p.group).unwrap();
        if sp.rank() > 6 {
            continue;
        }
        let space = OperatorSpace::from_state_space(&sp);
        for k in -1..=3 {
            let c = loopspace::check_quantization_identity(&space, k, 8).unwrap();
            if !c.pass {
                eprintln!("quantization identity fails on {} at k = {k}", p.name);
                pass = false;
            }
        }
        // bracket defect [hat L_1, hat L_-1] - 2 hat L_0 = -(1/2) Str(theta^2 - 1/4)
        let l1 = loopspace::script_l(&space, 1).unwrap();
        let lm1 = loopspace::script_l(&space, -1).unwrap();
        let (is_scalar, scalar, cocycle) =
            loopspace::bracket_defect(&space, &l1, &lm1, 8).unwrap();
        let expected = -q(1, 2) * space.supertrace_theta();
        if !(is_scalar && scalar == cocycle && cocycle == expected) {
            eprintln!("bracket defect fails on {}", p.name);
            pass = false;
        }
    }
    report("5 (quantization identity)", pass, start, 30.0);
}

#[test]
fn criterion_06_quantum_euler_determinant() {
    let start = Instant::now();
    let mut pass = true;
    for d in 4..=8 {
        let r = lgvw::fermat::det_euler(d).unwrap();
        if !r.equal {
            eprintln!("Euler determinant mismatch for d = {d}: {}", r.computed);
            pass = false;
        }
    }
    report("6 (quantum Euler determinant)", pass, start, 10.0);
}

#[test]
fn criterion_07_nonvanishing_census() {
    let start = Instant::now();
    let mut pass = true;
    for d in 3..=8 {
        let census = lgvw::fermat::census_nonvanishing(d);
        let expect = lgvw::fermat::census_expected(d);
        if census != expect {
            eprintln!("correlator census mismatch for d = {d}");
            pass = false;
        }
    }
    report("7 (nonvanishing census)", pass, start, 5.0);
}

#[test]
fn criterion_08_mirror_verification() {
    let start = Instant::now();
    let mut pass = true;
    for p in &catalog_pairs() {
        let sp = build_state_space(&p.poly, &p.group).unwrap();
        let corr = match mirror::krawitz_map(&sp) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("Krawitz map fails on {}: {e}", p.name);
                pass = false;
                continue;
            }
        };
        let r = mirror::verify_mirror(&sp, &corr);
        if !r.pass {
            eprintln!("mirror verification fails on {}", p.name);
            pass = false;
        }
    }
    // entrywise Fermat-cubic A <-> B table
    let p = lookup_pair("fermat_333/J").unwrap();
    let sp = build_state_space(&p.poly, &p.group).unwrap();
    let corr = mirror::krawitz_map(&sp).unwrap();
    let j = sp.j.clone();
    let j2 = j.add(&j);
    let id = PhaseVector::identity(3);
    let table = [
        (j.clone(), Monomial(vec![]), id.clone(), Monomial(vec![0, 0, 0]), q(-1, 2), q(-1, 2), 1i8),
        (j2.clone(), Monomial(vec![]), id.clone(), Monomial(vec![1, 1, 1]), q(1, 2), q(1, 2), 1),
        (id.clone(), Monomial(vec![0, 0, 0]), j.clone(), Monomial(vec![]), q(-1, 2), q(1, 2), -1),
        (id.clone(), Monomial(vec![1, 1, 1]), j2.clone(), Monomial(vec![]), q(1, 2), q(-1, 2), -1),
    ];
    for (ga, ma, gb, mb, mp, mm, par) in table {
        let ai = sp.find(&ga, &ma).unwrap();
        let b = &corr.b_basis[corr.forward[ai]];
        pass &= b.gamma == gb
            && b.monomial == mb
            && b.mu_plus_b == mp
            && b.mu_minus_b == mm
            && b.parity_b == par;
    }
    report("8 (Krawitz mirror verification)", pass, start, 30.0);
}

#[test]
fn criterion_09_cy3_census() {
    let start = Instant::now();
    let census = lgvw::catalog::cy3_census(24);
    let mut pass = census.len() == 13 && lgvw::catalog::cy3_census_matches_table(&census);
    // weight-system grouping and the empty E8 chain cell
    let mut systems: Vec<Vec<String>> = census.iter().map(|e| e.weights.clone()).collect();
    systems.sort();
    systems.dedup();
    pass &= systems.len() == 3;
    let w632: Vec<String> = vec!["1/6".into(), "1/3".into(), "1/2".into()];
    pass &= !census.iter().any(|e| e.kind == "chain" && e.weights == w632);
    pass &= census.iter().any(|e| e.kind == "chain" && e.weights == vec!["1/3", "1/3", "1/3"]);
    pass &= census.iter().any(|e| e.kind == "loop" && e.weights == vec!["1/3", "1/3", "1/3"]);
    report("9 (CY-3 census)", pass, start, 5.0);
}

#[test]
fn criterion_10_elliptic_identification() {
    let start = Instant::now();
    let r = lgvw::elliptic::elliptic_checks(3, 8).unwrap();
    report("10 (elliptic identification)", r.pass, start, 10.0);
}

#[test]
fn criterion_11_degree_criterion_quintic() {
    let start = Instant::now();
    let w = lookup_polynomial("quintic").unwrap();
    let g = resolve_group("J", &w).unwrap();
    let sp = build_state_space_unpaired(&w, &g).unwrap();
    let j = sp.j.clone();
    let mut pass = sp
        .basis
        .iter()
        .all(|e| e.gamma == j || e.deg_c >= qi(1));
    // exceptional-sector scan: age 1 with N = 0 is exactly J; no age-1
    // sector fixes exactly one variable
    let rows = lgvw::atoms::exponent_matrix(&w).unwrap();
    for gamma in &g.elements {
        if gamma.age() != qi(1) {
            continue;
        }
        match gamma.fixed_indices().len() {
            0 => {
                let all_one = rows.iter().all(|row| {
                    row.iter()
                        .zip(&gamma.phases)
                        .fold(Q::zero(), |acc, (&e, t)| acc + t * qi(e as i64))
                        == qi(1)
                });
                pass &= all_one && gamma == &j;
            }
            1 => pass = false,
            _ => {}
        }
    }
    report("11 (degree criterion)", pass, start, 20.0);
}
