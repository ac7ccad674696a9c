//! Command implementations behind the `lgvw` binary.

use crate::catalog::{self, CatalogPair};
use crate::error::{Error, Result};
use crate::loopspace;
use crate::mirror;
use crate::poly::{parse_polynomial, QHPolynomial};
use crate::rat::{fmt_q, qi, Q};
use crate::report::{CheckResult, Report};
use crate::state_space::{self, build_state_space};
use crate::symmetry::{self, DiagonalGroup};
use crate::virasoro::{self, OperatorSpace};
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::json;

/// Resolved input pair from `--pair` / `--poly` / `--group`.
pub struct PairInput {
    pub name: String,
    pub w: QHPolynomial,
    pub group: DiagonalGroup,
}

pub fn resolve_input(
    pair: Option<&str>,
    poly: Option<&str>,
    group: Option<&str>,
) -> Result<PairInput> {
    match (pair, poly) {
        (Some(name), None) => {
            // catalog pair name, or a named polynomial with --group
            if let Ok(p) = catalog::lookup_pair(name) {
                if group.is_none() {
                    return Ok(PairInput {
                        name: name.into(),
                        w: p.poly,
                        group: p.group,
                    });
                }
            }
            let w = catalog::lookup_polynomial(name)?;
            let spec = group.unwrap_or("J");
            let g = catalog::resolve_group(spec, &w)?;
            Ok(PairInput {
                name: format!("{name}/{spec}"),
                w,
                group: g,
            })
        }
        (None, Some(text)) => {
            let w = parse_polynomial(text)?;
            let spec = group.unwrap_or("J");
            let g = catalog::resolve_group(spec, &w)?;
            Ok(PairInput {
                name: format!("{text}/{spec}"),
                w,
                group: g,
            })
        }
        (None, None) => Err(Error::Config("provide --pair NAME or --poly STR".into())),
        _ => Err(Error::Config("--pair and --poly are exclusive".into())),
    }
}

pub fn cmd_analyze(input: &PairInput) -> Result<Report> {
    let mut r = Report::new("analyze", &input.name);
    let ws = crate::poly::weight_system(&input.w)?;
    let weights: Vec<String> = ws.weights.iter().map(fmt_q).collect();
    r.push(CheckResult::pass(
        "weights",
        format!("({})", weights.join(", ")),
    ));
    let c = ws.central_charge();
    r.push(CheckResult::pass("central_charge", fmt_q(&c)));
    let cy = ws.sum() == Q::from_integer(1.into());
    r.push(CheckResult::pass(
        "calabi_yau",
        if cy { "yes" } else { "no" },
    ));
    match crate::atoms::classify_invertible(&input.w) {
        Ok(d) => {
            let atoms: Vec<String> = d
                .atoms
                .iter()
                .map(|a| match a {
                    crate::atoms::Atom::Fermat { exponent, .. } => format!("Fermat({exponent})"),
                    crate::atoms::Atom::Chain { exponents, .. } => format!("Chain{exponents:?}"),
                    crate::atoms::Atom::Loop { exponents, .. } => format!("Loop{exponents:?}"),
                })
                .collect();
            r.push(CheckResult::pass("atoms", atoms.join(" + ")));
        }
        Err(e) => r.push(CheckResult::skipped("atoms", e.to_string())),
    }
    match symmetry::maximal_group(&input.w) {
        Ok(g) => r.push(CheckResult::pass("maximal_group_order", g.order().to_string())),
        Err(e) => r.push(CheckResult::skipped("maximal_group_order", e.to_string())),
    }
    match crate::poly::milnor_number(&ws) {
        Ok(mu) => r.push(CheckResult::pass("milnor_number", mu.to_string())),
        Err(e) => r.push(CheckResult::fail("milnor_number", e.to_string())),
    }
    match symmetry::is_admissible(&input.group, &input.w) {
        Ok(ok) => r.push(CheckResult::of(
            "admissible",
            ok,
            format!("group order {}", input.group.order()),
        )),
        Err(e) => r.push(CheckResult::fail("admissible", e.to_string())),
    }
    Ok(r)
}

pub fn cmd_state_space(input: &PairInput) -> Result<Report> {
    let mut r = Report::new("state-space", &input.name);
    let sp = build_state_space(&input.w, &input.group)?;
    let rows: Vec<serde_json::Value> = sp
        .basis
        .iter()
        .map(|e| {
            json!({
                "sector": e.gamma.label(),
                "element": e.label(&sp.j),
                "wt": fmt_q(&e.wt),
                "mu_plus": fmt_q(&e.mu_plus),
                "mu_minus": fmt_q(&e.mu_minus),
                "parity": e.parity,
                "deg_c": fmt_q(&e.deg_c),
            })
        })
        .collect();
    let eta: Vec<Vec<String>> = sp
        .eta
        .iter()
        .map(|row| row.iter().map(fmt_q).collect())
        .collect();
    let chi = state_space::euler_characteristic(&sp);
    let st = state_space::supertrace_theta(&sp);
    let formula = state_space::check_supertrace_formula(&sp);
    r.push(CheckResult::pass("rank", sp.rank().to_string()));
    r.push(CheckResult::pass("chi", chi.to_string()));
    r.push(CheckResult::pass("supertrace_theta", fmt_q(&st)));
    r.push(CheckResult::of(
        "supertrace_formula",
        formula.equal,
        format!("Str = {} vs (c-3)/12 chi = {}", formula.lhs, formula.rhs),
    ));
    let eta_det = state_space::eta_determinant(&sp);
    r.push(CheckResult::of(
        "eta_nondegenerate",
        !eta_det.is_zero(),
        format!("det eta = {}", fmt_q(&eta_det)),
    ));
    let cc = state_space::poincare_series_pair(&sp)?;
    r.push(CheckResult::of(
        "poincare_product_formula",
        cc.product_formula_ok,
        "sector product formula vs standard-monomial census",
    ));
    r.push(CheckResult::of(
        "poincare_group_averaged",
        cc.census == cc.averaged,
        "root-of-unity average vs direct census",
    ));
    let (chi_p, str2) = cc.census.limits();
    let str2_direct = st.clone() + qi(chi) / qi(4);
    r.push(CheckResult::of(
        "poincare_limits",
        chi_p == qi(chi) && str2 == str2_direct,
        format!("chi = {}, Str(theta^2) = {}", fmt_q(&chi_p), fmt_q(&str2)),
    ));
    r.payload.tables = json!({"basis": rows, "eta": eta});
    Ok(r)
}

pub fn cmd_virasoro(input: &PairInput, kmax: i64, m_max: i64) -> Result<Report> {
    let mut r = Report::new("virasoro", &input.name);
    let sp = build_state_space(&input.w, &input.group)?;
    let space = OperatorSpace::from_state_space(&sp);
    for c in virasoro::check_virasoro_relations(&space, kmax, m_max)? {
        r.push(CheckResult::of(
            format!("[L_{}, L_{}] = ({}) L_{}", c.m, c.n, c.m - c.n, c.m + c.n),
            c.pass,
            format!("guarded at level {}", c.guard_level),
        ));
    }
    Ok(r)
}

pub fn cmd_quantize(input: &PairInput, kmax: i64, m_max: i64) -> Result<Report> {
    let mut r = Report::new("quantize", &input.name);
    let sp = build_state_space(&input.w, &input.group)?;
    let space = OperatorSpace::from_state_space(&sp);
    for k in -1..=kmax {
        let c = loopspace::check_quantization_identity(&space, k, m_max)?;
        let name = format!("dilaton-shifted quantization of script L_{k}");
        if k == 0 {
            r.push(CheckResult::of(
                name,
                c.pass,
                format!(
                    "constant difference {} (signed candidate {}, unsigned {})",
                    c.constant_difference, c.signed_candidate, c.unsigned_candidate
                ),
            ));
        } else {
            r.push(CheckResult::of(
                name,
                c.pass,
                if c.terms_match { "exact" } else { "term mismatch" },
            ));
        }
    }
    // bracket defect vs cocycle for the (1, -1) pair
    let l1 = loopspace::script_l(&space, 1)?;
    let lm1 = loopspace::script_l(&space, -1)?;
    let (is_scalar, scalar, coc) = loopspace::bracket_defect(&space, &l1, &lm1, m_max + 2)?;
    let expected = -crate::rat::q(1, 2) * space.supertrace_theta();
    r.push(CheckResult::of(
        "bracket defect [hat L_1, hat L_-1] - 2 hat L_0",
        is_scalar && scalar == coc && coc == expected,
        format!(
            "defect = {}, cocycle = {}, -(1/2) Str = {}",
            fmt_q(&scalar),
            fmt_q(&coc),
            fmt_q(&expected)
        ),
    ));
    Ok(r)
}

pub fn cmd_mirror(input: &PairInput) -> Result<Report> {
    let mut r = Report::new("mirror", &input.name);
    let sp = build_state_space(&input.w, &input.group)?;
    let corr = mirror::krawitz_map(&sp)?;
    let report = mirror::verify_mirror(&sp, &corr);
    r.push(CheckResult::of(
        "bijective",
        report.bijective,
        format!("ranks {} vs {}", report.rank_a, report.rank_b),
    ));
    r.push(CheckResult::of(
        "bigrading_preserved",
        report.rows.iter().all(|row| row.gradings_match),
        "mu+ and mu- transported entrywise",
    ));
    r.push(CheckResult::of(
        "parity_preserved",
        report.rows.iter().all(|row| row.parity_match),
        "",
    ));
    r.push(CheckResult::of(
        "central_charge_equal",
        report.c_hat_equal,
        "c(W^T) = c(W)",
    ));
    r.push(CheckResult::of("chi_preserved", report.chi_preserved, ""));
    r.push(CheckResult::of(
        "str_theta2_preserved",
        report.str_theta2_preserved,
        "",
    ));
    r.payload.tables = serde_json::to_value(&report.rows).unwrap();
    Ok(r)
}

pub fn cmd_semisimple(d: u32) -> Result<Report> {
    let mut r = Report::new("semisimple", &format!("fermat2_{d}/J"));
    match crate::fermat::semisimple_verdict(d)? {
        crate::fermat::SemisimpleVerdict::ClassicalUnipotentSplit => {
            r.push(CheckResult::pass(
                "semisimple",
                "d = 2: classical algebra splits into idempotents",
            ));
        }
        crate::fermat::SemisimpleVerdict::KnownSemisimpleRankFour => {
            r.push(CheckResult::pass(
                "semisimple",
                "d = 3: matches a known semisimple rank-4 theory",
            ));
        }
        crate::fermat::SemisimpleVerdict::Determinant(det) => {
            r.push(CheckResult::of(
                "euler_determinant_closed_form",
                det.equal,
                format!("det = {}", det.computed),
            ));
            r.push(CheckResult::of(
                "nonzero_for_nonzero_t",
                !det.computed.is_empty() && det.equal,
                det.closed_form.clone(),
            ));
            r.payload.tables = serde_json::to_value(&det).unwrap();
        }
    }
    // the nonvanishing census backs the product table
    if d >= 3 {
        let census = crate::fermat::census_nonvanishing(d);
        let expect = crate::fermat::census_expected(d);
        r.push(CheckResult::of(
            "nonvanishing_census",
            census == expect,
            format!("{} correlator families", census.len()),
        ));
    }
    Ok(r)
}

pub fn cmd_cy_census() -> Result<Report> {
    let mut r = Report::new("cy-census", "three-variable invertible CY");
    let census = catalog::cy3_census(24);
    r.push(CheckResult::of(
        "matches_builtin_table",
        catalog::cy3_census_matches_table(&census),
        format!("{} entries", census.len()),
    ));
    let w632: Vec<String> = vec!["1/6".into(), "1/3".into(), "1/2".into()];
    r.push(CheckResult::of(
        "no_chain_under_632",
        !census.iter().any(|e| e.kind == "chain" && e.weights == w632),
        "",
    ));
    let mut systems: Vec<Vec<String>> = census.iter().map(|e| e.weights.clone()).collect();
    systems.sort();
    systems.dedup();
    r.push(CheckResult::of(
        "three_weight_systems",
        systems.len() == 3,
        systems
            .iter()
            .map(|s| format!("({})", s.join(",")))
            .collect::<Vec<_>>()
            .join(" "),
    ));
    r.payload.tables = serde_json::to_value(&census).unwrap();
    Ok(r)
}

pub fn cmd_degree_criterion(input: &PairInput) -> Result<Report> {
    let mut r = Report::new("degree-criterion", &input.name);
    let ws = crate::poly::weight_system(&input.w)?;
    let c_hat = ws.central_charge();
    let cy = ws.sum() == Q::from_integer(1.into());
    let sl = input
        .group
        .elements
        .iter()
        .all(symmetry::is_special_linear);
    if !cy || c_hat < qi(3) || !sl {
        r.push(CheckResult::skipped(
            "degree_criterion",
            format!(
                "needs CY with central charge >= 3 and G in SL (c = {}, SL = {sl})",
                fmt_q(&c_hat)
            ),
        ));
        return Ok(r);
    }
    let sp = state_space::build_state_space_unpaired(&input.w, &input.group)?;
    let j = sp.j.clone();
    let bad: Vec<String> = sp
        .basis
        .iter()
        .filter(|e| e.gamma != j && e.deg_c < qi(1))
        .map(|e| e.label(&j))
        .collect();
    r.push(CheckResult::of(
        "non_J_elements_have_deg_at_least_one",
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} basis elements scanned", sp.rank())
        } else {
            format!("violations: {}", bad.join(", "))
        },
    ));
    // exceptional-sector scan: age 1 with N = 0 forces E theta = (1..1),
    // hence gamma = J; and age 1 with N = 1 never occurs
    let rows = crate::atoms::exponent_matrix(&input.w)?;
    let mut scan_ok = true;
    let mut n1_found = false;
    for gamma in &input.group.elements {
        if gamma.age() != qi(1) {
            continue;
        }
        let n_fixed = gamma.fixed_indices().len();
        if n_fixed == 0 {
            let all_one = rows.iter().all(|row| {
                row.iter()
                    .zip(&gamma.phases)
                    .fold(Q::zero(), |acc, (&e, t)| acc + t * qi(e as i64))
                    == qi(1)
            });
            if !all_one || gamma != &j {
                scan_ok = false;
            }
        } else if n_fixed == 1 {
            n1_found = true;
        }
    }
    r.push(CheckResult::of(
        "age_one_narrow_sector_is_J",
        scan_ok,
        "E_W theta = (1,...,1) pins gamma = J",
    ));
    r.push(CheckResult::of(
        "no_age_one_sector_with_one_fixed_variable",
        !n1_found,
        "",
    ));
    Ok(r)
}

pub fn cmd_elliptic(kmax: i64, m_max: i64) -> Result<Report> {
    let mut r = Report::new("elliptic", "fermat CY 3-variable family");
    let rep = crate::elliptic::elliptic_checks(kmax, m_max)?;
    for (d, k, pass) in &rep.identification {
        r.push(CheckResult::of(
            format!("identification d={d} k={k}"),
            *pass,
            "L_k matches the curve operator under the basis map",
        ));
    }
    r.push(CheckResult::of(
        "identification_negative_control",
        rep.identification_negative_control,
        "swapping s^0/s^1 breaks the match",
    ));
    r.push(CheckResult::of(
        "s_conjugation_invariance",
        rep.s_conjugation,
        "[log S(q), d_z + z^-1 theta] = 0",
    ));
    r.push(CheckResult::of(
        "quantized_log_s_display",
        rep.quantized_log_s_matches_display,
        "matches the displayed Hamiltonian (up to the global quantization sign)",
    ));
    for (k, a, b) in &rep.extras_commute {
        r.push(CheckResult::of(
            format!("[log S^, D_{k}] = [log S^, Dbar_{k}] = 0"),
            *a && *b,
            "",
        ));
    }
    r.push(CheckResult::of(
        "extras_negative_control",
        rep.extras_negative_control,
        "redirecting the derivative family breaks the commutator",
    ));
    Ok(r)
}

/// The standard battery over the whole catalog (respects the rayon pool).
pub fn cmd_all(kmax: i64, m_max: i64) -> Result<Report> {
    let mut r = Report::new("all", "catalog battery");
    let pairs = catalog::catalog_pairs();

    // supertrace + Poincare routes for every pair
    let supertrace: Vec<(String, bool)> = pairs
        .par_iter()
        .map(|p| {
            let sp = build_state_space(&p.poly, &p.group)?;
            let formula = state_space::check_supertrace_formula(&sp);
            let cc = state_space::poincare_series_pair(&sp)?;
            let (chi_p, str2) = cc.census.limits();
            let chi = state_space::euler_characteristic(&sp);
            let ok = formula.equal
                && cc.product_formula_ok
                && cc.census == cc.averaged
                && chi_p == qi(chi)
                && str2
                    == state_space::supertrace_theta(&sp) + qi(chi) / qi(4);
            Ok((p.name.clone(), ok))
        })
        .collect::<Result<Vec<_>>>()?;
    for (name, ok) in supertrace {
        r.push(CheckResult::of(
            format!("supertrace+poincare {name}"),
            ok,
            "",
        ));
    }

    // Virasoro relations for pairs of rank <= 10
    let small: Vec<&CatalogPair> = pairs.iter().collect();
    let virasoro_results: Vec<(String, Option<bool>)> = small
        .par_iter()
        .map(|p| {
            let sp = build_state_space(&p.poly, &p.group)?;
            if sp.rank() > 10 {
                return Ok((p.name.clone(), None));
            }
            let space = OperatorSpace::from_state_space(&sp);
            let checks = virasoro::check_virasoro_relations(&space, kmax, m_max)?;
            Ok((p.name.clone(), Some(checks.iter().all(|c| c.pass))))
        })
        .collect::<Result<Vec<_>>>()?;
    for (name, ok) in virasoro_results {
        match ok {
            Some(ok) => r.push(CheckResult::of(format!("virasoro {name}"), ok, "")),
            None => r.push(CheckResult::skipped(
                format!("virasoro {name}"),
                "rank above 10",
            )),
        }
    }

    // quantization identities for pairs of rank <= 6
    let quant: Vec<(String, Option<bool>)> = small
        .par_iter()
        .map(|p| {
            let sp = build_state_space(&p.poly, &p.group)?;
            if sp.rank() > 6 {
                return Ok((p.name.clone(), None));
            }
            let space = OperatorSpace::from_state_space(&sp);
            let mut ok = true;
            for k in -1..=kmax {
                ok &= loopspace::check_quantization_identity(&space, k, m_max)?.pass;
            }
            Ok((p.name.clone(), Some(ok)))
        })
        .collect::<Result<Vec<_>>>()?;
    for (name, ok) in quant {
        match ok {
            Some(ok) => r.push(CheckResult::of(format!("quantize {name}"), ok, "")),
            None => r.push(CheckResult::skipped(
                format!("quantize {name}"),
                "rank above 6",
            )),
        }
    }

    // mirrors for every invertible pair
    let mirrors: Vec<(String, bool)> = small
        .par_iter()
        .map(|p| {
            let sp = build_state_space(&p.poly, &p.group)?;
            let corr = mirror::krawitz_map(&sp)?;
            Ok((p.name.clone(), mirror::verify_mirror(&sp, &corr).pass))
        })
        .collect::<Result<Vec<_>>>()?;
    for (name, ok) in mirrors {
        r.push(CheckResult::of(format!("mirror {name}"), ok, ""));
    }

    // the global checks
    let census = cmd_cy_census()?;
    r.push(CheckResult::of(
        "cy_census",
        !census.any_failed(),
        "three-variable table reproduced",
    ));
    let elliptic = cmd_elliptic(kmax, m_max)?;
    r.push(CheckResult::of("elliptic", !elliptic.any_failed(), ""));
    for d in 4..=8 {
        let det = crate::fermat::det_euler(d)?;
        r.push(CheckResult::of(
            format!("semisimple d={d}"),
            det.equal,
            det.computed,
        ));
    }
    let quintic = resolve_input(Some("quintic"), None, Some("J"))?;
    let dc = cmd_degree_criterion(&quintic)?;
    r.push(CheckResult::of(
        "degree_criterion quintic/J",
        !dc.any_failed() && !dc.payload.checks.iter().any(|c| c.verdict == "skipped"),
        "",
    ));
    Ok(r)
}
