use lgvw::poly::parse_polynomial;
use lgvw::state_space::build_state_space;
use lgvw::symmetry::{exponential_grading_element, subgroup_generated};
use lgvw::virasoro::*;
use lgvw::rat::qi;

fn main() {
    let w = parse_polynomial("x1^3").unwrap();
    let ws = lgvw::poly::weight_system(&w).unwrap();
    let j = exponential_grading_element(&ws);
    let g = subgroup_generated(&[j], 1);
    let sp = build_state_space(&w, &g).unwrap();
    let space = OperatorSpace::from_state_space(&sp);
    let m_max = 6;
    let lm1 = virasoro_operator(&space, -1, m_max).unwrap();
    let l2 = virasoro_operator(&space, 2, m_max).unwrap();
    let l1 = virasoro_operator(&space, 1, m_max).unwrap();
    let guard = m_max - 3;
    let lhs = lm1.commutator(&l2).truncate_levels(guard);
    let rhs = l1.scale_q(&qi(-3)).truncate_levels(guard);
    let diff = lhs.sub(&rhs);
    println!("difference:\n{}", diff.dump());
}
