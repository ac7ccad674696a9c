use lgvw::catalog::lookup_pair;
use lgvw::state_space::build_state_space;
use lgvw::virasoro::{virasoro_operator, OperatorSpace};

fn main() {
    let p = lookup_pair("x3/J").unwrap();
    let sp = build_state_space(&p.poly, &p.group).unwrap();
    let space = OperatorSpace::from_state_space(&sp);
    let mut out = String::new();
    for k in [-1i64, 0, 1] {
        let l = virasoro_operator(&space, k, 4).unwrap();
        out.push_str(&format!("# L_{k} on x3/J at truncation 4\n"));
        out.push_str(&l.dump());
        out.push_str("\n\n");
    }
    std::fs::write("crates/core/tests/golden/x3_virasoro_dump.txt", out).unwrap();
    println!("written");
}
