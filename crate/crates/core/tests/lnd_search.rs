use std::time::Instant;

use trinomial_core::lattice::{weight_assignment, Degree};
use trinomial_core::lnd::{
    check_locally_nilpotent, check_preserves_ideal, classify_type, homogeneity_degree, search_homogeneous_lnds,
    Derivation, LndType, SearchBounds,
};
use trinomial_core::poly::{parse_polynomial, rational, Scope, SparsePolynomial, Var};
use trinomial_core::variety::TrinomialData;

fn p(s: &str) -> SparsePolynomial {
    parse_polynomial(s, Scope::Free).unwrap()
}

fn columns_type2() -> [Vec<trinomial_core::poly::Rational>; 2] {
    [vec![rational(1, 1), rational(0, 1), rational(1, 1)], vec![rational(0, 1), rational(1, 1), rational(1, 1)]]
}

fn run(data: &TrinomialData, known: &Derivation, max_degree: u32) -> Vec<Derivation> {
    let alg = data.relations().unwrap();
    let w = weight_assignment(data).unwrap();
    assert!(check_locally_nilpotent(&alg, known, None).unwrap().is_lnd());
    let g0 = homogeneity_degree(&alg, known, &w).unwrap();
    let start = Instant::now();
    let found = search_homogeneous_lnds(&alg, &w, &g0, &SearchBounds::new(max_degree)).unwrap();
    eprintln!("{} candidates in {:?}", found.len(), start.elapsed());
    assert!(found.contains(known), "{known} missing from {found:?}");
    for d in &found {
        assert!(check_preserves_ideal(&alg, d).unwrap().preserved);
        assert!(check_locally_nilpotent(&alg, d, None).unwrap().is_lnd());
        assert_eq!(homogeneity_degree(&alg, d, &w).unwrap(), g0);
    }
    assert!(found.iter().any(|d| classify_type(&alg, d, None).unwrap().kind == LndType::Horizontal));
    found
}

#[test]
fn type1_block_exponents_one_two() {
    let data = TrinomialData::type1(vec![vec![1, 2], vec![3]], vec![rational(0, 1), rational(1, 1)], 0);
    let known = Derivation::new([(Var::t(1, 1), p("3*T[2][1]^2")), (Var::t(2, 1), p("T[1][2]^2"))].into());
    run(&data, &known, 2);
}

#[test]
fn type2_mixed_blocks() {
    let data = TrinomialData::type2(vec![vec![1, 1], vec![1, 2], vec![3]], columns_type2(), 0);
    let known = Derivation::new([(Var::t(2, 1), p("T[0][2]")), (Var::t(0, 1), p("3*T[2][1]^2"))].into());
    run(&data, &known, 2);
}

#[test]
fn type2_quadric_cone() {
    let data = TrinomialData::type2(vec![vec![2], vec![2], vec![2]], columns_type2(), 0);
    let known = Derivation::new(
        [(Var::t(0, 1), p("T[2][1] - T[1][1]")), (Var::t(1, 1), p("T[0][1]")), (Var::t(2, 1), p("T[0][1]"))].into(),
    );
    run(&data, &known, 1);
}

#[test]
fn free_factor_translation() {
    let data = TrinomialData::type1(vec![vec![1, 1], vec![2]], vec![rational(0, 1), rational(1, 1)], 1);
    let alg = data.relations().unwrap();
    let w = weight_assignment(&data).unwrap();
    let vs = w.weight(Var::s(1)).unwrap();
    let g0 = Degree { free: vs.free.iter().map(|x| -x).collect(), torsion: vec![] };
    let found = search_homogeneous_lnds(&alg, &w, &g0, &SearchBounds::new(2)).unwrap();
    assert!(found.contains(&Derivation::partial(Var::s(1))));
}

#[test]
fn rigid_cubic_has_none() {
    let data = TrinomialData::type2(vec![vec![3], vec![3], vec![3]], columns_type2(), 0);
    let alg = data.relations().unwrap();
    let w = weight_assignment(&data).unwrap();
    let start = Instant::now();
    for g in -3..=3 {
        let g0 = Degree { free: vec![g], torsion: vec![] };
        let found = search_homogeneous_lnds(&alg, &w, &g0, &SearchBounds::new(4)).unwrap();
        assert!(found.is_empty(), "degree {g}: {found:?}");
    }
    eprintln!("rigid sweep in {:?}", start.elapsed());
}
