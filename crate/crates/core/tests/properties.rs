use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use trinomial_core::lattice::{grading_group, smith_normal_form, IntMatrix};
use trinomial_core::lnd::{exponential, Derivation};
use trinomial_core::orbit::{lambda_subtorus, omega_subtorus, verify_one_param_subgroup};
use trinomial_core::poly::{parse_polynomial, rational, Monomial, Rational, Scope, SparsePolynomial, Var};
use trinomial_core::rigidity::{rigidity_verdict, Target};
use trinomial_core::variety::{TrinomialData, VarietyType};

const VARS: [Var; 4] = [Var::t(1, 1), Var::t(1, 2), Var::t(2, 1), Var::s(1)];

fn danielewski() -> TrinomialData {
    TrinomialData::type1(vec![vec![1, 1], vec![2]], vec![rational(0, 1), rational(1, 1)], 1)
}

fn polynomial() -> impl Strategy<Value = SparsePolynomial> {
    let term = (-6i64..=6, 1i64..=3, prop::collection::vec(0u32..=3, VARS.len()));
    prop::collection::vec(term, 0..5).prop_map(|terms| {
        SparsePolynomial::from_terms(terms.into_iter().map(|(n, d, exps)| {
            (Monomial::from_pairs(VARS.iter().copied().zip(exps)), rational(n, d))
        }))
    })
}

fn derivation() -> impl Strategy<Value = Derivation> {
    prop::collection::vec(polynomial(), VARS.len())
        .prop_map(|images| Derivation::new(VARS.iter().copied().zip(images).collect()))
}

fn pairwise_independent_columns(count: usize) -> [Vec<Rational>; 2] {
    let pairs = [(1, 0), (0, 1), (1, 1), (1, 2), (2, 1)];
    [
        pairs[..count].iter().map(|p| rational(p.0, 1)).collect(),
        pairs[..count].iter().map(|p| rational(p.1, 1)).collect(),
    ]
}

fn trinomial_data() -> impl Strategy<Value = TrinomialData> {
    let block = prop::collection::vec(1u32..=4, 1..=2);
    (any::<bool>(), prop::collection::vec(block, 2..=4), 0u32..=1).prop_map(|(two, mut blocks, m)| {
        if two {
            if blocks.len() < 3 {
                blocks.push(vec![2]);
            }
            let count = blocks.len();
            TrinomialData::type2(blocks, pairwise_independent_columns(count), m)
        } else {
            let a = (0..blocks.len() as i64).map(|k| rational(k * k + 1, 1)).collect();
            TrinomialData::type1(blocks, a, m)
        }
    })
}

fn set_exponent_to_one(data: &TrinomialData, block: usize, pos: usize) -> TrinomialData {
    let mut out = data.clone();
    let b = block % out.exponents.len();
    let p = pos % out.exponents[b].len();
    out.exponents[b][p] = 1;
    out
}

proptest! {
    #[test]
    fn leibniz_rule(p in polynomial(), q in polynomial(), d in derivation()) {
        prop_assert_eq!(d.apply(&(&p * &q)), &(&d.apply(&p) * &q) + &(&p * &d.apply(&q)));
    }

    #[test]
    fn print_parse_round_trip(p in polynomial()) {
        prop_assert_eq!(parse_polynomial(&p.to_string(), Scope::Free).unwrap(), p);
    }

    #[test]
    fn normal_form_idempotent_and_linear(p in polynomial(), q in polynomial(), c in -5i64..=5) {
        let alg = danielewski().relations().unwrap();
        let nf = |x: &SparsePolynomial| alg.normal_form(x).unwrap();
        prop_assert_eq!(nf(&nf(&p)), nf(&p));
        let c = SparsePolynomial::integer(c);
        prop_assert_eq!(nf(&(&p + &(&c * &q))), &nf(&p) + &(&c * &nf(&q)));
    }

    #[test]
    fn multiples_of_relations_reduce_to_zero(p in polynomial(), data in trinomial_data()) {
        let alg = data.relations().unwrap();
        let targets = data.variables();
        let renamed: BTreeMap<Var, SparsePolynomial> = VARS
            .iter()
            .enumerate()
            .map(|(k, &a)| (a, targets.get(k).map_or(SparsePolynomial::one(), |&b| SparsePolynomial::var(b))))
            .collect();
        let p = p.substitute(&renamed);
        for g in alg.relations.polys() {
            prop_assert!(alg.normal_form(&(&p * g)).unwrap().is_zero());
        }
    }

    #[test]
    fn grading_has_complexity_one(data in trinomial_data()) {
        let group = grading_group(&data).unwrap();
        prop_assert_eq!(group.free_rank as i64, data.dimension() - 1);
    }

    #[test]
    fn nonrigidity_survives_unit_exponents(data in trinomial_data(), block in 0usize..4, pos in 0usize..2) {
        let before = rigidity_verdict(&data, Target::Y).unwrap();
        let after = rigidity_verdict(&set_exponent_to_one(&data, block, pos), Target::Y).unwrap();
        prop_assert!(before.rigid || !after.rigid);
    }

    #[test]
    fn x_nonrigid_when_y_is(data in trinomial_data()) {
        let y = rigidity_verdict(&data, Target::Y).unwrap();
        let x = rigidity_verdict(&data, Target::X).unwrap();
        prop_assert!(y.rigid || !x.rigid);
        if data.m > 0 {
            prop_assert!(!x.rigid);
        }
    }

    #[test]
    fn subtori_act(data in trinomial_data()) {
        let alg = data.relations().unwrap();
        for i in data.block_indices() {
            if data.block_size(i) == 2 {
                let g = lambda_subtorus(&data, i, 1, 2).unwrap();
                let check = verify_one_param_subgroup(&g, &alg);
                prop_assert!(check.degrees.iter().all(|d| *d == Some(0)));
            }
        }
        if data.kind == VarietyType::Two {
            let check = verify_one_param_subgroup(&omega_subtorus(&data).unwrap(), &alg);
            prop_assert!(check.acts);
            let first = check.degrees[0];
            prop_assert!(check.degrees.iter().all(|d| *d == first) && first.unwrap() > 0);
        }
    }

    #[test]
    fn exponential_is_a_ring_map(p in polynomial(), q in polynomial()) {
        let alg = danielewski().relations().unwrap();
        let parse = |s: &str| parse_polynomial(s, Scope::Free).unwrap();
        let delta = Derivation::new([(Var::t(1, 1), parse("2*T[2][1]")), (Var::t(2, 1), parse("T[1][2]"))].into());
        let phi = exponential(&alg, &delta, None).unwrap();
        let nf = |x: &SparsePolynomial| alg.normal_form(x).unwrap();
        prop_assert_eq!(nf(&phi.apply(&(&p * &q))), nf(&(&phi.apply(&p) * &phi.apply(&q))));
        prop_assert_eq!(nf(&phi.apply(&(&p + &q))), nf(&(&phi.apply(&p) + &phi.apply(&q))));
    }
}

fn small_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-9i64..=9, c), r).prop_map(move |rows| IntMatrix::from_rows(&rows, c))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn smith_normal_form_invariants(a in small_matrix()) {
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.d.clone());
        prop_assert!(snf.d.is_diagonal());
        prop_assert!(snf.u.is_unimodular() && snf.v.is_unimodular());
        let diag = snf.diagonal();
        prop_assert!(diag.iter().all(|x| !x.is_negative()));
        for w in diag.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()));
        }
        let det_ok = a.rows() != a.cols() || a.determinant().abs() == diag.iter().fold(BigInt::one(), |acc, x| acc * x);
        prop_assert!(det_ok);
    }
}
