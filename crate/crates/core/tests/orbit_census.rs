use std::collections::BTreeSet;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trinomial_core::orbit::{
    admissible_supports, apply_steps, census, lambda_subtorus, omega_subtorus, stratum_of_point, transport,
    verify_one_param_subgroup, PatternSampler, SupportPattern, TransportStep, DEFAULT_EPSILON,
};
use trinomial_core::orbit::OpenPartVerdict;
use trinomial_core::poly::{rational, Rational, Var};
use trinomial_core::rigidity::{rigidity_verdict, Target};
use trinomial_core::variety::{TrinomialData, VarietyType};

fn columns(count: usize) -> [Vec<Rational>; 2] {
    let pairs = [(1, 0), (0, 1), (1, 1), (1, 2), (2, 1)];
    [
        pairs[..count].iter().map(|p| rational(p.0, 1)).collect(),
        pairs[..count].iter().map(|p| rational(p.1, 1)).collect(),
    ]
}

fn instances() -> Vec<(&'static str, TrinomialData)> {
    vec![
        ("danielewski", TrinomialData::type1(vec![vec![1, 1], vec![2]], vec![rational(0, 1), rational(1, 1)], 0)),
        ("type1 ((1,2),(3)) m=1", TrinomialData::type1(vec![vec![1, 2], vec![3]], vec![rational(0, 1), rational(1, 1)], 1)),
        (
            "type1 ((2,2),(1,3),(2))",
            TrinomialData::type1(vec![vec![2, 2], vec![1, 3], vec![2]], vec![rational(0, 1), rational(1, 1), rational(3, 1)], 0),
        ),
        ("type2 (2,2,2)", TrinomialData::type2(vec![vec![2]; 3], columns(3), 0)),
        ("type2 (3,3,3)", TrinomialData::type2(vec![vec![3]; 3], columns(3), 0)),
        ("type2 ((1,1),(1,2),(3))", TrinomialData::type2(vec![vec![1, 1], vec![1, 2], vec![3]], columns(3), 0)),
        ("type2 ((2,4),(2),(1),(3)) m=1", TrinomialData::type2(vec![vec![2, 4], vec![2], vec![1], vec![3]], columns(4), 1)),
    ]
}

fn all_patterns(data: &TrinomialData) -> Vec<SupportPattern> {
    let vars = data.t_vars();
    (0u32..1 << vars.len())
        .map(|mask| SupportPattern::new(vars.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &v)| v)))
        .collect()
}

#[test]
fn sampler_agrees_with_admissible_supports() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, data) in instances() {
        let sampler = PatternSampler::new(&data).unwrap();
        let admissible = admissible_supports(&data).unwrap();
        let mut realized = BTreeSet::new();
        for j in all_patterns(&data) {
            for _ in 0..1000 {
                let Some(sample) = sampler.sample(&j, &mut rng) else { break };
                let got = stratum_of_point(&sample.point, &data, DEFAULT_EPSILON).unwrap();
                if got == j {
                    let expected = admissible.iter().find(|(p, _)| *p == j).map(|(_, d)| *d);
                    assert_eq!(Some(sample.parameters as i64), expected, "{name}: dimension of {j}");
                    realized.insert(j.clone());
                }
            }
        }
        let expected: BTreeSet<_> = admissible.into_iter().map(|(p, _)| p).collect();
        assert_eq!(realized, expected, "{name}");
    }
}

#[test]
fn transport_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (name, data) in instances() {
        let start = Instant::now();
        let sampler = PatternSampler::new(&data).unwrap();
        let strata: Vec<_> = admissible_supports(&data).unwrap().into_iter().map(|(p, _)| p).filter(|p| !p.is_empty()).collect();
        let gcd_above_one = data.exponents.iter().any(|b| b.iter().fold(0, |g, &l| num_integer::gcd(g, l)) > 1);
        let mut flagged = 0;
        for k in 0..100 {
            let j = &strata[k % strata.len()];
            let a = sampler.sample_in_stratum(j, DEFAULT_EPSILON, 50, &mut rng).unwrap().point;
            let b = sampler.sample_in_stratum(j, DEFAULT_EPSILON, 50, &mut rng).unwrap().point;
            let cert = transport(&a, &b, &data, DEFAULT_EPSILON).unwrap_or_else(|e| panic!("{name} {j}: {e}"));
            assert!(cert.residual <= 1e-9);
            let image = apply_steps(&a, &cert.steps);
            for (v, y) in &b {
                assert!((image[v] - y).norm() <= 1e-9 * y.norm().max(1.0), "{name}: {v}");
            }
            for step in &cert.steps {
                if let TransportStep::Diagonal(d) = step {
                    assert!(trinomial_core::orbit::stabilizer_defect(&data, &d.factors) < 1e-8);
                }
            }
            flagged += cert.flagged() as usize;
        }
        if flagged > 0 {
            assert!(gcd_above_one, "{name}: flagged steps without a block of exponent gcd > 1");
        }
        assert!(start.elapsed().as_secs_f64() < 10.0);
    }
}

#[test]
fn subgroups_act_on_every_instance() {
    for (_, data) in instances() {
        let alg = data.relations().unwrap();
        for i in data.block_indices() {
            for u in 1..=data.block_size(i) {
                for v in (1..=data.block_size(i)).filter(|&v| v != u) {
                    let check = verify_one_param_subgroup(&lambda_subtorus(&data, i, u, v).unwrap(), &alg);
                    assert!(check.degrees.iter().all(|d| *d == Some(0)));
                }
            }
        }
        if data.kind == VarietyType::Two {
            let check = verify_one_param_subgroup(&omega_subtorus(&data).unwrap(), &alg);
            assert!(check.acts);
            assert!(check.degrees.windows(2).all(|w| w[0] == w[1]));
        }
    }
}

#[test]
fn census_verdict_follows_rigidity() {
    for (name, data) in instances() {
        let c = census(&data).unwrap();
        let rigid = rigidity_verdict(&data.strip_free_part(), Target::Y).unwrap().rigid;
        assert_eq!(c.verdict == OpenPartVerdict::HypothesisFails, rigid, "{name}");
        let listed: Vec<_> = c.strata.iter().filter(|s| s.nonempty).map(|s| (s.pattern.clone(), s.dimension.unwrap())).collect();
        assert_eq!(listed, admissible_supports(&data).unwrap());
    }
}

#[test]
fn danielewski_has_a_two_orbit_stratum() {
    let data = &instances()[0].1;
    let c = census(data).unwrap();
    let x = c.strata.iter().find(|s| s.pattern == SupportPattern::new([Var::t(1, 1)])).unwrap();
    assert_eq!(x.orbits.unwrap().torus, 2);
    assert_eq!(x.orbits.unwrap().diagonal, 1);
}
