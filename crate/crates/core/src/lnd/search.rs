//! Bounded search for homogeneous locally nilpotent derivations.
//!
//! The derivations of a fixed degree whose images have bounded total degree
//! form a finite-dimensional space cut out by the linear conditions
//! `NF(δ(g_i)) = 0`. Local nilpotency is not linear, so candidates are drawn
//! from the solution space: the echelon basis, all minimal-support solutions
//! ("circuits") of small support, and sums and differences of two circuits
//! acting on a common generator. Each candidate is kept only if its
//! nilpotency check is conclusive.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::lattice::{Degree, Grading};
use crate::linalg::nullspace;
use crate::poly::{primitive_integer_vector, Monomial, Rational, SparsePolynomial, Var};
use crate::variety::PresentedAlgebra;

use super::checks::{check_locally_nilpotent, check_preserves_ideal, default_cap, MAX_TERMS};
use super::modular::ModularIterator;
use super::{Derivation, LndError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    /// Maximal total degree of an image.
    pub max_image_degree: u32,
    /// Nilpotency cap per candidate; `None` uses the default cap.
    pub cap: Option<u32>,
    /// Largest circuit support enumerated.
    pub max_circuit_support: usize,
    /// Column subsets examined while enumerating circuits.
    pub max_subsets: usize,
    /// Pairwise circuit combinations tried.
    pub max_pair_sums: usize,
}

impl SearchBounds {
    pub fn new(max_image_degree: u32) -> Self {
        SearchBounds { max_image_degree, cap: None, max_circuit_support: 4, max_subsets: 200_000, max_pair_sums: 5_000 }
    }
}

/// All monomials in `vars` of total degree at most `max_degree`.
fn monomials_up_to(vars: &[Var], max_degree: u32) -> Vec<Monomial> {
    fn rec(vars: &[Var], left: u32, acc: &mut Vec<(Var, u32)>, out: &mut Vec<Monomial>) {
        let Some((&v, rest)) = vars.split_first() else {
            out.push(Monomial::from_pairs(acc.iter().copied()));
            return;
        };
        for e in 0..=left {
            if e > 0 {
                acc.push((v, e));
            }
            rec(rest, left - e, acc, out);
            if e > 0 {
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(vars, max_degree, &mut Vec::new(), &mut out);
    out.sort();
    out
}

struct LinearSystem {
    unknowns: Vec<(Var, Monomial)>,
    /// Dense rows over the unknowns.
    rows: Vec<Vec<Rational>>,
    /// Row indices where each column is nonzero.
    supports: Vec<BTreeSet<usize>>,
}

fn build_system(alg: &PresentedAlgebra, w: &Grading, g0: &Degree, max_degree: u32) -> Result<LinearSystem, LndError> {
    let candidates: Vec<Monomial> =
        monomials_up_to(&alg.variables, max_degree).into_iter().filter(|m| alg.relations.is_standard(m)).collect();
    let mut degree_cache = Vec::with_capacity(candidates.len());
    for m in &candidates {
        degree_cache.push(w.monomial_degree(m)?.free);
    }
    let partials: Vec<Vec<SparsePolynomial>> =
        alg.relations.polys().map(|g| alg.variables.iter().map(|&x| g.partial(x)).collect()).collect();

    let mut unknowns = Vec::new();
    let mut columns: Vec<Vec<(usize, SparsePolynomial)>> = Vec::new();
    for (xi, &x) in alg.variables.iter().enumerate() {
        let target: Vec<i64> = w.weight(x)?.free.iter().zip(&g0.free).map(|(a, b)| a + b).collect();
        for (m, d) in candidates.iter().zip(&degree_cache) {
            if *d != target {
                continue;
            }
            let col = partials
                .iter()
                .enumerate()
                .map(|(i, dg)| (i, alg.relations.reduce(&dg[xi].mul_monomial(m))))
                .collect();
            unknowns.push((x, m.clone()));
            columns.push(col);
        }
    }

    let mut row_index: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
    for col in &columns {
        for (i, p) in col {
            for (m, _) in p.terms() {
                let next = row_index.len();
                row_index.entry((*i, m.clone())).or_insert(next);
            }
        }
    }
    let mut rows = vec![vec![Rational::zero(); unknowns.len()]; row_index.len()];
    let mut supports = vec![BTreeSet::new(); unknowns.len()];
    for (k, col) in columns.iter().enumerate() {
        for (i, p) in col {
            for (m, c) in p.terms() {
                let r = row_index[&(*i, m.clone())];
                rows[r][k] = c.clone();
                supports[k].insert(r);
            }
        }
    }
    Ok(LinearSystem { unknowns, rows, supports })
}

impl LinearSystem {
    fn restricted_kernel(&self, cols: &[usize]) -> Vec<Vec<Rational>> {
        let rows: BTreeSet<usize> = cols.iter().flat_map(|&c| self.supports[c].iter().copied()).collect();
        let sub: Vec<Vec<Rational>> = rows.iter().map(|&r| cols.iter().map(|&c| self.rows[r][c].clone()).collect()).collect();
        nullspace(sub, cols.len())
    }

    /// Minimal-support kernel vectors with support at most `max_support`,
    /// grown as connected column sets so unrelated columns are never paired.
    fn circuits(&self, max_support: usize, max_subsets: usize) -> Vec<Vec<Rational>> {
        let k = self.unknowns.len();
        let mut out = Vec::new();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut stack: Vec<Vec<usize>> = Vec::new();
        for c in 0..k {
            if self.supports[c].is_empty() {
                let mut v = vec![Rational::zero(); k];
                v[c] = Rational::from_integer(1.into());
                out.push(v);
            } else {
                stack.push(vec![c]);
            }
        }
        let adjacent = |a: usize, b: usize| !self.supports[a].is_disjoint(&self.supports[b]);
        let mut examined = 0;
        while let Some(set) = stack.pop() {
            if set.len() >= max_support || examined >= max_subsets {
                continue;
            }
            let start = set[0];
            for c in start + 1..k {
                if set.contains(&c) || self.supports[c].is_empty() || !set.iter().any(|&s| adjacent(s, c)) {
                    continue;
                }
                let mut next = set.clone();
                next.push(c);
                next[1..].sort_unstable();
                if !seen.insert(next.clone()) {
                    continue;
                }
                examined += 1;
                let kernel = self.restricted_kernel(&next);
                match kernel.len() {
                    0 => stack.push(next),
                    1 if kernel[0].iter().all(|x| !x.is_zero()) => {
                        let mut v = vec![Rational::zero(); k];
                        for (&c, x) in next.iter().zip(&kernel[0]) {
                            v[c] = x.clone();
                        }
                        out.push(v);
                    }
                    // Dependent with a smaller circuit inside: supersets
                    // cannot be minimal.
                    _ => {}
                }
            }
        }
        out
    }
}

fn normalize(v: &[Rational]) -> Option<Vec<BigInt>> {
    let (scale, ints) = primitive_integer_vector(v, false);
    (!scale.is_zero()).then_some(ints)
}

/// Bounded search; see the module docs for the candidate strategy. The
/// result is sorted by image support and is empty when no candidate within
/// the bounds is conclusively locally nilpotent.
pub fn search_homogeneous_lnds(
    alg: &PresentedAlgebra,
    w: &Grading,
    g0: &Degree,
    bounds: &SearchBounds,
) -> Result<Vec<Derivation>, LndError> {
    if g0.free.len() != w.free_rank {
        return Err(LndError::DegreeOutOfRange(format!(
            "degree has {} free entries, the grading has rank {}",
            g0.free.len(),
            w.free_rank
        )));
    }
    if bounds.max_image_degree < 1 {
        return Err(LndError::DegreeOutOfRange("maximal image degree must be at least 1".into()));
    }
    let system = build_system(alg, w, g0, bounds.max_image_degree)?;
    let k = system.unknowns.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let basis = nullspace(system.rows.clone(), k);
    if basis.is_empty() {
        return Ok(Vec::new());
    }

    let circuits = system.circuits(bounds.max_circuit_support, bounds.max_subsets);
    let mut candidates: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for v in basis.iter().chain(&circuits) {
        candidates.extend(normalize(v));
    }
    let circuit_ints: Vec<Vec<BigInt>> = circuits.iter().filter_map(|v| normalize(v)).collect();
    let acts_on = |v: &[BigInt]| -> BTreeSet<Var> {
        v.iter().zip(&system.unknowns).filter(|(c, _)| !c.is_zero()).map(|(_, (x, _))| *x).collect()
    };
    let mut pairs = 0;
    'outer: for (i, a) in circuit_ints.iter().enumerate() {
        let va = acts_on(a);
        for b in &circuit_ints[i + 1..] {
            if va.is_disjoint(&acts_on(b)) {
                continue;
            }
            if pairs >= bounds.max_pair_sums {
                break 'outer;
            }
            pairs += 1;
            for sign in [1, -1] {
                let combo: Vec<Rational> =
                    a.iter().zip(b).map(|(x, y)| Rational::from_integer(x + y * BigInt::from(sign))).collect();
                candidates.extend(normalize(&combo));
            }
        }
    }

    let mut found: Vec<(Vec<usize>, Vec<BigInt>, Derivation)> = Vec::new();
    for ints in candidates {
        let mut images: BTreeMap<Var, SparsePolynomial> = BTreeMap::new();
        for (c, (x, m)) in ints.iter().zip(&system.unknowns) {
            if !c.is_zero() {
                images.entry(*x).or_insert_with(SparsePolynomial::zero).add_term(m.clone(), Rational::from_integer(c.clone()));
            }
        }
        let delta = Derivation::new(images);
        if delta.is_zero() || !check_preserves_ideal(alg, &delta)?.preserved {
            continue;
        }
        // Modular screen: a surviving iterate modulo a prime already rules
        // the candidate out, so only plausible ones get the exact check.
        let cap = bounds.cap.unwrap_or_else(|| default_cap(alg, &delta));
        let passes_screen = match ModularIterator::new(alg, &delta) {
            Some(it) => alg.variables.iter().all(|&x| !it.survives(x, cap, MAX_TERMS)),
            None => true,
        };
        if passes_screen && check_locally_nilpotent(alg, &delta, Some(cap))?.is_lnd() {
            let support: Vec<usize> = ints.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i).collect();
            found.push((support, ints, delta));
        }
    }
    found.sort_by(|a, b| (a.0.len(), &a.0, &a.1).cmp(&(b.0.len(), &b.0, &b.1)));
    Ok(found.into_iter().map(|(_, _, d)| d).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::weight_assignment;
    use crate::lnd::homogeneity_degree;
    use crate::poly::{parse_polynomial, rational, Scope};
    use crate::variety::TrinomialData;

    fn p(s: &str) -> SparsePolynomial {
        parse_polynomial(s, Scope::Free).unwrap()
    }

    #[test]
    fn monomial_enumeration() {
        let vars = [Var::t(1, 1), Var::t(1, 2)];
        assert_eq!(monomials_up_to(&vars, 2).len(), 6);
    }

    #[test]
    fn danielewski_search() {
        let data = TrinomialData::type1(vec![vec![1, 1], vec![2]], vec![rational(0, 1), rational(1, 1)], 0);
        let alg = data.relations().unwrap();
        let w = weight_assignment(&data).unwrap();
        let g0 = Degree { free: vec![-1], torsion: vec![] };
        let found = search_homogeneous_lnds(&alg, &w, &g0, &SearchBounds::new(2)).unwrap();
        let expected = Derivation::new([(Var::t(1, 1), p("2*T[2][1]")), (Var::t(2, 1), p("T[1][2]"))].into());
        assert!(found.contains(&expected), "{found:?}");
        for d in &found {
            assert_eq!(homogeneity_degree(&alg, d, &w).unwrap().free, vec![-1]);
        }
    }

    #[test]
    fn degree_checks() {
        let data = TrinomialData::type1(vec![vec![1, 1], vec![2]], vec![rational(0, 1), rational(1, 1)], 0);
        let alg = data.relations().unwrap();
        let w = weight_assignment(&data).unwrap();
        let bad = Degree { free: vec![1, 2], torsion: vec![] };
        assert!(matches!(
            search_homogeneous_lnds(&alg, &w, &bad, &SearchBounds::new(2)),
            Err(LndError::DegreeOutOfRange(_))
        ));
        let g0 = Degree { free: vec![0], torsion: vec![] };
        assert!(matches!(
            search_homogeneous_lnds(&alg, &w, &g0, &SearchBounds::new(0)),
            Err(LndError::DegreeOutOfRange(_))
        ));
    }
}
