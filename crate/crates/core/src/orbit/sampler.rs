//! Numeric sampling of points with a prescribed vanishing pattern.
//!
//! The relations are linear in the block monomial values. Blocks touched by
//! the pattern get the value zero, the linear system is solved for the
//! remaining values with random free parameters, and each block is then
//! filled with random coordinates and one coordinate solved by a root on a
//! random branch. The admissibility rules are never consulted, so the
//! realized patterns are an independent check on them.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::Zero;
use rand::Rng;

use super::support::{stratum_of_point, SupportPattern};
use super::{OrbitError, Point};
use crate::linalg::rref;
use crate::poly::{rational_to_f64, Monomial, Rational, Var};
use crate::variety::TrinomialData;

fn random_unit<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..TAU))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PatternSample {
    pub point: Point,
    /// Number of random values the point was built from.
    pub parameters: usize,
}

pub struct PatternSampler {
    data: TrinomialData,
    blocks: Vec<u32>,
    /// Relation rows over the block monomials, with the right-hand side last.
    system: Vec<Vec<Rational>>,
}

impl PatternSampler {
    pub fn new(data: &TrinomialData) -> Result<Self, OrbitError> {
        let alg = data.relations()?;
        let blocks: Vec<u32> = data.block_indices().collect();
        let system = alg
            .relations
            .polys()
            .map(|g| {
                let mut row: Vec<Rational> = blocks.iter().map(|&i| g.coefficient(&data.block_monomial(i))).collect();
                row.push(-g.coefficient(&Monomial::one()));
                row
            })
            .collect();
        Ok(PatternSampler { data: data.clone(), blocks, system })
    }

    /// One point whose `T` coordinates vanish exactly on `pattern`, unless
    /// the block monomial equations have no solution at all. Forced extra
    /// zeros show up as a different realized pattern.
    pub fn sample<R: Rng + ?Sized>(&self, pattern: &SupportPattern, rng: &mut R) -> Option<PatternSample> {
        let touched = pattern.blocks();
        let open: Vec<usize> = (0..self.blocks.len()).filter(|&k| !touched.contains(&self.blocks[k])).collect();
        let width = open.len();
        let mut rows: Vec<Vec<Rational>> = self
            .system
            .iter()
            .map(|row| {
                let mut r: Vec<Rational> = open.iter().map(|&k| row[k].clone()).collect();
                r.push(row[self.blocks.len()].clone());
                r
            })
            .collect();
        let pivots = rref(&mut rows, width + 1);
        if pivots.contains(&width) {
            return None;
        }
        let free: Vec<usize> = (0..width).filter(|c| !pivots.contains(c)).collect();
        let mut values = vec![Complex64::zero(); width];
        for &c in &free {
            values[c] = random_unit(rng);
        }
        for (row, &p) in rows.iter().zip(&pivots) {
            let mut x = Complex64::new(rational_to_f64(&row[width]), 0.0);
            for &c in &free {
                x -= values[c] * rational_to_f64(&row[c]);
            }
            values[p] = x;
        }

        let mut point = Point::new();
        let mut parameters = free.len() + self.data.m as usize;
        for (k, &i) in self.blocks.iter().enumerate() {
            let size = self.data.block_size(i);
            if touched.contains(&i) {
                for j in 1..=size {
                    let v = Var::t(i, j);
                    let x = if pattern.contains(v) {
                        Complex64::zero()
                    } else {
                        parameters += 1;
                        random_unit(rng)
                    };
                    point.insert(v, x);
                }
                continue;
            }
            let target = values[open.iter().position(|&o| o == k).expect("open block")];
            let mut partial = Complex64::new(1.0, 0.0);
            for j in 1..size {
                let x = random_unit(rng);
                parameters += 1;
                partial *= x.powu(self.data.exponent(i, j));
                point.insert(Var::t(i, j), x);
            }
            let l = self.data.exponent(i, size);
            let branch = Complex64::from_polar(1.0, TAU * rng.gen_range(0..l) as f64 / l as f64);
            let last = (target / partial).powf(1.0 / l as f64) * branch;
            point.insert(Var::t(i, size), last);
        }
        for v in self.data.s_vars() {
            point.insert(v, random_unit(rng));
        }
        Some(PatternSample { point, parameters })
    }

    /// A point realizing exactly `pattern`, trying up to `attempts` samples.
    pub fn sample_in_stratum<R: Rng + ?Sized>(
        &self,
        pattern: &SupportPattern,
        epsilon: f64,
        attempts: usize,
        rng: &mut R,
    ) -> Option<PatternSample> {
        (0..attempts).find_map(|_| {
            let s = self.sample(pattern, rng)?;
            let realized = stratum_of_point(&s.point, &self.data, epsilon).ok()?;
            (realized == *pattern).then_some(s)
        })
    }
}

/// Convenience wrapper around [`PatternSampler::sample`].
pub fn sample_pattern<R: Rng + ?Sized>(
    data: &TrinomialData,
    pattern: &SupportPattern,
    rng: &mut R,
) -> Result<Option<PatternSample>, OrbitError> {
    Ok(PatternSampler::new(data)?.sample(pattern, rng))
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::poly::rational;

    fn danielewski() -> TrinomialData {
        TrinomialData::type1(vec![vec![1, 1], vec![2]], vec![rational(0, 1), rational(1, 1)], 1)
    }

    #[test]
    fn samples_lie_on_the_stratum() {
        let data = danielewski();
        let sampler = PatternSampler::new(&data).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let j = SupportPattern::new([Var::t(1, 1)]);
        let s = sampler.sample(&j, &mut rng).unwrap();
        assert_eq!(stratum_of_point(&s.point, &data, 1e-9).unwrap(), j);
        assert_eq!(s.parameters, 2);
        let open = sampler.sample(&SupportPattern::empty(), &mut rng).unwrap();
        assert_eq!(open.parameters, 3);
    }

    #[test]
    fn two_blocks_have_no_points() {
        let sampler = PatternSampler::new(&danielewski()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(sampler.sample(&SupportPattern::new([Var::t(1, 1), Var::t(2, 1)]), &mut rng).is_none());
    }
}
