//! Deterministic pseudo-random twisted elements for property suites.
//!
//! Odd levels get symmetric matrices and even levels antisymmetric ones, so
//! every generated element passes the twist check by construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::givental::{LoopAlgebraElement, LoopGroupElement, LoopSign};
use crate::ring::{Mat, Scalar};

/// Bounds for one generated algebra element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleShape {
    pub n: usize,
    pub sign: LoopSign,
    /// Levels `1..=max_level` are filled.
    pub max_level: u32,
    /// Numerators are drawn from `-numer..=numer`.
    pub numer: i64,
    /// Denominators are drawn from `1..=denom`.
    pub denom: i64,
}

impl SampleShape {
    pub fn new(n: usize, sign: LoopSign, max_level: u32) -> Self {
        SampleShape {
            n,
            sign,
            max_level,
            numer: 3,
            denom: 3,
        }
    }

    /// Only `level` is filled.
    pub fn single_level(self, level: u32) -> SingleLevel {
        SingleLevel { shape: self, level }
    }
}

/// A shape restricted to one level.
#[derive(Clone, Copy, Debug)]
pub struct SingleLevel {
    shape: SampleShape,
    level: u32,
}

/// Seeded generator; the same seed always yields the same sequence.
#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn rational(&mut self, numer: i64, denom: i64) -> Scalar {
        let p = self.rng.gen_range(-numer..=numer);
        let q = self.rng.gen_range(1..=denom.max(1));
        Scalar::new(p, q)
    }

    /// A twisted matrix for `level`: symmetric when odd, antisymmetric when even.
    pub fn level_matrix(&mut self, n: usize, level: u32, numer: i64, denom: i64) -> Mat<Scalar> {
        let symmetric = level % 2 == 1;
        let mut m = Mat::zeros(n);
        for i in 0..n {
            for j in i..n {
                if i == j && !symmetric {
                    continue;
                }
                let c = self.rational(numer, denom);
                let mirror = if symmetric { c.clone() } else { -c.clone() };
                m.set(i, j, c);
                m.set(j, i, mirror);
            }
        }
        m
    }

    fn fill(&mut self, shape: &SampleShape, levels: impl Iterator<Item = u32> + Clone) -> LoopAlgebraElement {
        // Redraw a few times if everything came out zero; n = 1 even levels
        // are forced to vanish, so give up eventually.
        for _ in 0..8 {
            let terms: Vec<(u32, Mat<Scalar>)> = levels
                .clone()
                .map(|l| (l, self.level_matrix(shape.n, l, shape.numer, shape.denom)))
                .collect();
            let a = LoopAlgebraElement::new(shape.sign, shape.n, terms).expect("twisted by construction");
            if !a.is_zero() {
                return a;
            }
        }
        LoopAlgebraElement::zero(shape.sign, shape.n)
    }

    pub fn algebra(&mut self, shape: &SampleShape) -> LoopAlgebraElement {
        self.fill(shape, 1..=shape.max_level)
    }

    pub fn algebra_at(&mut self, s: &SingleLevel) -> LoopAlgebraElement {
        self.fill(&s.shape, s.level..=s.level)
    }

    /// `exp` of one factor per shape, reordered so raising factors come first.
    pub fn group(&mut self, shapes: &[SampleShape]) -> LoopGroupElement {
        let n = shapes.first().map_or(1, |s| s.n);
        let mut factors: Vec<LoopAlgebraElement> = shapes.iter().map(|s| self.algebra(s)).collect();
        factors.sort_by_key(|f| !f.sign().raises());
        LoopGroupElement::new(n, factors).expect("twisted by construction")
    }
}

/// One-shot helper: the element drawn first from `seed`.
pub fn sample_algebra(seed: u64, shape: &SampleShape) -> LoopAlgebraElement {
    Sampler::new(seed).algebra(shape)
}

/// One-shot helper: the group element drawn first from `seed`.
pub fn sample_group(seed: u64, shapes: &[SampleShape]) -> LoopGroupElement {
    Sampler::new(seed).group(shapes)
}

/// A varied set of `count` group elements: sizes cycle through `ns`, with
/// one- and two-factor exponentials (`R·S` for two), levels up to `max_level`.
pub fn group_suite(seed: u64, count: usize, ns: &[usize], max_level: u32) -> Vec<LoopGroupElement> {
    let mut s = Sampler::new(seed);
    (0..count)
        .map(|i| {
            let n = ns[i % ns.len()];
            let level = 1 + (i / ns.len()) as u32 % max_level;
            let shapes = match (i / (ns.len() * max_level as usize)) % 3 {
                0 => vec![SampleShape::new(n, LoopSign::Minus, level)],
                1 => vec![SampleShape::new(n, LoopSign::Plus, level)],
                _ => vec![
                    SampleShape::new(n, LoopSign::Plus, level),
                    SampleShape::new(n, LoopSign::Minus, max_level),
                ],
            };
            s.group(&shapes)
        })
        .collect()
}

/// The flow directions used with [`group_suite`]: s-type at one of the
/// levels 1–3 or r-type at one of the levels 1–2.
pub fn direction_suite(seed: u64, count: usize, n: &[usize]) -> Vec<LoopAlgebraElement> {
    const KINDS: [(LoopSign, u32); 5] = [
        (LoopSign::Minus, 1),
        (LoopSign::Minus, 2),
        (LoopSign::Minus, 3),
        (LoopSign::Plus, 1),
        (LoopSign::Plus, 2),
    ];
    let mut s = Sampler::new(seed ^ 0x5eed);
    (0..count)
        .map(|i| {
            let (sign, level) = KINDS[i % KINDS.len()];
            let size = n[i % n.len()];
            s.algebra_at(&SampleShape::new(size, sign, level).single_level(level))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_twisted() {
        let shape = SampleShape::new(2, LoopSign::Minus, 1);
        let a = sample_algebra(0, &shape);
        assert_eq!(a, sample_algebra(0, &shape));
        let m = a.level(1);
        assert_eq!(m, m.transpose());
        assert!(a.is_twisted());
    }

    #[test]
    fn seeds_differ() {
        let shape = SampleShape::new(3, LoopSign::Plus, 2);
        assert_ne!(sample_algebra(1, &shape), sample_algebra(2, &shape));
    }

    #[test]
    fn suites_are_twisted_and_ordered() {
        for g in group_suite(7, 24, &[1, 2, 3], 2) {
            assert!(g.is_ordered());
            g.check_twist(6).unwrap();
        }
        let dirs = direction_suite(7, 10, &[1, 2]);
        assert!(dirs.iter().all(LoopAlgebraElement::is_twisted));
    }
}
