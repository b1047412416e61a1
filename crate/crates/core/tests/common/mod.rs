//! Random inputs and exhaustive reference checks shared by the integration
//! tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

use swiperkit::distribution::WeightDistribution;
use swiperkit::problem::ProblemSpec;
use swiperkit::rational::Rational;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Every parameter pair of the published evaluation table.
pub fn table_problems() -> Vec<ProblemSpec> {
    vec![
        ProblemSpec::restriction(q(1, 4), q(1, 3)).unwrap(),
        ProblemSpec::restriction(q(1, 3), q(3, 8)).unwrap(),
        ProblemSpec::restriction(q(1, 3), q(1, 2)).unwrap(),
        ProblemSpec::restriction(q(2, 3), q(3, 4)).unwrap(),
        ProblemSpec::separation(q(1, 4), q(1, 3)).unwrap(),
        ProblemSpec::separation(q(1, 3), q(1, 2)).unwrap(),
        ProblemSpec::separation(q(2, 3), q(3, 4)).unwrap(),
    ]
}

/// A problem of a random kind with thresholds on a grid of `1/denom`.
pub fn random_problem<R: Rng>(rng: &mut R, denom: i64) -> ProblemSpec {
    let a = rng.gen_range(1..denom);
    let mut b = rng.gen_range(1..denom);
    while b == a {
        b = rng.gen_range(1..denom);
    }
    let (low, high) = (q(a.min(b), denom), q(a.max(b), denom));
    match rng.gen_range(0..3) {
        0 => ProblemSpec::restriction(low, high).unwrap(),
        1 => ProblemSpec::qualification(high, low).unwrap(),
        _ => ProblemSpec::separation(low, high).unwrap(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Uniform,
    Zipf,
    TwoTier,
}

pub const SHAPES: [Shape; 3] = [Shape::Uniform, Shape::Zipf, Shape::TwoTier];

/// Random weights of the given shape; a few may be zero, the total never is.
pub fn random_weights<R: Rng>(rng: &mut R, shape: Shape, n: usize) -> Vec<Rational> {
    let mut weights: Vec<Rational> = match shape {
        Shape::Uniform => (0..n)
            .map(|_| q(rng.gen_range(0..=1000), rng.gen_range(1..=4)))
            .collect(),
        Shape::Zipf => {
            let exponent = rng.gen_range(1..=2u32);
            let mut w: Vec<Rational> = (1..=n as i64)
                .map(|rank| q(1_000_000 * rng.gen_range(1..=3), rank.pow(exponent)))
                .collect();
            w.shuffle(rng);
            w
        }
        Shape::TwoTier => {
            let heavy = rng.gen_range(1..=n.div_ceil(4).max(1));
            let big = q(rng.gen_range(2..=10_000), 1);
            let small = q(1, rng.gen_range(1..=3));
            let mut w: Vec<Rational> = (0..n)
                .map(|i| if i < heavy { big.clone() } else { small.clone() })
                .collect();
            w.shuffle(rng);
            w
        }
    };
    if weights.iter().all(Rational::is_zero) {
        weights[0] = Rational::one();
    }
    weights
}

pub fn random_distribution<R: Rng>(rng: &mut R, shape: Shape, n: usize) -> WeightDistribution {
    WeightDistribution::from_weights(random_weights(rng, shape, n)).unwrap()
}

/// Subset weight sums and membership masks for up to ~20 parties.
pub struct Subsets {
    pub n: usize,
    pub weight: Vec<Rational>,
    pub total: Rational,
}

impl Subsets {
    pub fn new(dist: &WeightDistribution) -> Self {
        let n = dist.len();
        let mut weight = vec![Rational::zero(); 1 << n];
        for mask in 1usize..1 << n {
            let bit = mask.trailing_zeros() as usize;
            weight[mask] = &weight[mask & (mask - 1)] + dist.weight(bit);
        }
        let total = weight[(1 << n) - 1].clone();
        Subsets { n, weight, total }
    }

    pub fn tickets(&self, t: &[u64]) -> Vec<u64> {
        let mut sums = vec![0u64; 1 << self.n];
        for mask in 1usize..1 << self.n {
            let bit = mask.trailing_zeros() as usize;
            sums[mask] = sums[mask & (mask - 1)] + t[bit];
        }
        sums
    }

    /// Masks with `w(S) < fraction·W`.
    pub fn lighter_than(&self, fraction: &Rational) -> Vec<usize> {
        let cap = fraction * &self.total;
        (0..1 << self.n).filter(|&m| self.weight[m] < cap).collect()
    }

    /// Masks with `w(S) > fraction·W`.
    pub fn heavier_than(&self, fraction: &Rational) -> Vec<usize> {
        let cap = fraction * &self.total;
        (0..1 << self.n).filter(|&m| self.weight[m] > cap).collect()
    }
}
