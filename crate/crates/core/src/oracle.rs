//! Brute-force reference implementations for small instances.
//!
//! Everything here enumerates subsets literally and shares no code with the
//! knapsack or family modules, so it can serve as ground truth for them.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::distribution::WeightDistribution;
use crate::error::{Error, Result};
use crate::problem::{ProblemKind, ProblemSpec};
use crate::rational::Rational;
use crate::tickets::TicketAssignment;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    /// Largest party count for subset enumeration.
    pub max_parties: usize,
    /// Largest party count for the optimum search.
    pub max_optimum_parties: usize,
    /// Largest ticket total the optimum search tries.
    pub max_total_tickets: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_parties: 18,
            max_optimum_parties: 6,
            max_total_tickets: 40,
        }
    }
}

/// Which subsets are light and heavy, with subset ticket sums computed per
/// candidate assignment.
struct SubsetTable {
    n: usize,
    /// Subsets with `w(S) < low·W` (WR `αw`, WS `α`).
    light: Vec<u32>,
    /// Subsets with `w(S) > high·W` (WQ `βw`, WS `β`).
    heavy: Vec<u32>,
}

impl SubsetTable {
    fn new(problem: &ProblemSpec, dist: &WeightDistribution) -> Self {
        let n = dist.len();
        // integer weights on the least common denominator
        let lcm = dist
            .weights()
            .fold(BigUint::one(), |acc, w| acc.lcm(w.denom().magnitude()));
        let scaled: Vec<BigUint> = dist
            .weights()
            .map(|w| w.numer().magnitude() * (&lcm / w.denom().magnitude()))
            .collect();
        let mut sums = vec![BigUint::zero(); 1 << n];
        for mask in 1usize..1 << n {
            let bit = mask.trailing_zeros() as usize;
            sums[mask] = &sums[mask & (mask - 1)] + &scaled[bit];
        }
        let total = sums[(1 << n) - 1].clone();
        // w(S) < (p/q)·W  ⟺  q·w(S) < p·W
        let scaled_bound = |r: &Rational| {
            (r.denom().magnitude().clone(), r.numer().magnitude() * &total)
        };
        let (light_q, light_pw) = scaled_bound(problem.low());
        let (heavy_q, heavy_pw) = scaled_bound(problem.high());
        let mut light = Vec::new();
        let mut heavy = Vec::new();
        for (mask, sum) in sums.iter().enumerate() {
            if &light_q * sum < light_pw {
                light.push(mask as u32);
            }
            if &heavy_q * sum > heavy_pw {
                heavy.push(mask as u32);
            }
        }
        SubsetTable { n, light, heavy }
    }

    fn ticket_sums(&self, t: &[u64]) -> Vec<u64> {
        let mut sums = vec![0u64; 1 << self.n];
        for mask in 1usize..1 << self.n {
            let bit = mask.trailing_zeros() as usize;
            sums[mask] = sums[mask & (mask - 1)] + t[bit];
        }
        sums
    }

    fn check(&self, problem: &ProblemSpec, t: &[u64]) -> bool {
        let sums = self.ticket_sums(t);
        let total = sums[(1 << self.n) - 1];
        // t(S) < (p/q)·T  ⟺  q·t(S) < p·T
        let frac = |r: &Rational| Scaled::new(r, total);
        match problem.kind() {
            ProblemKind::Restriction => {
                let f = frac(problem.high());
                self.light.iter().all(|&s| f.cmp(sums[s as usize]).is_lt())
            }
            ProblemKind::Qualification => {
                let f = frac(problem.low());
                self.heavy.iter().all(|&s| f.cmp(sums[s as usize]).is_gt())
            }
            ProblemKind::Separation => {
                let light_max = self.light.iter().map(|&s| sums[s as usize]).max();
                let heavy_min = self.heavy.iter().map(|&s| sums[s as usize]).min();
                match (light_max, heavy_min) {
                    (Some(l), Some(h)) => l < h,
                    _ => true,
                }
            }
        }
    }
}

/// A fraction `p/q` of a ticket total `T`, compared against ticket sums.
enum Scaled {
    Small { q: u128, pt: u128 },
    Big { q: BigUint, pt: BigUint },
}

impl Scaled {
    fn new(r: &Rational, total: u64) -> Self {
        let q = r.denom().magnitude();
        let p = r.numer().magnitude();
        match (u64::try_from(q), u64::try_from(p)) {
            (Ok(q), Ok(p)) => Scaled::Small {
                q: q as u128,
                pt: p as u128 * total as u128,
            },
            _ => Scaled::Big {
                q: q.clone(),
                pt: p * total,
            },
        }
    }

    /// Orders `sum` against `(p/q)·T`.
    fn cmp(&self, sum: u64) -> std::cmp::Ordering {
        match self {
            Scaled::Small { q, pt } => (q * sum as u128).cmp(pt),
            Scaled::Big { q, pt } => (q * sum).cmp(pt),
        }
    }
}

/// Checks the problem's coalition constraint over all `2^n` subsets.
pub fn brute_validate(
    problem: &ProblemSpec,
    dist: &WeightDistribution,
    t: &TicketAssignment,
    budget: &OracleBudget,
) -> Result<bool> {
    if dist.len() > budget.max_parties {
        return Err(Error::BudgetExceeded(format!(
            "{} parties exceed the enumeration limit of {}",
            dist.len(),
            budget.max_parties
        )));
    }
    if t.len() != dist.len() {
        return Err(Error::LengthMismatch {
            expected: dist.len(),
            found: t.len(),
        });
    }
    Ok(SubsetTable::new(problem, dist).check(problem, t.as_slice()))
}

/// A valid assignment with the fewest tickets, searching every assignment
/// (not only family members) by increasing total, each total in
/// lexicographic order.
pub fn brute_optimum(
    problem: &ProblemSpec,
    dist: &WeightDistribution,
    budget: &OracleBudget,
) -> Result<TicketAssignment> {
    let n = dist.len();
    if n > budget.max_optimum_parties {
        return Err(Error::BudgetExceeded(format!(
            "{n} parties exceed the optimum search limit of {}",
            budget.max_optimum_parties
        )));
    }
    let table = SubsetTable::new(problem, dist);
    let mut t = vec![0u64; n];
    for total in 1..=budget.max_total_tickets {
        // lexicographically smallest composition of `total`
        t.iter_mut().for_each(|x| *x = 0);
        t[n - 1] = total;
        loop {
            if table.check(problem, &t) {
                return TicketAssignment::new(t);
            }
            if !next_composition(&mut t) {
                break;
            }
        }
    }
    Err(Error::NoSolutionWithinCap {
        cap: budget.max_total_tickets,
    })
}

/// Advances to the next composition with the same sum in lexicographic order.
fn next_composition(t: &mut [u64]) -> bool {
    let n = t.len();
    // bump the rightmost position whose suffix still holds tickets, then
    // move the rest of that suffix to the last position
    let mut i = n - 1;
    let mut carried = t[n - 1];
    loop {
        if i == 0 {
            return false;
        }
        i -= 1;
        if carried > 0 {
            t[i] += 1;
            carried -= 1;
            for x in &mut t[i + 1..] {
                *x = 0;
            }
            t[n - 1] = carried;
            return true;
        }
        carried += t[i];
    }
}
