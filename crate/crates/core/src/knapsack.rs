//! 0/1 knapsack machinery for validity checks.
//!
//! Capacities are strict: a subset is feasible when its total weight is
//! *strictly* below the capacity. Weights are held as integers on a common
//! scale (`weight = unit · scale`) so the dynamic program never touches a
//! rational; for integer subset sums, `Σ < C` is the same as `Σ < ⌈C⌉`.

use std::borrow::Cow;
use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Knapsack items plus a strict capacity.
#[derive(Debug, Clone)]
pub struct KnapsackInstance<'a> {
    units: Cow<'a, [BigUint]>,
    profits: Cow<'a, [u64]>,
    /// Capacity measured in units.
    capacity: Rational,
    /// Weight of one unit.
    scale: Rational,
}

impl KnapsackInstance<'static> {
    /// Items are `(weight, profit)` pairs; weights must be non-negative.
    pub fn new<I>(items: I, capacity: Rational) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, u64)>,
    {
        let (weights, profits): (Vec<Rational>, Vec<u64>) = items.into_iter().unzip();
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return Err(Error::Config(format!("knapsack weight {w} is negative")));
        }
        let lcm = weights
            .iter()
            .fold(BigUint::one(), |acc, w| acc.lcm(w.denom().magnitude()));
        let units = weights
            .iter()
            .map(|w| w.numer().magnitude() * (&lcm / w.denom().magnitude()))
            .collect();
        let lcm = Rational::from(lcm);
        Ok(KnapsackInstance {
            units: Cow::Owned(units),
            profits: Cow::Owned(profits),
            capacity: capacity * &lcm,
            scale: lcm.recip(),
        })
    }
}

impl<'a> KnapsackInstance<'a> {
    /// Borrows integer unit weights; `capacity` is expressed in units.
    pub(crate) fn from_units(units: &'a [BigUint], profits: &'a [u64], capacity: Rational) -> Self {
        debug_assert_eq!(units.len(), profits.len());
        KnapsackInstance {
            units: Cow::Borrowed(units),
            profits: Cow::Borrowed(profits),
            capacity,
            scale: Rational::one(),
        }
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn weight(&self, item: usize) -> Rational {
        Rational::from(self.units[item].clone()) * &self.scale
    }

    pub fn profit(&self, item: usize) -> u64 {
        self.profits[item]
    }

    pub fn capacity(&self) -> Rational {
        &self.capacity * &self.scale
    }

    pub fn total_profit(&self) -> u64 {
        self.profits.iter().sum()
    }

    /// Strict integer capacity `⌈C⌉` in units, `None` when `C ≤ 0`.
    fn strict_capacity(&self) -> Option<BigUint> {
        if self.capacity.is_positive() {
            Some(self.capacity.ceil().into_parts().1)
        } else {
            None
        }
    }

    /// Items that can ever be part of a feasible set and carry profit.
    fn useful_items(&self, cap: &BigUint) -> impl Iterator<Item = usize> + '_ {
        let cap = cap.clone();
        (0..self.len()).filter(move |&i| self.profits[i] > 0 && self.units[i] < cap)
    }

    /// Item indices in greedy order: zero-weight items first, then by
    /// profit/weight descending, ties by index.
    fn greedy_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).filter(|&i| self.profits[i] > 0).collect();
        order.sort_by(|&a, &b| {
            cmp_ratio(self.profits[b], &self.units[b], self.profits[a], &self.units[a])
                .then(a.cmp(&b))
        });
        order
    }
}

/// Orders `p1/x1` against `p2/x2`, treating `x = 0` as an infinite ratio.
fn cmp_ratio(p1: u64, x1: &BigUint, p2: u64, x2: &BigUint) -> Ordering {
    match (x1.is_zero(), x2.is_zero()) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Greater,
        (false, true) => Ordering::Less,
        (false, false) => match (x1.to_u64(), x2.to_u64()) {
            (Some(a), Some(b)) => (p1 as u128 * b as u128).cmp(&(p2 as u128 * a as u128)),
            _ => (x2 * p1).cmp(&(x1 * p2)),
        },
    }
}

/// Minimum weight for one profit level; `Unreachable` sorts above every weight.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum MinWeight {
    Finite(Rational),
    Unreachable,
}

/// `min_weight[p]` is the lightest subset with profit exactly `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfitProfile {
    pub min_weight: Vec<MinWeight>,
}

trait Mass: Clone + Ord {
    fn plus(&self, other: &Self) -> Self;
}

impl Mass for u128 {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
}

impl Mass for BigUint {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
}

/// Runs `small` on `u128` weights when every subset sum fits, else `big`.
fn with_masses<R>(
    units: &[BigUint],
    items: &[usize],
    small: impl FnOnce(Vec<u128>) -> R,
    big: impl FnOnce(Vec<BigUint>) -> R,
) -> R {
    let total: BigUint = items.iter().map(|&i| &units[i]).sum();
    if total.bits() < 127 {
        small(items.iter().map(|&i| units[i].to_u128().expect("fits")).collect())
    } else {
        big(items.iter().map(|&i| units[i].clone()).collect())
    }
}

/// Exact-profit DP over profits `0..=p_max`.
fn profile_dp<M: Mass>(zero: M, weights: &[M], profits: &[u64], p_max: usize) -> Vec<Option<M>> {
    let mut dp: Vec<Option<M>> = vec![None; p_max + 1];
    dp[0] = Some(zero);
    for (w, &p) in weights.iter().zip(profits) {
        let p = p as usize;
        if p == 0 || p > p_max {
            continue;
        }
        for q in (p..=p_max).rev() {
            if let Some(base) = &dp[q - p] {
                let candidate = base.plus(w);
                match &dp[q] {
                    Some(current) if *current <= candidate => {}
                    _ => dp[q] = Some(candidate),
                }
            }
        }
    }
    dp
}

/// Lightest subset with profit at least `target` (profits saturate at `target`).
fn reach_dp<M: Mass>(zero: M, weights: &[M], profits: &[u64], target: usize) -> Option<M> {
    let mut dp: Vec<Option<M>> = vec![None; target + 1];
    dp[0] = Some(zero);
    for (w, &p) in weights.iter().zip(profits) {
        let p = p as usize;
        for q in (0..target).rev() {
            if let Some(base) = &dp[q] {
                let to = (q + p).min(target);
                let candidate = base.plus(w);
                match &dp[to] {
                    Some(current) if *current <= candidate => {}
                    _ => dp[to] = Some(candidate),
                }
            }
        }
    }
    dp[target].take()
}

/// Minimum weight achieving each exact profit in `0..=p_max`, in
/// `O(p_max · items)` time.
pub fn dp_min_weight_profile(inst: &KnapsackInstance<'_>, p_max: u64) -> ProfitProfile {
    let p_max = p_max as usize;
    let items: Vec<usize> = (0..inst.len()).collect();
    let profits: Vec<u64> = inst.profits.to_vec();
    let raw: Vec<Option<BigUint>> = with_masses(
        &inst.units,
        &items,
        |w| {
            profile_dp(0u128, &w, &profits, p_max)
                .into_iter()
                .map(|m| m.map(BigUint::from))
                .collect()
        },
        |w| profile_dp(BigUint::zero(), &w, &profits, p_max),
    );
    ProfitProfile {
        min_weight: raw
            .into_iter()
            .map(|m| match m {
                Some(units) => MinWeight::Finite(Rational::from(units) * &inst.scale),
                None => MinWeight::Unreachable,
            })
            .collect(),
    }
}

/// Maximum profit of a subset whose weight is strictly below the capacity.
pub fn max_profit_exact(inst: &KnapsackInstance<'_>) -> u64 {
    let Some(cap) = inst.strict_capacity() else {
        return 0;
    };
    let (free, items): (Vec<usize>, Vec<usize>) =
        inst.useful_items(&cap).partition(|&i| inst.units[i].is_zero());
    let free_profit: u64 = free.iter().map(|&i| inst.profits[i]).sum();
    let profits: Vec<u64> = items.iter().map(|&i| inst.profits[i]).collect();
    let p_max: u64 = profits.iter().sum();
    let best = with_masses(
        &inst.units,
        &items,
        |w| {
            let cap = cap.to_u128().unwrap_or(u128::MAX);
            best_under(profile_dp(0u128, &w, &profits, p_max as usize), &cap)
        },
        |w| best_under(profile_dp(BigUint::zero(), &w, &profits, p_max as usize), &cap),
    );
    free_profit + best
}

fn best_under<M: Ord>(profile: Vec<Option<M>>, cap: &M) -> u64 {
    profile
        .iter()
        .rposition(|m| matches!(m, Some(w) if w < cap))
        .unwrap_or(0) as u64
}

/// Whether some subset strictly under the capacity reaches profit `target`.
pub(crate) fn reaches_profit(inst: &KnapsackInstance<'_>, target: u64) -> bool {
    let Some(cap) = inst.strict_capacity() else {
        return false;
    };
    let (free, items): (Vec<usize>, Vec<usize>) =
        inst.useful_items(&cap).partition(|&i| inst.units[i].is_zero());
    let free_profit: u64 = free.iter().map(|&i| inst.profits[i]).sum();
    let Some(target) = target.checked_sub(free_profit).filter(|&t| t > 0) else {
        return true;
    };
    if items.iter().any(|&i| inst.profits[i] >= target) {
        return true;
    }
    let profits: Vec<u64> = items.iter().map(|&i| inst.profits[i]).collect();
    if profits.iter().sum::<u64>() < target {
        return false;
    }
    with_masses(
        &inst.units,
        &items,
        |w| {
            let cap = cap.to_u128().unwrap_or(u128::MAX);
            matches!(reach_dp(0u128, &w, &profits, target as usize), Some(m) if m < cap)
        },
        |w| matches!(reach_dp(BigUint::zero(), &w, &profits, target as usize), Some(m) if m < cap),
    )
}

/// Fractional (Dantzig) relaxation with the closed capacity `≤ C`; never
/// below [`max_profit_exact`].
pub fn upper_bound_profit(inst: &KnapsackInstance<'_>) -> Rational {
    if !inst.capacity.is_positive() {
        return Rational::zero();
    }
    let cap_num = inst.capacity.numer().magnitude();
    let cap_den = inst.capacity.denom().magnitude();
    let mut used = BigUint::zero();
    let mut whole: u128 = 0;
    for i in inst.greedy_order() {
        let x = &inst.units[i];
        let next = &used + x;
        if &next * cap_den <= *cap_num {
            used = next;
            whole += inst.profits[i] as u128;
        } else {
            // remaining capacity (cap_num/cap_den − used) filled fractionally
            let remaining = cap_num - &used * cap_den;
            let fraction = Rational::new(
                BigInt::from(remaining * inst.profits[i]),
                BigInt::from(cap_den * x),
            );
            return Rational::from_integer(whole) + fraction;
        }
    }
    Rational::from_integer(whole)
}

/// Profit of a feasible packing: the better of greedy packing in ratio order
/// and the best single fitting item. Never above [`max_profit_exact`].
pub fn lower_bound_profit(inst: &KnapsackInstance<'_>) -> u64 {
    let Some(cap) = inst.strict_capacity() else {
        return 0;
    };
    let mut used = BigUint::zero();
    let mut greedy = 0u64;
    let mut best_single = 0u64;
    for i in inst.greedy_order() {
        let x = &inst.units[i];
        if x < &cap {
            best_single = best_single.max(inst.profits[i]);
        }
        let next = &used + x;
        if next < cap {
            used = next;
            greedy += inst.profits[i];
        }
    }
    greedy.max(best_single)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn inst(items: &[(i64, u64)], cap: Rational) -> KnapsackInstance<'static> {
        KnapsackInstance::new(items.iter().map(|&(w, p)| (Rational::from_integer(w), p)), cap).unwrap()
    }

    /// Exhaustive enumeration used as the reference for everything below.
    fn brute(items: &[(Rational, u64)], cap: &Rational) -> (Vec<MinWeight>, u64) {
        let p_max: u64 = items.iter().map(|(_, p)| p).sum();
        let mut profile = vec![MinWeight::Unreachable; p_max as usize + 1];
        let mut best = 0;
        for mask in 0u32..(1 << items.len()) {
            let mut w = Rational::zero();
            let mut p = 0u64;
            for (i, (wi, pi)) in items.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    w = w + wi;
                    p += pi;
                }
            }
            if &w < cap {
                best = best.max(p);
            }
            let slot = &mut profile[p as usize];
            if MinWeight::Finite(w.clone()) < *slot {
                *slot = MinWeight::Finite(w);
            }
        }
        (profile, best)
    }

    #[test]
    fn profile_matches_hand_enumeration() {
        let i = inst(&[(3, 2), (2, 1), (2, 1)], q(7, 2));
        let f = |n: i64| MinWeight::Finite(Rational::from_integer(n));
        assert_eq!(dp_min_weight_profile(&i, 4).min_weight, [f(0), f(2), f(3), f(5), f(7)]);
        let empty = inst(&[], q(1, 1));
        assert_eq!(
            dp_min_weight_profile(&empty, 2).min_weight,
            [f(0), MinWeight::Unreachable, MinWeight::Unreachable]
        );
        let single = inst(&[(5, 3)], q(1, 1));
        assert_eq!(
            dp_min_weight_profile(&single, 3).min_weight,
            [f(0), MinWeight::Unreachable, MinWeight::Unreachable, f(5)]
        );
    }

    #[test]
    fn exact_examples() {
        assert_eq!(max_profit_exact(&inst(&[(3, 2), (2, 1), (2, 1)], q(7, 2))), 2);
        assert_eq!(max_profit_exact(&inst(&[(3, 2)], q(1, 1))), 0);
        assert_eq!(max_profit_exact(&inst(&[(0, 5)], q(1, 1000))), 5);
        assert_eq!(max_profit_exact(&inst(&[(0, 5)], q(0, 1))), 0);
        assert_eq!(max_profit_exact(&inst(&[(0, 5)], q(-1, 1))), 0);
    }

    #[test]
    fn capacity_is_strict() {
        let i = inst(&[(2, 1), (2, 1)], q(4, 1));
        assert_eq!(max_profit_exact(&i), 1);
        assert!(!reaches_profit(&i, 2));
        assert!(reaches_profit(&i, 1));
        assert_eq!(lower_bound_profit(&i), 1);
        // the closed relaxation may take both
        assert_eq!(upper_bound_profit(&i), q(2, 1));
    }

    #[test]
    fn bound_examples() {
        let i = inst(&[(3, 2), (2, 1), (2, 1)], q(7, 2));
        assert_eq!(upper_bound_profit(&i), q(9, 4));
        assert_eq!(lower_bound_profit(&i), 2);
        assert_eq!(upper_bound_profit(&inst(&[], q(3, 1))), Rational::zero());
        assert_eq!(lower_bound_profit(&inst(&[], q(3, 1))), 0);
        assert_eq!(upper_bound_profit(&inst(&[(1, 1), (1, 1)], q(10, 1))), q(2, 1));
        assert_eq!(lower_bound_profit(&inst(&[(1, 4), (2, 1)], q(3, 2))), 4);
    }

    #[test]
    fn zero_weight_items_are_always_packed() {
        let i = inst(&[(0, 3), (5, 1), (0, 2)], q(1, 2));
        assert_eq!(max_profit_exact(&i), 5);
        assert_eq!(lower_bound_profit(&i), 5);
        assert!(upper_bound_profit(&i) >= q(5, 1));
        assert!(reaches_profit(&i, 5));
        assert!(!reaches_profit(&i, 6));
    }

    #[test]
    fn large_weights_use_the_bigint_path() {
        let huge = Rational::from_integer(BigInt::from(1u8) << 130);
        let items = vec![(huge.clone(), 3), (huge.clone(), 2), (Rational::one(), 1)];
        let cap = &huge + &huge;
        let i = KnapsackInstance::new(items.clone(), cap.clone()).unwrap();
        let (profile, best) = brute(&items, &cap);
        assert_eq!(max_profit_exact(&i), best);
        assert_eq!(dp_min_weight_profile(&i, 6).min_weight, profile);
        assert!(reaches_profit(&i, 4));
        assert!(!reaches_profit(&i, 5));
    }

    fn items_strategy() -> impl Strategy<Value = (Vec<(Rational, u64)>, Rational)> {
        let item = (0i64..30, 1i64..4, 0u64..6).prop_map(|(n, d, p)| (Rational::new(n, d), p));
        (proptest::collection::vec(item, 0..11), 0i64..80, 1i64..4)
            .prop_map(|(items, n, d)| (items, Rational::new(n, d)))
    }

    proptest! {
        #[test]
        fn dp_matches_enumeration((items, cap) in items_strategy()) {
            let i = KnapsackInstance::new(items.clone(), cap.clone()).unwrap();
            let (profile, best) = brute(&items, &cap);
            let p_max = profile.len() as u64 - 1;
            prop_assert_eq!(dp_min_weight_profile(&i, p_max).min_weight, profile);
            prop_assert_eq!(max_profit_exact(&i), best);
            for target in 0..=p_max + 1 {
                prop_assert_eq!(reaches_profit(&i, target), cap.is_positive() && best >= target);
            }
        }

        #[test]
        fn bounds_sandwich_exact((items, cap) in items_strategy()) {
            let i = KnapsackInstance::new(items, cap).unwrap();
            let exact = max_profit_exact(&i);
            prop_assert!(lower_bound_profit(&i) <= exact);
            prop_assert!(upper_bound_profit(&i) >= Rational::from(exact));
        }
    }
}
