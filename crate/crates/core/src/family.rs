//! The one-parameter ticket family `t(s, k)`.
//!
//! For a scale `s` and shift `c`, party `i` holds `⌊s·w_i + c⌋` tickets, except
//! that parties exactly on the border (where `s·w_i + c` is an integer) keep
//! their last ticket only if they are among the first `k` border parties.
//! Party `i` gains its `m`-th ticket exactly at `s = (m − c) / w_i`, so listing
//! all such thresholds in ascending order (ties by party index) yields a total
//! order of the family in which consecutive members differ by one ticket. The
//! member with `T` tickets grants the first `T` thresholds of that list.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::distribution::WeightDistribution;
use crate::error::{Error, Result};
use crate::problem::{ProblemKind, ProblemSpec};
use crate::rational::{cmp_fractions, Rational};
use crate::tickets::TicketAssignment;

/// Shift constant `c` used by the family for `problem`.
pub fn shift_constant(problem: &ProblemSpec) -> Rational {
    match problem.kind() {
        ProblemKind::Restriction => problem.low().clone(),
        ProblemKind::Qualification => Rational::one() - problem.high(),
        ProblemKind::Separation => {
            (problem.low() + problem.high()) / Rational::from_integer(2)
        }
    }
}

/// A family member identified by its scale and the number of kept border parties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyPoint {
    pub scale: Rational,
    pub kept_border: usize,
    pub shift: Rational,
}

/// The scale at which `party` gains its `ordinal`-th ticket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TicketThreshold {
    pub value: Rational,
    pub party: usize,
    pub ordinal: u64,
}

/// Threshold `(m·b − a) / (b·x)` where `c = a/b` and `x` is the party's unit
/// weight; the common factor `b` and the unit scale are dropped for ordering.
#[derive(Clone, Debug)]
struct Pending {
    numer: BigUint,
    unit: BigUint,
    party: usize,
    ordinal: u64,
}

impl Pending {
    fn same_value(&self, other: &Pending) -> bool {
        cmp_fractions(&self.numer, &self.unit, &other.numer, &other.unit) == Ordering::Equal
    }
}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_fractions(&self.numer, &self.unit, &other.numer, &other.unit)
            .then(self.party.cmp(&other.party))
    }
}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Pending {}

/// Lazily materialized total order of the family for one distribution and shift.
pub struct TicketFamily<'a> {
    dist: &'a WeightDistribution,
    shift: Rational,
    shift_step: BigUint,
    granted: Vec<Pending>,
    heap: BinaryHeap<Reverse<Pending>>,
}

impl<'a> TicketFamily<'a> {
    /// `shift` must lie strictly between 0 and 1.
    pub fn new(dist: &'a WeightDistribution, shift: Rational) -> Result<Self> {
        if !shift.is_positive() || shift >= Rational::one() {
            return Err(Error::InvalidProblem(format!(
                "shift constant {shift} must lie in (0, 1)"
            )));
        }
        let step = shift.denom().magnitude().clone();
        let first = &step - shift.numer().magnitude();
        let heap = dist
            .units()
            .iter()
            .enumerate()
            .filter(|(_, unit)| !unit.is_zero())
            .map(|(party, unit)| {
                Reverse(Pending {
                    numer: first.clone(),
                    unit: unit.clone(),
                    party,
                    ordinal: 1,
                })
            })
            .collect();
        Ok(TicketFamily {
            dist,
            shift,
            shift_step: step,
            granted: Vec::new(),
            heap,
        })
    }

    pub fn shift(&self) -> &Rational {
        &self.shift
    }

    pub fn distribution(&self) -> &WeightDistribution {
        self.dist
    }

    fn ensure(&mut self, count: u64) {
        while (self.granted.len() as u64) < count {
            let Reverse(next) = self
                .heap
                .pop()
                .expect("a distribution with positive total weight has unbounded thresholds");
            let mut following = next.clone();
            following.numer += &self.shift_step;
            following.ordinal += 1;
            self.heap.push(Reverse(following));
            self.granted.push(next);
        }
    }

    /// The `rank`-th smallest threshold (1-based).
    pub fn threshold(&mut self, rank: u64) -> TicketThreshold {
        assert!(rank >= 1, "threshold ranks start at 1");
        self.ensure(rank);
        let p = &self.granted[(rank - 1) as usize];
        let value = (Rational::from(p.ordinal) - &self.shift) / self.dist.weight(p.party);
        TicketThreshold {
            value,
            party: p.party,
            ordinal: p.ordinal,
        }
    }

    /// The family member holding exactly `total` tickets.
    pub fn assignment_with_total(&mut self, total: u64) -> TicketAssignment {
        self.ensure(total);
        let mut tickets = vec![0u64; self.dist.len()];
        for p in &self.granted[..total as usize] {
            tickets[p.party] += 1;
        }
        TicketAssignment::from_counts(tickets, total)
    }

    /// `(s, k)` coordinates of the member with `total` tickets.
    pub fn point(&mut self, total: u64) -> FamilyPoint {
        if total == 0 {
            return FamilyPoint {
                scale: Rational::zero(),
                kept_border: 0,
                shift: self.shift.clone(),
            };
        }
        self.ensure(total);
        let last = &self.granted[(total - 1) as usize];
        let kept_border = self.granted[..total as usize]
            .iter()
            .rev()
            .take_while(|p| p.same_value(last))
            .count();
        FamilyPoint {
            scale: self.threshold(total).value,
            kept_border,
            shift: self.shift.clone(),
        }
    }
}

/// The family member with exactly `total` tickets for shift `shift`.
pub fn assignment_with_total(
    dist: &WeightDistribution,
    shift: &Rational,
    total: u64,
) -> Result<TicketAssignment> {
    Ok(TicketFamily::new(dist, shift.clone())?.assignment_with_total(total))
}

/// The family member with one ticket fewer than `assignment`.
///
/// Fails with [`Error::NotInFamily`] if `assignment` is not the family member
/// with its own total.
pub fn predecessor(
    dist: &WeightDistribution,
    shift: &Rational,
    assignment: &TicketAssignment,
) -> Result<TicketAssignment> {
    if assignment.len() != dist.len() {
        return Err(Error::LengthMismatch {
            expected: dist.len(),
            found: assignment.len(),
        });
    }
    let total = assignment.total();
    if total == 0 {
        return Err(Error::NoPredecessor);
    }
    let mut family = TicketFamily::new(dist, shift.clone())?;
    if &family.assignment_with_total(total) != assignment {
        return Err(Error::NotInFamily);
    }
    Ok(family.assignment_with_total(total - 1))
}
