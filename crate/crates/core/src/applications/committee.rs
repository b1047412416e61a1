use std::ops::Range;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tickets::TicketAssignment;

/// Virtual users `0..T`, party `i` controlling a contiguous block of `t_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VirtualCommittee {
    assignment: TicketAssignment,
    slots: Vec<Range<u64>>,
}

/// Maps tickets to virtual users by prefix sums, in party order.
pub fn virtual_committee(t: &TicketAssignment) -> Result<VirtualCommittee> {
    if t.total() == 0 {
        return Err(Error::EmptyCommittee);
    }
    let mut next = 0;
    let slots = t
        .as_slice()
        .iter()
        .map(|&count| {
            let range = next..next + count;
            next += count;
            range
        })
        .collect();
    Ok(VirtualCommittee {
        assignment: t.clone(),
        slots,
    })
}

impl VirtualCommittee {
    /// Number of virtual users `T`.
    pub fn size(&self) -> u64 {
        self.assignment.total()
    }

    pub fn assignment(&self) -> &TicketAssignment {
        &self.assignment
    }

    pub fn slots(&self) -> &[Range<u64>] {
        &self.slots
    }

    pub fn slot(&self, party: usize) -> Range<u64> {
        self.slots[party].clone()
    }

    /// Party controlling virtual user `index`.
    pub fn owner(&self, index: u64) -> Option<usize> {
        if index >= self.size() {
            return None;
        }
        Some(self.slots.partition_point(|r| r.end <= index))
    }

    /// Virtual users controlled by a set of parties.
    pub fn coalition_size(&self, parties: impl IntoIterator<Item = usize>) -> u64 {
        parties.into_iter().map(|i| self.assignment.get(i)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn committee(t: &[u64]) -> VirtualCommittee {
        virtual_committee(&TicketAssignment::new(t.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn prefix_sum_slots() {
        assert_eq!(committee(&[2, 0, 1]).slots(), &[0..2, 2..2, 2..3]);
        assert_eq!(committee(&[1]).slots(), &[std::ops::Range { start: 0, end: 1 }]);
        let c = committee(&[1, 1, 1, 0]);
        assert_eq!(c.slots(), &[0..1, 1..2, 2..3, 3..3]);
        assert_eq!((0..3).map(|j| c.owner(j).unwrap()).collect::<Vec<_>>(), [0, 1, 2]);
        assert_eq!(c.owner(3), None);
    }

    #[test]
    fn owners_skip_empty_parties() {
        let c = committee(&[0, 2, 0, 3]);
        let owners: Vec<_> = (0..5).map(|j| c.owner(j).unwrap()).collect();
        assert_eq!(owners, [1, 1, 3, 3, 3]);
        assert_eq!(c.coalition_size([0, 3]), 3);
    }

    #[test]
    fn empty_assignment_is_rejected() {
        let zero = TicketAssignment::zeros(3);
        assert_eq!(virtual_committee(&zero).unwrap_err(), Error::EmptyCommittee);
    }
}
