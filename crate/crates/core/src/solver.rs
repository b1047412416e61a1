//! Ticket bounds, validity checks, and the local-minimum search over the
//! ticket family.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::distribution::WeightDistribution;
use crate::error::{Error, Result};
use crate::family::{self, shift_constant, TicketFamily};
use crate::knapsack::{self, KnapsackInstance};
use crate::problem::{ProblemKind, ProblemSpec, Verdict};
use crate::rational::Rational;
use crate::tickets::TicketAssignment;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMode {
    /// Quick checks with an exact fallback; the result is a local minimum.
    Full,
    /// Conservative quick check only; valid but possibly above a local minimum.
    Linear,
}

impl SolveMode {
    pub fn name(self) -> &'static str {
        match self {
            SolveMode::Full => "full",
            SolveMode::Linear => "linear",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    /// Parties holding at least one ticket.
    pub holders: usize,
    pub max_tickets: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    pub assignment: TicketAssignment,
    pub total: u64,
    /// Closed-form ticket bound for the problem and party count.
    pub bound: u64,
    pub mode: SolveMode,
    pub locally_minimal: bool,
    pub stats: SolveStats,
}

/// Closed-form upper bound on the tickets needed for `n` parties.
///
/// * WR: `⌈αw(1−αw)/(αn−αw) · n⌉`
/// * WQ: `⌈βw(1−βw)/(βw−βn) · n⌉`
/// * WS: `⌈(α+β)(1−α)/(β−α) · n⌉`
pub fn ticket_bound(problem: &ProblemSpec, n: usize) -> Result<u64> {
    let (low, high) = (problem.low(), problem.high());
    let one = Rational::one();
    let gap = high - low;
    let factor = match problem.kind() {
        ProblemKind::Restriction => low * &(&one - low) / &gap,
        ProblemKind::Qualification => high * &(&one - high) / &gap,
        ProblemKind::Separation => &(low + high) * &(&one - low) / &gap,
    };
    let bound = (factor * &Rational::from(n as u64)).ceil();
    bound.to_u64().ok_or_else(|| Error::BoundOverflow(bound.to_string()))
}

/// Rewrites WQ(βw, βn) as the identical WR(1−βw, 1−βn); other kinds pass through.
pub fn normalize(problem: &ProblemSpec) -> ProblemSpec {
    match problem.kind() {
        ProblemKind::Qualification => {
            let one = Rational::one();
            ProblemSpec::restriction(&one - problem.high(), &one - problem.low())
                .expect("complement of a valid WQ is a valid WR")
        }
        _ => problem.clone(),
    }
}

/// Knapsack instances whose profits are ticket counts.
struct Checker<'a> {
    units: &'a [BigUint],
    tickets: &'a [u64],
    unit_total: Rational,
    total: u64,
}

impl<'a> Checker<'a> {
    fn new(dist: &'a WeightDistribution, t: &'a TicketAssignment) -> Result<Self> {
        if t.len() != dist.len() {
            return Err(Error::LengthMismatch {
                expected: dist.len(),
                found: t.len(),
            });
        }
        Ok(Checker {
            units: dist.units(),
            tickets: t.as_slice(),
            unit_total: Rational::from(dist.unit_total().clone()),
            total: t.total(),
        })
    }

    /// Items whose combined weight stays strictly below `fraction · W`.
    fn instance(&self, fraction: &Rational) -> KnapsackInstance<'a> {
        KnapsackInstance::from_units(self.units, self.tickets, fraction * &self.unit_total)
    }

    /// Smallest ticket count a light coalition may not reach: `⌈αn·T⌉`.
    fn violation_threshold(&self, alpha_n: &Rational) -> u64 {
        (alpha_n * &Rational::from(self.total))
            .ceil()
            .to_u64()
            .expect("at most T")
    }
}

/// Exact validity of an arbitrary assignment.
pub fn validate(problem: &ProblemSpec, dist: &WeightDistribution, t: &TicketAssignment) -> Result<bool> {
    let checker = Checker::new(dist, t)?;
    if checker.total == 0 {
        return Ok(false);
    }
    let problem = normalize(problem);
    Ok(exact_valid(&problem, &checker))
}

fn exact_valid(problem: &ProblemSpec, checker: &Checker<'_>) -> bool {
    match problem.kind() {
        ProblemKind::Separation => {
            let light = knapsack::max_profit_exact(&checker.instance(problem.low()));
            let complement = Rational::one() - problem.high();
            let heavy_complement = knapsack::max_profit_exact(&checker.instance(&complement));
            light + heavy_complement < checker.total
        }
        _ => {
            let p_min = checker.violation_threshold(problem.high());
            !knapsack::reaches_profit(&checker.instance(problem.low()), p_min)
        }
    }
}

/// Fast three-valued check: `Valid` and `Invalid` are always correct,
/// `Uncertain` means the bounds could not decide.
pub fn quick_validate(
    problem: &ProblemSpec,
    dist: &WeightDistribution,
    t: &TicketAssignment,
) -> Result<Verdict> {
    let checker = Checker::new(dist, t)?;
    if checker.total == 0 {
        return Ok(Verdict::Invalid);
    }
    let problem = normalize(problem);
    Ok(quick_verdict(&problem, &checker, true))
}

fn quick_verdict(problem: &ProblemSpec, checker: &Checker<'_>, liberal: bool) -> Verdict {
    match problem.kind() {
        ProblemKind::Separation => {
            let light = checker.instance(problem.low());
            let heavy_complement = checker.instance(&(Rational::one() - problem.high()));
            let upper = knapsack::upper_bound_profit(&light)
                + knapsack::upper_bound_profit(&heavy_complement);
            if upper < Rational::from(checker.total) {
                return Verdict::Valid;
            }
            if liberal
                && knapsack::lower_bound_profit(&light) + knapsack::lower_bound_profit(&heavy_complement)
                    >= checker.total
            {
                return Verdict::Invalid;
            }
            Verdict::Uncertain
        }
        _ => {
            let light = checker.instance(problem.low());
            let p_min = checker.violation_threshold(problem.high());
            if knapsack::upper_bound_profit(&light) < Rational::from(p_min) {
                return Verdict::Valid;
            }
            if liberal && knapsack::lower_bound_profit(&light) >= p_min {
                return Verdict::Invalid;
            }
            Verdict::Uncertain
        }
    }
}

/// Binary search over the ticket family for a valid member.
///
/// The bracket starts at `lo = 0` (never valid) and `hi = ticket_bound` and
/// shrinks until `hi = lo + 1`. For WS the member at the bound is checked
/// exactly first; when it fails, the smallest valid member below the bound
/// is found by a linear scan, and only when none exists does the search go
/// above it.
pub fn solve(problem: &ProblemSpec, dist: &WeightDistribution, mode: SolveMode) -> Result<SolveReport> {
    let bound = ticket_bound(problem, dist.len())?;
    let normalized = normalize(problem);
    let mut family = TicketFamily::new(dist, shift_constant(problem))?;
    let mut exact_checks = 0usize;
    let mut check = |family: &mut TicketFamily, total: u64, mode: SolveMode| -> Result<bool> {
        let candidate = family.assignment_with_total(total);
        let checker = Checker::new(dist, &candidate)?;
        let valid = match (mode, quick_verdict(&normalized, &checker, mode == SolveMode::Full)) {
            (_, Verdict::Valid) => true,
            (_, Verdict::Invalid) | (SolveMode::Linear, Verdict::Uncertain) => false,
            (SolveMode::Full, Verdict::Uncertain) => {
                exact_checks += 1;
                exact_valid(&normalized, &checker)
            }
        };
        log::trace!("T={total}: {}", if valid { "valid" } else { "invalid" });
        Ok(valid)
    };
    let top = bound.max(1);
    // Restriction members at or above the bound are valid by construction.
    // Separation validity is not monotone in T and the member at the bound
    // can fail, so it and any replacement are checked exactly in both modes.
    let (mut lo, mut hi) = (0u64, top);
    if normalized.kind() == ProblemKind::Separation && !check(&mut family, top, SolveMode::Full)? {
        let mut found = None;
        for t in 1..top {
            if check(&mut family, t, SolveMode::Full)? {
                found = Some(t);
                break;
            }
        }
        match found {
            Some(t) => (lo, hi) = (t - 1, t),
            None => {
                log::warn!("{problem}: no family member within the bound {bound} is valid in {} mode", mode.name());
                (lo, hi) = (top, top);
                while !check(&mut family, hi, SolveMode::Full)? {
                    lo = hi;
                    hi = hi.checked_mul(2).ok_or_else(|| Error::BoundOverflow(format!("{hi}·2")))?;
                }
            }
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if check(&mut family, mid, mode)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    log::debug!("{problem} n={} mode={}: T={hi} bound={bound} exact checks={exact_checks}", dist.len(), mode.name());
    let assignment = family.assignment_with_total(hi);
    Ok(SolveReport {
        total: assignment.total(),
        bound,
        mode,
        locally_minimal: mode == SolveMode::Full,
        stats: SolveStats {
            holders: assignment.holders(),
            max_tickets: assignment.max_tickets(),
        },
        assignment,
    })
}

/// True when the family predecessor of the reported assignment is exactly
/// invalid; assignments with a single ticket qualify trivially.
pub fn certify_local_minimum(
    problem: &ProblemSpec,
    dist: &WeightDistribution,
    report: &SolveReport,
) -> Result<bool> {
    if report.assignment.total() <= 1 {
        return Ok(report.assignment.total() == 1);
    }
    let previous = family::predecessor(dist, &shift_constant(problem), &report.assignment)?;
    Ok(!validate(problem, dist, &previous)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn tickets(t: &[u64]) -> TicketAssignment {
        TicketAssignment::new(t.to_vec()).unwrap()
    }

    fn equal4() -> WeightDistribution {
        WeightDistribution::from_integers([1u64, 1, 1, 1]).unwrap()
    }

    #[test]
    fn bound_examples() {
        let wr = ProblemSpec::restriction(q(1, 3), q(1, 2)).unwrap();
        let wq = ProblemSpec::qualification(q(2, 3), q(1, 2)).unwrap();
        let ws = ProblemSpec::separation(q(1, 3), q(1, 2)).unwrap();
        assert_eq!(ticket_bound(&wr, 100).unwrap(), 134);
        assert_eq!(ticket_bound(&wq, 100).unwrap(), 134);
        assert_eq!(ticket_bound(&ws, 60).unwrap(), 200);
    }

    #[test]
    fn separation_member_at_the_bound_can_be_invalid() {
        let weights = [
            "250000/49", "3000000/289", "15625/4", "40000/3", "1000000/49", "250000/3", "2000000/81", "187500",
            "10000", "2000000", "3000000/121", "3000000/169", "750000", "46875", "62500/3", "120000", "1000000/9",
        ];
        let dist = WeightDistribution::new(
            weights
                .iter()
                .enumerate()
                .map(|(i, w)| (format!("p{i}"), w.parse::<Rational>().unwrap())),
        )
        .unwrap();
        let ws = ProblemSpec::separation(q(5, 6), q(11, 12)).unwrap();
        let bound = ticket_bound(&ws, dist.len()).unwrap();
        assert_eq!(bound, 60);
        let at_bound = family::assignment_with_total(&dist, &shift_constant(&ws), bound).unwrap();
        assert!(!validate(&ws, &dist, &at_bound).unwrap());
        for mode in [SolveMode::Full, SolveMode::Linear] {
            let report = solve(&ws, &dist, mode).unwrap();
            assert!(validate(&ws, &dist, &report.assignment).unwrap(), "{mode:?}");
            assert!(report.total <= bound, "{mode:?}");
        }
        let full = solve(&ws, &dist, SolveMode::Full).unwrap();
        assert_eq!(full.total, 18);
        assert!(certify_local_minimum(&ws, &dist, &full).unwrap());
    }

    #[test]
    fn normalize_examples() {
        let wq = ProblemSpec::qualification(q(3, 4), q(2, 3)).unwrap();
        assert_eq!(normalize(&wq), ProblemSpec::restriction(q(1, 4), q(1, 3)).unwrap());
        let wr = ProblemSpec::restriction(q(1, 4), q(1, 3)).unwrap();
        assert_eq!(normalize(&wr), wr);
        let wq = ProblemSpec::qualification(q(2, 3), q(1, 2)).unwrap();
        assert_eq!(normalize(&wq), ProblemSpec::restriction(q(1, 3), q(1, 2)).unwrap());
    }

    #[test]
    fn validate_examples() {
        let wr = ProblemSpec::restriction(q(1, 3), q(1, 2)).unwrap();
        assert!(validate(&wr, &equal4(), &tickets(&[1, 1, 1, 0])).unwrap());
        assert!(!validate(&wr, &equal4(), &tickets(&[1, 1, 0, 0])).unwrap());
        assert!(!validate(&wr, &equal4(), &tickets(&[0, 0, 0, 0])).unwrap());
        assert_eq!(quick_validate(&wr, &equal4(), &tickets(&[0, 0, 0, 0])).unwrap(), Verdict::Invalid);
        assert!(matches!(
            validate(&wr, &equal4(), &tickets(&[1, 1])),
            Err(Error::LengthMismatch { expected: 4, found: 2 })
        ));
    }

    #[test]
    fn quick_examples() {
        let wr = ProblemSpec::restriction(q(1, 10), q(1, 2)).unwrap();
        // every light set is a single small party; bound is far below αn·T
        let dist = WeightDistribution::from_integers([5u64, 5, 5, 5, 1]).unwrap();
        let t = tickets(&[3, 3, 3, 3, 0]);
        assert_eq!(quick_validate(&wr, &dist, &t).unwrap(), Verdict::Valid);
        assert!(validate(&wr, &dist, &t).unwrap());
        // the light party holds most tickets
        let t = tickets(&[1, 1, 1, 1, 9]);
        assert_eq!(quick_validate(&wr, &dist, &t).unwrap(), Verdict::Invalid);
        assert!(!validate(&wr, &dist, &t).unwrap());
    }

    #[test]
    fn solve_fixed_points() {
        let wr = ProblemSpec::restriction(q(1, 3), q(1, 2)).unwrap();
        for mode in [SolveMode::Full, SolveMode::Linear] {
            let single = WeightDistribution::from_integers([7u64]).unwrap();
            let report = solve(&wr, &single, mode).unwrap();
            assert_eq!(report.assignment.as_slice(), &[1]);
        }
        let report = solve(&wr, &equal4(), SolveMode::Full).unwrap();
        assert_eq!(report.assignment.as_slice(), &[1, 1, 1, 0]);
        assert_eq!(report.total, 3);
        assert!(report.locally_minimal);
        assert_eq!(report.stats, SolveStats { holders: 3, max_tickets: 1 });
        assert!(certify_local_minimum(&wr, &equal4(), &report).unwrap());
    }

    #[test]
    fn separation_uses_both_instances() {
        let ws = ProblemSpec::separation(q(1, 3), q(1, 2)).unwrap();
        // light sets: singletons; heavy sets: three or more parties
        assert!(validate(&ws, &equal4(), &tickets(&[1, 1, 1, 1])).unwrap());
        assert!(!validate(&ws, &equal4(), &tickets(&[2, 1, 0, 0])).unwrap());
        let report = solve(&ws, &equal4(), SolveMode::Full).unwrap();
        assert!(validate(&ws, &equal4(), &report.assignment).unwrap());
        assert!(report.total <= report.bound);
    }

    fn weights() -> impl Strategy<Value = Vec<u64>> {
        proptest::collection::vec(prop_oneof![Just(0u64), 1u64..50, 1u64..5000], 1..25)
            .prop_filter("positive total", |w| w.iter().any(|&x| x > 0))
    }

    fn spec() -> impl Strategy<Value = ProblemSpec> {
        (1i64..20, 1i64..20, 0usize..3).prop_filter_map("ordered", |(a, b, k)| {
            let (low, high) = (q(a.min(b), 20), q(a.max(b), 20));
            match k {
                0 => ProblemSpec::restriction(low, high).ok(),
                1 => ProblemSpec::qualification(high, low).ok(),
                _ => ProblemSpec::separation(low, high).ok(),
            }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn solve_is_valid_bounded_and_ordered(w in weights(), problem in spec()) {
            let dist = WeightDistribution::from_integers(w).unwrap();
            let full = solve(&problem, &dist, SolveMode::Full).unwrap();
            let linear = solve(&problem, &dist, SolveMode::Linear).unwrap();
            prop_assert!(full.total <= full.bound);
            prop_assert!(linear.total <= linear.bound);
            prop_assert!(linear.total >= full.total);
            prop_assert!(validate(&problem, &dist, &full.assignment).unwrap());
            prop_assert!(validate(&problem, &dist, &linear.assignment).unwrap());
            prop_assert!(certify_local_minimum(&problem, &dist, &full).unwrap());
        }

        #[test]
        fn quick_never_contradicts_exact(w in weights(), problem in spec(), seed in 0u64..1000) {
            let dist = WeightDistribution::from_integers(w).unwrap();
            let t: Vec<u64> = (0..dist.len() as u64).map(|i| (seed.wrapping_mul(31) + i * 7) % 5).collect();
            let t = tickets(&t);
            let exact = validate(&problem, &dist, &t).unwrap();
            match quick_validate(&problem, &dist, &t).unwrap() {
                Verdict::Valid => prop_assert!(exact),
                Verdict::Invalid => prop_assert!(!exact),
                Verdict::Uncertain => {}
            }
        }
    }
}
