//! Erasure and error-correction code parameters for a WQ ticket assignment.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::problem::ProblemSpec;
use crate::rational::Rational;
use crate::solver::ticket_bound;

/// `(⌈βn·T⌉, T)` erasure coding over the tickets of a WQ(βw, βn) solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErasureParams {
    pub beta_w: Rational,
    pub beta_n: Rational,
    /// Total tickets `T`.
    pub total: u64,
    /// Fragments needed to reconstruct, `⌈βn·T⌉`.
    pub k: u64,
    /// Fragments produced, one per ticket.
    pub m: u64,
    /// Code rate `βn`.
    pub rate: Rational,
    /// Worst-case tickets per party, `βw(1−βw)/(βw−βn)`.
    pub ticket_factor: Rational,
    /// Rate loss against a nominal code of rate `βw`: `βw/βn`.
    pub comm_overhead: Rational,
    /// Decoding slow-down, `comm_overhead · ticket_factor`.
    pub comp_overhead: Rational,
}

impl ErasureParams {
    /// Worst-case fragment count for `n` parties.
    pub fn worst_case_fragments(&self, n: usize) -> Result<u64> {
        ticket_bound(&ProblemSpec::qualification(self.beta_w.clone(), self.beta_n.clone())?, n)
    }
}

pub fn erasure_params(beta_w: Rational, beta_n: Rational, total: u64) -> Result<ErasureParams> {
    ProblemSpec::qualification(beta_w.clone(), beta_n.clone())?;
    if total == 0 {
        return Err(Error::InvalidProblem("erasure coding needs at least one ticket".into()));
    }
    let k = (&beta_n * &Rational::from(total)).ceil().to_u64().expect("at most T");
    let ticket_factor = qualification_factor(&beta_w, &beta_n);
    let comm_overhead = &beta_w / &beta_n;
    Ok(ErasureParams {
        k,
        m: total,
        total,
        rate: beta_n.clone(),
        comp_overhead: &comm_overhead * &ticket_factor,
        comm_overhead,
        ticket_factor,
        beta_w,
        beta_n,
    })
}

fn qualification_factor(beta_w: &Rational, beta_n: &Rational) -> Rational {
    beta_w * &(Rational::one() - beta_w) / &(beta_w - beta_n)
}

/// WQ thresholds that let honest parties out-vote corrupted fragments with
/// an error-correcting code of rate `r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrorCorrectionParams {
    pub rate: Rational,
    /// Weight held by honest parties, `2/3`.
    pub beta_w: Rational,
    /// `r/2 + 1/2`, so that `βn = r + (1 − βn)`.
    pub beta_n: Rational,
    /// Rate of the nominal protocol, `1/3`.
    pub nominal_rate: Rational,
    /// Worst-case tickets per party, `βw(1−βw)/(βw−βn)`.
    pub ticket_factor: Rational,
    /// `nominal_rate / rate`.
    pub comm_overhead: Rational,
    /// `comm_overhead · ticket_factor`.
    pub comp_overhead: Rational,
}

pub fn error_correction_params(rate: Rational) -> Result<ErrorCorrectionParams> {
    let third = Rational::new(1, 3);
    if !rate.is_positive() || rate >= third {
        return Err(Error::InvalidProblem(format!("code rate {rate} must lie in (0, 1/3)")));
    }
    let half = Rational::new(1, 2);
    let beta_n = &(&rate * &half) + &half;
    let beta_w = Rational::new(2, 3);
    let ticket_factor = qualification_factor(&beta_w, &beta_n);
    let comm_overhead = &third / &rate;
    Ok(ErrorCorrectionParams {
        comp_overhead: &comm_overhead * &ticket_factor,
        comm_overhead,
        ticket_factor,
        nominal_rate: third,
        beta_w,
        beta_n,
        rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn erasure_overheads() {
        let low = erasure_params(q(1, 3), q(1, 4), 10).unwrap();
        assert_eq!(low.ticket_factor, q(8, 3));
        assert_eq!(low.comm_overhead, q(4, 3));
        assert_eq!(low.comp_overhead, q(32, 9));
        assert_eq!(low.comp_overhead.to_decimal_string(2), "3.56");
        assert_eq!(low.worst_case_fragments(3).unwrap(), 8);
        let high = erasure_params(q(2, 3), q(1, 2), 10).unwrap();
        assert_eq!(high.comp_overhead, q(16, 9));
        assert_eq!(high.comp_overhead.to_decimal_string(2), "1.78");
    }

    #[test]
    fn erasure_counts() {
        let p = erasure_params(q(1, 2), q(1, 4), 8).unwrap();
        assert_eq!((p.k, p.m), (2, 8));
        assert_eq!(erasure_params(q(1, 2), q(1, 3), 7).unwrap().k, 3);
        assert!(erasure_params(q(1, 4), q(1, 3), 8).is_err());
        assert!(erasure_params(q(1, 2), q(1, 3), 0).is_err());
    }

    #[test]
    fn error_correction_examples() {
        let p = error_correction_params(q(1, 4)).unwrap();
        assert_eq!(p.beta_n, q(5, 8));
        assert_eq!(p.ticket_factor, q(16, 3));
        assert_eq!(p.comp_overhead, q(64, 9));
        assert_eq!(p.comp_overhead.to_decimal_string(2), "7.11");
        assert_eq!(error_correction_params(q(1, 5)).unwrap().beta_n, q(3, 5));
        assert!(error_correction_params(q(1, 3)).is_err());
        assert!(error_correction_params(q(0, 1)).is_err());
    }

    #[test]
    fn error_correction_is_tight() {
        for d in 4..40 {
            for n in 1..d {
                let r = q(n, 3 * d);
                let p = error_correction_params(r.clone()).unwrap();
                assert_eq!(p.beta_n, &r + &(Rational::one() - &p.beta_n));
            }
        }
    }
}
