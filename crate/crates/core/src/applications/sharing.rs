//! Shamir sharing over virtual users: party `i` holds the shares of its
//! `t_i` slots, and any `⌈αn·T⌉` shares reconstruct.
//!
//! Information-theoretic only, over a prime field below 2^64.

use num_traits::ToPrimitive;
use rand::Rng;
use serde::Serialize;

use crate::applications::committee::VirtualCommittee;
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BluntSharingParams {
    alpha_n: Rational,
    total: u64,
    threshold: u64,
    modulus: u64,
}

impl BluntSharingParams {
    /// `alpha_n ∈ (0, 1/2]`, `total ≥ 1`, and a prime `modulus > total`.
    pub fn new(alpha_n: Rational, total: u64, modulus: u64) -> Result<Self> {
        if !alpha_n.is_positive() || alpha_n > Rational::new(1, 2) {
            return Err(Error::Sharing(format!("alpha_n={alpha_n} must lie in (0, 1/2]")));
        }
        if total == 0 {
            return Err(Error::Sharing("at least one share is required".into()));
        }
        if !primal_check::miller_rabin(modulus) {
            return Err(Error::Sharing(format!("modulus {modulus} is not prime")));
        }
        if modulus <= total {
            return Err(Error::Sharing(format!(
                "modulus {modulus} must exceed the share count {total}"
            )));
        }
        let threshold = (&alpha_n * &Rational::from(total))
            .ceil()
            .to_u64()
            .expect("at most T");
        Ok(BluntSharingParams {
            alpha_n,
            total,
            threshold,
            modulus,
        })
    }

    pub fn alpha_n(&self) -> &Rational {
        &self.alpha_n
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Shares needed to reconstruct, `⌈αn·T⌉`.
    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

/// Share of virtual user `index`, the polynomial evaluated at `index + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Share {
    pub index: u64,
    pub value: u64,
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    add_mod(a, p - b % p, p)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2)
    let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Evaluates `coeffs[0] + coeffs[1]·x + …` modulo `p`.
fn eval_poly(coeffs: &[u64], x: u64, p: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, x, p), c, p))
}

/// Shares for every virtual user, ordered by index; party `i` owns
/// `shares[committee.slot(i)]`.
pub fn deal_blunt_secret<R: Rng + ?Sized>(
    secret: u64,
    params: &BluntSharingParams,
    committee: &VirtualCommittee,
    rng: &mut R,
) -> Result<Vec<Share>> {
    let p = params.modulus;
    if secret >= p {
        return Err(Error::Sharing(format!("secret {secret} is outside the field of size {p}")));
    }
    if committee.size() != params.total {
        return Err(Error::Sharing(format!(
            "committee has {} virtual users but the parameters expect {}",
            committee.size(),
            params.total
        )));
    }
    let mut coeffs = Vec::with_capacity(params.threshold as usize);
    coeffs.push(secret);
    coeffs.extend((1..params.threshold).map(|_| rng.gen_range(0..p)));
    Ok((0..params.total)
        .map(|index| Share {
            index,
            value: eval_poly(&coeffs, index + 1, p),
        })
        .collect())
}

/// Lagrange interpolation at zero through the first `threshold` shares.
pub fn reconstruct_secret(shares: &[Share], params: &BluntSharingParams) -> Result<u64> {
    let mut seen = std::collections::HashSet::new();
    if let Some(dup) = shares.iter().find(|s| !seen.insert(s.index)) {
        return Err(Error::Sharing(format!("share index {} appears twice", dup.index)));
    }
    if let Some(bad) = shares.iter().find(|s| s.index >= params.total || s.value >= params.modulus) {
        return Err(Error::Sharing(format!("share {} is out of range", bad.index)));
    }
    let needed = params.threshold as usize;
    if shares.len() < needed {
        return Err(Error::Sharing(format!(
            "{} shares cannot reconstruct, {needed} are required",
            shares.len()
        )));
    }
    let p = params.modulus;
    let points = &shares[..needed];
    let mut secret = 0;
    for (j, sj) in points.iter().enumerate() {
        let xj = sj.index + 1;
        let (mut num, mut den) = (1u64, 1u64);
        for (m, sm) in points.iter().enumerate() {
            if m != j {
                let xm = sm.index + 1;
                num = mul_mod(num, xm, p);
                den = mul_mod(den, sub_mod(xm, xj, p), p);
            }
        }
        let basis = mul_mod(num, inv_mod(den, p), p);
        secret = add_mod(secret, mul_mod(sj.value, basis, p), p);
    }
    Ok(secret)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::applications::committee::virtual_committee;
    use crate::tickets::TicketAssignment;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn setup(t: &[u64], alpha_n: Rational, prime: u64) -> (BluntSharingParams, VirtualCommittee) {
        let t = TicketAssignment::new(t.to_vec()).unwrap();
        let params = BluntSharingParams::new(alpha_n, t.total(), prime).unwrap();
        (params, virtual_committee(&t).unwrap())
    }

    #[test]
    fn any_two_of_four_reconstruct() {
        let (params, committee) = setup(&[1, 1, 1, 1], q(1, 2), 7919);
        assert_eq!(params.threshold(), 2);
        let shares = deal_blunt_secret(42, &params, &committee, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                if a != b {
                    assert_eq!(reconstruct_secret(&[shares[a], shares[b]], &params).unwrap(), 42);
                }
            }
            assert!(reconstruct_secret(&[shares[a]], &params).is_err());
        }
        assert!(reconstruct_secret(&[shares[0], shares[0]], &params).is_err());
    }

    #[test]
    fn threshold_one_shares_equal_the_secret() {
        let (params, committee) = setup(&[1], q(1, 3), 101);
        assert_eq!(params.threshold(), 1);
        let shares = deal_blunt_secret(9, &params, &committee, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert!(shares.iter().all(|s| s.value == 9));
        assert_eq!(reconstruct_secret(&shares, &params).unwrap(), 9);
    }

    #[test]
    fn parameter_errors() {
        assert!(BluntSharingParams::new(q(1, 2), 4, 7918).is_err());
        assert!(BluntSharingParams::new(q(1, 2), 7, 7).is_err());
        assert!(BluntSharingParams::new(q(2, 3), 4, 7919).is_err());
        assert!(BluntSharingParams::new(q(1, 2), 0, 7919).is_err());
        let (params, committee) = setup(&[1, 1], q(1, 2), 11);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(deal_blunt_secret(11, &params, &committee, &mut rng).is_err());
        let other = virtual_committee(&TicketAssignment::new(vec![3]).unwrap()).unwrap();
        assert!(deal_blunt_secret(1, &params, &other, &mut rng).is_err());
    }

    #[test]
    fn sub_threshold_shares_hide_the_secret() {
        // every secret is consistent with some polynomial through t-1 shares
        let p = 101;
        for threshold in 2..=3u64 {
            let total = 2 * threshold;
            let params = BluntSharingParams::new(q(1, 2), total, p).unwrap();
            assert_eq!(params.threshold(), threshold);
            let committee = virtual_committee(&TicketAssignment::new(vec![1; total as usize]).unwrap()).unwrap();
            let shares = deal_blunt_secret(17, &params, &committee, &mut ChaCha8Rng::seed_from_u64(threshold)).unwrap();
            let known = &shares[..threshold as usize - 1];
            let free = threshold as u32 - 1;
            for secret in 0..p {
                let consistent = (0..p.pow(free)).any(|code| {
                    let mut coeffs = vec![secret];
                    coeffs.extend((0..free).map(|d| code / p.pow(d) % p));
                    known.iter().all(|s| eval_poly(&coeffs, s.index + 1, p) == s.value)
                });
                assert!(consistent, "secret {secret} excluded by {known:?}");
            }
        }
    }
}
