//! Exact integer bounds for the Erdős–Szekeres type numbers.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn binomial_big(n: &BigUint, k: u32) -> BigUint {
    if *n < BigUint::from(k) {
        return BigUint::from(0u32);
    }
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - BigUint::from(i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

/// Upper bound `C(2k - 5, k - 2) + 1` on the number of points in general
/// position forcing `k` in convex position.
pub fn es_bound(k: u64) -> Result<BigUint> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!("es_bound needs k >= 3, got {k}")));
    }
    Ok(binomial(2 * k - 5, k - 2) + 1u32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundWinner {
    /// The route through a large convex-position subset is smaller.
    ConvexToStrict,
    /// The route through a large general-position subset is smaller.
    GeneralPosition,
    Tie,
}

/// Both upper bounds on the number of points forcing `ell` collinear points
/// or `k` points in strictly convex position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictBound {
    /// `ES((k-1)(ell-1)/2 + 1)` for odd `k`, `ES((k-2)(ell-1)/2 + 2)` for even `k`.
    pub convex_to_strict: BigUint,
    /// `(ell - 3) C(ES(k) - 1, 2) + ES(k)`.
    pub general_position: BigUint,
    pub winner: BoundWinner,
}

impl StrictBound {
    pub fn value(&self) -> &BigUint {
        match self.winner {
            BoundWinner::GeneralPosition => &self.general_position,
            _ => &self.convex_to_strict,
        }
    }
}

pub fn es_kl_bound(k: u64, ell: u64) -> Result<StrictBound> {
    if k < 3 || ell < 3 {
        return Err(Error::InvalidParameter(format!(
            "es_kl_bound needs k, ell >= 3, got ({k}, {ell})"
        )));
    }
    let convex_size = if k % 2 == 1 {
        (k - 1) * (ell - 1) / 2 + 1
    } else {
        (k - 2) * (ell - 1) / 2 + 2
    };
    let convex_to_strict = es_bound(convex_size.max(3))?;
    let es = es_bound(k)?;
    let general_position = BigUint::from(ell - 3) * binomial_big(&(&es - 1u32), 2) + &es;
    let winner = match convex_to_strict.cmp(&general_position) {
        std::cmp::Ordering::Less => BoundWinner::ConvexToStrict,
        std::cmp::Ordering::Greater => BoundWinner::GeneralPosition,
        std::cmp::Ordering::Equal => BoundWinner::Tie,
    };
    Ok(StrictBound {
        convex_to_strict,
        general_position,
        winner,
    })
}

/// `((2 ell - 1)^ell - 1) / (2 ell - 2)`, the convex-position size used by
/// the empty-pentagon argument.
pub fn threshold_k(ell: u32) -> Result<BigUint> {
    if ell < 2 {
        return Err(Error::InvalidParameter(format!(
            "threshold_k needs ell >= 2, got {ell}"
        )));
    }
    let base = BigUint::from(2 * ell - 1);
    let numerator = base.pow(ell) - 1u32;
    let denominator = BigUint::from(2 * ell - 2);
    assert_eq!(&numerator % &denominator, BigUint::from(0u32));
    Ok(numerator / denominator)
}

/// Points needed to force `ell` collinear points or a 4-hole.
pub fn quadrilateral_threshold(ell: u64) -> u64 {
    7.max(ell + 2)
}
