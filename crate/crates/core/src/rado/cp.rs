//! Rado colourings `c_p`: the lowest nonzero base-`p` digit.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `c_p(x)`: the base-`p` digit at the position of `p`'s exact power in `x`.
pub fn rado_colour(p: u64, x: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if x == 0 {
        return Err(Error::Domain("Rado colouring is defined on positive integers".into()));
    }
    let mut x = x;
    while x.is_multiple_of(p) {
        x /= p;
    }
    Ok(x % p)
}

pub fn rado_colour_big(p: u64, x: &BigUint) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if x.is_zero() {
        return Err(Error::Domain("Rado colouring is defined on positive integers".into()));
    }
    let bp = BigUint::from(p);
    let mut x = x.clone();
    loop {
        let (q, r) = x.div_rem(&bp);
        if !r.is_zero() {
            return Ok(r.to_u64().expect("digit below p"));
        }
        x = q;
    }
}
