//! Supported parameter ranges and central validation.
//!
//! The engine is exact, and several cost functions are superlinear in
//! `p^m`, so the supported ranges are deliberately small and enforced in one
//! place. Everything inside the caps is exercised by the test suite.

use crate::error::Error;
use crate::Result;

/// Largest supported prime.
pub const MAX_P: u64 = 13;
/// Supported primes.
pub const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];
/// Largest supported Witt length.
pub const MAX_M: u8 = 5;
/// Largest supported residue extension degree.
pub const MAX_E: u8 = 4;
/// Largest supported number of variables in the multivariate layer.
pub const MAX_D: u8 = 3;
/// Largest supported multivariate pole bound / window radius.
pub const MAX_B: i64 = 8;
/// Iteration cap factor for conductor reduction: `64 * m * pole_order`.
pub const CONDUCTOR_ITER_FACTOR: u64 = 64;
/// Resource guard: maximum number of monomials in one structure polynomial
/// (counted during generation over the integers).
pub const MAX_TABLE_TERMS: usize = 2_000_000;

/// Check that `p` is a supported prime.
pub fn check_p(p: u64) -> Result<()> {
    if PRIMES.contains(&p) {
        Ok(())
    } else {
        Err(Error::caps(format!(
            "p = {p} is not a supported prime (supported: {PRIMES:?})"
        )))
    }
}

/// Check a Witt length `1 ≤ m ≤ 5`.
pub fn check_m(m: u8) -> Result<()> {
    if (1..=MAX_M).contains(&m) {
        Ok(())
    } else {
        Err(Error::caps(format!("m = {m} out of range 1..={MAX_M}")))
    }
}

/// Check a residue extension degree `1 ≤ e ≤ 4`.
pub fn check_e(e: u8) -> Result<()> {
    if (1..=MAX_E).contains(&e) {
        Ok(())
    } else {
        Err(Error::caps(format!("e = {e} out of range 1..={MAX_E}")))
    }
}

/// Check a form degree `q ≤ 1` (one-variable layer).
pub fn check_q(q: u8) -> Result<()> {
    if q <= 1 {
        Ok(())
    } else {
        Err(Error::caps(format!(
            "q = {q}: only q ∈ {{0, 1}} carries the one-variable theory"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caps_reject_out_of_range() {
        assert!(check_p(4).is_err());
        assert!(check_p(17).is_err());
        assert!(check_p(13).is_ok());
        assert!(check_m(0).is_err());
        assert!(check_m(6).is_err());
        assert!(check_m(5).is_ok());
        assert!(check_e(0).is_err());
        assert!(check_e(5).is_err());
        assert!(check_q(2).is_err());
    }
}
