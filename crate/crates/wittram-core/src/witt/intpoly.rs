//! Sparse multivariate polynomials with exact integer coefficients.
//!
//! Only used during structure-polynomial generation (ghost recursion), so
//! the representation favors simplicity and exactness: a sorted map from
//! exponent vectors to `BigInt` coefficients. A term-count guard aborts
//! generation cleanly for parameter corners whose tables are astronomically
//! large (the mod-p addition polynomials at `(p, m) = (13, 5)` have on the
//! order of 10^8 monomials).

use crate::caps::MAX_TABLE_TERMS;
use crate::error::Error;
use crate::Result;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;

/// Exponent vector; index = variable, entry = exponent.
pub type Expos = Vec<u16>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    /// Number of variables (every exponent vector has this length).
    pub nvars: usize,
    pub terms: BTreeMap<Expos, BigInt>,
}

impl IntPoly {
    pub fn zero(nvars: usize) -> Self {
        IntPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: i64) -> Self {
        let mut p = Self::zero(nvars);
        if c != 0 {
            p.terms.insert(vec![0; nvars], BigInt::from(c));
        }
        p
    }

    /// The monomial `c · v^e`.
    pub fn monomial(nvars: usize, var: usize, e: u16, c: BigInt) -> Self {
        let mut poly = Self::zero(nvars);
        if !c.is_zero() {
            let mut exps = vec![0u16; nvars];
            exps[var] = e;
            poly.terms.insert(exps, c);
        }
        poly
    }

    fn insert_term(&mut self, exps: Expos, c: BigInt) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
        if self.terms.len() > MAX_TABLE_TERMS {
            return Err(Error::TableTooLarge(format!(
                "more than {MAX_TABLE_TERMS} monomials during ghost recursion"
            )));
        }
        Ok(())
    }

    pub fn add_assign(&mut self, other: &IntPoly) -> Result<()> {
        debug_assert_eq!(self.nvars, other.nvars);
        for (e, c) in &other.terms {
            self.insert_term(e.clone(), c.clone())?;
        }
        Ok(())
    }

    pub fn sub_assign(&mut self, other: &IntPoly) -> Result<()> {
        debug_assert_eq!(self.nvars, other.nvars);
        for (e, c) in &other.terms {
            self.insert_term(e.clone(), -c)?;
        }
        Ok(())
    }

    pub fn mul(&self, other: &IntPoly) -> Result<IntPoly> {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = IntPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = ea.clone();
                for (k, &x) in eb.iter().enumerate() {
                    e[k] = e[k]
                        .checked_add(x)
                        .ok_or_else(|| Error::internal("exponent overflow in IntPoly::mul"))?;
                }
                out.insert_term(e, ca * cb)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        if c.is_zero() {
            return IntPoly::zero(self.nvars);
        }
        IntPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, mut n: u64) -> Result<IntPoly> {
        let mut acc = IntPoly::constant(self.nvars, 1);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Exact division by `p^k`; errors if any coefficient is not divisible
    /// (which would indicate a bug in the ghost recursion, not bad input).
    pub fn exact_div_pow(&self, p: u64, k: u32) -> Result<IntPoly> {
        if k == 0 {
            return Ok(self.clone());
        }
        let d = BigInt::from(p).pow(k);
        let mut out = IntPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let (q, r) = (c / &d, c % &d);
            if !r.is_zero() {
                return Err(Error::internal(format!(
                    "inexact division by {p}^{k} in ghost recursion (remainder {r})"
                )));
            }
            out.terms.insert(e.clone(), q);
        }
        Ok(out)
    }

    /// Reduce coefficients into `0..p`, dropping zeros.
    pub fn reduce_mod_p(&self, p: u64) -> Vec<(Expos, u8)> {
        let bp = BigInt::from(p);
        let mut out = Vec::new();
        for (e, c) in &self.terms {
            let mut r = c % &bp;
            if r.is_negative() {
                r += &bp;
            }
            let r: u8 = r.try_into().expect("residue fits u8 for p <= 13");
            if r != 0 {
                out.push((e.clone(), r));
            }
        }
        out
    }
}

/// Ghost polynomial `w_k = Σ_{j≤k} p^j · V_{off+j}^{p^{k−j}}` in variables
/// `off, off+1, …` of an `nvars`-variable ring.
pub fn ghost_poly(nvars: usize, off: usize, p: u64, k: u32) -> Result<IntPoly> {
    let mut w = IntPoly::zero(nvars);
    for j in 0..=k {
        let e = u64::from(p as u32)
            .checked_pow(k - j)
            .ok_or_else(|| Error::internal("ghost exponent overflow"))?;
        let e: u16 = e
            .try_into()
            .map_err(|_| Error::internal("ghost exponent exceeds u16"))?;
        let coeff = BigInt::from(p).pow(j);
        w.add_assign(&IntPoly::monomial(nvars, off + j as usize, e, coeff))?;
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn arithmetic_basics() {
        // (x + y)^2 = x^2 + 2xy + y^2 in 2 vars
        let mut s = IntPoly::zero(2);
        s.add_assign(&IntPoly::monomial(2, 0, 1, BigInt::one())).unwrap();
        s.add_assign(&IntPoly::monomial(2, 1, 1, BigInt::one())).unwrap();
        let sq = s.pow(2).unwrap();
        assert_eq!(sq.terms.len(), 3);
        assert_eq!(sq.terms[&vec![1u16, 1u16]], BigInt::from(2));
        // exact division
        let d = sq.scale(&BigInt::from(4)).exact_div_pow(2, 2).unwrap();
        assert_eq!(d, sq);
        assert!(sq.exact_div_pow(2, 1).is_err()); // x², y² coefficients odd
    }

    #[test]
    fn ghost_poly_shape() {
        // p=2, k=2, one input block: w_2 = X0^4 + 2 X1^2 + 4 X2
        let w = ghost_poly(3, 0, 2, 2).unwrap();
        assert_eq!(w.terms[&vec![4u16, 0, 0]], BigInt::one());
        assert_eq!(w.terms[&vec![0u16, 2, 0]], BigInt::from(2));
        assert_eq!(w.terms[&vec![0u16, 0, 1]], BigInt::from(4));
    }
}
