//! The residue field `F_q`, `q = p^e` with `p ≤ 13` prime and `e ≤ 4`.
//!
//! Elements are polynomials in a fixed generator `x` modulo a fixed monic
//! defining polynomial `f(x) ∈ F_p[x]`. The table of defining polynomials is
//! frozen in this file; every entry is irreducible and *primitive* (`x`
//! generates `F_q^×`), which the unit tests re-verify from scratch. Freezing
//! the table makes every computation in the crate reproducible bit-for-bit
//! across runs and machines.
//!
//! An element is stored as its coefficient vector `(c_0, …, c_{e−1})` in the
//! power basis `1, x, …, x^{e−1}`; textual form `[c0,c1,...]` (or a bare
//! integer when `e = 1`).

use crate::caps;
use crate::error::Error;
use crate::Result;
use std::fmt;

/// Fixed defining polynomials, coefficients low → high degree, monic.
/// Verified primitive (see `tests::table_entries_are_primitive`).
const DEFINING_POLYS: [((u64, u8), &[u8]); 24] = [
    ((2, 1), &[1, 1]),
    ((2, 2), &[1, 1, 1]),
    ((2, 3), &[1, 1, 0, 1]),
    ((2, 4), &[1, 1, 0, 0, 1]),
    ((3, 1), &[1, 1]),
    ((3, 2), &[2, 2, 1]),
    ((3, 3), &[1, 2, 0, 1]),
    ((3, 4), &[2, 0, 0, 2, 1]),
    ((5, 1), &[3, 1]),
    ((5, 2), &[2, 4, 1]),
    ((5, 3), &[3, 3, 0, 1]),
    ((5, 4), &[2, 4, 4, 0, 1]),
    ((7, 1), &[4, 1]),
    ((7, 2), &[3, 6, 1]),
    ((7, 3), &[4, 0, 6, 1]),
    ((7, 4), &[3, 4, 5, 0, 1]),
    ((11, 1), &[9, 1]),
    ((11, 2), &[2, 7, 1]),
    ((11, 3), &[9, 2, 0, 1]),
    ((11, 4), &[2, 10, 8, 0, 1]),
    ((13, 1), &[11, 1]),
    ((13, 2), &[2, 12, 1]),
    ((13, 3), &[11, 2, 0, 1]),
    ((13, 4), &[2, 12, 3, 0, 1]),
];

/// An element of `F_q`. Coefficients in the power basis; entries at index
/// `≥ e` are zero. `Copy`, so field context travels separately (see
/// [`FqField`]).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FqElt {
    c: [u8; 4],
}

impl FqElt {
    pub const ZERO: FqElt = FqElt { c: [0; 4] };

    pub fn is_zero(&self) -> bool {
        self.c == [0; 4]
    }

    /// Coefficient of `x^k` in the power basis.
    pub fn coeff(&self, k: usize) -> u8 {
        self.c[k]
    }

    pub fn coeffs(&self, e: u8) -> &[u8] {
        &self.c[..e as usize]
    }
}

impl fmt::Debug for FqElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fq{:?}", self.c)
    }
}

/// The field `F_q` with its frozen defining polynomial.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FqField {
    p: u64,
    e: u8,
    /// Monic defining polynomial, coefficients low → high, length `e + 1`.
    modulus: [u8; 5],
}

impl FqField {
    pub fn new(p: u64, e: u8) -> Result<FqField> {
        caps::check_p(p)?;
        caps::check_e(e)?;
        let entry = DEFINING_POLYS
            .iter()
            .find(|((tp, te), _)| *tp == p && *te == e)
            .ok_or_else(|| Error::caps(format!("no defining polynomial for p={p}, e={e}")))?;
        let mut modulus = [0u8; 5];
        modulus[..entry.1.len()].copy_from_slice(entry.1);
        Ok(FqField { p, e, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn e(&self) -> u8 {
        self.e
    }
    /// `q = p^e`.
    pub fn q(&self) -> u64 {
        self.p.pow(self.e as u32)
    }
    /// Defining polynomial coefficients, low → high, length `e + 1`.
    pub fn modulus(&self) -> &[u8] {
        &self.modulus[..=self.e as usize]
    }

    /// Element from power-basis coefficients (reduced mod `p`; length ≤ `e`).
    pub fn elt(&self, coeffs: &[u64]) -> Result<FqElt> {
        if coeffs.len() > self.e as usize {
            return Err(Error::parse(format!(
                "F_q element needs ≤ {} coefficients, got {}",
                self.e,
                coeffs.len()
            )));
        }
        let mut c = [0u8; 4];
        for (k, &v) in coeffs.iter().enumerate() {
            c[k] = (v % self.p) as u8;
        }
        Ok(FqElt { c })
    }

    /// The scalar `v mod p` as a field element.
    pub fn from_int(&self, v: i64) -> FqElt {
        let r = v.rem_euclid(self.p as i64) as u8;
        let mut c = [0u8; 4];
        c[0] = r;
        FqElt { c }
    }

    pub fn zero(&self) -> FqElt {
        FqElt::ZERO
    }

    pub fn one(&self) -> FqElt {
        self.from_int(1)
    }

    /// The generator `x` (equals `−f(0)` when `e = 1`, where it still
    /// generates `F_p^×` by primitivity of the table entry).
    pub fn gen(&self) -> FqElt {
        if self.e == 1 {
            let r = (self.p - self.modulus[0] as u64) % self.p;
            self.from_int(r as i64)
        } else {
            let mut c = [0u8; 4];
            c[1] = 1;
            FqElt { c }
        }
    }

    pub fn add(&self, a: FqElt, b: FqElt) -> FqElt {
        let mut c = [0u8; 4];
        for k in 0..self.e as usize {
            c[k] = ((a.c[k] as u64 + b.c[k] as u64) % self.p) as u8;
        }
        FqElt { c }
    }

    pub fn neg(&self, a: FqElt) -> FqElt {
        let mut c = [0u8; 4];
        for k in 0..self.e as usize {
            c[k] = ((self.p - a.c[k] as u64) % self.p) as u8;
        }
        FqElt { c }
    }

    pub fn sub(&self, a: FqElt, b: FqElt) -> FqElt {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FqElt, b: FqElt) -> FqElt {
        let e = self.e as usize;
        // Schoolbook product, degree ≤ 2e−2 < 8.
        let mut prod = [0u64; 8];
        for i in 0..e {
            if a.c[i] == 0 {
                continue;
            }
            for j in 0..e {
                prod[i + j] += a.c[i] as u64 * b.c[j] as u64;
            }
        }
        // Reduce top-down by the monic modulus.
        for k in (e..2 * e - 1).rev() {
            let c = prod[k] % self.p;
            if c != 0 {
                // subtract c * x^{k-e} * f(x)
                for j in 0..=e {
                    let idx = k - e + j;
                    let sub = c * self.modulus[j] as u64 % self.p;
                    prod[idx] = (prod[idx] + self.p - sub) % self.p;
                }
            }
            prod[k] = 0;
        }
        let mut c = [0u8; 4];
        for k in 0..e {
            c[k] = (prod[k] % self.p) as u8;
        }
        FqElt { c }
    }

    pub fn pow(&self, a: FqElt, mut n: u64) -> FqElt {
        let mut base = a;
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FqElt) -> Option<FqElt> {
        if a.is_zero() {
            None
        } else {
            Some(self.pow(a, self.q() - 2))
        }
    }

    /// Frobenius `a ↦ a^p`.
    pub fn frob(&self, a: FqElt) -> FqElt {
        self.pow(a, self.p)
    }

    /// Inverse Frobenius `a ↦ a^{1/p}` (exists and is unique: `F_q` is
    /// perfect); equals `a^{p^{e−1}}`.
    pub fn frob_inv(&self, a: FqElt) -> FqElt {
        self.pow(a, self.p.pow(self.e as u32 - 1))
    }

    /// Iterate over all `q` elements in a fixed deterministic order.
    pub fn iter_all(&self) -> impl Iterator<Item = FqElt> + '_ {
        let q = self.q();
        (0..q).map(move |idx| self.from_index(idx))
    }

    /// Bijection `0..q → F_q` by base-`p` digits in the power basis.
    pub fn from_index(&self, mut idx: u64) -> FqElt {
        let mut c = [0u8; 4];
        for k in 0..self.e as usize {
            c[k] = (idx % self.p) as u8;
            idx /= self.p;
        }
        FqElt { c }
    }

    /// Inverse of [`FqField::from_index`].
    pub fn to_index(&self, a: FqElt) -> u64 {
        let mut idx = 0u64;
        for k in (0..self.e as usize).rev() {
            idx = idx * self.p + a.c[k] as u64;
        }
        idx
    }

    /// Textual form: bare integer when `e = 1`, else `[c0,c1,...]`.
    pub fn format_elt(&self, a: FqElt) -> String {
        if self.e == 1 {
            format!("{}", a.c[0])
        } else {
            let inner: Vec<String> = (0..self.e as usize)
                .map(|k| a.c[k].to_string())
                .collect();
            format!("[{}]", inner.join(","))
        }
    }

    /// Parse `[c0,c1,...]` or a bare integer (any `e`; reduced mod `p`).
    pub fn parse_elt(&self, s: &str) -> Result<FqElt> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('[') {
            let inner = rest
                .strip_suffix(']')
                .ok_or_else(|| Error::parse(format!("unterminated F_q literal: {s}")))?;
            let mut coeffs = Vec::new();
            for part in inner.split(',') {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                let v: i64 = part
                    .parse()
                    .map_err(|_| Error::parse(format!("bad F_q coefficient: {part}")))?;
                coeffs.push(v.rem_euclid(self.p as i64) as u64);
            }
            self.elt(&coeffs)
        } else {
            let v: i64 = s
                .parse()
                .map_err(|_| Error::parse(format!("bad F_q element: {s}")))?;
            Ok(self.from_int(v))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorize(mut n: u64) -> Vec<u64> {
        let mut fs = Vec::new();
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                fs.push(d);
                while n % d == 0 {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            fs.push(n);
        }
        fs
    }

    /// Re-verify the frozen table: every entry is primitive (hence
    /// irreducible: a primitive polynomial generates a cyclic group of
    /// order q−1, impossible in a proper quotient).
    #[test]
    fn table_entries_are_primitive() {
        for ((p, e), _) in DEFINING_POLYS {
            let f = FqField::new(p, e).unwrap();
            let x = f.gen();
            let q1 = f.q() - 1;
            assert_eq!(f.pow(x, q1), f.one(), "x^(q-1) != 1 for p={p}, e={e}");
            for ell in factorize(q1) {
                assert_ne!(
                    f.pow(x, q1 / ell),
                    f.one(),
                    "x has order < q-1 for p={p}, e={e} (divisor {ell})"
                );
            }
        }
    }

    #[test]
    fn field_axioms_sampled() {
        for (p, e) in [(2, 4), (3, 2), (5, 2), (13, 1), (7, 3)] {
            let f = FqField::new(p, e).unwrap();
            let elts: Vec<FqElt> = f.iter_all().collect();
            // index bijection
            for (i, &a) in elts.iter().enumerate() {
                assert_eq!(f.to_index(a), i as u64);
            }
            // a * a^{-1} = 1, frobenius inverse, distributivity spot checks
            for &a in elts.iter() {
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                }
                assert_eq!(f.frob(f.frob_inv(a)), a);
                assert_eq!(f.frob_inv(f.frob(a)), a);
            }
            let n = elts.len().min(8);
            for &a in &elts[..n] {
                for &b in &elts[..n] {
                    for &c in &elts[..n] {
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c))
                        );
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        let f = FqField::new(3, 4).unwrap();
        for a in f.iter_all().step_by(7) {
            for b in f.iter_all().step_by(11) {
                assert_eq!(f.frob(f.add(a, b)), f.add(f.frob(a), f.frob(b)));
            }
        }
    }

    #[test]
    fn parse_format_round_trip() {
        let f = FqField::new(3, 2).unwrap();
        for a in f.iter_all() {
            let s = f.format_elt(a);
            assert_eq!(f.parse_elt(&s).unwrap(), a);
        }
        let f1 = FqField::new(5, 1).unwrap();
        for a in f1.iter_all() {
            let s = f1.format_elt(a);
            assert_eq!(f1.parse_elt(&s).unwrap(), a);
        }
        // bare integers accepted at any e
        assert_eq!(f.parse_elt("4").unwrap(), f.from_int(4));
        assert!(f.parse_elt("[1,2,3]").is_err()); // too many coefficients
    }
}
