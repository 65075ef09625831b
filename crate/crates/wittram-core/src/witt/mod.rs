//! `p`-typical Witt vectors over arbitrary coefficient rings.
//!
//! Coordinates are stored in ghost order: `coords[0]` is the Teichmüller
//! position (the paper's `a_{m−1}`), `coords[m−1]` the deepest Verschiebung
//! position (the paper's `a_0`). Reading a vector left to right therefore
//! matches the paper's tuple `(a_{m−1}, …, a_0)` exactly.
//!
//! Operations evaluate the mod-`p` structure-polynomial tables from
//! [`structure`] over any [`RingCtx`]; every runtime coefficient ring here
//! has characteristic `p`, so mod-`p` tables are sufficient and `F` has the
//! cheap functorial form `R ∘ (coordinatewise p-th power)`. The independent
//! [`ghost`] oracle recomputes all operations over torsion-free integer
//! lifts; the test suites compare the two paths.

pub mod ghost;
mod intpoly;
pub mod structure;

pub use structure::{OpKind, StructurePolynomialTable, TableStore, WittParams};

use crate::error::Error;
use crate::Result;
use std::collections::BTreeMap;

/// Coefficient-ring interface. Implementations carry the ring constants
/// (modulus, truncation order, …); elements are plain data.
pub trait RingCtx {
    type Elt: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elt;
    fn one(&self) -> Self::Elt;
    fn add(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
    fn neg(&self, a: &Self::Elt) -> Self::Elt;
    fn mul(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
    fn is_zero(&self, a: &Self::Elt) -> bool;

    fn sub(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt {
        self.add(a, &self.neg(b))
    }

    /// The scalar `v · 1` (used for structure-polynomial coefficients,
    /// always `< p ≤ 13`).
    fn from_u8(&self, v: u8) -> Self::Elt {
        let mut acc = self.zero();
        let one = self.one();
        for _ in 0..v {
            acc = self.add(&acc, &one);
        }
        acc
    }

    fn pow(&self, a: &Self::Elt, mut n: u64) -> Self::Elt {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Characteristic, if it is a prime `p` (enables the functorial
    /// Frobenius shortcut). `None` for torsion-free oracle rings.
    fn char_p(&self) -> Option<u64> {
        None
    }
}

/// A length-`m` Witt vector; `coords[j]` sits at ghost index `j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WittVector<E> {
    pub coords: Vec<E>,
}

impl<E> WittVector<E> {
    pub fn m(&self) -> u8 {
        self.coords.len() as u8
    }
}

/// Witt arithmetic over a coefficient ring: bundles the prime, length,
/// ring context and table provider.
pub struct Witt<'a, C: RingCtx> {
    pub params: WittParams,
    pub ring: &'a C,
    pub store: &'a TableStore,
}

impl<'a, C: RingCtx> Witt<'a, C> {
    pub fn new(params: WittParams, ring: &'a C, store: &'a TableStore) -> Self {
        Witt {
            params,
            ring,
            store,
        }
    }

    fn check_len(&self, a: &WittVector<C::Elt>, m: u8) -> Result<()> {
        if a.m() == m {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "Witt vector length {} does not match required length {m}",
                a.m()
            )))
        }
    }

    pub fn zero(&self) -> WittVector<C::Elt> {
        WittVector {
            coords: vec![self.ring.zero(); self.params.m as usize],
        }
    }

    /// `[x]_m = (x, 0, …, 0)`.
    pub fn teichmuller(&self, x: C::Elt) -> WittVector<C::Elt> {
        let mut coords = vec![self.ring.zero(); self.params.m as usize];
        coords[0] = x;
        WittVector { coords }
    }

    pub fn one(&self) -> WittVector<C::Elt> {
        self.teichmuller(self.ring.one())
    }

    pub fn is_zero(&self, a: &WittVector<C::Elt>) -> bool {
        a.coords.iter().all(|c| self.ring.is_zero(c))
    }

    /// Evaluate one structure table with a shared power cache.
    fn eval_table(
        &self,
        kind: OpKind,
        inputs: &[&[C::Elt]],
    ) -> Result<Vec<C::Elt>> {
        let table = self.store.get(self.params, kind)?;
        let vars: Vec<&C::Elt> = inputs.iter().flat_map(|s| s.iter()).collect();
        debug_assert_eq!(vars.len(), table.nvars);
        let mut cache: Vec<BTreeMap<u16, C::Elt>> = vec![BTreeMap::new(); vars.len()];

        fn power<C: RingCtx>(
            ring: &C,
            base: &C::Elt,
            e: u16,
            memo: &mut BTreeMap<u16, C::Elt>,
        ) -> C::Elt {
            if e == 0 {
                return ring.one();
            }
            if e == 1 {
                return base.clone();
            }
            if let Some(v) = memo.get(&e) {
                return v.clone();
            }
            let half = power(ring, base, e / 2, memo);
            let mut r = ring.mul(&half, &half);
            if e % 2 == 1 {
                r = ring.mul(&r, base);
            }
            memo.insert(e, r.clone());
            r
        }

        let mut out = Vec::with_capacity(table.polys.len());
        for poly in &table.polys {
            let mut acc = self.ring.zero();
            for (exps, c) in poly {
                let mut term = self.ring.from_u8(*c);
                for (v, &e) in exps.iter().enumerate() {
                    if e > 0 {
                        let pw = power(self.ring, vars[v], e, &mut cache[v]);
                        term = self.ring.mul(&term, &pw);
                    }
                }
                acc = self.ring.add(&acc, &term);
            }
            out.push(acc);
        }
        Ok(out)
    }

    pub fn add(
        &self,
        a: &WittVector<C::Elt>,
        b: &WittVector<C::Elt>,
    ) -> Result<WittVector<C::Elt>> {
        self.check_len(a, self.params.m)?;
        self.check_len(b, self.params.m)?;
        Ok(WittVector {
            coords: self.eval_table(OpKind::Add, &[&a.coords, &b.coords])?,
        })
    }

    pub fn neg(&self, a: &WittVector<C::Elt>) -> Result<WittVector<C::Elt>> {
        self.check_len(a, self.params.m)?;
        Ok(WittVector {
            coords: self.eval_table(OpKind::Neg, &[&a.coords])?,
        })
    }

    pub fn sub(
        &self,
        a: &WittVector<C::Elt>,
        b: &WittVector<C::Elt>,
    ) -> Result<WittVector<C::Elt>> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    pub fn mul(
        &self,
        a: &WittVector<C::Elt>,
        b: &WittVector<C::Elt>,
    ) -> Result<WittVector<C::Elt>> {
        self.check_len(a, self.params.m)?;
        self.check_len(b, self.params.m)?;
        Ok(WittVector {
            coords: self.eval_table(OpKind::Mul, &[&a.coords, &b.coords])?,
        })
    }

    /// `n · a` for an integer scalar (repeated doubling).
    pub fn int_mul(&self, n: i64, a: &WittVector<C::Elt>) -> Result<WittVector<C::Elt>> {
        let mut k = n.unsigned_abs();
        let mut base = a.clone();
        let mut acc = self.zero();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.add(&base, &base)?;
            }
        }
        if n < 0 {
            acc = self.neg(&acc)?;
        }
        Ok(acc)
    }

    /// `V: W_m → W_{m+1}` — prepend a zero at the Teichmüller position.
    pub fn verschiebung(&self, a: &WittVector<C::Elt>) -> WittVector<C::Elt> {
        let mut coords = Vec::with_capacity(a.coords.len() + 1);
        coords.push(self.ring.zero());
        coords.extend(a.coords.iter().cloned());
        WittVector { coords }
    }

    /// `R: W_m → W_{m−1}` — drop the deepest coordinate (the paper's `a_0`).
    pub fn restriction(&self, a: &WittVector<C::Elt>) -> WittVector<C::Elt> {
        let mut coords = a.coords.clone();
        coords.pop();
        WittVector { coords }
    }

    /// The Frobenius ring endomorphism `W_n(A) → W_n(A)` for char-`p`
    /// coefficient rings: coordinatewise `p`-th power (functorial Frobenius,
    /// which in characteristic `p` coincides with the Witt-vector one).
    pub fn frobenius_endo(&self, a: &WittVector<C::Elt>) -> Result<WittVector<C::Elt>> {
        let p = self.ring.char_p().ok_or_else(|| {
            Error::domain("coordinatewise Frobenius needs a characteristic-p coefficient ring")
        })?;
        Ok(WittVector {
            coords: a.coords.iter().map(|c| self.ring.pow(c, p)).collect(),
        })
    }

    /// The paper's `F: W_{m+1} → W_m` over a char-`p` ring:
    /// `R ∘ (coordinatewise p-th power)`.
    pub fn frobenius_down(&self, a: &WittVector<C::Elt>) -> Result<WittVector<C::Elt>> {
        let f = self.frobenius_endo(a)?;
        Ok(self.restriction(&f))
    }

    /// `F: W_{m+1} → W_m` through the Frobenius structure-polynomial table
    /// (valid over any ring; used to cross-check the char-`p` shortcut).
    pub fn frobenius_via_table(&self, a: &WittVector<C::Elt>) -> Result<WittVector<C::Elt>> {
        self.check_len(a, self.params.m + 1)?;
        Ok(WittVector {
            coords: self.eval_table(OpKind::Frobenius, &[&a.coords])?,
        })
    }

    /// Ghost components `w_i = Σ_{j≤i} p^j · a_j^{p^{i−j}}` (meaningful over
    /// torsion-free oracle rings; over char-`p` rings all but `w_0` collapse).
    pub fn ghost_oracle(&self, a: &WittVector<C::Elt>) -> Vec<C::Elt> {
        let p = self.params.p;
        let mut out = Vec::with_capacity(a.coords.len());
        for i in 0..a.coords.len() {
            let mut w = self.ring.zero();
            let mut pj = 1u64;
            for (j, c) in a.coords.iter().enumerate().take(i + 1) {
                let e = p.pow((i - j) as u32);
                let t = self.ring.pow(c, e);
                // p^j · t by repeated doubling on the ring scalar
                let mut scaled = self.ring.zero();
                let mut k = pj;
                let mut base = t;
                while k > 0 {
                    if k & 1 == 1 {
                        scaled = self.ring.add(&scaled, &base);
                    }
                    k >>= 1;
                    if k > 0 {
                        base = self.ring.add(&base, &base);
                    }
                }
                w = self.ring.add(&w, &scaled);
                pj = pj.saturating_mul(p);
            }
            out.push(w);
        }
        out
    }
}

// ── Simple coefficient rings ────────────────────────────────────────────

impl RingCtx for crate::fq::FqField {
    type Elt = crate::fq::FqElt;

    fn zero(&self) -> Self::Elt {
        crate::fq::FqElt::ZERO
    }
    fn one(&self) -> Self::Elt {
        self.from_int(1)
    }
    fn add(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt {
        crate::fq::FqField::add(self, *a, *b)
    }
    fn neg(&self, a: &Self::Elt) -> Self::Elt {
        crate::fq::FqField::neg(self, *a)
    }
    fn mul(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt {
        crate::fq::FqField::mul(self, *a, *b)
    }
    fn is_zero(&self, a: &Self::Elt) -> bool {
        a.is_zero()
    }
    fn from_u8(&self, v: u8) -> Self::Elt {
        self.from_int(v as i64)
    }
    fn char_p(&self) -> Option<u64> {
        Some(self.p())
    }
}

/// `F_p[t]/(t^k)` — a char-`p` ring with nilpotents, used by the oracle
/// agreement suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPolyTrunc {
    pub p: u64,
    pub k: usize,
}

impl RingCtx for FpPolyTrunc {
    type Elt = Vec<u8>; // length k, entries mod p

    fn zero(&self) -> Self::Elt {
        vec![0; self.k]
    }
    fn one(&self) -> Self::Elt {
        let mut v = vec![0; self.k];
        v[0] = 1;
        v
    }
    fn add(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt {
        a.iter()
            .zip(b)
            .map(|(x, y)| ((*x as u64 + *y as u64) % self.p) as u8)
            .collect()
    }
    fn neg(&self, a: &Self::Elt) -> Self::Elt {
        a.iter()
            .map(|x| ((self.p - *x as u64) % self.p) as u8)
            .collect()
    }
    fn mul(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt {
        let mut out = vec![0u64; self.k];
        for i in 0..self.k {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.k - i {
                out[i + j] += a[i] as u64 * b[j] as u64;
            }
        }
        out.iter().map(|x| (x % self.p) as u8).collect()
    }
    fn is_zero(&self, a: &Self::Elt) -> bool {
        a.iter().all(|&x| x == 0)
    }
    fn char_p(&self) -> Option<u64> {
        Some(self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn store() -> TableStore {
        TableStore::new(None)
    }

    #[test]
    fn spec_add_example_p2_m2() {
        let field = crate::fq::FqField::new(2, 1).unwrap();
        let st = store();
        let w = Witt::new(WittParams::new(2, 2).unwrap(), &field, &st);
        let one = w.one(); // (1, 0)
        let sum = w.add(&one, &one).unwrap();
        // (1,0)+(1,0) = (0,1) = V([1]_1)
        assert_eq!(
            sum.coords,
            vec![field.from_int(0), field.from_int(1)]
        );
    }

    #[test]
    fn teichmuller_multiplicative() {
        let field = crate::fq::FqField::new(3, 2).unwrap();
        let st = store();
        let w = Witt::new(WittParams::new(3, 3).unwrap(), &field, &st);
        for x in field.iter_all().step_by(2) {
            for y in field.iter_all().step_by(3) {
                let prod = w.mul(&w.teichmuller(x), &w.teichmuller(y)).unwrap();
                assert_eq!(prod, w.teichmuller(field.mul(x, y)));
            }
        }
    }

    #[test]
    fn fv_equals_p_and_frobenius_teichmuller() {
        let field = crate::fq::FqField::new(2, 2).unwrap();
        let st = store();
        let m = 3u8;
        let w = Witt::new(WittParams::new(2, m).unwrap(), &field, &st);
        let wup = Witt::new(WittParams::new(2, m + 1).unwrap(), &field, &st);
        let x = field.gen();
        let a = w.mul(&w.teichmuller(x), &w.add(&w.one(), &w.one()).unwrap()).unwrap();
        // FV = p on W_m
        let fv = wup.frobenius_down(&w.verschiebung(&a)).unwrap();
        let pa = w.int_mul(2, &a).unwrap();
        assert_eq!(fv, pa);
        // F([x]_{m+1}) = [x^p]_m
        let f_teich = wup.frobenius_down(&wup.teichmuller(x)).unwrap();
        assert_eq!(f_teich, w.teichmuller(field.frob(x)));
    }

    #[test]
    fn frobenius_table_agrees_with_char_p_shortcut() {
        // D2 cross-check at small sizes, over a ring with nilpotents.
        let ring = FpPolyTrunc { p: 3, k: 4 };
        let st = store();
        for m in 1..=3u8 {
            let w = Witt::new(WittParams::new(3, m).unwrap(), &ring, &st);
            // a few structured inputs
            let mut inputs = Vec::new();
            for s in 0..5u8 {
                let coords: Vec<Vec<u8>> = (0..=m)
                    .map(|j| {
                        let mut e = vec![0u8; 4];
                        e[(j as usize + s as usize) % 4] = 1 + (j + s) % 2;
                        e[0] = (s + j) % 3;
                        e
                    })
                    .collect();
                inputs.push(WittVector { coords });
            }
            for a in &inputs {
                let via_table = w.frobenius_via_table(a).unwrap();
                let via_char_p = w.frobenius_down(a).unwrap();
                assert_eq!(via_table, via_char_p);
            }
        }
    }
}
