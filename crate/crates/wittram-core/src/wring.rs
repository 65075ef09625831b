//! Truncated Witt rings `W_r(F_q)` of the residue field, realized as
//! Galois rings `GR(p^r, e) = (ℤ/p^r)[x]/(f̃)` where `f̃` is the integer
//! lift of the fixed defining polynomial of `F_q`.
//!
//! The additive group of `GR(p^r, e)` is literally `(ℤ/p^r)^e` in the
//! coefficient basis `1, x, …, x^{e−1}`, which is what makes exact window
//! linear algebra possible downstream. The Witt-coordinate view is
//! recovered through Teichmüller digit peeling:
//! `u = Σ_j p^j τ(c_j)` uniquely, and the classical Witt coordinates are
//! `x_j = c_j^{p^j}`. Under this correspondence
//!
//! * ring `+`/`·` match the structure-polynomial Witt operations,
//! * `σ` (the Galois-ring Frobenius automorphism, `x ↦ ξ` with `ξ` the
//!   Hensel lift of `x^p`) matches the coordinatewise `p`-th power,
//! * `R` is reduction mod `p^{r−1}`, `F = σ` followed by `R`, and
//!   `V(u) = p·σ^{−1}(ũ)` for any lift `ũ`.
//!
//! The agreement of the two models is enforced by tests, not assumed.

use crate::caps;
use crate::error::Error;
use crate::fq::{FqElt, FqField};
use crate::Result;

/// An element of `W_r(F_q)`: coefficients of `1, x, …, x^{e−1}`, each in
/// `[0, p^r)`. The vector length always equals `e`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct WCoeff(pub Vec<u64>);

impl WCoeff {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

/// The ring `W_r(F_q) = GR(p^r, e)` with precomputed Frobenius data.
#[derive(Clone, Debug)]
pub struct WCoeffRing {
    field: FqField,
    r: u8,
    pr: u64,
    /// Monic defining polynomial, length `e+1`, coefficients in `[0, p)`
    /// (the canonical integer lift).
    modulus: Vec<u64>,
    /// `ξ^i` for `i = 0..e`, where `ξ` is the Hensel-lifted root of the
    /// modulus with `ξ ≡ x^p (mod p)`; applying `σ` is evaluation at `ξ`.
    sigma_pows: Vec<Vec<u64>>,
}

impl WCoeffRing {
    pub fn new(field: FqField, r: u8) -> Result<Self> {
        // one level beyond the user-facing Witt length cap: the image of
        // the Verschiebung operator lives there
        if r == 0 || r > caps::MAX_M + 1 {
            return Err(Error::caps(format!(
                "Witt coefficient level r = {r} out of range 1..={}",
                caps::MAX_M + 1
            )));
        }
        let e = field.e() as usize;
        let pr = field.p().pow(r as u32);
        let modulus: Vec<u64> = field.modulus().iter().map(|&c| c as u64).collect();
        let mut ring = WCoeffRing {
            field,
            r,
            pr,
            modulus,
            sigma_pows: Vec::new(),
        };
        // Hensel-lift the root ξ ≡ x^p of the modulus, then store its powers.
        let xi = ring.hensel_frobenius_root()?;
        let mut pow = ring.one();
        let mut sigma_pows = Vec::with_capacity(e);
        for _ in 0..e {
            sigma_pows.push(pow.0.clone());
            pow = ring.mul(&pow, &WCoeff(xi.clone()));
        }
        ring.sigma_pows = sigma_pows;
        Ok(ring)
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }
    pub fn r(&self) -> u8 {
        self.r
    }
    pub fn p(&self) -> u64 {
        self.field.p()
    }
    pub fn e(&self) -> usize {
        self.field.e() as usize
    }
    /// The additive exponent `p^r`.
    pub fn pr(&self) -> u64 {
        self.pr
    }

    pub fn zero(&self) -> WCoeff {
        WCoeff(vec![0; self.e()])
    }

    pub fn one(&self) -> WCoeff {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> WCoeff {
        let mut c = vec![0; self.e()];
        c[0] = v.rem_euclid(self.pr as i64) as u64;
        WCoeff(c)
    }

    /// The canonical integer lift of a residue-field element.
    pub fn lift_residue(&self, a: FqElt) -> WCoeff {
        WCoeff((0..self.e()).map(|i| a.coeff(i) as u64).collect())
    }

    /// Reduction mod `p`: the residue-field image.
    pub fn residue(&self, a: &WCoeff) -> FqElt {
        let p = self.p();
        let coeffs: Vec<u64> = a.0.iter().map(|&c| c % p).collect();
        self.field.elt(&coeffs).expect("residue coefficients are in range")
    }

    pub fn add(&self, a: &WCoeff, b: &WCoeff) -> WCoeff {
        WCoeff(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| (x + y) % self.pr)
                .collect(),
        )
    }

    pub fn neg(&self, a: &WCoeff) -> WCoeff {
        WCoeff(a.0.iter().map(|&x| (self.pr - x) % self.pr).collect())
    }

    pub fn sub(&self, a: &WCoeff, b: &WCoeff) -> WCoeff {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &WCoeff, b: &WCoeff) -> WCoeff {
        let e = self.e();
        let prq = self.pr as u128;
        // schoolbook product, degree ≤ 2e−2
        let mut prod = vec![0u128; 2 * e - 1];
        for i in 0..e {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..e {
                prod[i + j] += a.0[i] as u128 * b.0[j] as u128;
            }
        }
        // top-down reduction by the monic modulus
        for d in (e..2 * e - 1).rev() {
            let c = prod[d] % prq;
            prod[d] = 0;
            if c == 0 {
                continue;
            }
            // x^d ≡ −(Σ_{i<e} f_i x^i) · x^{d−e}
            for i in 0..e {
                let fi = self.modulus[i] as u128;
                if fi != 0 {
                    let sub = c * fi % prq;
                    prod[d - e + i] += prq - sub;
                }
            }
        }
        WCoeff(prod[..e].iter().map(|&x| (x % prq) as u64).collect())
    }

    /// `v · a` for an integer scalar.
    pub fn int_mul(&self, v: i64, a: &WCoeff) -> WCoeff {
        let s = v.rem_euclid(self.pr as i64) as u128;
        let prq = self.pr as u128;
        WCoeff(a.0.iter().map(|&x| (x as u128 * s % prq) as u64).collect())
    }

    pub fn pow(&self, a: &WCoeff, mut n: u64) -> WCoeff {
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

    /// Inverse of an integer scalar mod `p^r` (the scalar must be prime
    /// to `p`).
    pub fn int_inv(&self, v: i64) -> Result<u64> {
        let a = v.rem_euclid(self.pr as i64) as i128;
        let m = self.pr as i128;
        let (mut r0, mut r1) = (m, a);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if r0 != 1 {
            return Err(Error::domain(format!(
                "{v} is not invertible mod p^{} = {}",
                self.r, self.pr
            )));
        }
        Ok(t0.rem_euclid(m) as u64)
    }

    /// Inverse of a unit (anything with nonzero residue): Newton lift of
    /// the residue-field inverse.
    pub fn inv(&self, a: &WCoeff) -> Result<WCoeff> {
        let res = self.residue(a);
        let rinv = self
            .field
            .inv(res)
            .ok_or_else(|| Error::domain("attempted to invert a non-unit in W_r(F_q)"))?;
        let mut z = self.lift_residue(rinv);
        // z ← z(2 − az) doubles the precision each step
        let two = self.from_int(2);
        let steps = (self.r as u32).next_power_of_two().trailing_zeros() + 1;
        for _ in 0..steps {
            let az = self.mul(a, &z);
            z = self.mul(&z, &self.sub(&two, &az));
        }
        if self.mul(a, &z) != self.one() {
            return Err(Error::internal("unit inverse lift failed to converge"));
        }
        Ok(z)
    }

    /// Frobenius automorphism `σ` (reduces to `a ↦ a^p` on the residue
    /// field): evaluation at the precomputed lifted root.
    pub fn sigma(&self, a: &WCoeff) -> WCoeff {
        let mut acc = self.zero();
        for (i, pw) in self.sigma_pows.iter().enumerate() {
            if a.0[i] != 0 {
                let term = self.int_mul(a.0[i] as i64, &WCoeff(pw.clone()));
                acc = self.add(&acc, &term);
            }
        }
        acc
    }

    /// `σ^{−1} = σ^{e−1}` (the Galois group is cyclic of order `e`).
    pub fn sigma_inv(&self, a: &WCoeff) -> WCoeff {
        let mut z = a.clone();
        for _ in 0..self.e() - 1 {
            z = self.sigma(&z);
        }
        z
    }

    /// Teichmüller lift `τ(a)`: the unique root of unity (or zero)
    /// congruent to `a` mod `p`, found by iterating `z ↦ z^q`.
    pub fn teichmuller(&self, a: FqElt) -> WCoeff {
        let q = self.field.q();
        let mut z = self.lift_residue(a);
        for _ in 0..=self.r {
            let zq = self.pow(&z, q);
            if zq == z {
                return z;
            }
            z = zq;
        }
        // r iterations always suffice: each one fixes a further p-adic digit
        unreachable!("Teichmüller iteration failed to stabilize");
    }

    /// Whether `a ∈ p·W_r(F_q)` (every coefficient divisible by `p`).
    pub fn is_divisible_by_p(&self, a: &WCoeff) -> bool {
        let p = self.p();
        a.0.iter().all(|&c| c % p == 0)
    }

    /// Exact division by `p`, landing in `W_{r−1}(F_q)` (i.e. the result
    /// is only well-defined mod `p^{r−1}`). Fails if `a ∉ pW_r`.
    pub fn div_p_exact(&self, a: &WCoeff) -> Result<WCoeff> {
        if !self.is_divisible_by_p(a) {
            return Err(Error::domain("element is not divisible by p"));
        }
        let p = self.p();
        let pr1 = self.pr / p;
        Ok(WCoeff(a.0.iter().map(|&c| (c / p) % pr1).collect()))
    }

    /// `R`: reduction mod `p^{r−1}`, landing in the level-`(r−1)` ring.
    pub fn reduce(&self, a: &WCoeff) -> WCoeff {
        let pr1 = self.pr / self.p();
        WCoeff(a.0.iter().map(|&c| c % pr1).collect())
    }

    /// Interpret a level-`(r−1)` element in this ring via the canonical
    /// coefficient lift (used by `V` and `p̄`, whose results do not depend
    /// on the choice of lift).
    pub fn lift_from_below(&self, a: &WCoeff) -> WCoeff {
        a.clone()
    }

    /// `F: W_r(F_q) → W_{r−1}(F_q)`, namely `σ` followed by reduction.
    pub fn frobenius_down(&self, a: &WCoeff) -> WCoeff {
        self.reduce(&self.sigma(a))
    }

    /// `V: W_{r−1}(F_q) → W_r(F_q)`, namely `p·σ^{−1}` of any lift.
    pub fn verschiebung_from_below(&self, a: &WCoeff) -> WCoeff {
        let lifted = self.lift_from_below(a);
        self.int_mul(self.p() as i64, &self.sigma_inv(&lifted))
    }

    /// Classical Witt coordinates `(x_0, …, x_{r−1})` (Teichmüller
    /// position first) via digit peeling: `u = Σ p^j τ(c_j)`,
    /// `x_j = c_j^{p^j}`.
    pub fn to_witt_coords(&self, a: &WCoeff) -> Vec<FqElt> {
        let mut out = Vec::with_capacity(self.r as usize);
        let mut level = self.clone();
        let mut cur = a.clone();
        for j in 0..self.r {
            let c = level.residue(&cur);
            // x_j = c^{p^j}
            let mut x = c;
            for _ in 0..j {
                x = self.field.frob(x);
            }
            out.push(x);
            if j + 1 < self.r {
                let tau = level.teichmuller(c);
                let diff = level.sub(&cur, &tau);
                let next = WCoeffRing::new(self.field.clone(), level.r - 1)
                    .expect("lower level ring");
                cur = level.div_p_exact(&diff).expect("digit peel divides exactly");
                level = next;
            }
        }
        out
    }

    /// Inverse of [`Self::to_witt_coords`]: `u = Σ p^j τ(x_j^{p^{−j}})`.
    pub fn from_witt_coords(&self, coords: &[FqElt]) -> Result<WCoeff> {
        if coords.len() != self.r as usize {
            return Err(Error::domain(format!(
                "expected {} Witt coordinates, got {}",
                self.r,
                coords.len()
            )));
        }
        let mut acc = self.zero();
        let mut pj = 1i64;
        for (j, &x) in coords.iter().enumerate() {
            let mut c = x;
            for _ in 0..j {
                c = self.field.frob_inv(c);
            }
            let tau = self.teichmuller(c);
            acc = self.add(&acc, &self.int_mul(pj, &tau));
            pj *= self.p() as i64;
        }
        Ok(acc)
    }

    /// Find `ξ` with `f̃(ξ) = 0` in this ring and `ξ ≡ x^p (mod p)`.
    fn hensel_frobenius_root(&self) -> Result<Vec<u64>> {
        let e = self.e();
        // start: x^p reduced mod the modulus
        let mut x = self.zero();
        if e == 1 {
            // modulus is x + f0: the unique root is −f0 at every level of
            // the Newton iteration below, so seed with it directly.
            x.0[0] = (self.pr - self.modulus[0] % self.pr) % self.pr;
        } else {
            x.0[1] = 1;
        }
        let mut xi = self.pow(&x, self.p());
        // Newton: ξ ← ξ − f̃(ξ)/f̃′(ξ)
        for _ in 0..self.r + 1 {
            let fxi = self.eval_modulus(&xi);
            if fxi.is_zero() {
                break;
            }
            let dfxi = self.eval_modulus_derivative(&xi);
            let corr = self.mul(&fxi, &self.inv(&dfxi)?);
            xi = self.sub(&xi, &corr);
        }
        if !self.eval_modulus(&xi).is_zero() {
            return Err(Error::internal("Hensel lift of Frobenius root failed"));
        }
        Ok(xi.0)
    }

    fn eval_modulus(&self, z: &WCoeff) -> WCoeff {
        // Horner on f̃ = x^e + Σ f_i x^i
        let e = self.e();
        let mut acc = self.one(); // leading coefficient
        for i in (0..e).rev() {
            acc = self.mul(&acc, z);
            acc = self.add(&acc, &self.from_int(self.modulus[i] as i64));
        }
        acc
    }

    fn eval_modulus_derivative(&self, z: &WCoeff) -> WCoeff {
        let e = self.e();
        let mut acc = self.from_int(e as i64); // derivative leading coeff e·x^{e−1}
        for i in (1..e).rev() {
            acc = self.mul(&acc, z);
            let c = (i as u64 * self.modulus[i]) as i64;
            acc = self.add(&acc, &self.from_int(c));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witt::{TableStore, Witt, WittParams, WittVector};

    fn sample_coords(field: &FqField, r: u8, seed: u64) -> Vec<FqElt> {
        // simple deterministic spread over the field
        let q = field.q();
        (0..r)
            .map(|j| field.from_index(((seed + 3 * j as u64 + 1) * 7919) % q))
            .collect()
    }

    #[test]
    fn digit_round_trip() {
        for (p, e, r) in [(2u64, 1u8, 4u8), (2, 2, 3), (3, 2, 2), (5, 1, 3), (7, 2, 2)] {
            let field = FqField::new(p, e).unwrap();
            let ring = WCoeffRing::new(field.clone(), r).unwrap();
            for seed in 0..6u64 {
                let coords = sample_coords(&field, r, seed);
                let u = ring.from_witt_coords(&coords).unwrap();
                assert_eq!(ring.to_witt_coords(&u), coords);
            }
        }
    }

    #[test]
    fn ring_ops_match_structure_tables() {
        let store = TableStore::new(None);
        for (p, e, r) in [(2u64, 2u8, 3u8), (3, 2, 2), (5, 1, 3)] {
            let field = FqField::new(p, e).unwrap();
            let ring = WCoeffRing::new(field.clone(), r).unwrap();
            let w = Witt::new(WittParams::new(p, r).unwrap(), &field, &store);
            for seed in 0..4u64 {
                let ca = sample_coords(&field, r, seed);
                let cb = sample_coords(&field, r, seed + 17);
                let (ua, ub) = (
                    ring.from_witt_coords(&ca).unwrap(),
                    ring.from_witt_coords(&cb).unwrap(),
                );
                let (va, vb) = (
                    WittVector { coords: ca.clone() },
                    WittVector { coords: cb.clone() },
                );
                // + and · agree under the digit isomorphism
                let sum = w.add(&va, &vb).unwrap();
                assert_eq!(ring.to_witt_coords(&ring.add(&ua, &ub)), sum.coords);
                let prod = w.mul(&va, &vb).unwrap();
                assert_eq!(ring.to_witt_coords(&ring.mul(&ua, &ub)), prod.coords);
                // σ is the coordinatewise p-th power
                let frob_coords: Vec<FqElt> = ca.iter().map(|&x| field.frob(x)).collect();
                assert_eq!(ring.to_witt_coords(&ring.sigma(&ua)), frob_coords);
                // R is reduction mod p^{r−1}
                let lower = WCoeffRing::new(field.clone(), r - 1).unwrap();
                assert_eq!(
                    lower.to_witt_coords(&ring.reduce(&ua)),
                    ca[..(r - 1) as usize]
                );
                // F = σ then reduce
                let f_coords: Vec<FqElt> = frob_coords[..(r - 1) as usize].to_vec();
                assert_eq!(lower.to_witt_coords(&ring.frobenius_down(&ua)), f_coords);
                // V = p·σ^{−1} of a lift ↔ prepend a zero coordinate
                let upper = WCoeffRing::new(field.clone(), r + 1).unwrap();
                let mut v_coords = vec![FqElt::ZERO];
                v_coords.extend_from_slice(&ca);
                assert_eq!(
                    upper.to_witt_coords(&upper.verschiebung_from_below(&ua)),
                    v_coords
                );
            }
        }
    }

    #[test]
    fn teichmuller_is_multiplicative_and_fixed_by_power_q() {
        let field = FqField::new(3, 2).unwrap();
        let ring = WCoeffRing::new(field.clone(), 3).unwrap();
        let a = field.gen();
        let b = field.add(field.gen(), field.from_int(1));
        let (ta, tb) = (ring.teichmuller(a), ring.teichmuller(b));
        assert_eq!(ring.mul(&ta, &tb), ring.teichmuller(field.mul(a, b)));
        assert_eq!(ring.pow(&ta, field.q()), ta);
    }

    #[test]
    fn unit_and_scalar_inverses() {
        let field = FqField::new(5, 2).unwrap();
        let ring = WCoeffRing::new(field.clone(), 3).unwrap();
        let u = ring.add(
            &ring.teichmuller(field.gen()),
            &ring.int_mul(5, &ring.one()),
        );
        let uinv = ring.inv(&u).unwrap();
        assert_eq!(ring.mul(&u, &uinv), ring.one());
        // non-unit rejected
        assert!(ring.inv(&ring.int_mul(5, &ring.one())).is_err());
        // integer scalars
        let s = ring.int_inv(7).unwrap();
        assert_eq!((7 * s) % ring.pr(), 1);
        assert!(ring.int_inv(10).is_err());
    }

    #[test]
    fn fv_is_p_and_vf_is_p_after_sigma_commutation() {
        let field = FqField::new(2, 2).unwrap();
        let r = 3u8;
        let ring = WCoeffRing::new(field.clone(), r).unwrap();
        let lower = WCoeffRing::new(field.clone(), r - 1).unwrap();
        let a = ring.from_witt_coords(&sample_coords(&field, r, 2)).unwrap();
        let a_low = ring.reduce(&a);
        // F(V(x)) = p·x on the lower level
        let fv = ring.frobenius_down(&ring.verschiebung_from_below(&a_low));
        assert_eq!(fv, lower.int_mul(2, &a_low));
        // V(F(x)) = p·x on the upper level
        let vf = ring.verschiebung_from_below(&ring.frobenius_down(&a));
        assert_eq!(vf, ring.int_mul(2, &a));
    }
}
