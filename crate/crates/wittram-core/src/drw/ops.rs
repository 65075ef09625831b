//! The operator algebra on canonical forms.
//!
//! Every operator acts componentwise through closed-form rules on the
//! four component shapes (`A`/`B` at `q = 0`, their `dlog π`/`dV^s`
//! counterparts at `q = 1`). The rules were derived once from the
//! coordinate-level definitions (convert to Witt coordinates over `K`,
//! apply the operator there, convert back) and are pinned against that
//! oracle by the integration suites; the closed forms are what ships.
//!
//! Index behaviour: `d`, `F`, `V` preserve the grading index; `R` and
//! the Cartier operator divide it by `p` (killing bottom-level
//! components); `[π^l]·` shifts it by `p^{m−1}l`; products add it.

use super::{div_ceil_i64, level_at, CanonicalForm, DrwCtx, IndexCase};
use crate::error::Error;
use crate::series::TruncSeries;
use crate::witt::WittVector;
use crate::wring::WCoeff;
use crate::Result;
use std::collections::BTreeMap;

impl DrwCtx {
    fn check_rings_for(&self, form_m: u8) -> Result<()> {
        if form_m as usize > self.m() as usize + 1 {
            return Err(Error::caps(format!(
                "form level {} exceeds the context's coefficient rings (≤ {})",
                form_m,
                self.m() + 1
            )));
        }
        Ok(())
    }

    /// The exterior derivative. Index-preserving; `q = 1` forms map to
    /// the zero 2-form (`W_mΩ^2` vanishes for `K = F_q((π))`).
    pub fn op_d(&self, f: &CanonicalForm) -> Result<CanonicalForm> {
        self.check_rings_for(f.m)?;
        if f.q >= 1 {
            // d of the unknown tail also lands in the vanishing 2-forms,
            // so the zero answer is exact
            return Ok(CanonicalForm::zero(f.q + 1, f.m));
        }
        let mut out = CanonicalForm {
            q: 1,
            m: f.m,
            comps: BTreeMap::new(),
            hi: f.hi,
        };
        for (&n, c) in &f.comps {
            match IndexCase::split(self.p(), f.m, n) {
                IndexCase::A { i } => {
                    let ring = self.ring(f.m);
                    self.insert_comp(&mut out, n, ring.int_mul(i, c));
                }
                IndexCase::B { .. } => {
                    // d(V^s(c[π]^i)) = dV^s(c[π]^i): same data, q = 1
                    self.insert_comp(&mut out, n, c.clone());
                }
            }
        }
        Ok(out)
    }

    /// Frobenius `F: W_mΩ^q → W_{m−1}Ω^q`. Index-preserving; at
    /// `m = 1` the target complex is zero.
    pub fn op_f(&self, f: &CanonicalForm) -> Result<CanonicalForm> {
        self.check_rings_for(f.m)?;
        if f.m <= 1 {
            return Ok(CanonicalForm::zero(f.q, 0));
        }
        let m = f.m;
        let mut out = CanonicalForm {
            q: f.q,
            m: m - 1,
            comps: BTreeMap::new(),
            hi: f.hi,
        };
        for (&n, c) in &f.comps {
            let (out_n, out_c) = match (f.q, IndexCase::split(self.p(), m, n)) {
                (0, IndexCase::A { .. }) | (1, IndexCase::A { .. }) => {
                    // F(c[π]^i) = F(c)[π]^{pi}; dlogπ is F-invariant
                    (n, self.ring(m).frobenius_down(c))
                }
                (0, IndexCase::B { s: 1, .. }) => {
                    // F(V(c[π]^i)) = p·c[π]^i
                    (n, self.ring(m - 1).int_mul(self.p() as i64, c))
                }
                (0, IndexCase::B { s, .. }) => {
                    // F(V^s(x)) = p·V^{s−1}(x)
                    (n, self.ring(m - s).int_mul(self.p() as i64, c))
                }
                (1, IndexCase::B { s: 1, i }) => {
                    // F(dV(c[π]^i)) = d(c[π]^i) = i·c[π]^i dlogπ
                    (n, self.ring(m - 1).int_mul(i, c))
                }
                (1, IndexCase::B { .. }) => {
                    // F(dV^s(x)) = dV^{s−1}(x)
                    (n, c.clone())
                }
                _ => return Err(Error::domain("F is defined for q ∈ {0, 1}")),
            };
            self.insert_comp(&mut out, out_n, out_c);
        }
        Ok(out)
    }

    /// Verschiebung `V: W_mΩ^q → W_{m+1}Ω^q`. Index-preserving.
    pub fn op_v(&self, f: &CanonicalForm) -> Result<CanonicalForm> {
        self.check_rings_for(f.m + 1)?;
        let m = f.m;
        let p = self.p();
        let mut out = CanonicalForm {
            q: f.q,
            m: m + 1,
            comps: BTreeMap::new(),
            hi: f.hi,
        };
        for (&n, c) in &f.comps {
            let (out_n, out_c) = match (f.q, IndexCase::split(p, m, n)) {
                (0, IndexCase::A { i }) if i % p as i64 == 0 => {
                    // V(c·F([π]^{i/p})) = V(c)·[π]^{i/p}
                    (n, self.ring(m + 1).verschiebung_from_below(c))
                }
                (0, IndexCase::A { .. }) => {
                    // becomes the s = 1 deep component V(c[π]^i)
                    (n, c.clone())
                }
                (0, IndexCase::B { .. }) => (n, c.clone()),
                (1, IndexCase::A { i }) if i % p as i64 == 0 => {
                    (n, self.ring(m + 1).verschiebung_from_below(c))
                }
                (1, IndexCase::A { i }) => {
                    // V(c[π]^i dlogπ) = p·i^{-1}·dV(c[π]^i)
                    let ring = self.ring(m);
                    let inv = ring.int_inv(i)?;
                    let scale = ((p as u128 * inv as u128) % ring.pr() as u128) as i64;
                    (n, ring.int_mul(scale, c))
                }
                (1, IndexCase::B { s, .. }) => {
                    // V(dV^s(x)) = p·dV^{s+1}(x)
                    (n, self.ring(m - s).int_mul(p as i64, c))
                }
                _ => return Err(Error::domain("V is defined for q ∈ {0, 1}")),
            };
            self.insert_comp(&mut out, out_n, out_c);
        }
        Ok(out)
    }

    /// Restriction `R: W_mΩ^q → W_{m−1}Ω^q`. Index map `n ↦ n/p`;
    /// components with `p ∤ n`-shape bottom coefficients vanish.
    pub fn op_r(&self, f: &CanonicalForm) -> Result<CanonicalForm> {
        self.check_rings_for(f.m)?;
        let p = self.p();
        if f.m <= 1 {
            return Ok(CanonicalForm::zero(f.q, 0));
        }
        let m = f.m;
        let mut out = CanonicalForm {
            q: f.q,
            m: m - 1,
            comps: BTreeMap::new(),
            hi: f.hi.map(|h| div_ceil_i64(h, p as i64)),
        };
        for (&n, c) in &f.comps {
            match IndexCase::split(p, m, n) {
                IndexCase::A { .. } => {
                    self.insert_comp(&mut out, n / p as i64, self.ring(m).reduce(c));
                }
                IndexCase::B { s, .. } => {
                    let r = m - s;
                    if r >= 2 {
                        self.insert_comp(&mut out, n / p as i64, self.ring(r).reduce(c));
                    }
                    // r = 1: R kills the bottom filtration step
                }
            }
        }
        Ok(out)
    }

    /// The multiplicative section `W_{m−1}Ω^q → W_mΩ^q` of `R` that
    /// underlies the `p`-power maps: index map `n ↦ pn`, coefficient
    /// map `c ↦ p·(lift of c)`.
    pub fn pbar(&self, f: &CanonicalForm) -> Result<CanonicalForm> {
        self.check_rings_for(f.m + 1)?;
        let m = f.m;
        let mut out = CanonicalForm {
            q: f.q,
            m: m + 1,
            comps: BTreeMap::new(),
            hi: f.hi.map(|h| {
                h.checked_mul(self.p() as i64)
                    .expect("index stays within i64")
            }),
        };
        for (&n, c) in &f.comps {
            let r = level_at(self.p(), m, n);
            let lifted = self.ring(r + 1).lift_from_below(c);
            let out_c = self.ring(r + 1).int_mul(self.p() as i64, &lifted);
            self.insert_comp(&mut out, n * self.p() as i64, out_c);
        }
        Ok(out)
    }

    /// Is `f` in `Z_1 = F(W_{m+1}Ω^q)`? Componentwise: at `q = 1`
    /// everything is, at `q = 0` the `A`-components with `p ∤ i` and all
    /// `B`-components need coefficients divisible by `p`.
    pub fn is_z1(&self, f: &CanonicalForm) -> bool {
        if f.q == 1 {
            return true;
        }
        let p = self.p();
        f.comps.iter().all(|(&n, c)| {
            match IndexCase::split(p, f.m, n) {
                IndexCase::A { i } if i % p as i64 == 0 => true,
                IndexCase::A { .. } => self.ring(f.m).is_divisible_by_p(c),
                IndexCase::B { s, .. } => self.ring(f.m - s).is_divisible_by_p(c),
            }
        })
    }

    /// Cartier operator `C: Z_1W_mΩ^q → W_mΩ^q`, `C(F(y)) = R(y)`.
    /// Index map `n ↦ n/p`.
    pub fn cartier(&self, f: &CanonicalForm) -> Result<CanonicalForm> {
        self.check_rings_for(f.m)?;
        let p = self.p();
        let m = f.m;
        let mut out = CanonicalForm {
            q: f.q,
            m,
            comps: BTreeMap::new(),
            hi: f.hi.map(|h| div_ceil_i64(h, p as i64)),
        };
        for (&n, c) in &f.comps {
            let case = IndexCase::split(p, m, n);
            match (f.q, case) {
                (0, IndexCase::A { i }) if i % p as i64 == 0 => {
                    self.insert_comp(&mut out, n / p as i64, self.ring(m).sigma_inv(c));
                }
                (0, IndexCase::A { i }) => {
                    let ring = self.ring(m);
                    if !ring.is_divisible_by_p(c) {
                        return Err(Error::domain(format!(
                            "not in Z_1: A-component at n = {n} (i = {i}) has \
                             coefficient not divisible by p"
                        )));
                    }
                    if m >= 2 {
                        self.insert_comp(&mut out, n / p as i64, ring.div_p_exact(c)?);
                    }
                }
                (0, IndexCase::B { s, .. }) => {
                    let r = m - s;
                    let ring = self.ring(r);
                    if !ring.is_divisible_by_p(c) {
                        return Err(Error::domain(format!(
                            "not in Z_1: deep component at n = {n} has coefficient \
                             not divisible by p"
                        )));
                    }
                    if r >= 2 {
                        self.insert_comp(&mut out, n / p as i64, ring.div_p_exact(c)?);
                    }
                }
                (1, IndexCase::A { i }) if i % p as i64 == 0 => {
                    self.insert_comp(&mut out, n / p as i64, self.ring(m).sigma_inv(c));
                }
                (1, IndexCase::A { i }) => {
                    if m >= 2 {
                        let ring = self.ring(m);
                        let scaled = ring.int_mul(ring.int_inv(i)? as i64, c);
                        self.insert_comp(&mut out, n / p as i64, ring.reduce(&scaled));
                    }
                }
                (1, IndexCase::B { s, .. }) => {
                    let r = m - s;
                    if r >= 2 {
                        self.insert_comp(&mut out, n / p as i64, self.ring(r).reduce(c));
                    }
                }
                _ => return Err(Error::domain("Cartier is defined for q ∈ {0, 1}")),
            }
        }
        Ok(out)
    }

    /// Multiplication by `[π^l]_m = [π]_m^l`: bijective index shift
    /// `n ↦ n + p^{m−1}l`.
    pub fn mul_pi_power(&self, f: &CanonicalForm, l: i64) -> Result<CanonicalForm> {
        self.check_rings_for(f.m)?;
        let p = self.p();
        let m = f.m;
        let step = p.pow(m as u32 - 1) as i64;
        let shift = step
            .checked_mul(l)
            .ok_or_else(|| Error::domain("π-power shift overflows the index range"))?;
        let mut out = CanonicalForm {
            q: f.q,
            m,
            comps: BTreeMap::new(),
            hi: f.hi.map(|h| h + shift),
        };
        for (&n, c) in &f.comps {
            let out_c = match (f.q, IndexCase::split(p, m, n)) {
                (1, IndexCase::B { s, i }) => {
                    // [π]^l·dV^s(c[π]^i) = (i/j)·dV^s(c[π]^j), j = i + p^s l
                    let ring = self.ring(m - s);
                    let j = i + p.pow(s as u32) as i64 * l;
                    let inv_j = ring.int_inv(j)?;
                    let scale = ((i.rem_euclid(ring.pr() as i64) as u128 * inv_j as u128)
                        % ring.pr() as u128) as i64;
                    ring.int_mul(scale, c)
                }
                _ => c.clone(),
            };
            self.insert_comp(&mut out, n + shift, out_c);
        }
        Ok(out)
    }

    // ── products ────────────────────────────────────────────────────

    /// Push `V^s(z·[π]^j)` (`z` at level `m−s`) into canonical shape:
    /// while `p | j`, one `V` moves inside; lands at `A` when `s`
    /// exhausts.
    fn normalize_vs(&self, out: &mut CanonicalForm, n: i64, mut s: u8, mut j: i64, z: WCoeff) {
        let p = self.p() as i64;
        let m = out.m;
        let mut z = z;
        while s > 0 && j % p == 0 {
            z = self.ring(m - s + 1).verschiebung_from_below(&z);
            j /= p;
            s -= 1;
        }
        debug_assert_eq!(
            IndexCase::split(self.p(), m, n).siv(m).0,
            s,
            "normalized V-depth must match the canonical case of n = {n}"
        );
        self.insert_comp(out, n, z);
    }

    /// Push `V^s(z·[π]^j·dlogπ)` into canonical shape:
    /// `V^s(z[π]^j dlogπ) = p^s·j^{-1}·dV^s(z[π]^j)` once `p ∤ j`.
    fn normalize_vs_dlog(
        &self,
        out: &mut CanonicalForm,
        n: i64,
        mut s: u8,
        mut j: i64,
        z: WCoeff,
    ) -> Result<()> {
        let p = self.p() as i64;
        let m = out.m;
        let mut z = z;
        while s > 0 && j % p == 0 {
            z = self.ring(m - s + 1).verschiebung_from_below(&z);
            j /= p;
            s -= 1;
        }
        if s == 0 {
            // z[π]^j dlogπ: A-shape
            self.insert_comp(out, n, z);
        } else {
            let ring = self.ring(m - s);
            let inv_j = ring.int_inv(j)?;
            let ps = (p as u64).pow(s as u32) % ring.pr();
            let scale = ((ps as u128 * inv_j as u128) % ring.pr() as u128) as i64;
            self.insert_comp(out, n, ring.int_mul(scale, &z));
        }
        Ok(())
    }

    /// Product of a `q = 0` form with a `q ∈ {0, 1}` form at the same
    /// level. Index-additive; `q = 1 × q = 1` lands in the vanishing
    /// 2-forms.
    pub fn mul_forms(&self, a: &CanonicalForm, b: &CanonicalForm) -> Result<CanonicalForm> {
        if a.m != b.m {
            return Err(Error::domain("cannot multiply forms of different levels"));
        }
        if a.q > 0 {
            if b.q > 0 {
                // 2-forms vanish identically over K, so this is exact
                return Ok(CanonicalForm::zero(a.q + b.q, a.m));
            }
            return self.mul_forms(b, a);
        }
        self.check_rings_for(a.m)?;
        let m = a.m;
        let p = self.p();
        // precision: unknown tail of one factor times the lowest term of
        // the other
        let hi = {
            let mut h: Option<i64> = None;
            let mut push = |v: Option<i64>| {
                if let Some(v) = v {
                    h = Some(h.map_or(v, |x: i64| x.min(v)));
                }
            };
            push(a.hi.and_then(|ha| b.index_lb().map(|lb| ha + lb)));
            push(b.hi.and_then(|hb| a.index_lb().map(|la| hb + la)));
            h
        };
        let mut out = CanonicalForm {
            q: b.q,
            m,
            comps: BTreeMap::new(),
            hi,
        };
        for (&n1, c1) in &a.comps {
            let case1 = IndexCase::split(p, m, n1);
            for (&n2, c2) in &b.comps {
                let n = n1 + n2;
                let case2 = IndexCase::split(p, m, n2);
                match (case1, b.q, case2) {
                    // q=0 × q=0
                    (IndexCase::A { .. }, 0, IndexCase::A { .. }) => {
                        let ring = self.ring(m);
                        self.insert_comp(&mut out, n, ring.mul(c1, c2));
                    }
                    (IndexCase::A { .. }, 0, IndexCase::B { s: s2, .. }) => {
                        // x·V^{s}(y) = V^{s}(F^{s}(x)·y)
                        let ring = self.ring(m - s2);
                        let mut fc = c1.clone();
                        for t in 0..s2 {
                            fc = self.ring(m - t).frobenius_down(&fc);
                        }
                        self.insert_comp(&mut out, n, ring.mul(&fc, c2));
                    }
                    (IndexCase::B { s: s1, .. }, 0, IndexCase::A { .. }) => {
                        // V^{s}(x)·y = V^{s}(x·F^{s}(y))
                        let ring = self.ring(m - s1);
                        let mut fc = c2.clone();
                        for t in 0..s1 {
                            fc = self.ring(m - t).frobenius_down(&fc);
                        }
                        self.insert_comp(&mut out, n, ring.mul(c1, &fc));
                    }
                    (IndexCase::B { s: s1, i: i1 }, 0, IndexCase::B { s: s2, i: i2 }) => {
                        // V^{s}(x)·V^{s'}(y) with s ≤ s':
                        //   p^{s}·V^{s'}(F^{s'−s}(x)·y)
                        let (s_lo, i_lo, c_lo, s_hi, i_hi, c_hi) = if s1 <= s2 {
                            (s1, i1, c1, s2, i2, c2)
                        } else {
                            (s2, i2, c2, s1, i1, c1)
                        };
                        let ring = self.ring(m - s_hi);
                        let mut fc = c_lo.clone();
                        for t in 0..(s_hi - s_lo) {
                            fc = self.ring(m - s_lo - t).frobenius_down(&fc);
                        }
                        let prod = ring.mul(&fc, c_hi);
                        let ps = ring.int_mul((p.pow(s_lo as u32) % ring.pr()) as i64, &prod);
                        let j = p.pow((s_hi - s_lo) as u32) as i64 * i_lo + i_hi;
                        self.normalize_vs(&mut out, n, s_hi, j, ps);
                    }
                    // q=0 × q=1
                    (IndexCase::A { .. }, 1, IndexCase::A { .. }) => {
                        let ring = self.ring(m);
                        self.insert_comp(&mut out, n, ring.mul(c1, c2));
                    }
                    (IndexCase::A { i: i1 }, 1, IndexCase::B { s: s2, i: i2 }) => {
                        // x·dV^{s}(y) = dV^{s}(F^{s}(x)y)·(i2/j), j = p^{s}i1+i2
                        let ring = self.ring(m - s2);
                        let mut fc = c1.clone();
                        for t in 0..s2 {
                            fc = self.ring(m - t).frobenius_down(&fc);
                        }
                        let j = p.pow(s2 as u32) as i64 * i1 + i2;
                        let inv_j = ring.int_inv(j)?;
                        let i2r = i2.rem_euclid(ring.pr() as i64) as u128;
                        let scale = ((i2r * inv_j as u128) % ring.pr() as u128) as i64;
                        let prod = ring.mul(&fc, c2);
                        self.insert_comp(&mut out, n, ring.int_mul(scale, &prod));
                    }
                    (IndexCase::B { s: s1, i: i1 }, 1, IndexCase::A { i: i2 }) => {
                        // V^{s}(x)·(y dlogπ) = V^{s}(x·F^{s}(y)·dlogπ)
                        let ring = self.ring(m - s1);
                        let mut fc = c2.clone();
                        for t in 0..s1 {
                            fc = self.ring(m - t).frobenius_down(&fc);
                        }
                        let j = i1 + p.pow(s1 as u32) as i64 * i2;
                        let z = ring.mul(c1, &fc);
                        self.normalize_vs_dlog(&mut out, n, s1, j, z)?;
                    }
                    (IndexCase::B { s: s1, i: i1 }, 1, IndexCase::B { s: s2, i: i2 }) => {
                        if s2 > s1 {
                            // V^{s1}(x)·dV^{s2}(y) =
                            //   p^{s1}·(i2/j)·dV^{s2}(F^{s2−s1}(x)·y),
                            //   j = p^{s2−s1}·i1 + i2
                            let ring = self.ring(m - s2);
                            let mut fc = c1.clone();
                            for t in 0..(s2 - s1) {
                                fc = self.ring(m - s1 - t).frobenius_down(&fc);
                            }
                            let j = p.pow((s2 - s1) as u32) as i64 * i1 + i2;
                            let inv_j = ring.int_inv(j)?;
                            let i2r = i2.rem_euclid(ring.pr() as i64) as u128;
                            let ps = (p.pow(s1 as u32) % ring.pr().max(1)) as u128;
                            let scale =
                                ((i2r * inv_j as u128 % ring.pr() as u128) * ps
                                    % ring.pr() as u128) as i64;
                            let prod = ring.mul(&fc, c2);
                            self.insert_comp(&mut out, n, ring.int_mul(scale, &prod));
                        } else {
                            // s2 ≤ s1: V^{s1}(x)·dV^{s2}(y) =
                            //   i2·V^{s1}(x·F^{s1−s2}(y)·[π]^{…}·dlogπ)
                            let ring = self.ring(m - s1);
                            let mut fc = c2.clone();
                            for t in 0..(s1 - s2) {
                                fc = self.ring(m - s2 - t).frobenius_down(&fc);
                            }
                            let j = i1 + p.pow((s1 - s2) as u32) as i64 * i2;
                            let z = ring.int_mul(i2, &ring.mul(c1, &fc));
                            self.normalize_vs_dlog(&mut out, n, s1, j, z)?;
                        }
                    }
                    _ => {
                        return Err(Error::domain(
                            "products are defined for q ∈ {0, 1} with at most one odd factor",
                        ))
                    }
                }
            }
        }
        Ok(out)
    }

    /// Multiplication by a Witt vector over `K` (converted through the
    /// canonical decomposition first).
    pub fn scalar_mul(
        &self,
        w: &WittVector<TruncSeries>,
        f: &CanonicalForm,
    ) -> Result<CanonicalForm> {
        let wf = self.to_canonical_w(w)?;
        self.mul_forms(&wf, f)
    }

    /// The coefficient of the `n = 0` component of a `q = 1` form — the
    /// invariant that pairs `dlogπ` to `[1]_m`.
    pub fn residue(&self, f: &CanonicalForm) -> Result<WCoeff> {
        if f.q != 1 {
            return Err(Error::domain("residue takes a q = 1 form"));
        }
        if let Some(h) = f.hi {
            if h <= 0 {
                return Err(Error::precision(
                    "residue needs the n = 0 component, which is beyond this form's precision",
                ));
            }
        }
        Ok(f.comps
            .get(&0)
            .cloned()
            .unwrap_or_else(|| self.ring(f.m).zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::FqField;
    use crate::sample;
    use crate::witt::TableStore;
    use rand::Rng;

    fn ctx(p: u64, e: u8, m: u8) -> DrwCtx {
        DrwCtx::with_store(FqField::new(p, e).unwrap(), m, TableStore::new(None)).unwrap()
    }

    fn random_form(c: &DrwCtx, rng: &mut impl rand::Rng, q: u8) -> CanonicalForm {
        sample::random_canonical_form(c, rng, q, -9, 10, 4)
    }

    #[test]
    fn restriction_examples() {
        // p=2, m=2: component at n=2 maps to n=1; component at n=1 dies
        let c = ctx(2, 1, 2);
        let mut f = CanonicalForm::zero(0, 2);
        c.insert_comp(&mut f, 2, c.ring(2).from_int(3));
        c.insert_comp(&mut f, 1, c.ring(1).from_int(1));
        let rf = c.op_r(&f).unwrap();
        assert_eq!(rf.m, 1);
        assert_eq!(rf.comps.keys().copied().collect::<Vec<_>>(), vec![1]);
        assert_eq!(rf.comps[&1], c.ring(1).from_int(1)); // 3 mod 2
    }

    #[test]
    fn operator_commutation_laws_on_random_forms() {
        for (p, e, m) in [(2u64, 1u8, 2u8), (2, 2, 3), (3, 1, 2), (3, 2, 1), (5, 1, 3)] {
            let c = ctx(p, e, m);
            let mut rng = sample::rng(0xD1CE + p + 100 * m as u64 + 10_000 * e as u64);
            for q in [0u8, 1] {
                for _ in 0..25 {
                    let f = random_form(&c, &mut rng, q);
                    let pf = c.int_mul_form(p as i64, &f);

                    // FV = p and VF = p
                    let fv = c.op_f(&c.op_v(&f).unwrap()).unwrap();
                    assert_eq!(fv, pf, "FV = p at (p,e,m,q)=({p},{e},{m},{q})");
                    let vf = c.op_v(&c.op_f(&f).unwrap()).unwrap();
                    if m >= 2 {
                        assert_eq!(vf, pf, "VF = p at (p,e,m,q)=({p},{e},{m},{q})");
                    }

                    // RV = VR
                    let rv = c.op_r(&c.op_v(&f).unwrap()).unwrap();
                    let vr = c.op_v(&c.op_r(&f).unwrap()).unwrap();
                    assert_eq!(rv, vr, "RV = VR at (p,e,m,q)=({p},{e},{m},{q})");

                    // RF = FR
                    let rf = c.op_r(&c.op_f(&f).unwrap()).unwrap();
                    let fr = c.op_f(&c.op_r(&f).unwrap()).unwrap();
                    assert_eq!(rf, fr, "RF = FR at (p,e,m,q)=({p},{e},{m},{q})");

                    if q == 0 {
                        // FdV = d
                        let fdv = c.op_f(&c.op_d(&c.op_v(&f).unwrap()).unwrap()).unwrap();
                        let df = c.op_d(&f).unwrap();
                        assert_eq!(fdv, df, "FdV = d at (p,e,m)=({p},{e},{m})");

                        // dF = pFd
                        let d_f = c.op_d(&c.op_f(&f).unwrap()).unwrap();
                        let pfd = c.int_mul_form(p as i64, &c.op_f(&df).unwrap());
                        assert_eq!(d_f, pfd, "dF = pFd at (p,e,m)=({p},{e},{m})");

                        // Rd = dR
                        let rd = c.op_r(&df).unwrap();
                        let dr = c.op_d(&c.op_r(&f).unwrap()).unwrap();
                        assert_eq!(rd, dr, "Rd = dR at (p,e,m)=({p},{e},{m})");

                        // d∘d = 0
                        assert!(c.op_d(&df).unwrap().is_zero_within_precision());
                    }
                }
            }
        }
    }

    #[test]
    fn cartier_of_frobenius_is_restriction() {
        for (p, e, m) in [(2u64, 1u8, 2u8), (3, 1, 2), (2, 2, 3)] {
            let c = ctx(p, e, m);
            let mut rng = sample::rng(0xCA47 + p + m as u64);
            for q in [0u8, 1] {
                for _ in 0..30 {
                    // y lives one level up; its coefficient rings go up to m+1
                    let y = {
                        let mut f = CanonicalForm::zero(q, m + 1);
                        for _ in 0..4 {
                            let n = rng.gen_range(-9..10);
                            let ring = c.ring(level_at(p, m + 1, n));
                            let coeff = sample::random_wcoeff_nonzero(ring, &mut rng);
                            c.insert_comp(&mut f, n, coeff);
                        }
                        f
                    };
                    let fy = c.op_f(&y).unwrap();
                    assert!(c.is_z1(&fy), "F-images are in Z_1");
                    let cfy = c.cartier(&fy).unwrap();
                    let ry = c.op_r(&y).unwrap();
                    assert_eq!(cfy, ry, "CF = R at (p,e,m,q)=({p},{e},{m},{q})");
                }
            }
        }
    }

    #[test]
    fn z1_matches_vanishing_of_fm1_d() {
        // q=0: f ∈ Z_1 ⟺ F^{m−1}(df) = 0
        for (p, m) in [(2u64, 2u8), (2, 3), (3, 2)] {
            let c = ctx(p, 1, m);
            let mut rng = sample::rng(0x21AA + p * 7 + m as u64);
            let mut seen_in = 0;
            let mut seen_out = 0;
            for _ in 0..120 {
                let f = random_form(&c, &mut rng, 0);
                let mut g = c.op_d(&f).unwrap();
                for _ in 0..m - 1 {
                    g = c.op_f(&g).unwrap();
                }
                let vanishes = g.is_zero_within_precision();
                let z1 = c.is_z1(&f);
                assert_eq!(z1, vanishes, "(p,m)=({p},{m}) f={f:?}");
                if z1 {
                    seen_in += 1
                } else {
                    seen_out += 1
                }
            }
            assert!(seen_in > 0 && seen_out > 0, "test must exercise both sides");
        }
    }

    #[test]
    fn pi_power_shift_is_scalar_mul_by_teichmuller() {
        for (p, e, m) in [(2u64, 1u8, 2u8), (3, 2, 2), (2, 1, 3)] {
            let c = ctx(p, e, m);
            let mut rng = sample::rng(0x9139 + p + m as u64);
            for q in [0u8, 1] {
                for l in [-2i64, 1, 3] {
                    let f = random_form(&c, &mut rng, q);
                    let shifted = c.mul_pi_power(&f, l).unwrap();
                    let w = c
                        .teich(&TruncSeries::pi_power(c.field().clone(), l))
                        .unwrap();
                    let via_mul = c.scalar_mul(&w, &f).unwrap();
                    assert_eq!(shifted, via_mul, "(p,e,m,q,l)=({p},{e},{m},{q},{l})");
                    // inverse pair
                    let back = c.mul_pi_power(&shifted, -l).unwrap();
                    assert_eq!(back, f);
                }
            }
        }
    }

    #[test]
    fn products_match_witt_multiplication_at_q0() {
        // canonical-product table vs coordinate-level witt_mul
        for (p, e, m) in [(2u64, 1u8, 2u8), (2, 1, 3), (3, 1, 2), (3, 2, 2)] {
            let c = ctx(p, e, m);
            let witt = c.witt_over_k(m).unwrap();
            let mut rng = sample::rng(0xAB42 + p * 31 + m as u64 + e as u64 * 7);
            for _ in 0..20 {
                let a = random_form(&c, &mut rng, 0);
                let b = random_form(&c, &mut rng, 0);
                let prod = c.mul_forms(&a, &b).unwrap();
                let wa = c.from_canonical_w(&a).unwrap();
                let wb = c.from_canonical_w(&b).unwrap();
                let wprod = witt.mul(&wa, &wb).unwrap();
                let expected = c.to_canonical_w(&wprod).unwrap();
                assert_eq!(
                    prod, expected,
                    "component products ≠ witt_mul at (p,e,m)=({p},{e},{m})"
                );
            }
        }
    }

    #[test]
    fn scalar_identity_and_leibniz() {
        let c = ctx(2, 1, 3);
        let mut rng = sample::rng(0x1E1B);
        let one = c.witt_over_k(3).unwrap().one();
        for q in [0u8, 1] {
            let f = random_form(&c, &mut rng, q);
            assert_eq!(c.scalar_mul(&one, &f).unwrap(), f);
        }
        // d(a·b) = da·b + a·db for q = 0 forms a, b
        for (p, e, m) in [(2u64, 1u8, 2u8), (3, 1, 2), (2, 2, 3)] {
            let c = ctx(p, e, m);
            let mut rng = sample::rng(0x1E1B2 + p + m as u64);
            for _ in 0..25 {
                let a = random_form(&c, &mut rng, 0);
                let b = random_form(&c, &mut rng, 0);
                let lhs = c.op_d(&c.mul_forms(&a, &b).unwrap()).unwrap();
                let da_b = c.mul_forms(&b, &c.op_d(&a).unwrap()).unwrap();
                let a_db = c.mul_forms(&a, &c.op_d(&b).unwrap()).unwrap();
                let rhs = c.add_forms(&da_b, &a_db).unwrap();
                assert_eq!(lhs, rhs, "Leibniz at (p,e,m)=({p},{e},{m})");
            }
        }
    }

    #[test]
    fn residue_reads_the_dlog_coefficient() {
        let c = ctx(3, 1, 2);
        let mut f = CanonicalForm::zero(1, 2);
        c.insert_comp(&mut f, 0, c.ring(2).from_int(5));
        c.insert_comp(&mut f, 3, c.ring(2).from_int(1));
        assert_eq!(c.residue(&f).unwrap(), c.ring(2).from_int(5));
        assert_eq!(
            c.residue(&CanonicalForm::zero(1, 2)).unwrap(),
            c.ring(2).zero()
        );
        // residue(d g) = 0
        let mut rng = sample::rng(77);
        for _ in 0..10 {
            let g = random_form(&c, &mut rng, 0);
            let dg = c.op_d(&g).unwrap();
            assert!(c.residue(&dg).unwrap().is_zero());
        }
        // unknown window at or below 0 is an error
        let cut = CanonicalForm::zero_to(1, 2, 0);
        assert!(c.residue(&cut).is_err());
    }
}

