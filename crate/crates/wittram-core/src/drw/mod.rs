//! Canonical coordinates for `W_mΩ^q_K`, `K = F_q((π))`, `q ∈ {0, 1}`.
//!
//! Over the perfect residue field `S = F_q` every higher form group
//! `W_rΩ^{≥1}_S` vanishes, so each graded index `n ∈ ℤ` of the canonical
//! decomposition carries exactly **one** Witt coefficient
//! `c ∈ W_{φ(n)}(F_q)`:
//!
//! * `φ(n) = m` (A-case, `p^{m−1} | n`, `i = n/p^{m−1}`):
//!   `q = 0`: `c·[π]^i` — `q = 1`: `c·[π]^i·dlog[π]`;
//! * `φ(n) = m − s` (B-case, `s = m−1−v_p(n)`, `i = n/p^{v_p(n)}` prime
//!   to `p`): `q = 0`: `V^s(c·[π]^i)` — `q = 1`: `dV^s(c·[π]^i)`.
//!
//! A [`CanonicalForm`] stores the finitely many components below a
//! precision index `hi` (components at index `≥ hi` are *unknown*, not
//! zero; `hi = None` means exact). Conversions to and from Witt
//! coordinates over `K` go through greedy graded peeling: repeatedly
//! extract the least-index component from the leading series
//! coefficients and subtract. All per-component operator actions live in
//! [`ops`]; the expression front end in [`expr`]; text syntax in [`text`].

pub mod expr;
pub mod ops;
pub mod text;

use crate::error::Error;
use crate::fq::{FqElt, FqField};
use crate::series::{SeriesRing, TruncSeries, Valuation};
use crate::witt::{TableStore, Witt, WittParams, WittVector};
use crate::wring::{WCoeff, WCoeffRing};
use crate::Result;
use std::collections::BTreeMap;

/// Safety bound on peeling rounds (each round strictly increases the
/// integer grading index, so hitting this means a bug, not a big input).
const MAX_PEELS: usize = 200_000;

/// `⌈a/b⌉` for `b > 0` (correct for negative `a`, unlike `(a+b−1)/b`).
pub(crate) fn div_ceil_i64(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

/// The level function `φ`: the coefficient of index `n` lives in
/// `W_{φ(n)}(F_q)`.
pub fn level_at(p: u64, m: u8, n: i64) -> u8 {
    if n == 0 {
        return m;
    }
    let mut v = 0u8;
    let mut x = n.unsigned_abs();
    while v < m - 1 && x % p == 0 {
        x /= p;
        v += 1;
    }
    if v >= m - 1 {
        m
    } else {
        v + 1
    }
}

/// Case split of an index under the canonical decomposition.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IndexCase {
    /// `n = p^{m−1}·i`; coefficient in `W_m`.
    A { i: i64 },
    /// `n = p^{m−1−s}·i` with `p ∤ i`, `1 ≤ s ≤ m−1`; coefficient in
    /// `W_{m−s}`.
    B { s: u8, i: i64 },
}

impl IndexCase {
    pub fn split(p: u64, m: u8, n: i64) -> IndexCase {
        let r = level_at(p, m, n);
        if r == m {
            IndexCase::A {
                i: n / (p.pow(m as u32 - 1) as i64),
            }
        } else {
            let s = m - r;
            IndexCase::B {
                s,
                i: n / (p.pow((m - 1 - s) as u32) as i64),
            }
        }
    }

    /// `(s, i, r)` with the A-case read as `s = 0`, `r = m`.
    pub fn siv(&self, m: u8) -> (u8, i64, u8) {
        match *self {
            IndexCase::A { i } => (0, i, m),
            IndexCase::B { s, i } => (s, i, m - s),
        }
    }
}

/// An element of `W_mΩ^q_K` in canonical coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CanonicalForm {
    pub q: u8,
    pub m: u8,
    /// `n ↦ c_n ∈ W_{φ(n)}(F_q)`, nonzero entries only, all `< hi`.
    pub comps: BTreeMap<i64, WCoeff>,
    /// Components at index `≥ hi` are unknown; `None` = exact.
    pub hi: Option<i64>,
}

impl CanonicalForm {
    pub fn zero(q: u8, m: u8) -> Self {
        CanonicalForm {
            q,
            m,
            comps: BTreeMap::new(),
            hi: None,
        }
    }

    pub fn zero_to(q: u8, m: u8, hi: i64) -> Self {
        CanonicalForm {
            q,
            m,
            comps: BTreeMap::new(),
            hi: Some(hi),
        }
    }

    pub fn is_zero_within_precision(&self) -> bool {
        self.comps.is_empty()
    }

    /// Least index with a nonzero component.
    pub fn support_min(&self) -> Option<i64> {
        self.comps.keys().next().copied()
    }

    pub fn support_max(&self) -> Option<i64> {
        self.comps.keys().next_back().copied()
    }

    /// Lower bound for the grading of this form (`None` = exact zero,
    /// which sits above every index).
    pub fn index_lb(&self) -> Option<i64> {
        match self.support_min() {
            Some(n) => Some(n),
            None => self.hi,
        }
    }

    /// Do the two forms agree at every index known to both?
    pub fn eq_within_precision(&self, other: &Self) -> bool {
        if self.q != other.q || self.m != other.m {
            return false;
        }
        let bound = match (self.hi, other.hi) {
            (None, None) => None,
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (Some(a), Some(b)) => Some(a.min(b)),
        };
        let within = |n: i64| bound.map_or(true, |h| n < h);
        for (n, c) in &self.comps {
            if within(*n) && other.comps.get(n) != Some(c) {
                return false;
            }
        }
        for (n, c) in &other.comps {
            if within(*n) && self.comps.get(n) != Some(c) {
                return false;
            }
        }
        true
    }
}

/// Context for one `(F_q, m)`: coefficient rings for every level
/// `1..=m+1` plus the structure-table store for series-level Witt
/// arithmetic.
pub struct DrwCtx {
    field: FqField,
    m: u8,
    rings: Vec<WCoeffRing>,
    store: TableStore,
    sring: SeriesRing,
}

impl DrwCtx {
    pub fn new(field: FqField, m: u8) -> Result<Self> {
        Self::with_store(field, m, TableStore::from_env())
    }

    pub fn with_store(field: FqField, m: u8, store: TableStore) -> Result<Self> {
        crate::caps::check_m(m)?;
        let mut rings = Vec::with_capacity(m as usize + 1);
        for r in 1..=m + 1 {
            rings.push(WCoeffRing::new(field.clone(), r)?);
        }
        Ok(DrwCtx {
            sring: SeriesRing {
                field: field.clone(),
            },
            field,
            m,
            rings,
            store,
        })
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }
    pub fn m(&self) -> u8 {
        self.m
    }
    pub fn p(&self) -> u64 {
        self.field.p()
    }
    pub fn store(&self) -> &TableStore {
        &self.store
    }
    pub fn series_ring(&self) -> &SeriesRing {
        &self.sring
    }

    /// The coefficient ring `W_r(F_q)`, `1 ≤ r ≤ m+1`.
    pub fn ring(&self, r: u8) -> &WCoeffRing {
        &self.rings[(r - 1) as usize]
    }

    pub fn level(&self, n: i64) -> u8 {
        level_at(self.p(), self.m, n)
    }

    pub fn split(&self, n: i64) -> IndexCase {
        IndexCase::split(self.p(), self.m, n)
    }

    /// Witt arithmetic over `K` at a given length.
    pub fn witt_over_k(&self, level: u8) -> Result<Witt<'_, SeriesRing>> {
        Ok(Witt::new(
            WittParams::new(self.p(), level)?,
            &self.sring,
            &self.store,
        ))
    }

    /// Teichmüller representative `[f]_m ∈ W_m(K)`.
    pub fn teich(&self, f: &TruncSeries) -> Result<WittVector<TruncSeries>> {
        Ok(self.witt_over_k(self.m)?.teichmuller(f.clone()))
    }

    // ── component plumbing ──────────────────────────────────────────

    /// Add `c` into the component at `n` (fusing, dropping zero, and
    /// silently absorbing indices at or beyond `hi`).
    pub(crate) fn insert_comp(
        &self,
        form: &mut CanonicalForm,
        n: i64,
        c: WCoeff,
    ) {
        if c.is_zero() {
            return;
        }
        if let Some(h) = form.hi {
            if n >= h {
                return;
            }
        }
        let ring = self.ring(level_at(self.p(), form.m, n));
        match form.comps.entry(n) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = ring.add(e.get(), &c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_forms(&self, a: &CanonicalForm, b: &CanonicalForm) -> Result<CanonicalForm> {
        if a.q != b.q || a.m != b.m {
            return Err(Error::domain("cannot add forms of different (q, m)"));
        }
        let hi = match (a.hi, b.hi) {
            (None, None) => None,
            (Some(x), None) => Some(x),
            (None, Some(y)) => Some(y),
            (Some(x), Some(y)) => Some(x.min(y)),
        };
        let mut out = CanonicalForm {
            q: a.q,
            m: a.m,
            comps: BTreeMap::new(),
            hi,
        };
        for (&n, c) in a.comps.iter().chain(b.comps.iter()) {
            self.insert_comp(&mut out, n, c.clone());
        }
        Ok(out)
    }

    pub fn neg_form(&self, a: &CanonicalForm) -> CanonicalForm {
        let mut out = a.clone();
        for (&n, c) in &a.comps {
            let ring = self.ring(level_at(self.p(), a.m, n));
            out.comps.insert(n, ring.neg(c));
        }
        out
    }

    pub fn int_mul_form(&self, v: i64, a: &CanonicalForm) -> CanonicalForm {
        let mut out = CanonicalForm {
            q: a.q,
            m: a.m,
            comps: BTreeMap::new(),
            hi: a.hi,
        };
        for (&n, c) in &a.comps {
            let ring = self.ring(level_at(self.p(), a.m, n));
            self.insert_comp(&mut out, n, ring.int_mul(v, c));
        }
        out
    }

    pub fn sub_forms(&self, a: &CanonicalForm, b: &CanonicalForm) -> Result<CanonicalForm> {
        self.add_forms(a, &self.neg_form(b))
    }

    // ── conversions (q = 0) ─────────────────────────────────────────

    /// The exact Witt vector `c·[π]^i ∈ W_r(K)`: position `j` carries
    /// the monomial `x_j·π^{p^j i}`, where `(x_j)` are the Witt
    /// coordinates of `c`.
    pub fn monomial_witt(&self, r: u8, i: i64, c: &WCoeff) -> WittVector<TruncSeries> {
        let coords_fq = self.ring(r).to_witt_coords(c);
        let coords = coords_fq
            .iter()
            .enumerate()
            .map(|(j, &x)| {
                let expo = self.p().pow(j as u32) as i64 * i;
                TruncSeries::monomial(self.field.clone(), x, expo)
            })
            .collect();
        WittVector { coords }
    }

    /// The exact Witt vector over `K` of a single component `(n, c)` at
    /// length `m`: positions `j+s` carry the monomials `x_j·π^{p^j i}`,
    /// where `(x_j)` are the Witt coordinates of `c`.
    pub fn comp_to_witt_len(&self, m: u8, n: i64, c: &WCoeff) -> WittVector<TruncSeries> {
        let (s, i, r) = IndexCase::split(self.p(), m, n).siv(m);
        let inner = self.monomial_witt(r, i, c);
        let mut coords: Vec<TruncSeries> = (0..m)
            .map(|_| TruncSeries::zero(self.field.clone()))
            .collect();
        for (j, sc) in inner.coords.into_iter().enumerate() {
            coords[j + s as usize] = sc;
        }
        WittVector { coords }
    }

    /// [`Self::comp_to_witt_len`] at the context's length.
    pub fn comp_to_witt(&self, n: i64, c: &WCoeff) -> WittVector<TruncSeries> {
        self.comp_to_witt_len(self.m, n, c)
    }

    /// Greedy graded peeling `W_m(K) → Π_n F^{m,0}_n`.
    ///
    /// At each round the least grading index
    /// `ν = min_g p^{m−1−g}·v(coords[g])` is extracted: the leading
    /// series coefficients at the eligible positions are exactly the
    /// Witt coordinates of the component coefficient, which is then
    /// subtracted. `ν` strictly increases, so the loop reaches either
    /// zero or the precision horizon.
    ///
    /// The horizon is tracked **dynamically**: subtracting a component
    /// of negative valuation mixes a coordinate's unknown tail into
    /// lower positions of later coordinates (through the nonlinear Witt
    /// carries), so the residual's `min_g p^{m−1−g}·N_g` can shrink
    /// below the value computed from the input. Every reported
    /// component was read from certified coefficients, so the output is
    /// correct for *every* completion of the input; `hi` reports where
    /// that certainty stops.
    pub fn to_canonical_w(&self, w: &WittVector<TruncSeries>) -> Result<CanonicalForm> {
        self.to_canonical_len(self.m, w)
    }

    /// Peeling at an explicit Witt length `m ≤` the context's length
    /// (sub-levels arise when normalizing nested `V`-expressions).
    pub fn to_canonical_len(&self, m: u8, w: &WittVector<TruncSeries>) -> Result<CanonicalForm> {
        if m == 0 || m > self.m {
            return Err(Error::domain(format!(
                "peeling length {m} out of range 1..={}",
                self.m
            )));
        }
        if w.m() != m {
            return Err(Error::domain(format!(
                "expected a length-{m} Witt vector, got {}",
                w.m()
            )));
        }
        let p = self.p();
        let horizon = |x: &WittVector<TruncSeries>| -> Option<i64> {
            let mut h: Option<i64> = None;
            for (g, sc) in x.coords.iter().enumerate() {
                if let Some(ng) = sc.prec() {
                    let bound = p.pow((m as u32 - 1) - g as u32) as i64 * ng;
                    h = Some(h.map_or(bound, |v: i64| v.min(bound)));
                }
            }
            h
        };
        let mut form = CanonicalForm {
            q: 0,
            m,
            comps: BTreeMap::new(),
            hi: None,
        };
        let witt = self.witt_over_k(m)?;
        let mut x = w.clone();
        let mut last_nu: Option<i64> = None;
        for _round in 0..MAX_PEELS {
            let h_cur = horizon(&x);
            let mut nu: Option<i64> = None;
            for (g, sc) in x.coords.iter().enumerate() {
                if let Valuation::Exact(v) = sc.valuation() {
                    let cand = p.pow((m as u32 - 1) - g as u32) as i64 * v;
                    nu = Some(nu.map_or(cand, |c: i64| c.min(cand)));
                }
            }
            // report a horizon no lower than already-certified components
            let close = |mut hi: Option<i64>| -> Option<i64> {
                if let (Some(h), Some(prev)) = (hi, last_nu) {
                    hi = Some(h.max(prev + 1));
                }
                hi
            };
            let n = match nu {
                None => {
                    form.hi = close(h_cur);
                    return Ok(form); // zero within precision
                }
                Some(n) => n,
            };
            if let Some(h) = h_cur {
                if n >= h {
                    form.hi = close(h_cur);
                    return Ok(form);
                }
            }
            if let Some(prev) = last_nu {
                if n <= prev {
                    return Err(Error::internal(format!(
                        "peeling did not progress: index {n} after {prev}"
                    )));
                }
            }
            last_nu = Some(n);
            // read the Witt coordinates of the leading coefficient
            let (s, i, r) = IndexCase::split(p, m, n).siv(m);
            let mut coords_fq: Vec<FqElt> = Vec::with_capacity(r as usize);
            for j in 0..r {
                let expo = p.pow(j as u32) as i64 * i;
                coords_fq.push(x.coords[(j + s) as usize].coefficient(expo)?);
            }
            let c = self.ring(r).from_witt_coords(&coords_fq)?;
            debug_assert!(!c.is_zero(), "leading extraction must be nonzero");
            let comp = self.comp_to_witt_len(m, n, &c);
            x = witt.sub(&x, &comp)?;
            form.comps.insert(n, c);
        }
        Err(Error::internal("peeling exceeded the round guard"))
    }

    /// Sum the component Witt vectors back into `W_m(K)`, truncating
    /// coordinates to the precision implied by `hi`.
    pub fn from_canonical_w(&self, f: &CanonicalForm) -> Result<WittVector<TruncSeries>> {
        if f.q != 0 {
            return Err(Error::domain(
                "from_canonical_w takes q = 0 forms; use expr::from_canonical for q = 1",
            ));
        }
        if f.m != self.m {
            return Err(Error::domain("form level does not match context"));
        }
        let witt = self.witt_over_k(self.m)?;
        let mut acc = witt.zero();
        for (&n, c) in &f.comps {
            acc = witt.add(&acc, &self.comp_to_witt(n, c))?;
        }
        if let Some(h) = f.hi {
            let p = self.p();
            for (g, sc) in acc.coords.iter_mut().enumerate() {
                let scale = p.pow((self.m as u32 - 1) - g as u32) as i64;
                *sc = sc.truncate_to(div_ceil_i64(h, scale));
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64, e: u8, m: u8) -> DrwCtx {
        DrwCtx::with_store(FqField::new(p, e).unwrap(), m, TableStore::new(None)).unwrap()
    }

    #[test]
    fn level_function_examples() {
        assert_eq!(level_at(2, 3, 4), 3);
        assert_eq!(level_at(2, 3, 3), 1);
        assert_eq!(level_at(3, 2, 0), 2);
        // negative indices follow |n|
        assert_eq!(level_at(2, 3, -4), 3);
        assert_eq!(level_at(2, 3, -3), 1);
        assert_eq!(level_at(2, 2, 6), 2);
        assert_eq!(level_at(2, 2, 5), 1);
    }

    #[test]
    fn teichmuller_of_uniformizer_inverse_at_m1() {
        let c = ctx(2, 1, 1);
        let w = c
            .teich(&TruncSeries::pi_power(c.field().clone(), -1))
            .unwrap();
        let f = c.to_canonical_w(&w).unwrap();
        assert_eq!(f.comps.len(), 1);
        let coeff = &f.comps[&-1];
        assert_eq!(c.ring(1).to_witt_coords(coeff), vec![c.field().from_int(1)]);
        assert_eq!(f.hi, None);
    }

    #[test]
    fn verschiebung_of_teich_pi() {
        // V([π]_1) ∈ W_2(K), p = 2: single component at n = 1, level 1, c = 1
        let c = ctx(2, 1, 2);
        let w1 = c.witt_over_k(1).unwrap();
        let pi = TruncSeries::pi_power(c.field().clone(), 1);
        let v = w1.verschiebung(&w1.teichmuller(pi));
        let f = c.to_canonical_w(&v).unwrap();
        assert_eq!(f.comps.len(), 1);
        assert_eq!(c.level(1), 1);
        let coeff = &f.comps[&1];
        assert_eq!(c.ring(1).to_witt_coords(coeff), vec![c.field().from_int(1)]);
    }

    #[test]
    fn one_plus_pi_teichmuller_support() {
        // [1+π]_2 over F_2: components at n ∈ {0, 1, 2}
        let c = ctx(2, 1, 2);
        let s = TruncSeries::parse(c.field(), "pi^0 + pi^1").unwrap();
        let w = c.teich(&s).unwrap();
        let f = c.to_canonical_w(&w).unwrap();
        let support: Vec<i64> = f.comps.keys().copied().collect();
        assert_eq!(support, vec![0, 1, 2]);
        // round trip is exact (input was exact)
        let back = c.from_canonical_w(&f).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn pole_of_teichmuller_at_p3_m2() {
        // [π^{-1}]_2 at p = 3: single component at n = −3 (A-case)
        let c = ctx(3, 1, 2);
        let w = c
            .teich(&TruncSeries::pi_power(c.field().clone(), -1))
            .unwrap();
        let f = c.to_canonical_w(&w).unwrap();
        let support: Vec<i64> = f.comps.keys().copied().collect();
        assert_eq!(support, vec![-3]);
        assert_eq!(c.split(-3), IndexCase::A { i: -1 });
    }

    #[test]
    fn peeling_respects_precision_horizon() {
        let c = ctx(2, 1, 2);
        // coordinates with O(π^3) tails: horizon = min(2·3, 1·3) = 3
        let a = TruncSeries::parse(c.field(), "pi^-1 + pi^1 + O(pi^3)").unwrap();
        let b = TruncSeries::parse(c.field(), "pi^0 + O(pi^3)").unwrap();
        let w = WittVector { coords: vec![a, b] };
        let f = c.to_canonical_w(&w).unwrap();
        // subtracting the pole component at n = −2 folds the O(π^3) tail
        // of coordinate 0 into coordinate 1 at valuation 2, so only the
        // n = −2 component is determined by this input
        assert_eq!(f.hi, Some(2));
        assert_eq!(f.comps.keys().copied().collect::<Vec<_>>(), vec![-2]);
        // refining the precision must not change already-reported components
        let a2 = TruncSeries::parse(c.field(), "pi^-1 + pi^1 + O(pi^6)").unwrap();
        let b2 = TruncSeries::parse(c.field(), "pi^0 + pi^4 + O(pi^6)").unwrap();
        let w2 = WittVector {
            coords: vec![a2, b2],
        };
        let f2 = c.to_canonical_w(&w2).unwrap();
        assert!(f.eq_within_precision(&f2));
    }

    #[test]
    fn round_trip_both_ways_with_structured_inputs() {
        for (p, e, m) in [(2u64, 1u8, 3u8), (3, 2, 2), (5, 1, 2)] {
            let c = ctx(p, e, m);
            let field = c.field().clone();
            let witt = c.witt_over_k(m).unwrap();
            // build a handful of structured Witt vectors over K
            for seed in 0..4u64 {
                let coords: Vec<TruncSeries> = (0..m)
                    .map(|g| {
                        let k0 = (seed as i64 % 3) - 2 + g as i64;
                        let c0 = field.from_index((seed + g as u64 * 3 + 1) % field.q());
                        let c1 = field.from_index((seed * 5 + g as u64 + 2) % field.q());
                        TruncSeries::from_coeffs(
                            field.clone(),
                            &[(k0, c0), (k0 + 2, c1)],
                            Some(6),
                        )
                        .unwrap()
                    })
                    .collect();
                let w = WittVector { coords };
                let f = c.to_canonical_w(&w).unwrap();
                let back = c.from_canonical_w(&f).unwrap();
                // agreement within the peeling horizon, coordinatewise
                let diff = witt.sub(&w, &back).unwrap();
                let d = c.to_canonical_w(&diff).unwrap();
                assert!(
                    d.is_zero_within_precision(),
                    "round trip drift at (p,e,m)=({p},{e},{m}) seed {seed}: {d:?}"
                );
            }
        }
        // canonical → witt → canonical on a mixed exact form
        let c = ctx(2, 1, 3);
        let mut f = CanonicalForm::zero(0, 3);
        let r3 = c.ring(3);
        let r1 = c.ring(1);
        let r2 = c.ring(2);
        c.insert_comp(&mut f, -4, r3.from_int(3)); // A-case, i = −1
        c.insert_comp(&mut f, -1, r1.from_int(1)); // B-case s = 2, i = −1
        c.insert_comp(&mut f, 2, r2.from_int(1)); // B-case s = 1, i = 1
        c.insert_comp(&mut f, 0, r3.from_int(1));
        let w = c.from_canonical_w(&f).unwrap();
        let f2 = c.to_canonical_w(&w).unwrap();
        assert_eq!(f, f2);
    }
}
