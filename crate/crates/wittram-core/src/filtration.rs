//! The pole-order filtration `fil_n W_mΩ^q_K` and machine verifiers for
//! its structural identities.
//!
//! In canonical coordinates the filtration is a support condition:
//! `f ∈ fil_n` iff every component index is `≥ −n`. Witt vectors carry
//! the equivalent coordinate condition `p^i·v(a_i) + n ≥ 0`, where `a_i`
//! is the coordinate at ghost position `m−1−i`.
//!
//! The verifiers ([`verify_vr_sequence`], [`verify_fbar_cbar`],
//! [`verify_kernel_identities`]) restrict each claimed identity to the
//! finite window of indices `[lo, hi)` and decide it by exact subgroup
//! computations over `ℤ/p^{m+1}` (Howell forms, [`crate::linalg`]). The
//! operators `d`, `F`, `V` preserve the grading index and `R`, `C`, `p̄`
//! scale it by `p^{∓1}`, so a window instance of each identity is a
//! faithful finite quotient of the full statement — no boundary terms
//! leak in or out. Windows default to `[−n−p^m, n+4·p^m)` (`prec` raises
//! the top) and double on an inconclusive outcome before giving up.

use crate::drw::{level_at, CanonicalForm, DrwCtx};
use crate::error::Error;
use crate::linalg::{image_of_pairs, kernel_of_pairs, FpQuotientSpace, ZModSpan};
use crate::report::{ReportBuilder, ReportParams, VerifierReport, VerifierStatus};
use crate::series::{TruncSeries, Valuation};
use crate::witt::WittVector;
use crate::wring::WCoeff;
use crate::Result;
use std::collections::BTreeMap;

/// `⌊n/p⌋` with floor semantics for negative `n`.
pub fn floor_div_p(n: i64, p: u64) -> i64 {
    n.div_euclid(p as i64)
}

pub(crate) fn ceil_div_p(n: i64, p: u64) -> i64 {
    n.div_euclid(p as i64) + i64::from(n.rem_euclid(p as i64) != 0)
}

// ── membership ──────────────────────────────────────────────────────────

/// Is `w ∈ fil_n W_{m'}(K)`? Coordinate condition: `p^i·v(a_i) + n ≥ 0`
/// for every `i`, with `a_i` at ghost position `m'−1−i`. A coordinate
/// that is zero only to precision decides membership when its precision
/// bound already satisfies the inequality; otherwise the answer is a
/// precision error — unless another coordinate definitively fails, which
/// settles non-membership regardless.
pub fn fil_membership_witt(ctx: &DrwCtx, w: &WittVector<TruncSeries>, n: i64) -> Result<bool> {
    let p = ctx.p() as i64;
    let len = w.coords.len();
    let mut inconclusive: Option<Error> = None;
    for (g, a) in w.coords.iter().enumerate() {
        let i = (len - 1 - g) as u32;
        let weight = p.pow(i);
        match a.valuation() {
            Valuation::ZeroExact => {}
            Valuation::Exact(v) => {
                if weight * v + n < 0 {
                    return Ok(false);
                }
            }
            Valuation::ZeroToPrecision(bound) => {
                if weight * bound + n < 0 {
                    inconclusive = Some(Error::precision(format!(
                        "coordinate at ghost position {g} is zero mod O(pi^{bound}), \
                         too coarse to decide fil_{n} membership"
                    )));
                }
            }
        }
    }
    match inconclusive {
        Some(e) => Err(e),
        None => Ok(true),
    }
}

/// Is `f ∈ fil_n W_mΩ^q`? True iff every component index is `≥ −n`. A
/// known component below `−n` settles the question negatively even when
/// the form is inexact; otherwise the precision horizon must reach `−n`.
pub fn fil_membership_form(f: &CanonicalForm, n: i64) -> Result<bool> {
    if let Some(min) = f.support_min() {
        if min < -n {
            return Ok(false);
        }
    }
    match f.hi {
        None => Ok(true),
        Some(h) if h >= -n => Ok(true),
        Some(h) => Err(Error::precision(format!(
            "support known only below idx {h}; indices [{h}, {}) undecided",
            -n
        ))),
    }
}

/// Is `f ∈ Z_1fil_n = fil_n ∩ F(W_{m+1}Ω^q)`? The `F`-image condition is
/// the componentwise divisibility test ([`DrwCtx::is_z1`], equivalent to
/// `F^{m−1}d(f) = 0`); certifying it positively needs all components, so
/// an inexact form can only be rejected, never accepted.
pub fn z1_fil_membership(ctx: &DrwCtx, f: &CanonicalForm, n: i64) -> Result<bool> {
    let fil = fil_membership_form(f, n);
    if matches!(fil, Ok(false)) {
        return Ok(false);
    }
    if !ctx.is_z1(f) {
        return Ok(false);
    }
    if fil? && f.hi.is_none() {
        Ok(true)
    } else {
        Err(Error::precision(
            "componentwise F-preimage test needs an exact form",
        ))
    }
}

// ── window spaces ───────────────────────────────────────────────────────

/// The finite abelian group `∏_{n ∈ [lo, hi)} W_{φ(n)}(F_q)` of canonical
/// components in an index window, embedded in `(ℤ/p^M)^D` (`M = m_ctx+1`)
/// by `c ↦ p^{M−φ(n)}·c` slotwise — an injective homomorphism on each
/// slot, because the additive group of `W_r(F_q)` is `(ℤ/p^r)^e` in the
/// Galois-ring coefficient basis.
///
/// Degenerate parameters (`q ∉ {0, 1}` or `m = 0`) yield the zero group,
/// which is what the boundary cases of the verified identities call for.
#[derive(Clone, Debug)]
pub struct WindowSpace {
    q: i8,
    m: u8,
    lo: i64,
    hi: i64,
    m_exp: u32,
    /// `(index, coefficient level, coordinate offset)` per slot.
    slots: Vec<(i64, u8, usize)>,
    offsets: BTreeMap<i64, (u8, usize)>,
    dim: usize,
    log_full: u64,
}

/// A window generator: the form with a single unit coefficient in one
/// slot, together with its encoding.
pub struct WindowGen {
    pub n: i64,
    pub form: CanonicalForm,
    pub vec: Vec<u64>,
}

impl WindowSpace {
    pub fn new(ctx: &DrwCtx, q: i8, m: u8, lo: i64, hi: i64) -> Self {
        let m_exp = (ctx.m() + 1) as u32;
        let e = ctx.field().e() as usize;
        let mut slots = Vec::new();
        let mut offsets = BTreeMap::new();
        let mut dim = 0usize;
        let mut log_full = 0u64;
        if (0..=1).contains(&q) && m >= 1 {
            for n in lo..hi {
                let r = level_at(ctx.p(), m, n);
                slots.push((n, r, dim));
                offsets.insert(n, (r, dim));
                dim += e;
                log_full += r as u64 * e as u64;
            }
        }
        WindowSpace {
            q,
            m,
            lo,
            hi,
            m_exp,
            slots,
            offsets,
            dim,
            log_full,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn m_exp(&self) -> u32 {
        self.m_exp
    }
    /// `log_p` of the full window group order: `Σ_n e·φ(n)`.
    pub fn log_full(&self) -> u64 {
        self.log_full
    }

    /// Encode a canonical form as a window vector. The form must be known
    /// throughout the window and supported inside it; violations are
    /// precision errors so that verifiers can enlarge the window.
    pub fn encode(&self, ctx: &DrwCtx, f: &CanonicalForm) -> Result<Vec<u64>> {
        let p = ctx.p();
        let modulus = p.pow(self.m_exp);
        let mut v = vec![0u64; self.dim];
        if let Some(h) = f.hi {
            if h < self.hi && (f.comps.is_empty() || self.dim > 0) {
                return Err(Error::precision(format!(
                    "form known only below idx {h}, window extends to {}",
                    self.hi
                )));
            }
        }
        if f.comps.is_empty() {
            return Ok(v);
        }
        if f.q as i8 != self.q || f.m != self.m {
            return Err(Error::domain(format!(
                "form at (q, m) = ({}, {}) does not live in the ({}, {}) window",
                f.q, f.m, self.q, self.m
            )));
        }
        for (&n, c) in &f.comps {
            let (r, off) = *self.offsets.get(&n).ok_or_else(|| {
                Error::precision(format!(
                    "component at idx {n} falls outside the window [{}, {})",
                    self.lo, self.hi
                ))
            })?;
            let scale = p.pow(self.m_exp - r as u32);
            for (k, &ck) in c.0.iter().enumerate() {
                v[off + k] = (ck as u128 * scale as u128 % modulus as u128) as u64;
            }
        }
        Ok(v)
    }

    /// Decode a window vector back to the (exact) canonical form it
    /// represents. Inverse of [`Self::encode`] on the embedded subgroup.
    pub fn decode(&self, ctx: &DrwCtx, v: &[u64]) -> Result<CanonicalForm> {
        if v.len() != self.dim {
            return Err(Error::internal("window vector length mismatch"));
        }
        let p = ctx.p();
        let mut f = CanonicalForm::zero(self.q.max(0) as u8, self.m);
        for &(n, r, off) in &self.slots {
            let scale = p.pow(self.m_exp - r as u32);
            let e = ctx.field().e() as usize;
            let mut coeffs = Vec::with_capacity(e);
            let mut nonzero = false;
            for k in 0..e {
                let x = v[off + k];
                if x % scale != 0 {
                    return Err(Error::internal(format!(
                        "window vector entry at idx {n} not in the embedded subgroup"
                    )));
                }
                let c = x / scale;
                nonzero |= c != 0;
                coeffs.push(c);
            }
            if nonzero {
                ctx.insert_comp(&mut f, n, WCoeff(coeffs));
            }
        }
        Ok(f)
    }

    /// ℤ-module generators: one unit coefficient per slot and basis digit.
    /// Restricting to indices `≥ sub_lo` generates the `fil_{−sub_lo}`
    /// subgroup of the window.
    pub fn generators_from(&self, ctx: &DrwCtx, sub_lo: i64) -> Vec<WindowGen> {
        let e = ctx.field().e() as usize;
        let mut out = Vec::new();
        for &(n, r, off) in &self.slots {
            if n < sub_lo {
                continue;
            }
            let scale = ctx.p().pow(self.m_exp - r as u32);
            for k in 0..e {
                let mut coeffs = vec![0u64; e];
                coeffs[k] = 1;
                let mut form = CanonicalForm::zero(self.q.max(0) as u8, self.m);
                ctx.insert_comp(&mut form, n, WCoeff(coeffs));
                let mut vec = vec![0u64; self.dim];
                vec[off + k] = scale;
                out.push(WindowGen { n, form, vec });
            }
        }
        out
    }

    pub fn generators(&self, ctx: &DrwCtx) -> Vec<WindowGen> {
        self.generators_from(ctx, i64::MIN)
    }

    /// The subgroup of window elements supported on indices `≥ sub_lo`
    /// (i.e. `fil_{−sub_lo}` within the window).
    pub fn subspan_from(&self, ctx: &DrwCtx, sub_lo: i64) -> ZModSpan {
        ZModSpan::new(
            ctx.p(),
            self.m_exp,
            self.dim,
            self.generators_from(ctx, sub_lo)
                .into_iter()
                .map(|g| g.vec)
                .collect(),
        )
    }

    pub fn full_span(&self, ctx: &DrwCtx) -> ZModSpan {
        self.subspan_from(ctx, i64::MIN)
    }
}

/// Images of `src` generators (from `sub_lo` up) under an additive
/// operator, paired with the generators — the matrix rows for kernel and
/// image computations.
fn op_pairs<Op>(
    ctx: &DrwCtx,
    src: &WindowSpace,
    sub_lo: i64,
    dst: &WindowSpace,
    mut op: Op,
) -> Result<Vec<(Vec<u64>, Vec<u64>)>>
where
    Op: FnMut(&CanonicalForm) -> Result<CanonicalForm>,
{
    let mut out = Vec::new();
    for g in src.generators_from(ctx, sub_lo) {
        let img = op(&g.form)?;
        out.push((dst.encode(ctx, &img)?, g.vec));
    }
    Ok(out)
}

/// `{x ∈ span(pairs) : f(x) ∈ sub}`: the kernel computation with the rows
/// of `sub` adjoined as relations `(row, 0)`.
fn preimage_of(
    p: u64,
    m_exp: u32,
    img_dim: usize,
    src_dim: usize,
    pairs: &[(Vec<u64>, Vec<u64>)],
    sub: &ZModSpan,
) -> ZModSpan {
    let mut all: Vec<(Vec<u64>, Vec<u64>)> = pairs.to_vec();
    for r in sub.rows() {
        all.push((r.clone(), vec![0u64; src_dim]));
    }
    kernel_of_pairs(p, m_exp, img_dim, src_dim, &all)
}

/// Iterated operator chains as closures over the context.
fn v_pow<'a>(ctx: &'a DrwCtx, k: u8) -> impl Fn(&CanonicalForm) -> Result<CanonicalForm> + 'a {
    move |f| {
        let mut x = f.clone();
        for _ in 0..k {
            x = ctx.op_v(&x)?;
        }
        Ok(x)
    }
}

fn f_pow<'a>(ctx: &'a DrwCtx, k: u8) -> impl Fn(&CanonicalForm) -> Result<CanonicalForm> + 'a {
    move |f| {
        let mut x = f.clone();
        for _ in 0..k {
            x = ctx.op_f(&x)?;
        }
        Ok(x)
    }
}

fn dv_pow<'a>(ctx: &'a DrwCtx, k: u8) -> impl Fn(&CanonicalForm) -> Result<CanonicalForm> + 'a {
    move |f| ctx.op_d(&v_pow(ctx, k)(f)?)
}

/// A section of `R`: lift each component `(k, c ∈ W_r)` to
/// `(p·k, c lifted to W_{r+1})`. Not additive — used only to evaluate
/// well-defined induced maps at single generators, never to build
/// matrices.
fn lift_along_r(ctx: &DrwCtx, f: &CanonicalForm) -> Result<CanonicalForm> {
    let mut out = CanonicalForm {
        q: f.q,
        m: f.m + 1,
        comps: BTreeMap::new(),
        hi: f.hi.map(|h| h.saturating_mul(ctx.p() as i64)),
    };
    for (&n, c) in &f.comps {
        let r = level_at(ctx.p(), f.m, n);
        ctx.insert_comp(&mut out, n * ctx.p() as i64, ctx.ring(r + 1).lift_from_below(c));
    }
    Ok(out)
}

// ── graded pieces ───────────────────────────────────────────────────────

/// The graded piece `gr_n = fil_n/fil_{n−1}` of `W_mΩ^q_K` on the window
/// `[−n, hi)`: numerator the full `fil_n` window group, denominator the
/// `fil_{n−1}` subgroup. Its `log_p`-size is `e·φ(n)` — one canonical
/// slot.
pub fn graded_basis(ctx: &DrwCtx, q: u8, n: i64, hi: i64) -> Result<FpQuotientSpace> {
    let hi_eff = hi.max(-n + 1);
    let w = WindowSpace::new(ctx, q as i8, ctx.m(), -n, hi_eff);
    let num = w.full_span(ctx);
    let den = w.subspan_from(ctx, -n + 1);
    FpQuotientSpace::new(num, den)
}

// ── p̄ and the filtration ────────────────────────────────────────────────

/// Lemma-checked equivalence: `ω ∈ fil_{⌊n/p⌋} W_{m'}` iff
/// `p̄(ω) ∈ fil_n W_{m'+1}`. Both directions are computed; disagreement
/// is an internal error (the equivalence is a theorem — a violation
/// means a defect in the operator or membership code).
pub fn pbar_test(ctx: &DrwCtx, w: &CanonicalForm, n: i64) -> Result<bool> {
    let below = fil_membership_form(w, floor_div_p(n, ctx.p()))?;
    let above = fil_membership_form(&ctx.pbar(w)?, n)?;
    if below != above {
        return Err(Error::internal(format!(
            "p-multiplication filtration equivalence failed at n = {n}: \
             fil_floor(w) = {below}, fil_n(pbar w) = {above}"
        )));
    }
    Ok(below)
}

// ── verifiers ───────────────────────────────────────────────────────────

fn default_hi(p: u64, m: u8, n: i64, prec: i64) -> i64 {
    let pm = (p as i64).pow(m as u32);
    (n + 4 * pm).max(prec).max(-n + pm)
}

fn params_for(ctx: &DrwCtx, q: u8, n: i64, prec: i64) -> ReportParams {
    ReportParams {
        p: ctx.p(),
        e: ctx.field().e(),
        m: ctx.m(),
        q,
        n,
        prec,
    }
}

/// Run `body` at the default window, doubling the upper index bound on a
/// precision failure before conceding `inconclusive-precision`.
fn run_with_window<Body>(
    ctx: &DrwCtx,
    claim: &str,
    q: u8,
    n: i64,
    prec: i64,
    mut body: Body,
) -> Result<VerifierReport>
where
    Body: FnMut(i64) -> Result<VerifierReport>,
{
    let mut hi = default_hi(ctx.p(), ctx.m(), n, prec);
    for attempt in 0..3 {
        match body(hi) {
            Ok(rep) => return Ok(rep),
            Err(e) if e.is_precision() && attempt < 2 => hi *= 2,
            Err(e) if e.is_precision() => {
                let mut b = ReportBuilder::new(claim, params_for(ctx, q, n, prec));
                b.dim("window_hi", hi as u64);
                return Ok(b.finish(VerifierStatus::InconclusivePrecision));
            }
            Err(e) => return Err(e),
        }
    }
    unreachable!("window loop returns within three attempts")
}

/// First generator of `a` outside `b`, printed, if any.
fn first_discrepancy(
    ctx: &DrwCtx,
    w: &WindowSpace,
    a: &ZModSpan,
    b: &ZModSpan,
) -> Result<Option<String>> {
    for r in a.rows() {
        if !b.contains(r) {
            return Ok(Some(ctx.form_to_text(&w.decode(ctx, r)?)));
        }
    }
    Ok(None)
}

/// Exactness of `0 → V^{m−1}(fil_nΩ^q) + dV^{m−1}(fil_nΩ^{q−1})
/// → fil_n W_mΩ^q →R→ fil_{⌊n/p⌋} W_{m−1}Ω^q → 0` on the window:
/// `ker R` equals the stated sum and `R` fills the whole target window.
pub fn verify_vr_sequence(ctx: &DrwCtx, q: u8, n: i64, prec: i64) -> Result<VerifierReport> {
    run_with_window(ctx, "v-r-sequence", q, n, prec, |hi| {
        let p = ctx.p();
        let m = ctx.m();
        let m_exp = (m + 1) as u32;
        let wm = WindowSpace::new(ctx, q as i8, m, -n, hi);
        let w1q = WindowSpace::new(ctx, q as i8, 1, -n, hi);
        let w1qm1 = WindowSpace::new(ctx, q as i8 - 1, 1, -n, hi);
        let wt = WindowSpace::new(
            ctx,
            q as i8,
            m - 1,
            ceil_div_p(-n, p),
            ceil_div_p(hi, p),
        );

        let r_pairs = op_pairs(ctx, &wm, i64::MIN, &wt, |f| ctx.op_r(f))?;
        let ker_r = kernel_of_pairs(p, m_exp, wt.dim(), wm.dim(), &r_pairs);
        let r_image = image_of_pairs(p, m_exp, wt.dim(), &r_pairs);

        let v_img = image_of_pairs(
            p,
            m_exp,
            wm.dim(),
            &op_pairs(ctx, &w1q, i64::MIN, &wm, v_pow(ctx, m - 1))?,
        );
        let dv_img = image_of_pairs(
            p,
            m_exp,
            wm.dim(),
            &op_pairs(ctx, &w1qm1, i64::MIN, &wm, dv_pow(ctx, m - 1))?,
        );
        let sum = v_img.sum(&dv_img);

        let mut b = ReportBuilder::new("v-r-sequence", params_for(ctx, q, n, prec));
        b.dim("fil_window", wm.log_full())
            .dim("ker_r", ker_r.log_order())
            .dim("v_image", v_img.log_order())
            .dim("dv_image", dv_img.log_order())
            .dim("sum", sum.log_order())
            .dim("target", wt.log_full())
            .dim("r_image", r_image.log_order());

        let surjective = r_image.log_order() == wt.log_full();
        if ker_r == sum && surjective {
            return Ok(b.finish(VerifierStatus::Verified));
        }
        if let Some(w) = first_discrepancy(ctx, &wm, &ker_r, &sum)? {
            b.witness(format!("in ker R but not in V^(m-1)+dV^(m-1): {w}"));
        } else if let Some(w) = first_discrepancy(ctx, &wm, &sum, &ker_r)? {
            b.witness(format!("in V^(m-1)+dV^(m-1) but not in ker R: {w}"));
        } else if let Some(w) = first_discrepancy(ctx, &wt, &wt.full_span(ctx), &r_image)? {
            b.witness(format!("target element missed by R: {w}"));
        }
        Ok(b.finish(VerifierStatus::Falsified))
    })
}

/// The inverse isomorphisms `F̄ : fil_{⌊n/p⌋}W_mΩ^q ≅
/// Z_1fil_n W_mΩ^q / dV^{m−1}(fil_nΩ^{q−1}) : C̄` — checked as: the
/// `F`-preimage of the `dV^{m−1}`-image equals `ker R` (well-definedness
/// and injectivity), the quotient sizes match (bijectivity), and
/// `F̄ ∘ C̄ = id` modulo the denominator on every `Z_1` generator.
pub fn verify_fbar_cbar(ctx: &DrwCtx, q: u8, n: i64, prec: i64) -> Result<VerifierReport> {
    run_with_window(ctx, "fbar-cbar", q, n, prec, |hi| {
        let p = ctx.p();
        let m = ctx.m();
        let m_exp = (m + 1) as u32;
        let nfl = floor_div_p(n, p);
        let s = WindowSpace::new(ctx, q as i8, m + 1, -n, hi);
        let u = WindowSpace::new(ctx, q as i8, m, -n, hi);
        let t = WindowSpace::new(ctx, q as i8, m, -nfl, ceil_div_p(hi, p));
        let w1 = WindowSpace::new(ctx, q as i8 - 1, 1, -n, hi);

        let f_pairs = op_pairs(ctx, &s, i64::MIN, &u, |x| ctx.op_f(x))?;
        let r_pairs = op_pairs(ctx, &s, i64::MIN, &t, |x| ctx.op_r(x))?;
        let z1 = image_of_pairs(p, m_exp, u.dim(), &f_pairs);
        let dv = image_of_pairs(
            p,
            m_exp,
            u.dim(),
            &op_pairs(ctx, &w1, i64::MIN, &u, dv_pow(ctx, m - 1))?,
        );
        if !z1.contains_span(&dv) {
            return Err(Error::internal(
                "dV^(m-1) image escapes Z_1 = image(F) on the window",
            ));
        }

        let ker_r = kernel_of_pairs(p, m_exp, t.dim(), s.dim(), &r_pairs);
        let f_pre_dv = preimage_of(p, m_exp, u.dim(), s.dim(), &f_pairs, &dv);

        let mut b = ReportBuilder::new("fbar-cbar", params_for(ctx, q, n, prec));
        b.dim("fil_floor", t.log_full())
            .dim("z1", z1.log_order())
            .dim("dv", dv.log_order())
            .dim("quotient", z1.log_order() - dv.log_order())
            .dim("ker_r", ker_r.log_order())
            .dim("f_preimage_dv", f_pre_dv.log_order());

        // F̄ well-defined and injective: F(x) ∈ dV^{m−1}(…) ⟺ R(x) = 0.
        if f_pre_dv != ker_r {
            let which = first_discrepancy(ctx, &s, &f_pre_dv, &ker_r)?
                .or(first_discrepancy(ctx, &s, &ker_r, &f_pre_dv)?);
            if let Some(w) = which {
                b.witness(format!("F-preimage of dV-image vs ker R differ at: {w}"));
            }
            return Ok(b.finish(VerifierStatus::Falsified));
        }
        // Bijectivity by counting: |Z_1/dV| = |fil_{⌊n/p⌋}| on the window.
        if z1.log_order() - dv.log_order() != t.log_full() {
            b.witness(format!(
                "quotient log-size {} != fil_floor window log-size {}",
                z1.log_order() - dv.log_order(),
                t.log_full()
            ));
            return Ok(b.finish(VerifierStatus::Falsified));
        }
        // F̄ ∘ C̄ = id on Z_1/dV: for each generator image z = F(g),
        // lift C(z) along R and compare F(lift) with z modulo dV.
        let modulus = p.pow(m_exp);
        for g in s.generators(ctx) {
            let z = ctx.op_f(&g.form)?;
            let c = ctx.cartier(&z)?;
            let back = ctx.op_f(&lift_along_r(ctx, &c)?)?;
            let ez = u.encode(ctx, &z)?;
            let eb = u.encode(ctx, &back)?;
            let diff: Vec<u64> = eb
                .iter()
                .zip(&ez)
                .map(|(&x, &y)| (x + modulus - y) % modulus)
                .collect();
            if !dv.contains(&diff) {
                b.witness(format!(
                    "Fbar(Cbar(F(g))) != F(g) mod dV for g = {}",
                    ctx.form_to_text(&g.form)
                ));
                return Ok(b.finish(VerifierStatus::Falsified));
            }
        }
        Ok(b.finish(VerifierStatus::Verified))
    })
}

/// The kernel identities on `fil_n` windows — `Ker(F^{m−1}d) = F(fil)`,
/// `Ker(F^{m−1}) = V(fil)`, `Ker(dV^{m−1}) = F^m(fil)`, `Ker(V) =
/// dV^{m−1}(fil)`, `Ker(V^{m−1}) = F^{m−1}dV(fil)`, and their two
/// quotient-target variants — plus the ladder `Z_i fil = F^i(fil W_{i+1})`,
/// `B_i fil = F^{i−1}d(fil W_i)` against the recursive Cartier definition,
/// and the ambient-intersection identities `Z_i fil_N ∩ fil_n = Z_i fil_n`
/// (same for `B_i`), for `i ≤ min(m, 2)`.
pub fn verify_kernel_identities(ctx: &DrwCtx, q: u8, n: i64, prec: i64) -> Result<VerifierReport> {
    run_with_window(ctx, "kernel-identities", q, n, prec, |hi| {
        let p = ctx.p();
        let m = ctx.m();
        let m_exp = (m + 1) as u32;
        let pm = (p as i64).pow(m as u32);
        let qi = q as i8;
        let win = |qq: i8, lvl: u8| WindowSpace::new(ctx, qq, lvl, -n, hi);

        let wm = win(qi, m);
        let wm1_up = win(qi, m + 1);
        let wm1_dn = win(qi, m.saturating_sub(1));
        let w1 = win(qi, 1);
        let w1_up = win(qi + 1, 1);
        let wmq1 = win(qi + 1, m);
        let w1_dn = win(qi - 1, 1);
        let wm_dn_q = win(qi - 1, m);
        let wmm1_dn_q = win(qi - 1, m.saturating_sub(1));

        let mut b = ReportBuilder::new("kernel-identities", params_for(ctx, q, n, prec));
        let mut status = VerifierStatus::Verified;
        let record = |b: &mut ReportBuilder,
                          status: &mut VerifierStatus,
                          item: &str,
                          lhs: &ZModSpan,
                          rhs: &ZModSpan,
                          witness: Option<String>| {
            b.dim(format!("{item}_lhs"), lhs.log_order());
            b.dim(format!("{item}_rhs"), rhs.log_order());
            if lhs != rhs && *status == VerifierStatus::Verified {
                *status = VerifierStatus::Falsified;
                if let Some(w) = witness {
                    b.witness(format!("{item}: {w}"));
                }
            }
        };

        // (1) Ker(F^{m−1}d : fil W_m → fil Ω^{q+1}) = F(fil W_{m+1})
        let fd_pairs = op_pairs(ctx, &wm, i64::MIN, &w1_up, |x| {
            f_pow(ctx, m - 1)(&ctx.op_d(x)?)
        })?;
        let lhs = kernel_of_pairs(p, m_exp, w1_up.dim(), wm.dim(), &fd_pairs);
        let rhs = image_of_pairs(
            p,
            m_exp,
            wm.dim(),
            &op_pairs(ctx, &wm1_up, i64::MIN, &wm, |x| ctx.op_f(x))?,
        );
        let wit = first_discrepancy(ctx, &wm, &lhs, &rhs)?;
        record(&mut b, &mut status, "ker_fm1d_eq_imF", &lhs, &rhs, wit);

        // (2) Ker(F^{m−1} : fil W_m → fil Ω^q) = V(fil W_{m−1})
        let lhs = kernel_of_pairs(
            p,
            m_exp,
            w1.dim(),
            wm.dim(),
            &op_pairs(ctx, &wm, i64::MIN, &w1, f_pow(ctx, m - 1))?,
        );
        let rhs = image_of_pairs(
            p,
            m_exp,
            wm.dim(),
            &op_pairs(ctx, &wm1_dn, i64::MIN, &wm, |x| ctx.op_v(x))?,
        );
        let wit = first_discrepancy(ctx, &wm, &lhs, &rhs)?;
        record(&mut b, &mut status, "ker_fm1_eq_imV", &lhs, &rhs, wit);

        // (3) Ker(dV^{m−1} : fil Ω^q → fil W_mΩ^{q+1}) = F^m(fil W_{m+1})
        let lhs = kernel_of_pairs(
            p,
            m_exp,
            wmq1.dim(),
            w1.dim(),
            &op_pairs(ctx, &w1, i64::MIN, &wmq1, dv_pow(ctx, m - 1))?,
        );
        let rhs = image_of_pairs(
            p,
            m_exp,
            w1.dim(),
            &op_pairs(ctx, &wm1_up, i64::MIN, &w1, f_pow(ctx, m))?,
        );
        let wit = first_discrepancy(ctx, &w1, &lhs, &rhs)?;
        record(&mut b, &mut status, "ker_dvm1_eq_imFm", &lhs, &rhs, wit);

        // (4) Ker(V : fil W_m → fil W_{m+1}) = dV^{m−1}(fil Ω^{q−1})
        let lhs = kernel_of_pairs(
            p,
            m_exp,
            wm1_up.dim(),
            wm.dim(),
            &op_pairs(ctx, &wm, i64::MIN, &wm1_up, |x| ctx.op_v(x))?,
        );
        let rhs = image_of_pairs(
            p,
            m_exp,
            wm.dim(),
            &op_pairs(ctx, &w1_dn, i64::MIN, &wm, dv_pow(ctx, m - 1))?,
        );
        let wit = first_discrepancy(ctx, &wm, &lhs, &rhs)?;
        record(&mut b, &mut status, "ker_v_eq_imdVm1", &lhs, &rhs, wit);

        // (5) Ker(V^{m−1} : fil Ω^q → fil W_m) = F^{m−1}dV(fil W_{m−1}Ω^{q−1})
        let lhs = kernel_of_pairs(
            p,
            m_exp,
            wm.dim(),
            w1.dim(),
            &op_pairs(ctx, &w1, i64::MIN, &wm, v_pow(ctx, m - 1))?,
        );
        let rhs = image_of_pairs(
            p,
            m_exp,
            w1.dim(),
            &op_pairs(ctx, &wmm1_dn_q, i64::MIN, &w1, |x| {
                f_pow(ctx, m - 1)(&ctx.op_d(&ctx.op_v(x)?)?)
            })?,
        );
        let wit = first_discrepancy(ctx, &w1, &lhs, &rhs)?;
        record(&mut b, &mut status, "ker_vm1_eq_imFm1dV", &lhs, &rhs, wit);

        // (6) Ker(dV^{m−1} : fil Ω^q → fil W_mΩ^{q+1}/V^{m−1}fil Ω^{q+1})
        //     = F^{m−1}(fil W_m)
        let vm1_img_q1 = image_of_pairs(
            p,
            m_exp,
            wmq1.dim(),
            &op_pairs(ctx, &w1_up, i64::MIN, &wmq1, v_pow(ctx, m - 1))?,
        );
        let lhs = preimage_of(
            p,
            m_exp,
            wmq1.dim(),
            w1.dim(),
            &op_pairs(ctx, &w1, i64::MIN, &wmq1, dv_pow(ctx, m - 1))?,
            &vm1_img_q1,
        );
        let rhs = image_of_pairs(
            p,
            m_exp,
            w1.dim(),
            &op_pairs(ctx, &wm, i64::MIN, &w1, f_pow(ctx, m - 1))?,
        );
        let wit = first_discrepancy(ctx, &w1, &lhs, &rhs)?;
        record(&mut b, &mut status, "ker_dvm1_modVm1_eq_imFm1", &lhs, &rhs, wit);

        // (7) Ker(V^{m−1} : fil Ω^q → fil W_m/dV^{m−1}fil Ω^{q−1})
        //     = F^m dV(fil W_mΩ^{q−1})
        let dvm1_img = image_of_pairs(
            p,
            m_exp,
            wm.dim(),
            &op_pairs(ctx, &w1_dn, i64::MIN, &wm, dv_pow(ctx, m - 1))?,
        );
        let lhs = preimage_of(
            p,
            m_exp,
            wm.dim(),
            w1.dim(),
            &op_pairs(ctx, &w1, i64::MIN, &wm, v_pow(ctx, m - 1))?,
            &dvm1_img,
        );
        let rhs = image_of_pairs(
            p,
            m_exp,
            w1.dim(),
            &op_pairs(ctx, &wm_dn_q, i64::MIN, &w1, |x| {
                f_pow(ctx, m)(&ctx.op_d(&ctx.op_v(x)?)?)
            })?,
        );
        let wit = first_discrepancy(ctx, &w1, &lhs, &rhs)?;
        record(&mut b, &mut status, "ker_vm1_moddV_eq_imFmdV", &lhs, &rhs, wit);

        // Cartier ladder and ambient intersections. All spans live in the
        // ambient level-1 window with margin `p^m` below `−n`.
        let big_n = n + pm;
        let amb = WindowSpace::new(ctx, qi, 1, -big_n, hi);
        let amb_dn = WindowSpace::new(ctx, qi - 1, 1, -big_n, hi);
        let amb_up = WindowSpace::new(ctx, qi + 1, 1, -big_n, hi);
        for i in 1..=m.min(2) {
            let z_n = zb_fil(ctx, &amb, &amb_dn, &amb_up, i, n, false)?;
            let b_n = zb_fil(ctx, &amb, &amb_dn, &amb_up, i, n, true)?;

            // ladder: Z_i fil_n = F^i(fil_n W_{i+1}), B_i = F^{i−1}d(fil_n W_i)
            let wi1 = win(qi, i + 1);
            let z_rhs = image_of_pairs(
                p,
                m_exp,
                amb.dim(),
                &op_pairs(ctx, &wi1, i64::MIN, &amb, f_pow(ctx, i))?,
            );
            let wit = first_discrepancy(ctx, &amb, &z_n, &z_rhs)?;
            record(&mut b, &mut status, &format!("z{i}_eq_imF{i}"), &z_n, &z_rhs, wit);

            let wiq = win(qi - 1, i);
            let b_rhs = image_of_pairs(
                p,
                m_exp,
                amb.dim(),
                &op_pairs(ctx, &wiq, i64::MIN, &amb, |x| {
                    f_pow(ctx, i - 1)(&ctx.op_d(x)?)
                })?,
            );
            let wit = first_discrepancy(ctx, &amb, &b_n, &b_rhs)?;
            record(
                &mut b,
                &mut status,
                &format!("b{i}_eq_imF{}d", i - 1),
                &b_n,
                &b_rhs,
                wit,
            );

            // intersection: Z_i fil_N ∩ fil_n = Z_i fil_n (same for B_i)
            let z_big = zb_fil(ctx, &amb, &amb_dn, &amb_up, i, big_n, false)?;
            let fil_sub = amb.subspan_from(ctx, -n);
            let z_cap = z_big.intersect(&fil_sub);
            let wit = first_discrepancy(ctx, &amb, &z_cap, &z_n)?;
            record(&mut b, &mut status, &format!("z{i}_cap_fil"), &z_cap, &z_n, wit);

            let b_big = zb_fil(ctx, &amb, &amb_dn, &amb_up, i, big_n, true)?;
            let b_cap = b_big.intersect(&fil_sub);
            let wit = first_discrepancy(ctx, &amb, &b_cap, &b_n)?;
            record(&mut b, &mut status, &format!("b{i}_cap_fil"), &b_cap, &b_n, wit);
        }

        Ok(b.finish(status))
    })
}

/// `Z_i fil_k` (or `B_i fil_k` when `want_b`) inside the ambient level-1
/// window, by the recursive Cartier definition: `Z_1 = Ker(d)∩fil_k`,
/// `B_1 = d(fil_k Ω^{q−1})`, and for `i = 2` the preimage of the `(i−1)`
/// group at `fil_{⌊k/p⌋}` under `C` on `Z_1`.
fn zb_fil(
    ctx: &DrwCtx,
    amb: &WindowSpace,
    amb_dn: &WindowSpace,
    amb_up: &WindowSpace,
    i: u8,
    k: i64,
    want_b: bool,
) -> Result<ZModSpan> {
    let p = ctx.p();
    let m_exp = amb.m_exp();
    if i == 1 {
        return if want_b {
            Ok(image_of_pairs(
                p,
                m_exp,
                amb.dim(),
                &op_pairs(ctx, amb_dn, -k, amb, |x| ctx.op_d(x))?,
            ))
        } else {
            Ok(kernel_of_pairs(
                p,
                m_exp,
                amb_up.dim(),
                amb.dim(),
                &op_pairs(ctx, amb, -k, amb_up, |x| ctx.op_d(x))?,
            ))
        };
    }
    debug_assert_eq!(i, 2);
    let z1 = zb_fil(ctx, amb, amb_dn, amb_up, 1, k, false)?;
    let parent = zb_fil(ctx, amb, amb_dn, amb_up, 1, floor_div_p(k, p), want_b)?;
    let mut c_pairs = Vec::new();
    for row in z1.rows() {
        let form = amb.decode(ctx, row)?;
        c_pairs.push((amb.encode(ctx, &ctx.cartier(&form)?)?, row.clone()));
    }
    Ok(preimage_of(p, m_exp, amb.dim(), amb.dim(), &c_pairs, &parent))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::FqField;
    use crate::sample;

    fn ctx(p: u64, e: u8, m: u8) -> DrwCtx {
        DrwCtx::new(FqField::new(p, e).unwrap(), m).unwrap()
    }

    #[test]
    fn witt_membership_matches_coordinate_valuations() {
        // [π^{-1}]_2 at p = 3: pole weight p at ghost position 0
        let c = ctx(3, 1, 2);
        let pinv = TruncSeries::pi_power(c.field().clone(), -1);
        let w = c.teich(&pinv).unwrap();
        assert!(fil_membership_witt(&c, &w, 3).unwrap());
        assert!(!fil_membership_witt(&c, &w, 2).unwrap());

        // V([π^{-1}]_1) = (0, π^{-1}): weight 1 only
        let wv = c
            .witt_over_k(2)
            .unwrap()
            .verschiebung(&c.witt_over_k(1).unwrap().teichmuller(pinv));
        assert!(fil_membership_witt(&c, &wv, 1).unwrap());
        assert!(!fil_membership_witt(&c, &wv, 0).unwrap());

        // integral vectors sit in fil_0
        let mut rng = sample::rng(41);
        for _ in 0..10 {
            let w = sample::random_witt_over_k(&c, &mut rng, 0, 5, None);
            assert!(fil_membership_witt(&c, &w, 0).unwrap());
        }

        // a coordinate that is zero only to precision O(π^{-1}) cannot
        // decide fil_0, but a definitive pole elsewhere still rejects
        let foggy = TruncSeries::o_prec(c.field().clone(), -1);
        let w = WittVector {
            coords: vec![foggy.clone(), TruncSeries::one(c.field().clone())],
        };
        assert!(fil_membership_witt(&c, &w, 0).unwrap_err().is_precision());
        let w = WittVector {
            coords: vec![foggy, TruncSeries::pi_power(c.field().clone(), -4)],
        };
        assert!(!fil_membership_witt(&c, &w, 0).unwrap());
    }

    #[test]
    fn form_membership_is_a_support_condition() {
        let c = ctx(2, 1, 3);
        let dlog = c.parse_form("q=1 m=3 p=2 e=1 { n=0: A[ [1,0,0] ]*dlogpi }").unwrap();
        assert!(fil_membership_form(&dlog, 0).unwrap());

        let f = c.parse_form("q=0 m=3 p=2 e=1 { n=-2: V^1[ [1,0] ] }").unwrap();
        assert!(!fil_membership_form(&f, 1).unwrap());
        assert!(fil_membership_form(&f, 2).unwrap());

        // [π^{-1}]·dlogπ lands exactly in fil_{p^{m-1}}
        let pinv = TruncSeries::pi_power(c.field().clone(), -1);
        let w = c.teich(&pinv).unwrap();
        let dl = c.parse_form("q=1 m=3 p=2 e=1 { n=0: A[ [1,0,0] ]*dlogpi }").unwrap();
        let f = c.scalar_mul(&w, &dl).unwrap();
        assert!(fil_membership_form(&f, 4).unwrap());
        assert!(!fil_membership_form(&f, 3).unwrap());

        // horizon below −n is inconclusive unless a component already fails
        let g = c.parse_form("q=0 m=3 p=2 e=1 { } + O(idx -1)").unwrap();
        assert!(fil_membership_form(&g, 1).unwrap());
        assert!(fil_membership_form(&g, 0).unwrap_err().is_precision());
    }

    #[test]
    fn z1_membership_examples() {
        let c = ctx(2, 1, 2);
        let dlog = c.parse_form("q=1 m=2 p=2 e=1 { n=0: A[ [1,0] ]*dlogpi }").unwrap();
        assert!(z1_fil_membership(&c, &dlog, 0).unwrap());

        // [π] is supported in fil_0 but is not an F-image
        let teich_pi = c.parse_form("q=0 m=2 p=2 e=1 { n=2: A[ [1,0] ] }").unwrap();
        assert!(fil_membership_form(&teich_pi, 0).unwrap());
        assert!(!z1_fil_membership(&c, &teich_pi, 0).unwrap());
        let fd = c.op_f(&c.op_d(&teich_pi).unwrap()).unwrap();
        assert!(!fd.is_zero_within_precision());

        // its Frobenius image is
        let fp = c.op_f(&c.parse_form("q=0 m=3 p=2 e=1 { n=4: A[ [1,0,0] ] }").unwrap());
        // (need a level-3 context for that form; rebuild)
        drop(fp);
        let c3 = ctx(2, 1, 3);
        let y = c3.parse_form("q=0 m=3 p=2 e=1 { n=4: A[ [1,0,0] ] }").unwrap();
        let fy = c3.op_f(&y).unwrap();
        assert_eq!(fy.m, 2);
        let c2 = ctx(2, 1, 2);
        assert!(z1_fil_membership(&c2, &fy, 0).unwrap());

        let zero = CanonicalForm::zero(0, 2);
        for n in [-3, 0, 5] {
            assert!(z1_fil_membership(&c, &zero, n).unwrap());
        }
    }

    #[test]
    fn graded_pieces_have_one_slot_of_dimension_e_phi() {
        let c = ctx(2, 1, 2);
        assert_eq!(graded_basis(&c, 0, 1, 12).unwrap().log_dim(), 1);
        assert_eq!(graded_basis(&c, 0, 2, 12).unwrap().log_dim(), 2);
        assert_eq!(graded_basis(&c, 1, 0, 12).unwrap().log_dim(), 2);
        assert_eq!(graded_basis(&c, 0, 3, 12).unwrap().log_dim(), 1);
        assert_eq!(graded_basis(&c, 0, 4, 12).unwrap().log_dim(), 2);

        let c = ctx(3, 2, 2);
        for n in [-5i64, -1, 0, 1, 3, 9] {
            let expect = 2 * level_at(3, 2, n) as u64;
            assert_eq!(graded_basis(&c, 0, n, 15).unwrap().log_dim(), expect);
            assert_eq!(graded_basis(&c, 1, n, 15).unwrap().log_dim(), expect);
        }
    }

    #[test]
    fn window_encode_decode_round_trip() {
        let c = ctx(2, 2, 2);
        let w = WindowSpace::new(&c, 1, 2, -5, 9);
        let mut rng = sample::rng(7);
        for _ in 0..20 {
            let f = sample::random_canonical_form(&c, &mut rng, 1, -5, 8, 4);
            let v = w.encode(&c, &f).unwrap();
            assert_eq!(w.decode(&c, &v).unwrap(), f);
        }
        // full span has log-order Σ e·φ(n), and generators are independent
        assert_eq!(w.full_span(&c).log_order(), w.log_full());
        // out-of-window support is a precision error
        let mut far = CanonicalForm::zero(1, 2);
        c.insert_comp(&mut far, -7, WCoeff(vec![1, 0]));
        assert!(w.encode(&c, &far).unwrap_err().is_precision());
    }

    #[test]
    fn operators_respect_the_filtration_on_random_forms() {
        let mut rng = sample::rng(1313);
        for (p, e, m) in [(2u64, 1u8, 2u8), (3, 1, 2), (2, 1, 3)] {
            let c = ctx(p, e, m);
            for q in [0u8, 1] {
                for _ in 0..15 {
                    let f = sample::random_canonical_form(&c, &mut rng, q, -6, 6, 4);
                    let n = f.support_min().map_or(0, |s| -s).max(0);
                    assert!(fil_membership_form(&f, n).unwrap());
                    assert!(fil_membership_form(&c.op_d(&f).unwrap(), n).unwrap());
                    assert!(fil_membership_form(&c.op_v(&f).unwrap(), n).unwrap());
                    if m >= 2 {
                        assert!(fil_membership_form(&c.op_f(&f).unwrap(), n).unwrap());
                        assert!(fil_membership_form(
                            &c.op_r(&f).unwrap(),
                            floor_div_p(n, p)
                        )
                        .unwrap());
                    }
                    // product rule on q=0 pairs
                    if q == 0 {
                        let g = sample::random_canonical_form(&c, &mut rng, 0, -6, 6, 4);
                        let ng = g.support_min().map_or(0, |s| -s).max(0);
                        let prod = c.mul_forms(&f, &g).unwrap();
                        assert!(fil_membership_form(&prod, n + ng).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn pi_translate_identifies_fil_with_the_integral_window() {
        // fil_{p^{m−1}·l} = [π^{−l}]·fil_0 componentwise
        let c = ctx(2, 1, 2);
        let mut rng = sample::rng(99);
        for l in 1..=3i64 {
            for _ in 0..10 {
                let f = sample::random_canonical_form(&c, &mut rng, 0, 0, 7, 4);
                assert!(fil_membership_form(&f, 0).unwrap());
                let shifted = c.mul_pi_power(&f, -l).unwrap();
                assert!(fil_membership_form(&shifted, 2 * l).unwrap());
                if let Some(min) = f.support_min() {
                    assert_eq!(shifted.support_min(), Some(min - 2 * l));
                }
            }
        }
    }

    #[test]
    fn pbar_test_agrees_in_both_directions() {
        let c = ctx(2, 1, 2);
        let omega = c.parse_form("q=0 m=1 p=2 e=1 { n=-1: A[ [1] ] }").unwrap();
        // p̄(ω) = V([π^{-2}]): membership at n = 2 ⟺ ω ∈ fil_1
        let pb = c.pbar(&omega).unwrap();
        let v = c
            .op_v(&c.parse_form("q=0 m=1 p=2 e=1 { n=-2: A[ [1] ] }").unwrap())
            .unwrap();
        assert_eq!(pb, v);
        assert!(pbar_test(&c, &omega, 2).unwrap());
        assert!(!pbar_test(&c, &omega, 1).unwrap());
        assert!(pbar_test(&c, &CanonicalForm::zero(0, 1), 0).unwrap());

        let mut rng = sample::rng(2024);
        for _ in 0..20 {
            let w = sample::random_canonical_form(&c, &mut rng, 1, -6, 6, 3);
            for n in -4..8 {
                pbar_test(&c, &w, n).unwrap();
            }
        }
    }

    #[test]
    fn vr_sequence_verifies_at_documented_parameters() {
        let c = ctx(2, 1, 2);
        let rep = verify_vr_sequence(&c, 0, 1, 12).unwrap();
        assert!(rep.is_verified(), "{rep:?}");
        let rep = verify_vr_sequence(&c, 1, 3, 12).unwrap();
        assert!(rep.is_verified(), "{rep:?}");
        // m = 1: target level zero, trivially exact
        let c1 = ctx(2, 1, 1);
        let rep = verify_vr_sequence(&c1, 1, 2, 8).unwrap();
        assert!(rep.is_verified(), "{rep:?}");
        let c3 = ctx(3, 1, 2);
        let rep = verify_vr_sequence(&c3, 1, 0, 10).unwrap();
        assert!(rep.is_verified(), "{rep:?}");
    }

    #[test]
    fn fbar_cbar_verifies_and_floor_collapses_parameters() {
        let c = ctx(2, 1, 2);
        let rep = verify_fbar_cbar(&c, 1, 0, 12).unwrap();
        assert!(rep.is_verified(), "{rep:?}");
        let c3 = ctx(3, 1, 2);
        let rep4 = verify_fbar_cbar(&c3, 0, 4, 12).unwrap();
        assert!(rep4.is_verified(), "{rep4:?}");
        // n and n+1 with the same ⌊n/p⌋ present the same left-hand window
        let rep5 = verify_fbar_cbar(&c3, 0, 5, 12).unwrap();
        assert!(rep5.is_verified(), "{rep5:?}");
        assert_eq!(rep4.dims["fil_floor"], rep5.dims["fil_floor"]);
    }

    #[test]
    fn kernel_identities_verify_on_small_windows() {
        let c = ctx(2, 1, 2);
        for (q, n) in [(0u8, 1i64), (1, 3)] {
            let rep = verify_kernel_identities(&c, q, n, 8).unwrap();
            assert!(rep.is_verified(), "q={q} n={n}: {rep:?}");
        }
        let c3 = ctx(3, 1, 2);
        let rep = verify_kernel_identities(&c3, 0, 2, 8).unwrap();
        assert!(rep.is_verified(), "{rep:?}");
    }
}
