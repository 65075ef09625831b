//! The multivariate filtered de Rham complex at level one: forms with
//! log poles along the normal-crossing divisor `x_1⋯x_r` inside
//! `A = F_q[[x_1, …, x_d]]`, localized at `π = x_1⋯x_r`.
//!
//! Over the perfect coefficient field every form decomposes uniquely as
//! a (completed) sum of basis terms `c·x^{\underline m}·dlog x_J·dx_{K}`
//! with `J ⊆ {1..r}`, `K ⊆ {r+1..d}`, `|J| + |K| = q`, and `m_i ≥ 0`
//! for `i > r`. Forms here are exact Laurent polynomials in that basis —
//! `d`, wedge, and both Cartier operators are support-finite, so no
//! truncation enters the operators themselves. The per-variable bound
//! `B` only sizes the windows of the verifiers.
//!
//! On windows the key exactness facts are literal, not approximate:
//! `d` preserves multidegrees and the Cartier operator divides them by
//! `p`, so kernels (`Z_i`-ladders) restrict faithfully to exponent
//! boxes, while surjectivity statements hold after widening the source
//! box by the appropriate power of `p` — the same prefix-truncation
//! discipline as the one-variable window spaces.

use std::collections::BTreeMap;

use crate::caps;
use crate::error::Error;
use crate::fq::{FqElt, FqField};
use crate::linalg::{image_of_pairs, kernel_of_pairs, ZModSpan};
use crate::report::{ReportBuilder, ReportParams, VerifierReport, VerifierStatus};
use crate::Result;

/// Hard ceiling on window dimensions inside the verifiers; beyond this
/// the Howell reductions stop being interactive.
const MAX_WINDOW_DIM: usize = 20_000;

/// `A = F_q[[x_1, …, x_d]]` with log structure along `x_1⋯x_r`, and the
/// default per-variable window bound `B` for the verifiers.
#[derive(Clone, Debug)]
pub struct SncdRing {
    field: FqField,
    d: u8,
    r: u8,
    b: i64,
}

/// A basis term index: the exponent vector (length `d`, entries for
/// `i ≥ r` nonnegative) and the letter mask (bit `i < r` for
/// `dlog x_{i+1}`, bit `i ≥ r` for `dx_{i+1}`; letters are ordered by
/// index, dlog block first).
type TermKey = (Vec<i64>, u8);

/// A `q`-form as a finite sum of basis terms with `F_q` coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiForm {
    pub q: u8,
    terms: BTreeMap<TermKey, FqElt>,
}

impl MultiForm {
    pub fn zero(q: u8) -> Self {
        MultiForm {
            q,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &FqElt)> {
        self.terms.iter()
    }
}

impl SncdRing {
    pub fn new(field: FqField, d: u8, r: u8, b: i64) -> Result<Self> {
        if r == 0 || r > d || d > caps::MAX_D {
            return Err(Error::caps(format!(
                "need 1 <= r <= d <= {}, got r = {r}, d = {d}",
                caps::MAX_D
            )));
        }
        if !(2..=caps::MAX_B).contains(&b) {
            return Err(Error::caps(format!(
                "window bound B = {b} outside 2..={}",
                caps::MAX_B
            )));
        }
        Ok(SncdRing { field, d, r, b })
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }
    pub fn d(&self) -> u8 {
        self.d
    }
    pub fn r(&self) -> u8 {
        self.r
    }
    pub fn b(&self) -> i64 {
        self.b
    }

    fn check_key(&self, exps: &[i64], mask: u8) -> Result<()> {
        if exps.len() != self.d as usize {
            return Err(Error::domain(format!(
                "exponent vector length {} != d = {}",
                exps.len(),
                self.d
            )));
        }
        if mask >= 1 << self.d {
            return Err(Error::domain("letter mask uses variables beyond d"));
        }
        for i in self.r as usize..self.d as usize {
            if exps[i] < 0 {
                return Err(Error::domain(format!(
                    "variable x_{} is not inverted: exponent {} < 0",
                    i + 1,
                    exps[i]
                )));
            }
        }
        Ok(())
    }

    /// `c · x^{exps} · (letters of mask)`.
    pub fn monomial_form(&self, exps: &[i64], mask: u8, c: FqElt) -> Result<MultiForm> {
        self.check_key(exps, mask)?;
        let q = mask.count_ones() as u8;
        let mut f = MultiForm::zero(q);
        self.add_term(&mut f, exps.to_vec(), mask, c);
        Ok(f)
    }

    fn add_term(&self, f: &mut MultiForm, exps: Vec<i64>, mask: u8, c: FqElt) {
        if c.is_zero() {
            return;
        }
        let key = (exps, mask);
        let cur = f.terms.get(&key).copied().unwrap_or_default();
        let sum = self.field.add(cur, c);
        if sum.is_zero() {
            f.terms.remove(&key);
        } else {
            f.terms.insert(key, sum);
        }
    }

    pub fn add_mforms(&self, f: &MultiForm, g: &MultiForm) -> Result<MultiForm> {
        if f.q != g.q {
            return Err(Error::domain("adding forms of different degrees"));
        }
        let mut out = f.clone();
        for ((exps, mask), &c) in &g.terms {
            self.add_term(&mut out, exps.clone(), *mask, c);
        }
        Ok(out)
    }

    pub fn neg_mform(&self, f: &MultiForm) -> MultiForm {
        let mut out = MultiForm::zero(f.q);
        for ((exps, mask), &c) in &f.terms {
            out.terms.insert((exps.clone(), *mask), self.field.neg(c));
        }
        out
    }

    pub fn sub_mforms(&self, f: &MultiForm, g: &MultiForm) -> Result<MultiForm> {
        self.add_mforms(f, &self.neg_mform(g))
    }

    pub fn scalar_mform(&self, c: FqElt, f: &MultiForm) -> MultiForm {
        let mut out = MultiForm::zero(f.q);
        for ((exps, mask), &a) in &f.terms {
            let v = self.field.mul(c, a);
            if !v.is_zero() {
                out.terms.insert((exps.clone(), *mask), v);
            }
        }
        out
    }

    /// Exterior derivative. On a basis term,
    /// `d(c·x^m·η) = Σ_i m_i·c·x^{m−[i>r]e_i}·(insert letter i into η)`,
    /// where log letters keep the exponent and `dx`-letters consume one
    /// power; coefficients `m_i ≡ 0 (mod p)` vanish.
    pub fn m_d(&self, f: &MultiForm) -> MultiForm {
        let p = self.field.p() as i64;
        let mut out = MultiForm::zero(f.q + 1);
        for ((exps, mask), &c) in &f.terms {
            for i in 0..self.d as usize {
                if mask & (1 << i) != 0 {
                    continue;
                }
                let mi = exps[i].rem_euclid(p);
                if mi == 0 {
                    continue;
                }
                let mut coeff = self.field.mul(self.field.from_int(mi), c);
                if (mask & ((1 << i) - 1)).count_ones() % 2 == 1 {
                    coeff = self.field.neg(coeff);
                }
                let mut e2 = exps.clone();
                if i >= self.r as usize {
                    e2[i] -= 1;
                    if e2[i] < 0 {
                        // only possible when exps[i] = 0, but then mi = 0
                        continue;
                    }
                }
                self.add_term(&mut out, e2, mask | (1 << i), coeff);
            }
        }
        out
    }

    pub fn is_closed(&self, f: &MultiForm) -> bool {
        self.m_d(f).is_zero()
    }

    pub fn m_wedge(&self, f: &MultiForm, g: &MultiForm) -> Result<MultiForm> {
        let q = f.q + g.q;
        let mut out = MultiForm::zero(q);
        if q > self.d {
            return Ok(out);
        }
        for ((ea, ma), &ca) in &f.terms {
            for ((eb, mb), &cb) in &g.terms {
                if ma & mb != 0 {
                    continue;
                }
                // inversions: pairs (u ∈ ma, v ∈ mb) with v < u
                let mut inv = 0u32;
                for v in 0..self.d {
                    if mb & (1 << v) != 0 {
                        inv += (ma >> (v + 1)).count_ones();
                    }
                }
                let mut c = self.field.mul(ca, cb);
                if inv % 2 == 1 {
                    c = self.field.neg(c);
                }
                let exps: Vec<i64> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                self.add_term(&mut out, exps, ma | mb, c);
            }
        }
        Ok(out)
    }

    /// `f ∈ fil_{\underline n}` iff every term has `m_i ≥ −n_i` for all
    /// log variables — a pure support test.
    pub fn m_fil_membership(&self, f: &MultiForm, nbar: &[i64]) -> Result<bool> {
        if nbar.len() != self.r as usize {
            return Err(Error::domain(format!(
                "filtration index length {} != r = {}",
                nbar.len(),
                self.r
            )));
        }
        Ok(f.terms.keys().all(|(exps, _)| {
            (0..self.r as usize).all(|i| exps[i] >= -nbar[i])
        }))
    }

    /// Inverse Cartier: `C^{-1}(c·x^m·dlog x_J·dx_K) =
    /// c^p·x^{pm + (p−1)Σ_{k∈K} e_k}·dlog x_J·dx_K`. Always lands in
    /// `Z_1` and satisfies `C∘C^{-1} = id`.
    pub fn m_cartier_inverse(&self, f: &MultiForm) -> MultiForm {
        let p = self.field.p() as i64;
        let mut out = MultiForm::zero(f.q);
        for ((exps, mask), &c) in &f.terms {
            let mut e2: Vec<i64> = exps.iter().map(|m| p * m).collect();
            for k in self.r as usize..self.d as usize {
                if mask & (1 << k) != 0 {
                    e2[k] += p - 1;
                }
            }
            out.terms.insert((e2, *mask), self.field.frob(c));
        }
        out
    }

    /// Cartier operator on closed forms. Componentwise: a term survives
    /// iff all log exponents and unset-`dx` exponents are divisible by
    /// `p` and every set-`dx` exponent is `≡ p−1 (mod p)`; it maps to
    /// the term with exponents divided by `p` (after stripping the
    /// `p−1`) and coefficient `c^{1/p}`. Off-pattern terms of a closed
    /// form assemble into exact pieces, which Cartier kills: the rule
    /// satisfies `C∘C^{-1} = id` and `C∘d = 0` identically, which pins
    /// it down on `Z_1 = C^{-1}(Ω^q) ⊕ B_1`.
    pub fn m_cartier(&self, f: &MultiForm) -> Result<MultiForm> {
        if !self.is_closed(f) {
            return Err(Error::domain("Cartier is defined on Z_1 only: df != 0"));
        }
        let p = self.field.p() as i64;
        let mut out = MultiForm::zero(f.q);
        for ((exps, mask), &c) in &f.terms {
            let mut e2 = Vec::with_capacity(self.d as usize);
            let mut ok = true;
            for i in 0..self.d as usize {
                let dx_set = i >= self.r as usize && mask & (1 << i) != 0;
                let m = if dx_set { exps[i] - (p - 1) } else { exps[i] };
                if m.rem_euclid(p) != 0 {
                    ok = false;
                    break;
                }
                e2.push(m / p);
            }
            if ok {
                self.add_term(&mut out, e2, *mask, self.field.frob_inv(c));
            }
        }
        Ok(out)
    }

    fn format_form(&self, f: &MultiForm) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for ((exps, mask), &c) in &f.terms {
            let mut s = self.field.format_elt(c);
            for (i, &m) in exps.iter().enumerate() {
                if m != 0 {
                    s.push_str(&format!("*x{}^{}", i + 1, m));
                }
            }
            for i in 0..self.d {
                if mask & (1 << i) != 0 {
                    if i < self.r {
                        s.push_str(&format!("*dlog(x{})", i + 1));
                    } else {
                        s.push_str(&format!("*dx{}", i + 1));
                    }
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

// ── windows ─────────────────────────────────────────────────────────────

/// An exponent box `∏_i [lo_i, hi_i)` at degree `q`, with basis slots
/// `(exponents, mask)` and `e` prime-field coordinates per slot.
pub struct MWindow {
    q: u8,
    lo: Vec<i64>,
    hi: Vec<i64>,
    slots: Vec<TermKey>,
    index: BTreeMap<TermKey, usize>,
    e: usize,
}

impl MWindow {
    pub fn new(ring: &SncdRing, q: u8, lo: &[i64], hi: &[i64]) -> Result<MWindow> {
        let d = ring.d as usize;
        if lo.len() != d || hi.len() != d {
            return Err(Error::domain("window bounds must have length d"));
        }
        for i in ring.r as usize..d {
            if lo[i] < 0 {
                return Err(Error::domain("non-log variables cannot have negative exponents"));
            }
        }
        let mut slots = Vec::new();
        for mask in 0u8..(1 << d) {
            if mask.count_ones() != u32::from(q) {
                continue;
            }
            let mut exps = lo.to_vec();
            'box_walk: loop {
                slots.push((exps.clone(), mask));
                for i in 0..d {
                    exps[i] += 1;
                    if exps[i] < hi[i] {
                        continue 'box_walk;
                    }
                    exps[i] = lo[i];
                }
                break;
            }
        }
        // the odometer above visits the empty box once; drop it
        if lo.iter().zip(hi).any(|(a, b)| a >= b) {
            slots.clear();
        }
        let e = ring.field.e() as usize;
        if slots.len() * e > MAX_WINDOW_DIM {
            return Err(Error::caps(format!(
                "window dimension {} exceeds {MAX_WINDOW_DIM}",
                slots.len() * e
            )));
        }
        let index = slots
            .iter()
            .cloned()
            .enumerate()
            .map(|(k, key)| (key, k))
            .collect();
        Ok(MWindow {
            q,
            lo: lo.to_vec(),
            hi: hi.to_vec(),
            slots,
            index,
            e,
        })
    }

    pub fn dim(&self) -> usize {
        self.slots.len() * self.e
    }

    fn encode_inner(&self, f: &MultiForm, clip_hi: bool) -> Result<Vec<u64>> {
        if f.q != self.q {
            return Err(Error::domain("form degree does not match the window"));
        }
        let mut v = vec![0u64; self.dim()];
        for ((exps, mask), &c) in &f.terms {
            let Some(&slot) = self.index.get(&(exps.clone(), *mask)) else {
                let above = exps
                    .iter()
                    .zip(&self.hi)
                    .any(|(m, b)| m >= b);
                if clip_hi && above && exps.iter().zip(&self.lo).all(|(m, a)| m >= a) {
                    continue;
                }
                return Err(Error::precision(format!(
                    "term at exponents {exps:?} falls outside the window box"
                )));
            };
            for j in 0..self.e {
                v[slot * self.e + j] = u64::from(c.coeff(j));
            }
        }
        Ok(v)
    }

    /// Exact encoding: any support outside the box is an error.
    pub fn encode(&self, _ring: &SncdRing, f: &MultiForm) -> Result<Vec<u64>> {
        self.encode_inner(f, false)
    }

    /// Restriction map of the product decomposition: terms above the
    /// upper bound are discarded; support below a lower bound is still
    /// an error (it would mean a filtration violation, not truncation).
    pub fn encode_clip(&self, _ring: &SncdRing, f: &MultiForm) -> Result<Vec<u64>> {
        self.encode_inner(f, true)
    }

    pub fn decode(&self, ring: &SncdRing, v: &[u64]) -> Result<MultiForm> {
        if v.len() != self.dim() {
            return Err(Error::domain("coordinate vector length mismatch"));
        }
        let mut f = MultiForm::zero(self.q);
        for (slot, key) in self.slots.iter().enumerate() {
            let digits: Vec<u64> = (0..self.e).map(|j| v[slot * self.e + j]).collect();
            let c = ring.field.elt(&digits)?;
            ring.add_term(&mut f, key.0.clone(), key.1, c);
        }
        Ok(f)
    }

    /// One generator form per coordinate.
    fn basis_form(&self, ring: &SncdRing, coord: usize) -> Result<MultiForm> {
        let mut v = vec![0u64; self.dim()];
        v[coord] = 1;
        self.decode(ring, &v)
    }
}

fn unit_vec(dim: usize, k: usize) -> Vec<u64> {
    let mut v = vec![0u64; dim];
    v[k] = 1;
    v
}

/// Pairs `(d(gen), gen)` over every coordinate generator of `src`,
/// encoded exactly in `dst` (exponents are preserved by `d`, so the box
/// carries over whenever `dst` has the same bounds at degree `q+1`).
fn d_pairs(
    ring: &SncdRing,
    src: &MWindow,
    dst: &MWindow,
) -> Result<Vec<(Vec<u64>, Vec<u64>)>> {
    let mut pairs = Vec::with_capacity(src.dim());
    for k in 0..src.dim() {
        let f = src.basis_form(ring, k)?;
        pairs.push((dst.encode(ring, &ring.m_d(&f))?, unit_vec(src.dim(), k)));
    }
    Ok(pairs)
}

/// `Z_1` of the box: kernel of `d` into the same box at degree `q+1`.
fn z1_span(ring: &SncdRing, win: &MWindow, up: &MWindow) -> Result<ZModSpan> {
    let p = ring.field.p();
    if up.dim() == 0 {
        let rows = (0..win.dim()).map(|k| unit_vec(win.dim(), k)).collect();
        return Ok(ZModSpan::new(p, 1, win.dim(), rows));
    }
    Ok(kernel_of_pairs(p, 1, up.dim(), win.dim(), &d_pairs(ring, win, up)?))
}

/// `B_1` of the box: image of `d` from the same box at degree `q−1`.
fn b1_span(ring: &SncdRing, win: &MWindow) -> Result<ZModSpan> {
    let p = ring.field.p();
    if win.q == 0 {
        return Ok(ZModSpan::zero(p, 1, win.dim()));
    }
    let below = MWindow::new(ring, win.q - 1, &win.lo, &win.hi)?;
    let mut rows = Vec::with_capacity(below.dim());
    for k in 0..below.dim() {
        let f = below.basis_form(ring, k)?;
        rows.push(win.encode(ring, &ring.m_d(&f))?);
    }
    Ok(ZModSpan::new(p, 1, win.dim(), rows))
}

/// `{v ∈ span(pairs sources) : map(v) ∈ target}` via kernel of the
/// composite with the quotient by `target` (target rows adjoined as
/// relations).
fn preimage_span(
    p: u64,
    img_dim: usize,
    src_dim: usize,
    pairs: &[(Vec<u64>, Vec<u64>)],
    target: &ZModSpan,
) -> ZModSpan {
    let mut all = pairs.to_vec();
    for row in target.rows() {
        all.push((row.clone(), vec![0u64; src_dim]));
    }
    kernel_of_pairs(p, 1, img_dim, src_dim, &all)
}

fn mreport_params(ring: &SncdRing, q: u8, n: i64, prec: i64) -> ReportParams {
    ReportParams {
        p: ring.field.p(),
        e: ring.field.e(),
        m: 1,
        q,
        n,
        prec,
    }
}

// ── verifiers ───────────────────────────────────────────────────────────

/// The relative-log sequence at level one: on windows,
/// `Z_1fil_{−\underline n}Ω^q →(1−C)→ fil_{(−\underline n)/p}Ω^q → 0`
/// is exact on the right, and its kernel is exactly the relative
/// logarithmic forms — the span of truncated
/// `dlog(1+c·x^a) ∧ dlog(1+c'·x^{a'}) ∧ ⋯ ∧ dlog x_S` symbols with
/// `x^a ∈ I_{\underline n}` (kernel and span are compared where the
/// window map is complete, below `⌈B/p⌉`).
pub fn verify_rel_log_sequence(
    ring: &SncdRing,
    nbar: &[i64],
    q: u8,
    prec: i64,
) -> Result<VerifierReport> {
    let d = ring.d as usize;
    let r = ring.r as usize;
    if nbar.len() != r || nbar.iter().any(|&n| n < 1) {
        return Err(Error::domain("need a filtration index with all n_i >= 1"));
    }
    if q > ring.d {
        return Err(Error::domain("degree exceeds the number of variables"));
    }
    let p = ring.field.p();
    let pi = p as i64;
    let nmax = *nbar.iter().max().unwrap();
    let sur_b = (pi * nmax + 2).max(prec).min(pi * caps::MAX_B);
    // kernel-side box top, sized so the trusted bound below clears n
    let small_b = (pi * (nmax + 2)).max(prec).min(pi * (caps::MAX_B + 2));
    // trusted bound: a slot at exponent m is complete only if its
    // Cartier preimage p·m (log letters) resp. p·m + (p−1) (dx letters)
    // fits under the box top; the dx bound p·m + p − 1 < B means
    // m < ⌊B/p⌋, which is the stricter of the two — use it uniformly
    let bprime = small_b / pi;
    let mut b = ReportBuilder::new("rel-log-sequence", mreport_params(ring, q, nbar[0], prec));

    let lo_fil: Vec<i64> = (0..d).map(|i| if i < r { nbar[i] } else { 0 }).collect();
    let lo_tgt: Vec<i64> = (0..d)
        .map(|i| if i < r { (nbar[i] + pi - 1) / pi } else { 0 })
        .collect();
    let box_hi = |top: i64| vec![top; d];

    // surjectivity: source widened to [n, p·B + p) so every target
    // slot's Cartier preimage (dx-letter shift included) is in the box
    let src_big = MWindow::new(ring, q, &lo_fil, &box_hi(pi * sur_b + pi))?;
    let up_big = MWindow::new(ring, q + 1, &lo_fil, &box_hi(pi * sur_b + pi))?;
    let target = MWindow::new(ring, q, &lo_tgt, &box_hi(sur_b))?;
    let z1_big = z1_span(ring, &src_big, &up_big)?;
    let mut img_rows = Vec::new();
    for row in z1_big.rows() {
        let f = src_big.decode(ring, row)?;
        let g = ring.sub_mforms(&f, &ring.m_cartier(&f)?)?;
        img_rows.push(target.encode_clip(ring, &g)?);
    }
    let image = ZModSpan::new(p, 1, target.dim(), img_rows);
    let surjective = image.log_order() == target.dim() as u64;

    // kernel side on [n, B), compared below the trusted bound
    let src = MWindow::new(ring, q, &lo_fil, &box_hi(small_b))?;
    let up = MWindow::new(ring, q + 1, &lo_fil, &box_hi(small_b))?;
    let tgt_trunc = MWindow::new(ring, q, &lo_tgt, &box_hi(bprime))?;
    let z1 = z1_span(ring, &src, &up)?;
    let mut pairs = Vec::new();
    for row in z1.rows() {
        let f = src.decode(ring, row)?;
        let g = ring.sub_mforms(&f, &ring.m_cartier(&f)?)?;
        pairs.push((tgt_trunc.encode_clip(ring, &g)?, row.clone()));
    }
    let kernel = kernel_of_pairs(p, 1, tgt_trunc.dim(), src.dim(), &pairs);

    // independent relative-log span: products of one-unit dlog symbols
    // (first factor forced into 1 + I_n) and monomial dlog letters
    let log_span = rel_log_generators(ring, nbar, q, small_b, &src)?;

    // compare where trustworthy: exponents below B'
    let proj: Vec<usize> = (0..src.dim())
        .filter(|&c| {
            let (exps, _) = &src.slots[c / src.e];
            exps.iter().all(|&m| m < bprime)
        })
        .collect();
    let project = |span: &ZModSpan| -> ZModSpan {
        let rows = span
            .rows()
            .iter()
            .map(|row| proj.iter().map(|&c| row[c]).collect())
            .collect();
        ZModSpan::new(p, 1, proj.len(), rows)
    };
    let ker_proj = project(&kernel);
    let log_proj = project(&log_span);
    let kernel_matches = ker_proj.contains_span(&log_proj) && log_proj.contains_span(&ker_proj);

    b.dim("z1fil_window", z1_big.log_order())
        .dim("image", image.log_order())
        .dim("target", target.dim() as u64)
        .dim("kernel", kernel.log_order())
        .dim("log_span", log_span.log_order())
        .dim("kernel_proj", ker_proj.log_order())
        .dim("log_span_proj", log_proj.log_order());
    if surjective && kernel_matches {
        Ok(b.finish(VerifierStatus::Verified))
    } else {
        if !surjective {
            b.witness("a target window class is missed by (1-C)".to_string());
        } else {
            let row = ker_proj
                .rows()
                .iter()
                .find(|row| !log_proj.contains(row))
                .or_else(|| log_proj.rows().iter().find(|row| !ker_proj.contains(row)));
            if let Some(_row) = row {
                b.witness("kernel and dlog-span differ on the trusted box".to_string());
            }
        }
        Ok(b.finish(VerifierStatus::Falsified))
    }
}

/// Window span of the relative logarithmic generators
/// `dlog(1+c_1 x^{a_1}) ∧ ⋯ ∧ dlog(1+c_j x^{a_j}) ∧ dlog x_S`,
/// `1 ≤ j ≤ q`, `|S| = q − j`, all `a_i` in `I_{\underline n}` within
/// the box, truncated to the window.
fn rel_log_generators(
    ring: &SncdRing,
    nbar: &[i64],
    q: u8,
    top: i64,
    win: &MWindow,
) -> Result<ZModSpan> {
    let p = ring.field.p();
    let d = ring.d as usize;
    let r = ring.r as usize;
    if q == 0 {
        return Ok(ZModSpan::zero(p, 1, win.dim()));
    }
    // enumerate the one-unit symbols dlog(1+c·x^a), truncated to the box
    let mut unit_symbols: Vec<MultiForm> = Vec::new();
    let lo: Vec<i64> = (0..d).map(|i| if i < r { nbar[i] } else { 0 }).collect();
    let mut a = lo.clone();
    'box_walk: loop {
        for j in 0..ring.field.e() as usize {
            let digits: Vec<u64> = (0..ring.field.e() as usize)
                .map(|k| u64::from(k == j))
                .collect();
            let c = ring.field.elt(&digits)?;
            unit_symbols.push(dlog_one_unit(ring, &a, c, top)?);
        }
        for i in 0..d {
            a[i] += 1;
            if a[i] < top {
                continue 'box_walk;
            }
            a[i] = lo[i];
        }
        break;
    }

    let mut rows = Vec::new();
    // wedge j unit symbols (indices strictly increasing) with dlog x_S
    let masks: Vec<u8> = (0u8..1 << r).filter(|m| m.count_ones() <= u32::from(q)).collect();
    let mut stack: Vec<usize> = Vec::new();
    build_products(
        ring,
        &unit_symbols,
        &masks,
        q,
        0,
        &mut stack,
        &MultiForm::zero(0),
        win,
        &mut rows,
    )?;
    if rows.len() > MAX_WINDOW_DIM {
        return Err(Error::caps("too many relative-log generators"));
    }
    Ok(ZModSpan::new(p, 1, win.dim(), rows))
}

/// `dlog(1 + c·x^a) = Σ_{k≥0} (−1)^k (c·x^a)^k d(c·x^a)`, truncated to
/// exponents < `top` (the log-variable entries of `a` are ≥ 1, so the
/// series leaves the box after finitely many steps).
fn dlog_one_unit(ring: &SncdRing, a: &[i64], c: FqElt, top: i64) -> Result<MultiForm> {
    let t = ring.monomial_form(a, 0, c)?;
    let dt = ring.m_d(&t);
    let mut out = MultiForm::zero(1);
    let mut pw = ring.monomial_form(&vec![0; ring.d as usize], 0, ring.field.one())?;
    let mut sign = ring.field.one();
    loop {
        let term = ring.scalar_mform(sign, &ring.m_wedge(&pw, &dt)?);
        let clipped: Vec<_> = term
            .terms
            .iter()
            .filter(|((exps, _), _)| exps.iter().all(|&m| m < top))
            .map(|(k, v)| (k.clone(), *v))
            .collect();
        if clipped.is_empty() {
            break;
        }
        for (key, v) in clipped {
            ring.add_term(&mut out, key.0, key.1, v);
        }
        pw = ring.m_wedge(&pw, &t)?;
        sign = ring.field.neg(sign);
        if pw.is_zero() || pw.terms.keys().all(|(exps, _)| exps.iter().any(|&m| m >= top)) {
            break;
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn build_products(
    ring: &SncdRing,
    unit_symbols: &[MultiForm],
    masks: &[u8],
    q: u8,
    start: usize,
    stack: &mut Vec<usize>,
    acc: &MultiForm,
    win: &MWindow,
    rows: &mut Vec<Vec<u64>>,
) -> Result<()> {
    let j = stack.len() as u8;
    if j >= 1 && j <= q {
        let need = q - j;
        for &mask in masks {
            if mask.count_ones() != u32::from(need) {
                continue;
            }
            let monomial = ring.monomial_form(&vec![0; ring.d as usize], mask, ring.field.one())?;
            let full = ring.m_wedge(acc, &monomial)?;
            rows.push(win.encode_clip(ring, &full)?);
        }
    }
    if j == q {
        return Ok(());
    }
    for idx in start..unit_symbols.len() {
        stack.push(idx);
        let next = if stack.len() == 1 {
            unit_symbols[idx].clone()
        } else {
            ring.m_wedge(acc, &unit_symbols[idx])?
        };
        build_products(ring, unit_symbols, masks, q, idx + 1, stack, &next, win, rows)?;
        stack.pop();
    }
    Ok(())
}

/// The Cartier ladder `Z_{i+1} ⊂ Z_i` and `B_i ⊂ B_{i+1}` on windows:
/// both short exact sequences
/// `0 → Z_{i+1}Ω^q → Z_iΩ^q →dC^i→ B_1Ω^{q+1} → 0` and
/// `0 → B_iΩ^q → B_{i+1}Ω^q →C^i→ B_1Ω^q → 0`
/// hold as exact span identities, with the source box widened by `p^i`
/// so the window maps are complete.
pub fn verify_zi_bi_ladder(
    ring: &SncdRing,
    i: u8,
    q: u8,
    nbar: &[i64],
    prec: i64,
) -> Result<VerifierReport> {
    let d = ring.d as usize;
    let r = ring.r as usize;
    if i > 3 {
        return Err(Error::domain("ladder depth capped at 3"));
    }
    if nbar.len() != r || nbar.iter().any(|&n| n < 0) || q > ring.d {
        return Err(Error::domain("bad filtration index or degree"));
    }
    let p = ring.field.p();
    let pi = p as i64;
    let base_b = prec.clamp(2, caps::MAX_B);
    let mut b = ReportBuilder::new("zi-bi-ladder", mreport_params(ring, q, nbar[0], prec));

    // tower of boxes W_j = ∏ [−n_v·p^j, B·p^j) (log) × [0, B·p^j)
    let win = |j: u8, deg: u8| -> Result<MWindow> {
        let scale = pi.pow(u32::from(j));
        let lo: Vec<i64> = (0..d)
            .map(|v| if v < r { -nbar[v] * scale } else { 0 })
            .collect();
        let hi = vec![base_b * scale; d];
        MWindow::new(ring, deg, &lo, &hi)
    };

    // z[j][k] = Z_k on W_j (k = 0 is the full box), b[j][k] = B_k on W_j
    let mut z: Vec<Vec<ZModSpan>> = Vec::new();
    let mut bb: Vec<Vec<ZModSpan>> = Vec::new();
    for j in 0..=i {
        let wq = win(j, q)?;
        let wup = win(j, q + 1)?;
        let full_rows = (0..wq.dim()).map(|k| unit_vec(wq.dim(), k)).collect();
        let mut zj = vec![
            ZModSpan::new(p, 1, wq.dim(), full_rows),
            z1_span(ring, &wq, &wup)?,
        ];
        let mut bj = vec![ZModSpan::zero(p, 1, wq.dim()), b1_span(ring, &wq)?];
        for k in 1..=j {
            // Z_{k+1}(W_j) = {z ∈ Z_1(W_j) : C(z) ∈ Z_k(W_{j−1})}, same for B
            let wdown = win(j - 1, q)?;
            let mut pairs = Vec::new();
            for row in zj[1].rows() {
                let f = wq.decode(ring, row)?;
                pairs.push((wdown.encode(ring, &ring.m_cartier(&f)?)?, row.clone()));
            }
            zj.push(preimage_span(
                p,
                wdown.dim(),
                wq.dim(),
                &pairs,
                &z[(j - 1) as usize][k as usize],
            ));
            bj.push(preimage_span(
                p,
                wdown.dim(),
                wq.dim(),
                &pairs,
                &bb[(j - 1) as usize][k as usize],
            ));
        }
        z.push(zj);
        bb.push(bj);
    }

    let wi = win(i, q)?;
    let w0q = win(0, q)?;
    let w0up = win(0, q + 1)?;
    let b1_up = b1_span(ring, &w0up)?;
    let iu = i as usize;

    // first sequence: dC^i : Z_i(W_i) → B_1Ω^{q+1}(W_0)
    let mut pairs1 = Vec::new();
    for row in z[iu][iu].rows() {
        let mut f = wi.decode(ring, row)?;
        for _ in 0..i {
            f = ring.m_cartier(&f)?;
        }
        pairs1.push((w0up.encode(ring, &ring.m_d(&f))?, row.clone()));
    }
    let img1 = image_of_pairs(p, 1, w0up.dim(), &pairs1);
    let ker1 = kernel_of_pairs(p, 1, w0up.dim(), wi.dim(), &pairs1);
    let seq1_img = img1.contains_span(&b1_up) && b1_up.contains_span(&img1);
    let seq1_ker = ker1.contains_span(&z[iu][iu + 1]) && z[iu][iu + 1].contains_span(&ker1);

    // second sequence: C^i : B_{i+1}(W_i) → B_1Ω^q(W_0)
    let (seq2_img, seq2_ker) = if i == 0 {
        (true, true) // B_0 = 0 and C^0 = id: nothing to check
    } else {
        let b1_q = bb[0][1].clone();
        let mut pairs2 = Vec::new();
        for row in bb[iu][iu + 1].rows() {
            let mut f = wi.decode(ring, row)?;
            for _ in 0..i {
                f = ring.m_cartier(&f)?;
            }
            pairs2.push((w0q.encode(ring, &f)?, row.clone()));
        }
        let img2 = image_of_pairs(p, 1, w0q.dim(), &pairs2);
        let ker2 = kernel_of_pairs(p, 1, w0q.dim(), wi.dim(), &pairs2);
        (
            img2.contains_span(&b1_q) && b1_q.contains_span(&img2),
            ker2.contains_span(&bb[iu][iu]) && bb[iu][iu].contains_span(&ker2),
        )
    };

    b.dim("z_i", z[iu][iu].log_order())
        .dim("z_iplus1", z[iu][iu + 1].log_order())
        .dim("b_i", bb[iu][iu].log_order())
        .dim("b_iplus1", bb[iu][iu + 1].log_order())
        .dim("b1_up", b1_up.log_order());
    if seq1_img && seq1_ker && seq2_img && seq2_ker {
        Ok(b.finish(VerifierStatus::Verified))
    } else {
        b.witness(format!(
            "sequence checks (img1, ker1, img2, ker2) = \
             ({seq1_img}, {seq1_ker}, {seq2_img}, {seq2_ker})"
        ));
        Ok(b.finish(VerifierStatus::Falsified))
    }
}

/// Čech injectivity for `R = F_q[[Y_1, Y_2]]` (`d = r = 2`): with
/// `H²_𝔪(M) = coker(M_{Y_1} ⊕ M_{Y_2} → M_{Y_1Y_2})`, the map
/// `(1−C)^* : H²_𝔪(Z_1fil_{(n,m)}Ω^q) → H²_𝔪(fil_{(n,m)}Ω^q)` has zero
/// kernel. The localized modules drop the corresponding variable's
/// support condition; on the window both cokernels and the induced map
/// are computed literally.
pub fn cech_one_minus_c_injectivity(
    ring: &SncdRing,
    n: i64,
    m2: i64,
    q: u8,
    prec: i64,
) -> Result<VerifierReport> {
    if ring.d != 2 || ring.r != 2 {
        return Err(Error::domain("the Čech check is for d = r = 2"));
    }
    if n < 0 || m2 < 0 || q > 2 {
        return Err(Error::domain("need n, m >= 0 and q <= 2"));
    }
    let p = ring.field.p();
    let big = (n.max(m2) + 2).max(prec).min(2 * caps::MAX_B);
    let mut b = ReportBuilder::new("cech-one-minus-c", mreport_params(ring, q, n, prec));

    let full = MWindow::new(ring, q, &[-big, -big], &[big, big])?;
    let full_up = MWindow::new(ring, q + 1, &[-big, -big], &[big, big])?;

    // Z_1 of the full box
    let v_z = z1_span(ring, &full, &full_up)?;

    // denominators: Z_1 of the two localized sub-boxes, and the
    // coordinate span of fil_{Y_1} + fil_{Y_2}
    let sub_kernel = |keep_y1: bool| -> Result<ZModSpan> {
        let mut pairs = Vec::new();
        for (slot, (exps, _)) in full.slots.iter().enumerate() {
            let ok = if keep_y1 { exps[0] >= -n } else { exps[1] >= -m2 };
            if !ok {
                continue;
            }
            for j in 0..full.e {
                let c = slot * full.e + j;
                let f = full.basis_form(ring, c)?;
                pairs.push((full_up.encode(ring, &ring.m_d(&f))?, unit_vec(full.dim(), c)));
            }
        }
        Ok(kernel_of_pairs(p, 1, full_up.dim(), full.dim(), &pairs))
    };
    let d_z = sub_kernel(false)?.sum(&sub_kernel(true)?);

    let mut d_f_rows = Vec::new();
    for (slot, (exps, _)) in full.slots.iter().enumerate() {
        if exps[0] >= -n || exps[1] >= -m2 {
            for j in 0..full.e {
                d_f_rows.push(unit_vec(full.dim(), slot * full.e + j));
            }
        }
    }
    let d_f = ZModSpan::new(p, 1, full.dim(), d_f_rows);

    // induced map on H² classes: preimage of D_F under (1−C) within Z_1
    let mut pairs = Vec::new();
    for row in v_z.rows() {
        let f = full.decode(ring, row)?;
        let g = ring.sub_mforms(&f, &ring.m_cartier(&f)?)?;
        pairs.push((full.encode(ring, &g)?, row.clone()));
    }
    let pre = preimage_span(p, full.dim(), full.dim(), &pairs, &d_f);

    if !pre.contains_span(&d_z) {
        return Err(Error::internal(
            "(1-C) failed to map the localized denominators into fil_{Y_1} + fil_{Y_2}",
        ));
    }
    let h2_z = v_z.log_order() - d_z.log_order();
    let h2_f = full.dim() as u64 - d_f.log_order();
    let excess = pre.log_order() - d_z.log_order();
    b.dim("h2_z1fil", h2_z).dim("h2_fil", h2_f).dim("kernel", excess);
    if excess == 0 {
        Ok(b.finish(VerifierStatus::Verified))
    } else {
        let row = pre.rows().iter().find(|row| !d_z.contains(row));
        if let Some(row) = row {
            let f = full.decode(ring, row)?;
            b.witness(format!(
                "class killed by (1-C)* but nonzero in H2: {}",
                ring.format_form(&f)
            ));
        }
        Ok(b.finish(VerifierStatus::Falsified))
    }
}
