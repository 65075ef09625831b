//! Truncated Laurent series over `F_q`: the local field `K = F_q((π))`
//! with a hard precision contract.
//!
//! A series is either *exact* (finitely many nonzero coefficients, all
//! stated) or known modulo `O(π^N)`. Reading a coefficient at or beyond
//! the precision bound is a loud [`Error::precision`] — never a silent
//! zero — and every operation propagates the provable precision:
//!
//! * `add`: `min(N₁, N₂)`;
//! * `mul`: `min(v₁+N₂, v₂+N₁)` with `vᵢ` the valuation lower bounds;
//! * `invert` of a unit of valuation `v` known mod `π^N`: `N − 2v`;
//! * `pth_power`: exact per coefficient, precision `p·N` (char-`p`
//!   freshman's dream).

use crate::error::Error;
use crate::fq::{FqElt, FqField};
use crate::Result;
use std::collections::BTreeMap;

/// Valuation of a truncated series, which may be undetermined.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Valuation {
    /// Leading nonzero coefficient visible at this index.
    Exact(i64),
    /// All visible coefficients vanish; the series is `O(π^N)`.
    ZeroToPrecision(i64),
    /// The exact zero series.
    ZeroExact,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncSeries {
    field: FqField,
    /// Nonzero coefficients only, every index `< prec` when `prec` is set.
    coeffs: BTreeMap<i64, FqElt>,
    /// `Some(N)`: known modulo `O(π^N)`. `None`: exact.
    prec: Option<i64>,
}

impl TruncSeries {
    pub fn zero(field: FqField) -> Self {
        TruncSeries {
            field,
            coeffs: BTreeMap::new(),
            prec: None,
        }
    }

    /// The zero-to-precision series `O(π^N)`.
    pub fn o_prec(field: FqField, n: i64) -> Self {
        TruncSeries {
            field,
            coeffs: BTreeMap::new(),
            prec: Some(n),
        }
    }

    pub fn monomial(field: FqField, c: FqElt, k: i64) -> Self {
        let mut s = TruncSeries::zero(field);
        if !c.is_zero() {
            s.coeffs.insert(k, c);
        }
        s
    }

    pub fn one(field: FqField) -> Self {
        let c = field.from_int(1);
        TruncSeries::monomial(field, c, 0)
    }

    pub fn pi_power(field: FqField, k: i64) -> Self {
        let c = field.from_int(1);
        TruncSeries::monomial(field, c, k)
    }

    pub fn from_coeffs(field: FqField, entries: &[(i64, FqElt)], prec: Option<i64>) -> Result<Self> {
        let mut s = TruncSeries {
            field,
            coeffs: BTreeMap::new(),
            prec,
        };
        for &(i, c) in entries {
            if let Some(n) = prec {
                if i >= n {
                    return Err(Error::domain(format!(
                        "coefficient at index {i} is at or beyond the precision bound {n}"
                    )));
                }
            }
            if !c.is_zero() {
                let cur = s.coeffs.entry(i).or_insert(FqElt::ZERO);
                *cur = s.field.add(*cur, c);
                if cur.is_zero() {
                    s.coeffs.remove(&i);
                }
            }
        }
        Ok(s)
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn prec(&self) -> Option<i64> {
        self.prec
    }

    /// Known-nonzero coefficient entries in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, FqElt)> + '_ {
        self.coeffs.iter().map(|(&i, &c)| (i, c))
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exactly_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec.is_none()
    }

    pub fn valuation(&self) -> Valuation {
        match self.coeffs.keys().next() {
            Some(&v) => Valuation::Exact(v),
            None => match self.prec {
                Some(n) => Valuation::ZeroToPrecision(n),
                None => Valuation::ZeroExact,
            },
        }
    }

    /// Lower bound for the valuation (`None` only for the exact zero).
    fn valuation_lb(&self) -> Option<i64> {
        match self.valuation() {
            Valuation::Exact(v) => Some(v),
            Valuation::ZeroToPrecision(n) => Some(n),
            Valuation::ZeroExact => None,
        }
    }

    /// Coefficient of `π^i`; refuses to answer at or beyond precision.
    pub fn coefficient(&self, i: i64) -> Result<FqElt> {
        if let Some(n) = self.prec {
            if i >= n {
                return Err(Error::precision(format!(
                    "coefficient of pi^{i} requested but series is only known mod O(pi^{n})"
                )));
            }
        }
        Ok(self.coeffs.get(&i).copied().unwrap_or(FqElt::ZERO))
    }

    fn drop_beyond_prec(&mut self) {
        if let Some(n) = self.prec {
            self.coeffs.retain(|&i, _| i < n);
        }
    }

    pub fn truncate_to(&self, n: i64) -> Self {
        let mut out = self.clone();
        out.prec = Some(match self.prec {
            Some(m) => m.min(n),
            None => n,
        });
        out.drop_beyond_prec();
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = match (self.prec, other.prec) {
            (None, None) => None,
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (Some(a), Some(b)) => Some(a.min(b)),
        };
        let mut coeffs = self.coeffs.clone();
        for (&i, &c) in &other.coeffs {
            let cur = coeffs.entry(i).or_insert(FqElt::ZERO);
            *cur = self.field.add(*cur, c);
            if cur.is_zero() {
                coeffs.remove(&i);
            }
        }
        let mut out = TruncSeries {
            field: self.field.clone(),
            coeffs,
            prec,
        };
        out.drop_beyond_prec();
        out
    }

    pub fn neg(&self) -> Self {
        TruncSeries {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(&i, &c)| (i, self.field.neg(c)))
                .collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, c: FqElt) -> Self {
        if c.is_zero() {
            // Annihilates all visible digits; the unknown tail keeps its bound.
            return TruncSeries {
                field: self.field.clone(),
                coeffs: BTreeMap::new(),
                prec: self.prec,
            };
        }
        TruncSeries {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(&i, &a)| (i, self.field.mul(a, c)))
                .collect(),
            prec: self.prec,
        }
    }

    /// Multiply by `π^k` (exact index shift).
    pub fn shift(&self, k: i64) -> Self {
        TruncSeries {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|(&i, &c)| (i + k, c)).collect(),
            prec: self.prec.map(|n| n + k),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        // An exact zero annihilates even unknown tails.
        if self.is_exactly_zero() || other.is_exactly_zero() {
            return TruncSeries::zero(self.field.clone());
        }
        let prec = {
            let mut cands: Vec<i64> = Vec::new();
            if let (Some(n1), Some(v2)) = (self.prec, other.valuation_lb()) {
                cands.push(n1 + v2);
            }
            if let (Some(n2), Some(v1)) = (other.prec, self.valuation_lb()) {
                cands.push(n2 + v1);
            }
            cands.into_iter().min()
        };
        let mut coeffs: BTreeMap<i64, FqElt> = BTreeMap::new();
        for (&i, &a) in &self.coeffs {
            for (&j, &b) in &other.coeffs {
                let k = i + j;
                if let Some(n) = prec {
                    if k >= n {
                        continue;
                    }
                }
                let prod = self.field.mul(a, b);
                if prod.is_zero() {
                    continue;
                }
                let cur = coeffs.entry(k).or_insert(FqElt::ZERO);
                *cur = self.field.add(*cur, prod);
                if cur.is_zero() {
                    coeffs.remove(&k);
                }
            }
        }
        TruncSeries {
            field: self.field.clone(),
            coeffs,
            prec,
        }
    }

    /// Inverse of a unit. The leading coefficient must be visible; an
    /// exact multi-term series must be truncated first (its inverse has
    /// infinitely many terms).
    pub fn invert(&self) -> Result<Self> {
        let v = match self.valuation() {
            Valuation::Exact(v) => v,
            Valuation::ZeroToPrecision(n) => {
                return Err(Error::precision(format!(
                    "cannot invert a series that is zero mod O(pi^{n})"
                )));
            }
            Valuation::ZeroExact => {
                return Err(Error::domain("cannot invert the zero series"));
            }
        };
        let lead = self.coeffs[&v];
        let lead_inv = self.field.inv(lead).expect("leading coefficient nonzero");
        match self.prec {
            None => {
                if self.coeffs.len() == 1 {
                    Ok(TruncSeries::monomial(self.field.clone(), lead_inv, -v))
                } else {
                    Err(Error::precision(
                        "inverse of an exact multi-term series has infinitely many terms; \
                         truncate_to a finite precision first",
                    ))
                }
            }
            Some(n) => {
                // u = π^{-v}·self has constant term lead and is known mod π^{N−v};
                // classical recurrence for u^{-1} up to that many terms.
                let terms = (n - v).max(0);
                let mut inv_u: BTreeMap<i64, FqElt> = BTreeMap::new();
                for k in 0..terms {
                    // coefficient b_k of u^{-1}: b_0 = lead^{-1},
                    // b_k = −lead^{-1} Σ_{j=1..k} u_j b_{k−j}
                    let mut acc = if k == 0 { self.field.from_int(1) } else { FqElt::ZERO };
                    for j in 1..=k {
                        let uj = self.coeffs.get(&(v + j)).copied().unwrap_or(FqElt::ZERO);
                        if uj.is_zero() {
                            continue;
                        }
                        if let Some(&b) = inv_u.get(&(k - j)) {
                            acc = self.field.sub(acc, self.field.mul(uj, b));
                        }
                    }
                    let bk = self.field.mul(lead_inv, acc);
                    if !bk.is_zero() {
                        inv_u.insert(k, bk);
                    }
                }
                // result = π^{-v} u^{-1}, precision N − 2v
                let coeffs = inv_u.into_iter().map(|(k, c)| (k - v, c)).collect();
                let mut out = TruncSeries {
                    field: self.field.clone(),
                    coeffs,
                    prec: Some(n - 2 * v),
                };
                out.drop_beyond_prec();
                Ok(out)
            }
        }
    }

    /// `p`-th power: `(Σ a_i π^i)^p = Σ a_i^p π^{p·i}` exactly; known
    /// digits multiply their reach by `p`.
    pub fn pth_power(&self) -> Self {
        let p = self.field.p() as i64;
        TruncSeries {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(&i, &c)| (p * i, self.field.frob(c)))
                .collect(),
            prec: self.prec.map(|n| p * n),
        }
    }

    /// `p`-th root, when one exists (all visible exponents divisible by
    /// `p`); the unknown tail shrinks to `⌈N/p⌉`.
    pub fn pth_root(&self) -> Result<Self> {
        let p = self.field.p() as i64;
        let mut coeffs = BTreeMap::new();
        for (&i, &c) in &self.coeffs {
            if i.rem_euclid(p) != 0 {
                return Err(Error::domain(format!(
                    "series is not a p-th power: coefficient at pi^{i} with p = {p}"
                )));
            }
            coeffs.insert(i.div_euclid(p), self.field.frob_inv(c));
        }
        Ok(TruncSeries {
            field: self.field.clone(),
            coeffs,
            prec: self.prec.map(|n| n.div_euclid(p) + i64::from(n.rem_euclid(p) != 0)),
        })
    }

    // ── text syntax ──────────────────────────────────────────────────

    /// Canonical printing: `2*pi^-3 + pi^0 + O(pi^7)`; coefficients in
    /// `[c0,c1,...]` power-basis notation when `e > 1`.
    pub fn to_text(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (&i, &c) in &self.coeffs {
            let cs = self.field.format_elt(c);
            if self.field.e() == 1 && cs == "1" {
                parts.push(format!("pi^{i}"));
            } else {
                parts.push(format!("{cs}*pi^{i}"));
            }
        }
        if let Some(n) = self.prec {
            parts.push(format!("O(pi^{n})"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    /// Parse the canonical syntax (tolerant of whitespace and repeated
    /// indices; `pi` alone is `pi^1`, a bare coefficient is the constant
    /// term, `0` is the exact zero).
    pub fn parse(field: &FqField, s: &str) -> Result<Self> {
        let mut entries: Vec<(i64, FqElt)> = Vec::new();
        let mut prec: Option<i64> = None;
        let body = s.trim();
        if body.is_empty() {
            return Err(Error::parse("empty series string"));
        }
        for raw in split_top_level_plus(body) {
            let term = raw.trim();
            if term.is_empty() {
                return Err(Error::parse(format!("empty term in series: {s:?}")));
            }
            if let Some(rest) = term.strip_prefix("O(") {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::parse(format!("malformed O-term: {term:?}")))?;
                let n = parse_pi_power(inner)?;
                if prec.replace(n).is_some() {
                    return Err(Error::parse("multiple O-terms in series"));
                }
                continue;
            }
            if term == "0" {
                continue;
            }
            let (coeff_str, pow_str) = match term.rfind("*pi^") {
                Some(pos) => (&term[..pos], Some(&term[pos + 4..])),
                None => {
                    if let Some(rest) = term.strip_prefix("pi^") {
                        ("1", Some(rest))
                    } else if term == "pi" {
                        ("1", Some("1"))
                    } else {
                        (term, None)
                    }
                }
            };
            let c = field.parse_elt(coeff_str)?;
            let k: i64 = match pow_str {
                Some(ps) => ps
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(format!("bad exponent in term {term:?}")))?,
                None => 0,
            };
            entries.push((k, c));
        }
        TruncSeries::from_coeffs(field.clone(), &entries, prec)
    }
}

fn parse_pi_power(s: &str) -> Result<i64> {
    let s = s.trim();
    let rest = s
        .strip_prefix("pi^")
        .ok_or_else(|| Error::parse(format!("expected pi^k, got {s:?}")))?;
    rest.trim()
        .parse()
        .map_err(|_| Error::parse(format!("bad exponent in {s:?}")))
}

/// Split on `+` outside brackets/parentheses (exponents use `-`, never `+`).
fn split_top_level_plus(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth = depth.saturating_sub(1),
            '+' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

/// Ring-context wrapper so Witt-vector machinery can run over `K`.
#[derive(Clone, Debug)]
pub struct SeriesRing {
    pub field: FqField,
}

impl crate::witt::RingCtx for SeriesRing {
    type Elt = TruncSeries;

    fn zero(&self) -> Self::Elt {
        TruncSeries::zero(self.field.clone())
    }
    fn one(&self) -> Self::Elt {
        TruncSeries::one(self.field.clone())
    }
    fn add(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt {
        a.add(b)
    }
    fn neg(&self, a: &Self::Elt) -> Self::Elt {
        a.neg()
    }
    fn mul(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt {
        a.mul(b)
    }
    fn is_zero(&self, a: &Self::Elt) -> bool {
        a.is_zero_to_precision()
    }
    fn from_u8(&self, v: u8) -> Self::Elt {
        TruncSeries::monomial(self.field.clone(), self.field.from_int(v as i64), 0)
    }
    fn char_p(&self) -> Option<u64> {
        Some(self.field.p())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FqField {
        FqField::new(2, 1).unwrap()
    }

    #[test]
    fn product_of_conjugates() {
        let field = FqField::new(3, 1).unwrap();
        // (1+π)(1−π) = 1−π² mod O(π^5), over F_3 where −1 = 2
        let one_plus = TruncSeries::parse(&field, "pi^0 + pi^1 + O(pi^5)").unwrap();
        let one_minus = TruncSeries::parse(&field, "pi^0 + 2*pi^1 + O(pi^5)").unwrap();
        let prod = one_plus.mul(&one_minus);
        assert_eq!(prod.to_text(), "pi^0 + 2*pi^2 + O(pi^5)");
    }

    #[test]
    fn inversion_precision_contract() {
        let field = f2();
        // π·(1+π) known mod O(π^6): inverse should be π^{-1}(1+π+π²+…) mod O(π^4)
        let s = TruncSeries::parse(&field, "pi^1 + pi^2 + O(pi^6)").unwrap();
        let inv = s.invert().unwrap();
        assert_eq!(inv.prec(), Some(4));
        assert_eq!(inv.to_text(), "pi^-1 + pi^0 + pi^1 + pi^2 + pi^3 + O(pi^4)");
        assert_eq!(
            s.mul(&inv).to_text(),
            "pi^0 + O(pi^5)" // v(s) + N(inv) = 1 + 4
        );
        // single exact monomial inverts exactly
        let m = TruncSeries::parse(&field, "pi^-3").unwrap();
        assert_eq!(m.invert().unwrap().to_text(), "pi^3");
        // exact multi-term series must be truncated first
        let e = TruncSeries::parse(&field, "pi^0 + pi^1").unwrap();
        assert!(e.invert().is_err());
        // zero-to-precision is a precision error
        let z = TruncSeries::o_prec(field.clone(), 3);
        assert!(z.invert().unwrap_err().is_precision());
    }

    #[test]
    fn coefficient_access_respects_precision() {
        let field = f2();
        let s = TruncSeries::parse(&field, "pi^2 + O(pi^4)").unwrap();
        assert!(!s.coefficient(2).unwrap().is_zero());
        assert!(s.coefficient(3).unwrap().is_zero());
        let err = s.coefficient(4).unwrap_err();
        assert!(err.is_precision());
        assert!(s.coefficient(5).is_err());
    }

    #[test]
    fn pth_power_and_root() {
        let field = FqField::new(2, 2).unwrap();
        let g = field.gen();
        let s = TruncSeries::from_coeffs(
            field.clone(),
            &[(-1, g), (0, field.from_int(1)), (3, g)],
            Some(5),
        )
        .unwrap();
        let sq = s.pth_power();
        assert_eq!(sq.prec(), Some(10));
        assert_eq!(sq.coefficient(-2).unwrap(), field.frob(g));
        assert_eq!(sq.coefficient(6).unwrap(), field.frob(g));
        assert_eq!(sq.coefficient(1).unwrap(), FqElt::ZERO);
        let back = sq.pth_root().unwrap();
        assert_eq!(back, s);
        // non-p-power rejected
        assert!(s.pth_root().is_err());
    }

    #[test]
    fn parse_print_round_trip_bit_exact() {
        let field = f2();
        for text in [
            "pi^-3 + pi^0 + O(pi^7)",
            "pi^2",
            "0",
            "O(pi^0)",
            "O(pi^-2)",
            "pi^-1 + pi^1 + pi^4",
        ] {
            let s = TruncSeries::parse(&field, text).unwrap();
            assert_eq!(s.to_text(), text, "round trip of {text:?}");
            let s2 = TruncSeries::parse(&field, &s.to_text()).unwrap();
            assert_eq!(s, s2);
        }
        // e > 1 notation
        let f4 = FqField::new(2, 2).unwrap();
        let text = "[1,1]*pi^-2 + [0,1]*pi^0 + O(pi^3)";
        let s = TruncSeries::parse(&f4, text).unwrap();
        assert_eq!(s.to_text(), text);
        // convenience inputs normalize
        let s = TruncSeries::parse(&field, "1 + pi").unwrap();
        assert_eq!(s.to_text(), "pi^0 + pi^1");
    }

    #[test]
    fn precision_soundness_under_refinement() {
        // recomputing at higher precision never changes reported digits
        let field = FqField::new(3, 1).unwrap();
        let lo = TruncSeries::parse(&field, "pi^1 + 2*pi^2 + O(pi^4)").unwrap();
        let hi = TruncSeries::parse(&field, "pi^1 + 2*pi^2 + pi^5 + O(pi^9)").unwrap();
        let f = |s: &TruncSeries| s.invert().unwrap().mul(&s.pth_power());
        let (a, b) = (f(&lo), f(&hi));
        let n = a.prec().unwrap();
        for i in (n - 4)..n {
            assert_eq!(a.coefficient(i).unwrap(), b.coefficient(i).unwrap());
        }
    }
}
