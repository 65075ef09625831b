//! Expression front end: generator trees over `teich`, `V^s`, `dV^s`,
//! `d`, `dlog π`, sums, and `W_m(K)`-scalar products, normalized into
//! canonical coordinates.

use super::{CanonicalForm, DrwCtx};
use crate::error::Error;
use crate::series::TruncSeries;
use crate::witt::WittVector;
use crate::Result;

/// An expression denoting an element of `W_mΩ^q_K`. Levels are implicit
/// and inferred top-down: under `V^s(…)` or `dV^s(…)` the inner
/// expression is evaluated at level `m − s`.
#[derive(Clone, Debug)]
pub enum FormExpr {
    /// The Teichmüller lift `[f]` (degree 0).
    Teich(TruncSeries),
    /// A general Witt vector over `K` (degree 0); its length must match
    /// the level it is evaluated at.
    Witt(WittVector<TruncSeries>),
    /// `dlog[π]` (degree 1).
    DlogPi,
    /// `V^s(…)`.
    V { s: u8, inner: Box<FormExpr> },
    /// `dV^s(…)` — shorthand for `d(V^s(…))`.
    Dv { s: u8, inner: Box<FormExpr> },
    /// Exterior derivative.
    D(Box<FormExpr>),
    /// Sum of like-degree terms (an empty sum is the zero 0-form).
    Sum(Vec<FormExpr>),
    /// Left multiplication by a Witt vector over `K`.
    Scalar(WittVector<TruncSeries>, Box<FormExpr>),
    /// Integer multiple.
    IntMul(i64, Box<FormExpr>),
}

impl FormExpr {
    pub fn teich(f: TruncSeries) -> Self {
        FormExpr::Teich(f)
    }
    pub fn v(s: u8, inner: FormExpr) -> Self {
        FormExpr::V {
            s,
            inner: Box::new(inner),
        }
    }
    pub fn dv(s: u8, inner: FormExpr) -> Self {
        FormExpr::Dv {
            s,
            inner: Box::new(inner),
        }
    }
    pub fn d(inner: FormExpr) -> Self {
        FormExpr::D(Box::new(inner))
    }
}

impl DrwCtx {
    /// Evaluate an expression into canonical coordinates at level `m`
    /// (the context's Witt length).
    pub fn normalize_form(&self, x: &FormExpr) -> Result<CanonicalForm> {
        self.eval_at(x, self.m())
    }

    fn eval_at(&self, x: &FormExpr, level: u8) -> Result<CanonicalForm> {
        if level == 0 || level > self.m() + 1 {
            return Err(Error::domain(format!(
                "expression nests V deeper than the Witt length allows (level {level})"
            )));
        }
        match x {
            FormExpr::Teich(f) => {
                let w = self.witt_over_k(level)?.teichmuller(f.clone());
                self.to_canonical_len(level, &w)
            }
            FormExpr::Witt(w) => {
                if w.m() != level {
                    return Err(Error::domain(format!(
                        "Witt vector of length {} used at level {level}",
                        w.m()
                    )));
                }
                self.to_canonical_len(level, w)
            }
            FormExpr::DlogPi => {
                let mut f = CanonicalForm::zero(1, level);
                self.insert_comp(&mut f, 0, self.ring(level).one());
                Ok(f)
            }
            FormExpr::V { s, inner } => {
                if *s >= level {
                    return Err(Error::domain("V-depth exceeds the target level"));
                }
                let mut f = self.eval_at(inner, level - s)?;
                for _ in 0..*s {
                    f = self.op_v(&f)?;
                }
                Ok(f)
            }
            FormExpr::Dv { s, inner } => {
                if *s >= level {
                    return Err(Error::domain("V-depth exceeds the target level"));
                }
                let mut f = self.eval_at(inner, level - s)?;
                for _ in 0..*s {
                    f = self.op_v(&f)?;
                }
                self.op_d(&f)
            }
            FormExpr::D(inner) => self.op_d(&self.eval_at(inner, level)?),
            FormExpr::Sum(terms) => {
                let mut acc: Option<CanonicalForm> = None;
                for t in terms {
                    let ft = self.eval_at(t, level)?;
                    acc = Some(match acc {
                        None => ft,
                        Some(a) => {
                            // exact zeros are degree-polymorphic
                            if ft.is_zero_within_precision() && ft.hi.is_none() {
                                a
                            } else if a.is_zero_within_precision() && a.hi.is_none() {
                                ft
                            } else {
                                self.add_forms(&a, &ft)?
                            }
                        }
                    });
                }
                Ok(acc.unwrap_or_else(|| CanonicalForm::zero(0, level)))
            }
            FormExpr::Scalar(w, inner) => {
                if w.m() != level {
                    return Err(Error::domain(format!(
                        "scalar of length {} used at level {level}",
                        w.m()
                    )));
                }
                let f = self.eval_at(inner, level)?;
                let wf = self.to_canonical_len(level, w)?;
                self.mul_forms(&wf, &f)
            }
            FormExpr::IntMul(k, inner) => Ok(self.int_mul_form(*k, &self.eval_at(inner, level)?)),
        }
    }

    /// Rebuild a `q = 1` form as a generator expression
    /// (`Σ c·[π]^i·dlogπ + Σ dV^s(c·[π]^i)`); `q = 0` forms rebuild
    /// through [`DrwCtx::from_canonical_w`] instead.
    pub fn from_canonical_expr(&self, f: &CanonicalForm) -> Result<FormExpr> {
        if f.m != self.m() {
            return Err(Error::domain("form level does not match context"));
        }
        if f.q == 0 {
            return Ok(FormExpr::Witt(self.from_canonical_w(f)?));
        }
        if f.q != 1 {
            return Err(Error::domain("expressions cover q ∈ {0, 1}"));
        }
        let mut terms = Vec::with_capacity(f.comps.len());
        for (&n, c) in &f.comps {
            let (s, i, r) = self.split(n).siv(self.m());
            if s == 0 {
                terms.push(FormExpr::Scalar(
                    self.monomial_witt(r, i, c),
                    Box::new(FormExpr::DlogPi),
                ));
            } else {
                terms.push(FormExpr::dv(s, FormExpr::Witt(self.monomial_witt(r, i, c))));
            }
        }
        Ok(FormExpr::Sum(terms))
    }

    /// `dlog[f]_m = [f^{-1}]_m·d([f]_m)` for a unit `f` of `K`.
    pub fn dlog_symbol(&self, f: &TruncSeries) -> Result<CanonicalForm> {
        let w = self.teich(f)?;
        let df = self.op_d(&self.to_canonical_w(&w)?)?;
        let winv = self.teich(&f.invert()?)?;
        self.scalar_mul(&winv, &df)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::FqField;
    use crate::sample;
    use crate::witt::TableStore;

    fn ctx(p: u64, e: u8, m: u8) -> DrwCtx {
        DrwCtx::with_store(FqField::new(p, e).unwrap(), m, TableStore::new(None)).unwrap()
    }

    #[test]
    fn normalize_the_spec_generator_examples() {
        // [π]·dlogπ = [π]^1·dlog[π]: q=1 A-component at n = p^{m−1}, c = 1
        let c = ctx(2, 1, 3);
        let pi = TruncSeries::pi_power(c.field().clone(), 1);
        let e1 = FormExpr::Scalar(
            c.teich(&pi).unwrap(),
            Box::new(FormExpr::DlogPi),
        );
        let f1 = c.normalize_form(&e1).unwrap();
        assert_eq!(f1.comps.len(), 1);
        assert_eq!(f1.comps[&4], c.ring(3).one());

        // d([π^j]) = j·[π]^j·dlogπ
        let j = 3i64;
        let pij = TruncSeries::pi_power(c.field().clone(), j);
        let f2 = c
            .normalize_form(&FormExpr::d(FormExpr::teich(pij)))
            .unwrap();
        assert_eq!(f2.comps.len(), 1);
        assert_eq!(f2.comps[&(4 * j)], c.ring(3).from_int(j));

        // dV([π]) + dV([π]) = 0 at p = 2, m = 2 (the dV-coefficient ring
        // is W_1 = F_2 there)
        let c2 = ctx(2, 1, 2);
        let pi2 = TruncSeries::pi_power(c2.field().clone(), 1);
        let term = FormExpr::dv(1, FormExpr::teich(pi2));
        let f3 = c2
            .normalize_form(&FormExpr::Sum(vec![term.clone(), term]))
            .unwrap();
        assert!(f3.is_zero_within_precision());
        assert_eq!(f3.hi, None);

        // … but not at m = 3, where 2·dV[π] = dV(2[π]) = dV(V([π]²)) ≠ 0
        let pi3 = TruncSeries::pi_power(c.field().clone(), 1);
        let term3 = FormExpr::dv(1, FormExpr::teich(pi3));
        let f4 = c
            .normalize_form(&FormExpr::Sum(vec![term3.clone(), term3]))
            .unwrap();
        assert_eq!(f4.comps.len(), 1);
        assert_eq!(f4.comps[&2], c.ring(2).from_int(2));
        let alt = c
            .normalize_form(&FormExpr::dv(
                2,
                FormExpr::teich(TruncSeries::pi_power(c.field().clone(), 2)),
            ))
            .unwrap();
        assert_eq!(f4, alt);
    }

    #[test]
    fn normalize_is_idempotent_through_rebuild() {
        for (p, e, m) in [(2u64, 1u8, 2u8), (3, 2, 2), (2, 1, 3)] {
            let c = ctx(p, e, m);
            let mut rng = sample::rng(0xE4 + p + m as u64);
            for q in [0u8, 1] {
                for _ in 0..10 {
                    let f = sample::random_canonical_form(&c, &mut rng, q, -7, 8, 3);
                    let expr = c.from_canonical_expr(&f).unwrap();
                    let back = c.normalize_form(&expr).unwrap();
                    assert_eq!(back, f, "(p,e,m,q)=({p},{e},{m},{q})");
                }
            }
        }
    }

    #[test]
    fn dlog_of_uniformizer_and_constants() {
        let c = ctx(3, 2, 2);
        let pi = TruncSeries::pi_power(c.field().clone(), 1);
        let f = c.dlog_symbol(&pi).unwrap();
        assert_eq!(f.q, 1);
        assert_eq!(f.comps.len(), 1);
        assert_eq!(f.comps[&0], c.ring(2).one());
        assert_eq!(f.hi, None);

        // constants from the residue field have vanishing dlog
        let u = TruncSeries::monomial(c.field().clone(), c.field().gen(), 0);
        let g = c.dlog_symbol(&u).unwrap();
        assert!(g.is_zero_within_precision());
    }

    #[test]
    fn dlog_of_one_plus_pi_matches_the_series_expansion() {
        // m=1, F_2: dlog(1+π) = (π + π² + …)·dlogπ
        let c = ctx(2, 1, 1);
        let f = TruncSeries::parse(c.field(), "pi^0 + pi^1 + O(pi^6)").unwrap();
        let d = c.dlog_symbol(&f).unwrap();
        let support: Vec<i64> = d.comps.keys().copied().collect();
        assert_eq!(support, vec![1, 2, 3, 4, 5]);
        assert!(d.comps.values().all(|v| *v == c.ring(1).one()));
        assert_eq!(d.hi, Some(6));
    }

    #[test]
    fn dlog_is_additive_in_products() {
        for (p, e, m) in [(2u64, 1u8, 2u8), (3, 1, 2)] {
            let c = ctx(p, e, m);
            let mut rng = sample::rng(0xADD + p + m as u64);
            for _ in 0..8 {
                let f =
                    sample::random_series_with_valuation(c.field(), &mut rng, -1, 5, Some(8));
                let g =
                    sample::random_series_with_valuation(c.field(), &mut rng, 2, 6, Some(9));
                let sum = c
                    .add_forms(&c.dlog_symbol(&f).unwrap(), &c.dlog_symbol(&g).unwrap())
                    .unwrap();
                let prod = c.dlog_symbol(&f.mul(&g)).unwrap();
                assert!(
                    prod.eq_within_precision(&sum),
                    "(p,e,m)=({p},{e},{m}): dlog(fg)={prod:?} vs dlogf+dlogg={sum:?}"
                );
            }
        }
    }
}
