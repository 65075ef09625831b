//! Seeded random generators for the verification suites.
//!
//! Every verifier run is reproducible: suites derive their inputs from a
//! fixed [`ChaCha8Rng`] seed, so a reported failure can be replayed
//! exactly.

use crate::drw::{level_at, CanonicalForm, DrwCtx};
use crate::fq::{FqElt, FqField};
use crate::series::TruncSeries;
use crate::witt::WittVector;
use crate::wring::{WCoeff, WCoeffRing};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_fq(field: &FqField, rng: &mut impl Rng) -> FqElt {
    field.from_index(rng.gen_range(0..field.q()))
}

pub fn random_fq_nonzero(field: &FqField, rng: &mut impl Rng) -> FqElt {
    field.from_index(rng.gen_range(1..field.q()))
}

/// A series supported on `[lo, hi)` with the given tail precision.
pub fn random_series(
    field: &FqField,
    rng: &mut impl Rng,
    lo: i64,
    hi: i64,
    prec: Option<i64>,
) -> TruncSeries {
    let mut entries = Vec::new();
    for k in lo..hi {
        if rng.gen_bool(0.5) {
            entries.push((k, random_fq(field, rng)));
        }
    }
    TruncSeries::from_coeffs(field.clone(), &entries, prec)
        .expect("sampled coefficients respect the precision bound")
}

/// A series with exact valuation `v` (unit leading coefficient).
pub fn random_series_with_valuation(
    field: &FqField,
    rng: &mut impl Rng,
    v: i64,
    hi: i64,
    prec: Option<i64>,
) -> TruncSeries {
    let lead = TruncSeries::monomial(field.clone(), random_fq_nonzero(field, rng), v);
    lead.add(&random_series(field, rng, v + 1, hi, prec))
}

pub fn random_wcoeff(ring: &WCoeffRing, rng: &mut impl Rng) -> WCoeff {
    WCoeff((0..ring.e()).map(|_| rng.gen_range(0..ring.pr())).collect())
}

pub fn random_wcoeff_nonzero(ring: &WCoeffRing, rng: &mut impl Rng) -> WCoeff {
    loop {
        let c = random_wcoeff(ring, rng);
        if !c.is_zero() {
            return c;
        }
    }
}

/// An exact canonical form with ≤ `max_comps` components supported on
/// `[lo, hi)`.
pub fn random_canonical_form(
    ctx: &DrwCtx,
    rng: &mut impl Rng,
    q: u8,
    lo: i64,
    hi: i64,
    max_comps: usize,
) -> CanonicalForm {
    let mut f = CanonicalForm::zero(q, ctx.m());
    for _ in 0..max_comps {
        let n = rng.gen_range(lo..hi);
        let ring = ctx.ring(level_at(ctx.p(), ctx.m(), n));
        let c = random_wcoeff_nonzero(ring, rng);
        ctx.insert_comp(&mut f, n, c);
    }
    f
}

/// A Witt vector over `K` with coordinate `g` supported on
/// `[lo, hi)` and tail precision `prec` (scaled per coordinate by the
/// peeling weights when `weighted`).
pub fn random_witt_over_k(
    ctx: &DrwCtx,
    rng: &mut impl Rng,
    lo: i64,
    hi: i64,
    prec: Option<i64>,
) -> WittVector<TruncSeries> {
    let coords = (0..ctx.m())
        .map(|_| random_series(ctx.field(), rng, lo, hi, prec))
        .collect();
    WittVector { coords }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samplers_are_reproducible() {
        let field = FqField::new(3, 2).unwrap();
        let mut r1 = rng(42);
        let mut r2 = rng(42);
        let a = random_series(&field, &mut r1, -2, 5, Some(7));
        let b = random_series(&field, &mut r2, -2, 5, Some(7));
        assert_eq!(a, b);
    }
}
