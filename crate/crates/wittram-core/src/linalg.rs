//! Exact linear algebra over `ℤ/p^M`: Howell normal form for subgroup
//! spans, membership, kernels, intersections, and quotient sizes.
//!
//! Window groups of truncated de Rham–Witt objects are finite abelian
//! `p`-groups — products of `ℤ/p^r` with varying `r` — embedded into a
//! common ambient `(ℤ/p^M)^D`. Ordinary row echelon over `ℤ/p^M` does
//! *not* answer membership questions (the span of `(p, 1)` mod `p²`
//! contains `(0, p)`, which naive reduction misses); the Howell form
//! closes the generating set under the required "successor" rows
//! `p^{M−a}·row` and is the canonical normal form for exactly this
//! situation. When `M = 1` everything degenerates to Gaussian
//! elimination over `F_p`.
//!
//! "Dimensions" throughout are `log_p` of group orders, which is the
//! right rank notion for mixed-exponent windows and agrees with the
//! `F_p`-dimension whenever the group has exponent `p`.

use crate::error::Error;
use crate::Result;

fn val_p(p: u64, mut x: u64) -> u32 {
    debug_assert!(x != 0);
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn inv_mod(a: u64, modulus: u64) -> u64 {
    let (mut r0, mut r1) = (modulus as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "inv_mod of a non-unit");
    t0.rem_euclid(modulus as i128) as u64
}

/// A subgroup of `(ℤ/p^M)^D` in Howell normal form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ZModSpan {
    p: u64,
    m_exp: u32,
    modulus: u64,
    dim: usize,
    /// Howell rows, sorted by strictly increasing pivot column; pivot
    /// entries are exactly `p^a`; entries above a pivot are reduced
    /// mod `p^a`.
    rows: Vec<Vec<u64>>,
    /// `(column, valuation)` per row.
    pivots: Vec<(usize, u32)>,
}

impl ZModSpan {
    pub fn new(p: u64, m_exp: u32, dim: usize, gens: Vec<Vec<u64>>) -> Self {
        let modulus = p.pow(m_exp);
        let mut span = ZModSpan {
            p,
            m_exp,
            modulus,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        };
        let mut queue: Vec<Vec<u64>> = gens
            .into_iter()
            .map(|mut r| {
                assert_eq!(r.len(), dim, "generator length mismatch");
                r.iter_mut().for_each(|x| *x %= modulus);
                r
            })
            .collect();
        while let Some(r) = queue.pop() {
            span.insert_row(r, &mut queue);
        }
        span.normalize_above_pivots();
        span
    }

    pub fn zero(p: u64, m_exp: u32, dim: usize) -> Self {
        ZModSpan::new(p, m_exp, dim, Vec::new())
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn m_exp(&self) -> u32 {
        self.m_exp
    }
    pub fn ambient_dim(&self) -> usize {
        self.dim
    }
    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    fn row_pos_for_col(&self, col: usize) -> std::result::Result<usize, usize> {
        self.pivots.binary_search_by_key(&col, |&(c, _)| c)
    }

    /// Insert one row, maintaining the echelon structure; displaced or
    /// successor rows are pushed onto `queue`.
    fn insert_row(&mut self, mut r: Vec<u64>, queue: &mut Vec<Vec<u64>>) {
        let mut col = 0;
        while col < self.dim {
            if r[col] == 0 {
                col += 1;
                continue;
            }
            let v = val_p(self.p, r[col]);
            match self.row_pos_for_col(col) {
                Ok(pos) => {
                    let a = self.pivots[pos].1;
                    if v >= a {
                        // eliminate r[col] using the pivot row
                        let q = r[col] / self.p.pow(a);
                        self.sub_mul_row(&mut r, q, pos);
                        debug_assert_eq!(r[col], 0);
                        col += 1;
                    } else {
                        // r becomes the new, sharper pivot; recycle the old row
                        self.scale_to_pivot(&mut r, col, v);
                        let old = std::mem::replace(&mut self.rows[pos], r);
                        self.pivots[pos] = (col, v);
                        queue.push(old);
                        queue.push(self.successor(pos));
                        return;
                    }
                }
                Err(pos) => {
                    self.scale_to_pivot(&mut r, col, v);
                    self.rows.insert(pos, r);
                    self.pivots.insert(pos, (col, v));
                    queue.push(self.successor(pos));
                    return;
                }
            }
        }
        // fully reduced to zero: nothing to insert
    }

    /// `p^{M−a}` times the row at `pos`: its pivot vanishes mod `p^M`,
    /// exposing the tail — required for the Howell property.
    fn successor(&self, pos: usize) -> Vec<u64> {
        let (_, a) = self.pivots[pos];
        let c = self.p.pow(self.m_exp - a);
        self.rows[pos]
            .iter()
            .map(|&x| (x as u128 * c as u128 % self.modulus as u128) as u64)
            .collect()
    }

    fn sub_mul(&self, r: &mut [u64], q: u64, h: &[u64]) {
        let md = self.modulus as u128;
        for (x, &hh) in r.iter_mut().zip(h) {
            let sub = q as u128 * hh as u128 % md;
            *x = ((*x as u128 + md - sub) % md) as u64;
        }
    }

    fn sub_mul_row(&self, r: &mut [u64], q: u64, pos: usize) {
        let md = self.modulus as u128;
        for (x, &hh) in r.iter_mut().zip(&self.rows[pos]) {
            let sub = q as u128 * hh as u128 % md;
            *x = ((*x as u128 + md - sub) % md) as u64;
        }
    }

    fn scale_to_pivot(&self, r: &mut [u64], col: usize, v: u32) {
        let unit = r[col] / self.p.pow(v);
        let u_inv = inv_mod(unit, self.modulus);
        let md = self.modulus as u128;
        for x in r.iter_mut() {
            *x = (*x as u128 * u_inv as u128 % md) as u64;
        }
        debug_assert_eq!(r[col], self.p.pow(v));
    }

    /// Reduce entries sitting above each pivot modulo the pivot value,
    /// completing the canonical form.
    fn normalize_above_pivots(&mut self) {
        for j in 0..self.rows.len() {
            let (col, a) = self.pivots[j];
            let pa = self.p.pow(a);
            let h = self.rows[j].clone();
            for i in 0..j {
                let q = self.rows[i][col] / pa;
                if q != 0 {
                    let mut row = std::mem::take(&mut self.rows[i]);
                    self.sub_mul(&mut row, q, &h);
                    self.rows[i] = row;
                }
            }
        }
    }

    /// `log_p` of the subgroup order: `Σ (M − a_j)` over pivots.
    pub fn log_order(&self) -> u64 {
        self.pivots
            .iter()
            .map(|&(_, a)| (self.m_exp - a) as u64)
            .sum()
    }

    /// Canonical coset representative of `v` modulo this span.
    pub fn reduce_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let mut r: Vec<u64> = v.iter().map(|&x| x % self.modulus).collect();
        for (pos, &(col, a)) in self.pivots.iter().enumerate() {
            if r[col] != 0 {
                let q = r[col] / self.p.pow(a);
                if q != 0 {
                    self.sub_mul_row(&mut r, q, pos);
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce_vec(v).iter().all(|&x| x == 0)
    }

    pub fn contains_span(&self, other: &Self) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut gens = self.rows.clone();
        gens.extend(other.rows.iter().cloned());
        ZModSpan::new(self.p, self.m_exp, self.dim, gens)
    }

    /// Intersection via the kernel trick: the span of `[a | a]` and
    /// `[b | 0]` meets `0 ⊕ (ℤ/p^M)^D` exactly in `{(0, x) : x ∈ A ∩ B}`.
    pub fn intersect(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut stacked: Vec<Vec<u64>> = Vec::new();
        for r in &self.rows {
            let mut row = r.clone();
            row.extend(r.iter().copied());
            stacked.push(row);
        }
        for r in &other.rows {
            let mut row = r.clone();
            row.extend(std::iter::repeat(0).take(d));
            stacked.push(row);
        }
        let big = ZModSpan::new(self.p, self.m_exp, 2 * d, stacked);
        big.extract_zero_left_block(d, d)
    }

    /// Rows whose first `left` entries vanish, projected to the right
    /// block. The Howell property guarantees these rows *generate* the
    /// full sub-span supported on the right block.
    fn extract_zero_left_block(&self, left: usize, right: usize) -> ZModSpan {
        let gens: Vec<Vec<u64>> = self
            .rows
            .iter()
            .filter(|r| r[..left].iter().all(|&x| x == 0))
            .map(|r| r[left..left + right].to_vec())
            .collect();
        ZModSpan::new(self.p, self.m_exp, right, gens)
    }
}

/// Kernel of a group homomorphism restricted to a span: given pairs
/// `(f(gᵢ), gᵢ)` for generators `gᵢ` of the source span, returns
/// `{x ∈ span : f(x) = 0}` as a span in the source ambient space.
pub fn kernel_of_pairs(
    p: u64,
    m_exp: u32,
    image_dim: usize,
    source_dim: usize,
    pairs: &[(Vec<u64>, Vec<u64>)],
) -> ZModSpan {
    let stacked: Vec<Vec<u64>> = pairs
        .iter()
        .map(|(img, src)| {
            assert_eq!(img.len(), image_dim);
            assert_eq!(src.len(), source_dim);
            let mut row = img.clone();
            row.extend(src.iter().copied());
            row
        })
        .collect();
    let big = ZModSpan::new(p, m_exp, image_dim + source_dim, stacked);
    big.extract_zero_left_block(image_dim, source_dim)
}

/// Image of a map given on generators: just the span of the images.
pub fn image_of_pairs(
    p: u64,
    m_exp: u32,
    image_dim: usize,
    pairs: &[(Vec<u64>, Vec<u64>)],
) -> ZModSpan {
    ZModSpan::new(
        p,
        m_exp,
        image_dim,
        pairs.iter().map(|(img, _)| img.clone()).collect(),
    )
}

/// A finite quotient `num/den` of coefficient windows, with exact
/// membership and `log_p`-size accounting. `den` must be contained in
/// `num`; the constructor checks this.
#[derive(Clone, Debug)]
pub struct FpQuotientSpace {
    num: ZModSpan,
    den: ZModSpan,
}

impl FpQuotientSpace {
    pub fn new(num: ZModSpan, den: ZModSpan) -> Result<Self> {
        if !num.contains_span(&den) {
            return Err(Error::internal(
                "quotient denominator is not contained in the numerator",
            ));
        }
        Ok(FpQuotientSpace { num, den })
    }

    pub fn full_over_zero(num: ZModSpan) -> Self {
        let den = ZModSpan::zero(num.p, num.m_exp, num.dim);
        FpQuotientSpace { num, den }
    }

    pub fn num(&self) -> &ZModSpan {
        &self.num
    }
    pub fn den(&self) -> &ZModSpan {
        &self.den
    }

    /// `log_p |num/den|`.
    pub fn log_dim(&self) -> u64 {
        self.num.log_order() - self.den.log_order()
    }

    /// Is `v` in the numerator (i.e. does it represent a class at all)?
    pub fn represents(&self, v: &[u64]) -> bool {
        self.num.contains(v)
    }

    /// Is `v` trivial in the quotient?
    pub fn is_trivial(&self, v: &[u64]) -> bool {
        self.den.contains(v)
    }

    /// Canonical representative of the class of `v`.
    pub fn class_rep(&self, v: &[u64]) -> Vec<u64> {
        self.den.reduce_vec(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn howell_sees_hidden_tail_vectors() {
        // span{(p,1)} mod p² contains p·(p,1) = (0,p): naive echelon misses it.
        let s = ZModSpan::new(2, 2, 2, vec![vec![2, 1]]);
        assert!(s.contains(&[2, 1]));
        assert!(s.contains(&[0, 2]));
        assert!(!s.contains(&[0, 1]));
        assert!(!s.contains(&[2, 0]));
        assert_eq!(s.log_order(), 2); // order 4: (0,0),(2,1),(0,2),(2,3)
    }

    #[test]
    fn canonical_form_is_generator_order_independent() {
        let gens = vec![
            vec![3u64, 6, 1, 0],
            vec![0, 9, 3, 3],
            vec![6, 3, 0, 9],
            vec![3, 0, 0, 18],
        ];
        let a = ZModSpan::new(3, 3, 4, gens.clone());
        let mut rev = gens.clone();
        rev.reverse();
        let b = ZModSpan::new(3, 3, 4, rev);
        assert_eq!(a, b);
        // and a doubled generating set changes nothing
        let mut doubled = gens.clone();
        doubled.extend(gens);
        let c = ZModSpan::new(3, 3, 4, doubled);
        assert_eq!(a, c);
    }

    #[test]
    fn exponent_p_case_is_plain_rank() {
        // M = 1: F_p Gaussian elimination
        let s = ZModSpan::new(5, 1, 3, vec![vec![1, 2, 3], vec![0, 1, 4], vec![1, 3, 2]]);
        assert_eq!(s.log_order(), 2); // third row = first + second
        assert!(s.contains(&[1, 3, 2]));
        assert!(!s.contains(&[0, 0, 1]));
    }

    #[test]
    fn rank_nullity_on_full_domain() {
        // f: (Z/8)^3 → (Z/8)^2, f(x,y,z) = (2x+y, 4z); log|ker|+log|im| = 9
        let p = 2;
        let m = 3;
        let f = |v: &[u64]| vec![(2 * v[0] + v[1]) % 8, (4 * v[2]) % 8];
        let mut pairs = Vec::new();
        for i in 0..3 {
            let mut e = vec![0u64; 3];
            e[i] = 1;
            pairs.push((f(&e), e));
        }
        let ker = kernel_of_pairs(p, m, 2, 3, &pairs);
        let im = image_of_pairs(p, m, 2, &pairs);
        assert_eq!(ker.log_order() + im.log_order(), 9);
        // every kernel generator really maps to zero
        for r in ker.rows() {
            assert!(f(r).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn intersection_and_sum() {
        let p = 2;
        let m = 2;
        let a = ZModSpan::new(p, m, 2, vec![vec![1, 1]]);
        let b = ZModSpan::new(p, m, 2, vec![vec![1, 3]]);
        let i = a.intersect(&b);
        // (1,1)·k = (k,k); (1,3)·l = (l,3l); equal iff k=l and k=3l → 2l=0 → l∈{0,2}
        assert_eq!(i.log_order(), 1);
        assert!(i.contains(&[2, 2]));
        let s = a.sum(&b);
        // (1,1),(1,3) generate: difference (0,2); order 4·2 = 8
        assert_eq!(s.log_order(), 3);
        // modular law sanity: |A|·|B| = |A∩B|·|A+B|
        assert_eq!(
            a.log_order() + b.log_order(),
            i.log_order() + s.log_order()
        );
    }

    #[test]
    fn quotient_log_dims() {
        let p = 3;
        let m = 2;
        let num = ZModSpan::new(p, m, 2, vec![vec![1, 0], vec![0, 3]]);
        let den = ZModSpan::new(p, m, 2, vec![vec![3, 0]]);
        let q = FpQuotientSpace::new(num.clone(), den).unwrap();
        assert_eq!(q.log_dim(), 2); // (9·3)/3
        // misnested quotient rejected
        let bad_den = ZModSpan::new(p, m, 2, vec![vec![0, 1]]);
        assert!(FpQuotientSpace::new(num, bad_den).is_err());
    }

    #[test]
    fn reduction_gives_canonical_coset_reps() {
        let s = ZModSpan::new(2, 3, 2, vec![vec![2, 1]]);
        // representatives must be equal iff vectors are congruent mod span
        let r1 = s.reduce_vec(&[5, 3]);
        let r2 = s.reduce_vec(&[7, 4]); // differs by (2,1)
        assert_eq!(r1, r2);
        let r3 = s.reduce_vec(&[5, 4]);
        assert_ne!(r1, r3);
    }
}
