//! Independent value oracle for Witt arithmetic.
//!
//! Every operation here is computed from first principles over the
//! torsion-free ring `ℤ[t]/(t^k)` with arbitrary-precision integers:
//! lift the mod-`p` coordinates, pass to ghost components
//! `w_g = Σ_{j≤g} p^j x_j^{p^{g−j}}`, perform the operation on ghost
//! components (where it is literally componentwise ring arithmetic),
//! solve back for coordinates with *checked* exact divisions by powers
//! of `p`, and reduce mod `p`. None of the structure-polynomial
//! machinery is used, so agreement between the two paths is a real
//! consistency check rather than a tautology.
//!
//! Inputs and outputs are coordinate vectors over `F_p[t]/(t^k)`
//! encoded as `Vec<u8>` of length `k` (the same element encoding as
//! [`super::FpPolyTrunc`]).

use crate::error::Error;
use crate::Result;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// An element of `ℤ[t]/(t^k)`: coefficient list of length `k`.
pub type ZElt = Vec<BigInt>;

/// The ring `ℤ[t]/(t^k)`.
#[derive(Clone, Copy, Debug)]
pub struct ZPolyTrunc {
    pub k: usize,
}

impl ZPolyTrunc {
    pub fn zero(&self) -> ZElt {
        vec![BigInt::zero(); self.k]
    }

    pub fn one(&self) -> ZElt {
        let mut v = self.zero();
        v[0] = BigInt::one();
        v
    }

    pub fn add(&self, a: &ZElt, b: &ZElt) -> ZElt {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn neg(&self, a: &ZElt) -> ZElt {
        a.iter().map(|x| -x).collect()
    }

    pub fn mul(&self, a: &ZElt, b: &ZElt) -> ZElt {
        let mut out = self.zero();
        for i in 0..self.k {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..self.k - i {
                if !b[j].is_zero() {
                    out[i + j] += &a[i] * &b[j];
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &ZElt, mut n: u64) -> ZElt {
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

    pub fn scale(&self, c: &BigInt, a: &ZElt) -> ZElt {
        a.iter().map(|x| c * x).collect()
    }

    /// Coefficientwise exact division; fails if any coefficient is not
    /// divisible by `d`.
    pub fn exact_div(&self, a: &ZElt, d: &BigInt) -> Result<ZElt> {
        let mut out = Vec::with_capacity(self.k);
        for x in a {
            let (q, r) = x.div_rem(d);
            if !r.is_zero() {
                return Err(Error::internal(format!(
                    "ghost oracle: inexact division of {x} by {d}"
                )));
            }
            out.push(q);
        }
        Ok(out)
    }
}

/// Ghost components of a coordinate tuple: `w_g = Σ_{j≤g} p^j x_j^{p^{g−j}}`.
pub fn ghost(ring: &ZPolyTrunc, p: u64, coords: &[ZElt]) -> Vec<ZElt> {
    let m = coords.len();
    let mut out = Vec::with_capacity(m);
    for g in 0..m {
        let mut w = ring.zero();
        for (j, x) in coords.iter().enumerate().take(g + 1) {
            let pj = BigInt::from(p).pow(j as u32);
            let t = ring.pow(x, p.pow((g - j) as u32));
            w = ring.add(&w, &ring.scale(&pj, &t));
        }
        out.push(w);
    }
    out
}

/// Solve `ghost(x) = w` for the coordinates. Each step divides by `p^g`
/// and verifies exactness; an inexact division means `w` is not in the
/// image of the ghost map over `ℤ[t]/(t^k)`.
pub fn unghost(ring: &ZPolyTrunc, p: u64, w: &[ZElt]) -> Result<Vec<ZElt>> {
    let m = w.len();
    let mut coords: Vec<ZElt> = Vec::with_capacity(m);
    for g in 0..m {
        let mut rem = w[g].clone();
        for (j, x) in coords.iter().enumerate() {
            let pj = BigInt::from(p).pow(j as u32);
            let t = ring.pow(x, p.pow((g - j) as u32));
            rem = ring.add(&rem, &ring.neg(&ring.scale(&pj, &t)));
        }
        let pg = BigInt::from(p).pow(g as u32);
        coords.push(ring.exact_div(&rem, &pg)?);
    }
    Ok(coords)
}

fn lift(ring: &ZPolyTrunc, a: &[u8]) -> ZElt {
    debug_assert_eq!(a.len(), ring.k);
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn reduce(p: u64, a: &ZElt) -> Vec<u8> {
    let pb = BigInt::from(p);
    a.iter()
        .map(|x| {
            let r = x.mod_floor(&pb);
            u64::try_from(r).expect("residue fits u64") as u8
        })
        .collect()
}

fn lift_all(ring: &ZPolyTrunc, coords: &[Vec<u8>]) -> Vec<ZElt> {
    coords.iter().map(|c| lift(ring, c)).collect()
}

fn reduce_all(p: u64, coords: &[ZElt]) -> Vec<Vec<u8>> {
    coords.iter().map(|c| reduce(p, c)).collect()
}

/// Witt-vector sum over `F_p[t]/(t^k)`, computed entirely by ghost
/// components over integer lifts.
pub fn oracle_add(p: u64, k: usize, a: &[Vec<u8>], b: &[Vec<u8>]) -> Result<Vec<Vec<u8>>> {
    let ring = ZPolyTrunc { k };
    let (ga, gb) = (
        ghost(&ring, p, &lift_all(&ring, a)),
        ghost(&ring, p, &lift_all(&ring, b)),
    );
    let gw: Vec<ZElt> = ga.iter().zip(&gb).map(|(x, y)| ring.add(x, y)).collect();
    Ok(reduce_all(p, &unghost(&ring, p, &gw)?))
}

/// Witt-vector negation by ghost components.
pub fn oracle_neg(p: u64, k: usize, a: &[Vec<u8>]) -> Result<Vec<Vec<u8>>> {
    let ring = ZPolyTrunc { k };
    let ga = ghost(&ring, p, &lift_all(&ring, a));
    let gw: Vec<ZElt> = ga.iter().map(|x| ring.neg(x)).collect();
    Ok(reduce_all(p, &unghost(&ring, p, &gw)?))
}

/// Witt-vector product by ghost components.
pub fn oracle_mul(p: u64, k: usize, a: &[Vec<u8>], b: &[Vec<u8>]) -> Result<Vec<Vec<u8>>> {
    let ring = ZPolyTrunc { k };
    let (ga, gb) = (
        ghost(&ring, p, &lift_all(&ring, a)),
        ghost(&ring, p, &lift_all(&ring, b)),
    );
    let gw: Vec<ZElt> = ga.iter().zip(&gb).map(|(x, y)| ring.mul(x, y)).collect();
    Ok(reduce_all(p, &unghost(&ring, p, &gw)?))
}

/// `F: W_{m+1} → W_m` by its ghost description `w_g(Fa) = w_{g+1}(a)`.
pub fn oracle_frobenius(p: u64, k: usize, a: &[Vec<u8>]) -> Result<Vec<Vec<u8>>> {
    if a.is_empty() {
        return Err(Error::domain("Frobenius oracle needs length ≥ 1"));
    }
    let ring = ZPolyTrunc { k };
    let ga = ghost(&ring, p, &lift_all(&ring, a));
    let gw: Vec<ZElt> = ga[1..].to_vec();
    Ok(reduce_all(p, &unghost(&ring, p, &gw)?))
}

/// `V: W_m → W_{m+1}` by its ghost description
/// `w_0(Va) = 0`, `w_g(Va) = p · w_{g−1}(a)`.
pub fn oracle_v(p: u64, k: usize, a: &[Vec<u8>]) -> Result<Vec<Vec<u8>>> {
    let ring = ZPolyTrunc { k };
    let ga = ghost(&ring, p, &lift_all(&ring, a));
    let mut gw = vec![ring.zero()];
    let pb = BigInt::from(p);
    gw.extend(ga.iter().map(|x| ring.scale(&pb, x)));
    Ok(reduce_all(p, &unghost(&ring, p, &gw)?))
}

/// `R: W_m → W_{m−1}` by its ghost description (forget the last ghost
/// component).
pub fn oracle_r(p: u64, k: usize, a: &[Vec<u8>]) -> Result<Vec<Vec<u8>>> {
    if a.is_empty() {
        return Err(Error::domain("restriction oracle needs length ≥ 1"));
    }
    let ring = ZPolyTrunc { k };
    let ga = ghost(&ring, p, &lift_all(&ring, a));
    let gw: Vec<ZElt> = ga[..a.len() - 1].to_vec();
    Ok(reduce_all(p, &unghost(&ring, p, &gw)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn consts(k: usize, vals: &[i64]) -> Vec<Vec<BigInt>> {
        vals.iter()
            .map(|&v| {
                let mut e = vec![BigInt::zero(); k];
                e[0] = BigInt::from(v);
                e
            })
            .collect()
    }

    #[test]
    fn ghost_of_ones_at_p2() {
        let ring = ZPolyTrunc { k: 1 };
        let g = ghost(&ring, 2, &consts(1, &[1, 1]));
        assert_eq!(g[0][0], BigInt::from(1));
        assert_eq!(g[1][0], BigInt::from(3));
    }

    #[test]
    fn unghost_inverts_ghost() {
        let ring = ZPolyTrunc { k: 3 };
        // coordinates with genuine t-dependence
        let coords: Vec<ZElt> = vec![
            vec![BigInt::from(2), BigInt::from(1), BigInt::from(0)],
            vec![BigInt::from(1), BigInt::from(4), BigInt::from(2)],
            vec![BigInt::from(0), BigInt::from(3), BigInt::from(1)],
        ];
        let g = ghost(&ring, 5, &coords);
        let back = unghost(&ring, 5, &g).unwrap();
        assert_eq!(back, coords);
    }

    #[test]
    fn unghost_rejects_non_witt_ghost_tuple() {
        let ring = ZPolyTrunc { k: 1 };
        // (0, 1) is not a ghost tuple at p = 2: x_0 = 0 forces 2 | w_1.
        let w = consts(1, &[0, 1]);
        assert!(unghost(&ring, 2, &w).is_err());
    }

    #[test]
    fn one_plus_one_is_verschiebung_one() {
        let one = vec![vec![1u8], vec![0u8]];
        let sum = oracle_add(2, 1, &one, &one).unwrap();
        assert_eq!(sum, vec![vec![0u8], vec![1u8]]);
    }

    #[test]
    fn fv_is_multiplication_by_p() {
        let p = 3;
        let k = 2;
        let a = vec![vec![2u8, 1], vec![1u8, 2], vec![0u8, 1]];
        let va = oracle_v(p, k, &a).unwrap();
        let fva = oracle_frobenius(p, k, &va).unwrap();
        let mut pa = a.clone();
        for _ in 0..(p - 1) {
            pa = oracle_add(p, k, &pa, &a).unwrap();
        }
        assert_eq!(fva, pa);
    }

    #[test]
    fn restriction_is_coordinate_truncation() {
        let a = vec![vec![1u8], vec![1u8], vec![1u8]];
        let r = oracle_r(2, 1, &a).unwrap();
        assert_eq!(r, vec![vec![1u8], vec![1u8]]);
    }
}
