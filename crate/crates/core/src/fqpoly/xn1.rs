//! The factorization of `x^n - 1` over F_q and its divisor lattice.
//!
//! Monic divisors are represented by exponent vectors over the canonical
//! factor list. The F_q-order of an element is read off from its Frobenius
//! orbit one primary component at a time: with `c_i = (x^n-1)/f_i^(e_i)`,
//! the exponent of `f_i` in the order is the least `o` for which
//! `(c_i f_i^o)∘a = 0`.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use super::raw;
use super::{factor_poly, PolyQ};
use crate::error::{Error, Result};
use crate::ffield::{FieldCtx, FieldTable, Fq};

/// Default ceiling on the number of divisors enumerated at once.
pub const DEFAULT_DIVISOR_CEILING: u128 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivisorFilter {
    AllMonic,
    SquarefreeMonic,
    DegreeEquals(usize),
}

/// Exponent vectors in odometer order, first coordinate fastest.
pub(crate) fn odometer(
    exps: &[u32],
    degs: &[usize],
    filter: DivisorFilter,
    ceiling: u128,
) -> Result<Vec<Vec<u32>>> {
    let limits: Vec<u32> = match filter {
        DivisorFilter::SquarefreeMonic => exps.iter().map(|&e| e.min(1)).collect(),
        _ => exps.to_vec(),
    };
    if let DivisorFilter::DegreeEquals(k) = filter {
        return degree_exact(&limits, degs, k, ceiling);
    }
    let count = limits
        .iter()
        .try_fold(1u128, |acc, &l| acc.checked_mul(l as u128 + 1))
        .unwrap_or(u128::MAX);
    if count > ceiling {
        return Err(Error::TooManyDivisors { count, ceiling });
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; limits.len()];
    loop {
        let keep = match filter {
            DivisorFilter::DegreeEquals(k) => {
                cur.iter().zip(degs).map(|(&e, &d)| e as usize * d).sum::<usize>() == k
            }
            _ => true,
        };
        if keep {
            out.push(cur.clone());
        }
        let mut i = 0;
        loop {
            if i == limits.len() {
                return Ok(out);
            }
            if cur[i] < limits[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

/// Exponent vectors of total degree `k`, in odometer order. Branches that
/// cannot reach degree `k` are pruned.
fn degree_exact(limits: &[u32], degs: &[usize], k: usize, ceiling: u128) -> Result<Vec<Vec<u32>>> {
    fn walk(
        i: usize,
        left: usize,
        limits: &[u32],
        degs: &[usize],
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
        ceiling: u128,
    ) -> Result<()> {
        if i == 0 {
            if left == 0 {
                if out.len() as u128 >= ceiling {
                    return Err(Error::TooManyDivisors { count: out.len() as u128 + 1, ceiling });
                }
                out.push(cur.clone());
            }
            return Ok(());
        }
        let j = i - 1;
        for e in 0..=limits[j] {
            let used = e as usize * degs[j];
            if used > left {
                break;
            }
            cur[j] = e;
            walk(j, left - used, limits, degs, cur, out, ceiling)?;
        }
        cur[j] = 0;
        Ok(())
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; limits.len()];
    walk(limits.len(), k, limits, degs, &mut cur, &mut out, ceiling)?;
    Ok(out)
}

pub(crate) fn assemble(fq: &Arc<Fq>, polys: &[PolyQ], exps: &[u32]) -> PolyQ {
    let mut acc = raw::one();
    for (f, &e) in polys.iter().zip(exps) {
        for _ in 0..e {
            acc = raw::mul(fq, &acc, f.coeffs());
        }
    }
    PolyQ::from_raw(fq.clone(), acc)
}

pub struct Xn1 {
    fq: Arc<Fq>,
    n: usize,
    poly: PolyQ,
    factors: Vec<(PolyQ, u32)>,
    /// `ann[i][o]` = `c_i f_i^o` as a dense length-`n` coefficient vector.
    ann: Vec<Vec<Vec<u32>>>,
}

impl std::fmt::Debug for Xn1 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "x^{}-1 = ", self.n)?;
        for (g, e) in &self.factors {
            write!(f, "({g})^{e} ")?;
        }
        Ok(())
    }
}

/// The cached decomposition of `x^n - 1` for a field context.
pub fn xn1_of(ctx: &FieldCtx) -> Arc<Xn1> {
    ctx.xn1
        .get_or_init(|| Arc::new(Xn1::new(ctx.fq().clone(), ctx.n())))
        .clone()
}

impl Xn1 {
    pub fn new(fq: Arc<Fq>, n: usize) -> Xn1 {
        assert!(n >= 1);
        let poly = PolyQ::x_n_minus_1(fq.clone(), n);
        let factors = factor_poly(&poly).expect("nonzero").factors;
        let mut ann = Vec::with_capacity(factors.len());
        for (i, (f, e)) in factors.iter().enumerate() {
            let mut c = raw::one();
            for (j, (g, ej)) in factors.iter().enumerate() {
                if j != i {
                    for _ in 0..*ej {
                        c = raw::mul(&fq, &c, g.coeffs());
                    }
                }
            }
            let mut row = Vec::with_capacity(*e as usize);
            for _ in 0..*e {
                let mut dense = c.clone();
                dense.resize(n, 0);
                row.push(dense);
                c = raw::mul(&fq, &c, f.coeffs());
            }
            ann.push(row);
        }
        Xn1 {
            fq,
            n,
            poly,
            factors,
            ann,
        }
    }

    pub fn fq(&self) -> &Arc<Fq> {
        &self.fq
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `x^n - 1` itself.
    pub fn poly(&self) -> &PolyQ {
        &self.poly
    }

    /// Monic irreducible factors with exponents, in canonical order.
    pub fn factors(&self) -> &[(PolyQ, u32)] {
        &self.factors
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn factor_degrees(&self) -> Vec<usize> {
        self.factors.iter().map(|(f, _)| f.deg()).collect()
    }

    /// Exponent vector of `x^n - 1`.
    pub fn full(&self) -> Vec<u32> {
        self.factors.iter().map(|(_, e)| *e).collect()
    }

    /// Exponent vector of the monic associate of `h`; `NotADivisor` unless
    /// `h | x^n - 1`.
    pub fn exps_of(&self, h: &PolyQ) -> Result<Vec<u32>> {
        let not_div = || Error::NotADivisor(h.to_string(), self.poly.to_string());
        if h.is_zero() || h.fq().q() != self.fq.q() {
            return Err(not_div());
        }
        let mut rest = raw::monic(&self.fq, h.coeffs());
        let mut out = Vec::with_capacity(self.factors.len());
        for (f, e) in &self.factors {
            let mut k = 0;
            loop {
                let (q, r) = raw::divrem(&self.fq, &rest, f.coeffs());
                if !r.is_empty() {
                    break;
                }
                rest = q;
                k += 1;
            }
            if k > *e {
                return Err(not_div());
            }
            out.push(k);
        }
        if rest != raw::one() {
            return Err(not_div());
        }
        Ok(out)
    }

    pub fn poly_of(&self, exps: &[u32]) -> PolyQ {
        let polys: Vec<PolyQ> = self.factors.iter().map(|(f, _)| f.clone()).collect();
        assemble(&self.fq, &polys, exps)
    }

    pub fn degree_of(&self, exps: &[u32]) -> usize {
        self.factors
            .iter()
            .zip(exps)
            .map(|((f, _), &e)| f.deg() * e as usize)
            .sum()
    }

    /// Φ_q of the divisor with these exponents.
    pub fn phi_q_of(&self, exps: &[u32]) -> BigUint {
        let q = BigUint::from(self.fq.q());
        self.factors
            .iter()
            .zip(exps)
            .filter(|(_, &e)| e > 0)
            .fold(BigUint::one(), |acc, ((f, _), &e)| {
                let d = f.deg() as u32;
                acc * (q.pow(d * e) - q.pow(d * (e - 1)))
            })
    }

    /// Exponents of `(x^n - 1) / h`.
    pub fn complement(&self, exps: &[u32]) -> Vec<u32> {
        self.factors
            .iter()
            .zip(exps)
            .map(|((_, e), &h)| e - h)
            .collect()
    }

    pub fn divisors(&self, filter: DivisorFilter, ceiling: u128) -> Result<Vec<Vec<u32>>> {
        odometer(&self.full(), &self.factor_degrees(), filter, ceiling)
    }

    /// The degree-`k` monic divisors; `NoDegreeKDivisor` when there are none.
    pub fn p_k(&self, k: usize) -> Result<Vec<Vec<u32>>> {
        let v = self.divisors(DivisorFilter::DegreeEquals(k), DEFAULT_DIVISOR_CEILING)?;
        if v.is_empty() {
            return Err(Error::NoDegreeKDivisor(k));
        }
        Ok(v)
    }

    /// `h mod (x^n - 1)` as a dense length-`n` vector.
    pub fn reduce_dense(&self, h: &[u32]) -> Vec<u32> {
        let mut out = vec![0u32; self.n];
        for (i, &c) in h.iter().enumerate() {
            let j = i % self.n;
            out[j] = self.fq.add(out[j], c);
        }
        out
    }

    /// `h∘a` from the Frobenius orbit of `a` given as coefficient vectors.
    pub fn apply_to_orbit(&self, h_dense: &[u32], orbit: &[Vec<u32>]) -> Vec<u32> {
        let fq = &self.fq;
        let mut acc = vec![0u32; self.n];
        for (&c, v) in h_dense.iter().zip(orbit) {
            if c == 0 {
                continue;
            }
            for (o, &x) in acc.iter_mut().zip(v) {
                *o = fq.add(*o, fq.mul(c, x));
            }
        }
        acc
    }

    /// `h∘a` from the orbit of `a` as table indices.
    #[inline]
    pub fn apply_to_orbit_table(&self, tb: &FieldTable, h_dense: &[u32], orbit: &[u32]) -> u32 {
        let mut acc = 0u32;
        for (&c, &v) in h_dense.iter().zip(orbit) {
            if c != 0 && v != 0 {
                acc = tb.add(acc, tb.mul(c, v));
            }
        }
        acc
    }

    /// `c_i f_i^o` reduced mod `x^n - 1` for `o < e_i`, where `c_i` is the
    /// cofactor of the full power of factor `i`. An element (or character)
    /// is killed by it exactly when the `i`-th order exponent is at most `o`.
    pub fn annihilator_dense(&self, i: usize, o: u32) -> &[u32] {
        &self.ann[i][o as usize]
    }

    /// Exponent vector of the F_q-order, from a coefficient-vector orbit.
    pub fn ord_exps(&self, orbit: &[Vec<u32>]) -> Vec<u32> {
        self.ord_exps_by(|h| self.apply_to_orbit(h, orbit).iter().all(|&c| c == 0))
    }

    /// Exponent vector of the F_q-order, from a table orbit.
    pub fn ord_exps_table(&self, tb: &FieldTable, orbit: &[u32]) -> Vec<u32> {
        self.ord_exps_by(|h| self.apply_to_orbit_table(tb, h, orbit) == 0)
    }

    fn ord_exps_by(&self, kills: impl Fn(&[u32]) -> bool) -> Vec<u32> {
        self.ann
            .iter()
            .zip(&self.factors)
            .map(|(row, (_, e))| {
                row.iter()
                    .position(|h| kills(h))
                    .map_or(*e, |o| o as u32)
            })
            .collect()
    }
}
