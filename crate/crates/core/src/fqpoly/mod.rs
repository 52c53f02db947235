//! Polynomials over F_q: arithmetic, factorization, the multiplicative
//! functions Φ_q, μ′, rad and W, and divisor enumeration.

mod factor;
pub mod raw;
mod xn1;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::ffield::{parse_fq_list, Fq};

pub use xn1::{xn1_of, DivisorFilter, Xn1, DEFAULT_DIVISOR_CEILING};

/// A polynomial over F_q, constant term first, no trailing zeros.
#[derive(Clone)]
pub struct PolyQ {
    fq: Arc<Fq>,
    coeffs: Vec<u32>,
}

impl PartialEq for PolyQ {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && (Arc::ptr_eq(&self.fq, &other.fq) || *self.fq == *other.fq)
    }
}

impl Eq for PolyQ {}

impl Hash for PolyQ {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", raw::to_string(&self.fq, &self.coeffs))
    }
}

/// Result of [`poly_arith`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyArith {
    Poly(PolyQ),
    Pair(PolyQ, PolyQ),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
    DivMod,
    Gcd,
}

impl PolyQ {
    /// Validates the coefficients and trims trailing zeros.
    pub fn new(fq: Arc<Fq>, coeffs: Vec<u32>) -> Result<PolyQ> {
        if let Some(&c) = coeffs.iter().find(|&&c| c >= fq.q()) {
            return Err(Error::InvalidArgument(format!("{c} is not in F_{}", fq.q())));
        }
        Ok(PolyQ::from_raw(fq, coeffs))
    }

    pub(crate) fn from_raw(fq: Arc<Fq>, coeffs: Vec<u32>) -> PolyQ {
        PolyQ {
            fq,
            coeffs: raw::trimmed(coeffs),
        }
    }

    pub fn zero(fq: Arc<Fq>) -> PolyQ {
        PolyQ::from_raw(fq, Vec::new())
    }

    pub fn one(fq: Arc<Fq>) -> PolyQ {
        PolyQ::from_raw(fq, raw::one())
    }

    pub fn x(fq: Arc<Fq>) -> PolyQ {
        PolyQ::from_raw(fq, raw::x())
    }

    /// `x - 1`.
    pub fn x_minus_1(fq: Arc<Fq>) -> PolyQ {
        let m1 = fq.neg(1);
        PolyQ::from_raw(fq, vec![m1, 1])
    }

    /// `x^n - 1`.
    pub fn x_n_minus_1(fq: Arc<Fq>, n: usize) -> PolyQ {
        let mut c = vec![0u32; n + 1];
        c[0] = fq.neg(1);
        c[n] = fq.add(c[n], 1);
        PolyQ::from_raw(fq, c)
    }

    /// Comma-separated F_q literals, constant term first.
    pub fn parse(fq: Arc<Fq>, s: &str) -> Result<PolyQ> {
        let coeffs = parse_fq_list(&fq, s)?;
        Ok(PolyQ::from_raw(fq, coeffs))
    }

    pub fn to_literal(&self) -> String {
        raw::to_literal(&self.fq, &self.coeffs)
    }

    pub fn fq(&self) -> &Arc<Fq> {
        &self.fq
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        raw::degree(&self.coeffs)
    }

    /// Degree with `deg 0 = 0`; only for contexts where zero cannot occur.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_monic(&self) -> bool {
        raw::is_monic(&self.coeffs)
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    fn same_field(&self, other: &PolyQ) -> Result<()> {
        if Arc::ptr_eq(&self.fq, &other.fq) || *self.fq == *other.fq {
            Ok(())
        } else {
            Err(Error::CtxMismatch)
        }
    }

    fn wrap(&self, coeffs: Vec<u32>) -> PolyQ {
        PolyQ::from_raw(self.fq.clone(), coeffs)
    }

    pub fn add(&self, other: &PolyQ) -> Result<PolyQ> {
        self.same_field(other)?;
        Ok(self.wrap(raw::add(&self.fq, &self.coeffs, &other.coeffs)))
    }

    pub fn sub(&self, other: &PolyQ) -> Result<PolyQ> {
        self.same_field(other)?;
        Ok(self.wrap(raw::sub(&self.fq, &self.coeffs, &other.coeffs)))
    }

    pub fn mul(&self, other: &PolyQ) -> Result<PolyQ> {
        self.same_field(other)?;
        Ok(self.wrap(raw::mul(&self.fq, &self.coeffs, &other.coeffs)))
    }

    pub fn divmod(&self, other: &PolyQ) -> Result<(PolyQ, PolyQ)> {
        self.same_field(other)?;
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (q, r) = raw::divrem(&self.fq, &self.coeffs, &other.coeffs);
        Ok((self.wrap(q), self.wrap(r)))
    }

    /// Exact quotient; `NotADivisor` if `other` does not divide `self`.
    pub fn div_exact(&self, other: &PolyQ) -> Result<PolyQ> {
        let (q, r) = self.divmod(other)?;
        if !r.is_zero() {
            return Err(Error::NotADivisor(other.to_string(), self.to_string()));
        }
        Ok(q)
    }

    /// Monic gcd; `gcd(f, 0) = monic(f)`.
    pub fn gcd(&self, other: &PolyQ) -> Result<PolyQ> {
        self.same_field(other)?;
        Ok(self.wrap(raw::gcd(&self.fq, &self.coeffs, &other.coeffs)))
    }

    pub fn pow(&self, e: u32) -> PolyQ {
        let mut acc = PolyQ::one(self.fq.clone());
        for _ in 0..e {
            acc = acc.mul(self).expect("same field");
        }
        acc
    }

    pub fn monic(&self) -> PolyQ {
        self.wrap(raw::monic(&self.fq, &self.coeffs))
    }

    /// Whether `self` divides `other`.
    pub fn divides(&self, other: &PolyQ) -> Result<bool> {
        Ok(other.divmod(self)?.1.is_zero())
    }

    pub fn is_irreducible(&self) -> bool {
        raw::is_irreducible(&self.fq, &self.coeffs)
    }

    /// Orders by degree, then counting index of the coefficients.
    pub fn cmp_deg_lex(&self, other: &PolyQ) -> std::cmp::Ordering {
        raw::cmp_deg_lex(&self.fq, &self.coeffs, &other.coeffs)
    }
}

pub fn poly_arith(f: &PolyQ, g: &PolyQ, op: PolyOp) -> Result<PolyArith> {
    Ok(match op {
        PolyOp::Add => PolyArith::Poly(f.add(g)?),
        PolyOp::Mul => PolyArith::Poly(f.mul(g)?),
        PolyOp::Gcd => PolyArith::Poly(f.gcd(g)?),
        PolyOp::DivMod => {
            let (q, r) = f.divmod(g)?;
            PolyArith::Pair(q, r)
        }
    })
}

/// `input = unit * prod factor^exponent`, factors monic irreducible, sorted
/// by degree then counting order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFactorization {
    pub input: PolyQ,
    pub unit: u32,
    pub factors: Vec<(PolyQ, u32)>,
}

impl PolyFactorization {
    pub fn num_distinct(&self) -> usize {
        self.factors.len()
    }

    pub fn rad(&self) -> PolyQ {
        let fq = self.input.fq().clone();
        self.factors
            .iter()
            .fold(PolyQ::one(fq), |acc, (f, _)| acc.mul(f).expect("same field"))
    }

    /// `|(F_q[x]/(f))^*| = prod (q^(d e) - q^(d (e-1)))`.
    pub fn phi_q(&self) -> BigUint {
        let q = BigUint::from(self.input.fq().q());
        self.factors.iter().fold(BigUint::one(), |acc, (f, e)| {
            let d = f.deg() as u32;
            acc * (q.pow(d * e) - q.pow(d * (e - 1)))
        })
    }

    pub fn moebius_prime(&self) -> i32 {
        if self.factors.iter().any(|(_, e)| *e > 1) {
            0
        } else if self.factors.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn w(&self) -> BigUint {
        BigUint::one() << self.factors.len()
    }

    /// Reassembles `unit * prod factor^exponent`.
    pub fn product(&self) -> PolyQ {
        let fq = self.input.fq().clone();
        let start = PolyQ::from_raw(fq.clone(), vec![self.unit]);
        self.factors
            .iter()
            .fold(start, |acc, (f, e)| acc.mul(&f.pow(*e)).expect("same field"))
    }
}

pub fn factor_poly(f: &PolyQ) -> Result<PolyFactorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let fq = f.fq().clone();
    let unit = f.leading();
    let monic = raw::monic(&fq, f.coeffs());
    let factors = factor::factor_monic(&fq, &monic)
        .into_iter()
        .map(|(g, e)| (PolyQ::from_raw(fq.clone(), g), e))
        .collect();
    Ok(PolyFactorization {
        input: f.clone(),
        unit,
        factors,
    })
}

/// Which function [`arith_poly`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyFunction {
    Rad,
    PhiQ,
    MoebiusPrime,
    W,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyValue {
    Poly(PolyQ),
    Int(num_bigint::BigInt),
}

pub fn arith_poly(f: &PolyQ, which: PolyFunction) -> Result<PolyValue> {
    let fact = factor_poly(f)?;
    Ok(match which {
        PolyFunction::Rad => PolyValue::Poly(fact.rad()),
        PolyFunction::PhiQ => PolyValue::Int(fact.phi_q().into()),
        PolyFunction::MoebiusPrime => PolyValue::Int(fact.moebius_prime().into()),
        PolyFunction::W => PolyValue::Int(fact.w().into()),
    })
}

/// Monic divisors of `f` in exponent-odometer order (first factor's exponent
/// varying fastest).
pub fn divisors_of(f: &PolyQ, filter: DivisorFilter) -> Result<Vec<PolyQ>> {
    divisors_with_ceiling(f, filter, DEFAULT_DIVISOR_CEILING)
}

pub fn divisors_with_ceiling(f: &PolyQ, filter: DivisorFilter, ceiling: u128) -> Result<Vec<PolyQ>> {
    let fact = factor_poly(f)?;
    let exps: Vec<u32> = fact.factors.iter().map(|(_, e)| *e).collect();
    let polys: Vec<PolyQ> = fact.factors.iter().map(|(g, _)| g.clone()).collect();
    let vecs = xn1::odometer(&exps, &polys.iter().map(|g| g.deg()).collect::<Vec<_>>(), filter, ceiling)?;
    Ok(vecs
        .into_iter()
        .map(|v| xn1::assemble(f.fq(), &polys, &v))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::Fq;

    fn fq(p: u64, t: u32) -> Arc<Fq> {
        Arc::new(Fq::new(p, t).unwrap())
    }

    fn poly(f: &Arc<Fq>, c: &[u32]) -> PolyQ {
        PolyQ::new(f.clone(), c.to_vec()).unwrap()
    }

    fn fact_summary(f: &PolyFactorization) -> Vec<(usize, u32)> {
        f.factors.iter().map(|(g, e)| (g.deg(), *e)).collect()
    }

    #[test]
    fn gcd_examples() {
        let f2 = fq(2, 1);
        let g = poly(&f2, &[1, 0, 0, 1]).gcd(&poly(&f2, &[1, 1])).unwrap();
        assert_eq!(g, poly(&f2, &[1, 1]));
        let f3 = fq(3, 1);
        let g = poly(&f3, &[2, 0, 2]).gcd(&PolyQ::zero(f3.clone())).unwrap();
        assert_eq!(g, poly(&f3, &[1, 0, 1]));
        let g = PolyQ::x_n_minus_1(f3.clone(), 4)
            .gcd(&PolyQ::x_n_minus_1(f3.clone(), 2))
            .unwrap();
        assert_eq!(g, PolyQ::x_n_minus_1(f3.clone(), 2));
        assert_eq!(
            poly(&f3, &[1]).divmod(&PolyQ::zero(f3.clone())).unwrap_err(),
            Error::DivisionByZero
        );
        let other = fq(5, 1);
        assert_eq!(
            poly(&f3, &[1]).add(&poly(&other, &[1])).unwrap_err(),
            Error::CtxMismatch
        );
    }

    #[test]
    fn factor_examples() {
        let f2 = fq(2, 1);
        let f = factor_poly(&PolyQ::x_n_minus_1(f2.clone(), 3)).unwrap();
        assert_eq!(f.factors[0].0, poly(&f2, &[1, 1]));
        assert_eq!(f.factors[1].0, poly(&f2, &[1, 1, 1]));

        let f4 = fq(2, 2);
        let f = factor_poly(&PolyQ::x_n_minus_1(f4.clone(), 14)).unwrap();
        assert_eq!(fact_summary(&f), vec![(1, 2), (3, 2), (3, 2)]);

        let f5 = fq(5, 1);
        let f = factor_poly(&PolyQ::x_n_minus_1(f5.clone(), 4)).unwrap();
        assert_eq!(fact_summary(&f), vec![(1, 1); 4]);
        let roots: Vec<u32> = f.factors.iter().map(|(g, _)| f5.neg(g.coeffs()[0])).collect();
        // x + 1, x + 2, x + 3, x + 4 in counting order
        assert_eq!(roots, vec![4, 3, 2, 1]);
    }

    #[test]
    fn arith_examples() {
        for (p, t) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let f = fq(p, t);
            let q = f.q() as u64;
            let v = arith_poly(&PolyQ::x_minus_1(f.clone()), PolyFunction::PhiQ).unwrap();
            assert_eq!(v, PolyValue::Int((q - 1).into()));
        }
        let f2 = fq(2, 1);
        assert_eq!(
            arith_poly(&PolyQ::x_n_minus_1(f2, 3), PolyFunction::PhiQ).unwrap(),
            PolyValue::Int(3.into())
        );
        let f3 = fq(3, 1);
        let x41 = PolyQ::x_n_minus_1(f3.clone(), 4);
        assert_eq!(arith_poly(&x41, PolyFunction::W).unwrap(), PolyValue::Int(8.into()));
        assert_eq!(
            arith_poly(&x41, PolyFunction::MoebiusPrime).unwrap(),
            PolyValue::Int((-1).into())
        );
        assert_eq!(
            arith_poly(&PolyQ::zero(f3), PolyFunction::Rad).unwrap_err(),
            Error::ZeroPolynomial
        );
    }

    #[test]
    fn divisor_examples() {
        let f2 = fq(2, 1);
        let x31 = PolyQ::x_n_minus_1(f2.clone(), 3);
        let lin = divisors_of(&x31, DivisorFilter::DegreeEquals(1)).unwrap();
        assert_eq!(lin, vec![poly(&f2, &[1, 1])]);
        let all = divisors_of(&x31, DivisorFilter::AllMonic).unwrap();
        assert_eq!(all.len(), 4);
        assert_eq!(all[0], PolyQ::one(f2.clone()));
        assert_eq!(all[1], poly(&f2, &[1, 1]));
        assert_eq!(
            divisors_of(&x31, DivisorFilter::DegreeEquals(0)).unwrap(),
            vec![PolyQ::one(f2.clone())]
        );
        let x41 = PolyQ::x_n_minus_1(f2.clone(), 4);
        assert_eq!(divisors_of(&x41, DivisorFilter::AllMonic).unwrap().len(), 5);
        assert_eq!(divisors_of(&x41, DivisorFilter::SquarefreeMonic).unwrap().len(), 2);
        assert!(matches!(
            divisors_with_ceiling(&PolyQ::x_n_minus_1(fq(5, 1), 4), DivisorFilter::AllMonic, 8),
            Err(Error::TooManyDivisors { .. })
        ));
    }

    /// Independent irreducibility check: no common factor with x^(q^d) - x
    /// for any d below the degree, by repeated squaring of plain polynomials.
    fn irreducible_oracle(g: &PolyQ) -> bool {
        let fq = g.fq().clone();
        let n = g.deg();
        let mut h = PolyQ::x(fq.clone());
        for _ in 1..n {
            let mut acc = PolyQ::one(fq.clone());
            for _ in 0..fq.q() {
                acc = acc.mul(&h).unwrap().divmod(g).unwrap().1;
            }
            h = acc;
            let test = h.sub(&PolyQ::x(fq.clone())).unwrap();
            if !g.gcd(&test).unwrap().is_one() {
                return false;
            }
        }
        n >= 1
    }

    fn check_factorization(f: &PolyQ) {
        let fact = factor_poly(f).unwrap();
        assert_eq!(fact.product(), *f);
        for w in fact.factors.windows(2) {
            assert_eq!(w[0].0.cmp_deg_lex(&w[1].0), std::cmp::Ordering::Less);
        }
        for (g, e) in &fact.factors {
            assert!(*e >= 1);
            assert!(g.is_monic());
            assert!(irreducible_oracle(g), "{g} claimed irreducible in factorization of {f}");
        }
        let rad = fact.rad();
        assert!(rad.divides(f).unwrap());
        let rf = factor_poly(&rad).unwrap();
        assert!(rf.factors.iter().all(|(_, e)| *e == 1));
    }

    #[test]
    fn factorizations_of_xn_minus_1() {
        for (p, t) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1), (7, 1), (3, 2), (2, 3)] {
            let f = fq(p, t);
            for n in 1..=24 {
                check_factorization(&PolyQ::x_n_minus_1(f.clone(), n));
            }
        }
    }

    /// Σ_{h | g} Φ_q(h) = q^deg g for every monic divisor g of x^n − 1.
    #[test]
    fn phi_sum_rule() {
        for (p, t) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1)] {
            let f = fq(p, t);
            for n in 1..=12 {
                let xn = PolyQ::x_n_minus_1(f.clone(), n);
                for g in divisors_of(&xn, DivisorFilter::AllMonic).unwrap() {
                    let total = divisors_of(&g, DivisorFilter::AllMonic)
                        .unwrap()
                        .iter()
                        .fold(BigUint::from(0u32), |acc, h| acc + factor_poly(h).unwrap().phi_q());
                    assert_eq!(total, BigUint::from(f.q()).pow(g.deg() as u32));
                }
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn random_polys_factor_correctly(
                pt in prop::sample::select(vec![(2u64, 1u32), (3, 1), (2, 2), (5, 1), (3, 2), (11, 1)]),
                coeffs in prop::collection::vec(0u32..1000, 1..14),
            ) {
                let f = fq(pt.0, pt.1);
                let c: Vec<u32> = coeffs.iter().map(|&x| x % f.q()).collect();
                let g = PolyQ::new(f, c).unwrap();
                prop_assume!(!g.is_zero());
                check_factorization(&g);
            }

            #[test]
            fn divmod_identity(
                a in prop::collection::vec(0u32..7, 0..12),
                b in prop::collection::vec(0u32..7, 1..6),
            ) {
                let f = fq(7, 1);
                let a = PolyQ::new(f.clone(), a).unwrap();
                let b = PolyQ::new(f, b).unwrap();
                prop_assume!(!b.is_zero());
                let (q, r) = a.divmod(&b).unwrap();
                prop_assert!(r.degree().is_none_or(|d| d < b.deg()));
                prop_assert_eq!(q.mul(&b).unwrap().add(&r).unwrap(), a);
            }
        }
    }
}
