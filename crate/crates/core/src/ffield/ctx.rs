use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::Fq;
use crate::error::{Error, Result};
use crate::fqpoly::raw;
use crate::intarith::{factor_qn_minus_1, IntFactorization};

/// Default ceiling for baby-step/giant-step discrete logs, in bits of `q^n`.
pub const DEFAULT_DLOG_CEILING_BITS: u32 = 24;
const MAX_FIELD_BITS: u32 = 127;

/// Optional explicit moduli for [`make_field`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Overrides {
    /// Monic degree-`t` polynomial over F_p, constant term first.
    pub base: Option<Vec<u32>>,
    /// Monic degree-`n` polynomial over F_q, constant term first.
    pub ext: Option<Vec<u32>>,
}

/// The tower F_p ⊂ F_q ⊂ F_{q^n}.
pub struct FieldCtx {
    id: u64,
    fq: Arc<Fq>,
    n: usize,
    modulus: Vec<u32>,
    size: u128,
    /// Row `i` holds `x^(i*q) mod modulus`, padded to length `n`.
    frob: Vec<Vec<u32>>,
    fact: OnceLock<Result<IntFactorization>>,
    primitive: OnceLock<Result<FieldElement>>,
    pub(crate) xn1: OnceLock<Arc<crate::fqpoly::Xn1>>,
}

/// An element of F_{q^n}: `n` coefficients over F_q, constant term first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    ctx: u64,
    coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn ctx_id(&self) -> u64 {
        self.ctx
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

/// Binary and unary element operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElemOp {
    Add,
    Sub,
    Mul,
    Div,
    /// Power of the first operand; negative exponents invert first.
    Pow(i128),
    /// Inverse of the first operand.
    Inv,
}

/// Builds the tower `F_p ⊂ F_{p^t} ⊂ F_{p^(tn)}`.
///
/// Without overrides both moduli are the first monic irreducible of the
/// required degree in counting order (constant coefficient fastest).
pub fn make_field(p: u64, t: u32, n: usize, overrides: &Overrides) -> Result<Arc<FieldCtx>> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let fq = match &overrides.base {
        Some(m) => Fq::with_modulus(p, t, m.clone())?,
        None => Fq::new(p, t)?,
    };
    FieldCtx::over(Arc::new(fq), n, overrides.ext.clone())
}

impl FieldCtx {
    /// Extension of degree `n` of an existing base field.
    pub fn over(fq: Arc<Fq>, n: usize, ext: Option<Vec<u32>>) -> Result<Arc<FieldCtx>> {
        let q = fq.q() as u128;
        let size = q.checked_pow(n as u32).filter(|s| *s < 1u128 << MAX_FIELD_BITS);
        let size = size.ok_or_else(|| Error::FieldTooLarge {
            size: format!("{}^{n}", fq.q()),
            ceiling_bits: MAX_FIELD_BITS,
        })?;
        let modulus = match ext {
            Some(m) => {
                let m = raw::trimmed(m);
                if m.iter().any(|&c| c >= fq.q()) {
                    return Err(Error::InvalidArgument(format!(
                        "modulus coefficients must lie in [0, {})",
                        fq.q()
                    )));
                }
                if m.len() != n + 1 || !raw::is_monic(&m) || !raw::is_irreducible(&fq, &m) {
                    return Err(Error::ReducibleModulus(raw::to_string(&fq, &m)));
                }
                m
            }
            None => raw::first_irreducible(&fq, n),
        };
        let xq = raw::powmod(&fq, &raw::x(), fq.q() as u128, &modulus);
        let mut frob = Vec::with_capacity(n);
        let mut row = raw::one();
        for _ in 0..n {
            let mut padded = row.clone();
            padded.resize(n, 0);
            frob.push(padded);
            row = raw::mulmod(&fq, &row, &xq, &modulus);
        }
        let mut h = DefaultHasher::new();
        (fq.p(), fq.t(), fq.modulus(), n, &modulus).hash(&mut h);
        Ok(Arc::new(FieldCtx {
            id: h.finish(),
            fq,
            n,
            modulus,
            size,
            frob,
            fact: OnceLock::new(),
            primitive: OnceLock::new(),
            xn1: OnceLock::new(),
        }))
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn fq(&self) -> &Arc<Fq> {
        &self.fq
    }

    pub fn p(&self) -> u32 {
        self.fq.p()
    }

    pub fn t(&self) -> u32 {
        self.fq.t()
    }

    pub fn q(&self) -> u32 {
        self.fq.q()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `q^n`.
    pub fn size(&self) -> u128 {
        self.size
    }

    pub fn ext_modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn base_modulus(&self) -> &[u32] {
        self.fq.modulus()
    }

    /// Factorization of `q^n - 1`, computed on first use.
    pub fn fact_qn_minus_1(&self) -> Result<&IntFactorization> {
        self.fact
            .get_or_init(|| factor_qn_minus_1(self.q() as u64, self.n as u32))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn wrap(&self, coeffs: Vec<u32>) -> FieldElement {
        FieldElement { ctx: self.id, coeffs }
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(vec![0; self.n])
    }

    pub fn one(&self) -> FieldElement {
        self.from_fq(1)
    }

    /// Embeds an F_q value.
    pub fn from_fq(&self, c: u32) -> FieldElement {
        let mut v = vec![0; self.n];
        v[0] = c;
        self.wrap(v)
    }

    /// Element from F_q coefficients, constant term first; missing
    /// coefficients are zero.
    pub fn element(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.n {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients for a degree-{} extension",
                coeffs.len(),
                self.n
            )));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.q()) {
            return Err(Error::InvalidArgument(format!("{c} is not in F_{}", self.q())));
        }
        let mut v = coeffs.to_vec();
        v.resize(self.n, 0);
        Ok(self.wrap(v))
    }

    /// Element at position `idx = sum c_i q^i` of the enumeration order.
    pub fn from_index(&self, mut idx: u128) -> FieldElement {
        debug_assert!(idx < self.size);
        let q = self.q() as u128;
        let mut v = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            v.push((idx % q) as u32);
            idx /= q;
        }
        self.wrap(v)
    }

    pub fn index(&self, a: &FieldElement) -> u128 {
        let q = self.q() as u128;
        a.coeffs.iter().rev().fold(0, |acc, &c| acc * q + c as u128)
    }

    pub fn check(&self, a: &FieldElement) -> Result<()> {
        if a.ctx != self.id {
            Err(Error::CtxMismatch)
        } else {
            Ok(())
        }
    }

    fn check2(&self, a: &FieldElement, b: &FieldElement) -> Result<()> {
        self.check(a)?;
        self.check(b)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check2(a, b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub(crate) fn add_unchecked(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let fq = &self.fq;
        self.wrap(
            a.coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| fq.add(x, y))
                .collect(),
        )
    }

    pub fn neg(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        Ok(self.wrap(a.coeffs.iter().map(|&c| self.fq.neg(c)).collect()))
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    /// Multiplication by an F_q scalar.
    pub fn scale(&self, a: &FieldElement, c: u32) -> Result<FieldElement> {
        self.check(a)?;
        Ok(self.wrap(a.coeffs.iter().map(|&x| self.fq.mul(x, c)).collect()))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check2(a, b)?;
        Ok(self.mul_unchecked(a, b))
    }

    pub(crate) fn mul_unchecked(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let prod = raw::mulmod(
            &self.fq,
            &raw::trimmed(a.coeffs.clone()),
            &raw::trimmed(b.coeffs.clone()),
            &self.modulus,
        );
        let mut v = prod;
        v.resize(self.n, 0);
        self.wrap(v)
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow_unchecked(a, self.size - 2))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        let ib = self.inv(b)?;
        self.mul(a, &ib)
    }

    pub(crate) fn pow_unchecked(&self, a: &FieldElement, e: u128) -> FieldElement {
        let p = raw::powmod(&self.fq, &raw::trimmed(a.coeffs.clone()), e, &self.modulus);
        let mut v = p;
        v.resize(self.n, 0);
        self.wrap(v)
    }

    /// `a^k`; negative `k` goes through the inverse. `0^0 = 1`.
    pub fn pow(&self, a: &FieldElement, k: i128) -> Result<FieldElement> {
        self.check(a)?;
        if k >= 0 {
            return Ok(self.pow_unchecked(a, k as u128));
        }
        let ia = self.inv(a)?;
        Ok(self.pow_unchecked(&ia, k.unsigned_abs()))
    }

    /// Dispatches one of the element operations. `b` is ignored by `Pow`
    /// and `Inv`.
    pub fn elem_arith(&self, a: &FieldElement, b: &FieldElement, op: ElemOp) -> Result<FieldElement> {
        match op {
            ElemOp::Add => self.add(a, b),
            ElemOp::Sub => self.sub(a, b),
            ElemOp::Mul => self.mul(a, b),
            ElemOp::Div => self.div(a, b),
            ElemOp::Pow(k) => self.pow(a, k),
            ElemOp::Inv => self.inv(a),
        }
    }

    fn frobenius_once(&self, a: &[u32]) -> Vec<u32> {
        let fq = &self.fq;
        let mut out = vec![0u32; self.n];
        for (i, &c) in a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &m) in out.iter_mut().zip(&self.frob[i]) {
                *o = fq.add(*o, fq.mul(c, m));
            }
        }
        out
    }

    /// `a^(q^i)`.
    pub fn frobenius(&self, a: &FieldElement, i: u64) -> Result<FieldElement> {
        self.check(a)?;
        let mut v = a.coeffs.clone();
        for _ in 0..i % self.n as u64 {
            v = self.frobenius_once(&v);
        }
        Ok(self.wrap(v))
    }

    /// The conjugates `a, a^q, ..., a^(q^(n-1))` as coefficient vectors.
    pub fn frobenius_orbit(&self, a: &FieldElement) -> Result<Vec<Vec<u32>>> {
        self.check(a)?;
        let mut out = Vec::with_capacity(self.n);
        let mut v = a.coeffs.clone();
        for _ in 0..self.n {
            let next = self.frobenius_once(&v);
            out.push(v);
            v = next;
        }
        Ok(out)
    }

    /// Trace from F_{q^n} to F_q.
    pub fn trace_to_fq(&self, a: &FieldElement) -> Result<u32> {
        let orbit = self.frobenius_orbit(a)?;
        let mut acc = vec![0u32; self.n];
        for v in orbit {
            for (o, x) in acc.iter_mut().zip(v) {
                *o = self.fq.add(*o, x);
            }
        }
        debug_assert!(acc[1..].iter().all(|&c| c == 0));
        Ok(acc[0])
    }

    /// Absolute trace down to F_p.
    pub fn trace_abs(&self, a: &FieldElement) -> Result<u32> {
        Ok(self.fq.trace(self.trace_to_fq(a)?))
    }

    /// Multiplicative order by exponent reduction over the factorization of
    /// `q^n - 1`.
    pub fn mult_order(&self, a: &FieldElement) -> Result<u128> {
        self.check(a)?;
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let fact = self.fact_qn_minus_1()?;
        let one = self.one();
        let mut ord = self.size - 1;
        for (p, _) in fact.factors() {
            let p = p.to_u128().expect("prime below q^n");
            while ord.is_multiple_of(p) && self.pow_unchecked(a, ord / p) == one {
                ord /= p;
            }
        }
        Ok(ord)
    }

    /// First element in enumeration order of order `q^n - 1`.
    pub fn find_primitive(&self) -> Result<FieldElement> {
        self.primitive
            .get_or_init(|| {
                let target = self.size - 1;
                for idx in 1..self.size {
                    let a = self.from_index(idx);
                    if self.mult_order(&a)? == target {
                        return Ok(a);
                    }
                }
                unreachable!("the multiplicative group is cyclic")
            })
            .clone()
    }

    /// Discrete logarithm by baby-step/giant-step.
    pub fn dlog(&self, a: &FieldElement, base: &FieldElement) -> Result<u128> {
        self.dlog_with_ceiling(a, base, DEFAULT_DLOG_CEILING_BITS)
    }

    pub fn dlog_with_ceiling(
        &self,
        a: &FieldElement,
        base: &FieldElement,
        ceiling_bits: u32,
    ) -> Result<u128> {
        self.check2(a, base)?;
        if self.size > 1u128 << ceiling_bits {
            return Err(Error::DlogTooLarge {
                size: self.size.to_string(),
                ceiling_bits,
            });
        }
        if a.is_zero() || base.is_zero() {
            return Err(Error::ZeroElement);
        }
        let order = self.size - 1;
        let m = (order as f64).sqrt().ceil() as u128;
        let mut baby: HashMap<u128, u128> = HashMap::with_capacity(m as usize);
        let mut cur = self.one();
        for j in 0..m {
            baby.entry(self.index(&cur)).or_insert(j);
            cur = self.mul_unchecked(&cur, base);
        }
        let giant = self.pow(base, -(m as i128))?;
        let mut gamma = a.clone();
        for i in 0..=m {
            if let Some(&j) = baby.get(&self.index(&gamma)) {
                return Ok((i * m + j) % order);
            }
            gamma = self.mul_unchecked(&gamma, &giant);
        }
        Err(Error::InvalidArgument("base does not generate the element".into()))
    }

    /// Element literal: comma-separated F_q coefficients, constant term
    /// first, each a dash-separated list of F_p residues (constant digit
    /// first).
    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let coeffs = super::parse::parse_fq_list(&self.fq, s)?;
        self.element(&coeffs)
    }

    pub fn format_element(&self, a: &FieldElement) -> String {
        raw::to_literal(&self.fq, &a.coeffs)
    }

    /// Describes the tower for reports.
    pub fn describe(&self) -> String {
        format!(
            "F_{}^{} = F_{}[y]/({}), F_q^{} = F_q[x]/({})",
            self.p(),
            self.t(),
            self.p(),
            raw::to_string(&Fq::prime(self.p() as u64).unwrap(), self.fq.modulus()).replace('x', "y"),
            self.n,
            raw::to_string(&self.fq, &self.modulus)
        )
    }

    /// `q^n - 1` as a big integer.
    pub fn group_order(&self) -> BigUint {
        BigUint::from(self.size - 1)
    }

    /// Whether `r` divides `q^n - 1`.
    pub fn divides_group_order(&self, r: u128) -> bool {
        r != 0 && (self.size - 1).is_multiple_of(r)
    }
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldCtx({})", self.describe())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use crate::intarith::factor_u64;
    use num_traits::One;

    fn field(p: u64, t: u32, n: usize) -> Arc<FieldCtx> {
        make_field(p, t, n, &Overrides::default()).unwrap()
    }

    fn all(ctx: &FieldCtx) -> impl Iterator<Item = FieldElement> + '_ {
        (0..ctx.size()).map(|i| ctx.from_index(i))
    }

    #[test]
    fn make_field_examples() {
        let f8 = field(2, 1, 3);
        assert_eq!(f8.ext_modulus(), &[1, 1, 0, 1]);
        assert_eq!(field(2, 2, 5).size(), 1024);
        assert_eq!(field(3, 1, 4).size(), 81);
        assert_eq!(
            make_field(6, 1, 2, &Overrides::default()).unwrap_err(),
            Error::NotPrime(6)
        );
        let bad = Overrides {
            base: None,
            ext: Some(vec![1, 0, 0, 1]),
        };
        assert!(matches!(make_field(2, 1, 3, &bad), Err(Error::ReducibleModulus(_))));
        let good = Overrides {
            base: None,
            ext: Some(vec![1, 0, 1, 1]),
        };
        assert_eq!(make_field(2, 1, 3, &good).unwrap().ext_modulus(), &[1, 0, 1, 1]);
    }

    #[test]
    fn canonical_modulus_is_first_irreducible() {
        // oracle: scan monic polynomials in counting order, irreducible iff no roots
        // (degree 3) over F_2
        let f8 = field(2, 1, 3);
        let fq = f8.fq();
        let first = (0u32..8)
            .map(|i| vec![i & 1, i >> 1 & 1, i >> 2 & 1, 1])
            .find(|f| (0..2).all(|v| raw::eval(fq, f, v) != 0))
            .unwrap();
        assert_eq!(f8.ext_modulus(), &first[..]);
    }

    #[test]
    fn inverse_and_lagrange() {
        for ctx in [field(2, 1, 3), field(3, 1, 3), field(2, 2, 3)] {
            let one = ctx.one();
            assert_eq!(ctx.inv(&one).unwrap(), one);
            for a in all(&ctx).skip(1) {
                let ia = ctx.inv(&a).unwrap();
                assert_eq!(ctx.mul(&a, &ia).unwrap(), one);
                assert_eq!(ctx.pow(&a, (ctx.size() - 1) as i128).unwrap(), one);
                assert_eq!(ctx.pow(&a, -1).unwrap(), ia);
                assert_eq!(
                    ctx.pow(&a, -3).unwrap(),
                    ctx.inv(&ctx.pow(&a, 3).unwrap()).unwrap()
                );
            }
            assert_eq!(ctx.inv(&ctx.zero()).unwrap_err(), Error::DivisionByZero);
        }
    }

    #[test]
    fn ctx_mismatch_detected() {
        let a = field(2, 1, 3);
        let b = field(2, 1, 4);
        assert_eq!(a.add(&a.one(), &b.one()).unwrap_err(), Error::CtxMismatch);
        // identical parameters give interoperable contexts
        let a2 = field(2, 1, 3);
        assert!(a.add(&a.one(), &a2.one()).is_ok());
    }

    #[test]
    fn elem_arith_dispatch() {
        let ctx = field(3, 1, 2);
        let a = ctx.element(&[1, 2]).unwrap();
        let b = ctx.element(&[2, 2]).unwrap();
        let s = ctx.elem_arith(&a, &b, ElemOp::Add).unwrap();
        assert_eq!(s.coeffs(), &[0, 1]);
        let d = ctx.elem_arith(&a, &b, ElemOp::Div).unwrap();
        assert_eq!(ctx.mul(&d, &b).unwrap(), a);
        let z = ctx.zero();
        assert_eq!(ctx.elem_arith(&a, &z, ElemOp::Div).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn frobenius_properties() {
        for ctx in [field(2, 1, 3), field(2, 2, 3), field(3, 1, 4)] {
            let n = ctx.n() as u64;
            for a in all(&ctx) {
                assert_eq!(ctx.frobenius(&a, n).unwrap(), a);
                let f1 = ctx.frobenius(&a, 1).unwrap();
                assert_eq!(f1, ctx.pow(&a, ctx.q() as i128).unwrap());
                assert_eq!(ctx.frobenius(&f1, 1).unwrap(), ctx.frobenius(&a, 2).unwrap());
            }
            for c in 0..ctx.q() {
                let e = ctx.from_fq(c);
                assert_eq!(ctx.frobenius(&e, 1).unwrap(), e);
            }
            for a in all(&ctx).step_by(3) {
                for b in all(&ctx).step_by(5) {
                    let fa = ctx.frobenius(&a, 1).unwrap();
                    let fb = ctx.frobenius(&b, 1).unwrap();
                    let prod = ctx.mul(&a, &b).unwrap();
                    let sum = ctx.add(&a, &b).unwrap();
                    assert_eq!(ctx.frobenius(&prod, 1).unwrap(), ctx.mul(&fa, &fb).unwrap());
                    assert_eq!(ctx.frobenius(&sum, 1).unwrap(), ctx.add(&fa, &fb).unwrap());
                }
            }
        }
    }

    #[test]
    fn trace_properties() {
        let f8 = field(2, 1, 3);
        assert_eq!(f8.trace_abs(&f8.zero()).unwrap(), 0);
        let mut fiber = [0; 2];
        for a in all(&f8) {
            fiber[f8.trace_abs(&a).unwrap() as usize] += 1;
            for b in all(&f8) {
                let s = f8.add(&a, &b).unwrap();
                assert_eq!(
                    f8.trace_abs(&s).unwrap(),
                    (f8.trace_abs(&a).unwrap() + f8.trace_abs(&b).unwrap()) % 2
                );
            }
        }
        assert_eq!(fiber, [4, 4]);
        // the absolute trace equals the sum of p-power conjugates over the whole tower
        let ctx = field(3, 2, 2);
        for a in all(&ctx) {
            let mut acc = ctx.zero();
            let mut x = a.clone();
            for _ in 0..4 {
                acc = ctx.add(&acc, &x).unwrap();
                x = ctx.pow(&x, 3).unwrap();
            }
            assert_eq!(acc, ctx.from_fq(ctx.trace_abs(&a).unwrap()));
        }
    }

    #[test]
    fn order_census_matches_phi() {
        for (p, t, n) in [(2, 1, 3), (2, 1, 6), (3, 1, 4), (2, 2, 3), (5, 1, 3), (7, 1, 2), (2, 3, 4), (3, 2, 3)] {
            let ctx = field(p, t, n);
            let order = ctx.size() - 1;
            let mut census: HashMap<u128, u128> = HashMap::new();
            for a in all(&ctx).skip(1) {
                *census.entry(ctx.mult_order(&a).unwrap()).or_default() += 1;
            }
            for m in 1..=order {
                let expect = if order.is_multiple_of(m) {
                    factor_u64(m as u64).unwrap().phi().to_u64().unwrap() as u128
                } else {
                    0
                };
                assert_eq!(census.get(&m).copied().unwrap_or(0), expect, "({p},{t},{n}) m={m}");
            }
        }
        let f8 = field(2, 1, 3);
        assert_eq!(f8.mult_order(&f8.one()).unwrap(), 1);
        assert_eq!(f8.mult_order(&f8.zero()).unwrap_err(), Error::ZeroElement);
    }

    #[test]
    fn order_of_square() {
        let ctx = field(3, 1, 4);
        for a in all(&ctx).skip(1) {
            let o = ctx.mult_order(&a).unwrap();
            let sq = ctx.pow(&a, 2).unwrap();
            assert_eq!(ctx.mult_order(&sq).unwrap(), o / o.gcd(&2));
        }
    }

    #[test]
    fn dlog_roundtrip_f64() {
        let ctx = field(2, 1, 6);
        let g = ctx.find_primitive().unwrap();
        assert_eq!(ctx.mult_order(&g).unwrap(), 63);
        assert_eq!(ctx.dlog(&ctx.one(), &g).unwrap(), 0);
        assert_eq!(ctx.dlog(&g, &g).unwrap(), 1);
        for a in all(&ctx).skip(1) {
            let e = ctx.dlog(&a, &g).unwrap();
            assert!(e < 63);
            assert_eq!(ctx.pow(&g, e as i128).unwrap(), a);
        }
        let big = field(2, 1, 30);
        let g = big.one();
        assert!(matches!(big.dlog(&g, &g), Err(Error::DlogTooLarge { .. })));
    }

    #[test]
    fn first_primitive_is_first_in_order() {
        let ctx = field(3, 1, 2);
        let g = ctx.find_primitive().unwrap();
        for i in 1..ctx.index(&g) {
            assert!(ctx.mult_order(&ctx.from_index(i)).unwrap() < 8);
        }
    }

    #[test]
    fn field_too_large() {
        assert!(matches!(
            make_field(2, 1, 128, &Overrides::default()),
            Err(Error::FieldTooLarge { .. })
        ));
        let ctx = field(2, 1, 100);
        assert!(ctx.fact_qn_minus_1().is_ok());
        assert_eq!(
            ctx.fact_qn_minus_1().unwrap().value(),
            &((BigUint::one() << 100usize) - 1u32)
        );
    }
}
