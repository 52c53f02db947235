//! The F_q[x]-module structure of F_{q^n}.
//!
//! `h∘b = sum h_i b^(q^i)` turns the additive group into a module over
//! F_q[x] annihilated by `x^n - 1`. This module provides the action, the
//! F_q-order, k-normality, the e-free/h-free tests, the decompositions of
//! `r | q^n - 1` and `g | x^n - 1`, and the membership tests for the sets
//! `Q_r^d` and `T_{g,k}^H`.
//!
//! The public predicates on [`FieldElement`] follow the definitions
//! literally (power tests and annihilator tests). [`OrdProfile`] gives the
//! same answers from a precomputed discrete log and F_q-order exponent
//! vector, for the enumeration paths.

use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ffield::{FieldCtx, FieldElement, FieldTable};
use crate::fqpoly::{xn1_of, PolyQ, Xn1};
use crate::intarith::IntFactorization;

fn check_poly(ctx: &FieldCtx, g: &PolyQ) -> Result<()> {
    if **g.fq() != **ctx.fq() {
        return Err(Error::CtxMismatch);
    }
    Ok(())
}

/// `g∘b = sum g_i b^(q^i)`.
pub fn mod_action(ctx: &FieldCtx, g: &PolyQ, b: &FieldElement) -> Result<FieldElement> {
    check_poly(ctx, g)?;
    ctx.check(b)?;
    let mut acc = ctx.zero();
    let mut conj = b.clone();
    for (i, &c) in g.coeffs().iter().enumerate() {
        if i > 0 {
            conj = ctx.frobenius(&conj, 1)?;
        }
        if c != 0 {
            acc = ctx.add_unchecked(&acc, &ctx.scale(&conj, c)?);
        }
    }
    Ok(acc)
}

/// Coefficients of `m_a(x) = sum_{i=1}^{n} a^(q^(i-1)) x^(n-i)`, constant
/// term first.
pub fn m_poly(ctx: &FieldCtx, a: &FieldElement) -> Result<Vec<FieldElement>> {
    let mut orbit = Vec::with_capacity(ctx.n());
    let mut conj = a.clone();
    for _ in 0..ctx.n() {
        orbit.push(conj.clone());
        conj = ctx.frobenius(&conj, 1)?;
    }
    orbit.reverse();
    Ok(orbit)
}

fn trim_ext(v: &mut Vec<FieldElement>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// `deg gcd(m_a, x^n - 1)` computed by Euclid over F_{q^n}[x]. The zero
/// element gives `n`.
pub fn m_poly_gcd_degree(ctx: &FieldCtx, a: &FieldElement) -> Result<usize> {
    let n = ctx.n();
    let mut f: Vec<FieldElement> = (0..=n).map(|_| ctx.zero()).collect();
    f[0] = ctx.neg(&ctx.one())?;
    f[n] = ctx.add(&f[n], &ctx.one())?;
    let mut g = m_poly(ctx, a)?;
    trim_ext(&mut f);
    trim_ext(&mut g);
    while !g.is_empty() {
        // f <- f mod g
        let lead_inv = ctx.inv(g.last().unwrap())?;
        while f.len() >= g.len() {
            let shift = f.len() - g.len();
            let c = ctx.mul(f.last().unwrap(), &lead_inv)?;
            for (j, gj) in g.iter().enumerate() {
                let t = ctx.mul(&c, gj)?;
                f[shift + j] = ctx.sub(&f[shift + j], &t)?;
            }
            trim_ext(&mut f);
            if f.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut f, &mut g);
    }
    Ok(f.len() - 1)
}

/// Exponent vector of the F_q-order over the factors of `x^n - 1`.
pub fn fq_order_exps(ctx: &FieldCtx, a: &FieldElement) -> Result<Vec<u32>> {
    let xn1 = xn1_of(ctx);
    Ok(xn1.ord_exps(&ctx.frobenius_orbit(a)?))
}

/// Least-degree monic divisor `h` of `x^n - 1` with `h∘a = 0`; `1` for zero.
pub fn fq_order(ctx: &FieldCtx, a: &FieldElement) -> Result<PolyQ> {
    let xn1 = xn1_of(ctx);
    Ok(xn1.poly_of(&fq_order_exps(ctx, a)?))
}

/// `k` such that `a` is k-normal, `n - deg Ord(a)`.
pub fn k_normality(ctx: &FieldCtx, a: &FieldElement) -> Result<usize> {
    ctx.check(a)?;
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    Ok(ctx.n() - fq_order(ctx, a)?.deg())
}

fn group_order(ctx: &FieldCtx) -> u128 {
    ctx.size() - 1
}

fn as_divisor(ctx: &FieldCtx, e: &BigUint) -> Result<u128> {
    let m = group_order(ctx);
    match e.to_u128() {
        Some(v) if v != 0 && m.is_multiple_of(v) => Ok(v),
        _ => Err(Error::NotADivisor(e.to_string(), m.to_string())),
    }
}

/// `a^((q^n-1)/m) = 1`, i.e. `a` is an m-th power (for `m | q^n - 1`).
fn is_power(ctx: &FieldCtx, a: &FieldElement, m: u128) -> bool {
    ctx.pow_unchecked(a, group_order(ctx) / m) == ctx.one()
}

/// e-free: `gcd(e, (q^n-1)/ord(b)) = 1`.
pub fn is_e_free(ctx: &FieldCtx, b: &FieldElement, e: &BigUint) -> Result<bool> {
    let e = as_divisor(ctx, e)?;
    ctx.check(b)?;
    if b.is_zero() {
        return Err(Error::ZeroElement);
    }
    let ord = ctx.mult_order(b)?;
    Ok(e.gcd(&(group_order(ctx) / ord)) == 1)
}

/// h-free: `gcd(h, (x^n-1)/Ord(b)) = 1`.
pub fn is_h_free(ctx: &FieldCtx, b: &FieldElement, h: &PolyQ) -> Result<bool> {
    check_poly(ctx, h)?;
    let xn1 = xn1_of(ctx);
    let he = xn1.exps_of(h)?;
    let ord = fq_order_exps(ctx, b)?;
    Ok(h_free_exps(&xn1.full(), &ord, &he))
}

/// Exponent form of h-freeness: every factor of `h` appears in the order
/// with full multiplicity.
pub fn h_free_exps(full: &[u32], ord: &[u32], h: &[u32]) -> bool {
    full.iter()
        .zip(ord)
        .zip(h)
        .all(|((&e, &o), &hh)| hh == 0 || o == e)
}

/// Exponent form of `a ∈ Im(m∘·)`: the order divides `(x^n-1)/m`.
pub fn in_image_exps(full: &[u32], ord: &[u32], m: &[u32]) -> bool {
    full.iter()
        .zip(ord)
        .zip(m)
        .all(|((&e, &o), &mm)| o + mm <= e)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RPart {
    pub prime: BigUint,
    pub b: u32,
    /// `p^b`
    pub delta: BigUint,
    /// `p^(b+1)`
    pub lambda: BigUint,
}

/// `r = u * prod p_j^(b_j)` with `gcd(u, (q^n-1)/u) = 1` and every
/// `p_j^(b_j+1) | q^n - 1`; `R = rad(q^n-1)/rad(r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RDecomposition {
    pub r: BigUint,
    pub u: BigUint,
    pub parts: Vec<RPart>,
    pub big_r: BigUint,
    /// Factorization of `q^n - 1` the decomposition was taken against.
    pub group: IntFactorization,
}

impl RDecomposition {
    pub fn rad_r(&self) -> BigUint {
        self.group.rad() / &self.big_r
    }

    /// `prod lambda_j`.
    pub fn lambda_product(&self) -> BigUint {
        self.parts.iter().fold(BigUint::one(), |acc, p| acc * &p.lambda)
    }

    /// Factorization of `R`.
    pub fn big_r_factorization(&self) -> IntFactorization {
        self.group
            .restrict_to_divisor(&self.big_r)
            .expect("R divides q^n - 1")
    }
}

pub fn decompose_r(r: &BigUint, group: &IntFactorization) -> Result<RDecomposition> {
    let m = group.value();
    if r.is_zero() || !(m % r).is_zero() {
        return Err(Error::NotADivisor(r.to_string(), m.to_string()));
    }
    let mut u = BigUint::one();
    let mut parts = Vec::new();
    let mut big_r = BigUint::one();
    for (p, e) in group.factors() {
        let mut b = 0;
        let mut rest = r.clone();
        while (&rest % p).is_zero() {
            rest /= p;
            b += 1;
        }
        if b == 0 {
            big_r *= p;
        } else if b == *e {
            u *= p.pow(b);
        } else {
            parts.push(RPart {
                prime: p.clone(),
                b,
                delta: p.pow(b),
                lambda: p.pow(b + 1),
            });
        }
    }
    Ok(RDecomposition {
        r: r.clone(),
        u,
        parts,
        big_r,
        group: group.clone(),
    })
}

pub fn decompose_r_ctx(ctx: &FieldCtx, r: u128) -> Result<RDecomposition> {
    decompose_r(&BigUint::from(r), ctx.fact_qn_minus_1()?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GPart {
    /// Position of `f` in the factor list of `x^n - 1`.
    pub index: usize,
    pub f: PolyQ,
    pub b: u32,
    /// `f^b`
    pub delta: PolyQ,
    /// `f^(b+1)`
    pub lambda: PolyQ,
}

/// `g = pi * prod f_i^(b_i)` with `gcd(pi, (x^n-1)/pi) = 1` and every
/// `f_i^(b_i+1) | x^n - 1`; `G = rad(x^n-1)/rad(g)`.
#[derive(Debug, Clone)]
pub struct GDecomposition {
    pub g: PolyQ,
    pub pi: PolyQ,
    pub parts: Vec<GPart>,
    pub big_g: PolyQ,
    pub g_exps: Vec<u32>,
    pub pi_exps: Vec<u32>,
    pub big_g_exps: Vec<u32>,
    pub xn1: Arc<Xn1>,
}

impl GDecomposition {
    pub fn k(&self) -> usize {
        self.g.deg()
    }

    /// `deg pi + sum deg Lambda_i`.
    pub fn degree_sum(&self) -> usize {
        self.pi.deg() + self.parts.iter().map(|p| p.lambda.deg()).sum::<usize>()
    }
}

pub fn decompose_g(g: &PolyQ, xn1: &Arc<Xn1>) -> Result<GDecomposition> {
    let g_exps = xn1.exps_of(g)?;
    let g = g.monic();
    let full = xn1.full();
    let mut pi_exps = vec![0u32; full.len()];
    let mut big_g_exps = vec![0u32; full.len()];
    let mut parts = Vec::new();
    for (i, ((f, e), &b)) in xn1.factors().iter().zip(&full).zip(&g_exps).enumerate() {
        debug_assert_eq!(*e, full[i]);
        if b == 0 {
            big_g_exps[i] = 1;
        } else if b == *e {
            pi_exps[i] = b;
        } else {
            parts.push(GPart {
                index: i,
                f: f.0.clone(),
                b,
                delta: f.0.pow(b),
                lambda: f.0.pow(b + 1),
            });
        }
    }
    Ok(GDecomposition {
        pi: xn1.poly_of(&pi_exps),
        big_g: xn1.poly_of(&big_g_exps),
        g,
        parts,
        g_exps,
        pi_exps,
        big_g_exps,
        xn1: xn1.clone(),
    })
}

fn prime_divisors_u128(d: &BigUint, group: &IntFactorization) -> Vec<u128> {
    group
        .primes()
        .filter(|p| (d % *p).is_zero())
        .map(|p| p.to_u128().expect("fits"))
        .collect()
}

/// `a ∈ Q_r^d`: d-free, an r-th power, and no `lambda_j`-th power.
pub fn in_qrd(ctx: &FieldCtx, a: &FieldElement, rd: &RDecomposition, d: &BigUint) -> Result<bool> {
    if d.is_zero() || !(&rd.big_r % d).is_zero() {
        return Err(Error::NotADivisor(d.to_string(), rd.big_r.to_string()));
    }
    ctx.check(a)?;
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    let r = rd.r.to_u128().expect("r | q^n - 1");
    if !is_power(ctx, a, r) {
        return Ok(false);
    }
    for part in &rd.parts {
        if is_power(ctx, a, part.lambda.to_u128().unwrap()) {
            return Ok(false);
        }
    }
    for l in prime_divisors_u128(d, &rd.group) {
        if is_power(ctx, a, l) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `a ∈ T_{g,k}^H`: H-free, in the image of `g∘·`, and outside the image of
/// every `Lambda_i∘·`.
pub fn in_tgkh(ctx: &FieldCtx, a: &FieldElement, gd: &GDecomposition, h: &PolyQ) -> Result<bool> {
    check_poly(ctx, h)?;
    let xn1 = &gd.xn1;
    let he = xn1.exps_of(h)?;
    if he.iter().zip(&gd.big_g_exps).any(|(&x, &y)| x > y) {
        return Err(Error::NotADivisor(h.to_string(), gd.big_g.to_string()));
    }
    let xn = xn1.poly();
    let annihilated_by_cofactor = |m: &PolyQ| -> Result<bool> {
        let co = xn.div_exact(m)?;
        Ok(mod_action(ctx, &co, a)?.is_zero())
    };
    if !is_h_free(ctx, a, h)? {
        return Ok(false);
    }
    if !annihilated_by_cofactor(&gd.g)? {
        return Ok(false);
    }
    for part in &gd.parts {
        if annihilated_by_cofactor(&part.lambda)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `a ∈ S_{g,k}`: the F_q-order of `a` is `(x^n-1)/g`.
pub fn in_sgk(ctx: &FieldCtx, a: &FieldElement, g: &PolyQ) -> Result<bool> {
    let xn1 = xn1_of(ctx);
    let ge = xn1.exps_of(g)?;
    Ok(fq_order_exps(ctx, a)? == xn1.complement(&ge))
}

/// Precomputed per-element data: discrete log and F_q-order exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdProfile {
    /// Discrete log to the table generator; `None` for zero.
    pub log: Option<u32>,
    pub ord: Vec<u32>,
}

impl OrdProfile {
    pub fn of(tb: &FieldTable, xn1: &Xn1, a: u32) -> OrdProfile {
        OrdProfile {
            log: (a != 0).then(|| tb.log(a)),
            ord: xn1.ord_exps_table(tb, &tb.orbit(a)),
        }
    }

    /// Whether the element is an m-th power (`m | q^n - 1`); zero is every power.
    #[inline]
    pub fn is_power(&self, m: u64) -> bool {
        self.log.is_none_or(|l| (l as u64).is_multiple_of(m))
    }
}

/// Integer side of `Q_r^d` reduced to divisibility of discrete logs.
#[derive(Debug, Clone)]
pub struct QrdTest {
    pub r: u64,
    pub lambdas: Vec<u64>,
    pub d_primes: Vec<u64>,
}

impl QrdTest {
    pub fn new(rd: &RDecomposition, d: &BigUint) -> Result<QrdTest> {
        if d.is_zero() || !(&rd.big_r % d).is_zero() {
            return Err(Error::NotADivisor(d.to_string(), rd.big_r.to_string()));
        }
        Ok(QrdTest {
            r: rd.r.to_u64().expect("table-sized"),
            lambdas: rd.parts.iter().map(|p| p.lambda.to_u64().unwrap()).collect(),
            d_primes: prime_divisors_u128(d, &rd.group)
                .into_iter()
                .map(|p| p as u64)
                .collect(),
        })
    }

    /// Membership for a nonzero element with discrete log `log`.
    #[inline]
    pub fn contains_log(&self, log: u32) -> bool {
        let l = log as u64;
        l.is_multiple_of(self.r)
            && self.lambdas.iter().all(|&m| !l.is_multiple_of(m))
            && self.d_primes.iter().all(|&m| !l.is_multiple_of(m))
    }
}

/// Polynomial side of `T_{g,k}^H` on exponent vectors.
#[derive(Debug, Clone)]
pub struct TgkhTest {
    pub full: Vec<u32>,
    pub g: Vec<u32>,
    /// `(index, b_i + 1)` for each `Lambda_i`.
    pub lambdas: Vec<(usize, u32)>,
    pub h: Vec<u32>,
}

impl TgkhTest {
    pub fn new(gd: &GDecomposition, h: &PolyQ) -> Result<TgkhTest> {
        let he = gd.xn1.exps_of(h)?;
        if he.iter().zip(&gd.big_g_exps).any(|(&x, &y)| x > y) {
            return Err(Error::NotADivisor(h.to_string(), gd.big_g.to_string()));
        }
        Ok(TgkhTest {
            full: gd.xn1.full(),
            g: gd.g_exps.clone(),
            lambdas: gd.parts.iter().map(|p| (p.index, p.b + 1)).collect(),
            h: he,
        })
    }

    #[inline]
    pub fn contains(&self, ord: &[u32]) -> bool {
        h_free_exps(&self.full, ord, &self.h)
            && in_image_exps(&self.full, ord, &self.g)
            && self
                .lambdas
                .iter()
                .all(|&(i, l)| ord[i] + l > self.full[i])
    }
}
