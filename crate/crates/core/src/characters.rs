//! Multiplicative and additive characters of F_{q^n} and the character-sum
//! forms of the characteristic functions for e-free, g-free, image, `Q_r^d`
//! and `T_{g,k}^H` membership.
//!
//! Values are `f64` complex numbers. Fields are capped at 2^9 elements for
//! the sums (2^12 for the additive-order test), so rounding error stays many
//! orders of magnitude below the 1e-6 comparison band.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ffield::{FieldCtx, FieldElement, FieldTable};
use crate::fqpoly::{xn1_of, PolyQ, Xn1};
use crate::intarith::{factor_u64, IntFactorization};
use crate::modstruct::{GDecomposition, RDecomposition};

/// Default size ceiling (bits) for character-sum evaluation.
pub const DEFAULT_CHAR_CEILING_BITS: u32 = 9;
/// Size ceiling (bits) for the additive-order triviality test.
pub const ADD_ORDER_CEILING_BITS: u32 = 12;

/// Tolerance when comparing a character sum with a 0/1 indicator.
pub const CHAR_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum CharKind {
    /// `a -> zeta_d^(j * dlog a)`.
    Multiplicative { d: u128, j: u128 },
    /// `a -> exp(2 pi i Tr(y a) / p)`.
    Additive { y: FieldElement },
}

#[derive(Debug, Clone)]
pub struct CharSpec {
    kind: CharKind,
    ctx: Arc<FieldCtx>,
    base: Option<FieldElement>,
}

impl CharSpec {
    pub fn multiplicative(ctx: Arc<FieldCtx>, d: u128, j: u128) -> Result<CharSpec> {
        let m = ctx.size() - 1;
        if d == 0 || !m.is_multiple_of(d) {
            return Err(Error::NotADivisor(d.to_string(), m.to_string()));
        }
        if j >= d {
            return Err(Error::InvalidArgument(format!("character index {j} not below {d}")));
        }
        let base = Some(ctx.find_primitive()?);
        Ok(CharSpec {
            kind: CharKind::Multiplicative { d, j },
            ctx,
            base,
        })
    }

    pub fn additive(ctx: Arc<FieldCtx>, y: FieldElement) -> Result<CharSpec> {
        ctx.check(&y)?;
        Ok(CharSpec {
            kind: CharKind::Additive { y },
            ctx,
            base: None,
        })
    }

    pub fn kind(&self) -> &CharKind {
        &self.kind
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }
}

fn unit_root(num: u128, den: u128) -> Complex64 {
    Complex64::from_polar(1.0, TAU * (num % den) as f64 / den as f64)
}

pub fn char_eval(spec: &CharSpec, a: &FieldElement) -> Result<Complex64> {
    let ctx = &spec.ctx;
    ctx.check(a)?;
    match &spec.kind {
        CharKind::Multiplicative { d, j } => {
            if a.is_zero() {
                return Err(Error::ZeroElement);
            }
            let l = ctx.dlog(a, spec.base.as_ref().expect("multiplicative base"))?;
            Ok(unit_root((j * (l % d)) % d, *d))
        }
        CharKind::Additive { y } => {
            let t = ctx.trace_abs(&ctx.mul(y, a)?)?;
            Ok(unit_root(t as u128, ctx.p() as u128))
        }
    }
}

fn size_check(ctx: &FieldCtx, bits: u32) -> Result<()> {
    if ctx.size() > 1u128 << bits {
        return Err(Error::FieldTooLarge {
            size: ctx.size().to_string(),
            ceiling_bits: bits,
        });
    }
    Ok(())
}

/// F_q-order of `psi_y`: the least monic divisor `g` of `x^n - 1` with
/// `psi_y(g∘b) = 1` for every `b`.
pub fn add_char_fq_order(ctx: &Arc<FieldCtx>, y: &FieldElement) -> Result<PolyQ> {
    size_check(ctx, ADD_ORDER_CEILING_BITS)?;
    let ev = CharEvaluator::with_ceiling(ctx.clone(), ADD_ORDER_CEILING_BITS)?;
    let idx = ev.tb.from_element(y)?;
    Ok(ev.xn1.poly_of(&ev.add_ord[idx as usize]))
}

/// Weights attached to the prime-power parts of `r` and the
/// polynomial-power parts of `g`.
#[derive(Debug, Clone, Default)]
pub struct CharWeights {
    /// `((p_j, e), l)` for each `e | lambda_j`.
    pub ell_int: Vec<((BigUint, BigUint), BigRational)>,
    /// `((f_i, h), l')` for each `h | Lambda_i`.
    pub ell_poly: Vec<((PolyQ, PolyQ), BigRational)>,
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

impl CharWeights {
    pub fn new(rd: Option<&RDecomposition>, gd: Option<&GDecomposition>) -> CharWeights {
        let mut w = CharWeights::default();
        if let Some(rd) = rd {
            for part in &rd.parts {
                let p = BigInt::from(part.prime.clone());
                for c in 0..=part.b + 1 {
                    let e = part.prime.pow(c);
                    let l = if e == part.lambda {
                        ratio(-BigInt::one(), p.clone())
                    } else {
                        ratio(&p - 1, p.clone())
                    };
                    w.ell_int.push(((part.prime.clone(), e), l));
                }
            }
        }
        if let Some(gd) = gd {
            let q = BigInt::from(gd.xn1.fq().q());
            for part in &gd.parts {
                let qd = q.pow(part.f.deg() as u32);
                for c in 0..=part.b + 1 {
                    let h = part.f.pow(c);
                    let l = if h == part.lambda {
                        ratio(-BigInt::one(), qd.clone())
                    } else {
                        ratio(&qd - 1, qd.clone())
                    };
                    w.ell_poly.push(((part.f.clone(), h), l));
                }
            }
        }
        w
    }

    pub fn ell_int(&self, p: &BigUint, e: &BigUint) -> Option<&BigRational> {
        self.ell_int
            .iter()
            .find(|((pp, ee), _)| pp == p && ee == e)
            .map(|(_, l)| l)
    }

    pub fn ell_poly(&self, f: &PolyQ, h: &PolyQ) -> Option<&BigRational> {
        self.ell_poly
            .iter()
            .find(|((ff, hh), _)| ff == f && hh == h)
            .map(|(_, l)| l)
    }
}

/// A characteristic function given by a character sum.
#[derive(Debug, Clone)]
pub enum CharFun {
    /// e-free elements.
    RhoE(BigUint),
    /// g-free elements.
    UpsilonG(PolyQ),
    /// Elements of the form `g∘b`.
    PsiSet(PolyQ),
    /// The set `Q_r^d`.
    GammaRd { rd: RDecomposition, d: BigUint },
    /// The set `T_{g,k}^H`.
    QgH { gd: GDecomposition, h: PolyQ },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SumKind {
    Mult,
    Add,
}

/// A character sum flattened to `scale * sum_i w_i chi_i(a)`, with each
/// character named by its index (a multiplicative index mod `q^n - 1`, or an
/// additive shift as a table index).
#[derive(Debug, Clone)]
pub struct PreparedSum {
    kind: SumKind,
    scale: f64,
    terms: Vec<(u32, f64)>,
}

impl PreparedSum {
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
}

/// Precomputed tables for evaluating character sums over one field.
pub struct CharEvaluator {
    ctx: Arc<FieldCtx>,
    tb: FieldTable,
    xn1: Arc<Xn1>,
    group: IntFactorization,
    /// Absolute trace of each element.
    tr: Vec<u32>,
    /// F_q-order exponents of `psi_y` for each shift `y`.
    add_ord: Vec<Vec<u32>>,
    by_add_ord: HashMap<Vec<u32>, Vec<u32>>,
    root_p: Vec<Complex64>,
    root_m: Vec<Complex64>,
}

impl CharEvaluator {
    pub fn new(ctx: Arc<FieldCtx>) -> Result<CharEvaluator> {
        Self::with_ceiling(ctx, DEFAULT_CHAR_CEILING_BITS)
    }

    pub fn with_ceiling(ctx: Arc<FieldCtx>, ceiling_bits: u32) -> Result<CharEvaluator> {
        size_check(&ctx, ceiling_bits)?;
        let tb = FieldTable::with_ceiling(ctx.clone(), ceiling_bits)?;
        let xn1 = xn1_of(&ctx);
        let group = ctx.fact_qn_minus_1()?.clone();
        let size = tb.size();
        let tr = (0..size)
            .map(|a| ctx.trace_abs(&tb.to_element(a)))
            .collect::<Result<Vec<_>>>()?;

        // An additive character is trivial on the submodule h∘F exactly when
        // it is trivial on h∘b for b in an F_p-basis.
        let p = ctx.p();
        let q = ctx.q();
        let basis: Vec<u32> = (0..ctx.n() as u32)
            .flat_map(|j| (0..ctx.t()).map(move |s| p.pow(s) * q.pow(j)))
            .collect();
        let orbits: Vec<Vec<u32>> = basis.iter().map(|&b| tb.orbit(b)).collect();
        let full = xn1.full();
        let images: Vec<Vec<Vec<u32>>> = full
            .iter()
            .enumerate()
            .map(|(i, &e)| {
                (0..e)
                    .map(|o| {
                        let h = xn1.annihilator_dense(i, o);
                        orbits
                            .iter()
                            .map(|orb| xn1.apply_to_orbit_table(&tb, h, orb))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let add_ord: Vec<Vec<u32>> = (0..size)
            .map(|y| {
                images
                    .iter()
                    .zip(&full)
                    .map(|(row, &e)| {
                        row.iter()
                            .position(|imgs| imgs.iter().all(|&b| tr[tb.mul(y, b) as usize] == 0))
                            .map_or(e, |o| o as u32)
                    })
                    .collect()
            })
            .collect();
        let mut by_add_ord: HashMap<Vec<u32>, Vec<u32>> = HashMap::new();
        for (y, o) in add_ord.iter().enumerate() {
            by_add_ord.entry(o.clone()).or_default().push(y as u32);
        }
        let root_p = (0..p).map(|k| unit_root(k as u128, p as u128)).collect();
        let m = tb.order() as u128;
        let root_m = (0..m).map(|k| unit_root(k, m)).collect();
        Ok(CharEvaluator {
            ctx,
            tb,
            xn1,
            group,
            tr,
            add_ord,
            by_add_ord,
            root_p,
            root_m,
        })
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn table(&self) -> &FieldTable {
        &self.tb
    }

    /// F_q-order exponents of the additive character with shift `y`.
    pub fn add_order_exps(&self, y: u32) -> &[u32] {
        &self.add_ord[y as usize]
    }

    /// Shifts `y` whose character has F_q-order with the given exponents.
    pub fn additive_of_order(&self, exps: &[u32]) -> &[u32] {
        self.by_add_ord.get(exps).map_or(&[], |v| v.as_slice())
    }

    /// Indices `j` (mod `q^n - 1`) of the characters of exact order `d`.
    pub fn multiplicative_of_order(&self, d: u64) -> Vec<u32> {
        let m = self.tb.order() as u64;
        let step = m / d;
        (0..d)
            .filter(|&j| j.gcd(&d) == 1)
            .map(|j| (j * step) as u32)
            .collect()
    }

    fn group_divisor(&self, e: &BigUint) -> Result<u64> {
        let m = self.tb.order() as u64;
        match e.to_u64() {
            Some(v) if v != 0 && m.is_multiple_of(v) => Ok(v),
            _ => Err(Error::NotADivisor(e.to_string(), m.to_string())),
        }
    }

    fn poly_exps(&self, g: &PolyQ) -> Result<Vec<u32>> {
        if **g.fq() != **self.ctx.fq() {
            return Err(Error::CtxMismatch);
        }
        self.xn1.exps_of(g)
    }

    fn phi_q(&self, exps: &[u32]) -> f64 {
        self.xn1.phi_q_of(exps).to_f64().unwrap()
    }

    fn q_pow_deg(&self, exps: &[u32]) -> f64 {
        (self.ctx.q() as f64).powi(self.xn1.degree_of(exps) as i32)
    }

    fn mu_prime(exps: &[u32]) -> f64 {
        if exps.iter().any(|&e| e > 1) {
            0.0
        } else if exps.iter().filter(|&&e| e == 1).count() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Characters of every order dividing `exps`, each with `weight(order)`.
    fn additive_component(&self, exps: &[u32], weight: impl Fn(&[u32]) -> f64) -> Vec<(u32, f64)> {
        let mut out = Vec::new();
        for h in sub_exponents(exps) {
            let w = weight(&h);
            for &y in self.additive_of_order(&h) {
                out.push((y, w));
            }
        }
        out
    }

    fn mult_component(&self, m: u64, weight: impl Fn(u64) -> f64) -> Vec<(u32, f64)> {
        let mut out = Vec::new();
        for d in divisors_u64(m) {
            let w = weight(d);
            for j in self.multiplicative_of_order(d) {
                out.push((j, w));
            }
        }
        out
    }

    fn convolve(&self, kind: SumKind, parts: Vec<Vec<(u32, f64)>>) -> Vec<(u32, f64)> {
        let m = self.tb.order() as u64;
        let mut acc = vec![(0u32, 1.0)];
        for part in parts {
            let mut next = Vec::with_capacity(acc.len() * part.len());
            for &(a, wa) in &acc {
                for &(b, wb) in &part {
                    let c = match kind {
                        SumKind::Mult => ((a as u64 + b as u64) % m) as u32,
                        SumKind::Add => self.tb.add(a, b),
                    };
                    next.push((c, wa * wb));
                }
            }
            acc = next;
        }
        acc
    }

    pub fn prepare(&self, which: &CharFun) -> Result<PreparedSum> {
        match which {
            CharFun::RhoE(e) => {
                let e = self.group_divisor(e)?;
                let fe = factor_u64(e)?;
                let terms = self.mult_component(e, |d| {
                    let fd = factor_u64(d).unwrap();
                    fd.moebius() as f64 / fd.phi().to_f64().unwrap()
                });
                Ok(PreparedSum {
                    kind: SumKind::Mult,
                    scale: fe.phi().to_f64().unwrap() / e as f64,
                    terms,
                })
            }
            CharFun::GammaRd { rd, d } => {
                if rd.group != self.group {
                    return Err(Error::CtxMismatch);
                }
                if d.is_zero() || !(&rd.big_r % d).is_zero() {
                    return Err(Error::NotADivisor(d.to_string(), rd.big_r.to_string()));
                }
                let d = d.to_u64().unwrap();
                let r = rd.r.to_u64().unwrap();
                let u = rd.u.to_u64().unwrap();
                let mut parts = vec![
                    self.mult_component(d, |d1| {
                        let f = factor_u64(d1).unwrap();
                        f.moebius() as f64 / f.phi().to_f64().unwrap()
                    }),
                    self.mult_component(u, |_| 1.0),
                ];
                for part in &rd.parts {
                    let p = part.prime.to_f64().unwrap();
                    let lambda = part.lambda.to_u64().unwrap();
                    parts.push(self.mult_component(lambda, |e| {
                        if e == lambda {
                            -1.0 / p
                        } else {
                            1.0 - 1.0 / p
                        }
                    }));
                }
                let phi_d = factor_u64(d)?.phi().to_f64().unwrap();
                Ok(PreparedSum {
                    kind: SumKind::Mult,
                    scale: phi_d / (r as f64 * d as f64),
                    terms: self.convolve(SumKind::Mult, parts),
                })
            }
            CharFun::UpsilonG(g) => {
                let ge = self.poly_exps(g)?;
                let terms =
                    self.additive_component(&ge, |h| Self::mu_prime(h) / self.phi_q(h));
                Ok(PreparedSum {
                    kind: SumKind::Add,
                    scale: self.phi_q(&ge) / self.q_pow_deg(&ge),
                    terms,
                })
            }
            CharFun::PsiSet(g) => {
                let ge = self.poly_exps(g)?;
                Ok(PreparedSum {
                    kind: SumKind::Add,
                    scale: 1.0 / self.q_pow_deg(&ge),
                    terms: self.additive_component(&ge, |_| 1.0),
                })
            }
            CharFun::QgH { gd, h } => {
                if **gd.xn1.fq() != **self.ctx.fq() || gd.xn1.n() != self.ctx.n() {
                    return Err(Error::CtxMismatch);
                }
                let he = self.poly_exps(h)?;
                if he.iter().zip(&gd.big_g_exps).any(|(&x, &y)| x > y) {
                    return Err(Error::NotADivisor(h.to_string(), gd.big_g.to_string()));
                }
                let mut parts = vec![
                    self.additive_component(&he, |g1| Self::mu_prime(g1) / self.phi_q(g1)),
                    self.additive_component(&gd.pi_exps, |_| 1.0),
                ];
                let q = self.ctx.q() as f64;
                for part in &gd.parts {
                    let mut lambda = vec![0u32; he.len()];
                    lambda[part.index] = part.b + 1;
                    let qd = q.powi(part.f.deg() as i32);
                    parts.push(self.additive_component(&lambda, |h| {
                        if h == lambda.as_slice() {
                            -1.0 / qd
                        } else {
                            1.0 - 1.0 / qd
                        }
                    }));
                }
                let deg = self.xn1.degree_of(&he) + self.xn1.degree_of(&gd.g_exps);
                Ok(PreparedSum {
                    kind: SumKind::Add,
                    scale: self.phi_q(&he) / q.powi(deg as i32),
                    terms: self.convolve(SumKind::Add, parts),
                })
            }
        }
    }

    /// Evaluates a prepared sum at the table element `a`.
    pub fn eval_prepared(&self, sum: &PreparedSum, a: u32) -> Result<Complex64> {
        let mut acc = Complex64::zero();
        match sum.kind {
            SumKind::Mult => {
                if a == 0 {
                    return Err(Error::ZeroElement);
                }
                let m = self.tb.order() as u64;
                let l = self.tb.log(a) as u64;
                for &(j, w) in &sum.terms {
                    acc += self.root_m[(j as u64 * l % m) as usize] * w;
                }
            }
            SumKind::Add => {
                for &(y, w) in &sum.terms {
                    acc += self.root_p[self.tr[self.tb.mul(y, a) as usize] as usize] * w;
                }
            }
        }
        Ok(acc * sum.scale)
    }

    pub fn eval(&self, which: &CharFun, a: &FieldElement) -> Result<Complex64> {
        let sum = self.prepare(which)?;
        let a = self.tb.from_element(a)?;
        self.eval_prepared(&sum, a)
    }
}

/// Literal character-sum value of `which` at `a`.
pub fn eval_charfun(ctx: &Arc<FieldCtx>, which: &CharFun, a: &FieldElement) -> Result<Complex64> {
    CharEvaluator::new(ctx.clone())?.eval(which, a)
}

/// Rounds a character-sum value to an indicator when it lies within the
/// tolerance band of 0 or 1.
pub fn as_indicator(v: Complex64) -> Option<bool> {
    if v.im.abs() >= CHAR_TOLERANCE {
        return None;
    }
    if (v.re - 1.0).abs() < CHAR_TOLERANCE {
        Some(true)
    } else if v.re.abs() < CHAR_TOLERANCE {
        Some(false)
    } else {
        None
    }
}

/// All exponent vectors componentwise at most `exps`.
fn sub_exponents(exps: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(exps.len())];
    for &e in exps {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=e).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

fn divisors_u64(m: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=m.isqrt())
        .filter(|d| m.is_multiple_of(*d))
        .flat_map(|d| [d, m / d])
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::{desk_fields, make_field, Overrides};
    use crate::fqpoly::DivisorFilter;
    use num_traits::Signed;
    use crate::modstruct::{
        decompose_g, decompose_r, in_qrd, in_tgkh, is_e_free, is_h_free, mod_action,
    };

    fn field(p: u64, t: u32, n: usize) -> Arc<FieldCtx> {
        make_field(p, t, n, &Overrides::default()).unwrap()
    }

    fn close(a: Complex64, b: f64) -> bool {
        (a - b).norm() < CHAR_TOLERANCE
    }

    #[test]
    fn trivial_characters_are_one() {
        let ctx = field(2, 2, 2);
        let chi = CharSpec::multiplicative(ctx.clone(), 1, 0).unwrap();
        let psi = CharSpec::additive(ctx.clone(), ctx.zero()).unwrap();
        for i in 1..ctx.size() {
            let a = ctx.from_index(i);
            assert!(close(char_eval(&chi, &a).unwrap(), 1.0));
            assert!(close(char_eval(&psi, &a).unwrap(), 1.0));
        }
        assert_eq!(char_eval(&chi, &ctx.zero()).unwrap_err(), Error::ZeroElement);
    }

    #[test]
    fn first_orthogonality_f16() {
        let ctx = field(2, 1, 4);
        for d in [3u128, 5, 15] {
            for j in 1..d {
                let chi = CharSpec::multiplicative(ctx.clone(), d, j).unwrap();
                let s: Complex64 = (1..16)
                    .map(|i| char_eval(&chi, &ctx.from_index(i)).unwrap())
                    .sum();
                assert!(s.norm() < 1e-9);
            }
        }
        for y in 1..16 {
            let psi = CharSpec::additive(ctx.clone(), ctx.from_index(y)).unwrap();
            let s: Complex64 = (0..16)
                .map(|i| char_eval(&psi, &ctx.from_index(i)).unwrap())
                .sum();
            assert!(s.norm() < 1e-9);
        }
    }

    #[test]
    fn homomorphism_samples() {
        let ctx = field(3, 1, 3);
        let chi = CharSpec::multiplicative(ctx.clone(), 26, 5).unwrap();
        let psi = CharSpec::additive(ctx.clone(), ctx.from_index(7)).unwrap();
        for i in (1..27).step_by(4) {
            for j in (1..27).step_by(5) {
                let a = ctx.from_index(i);
                let b = ctx.from_index(j);
                let ab = ctx.mul(&a, &b).unwrap();
                let lhs = char_eval(&chi, &ab).unwrap();
                let rhs = char_eval(&chi, &a).unwrap() * char_eval(&chi, &b).unwrap();
                assert!((lhs - rhs).norm() < 1e-9);
                let s = ctx.add(&a, &b).unwrap();
                let lhs = char_eval(&psi, &s).unwrap();
                let rhs = char_eval(&psi, &a).unwrap() * char_eval(&psi, &b).unwrap();
                assert!((lhs - rhs).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn spec_errors() {
        let ctx = field(2, 1, 3);
        assert!(matches!(
            CharSpec::multiplicative(ctx.clone(), 3, 1),
            Err(Error::NotADivisor(..))
        ));
        assert!(CharSpec::multiplicative(ctx.clone(), 7, 7).is_err());
        let big = field(2, 1, 13);
        assert!(matches!(
            add_char_fq_order(&big, &big.one()),
            Err(Error::FieldTooLarge { .. })
        ));
        assert!(matches!(
            CharEvaluator::new(field(2, 1, 10)),
            Err(Error::FieldTooLarge { .. })
        ));
    }

    /// Least annihilating divisor found by checking every `b`.
    fn add_order_oracle(ctx: &FieldCtx, y: &FieldElement) -> PolyQ {
        let xn1 = xn1_of(ctx);
        let mut divs = xn1.divisors(DivisorFilter::AllMonic, 1 << 20).unwrap();
        divs.sort_by_key(|e| xn1.degree_of(e));
        for e in divs {
            let g = xn1.poly_of(&e);
            let trivial = (0..ctx.size()).all(|i| {
                let b = mod_action(ctx, &g, &ctx.from_index(i)).unwrap();
                ctx.trace_abs(&ctx.mul(y, &b).unwrap()).unwrap() == 0
            });
            if trivial {
                return g;
            }
        }
        unreachable!()
    }

    #[test]
    fn additive_orders_f8_census() {
        let ctx = field(2, 1, 3);
        assert!(add_char_fq_order(&ctx, &ctx.zero()).unwrap().is_one());
        let xn1 = xn1_of(&ctx);
        let mut counts: HashMap<String, u128> = HashMap::new();
        for i in 0..8 {
            let y = ctx.from_index(i);
            let o = add_char_fq_order(&ctx, &y).unwrap();
            assert_eq!(o, add_order_oracle(&ctx, &y));
            *counts.entry(o.to_string()).or_default() += 1;
        }
        let mut total = 0;
        for e in xn1.divisors(DivisorFilter::AllMonic, 1 << 20).unwrap() {
            let phi = xn1.phi_q_of(&e).to_u128().unwrap();
            assert_eq!(counts.get(&xn1.poly_of(&e).to_string()).copied().unwrap_or(0), phi);
            total += phi;
        }
        assert_eq!(total, 8);
    }

    #[test]
    fn additive_order_census_matches_phi() {
        for ctx in [field(3, 1, 3), field(2, 1, 4), field(2, 2, 2), field(2, 1, 6)] {
            let ev = CharEvaluator::with_ceiling(ctx.clone(), 12).unwrap();
            let xn1 = xn1_of(&ctx);
            for e in xn1.divisors(DivisorFilter::AllMonic, 1 << 20).unwrap() {
                assert_eq!(
                    ev.additive_of_order(&e).len() as u128,
                    xn1.phi_q_of(&e).to_u128().unwrap()
                );
            }
            for y in (0..ev.table().size()).step_by(5) {
                assert_eq!(
                    xn1.poly_of(ev.add_order_exps(y)),
                    add_order_oracle(&ctx, &ev.table().to_element(y))
                );
            }
        }
    }

    #[test]
    fn eq_examples_f8() {
        let ctx = field(2, 1, 3);
        let fq = ctx.fq().clone();
        let ev = CharEvaluator::new(ctx.clone()).unwrap();
        let g = ctx.find_primitive().unwrap();
        let rho = CharFun::RhoE(BigUint::from(7u32));
        assert!(close(ev.eval(&rho, &g).unwrap(), 1.0));
        let xn = PolyQ::x_n_minus_1(fq.clone(), 3);
        let up = CharFun::UpsilonG(xn.clone());
        let psi = CharFun::PsiSet(PolyQ::x_minus_1(fq.clone()));
        for i in 0..8 {
            let a = ctx.from_index(i);
            let normal = !a.is_zero() && crate::modstruct::k_normality(&ctx, &a).unwrap() == 0;
            let v = ev.eval(&up, &a).unwrap();
            assert!(close(v, normal as u8 as f64), "{a:?} {v}");
            let image = (0..8).any(|j| {
                mod_action(&ctx, &PolyQ::x_minus_1(fq.clone()), &ctx.from_index(j)).unwrap() == a
            });
            assert!(close(ev.eval(&psi, &a).unwrap(), image as u8 as f64));
        }
    }

    #[test]
    fn weights_bounded_by_first() {
        let ctx = field(2, 1, 12);
        let xn1 = xn1_of(&ctx);
        let group = ctx.fact_qn_minus_1().unwrap().clone();
        for ge in xn1.divisors(DivisorFilter::AllMonic, 1 << 20).unwrap() {
            let gd = decompose_g(&xn1.poly_of(&ge), &xn1).unwrap();
            let rd = decompose_r(&BigUint::from(3u32), &group).unwrap();
            let w = CharWeights::new(Some(&rd), Some(&gd));
            for ((f, _), l) in &w.ell_poly {
                let first = w.ell_poly(f, &PolyQ::one(ctx.fq().clone())).unwrap();
                assert!(l.abs() <= *first);
            }
            for ((p, _), l) in &w.ell_int {
                assert!(l.abs() <= *w.ell_int(p, &BigUint::one()).unwrap());
            }
        }
    }

    /// Second orthogonality: summing all characters at `a` gives the group
    /// order when `a` is the identity and zero otherwise.
    #[test]
    fn second_orthogonality_up_to_2_8() {
        for (p, t, n) in desk_fields(1 << 8) {
            let ctx = field(p, t, n);
            let ev = CharEvaluator::new(ctx.clone()).unwrap();
            let tb = ev.table();
            let m = tb.order() as u64;
            let all_mult: Vec<u32> = divisors_u64(m)
                .into_iter()
                .flat_map(|d| ev.multiplicative_of_order(d))
                .collect();
            assert_eq!(all_mult.len() as u64, m);
            let sum = PreparedSum {
                kind: SumKind::Mult,
                scale: 1.0,
                terms: all_mult.into_iter().map(|j| (j, 1.0)).collect(),
            };
            let add = PreparedSum {
                kind: SumKind::Add,
                scale: 1.0,
                terms: (0..tb.size()).map(|y| (y, 1.0)).collect(),
            };
            for a in 0..tb.size() {
                if a != 0 {
                    let v = ev.eval_prepared(&sum, a).unwrap();
                    let want = if a == 1 { m as f64 } else { 0.0 };
                    assert!((v - want).norm() < 1e-6, "{p}^{t}:{n} a={a} {v}");
                }
                let v = ev.eval_prepared(&add, a).unwrap();
                let want = if a == 0 { tb.size() as f64 } else { 0.0 };
                assert!((v - want).norm() < 1e-6);
            }
        }
    }

    #[test]
    fn sums_match_indicators_small_fields() {
        for (p, t, n) in [(2, 1, 3), (3, 1, 2), (2, 1, 4), (3, 1, 3), (2, 2, 2), (5, 1, 2)] {
            let ctx = field(p, t, n);
            let ev = CharEvaluator::new(ctx.clone()).unwrap();
            let xn1 = xn1_of(&ctx);
            let group = ctx.fact_qn_minus_1().unwrap().clone();
            let elems: Vec<FieldElement> = (0..ctx.size()).map(|i| ctx.from_index(i)).collect();
            for e in group.divisors() {
                let s = ev.prepare(&CharFun::RhoE(e.clone())).unwrap();
                for (i, a) in elems.iter().enumerate().skip(1) {
                    let v = ev.eval_prepared(&s, i as u32).unwrap();
                    assert_eq!(as_indicator(v), Some(is_e_free(&ctx, a, &e).unwrap()));
                }
            }
            for r in group.divisors() {
                let rd = decompose_r(&r, &group).unwrap();
                for d in rd.big_r_factorization().divisors() {
                    let s = ev
                        .prepare(&CharFun::GammaRd { rd: rd.clone(), d: d.clone() })
                        .unwrap();
                    for (i, a) in elems.iter().enumerate().skip(1) {
                        let v = ev.eval_prepared(&s, i as u32).unwrap();
                        assert_eq!(as_indicator(v), Some(in_qrd(&ctx, a, &rd, &d).unwrap()));
                    }
                }
            }
            for ge in xn1.divisors(DivisorFilter::AllMonic, 1 << 20).unwrap() {
                let g = xn1.poly_of(&ge);
                let sg = ev.prepare(&CharFun::UpsilonG(g.clone())).unwrap();
                let gd = decompose_g(&g, &xn1).unwrap();
                for (i, a) in elems.iter().enumerate() {
                    let v = ev.eval_prepared(&sg, i as u32).unwrap();
                    assert_eq!(as_indicator(v), Some(is_h_free(&ctx, a, &g).unwrap()));
                }
                for h in crate::fqpoly::divisors_of(&gd.big_g, DivisorFilter::AllMonic).unwrap() {
                    let s = ev.prepare(&CharFun::QgH { gd: gd.clone(), h: h.clone() }).unwrap();
                    for (i, a) in elems.iter().enumerate() {
                        let v = ev.eval_prepared(&s, i as u32).unwrap();
                        assert_eq!(as_indicator(v), Some(in_tgkh(&ctx, a, &gd, &h).unwrap()));
                    }
                }
            }
        }
    }
}
