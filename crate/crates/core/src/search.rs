//! Exhaustive searches and censuses over small fields.
//!
//! Every scan runs over table indices (counting order, constant coefficient
//! fastest) and is split across the rayon pool; the reported witness is
//! always the lowest index that qualifies, so results do not depend on the
//! number of workers.

use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ffield::{make_field, prime_power, FieldCtx, FieldElement, FieldTable, Overrides};
use crate::fqpoly::{xn1_of, PolyQ, Xn1};
use crate::modstruct::{
    decompose_g, decompose_r_ctx, h_free_exps, k_normality, m_poly_gcd_degree, OrdProfile,
    QrdTest, TgkhTest,
};

pub const DEFAULT_SEARCH_CEILING_BITS: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Largest field searched is `2^ceiling_bits` elements.
    pub ceiling_bits: u32,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            ceiling_bits: DEFAULT_SEARCH_CEILING_BITS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchStats {
    /// Enumeration positions up to and including the witness, or the whole
    /// range when nothing was found.
    pub scanned: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub found: bool,
    pub witness: Option<FieldElement>,
    /// For the trace-image sweep, the `beta` that produced the witness.
    pub preimage: Option<FieldElement>,
    pub stats: SearchStats,
}

/// A field with its log tables and the factorization of `x^n - 1`.
pub struct SearchField {
    pub ctx: Arc<FieldCtx>,
    pub table: FieldTable,
    pub xn1: Arc<Xn1>,
}

impl SearchField {
    pub fn new(q: u64, n: u32, opts: &SearchOptions) -> Result<SearchField> {
        let (p, t) = prime_power(q).ok_or(Error::NotPrime(q))?;
        let too_large = || Error::FieldTooLarge {
            size: format!("{q}^{n}"),
            ceiling_bits: opts.ceiling_bits,
        };
        let size = (q as u128).checked_pow(n).ok_or_else(too_large)?;
        if size > 1u128 << opts.ceiling_bits.min(31) {
            return Err(too_large());
        }
        let ctx = make_field(p, t, n as usize, &Overrides::default())?;
        Self::from_ctx(ctx, opts)
    }

    pub fn from_ctx(ctx: Arc<FieldCtx>, opts: &SearchOptions) -> Result<SearchField> {
        let table = FieldTable::with_ceiling(ctx.clone(), opts.ceiling_bits)?;
        let xn1 = xn1_of(&ctx);
        Ok(SearchField { ctx, table, xn1 })
    }

    pub fn size(&self) -> u32 {
        self.table.size()
    }

    pub fn ord_exps(&self, a: u32) -> Vec<u32> {
        self.xn1.ord_exps_table(&self.table, &self.table.orbit(a))
    }

    /// `n - deg Ord(a)` for nonzero `a`.
    pub fn k_normality(&self, a: u32) -> usize {
        self.xn1.n() - self.xn1.degree_of(&self.ord_exps(a))
    }

    /// `g∘a` for a polynomial over F_q.
    pub fn apply(&self, g_dense: &[u32], a: u32) -> u32 {
        self.xn1
            .apply_to_orbit_table(&self.table, g_dense, &self.table.orbit(a))
    }
}

fn outcome(
    sf: &SearchField,
    hit: Option<(u32, Option<u32>)>,
    range: u64,
    start: Instant,
) -> SearchOutcome {
    SearchOutcome {
        found: hit.is_some(),
        witness: hit.map(|(a, _)| sf.table.to_element(a)),
        preimage: hit.and_then(|(_, b)| b.map(|b| sf.table.to_element(b))),
        stats: SearchStats {
            scanned: hit.map_or(range, |(a, b)| b.unwrap_or(a) as u64 + 1),
            elapsed: start.elapsed(),
        },
    }
}

/// Sweeps `beta` in enumeration order, takes `alpha = beta^q - beta`, skips
/// zero, and accepts the first primitive `alpha` for which both `m_alpha` and
/// `m_(alpha^-1)` share a factor of degree exactly 1 with `x^n - 1`.
pub fn direct_search(q: u64, n: u32, opts: &SearchOptions) -> Result<SearchOutcome> {
    let sf = SearchField::new(q, n, opts)?;
    direct_search_in(&sf)
}

pub fn direct_search_in(sf: &SearchField) -> Result<SearchOutcome> {
    let start = Instant::now();
    let tb = &sf.table;
    let full_order = tb.order();
    let hit = (0..sf.size()).into_par_iter().find_first(|&beta| {
        let alpha = tb.add(tb.frobenius(beta, 1), neg(tb, beta));
        alpha != 0
            && tb.mult_order(alpha) == full_order
            && sf.k_normality(alpha) == 1
            && sf.k_normality(tb.inv(alpha)) == 1
    });
    let hit = hit.map(|beta| (tb.add(tb.frobenius(beta, 1), neg(tb, beta)), Some(beta)));
    let out = outcome(sf, hit, sf.size() as u64, start);
    if let Some(w) = &out.witness {
        verify_direct(&sf.ctx, w, out.preimage.as_ref().unwrap())?;
    }
    Ok(out)
}

fn neg(tb: &FieldTable, a: u32) -> u32 {
    // -1 = g^((q^n - 1)/2) in odd characteristic and 1 in characteristic 2.
    if tb.ctx().p() == 2 || a == 0 {
        a
    } else {
        tb.mul(a, tb.exp(tb.order() as u64 / 2))
    }
}

fn verify_direct(ctx: &FieldCtx, alpha: &FieldElement, beta: &FieldElement) -> Result<()> {
    let img = ctx.sub(&ctx.frobenius(beta, 1)?, beta)?;
    let inv = ctx.inv(alpha)?;
    let ok = img == *alpha
        && ctx.mult_order(alpha)? == ctx.size() - 1
        && m_poly_gcd_degree(ctx, alpha)? == 1
        && m_poly_gcd_degree(ctx, &inv)? == 1;
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "witness {} failed re-verification",
            ctx.format_element(alpha)
        )))
    }
}

/// First nonzero `alpha` such that `alpha` and `alpha^-1` are both
/// `r`-primitive and `k`-normal.
pub fn search_pair(q: u64, n: u32, r: u64, k: usize, opts: &SearchOptions) -> Result<SearchOutcome> {
    let sf = SearchField::new(q, n, opts)?;
    search_pair_in(&sf, r, k)
}

pub fn search_pair_in(sf: &SearchField, r: u64, k: usize) -> Result<SearchOutcome> {
    let start = Instant::now();
    let tb = &sf.table;
    let order = tb.order() as u64;
    if r == 0 || !order.is_multiple_of(r) {
        return Err(Error::RNotDivisor(format!("{r} does not divide {order}")));
    }
    let target = (order / r) as u32;
    let hit = (1..sf.size()).into_par_iter().find_first(|&a| {
        tb.mult_order(a) == target
            && sf.k_normality(a) == k
            && sf.k_normality(tb.inv(a)) == k
    });
    let out = outcome(sf, hit.map(|a| (a, None)), order, start);
    if let Some(w) = &out.witness {
        verify_pair(&sf.ctx, w, r, k)?;
    }
    Ok(out)
}

/// First nonzero `alpha` that is `r`-primitive and `k`-normal, with no
/// condition on its inverse.
pub fn search_element(
    q: u64,
    n: u32,
    r: u64,
    k: usize,
    opts: &SearchOptions,
) -> Result<SearchOutcome> {
    let sf = SearchField::new(q, n, opts)?;
    search_element_in(&sf, r, k)
}

pub fn search_element_in(sf: &SearchField, r: u64, k: usize) -> Result<SearchOutcome> {
    let start = Instant::now();
    let tb = &sf.table;
    let order = tb.order() as u64;
    if r == 0 || !order.is_multiple_of(r) {
        return Err(Error::RNotDivisor(format!("{r} does not divide {order}")));
    }
    let target = (order / r) as u32;
    let hit = (1..sf.size())
        .into_par_iter()
        .find_first(|&a| tb.mult_order(a) == target && sf.k_normality(a) == k);
    let out = outcome(sf, hit.map(|a| (a, None)), order, start);
    if let Some(w) = &out.witness {
        let ctx = &sf.ctx;
        if ctx.mult_order(w)? != target as u128 || k_normality(ctx, w)? != k {
            return Err(Error::InvalidArgument(format!(
                "witness {} failed re-verification",
                ctx.format_element(w)
            )));
        }
    }
    Ok(out)
}

/// Independent check of a pair witness on the arithmetic context.
pub fn verify_pair(ctx: &FieldCtx, a: &FieldElement, r: u64, k: usize) -> Result<()> {
    let order = ctx.size() - 1;
    let inv = ctx.inv(a)?;
    let want = order / r as u128;
    let ok = ctx.mult_order(a)? == want
        && ctx.mult_order(&inv)? == want
        && k_normality(ctx, a)? == k
        && k_normality(ctx, &inv)? == k;
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "witness {} failed re-verification",
            ctx.format_element(a)
        )))
    }
}

/// Result of a count over `beta` outside the zero set of `g∘x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountN {
    pub count: u64,
    /// Number of `beta` with `g∘beta = 0`.
    pub zero_set: u64,
}

/// Per-element discrete logs and F_q-orders, shared by repeated counts on
/// one field.
pub struct CountContext {
    pub sf: SearchField,
    pub profiles: Vec<OrdProfile>,
}

impl CountContext {
    pub fn new(sf: SearchField) -> CountContext {
        let profiles = (0..sf.size())
            .into_par_iter()
            .map(|a| OrdProfile::of(&sf.table, &sf.xn1, a))
            .collect();
        CountContext { sf, profiles }
    }

    /// `g∘beta` for every `beta`, by table index.
    pub fn image_map(&self, g: &PolyQ) -> Result<Vec<u32>> {
        if **g.fq() != **self.sf.ctx.fq() {
            return Err(Error::CtxMismatch);
        }
        let dense = self.sf.xn1.reduce_dense(g.coeffs());
        Ok((0..self.sf.size())
            .into_par_iter()
            .map(|b| self.sf.apply(&dense, b))
            .collect())
    }

    /// Counts `beta` with `g∘beta != 0` such that `beta` is `h`-free,
    /// `g∘beta` lies in `Q_r^d` and `(g∘beta)^-1` lies in `T_{g,k}^H`.
    #[allow(clippy::too_many_arguments)]
    pub fn count_n(
        &self,
        r: u64,
        k: usize,
        g: &PolyQ,
        h: &PolyQ,
        d: &BigUint,
        big_h: &PolyQ,
    ) -> Result<CountN> {
        let images = self.image_map(g)?;
        self.count_n_with_images(r, k, g, &images, h, d, big_h)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn count_n_with_images(
        &self,
        r: u64,
        k: usize,
        g: &PolyQ,
        images: &[u32],
        h: &PolyQ,
        d: &BigUint,
        big_h: &PolyQ,
    ) -> Result<CountN> {
        let sf = &self.sf;
        if g.deg() != k {
            return Err(Error::InvalidArgument(format!("g = {g} does not have degree {k}")));
        }
        let rd = decompose_r_ctx(&sf.ctx, r as u128)?;
        let gd = decompose_g(g, &sf.xn1)?;
        let h_exps = sf.xn1.exps_of(h)?;
        let qrd = QrdTest::new(&rd, d)?;
        let tgkh = TgkhTest::new(&gd, big_h)?;
        let full = sf.xn1.full();
        let tb = &sf.table;
        let (count, zero_set) = (0..sf.size())
            .into_par_iter()
            .map(|beta| {
                let a = images[beta as usize];
                if a == 0 {
                    return (0u64, 1u64);
                }
                let ok = h_free_exps(&full, &self.profiles[beta as usize].ord, &h_exps)
                    && qrd.contains_log(self.profiles[a as usize].log.unwrap())
                    && tgkh.contains(&self.profiles[tb.inv(a) as usize].ord);
                (ok as u64, 0)
            })
            .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
        Ok(CountN { count, zero_set })
    }
}

#[allow(clippy::too_many_arguments)]
pub fn count_n(
    q: u64,
    n: u32,
    r: u64,
    k: usize,
    g: &PolyQ,
    h: &PolyQ,
    d: &BigUint,
    big_h: &PolyQ,
    opts: &SearchOptions,
) -> Result<CountN> {
    CountContext::new(SearchField::new(q, n, opts)?).count_n(r, k, g, h, d, big_h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusKind {
    /// Nonzero elements of the given k-normality.
    KNormal(usize),
    /// Elements of multiplicative order `(q^n - 1)/r`.
    RPrimitive(u64),
    /// Number of elements of each F_q-order (zero has order 1).
    FqOrderFibers,
    /// For the `r`-primitive elements, counts by `(k(a), k(a^-1))`.
    PairTable(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CensusResult {
    Count(u64),
    Fibers(Vec<(PolyQ, u64)>),
    Pairs(Vec<((usize, usize), u64)>),
}

pub fn census(q: u64, n: u32, what: CensusKind, opts: &SearchOptions) -> Result<CensusResult> {
    census_in(&SearchField::new(q, n, opts)?, what)
}

pub fn census_in(sf: &SearchField, what: CensusKind) -> Result<CensusResult> {
    let tb = &sf.table;
    let order = tb.order() as u64;
    let check_r = |r: u64| {
        if r == 0 || !order.is_multiple_of(r) {
            Err(Error::RNotDivisor(format!("{r} does not divide {order}")))
        } else {
            Ok((order / r) as u32)
        }
    };
    Ok(match what {
        CensusKind::KNormal(k) => CensusResult::Count(
            (1..sf.size())
                .into_par_iter()
                .filter(|&a| sf.k_normality(a) == k)
                .count() as u64,
        ),
        CensusKind::RPrimitive(r) => {
            let target = check_r(r)?;
            CensusResult::Count(
                (1..sf.size())
                    .into_par_iter()
                    .filter(|&a| tb.mult_order(a) == target)
                    .count() as u64,
            )
        }
        CensusKind::FqOrderFibers => {
            let ords: Vec<Vec<u32>> = (0..sf.size()).into_par_iter().map(|a| sf.ord_exps(a)).collect();
            let mut counts = std::collections::BTreeMap::<Vec<u32>, u64>::new();
            for o in ords {
                *counts.entry(o).or_default() += 1;
            }
            let mut rows: Vec<(PolyQ, u64)> =
                counts.into_iter().map(|(e, c)| (sf.xn1.poly_of(&e), c)).collect();
            rows.sort_by(|a, b| a.0.cmp_deg_lex(&b.0));
            CensusResult::Fibers(rows)
        }
        CensusKind::PairTable(r) => {
            let target = check_r(r)?;
            let n = sf.xn1.n();
            let cells: Vec<u64> = (1..sf.size())
                .into_par_iter()
                .filter(|&a| tb.mult_order(a) == target)
                .fold(
                    || vec![0u64; n * n],
                    |mut acc, a| {
                        acc[sf.k_normality(a) * n + sf.k_normality(tb.inv(a))] += 1;
                        acc
                    },
                )
                .reduce(
                    || vec![0u64; n * n],
                    |mut x, y| {
                        x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
                        x
                    },
                );
            CensusResult::Pairs(
                cells
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| *c > 0)
                    .map(|(i, c)| ((i / n, i % n), c))
                    .collect(),
            )
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fqpoly::{divisors_of, DivisorFilter};
    use crate::modstruct::{in_qrd, in_tgkh, is_h_free};

    fn opts() -> SearchOptions {
        SearchOptions::default()
    }

    #[test]
    fn pair_examples() {
        assert!(!search_pair(2, 3, 1, 0, &opts()).unwrap().found);
        assert!(!search_pair(5, 4, 1, 0, &opts()).unwrap().found);
        assert!(!search_pair(3, 4, 2, 2, &opts()).unwrap().found);
        // 2-primitive 2-normal elements exist in F_625, but none has a
        // 2-normal inverse.
        assert!(search_element(5, 4, 2, 2, &opts()).unwrap().found);
        assert!(!search_pair(5, 4, 2, 2, &opts()).unwrap().found);
        assert!(!search_element(3, 4, 2, 2, &opts()).unwrap().found);
        let out = search_pair(5, 4, 2, 1, &opts()).unwrap();
        assert!(out.found);
        assert!(out.stats.scanned >= 1);
        assert!(matches!(
            search_pair(3, 4, 7, 1, &opts()),
            Err(Error::RNotDivisor(_))
        ));
    }

    #[test]
    fn direct_examples() {
        assert!(!direct_search(4, 5, &opts()).unwrap().found);
        let out = direct_search(2, 5, &opts()).unwrap();
        assert!(out.found && out.preimage.is_some());
        assert!(matches!(
            direct_search(2, 30, &opts()),
            Err(Error::FieldTooLarge { .. })
        ));
    }

    #[test]
    fn witness_is_lowest_index() {
        for (q, n, r, k) in [(2u64, 5u32, 1u64, 1usize), (3, 5, 1, 1), (5, 4, 2, 1), (7, 4, 1, 0)] {
            let sf = SearchField::new(q, n, &opts()).unwrap();
            let out = search_pair_in(&sf, r, k).unwrap();
            let w = sf.table.from_element(out.witness.as_ref().unwrap()).unwrap();
            for a in 1..w {
                assert!(verify_pair(&sf.ctx, &sf.table.to_element(a), r, k).is_err());
            }
            assert_eq!(out.stats.scanned, w as u64 + 1);
        }
    }

    #[test]
    fn census_examples() {
        assert_eq!(census(2, 3, CensusKind::KNormal(0), &opts()).unwrap(), CensusResult::Count(3));
        let total: u64 = (0..3)
            .map(|k| match census(2, 3, CensusKind::KNormal(k), &opts()).unwrap() {
                CensusResult::Count(c) => c,
                _ => unreachable!(),
            })
            .sum();
        assert_eq!(total + 1, 8);
        assert_eq!(
            census(3, 4, CensusKind::RPrimitive(2), &opts()).unwrap(),
            CensusResult::Count(16)
        );
        let CensusResult::Fibers(f) = census(2, 3, CensusKind::FqOrderFibers, &opts()).unwrap()
        else {
            panic!()
        };
        let counts: Vec<u64> = f.iter().map(|x| x.1).collect();
        assert_eq!(counts, vec![1, 1, 3, 3]);
    }

    #[test]
    fn pair_table_agrees_with_search() {
        for (q, n) in [(2u64, 3u32), (2, 4), (3, 4), (2, 5), (4, 3), (5, 3)] {
            let sf = SearchField::new(q, n, &opts()).unwrap();
            let CensusResult::Pairs(rows) = census_in(&sf, CensusKind::PairTable(1)).unwrap()
            else {
                panic!()
            };
            for k in 0..n as usize {
                let in_table = rows.iter().any(|&((a, b), c)| a == k && b == k && c > 0);
                assert_eq!(search_pair_in(&sf, 1, k).unwrap().found, in_table, "{q} {n} {k}");
            }
        }
    }

    /// Straight-loop count on the arithmetic context.
    fn count_oracle(
        ctx: &FieldCtx,
        r: u64,
        g: &PolyQ,
        h: &PolyQ,
        d: &BigUint,
        big_h: &PolyQ,
    ) -> (u64, u64) {
        let xn1 = xn1_of(ctx);
        let rd = decompose_r_ctx(ctx, r as u128).unwrap();
        let gd = decompose_g(g, &xn1).unwrap();
        let (mut count, mut zero) = (0, 0);
        for i in 0..ctx.size() {
            let b = ctx.from_index(i);
            let a = crate::modstruct::mod_action(ctx, g, &b).unwrap();
            if a.is_zero() {
                zero += 1;
                continue;
            }
            if is_h_free(ctx, &b, h).unwrap()
                && in_qrd(ctx, &a, &rd, d).unwrap()
                && in_tgkh(ctx, &ctx.inv(&a).unwrap(), &gd, big_h).unwrap()
            {
                count += 1;
            }
        }
        (count, zero)
    }

    #[test]
    fn count_matches_straight_loop() {
        for (q, n) in [(2u64, 3u32), (2, 4), (3, 3), (4, 3), (3, 4), (5, 2), (2, 6)] {
            let cc = CountContext::new(SearchField::new(q, n, &opts()).unwrap());
            let ctx = cc.sf.ctx.clone();
            let xn1 = cc.sf.xn1.clone();
            let order = ctx.size() as u64 - 1;
            let one = PolyQ::one(ctx.fq().clone());
            for k in 0..n as usize {
                let Ok(gs) = xn1.p_k(k) else { continue };
                for ge in gs.iter().take(2) {
                    let g = xn1.poly_of(ge);
                    let gd = decompose_g(&g, &xn1).unwrap();
                    for r in (1..=order).filter(|r| order.is_multiple_of(*r)).take(3) {
                        let rd = decompose_r_ctx(&ctx, r as u128).unwrap();
                        for h in [one.clone(), xn1.poly().clone()] {
                            for d in [BigUint::from(1u32), rd.big_r.clone()] {
                                for big_h in divisors_of(&gd.big_g, DivisorFilter::AllMonic)
                                    .unwrap()
                                    .into_iter()
                                    .take(3)
                                {
                                    let got = cc.count_n(r, k, &g, &h, &d, &big_h).unwrap();
                                    let want = count_oracle(&ctx, r, &g, &h, &d, &big_h);
                                    assert_eq!((got.count, got.zero_set), want);
                                    assert_eq!(got.zero_set, q.pow(k as u32));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn full_count_positive_iff_pair_structure_exists() {
        // With h = x^n - 1, d = R and H = G the count is positive exactly when
        // some normal beta has g∘beta r-primitive with inverse in S_{g,k}.
        for (q, n) in [(2u64, 3u32), (2, 4), (3, 3), (2, 5), (3, 4), (4, 3)] {
            let cc = CountContext::new(SearchField::new(q, n, &opts()).unwrap());
            let ctx = cc.sf.ctx.clone();
            let xn1 = cc.sf.xn1.clone();
            for k in 0..n as usize {
                let Ok(gs) = xn1.p_k(k) else { continue };
                for ge in &gs {
                    let g = xn1.poly_of(ge);
                    let gd = decompose_g(&g, &xn1).unwrap();
                    let rd = decompose_r_ctx(&ctx, 1).unwrap();
                    let c = cc
                        .count_n(1, k, &g, xn1.poly(), &rd.big_r, &gd.big_g)
                        .unwrap()
                        .count;
                    let direct = (0..ctx.size()).any(|i| {
                        let b = ctx.from_index(i);
                        let a = crate::modstruct::mod_action(&ctx, &g, &b).unwrap();
                        !a.is_zero()
                            && k_normality(&ctx, &b).unwrap() == 0
                            && ctx.mult_order(&a).unwrap() == ctx.size() - 1
                            && crate::modstruct::in_sgk(&ctx, &ctx.inv(&a).unwrap(), &g).unwrap()
                    });
                    assert_eq!(c > 0, direct, "{q} {n} g={g}");
                }
            }
        }
    }
}
