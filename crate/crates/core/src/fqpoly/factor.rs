//! Squarefree, distinct-degree and equal-degree factorization over F_q.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::raw::{self, Poly};
use crate::ffield::Fq;

fn powmod_big(fq: &Fq, base: &[u32], e: &BigUint, m: &[u32]) -> Poly {
    let mut result = raw::rem(fq, &raw::one(), m);
    let b = raw::rem(fq, base, m);
    for i in (0..e.bits()).rev() {
        result = raw::mulmod(fq, &result, &result, m);
        if e.bit(i) {
            result = raw::mulmod(fq, &result, &b, m);
        }
    }
    result
}

/// `f(x) = g(x^p)` ↦ `g^(1/p)`, coefficientwise `c ↦ c^(q/p)`.
fn pth_root(fq: &Fq, f: &[u32]) -> Poly {
    let p = fq.p() as usize;
    let e = (fq.q() / fq.p()) as u64;
    raw::trimmed(
        f.iter()
            .step_by(p)
            .map(|&c| fq.pow(c, e))
            .collect(),
    )
}

/// Squarefree decomposition of a monic polynomial: pairs `(g, i)` with the
/// `g` squarefree, pairwise coprime, and `f = prod g^i`.
pub fn squarefree(fq: &Fq, f: &[u32]) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if f.len() <= 1 {
        return out;
    }
    let df = raw::derivative(fq, f);
    let mut c = raw::gcd(fq, f, &df);
    let mut w = raw::divrem(fq, f, &c).0;
    let mut i = 1u32;
    while w.len() > 1 {
        let y = raw::gcd(fq, &w, &c);
        let fac = raw::divrem(fq, &w, &y).0;
        if fac.len() > 1 {
            out.push((fac, i));
        }
        c = raw::divrem(fq, &c, &y).0;
        w = y;
        i += 1;
    }
    if c.len() > 1 {
        let root = pth_root(fq, &c);
        for (g, e) in squarefree(fq, &root) {
            out.push((g, e * fq.p()));
        }
    }
    out
}

/// Distinct-degree split of a squarefree monic polynomial: `(g, d)` where
/// `g` is the product of all irreducible factors of degree `d`.
pub fn distinct_degree(fq: &Fq, f: &[u32]) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut g = f.to_vec();
    let mut h = raw::rem(fq, &raw::x(), &g);
    let mut d = 1;
    while g.len() > 2 * d {
        h = raw::powmod(fq, &h, fq.q() as u128, &g);
        let common = raw::gcd(fq, &raw::sub(fq, &h, &raw::x()), &g);
        if common.len() > 1 {
            g = raw::divrem(fq, &g, &common).0;
            h = raw::rem(fq, &h, &g);
            out.push((common, d));
        }
        d += 1;
    }
    if g.len() > 1 {
        let deg = g.len() - 1;
        out.push((g, deg));
    }
    out
}

fn seed_for(fq: &Fq, f: &[u32]) -> u64 {
    let mut h = DefaultHasher::new();
    (fq.p(), fq.t(), fq.modulus(), f).hash(&mut h);
    h.finish()
}

/// Cantor–Zassenhaus split of a squarefree monic `f` whose irreducible
/// factors all have degree `d`. The random stream is seeded from `(f, q)`.
pub fn equal_degree(fq: &Fq, f: &[u32], d: usize) -> Vec<Poly> {
    let deg = f.len() - 1;
    if deg == d {
        return vec![f.to_vec()];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed_for(fq, f));
    let qd = BigUint::from(fq.q()).pow(d as u32);
    let odd_exp = (&qd - BigUint::one()) >> 1;
    let mut pending = vec![f.to_vec()];
    let mut done = Vec::new();
    while let Some(g) = pending.pop() {
        if g.len() - 1 == d {
            done.push(g);
            continue;
        }
        loop {
            let a: Poly = raw::trimmed((0..g.len() - 1).map(|_| rng.gen_range(0..fq.q())).collect());
            if a.len() <= 1 {
                continue;
            }
            let b = if fq.p() == 2 {
                // absolute trace map a + a^2 + ... + a^(2^(td-1))
                let mut acc: Poly = Vec::new();
                let mut cur = a.clone();
                for _ in 0..fq.t() as usize * d {
                    acc = raw::add(fq, &acc, &cur);
                    cur = raw::mulmod(fq, &cur, &cur, &g);
                }
                acc
            } else {
                let s = powmod_big(fq, &a, &odd_exp, &g);
                raw::sub(fq, &s, &raw::one())
            };
            if b.is_empty() {
                continue;
            }
            let h = raw::gcd(fq, &b, &g);
            if h.len() > 1 && h.len() < g.len() {
                let other = raw::divrem(fq, &g, &h).0;
                pending.push(h);
                pending.push(other);
                break;
            }
        }
    }
    debug_assert!(!odd_exp.is_zero() || fq.p() == 2);
    done
}

/// Complete factorization of a monic polynomial into monic irreducibles,
/// exponents merged, sorted by degree then counting order.
pub fn factor_monic(fq: &Fq, f: &[u32]) -> Vec<(Poly, u32)> {
    let mut out: Vec<(Poly, u32)> = Vec::new();
    for (g, e) in squarefree(fq, f) {
        for (h, d) in distinct_degree(fq, &g) {
            for irr in equal_degree(fq, &h, d) {
                out.push((irr, e));
            }
        }
    }
    out.sort_by(|a, b| raw::cmp_deg_lex(fq, &a.0, &b.0));
    let mut merged: Vec<(Poly, u32)> = Vec::with_capacity(out.len());
    for (g, e) in out {
        match merged.last_mut() {
            Some((h, he)) if *h == g => *he += e,
            _ => merged.push((g, e)),
        }
    }
    merged
}
