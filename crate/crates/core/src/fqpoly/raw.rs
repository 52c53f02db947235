//! Coefficient-slice polynomial arithmetic over an [`Fq`].
//!
//! Polynomials are `Vec<u32>` with the constant term first and no trailing
//! zeros; the zero polynomial is the empty vector.

use crate::ffield::Fq;
use crate::intarith::factor_u64;

pub type Poly = Vec<u32>;

pub fn trimmed(mut f: Poly) -> Poly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

pub fn degree(f: &[u32]) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

pub fn x() -> Poly {
    vec![0, 1]
}

pub fn one() -> Poly {
    vec![1]
}

pub fn add(fq: &Fq, a: &[u32], b: &[u32]) -> Poly {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, &s) in out.iter_mut().zip(short) {
        *o = fq.add(*o, s);
    }
    trimmed(out)
}

pub fn neg(fq: &Fq, a: &[u32]) -> Poly {
    a.iter().map(|&c| fq.neg(c)).collect()
}

pub fn sub(fq: &Fq, a: &[u32], b: &[u32]) -> Poly {
    add(fq, a, &neg(fq, b))
}

pub fn scale(fq: &Fq, a: &[u32], c: u32) -> Poly {
    trimmed(a.iter().map(|&x| fq.mul(x, c)).collect())
}

pub fn mul(fq: &Fq, a: &[u32], b: &[u32]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = fq.add(out[i + j], fq.mul(x, y));
        }
    }
    trimmed(out)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(fq: &Fq, a: &[u32], b: &[u32]) -> (Poly, Poly) {
    assert!(!b.is_empty(), "division by the zero polynomial");
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let lead_inv = fq.inv(*b.last().unwrap()).expect("nonzero leading coefficient");
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut quo = vec![0u32; a.len() - db];
    for i in (0..quo.len()).rev() {
        let c = fq.mul(r[i + db], lead_inv);
        quo[i] = c;
        if c == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            r[i + j] = fq.sub(r[i + j], fq.mul(c, bj));
        }
    }
    r.truncate(db);
    (trimmed(quo), trimmed(r))
}

pub fn rem(fq: &Fq, a: &[u32], b: &[u32]) -> Poly {
    if a.len() < b.len() {
        return a.to_vec();
    }
    divrem(fq, a, b).1
}

pub fn monic(fq: &Fq, a: &[u32]) -> Poly {
    match a.last() {
        None => Vec::new(),
        Some(&l) => scale(fq, a, fq.inv(l).expect("nonzero")),
    }
}

pub fn is_monic(a: &[u32]) -> bool {
    a.last() == Some(&1)
}

/// Monic gcd; `gcd(0, 0) = 0`.
pub fn gcd(fq: &Fq, a: &[u32], b: &[u32]) -> Poly {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    while !b.is_empty() {
        let r = rem(fq, &a, &b);
        a = b;
        b = r;
    }
    monic(fq, &a)
}

pub fn mulmod(fq: &Fq, a: &[u32], b: &[u32], m: &[u32]) -> Poly {
    rem(fq, &mul(fq, a, b), m)
}

pub fn powmod(fq: &Fq, base: &[u32], mut e: u128, m: &[u32]) -> Poly {
    let mut result = rem(fq, &one(), m);
    let mut b = rem(fq, base, m);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(fq, &result, &b, m);
        }
        e >>= 1;
        if e > 0 {
            b = mulmod(fq, &b, &b, m);
        }
    }
    result
}

pub fn derivative(fq: &Fq, a: &[u32]) -> Poly {
    trimmed(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| fq.mul(c, fq.from_int(i as i64)))
            .collect(),
    )
}

/// Evaluates `a` at the field element `v`.
pub fn eval(fq: &Fq, a: &[u32], v: u32) -> u32 {
    a.iter().rev().fold(0, |acc, &c| fq.add(fq.mul(acc, v), c))
}

/// `x^(q^k) mod f` for `k = 0..=kmax`.
pub fn frobenius_powers_of_x(fq: &Fq, f: &[u32], kmax: usize) -> Vec<Poly> {
    let mut out = Vec::with_capacity(kmax + 1);
    let mut cur = rem(fq, &x(), f);
    out.push(cur.clone());
    for _ in 0..kmax {
        cur = compose_frobenius(fq, &cur, f);
        out.push(cur.clone());
    }
    out
}

/// `a^q mod f`.
fn compose_frobenius(fq: &Fq, a: &[u32], f: &[u32]) -> Poly {
    powmod(fq, a, fq.q() as u128, f)
}

/// Rabin's test: `x^(q^n) = x mod f` and `gcd(x^(q^(n/r)) - x, f) = 1` for
/// every prime `r | n`.
pub fn is_irreducible(fq: &Fq, f: &[u32]) -> bool {
    let n = match degree(f) {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let f = monic(fq, f);
    let xp = frobenius_powers_of_x(fq, &f, n);
    if xp[n] != rem(fq, &x(), &f) {
        return false;
    }
    let fact = factor_u64(n as u64).expect("small");
    for (r, _) in fact.factors() {
        let r: usize = r.try_into().unwrap();
        let g = gcd(fq, &sub(fq, &xp[n / r], &x()), &f);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Monic polynomial of degree `deg` at position `idx` in counting order
/// (lower coefficients vary fastest).
pub fn monic_at_index(fq: &Fq, deg: usize, mut idx: u128) -> Poly {
    let q = fq.q() as u128;
    let mut f = Vec::with_capacity(deg + 1);
    for _ in 0..deg {
        f.push((idx % q) as u32);
        idx /= q;
    }
    f.push(1);
    f
}

/// The first monic irreducible of degree `deg` in counting order.
pub fn first_irreducible(fq: &Fq, deg: usize) -> Poly {
    (0u128..)
        .map(|i| monic_at_index(fq, deg, i))
        .find(|f| is_irreducible(fq, f))
        .expect("irreducible polynomials exist in every degree")
}

/// Position in counting order: `sum c_i q^i` over all coefficients.
pub fn counting_index(fq: &Fq, f: &[u32]) -> u128 {
    f.iter()
        .rev()
        .fold(0u128, |acc, &c| acc.saturating_mul(fq.q() as u128).saturating_add(c as u128))
}

/// Orders polynomials by degree, then by counting index.
pub fn cmp_deg_lex(fq: &Fq, a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| counting_index(fq, a).cmp(&counting_index(fq, b)))
        .then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

fn coeff_string(fq: &Fq, c: u32) -> String {
    if fq.t() == 1 {
        c.to_string()
    } else {
        fq.digits(c)
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join("-")
    }
}

/// Human-readable form, highest degree first: `x^3 + x + 1`.
pub fn to_string(fq: &Fq, f: &[u32]) -> String {
    if f.is_empty() {
        return "0".into();
    }
    let mut terms = Vec::new();
    for (i, &c) in f.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let cs = coeff_string(fq, c);
        let cs = if fq.t() > 1 && c != 1 { format!("({cs})") } else { cs };
        let term = match (i, c == 1) {
            (0, _) => cs,
            (1, true) => "x".to_string(),
            (1, false) => format!("{cs}*x"),
            (_, true) => format!("x^{i}"),
            (_, false) => format!("{cs}*x^{i}"),
        };
        terms.push(term);
    }
    terms.join(" + ")
}

/// Comma-separated coefficients, constant term first, each an F_q literal.
pub fn to_literal(fq: &Fq, f: &[u32]) -> String {
    f.iter()
        .map(|&c| coeff_string(fq, c))
        .collect::<Vec<_>>()
        .join(",")
}
