//! The base field F_q = F_p[x]/(m(x)).
//!
//! An element is a `u32` in `[0, q)` whose base-`p` digits are its
//! coefficients, constant term least significant. Prime fields use plain
//! modular arithmetic; proper extensions use exp/log tables.

use std::fmt;

use crate::error::{Error, Result};
use crate::fqpoly::raw;
use crate::intarith::{factor_u64, is_prime_u64};

/// Largest `q = p^t` with `t > 1` that gets tables.
pub const MAX_TABLE_Q: u64 = 1 << 24;
const ADD_TABLE_Q: u32 = 256;

pub struct Fq {
    p: u32,
    t: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

struct Tables {
    /// `exp[i] = g^i` for `i` in `[0, 2(q-1))`, so sums of two logs need no reduction.
    exp: Vec<u32>,
    /// `log[a]` for nonzero `a`; `log[0]` is unused.
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p, self.t, self.modulus)
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.t == other.t && self.modulus == other.modulus
    }
}

impl Eq for Fq {}

impl Fq {
    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Fq> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        let p = u32::try_from(p).map_err(|_| Error::FieldTooLarge {
            size: p.to_string(),
            ceiling_bits: 32,
        })?;
        Ok(Fq {
            p,
            t: 1,
            q: p,
            modulus: vec![0, 1],
            tables: None,
        })
    }

    /// F_{p^t} with the canonical modulus (first monic irreducible of degree
    /// `t` in counting order, constant coefficient varying fastest).
    pub fn new(p: u64, t: u32) -> Result<Fq> {
        let base = Fq::prime(p)?;
        if t == 0 {
            return Err(Error::InvalidArgument("t must be at least 1".into()));
        }
        if t == 1 {
            return Ok(base);
        }
        Self::check_table_size(p, t)?;
        let modulus = raw::first_irreducible(&base, t as usize);
        Fq::with_modulus(p, t, modulus)
    }

    fn check_table_size(p: u64, t: u32) -> Result<u64> {
        let q = (p as u128).checked_pow(t).unwrap_or(u128::MAX);
        if q > MAX_TABLE_Q as u128 {
            return Err(Error::FieldTooLarge {
                size: format!("{p}^{t}"),
                ceiling_bits: 24,
            });
        }
        Ok(q as u64)
    }

    /// F_{p^t} = F_p[x]/(modulus), after checking the modulus is monic of
    /// degree `t` and irreducible.
    pub fn with_modulus(p: u64, t: u32, modulus: Vec<u32>) -> Result<Fq> {
        let base = Fq::prime(p)?;
        let modulus = raw::trimmed(modulus);
        if modulus.len() != t as usize + 1 || *modulus.last().unwrap() != 1 {
            return Err(Error::ReducibleModulus(format!(
                "{modulus:?} is not monic of degree {t}"
            )));
        }
        if modulus.iter().any(|&c| c >= base.p) {
            return Err(Error::InvalidArgument(format!(
                "modulus coefficients must lie in [0, {p})"
            )));
        }
        if !raw::is_irreducible(&base, &modulus) {
            return Err(Error::ReducibleModulus(raw::to_string(&base, &modulus)));
        }
        if t == 1 {
            // F_p[x]/(x - c) is F_p again; keep the plain representation.
            return Ok(Fq { modulus, ..base });
        }
        let q = Self::check_table_size(p, t)? as u32;
        let tables = Tables::build(&base, &modulus, q);
        Ok(Fq {
            p: base.p,
            t,
            q,
            modulus,
            tables: Some(tables),
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.tables.is_none()
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.tables {
            None => {
                let s = a as u64 + b as u64;
                let p = self.p as u64;
                (if s >= p { s - p } else { s }) as u32
            }
            Some(tb) => {
                if self.p == 2 {
                    a ^ b
                } else if let Some(add) = &tb.add {
                    add[(a * self.q + b) as usize]
                } else {
                    self.add_digits(a, b)
                }
            }
        }
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let p = self.p;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.t {
            let d = (a % p + b % p) % p;
            out += d * place;
            place *= p;
            a /= p;
            b /= p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        match &self.tables {
            None => {
                if a == 0 {
                    0
                } else {
                    self.p - a
                }
            }
            Some(tb) => tb.neg[a as usize],
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.tables {
            None => ((a as u64 * b as u64) % self.p as u64) as u32,
            Some(tb) => {
                if a == 0 || b == 0 {
                    0
                } else {
                    tb.exp[(tb.log[a as usize] + tb.log[b as usize]) as usize]
                }
            }
        }
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.tables {
            None => self.pow(a, self.p as u64 - 2),
            Some(tb) => {
                let l = tb.log[a as usize];
                tb.exp[if l == 0 { 0 } else { (self.q - 1 - l) as usize }]
            }
        })
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        if let Some(tb) = &self.tables {
            if a == 0 {
                return if e == 0 { 1 } else { 0 };
            }
            let l = tb.log[a as usize] as u64 * (e % (self.q as u64 - 1));
            return tb.exp[(l % (self.q as u64 - 1)) as usize];
        }
        let m = self.p as u64;
        let mut b = a as u64 % m;
        let mut r = 1 % m;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % m;
            }
            b = b * b % m;
            e >>= 1;
        }
        r as u32
    }

    /// Embedding of an integer through F_p.
    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    /// Base-`p` digits, constant term first.
    pub fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.t as usize);
        for _ in 0..self.t {
            out.push(a % self.p);
            a /= self.p;
        }
        out
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<u32> {
        if digits.len() > self.t as usize || digits.iter().any(|&d| d >= self.p) {
            return Err(Error::Parse(format!(
                "{digits:?} is not an element of F_{}^{}",
                self.p, self.t
            )));
        }
        Ok(digits.iter().rev().fold(0, |acc, &d| acc * self.p + d))
    }

    /// Trace down to F_p.
    pub fn trace(&self, a: u32) -> u32 {
        let mut acc = 0;
        let mut x = a;
        for _ in 0..self.t {
            acc = self.add(acc, x);
            x = self.pow(x, self.p as u64);
        }
        debug_assert!(acc < self.p);
        acc
    }

    /// Multiplicative order of a nonzero element of F_q.
    pub fn order(&self, a: u32) -> u64 {
        let n = self.q as u64 - 1;
        let mut ord = n;
        for (pr, _) in factor_u64(n).expect("small").factors() {
            let pr: u64 = pr.try_into().unwrap();
            while ord.is_multiple_of(pr) && self.pow(a, ord / pr) == 1 {
                ord /= pr;
            }
        }
        ord
    }
}

impl Tables {
    fn build(base: &Fq, modulus: &[u32], q: u32) -> Tables {
        let p = base.p;
        let t = modulus.len() - 1;
        let to_int = |c: &[u32]| -> u32 {
            let mut v = 0u32;
            for i in (0..t).rev() {
                v = v * p + c.get(i).copied().unwrap_or(0);
            }
            v
        };
        let from_int = |mut v: u32| -> Vec<u32> {
            let mut c = Vec::with_capacity(t);
            for _ in 0..t {
                c.push(v % p);
                v /= p;
            }
            raw::trimmed(c)
        };
        let order = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * order];
        let mut log = vec![0u32; q as usize];
        // first generator in counting order
        for g in 2..q {
            let gp = from_int(g);
            let mut x = vec![1u32];
            let mut ok = true;
            for i in 0..order {
                let v = to_int(&x);
                if i > 0 && v == 1 {
                    ok = false;
                    break;
                }
                exp[i] = v;
                log[v as usize] = i as u32;
                x = raw::rem(base, &raw::mul(base, &x, &gp), modulus);
            }
            if ok {
                break;
            }
        }
        if q == 2 {
            exp[0] = 1;
        }
        for i in 0..order {
            exp[i + order] = exp[i];
        }
        let neg: Vec<u32> = (0..q)
            .map(|a| {
                let c: Vec<u32> = from_int(a).iter().map(|&d| (p - d) % p).collect();
                to_int(&c)
            })
            .collect();
        let add = (q <= ADD_TABLE_Q && p != 2).then(|| {
            let mut tbl = vec![0u32; (q * q) as usize];
            for a in 0..q {
                let da = from_int(a);
                for b in 0..q {
                    let db = from_int(b);
                    tbl[(a * q + b) as usize] = to_int(&raw::add(base, &da, &db));
                }
            }
            tbl
        });
        Tables { exp, log, neg, add }
    }
}
