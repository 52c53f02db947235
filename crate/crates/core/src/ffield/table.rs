//! Exp/log tables for F_{q^n} indexed by enumeration position.
//!
//! Elements are `u32` indices `sum c_i q^i`. Multiplication, inversion,
//! Frobenius and multiplicative order reduce to arithmetic on logarithms;
//! addition is digitwise over F_p (XOR in characteristic 2).

use std::sync::Arc;

use num_integer::Integer;

use super::{FieldCtx, FieldElement};
use crate::error::{Error, Result};

/// Default ceiling for tabulated fields, in bits of `q^n`.
pub const DEFAULT_TABLE_CEILING_BITS: u32 = 24;

pub struct FieldTable {
    ctx: Arc<FieldCtx>,
    q: u32,
    n: usize,
    size: u32,
    order: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    adder: Adder,
}

/// Carry-free addition of base-`p` digit strings, a chunk of digits at a
/// time.
enum Adder {
    Xor,
    Chunked {
        /// `p^c` for `c` digits per chunk.
        radix: u32,
        chunks: usize,
        /// `table[a * radix + b]` is the chunk sum; empty when `c = 1` and
        /// `p` is large, in which case chunks add modulo `p` directly.
        table: Vec<u32>,
    },
}

impl Adder {
    fn new(p: u32, digits: usize) -> Adder {
        if p == 2 {
            return Adder::Xor;
        }
        let mut c = 1usize;
        while (p as u64).pow(2 * (c as u32 + 1)) <= 1 << 16 && c < digits {
            c += 1;
        }
        let radix = p.pow(c as u32);
        let table = if (radix as u64) * (radix as u64) <= 1 << 16 {
            let mut t = vec![0u32; (radix * radix) as usize];
            for a in 0..radix {
                for b in 0..radix {
                    let (mut x, mut y, mut out, mut place) = (a, b, 0, 1);
                    for _ in 0..c {
                        out += ((x % p + y % p) % p) * place;
                        place *= p;
                        x /= p;
                        y /= p;
                    }
                    t[(a * radix + b) as usize] = out;
                }
            }
            t
        } else {
            Vec::new()
        };
        Adder::Chunked {
            radix,
            chunks: digits.div_ceil(c),
            table,
        }
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        match self {
            Adder::Xor => a ^ b,
            Adder::Chunked { radix, chunks, table } => {
                let (mut x, mut y, mut out, mut place) = (a, b, 0u32, 1u32);
                for _ in 0..*chunks {
                    let (cx, cy) = (x % radix, y % radix);
                    let s = if table.is_empty() {
                        let s = cx + cy;
                        if s >= *radix {
                            s - radix
                        } else {
                            s
                        }
                    } else {
                        table[(cx * radix + cy) as usize]
                    };
                    out += s * place;
                    place = place.wrapping_mul(*radix);
                    x /= radix;
                    y /= radix;
                }
                out
            }
        }
    }
}

impl FieldTable {
    pub fn new(ctx: Arc<FieldCtx>) -> Result<FieldTable> {
        Self::with_ceiling(ctx, DEFAULT_TABLE_CEILING_BITS)
    }

    pub fn with_ceiling(ctx: Arc<FieldCtx>, ceiling_bits: u32) -> Result<FieldTable> {
        let ceiling_bits = ceiling_bits.min(31);
        if ctx.size() > 1u128 << ceiling_bits {
            return Err(Error::FieldTooLarge {
                size: ctx.size().to_string(),
                ceiling_bits,
            });
        }
        let size = ctx.size() as u32;
        let order = size - 1;
        let q = ctx.q();
        let n = ctx.n();
        let p = ctx.p();
        let digits = ctx.t() as usize * n;
        let adder = Adder::new(p, digits);

        // Multiplication by the generator is F_p-linear, so tabulate its
        // effect on each chunk of up to 8 bits worth of digits.
        let g = ctx.find_primitive()?;
        let mut c = 1usize;
        while (p as u64).pow(c as u32 + 1) <= 256 && c < digits {
            c += 1;
        }
        let radix = p.pow(c as u32);
        let chunks = digits.div_ceil(c);
        let mut contrib = vec![0u32; chunks * radix as usize];
        for k in 0..chunks {
            let place = (p as u128).pow((k * c) as u32);
            for v in 0..radix {
                let idx = v as u128 * place;
                if idx >= ctx.size() {
                    break;
                }
                let e = ctx.from_index(idx);
                let prod = ctx.mul_unchecked(&e, &g);
                contrib[k * radix as usize + v as usize] = ctx.index(&prod) as u32;
            }
        }
        let times_g = |mut v: u32| -> u32 {
            let mut acc = 0;
            for k in 0..chunks {
                let d = v % radix;
                v /= radix;
                if d != 0 {
                    acc = adder.add(acc, contrib[k * radix as usize + d as usize]);
                }
            }
            acc
        };

        let mut exp = vec![0u32; order as usize];
        let mut log = vec![u32::MAX; size as usize];
        let mut v = 1u32;
        for (k, slot) in exp.iter_mut().enumerate() {
            *slot = v;
            log[v as usize] = k as u32;
            v = times_g(v);
        }
        debug_assert_eq!(v, 1);
        Ok(FieldTable {
            ctx,
            q,
            n,
            size,
            order,
            exp,
            log,
            adder,
        })
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    /// `q^n`.
    pub fn size(&self) -> u32 {
        self.size
    }

    /// `q^n - 1`.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.adder.add(a, b)
    }

    #[inline]
    pub fn log(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        self.log[a as usize]
    }

    #[inline]
    pub fn exp(&self, k: u64) -> u32 {
        self.exp[(k % self.order as u64) as usize]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.exp(s)
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        let l = self.log[a as usize];
        self.exp[if l == 0 { 0 } else { (self.order - l) as usize }]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let l = self.log[a as usize] as u128 * (e % self.order as u64) as u128;
        self.exp[(l % self.order as u128) as usize]
    }

    /// `a^(q^i)`.
    #[inline]
    pub fn frobenius(&self, a: u32, i: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        let qi = (0..i % self.n as u32).fold(1u64, |acc, _| acc * self.q as u64 % self.order as u64);
        self.exp(self.log[a as usize] as u64 * qi)
    }

    /// `a, a^q, ..., a^(q^(n-1))`.
    pub fn orbit(&self, a: u32) -> Vec<u32> {
        if a == 0 {
            return vec![0; self.n];
        }
        let mut out = Vec::with_capacity(self.n);
        let mut l = self.log[a as usize] as u64;
        for _ in 0..self.n {
            out.push(self.exp[l as usize]);
            l = l * self.q as u64 % self.order as u64;
        }
        out
    }

    /// Multiplicative order of a nonzero element.
    #[inline]
    pub fn mult_order(&self, a: u32) -> u32 {
        self.order / self.log[a as usize].gcd(&self.order)
    }

    /// Coefficients over F_q, constant term first.
    pub fn coeffs(&self, mut a: u32) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            v.push(a % self.q);
            a /= self.q;
        }
        v
    }

    pub fn to_element(&self, a: u32) -> FieldElement {
        self.ctx.from_index(a as u128)
    }

    pub fn from_element(&self, a: &FieldElement) -> Result<u32> {
        self.ctx.check(a)?;
        Ok(self.ctx.index(a) as u32)
    }
}
