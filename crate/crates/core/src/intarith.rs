//! Exact integer number theory.
//!
//! Factorization runs trial division up to 10^6, then Brent's variant of
//! Pollard rho with fixed seeds, and certifies every reported prime with a
//! deterministic Miller-Rabin test (BPSW above 3.3e24). Externally supplied
//! factorizations ("hints") are accepted after verification.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock, RwLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

const TRIAL_LIMIT: u32 = 1_000_000;
/// Default ceiling for the prime sieve behind [`c_nu`].
pub const DEFAULT_SIEVE_CEILING_BITS: u32 = 16;
/// Default number of rho iterations spent on one composite cofactor.
pub const DEFAULT_RHO_EFFORT: u64 = 1 << 23;

/// A complete, certified factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntFactorization {
    value: BigUint,
    factors: Vec<(BigUint, u32)>,
}

impl IntFactorization {
    /// Builds a factorization from prime powers, checking order and product
    /// but not primality.
    fn from_parts(value: BigUint, mut factors: Vec<(BigUint, u32)>) -> Self {
        factors.sort();
        let mut merged: Vec<(BigUint, u32)> = Vec::with_capacity(factors.len());
        for (p, e) in factors {
            match merged.last_mut() {
                Some((last, le)) if *last == p => *le += e,
                _ => merged.push((p, e)),
            }
        }
        debug_assert_eq!(
            merged
                .iter()
                .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e)),
            value
        );
        IntFactorization {
            value,
            factors: merged,
        }
    }

    pub fn one() -> Self {
        IntFactorization {
            value: BigUint::one(),
            factors: Vec::new(),
        }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    /// Prime powers in increasing order of the prime.
    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn num_distinct(&self) -> usize {
        self.factors.len()
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |(_, e)| *e)
    }

    pub fn rad(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (p, _)| acc * p)
    }

    pub fn phi(&self) -> BigUint {
        self.factors.iter().fold(BigUint::one(), |acc, (p, e)| {
            acc * p.pow(e - 1) * (p - BigUint::one())
        })
    }

    pub fn moebius(&self) -> i32 {
        if self.factors.iter().any(|(_, e)| *e > 1) {
            0
        } else if self.factors.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Number of squarefree divisors, `2^omega`.
    pub fn w(&self) -> BigUint {
        BigUint::one() << self.factors.len()
    }

    /// Factorization of a divisor `d` of the value, derived without any new
    /// factoring work.
    pub fn restrict_to_divisor(&self, d: &BigUint) -> Result<IntFactorization> {
        if d.is_zero() || !(&self.value % d).is_zero() {
            return Err(Error::NotADivisor(d.to_string(), self.value.to_string()));
        }
        let mut rest = d.clone();
        let mut factors = Vec::new();
        for (p, _) in &self.factors {
            let mut e = 0;
            while (&rest % p).is_zero() {
                rest /= p;
                e += 1;
            }
            if e > 0 {
                factors.push((p.clone(), e));
            }
        }
        debug_assert!(rest.is_one());
        Ok(IntFactorization {
            value: d.clone(),
            factors,
        })
    }

    /// All divisors of the radical, each with its factorization, ordered by
    /// (number of prime factors, value).
    pub fn squarefree_divisors(&self) -> Vec<BigUint> {
        let k = self.factors.len();
        let mut out: Vec<(u32, BigUint)> = (0u64..1 << k)
            .map(|mask| {
                let v = (0..k)
                    .filter(|i| mask >> i & 1 == 1)
                    .fold(BigUint::one(), |acc, i| acc * &self.factors[i].0);
                (mask.count_ones(), v)
            })
            .collect();
        out.sort();
        out.into_iter().map(|(_, v)| v).collect()
    }

    /// Every positive divisor, in increasing order.
    pub fn divisors(&self) -> Vec<BigUint> {
        let mut divs = vec![BigUint::one()];
        for (p, e) in &self.factors {
            let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
            for d in &divs {
                let mut pk = d.clone();
                next.push(pk.clone());
                for _ in 0..*e {
                    pk *= p;
                    next.push(pk.clone());
                }
            }
            divs = next;
        }
        divs.sort();
        divs
    }
}

impl fmt::Display for IntFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| {
                if *e == 1 {
                    p.to_string()
                } else {
                    format!("{p}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// Externally supplied factorizations, keyed by the factored value.
///
/// Text format, one entry per line, `#` starts a comment:
///
/// ```text
/// 1023 = 3 * 11 * 31
/// 80 = 2^4 * 5
/// ```
#[derive(Debug, Clone, Default)]
pub struct Hints {
    entries: HashMap<BigUint, Vec<(BigUint, u32)>>,
}

impl Hints {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, n: BigUint, factors: Vec<(BigUint, u32)>) {
        self.entries.insert(n, factors);
    }

    fn lookup(&self, n: &BigUint) -> Option<&Vec<(BigUint, u32)>> {
        self.entries.get(n)
    }

    /// Checks one hint: primality of each claimed prime and the product.
    fn verify(n: &BigUint, factors: &[(BigUint, u32)]) -> Result<IntFactorization> {
        let mut prod = BigUint::one();
        for (p, e) in factors {
            if *e == 0 {
                return Err(Error::InvalidHint(n.to_string(), "zero exponent".into()));
            }
            if !is_prime(p) {
                return Err(Error::InvalidHint(n.to_string(), format!("{p} is not prime")));
            }
            prod *= p.pow(*e);
        }
        if &prod != n {
            return Err(Error::InvalidHint(
                n.to_string(),
                format!("product is {prod}"),
            ));
        }
        Ok(IntFactorization::from_parts(n.clone(), factors.to_vec()))
    }

    /// Verifies every entry.
    pub fn validate(&self) -> Result<()> {
        for (n, f) in &self.entries {
            Hints::verify(n, f)?;
        }
        Ok(())
    }
}

impl FromStr for Hints {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut hints = Hints::default();
        for (lineno, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::Parse(format!("hints line {}: {msg}", lineno + 1));
            let (lhs, rhs) = line.split_once('=').ok_or_else(|| bad("expected `N = p^e * ...`"))?;
            let n: BigUint = lhs.trim().parse().map_err(|_| bad("bad integer"))?;
            let mut factors = Vec::new();
            for term in rhs.split('*') {
                let term = term.trim();
                let (p, e) = match term.split_once('^') {
                    Some((p, e)) => (p.trim(), e.trim().parse::<u32>().map_err(|_| bad("bad exponent"))?),
                    None => (term, 1),
                };
                let p: BigUint = p.parse().map_err(|_| bad("bad prime"))?;
                factors.push((p, e));
            }
            hints.insert(n, factors);
        }
        Ok(hints)
    }
}

fn global_hints() -> &'static RwLock<Hints> {
    static HINTS: OnceLock<RwLock<Hints>> = OnceLock::new();
    HINTS.get_or_init(|| RwLock::new(Hints::default()))
}

/// Makes `hints` visible to every factorization performed afterwards in this
/// process (field contexts, bounds). Entries are verified first.
pub fn install_hints(hints: &Hints) -> Result<()> {
    hints.validate()?;
    let mut g = global_hints().write().expect("hint store poisoned");
    for (n, f) in &hints.entries {
        g.insert(n.clone(), f.clone());
    }
    Ok(())
}

/// Hints that have actually been consumed, for provenance reporting.
pub fn hints_applied() -> Vec<String> {
    let used = used_hints().lock().expect("hint log poisoned");
    let mut v: Vec<String> = used.iter().cloned().collect();
    v.sort();
    v.dedup();
    v
}

fn used_hints() -> &'static Mutex<Vec<String>> {
    static USED: OnceLock<Mutex<Vec<String>>> = OnceLock::new();
    USED.get_or_init(|| Mutex::new(Vec::new()))
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(TRIAL_LIMIT))
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(limit: u32) -> Vec<u32> {
    let limit = limit as usize;
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn mul_mod64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod64(r, b, m);
        }
        b = mul_mod64(b, b, m);
        e >>= 1;
    }
    r
}

fn miller_rabin64(n: u64, bases: &[u64]) -> bool {
    let mut d = n - 1;
    let s = d.trailing_zeros();
    d >>= s;
    'outer: for &a in bases {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod64(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn miller_rabin_big(n: &BigUint, bases: &[u64]) -> bool {
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'outer: for &a in bases {
        let a = BigUint::from(a) % n;
        if a.is_zero() {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn jacobi(a: &BigInt, n: &BigUint) -> i32 {
    let n_int = BigInt::from(n.clone());
    let mut a = a.mod_floor(&n_int).to_biguint().expect("non-negative");
    let mut n = n.clone();
    let mut result = 1;
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = (&n % 8u32).to_u32().unwrap();
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u32() == Some(3) && (&n % 4u32).to_u32() == Some(3) {
            result = -result;
        }
        a %= &n;
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// Strong Lucas probable-prime test with Selfridge parameters.
fn strong_lucas(n: &BigUint) -> bool {
    if n.sqrt().pow(2) == *n {
        return false;
    }
    let mut d_abs: u64 = 5;
    let mut positive = true;
    let d = loop {
        let d = if positive {
            BigInt::from(d_abs)
        } else {
            -BigInt::from(d_abs)
        };
        match jacobi(&d, n) {
            -1 => break d,
            0 if BigUint::from(d_abs) != *n => return false,
            _ => {}
        }
        d_abs += 2;
        positive = !positive;
    };
    let n_int = BigInt::from(n.clone());
    let p = BigInt::one();
    let q = (BigInt::one() - &d) / 4;
    let md = |x: BigInt| x.mod_floor(&n_int);
    let half = |x: BigInt| {
        let x = if x.is_odd() { x + &n_int } else { x };
        md(x >> 1)
    };

    let np1: BigInt = BigInt::from(n.clone()) + 1;
    let s = np1.trailing_zeros().unwrap_or(0);
    let dd = &np1 >> s;

    let (mut u, mut v, mut qk) = (BigInt::zero(), BigInt::from(2), BigInt::one());
    let bits = dd.bits();
    for i in (0..bits).rev() {
        // doubling
        u = md(&u * &v);
        v = md(&v * &v - (&qk << 1));
        qk = md(&qk * &qk);
        if dd.bit(i) {
            let u2 = half(&p * &u + &v);
            let v2 = half(&d * &u + &p * &v);
            u = u2;
            v = v2;
            qk = md(&qk * &q);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = md(&v * &v - (&qk << 1));
        if v.is_zero() {
            return true;
        }
        qk = md(&qk * &qk);
    }
    false
}

/// Deterministic Miller-Rabin below 3.3e24, BPSW above.
pub fn is_prime(n: &BigUint) -> bool {
    if n < &BigUint::from(2u32) {
        return false;
    }
    for &p in &small_primes()[..64] {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    const BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    if let Some(small) = n.to_u64() {
        return miller_rabin64(small, &BASES[..12]);
    }
    // 3317044064679887385961981 is the least strong pseudoprime to all 13 bases.
    let mr_bound: BigUint = "3317044064679887385961981".parse().unwrap();
    if *n < mr_bound {
        return miller_rabin_big(n, &BASES);
    }
    miller_rabin_big(n, &[2]) && strong_lucas(n)
}

pub fn is_prime_u64(n: u64) -> bool {
    is_prime(&BigUint::from(n))
}

fn rho64(n: u64, c: u64, budget: &mut u64) -> Option<u64> {
    let f = |x: u64| (mul_mod64(x, x, n) + c) % n;
    let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
    let mut g = 1u64;
    let mut r = 1u64;
    let mut q = 1u64;
    const M: u64 = 128;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let steps = M.min(r - k);
            for _ in 0..steps {
                y = f(y);
                q = mul_mod64(q, x.abs_diff(y), n);
            }
            *budget = budget.saturating_sub(steps);
            g = q.gcd(&n);
            k += M;
        }
        r *= 2;
        if *budget == 0 && g == 1 {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn rho_big(n: &BigUint, c: u64, budget: &mut u64) -> Option<BigUint> {
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let absdiff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let mut x;
    let mut y = BigUint::from(2u32);
    let mut ys = y.clone();
    let mut g = BigUint::one();
    let mut q = BigUint::one();
    let mut r = 1u64;
    const M: u64 = 128;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let steps = M.min(r - k);
            for _ in 0..steps {
                y = f(&y);
                q = (&q * absdiff(&x, &y)) % n;
            }
            *budget = budget.saturating_sub(steps);
            g = q.gcd(n);
            k += M;
        }
        r *= 2;
        if *budget == 0 && g.is_one() {
            return None;
        }
        if g.is_one() {
            continue;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = absdiff(&x, &ys).gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        return (&g != n).then_some(g);
    }
    None
}

/// Finds a nontrivial factor of a composite `n`, or `None` when the effort
/// bound runs out.
fn find_factor(n: &BigUint, effort: u64) -> Option<BigUint> {
    for k in (2..=n.bits() as u32).rev() {
        let root = n.nth_root(k);
        if root > BigUint::one() && root.pow(k) == *n {
            return Some(root);
        }
    }
    let mut budget = effort;
    for c in 1..=64u64 {
        if budget == 0 {
            break;
        }
        let found = match n.to_u64() {
            Some(small) => rho64(small, c, &mut budget).map(BigUint::from),
            None => rho_big(n, c, &mut budget),
        };
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Factors `n` completely. A hint for `n` (or for any cofactor met along the
/// way) is used verbatim once verified.
pub fn factor_int_with(n: &BigUint, hints: Option<&Hints>, effort: u64) -> Result<IntFactorization> {
    if n.is_zero() {
        return Err(Error::InvalidArgument("cannot factor 0".into()));
    }
    let global = global_hints().read().expect("hint store poisoned");
    let lookup = |m: &BigUint| -> Option<Vec<(BigUint, u32)>> {
        hints
            .and_then(|h| h.lookup(m))
            .or_else(|| global.lookup(m))
            .cloned()
    };
    let note_hint = |m: &BigUint| used_hints().lock().expect("hint log poisoned").push(m.to_string());

    if let Some(f) = lookup(n) {
        let fact = Hints::verify(n, &f)?;
        note_hint(n);
        return Ok(fact);
    }

    let mut rest = n.clone();
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    for &p in small_primes() {
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut e = 0;
        while (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((pb, e));
        }
    }

    let mut stack = Vec::new();
    if !rest.is_one() {
        stack.push(rest);
    }
    while let Some(m) = stack.pop() {
        if let Some(f) = lookup(&m) {
            let fact = Hints::verify(&m, &f)?;
            note_hint(&m);
            factors.extend(fact.factors);
            continue;
        }
        if is_prime(&m) {
            factors.push((m, 1));
            continue;
        }
        match find_factor(&m, effort) {
            Some(d) => {
                let other = &m / &d;
                stack.push(d);
                stack.push(other);
            }
            None => return Err(Error::FactorizationIncomplete(n.to_string(), m.to_string())),
        }
    }
    Ok(IntFactorization::from_parts(n.clone(), factors))
}

/// Factors `n` with the default effort bound.
pub fn factor_int(n: &BigUint, hints: Option<&Hints>) -> Result<IntFactorization> {
    factor_int_with(n, hints, DEFAULT_RHO_EFFORT)
}

pub fn factor_u64(n: u64) -> Result<IntFactorization> {
    factor_int(&BigUint::from(n), None)
}

/// Value of the d-th cyclotomic polynomial at `q`.
pub fn cyclotomic_value(d: u64, q: &BigUint) -> BigUint {
    let fd = factor_u64(d).expect("small integers always factor");
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for e in fd.divisors() {
        let e = e.to_u64().unwrap();
        let mu = factor_u64(d / e).unwrap().moebius();
        let term = q.pow(e as u32) - BigUint::one();
        match mu {
            1 => num *= term,
            -1 => den *= term,
            _ => {}
        }
    }
    num / den
}

/// Factorization of `q^n - 1`, split along its cyclotomic factors first so
/// rho only ever sees the (much smaller) values of the cyclotomic polynomials.
/// Results are memoized per `(q, n)`.
pub fn factor_qn_minus_1(q: u64, n: u32) -> Result<IntFactorization> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), IntFactorization>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().expect("cache poisoned").get(&(q, n)) {
        return Ok(f.clone());
    }
    let qb = BigUint::from(q);
    let value = qb.pow(n) - BigUint::one();
    if value.is_zero() {
        return Err(Error::InvalidArgument("q^n - 1 = 0".into()));
    }
    let fact = match global_hints().read().expect("hint store poisoned").lookup(&value) {
        Some(_) => factor_int(&value, None)?,
        None => {
            let mut parts = Vec::new();
            for d in factor_u64(n as u64)?.divisors() {
                let d = d.to_u64().unwrap();
                let phi_d = cyclotomic_value(d, &qb);
                parts.extend(factor_int(&phi_d, None)?.factors);
            }
            IntFactorization::from_parts(value, parts)
        }
    };
    cache.lock().expect("cache poisoned").insert((q, n), fact.clone());
    Ok(fact)
}

/// Which arithmetic function [`arith_int`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntFunction {
    Rad,
    Phi,
    Moebius,
    W,
}

pub fn arith_int(n: &BigUint, which: IntFunction) -> Result<BigInt> {
    let f = factor_int(n, None)?;
    Ok(match which {
        IntFunction::Rad => BigInt::from(f.rad()),
        IntFunction::Phi => BigInt::from(f.phi()),
        IntFunction::Moebius => BigInt::from(f.moebius()),
        IntFunction::W => BigInt::from(f.w()),
    })
}

/// Which primes enter the constant `C_nu`.
#[derive(Debug, Clone, Copy)]
pub enum CNuMode<'a> {
    /// Primes `p <= 2^nu` dividing the given integer.
    ExactFor(&'a IntFactorization),
    /// Every prime `p <= 2^nu`.
    AllPrimesBelow,
}

/// Upper bound for the constant `C_nu = prod 2 / p^(1/nu)`, carried as its
/// natural logarithm so large products stay representable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CNu {
    pub nu: f64,
    /// ln C_nu rounded upward.
    pub ln_upper: f64,
    /// Number of primes in the product.
    pub primes: usize,
}

impl CNu {
    pub fn value_upper(&self) -> f64 {
        self.ln_upper.exp()
    }
}

/// Evaluates `C_nu` in log space, rounded upward: the sum carries a margin of
/// 1e-13 relative to the total magnitude of its terms, far above the f64
/// accumulation error for the prime counts allowed here.
pub fn c_nu(nu: f64, mode: CNuMode<'_>) -> Result<CNu> {
    c_nu_with_ceiling(nu, mode, DEFAULT_SIEVE_CEILING_BITS)
}

pub fn c_nu_with_ceiling(nu: f64, mode: CNuMode<'_>, ceiling_bits: u32) -> Result<CNu> {
    if !(nu > 0.0) {
        return Err(Error::InvalidArgument(format!("nu must be positive, got {nu}")));
    }
    let limit = 2f64.powf(nu);
    let too_large = || Error::NuTooLarge { nu, ceiling_bits };
    let primes: Vec<u64> = match mode {
        CNuMode::AllPrimesBelow => {
            if limit > (1u64 << ceiling_bits) as f64 {
                return Err(too_large());
            }
            primes_up_to(limit.floor() as u32)
                .into_iter()
                .map(u64::from)
                .collect()
        }
        CNuMode::ExactFor(m) => m
            .primes()
            .filter_map(|p| p.to_u64())
            .filter(|&p| (p as f64) <= limit)
            .collect(),
    };
    let ln2 = std::f64::consts::LN_2;
    let mut sum = 0.0f64;
    let mut magnitude = 0.0f64;
    for &p in &primes {
        let term = ln2 - (p as f64).ln() / nu;
        sum += term;
        magnitude += ln2 + ((p as f64).ln() / nu).abs();
    }
    let ln_upper = sum + 1e-13 * (magnitude + 1.0);
    Ok(CNu {
        nu,
        ln_upper,
        primes: primes.len(),
    })
}

/// Integer helpers for the 64-bit quantities used across the crate.
pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

pub fn to_bigint(n: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, n.clone())
}
