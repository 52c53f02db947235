//! Text forms for fields and their elements.

use std::sync::Arc;

use super::{make_field, FieldCtx, Fq, Overrides};
use crate::error::{Error, Result};
use crate::intarith::factor_u64;

/// A parsed field spec `p^t:n[:mod=c0,c1,...][:base=c0,c1,...]`.
///
/// `q:n` with `q` a prime power is accepted as shorthand. `mod=` gives the
/// extension modulus as F_q literals; `base=` gives the modulus of F_q over
/// F_p as residues. Both list coefficients constant term first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u64,
    pub t: u32,
    pub n: usize,
    pub base_mod: Option<Vec<u32>>,
    pub ext_mod: Option<String>,
}

fn bad(s: &str, why: &str) -> Error {
    Error::Parse(format!("field spec `{s}`: {why}"))
}

/// Splits a prime power into `(p, t)`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let f = factor_u64(q).ok()?;
    match f.factors() {
        [(p, t)] => Some((p.try_into().ok()?, *t)),
        _ => None,
    }
}

/// Every `(p, t, n)` with `q = p^t` and `q^n <= max_size`, ordered by
/// field size, then `q`.
pub fn desk_fields(max_size: u128) -> Vec<(u64, u32, usize)> {
    let mut out = Vec::new();
    for q in 2..=max_size.min(u64::MAX as u128) as u64 {
        let Some((p, t)) = prime_power(q) else { continue };
        let mut size = q as u128;
        let mut n = 1;
        while size <= max_size {
            out.push((size, q, p, t, n));
            size *= q as u128;
            n += 1;
        }
    }
    out.sort();
    out.into_iter().map(|(_, _, p, t, n)| (p, t, n)).collect()
}

impl std::str::FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<FieldSpec> {
        let mut parts = s.split(':');
        let head = parts.next().unwrap_or("").trim();
        let n_str = parts.next().ok_or_else(|| bad(s, "expected `p^t:n`"))?;
        let (p, t) = match head.split_once('^') {
            Some((p, t)) => (
                p.trim().parse::<u64>().map_err(|_| bad(s, "bad p"))?,
                t.trim().parse::<u32>().map_err(|_| bad(s, "bad t"))?,
            ),
            None => {
                let q: u64 = head.parse().map_err(|_| bad(s, "bad q"))?;
                prime_power(q).ok_or_else(|| bad(s, "q is not a prime power"))?
            }
        };
        let n: usize = n_str.trim().parse().map_err(|_| bad(s, "bad n"))?;
        let mut spec = FieldSpec {
            p,
            t,
            n,
            base_mod: None,
            ext_mod: None,
        };
        for opt in parts {
            let (k, v) = opt.split_once('=').ok_or_else(|| bad(s, "expected key=value"))?;
            match k.trim() {
                "mod" => spec.ext_mod = Some(v.trim().to_string()),
                "base" => {
                    let coeffs = v
                        .split(',')
                        .map(|c| c.trim().parse::<u32>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| bad(s, "bad base modulus"))?;
                    spec.base_mod = Some(coeffs);
                }
                other => return Err(bad(s, &format!("unknown option `{other}`"))),
            }
        }
        Ok(spec)
    }
}

impl FieldSpec {
    pub fn build(&self) -> Result<Arc<FieldCtx>> {
        let ext = match &self.ext_mod {
            None => None,
            Some(text) => {
                let fq = match &self.base_mod {
                    Some(m) => Fq::with_modulus(self.p, self.t, m.clone())?,
                    None => Fq::new(self.p, self.t)?,
                };
                Some(parse_fq_list(&fq, text)?)
            }
        };
        make_field(
            self.p,
            self.t,
            self.n,
            &Overrides {
                base: self.base_mod.clone(),
                ext,
            },
        )
    }
}

/// One F_q literal: dash-separated F_p residues, constant digit first.
pub fn parse_fq(fq: &Fq, s: &str) -> Result<u32> {
    let digits = s
        .split('-')
        .map(|d| d.trim().parse::<u32>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::Parse(format!("bad F_q literal `{s}`")))?;
    fq.from_digits(&digits)
}

/// Comma-separated F_q literals.
pub fn parse_fq_list(fq: &Fq, s: &str) -> Result<Vec<u32>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|c| parse_fq(fq, c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_specs() {
        let s: FieldSpec = "2^2:5".parse().unwrap();
        assert_eq!((s.p, s.t, s.n), (2, 2, 5));
        let s: FieldSpec = "9:6".parse().unwrap();
        assert_eq!((s.p, s.t, s.n), (3, 2, 6));
        let s: FieldSpec = "2^1:3:mod=1,0,1,1".parse().unwrap();
        assert_eq!(s.build().unwrap().ext_modulus(), &[1, 0, 1, 1]);
        let s: FieldSpec = "2^2:2:base=1,1,1:mod=1-1,1,1".parse().unwrap();
        assert_eq!(s.build().unwrap().size(), 16);
        assert!("6:2".parse::<FieldSpec>().is_err());
        assert!("2^1".parse::<FieldSpec>().is_err());
        assert!("2^1:3:foo=1".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn element_literals_roundtrip() {
        let ctx = "3^2:3".parse::<FieldSpec>().unwrap().build().unwrap();
        let a = ctx.parse_element("1-2,0,2").unwrap();
        assert_eq!(a.coeffs(), &[7, 0, 2]);
        assert_eq!(ctx.format_element(&a), "1-2,0-0,2-0");
        assert_eq!(ctx.parse_element(&ctx.format_element(&a)).unwrap(), a);
        assert!(ctx.parse_element("3").is_err());
        assert!(ctx.parse_element("1,1,1,1").is_err());
    }
}
