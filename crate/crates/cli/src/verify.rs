//! Re-verification of the witnesses carried by a saved report.
//!
//! Any object with a `witness_kind` key and a non-null `witness` is checked
//! against its own `field`, `r` and `k`:
//!
//! - `pair`: the witness and its inverse are both `r`-primitive and `k`-normal.
//! - `element`: the witness alone is `r`-primitive and `k`-normal.
//! - `direct`: additionally `witness = preimage^q - preimage`.

use serde_json::Value;

use knormal::ffield::FieldSpec;
use knormal::modstruct::{k_normality, m_poly_gcd_degree};
use knormal::search::verify_pair;
use knormal::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct VerifySummary {
    pub checked: usize,
    pub failures: Vec<String>,
}

pub fn verify_report(report: &Value) -> Result<VerifySummary> {
    let mut summary = VerifySummary::default();
    walk(report, &mut summary)?;
    Ok(summary)
}

fn walk(v: &Value, summary: &mut VerifySummary) -> Result<()> {
    match v {
        Value::Object(m) => {
            if let (Some(kind), Some(w)) = (m.get("witness_kind"), m.get("witness")) {
                if !w.is_null() {
                    summary.checked += 1;
                    if let Err(e) = check(v, kind, w) {
                        summary.failures.push(format!("{w}: {e}"));
                    }
                }
            }
            for x in m.values() {
                walk(x, summary)?;
            }
        }
        Value::Array(a) => {
            for x in a {
                walk(x, summary)?;
            }
        }
        _ => {}
    }
    Ok(())
}

fn field_str<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    v.get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse(format!("witness entry lacks string `{key}`")))
}

fn field_u64(v: &Value, key: &str) -> Result<u64> {
    v.get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse(format!("witness entry lacks integer `{key}`")))
}

fn check(entry: &Value, kind: &Value, w: &Value) -> Result<()> {
    let ctx = field_str(entry, "field")?.parse::<FieldSpec>()?.build()?;
    let a = ctx.parse_element(w.as_str().ok_or_else(|| Error::Parse("witness is not a string".into()))?)?;
    let r = field_u64(entry, "r")?;
    let k = field_u64(entry, "k")? as usize;
    let fail = |why: &str| Err(Error::InvalidArgument(format!("{why} in {}", ctx.describe())));
    match kind.as_str() {
        Some("pair") => verify_pair(&ctx, &a, r, k),
        Some("element") => {
            let want = (ctx.size() - 1) / r as u128;
            if ctx.mult_order(&a)? == want && k_normality(&ctx, &a)? == k {
                Ok(())
            } else {
                fail("element witness is not r-primitive k-normal")
            }
        }
        Some("direct") => {
            let beta = ctx.parse_element(field_str(entry, "preimage")?)?;
            let img = ctx.sub(&ctx.frobenius(&beta, 1)?, &beta)?;
            if img != a {
                return fail("witness is not the image of its preimage");
            }
            if m_poly_gcd_degree(&ctx, &a)? != k || m_poly_gcd_degree(&ctx, &ctx.inv(&a)?)? != k {
                return fail("gcd degree test failed");
            }
            verify_pair(&ctx, &a, r, k)
        }
        _ => Err(Error::Parse(format!("unknown witness kind {kind}"))),
    }
}
