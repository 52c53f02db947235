//! Run reports and their JSON and CSV renderings.

use std::collections::BTreeSet;
use std::time::Duration;

use serde_json::{json, Value};

use knormal::ffield::FieldCtx;

/// Bumped whenever a field of the report changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

/// Machine-readable record of one invocation.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub moduli: BTreeSet<String>,
    pub hints_applied: Vec<String>,
    pub elapsed: Duration,
    /// Fixed column order for the CSV projection of `result.rows`.
    pub columns: Option<Vec<&'static str>>,
}

impl RunReport {
    pub fn new(command: &str, inputs: Value) -> RunReport {
        RunReport {
            command: command.to_string(),
            inputs,
            result: Value::Null,
            moduli: BTreeSet::new(),
            hints_applied: Vec::new(),
            elapsed: Duration::ZERO,
            columns: None,
        }
    }

    /// Records the tower a computation ran in.
    pub fn used(&mut self, ctx: &FieldCtx) {
        self.moduli.insert(field_spec(ctx));
    }

    /// The report as a JSON value. `serde_json` maps keep keys sorted, so
    /// serialization is stable.
    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "inputs": self.inputs,
            "result": self.result,
            "provenance": {
                "version": env!("CARGO_PKG_VERSION"),
                "moduli": self.moduli.iter().collect::<Vec<_>>(),
                "hints_applied": self.hints_applied,
            },
            "timing": { "elapsed_ms": self.elapsed.as_secs_f64() * 1e3 },
        })
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        s.push('\n');
        s
    }

    /// Tables become one line per row; anything else becomes `key,value`
    /// lines over the flattened result.
    pub fn render_csv(&self) -> String {
        let mut out = String::new();
        match (&self.columns, self.result.get("rows").and_then(Value::as_array)) {
            (Some(cols), Some(rows)) => {
                out.push_str(&cols.join(","));
                out.push('\n');
                for row in rows {
                    let cells: Vec<String> =
                        cols.iter().map(|c| csv_cell(row.get(*c).unwrap_or(&Value::Null))).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
            }
            _ => {
                out.push_str("key,value\n");
                let mut flat = Vec::new();
                flatten("", &self.result, &mut flat);
                for (k, v) in flat {
                    out.push_str(&format!("{},{}\n", csv_escape(&k), csv_cell(&v)));
                }
            }
        }
        out
    }
}

/// A spec string that rebuilds exactly this tower.
pub fn field_spec(ctx: &FieldCtx) -> String {
    let ext = knormal::fqpoly::PolyQ::new(ctx.fq().clone(), ctx.ext_modulus().to_vec())
        .expect("modulus is a valid polynomial")
        .to_literal();
    let mut s = format!("{}^{}:{}", ctx.p(), ctx.t(), ctx.n());
    if ctx.t() > 1 {
        let base: Vec<String> = ctx.base_modulus().iter().map(u32::to_string).collect();
        s.push_str(&format!(":base={}", base.join(",")));
    }
    s.push_str(&format!(":mod={ext}"));
    s
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, Value)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        other => out.push((prefix.to_string(), other.clone())),
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => csv_escape(s),
        Value::Array(a) => csv_escape(
            &a.iter()
                .map(|x| match x {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect::<Vec<_>>()
                .join(";"),
        ),
        other => other.to_string(),
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Drops the timing block so two reports can be compared byte for byte.
pub fn without_timing(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.remove("timing");
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use knormal::ffield::{make_field, FieldSpec, Overrides};
    use proptest::prelude::*;

    #[test]
    fn csv_cells_are_quoted_when_needed() {
        assert_eq!(csv_cell(&json!("1,0,1")), "\"1,0,1\"");
        assert_eq!(csv_cell(&json!("a\"b")), "\"a\"\"b\"");
        assert_eq!(csv_cell(&json!(["3", "11"])), "3;11");
        assert_eq!(csv_cell(&Value::Null), "");
        assert_eq!(csv_cell(&json!(true)), "true");
    }

    #[test]
    fn flatten_joins_nested_keys() {
        let mut flat = Vec::new();
        flatten("", &json!({"a": {"b": 1}, "c": [{"d": 2}], "e": [3, 4]}), &mut flat);
        let keys: Vec<&str> = flat.iter().map(|(k, _)| k.as_str()).collect();
        assert_eq!(keys, ["a.b", "c.0.d", "e"]);
    }

    #[test]
    fn json_keys_are_sorted() {
        let mut rep = RunReport::new("x", json!({"z": 1, "a": 2}));
        rep.result = json!({"y": 0, "b": 0});
        let text = rep.render_json();
        let pos = |k: &str| text.find(&format!("\"{k}\"")).unwrap();
        assert!(pos("command") < pos("inputs") && pos("inputs") < pos("provenance"));
        assert!(pos("a") < pos("z") && pos("b") < pos("y"));
        assert!(pos("schema_version") < pos("timing"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn spec_strings_rebuild_the_same_tower(
            f in 0usize..6,
            idx in any::<u64>(),
        ) {
            let (p, t, n) = [(2, 1, 5), (3, 1, 4), (2, 2, 3), (3, 2, 2), (5, 1, 3), (2, 3, 2)][f];
            let ctx = make_field(p, t, n, &Overrides::default()).unwrap();
            let spec = field_spec(&ctx);
            let again = spec.parse::<FieldSpec>().unwrap().build().unwrap();
            prop_assert_eq!(field_spec(&again), spec);
            prop_assert_eq!(again.ext_modulus(), ctx.ext_modulus());
            prop_assert_eq!(again.base_modulus(), ctx.base_modulus());
            let a = ctx.from_index(idx as u128 % ctx.size());
            let b = again.parse_element(&ctx.format_element(&a)).unwrap();
            prop_assert_eq!(again.index(&b), ctx.index(&a));
        }
    }
}
