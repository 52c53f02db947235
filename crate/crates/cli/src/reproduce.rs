//! Fixed reproduction targets. Each row carries its expected value and
//! whether the computation matched it.

use clap::ValueEnum;
use serde_json::{json, Value};

use knormal::bounds::test_sieve;
use knormal::intarith::gcd_u64;
use knormal::search::{direct_search_in, search_element_in, search_pair_in, SearchField, SearchOptions};
use knormal::Result;

use crate::report::RunReport;
use crate::{search_json, sieve_json};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    /// Pairs of primitive normal elements with normal inverses.
    SpnbtExceptions,
    /// Pairs of primitive 1-normal elements for n = 5, 6 and x - 1 images.
    T13Exception,
    /// Pairs of primitive 1-normal elements for n = 4, 5, 6.
    ConjectureExceptions,
    /// The sieve with theta = 3 on the degrees 14 to 63.
    Table3Spot,
    /// The sieve with theta = 2 on n = 5, 6.
    Table6Spot,
    /// 2-primitive 2-normal elements, alone and with their inverses.
    Thm11Spot,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::SpnbtExceptions => "spnbt-exceptions",
            Target::T13Exception => "t13-exception",
            Target::ConjectureExceptions => "conjecture-exceptions",
            Target::Table3Spot => "table3-spot",
            Target::Table6Spot => "table6-spot",
            Target::Thm11Spot => "thm11-spot",
        }
    }

    /// CSV columns, in order.
    pub fn columns(self) -> Vec<&'static str> {
        match self {
            Target::SpnbtExceptions | Target::ConjectureExceptions => {
                vec!["q", "n", "r", "k", "found", "expected", "matches", "scanned", "witness"]
            }
            Target::T13Exception => {
                vec!["search", "q", "n", "found", "expected", "matches", "scanned", "witness", "preimage"]
            }
            Target::Table3Spot | Target::Table6Spot => {
                vec!["q", "n", "theta", "holds", "expected", "matches", "d", "big_h", "lhs", "rhs"]
            }
            Target::Thm11Spot => vec![
                "q",
                "n",
                "r",
                "k",
                "element_found",
                "expected_element",
                "matches",
                "pair_found",
                "element_witness",
                "pair_witness",
            ],
        }
    }
}

const THETA3_LISTED: &[(u32, &[u64])] = &[
    (14, &[4, 5, 8, 9, 11, 13, 23, 25, 27, 29, 41, 43, 64, 71, 113, 125, 127, 169, 197, 211, 239, 281, 337, 379, 421, 449, 463, 491, 547, 617, 631, 659, 673, 701, 729, 743, 883, 911, 953]),
    (15, &[4, 7, 8, 11, 13, 16, 19, 29, 31, 41, 49, 61, 64, 71, 121, 151, 181, 211, 241, 256, 271, 331, 361, 421, 571, 631, 751, 841]),
    (16, &[5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31, 41, 49, 73, 81, 89, 97, 113, 193, 241, 257, 289, 337, 401]),
    (17, &[4, 16, 103, 256]),
    (18, &[4, 5, 7, 13, 17, 19, 25, 31, 37, 43, 73, 109, 127, 163, 181, 199, 289, 361]),
    (20, &[7, 9, 11, 13, 19, 29, 31, 41, 61, 81, 101, 121]),
    (21, &[4, 8, 13, 16, 43, 64, 169]),
    (22, &[23, 67, 89]),
    (23, &[47]),
    (24, &[5, 7, 11, 13, 17, 19, 25, 37, 49, 73, 97, 121]),
    (26, &[27, 53]),
    (28, &[13, 29]),
    (30, &[4, 7, 11, 19, 31, 61]),
    (31, &[32]),
    (32, &[17]),
    (36, &[5, 19, 37]),
    (40, &[9, 11, 41]),
    (42, &[43]),
    (45, &[4]),
    (48, &[5, 7]),
    (63, &[5]),
];

const THETA3_FAILURES: &[(u64, u32)] =
    &[(4, 15), (5, 16), (5, 24), (8, 14), (9, 16), (16, 15), (17, 16), (19, 18)];

/// `(q, n, listed)`: listed pairs are those where the sieve is expected to
/// fail; the others are coprime neighbours absent from the list.
const THETA2_SPOTS: &[(u64, u32, bool)] = &[
    (2, 5, true),
    (3, 5, true),
    (4, 5, true),
    (7, 5, true),
    (8, 5, true),
    (9, 5, true),
    (11, 5, true),
    (13, 5, true),
    (16, 5, true),
    (1097, 5, false),
    (1187, 5, false),
    (5, 6, true),
    (7, 6, true),
    (11, 6, true),
    (13, 6, true),
    (25, 6, true),
    (223, 6, false),
    (251, 6, false),
];

pub fn run(target: Target, opts: &SearchOptions, rep: &mut RunReport) -> Result<bool> {
    let rows = match target {
        Target::SpnbtExceptions => {
            let cases = [
                (2, 3, false),
                (2, 4, false),
                (3, 4, false),
                (4, 3, false),
                (5, 4, false),
                (2, 5, true),
                (3, 5, true),
                (7, 4, true),
                (4, 4, true),
                (5, 5, true),
            ];
            pair_rows(&cases, 1, 0, opts, rep)?
        }
        Target::ConjectureExceptions => {
            let cases = [
                (2, 6, false),
                (4, 6, false),
                (3, 6, true),
                (8, 6, true),
                (9, 6, true),
                (5, 4, true),
                (13, 4, true),
                (5, 5, true),
            ];
            pair_rows(&cases, 1, 1, opts, rep)?
        }
        Target::T13Exception => {
            let mut rows = Vec::new();
            let sf = field(4, 5, opts, rep)?;
            let out = search_pair_in(&sf, 1, 1)?;
            rows.push(with_expectation(search_json(&sf, &out, "pair", 1, 1), "search-pair", false));
            let out = direct_search_in(&sf)?;
            rows.push(with_expectation(search_json(&sf, &out, "direct", 1, 1), "direct-search", false));
            for (q, n) in [(2, 5), (3, 5), (2, 7), (5, 6)] {
                let sf = field(q, n, opts, rep)?;
                let out = direct_search_in(&sf)?;
                rows.push(with_expectation(search_json(&sf, &out, "direct", 1, 1), "direct-search", true));
            }
            rows
        }
        Target::Table3Spot => {
            let mut rows = Vec::new();
            for &(n, qs) in THETA3_LISTED {
                for &q in qs {
                    let expected = !THETA3_FAILURES.contains(&(q, n));
                    rows.push(sieve_row(q, n, 3, expected)?);
                }
            }
            rows
        }
        Target::Table6Spot => THETA2_SPOTS
            .iter()
            .map(|&(q, n, listed)| sieve_row(q, n, 2, !listed))
            .collect::<Result<_>>()?,
        Target::Thm11Spot => {
            let mut rows = Vec::new();
            for (q, n) in [(3, 4), (7, 5), (5, 4), (11, 5), (3, 5), (5, 5), (9, 4), (3, 6)] {
                let sf = field(q, n, opts, rep)?;
                let single = search_element_in(&sf, 2, 2)?;
                let pair = search_pair_in(&sf, 2, 2)?;
                let expected = two_primitive_two_normal_exists(q, n as u64);
                let element = search_json(&sf, &single, "element", 2, 2);
                let pair = search_json(&sf, &pair, "pair", 2, 2);
                rows.push(json!({
                    "q": q,
                    "n": n,
                    "r": 2,
                    "k": 2,
                    "element_found": element["found"],
                    "expected_element": expected,
                    "matches": element["found"] == expected,
                    "pair_found": pair["found"],
                    "element_witness": element["witness"],
                    "pair_witness": pair["witness"],
                    "element_search": element,
                    "pair_search": pair,
                }));
            }
            rows
        }
    };
    let all_match = rows.iter().all(|r| r["matches"] == true);
    let mismatches: Vec<Value> = rows
        .iter()
        .filter(|r| r["matches"] != true)
        .map(|r| json!([r["q"], r["n"]]))
        .collect();
    rep.columns = Some(target.columns());
    rep.result = json!({
        "target": target.name(),
        "rows": rows,
        "all_match": all_match,
        "mismatches": mismatches,
    });
    Ok(all_match)
}

/// Existence criterion for a single 2-primitive 2-normal element.
pub fn two_primitive_two_normal_exists(q: u64, n: u64) -> bool {
    q % 2 == 1 && ((n >= 5 && gcd_u64(q * q * q - q, n) != 1) || (n == 4 && q % 4 == 1))
}

fn field(q: u64, n: u32, opts: &SearchOptions, rep: &mut RunReport) -> Result<SearchField> {
    let sf = SearchField::new(q, n, opts)?;
    rep.used(&sf.ctx);
    Ok(sf)
}

fn pair_rows(
    cases: &[(u64, u32, bool)],
    r: u64,
    k: usize,
    opts: &SearchOptions,
    rep: &mut RunReport,
) -> Result<Vec<Value>> {
    let mut rows = Vec::new();
    for &(q, n, expected) in cases {
        let sf = field(q, n, opts, rep)?;
        let out = search_pair_in(&sf, r, k)?;
        let mut row = search_json(&sf, &out, "pair", r, k);
        row["expected"] = json!(expected);
        row["matches"] = json!(out.found == expected);
        rows.push(row);
    }
    Ok(rows)
}

fn with_expectation(mut row: Value, search: &str, expected: bool) -> Value {
    row["search"] = json!(search);
    row["matches"] = json!(row["found"] == expected);
    row["expected"] = json!(expected);
    row
}

fn sieve_row(q: u64, n: u32, theta: u32, expected: bool) -> Result<Value> {
    let out = test_sieve(q, n, theta)?;
    let mut row = sieve_json(&out);
    row["q"] = json!(q);
    row["n"] = json!(n);
    row["theta"] = json!(theta);
    row["expected"] = json!(expected);
    row["matches"] = json!(out.holds == expected);
    let w = row["witness"].clone();
    for key in ["d", "big_h", "lhs", "rhs"] {
        row[key] = w.get(key).cloned().unwrap_or(Value::Null);
    }
    Ok(row)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_element_criterion() {
        let yes = [(5, 4), (9, 4), (13, 4), (11, 5), (5, 5), (3, 6), (7, 6), (3, 8)];
        let no = [(3, 4), (7, 4), (7, 5), (3, 5), (2, 6), (4, 5), (5, 3), (3, 3)];
        for (q, n) in yes {
            assert!(two_primitive_two_normal_exists(q, n), "({q},{n})");
        }
        for (q, n) in no {
            assert!(!two_primitive_two_normal_exists(q, n), "({q},{n})");
        }
    }

    #[test]
    fn theta3_list_contains_every_failure() {
        for &(q, n) in THETA3_FAILURES {
            assert!(THETA3_LISTED.iter().any(|&(m, qs)| m == n && qs.contains(&q)));
        }
        let total: usize = THETA3_LISTED.iter().map(|(_, qs)| qs.len()).sum();
        assert_eq!(total, 172);
    }

    #[test]
    fn column_names_are_row_keys() {
        let mut rep = RunReport::new("reproduce", json!({}));
        run(Target::SpnbtExceptions, &SearchOptions::default(), &mut rep).unwrap();
        let row = &rep.result["rows"][0];
        for c in Target::SpnbtExceptions.columns() {
            assert!(row.get(c).is_some(), "{c}");
        }
    }
}
