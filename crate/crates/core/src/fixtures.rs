//! Naive oracles and the committed regression values they produced.
//!
//! The oracles deliberately share no enumeration or elimination code with
//! the main modules: commuting pairs are counted by literal double loops
//! over group elements, tableaux by backtracking generation, and shapes by
//! rank sequences through a separately written row-insertion elimination.
//! Their outputs are committed in `fixtures/fixtures.json` and the main
//! paths are held to them.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use num::{BigUint, Integer, Zero};
use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

/// Date stamp written into provenance records when regenerating.
pub const GENERATED_ON: &str = "2026-08-14";

/// One committed regression value.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub key: String,
    pub value: serde_json::Value,
    pub provenance: serde_json::Value,
}

/// Oracle-side enumeration cap: pair loops refuse beyond `q^e > 2^24`.
const ORACLE_BITS: u32 = 24;

fn oracle_budget(q: u64, exponent: u32) -> Result<()> {
    let limit = 1u128 << ORACLE_BITS;
    let mut acc: u128 = 1;
    for _ in 0..exponent {
        acc = acc.saturating_mul(q as u128);
        if acc > limit {
            return Err(Error::BudgetExceeded(format!("{q}^{exponent}"), ORACLE_BITS));
        }
    }
    Ok(())
}

/// Plain row-major multiply on raw entry buffers.
fn naive_mul(x: &[u32], y: &[u32], n: usize, f: &FieldSpec) -> Vec<u32> {
    let mut out = vec![0u32; n * n];
    for i in 0..n {
        for t in 0..n {
            let a = x[i * n + t];
            if a == 0 {
                continue;
            }
            for j in 0..n {
                let b = y[t * n + j];
                if b != 0 {
                    out[i * n + j] = f.add_raw(out[i * n + j], f.mul_raw(a, b));
                }
            }
        }
    }
    out
}

/// All unitriangular matrices (1s on the diagonal) as raw buffers.
fn unitriangular_elements(n: usize, f: &FieldSpec) -> Vec<Vec<u32>> {
    let q = f.order();
    let mut cells = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            cells.push(i * n + j);
        }
    }
    let mut base = vec![0u32; n * n];
    for i in 0..n {
        base[i * n + i] = 1;
    }
    let mut out = vec![base.clone()];
    for &cell in &cells {
        let mut next = Vec::with_capacity(out.len() * q as usize);
        for m in &out {
            for v in 0..q {
                let mut grown = m.clone();
                grown[cell] = v;
                next.push(grown);
            }
        }
        out = next;
    }
    out
}

/// Counts commuting ordered pairs by comparing both products, pair by
/// pair; no centralizer shortcut.
pub fn oracle_comm_count(n: usize, spec: &Arc<FieldSpec>) -> Result<BigUint> {
    let q = spec.order() as u64;
    let d = (n * (n - 1) / 2) as u32;
    oracle_budget(q, 2 * d)?;
    let elements = unitriangular_elements(n, spec);
    let mut count = 0u64;
    for x in &elements {
        for y in &elements {
            if naive_mul(x, y, n, spec) == naive_mul(y, x, n, spec) {
                count += 1;
            }
        }
    }
    Ok(BigUint::from(count))
}

/// Counts standard fillings of the diagram by backtracking: numbers are
/// placed in increasing order, each at the end of some row whose length
/// stays within the shape and strictly below the row above.
pub fn oracle_syt(parts: &[usize]) -> Result<u64> {
    let n: usize = parts.iter().sum();
    if n > 8 {
        return Err(Error::BudgetExceeded(format!("tableaux of size {n}"), 3));
    }
    if parts.windows(2).any(|w| w[0] < w[1]) || parts.iter().any(|&p| p == 0) {
        return Err(Error::InvalidPartition(format!("{parts:?}")));
    }
    fn place(filled: &mut [usize], parts: &[usize], remaining: usize) -> u64 {
        if remaining == 0 {
            return 1;
        }
        let mut total = 0;
        for i in 0..parts.len() {
            let can_grow = filled[i] < parts[i] && (i == 0 || filled[i] < filled[i - 1]);
            if can_grow {
                filled[i] += 1;
                total += place(filled, parts, remaining - 1);
                filled[i] -= 1;
            }
        }
        total
    }
    Ok(place(&mut vec![0; parts.len()], parts, n))
}

/// Rank by insertion: rows are folded one at a time into a growing
/// reduced spanning set, each reduced against the pivots seen so far.
pub fn oracle_rank(rows: &[Vec<u32>], spec: &FieldSpec) -> usize {
    let mut basis: Vec<(usize, Vec<u32>)> = Vec::new();
    for row in rows {
        let mut v = row.clone();
        'reduce: loop {
            let Some(lead) = v.iter().position(|&x| x != 0) else {
                break 'reduce;
            };
            match basis.iter().find(|(p, _)| *p == lead) {
                None => {
                    let inv = spec.inv_raw(v[lead]);
                    for x in v.iter_mut() {
                        *x = spec.mul_raw(*x, inv);
                    }
                    basis.push((lead, v));
                    break 'reduce;
                }
                Some((_, w)) => {
                    let c = v[lead];
                    for (x, y) in v.iter_mut().zip(w) {
                        *x = spec.sub_raw(*x, spec.mul_raw(c, *y));
                    }
                }
            }
        }
    }
    basis.len()
}

/// Jordan type of a nilpotent matrix from the rank sequence of its powers,
/// all through the oracle-side multiply and elimination.
pub fn oracle_shape(mat: &[u32], n: usize, spec: &FieldSpec) -> Vec<usize> {
    let as_rows = |m: &[u32]| -> Vec<Vec<u32>> {
        (0..n).map(|i| m[i * n..(i + 1) * n].to_vec()).collect()
    };
    let mut ranks = vec![n];
    let mut power = mat.to_vec();
    loop {
        let r = oracle_rank(&as_rows(&power), spec);
        ranks.push(r);
        if r == 0 {
            break;
        }
        power = naive_mul(&power, mat, n, spec);
    }
    let col_lengths: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut parts = Vec::new();
    let mut i = 1;
    loop {
        let count = col_lengths.iter().filter(|&&c| c >= i).count();
        if count == 0 {
            break;
        }
        parts.push(count);
        i += 1;
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

fn decimal(v: &BigUint) -> serde_json::Value {
    serde_json::Value::String(v.to_string())
}

fn provenance(oracle: &str, parameters: &str) -> serde_json::Value {
    serde_json::json!({
        "oracle": oracle,
        "parameters": parameters,
        "date": GENERATED_ON,
    })
}

/// Recomputes every committed value from scratch. Slow-ish (seconds); used
/// to regenerate `fixtures/fixtures.json` and by the test holding the
/// committed file to the oracles.
pub fn generate_fixture_data() -> Result<serde_json::Value> {
    let mut entries = Vec::new();
    let mut push = |key: &str, value: serde_json::Value, prov: serde_json::Value| {
        entries.push(serde_json::json!({
            "key": key,
            "value": value,
            "provenance": prov,
        }));
    };

    // Commuting-pair totals and the class counts they imply.
    for (n, q_list) in [(2usize, &[2u64, 3, 4, 5][..]), (3, &[2, 4, 3, 5][..]), (4, &[2, 3][..])] {
        let mut pairs = serde_json::Map::new();
        let mut counts = serde_json::Map::new();
        let mut sorted: Vec<u64> = q_list.to_vec();
        sorted.sort_unstable();
        for &q in &sorted {
            let spec = FieldSpec::from_order(q)?;
            let comm = oracle_comm_count(n, &spec)?;
            let order = num::pow::pow(BigUint::from(q), n * (n - 1) / 2);
            let (k, rem) = comm.div_rem(&order);
            if !rem.is_zero() {
                return Err(Error::InexactDivision(comm.to_string(), order.to_string()));
            }
            pairs.insert(q.to_string(), decimal(&comm));
            counts.insert(q.to_string(), decimal(&k));
        }
        push(
            &format!("comm_pairs/n{n}"),
            serde_json::Value::Object(pairs),
            provenance("pairwise product comparison", &format!("n={n}, q in {sorted:?}")),
        );
        push(
            &format!("class_count/n{n}"),
            serde_json::Value::Object(counts),
            provenance(
                "pairwise product comparison + orbit count division",
                &format!("n={n}, q in {sorted:?}"),
            ),
        );
    }

    // Standard tableau counts for every shape up to size 8.
    let mut syt = serde_json::Map::new();
    for n in 1..=8 {
        for lam in crate::partitions::partitions_of(n) {
            syt.insert(lam.to_string(), decimal(&BigUint::from(oracle_syt(lam.parts())?)));
        }
    }
    push(
        "syt",
        serde_json::Value::Object(syt),
        provenance("backtracking tableau generation", "all shapes, n <= 8"),
    );

    // Commuting probabilities of small slices, exact fractions.
    let mut cp = serde_json::Map::new();
    for (n, k, q) in [(4usize, 0usize, 2u64), (4, 1, 2), (5, 1, 2), (5, 1, 3)] {
        let params = crate::lcs::LcsParams::new(n, k, FieldSpec::from_order(q)?)?;
        let value = crate::lcs::cp_direct(&params)?;
        cp.insert(format!("{n},{k},{q}"), serde_json::Value::String(value.to_string()));
    }
    push(
        "cp",
        serde_json::Value::Object(cp),
        provenance(
            "per-element restricted centralizer enumeration",
            "keys are n,k,q",
        ),
    );

    // Interpolated class-count polynomials (regression; the n=3 one is the
    // known quadratic).
    for (n, q_list) in [(3usize, &[2u64, 3, 4, 5][..]), (4, &[2, 3, 4, 5, 7][..])] {
        let counts: Vec<BigUint> = q_list
            .iter()
            .map(|&q| {
                Ok(crate::census::class_count(n, &FieldSpec::from_order(q)?)?.class_count)
            })
            .collect::<Result<_>>()?;
        let poly = crate::census::interpolate_class_polynomial(n, q_list, &counts)?;
        let coeffs: Vec<serde_json::Value> = poly
            .coeffs
            .iter()
            .map(|c| serde_json::Value::String(c.to_string()))
            .collect();
        push(
            &format!("class_polynomial/n{n}"),
            serde_json::Value::Array(coeffs),
            provenance(
                "census + exact Lagrange interpolation",
                &format!("n={n}, q in {q_list:?}"),
            ),
        );
    }

    Ok(serde_json::json!({
        "schema": 1,
        "generated": GENERATED_ON,
        "entries": entries,
    }))
}

fn parse_fixtures(raw: &str) -> BTreeMap<String, Fixture> {
    let data: serde_json::Value = serde_json::from_str(raw).expect("fixture file must be JSON");
    assert_eq!(data["schema"], 1, "unknown fixture schema");
    let mut out = BTreeMap::new();
    for entry in data["entries"].as_array().expect("entries array") {
        let key = entry["key"].as_str().expect("fixture key").to_string();
        let fixture = Fixture {
            key: key.clone(),
            value: entry["value"].clone(),
            provenance: entry["provenance"].clone(),
        };
        assert!(
            out.insert(key, fixture).is_none(),
            "duplicate fixture key"
        );
    }
    out
}

/// The committed fixture table.
pub fn builtin() -> &'static BTreeMap<String, Fixture> {
    static STORE: OnceLock<BTreeMap<String, Fixture>> = OnceLock::new();
    STORE.get_or_init(|| parse_fixtures(include_str!("../fixtures/fixtures.json")))
}

/// Committed value for a key; an absent key is a verification failure.
pub fn fixture_value(key: &str) -> Result<&'static serde_json::Value> {
    builtin()
        .get(key)
        .map(|f| &f.value)
        .ok_or_else(|| Error::VerificationFailed(format!("no committed fixture for key {key}")))
}

/// Committed decimal-string value under `key` for field order `q`.
pub fn fixture_big(key: &str, q: u64) -> Result<BigUint> {
    let value = fixture_value(key)?;
    let s = value[q.to_string()]
        .as_str()
        .ok_or_else(|| Error::VerificationFailed(format!("fixture {key} has no entry for q = {q}")))?;
    s.parse::<BigUint>()
        .map_err(|_| Error::VerificationFailed(format!("fixture {key}[{q}] is not a decimal integer")))
}
