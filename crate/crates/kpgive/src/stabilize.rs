//! Empirical exactness: recompute with a larger energy cutoff and compare
//! every retained coefficient.

use serde_json::{json, Value};

use crate::cutoffs::Cutoffs;
use crate::error::Result;

/// Extra doubled energy used by [`stabilize`].
pub const ENERGY_BUMP: i32 = 4;

/// Outcome of a rerun at `E + 4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilization {
    pub energy2: i32,
    pub rerun_energy2: i32,
    /// Leaf paths whose values changed (empty when stable).
    pub changed: Vec<String>,
}

impl Stabilization {
    pub fn stable(&self) -> bool {
        self.changed.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "energy2": self.energy2,
            "rerun_energy2": self.rerun_energy2,
            "stable": self.stable(),
            "changed": self.changed,
        })
    }
}

/// Runs `payload` at `cutoffs` and at `E + 4` and lists every differing leaf.
/// Keys named `cutoffs` and `certified` are bookkeeping and are skipped.
pub fn stabilize<F>(cutoffs: &Cutoffs, payload: F) -> Result<(Value, Stabilization)>
where
    F: Fn(&Cutoffs) -> Result<Value>,
{
    let bumped = cutoffs.with_energy_bump(ENERGY_BUMP);
    let a = payload(cutoffs)?;
    let b = payload(&bumped)?;
    let mut changed = Vec::new();
    diff("", &a, &b, &mut changed);
    Ok((
        a,
        Stabilization {
            energy2: cutoffs.energy2,
            rerun_energy2: bumped.energy2,
            changed,
        },
    ))
}

const SKIPPED: [&str; 2] = ["cutoffs", "certified"];

/// Collects paths where `a` and `b` differ.
pub fn diff(path: &str, a: &Value, b: &Value, out: &mut Vec<String>) {
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            let mut keys: Vec<&String> = x.keys().chain(y.keys()).collect();
            keys.sort();
            keys.dedup();
            for k in keys {
                if SKIPPED.contains(&k.as_str()) {
                    continue;
                }
                let p = format!("{path}/{k}");
                match (x.get(k), y.get(k)) {
                    (Some(u), Some(v)) => diff(&p, u, v, out),
                    _ => out.push(p),
                }
            }
        }
        (Value::Array(x), Value::Array(y)) if x.len() == y.len() => {
            for (i, (u, v)) in x.iter().zip(y).enumerate() {
                diff(&format!("{path}/{i}"), u, v, out);
            }
        }
        _ if a == b => {}
        _ => out.push(if path.is_empty() { "/".into() } else { path.to_string() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diff_reports_leaves_and_skips_bookkeeping() {
        let a = json!({"x": {"m": "1/2", "k": "1"}, "cutoffs": 1, "l": [1, 2]});
        let b = json!({"x": {"m": "1/2", "k": "2"}, "cutoffs": 2, "l": [1, 3]});
        let mut out = Vec::new();
        diff("", &a, &b, &mut out);
        assert_eq!(out, vec!["/l/1".to_string(), "/x/k".to_string()]);
    }

    #[test]
    fn stabilize_detects_energy_dependence() {
        let c = Cutoffs::new(8, 1, 1, 1, 1);
        let (_, s) = stabilize(&c, |_| Ok(json!({"v": 1}))).unwrap();
        assert!(s.stable());
        let (_, s) = stabilize(&c, |c| Ok(json!({"v": c.energy2}))).unwrap();
        assert_eq!(s.changed, vec!["/v".to_string()]);
    }
}
