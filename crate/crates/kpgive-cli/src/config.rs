//! Run configuration: a single JSON file plus a few overriding flags.

use std::path::Path;

use kpgive::givental::{LoopAlgebraElement, LoopGroupElement};
use kpgive::{Cutoffs, Error, Result};
use serde_json::Value;

/// Sizes above this need `--allow-large-n`.
pub const MAX_N: usize = 6;

/// Parsed and validated configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub n: usize,
    pub cutoffs: Cutoffs,
    pub group: LoopGroupElement,
    pub algebra: Option<LoopAlgebraElement>,
    /// Command-specific options, passed through untouched.
    pub options: Value,
    /// The file as read, echoed in reports.
    pub raw: Value,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Value> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    /// Validates `raw`; `cutoffs` override whatever the file says.
    pub fn from_value(raw: Value, cutoffs: Option<Cutoffs>, allow_large_n: bool) -> Result<Self> {
        let n = raw
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("config needs a positive integer \"n\"".into()))? as usize;
        if n == 0 {
            return Err(Error::Parse("n must be at least 1".into()));
        }
        if n > MAX_N && !allow_large_n {
            return Err(Error::Parse(format!(
                "n = {n} exceeds the desk-scale limit {MAX_N}; pass --allow-large-n"
            )));
        }
        let cutoffs = match (cutoffs, raw.get("cutoffs")) {
            (Some(c), _) => c,
            (None, Some(v)) => serde_json::from_value(v.clone())
                .map_err(|e| Error::Parse(format!("cutoffs: {e}")))?,
            (None, None) => return Err(Error::Parse("config has no \"cutoffs\"".into())),
        };
        cutoffs.validate()?;
        let group = match raw.get("group") {
            Some(v) => LoopGroupElement::from_json(v, n)?,
            None => LoopGroupElement::identity(n),
        };
        let algebra = raw
            .get("algebra")
            .map(|v| LoopAlgebraElement::from_json(v, n))
            .transpose()?;
        Ok(RunConfig {
            n,
            cutoffs,
            group,
            algebra,
            options: raw.get("options").cloned().unwrap_or(Value::Null),
            raw,
        })
    }

    pub fn algebra(&self) -> Result<&LoopAlgebraElement> {
        self.algebra
            .as_ref()
            .ok_or_else(|| Error::Parse("this command needs an \"algebra\" element".into()))
    }

    pub fn option_u64(&self, key: &str) -> Option<u64> {
        self.options.get(key).and_then(Value::as_u64)
    }

    /// Echo of the effective configuration.
    pub fn echo(&self) -> Value {
        let mut v = self.raw.clone();
        if let Value::Object(m) = &mut v {
            m.insert("cutoffs".into(), serde_json::to_value(self.cutoffs).expect("plain struct"));
        }
        v
    }
}
