//! JSON chain files.
//!
//! ```json
//! {
//!   "states": ["1", "2"],
//!   "generators": [
//!     {"label": "1", "action": [0, 0], "prob": "1/3"},
//!     {"label": "2", "action": [1, 1], "prob": "1/3"},
//!     {"label": "3", "action": [1, 0], "prob": "sym"}
//!   ],
//!   "options": {"seed": 7}
//! }
//! ```
//!
//! `action[s]` is the index of `a·s`. Probabilities are exact rationals
//! written as strings, or `"sym"` for a free variable.

use std::collections::BTreeSet;
use std::path::Path;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{parse_rational, Q};
use crate::error::{Error, Result};
use crate::markov::{GeneratorSpec, MarkovChainSpec, Prob};
use crate::pipeline::Options;
use crate::semigroup::{Transformation, BOX_LABEL};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_elements: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_kr: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_mc: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series_order: Option<u32>,
    /// Use the adjoined-zero construction even for left-zero ideals.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjoin_zero: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    pub label: String,
    pub action: Vec<i64>,
    pub prob: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainFile {
    pub states: Vec<String>,
    pub generators: Vec<GeneratorEntry>,
    #[serde(default)]
    pub options: ChainOptions,
}

impl ChainFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::Input(format!("line {}, column {}: {e}", e.line(), e.column()))
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Input(m) => Error::Input(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Validates the file and builds the chain.
    pub fn to_spec(&self) -> Result<MarkovChainSpec> {
        let n = self.states.len();
        if n == 0 {
            return Err(Error::Input("states: at least one state is required".into()));
        }
        let mut seen_states = BTreeSet::new();
        for (i, s) in self.states.iter().enumerate() {
            if !seen_states.insert(s) {
                return Err(Error::Input(format!("states[{i}]: duplicate state {s:?}")));
            }
        }
        if self.generators.is_empty() {
            return Err(Error::Input("generators: at least one generator is required".into()));
        }
        let mut labels = BTreeSet::new();
        let mut gens = Vec::with_capacity(self.generators.len());
        let mut numeric_sum = Q::zero();
        let mut any_symbolic = false;
        for (i, g) in self.generators.iter().enumerate() {
            let at = format!("generators[{i}] ({:?})", g.label);
            if g.label.is_empty() {
                return Err(Error::Input(format!("generators[{i}].label: empty label")));
            }
            if g.label == BOX_LABEL {
                return Err(Error::Input(format!("{at}.label: {BOX_LABEL} is reserved")));
            }
            if !labels.insert(g.label.clone()) {
                return Err(Error::Input(format!("{at}.label: duplicate label")));
            }
            if g.action.len() != n {
                return Err(Error::Input(format!(
                    "{at}.action: has {} entries, expected one per state ({n})",
                    g.action.len()
                )));
            }
            let mut images = Vec::with_capacity(n);
            for (s, &img) in g.action.iter().enumerate() {
                if img < 0 || img as usize >= n {
                    return Err(Error::Input(format!(
                        "{at}.action[{s}]: state index {img} out of range 0..{n}"
                    )));
                }
                images.push(img as usize);
            }
            let prob = if g.prob.trim() == "sym" {
                any_symbolic = true;
                Prob::Symbolic
            } else {
                let p = parse_rational(&g.prob)
                    .map_err(|e| Error::Input(format!("{at}.prob: {e}")))?;
                if p.is_negative() || p > Q::one() {
                    return Err(Error::Input(format!("{at}.prob: {p} is outside [0, 1]")));
                }
                numeric_sum += &p;
                Prob::Numeric(p)
            };
            gens.push(GeneratorSpec {
                label: g.label.clone(),
                action: Transformation::new(images)?,
                prob,
            });
        }
        if numeric_sum > Q::one() {
            return Err(Error::Input(format!(
                "generators: probabilities sum to {numeric_sum}, more than 1"
            )));
        }
        if !any_symbolic && numeric_sum != Q::one() {
            return Err(Error::Input(format!(
                "generators: probabilities sum to {numeric_sum}; they must sum to 1 unless a generator is \"sym\""
            )));
        }
        if gens.iter().all(|g| matches!(&g.prob, Prob::Numeric(p) if p.is_zero())) {
            return Err(Error::Input("generators: every probability is zero".into()));
        }
        MarkovChainSpec::new(self.states.clone(), gens)
    }

    /// Overrides defaults with the file's options.
    pub fn apply_options(&self, opts: &mut Options) {
        let o = &self.options;
        if let Some(v) = o.max_elements {
            opts.max_elements = v;
        }
        if let Some(v) = o.max_kr {
            opts.max_kr = v;
        }
        if let Some(v) = o.max_mc {
            opts.max_mc = v;
        }
        if let Some(v) = o.seed {
            opts.seed = v;
        }
        if let Some(v) = o.series_order {
            opts.series_order = v;
        }
        if let Some(v) = o.adjoin_zero {
            opts.force_general = v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"{
        "states": ["1", "2"],
        "generators": [
            {"label": "1", "action": [0, 0], "prob": "1/3"},
            {"label": "2", "action": [1, 1], "prob": "1/3"},
            {"label": "3", "action": [1, 0], "prob": "1/3"}
        ]
    }"#;

    #[test]
    fn parses_example() {
        let f = ChainFile::from_json(EXAMPLE).unwrap();
        let spec = f.to_spec().unwrap();
        assert_eq!(spec.generators.len(), 3);
        assert!(spec.numeric_point().is_some());
    }

    fn error_of(text: &str) -> String {
        match ChainFile::from_json(text).and_then(|f| f.to_spec()) {
            Err(Error::Input(m)) => m,
            other => panic!("expected input error, got {other:?}"),
        }
    }

    #[test]
    fn diagnostics_name_the_field() {
        let bad = EXAMPLE.replace("[1, 0]", "[1, 5]");
        let m = error_of(&bad);
        assert!(m.contains("generators[2]") && m.contains("\"3\"") && m.contains("action[1]"), "{m}");
        let m = error_of(&EXAMPLE.replace("\"1/3\"}\n        ]", "\"1/2\"}\n        ]"));
        assert!(m.contains("sum"), "{m}");
        let m = error_of(&EXAMPLE.replace("\"2\", \"action\"", "\"1\", \"action\""));
        assert!(m.contains("duplicate"), "{m}");
        let m = error_of("{\"states\": [}");
        assert!(m.contains("line 1"), "{m}");
        let m = error_of(&EXAMPLE.replace("\"states\"", "\"extra\": 1, \"states\""));
        assert!(m.contains("unknown field"), "{m}");
    }

    #[test]
    fn symbolic_allows_remainder() {
        let text = EXAMPLE.replace("\"prob\": \"1/3\"}\n        ]", "\"prob\": \"sym\"}\n        ]");
        let spec = ChainFile::from_json(&text).unwrap().to_spec().unwrap();
        assert!(spec.numeric_point().is_none());
    }
}
