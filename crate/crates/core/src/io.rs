//! JSON files for quartets and the other pipeline artifacts.
//!
//! Quartet layout:
//!
//! ```json
//! {
//!   "truncation": 2,
//!   "grading": "homology",
//!   "curve_like": true,
//!   "genus": 0,
//!   "provenance": "...",
//!   "dims": [[0, 0, 1], [0, 1, 1]],
//!   "labels": { "(0,0)": ["e(0,0)"] },
//!   "operators": { "mu_plus_pt": { "(0,0)": [[1]] } }
//! }
//! ```
//!
//! Blocks are dense row lists mapping the source slice to its image slice;
//! missing or empty (`[]`) blocks are zero maps. Operator bidegrees default to
//! the ones expected for the grading and may be overridden under `"bidegrees"`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{Bidegree, BigradedSpace, GradedOperator, Grading, OperatorQuartet, Role, Slice};
use crate::matrix::RationalMatrix;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuartetFile {
    truncation: i64,
    #[serde(default)]
    grading: Grading,
    #[serde(default)]
    curve_like: bool,
    #[serde(default)]
    genus: Option<u32>,
    #[serde(default)]
    provenance: String,
    dims: Vec<(i64, i64, usize)>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    labels: BTreeMap<Slice, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    bidegrees: BTreeMap<String, (i64, i64)>,
    operators: BTreeMap<String, BTreeMap<Slice, RationalMatrix>>,
}

fn role_key(key: &str) -> Result<Role> {
    key.parse()
        .map_err(|_| Error::Parse(format!("unknown operator {key:?}")))
}

impl QuartetFile {
    fn from_quartet(q: &OperatorQuartet) -> Self {
        let mut operators = BTreeMap::new();
        let mut bidegrees = BTreeMap::new();
        for role in Role::ALL {
            let op = q.op(role);
            let b = op.bidegree();
            if b != role.expected_bidegree(q.grading) {
                bidegrees.insert(role.key().to_string(), (b.degree, b.level));
            }
            operators.insert(
                role.key().to_string(),
                op.blocks().map(|(s, m)| (s, m.clone())).collect(),
            );
        }
        QuartetFile {
            truncation: q.truncation(),
            grading: q.grading,
            curve_like: q.space.is_curve_like(),
            genus: q.genus,
            provenance: q.provenance.clone(),
            dims: q.space.slices().map(|(s, d)| (s.degree, s.level, d)).collect(),
            labels: q.space.all_labels().clone(),
            bidegrees,
            operators,
        }
    }

    fn into_quartet(self) -> Result<OperatorQuartet> {
        let mut space = BigradedSpace::new(self.truncation).curve_like(self.curve_like);
        for (i, n, d) in self.dims {
            let s = Slice::new(i, n);
            if space.dim(s) != 0 {
                return Err(Error::Parse(format!("slice {s} listed twice in dims")));
            }
            space.set_dim(s, d);
        }
        for (s, l) in self.labels {
            if l.len() != space.dim(s) {
                return Err(Error::Parse(format!(
                    "{} labels for slice {s} of dimension {}",
                    l.len(),
                    space.dim(s)
                )));
            }
            space.set_labels(s, l);
        }
        let mut q = OperatorQuartet::zero(space, self.grading);
        for (key, (i, n)) in &self.bidegrees {
            q.op_mut(role_key(key)?).set_bidegree(Bidegree::new(*i, *n));
        }
        for (key, blocks) in self.operators {
            let op: &mut GradedOperator = q.op_mut(role_key(&key)?);
            for (s, m) in blocks {
                op.insert_block(s, m);
            }
        }
        q.genus = self.genus;
        q.provenance = self.provenance;
        Ok(q)
    }
}

pub fn quartet_to_json(q: &OperatorQuartet) -> String {
    to_json(&QuartetFile::from_quartet(q))
}

pub fn quartet_from_json(text: &str) -> Result<OperatorQuartet> {
    from_json::<QuartetFile>(text)?.into_quartet()
}

pub fn read_quartet(path: &Path) -> Result<OperatorQuartet> {
    quartet_from_json(&read_text(path)?)
}

pub fn write_quartet(path: &Path, q: &OperatorQuartet) -> Result<()> {
    write_text(path, &quartet_to_json(q))
}

/// Pretty JSON with a trailing newline. Maps are ordered, so output is stable.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("artifact types serialize infallibly");
    s.push('\n');
    s
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    from_json(&read_text(path)?)
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    write_text(path, &to_json(value))
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}
