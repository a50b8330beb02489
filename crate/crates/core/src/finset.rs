use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label;

/// A finite set given by distinct element labels.
///
/// Elements are addressed by position. Sets built by the library keep a
/// deterministic construction order; products enumerate pairs row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FinSet {
    elements: Vec<String>,
}

impl FinSet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let elements: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut seen = std::collections::BTreeSet::new();
        for l in &elements {
            if !seen.insert(l.as_str()) {
                return Err(Error::Invalid {
                    what: "set",
                    detail: format!("duplicate label {l:?}"),
                });
            }
        }
        Ok(FinSet { elements })
    }

    /// Builds a set from labels the caller guarantees to be distinct.
    pub(crate) fn from_distinct(elements: Vec<String>) -> Self {
        debug_assert!(FinSet::new(elements.clone()).is_ok(), "duplicate labels");
        FinSet { elements }
    }

    pub fn empty() -> Self {
        FinSet { elements: vec![] }
    }

    /// The one-element unit set `{*}`.
    pub fn unit() -> Self {
        FinSet {
            elements: vec![label::UNIT.to_string()],
        }
    }

    /// `{"0", ..., "n-1"}`.
    pub fn range(n: usize) -> Self {
        FinSet {
            elements: (0..n).map(|i| i.to_string()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.elements
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|l| l == label)
    }

    /// Cartesian product; the pair `(i, j)` sits at `i * other.len() + j`.
    pub fn product(&self, other: &FinSet) -> FinSet {
        let mut elements = Vec::with_capacity(self.len() * other.len());
        for l in &self.elements {
            for r in &other.elements {
                elements.push(label::pair(l, r));
            }
        }
        FinSet { elements }
    }

    /// Disjoint union; labels are tagged `0∘l` and `1∘r`.
    pub fn sum(&self, other: &FinSet) -> FinSet {
        let mut elements = Vec::with_capacity(self.len() + other.len());
        elements.extend(self.elements.iter().map(|l| label::pair("0", l)));
        elements.extend(other.elements.iter().map(|l| label::pair("1", l)));
        FinSet { elements }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_rejected() {
        assert!(FinSet::new(["a", "a"]).is_err());
        assert!(FinSet::new(["a", "b"]).is_ok());
    }

    #[test]
    fn product_layout_is_row_major() {
        let a = FinSet::range(2);
        let b = FinSet::new(["x", "y", "z"]).unwrap();
        let p = a.product(&b);
        assert_eq!(p.len(), 6);
        assert_eq!(p.label(3 + 2), "1∘z");
    }
}
