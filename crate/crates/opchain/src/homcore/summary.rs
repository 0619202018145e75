//! Graded homology summaries: per-degree free rank and invariant-factor
//! torsion.

use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct DegreeSummary {
    pub rank: usize,
    /// Invariant factors > 1, in divisibility order. Always empty over a
    /// field.
    pub torsion: Vec<BigInt>,
}

impl DegreeSummary {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

/// Homology of a complex, degree by degree. Degrees with zero summary are
/// omitted.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GradedSummary {
    pub by_degree: BTreeMap<i64, DegreeSummary>,
}

impl GradedSummary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, degree: i64, summary: DegreeSummary) {
        if !summary.is_zero() {
            self.by_degree.insert(degree, summary);
        }
    }

    pub fn rank(&self, degree: i64) -> usize {
        self.by_degree.get(&degree).map(|s| s.rank).unwrap_or(0)
    }

    pub fn torsion(&self, degree: i64) -> &[BigInt] {
        self.by_degree
            .get(&degree)
            .map(|s| s.torsion.as_slice())
            .unwrap_or(&[])
    }

    pub fn is_zero(&self) -> bool {
        self.by_degree.is_empty()
    }

    /// Nonzero entirely within [lo, hi]?
    pub fn supported_in(&self, lo: i64, hi: i64) -> bool {
        self.by_degree.keys().all(|&d| d >= lo && d <= hi)
    }

    /// Shift all degrees by `d`.
    pub fn shifted(&self, d: i64) -> GradedSummary {
        GradedSummary {
            by_degree: self
                .by_degree
                .iter()
                .map(|(&k, v)| (k + d, v.clone()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (d, s) in &self.by_degree {
            let mut entry = serde_json::Map::new();
            entry.insert("rank".into(), serde_json::Value::from(s.rank));
            entry.insert(
                "torsion".into(),
                serde_json::Value::Array(
                    s.torsion
                        .iter()
                        .map(|t| serde_json::Value::String(t.to_string()))
                        .collect(),
                ),
            );
            map.insert(d.to_string(), serde_json::Value::Object(entry));
        }
        serde_json::Value::Object(map)
    }
}

impl fmt::Display for GradedSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.by_degree.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, s) in &self.by_degree {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "H_{d}: rank {}", s.rank)?;
            if !s.torsion.is_empty() {
                let ts: Vec<String> = s.torsion.iter().map(|t| t.to_string()).collect();
                write!(f, " + torsion[{}]", ts.join(","))?;
            }
        }
        Ok(())
    }
}
