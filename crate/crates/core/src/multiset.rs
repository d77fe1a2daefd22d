use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Multiset of positive integers stored as value -> multiplicity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SizeMultiset(BTreeMap<u128, u128>);

impl SizeMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, value: u128) {
        self.insert_many(value, 1);
    }

    pub fn insert_many(&mut self, value: u128, count: u128) {
        if count > 0 {
            *self.0.entry(value).or_default() += count;
        }
    }

    /// Adds every element of `other`; merging is associative and commutative.
    pub fn merge(&mut self, other: &Self) {
        for (v, c) in &other.0 {
            self.insert_many(*v, *c);
        }
    }

    pub fn multiplicity(&self, value: u128) -> u128 {
        self.0.get(&value).copied().unwrap_or(0)
    }

    pub fn contains(&self, value: u128) -> bool {
        self.0.contains_key(&value)
    }

    /// Number of elements counted with multiplicity.
    pub fn cardinality(&self) -> u128 {
        self.0.values().sum()
    }

    pub fn sum(&self) -> u128 {
        self.0.iter().map(|(v, c)| v * c).sum()
    }

    pub fn min(&self) -> Option<u128> {
        self.0.keys().next().copied()
    }

    /// `(value, multiplicity)` pairs in ascending value order.
    pub fn iter(&self) -> impl Iterator<Item = (u128, u128)> + '_ {
        self.0.iter().map(|(v, c)| (*v, *c))
    }

    /// Every element with repetition, ascending.
    pub fn expanded(&self) -> Vec<u128> {
        self.iter()
            .flat_map(|(v, c)| std::iter::repeat_n(v, c as usize))
            .collect()
    }
}

impl FromIterator<u128> for SizeMultiset {
    fn from_iter<I: IntoIterator<Item = u128>>(iter: I) -> Self {
        let mut m = Self::new();
        for v in iter {
            m.insert(v);
        }
        m
    }
}

/// `{1,2,2,4}` when small, `{1, 2^2, 4}` style once it has more than 64 elements.
impl fmt::Display for SizeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = if self.cardinality() <= 64 {
            self.expanded().iter().map(u128::to_string).collect()
        } else {
            self.iter()
                .map(|(v, c)| {
                    if c == 1 {
                        v.to_string()
                    } else {
                        format!("{v}^{c}")
                    }
                })
                .collect()
        };
        write!(f, "{{{}}}", parts.join(","))
    }
}
