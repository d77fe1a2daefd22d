//! The variant `(PT_n, *_a)` with `x *_a y = x a y`.
//!
//! Covers the sandwich product, the annihilator census and the relation
//! `x ~_a y` (`x *_a u = y *_a u` for every `u`), whose classes are keyed by
//! the product `x a`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiset::SizeMultiset;
use crate::transform::{
    check_exhaustive, check_same_degree, enumerate_all, PartialTransformation, TypeVector,
    DEFAULT_EXHAUSTIVE_LIMIT,
};

fn pow(base: u128, exp: usize, what: &'static str) -> Result<u128> {
    u32::try_from(exp)
        .ok()
        .and_then(|e| base.checked_pow(e))
        .ok_or(Error::Overflow(what))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariantSemigroup {
    sandwich: PartialTransformation,
}

impl VariantSemigroup {
    pub fn new(sandwich: PartialTransformation) -> Self {
        Self { sandwich }
    }

    pub fn degree(&self) -> usize {
        self.sandwich.degree()
    }

    pub fn sandwich(&self) -> &PartialTransformation {
        &self.sandwich
    }

    /// The nowhere-defined map, a two-sided zero of every variant.
    pub fn zero(&self) -> PartialTransformation {
        PartialTransformation::from_raw(vec![None; self.degree()])
    }

    /// `x *_a y = x a y`.
    pub fn product(
        &self,
        x: &PartialTransformation,
        y: &PartialTransformation,
    ) -> Result<PartialTransformation> {
        check_same_degree(x.degree(), self.degree())?;
        check_same_degree(y.degree(), self.degree())?;
        Ok(self.product_unchecked(x, y))
    }

    pub(crate) fn product_unchecked(
        &self,
        x: &PartialTransformation,
        y: &PartialTransformation,
    ) -> PartialTransformation {
        x.then(&self.sandwich).then(y)
    }

    /// Left, right and two-sided annihilator tests by the structural criteria
    /// `ran(x) ⊆ Z(a)` and `Z(x) ⊇ ran(a)`.
    pub fn annihilator_flags(&self, x: &PartialTransformation) -> Result<AnnihilatorFlags> {
        check_same_degree(x.degree(), self.degree())?;
        let a = self.sandwich.raw();
        let left = x.raw().iter().flatten().all(|p| a[*p as usize].is_none());
        let right = a.iter().flatten().all(|p| x.raw()[*p as usize].is_none());
        Ok(AnnihilatorFlags {
            left,
            right,
            two_sided: left && right,
        })
    }

    /// Closed-form counts `(z+1)^n`, `(n+1)^(n-rank)`, `(z+1)^(n-rank)`.
    pub fn predicted_annihilators(&self) -> Result<AnnihilatorCounts> {
        let n = self.degree();
        let z = self.sandwich.undefined_count() as u128;
        let free = n - self.sandwich.rank();
        Ok(AnnihilatorCounts {
            left: pow(z + 1, n, "(z+1)^n")?,
            right: pow(n as u128 + 1, free, "(n+1)^(n-rank)")?,
            two_sided: pow(z + 1, free, "(z+1)^(n-rank)")?,
        })
    }

    pub fn annihilator_census(&self) -> Result<AnnihilatorCensus> {
        self.annihilator_census_with_limit(DEFAULT_EXHAUSTIVE_LIMIT)
    }

    /// Counts annihilators over all of `PT_n` and pairs them with the closed forms.
    pub fn annihilator_census_with_limit(&self, limit: usize) -> Result<AnnihilatorCensus> {
        check_exhaustive(self.degree(), limit)?;
        let mut observed = AnnihilatorCounts::default();
        for x in enumerate_all(self.degree())? {
            let flags = self.annihilator_flags(&x)?;
            observed.left += flags.left as u128;
            observed.right += flags.right as u128;
            observed.two_sided += flags.two_sided as u128;
        }
        Ok(AnnihilatorCensus {
            observed,
            predicted: self.predicted_annihilators()?,
        })
    }

    /// The `~_a` class key of `x`, namely `x a`.
    pub fn class_key(&self, x: &PartialTransformation) -> Result<PartialTransformation> {
        x.compose(&self.sandwich)
    }

    pub fn sim_classes(&self) -> Result<SimClassPartition> {
        self.sim_classes_with_limit(DEFAULT_EXHAUSTIVE_LIMIT)
    }

    /// Groups all of `PT_n` by `x a`.
    pub fn sim_classes_with_limit(&self, limit: usize) -> Result<SimClassPartition> {
        check_exhaustive(self.degree(), limit)?;
        let mut classes: BTreeMap<PartialTransformation, Vec<PartialTransformation>> =
            BTreeMap::new();
        for x in enumerate_all(self.degree())? {
            classes.entry(x.then(&self.sandwich)).or_default().push(x);
        }
        Ok(SimClassPartition::from_classes(classes))
    }

    /// Size of the `~_a` class of `x0`:
    /// `prod_{i in dom(y)} |a^-1(y(i))| * (z_a + 1)^(n - |dom(y)|)` with `y = x0 a`.
    pub fn class_size(&self, x0: &PartialTransformation) -> Result<u128> {
        let key = self.class_key(x0)?;
        let z = self.sandwich.undefined_count() as u128;
        let mut size = pow(z + 1, key.undefined_count(), "class size")?;
        for t in key.images().flatten() {
            size = size
                .checked_mul(self.sandwich.fiber_size(t) as u128)
                .ok_or(Error::Overflow("class size"))?;
        }
        Ok(size)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnihilatorFlags {
    pub left: bool,
    pub right: bool,
    pub two_sided: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AnnihilatorCounts {
    pub left: u128,
    pub right: u128,
    pub two_sided: u128,
}

/// Brute-force annihilator counts next to their closed-form predictions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnihilatorCensus {
    pub observed: AnnihilatorCounts,
    pub predicted: AnnihilatorCounts,
}

impl AnnihilatorCensus {
    pub fn agrees(&self) -> bool {
        self.observed == self.predicted
    }
}

/// The classes of `~_a`, keyed by the common product `x a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimClassPartition {
    classes: BTreeMap<PartialTransformation, Vec<PartialTransformation>>,
    sizes: SizeMultiset,
}

impl SimClassPartition {
    fn from_classes(classes: BTreeMap<PartialTransformation, Vec<PartialTransformation>>) -> Self {
        let sizes = classes.values().map(|c| c.len() as u128).collect();
        Self { classes, sizes }
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn size_multiset(&self) -> &SizeMultiset {
        &self.sizes
    }

    /// Members of the class keyed by `key`, in enumeration order.
    pub fn members(&self, key: &PartialTransformation) -> Option<&[PartialTransformation]> {
        self.classes.get(key).map(Vec::as_slice)
    }

    /// `(key, members)` in key order.
    pub fn iter(&self) -> impl Iterator<Item = (&PartialTransformation, &[PartialTransformation])> {
        self.classes.iter().map(|(k, v)| (k, v.as_slice()))
    }
}

/// Class sizes of `~_a` for any `a` of type `t`.
///
/// Each of the `n` coordinates of `y = x0 a` is either undefined, contributing
/// a factor `z + 1`, or lands in a fiber of size `k`, contributing `k` in
/// `alpha_k` ways. The result has `(rank + 1)^n` elements summing to `(n + 1)^n`.
pub fn predicted_class_multiset(t: &TypeVector) -> Result<SizeMultiset> {
    let undefined_factor = t.undefined_count() as u128 + 1;
    let mut choices: Vec<(u128, u128)> = vec![(undefined_factor, 1)];
    choices.extend(
        t.as_slice()
            .iter()
            .enumerate()
            .filter(|(_, a)| **a > 0)
            .map(|(k, a)| (k as u128 + 1, *a as u128)),
    );

    // product value -> number of choice tuples reaching it
    let mut dist: BTreeMap<u128, u128> = BTreeMap::from([(1, 1)]);
    for _ in 0..t.degree() {
        let mut next: BTreeMap<u128, u128> = BTreeMap::new();
        for (value, ways) in &dist {
            for (factor, count) in &choices {
                let v = value
                    .checked_mul(*factor)
                    .ok_or(Error::Overflow("class multiset"))?;
                let w = ways
                    .checked_mul(*count)
                    .ok_or(Error::Overflow("class multiset"))?;
                let slot = next.entry(v).or_default();
                *slot = slot
                    .checked_add(w)
                    .ok_or(Error::Overflow("class multiset"))?;
            }
        }
        dist = next;
    }
    let mut out = SizeMultiset::new();
    for (v, c) in dist {
        out.insert_many(v, c);
    }
    Ok(out)
}
