//! Isomorphism classification of the variants of `PT_n`.
//!
//! Two variants `(PT_n, *_a)` and `(PT_n, *_b)` are isomorphic exactly when
//! `a` and `b` have the same type. This module lists the realizable types,
//! recovers a type from abstract invariants of its variant, and builds explicit
//! isomorphisms between variants of equal type.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiset::SizeMultiset;
use crate::partition::{partition_count, partitions};
use crate::transform::{check_same_degree, PartialTransformation, Permutation, TypeVector};
use crate::variant::{predicted_class_multiset, AnnihilatorCounts, VariantSemigroup};

/// Abstract invariants of a variant: the `~_a` class sizes and the annihilator counts.
///
/// Only `class_sizes` and `annihilators.left` are needed to recover the type;
/// the class sizes alone can coincide for different types.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub n: usize,
    pub class_sizes: SizeMultiset,
    pub annihilators: AnnihilatorCounts,
}

impl Fingerprint {
    /// Observed invariants of `v`, by walking `PT_n`.
    pub fn of_variant(v: &VariantSemigroup) -> Result<Self> {
        Ok(Self {
            n: v.degree(),
            class_sizes: v.sim_classes()?.size_multiset().clone(),
            annihilators: v.annihilator_census()?.observed,
        })
    }

    /// Invariants every variant of type `t` has, from the closed forms alone.
    pub fn predicted(t: &TypeVector) -> Result<Self> {
        let v = VariantSemigroup::new(canonical_rep(t)?);
        Ok(Self {
            n: t.degree(),
            class_sizes: predicted_class_multiset(t)?,
            annihilators: v.predicted_annihilators()?,
        })
    }

    /// Checks the structural invariants any genuine fingerprint satisfies.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        let order = crate::transform::semigroup_order(n)?;
        if self.class_sizes.sum() != order {
            return Err(Error::InvalidType(format!(
                "class sizes sum to {}, expected {order}",
                self.class_sizes.sum()
            )));
        }
        let left = self.annihilators.left;
        if !self.class_sizes.contains(left) {
            return Err(Error::InvalidType(format!(
                "left annihilator count {left} is not a class size"
            )));
        }
        if nth_root_plus(left, n).is_none() {
            return Err(Error::InvalidType(format!(
                "left annihilator count {left} is not an n-th power"
            )));
        }
        Ok(())
    }
}

// z with (z + 1)^n == value
fn nth_root_plus(value: u128, n: usize) -> Option<usize> {
    (0..=n).find(|z| (*z as u128 + 1).checked_pow(n as u32) == Some(value))
}

/// Every type of degree `n`: for `k = 0..=n`, each partition of `k`, in
/// ascending lexicographic order within each `k`.
pub fn enumerate_types(n: usize) -> Result<Vec<TypeVector>> {
    (0..=n)
        .flat_map(|k| partitions(k, n))
        .map(|parts| TypeVector::from_parts(n, &parts))
        .collect()
}

/// Number of pairwise non-isomorphic variants of `PT_n`: `sum_{k=0}^{n} p(k)`.
pub fn count_variants(n: usize) -> u128 {
    (0..=n).map(partition_count).sum()
}

/// Deterministic representative of type `t`.
///
/// Fibers are laid out by descending size over consecutive points
/// `1, 2, ...`; the `j`-th fiber maps to `j`; the remaining points are undefined.
pub fn canonical_rep(t: &TypeVector) -> Result<PartialTransformation> {
    let mut images = Vec::with_capacity(t.degree());
    for (j, size) in t.parts().into_iter().enumerate() {
        images.extend(std::iter::repeat_n(Some(j + 1), size));
    }
    images.resize(t.degree(), None);
    PartialTransformation::new(images)
}

/// Recovers the type of a variant from its fingerprint.
///
/// Searches the `sum p(k)` candidate types for the one whose predicted class
/// multiset and left-annihilator count `(z + 1)^n` match. At most one type can
/// match; two matches is a bug and panics.
pub fn reconstruct_type(f: &Fingerprint) -> Result<TypeVector> {
    let mut matches = Vec::new();
    for t in enumerate_types(f.n)? {
        let z = t.undefined_count() as u128;
        let left = (z + 1).checked_pow(f.n as u32);
        if left != Some(f.annihilators.left) {
            continue;
        }
        if predicted_class_multiset(&t)? == f.class_sizes {
            matches.push(t);
        }
    }
    assert!(
        matches.len() <= 1,
        "fingerprint matches several types: {matches:?}"
    );
    matches.pop().ok_or(Error::NoMatchingType { n: f.n })
}

/// Permutations `tau`, `pi` with `b = tau a pi`, i.e. `b(x) = pi(a(tau(x)))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoWitness {
    pub tau: Permutation,
    pub pi: Permutation,
    pub source: PartialTransformation,
    pub target: PartialTransformation,
}

impl IsoWitness {
    /// Whether `target = tau source pi` holds pointwise.
    pub fn is_valid(&self) -> bool {
        let conjugate = self
            .tau
            .as_transformation()
            .then(&self.source)
            .then(&self.pi.as_transformation());
        conjugate == self.target
    }

    /// `f(x) = pi^-1 x tau^-1`, an isomorphism `(PT_n, *_a) -> (PT_n, *_b)`.
    pub fn apply(&self, x: &PartialTransformation) -> Result<PartialTransformation> {
        check_same_degree(x.degree(), self.tau.degree())?;
        Ok(self
            .pi
            .inverse()
            .as_transformation()
            .then(x)
            .then(&self.tau.inverse().as_transformation()))
    }
}

// Fibers as (image point, ascending members), largest first, ties by smallest member.
fn ordered_fibers(a: &PartialTransformation) -> Vec<(usize, Vec<usize>)> {
    let mut fibers: Vec<(usize, Vec<usize>)> = a
        .fibers()
        .into_iter()
        .map(|(t, f)| (t, f.into_iter().collect()))
        .collect();
    fibers.sort_by(|x, y| y.1.len().cmp(&x.1.len()).then_with(|| x.1[0].cmp(&y.1[0])));
    fibers
}

// Pairs the leftover points of two equal-length sets in ascending order.
fn fill_complement(
    map: &mut [usize],
    from: impl Iterator<Item = usize>,
    to: impl Iterator<Item = usize>,
) {
    for (x, y) in from.zip(to) {
        map[x - 1] = y;
    }
}

/// Builds `tau`, `pi` with `b = tau a pi` for same-type `a`, `b`.
///
/// Fibers of `a` and `b` are matched by descending size, ties broken by the
/// smallest point they contain. `tau` carries each fiber of `b` onto its
/// partner in `a` in ascending order and `Z(b)` onto `Z(a)` likewise. `pi`
/// sends the image of each `a`-fiber to the image of the matched `b`-fiber and
/// pairs the remaining points in ascending order.
pub fn build_isomorphism(
    a: &PartialTransformation,
    b: &PartialTransformation,
) -> Result<IsoWitness> {
    check_same_degree(a.degree(), b.degree())?;
    let (ta, tb) = (a.type_vector(), b.type_vector());
    if ta != tb {
        return Err(Error::TypeMismatch {
            left: ta,
            right: tb,
        });
    }
    let n = a.degree();
    let mut tau = vec![0usize; n];
    let mut pi = vec![0usize; n];
    for ((img_a, fib_a), (img_b, fib_b)) in ordered_fibers(a).into_iter().zip(ordered_fibers(b)) {
        for (x, y) in fib_b.iter().zip(&fib_a) {
            tau[x - 1] = *y;
        }
        pi[img_a - 1] = img_b;
    }
    fill_complement(&mut tau, b.zset().into_iter(), a.zset().into_iter());
    let (ran_a, ran_b) = (a.image(), b.image());
    fill_complement(
        &mut pi,
        (1..=n).filter(|p| !ran_a.contains(p)),
        (1..=n).filter(|p| !ran_b.contains(p)),
    );
    let witness = IsoWitness {
        tau: Permutation::new(tau)?,
        pi: Permutation::new(pi)?,
        source: a.clone(),
        target: b.clone(),
    };
    debug_assert!(witness.is_valid());
    Ok(witness)
}
