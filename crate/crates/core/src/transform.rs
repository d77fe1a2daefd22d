//! Partial transformations of `N = {1, ..., n}`.
//!
//! Points are 1-based at every public boundary. Composition is left to right:
//! `(xy)(i) = y(x(i))`.
//!
//! The text form of a transformation is a comma-separated list of `n` tokens,
//! token `i` being the image of point `i` or `-` where the map is undefined.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported ground set size.
pub const MAX_DEGREE: usize = 255;

/// Default cap on `n` for operations that walk all of `PT_n`.
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 5;

/// Token used for an undefined image in the text format.
pub const UNDEFINED_TOKEN: &str = "-";

fn check_degree(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DEGREE {
        return Err(Error::InvalidDegree { n, max: MAX_DEGREE });
    }
    Ok(())
}

pub(crate) fn check_same_degree(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DegreeMismatch { left, right });
    }
    Ok(())
}

/// Returns `Err(OverBudget)` when `n` is above `limit`.
pub fn check_exhaustive(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::OverBudget { n, limit });
    }
    Ok(())
}

/// `(n + 1)^n`, the order of `PT_n`.
pub fn semigroup_order(n: usize) -> Result<u128> {
    (n as u128 + 1)
        .checked_pow(n as u32)
        .ok_or(Error::Overflow("(n+1)^n"))
}

/// A partial self-map of `{1, ..., n}`.
///
/// The nowhere-defined map is a valid value and is the zero of `PT_n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PartialTransformation {
    // 0-based images
    images: Box<[Option<u8>]>,
}

impl PartialTransformation {
    /// Builds a transformation from 1-based images.
    pub fn new<I>(images: I) -> Result<Self>
    where
        I: IntoIterator<Item = Option<usize>>,
    {
        let images: Vec<Option<usize>> = images.into_iter().collect();
        let n = images.len();
        check_degree(n)?;
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, image)| match image {
                None => Ok(None),
                Some(p) if (1..=n).contains(&p) => Ok(Some((p - 1) as u8)),
                Some(p) => Err(Error::PointOutOfRange {
                    position: i + 1,
                    value: p,
                    n,
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            images: images.into(),
        })
    }

    /// The nowhere-defined map on `n` points.
    pub fn zero(n: usize) -> Result<Self> {
        check_degree(n)?;
        Ok(Self {
            images: vec![None; n].into(),
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_degree(n)?;
        Ok(Self {
            images: (0..n).map(|i| Some(i as u8)).collect(),
        })
    }

    pub(crate) fn from_raw(images: Vec<Option<u8>>) -> Self {
        Self {
            images: images.into(),
        }
    }

    pub(crate) fn raw(&self) -> &[Option<u8>] {
        &self.images
    }

    /// Size of the ground set.
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based `point`, or `None` where undefined.
    ///
    /// Panics if `point` is not in `1..=n`.
    pub fn apply(&self, point: usize) -> Option<usize> {
        assert!(
            (1..=self.degree()).contains(&point),
            "point {point} outside 1..={}",
            self.degree()
        );
        self.images[point - 1].map(|p| p as usize + 1)
    }

    /// 1-based images in point order.
    pub fn images(&self) -> impl Iterator<Item = Option<usize>> + '_ {
        self.images.iter().map(|p| p.map(|p| p as usize + 1))
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(Option::is_none)
    }

    /// Left-to-right composite: `(self other)(i) = other(self(i))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_same_degree(self.degree(), other.degree())?;
        Ok(self.then(other))
    }

    pub(crate) fn then(&self, other: &Self) -> Self {
        Self {
            images: self
                .images
                .iter()
                .map(|p| p.and_then(|p| other.images[p as usize]))
                .collect(),
        }
    }

    pub fn domain(&self) -> BTreeSet<usize> {
        self.images()
            .enumerate()
            .filter_map(|(i, p)| p.map(|_| i + 1))
            .collect()
    }

    pub fn image(&self) -> BTreeSet<usize> {
        self.images().flatten().collect()
    }

    pub fn rank(&self) -> usize {
        self.image().len()
    }

    /// Points where the map is undefined.
    pub fn zset(&self) -> BTreeSet<usize> {
        self.images()
            .enumerate()
            .filter_map(|(i, p)| p.is_none().then_some(i + 1))
            .collect()
    }

    /// Number of undefined points.
    pub fn undefined_count(&self) -> usize {
        self.images.iter().filter(|p| p.is_none()).count()
    }

    /// Full preimage of each image point.
    pub fn fibers(&self) -> BTreeMap<usize, BTreeSet<usize>> {
        let mut fibers: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for (i, p) in self.images().enumerate() {
            if let Some(p) = p {
                fibers.entry(p).or_default().insert(i + 1);
            }
        }
        fibers
    }

    /// Size of the fiber over `point`; zero when `point` is not in the image.
    pub fn fiber_size(&self, point: usize) -> usize {
        self.images().filter(|p| *p == Some(point)).count()
    }

    pub fn analyze(&self) -> TransformationStats {
        let fibers = self.fibers();
        let fiber_size = fibers.iter().map(|(t, f)| (*t, f.len())).collect();
        let zset = self.zset();
        TransformationStats {
            domain: self.domain(),
            image: fibers.keys().copied().collect(),
            rank: fibers.len(),
            z: zset.len(),
            zset,
            fibers,
            fiber_size,
        }
    }

    pub fn type_vector(&self) -> TypeVector {
        let n = self.degree();
        let mut counts = vec![0usize; n];
        for p in 0..n {
            let size = self.images.iter().filter(|q| **q == Some(p as u8)).count();
            if size > 0 {
                counts[size - 1] += 1;
            }
        }
        TypeVector { alpha: counts }
    }

    /// Position in [`enumerate_all`] order.
    pub fn index(&self) -> u64 {
        let radix = self.degree() as u64 + 1;
        self.images
            .iter()
            .fold(0, |acc, p| acc * radix + self.digit(*p) as u64)
    }

    /// Inverse of [`PartialTransformation::index`].
    pub fn from_index(n: usize, index: u64) -> Result<Self> {
        check_degree(n)?;
        let radix = n as u64 + 1;
        let order = radix
            .checked_pow(n as u32)
            .ok_or(Error::Overflow("(n+1)^n"))?;
        if index >= order {
            return Err(Error::Overflow("index beyond (n+1)^n"));
        }
        let mut images = vec![None; n];
        let mut rest = index;
        for slot in images.iter_mut().rev() {
            let digit = (rest % radix) as usize;
            rest /= radix;
            *slot = (digit < n).then_some(digit as u8);
        }
        Ok(Self::from_raw(images))
    }

    // UNDEFINED sorts after every point.
    fn digit(&self, p: Option<u8>) -> usize {
        p.map_or(self.degree(), |p| p as usize)
    }

    /// Parses a literal of exactly `n` tokens.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        check_degree(n)?;
        let tokens: Vec<&str> = text.split(',').map(str::trim).collect();
        if tokens.len() != n {
            return Err(Error::TokenCount {
                expected: n,
                found: tokens.len(),
            });
        }
        let images = tokens
            .iter()
            .enumerate()
            .map(|(i, token)| parse_token(token, i + 1, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_raw(images))
    }

    /// Parses a literal, taking `n` from its token count.
    pub fn parse_inferred(text: &str) -> Result<Self> {
        Self::parse(text, text.split(',').count())
    }
}

fn parse_token(token: &str, position: usize, n: usize) -> Result<Option<u8>> {
    if token == UNDEFINED_TOKEN {
        return Ok(None);
    }
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::MalformedToken {
            position,
            token: token.to_string(),
        });
    }
    // all digits, so only overflow can fail here
    let value: usize = token.parse().unwrap_or(usize::MAX);
    if !(1..=n).contains(&value) {
        return Err(Error::PointOutOfRange { position, value, n });
    }
    Ok(Some((value - 1) as u8))
}

impl Ord for PartialTransformation {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            self.images
                .iter()
                .map(|p| self.digit(*p))
                .cmp(other.images.iter().map(|p| other.digit(*p)))
        })
    }
}

impl PartialOrd for PartialTransformation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PartialTransformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.images().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match p {
                Some(p) => write!(f, "{p}")?,
                None => f.write_str(UNDEFINED_TOKEN)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PartialTransformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PT[{self}]")
    }
}

impl FromStr for PartialTransformation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_inferred(s)
    }
}

impl Serialize for PartialTransformation {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PartialTransformation {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Structural statistics of a partial transformation. All points 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformationStats {
    pub domain: BTreeSet<usize>,
    pub image: BTreeSet<usize>,
    pub rank: usize,
    pub zset: BTreeSet<usize>,
    pub z: usize,
    pub fibers: BTreeMap<usize, BTreeSet<usize>>,
    pub fiber_size: BTreeMap<usize, usize>,
}

/// `(alpha_1, ..., alpha_n)`: `alpha_k` counts image points whose full
/// preimage has exactly `k` elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct TypeVector {
    alpha: Vec<usize>,
}

impl TypeVector {
    pub fn new(alpha: Vec<usize>) -> Result<Self> {
        let n = alpha.len();
        check_degree(n)
            .map_err(|_| Error::InvalidType(format!("length {n} is not in 1..={MAX_DEGREE}")))?;
        let covered = alpha.iter().enumerate().try_fold(0usize, |acc, (k, a)| {
            acc.checked_add((k + 1).checked_mul(*a)?)
        });
        match covered {
            Some(covered) if covered <= n => Ok(Self { alpha }),
            _ => Err(Error::InvalidType(format!(
                "sum of k * alpha_k exceeds n = {n}"
            ))),
        }
    }

    /// Type whose fiber sizes are `parts` (order irrelevant).
    pub fn from_parts(n: usize, parts: &[usize]) -> Result<Self> {
        let mut alpha = vec![0; n];
        for &part in parts {
            if part == 0 || part > n {
                return Err(Error::InvalidType(format!("part {part} outside 1..={n}")));
            }
            alpha[part - 1] += 1;
        }
        Self::new(alpha)
    }

    pub fn degree(&self) -> usize {
        self.alpha.len()
    }

    /// `alpha_k` for 1-based `k`.
    pub fn alpha(&self, k: usize) -> usize {
        self.alpha[k - 1]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.alpha
    }

    pub fn rank(&self) -> usize {
        self.alpha.iter().sum()
    }

    /// `sum k * alpha_k`, the size of the domain.
    pub fn domain_size(&self) -> usize {
        self.alpha
            .iter()
            .enumerate()
            .map(|(k, a)| (k + 1) * a)
            .sum()
    }

    /// Number of undefined points, `n - sum k * alpha_k`.
    pub fn undefined_count(&self) -> usize {
        self.degree() - self.domain_size()
    }

    /// Fiber sizes in descending order.
    pub fn parts(&self) -> Vec<usize> {
        self.alpha
            .iter()
            .enumerate()
            .rev()
            .flat_map(|(k, a)| std::iter::repeat_n(k + 1, *a))
            .collect()
    }
}

impl fmt::Display for TypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.alpha.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

impl TryFrom<Vec<usize>> for TypeVector {
    type Error = Error;

    fn try_from(alpha: Vec<usize>) -> Result<Self> {
        Self::new(alpha)
    }
}

impl From<TypeVector> for Vec<usize> {
    fn from(t: TypeVector) -> Self {
        t.alpha
    }
}

/// A total bijection of `{1, ..., n}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Box<[u8]>,
}

impl Permutation {
    pub fn identity(n: usize) -> Result<Self> {
        check_degree(n)?;
        Ok(Self {
            images: (0..n as u8).collect(),
        })
    }

    /// Builds a permutation from 1-based images.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        check_degree(n)?;
        let mut seen = vec![false; n];
        for &p in &images {
            if !(1..=n).contains(&p) || std::mem::replace(&mut seen[p - 1], true) {
                return Err(Error::NotPermutation(format!("{images:?}")));
            }
        }
        Ok(Self {
            images: images.into_iter().map(|p| (p - 1) as u8).collect(),
        })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point - 1] as usize + 1
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|p| *p as usize + 1)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.degree()];
        for (i, p) in self.images.iter().enumerate() {
            inv[*p as usize] = i as u8;
        }
        Self { images: inv.into() }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, p)| i == *p as usize)
    }

    pub fn as_transformation(&self) -> PartialTransformation {
        PartialTransformation::from_raw(self.images.iter().map(|p| Some(*p)).collect())
    }

    /// Cycle notation without fixed points, e.g. `(1 2)(3 5 4)`; `id` for the identity.
    pub fn cycle_notation(&self) -> String {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push((i + 1).to_string());
                i = self.images[i] as usize;
            }
            out.push('(');
            out.push_str(&cycle.join(" "));
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("id");
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.as_transformation(), f)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{self}]")
    }
}

/// All of `PT_n`, lexicographic on image sequences with UNDEFINED last.
///
/// The stream is indexed, so disjoint index ranges can be walked
/// independently with [`Enumeration::range`].
#[derive(Debug, Clone)]
pub struct Enumeration {
    n: usize,
    next: u64,
    end: u64,
}

impl Enumeration {
    pub fn range(n: usize, start: u64, end: u64) -> Result<Self> {
        check_degree(n)?;
        let order = u64::try_from(semigroup_order(n)?).map_err(|_| Error::Overflow("(n+1)^n"))?;
        Ok(Self {
            n,
            next: start.min(order),
            end: end.min(order),
        })
    }
}

impl Iterator for Enumeration {
    type Item = PartialTransformation;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.end {
            return None;
        }
        let item = PartialTransformation::from_index(self.n, self.next).ok();
        self.next += 1;
        item
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.end.saturating_sub(self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Enumeration {}

/// Every element of `PT_n` exactly once, in [`Enumeration`] order.
pub fn enumerate_all(n: usize) -> Result<Enumeration> {
    Enumeration::range(n, 0, u64::MAX)
}
