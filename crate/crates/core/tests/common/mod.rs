//! Brute-force helpers shared by the integration tests. These go through the
//! public point-by-point API only, never through the library's own products,
//! class keys or counting formulas.

#![allow(dead_code)]

use std::collections::BTreeMap;

use pt_variant::{enumerate_all, PartialTransformation};
use rand::Rng;

pub fn pt(text: &str) -> PartialTransformation {
    text.parse().unwrap()
}

pub fn all(n: usize) -> Vec<PartialTransformation> {
    enumerate_all(n).unwrap().collect()
}

pub fn random(n: usize, rng: &mut impl Rng) -> PartialTransformation {
    let images: Vec<Option<usize>> = (0..n)
        .map(|_| {
            let v = rng.gen_range(0..=n);
            (v > 0).then_some(v)
        })
        .collect();
    PartialTransformation::new(images).unwrap()
}

/// `(xy)(i) = y(x(i))`.
pub fn compose(x: &PartialTransformation, y: &PartialTransformation) -> PartialTransformation {
    let images: Vec<Option<usize>> = (1..=x.degree())
        .map(|i| x.apply(i).and_then(|j| y.apply(j)))
        .collect();
    PartialTransformation::new(images).unwrap()
}

pub fn sandwich(
    a: &PartialTransformation,
    x: &PartialTransformation,
    y: &PartialTransformation,
) -> PartialTransformation {
    compose(&compose(x, a), y)
}

/// The row `u -> x a u`, which determines the `~_a` class of `x` by definition.
pub fn behaviour(
    a: &PartialTransformation,
    x: &PartialTransformation,
    carrier: &[PartialTransformation],
) -> Vec<PartialTransformation> {
    carrier.iter().map(|u| sandwich(a, x, u)).collect()
}

/// Classes of `x ~ y iff x a u = y a u for all u`.
pub fn classes_by_definition(
    a: &PartialTransformation,
    carrier: &[PartialTransformation],
) -> Vec<Vec<PartialTransformation>> {
    let mut groups: BTreeMap<Vec<PartialTransformation>, Vec<PartialTransformation>> =
        BTreeMap::new();
    for x in carrier {
        groups
            .entry(behaviour(a, x, carrier))
            .or_default()
            .push(x.clone());
    }
    groups.into_values().collect()
}

pub fn undefined(x: &PartialTransformation) -> usize {
    (1..=x.degree()).filter(|i| x.apply(*i).is_none()).count()
}

pub fn rank(x: &PartialTransformation) -> usize {
    let mut image: Vec<usize> = (1..=x.degree()).filter_map(|i| x.apply(i)).collect();
    image.sort_unstable();
    image.dedup();
    image.len()
}

/// Product formula for the size of the class of `x0`, from point lookups.
pub fn formula_class_size(a: &PartialTransformation, x0: &PartialTransformation) -> u128 {
    let n = a.degree();
    let y = compose(x0, a);
    let fiber = |t: usize| (1..=n).filter(|j| a.apply(*j) == Some(t)).count() as u128;
    let mut size = 1u128;
    for i in 1..=n {
        size *= match y.apply(i) {
            Some(t) => fiber(t),
            None => undefined(a) as u128 + 1,
        };
    }
    size
}
