//! Property suite run by `pt-variant verify n`.
//!
//! Exhaustive where `PT_n` is small, seeded random samples otherwise. The seed
//! is part of every report so a failing run can be replayed.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classification::{
    build_isomorphism, canonical_rep, count_variants, enumerate_types, reconstruct_type,
    Fingerprint,
};
use crate::error::Result;
use crate::oracle::{
    cayley_table, find_isomorphism, fingerprint_of_table, verify_isomorphism, CAYLEY_LIMIT,
};
use crate::transform::{
    check_exhaustive, enumerate_all, semigroup_order, PartialTransformation,
    DEFAULT_EXHAUSTIVE_LIMIT,
};
use crate::variant::{predicted_class_multiset, VariantSemigroup};

/// Largest `n` for which every sandwich is checked rather than a sample.
pub const ALL_SANDWICHES_LIMIT: usize = 3;
/// Largest `n` for which quantifiers over element pairs/triples are exhaustive.
pub const EXHAUSTIVE_PAIRS_LIMIT: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random sandwiches added to the canonical representatives above [`ALL_SANDWICHES_LIMIT`].
    pub sandwich_samples: usize,
    /// Random triples for sampled associativity and `~_a` checks.
    pub triple_samples: usize,
    /// Random pairs for sampled homomorphism checks.
    pub pair_samples: usize,
    /// Random same-type sandwich pairs for isomorphism construction.
    pub iso_pairs: usize,
    /// Node cap for the backtracking oracle.
    pub search_budget: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 2024,
            sandwich_samples: 24,
            triple_samples: 1000,
            pair_samples: 2000,
            iso_pairs: 50,
            search_budget: crate::oracle::DEFAULT_SEARCH_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Number of individual assertions evaluated.
    pub cases: u64,
    pub detail: String,
}

/// Uniform random element of `PT_n`.
pub fn random_element(n: usize, rng: &mut impl Rng) -> PartialTransformation {
    let order = semigroup_order(n).expect("n within exhaustive limit") as u64;
    PartialTransformation::from_index(n, rng.gen_range(0..order)).expect("index below order")
}

// Uniform over { x : x a = key }: each defined coordinate picks a point of the
// fiber over key(i); each undefined one picks a point of Z(a) or stays undefined.
fn random_class_member(
    a: &PartialTransformation,
    key: &PartialTransformation,
    rng: &mut impl Rng,
) -> PartialTransformation {
    let fibers = a.fibers();
    let zset: Vec<usize> = a.zset().into_iter().collect();
    let images = key.images().map(|target| match target {
        Some(t) => {
            let fiber: Vec<usize> = fibers[&t].iter().copied().collect();
            Some(fiber[rng.gen_range(0..fiber.len())])
        }
        None => {
            let pick = rng.gen_range(0..=zset.len());
            zset.get(pick).copied()
        }
    });
    PartialTransformation::new(images.collect::<Vec<_>>()).expect("points drawn from 1..=n")
}

struct Tally {
    name: &'static str,
    cases: u64,
    failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            failure: None,
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(describe());
        }
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome {
            name: self.name,
            passed: self.failure.is_none(),
            cases: self.cases,
            detail: self.failure.unwrap_or_else(|| "ok".into()),
        }
    }
}

/// Runs every property at degree `n`. Budget exhaustion in the oracle search
/// is returned as an error rather than as a failed check.
pub fn run_suite(n: usize, config: &SuiteConfig) -> Result<Vec<CheckOutcome>> {
    check_exhaustive(n, DEFAULT_EXHAUSTIVE_LIMIT)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let all: Vec<PartialTransformation> = enumerate_all(n)?.collect();
    let sandwiches: Vec<PartialTransformation> = if n <= ALL_SANDWICHES_LIMIT {
        all.clone()
    } else {
        let mut s: BTreeSet<PartialTransformation> = enumerate_types(n)?
            .iter()
            .map(canonical_rep)
            .collect::<Result<_>>()?;
        for _ in 0..config.sandwich_samples {
            s.insert(random_element(n, &mut rng));
        }
        s.into_iter().collect()
    };
    let exhaustive_pairs = n <= EXHAUSTIVE_PAIRS_LIMIT;

    let mut out = vec![
        associativity(&sandwiches, &all, exhaustive_pairs, config, &mut rng),
        zero_element(&sandwiches, &all),
        annihilator_census(&sandwiches)?,
        class_structure(n, &sandwiches)?,
        related_iff_same_key(n, &sandwiches, &all, exhaustive_pairs, config, &mut rng),
        type_recovery(&sandwiches)?,
        separation(&sandwiches)?,
        construction(n, &sandwiches, &all, exhaustive_pairs, config, &mut rng)?,
        counting(n, &all)?,
        canonical_reps(n)?,
    ];
    if n <= CAYLEY_LIMIT {
        out.push(table_fingerprints(n, &sandwiches)?);
    }
    if n <= EXHAUSTIVE_PAIRS_LIMIT {
        out.push(oracle_agreement(&sandwiches, config.search_budget)?);
    }
    Ok(out)
}

fn triples(
    all: &[PartialTransformation],
    exhaustive: bool,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<[PartialTransformation; 3]> {
    if exhaustive {
        let mut v = Vec::with_capacity(all.len().pow(3));
        for x in all {
            for y in all {
                for z in all {
                    v.push([x.clone(), y.clone(), z.clone()]);
                }
            }
        }
        v
    } else {
        (0..samples)
            .map(|_| std::array::from_fn(|_| all[rng.gen_range(0..all.len())].clone()))
            .collect()
    }
}

fn associativity(
    sandwiches: &[PartialTransformation],
    all: &[PartialTransformation],
    exhaustive: bool,
    config: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> CheckOutcome {
    let mut tally = Tally::new("associativity");
    for a in sandwiches {
        let v = VariantSemigroup::new(a.clone());
        for [x, y, z] in triples(all, exhaustive, config.triple_samples, rng) {
            let left = v.product_unchecked(&v.product_unchecked(&x, &y), &z);
            let right = v.product_unchecked(&x, &v.product_unchecked(&y, &z));
            tally.check(left == right, || format!("a={a} x={x} y={y} z={z}"));
        }
    }
    tally.finish()
}

fn zero_element(
    sandwiches: &[PartialTransformation],
    all: &[PartialTransformation],
) -> CheckOutcome {
    let mut tally = Tally::new("two-sided zero");
    for a in sandwiches {
        let v = VariantSemigroup::new(a.clone());
        let zero = v.zero();
        for x in all {
            let ok =
                v.product_unchecked(x, &zero).is_zero() && v.product_unchecked(&zero, x).is_zero();
            tally.check(ok, || format!("a={a} x={x}"));
        }
    }
    tally.finish()
}

fn annihilator_census(sandwiches: &[PartialTransformation]) -> Result<CheckOutcome> {
    let mut tally = Tally::new("annihilator counts");
    for a in sandwiches {
        let census = VariantSemigroup::new(a.clone()).annihilator_census()?;
        tally.check(census.agrees(), || format!("a={a}: {census:?}"));
    }
    Ok(tally.finish())
}

fn class_structure(n: usize, sandwiches: &[PartialTransformation]) -> Result<CheckOutcome> {
    let mut tally = Tally::new("class sizes");
    let order = semigroup_order(n)?;
    for a in sandwiches {
        let v = VariantSemigroup::new(a.clone());
        let classes = v.sim_classes()?;
        let expected_count = (a.rank() as u128 + 1).pow(n as u32);
        tally.check(classes.class_count() as u128 == expected_count, || {
            format!(
                "a={a}: {} classes, expected {expected_count}",
                classes.class_count()
            )
        });
        tally.check(classes.size_multiset().sum() == order, || {
            format!("a={a}: sizes do not sum to {order}")
        });
        for (key, members) in classes.iter() {
            let formula = v.class_size(&members[0])?;
            tally.check(formula == members.len() as u128, || {
                format!(
                    "a={a} class {key}: formula {formula}, observed {}",
                    members.len()
                )
            });
        }
        let predicted = predicted_class_multiset(&a.type_vector())?;
        tally.check(&predicted == classes.size_multiset(), || {
            format!(
                "a={a}: predicted {predicted}, observed {}",
                classes.size_multiset()
            )
        });
    }
    Ok(tally.finish())
}

fn related_iff_same_key(
    n: usize,
    sandwiches: &[PartialTransformation],
    all: &[PartialTransformation],
    exhaustive: bool,
    config: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> CheckOutcome {
    let mut tally = Tally::new("~_a equals equal xa");
    let mut check =
        |a: &PartialTransformation, x: &PartialTransformation, y: &PartialTransformation| {
            let v = VariantSemigroup::new(a.clone());
            let related = all
                .iter()
                .all(|u| v.product_unchecked(x, u) == v.product_unchecked(y, u));
            let same_key = x.then(a) == y.then(a);
            tally.check(related == same_key, || format!("a={a} x={x} y={y}"));
        };
    if exhaustive {
        for a in sandwiches {
            for x in all {
                for y in all {
                    check(a, x, y);
                }
            }
        }
    } else {
        let samples = config.triple_samples.max(500);
        for _ in 0..samples {
            let a = &sandwiches[rng.gen_range(0..sandwiches.len())];
            let x = random_element(n, rng);
            // bias half the samples toward related pairs, which are rare
            let y = if rng.gen_bool(0.5) {
                random_class_member(a, &x.then(a), rng)
            } else {
                random_element(n, rng)
            };
            check(a, &x, &y);
        }
    }
    tally.finish()
}

fn fingerprints(
    sandwiches: &[PartialTransformation],
) -> Result<Vec<(PartialTransformation, Fingerprint)>> {
    sandwiches
        .iter()
        .map(|a| {
            Ok((
                a.clone(),
                Fingerprint::of_variant(&VariantSemigroup::new(a.clone()))?,
            ))
        })
        .collect()
}

fn type_recovery(sandwiches: &[PartialTransformation]) -> Result<CheckOutcome> {
    let mut tally = Tally::new("type recovery");
    for (a, f) in fingerprints(sandwiches)? {
        let t = reconstruct_type(&f);
        tally.check(t.as_ref() == Ok(&a.type_vector()), || {
            format!("a={a}: {t:?}")
        });
    }
    Ok(tally.finish())
}

fn separation(sandwiches: &[PartialTransformation]) -> Result<CheckOutcome> {
    let mut tally = Tally::new("fingerprint separation");
    // one fingerprint per type suffices once each is known to be type-determined
    let mut by_type: BTreeMap<_, BTreeSet<_>> = BTreeMap::new();
    for (a, f) in fingerprints(sandwiches)? {
        by_type.entry(a.type_vector()).or_default().insert((
            f.class_sizes.iter().collect::<Vec<_>>(),
            f.annihilators.left,
        ));
    }
    for (t, fs) in &by_type {
        tally.check(fs.len() == 1, || {
            format!("type {t} has {} fingerprints", fs.len())
        });
    }
    let distinct: BTreeSet<_> = by_type.values().flatten().collect();
    tally.check(distinct.len() == by_type.len(), || {
        format!(
            "{} types share {} fingerprints",
            by_type.len(),
            distinct.len()
        )
    });
    Ok(tally.finish())
}

fn construction(
    n: usize,
    sandwiches: &[PartialTransformation],
    all: &[PartialTransformation],
    exhaustive: bool,
    config: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> Result<CheckOutcome> {
    let mut tally = Tally::new("isomorphism construction");
    let mut groups: BTreeMap<_, Vec<&PartialTransformation>> = BTreeMap::new();
    for a in sandwiches {
        groups.entry(a.type_vector()).or_default().push(a);
    }
    let groups: Vec<Vec<&PartialTransformation>> = groups.into_values().collect();
    let mut pairs: Vec<(PartialTransformation, PartialTransformation)> = Vec::new();
    for t in enumerate_types(n)? {
        let rep = canonical_rep(&t)?;
        pairs.push((rep.clone(), rep));
    }
    for _ in 0..config.iso_pairs {
        let group = &groups[rng.gen_range(0..groups.len())];
        let a = group[rng.gen_range(0..group.len())];
        let b = group[rng.gen_range(0..group.len())];
        pairs.push((a.clone(), b.clone()));
    }
    for (a, b) in pairs {
        let w = build_isomorphism(&a, &b)?;
        tally.check(w.is_valid(), || format!("b != tau a pi for a={a} b={b}"));
        let (va, vb) = (
            VariantSemigroup::new(a.clone()),
            VariantSemigroup::new(b.clone()),
        );
        let f = |x: &PartialTransformation| w.apply(x);
        let mut hom = |x: &PartialTransformation, y: &PartialTransformation| -> Result<()> {
            let ok = f(&va.product_unchecked(x, y))? == vb.product_unchecked(&f(x)?, &f(y)?);
            tally.check(ok, || format!("a={a} b={b} x={x} y={y}"));
            Ok(())
        };
        if exhaustive {
            for x in all {
                for y in all {
                    hom(x, y)?;
                }
            }
        } else {
            for _ in 0..config.pair_samples {
                hom(&random_element(n, rng), &random_element(n, rng))?;
            }
        }
        if exhaustive {
            // images of ~_a classes are whole ~_b classes
            let (ca, cb) = (va.sim_classes()?, vb.sim_classes()?);
            for (_, members) in ca.iter() {
                let image: BTreeSet<_> = members.iter().map(f).collect::<Result<_>>()?;
                let key = image.iter().next().expect("classes are non-empty").then(&b);
                let target: BTreeSet<_> = cb
                    .members(&key)
                    .unwrap_or_default()
                    .iter()
                    .cloned()
                    .collect();
                tally.check(image == target, || format!("class transport a={a} b={b}"));
            }
        }
    }
    Ok(tally.finish())
}

fn counting(n: usize, all: &[PartialTransformation]) -> Result<CheckOutcome> {
    let mut tally = Tally::new("variant count");
    let observed: BTreeSet<_> = all.iter().map(PartialTransformation::type_vector).collect();
    let listed = enumerate_types(n)?;
    let expected = count_variants(n);
    tally.check(observed.len() as u128 == expected, || {
        format!("{} types occur, sum p(k) = {expected}", observed.len())
    });
    tally.check(listed.len() as u128 == expected, || {
        format!("{} types listed, sum p(k) = {expected}", listed.len())
    });
    tally.check(
        listed.iter().cloned().collect::<BTreeSet<_>>() == observed,
        || "listed types differ from occurring types".into(),
    );
    Ok(tally.finish())
}

fn canonical_reps(n: usize) -> Result<CheckOutcome> {
    let mut tally = Tally::new("canonical representatives");
    for t in enumerate_types(n)? {
        let rep = canonical_rep(&t)?;
        tally.check(rep.type_vector() == t, || format!("type {t}: rep {rep}"));
    }
    Ok(tally.finish())
}

fn table_fingerprints(n: usize, sandwiches: &[PartialTransformation]) -> Result<CheckOutcome> {
    let mut tally = Tally::new("table fingerprints");
    let chosen: Vec<PartialTransformation> = if n <= EXHAUSTIVE_PAIRS_LIMIT {
        sandwiches.to_vec()
    } else {
        enumerate_types(n)?
            .iter()
            .map(canonical_rep)
            .collect::<Result<_>>()?
    };
    for a in chosen {
        let v = VariantSemigroup::new(a.clone());
        let table = fingerprint_of_table(&cayley_table(&v)?);
        let variant = Fingerprint::of_variant(&v)?;
        tally.check(table.matches(&variant), || {
            format!("a={a}: table {table:?}")
        });
    }
    Ok(tally.finish())
}

fn oracle_agreement(sandwiches: &[PartialTransformation], budget: u64) -> Result<CheckOutcome> {
    let mut tally = Tally::new("oracle agreement");
    let tables = sandwiches
        .iter()
        .map(|a| cayley_table(&VariantSemigroup::new(a.clone())))
        .collect::<Result<Vec<_>>>()?;
    for i in 0..sandwiches.len() {
        for j in i + 1..sandwiches.len() {
            let (a, b) = (&sandwiches[i], &sandwiches[j]);
            let witness = find_isomorphism(&tables[i], &tables[j], budget)?;
            let same_type = a.type_vector() == b.type_vector();
            tally.check(witness.is_some() == same_type, || format!("a={a} b={b}"));
            if let Some(w) = witness {
                let ok = verify_isomorphism(&tables[i], &tables[j], &w)?;
                tally.check(ok, || format!("bad witness for a={a} b={b}"));
            }
        }
    }
    Ok(tally.finish())
}
