//! Semantics-free checks on finite semigroups given by their Cayley tables.
//!
//! Nothing here looks inside the elements: a table is an `m x m` matrix of
//! indices plus display labels. Variant tables are built once through
//! [`cayley_table`] and from then on are treated as opaque.
//!
//! Text format: a header line `order m` followed by `m` lines of `m`
//! space-separated indices, every line newline-terminated. Labels travel in a
//! sidecar list, one label per line.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classification::Fingerprint;
use crate::error::{Error, Result};
use crate::multiset::SizeMultiset;
use crate::transform::{check_exhaustive, enumerate_all};
use crate::variant::{AnnihilatorCounts, VariantSemigroup};

/// Largest `n` accepted by [`cayley_table`]; `PT_3` has order 64.
pub const CAYLEY_LIMIT: usize = 3;

/// Tables up to this order are checked for associativity on all triples.
pub const FULL_ASSOCIATIVITY_ORDER: usize = 64;

const SAMPLED_TRIPLES: usize = 100_000;
const ASSOCIATIVITY_SEED: u64 = 0x5eed_a550c;

/// Default node cap for [`find_isomorphism`].
pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyTable {
    order: usize,
    labels: Vec<String>,
    products: Vec<u32>,
}

impl CayleyTable {
    /// Validates closure and associativity; labels default to the indices.
    pub fn new(products: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let order = products.len();
        if order == 0 {
            return Err(Error::TableFormat {
                line: 1,
                message: "empty table".into(),
            });
        }
        let mut flat = Vec::with_capacity(order * order);
        for (x, row) in products.iter().enumerate() {
            if row.len() != order {
                return Err(Error::TableFormat {
                    line: x + 2,
                    message: format!("row {x} has {} entries, expected {order}", row.len()),
                });
            }
            for (y, &value) in row.iter().enumerate() {
                if value >= order {
                    return Err(Error::ProductOutOfRange { x, y, value, order });
                }
                flat.push(value as u32);
            }
        }
        let labels = match labels {
            Some(labels) if labels.len() != order => {
                return Err(Error::TableFormat {
                    line: 0,
                    message: format!("{} labels for order {order}", labels.len()),
                })
            }
            Some(labels) => labels,
            None => (0..order).map(|i| i.to_string()).collect(),
        };
        let table = Self {
            order,
            labels,
            products: flat,
        };
        table.check_associative()?;
        Ok(table)
    }

    fn check_associative(&self) -> Result<()> {
        let m = self.order;
        let holds = |x: usize, y: usize, z: usize| {
            self.mul(self.mul(x, y), z) == self.mul(x, self.mul(y, z))
        };
        if m <= FULL_ASSOCIATIVITY_ORDER {
            for x in 0..m {
                for y in 0..m {
                    for z in 0..m {
                        if !holds(x, y, z) {
                            return Err(Error::NotAssociative { x, y, z });
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(ASSOCIATIVITY_SEED);
            for _ in 0..SAMPLED_TRIPLES {
                let (x, y, z) = (
                    rng.gen_range(0..m),
                    rng.gen_range(0..m),
                    rng.gen_range(0..m),
                );
                if !holds(x, y, z) {
                    return Err(Error::NotAssociative { x, y, z });
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.products[x * self.order + y] as usize
    }

    pub fn row(&self, x: usize) -> &[u32] {
        &self.products[x * self.order..(x + 1) * self.order]
    }

    /// The table of the same semigroup with element `x` renamed `relabel[x]`.
    pub fn relabeled(&self, relabel: &[usize]) -> Result<Self> {
        check_bijection(relabel, self.order)?;
        let m = self.order;
        let mut products = vec![vec![0; m]; m];
        let mut labels = vec![String::new(); m];
        for x in 0..m {
            labels[relabel[x]] = self.labels[x].clone();
            for y in 0..m {
                products[relabel[x]][relabel[y]] = relabel[self.mul(x, y)];
            }
        }
        Self::new(products, Some(labels))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("order {}\n", self.order);
        for x in 0..self.order {
            let row: Vec<String> = self.row(x).iter().map(u32::to_string).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn labels_text(&self) -> String {
        self.labels.iter().fold(String::new(), |mut out, l| {
            let _ = writeln!(out, "{l}");
            out
        })
    }

    /// Parses [`CayleyTable::to_text`] output, with an optional label sidecar.
    pub fn from_text(table: &str, labels: Option<&str>) -> Result<Self> {
        let mut lines = table.lines();
        let header = lines.next().unwrap_or_default();
        let order: usize = header
            .strip_prefix("order ")
            .and_then(|m| m.parse().ok())
            .ok_or_else(|| Error::TableFormat {
                line: 1,
                message: format!("expected `order m`, found {header:?}"),
            })?;
        let rows = lines
            .enumerate()
            .map(|(i, line)| {
                line.split(' ')
                    .map(|tok| {
                        tok.parse::<usize>().map_err(|_| Error::TableFormat {
                            line: i + 2,
                            message: format!("bad index {tok:?}"),
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.len() != order {
            return Err(Error::TableFormat {
                line: rows.len() + 2,
                message: format!("{} rows for order {order}", rows.len()),
            });
        }
        let labels = labels.map(|text| text.lines().map(str::to_string).collect());
        Self::new(rows, labels)
    }
}

/// Multiplication table of `v` over `PT_n` in enumeration order, labels being
/// the transformation literals.
pub fn cayley_table(v: &VariantSemigroup) -> Result<CayleyTable> {
    check_exhaustive(v.degree(), CAYLEY_LIMIT)?;
    let elements: Vec<_> = enumerate_all(v.degree())?.collect();
    let products = elements
        .iter()
        .map(|x| {
            elements
                .iter()
                .map(|y| v.product_unchecked(x, y).index() as usize)
                .collect()
        })
        .collect();
    let labels = elements.iter().map(ToString::to_string).collect();
    CayleyTable::new(products, Some(labels))
}

fn check_bijection(map: &[usize], order: usize) -> Result<()> {
    let mut hit = vec![false; order];
    if map.len() != order {
        return Err(Error::NotBijective { order });
    }
    for &y in map {
        if y >= order || std::mem::replace(&mut hit[y], true) {
            return Err(Error::NotBijective { order });
        }
    }
    Ok(())
}

/// Whether `map` (element `x` of `a` to `map[x]` of `b`) is a homomorphism.
/// Errors unless the orders agree and `map` is a bijection.
pub fn verify_isomorphism(a: &CayleyTable, b: &CayleyTable, map: &[usize]) -> Result<bool> {
    if a.order != b.order {
        return Err(Error::OrderMismatch {
            left: a.order,
            right: b.order,
        });
    }
    check_bijection(map, a.order)?;
    let m = a.order;
    Ok((0..m).all(|x| (0..m).all(|y| map[a.mul(x, y)] == b.mul(map[x], map[y]))))
}

// Isomorphism-invariant data about one element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct ElementProfile {
    idempotent: bool,
    left_fixed: usize,
    right_fixed: usize,
    occurrences: usize,
    commuting: usize,
    // powers x, x^2, ... : steps before the cycle and cycle length
    power_tail: usize,
    power_period: usize,
    row_profile: Vec<usize>,
    column_profile: Vec<usize>,
}

fn value_profile(values: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for v in values {
        *counts.entry(v).or_default() += 1;
    }
    let mut profile: Vec<usize> = counts.into_values().collect();
    profile.sort_unstable();
    profile
}

fn profiles(t: &CayleyTable) -> Vec<ElementProfile> {
    let m = t.order;
    let mut occurrences = vec![0; m];
    for &p in &t.products {
        occurrences[p as usize] += 1;
    }
    (0..m)
        .map(|x| {
            let mut seen: HashMap<usize, usize> = HashMap::new();
            let mut power = x;
            let mut step = 0;
            let (power_tail, power_period) = loop {
                if let Some(&first) = seen.get(&power) {
                    break (first, step - first);
                }
                seen.insert(power, step);
                power = t.mul(power, x);
                step += 1;
            };
            ElementProfile {
                idempotent: t.mul(x, x) == x,
                left_fixed: (0..m).filter(|&y| t.mul(x, y) == x).count(),
                right_fixed: (0..m).filter(|&y| t.mul(y, x) == x).count(),
                occurrences: occurrences[x],
                commuting: (0..m).filter(|&y| t.mul(x, y) == t.mul(y, x)).count(),
                power_tail,
                power_period,
                row_profile: value_profile((0..m).map(|y| t.mul(x, y))),
                column_profile: value_profile((0..m).map(|y| t.mul(y, x))),
            }
        })
        .collect()
}

struct Search<'t> {
    a: &'t CayleyTable,
    b: &'t CayleyTable,
    // candidates[x]: elements of b with the same profile as x
    candidates: Vec<Vec<usize>>,
    map: Vec<Option<usize>>,
    inverse: Vec<Option<usize>>,
    trail: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    /// Assigns `x -> y` and everything it forces. Leaves partial work on the
    /// trail when it fails; the caller rolls back.
    fn assign(&mut self, x: usize, y: usize) -> bool {
        let mut queue = vec![(x, y)];
        while let Some((p, q)) = queue.pop() {
            match (self.map[p], self.inverse[q]) {
                (Some(existing), _) if existing == q => continue,
                (None, None) if self.candidates[p].contains(&q) => {}
                _ => return false,
            }
            self.map[p] = Some(q);
            self.inverse[q] = Some(p);
            self.trail.push(p);
            for &u in &self.trail {
                let v = self.map[u].expect("trail holds assigned elements");
                queue.push((self.a.mul(p, u), self.b.mul(q, v)));
                queue.push((self.a.mul(u, p), self.b.mul(v, q)));
            }
        }
        true
    }

    fn rollback(&mut self, mark: usize) {
        for p in self.trail.drain(mark..) {
            let q = self.map[p].take().expect("trail holds assigned elements");
            self.inverse[q] = None;
        }
    }

    fn solve(&mut self) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::SearchBudgetExhausted { nodes: self.budget });
        }
        // most constrained unassigned element first, lowest index on ties
        let next = (0..self.a.order)
            .filter(|&x| self.map[x].is_none())
            .map(|x| {
                let open: Vec<usize> = self.candidates[x]
                    .iter()
                    .copied()
                    .filter(|&y| self.inverse[y].is_none())
                    .collect();
                (open.len(), x, open)
            })
            .min_by_key(|(len, x, _)| (*len, *x));
        let Some((_, x, open)) = next else {
            return Ok(true);
        };
        for y in open {
            let mark = self.trail.len();
            if self.assign(x, y) && self.solve()? {
                return Ok(true);
            }
            self.rollback(mark);
        }
        Ok(false)
    }
}

/// Decides isomorphism by backtracking, returning a witness `map` with
/// `map[x * y] = map[x] * map[y]`.
///
/// Running out of `budget` search nodes is reported as
/// [`Error::SearchBudgetExhausted`], never as `Ok(None)`.
pub fn find_isomorphism(
    a: &CayleyTable,
    b: &CayleyTable,
    budget: u64,
) -> Result<Option<Vec<usize>>> {
    if a.order != b.order {
        return Err(Error::OrderMismatch {
            left: a.order,
            right: b.order,
        });
    }
    let (pa, pb) = (profiles(a), profiles(b));
    let mut sorted_a = pa.clone();
    let mut sorted_b = pb.clone();
    sorted_a.sort();
    sorted_b.sort();
    if sorted_a != sorted_b {
        return Ok(None);
    }
    let candidates = pa
        .iter()
        .map(|p| (0..b.order).filter(|&y| pb[y] == *p).collect())
        .collect();
    let mut search = Search {
        a,
        b,
        candidates,
        map: vec![None; a.order],
        inverse: vec![None; b.order],
        trail: Vec::new(),
        nodes: 0,
        budget,
    };
    if search.solve()? {
        Ok(Some(
            search
                .map
                .into_iter()
                .map(|y| y.expect("complete assignment"))
                .collect(),
        ))
    } else {
        Ok(None)
    }
}

/// Invariants of a table computed from the products alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableFingerprint {
    pub order: usize,
    /// The element `e` with `e x = x e = e` for all `x`, if any.
    pub zero: Option<usize>,
    /// Class sizes of `x ≡ y` iff `x u = y u` for every `u`.
    pub class_sizes: SizeMultiset,
    /// Annihilators relative to `zero`; absent when there is no zero.
    pub annihilators: Option<AnnihilatorCounts>,
}

impl TableFingerprint {
    /// Whether this agrees with a variant fingerprint on every field.
    pub fn matches(&self, f: &Fingerprint) -> bool {
        self.class_sizes == f.class_sizes && self.annihilators == Some(f.annihilators)
    }
}

pub fn fingerprint_of_table(t: &CayleyTable) -> TableFingerprint {
    let m = t.order;
    let zero = (0..m).find(|&e| (0..m).all(|x| t.mul(e, x) == e && t.mul(x, e) == e));
    let mut rows: BTreeMap<&[u32], u128> = BTreeMap::new();
    for x in 0..m {
        *rows.entry(t.row(x)).or_default() += 1;
    }
    let mut class_sizes = SizeMultiset::new();
    for size in rows.into_values() {
        class_sizes.insert(size);
    }
    let annihilators = zero.map(|e| {
        let left = |x: usize| (0..m).all(|u| t.mul(x, u) == e);
        let right = |x: usize| (0..m).all(|u| t.mul(u, x) == e);
        let mut counts = AnnihilatorCounts::default();
        for x in 0..m {
            let (l, r) = (left(x), right(x));
            counts.left += l as u128;
            counts.right += r as u128;
            counts.two_sided += (l && r) as u128;
        }
        counts
    });
    TableFingerprint {
        order: m,
        zero,
        class_sizes,
        annihilators,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::PartialTransformation;

    fn variant(text: &str) -> VariantSemigroup {
        VariantSemigroup::new(text.parse().unwrap())
    }

    fn index(text: &str) -> usize {
        text.parse::<PartialTransformation>().unwrap().index() as usize
    }

    fn null_table(m: usize) -> CayleyTable {
        CayleyTable::new(vec![vec![0; m]; m], None).unwrap()
    }

    #[test]
    fn n1_tables() {
        let (zero, id) = (index("-"), index("1"));
        let ordinary = cayley_table(&variant("1")).unwrap();
        assert_eq!(ordinary.mul(zero, zero), zero);
        assert_eq!(ordinary.mul(zero, id), zero);
        assert_eq!(ordinary.mul(id, zero), zero);
        assert_eq!(ordinary.mul(id, id), id);

        let null = cayley_table(&variant("-")).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(null.mul(x, y), zero);
            }
        }
    }

    #[test]
    fn zero_row_and_column_n2() {
        let zero = index("-,-");
        for a in enumerate_all(2).unwrap() {
            let t = cayley_table(&VariantSemigroup::new(a)).unwrap();
            for x in 0..9 {
                assert_eq!(t.mul(zero, x), zero);
                assert_eq!(t.mul(x, zero), zero);
            }
        }
    }

    #[test]
    fn cayley_budget() {
        assert_eq!(
            cayley_table(&variant("1,2,3,4")),
            Err(Error::OverBudget { n: 4, limit: 3 })
        );
    }

    #[test]
    fn table_validation() {
        assert!(matches!(
            CayleyTable::new(vec![vec![0, 2], vec![0, 0]], None),
            Err(Error::ProductOutOfRange {
                x: 0,
                y: 1,
                value: 2,
                ..
            })
        ));
        // x*y = y+1 mod 3 is not associative
        let rows = (0..3)
            .map(|_| (0..3).map(|y| (y + 1) % 3).collect())
            .collect();
        assert!(matches!(
            CayleyTable::new(rows, None),
            Err(Error::NotAssociative { .. })
        ));
    }

    #[test]
    fn text_round_trip_is_exact() {
        let t = cayley_table(&variant("1,1")).unwrap();
        let text = t.to_text();
        assert!(text.starts_with("order 9\n"));
        let back = CayleyTable::from_text(&text, Some(&t.labels_text())).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_text(), text);
        assert_eq!(back.labels_text(), t.labels_text());
    }

    #[test]
    fn text_format_errors() {
        assert!(matches!(
            CayleyTable::from_text("ord 1\n0\n", None),
            Err(Error::TableFormat { line: 1, .. })
        ));
        assert!(matches!(
            CayleyTable::from_text("order 2\n0 0\n", None),
            Err(Error::TableFormat { .. })
        ));
        assert!(matches!(
            CayleyTable::from_text("order 1\nx\n", None),
            Err(Error::TableFormat { line: 2, .. })
        ));
    }

    #[test]
    fn verify_examples() {
        let t = cayley_table(&variant("1,1")).unwrap();
        let identity: Vec<usize> = (0..9).collect();
        assert_eq!(verify_isomorphism(&t, &t, &identity), Ok(true));

        let ordinary = cayley_table(&variant("1")).unwrap();
        let null = cayley_table(&variant("-")).unwrap();
        assert_eq!(verify_isomorphism(&null, &ordinary, &[0, 1]), Ok(false));
        assert_eq!(verify_isomorphism(&null, &ordinary, &[1, 0]), Ok(false));

        assert_eq!(
            verify_isomorphism(&null, &t, &[0, 1]),
            Err(Error::OrderMismatch { left: 2, right: 9 })
        );
        assert_eq!(
            verify_isomorphism(&null, &ordinary, &[0, 0]),
            Err(Error::NotBijective { order: 2 })
        );
    }

    #[test]
    fn search_examples() {
        let ordinary = cayley_table(&variant("1")).unwrap();
        let null = cayley_table(&variant("-")).unwrap();
        assert_eq!(
            find_isomorphism(&ordinary, &null, DEFAULT_SEARCH_BUDGET),
            Ok(None)
        );

        let a = cayley_table(&variant("1,1")).unwrap();
        let b = cayley_table(&variant("2,2")).unwrap();
        let w = find_isomorphism(&a, &b, DEFAULT_SEARCH_BUDGET)
            .unwrap()
            .unwrap();
        assert_eq!(verify_isomorphism(&a, &b, &w), Ok(true));
    }

    #[test]
    fn search_recovers_relabeling() {
        let a = cayley_table(&variant("1,2,-")).unwrap();
        let relabel: Vec<usize> = (0..64).map(|x| (x * 37 + 11) % 64).collect();
        let b = a.relabeled(&relabel).unwrap();
        let w = find_isomorphism(&a, &b, DEFAULT_SEARCH_BUDGET)
            .unwrap()
            .unwrap();
        assert_eq!(verify_isomorphism(&a, &b, &w), Ok(true));
    }

    #[test]
    fn search_reports_budget() {
        let a = null_table(4);
        // the null semigroup with any zero has 3! automorphisms; one node is not enough
        assert_eq!(
            find_isomorphism(&a, &a, 1),
            Err(Error::SearchBudgetExhausted { nodes: 1 })
        );
    }

    #[test]
    fn fingerprint_examples() {
        let f = fingerprint_of_table(&cayley_table(&variant("1,1")).unwrap());
        assert_eq!(f.class_sizes, [1, 2, 2, 4].into_iter().collect());
        assert_eq!(f.annihilators.unwrap().left, 1);

        let f = fingerprint_of_table(&null_table(5));
        assert_eq!(f.zero, Some(0));
        assert_eq!(f.class_sizes, [5].into_iter().collect());
        assert_eq!(
            f.annihilators,
            Some(AnnihilatorCounts {
                left: 5,
                right: 5,
                two_sided: 5
            })
        );

        let f = fingerprint_of_table(&cayley_table(&variant("1,2")).unwrap());
        assert_eq!(f.class_sizes, [1; 9].into_iter().collect());
        assert_eq!(f.annihilators.unwrap().left, 1);
    }

    #[test]
    fn fingerprint_without_zero() {
        // left-zero band: x*y = x has no two-sided zero
        let rows = (0..3).map(|x| vec![x; 3]).collect();
        let f = fingerprint_of_table(&CayleyTable::new(rows, None).unwrap());
        assert_eq!(f.zero, None);
        assert_eq!(f.annihilators, None);
        assert_eq!(f.class_sizes.cardinality(), 3);
    }
}
