//! Reference enumeration by brute force, set differencing, and seeded random
//! contexts.
//!
//! The oracle closes every subset of the smaller side of the context and
//! keeps the distinct closures. It shares no code with the engines beyond the
//! context type.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::context::{Concept, ConceptSet, FormalContext, IndexSet};
use crate::error::{FcaError, Result};

/// Largest smaller-side dimension the oracle accepts.
pub const ORACLE_LIMIT: usize = 20;

/// Every concept of `ctx`, found by closing all `2^min(m, n)` subsets.
pub fn brute_force_concepts(ctx: &FormalContext) -> Result<ConceptSet> {
    let (m, n) = (ctx.object_count(), ctx.attribute_count());
    if m.min(n) > ORACLE_LIMIT {
        return Err(FcaError::OracleTooLarge { objects: m, attributes: n, limit: ORACLE_LIMIT });
    }
    if n <= m {
        // closures of attribute subsets; masks index attributes
        let rows: Vec<u32> = (0..m).map(|g| mask_of((0..n).filter(|&a| ctx.has(g, a)))).collect();
        let closed = closures(n, &rows);
        let concepts = closed
            .into_iter()
            .map(|intent| {
                let extent = rows.iter().enumerate().filter(|(_, &r)| r & intent == intent).map(|(g, _)| g).collect();
                Concept::new(extent, members(intent))
            })
            .collect();
        ConceptSet::new(concepts)
    } else {
        // closures of object subsets; masks index objects
        let columns: Vec<u32> = (0..n).map(|a| mask_of((0..m).filter(|&g| ctx.has(g, a)))).collect();
        let closed = closures(m, &columns);
        let concepts = closed
            .into_iter()
            .map(|extent| {
                let intent = columns.iter().enumerate().filter(|(_, &c)| c & extent == extent).map(|(a, _)| a).collect();
                Concept::new(members(extent), intent)
            })
            .collect();
        ConceptSet::new(concepts)
    }
}

fn mask_of(members: impl Iterator<Item = usize>) -> u32 {
    members.fold(0, |acc, i| acc | 1 << i)
}

fn members(mask: u32) -> IndexSet {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

/// Distinct closures `X''` of all `X ⊆ {0..k}` where `X'` is the set of
/// `lines` containing `X` and `X''` their common members.
fn closures(k: usize, lines: &[u32]) -> HashSet<u32> {
    let full = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
    let mut seen = HashSet::new();
    for subset in 0..=full {
        let closed = lines.iter().filter(|&&l| l & subset == subset).fold(full, |acc, &l| acc & l);
        seen.insert(closed);
        if subset == full {
            break;
        }
    }
    seen
}

/// Concepts present in only one of two sets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConceptDiff {
    pub only_left: Vec<Concept>,
    pub only_right: Vec<Concept>,
}

impl ConceptDiff {
    pub fn is_empty(&self) -> bool {
        self.only_left.is_empty() && self.only_right.is_empty()
    }
}

pub fn diff_concept_sets(left: &ConceptSet, right: &ConceptSet) -> ConceptDiff {
    ConceptDiff {
        only_left: left.iter().filter(|c| !right.contains(c)).cloned().collect(),
        only_right: right.iter().filter(|c| !left.contains(c)).cloned().collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomContextSpec {
    pub objects: usize,
    pub attributes: usize,
    pub density: f64,
    pub seed: u64,
}

/// A context whose cells are independent Bernoulli(density) draws from a
/// ChaCha8 stream seeded with `spec.seed`.
pub fn random_context(spec: &RandomContextSpec) -> FormalContext {
    let density = spec.density.clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    FormalContext::from_fn(spec.objects, spec.attributes, |_, _| rng.gen_bool(density))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::fixtures::{attrs, objs, table1, table3};

    fn table2() -> Vec<Concept> {
        vec![
            Concept::new(IndexSet::full(6), IndexSet::new()),
            Concept::new(objs(&[4, 5, 6]), attrs(&[5])),
            Concept::new(objs(&[1, 6]), attrs(&[3])),
            Concept::new(objs(&[1, 2]), attrs(&[2])),
            Concept::new(objs(&[2, 3]), attrs(&[1])),
            Concept::new(objs(&[2]), attrs(&[1, 2])),
            Concept::new(objs(&[1]), attrs(&[2, 3])),
            Concept::new(objs(&[5, 6]), attrs(&[4, 5])),
            Concept::new(objs(&[6]), attrs(&[3, 4, 5])),
            Concept::new(IndexSet::new(), attrs(&[1, 2, 3, 4, 5])),
        ]
    }

    fn table4() -> Vec<Concept> {
        vec![
            Concept::new(IndexSet::full(6), IndexSet::new()),
            Concept::new(objs(&[5, 6]), attrs(&[5, 4])),
            Concept::new(objs(&[4, 5, 6]), attrs(&[4])),
            Concept::new(objs(&[1, 6]), attrs(&[3])),
            Concept::new(objs(&[1, 2]), attrs(&[2])),
            Concept::new(objs(&[2, 3]), attrs(&[1])),
            Concept::new(objs(&[2]), attrs(&[1, 2])),
            Concept::new(objs(&[1]), attrs(&[2, 3])),
            Concept::new(objs(&[6]), attrs(&[3, 4, 5])),
            Concept::new(IndexSet::new(), attrs(&[1, 2, 3, 4, 5])),
        ]
    }

    #[test]
    fn table1_gives_table2() {
        assert_eq!(brute_force_concepts(&table1()).unwrap(), ConceptSet::new(table2()).unwrap());
        assert_eq!(brute_force_concepts(&table1().transpose()).unwrap(), ConceptSet::new(table2()).unwrap().swapped());
    }

    #[test]
    fn table3_gives_table4() {
        assert_eq!(brute_force_concepts(&table3()).unwrap(), ConceptSet::new(table4()).unwrap());
    }

    #[test]
    fn single_zero_cell() {
        let ctx = FormalContext::from_fn(1, 1, |_, _| false);
        let expected = vec![
            Concept::new(IndexSet::from([0]), IndexSet::new()),
            Concept::new(IndexSet::new(), IndexSet::from([0])),
        ];
        assert_eq!(brute_force_concepts(&ctx).unwrap(), ConceptSet::new(expected).unwrap());
    }

    #[test]
    fn refuses_large_contexts() {
        let ctx = FormalContext::from_fn(21, 21, |_, _| false);
        assert!(matches!(brute_force_concepts(&ctx), Err(FcaError::OracleTooLarge { .. })));
        let tall = FormalContext::from_fn(1000, 3, |g, a| (g + a) % 3 == 0);
        assert_eq!(brute_force_concepts(&tall).unwrap().len(), 5);
    }

    #[test]
    fn diff_reports() {
        let full = ConceptSet::new(table2()).unwrap();
        assert!(diff_concept_sets(&full, &full).is_empty());
        let mut short = table2();
        let c9 = short.pop().unwrap();
        let d = diff_concept_sets(&full, &ConceptSet::new(short).unwrap());
        assert_eq!(d.only_left, vec![c9]);
        assert!(d.only_right.is_empty());
    }

    #[test]
    fn swapped_columns_name_the_same_concepts() {
        // Table 3 is Table 1 with a4 and a5 exchanged; rename back and compare
        let rename = |c: &Concept| {
            let intent = c.intent.iter().map(|a| match a {
                3 => 4,
                4 => 3,
                other => other,
            });
            Concept::new(c.extent.clone(), intent.collect())
        };
        let t4: Vec<Concept> = table4().iter().map(rename).collect();
        let d = diff_concept_sets(&ConceptSet::new(table2()).unwrap(), &ConceptSet::new(t4).unwrap());
        assert!(d.is_empty(), "{d:?}");
    }

    #[test]
    fn random_context_contract() {
        let spec = |density, seed| RandomContextSpec { objects: 30, attributes: 40, density, seed };
        assert_eq!(random_context(&spec(0.0, 1)).incidence_count(), 0);
        assert_eq!(random_context(&spec(1.0, 1)).incidence_count(), 1200);
        assert_eq!(random_context(&spec(0.3, 9)), random_context(&spec(0.3, 9)));
        let ones = random_context(&spec(0.3, 9)).incidence_count() as f64;
        let (mean, sd) = (1200.0 * 0.3, (1200.0f64 * 0.3 * 0.7).sqrt());
        assert!((ones - mean).abs() < 3.0 * sd);
    }

    #[test]
    fn oracle_commutes_with_transpose() {
        for seed in 0..20 {
            let ctx = random_context(&RandomContextSpec { objects: 9, attributes: 7, density: 0.5, seed });
            let direct = brute_force_concepts(&ctx).unwrap();
            let flipped = brute_force_concepts(&ctx.transpose()).unwrap();
            assert_eq!(flipped, direct.swapped());
            assert!(!direct.is_empty());
        }
    }
}
