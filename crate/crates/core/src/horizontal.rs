//! Baseline Close-by-One engine over row-packed contexts.
//!
//! Extents are lists of object indices kept in one linear arena, and every
//! recursion frame owns a local queue of the children it found. Attributes
//! are scanned from the highest index down; a child found at attribute `j`
//! continues the scan from `j - 1`.

use std::time::Instant;

use crate::bits::{horizontal_storage_bytes, pack_horizontal, HorizontalContext, WordWidth};
use crate::context::{AttributeSet, FormalContext, IndexSet, ObjectSet};
use crate::engine::{finish, Enumeration, EnumerationStats, Enumerator, IncludeBottom, SpawnLog};
use crate::error::{FcaError, Result};

/// Default cap on local queue storage: 2 GiB.
pub const DEFAULT_QUEUE_BUDGET: u64 = 2 << 30;

/// Bytes of one local queue slot: a concept number and an attribute.
const QUEUE_SLOT_BYTES: u64 = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HorizontalEngineConfig {
    pub width: WordWidth,
    /// Remember attributes whose column misses the current extent entirely
    /// and skip them below this node.
    pub empty_skip: bool,
    /// Cap on the total local queue storage allocated during a run. Each
    /// frame reserves one slot per attribute it may scan.
    pub local_queue_budget: u64,
    pub include_bottom: IncludeBottom,
}

impl Default for HorizontalEngineConfig {
    fn default() -> Self {
        Self::skipping()
    }
}

impl HorizontalEngineConfig {
    /// 32-bit rows, no empty-extent skip.
    pub fn plain() -> Self {
        HorizontalEngineConfig {
            width: WordWidth::W32,
            empty_skip: false,
            local_queue_budget: DEFAULT_QUEUE_BUDGET,
            include_bottom: IncludeBottom::Auto,
        }
    }

    /// 64-bit rows with the empty-extent skip.
    pub fn skipping() -> Self {
        HorizontalEngineConfig { width: WordWidth::W64, empty_skip: true, ..Self::plain() }
    }

    fn validate(&self) -> Result<()> {
        if self.local_queue_budget == 0 {
            return Err(FcaError::InvalidArgument("local queue budget must be positive".into()));
        }
        Ok(())
    }
}

impl Enumerator for HorizontalEngineConfig {
    fn name(&self) -> String {
        format!("horizontal{}{}", self.width, if self.empty_skip { "+skip" } else { "" })
    }

    fn enumerate(&self, ctx: &FormalContext) -> Result<Enumeration> {
        enumerate_horizontal(ctx, self)
    }
}

pub fn enumerate_horizontal(ctx: &FormalContext, cfg: &HorizontalEngineConfig) -> Result<Enumeration> {
    cfg.validate()?;
    let started = Instant::now();
    let packed = pack_horizontal(ctx, cfg.width);
    let mut run = Run::new(&packed, cfg);
    run.execute()?;
    let elapsed = started.elapsed();

    let stored = *run.start.last().expect("root extent recorded");
    let stats = EnumerationStats {
        elapsed,
        extent_storage_bytes: horizontal_storage_bytes(stored),
        peak_queue_bytes: run.queue_peak,
        total_queue_bytes: run.queue_total,
        canonicity_failures: run.canonicity_failures,
        max_depth: run.max_depth,
        ..EnumerationStats::default()
    };
    let extents = run
        .start
        .windows(2)
        .map(|w| IndexSet::from_sorted(run.extents[w[0]..w[1]].to_vec()))
        .collect();
    finish(ctx, &run.log, extents, cfg.include_bottom, stats)
}

/// Canonicity of a new extent `c` found at attribute `j` under the partial
/// intent `b`: no attribute above `j` outside `b` may contain `c`.
pub fn is_canonical_horizontal(c: &ObjectSet, j: usize, b: &AttributeSet, packed: &HorizontalContext) -> bool {
    let mut skip = vec![0u64; packed.words_per_row()];
    let bits = packed.width().bits() as usize;
    for a in b.iter() {
        skip[a / bits] |= 1 << (a % bits);
    }
    let objects: Vec<u32> = c.as_slice().to_vec();
    canonical(&objects, j, &skip, packed)
}

/// ANDs the rows of `objects` over the words covering attributes above `j`,
/// masking out `skip`; any surviving bit is an earlier attribute containing
/// the extent.
fn canonical(objects: &[u32], j: usize, skip: &[u64], packed: &HorizontalContext) -> bool {
    let n = packed.attribute_count();
    let lo = j + 1;
    if lo >= n {
        return true;
    }
    let bits = packed.width().bits() as usize;
    let full = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
    let last = packed.words_per_row() - 1;
    for w in lo / bits..=last {
        let mut acc = full & !skip[w];
        if w == lo / bits {
            acc &= full << (lo % bits);
        }
        if w == last && n % bits != 0 {
            acc &= (1u64 << (n % bits)) - 1;
        }
        for &g in objects {
            if acc == 0 {
                break;
            }
            acc &= packed.row(g as usize)[w];
        }
        if acc != 0 {
            return false;
        }
    }
    true
}

struct Frame {
    /// Local queue: (child concept number, attribute where it was found).
    queue: Vec<(u32, u32)>,
    reserved: u64,
}

struct Run<'a> {
    packed: &'a HorizontalContext,
    cfg: &'a HorizontalEngineConfig,
    extents: Vec<u32>,
    /// Extent of concept `i` is `extents[start[i]..start[i + 1]]`.
    start: Vec<usize>,
    log: SpawnLog,
    /// Skip set of the frame at each depth, in the packed row layout.
    skips: Vec<Vec<u64>>,
    queue_total: u64,
    queue_live: u64,
    queue_peak: u64,
    canonicity_failures: u64,
    max_depth: usize,
}

impl<'a> Run<'a> {
    fn new(packed: &'a HorizontalContext, cfg: &'a HorizontalEngineConfig) -> Self {
        let m = packed.object_count();
        Run {
            packed,
            cfg,
            extents: (0..m as u32).collect(),
            start: vec![0, m],
            log: SpawnLog::with_root(),
            skips: vec![vec![0; packed.words_per_row()]],
            queue_total: 0,
            queue_live: 0,
            queue_peak: 0,
            canonicity_failures: 0,
            max_depth: 0,
        }
    }

    fn execute(&mut self) -> Result<()> {
        let n = self.packed.attribute_count();
        let bits = self.packed.width().bits() as usize;
        let mut frames = vec![self.scan(0, n.checked_sub(1), 0)?];
        while let Some(top) = frames.last_mut() {
            match top.queue.pop() {
                Some((child, j)) => {
                    let depth = frames.len();
                    if self.skips.len() <= depth {
                        self.skips.push(vec![0; self.packed.words_per_row()]);
                    }
                    let (parent, rest) = self.skips.split_at_mut(depth);
                    rest[0].copy_from_slice(&parent[depth - 1]);
                    rest[0][j as usize / bits] |= 1 << (j as usize % bits);
                    let frame = self.scan(child, (j as usize).checked_sub(1), depth)?;
                    frames.push(frame);
                }
                None => {
                    let done = frames.pop().expect("non-empty stack");
                    self.queue_live -= done.reserved;
                }
            }
        }
        Ok(())
    }

    /// Scans attributes `y, y - 1, ..., 0` for concept `c`, closing its intent
    /// in place and queueing canonical children.
    fn scan(&mut self, c: u32, y: Option<usize>, depth: usize) -> Result<Frame> {
        self.max_depth = self.max_depth.max(depth);
        let slots = y.map_or(0, |y| y + 1);
        let reserved = slots as u64 * QUEUE_SLOT_BYTES;
        self.queue_total += reserved;
        if self.queue_total > self.cfg.local_queue_budget {
            return Err(FcaError::BudgetExhausted {
                budget: self.cfg.local_queue_budget,
                depth,
                concepts: self.log.len(),
            });
        }
        self.queue_live += reserved;
        self.queue_peak = self.queue_peak.max(self.queue_live);
        let mut queue = Vec::with_capacity(slots);

        self.log.begin_intent(c);
        let bits = self.packed.width().bits() as usize;
        let (s, e) = (self.start[c as usize], self.start[c as usize + 1]);
        let parent_len = e - s;
        for j in (0..slots).rev() {
            let (word, bit) = (j / bits, 1u64 << (j % bits));
            if self.skips[depth][word] & bit != 0 {
                continue;
            }
            let tail = self.extents.len();
            self.extents.reserve(parent_len);
            for i in s..e {
                let g = self.extents[i];
                if self.packed.has(g as usize, j) {
                    self.extents.push(g);
                }
            }
            let found = self.extents.len() - tail;
            if found == parent_len {
                self.log.add_attribute(c, j as u32);
                self.skips[depth][word] |= bit;
                self.extents.truncate(tail);
            } else if found == 0 && self.cfg.empty_skip {
                self.skips[depth][word] |= bit;
                self.extents.truncate(tail);
            } else if canonical(&self.extents[tail..], j, &self.skips[depth], self.packed) {
                let id = self.log.push(j as u32, c);
                self.start.push(self.extents.len());
                queue.push((id, j as u32));
            } else {
                self.canonicity_failures += 1;
                self.extents.truncate(tail);
            }
        }
        Ok(Frame { queue, reserved })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::fixtures::{attrs, objs, table1, table3};
    use crate::context::Concept;
    use crate::oracle::brute_force_concepts;

    fn both_modes() -> [HorizontalEngineConfig; 2] {
        [HorizontalEngineConfig::plain(), HorizontalEngineConfig::skipping()]
    }

    #[test]
    fn table1_yields_ten_concepts() {
        for cfg in both_modes() {
            let out = enumerate_horizontal(&table1(), &cfg).unwrap();
            assert_eq!(out.concepts.len(), 10);
            assert!(out.concepts.contains(&Concept::new(objs(&[5, 6]), attrs(&[4, 5]))));
            assert!(out.concepts.contains(&Concept::new(IndexSet::new(), attrs(&[1, 2, 3, 4, 5]))));
            assert_eq!(out.concepts, brute_force_concepts(&table1()).unwrap());
        }
    }

    #[test]
    fn table3_yields_ten_concepts() {
        for cfg in both_modes() {
            let out = enumerate_horizontal(&table3(), &cfg).unwrap();
            assert_eq!(out.concepts.len(), 10);
            assert!(out.concepts.contains(&Concept::new(objs(&[5, 6]), attrs(&[4, 5]))));
        }
    }

    #[test]
    fn all_ones_has_single_concept() {
        let ctx = FormalContext::from_fn(3, 4, |_, _| true);
        let out = enumerate_horizontal(&ctx, &HorizontalEngineConfig::default()).unwrap();
        assert_eq!(out.concepts.as_slice(), &[Concept::new(IndexSet::full(3), IndexSet::full(4))]);
    }

    #[test]
    fn diagonal_has_five_concepts() {
        let ctx = FormalContext::from_fn(3, 3, |g, a| g == a);
        for cfg in both_modes() {
            let out = enumerate_horizontal(&ctx, &cfg).unwrap();
            assert_eq!(out.concepts.len(), 5);
        }
    }

    #[test]
    fn canonicity_examples() {
        let p1 = pack_horizontal(&table1(), WordWidth::W64);
        assert!(!is_canonical_horizontal(&objs(&[5, 6]), 3, &IndexSet::new(), &p1));
        let p3 = pack_horizontal(&table3(), WordWidth::W32);
        assert!(is_canonical_horizontal(&objs(&[4, 5, 6]), 3, &IndexSet::new(), &p3));
        assert!(is_canonical_horizontal(&objs(&[1]), 4, &IndexSet::new(), &p1));
        // a5 is already in the intent, so it cannot witness non-canonicity
        assert!(is_canonical_horizontal(&objs(&[5, 6]), 3, &attrs(&[5]), &p1));
    }

    #[test]
    fn canonicity_masks_padding_bits() {
        // 3 attributes in a 32-bit word: bits 3.. are padding
        let ctx = FormalContext::from_fn(2, 3, |_, a| a == 0);
        let p = pack_horizontal(&ctx, WordWidth::W32);
        assert!(is_canonical_horizontal(&IndexSet::new(), 1, &attrs(&[3]), &p));
        assert!(!is_canonical_horizontal(&IndexSet::new(), 0, &IndexSet::new(), &p));
    }

    #[test]
    fn empty_skip_only_changes_bottom() {
        let ctx = table1();
        let never = |skip| HorizontalEngineConfig { empty_skip: skip, include_bottom: IncludeBottom::Never, ..HorizontalEngineConfig::plain() };
        let a = enumerate_horizontal(&ctx, &never(false)).unwrap();
        let b = enumerate_horizontal(&ctx, &never(true)).unwrap();
        assert_eq!(a.concepts, b.concepts);
        assert_eq!(a.concepts.len(), 9);
        let raw_plain = enumerate_horizontal(&ctx, &HorizontalEngineConfig::plain()).unwrap();
        let raw_skip = enumerate_horizontal(&ctx, &HorizontalEngineConfig::skipping()).unwrap();
        assert_eq!(raw_plain.stats.engine_concepts, 10);
        assert_eq!(raw_skip.stats.engine_concepts, 9);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let cfg = HorizontalEngineConfig { local_queue_budget: 48, ..HorizontalEngineConfig::plain() };
        match enumerate_horizontal(&table1(), &cfg) {
            Err(FcaError::BudgetExhausted { budget: 48, depth, concepts }) => {
                assert_eq!(depth, 1);
                assert!(concepts >= 5);
            }
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
        let zero = HorizontalEngineConfig { local_queue_budget: 0, ..HorizontalEngineConfig::plain() };
        assert!(matches!(enumerate_horizontal(&table1(), &zero), Err(FcaError::InvalidArgument(_))));
    }

    #[test]
    fn queue_accounting() {
        let out = enumerate_horizontal(&table1(), &HorizontalEngineConfig::skipping()).unwrap();
        // root reserves 5 slots, children reserve j slots for their spawn attribute j
        assert!(out.stats.total_queue_bytes >= 5 * QUEUE_SLOT_BYTES);
        assert!(out.stats.peak_queue_bytes <= out.stats.total_queue_bytes);
        // 6 + 3 + 2 + 2 + 2 + 1 + 1 + 2 + 1 objects over the nine non-empty extents
        assert_eq!(out.stats.extent_storage_bytes, 20 * 4);
    }

    #[test]
    fn degenerate_shapes() {
        let empty = FormalContext::from_fn(0, 0, |_, _| false);
        let out = enumerate_horizontal(&empty, &HorizontalEngineConfig::default()).unwrap();
        assert_eq!(out.concepts.len(), 1);
        let no_objects = FormalContext::from_fn(0, 3, |_, _| false);
        let out = enumerate_horizontal(&no_objects, &HorizontalEngineConfig::plain()).unwrap();
        assert_eq!(out.concepts.as_slice(), &[Concept::new(IndexSet::new(), IndexSet::full(3))]);
        let no_attrs = FormalContext::from_fn(4, 0, |_, _| false);
        let out = enumerate_horizontal(&no_attrs, &HorizontalEngineConfig::plain()).unwrap();
        assert_eq!(out.concepts.as_slice(), &[Concept::new(IndexSet::full(4), IndexSet::new())]);
    }
}
