//! Close-by-One over a vertically stored context.
//!
//! Columns and extents are both block-sparse bit arrays: an extent is a run of
//! `(block index, block value)` word pairs in a single append-only arena, so
//! intersecting an extent with a column touches one word per stored block
//! instead of one object at a time.
//!
//! Spawned children are not kept in per-frame queues. Every concept gets a
//! number when it is found, and three arrays indexed by that number record
//! where it was found, who its parent is and where its extent starts. The
//! children of a node are the contiguous range of numbers handed out during
//! its scan; they are expanded after the scan, latest first.

use std::time::Instant;

use crate::bits::{pack_vertical, vertical_storage_bytes, BlockExtent, VerticalContext, WordWidth};
use crate::context::{AttributeSet, FormalContext, IndexSet};
use crate::engine::{finish, Enumeration, EnumerationStats, Enumerator, IncludeBottom, SpawnLog};
use crate::error::{FcaError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerticalEngineConfig {
    pub width: WordWidth,
    pub include_bottom: IncludeBottom,
    /// Initial arena capacity in words.
    pub arena_reserve: usize,
    /// Pass empty-extent attributes down to children. Turning this off only
    /// exists for differential testing.
    pub skip_sets: bool,
}

impl Default for VerticalEngineConfig {
    fn default() -> Self {
        VerticalEngineConfig {
            width: WordWidth::W64,
            include_bottom: IncludeBottom::Auto,
            arena_reserve: 1 << 16,
            skip_sets: true,
        }
    }
}

impl VerticalEngineConfig {
    pub fn with_width(width: WordWidth) -> Self {
        VerticalEngineConfig { width, ..Self::default() }
    }
}

impl Enumerator for VerticalEngineConfig {
    fn name(&self) -> String {
        format!("vertical{}", self.width)
    }

    fn enumerate(&self, ctx: &FormalContext) -> Result<Enumeration> {
        enumerate_vertical(ctx, self)
    }
}

/// Storage word of the arena and the dense column table.
trait Word: Copy + Eq + std::ops::BitAnd<Output = Self> + std::ops::Not<Output = Self> {
    const ZERO: Self;
    fn from_u64(v: u64) -> Self;
    fn to_u64(self) -> u64;
    fn from_index(i: usize) -> Self;
    fn index(self) -> usize;
}

macro_rules! impl_word {
    ($t:ty) => {
        impl Word for $t {
            const ZERO: Self = 0;
            #[inline]
            fn from_u64(v: u64) -> Self {
                v as $t
            }
            #[inline]
            fn to_u64(self) -> u64 {
                self as u64
            }
            #[inline]
            fn from_index(i: usize) -> Self {
                i as $t
            }
            #[inline]
            fn index(self) -> usize {
                self as usize
            }
        }
    };
}

impl_word!(u32);
impl_word!(u64);

pub fn enumerate_vertical(ctx: &FormalContext, cfg: &VerticalEngineConfig) -> Result<Enumeration> {
    match cfg.width {
        WordWidth::W32 => run::<u32>(ctx, cfg),
        WordWidth::W64 => run::<u64>(ctx, cfg),
    }
}

fn run<W: Word>(ctx: &FormalContext, cfg: &VerticalEngineConfig) -> Result<Enumeration> {
    let started = Instant::now();
    let packed = pack_vertical(ctx, cfg.width);
    let mut engine = Engine::<W>::new(&packed, cfg)?;
    engine.execute()?;
    let elapsed = started.elapsed();

    let used_words = *engine.start.last().expect("root extent recorded");
    let stats = EnumerationStats {
        elapsed,
        extent_storage_bytes: vertical_storage_bytes(used_words / 2, cfg.width),
        peak_queue_bytes: engine.log.byte_size(),
        total_queue_bytes: engine.log.byte_size(),
        canonicity_failures: engine.canonicity_failures,
        max_depth: engine.max_depth,
        ..EnumerationStats::default()
    };
    let extents = (0..engine.log.len()).map(|c| engine.extent(c).to_object_set()).collect();
    finish(ctx, &engine.log, extents, cfg.include_bottom, stats)
}

/// Canonicity of a new extent `c` found at attribute `j` under the partial
/// intent `b`: no attribute above `j` outside `b` may contain `c`.
pub fn is_canonical_vertical(c: &BlockExtent, j: usize, b: &AttributeSet, packed: &VerticalContext) -> bool {
    (j + 1..packed.attribute_count())
        .filter(|&k| !b.contains(k))
        .all(|k| c.blocks().iter().any(|&(index, value)| value & !packed.word(k, index as usize) != 0))
}

/// Appends `extent` to the arena as a new concept. Returns its number.
pub fn spawn_child(queue: &mut GlobalQueue, extent: &BlockExtent, j: usize, parent: usize) -> usize {
    for &(index, value) in extent.blocks() {
        queue.arena.push(u64::from(index));
        queue.arena.push(value);
    }
    queue.start.push(queue.arena.len());
    queue.log.push(j as u32, parent as u32) as usize
}

/// Inspectable form of the engine's bookkeeping: the block-pair arena with
/// per-concept offsets plus spawn attribute and parent per concept number.
#[derive(Debug)]
pub struct GlobalQueue {
    width: WordWidth,
    arena: Vec<u64>,
    start: Vec<usize>,
    log: SpawnLog,
}

impl GlobalQueue {
    /// A queue holding only concept 0 with the given extent.
    pub fn new(root: &BlockExtent) -> Self {
        let mut q = GlobalQueue { width: root.width(), arena: Vec::new(), start: vec![0], log: SpawnLog::with_root() };
        for &(index, value) in root.blocks() {
            q.arena.push(u64::from(index));
            q.arena.push(value);
        }
        q.start.push(q.arena.len());
        q
    }

    pub fn len(&self) -> usize {
        self.log.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log.len() == 0
    }

    pub fn spawn_attribute(&self, concept: usize) -> Option<usize> {
        self.log.spawn.get(concept).filter(|&&j| j != crate::engine::NO_SPAWN).map(|&j| j as usize)
    }

    pub fn parent(&self, concept: usize) -> Option<usize> {
        self.log.parent.get(concept).filter(|&&p| p != crate::engine::NO_SPAWN).map(|&p| p as usize)
    }

    /// Arena offset where the extent of `concept` starts.
    pub fn extent_offset(&self, concept: usize) -> usize {
        self.start[concept]
    }

    pub fn extent(&self, concept: usize) -> BlockExtent {
        let span = &self.arena[self.start[concept]..self.start[concept + 1]];
        BlockExtent::from_blocks_unchecked(self.width, span.chunks(2).map(|p| (p[0] as u32, p[1])).collect())
    }
}

struct Engine<'a, W: Word> {
    packed: &'a VerticalContext,
    cfg: &'a VerticalEngineConfig,
    block_count: usize,
    /// `block_count` words per attribute.
    dense: Vec<W>,
    /// Block pairs of every extent, back to back.
    arena: Vec<W>,
    /// Extent of concept `i` is `arena[start[i]..start[i + 1]]`.
    start: Vec<usize>,
    log: SpawnLog,
    /// Skip set of the node being expanded at each depth, one bit per attribute.
    skips: Vec<Vec<u64>>,
    canonicity_failures: u64,
    max_depth: usize,
}

#[inline]
fn test_bit(set: &[u64], a: usize) -> bool {
    set[a / 64] >> (a % 64) & 1 == 1
}

#[inline]
fn set_bit(set: &mut [u64], a: usize) {
    set[a / 64] |= 1 << (a % 64);
}

impl<'a, W: Word> Engine<'a, W> {
    fn new(packed: &'a VerticalContext, cfg: &'a VerticalEngineConfig) -> Result<Self> {
        let (m, n, block_count) = (packed.object_count(), packed.attribute_count(), packed.block_count());
        let mut dense = Vec::with_capacity(n * block_count);
        for a in 0..n {
            dense.extend(packed.dense_column(a).iter().map(|&v| W::from_u64(v)));
        }
        let mut arena: Vec<W> = Vec::new();
        arena
            .try_reserve(cfg.arena_reserve.max(2 * block_count))
            .map_err(|_| FcaError::Allocation { concepts: 0 })?;
        let bits = packed.width().bits() as usize;
        for b in 0..block_count {
            let members = (m - b * bits).min(bits);
            let value = if members == 64 { u64::MAX } else { (1u64 << members) - 1 };
            arena.push(W::from_index(b));
            arena.push(W::from_u64(value));
        }
        let start = vec![0, arena.len()];
        Ok(Engine {
            packed,
            cfg,
            block_count,
            dense,
            arena,
            start,
            log: SpawnLog::with_root(),
            skips: vec![vec![0; n.div_ceil(64)]],
            canonicity_failures: 0,
            max_depth: 0,
        })
    }

    fn extent(&self, c: usize) -> BlockExtent {
        let span = &self.arena[self.start[c]..self.start[c + 1]];
        let blocks = span.chunks(2).map(|p| (p[0].index() as u32, p[1].to_u64())).collect();
        BlockExtent::from_blocks_unchecked(self.packed.width(), blocks)
    }

    fn execute(&mut self) -> Result<()> {
        let n = self.packed.attribute_count();
        let mut pending: Vec<(u32, usize)> = Vec::new();
        let children = self.scan(0, n, 0)?;
        pending.extend(children.map(|c| (c, 1)));
        while let Some((c, depth)) = pending.pop() {
            let j = self.log.spawn[c as usize] as usize;
            if self.skips.len() <= depth {
                self.skips.push(vec![0; n.div_ceil(64)]);
            }
            let (parent, rest) = self.skips.split_at_mut(depth);
            rest[0].copy_from_slice(&parent[depth - 1]);
            set_bit(&mut rest[0], j);
            let children = self.scan(c, j, depth)?;
            pending.extend(children.map(|child| (child, depth + 1)));
        }
        Ok(())
    }

    /// Scans attributes `below - 1` down to 0 for concept `c` and returns the
    /// numbers of the children it spawned.
    fn scan(&mut self, c: u32, below: usize, depth: usize) -> Result<std::ops::Range<u32>> {
        self.max_depth = self.max_depth.max(depth);
        self.log.begin_intent(c);
        let first_child = self.log.len() as u32;
        let (s, e) = (self.start[c as usize], self.start[c as usize + 1]);
        for j in (0..below).rev() {
            if test_bit(&self.skips[depth], j) {
                continue;
            }
            let column = &self.dense[j * self.block_count..(j + 1) * self.block_count];
            let tail = self.arena.len();
            if self.arena.try_reserve(e - s).is_err() {
                return Err(FcaError::Allocation { concepts: self.log.len() });
            }
            self.arena.resize(tail + (e - s), W::ZERO);
            let (done, out) = self.arena.split_at_mut(tail);
            let mut written = 0;
            let mut same = true;
            for pair in done[s..e].chunks_exact(2) {
                let (index, value) = (pair[0], pair[1]);
                let meet = column[index.index()] & value;
                // write unconditionally, advance only on a non-empty block
                out[written] = index;
                out[written + 1] = meet;
                written += 2 * usize::from(meet != W::ZERO);
                same &= meet == value;
            }
            self.arena.truncate(tail + written);
            if same {
                self.log.add_attribute(c, j as u32);
                set_bit(&mut self.skips[depth], j);
                self.arena.truncate(tail);
            } else if self.arena.len() == tail && self.cfg.skip_sets {
                set_bit(&mut self.skips[depth], j);
            } else if self.canonical(tail, j, depth) {
                self.log.push(j as u32, c);
                self.start.push(self.arena.len());
            } else {
                self.canonicity_failures += 1;
                self.arena.truncate(tail);
            }
        }
        Ok(first_child..self.log.len() as u32)
    }

    /// No attribute above `j` outside the skip set may contain the extent
    /// sitting at `arena[tail..]`.
    fn canonical(&self, tail: usize, j: usize, depth: usize) -> bool {
        let skip = &self.skips[depth];
        let n = self.packed.attribute_count();
        let candidate = &self.arena[tail..];
        for k in j + 1..n {
            if test_bit(skip, k) {
                continue;
            }
            let column = &self.dense[k * self.block_count..(k + 1) * self.block_count];
            let contained = candidate.chunks_exact(2).all(|p| p[1] & !column[p[0].index()] == W::ZERO);
            if contained {
                return false;
            }
        }
        true
    }
}

/// Runs the engine and returns its raw bookkeeping instead of a concept set.
pub fn enumerate_vertical_queue(ctx: &FormalContext, cfg: &VerticalEngineConfig) -> Result<GlobalQueue> {
    let packed = pack_vertical(ctx, cfg.width);
    let mut engine = Engine::<u64>::new(&packed, cfg)?;
    engine.execute()?;
    let Engine { arena, start, log, .. } = engine;
    Ok(GlobalQueue { width: cfg.width, arena, start, log })
}

/// Full intents recorded in a queue, by concept number.
pub fn queue_intent(queue: &GlobalQueue, concept: usize) -> AttributeSet {
    queue.log.intent(concept)
}

/// Rebuilds the spawn tree of a finished run.
pub fn concept_tree(queue: &GlobalQueue) -> crate::engine::ConceptTree {
    let extents: Vec<IndexSet> = (0..queue.len()).map(|c| queue.extent(c).to_object_set()).collect();
    crate::engine::tree_from_log(&queue.log, extents)
}
