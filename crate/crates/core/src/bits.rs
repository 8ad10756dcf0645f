//! Packed layouts of a context.
//!
//! * [`HorizontalContext`]: one row of machine words per object, bit `k` of
//!   word `w` set iff the object has attribute `w * width + k`.
//! * [`BlockExtent`] / [`VerticalContext`]: object sets stored column-wise as
//!   `(block index, block value)` pairs, where block `b` covers objects
//!   `b * width .. (b + 1) * width` and all-zero blocks are omitted.
//!
//! Values are held in `u64` regardless of width; at width 32 only the low
//! half of each value is used.

use std::fmt;
use std::str::FromStr;

use crate::context::{FormalContext, IndexSet, ObjectSet};
use crate::error::{FcaError, Result};

/// Machine word width used for packing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, serde::Serialize, serde::Deserialize)]
pub enum WordWidth {
    #[serde(rename = "32")]
    W32,
    #[default]
    #[serde(rename = "64")]
    W64,
}

impl WordWidth {
    pub fn bits(self) -> u32 {
        match self {
            WordWidth::W32 => 32,
            WordWidth::W64 => 64,
        }
    }

    pub fn bytes(self) -> u64 {
        u64::from(self.bits() / 8)
    }

    pub fn from_bits(bits: u32) -> Result<Self> {
        match bits {
            32 => Ok(WordWidth::W32),
            64 => Ok(WordWidth::W64),
            other => Err(FcaError::InvalidWidth(other)),
        }
    }

    /// Number of blocks needed for `m` objects: `floor((m - 1) / width) + 1`,
    /// and zero for an empty object set.
    pub fn block_count(self, m: usize) -> usize {
        if m == 0 {
            0
        } else {
            (m - 1) / self.bits() as usize + 1
        }
    }

    fn shift(self) -> u32 {
        self.bits().trailing_zeros()
    }

    fn mask(self) -> usize {
        self.bits() as usize - 1
    }
}

impl fmt::Display for WordWidth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bits())
    }
}

impl FromStr for WordWidth {
    type Err = FcaError;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s.trim().parse::<u32>().map_err(|_| FcaError::InvalidArgument(format!("bad width {s:?}")))?;
        WordWidth::from_bits(bits)
    }
}

/// Row-major packing of a context (one word sequence per object).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HorizontalContext {
    width: WordWidth,
    object_count: usize,
    attribute_count: usize,
    words_per_row: usize,
    words: Vec<u64>,
}

impl HorizontalContext {
    pub fn width(&self) -> WordWidth {
        self.width
    }

    pub fn object_count(&self) -> usize {
        self.object_count
    }

    pub fn attribute_count(&self) -> usize {
        self.attribute_count
    }

    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    pub fn row(&self, g: usize) -> &[u64] {
        &self.words[g * self.words_per_row..(g + 1) * self.words_per_row]
    }

    #[inline]
    pub fn has(&self, g: usize, a: usize) -> bool {
        let w = self.width;
        self.words[g * self.words_per_row + (a >> w.shift())] >> (a & w.mask()) & 1 == 1
    }

    /// Unpacks into a context with default names.
    pub fn unpack(&self) -> FormalContext {
        FormalContext::from_fn(self.object_count, self.attribute_count, |g, a| self.has(g, a))
    }
}

pub fn pack_horizontal(ctx: &FormalContext, width: WordWidth) -> HorizontalContext {
    let (m, n) = (ctx.object_count(), ctx.attribute_count());
    let words_per_row = n.div_ceil(width.bits() as usize);
    let mut words = vec![0u64; m * words_per_row];
    for g in 0..m {
        for a in ctx.object_intent(g).iter() {
            words[g * words_per_row + (a >> width.shift())] |= 1 << (a & width.mask());
        }
    }
    HorizontalContext { width, object_count: m, attribute_count: n, words_per_row, words }
}

/// A vertically stored object set: strictly increasing block indices, every
/// stored value nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockExtent {
    width: WordWidth,
    blocks: Vec<(u32, u64)>,
}

impl BlockExtent {
    pub fn empty(width: WordWidth) -> Self {
        BlockExtent { width, blocks: Vec::new() }
    }

    /// Builds from raw pairs, rejecting zero values, out-of-width bits and
    /// non-increasing indices.
    pub fn from_blocks(width: WordWidth, blocks: Vec<(u32, u64)>) -> Result<Self> {
        let too_wide = |v: u64| width == WordWidth::W32 && v >> 32 != 0;
        if blocks.iter().any(|&(_, v)| v == 0 || too_wide(v)) {
            return Err(FcaError::InvalidArgument("block values must be nonzero and fit the width".into()));
        }
        if blocks.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(FcaError::InvalidArgument("block indices must be strictly increasing".into()));
        }
        Ok(BlockExtent { width, blocks })
    }

    pub(crate) fn from_blocks_unchecked(width: WordWidth, blocks: Vec<(u32, u64)>) -> Self {
        let e = BlockExtent { width, blocks };
        e.debug_check();
        e
    }

    pub fn width(&self) -> WordWidth {
        self.width
    }

    pub fn blocks(&self) -> &[(u32, u64)] {
        &self.blocks
    }

    pub fn block_len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    fn debug_check(&self) {
        debug_assert!(self.blocks.iter().all(|&(_, v)| v != 0), "zero block stored");
        debug_assert!(self.blocks.windows(2).all(|w| w[0].0 < w[1].0), "block indices not increasing");
    }

    fn same_width(&self, other: &BlockExtent) -> Result<()> {
        if self.width == other.width {
            Ok(())
        } else {
            Err(FcaError::WidthMismatch { left: self.width.bits(), right: other.width.bits() })
        }
    }

    /// Merge by block index, AND matching values, drop zero results.
    pub fn intersect(&self, other: &BlockExtent) -> Result<BlockExtent> {
        self.same_width(other)?;
        let (a, b) = (&self.blocks, &other.blocks);
        let mut out = Vec::with_capacity(a.len().min(b.len()));
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    let v = a[i].1 & b[j].1;
                    if v != 0 {
                        out.push((a[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(BlockExtent::from_blocks_unchecked(self.width, out))
    }

    /// Whether every object of `self` is in `other`.
    pub fn is_subset(&self, other: &BlockExtent) -> Result<bool> {
        self.same_width(other)?;
        let mut rest = other.blocks.iter();
        'outer: for &(index, value) in &self.blocks {
            for &(oi, ov) in rest.by_ref() {
                if oi == index {
                    if value & !ov != 0 {
                        return Ok(false);
                    }
                    continue 'outer;
                }
                if oi > index {
                    return Ok(false);
                }
            }
            return Ok(false);
        }
        Ok(true)
    }

    pub fn cardinality(&self) -> usize {
        self.blocks.iter().map(|&(_, v)| v.count_ones() as usize).sum()
    }

    pub fn to_object_set(&self) -> ObjectSet {
        let bits = self.width.bits() as usize;
        let mut members = Vec::with_capacity(self.cardinality());
        for &(index, value) in &self.blocks {
            let mut rest = value;
            while rest != 0 {
                members.push((index as usize * bits + rest.trailing_zeros() as usize) as u32);
                rest &= rest - 1;
            }
        }
        IndexSet::from_sorted(members)
    }

    /// Encodes `objects` (all below `m`) with the given width.
    pub fn from_object_set(objects: &ObjectSet, m: usize, width: WordWidth) -> Result<BlockExtent> {
        if let Some(index) = objects.max().filter(|&g| g >= m) {
            return Err(FcaError::IndexOutOfRange { side: crate::error::Side::Object, index, bound: m });
        }
        let mut blocks: Vec<(u32, u64)> = Vec::new();
        for g in objects.iter() {
            let b = (g >> width.shift()) as u32;
            let bit = 1u64 << (g & width.mask());
            match blocks.last_mut() {
                Some((last, v)) if *last == b => *v |= bit,
                _ => blocks.push((b, bit)),
            }
        }
        Ok(BlockExtent::from_blocks_unchecked(width, blocks))
    }

    /// Bytes under the vertical accounting: an index word and a value word
    /// per stored block.
    pub fn storage_bytes(&self) -> u64 {
        vertical_storage_bytes(self.blocks.len(), self.width)
    }
}

/// `blocks * 2 * (width / 8)`.
pub fn vertical_storage_bytes(blocks: usize, width: WordWidth) -> u64 {
    blocks as u64 * 2 * width.bytes()
}

/// Per-object accounting of list-stored extents: four bytes per member.
pub fn horizontal_storage_bytes(objects: usize) -> u64 {
    objects as u64 * 4
}

/// Column-wise packing: one [`BlockExtent`] per attribute, plus a dense
/// block-by-attribute word table for constant-time block lookups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerticalContext {
    width: WordWidth,
    object_count: usize,
    block_count: usize,
    columns: Vec<BlockExtent>,
    dense: Vec<u64>,
}

impl VerticalContext {
    pub fn width(&self) -> WordWidth {
        self.width
    }

    pub fn object_count(&self) -> usize {
        self.object_count
    }

    pub fn attribute_count(&self) -> usize {
        self.columns.len()
    }

    pub fn block_count(&self) -> usize {
        self.block_count
    }

    pub fn column(&self, a: usize) -> &BlockExtent {
        &self.columns[a]
    }

    pub fn columns(&self) -> &[BlockExtent] {
        &self.columns
    }

    /// Value of block `b` of column `a` (zero when not stored).
    #[inline]
    pub fn word(&self, a: usize, b: usize) -> u64 {
        self.dense[a * self.block_count + b]
    }

    /// Dense column `a`, `block_count` words.
    pub fn dense_column(&self, a: usize) -> &[u64] {
        &self.dense[a * self.block_count..(a + 1) * self.block_count]
    }

    pub fn unpack(&self) -> FormalContext {
        let bits = self.width.bits() as usize;
        FormalContext::from_fn(self.object_count, self.columns.len(), |g, a| {
            self.word(a, g / bits) >> (g % bits) & 1 == 1
        })
    }
}

pub fn pack_vertical(ctx: &FormalContext, width: WordWidth) -> VerticalContext {
    let (m, n) = (ctx.object_count(), ctx.attribute_count());
    let block_count = width.block_count(m);
    let mut dense = vec![0u64; n * block_count];
    for g in 0..m {
        let (b, bit) = (g >> width.shift(), 1u64 << (g & width.mask()));
        for a in ctx.object_intent(g).iter() {
            dense[a * block_count + b] |= bit;
        }
    }
    let columns = (0..n)
        .map(|a| {
            let blocks = dense[a * block_count..(a + 1) * block_count]
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(b, &v)| (b as u32, v))
                .collect();
            BlockExtent::from_blocks_unchecked(width, blocks)
        })
        .collect();
    VerticalContext { width, object_count: m, block_count, columns, dense }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::fixtures::{objs, table1};
    use proptest::prelude::*;

    fn be(width: WordWidth, blocks: &[(u32, u64)]) -> BlockExtent {
        BlockExtent::from_blocks(width, blocks.to_vec()).unwrap()
    }

    #[test]
    fn horizontal_row_of_table1_object6() {
        let h = pack_horizontal(&table1(), WordWidth::W32);
        assert_eq!(h.row(5), &[28]);
        let zero = FormalContext::from_fn(2, 70, |g, a| g == 1 && a == 69);
        let h = pack_horizontal(&zero, WordWidth::W64);
        assert_eq!(h.row(0), &[0, 0]);
        assert_eq!(h.words_per_row(), 2);
        let wide = FormalContext::from_fn(1, 65, |_, _| true);
        assert_eq!(pack_horizontal(&wide, WordWidth::W64).row(0).len(), 2);
        assert_eq!(pack_horizontal(&wide, WordWidth::W32).row(0), &[u32::MAX as u64, u32::MAX as u64, 1]);
    }

    #[test]
    fn vertical_column_encodings() {
        let five = FormalContext::from_fn(40, 1, |g, _| g < 5);
        let v = pack_vertical(&five, WordWidth::W32);
        assert_eq!(v.block_count(), 2);
        assert_eq!(v.column(0).blocks(), &[(0, 31)]);
        let first = FormalContext::from_fn(32, 1, |g, _| g == 0);
        assert_eq!(pack_vertical(&first, WordWidth::W32).column(0).blocks(), &[(0, 1)]);
        let none = FormalContext::from_fn(10, 1, |_, _| false);
        assert!(pack_vertical(&none, WordWidth::W32).column(0).is_empty());
    }

    #[test]
    fn block_count_formula() {
        assert_eq!(WordWidth::W32.block_count(0), 0);
        assert_eq!(WordWidth::W32.block_count(1), 1);
        assert_eq!(WordWidth::W32.block_count(32), 1);
        assert_eq!(WordWidth::W32.block_count(33), 2);
        assert_eq!(WordWidth::W32.block_count(8124), 254);
        assert_eq!(WordWidth::W64.block_count(8124), 127);
    }

    #[test]
    fn intersect_examples() {
        let ctx = table1();
        let v = pack_vertical(&ctx, WordWidth::W32);
        let c = v.column(4).intersect(v.column(3)).unwrap();
        assert_eq!(c.to_object_set(), objs(&[5, 6]));
        let x = v.column(4).clone();
        assert_eq!(x.intersect(&x).unwrap(), x);
        let a = be(WordWidth::W32, &[(0, 0b10110), (2, 0b1)]);
        let b = be(WordWidth::W32, &[(0, 0b00110), (1, 0b1)]);
        assert_eq!(a.intersect(&b).unwrap().blocks(), &[(0, 0b00110)]);
        let disjoint = be(WordWidth::W32, &[(0, 0b1000)]);
        assert!(b.intersect(&disjoint).unwrap().is_empty());
    }

    #[test]
    fn width_mismatch_is_an_error() {
        let a = BlockExtent::empty(WordWidth::W32);
        let b = BlockExtent::empty(WordWidth::W64);
        assert!(matches!(a.intersect(&b), Err(FcaError::WidthMismatch { left: 32, right: 64 })));
        assert!(matches!(a.is_subset(&b), Err(FcaError::WidthMismatch { .. })));
    }

    #[test]
    fn subset_examples() {
        let v = pack_vertical(&table1(), WordWidth::W64);
        assert!(v.column(3).is_subset(v.column(4)).unwrap());
        assert!(!v.column(4).is_subset(v.column(3)).unwrap());
        assert!(BlockExtent::empty(WordWidth::W64).is_subset(v.column(0)).unwrap());
    }

    #[test]
    fn cardinality_examples() {
        assert_eq!(be(WordWidth::W32, &[(0, 31)]).cardinality(), 5);
        assert_eq!(BlockExtent::empty(WordWidth::W32).cardinality(), 0);
        assert_eq!(be(WordWidth::W32, &[(0, 1), (3, 1)]).cardinality(), 2);
    }

    #[test]
    fn object_set_conversions() {
        assert_eq!(be(WordWidth::W32, &[(0, 31)]).to_object_set(), IndexSet::from([0, 1, 2, 3, 4]));
        let empty = BlockExtent::from_object_set(&IndexSet::new(), 10, WordWidth::W32).unwrap();
        assert!(empty.is_empty());
        let edge = BlockExtent::from_object_set(&IndexSet::from([0, 32]), 40, WordWidth::W32).unwrap();
        assert_eq!(edge.blocks(), &[(0, 1), (1, 1)]);
        assert!(BlockExtent::from_object_set(&IndexSet::from([40]), 40, WordWidth::W32).is_err());
    }

    #[test]
    fn from_blocks_validates() {
        assert!(BlockExtent::from_blocks(WordWidth::W32, vec![(0, 0)]).is_err());
        assert!(BlockExtent::from_blocks(WordWidth::W32, vec![(1, 1), (1, 2)]).is_err());
        assert!(BlockExtent::from_blocks(WordWidth::W32, vec![(0, 1 << 40)]).is_err());
        assert!(BlockExtent::from_blocks(WordWidth::W64, vec![(0, 1 << 40)]).is_ok());
    }

    #[test]
    fn storage_accounting() {
        assert_eq!(be(WordWidth::W32, &[(0, 31)]).storage_bytes(), 8);
        assert_eq!(be(WordWidth::W64, &[(0, 31)]).storage_bytes(), 16);
        assert_eq!(horizontal_storage_bytes(8), 32);
    }

    fn width_strategy() -> impl Strategy<Value = WordWidth> {
        prop_oneof![Just(WordWidth::W32), Just(WordWidth::W64)]
    }

    fn set_strategy(m: usize) -> impl Strategy<Value = IndexSet> {
        proptest::collection::vec(any::<bool>(), m)
            .prop_map(|bits| bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect())
    }

    fn pair_strategy() -> impl Strategy<Value = (usize, WordWidth, IndexSet, IndexSet)> {
        (0usize..200, width_strategy())
            .prop_flat_map(|(m, w)| (Just(m), Just(w), set_strategy(m), set_strategy(m)))
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 256, rng_seed: proptest::test_runner::RngSeed::Fixed(7), ..ProptestConfig::default() })]

        #[test]
        fn pack_round_trips(m in 0usize..80, n in 0usize..140, w in width_strategy(), seed in any::<u64>()) {
            let ctx = crate::oracle::random_context(&crate::oracle::RandomContextSpec { objects: m, attributes: n, density: 0.4, seed });
            prop_assert_eq!(pack_horizontal(&ctx, w).unpack(), ctx.clone());
            let v = pack_vertical(&ctx, w);
            prop_assert_eq!(v.unpack(), ctx.clone());
            for a in 0..n {
                prop_assert_eq!(v.column(a).to_object_set(), ctx.derive_objects(&IndexSet::from([a])).unwrap());
            }
        }

        #[test]
        fn block_laws((m, w, a, b) in pair_strategy()) {
            let ea = BlockExtent::from_object_set(&a, m, w).unwrap();
            let eb = BlockExtent::from_object_set(&b, m, w).unwrap();
            prop_assert_eq!(ea.to_object_set(), a.clone());
            let meet = ea.intersect(&eb).unwrap();
            prop_assert_eq!(meet.to_object_set(), a.intersection(&b));
            prop_assert!(meet.blocks().iter().all(|&(_, v)| v != 0));
            prop_assert!(meet.blocks().windows(2).all(|p| p[0].0 < p[1].0));
            prop_assert_eq!(ea.is_subset(&eb).unwrap(), meet == ea);
            prop_assert_eq!(ea.is_subset(&eb).unwrap(), a.is_subset(&b));
            prop_assert!(meet.cardinality() <= ea.cardinality().min(eb.cardinality()));
            prop_assert_eq!(ea.cardinality(), a.len());
        }
    }
}
