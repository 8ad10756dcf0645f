//! Formal contexts, the two derivation operators, and concept collections.
//!
//! Indices are 0-based everywhere. Object and attribute names are carried
//! alongside the incidence relation so that writers can render results the
//! way the source file named them.

use std::fmt;

use crate::error::{FcaError, Result, Side};

/// A sorted, duplicate-free set of indices.
///
/// Used for both object sets (extents) and attribute sets (intents); which
/// side an index refers to is fixed by where the set is used.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexSet(Vec<u32>);

pub type ObjectSet = IndexSet;
pub type AttributeSet = IndexSet;

impl IndexSet {
    pub fn new() -> Self {
        IndexSet(Vec::new())
    }

    /// Indices `0..count`.
    pub fn full(count: usize) -> Self {
        IndexSet((0..count as u32).collect())
    }

    /// Builds a set from a vector that is already strictly increasing.
    pub fn from_sorted(members: Vec<u32>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        IndexSet(members)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&i| i as usize)
    }

    pub fn contains(&self, index: usize) -> bool {
        u32::try_from(index).is_ok_and(|i| self.0.binary_search(&i).is_ok())
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().map(|&i| i as usize)
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        let mut rest = other.0.iter();
        'outer: for a in &self.0 {
            for b in rest.by_ref() {
                if b == a {
                    continue 'outer;
                }
                if b > a {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (self.0[i], other.0[j]);
            if a <= b {
                out.push(a);
                i += 1;
                if a == b {
                    j += 1;
                }
            } else {
                out.push(b);
                j += 1;
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        IndexSet(out)
    }

    pub fn intersection(&self, other: &IndexSet) -> IndexSet {
        IndexSet(self.0.iter().copied().filter(|&a| other.0.binary_search(&a).is_ok()).collect())
    }

    fn check_bound(&self, side: Side, bound: usize) -> Result<()> {
        match self.max() {
            Some(index) if index >= bound => Err(FcaError::IndexOutOfRange { side, index, bound }),
            _ => Ok(()),
        }
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut members: Vec<u32> = iter
            .into_iter()
            .map(|i| u32::try_from(i).expect("index exceeds u32 range"))
            .collect();
        members.sort_unstable();
        members.dedup();
        IndexSet(members)
    }
}

impl<const N: usize> From<[usize; N]> for IndexSet {
    fn from(members: [usize; N]) -> Self {
        members.into_iter().collect()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

/// Iterates the set bits of a packed word slice, lowest first.
pub(crate) fn set_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let bit = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(w * 64 + bit)
        })
    })
}

/// An immutable binary relation between `m` objects and `n` attributes.
#[derive(Clone, PartialEq, Eq)]
pub struct FormalContext {
    object_names: Vec<String>,
    attribute_names: Vec<String>,
    /// Row-major, `stride` words per object.
    rows: Vec<u64>,
    stride: usize,
}

impl fmt::Debug for FormalContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FormalContext {}x{}", self.object_count(), self.attribute_count())?;
        for g in 0..self.object_count() {
            let row: String = (0..self.attribute_count())
                .map(|a| if self.has(g, a) { 'X' } else { '.' })
                .collect();
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

fn default_object_names(m: usize) -> Vec<String> {
    (1..=m).map(|g| g.to_string()).collect()
}

fn default_attribute_names(n: usize) -> Vec<String> {
    (1..=n).map(|a| format!("a{a}")).collect()
}

impl FormalContext {
    /// Builds an `m`×`n` context from a cell predicate. Objects are named
    /// `1..=m` and attributes `a1..=an`.
    pub fn from_fn(m: usize, n: usize, mut cell: impl FnMut(usize, usize) -> bool) -> Self {
        let stride = n.div_ceil(64);
        let mut rows = vec![0u64; m * stride];
        for g in 0..m {
            for a in 0..n {
                if cell(g, a) {
                    rows[g * stride + a / 64] |= 1 << (a % 64);
                }
            }
        }
        FormalContext {
            object_names: default_object_names(m),
            attribute_names: default_attribute_names(n),
            rows,
            stride,
        }
    }

    /// Builds a context from 0/1 rows; all rows must have length `n`.
    pub fn from_rows(n: usize, rows: &[Vec<bool>]) -> Result<Self> {
        if let Some((g, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(FcaError::InvalidArgument(format!(
                "row {} has {} cells, expected {n}",
                g + 1,
                row.len()
            )));
        }
        Ok(Self::from_fn(rows.len(), n, |g, a| rows[g][a]))
    }

    /// Builds a context from per-object attribute lists (transaction style).
    pub fn from_object_attributes(n: usize, objects: &[Vec<usize>]) -> Result<Self> {
        let stride = n.div_ceil(64);
        let mut rows = vec![0u64; objects.len() * stride];
        for (g, attrs) in objects.iter().enumerate() {
            for &a in attrs {
                if a >= n {
                    return Err(FcaError::IndexOutOfRange { side: Side::Attribute, index: a, bound: n });
                }
                rows[g * stride + a / 64] |= 1 << (a % 64);
            }
        }
        Ok(FormalContext {
            object_names: default_object_names(objects.len()),
            attribute_names: default_attribute_names(n),
            rows,
            stride,
        })
    }

    /// Replaces the object and attribute names.
    pub fn with_names(mut self, objects: Vec<String>, attributes: Vec<String>) -> Result<Self> {
        if objects.len() != self.object_count() || attributes.len() != self.attribute_count() {
            return Err(FcaError::InvalidArgument(format!(
                "expected {} object and {} attribute names, got {} and {}",
                self.object_count(),
                self.attribute_count(),
                objects.len(),
                attributes.len()
            )));
        }
        self.object_names = objects;
        self.attribute_names = attributes;
        Ok(self)
    }

    pub fn object_count(&self) -> usize {
        self.object_names.len()
    }

    pub fn attribute_count(&self) -> usize {
        self.attribute_names.len()
    }

    pub fn object_names(&self) -> &[String] {
        &self.object_names
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.attribute_names
    }

    /// Whether object `g` has attribute `a`. Panics when out of range.
    pub fn has(&self, g: usize, a: usize) -> bool {
        assert!(g < self.object_count() && a < self.attribute_count());
        self.rows[g * self.stride + a / 64] >> (a % 64) & 1 == 1
    }

    /// The packed attribute row of object `g`, 64 attributes per word.
    pub fn row_words(&self, g: usize) -> &[u64] {
        &self.rows[g * self.stride..(g + 1) * self.stride]
    }

    /// Attributes of a single object.
    pub fn object_intent(&self, g: usize) -> AttributeSet {
        IndexSet(set_bits(self.row_words(g)).map(|a| a as u32).collect())
    }

    /// Number of incidences.
    pub fn incidence_count(&self) -> usize {
        self.rows.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `A*`: the attributes shared by every object in `objects`.
    pub fn derive_attributes(&self, objects: &ObjectSet) -> Result<AttributeSet> {
        objects.check_bound(Side::Object, self.object_count())?;
        let mut members = objects.iter();
        let Some(first) = members.next() else {
            return Ok(IndexSet::full(self.attribute_count()));
        };
        let mut acc = self.row_words(first).to_vec();
        for g in members {
            for (w, r) in acc.iter_mut().zip(self.row_words(g)) {
                *w &= r;
            }
        }
        Ok(IndexSet(set_bits(&acc).map(|a| a as u32).collect()))
    }

    /// `B*`: the objects having every attribute in `attributes`.
    pub fn derive_objects(&self, attributes: &AttributeSet) -> Result<ObjectSet> {
        attributes.check_bound(Side::Attribute, self.attribute_count())?;
        let mut mask = vec![0u64; self.stride];
        for a in attributes.iter() {
            mask[a / 64] |= 1 << (a % 64);
        }
        let members = (0..self.object_count())
            .filter(|&g| self.row_words(g).iter().zip(&mask).all(|(r, m)| r & m == *m))
            .map(|g| g as u32)
            .collect();
        Ok(IndexSet(members))
    }

    /// `(B*, B**)`.
    pub fn close_attributes(&self, attributes: &AttributeSet) -> Result<Concept> {
        let extent = self.derive_objects(attributes)?;
        let intent = self.derive_attributes(&extent)?;
        Ok(Concept { extent, intent })
    }

    /// `(A**, A*)`.
    pub fn close_objects(&self, objects: &ObjectSet) -> Result<Concept> {
        let intent = self.derive_attributes(objects)?;
        let extent = self.derive_objects(&intent)?;
        Ok(Concept { extent, intent })
    }

    /// Whether `A* = B` and `B* = A`. Out-of-range members give `false`.
    pub fn is_concept(&self, concept: &Concept) -> bool {
        matches!(
            (self.derive_attributes(&concept.extent), self.derive_objects(&concept.intent)),
            (Ok(b), Ok(a)) if b == concept.intent && a == concept.extent
        )
    }

    /// The bottom concept `(M*, M)`.
    pub fn bottom(&self) -> Concept {
        let intent = IndexSet::full(self.attribute_count());
        let extent = self.derive_objects(&intent).expect("full set is in range");
        Concept { extent, intent }
    }

    /// Swaps objects and attributes.
    pub fn transpose(&self) -> FormalContext {
        let t = FormalContext::from_fn(self.attribute_count(), self.object_count(), |a, g| self.has(g, a));
        FormalContext {
            object_names: self.attribute_names.clone(),
            attribute_names: self.object_names.clone(),
            ..t
        }
    }
}

/// A pair (extent, intent).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Concept {
    pub extent: ObjectSet,
    pub intent: AttributeSet,
}

impl Concept {
    pub fn new(extent: ObjectSet, intent: AttributeSet) -> Self {
        Concept { extent, intent }
    }

    /// Subconcept order: extent inclusion.
    pub fn leq(&self, other: &Concept) -> bool {
        self.extent.is_subset(&other.extent)
    }

    /// `(B, A)`: the same concept read in the transposed context.
    pub fn swapped(&self) -> Concept {
        Concept { extent: self.intent.clone(), intent: self.extent.clone() }
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.extent, self.intent)
    }
}

/// Concepts in canonical order: intents ascending lexicographically.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConceptSet {
    concepts: Vec<Concept>,
}

impl ConceptSet {
    /// Sorts `concepts` into canonical order. Fails if two share an intent.
    pub fn new(mut concepts: Vec<Concept>) -> Result<Self> {
        concepts.sort_unstable_by(|a, b| a.intent.cmp(&b.intent));
        if let Some(w) = concepts.windows(2).find(|w| w[0].intent == w[1].intent) {
            return Err(FcaError::DuplicateIntent(w[0].intent.as_slice().to_vec()));
        }
        Ok(ConceptSet { concepts })
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Concept> {
        self.concepts.iter()
    }

    pub fn as_slice(&self) -> &[Concept] {
        &self.concepts
    }

    pub fn into_vec(self) -> Vec<Concept> {
        self.concepts
    }

    pub fn find_intent(&self, intent: &AttributeSet) -> Option<&Concept> {
        self.concepts
            .binary_search_by(|c| c.intent.cmp(intent))
            .ok()
            .map(|i| &self.concepts[i])
    }

    pub fn contains(&self, concept: &Concept) -> bool {
        self.find_intent(&concept.intent).is_some_and(|c| c.extent == concept.extent)
    }

    /// Every concept with extent and intent exchanged, re-sorted.
    pub fn swapped(&self) -> ConceptSet {
        ConceptSet::new(self.concepts.iter().map(Concept::swapped).collect())
            .expect("extents of distinct concepts are distinct")
    }
}

impl<'a> IntoIterator for &'a ConceptSet {
    type Item = &'a Concept;
    type IntoIter = std::slice::Iter<'a, Concept>;

    fn into_iter(self) -> Self::IntoIter {
        self.concepts.iter()
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Table 1 of the worked example (rows are objects 1..6).
    pub fn table1() -> FormalContext {
        let rows = ["01100", "11000", "10000", "00001", "00011", "00111"];
        FormalContext::from_fn(6, 5, |g, a| rows[g].as_bytes()[a] == b'1')
    }

    /// Table 1 with the fourth and fifth columns swapped.
    pub fn table3() -> FormalContext {
        let rows = ["01100", "11000", "10000", "00010", "00011", "00111"];
        FormalContext::from_fn(6, 5, |g, a| rows[g].as_bytes()[a] == b'1')
    }

    /// 1-based object labels to a 0-based set.
    pub fn objs(labels: &[usize]) -> ObjectSet {
        labels.iter().map(|g| g - 1).collect()
    }

    /// 1-based attribute labels (a1 = 1) to a 0-based set.
    pub fn attrs(labels: &[usize]) -> AttributeSet {
        labels.iter().map(|a| a - 1).collect()
    }
}
