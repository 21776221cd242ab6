//! Canonical set partitions of {1, ..., n} with n <= 64.
//!
//! Blocks are one-word bitmasks, so block comparison, disjointness, and
//! intersection are single instructions. A partition carries both its sorted
//! block list (increasing minimum element) and its restricted growth string;
//! the two encode the same partition by construction. The rgs is the primary
//! sort key, and enumeration emits rgs in ascending lexicographic order, so
//! merged enumeration ranges come out globally sorted with no extra pass.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::Error;
use crate::Result;

/// Largest supported ground set; blocks must fit in one machine word.
pub const MAX_GROUND: u32 = 64;

/// Bitmask of the full ground set {1, ..., n}.
pub fn ground_mask(n: u32) -> u64 {
    debug_assert!((1..=MAX_GROUND).contains(&n));
    if n == MAX_GROUND {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Problem parameters: k-partitions of {1, ..., n}, families t-intersecting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GroundParams {
    pub n: u32,
    pub k: u32,
    pub t: u32,
}

impl GroundParams {
    pub fn new(n: u32, k: u32, t: u32) -> Result<Self> {
        if 1 <= t && t < k && k <= n && n <= MAX_GROUND {
            Ok(GroundParams { n, k, t })
        } else {
            Err(Error::BadGroundParams {
                n: n as u64,
                k: k as u64,
                t: t as u64,
            })
        }
    }
}

/// One block: a non-empty subset of the ground set, element e at bit e-1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block(u64);

impl Block {
    pub fn from_mask(mask: u64) -> Result<Self> {
        if mask == 0 {
            Err(Error::EmptyBlock)
        } else {
            Ok(Block(mask))
        }
    }

    pub fn from_elements(elements: &[u32]) -> Result<Self> {
        let mut mask = 0u64;
        for &e in elements {
            if !(1..=MAX_GROUND).contains(&e) {
                return Err(Error::ElementOutOfRange {
                    element: e as u64,
                    n: MAX_GROUND,
                });
            }
            mask |= 1 << (e - 1);
        }
        Block::from_mask(mask)
    }

    pub fn singleton(e: u32) -> Self {
        debug_assert!((1..=MAX_GROUND).contains(&e));
        Block(1 << (e - 1))
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    /// Element count; a block is never empty, so there is no `is_empty`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_singleton(self) -> bool {
        self.len() == 1
    }

    pub fn min_element(self) -> u32 {
        self.0.trailing_zeros() + 1
    }

    pub fn contains(self, e: u32) -> bool {
        (1..=MAX_GROUND).contains(&e) && self.0 & (1 << (e - 1)) != 0
    }

    pub fn intersects(self, other: Block) -> bool {
        self.0 & other.0 != 0
    }

    pub fn elements(self) -> impl Iterator<Item = u32> {
        let mask = self.0;
        (1..=MAX_GROUND).filter(move |e| mask & (1 << (e - 1)) != 0)
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for e in self.elements() {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{e}")?;
            first = false;
        }
        Ok(())
    }
}

impl Serialize for Block {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Validate that blocks fit {1, ..., n} and are pairwise disjoint; returns
/// the union mask.
fn disjoint_union(n: u32, blocks: &[Block]) -> Result<u64> {
    let full = ground_mask(n);
    let mut union = 0u64;
    for b in blocks {
        if b.mask() & !full != 0 {
            return Err(Error::ElementOutOfRange {
                element: (63 - (b.mask() & !full).leading_zeros() + 1) as u64,
                n,
            });
        }
        if b.mask() & union != 0 {
            return Err(Error::OverlappingBlocks);
        }
        union |= b.mask();
    }
    Ok(union)
}

/// A k-partition of {1, ..., n}, blocks sorted by minimum element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetPartition {
    n: u32,
    blocks: Vec<Block>,
    rgs: Vec<u8>,
}

impl SetPartition {
    /// Canonicalize an arbitrary block list into a partition of {1, ..., n}.
    pub fn from_blocks(n: u32, mut blocks: Vec<Block>) -> Result<Self> {
        if !(1..=MAX_GROUND).contains(&n) {
            return Err(Error::BadEnumerationParams {
                n: n as u64,
                k: blocks.len() as u64,
            });
        }
        let union = disjoint_union(n, &blocks)?;
        if union != ground_mask(n) {
            return Err(Error::IncompleteCover);
        }
        blocks.sort_by_key(|b| b.min_element());
        let mut rgs = vec![0u8; n as usize];
        for (label, b) in blocks.iter().enumerate() {
            for e in b.elements() {
                rgs[(e - 1) as usize] = label as u8;
            }
        }
        Ok(SetPartition { n, blocks, rgs })
    }

    /// Decode a restricted growth string; the ground size is its length.
    pub fn from_rgs(rgs: &[u8]) -> Result<Self> {
        let n = rgs.len() as u32;
        if !(1..=MAX_GROUND).contains(&n) {
            return Err(Error::BadRgs(format!("length {n} outside 1..=64")));
        }
        let mut max_seen = -1i32;
        let mut masks: Vec<u64> = Vec::new();
        for (i, &v) in rgs.iter().enumerate() {
            if v as i32 > max_seen + 1 {
                return Err(Error::BadRgs(format!(
                    "value {v} at position {i} exceeds 1 + running max"
                )));
            }
            max_seen = max_seen.max(v as i32);
            if v as usize == masks.len() {
                masks.push(0);
            }
            masks[v as usize] |= 1 << i;
        }
        let blocks = masks.into_iter().map(Block).collect();
        Ok(SetPartition {
            n,
            blocks,
            rgs: rgs.to_vec(),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.blocks.len() as u32
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn rgs(&self) -> &[u8] {
        &self.rgs
    }

    pub fn contains_block(&self, b: Block) -> bool {
        self.blocks.binary_search_by_key(&b.min_element(), |x| x.min_element())
            .map(|i| self.blocks[i] == b)
            .unwrap_or(false)
    }

    /// Whether every block of the partial partition is a block here.
    pub fn contains(&self, x: &PartialPartition) -> bool {
        x.blocks.iter().all(|&b| self.contains_block(b))
    }

    /// The textual literal, e.g. "1|2|3 4".
    pub fn to_literal(&self) -> String {
        self.to_string()
    }

    /// Assemble from enumeration output, which is canonical by construction.
    pub(crate) fn from_enumeration(n: u32, blocks: Vec<Block>, rgs: Vec<u8>) -> Self {
        debug_assert_eq!(
            SetPartition::from_rgs(&rgs).unwrap().blocks,
            blocks,
            "enumeration emitted inconsistent parts"
        );
        SetPartition { n, blocks, rgs }
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl Serialize for SetPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_literal())
    }
}

impl PartialOrd for SetPartition {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SetPartition {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.n.cmp(&other.n).then_with(|| self.rgs.cmp(&other.rgs))
    }
}

/// Pairwise-disjoint blocks that need not cover the ground set. Anchors,
/// covers, and intermediate structures all use this shape.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialPartition {
    n: u32,
    blocks: Vec<Block>,
}

impl PartialPartition {
    pub fn new(n: u32, mut blocks: Vec<Block>) -> Result<Self> {
        if !(1..=MAX_GROUND).contains(&n) {
            return Err(Error::BadEnumerationParams {
                n: n as u64,
                k: blocks.len() as u64,
            });
        }
        disjoint_union(n, &blocks)?;
        blocks.sort_by_key(|b| b.min_element());
        Ok(PartialPartition { n, blocks })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn union_mask(&self) -> u64 {
        self.blocks.iter().fold(0, |m, b| m | b.mask())
    }

    pub fn union_size(&self) -> u32 {
        self.union_mask().count_ones()
    }
}

impl fmt::Display for PartialPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl Serialize for PartialPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The partial partition of all singletons of b's elements, written [b].
pub fn singletons_of(b: Block, n: u32) -> PartialPartition {
    let blocks = b.elements().map(Block::singleton).collect();
    PartialPartition::new(n, blocks).expect("singletons of a valid block are disjoint")
}

/// Count blocks shared by two partitions, merging the sorted block lists.
///
/// Within one partition blocks are disjoint, so minimum elements strictly
/// increase and equal blocks must sit at equal minimum elements.
pub fn common_blocks(p: &SetPartition, q: &SetPartition) -> u32 {
    merge_count(&p.blocks, &q.blocks, u32::MAX)
}

/// Shared-block count for raw sorted block slices (each internally disjoint).
pub fn common_blocks_sorted(xs: &[Block], ys: &[Block]) -> u32 {
    merge_count(xs, ys, u32::MAX)
}

/// Whether every block of `xs` appears in `blocks` (both sorted).
pub fn slice_contains_all(blocks: &[Block], xs: &[Block]) -> bool {
    merge_count(blocks, xs, u32::MAX) == xs.len() as u32
}

/// Early-exit test for `common_blocks(p, q) >= t`.
pub fn share_at_least(p: &SetPartition, q: &SetPartition, t: u32) -> bool {
    if t == 0 {
        return true;
    }
    merge_count(&p.blocks, &q.blocks, t) >= t
}

/// `share_at_least` on raw sorted block slices.
pub fn slices_share_at_least(xs: &[Block], ys: &[Block], t: u32) -> bool {
    if t == 0 {
        return true;
    }
    merge_count(xs, ys, t) >= t
}

fn merge_count(xs: &[Block], ys: &[Block], stop_at: u32) -> u32 {
    let (mut i, mut j, mut count) = (0usize, 0usize, 0u32);
    while i < xs.len() && j < ys.len() {
        let (mi, mj) = (xs[i].min_element(), ys[j].min_element());
        if mi < mj {
            i += 1;
        } else if mj < mi {
            j += 1;
        } else {
            if xs[i] == ys[j] {
                count += 1;
                if count >= stop_at {
                    return count;
                }
            }
            i += 1;
            j += 1;
        }
        let rest = (xs.len() - i).min(ys.len() - j) as u32;
        if count + rest < stop_at && stop_at != u32::MAX {
            return count;
        }
    }
    count
}

/// Whether every pair of members shares at least t blocks.
pub fn is_t_intersecting(members: &[SetPartition], t: u32) -> bool {
    first_non_intersecting_pair(members, t).is_none()
}

/// First pair of member indices sharing fewer than t blocks, if any.
pub fn first_non_intersecting_pair(members: &[SetPartition], t: u32) -> Option<(usize, usize)> {
    for i in 0..members.len() {
        for j in (i + 1)..members.len() {
            if !share_at_least(&members[i], &members[j], t) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Blocks shared by every member, or None for an empty family.
pub fn common_core(members: &[SetPartition]) -> Option<Vec<Block>> {
    let first = members.first()?;
    let mut core: Vec<Block> = first.blocks().to_vec();
    for m in &members[1..] {
        core.retain(|&b| m.contains_block(b));
        if core.is_empty() {
            break;
        }
    }
    Some(core)
}

// ---------------------------------------------------------------------------
// Parsing

/// Parse a full partition literal with a known ground size.
///
/// Accepts the block form "1|2|3 4" or the rgs form "0,1,2,2".
pub fn parse_partition(s: &str, n: u32) -> Result<SetPartition> {
    let bad = |reason: &str| Error::BadLiteral {
        literal: s.to_string(),
        reason: reason.to_string(),
    };
    if s.contains(',') {
        let rgs = parse_rgs_digits(s)?;
        if rgs.len() as u32 != n {
            return Err(bad(&format!("rgs length {} does not match n={n}", rgs.len())));
        }
        return SetPartition::from_rgs(&rgs);
    }
    let blocks = parse_blocks(s, n)?;
    SetPartition::from_blocks(n, blocks)
}

/// Parse a partial partition literal (block form only).
pub fn parse_partial(s: &str, n: u32) -> Result<PartialPartition> {
    let blocks = parse_blocks(s, n)?;
    PartialPartition::new(n, blocks)
}

fn parse_rgs_digits(s: &str) -> Result<Vec<u8>> {
    s.split(',')
        .map(|part| {
            part.trim().parse::<u8>().map_err(|_| Error::BadLiteral {
                literal: s.to_string(),
                reason: format!("bad rgs value {part:?}"),
            })
        })
        .collect()
}

fn parse_blocks(s: &str, n: u32) -> Result<Vec<Block>> {
    let mut blocks = Vec::new();
    for part in s.split('|') {
        let mut elements = Vec::new();
        for tok in part.split_whitespace() {
            let e: u32 = tok.parse().map_err(|_| Error::BadLiteral {
                literal: s.to_string(),
                reason: format!("bad element {tok:?}"),
            })?;
            if e < 1 || e > n {
                return Err(Error::ElementOutOfRange {
                    element: e as u64,
                    n,
                });
            }
            elements.push(e);
        }
        if elements.is_empty() {
            return Err(Error::BadLiteral {
                literal: s.to_string(),
                reason: "empty block".to_string(),
            });
        }
        blocks.push(Block::from_elements(&elements)?);
    }
    Ok(blocks)
}

// ---------------------------------------------------------------------------
// Enumeration

/// Restricted growth string successor engine.
///
/// Position i may take values 0..=min(1 + running max, k-1), and a value is
/// admissible only if the remaining positions can still raise the running
/// max to k-1. Both bounds together make the walk visit exactly the
/// k-block strings, in ascending lexicographic order.
struct RgsEngine {
    n: usize,
    k: usize,
    /// First position allowed to change; positions before it are a pinned
    /// prefix.
    lo: usize,
    a: Vec<u8>,
    /// amax[i] = max(a[0..=i]).
    amax: Vec<u8>,
}

impl RgsEngine {
    fn new(n: u32, k: u32, prefix: &[u8]) -> Result<Self> {
        if !(1 <= k && k <= n && n <= MAX_GROUND) {
            return Err(Error::BadEnumerationParams {
                n: n as u64,
                k: k as u64,
            });
        }
        let (n, k) = (n as usize, k as usize);
        if prefix.len() > n {
            return Err(Error::BadRgs("prefix longer than n".to_string()));
        }
        let mut eng = RgsEngine {
            n,
            k,
            lo: prefix.len().max(1),
            a: vec![0; n],
            amax: vec![0; n],
        };
        // Validate the prefix under the same growth and feasibility rules.
        let mut m = -1i32;
        for (i, &v) in prefix.iter().enumerate() {
            if (i == 0 && v != 0) || v as i32 > m + 1 || v as usize > k - 1 {
                return Err(Error::BadRgs(format!("prefix value {v} at position {i}")));
            }
            m = m.max(v as i32);
            eng.a[i] = v;
            eng.amax[i] = m as u8;
            if k as i32 - 1 - m > (n - 1 - i) as i32 {
                return Err(Error::BadRgs(format!(
                    "prefix cannot reach {k} blocks by position {}",
                    n - 1
                )));
            }
        }
        eng.min_fill(eng.lo);
        Ok(eng)
    }

    /// Fill positions from..n with the lexicographically least completion.
    fn min_fill(&mut self, from: usize) {
        let mut m = if from == 0 { -1i32 } else { self.amax[from - 1] as i32 };
        for j in from..self.n {
            let needed = self.k as i32 - 1 - m;
            debug_assert!(needed <= (self.n - j) as i32);
            if needed == (self.n - j) as i32 {
                m += 1;
                self.a[j] = m as u8;
            } else {
                self.a[j] = 0;
            }
            self.amax[j] = m as u8;
        }
    }

    /// Step to the lexicographic successor; false when exhausted.
    fn advance(&mut self) -> bool {
        for i in (self.lo..self.n).rev() {
            let mprev = self.amax[i - 1];
            let cap = (mprev + 1).min(self.k as u8 - 1);
            let mut v = self.a[i] + 1;
            while v <= cap {
                let newmax = mprev.max(v);
                if self.k as i32 - 1 - newmax as i32 <= (self.n - 1 - i) as i32 {
                    self.a[i] = v;
                    self.amax[i] = newmax;
                    self.min_fill(i + 1);
                    return true;
                }
                v += 1;
            }
        }
        false
    }

    fn write_blocks(&self, out: &mut Vec<Block>) {
        out.clear();
        out.resize(self.k, Block(0));
        let mut masks = vec![0u64; self.k];
        for (i, &v) in self.a.iter().enumerate() {
            masks[v as usize] |= 1 << i;
        }
        for (j, mask) in masks.into_iter().enumerate() {
            out[j] = Block(mask);
        }
    }

    fn current(&self) -> SetPartition {
        let mut blocks = Vec::new();
        self.write_blocks(&mut blocks);
        SetPartition {
            n: self.n as u32,
            blocks,
            rgs: self.a.clone(),
        }
    }
}

/// Iterator over all k-partitions of {1, ..., n} in ascending rgs order.
pub struct PartitionIter {
    eng: RgsEngine,
    done: bool,
}

impl Iterator for PartitionIter {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        let item = self.eng.current();
        self.done = !self.eng.advance();
        Some(item)
    }
}

pub fn enumerate_partitions(n: u32, k: u32) -> Result<PartitionIter> {
    Ok(PartitionIter {
        eng: RgsEngine::new(n, k, &[])?,
        done: false,
    })
}

/// Enumerate only the partitions whose rgs starts with the given prefix.
pub fn enumerate_with_prefix(n: u32, k: u32, prefix: &[u8]) -> Result<PartitionIter> {
    Ok(PartitionIter {
        eng: RgsEngine::new(n, k, prefix)?,
        done: false,
    })
}

/// Allocation-free visitor over (rgs, blocks) of every k-partition.
pub fn for_each_partition<F>(n: u32, k: u32, f: F) -> Result<()>
where
    F: FnMut(&[u8], &[Block]),
{
    for_each_with_prefix(n, k, &[], f)
}

/// Allocation-free visitor over the partitions in one rgs prefix range.
pub fn for_each_with_prefix<F>(n: u32, k: u32, prefix: &[u8], mut f: F) -> Result<()>
where
    F: FnMut(&[u8], &[Block]),
{
    let mut eng = RgsEngine::new(n, k, prefix)?;
    let mut blocks = Vec::with_capacity(k as usize);
    loop {
        eng.write_blocks(&mut blocks);
        f(&eng.a, &blocks);
        if !eng.advance() {
            return Ok(());
        }
    }
}

/// One rgs prefix class from `split_by_prefix`.
#[derive(Debug, Clone)]
pub struct RgsPrefix {
    pub n: u32,
    pub k: u32,
    pub prefix: Vec<u8>,
    pub count: BigInt,
}

impl RgsPrefix {
    pub fn iter(&self) -> Result<PartitionIter> {
        enumerate_with_prefix(self.n, self.k, &self.prefix)
    }
}

/// Partition the enumeration into disjoint rgs prefix ranges for parallel
/// workers. Ranges are in lexicographic order and their counts sum to
/// S(n, k).
pub fn split_by_prefix(n: u32, k: u32, prefix_len: u32) -> Result<Vec<RgsPrefix>> {
    if !(1 <= k && k <= n && n <= MAX_GROUND) {
        return Err(Error::BadEnumerationParams {
            n: n as u64,
            k: k as u64,
        });
    }
    if prefix_len < 1 || prefix_len > n {
        return Err(Error::BadRgs(format!("prefix length {prefix_len} outside 1..={n}")));
    }
    let comps = completion_table(n as usize, k as usize);
    let (n_us, k_us, p) = (n as usize, k as usize, prefix_len as usize);
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<u8>, u8)> = vec![(vec![0u8], 0)];
    while let Some((prefix, m)) = stack.pop() {
        if prefix.len() == p {
            out.push(RgsPrefix {
                n,
                k,
                prefix: prefix.clone(),
                count: comps[p][m as usize].clone(),
            });
            continue;
        }
        let i = prefix.len();
        let cap = (m + 1).min(k as u8 - 1);
        // Push in reverse so the stack pops values in ascending order.
        for v in (0..=cap).rev() {
            let newmax = m.max(v);
            if k_us as i32 - 1 - newmax as i32 <= (n_us - 1 - i) as i32 {
                let mut next = prefix.clone();
                next.push(v);
                stack.push((next, newmax));
            }
        }
    }
    out.sort_by(|a, b| a.prefix.cmp(&b.prefix));
    Ok(out)
}

/// comps[i][m]: completions of a prefix of length i with running max m.
///
/// This doubles as a count oracle independent of the Stirling recurrence:
/// comps[1][0] = S(n, k).
fn completion_table(n: usize, k: usize) -> Vec<Vec<BigInt>> {
    let mut comps = vec![vec![BigInt::zero(); k]; n + 1];
    comps[n][k - 1] = BigInt::one();
    for i in (1..n).rev() {
        for m in 0..k {
            let keep = &comps[i + 1][m] * BigInt::from(m as u64 + 1);
            let raise = if m + 1 < k {
                comps[i + 1][m + 1].clone()
            } else {
                BigInt::zero()
            };
            comps[i][m] = keep + raise;
        }
    }
    comps
}

/// Count k-partitions by the rgs completion recursion, bypassing the
/// Stirling table entirely.
pub fn rgs_count(n: u32, k: u32) -> Result<BigInt> {
    if !(1 <= k && k <= n && n <= MAX_GROUND) {
        return Err(Error::BadEnumerationParams {
            n: n as u64,
            k: k as u64,
        });
    }
    Ok(completion_table(n as usize, k as usize)[1][0].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stirling::stirling;

    fn part(s: &str, n: u32) -> SetPartition {
        parse_partition(s, n).unwrap()
    }

    #[test]
    fn canonical_form() {
        let p = SetPartition::from_blocks(
            4,
            vec![
                Block::from_elements(&[3, 4]).unwrap(),
                Block::from_elements(&[2]).unwrap(),
                Block::from_elements(&[1]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(p.to_literal(), "1|2|3 4");
        assert_eq!(p.rgs(), &[0, 1, 2, 2]);
        assert_eq!(p, part("0,1,2,2", 4));
    }

    #[test]
    fn literal_rejects() {
        assert!(parse_partition("1 2|2 3", 3).is_err());
        assert!(parse_partition("1||2", 2).is_err());
        assert!(parse_partition("1|2", 3).is_err());
        assert!(parse_partition("1|2 5", 4).is_err());
        assert!(parse_partition("0,2", 2).is_err());
        assert!(parse_partition("0,1,1", 4).is_err());
    }

    #[test]
    fn enumeration_order_frozen() {
        let got: Vec<String> = enumerate_partitions(4, 2)
            .unwrap()
            .map(|p| p.to_literal())
            .collect();
        assert_eq!(
            got,
            [
                "1 2 3|4", "1 2 4|3", "1 2|3 4", "1 3 4|2", "1 3|2 4", "1 4|2 3", "1|2 3 4"
            ]
        );
    }

    #[test]
    fn enumeration_extremes() {
        let all: Vec<_> = enumerate_partitions(5, 1).unwrap().collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].to_literal(), "1 2 3 4 5");
        let all: Vec<_> = enumerate_partitions(5, 5).unwrap().collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].to_literal(), "1|2|3|4|5");
        assert!(enumerate_partitions(3, 4).is_err());
        assert!(enumerate_partitions(0, 0).is_err());
    }

    #[test]
    fn enumeration_counts_match_stirling() {
        for n in 1..=9u32 {
            for k in 1..=n {
                let count = enumerate_partitions(n, k).unwrap().count();
                assert_eq!(BigInt::from(count), stirling(n as i64, k as i64));
                assert_eq!(rgs_count(n, k).unwrap(), stirling(n as i64, k as i64));
            }
        }
    }

    #[test]
    fn split_ranges_partition_the_space() {
        let one = split_by_prefix(4, 2, 1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].count, BigInt::from(7));

        let two = split_by_prefix(4, 2, 2).unwrap();
        let labels: Vec<_> = two.iter().map(|r| r.prefix.clone()).collect();
        assert_eq!(labels, vec![vec![0, 0], vec![0, 1]]);
        assert_eq!(two[0].count, BigInt::from(3));
        assert_eq!(two[1].count, BigInt::from(4));

        for (n, k, p) in [(7u32, 3u32, 3u32), (8, 4, 2), (6, 2, 4)] {
            let ranges = split_by_prefix(n, k, p).unwrap();
            let full: Vec<_> = enumerate_partitions(n, k).unwrap().collect();
            let merged: Vec<_> = ranges
                .iter()
                .flat_map(|r| r.iter().unwrap().collect::<Vec<_>>())
                .collect();
            assert_eq!(merged, full, "merged ranges = full enumeration");
            let total: BigInt = ranges.iter().map(|r| r.count.clone()).sum();
            assert_eq!(total, BigInt::from(full.len()));
            for r in &ranges {
                assert_eq!(
                    BigInt::from(r.iter().unwrap().count()),
                    r.count,
                    "range count"
                );
            }
        }
    }

    #[test]
    fn common_block_counts() {
        let p = part("1|2|3 4", 4);
        let q = part("1|2 3|4", 4);
        assert_eq!(common_blocks(&p, &q), 1);
        assert_eq!(common_blocks(&p, &p), 3);
        let r = part("1|2|3|4", 4);
        assert_eq!(common_blocks(&p, &r), 2);
        assert!(share_at_least(&p, &r, 2));
        assert!(!share_at_least(&p, &r, 3));
    }

    #[test]
    fn intersecting_families() {
        let f = vec![part("1|2|3 4", 4), part("1|2 4|3", 4)];
        assert!(is_t_intersecting(&f, 1));
        assert!(!is_t_intersecting(&f, 2));
        assert_eq!(first_non_intersecting_pair(&f, 2), Some((0, 1)));
    }

    #[test]
    fn containment_and_singletons() {
        let p = part("1|2|3 4", 4);
        let x = parse_partial("1|3 4", 4).unwrap();
        assert!(p.contains(&x));
        let y = parse_partial("1|3", 4).unwrap();
        assert!(!p.contains(&y));
        let b = Block::from_elements(&[2, 4]).unwrap();
        let s = singletons_of(b, 4);
        assert_eq!(s.to_string(), "2|4");
    }

    #[test]
    fn core_of_family() {
        let f = vec![part("1|2|3 4", 4), part("1|2 4|3", 4), part("1|2 3|4", 4)];
        let core = common_core(&f).unwrap();
        assert_eq!(core, vec![Block::singleton(1)]);
    }
}
