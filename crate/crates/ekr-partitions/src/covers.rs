//! t-covers, the exact covering number, and the structure of the family of
//! (t+1)-block covers.
//!
//! A t-cover is a partial partition sharing at least t blocks with every
//! member. The covering number search only ever draws candidate blocks from
//! the members themselves: a block belonging to no member contributes to no
//! intersection count, so removing it from a cover leaves a cover. A further
//! cut: every cover shares at least t blocks with the first member, so
//! candidates split into a subset of the first member's blocks plus outside
//! blocks. Candidates of each size are generated from that split, sorted
//! canonically, and tested in order, which makes the reported witness the
//! first cover in canonical order.

use serde::Serialize;

use crate::error::Error;
use crate::families::Family;
use crate::partition::{
    common_blocks_sorted, first_non_intersecting_pair, Block, PartialPartition,
};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub tau: u32,
    pub witness: PartialPartition,
    /// All (t+1)-block t-covers, populated when tau = t+1.
    pub covers: Vec<PartialPartition>,
    /// Common blocks of `covers` when they form a t-intersecting set system
    /// with a core of at least t blocks.
    pub t_core: Option<PartialPartition>,
    /// Case split over `covers`, when they were computed.
    pub classification: Option<CoverClass>,
}

/// The case split on the family of (t+1)-block covers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoverClass {
    Empty,
    Singleton,
    /// Pairwise t-intersecting with |core| >= t. The three flags report the
    /// structural conclusions that are asserted downstream: every pairwise
    /// intersection equals the core, and the union is a partial partition
    /// with at most k blocks.
    CoreT {
        core: PartialPartition,
        union: Vec<Block>,
        pairwise_eq_core: bool,
        union_disjoint: bool,
        union_within_k: bool,
    },
    /// Pairwise t-intersecting with |core| < t; the union is reported for
    /// comparison against a (t+2)-block anchor.
    CoreBelowT {
        union: Vec<Block>,
        union_disjoint: bool,
    },
    NotTIntersecting {
        i: usize,
        j: usize,
    },
}

/// Whether every member shares at least t blocks with `cover`.
pub fn is_t_cover(cover: &PartialPartition, family: &Family, t: u32) -> bool {
    assert_eq!(cover.n(), family.params().n, "cover and family ground sets differ");
    family
        .members()
        .iter()
        .all(|m| common_blocks_sorted(m.blocks(), cover.blocks()) >= t)
}

/// Exact covering number with witness; when tau = t+1 the report also
/// carries every (t+1)-block cover and its classification.
pub fn covering_number(family: &Family, t: u32) -> Result<CoverReport> {
    let (tau, witness, covers) = search(family, t)?;
    let k = family.params().k;
    let (classification, t_core) = if tau == t + 1 {
        let class = classify_t(&covers, k, t);
        let core = match &class {
            CoverClass::CoreT { core, .. } => Some(core.clone()),
            _ => None,
        };
        (Some(class), core)
    } else {
        (None, None)
    };
    Ok(CoverReport {
        tau,
        witness,
        covers,
        t_core,
        classification,
    })
}

/// All (t+1)-block t-covers; errors unless tau is exactly t+1.
pub fn cover_family_t(family: &Family, t: u32) -> Result<Vec<PartialPartition>> {
    let (tau, _, covers) = search(family, t)?;
    if tau != t + 1 {
        return Err(Error::WrongCoveringNumber {
            expected: t + 1,
            actual: tau,
        });
    }
    Ok(covers)
}

/// Case split on a list of (t+1)-block covers: empty, singleton, pairwise
/// t-intersecting with core of size >= t or < t, or a witnessed failure of
/// t-intersection.
pub fn classify_t(t_list: &[PartialPartition], k: u32, t: u32) -> CoverClass {
    if t_list.is_empty() {
        return CoverClass::Empty;
    }
    for i in 0..t_list.len() {
        for j in (i + 1)..t_list.len() {
            if common_blocks_sorted(t_list[i].blocks(), t_list[j].blocks()) < t {
                return CoverClass::NotTIntersecting { i, j };
            }
        }
    }
    if t_list.len() == 1 {
        return CoverClass::Singleton;
    }
    let n = t_list[0].n();
    let core_blocks: Vec<Block> = t_list[0]
        .blocks()
        .iter()
        .copied()
        .filter(|b| t_list[1..].iter().all(|c| c.blocks().contains(b)))
        .collect();
    let mut union: Vec<Block> = t_list.iter().flat_map(|c| c.blocks().iter().copied()).collect();
    union.sort_by_key(block_key);
    union.dedup();
    let union_disjoint = pairwise_disjoint(&union);
    if (core_blocks.len() as u32) >= t {
        let pairwise_eq_core = t_list.iter().enumerate().all(|(i, a)| {
            t_list[(i + 1)..].iter().all(|b| {
                let mut shared: Vec<Block> = a
                    .blocks()
                    .iter()
                    .copied()
                    .filter(|x| b.blocks().contains(x))
                    .collect();
                shared.sort_by_key(block_key);
                shared == core_blocks
            })
        });
        let core = PartialPartition::new(n, core_blocks)
            .expect("core blocks come from one partial partition");
        CoverClass::CoreT {
            union_within_k: union.len() as u32 <= k,
            pairwise_eq_core,
            union_disjoint,
            union,
            core,
        }
    } else {
        CoverClass::CoreBelowT {
            union,
            union_disjoint,
        }
    }
}

fn block_key(b: &Block) -> (u32, u64) {
    (b.min_element(), b.mask())
}

fn pairwise_disjoint(blocks: &[Block]) -> bool {
    let mut seen = 0u64;
    for b in blocks {
        if b.mask() & seen != 0 {
            return false;
        }
        seen |= b.mask();
    }
    true
}

/// Core search: smallest size wins; within a size the first candidate in
/// canonical order wins. Returns all covers at size t+1 when tau = t+1.
fn search(family: &Family, t: u32) -> Result<(u32, PartialPartition, Vec<PartialPartition>)> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if let Some((i, j)) = first_non_intersecting_pair(family.members(), t) {
        return Err(Error::NotTIntersecting { t, i, j });
    }
    let params = family.params();
    let anchor: Vec<Block> = family.members()[0].blocks().to_vec();
    let mut pool: Vec<Block> = family
        .members()
        .iter()
        .flat_map(|m| m.blocks().iter().copied())
        .filter(|b| !anchor.contains(b))
        .collect();
    pool.sort_by_key(block_key);
    pool.dedup();

    for size in t..=params.k {
        let candidates = candidates_of_size(&anchor, &pool, params.n, t, size);
        let mut found: Vec<PartialPartition> = Vec::new();
        for cand in candidates {
            if is_t_cover(&cand, family, t) {
                if size != t + 1 {
                    return Ok((size, cand, Vec::new()));
                }
                found.push(cand);
            }
        }
        if let Some(first) = found.first().cloned() {
            return Ok((size, first, found));
        }
    }
    unreachable!("every member is itself a t-cover of a t-intersecting family");
}

/// All pairwise-disjoint block-sets of the given size with at least t blocks
/// drawn from the anchor member and the rest from the outside pool, sorted
/// canonically. The split is a partition of the candidate space: a cover's
/// anchor blocks and outside blocks determine it uniquely.
fn candidates_of_size(
    anchor: &[Block],
    pool: &[Block],
    n: u32,
    t: u32,
    size: u32,
) -> Vec<PartialPartition> {
    let mut out: Vec<Vec<Block>> = Vec::new();
    let max_from_anchor = (anchor.len() as u32).min(size);
    for from_anchor in t..=max_from_anchor {
        let mut chosen = Vec::with_capacity(size as usize);
        choose_subsets(anchor, from_anchor as usize, &mut chosen, &mut |head| {
            let mask: u64 = head.iter().map(|b| b.mask()).fold(0, |m, b| m | b);
            let rest = (size - from_anchor) as usize;
            let mut tail = head.to_vec();
            choose_disjoint(pool, rest, mask, &mut tail, &mut |full| {
                out.push(full.to_vec());
            });
        });
    }
    for cand in &mut out {
        cand.sort_by_key(block_key);
    }
    out.sort_by(|a, b| {
        let ka: Vec<_> = a.iter().map(block_key).collect();
        let kb: Vec<_> = b.iter().map(block_key).collect();
        ka.cmp(&kb)
    });
    out.into_iter()
        .map(|blocks| {
            PartialPartition::new(n, blocks).expect("candidate blocks are pairwise disjoint")
        })
        .collect()
}

fn choose_subsets(
    items: &[Block],
    want: usize,
    chosen: &mut Vec<Block>,
    visit: &mut impl FnMut(&[Block]),
) {
    if want == 0 {
        visit(chosen);
        return;
    }
    if items.len() < want {
        return;
    }
    for i in 0..=(items.len() - want) {
        chosen.push(items[i]);
        choose_subsets(&items[(i + 1)..], want - 1, chosen, visit);
        chosen.pop();
    }
}

fn choose_disjoint(
    pool: &[Block],
    want: usize,
    used: u64,
    chosen: &mut Vec<Block>,
    visit: &mut impl FnMut(&[Block]),
) {
    if want == 0 {
        visit(chosen);
        return;
    }
    if pool.len() < want {
        return;
    }
    for i in 0..=(pool.len() - want) {
        if pool[i].mask() & used != 0 {
            continue;
        }
        chosen.push(pool[i]);
        choose_disjoint(&pool[(i + 1)..], want - 1, used | pool[i].mask(), chosen, visit);
        chosen.pop();
    }
}
