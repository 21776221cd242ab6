//! The extremal constructions: stars, alpha families, Hilton-Milner style
//! families.
//!
//! Each construction is a `FamilySpec` with a set-theoretic membership
//! predicate and, where one exists, a closed-form size. `materialize` filters
//! the full enumeration through the predicate, so formula and brute force can
//! be compared on every spec the budget allows. Size formulas follow the
//! classical displays term by term; intermediate differences are not
//! individually meaningful but every final count is asserted non-negative.

use std::io::{BufRead, Write};

use num_bigint::BigInt;
use num_traits::{Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::parallel::map_ordered;
use crate::partition::{
    common_blocks_sorted, for_each_partition, for_each_with_prefix, ground_mask, slice_contains_all,
    split_by_prefix, Block, GroundParams, PartialPartition, SetPartition,
};
use crate::stirling::{binomial, stirling};
use crate::Result;

/// A finite family of k-partitions, strictly sorted by rgs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    params: GroundParams,
    members: Vec<SetPartition>,
}

impl Family {
    pub fn new(params: GroundParams, mut members: Vec<SetPartition>) -> Result<Self> {
        for m in &members {
            if m.n() != params.n || m.k() != params.k {
                return Err(Error::BadFamilySpec(format!(
                    "member {m} is not a {}-partition of 1..={}",
                    params.k, params.n
                )));
            }
        }
        members.sort();
        members.dedup();
        Ok(Family { params, members })
    }

    /// Members already in ascending rgs order with no duplicates.
    pub(crate) fn from_sorted_unchecked(params: GroundParams, members: Vec<SetPartition>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Family { params, members }
    }

    pub fn params(&self) -> GroundParams {
        self.params
    }

    pub fn members(&self) -> &[SetPartition] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Pairwise shared-block check at this family's own t.
    pub fn is_t_intersecting(&self) -> bool {
        crate::partition::is_t_intersecting(&self.members, self.params.t)
    }

    /// Blocks common to every member; empty for the empty family.
    pub fn core_blocks(&self) -> Vec<Block> {
        crate::partition::common_core(&self.members).unwrap_or_default()
    }

    /// JSON lines: a header object, then one literal string per member.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        let header = FamilyHeader {
            schema: 1,
            n: self.params.n,
            k: self.params.k,
            t: self.params.t,
            size: self.members.len() as u64,
        };
        writeln!(w, "{}", serde_json::to_string(&header)?)?;
        for m in &self.members {
            writeln!(w, "{}", serde_json::to_string(&m.to_literal())?)?;
        }
        Ok(())
    }

    pub fn read_jsonl<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header_line = lines
            .next()
            .ok_or_else(|| Error::BadFamilySpec("family file is empty".to_string()))??;
        let header: FamilyHeader = serde_json::from_str(&header_line)?;
        let params = GroundParams::new(header.n, header.k, header.t)?;
        let mut members = Vec::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let literal: String = serde_json::from_str(&line)?;
            members.push(crate::partition::parse_partition(&literal, header.n)?);
        }
        Family::new(params, members)
    }
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Dto<'a> {
            n: u32,
            k: u32,
            t: u32,
            members: Vec<&'a str>,
        }
        let literals: Vec<String> = self.members.iter().map(|m| m.to_literal()).collect();
        Dto {
            n: self.params.n,
            k: self.params.k,
            t: self.params.t,
            members: literals.iter().map(|s| s.as_str()).collect(),
        }
        .serialize(s)
    }
}

#[derive(Serialize, Deserialize)]
struct FamilyHeader {
    schema: u32,
    n: u32,
    k: u32,
    t: u32,
    #[serde(default)]
    size: u64,
}

/// A construction family given by its anchor structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    /// All partitions containing the t anchor blocks.
    Star {
        params: GroundParams,
        x: PartialPartition,
    },
    /// All partitions sharing at least t+1 blocks with a (t+2)-anchor.
    Alpha {
        params: GroundParams,
        z: PartialPartition,
    },
    /// Partitions containing X and meeting M outside X, plus one exceptional
    /// member per block of X.
    Hm(HmSpec),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HmSpec {
    params: GroundParams,
    x: PartialPartition,
    m: PartialPartition,
    m_minus_x: Vec<Block>,
    exceptional: Vec<SetPartition>,
}

impl HmSpec {
    pub fn x(&self) -> &PartialPartition {
        &self.x
    }

    pub fn m(&self) -> &PartialPartition {
        &self.m
    }

    /// The swapped members (M minus B) + (B with the complement of M's
    /// support folded in), one per block B of X. When M covers the ground
    /// set these all collapse back to M itself.
    pub fn exceptional(&self) -> &[SetPartition] {
        &self.exceptional
    }
}

impl FamilySpec {
    pub fn star(params: GroundParams, x: PartialPartition) -> Result<Self> {
        check_anchor(&params, &x, params.t as usize, "star anchor")?;
        Ok(FamilySpec::Star { params, x })
    }

    pub fn alpha(params: GroundParams, z: PartialPartition) -> Result<Self> {
        check_anchor(&params, &z, params.t as usize + 2, "alpha anchor")?;
        Ok(FamilySpec::Alpha { params, z })
    }

    pub fn hm(params: GroundParams, x: PartialPartition, m: PartialPartition) -> Result<Self> {
        check_anchor(&params, &m, params.k as usize, "hm outer anchor")?;
        check_anchor(&params, &x, params.t as usize, "hm inner anchor")?;
        if !x.blocks().iter().all(|b| m.blocks().contains(b)) {
            return Err(Error::BadFamilySpec(
                "hm inner anchor must consist of blocks of the outer anchor".to_string(),
            ));
        }
        let complement = ground_mask(params.n) & !m.union_mask();
        let m_minus_x: Vec<Block> = m
            .blocks()
            .iter()
            .copied()
            .filter(|b| !x.blocks().contains(b))
            .collect();
        let mut exceptional = Vec::with_capacity(x.len());
        for &b in x.blocks() {
            let mut blocks: Vec<Block> = m.blocks().iter().copied().filter(|&c| c != b).collect();
            blocks.push(Block::from_mask(b.mask() | complement)?);
            exceptional.push(SetPartition::from_blocks(params.n, blocks)?);
        }
        exceptional.sort();
        Ok(FamilySpec::Hm(HmSpec {
            params,
            x,
            m,
            m_minus_x,
            exceptional,
        }))
    }

    /// Star anchored at the first t singletons.
    pub fn named_star(params: GroundParams) -> Result<Self> {
        FamilySpec::star(params, first_singletons(params.n, params.t)?)
    }

    /// Alpha family anchored at the first t+2 singletons.
    pub fn named_alpha(params: GroundParams) -> Result<Self> {
        if params.n < params.t + 2 {
            return Err(Error::BadFamilySpec("alpha anchor needs t+2 elements".to_string()));
        }
        FamilySpec::alpha(params, first_singletons(params.n, params.t + 2)?)
    }

    /// H(n, k, t): X the first t singletons, M the first k singletons.
    pub fn named_hm(params: GroundParams) -> Result<Self> {
        FamilySpec::hm(
            params,
            first_singletons(params.n, params.t)?,
            first_singletons(params.n, params.k)?,
        )
    }

    /// H1(n, k, t): as H but with the doubleton {k, k+1} as M's last block.
    pub fn named_h1(params: GroundParams) -> Result<Self> {
        if params.n < params.k + 1 {
            return Err(Error::BadFamilySpec("h1 anchor needs k+1 elements".to_string()));
        }
        let mut blocks: Vec<Block> = (1..params.k).map(Block::singleton).collect();
        blocks.push(Block::from_elements(&[params.k, params.k + 1])?);
        FamilySpec::hm(
            params,
            first_singletons(params.n, params.t)?,
            PartialPartition::new(params.n, blocks)?,
        )
    }

    pub fn params(&self) -> GroundParams {
        match self {
            FamilySpec::Star { params, .. }
            | FamilySpec::Alpha { params, .. }
            | FamilySpec::Hm(HmSpec { params, .. }) => *params,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            FamilySpec::Star { .. } => "star",
            FamilySpec::Alpha { .. } => "alpha",
            FamilySpec::Hm { .. } => "hm",
        }
    }

    pub fn describe(&self) -> String {
        let p = self.params();
        match self {
            FamilySpec::Star { x, .. } => format!("star(n={}, k={}, t={}, X={x})", p.n, p.k, p.t),
            FamilySpec::Alpha { z, .. } => format!("alpha(n={}, k={}, t={}, Z={z})", p.n, p.k, p.t),
            FamilySpec::Hm(h) => format!(
                "hm(n={}, k={}, t={}, X={}, M={})",
                p.n, p.k, p.t, h.x, h.m
            ),
        }
    }

    /// Membership test on a raw canonical block slice.
    pub fn member_blocks(&self, blocks: &[Block]) -> bool {
        match self {
            FamilySpec::Star { x, .. } => slice_contains_all(blocks, x.blocks()),
            FamilySpec::Alpha { params, z } => {
                common_blocks_sorted(blocks, z.blocks()) > params.t
            }
            FamilySpec::Hm(h) => {
                (slice_contains_all(blocks, h.x.blocks())
                    && common_blocks_sorted(blocks, &h.m_minus_x) >= 1)
                    || h.exceptional.iter().any(|e| e.blocks() == blocks)
            }
        }
    }

    pub fn contains(&self, p: &SetPartition) -> bool {
        let params = self.params();
        p.n() == params.n && p.k() == params.k && self.member_blocks(p.blocks())
    }

    /// Closed-form size, where the anchor shape admits one.
    ///
    /// Stars and alpha anchors always do. For hm anchors the classical sums
    /// apply when M consists of singletons (plus at most one doubleton
    /// outside X) and M does not cover the ground set; other shapes return
    /// None and must be counted by materializing.
    pub fn closed_form_size(&self) -> Option<BigInt> {
        let GroundParams { n, k, t } = self.params();
        let (n, k, t) = (n as i64, k as i64, t as i64);
        match self {
            FamilySpec::Star { x, .. } => Some(size_star_value(n, k, t, x.union_size() as i64)),
            FamilySpec::Alpha { z, .. } => {
                let sizes: Vec<i64> = z.blocks().iter().map(|b| b.len() as i64).collect();
                Some(size_alpha_general_value(n, k, t, &sizes))
            }
            FamilySpec::Hm(h) => {
                if h.m.union_mask() == ground_mask(self.params().n) {
                    return None;
                }
                let doubletons: Vec<Block> = h
                    .m
                    .blocks()
                    .iter()
                    .copied()
                    .filter(|b| !b.is_singleton())
                    .collect();
                let x_all_singletons = h.x.blocks().iter().all(|b| b.is_singleton());
                match (x_all_singletons, doubletons.as_slice()) {
                    (true, []) => Some(size_hm_named(n, k, t)),
                    (true, [d]) if d.len() == 2 && !h.x.blocks().contains(d) => {
                        Some(size_h1(n, k, t))
                    }
                    _ => None,
                }
            }
        }
    }
}

fn first_singletons(n: u32, count: u32) -> Result<PartialPartition> {
    PartialPartition::new(n, (1..=count).map(Block::singleton).collect())
}

fn check_anchor(
    params: &GroundParams,
    anchor: &PartialPartition,
    expected_blocks: usize,
    what: &str,
) -> Result<()> {
    if anchor.n() != params.n {
        return Err(Error::BadFamilySpec(format!(
            "{what} is over ground size {}, params say {}",
            anchor.n(),
            params.n
        )));
    }
    if anchor.len() != expected_blocks {
        return Err(Error::BadFamilySpec(format!(
            "{what} must have {expected_blocks} blocks, got {}",
            anchor.len()
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Closed-form sizes. All arguments are signed so callers can pass
// differences straight through; S vanishes outside its triangle.

/// |S(X)| = S(n - |union of X|, k - t).
pub fn size_star_value(n: i64, k: i64, t: i64, union_size: i64) -> BigInt {
    stirling(n - union_size, k - t)
}

/// |A(n, k, t)| = (t+2) S(n-t-1, k-t-1) - (t+1) S(n-t-2, k-t-2).
pub fn size_alpha_named(n: i64, k: i64, t: i64) -> BigInt {
    let size = BigInt::from(t + 2) * stirling(n - t - 1, k - t - 1)
        - BigInt::from(t + 1) * stirling(n - t - 2, k - t - 2);
    assert!(!size.is_negative(), "alpha size must be a count");
    size
}

/// |A(Z)| = sum over blocks B of Z of S(n-u+|B|, k-t-1) minus
/// (t+1) S(n-u, k-t-2), where u = |union of Z|.
pub fn size_alpha_general_value(n: i64, k: i64, t: i64, block_sizes: &[i64]) -> BigInt {
    let u: i64 = block_sizes.iter().sum();
    let mut size: BigInt = block_sizes
        .iter()
        .map(|&b| stirling(n - u + b, k - t - 1))
        .sum();
    size -= BigInt::from(t + 1) * stirling(n - u, k - t - 2);
    assert!(!size.is_negative(), "alpha size must be a count");
    size
}

/// |H(n, k, t)| by inclusion-exclusion over which blocks of M minus X are
/// hit, plus the t exceptional members. Needs n > k so the exceptional
/// members are distinct from the main part.
pub fn size_hm_named(n: i64, k: i64, t: i64) -> BigInt {
    assert!(n > k, "named hm size needs n > k");
    let mut size = BigInt::from(t);
    for j in 1..=(k - t) {
        let term = binomial(k - t, j) * stirling(n - t - j, k - t - j);
        if j % 2 == 1 {
            size += term;
        } else {
            size -= term;
        }
    }
    assert!(!size.is_negative(), "hm size must be a count");
    size
}

/// |H1(n, k, t)|: as `size_hm_named` but M's last block is a doubleton, so
/// each inclusion-exclusion term splits by whether the doubleton is hit.
/// Needs n > k + 1.
pub fn size_h1(n: i64, k: i64, t: i64) -> BigInt {
    assert!(n > k + 1, "h1 size needs n > k + 1");
    let mut size = BigInt::from(t);
    for j in 1..=(k - t) {
        let term = binomial(k - t - 1, j) * stirling(n - t - j, k - t - j)
            + binomial(k - t - 1, j - 1) * stirling(n - t - j - 1, k - t - j);
        if j % 2 == 1 {
            size += term;
        } else {
            size -= term;
        }
    }
    assert!(!size.is_negative(), "h1 size must be a count");
    size
}

/// r(n, k, t) = |H(n, k, t)| - S(n-t-1, k-t-1) + S(n-t-2, k-t-1), the
/// benchmark size that non-trivial maximal families are measured against.
pub fn r_value(n: i64, k: i64, t: i64) -> BigInt {
    size_hm_named(n, k, t) - stirling(n - t - 1, k - t - 1) + stirling(n - t - 2, k - t - 1)
}

/// f(m, k, t, n) = (k-t+1)^(m-t) C(m, t) S(n-m, k-m) for t <= m < k, and
/// (k-t+1)^(k-t) C(k, t) at m = k: the cover-size bound on |F_H|.
pub fn f_value(m: i64, k: i64, t: i64, n: i64) -> BigInt {
    assert!(t <= m && m <= k, "f is defined for t <= m <= k");
    let base = BigInt::from(k - t + 1);
    if m == k {
        base.pow((k - t) as u64) * binomial(k, t)
    } else {
        base.pow((m - t) as u64) * binomial(m, t) * stirling(n - m, k - m)
    }
}

/// u1(n, k, t) = (k-t-2) S(n-t-1, k-t-1) + 2 S(n-t-2, k-t-1) + 2t.
pub fn u1_value(n: i64, k: i64, t: i64) -> BigInt {
    BigInt::from(k - t - 2) * stirling(n - t - 1, k - t - 1)
        + BigInt::from(2) * stirling(n - t - 2, k - t - 1)
        + BigInt::from(2 * t)
}

/// u2(n, k, t): three-term truncation of the H count with a correction, plus
/// 2t.
pub fn u2_value(n: i64, k: i64, t: i64) -> BigInt {
    let mut acc = BigInt::zero();
    for j in 1..=3 {
        let term = binomial(k - t - 1, j) * stirling(n - t - j, k - t - j);
        if j % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc + stirling(n - t - 3, k - t - 1) + BigInt::from(2 * t)
}

// ---------------------------------------------------------------------------
// Materialization

/// Filter the full enumeration through the spec's membership predicate.
///
/// Refuses when S(n, k) exceeds the budget; the work is the whole
/// enumeration, not the family size.
pub fn materialize(spec: &FamilySpec, budget: u64) -> Result<Family> {
    materialize_with_workers(spec, budget, 1)
}

pub fn materialize_with_workers(spec: &FamilySpec, budget: u64, workers: usize) -> Result<Family> {
    let GroundParams { n, k, .. } = spec.params();
    let total = stirling(n as i64, k as i64);
    if total > BigInt::from(budget) {
        return Err(Error::BudgetExceeded {
            needed: total.to_string(),
            budget,
        });
    }
    let members = if workers <= 1 {
        let mut out = Vec::new();
        for_each_partition(n, k, |rgs, blocks| {
            if spec.member_blocks(blocks) {
                out.push(SetPartition::from_enumeration(n, blocks.to_vec(), rgs.to_vec()));
            }
        })?;
        out
    } else {
        let ranges = split_by_prefix(n, k, n.min(5))?;
        let chunks = map_ordered(ranges, workers, |_, range| {
            let mut out = Vec::new();
            for_each_with_prefix(n, k, &range.prefix, |rgs, blocks| {
                if spec.member_blocks(blocks) {
                    out.push(SetPartition::from_enumeration(n, blocks.to_vec(), rgs.to_vec()));
                }
            })
            .expect("range prefixes are valid");
            out
        });
        chunks.into_iter().flatten().collect()
    };
    Ok(Family::from_sorted_unchecked(spec.params(), members))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::parse_partial;

    fn params(n: u32, k: u32, t: u32) -> GroundParams {
        GroundParams::new(n, k, t).unwrap()
    }

    #[test]
    fn star_size_and_membership() {
        let spec = FamilySpec::named_star(params(6, 4, 1)).unwrap();
        assert_eq!(spec.closed_form_size().unwrap(), stirling(5, 3));
        let fam = materialize(&spec, 1 << 20).unwrap();
        assert_eq!(BigInt::from(fam.len()), stirling(5, 3));
        assert!(fam.is_t_intersecting());
        assert!(fam.members().iter().all(|p| p.blocks()[0] == Block::singleton(1)));
    }

    #[test]
    fn alpha_sizes_frozen() {
        assert_eq!(size_alpha_named(6, 4, 1), BigInt::from(19));
        assert_eq!(size_alpha_named(7, 4, 1), BigInt::from(43));
        // The general formula agrees on the named anchor.
        assert_eq!(size_alpha_general_value(6, 4, 1, &[1, 1, 1]), BigInt::from(19));
        // Mixed anchor shapes.
        assert_eq!(size_alpha_general_value(7, 4, 1, &[1, 1, 2]), BigInt::from(27));
        assert_eq!(size_alpha_general_value(6, 3, 1, &[1, 1, 2]), BigInt::from(3));
    }

    #[test]
    fn alpha_matches_enumeration() {
        let p = params(7, 4, 1);
        let z = parse_partial("1|2|3 4", 7).unwrap();
        let spec = FamilySpec::alpha(p, z).unwrap();
        let fam = materialize(&spec, 1 << 20).unwrap();
        assert_eq!(BigInt::from(fam.len()), spec.closed_form_size().unwrap());
        assert_eq!(fam.len(), 27);
        assert!(fam.is_t_intersecting());
    }

    #[test]
    fn hm_size_and_exceptional_members() {
        let spec = FamilySpec::named_hm(params(6, 4, 1)).unwrap();
        assert_eq!(spec.closed_form_size().unwrap(), BigInt::from(19));
        let fam = materialize(&spec, 1 << 20).unwrap();
        assert_eq!(fam.len(), 19);
        assert!(fam.is_t_intersecting());
        // The swapped member for B = {1} folds in the complement {5, 6}.
        let exceptional = crate::partition::parse_partition("1 5 6|2|3|4", 6).unwrap();
        assert!(spec.contains(&exceptional));
        // It is exceptional: X = {{1}} is not one of its blocks.
        let x = parse_partial("1", 6).unwrap();
        assert!(!exceptional.contains(&x));
    }

    #[test]
    fn h1_size_matches_enumeration() {
        let spec = FamilySpec::named_h1(params(7, 4, 1)).unwrap();
        assert_eq!(spec.closed_form_size().unwrap(), BigInt::from(35));
        let fam = materialize(&spec, 1 << 20).unwrap();
        assert_eq!(fam.len(), 35);
        assert!(fam.is_t_intersecting());
    }

    #[test]
    fn degenerate_hm_has_no_closed_form() {
        // M covers the ground set, so the exceptional members collapse.
        let spec = FamilySpec::named_hm(params(4, 4, 1)).unwrap();
        assert_eq!(spec.closed_form_size(), None);
        let fam = materialize(&spec, 1 << 10).unwrap();
        assert_eq!(fam.len(), 1);
    }

    #[test]
    fn benchmark_values_frozen() {
        assert_eq!(r_value(6, 4, 1), BigInt::from(15));
        assert_eq!(r_value(7, 4, 1), BigInt::from(35));
        assert_eq!(u1_value(6, 4, 1), BigInt::from(15));
        assert_eq!(f_value(4, 4, 1, 100), BigInt::from(256));
        // f at m = t is the star size.
        assert_eq!(f_value(1, 4, 1, 9), stirling(8, 3));
    }

    #[test]
    fn spec_validation() {
        let p = params(6, 4, 1);
        assert!(FamilySpec::star(p, parse_partial("1|2", 6).unwrap()).is_err());
        assert!(FamilySpec::alpha(p, parse_partial("1|2", 6).unwrap()).is_err());
        let x = parse_partial("5", 6).unwrap();
        let m = parse_partial("1|2|3|4", 6).unwrap();
        assert!(FamilySpec::hm(p, x, m).is_err());
        assert!(FamilySpec::named_h1(params(4, 4, 2)).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let spec = FamilySpec::named_star(params(10, 5, 1)).unwrap();
        let err = materialize(&spec, 10).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn parallel_materialize_matches_serial() {
        let p = params(8, 4, 2);
        let z = parse_partial("1 2|3|4|5", 8).unwrap();
        let spec = FamilySpec::alpha(p, z).unwrap();
        let serial = materialize(&spec, 1 << 22).unwrap();
        for workers in [2, 4, 8] {
            let par = materialize_with_workers(&spec, 1 << 22, workers).unwrap();
            assert_eq!(serial, par);
        }
        assert_eq!(BigInt::from(serial.len()), spec.closed_form_size().unwrap());
    }

    #[test]
    fn family_jsonl_round_trip() {
        let spec = FamilySpec::named_alpha(params(5, 3, 1)).unwrap();
        let fam = materialize(&spec, 1 << 10).unwrap();
        let mut buf = Vec::new();
        fam.write_jsonl(&mut buf).unwrap();
        let back = Family::read_jsonl(std::io::Cursor::new(buf)).unwrap();
        assert_eq!(fam, back);
    }
}
