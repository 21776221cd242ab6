//! Randomized invariants of the enumeration core and the counting helpers.

use ekr_partitions::families::{materialize, FamilySpec};
use ekr_partitions::partition::{
    common_blocks, enumerate_partitions, parse_partition, share_at_least, split_by_prefix, Block,
    GroundParams, SetPartition,
};
use ekr_partitions::stirling::stirling;
use ekr_partitions::verify::{bonferroni, IntersectionTable};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = (u32, u32)> {
    (2u32..=8).prop_flat_map(|n| (Just(n), 1..=n))
}

fn nth_partition(n: u32, k: u32, idx: u64) -> SetPartition {
    enumerate_partitions(n, k)
        .unwrap()
        .nth(idx as usize)
        .expect("index below S(n, k)")
}

fn partition() -> impl Strategy<Value = SetPartition> {
    params()
        .prop_flat_map(|(n, k)| {
            let count = stirling(n as i64, k as i64).to_u64().unwrap();
            (Just((n, k)), 0..count)
        })
        .prop_map(|((n, k), idx)| nth_partition(n, k, idx))
}

fn partition_pair() -> impl Strategy<Value = (SetPartition, SetPartition)> {
    params()
        .prop_flat_map(|(n, k)| {
            let count = stirling(n as i64, k as i64).to_u64().unwrap();
            (Just((n, k)), 0..count, 0..count)
        })
        .prop_map(|((n, k), i, j)| (nth_partition(n, k, i), nth_partition(n, k, j)))
}

proptest! {
    #[test]
    fn literal_round_trips(p in partition()) {
        let back = parse_partition(&p.to_literal(), p.n()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn rgs_round_trips(p in partition()) {
        let back = SetPartition::from_rgs(p.rgs()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn canonical_form_ignores_block_presentation(p in partition(), seed in any::<u64>()) {
        // Rebuild from blocks listed in a rotated order with reversed
        // element order inside each block; the canonical form must agree.
        let mut blocks: Vec<Block> = p
            .blocks()
            .iter()
            .map(|b| {
                let mut es: Vec<u32> = b.elements().collect();
                es.reverse();
                Block::from_elements(&es).unwrap()
            })
            .collect();
        let rot = (seed as usize) % blocks.len();
        blocks.rotate_left(rot);
        let rebuilt = SetPartition::from_blocks(p.n(), blocks).unwrap();
        prop_assert_eq!(rebuilt, p);
    }

    #[test]
    fn common_blocks_is_a_bounded_symmetric_count((p, q) in partition_pair()) {
        let c = common_blocks(&p, &q);
        prop_assert_eq!(c, common_blocks(&q, &p));
        prop_assert!(c <= p.k());
        prop_assert_eq!(c == p.k(), p == q);
        if p != q {
            // Two distinct partitions differ in at least two blocks.
            prop_assert!(c <= p.k() - 2);
        }
    }

    #[test]
    fn share_at_least_matches_the_count((p, q) in partition_pair(), t in 0u32..=9) {
        prop_assert_eq!(share_at_least(&p, &q, t), common_blocks(&p, &q) >= t);
    }

    #[test]
    fn enumeration_is_ascending_and_complete((n, k) in (2u32..=7).prop_flat_map(|n| (Just(n), 1..=n))) {
        let mut count = 0u64;
        let mut prev: Option<Vec<u8>> = None;
        for p in enumerate_partitions(n, k).unwrap() {
            let rgs = p.rgs().to_vec();
            if let Some(prev) = &prev {
                prop_assert!(*prev < rgs);
            }
            prev = Some(rgs);
            count += 1;
        }
        prop_assert_eq!(BigInt::from(count), stirling(n as i64, k as i64));
    }

    #[test]
    fn prefix_ranges_tile_the_enumeration(
        (n, k, len) in (3u32..=7)
            .prop_flat_map(|n| (Just(n), 1..=n))
            .prop_flat_map(|(n, k)| (Just(n), Just(k), 1..=n)),
    ) {
        let ranges = split_by_prefix(n, k, len).unwrap();
        let mut tiled = Vec::new();
        let mut counted = BigInt::from(0);
        for range in &ranges {
            let mut seen = 0u64;
            for p in range.iter().unwrap() {
                prop_assert!(p.rgs().starts_with(&range.prefix));
                tiled.push(p);
                seen += 1;
            }
            prop_assert_eq!(BigInt::from(seen), range.count.clone());
            counted += seen;
        }
        let full: Vec<SetPartition> = enumerate_partitions(n, k).unwrap().collect();
        prop_assert_eq!(tiled, full);
        prop_assert_eq!(counted, stirling(n as i64, k as i64));
    }

    #[test]
    fn bonferroni_sandwiches_the_union(
        masks in prop::collection::vec(1u64..(1 << 16), 1..=6),
    ) {
        let table = IntersectionTable::from_masks(&masks);
        let union = BigInt::from(masks.iter().fold(0u64, |a, m| a | m).count_ones());
        prop_assert_eq!(table.union_size().unwrap(), union.clone());
        for depth in 1..=(masks.len() as u32 + 1) {
            let (lo, hi) = bonferroni(&table, depth).unwrap();
            prop_assert!(lo <= union && union <= hi);
            if depth >= masks.len() as u32 {
                prop_assert_eq!(lo, hi);
            }
        }
    }

    #[test]
    fn named_families_are_t_intersecting(
        (t, k, n) in (1u32..=2)
            .prop_flat_map(|t| (Just(t), t + 2..=4))
            .prop_flat_map(|(t, k)| (Just(t), Just(k), k + 2..=7)),
    ) {
        let params = GroundParams::new(n, k, t).unwrap();
        for spec in [
            FamilySpec::named_star(params).unwrap(),
            FamilySpec::named_alpha(params).unwrap(),
            FamilySpec::named_hm(params).unwrap(),
            FamilySpec::named_h1(params).unwrap(),
        ] {
            let family = materialize(&spec, 1_000_000).unwrap();
            prop_assert!(family.is_t_intersecting());
            prop_assert!(family.members().iter().all(|m| spec.contains(m)));
        }
    }
}

#[test]
fn ground_params_are_validated() {
    assert!(GroundParams::new(5, 3, 1).is_ok());
    assert!(GroundParams::new(5, 3, 3).is_err());
    assert!(GroundParams::new(5, 6, 1).is_err());
    assert!(GroundParams::new(65, 3, 1).is_err());
    assert!(GroundParams::new(5, 0, 0).is_err());
}
