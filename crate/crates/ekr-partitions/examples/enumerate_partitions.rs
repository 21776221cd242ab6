//! Canonical enumeration of k-partitions: restricted growth strings,
//! block literals, round-trips, and prefix ranges for parallel scans.

use ekr_partitions::parallel::map_ordered;
use ekr_partitions::partition::{
    enumerate_partitions, for_each_with_prefix, parse_partition, split_by_prefix,
};
use ekr_partitions::stirling::stirling;

fn main() -> ekr_partitions::Result<()> {
    println!("The {} partitions of {{1..5}} into 3 blocks:", stirling(5, 3));
    for p in enumerate_partitions(5, 3)? {
        let rgs: Vec<String> = p.rgs().iter().map(|d| d.to_string()).collect();
        println!("  rgs {}  ->  {}", rgs.join(""), p.to_literal());
    }

    let p = parse_partition("3 1|4 2|5", 5)?;
    println!("\nLiterals canonicalize: \"3 1|4 2|5\" -> {}", p.to_literal());

    println!("\nPrefix ranges of the (9, 3) enumeration:");
    let ranges = split_by_prefix(9, 3, 3)?;
    // Each range is scanned independently; counts are exact per range.
    let counts = map_ordered(ranges, 4, |_, range| -> ekr_partitions::Result<(String, u64)> {
        let mut seen = 0u64;
        for_each_with_prefix(range.n, range.k, &range.prefix, |_, _| seen += 1)?;
        assert_eq!(num_bigint::BigInt::from(seen), range.count);
        let digits: Vec<String> = range.prefix.iter().map(|d| d.to_string()).collect();
        Ok((digits.join(""), seen))
    });
    let mut total = 0u64;
    for item in counts {
        let (prefix, seen) = item?;
        total += seen;
        println!("  prefix {prefix} holds {seen} partitions");
    }
    println!("  total {total} = S(9, 3) = {}", stirling(9, 3));
    assert_eq!(num_bigint::BigInt::from(total), stirling(9, 3));
    Ok(())
}
