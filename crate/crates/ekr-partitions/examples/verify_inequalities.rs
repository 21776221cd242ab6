//! The claim registry end to end: default grids, explicit grids, tight
//! points, and the truncated inclusion-exclusion sandwich.

use ekr_partitions::verify::{
    bonferroni, check, parse_ranges, summarize, IntersectionTable, CLAIM_IDS,
};

fn main() -> ekr_partitions::Result<()> {
    let (seed, budget, workers) = (42, 10_000_000, 4);

    println!("Registered claims: {}", CLAIM_IDS.join(", "));

    // Default grids sit inside each claim's hypotheses by construction.
    println!("\nThree claims on their default grids:");
    for claim in ["L2.1-ratio", "L4.2-Q", "L4.10-trichotomy"] {
        let records = check(claim, None, seed, budget, workers)?;
        for s in summarize(&records) {
            println!(
                "  {:18} {} points, {} passes, {} failures, {} tight",
                s.claim, s.total, s.passes, s.failures, s.tight_points
            );
        }
    }

    // The floor Q >= 18 is attained exactly once.
    let records = check("L4.2-Q", None, seed, budget, workers)?;
    let tight = records.iter().find(|r| r.tight).expect("Q has a tight point");
    println!("\nQ attains its floor at {}: Q = {}", tight.point, tight.lhs);

    // Explicit grids pin down single statements; here the one equality
    // point of the |A| vs |H| comparison.
    let grid = parse_ranges("t=1,k=4,n=28..30")?;
    println!("\n|A| vs |H| at (k,t) = (4,1):");
    for r in check("L4.10-trichotomy", Some(&grid), seed, budget, workers)? {
        println!("  {}: |A| = {} and |H| = {} ({})", r.point, r.lhs, r.rhs, r.note);
        assert!(r.pass && r.tight);
    }

    // Truncated inclusion-exclusion sandwiches a union size from both ends.
    let masks = [0b0001_1111u64, 0b0111_1100, 0b1110_0011];
    let table = IntersectionTable::from_masks(&masks);
    let exact = table.union_size()?;
    println!("\nBonferroni sandwich for a 3-set union of size {exact}:");
    for depth in 1..=3 {
        let (lo, hi) = bonferroni(&table, depth)?;
        println!("  depth {depth}: {lo} <= {exact} <= {hi}");
        assert!(lo <= exact && exact <= hi);
    }
    Ok(())
}
