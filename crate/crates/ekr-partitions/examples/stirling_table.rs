//! Stirling partition counts: the triangle, the explicit-sum cross-check,
//! the cleared ratio bound, the Rennie-Dobson floor, and the integer-exact
//! thresholds.

use ekr_partitions::stirling::{
    min_n_for_2l, min_n_for_l, ratio_bound_sides, rennie_dobson_lower, stirling, stirling_explicit,
};

fn main() {
    println!("S(n, k) by recurrence, cross-checked against the explicit sum:");
    for n in 0..=10i64 {
        let row: Vec<String> = (0..=n)
            .map(|k| {
                let s = stirling(n, k);
                assert_eq!(s, stirling_explicit(n, k));
                s.to_string()
            })
            .collect();
        println!("  n={n:2}: {}", row.join(" "));
    }

    println!("\n(S(n,k) + S(n-1,k-1))^(k-1) >= 2^(n-1) S(n-1,k-1)^(k-1):");
    for (n, k) in [(4u32, 2u32), (7, 3), (10, 4)] {
        let (lhs, rhs) = ratio_bound_sides(n, k);
        let mark = if lhs == rhs { "tight" } else { "slack" };
        println!("  n={n}, k={k}: {lhs} vs {rhs} ({mark})");
    }

    println!("\nRennie-Dobson floor (r^2+r+2) r^(n-r-1)/2 - 1:");
    for (n, r) in [(10u32, 2u32), (10, 3), (6, 5)] {
        let bound = rennie_dobson_lower(n, r);
        let s = stirling(n as i64, r as i64);
        let mark = if bound.is_integer() && bound.to_integer() == s { "tight" } else { "slack" };
        println!("  S({n},{r}) = {s} >= {bound} ({mark})");
    }

    println!("\nSmallest n past the threshold and the doubled threshold:");
    println!("  {:>4} {:>4} {:>6} {:>6}", "k", "t", "L", "2L");
    for t in 1..=2i64 {
        for k in (t + 2)..=(t + 4) {
            println!(
                "  {:>4} {:>4} {:>6} {:>6}",
                k,
                t,
                min_n_for_l(k, t),
                min_n_for_2l(k, t)
            );
        }
    }
    // 2^12 = 8^4 makes the (4,1) threshold an exact power boundary.
    assert_eq!(min_n_for_l(4, 1), 14);
}
