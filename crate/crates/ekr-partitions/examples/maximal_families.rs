//! Exhaustive maximum search at desk scale, growth to maximal families,
//! the complete list of maximal non-trivial families at k = t+2, and their
//! isomorphism classes.

use ekr_partitions::families::{materialize, FamilySpec};
use ekr_partitions::partition::{parse_partition, GroundParams};
use ekr_partitions::search::{
    alpha_anchor_of, enumerate_maximal_nontrivial, isomorphic, max_family, maximal_closure,
};
use ekr_partitions::families::Family;

fn main() -> ekr_partitions::Result<()> {
    println!("Exact maxima by clique search:");
    for (n, k, t) in [(4u32, 3u32, 1u32), (5, 3, 1), (5, 4, 2)] {
        let params = GroundParams::new(n, k, t)?;
        let result = max_family(params, 1_000, 100)?;
        println!(
            "  (n,k,t) = ({n},{k},{t}): max = {}, maximum families = {}, star-shaped = {}",
            result.max_size, result.witness_total, result.matches_star
        );
    }

    // Growing one partition to a maximal family recovers a star here.
    let params = GroundParams::new(5, 3, 1)?;
    let seed = Family::new(params, vec![parse_partition("1 2|3|4 5", 5)?])?;
    let grown = maximal_closure(&seed, 1_000_000)?;
    println!("\nClosure of {{1 2|3|4 5}} at (5,3,1) has {} members:", grown.len());
    for m in grown.members() {
        println!("  {}", m.to_literal());
    }

    // At k = t+2 every maximal non-trivial family is an alpha family; the
    // anchors fall into isomorphism classes by block shape and union size.
    let families = enumerate_maximal_nontrivial(params, 1_000)?;
    println!("\nMaximal non-trivial families at (5,3,1): {}", families.len());
    let mut class_reps: Vec<(usize, usize)> = Vec::new();
    for (i, f) in families.iter().enumerate() {
        match class_reps.iter_mut().find(|(rep, _)| {
            isomorphic(&families[*rep], f, 10).unwrap_or(false)
        }) {
            Some((_, count)) => *count += 1,
            None => class_reps.push((i, 1)),
        }
    }
    for (rep, count) in &class_reps {
        let anchor = alpha_anchor_of(&families[*rep], 1_000_000)?
            .expect("maximal non-trivial families at k = t+2 are alpha families");
        println!("  {count} families isomorphic to the one anchored at {anchor}");
    }

    // The alpha family is itself in the list, up to relabeling.
    let alpha = materialize(&FamilySpec::named_alpha(params)?, 1_000_000)?;
    assert!(families
        .iter()
        .any(|f| isomorphic(f, &alpha, 10).unwrap_or(false)));
    Ok(())
}
