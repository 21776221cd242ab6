//! Covering numbers separate the constructions: stars sit at tau = t, the
//! non-trivial families at tau = t+1, and the family of (t+1)-block covers
//! carries the structure the classification argument reads off.

use ekr_partitions::covers::{covering_number, CoverClass};
use ekr_partitions::families::{materialize, FamilySpec};
use ekr_partitions::partition::GroundParams;

fn main() -> ekr_partitions::Result<()> {
    let budget = 1_000_000;

    for (kind, n, k, t) in [
        ("star", 6u32, 3u32, 1u32),
        ("alpha", 6, 3, 1),
        ("hm", 6, 4, 1),
        ("alpha", 8, 4, 2),
    ] {
        let params = GroundParams::new(n, k, t)?;
        let spec = match kind {
            "star" => FamilySpec::named_star(params)?,
            "alpha" => FamilySpec::named_alpha(params)?,
            _ => FamilySpec::named_hm(params)?,
        };
        let family = materialize(&spec, budget)?;
        let report = covering_number(&family, t)?;
        println!("{}", spec.describe());
        println!("  size {}, tau = {}, witness {}", family.len(), report.tau, report.witness);
        if !report.covers.is_empty() {
            let lits: Vec<String> = report.covers.iter().map(|c| c.to_string()).collect();
            println!("  ({}+1)-covers: {}", t, lits.join(", "));
        }
        match &report.classification {
            Some(CoverClass::CoreT { core, .. }) => {
                println!("  covers share the {t}-core {core}");
            }
            Some(CoverClass::CoreBelowT { union, .. }) => {
                let lits: Vec<String> = union.iter().map(|b| b.to_string()).collect();
                println!("  covers have no {t}-core; their union is {}", lits.join("|"));
            }
            Some(other) => println!("  cover structure: {other:?}"),
            None => {}
        }
        println!();
    }
    Ok(())
}
