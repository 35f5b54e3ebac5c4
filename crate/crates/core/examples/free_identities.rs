//! Identity checks on free groups and free products of cyclic groups.

use xpchaos::harness::free_identities;
use xpchaos::CocycleFamily;

fn main() -> xpchaos::Result<()> {
    for family in [CocycleFamily::Free { rank: 2 }, CocycleFamily::FreeProduct { rank: 2, m: 2 }] {
        let r = free_identities(family.clone(), 3)?;
        println!("{family}: {}", if r.pass { "all identities hold" } else { "FAILURES" });
        for c in &r.checks {
            println!("  {:<44} {:>7} cases  max error {:.1e}", c.name, c.cases, c.max_error);
        }
    }
    Ok(())
}
