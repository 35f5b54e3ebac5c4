//! Seeded scans of the balanced truncation inequality on the hypercube and
//! on Z_4^n, with the witness re-evaluated from the report.

use xpchaos::harness::{scan, DerivativeChoice, Experiment, ScanSpec};
use xpchaos::CocycleFamily;

fn main() -> xpchaos::Result<()> {
    for n in [4, 6, 8] {
        for derivative in [DerivativeChoice::Walsh, DerivativeChoice::Absorbent] {
            let mut spec = ScanSpec::new(Experiment::Naor, n);
            spec.p = 4.0;
            spec.derivative = Some(derivative);
            spec.trials = 200;
            spec.seed = 11;
            let r = scan(&spec)?;
            println!("hypercube n={n} {:<9} max ratio {:.4} (k per column: {})", derivative.name(), r.max_ratio, r.details["max_ratio_by_k"]);
            let again = spec.evaluate_witness(&r.witness)?;
            assert!((again.ratio - r.max_ratio).abs() < 1e-9);
        }
    }
    let mut spec = ScanSpec::new(Experiment::Ztorus, 3);
    spec.family = Some(CocycleFamily::Z2mWord { rank: 3, m: 2 });
    spec.p = 4.0;
    spec.trials = 200;
    let r = scan(&spec)?;
    println!("Z_4^3 absorbent max ratio {:.4}, witness trial {}", r.max_ratio, r.details["witness_trial"]);
    Ok(())
}
