//! The linear models: scalar Rosenthal-type averages and matrix-valued
//! averages over random k-subsets with signs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use xpchaos::harness::{moment_checks, random_matrices, random_vector, rosenthal_linear_ratio, xp_linear_ratio, Ensemble};

fn main() -> xpchaos::Result<()> {
    let m = moment_checks(8, 3, 4.0)?;
    println!("moments n=8 k=3 p=4: {}", serde_json::to_string(&m).unwrap());

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = random_vector(10, Ensemble::Gaussian, &mut rng)?;
    for p in [2.0, 3.0, 6.0] {
        for k in [1, 3, 10] {
            let r = rosenthal_linear_ratio(&a, p, k)?;
            println!("scalar p={p} k={k:>2}: ratio {:.4} inverse {:.4}", r.ratio, r.inverse_ratio.unwrap_or(f64::NAN));
        }
    }
    let xs = random_matrices(6, 4, &mut rng);
    for k in 1..=6 {
        let r = xp_linear_ratio(&xs, 4.0, k)?;
        println!("matrix p=4 k={k}: lhs {:.3} rhs {:.3} ratio {:.4}", r.lhs, r.rhs, r.ratio);
    }
    let big = random_vector(20, Ensemble::Gaussian, &mut rng)?;
    let r = rosenthal_linear_ratio(&big, 4.0, 5)?;
    println!("n=20 uses sampling: monte_carlo={} ratio {:.4}", r.monte_carlo, r.ratio);
    Ok(())
}
