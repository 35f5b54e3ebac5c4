//! Largest observed ratio on the weighted hypercube as the spectral gap
//! shrinks. Output is CSV for plotting.

use xpchaos::harness::weighted_cube_sweep;

fn main() -> xpchaos::Result<()> {
    let alphas = [0.01, 0.03, 0.1, 0.3, 1.0, 3.0];
    println!("alpha,gap,max_ratio");
    for point in weighted_cube_sweep(5, 4.0, &alphas, 100, 1)? {
        println!("{},{},{}", point.alpha, point.gap, point.max_ratio);
    }
    Ok(())
}
