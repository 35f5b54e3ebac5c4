//! L_p norms on finite groups and the torus, Schatten norms and the
//! noncommutative Khintchine ratio.

use num_complex::Complex64;
use xpchaos::norms::{khintchine_ratio, lp_norm, lp_norm_torus_even, lp_norm_torus_grid, schatten_norm, MatrixOperand};
use xpchaos::{GroupAlgebraElement, GroupDescriptor};

fn main() -> xpchaos::Result<()> {
    let one = Complex64::new(1.0, 0.0);
    let t = GroupDescriptor::Torus { rank: 1, bound: 1 };
    let f = GroupAlgebraElement::from_tuples(t, &[(&[0], one), (&[1], one)])?;
    println!("||1 + e(x)||_4: exact {:.12}, grid {:.12}, 6^(1/4) = {:.12}",
        lp_norm_torus_even(&f, 4.0)?, lp_norm_torus_grid(&f, 4.0, 8)?, 6f64.powf(0.25));

    let cube = GroupDescriptor::hypercube(3);
    let g = GroupAlgebraElement::from_tuples(cube, &[(&[1, 0, 0], one), (&[0, 1, 0], one), (&[0, 0, 1], one)])?;
    for p in [1.0, 2.0, 4.0, 8.0] {
        println!("||W_1 + W_2 + W_3||_{p} = {:.6}", lp_norm(&g, p)?);
    }

    let x = MatrixOperand::from_real_rows(&[vec![3.0, 0.0], vec![4.0, 0.0]])?;
    println!("Schatten norms of [[3,0],[4,0]]: S_1 {} S_2 {} S_inf {}",
        schatten_norm(&x, 1.0)?, schatten_norm(&x, 2.0)?, schatten_norm(&x, f64::INFINITY)?);

    let units: Vec<MatrixOperand> = (0..3).map(|j| MatrixOperand::unit(3, 0, j)).collect();
    let k = khintchine_ratio(&units, 4.0)?;
    println!("Khintchine p=4 on row units: column {:.4} row {:.4} ratio {:.4}", k.column, k.row, k.ratio);
    Ok(())
}
