//! Elements of group algebras: construction, convolution, adjoints and the
//! dual evaluation on a finite abelian group.

use num_complex::Complex64;
use xpchaos::algebra::{adjoint, convolve, trace};
use xpchaos::dual::{evaluate_on_dual, fourier_coefficients};
use xpchaos::{GroupAlgebraElement, GroupDescriptor, WordKind};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn main() -> xpchaos::Result<()> {
    let z4 = GroupDescriptor::cyclic_power(4, 2);
    let f = GroupAlgebraElement::from_tuples(z4.clone(), &[(&[1, 0], c(1.0)), (&[0, 3], c(-2.0))])?;
    let h = GroupAlgebraElement::from_tuples(z4, &[(&[3, 1], c(0.5))])?;
    let fh = convolve(&f, &h)?;
    println!("f * h = {}", serde_json::to_string(&fh).unwrap());
    println!("tau(f f*) = {}", trace(&convolve(&f, &adjoint(&f))?));

    let values = evaluate_on_dual(&f)?;
    println!("f on the dual group: {} points", values.values().len());
    println!("round trip error: {:e}", fourier_coefficients(&values).max_abs_diff(&f));

    let free = WordKind::Free { rank: 2 };
    let w = free.reduce(&[(1, 2), (2, -1), (2, 1), (1, 1)])?;
    println!("g1^2 g2^-1 g2 g1 reduces to {} (length {})", serde_json::to_string(&w).unwrap(), free.length(&w));
    println!("F_2 has {} words of length at most 3", free.words_up_to(3).len());
    Ok(())
}
