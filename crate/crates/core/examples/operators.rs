//! Fourier multipliers: derivatives, Riesz transforms, the Laplacian, heat
//! semigroup and Fourier truncations, applied to one trigonometric polynomial.

use num_complex::Complex64;
use xpchaos::operators::{absorbent_derivative, heat_semigroup, laplacian_power, riesz_transform, truncate};
use xpchaos::{BasisVectorId, CocycleFamily, GroupAlgebraElement, GroupDescriptor, LengthCocycle};

fn show(label: &str, f: &GroupAlgebraElement) {
    let terms: Vec<String> = f.iter().map(|(g, z)| format!("{z:.3}@{g:?}")).collect();
    println!("{label:<14} {}", terms.join("  "));
}

fn main() -> xpchaos::Result<()> {
    let torus = GroupDescriptor::Torus { rank: 2, bound: 3 };
    let c = LengthCocycle::build(CocycleFamily::ZnWord { rank: 2 })?;
    let one = Complex64::new(1.0, 0.0);
    let f = GroupAlgebraElement::from_tuples(torus, &[(&[2, 0], one), (&[1, -1], one), (&[0, 3], one * 0.5)])?;
    show("f", &f);
    show("R_(1,2) f", &riesz_transform(&f, &BasisVectorId::ZWord { j: 1, l: 2 }, &c)?);
    show("d_1 f", &absorbent_derivative(&f, 1, &c)?);
    show("Delta f", &laplacian_power(&f, 1.0, &c)?);
    show("P_1 f", &heat_semigroup(&f, 1.0, &c)?);
    show("E_{1} f", &truncate(&f, &[1])?);
    show("E_{2} f", &truncate(&f, &[2])?);
    Ok(())
}
