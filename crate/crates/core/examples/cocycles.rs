//! Length functions: Gromov forms two ways, an orthonormal basis slice with
//! its Gram matrix, and the Schoenberg positivity test.

use xpchaos::cocycle::random_sample;
use xpchaos::{CocycleFamily, GroupElement, LengthCocycle};

fn main() -> xpchaos::Result<()> {
    let c = LengthCocycle::build(CocycleFamily::Z2mWord { rank: 2, m: 3 })?;
    let g = GroupElement::Tuple(vec![2, 5]);
    let h = GroupElement::Tuple(vec![3, 4]);
    println!("psi(g) = {}, psi(h) = {}", c.psi(&g), c.psi(&h));
    println!(
        "<b(g), b(h)>: closed form {}, from lengths {}",
        c.gromov_form_exact(&g, &h)?,
        c.gromov_defining_exact(&g, &h)?
    );

    let basis = c.basis_for_element(&g)?;
    println!("basis vectors seen by g: {}", basis.iter().map(|u| u.to_string()).collect::<Vec<_>>().join(" "));
    println!("sum of squared pairings {} = psi(g)", c.completeness_sum(&g)?);

    let free = LengthCocycle::build(CocycleFamily::Free { rank: 2 })?;
    let slice = free.basis_slice(3)?;
    let gram = free.gram_exact(&slice)?;
    let off = gram
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().filter(move |&(j, x)| *x != ((i == j) as i64).into()))
        .count();
    println!("F_2 basis slice of {} vectors, {} off-identity Gram entries", slice.len(), off);

    for family in CocycleFamily::all_builtin(2) {
        let c = LengthCocycle::build(family.clone())?;
        let sample = random_sample(&c, 12, 7)?;
        let r = c.negativity_check(&sample, &[0.1, 1.0, 10.0], 7)?;
        let worst = r.min_eigenvalues.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
        println!("{:<40} gap {:<5} min kernel eigenvalue {worst:.3e} {}", family.to_string(), c.gap(), if r.pass { "ok" } else { "FAIL" });
    }
    Ok(())
}
