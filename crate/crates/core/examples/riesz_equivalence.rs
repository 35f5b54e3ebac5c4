//! ||f||_p against the Riesz square function on Z_6^2 and the torus.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use xpchaos::harness::{riesz_equivalence_ratio, sample_element, Ensemble};
use xpchaos::{CocycleFamily, GroupDescriptor, LengthCocycle};

fn main() -> xpchaos::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let z6 = LengthCocycle::build(CocycleFamily::Z2mWord { rank: 2, m: 3 })?;
    let f = sample_element(z6.group(), Ensemble::Gaussian, &mut rng)?;
    let torus = LengthCocycle::build(CocycleFamily::ZnWord { rank: 2 })?;
    let g = sample_element(&GroupDescriptor::Torus { rank: 2, bound: 2 }, Ensemble::Sparse { size: 6 }, &mut rng)?;
    for p in [1.5, 2.0, 4.0, 8.0] {
        let a = riesz_equivalence_ratio(&f, p, &z6)?;
        let b = riesz_equivalence_ratio(&g, p, &torus)?;
        println!("p={p}: Z_6^2 ratio {:.6}, torus ratio {:.6}", a.ratio, b.ratio);
    }
    Ok(())
}
