//! Colors the product gadget at random and looks for a homogeneous `Y`
//! whose edge then has no unique color.

use cfchroma::generators::{gen_product_gadget, refute_product_coloring, ProductParams};
use cfchroma::PartialColoring;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> cfchroma::Result<()> {
    let params = ProductParams::new(6, 3, 1, 3);
    let gadget = gen_product_gadget(&params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for round in 0..5 {
        let colors: Vec<usize> = (0..gadget.ground_size())
            .map(|_| rng.gen_range(0..2))
            .collect();
        let f = PartialColoring::from_slice(2, &colors)?;
        match refute_product_coloring(&gadget, &params, &f)? {
            Some(r) => println!(
                "round {round}: Y={:?} edge {} multiplicities {:?}",
                r.y, r.edge, r.multiplicities
            ),
            None => println!("round {round}: no homogeneous Y"),
        }
    }
    Ok(())
}
