//! Chromatic numbers of the line systems of AG(2, q) for small primes.

use cfchroma::generators::gen_affine_lines;
use cfchroma::solver::{chi_cf_with, chi_with, wchi_cf_with};
use cfchroma::SolverConfig;

fn main() -> cfchroma::Result<()> {
    let config = SolverConfig::sat();
    for q in [2, 3, 5] {
        let s = gen_affine_lines(q)?;
        println!(
            "AG(2,{q}): {} points, {} lines, chi={:?} chi_cf={:?} wchi_cf={:?}",
            s.ground_size(),
            s.num_edges(),
            chi_with(&s, &config)?,
            chi_cf_with(&s, &config)?,
            wchi_cf_with(&s, &config)?,
        );
    }
    Ok(())
}
