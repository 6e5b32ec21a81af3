use cfchroma::generators::gen_quad;
use cfchroma::{chi_cf, wchi_cf};

fn main() -> cfchroma::Result<()> {
    for m in 4..=8 {
        let s = gen_quad(m)?;
        println!(
            "m={m}: {} edges, chi_cf={:?}, wchi_cf={:?}",
            s.num_edges(),
            chi_cf(&s)?,
            wchi_cf(&s)?
        );
    }
    Ok(())
}
