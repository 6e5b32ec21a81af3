use cfchroma::generators::{gen_affine_lines, gen_lift0, LiftOptions};
use cfchroma::{ADParams, SetSystem};

fn main() -> cfchroma::Result<()> {
    let triangle = SetSystem::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]])?;
    let plane = gen_affine_lines(2)?;
    for (name, base) in [("K3", triangle), ("AG(2,2)", plane)] {
        for t in 1..=2 {
            let lifted = gen_lift0(&base, t, LiftOptions::default())?;
            let ad = lifted.is_almost_disjoint(ADParams::pairwise(2 * t))?;
            println!(
                "{name} t={t}: {} vertices, {} edges, {}-almost disjoint: {}",
                lifted.ground_size(),
                lifted.num_edges(),
                2 * t,
                ad.holds
            );
        }
    }
    Ok(())
}
