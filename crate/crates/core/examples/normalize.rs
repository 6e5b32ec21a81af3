use cfchroma::solver::normalize_extension_witness;
use cfchroma::{ExtensionProblem, Mode, PartialColoring, SetSystem};

fn main() -> cfchroma::Result<()> {
    let s = SetSystem::new(6, vec![vec![0, 1, 2], vec![2, 3, 4], vec![4, 5, 0]])?;
    let mut fixed = PartialColoring::new(3);
    fixed.assign(0, 1)?;
    fixed.assign(2, 2)?;
    let problem = ExtensionProblem::new(s, fixed, Mode::Weak).with_spill_bound(2);
    let norm = normalize_extension_witness(&problem)?;
    println!("edges: {:?}", norm.problem.system.edges());
    println!("blocks: {:?}", norm.blocks);
    println!("origin: {:?}", norm.origin);
    Ok(())
}
