//! Builds the precolored grid gadget, checks its structure, and asks whether
//! the precoloring extends to a conflict-free coloring.

use cfchroma::generators::{check_grid_gadget, gen_grid_gadget};
use cfchroma::{feasible_cf, ExtensionProblem, Mode};

fn main() -> cfchroma::Result<()> {
    let (rows, cols) = (4, 6);
    let g = gen_grid_gadget(rows, cols)?;
    let check = check_grid_gadget(&g.system, &g.fixed, rows, cols)?;
    println!(
        "{} lines, {} precolored points, structure ok: {}",
        check.lines,
        check.c_points,
        check.passed()
    );

    let problem = ExtensionProblem::new(g.system, g.fixed, Mode::Strict);
    let result = feasible_cf(&problem)?;
    println!(
        "extension with 3 colors: {:?} after {} nodes",
        result.verdict, result.stats.nodes
    );
    Ok(())
}
