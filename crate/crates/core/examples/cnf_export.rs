//! Writes the DIMACS encoding of "AG(2,3) has a weak conflict-free
//! 2-coloring" to stdout.

use cfchroma::generators::gen_affine_lines;
use cfchroma::solver::export_cnf;
use cfchroma::{ExtensionProblem, Mode};

fn main() -> cfchroma::Result<()> {
    let problem = ExtensionProblem::free(gen_affine_lines(3)?, 2, Mode::Weak);
    let (cnf, layout) = export_cnf(&problem)?;
    eprintln!("x(v=0, c=1) is variable {}", layout.var(0, 1));
    print!("{}", cnf.to_dimacs());
    Ok(())
}
