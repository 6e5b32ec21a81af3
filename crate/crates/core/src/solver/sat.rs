//! Extension problems through the CNF encoding and a CDCL solver.

use std::time::Instant;

use varisat::{ExtendFormula, Lit, Solver};

use super::{
    decode_model, export_cnf_rule, EdgeRule, ExtensionProblem, SolveResult, Stats, Verdict,
};
use crate::error::{Error, Result};

pub(super) fn solve(problem: &ExtensionProblem, rule: EdgeRule) -> Result<SolveResult> {
    let start = Instant::now();
    let (cnf, layout) = export_cnf_rule(problem, rule)?;
    let mut solver = Solver::new();
    for clause in &cnf.clauses {
        let lits: Vec<Lit> = clause
            .iter()
            .map(|&l| Lit::from_dimacs(l as isize))
            .collect();
        solver.add_clause(&lits);
    }
    let sat = solver
        .solve()
        .map_err(|e| Error::InvalidParams(format!("SAT solver failed: {e}")))?;
    let witness = if sat {
        let model: Vec<i64> = solver
            .model()
            .unwrap_or_default()
            .iter()
            .map(|l| l.to_dimacs() as i64)
            .collect();
        Some(decode_model(&layout, &problem.fixed, &model)?)
    } else {
        None
    };
    Ok(SolveResult {
        verdict: if sat {
            Verdict::Feasible
        } else {
            Verdict::Infeasible
        },
        witness,
        optimum: None,
        stats: Stats {
            nodes: 0,
            complete: true,
            elapsed: start.elapsed(),
        },
    })
}
