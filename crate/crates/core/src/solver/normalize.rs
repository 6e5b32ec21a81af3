//! Blow-up of an extension problem into one whose fixed domain splits into
//! pairwise disjoint `k`-blocks, one per edge.
//!
//! A fixed vertex lying on several edges is split into one copy per incident
//! edge (the copy keeps the original color), and every edge's block is padded
//! with fresh fixed vertices up to size `k`. Padding lies on no edge, so any
//! solution of the output restricts to a solution of the input and conversely;
//! feasibility is preserved in both directions.

use serde::Serialize;

use super::ExtensionProblem;
use crate::coloring::PartialColoring;
use crate::error::{Error, Result};
use crate::system::SetSystem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalizedExtension {
    pub problem: ExtensionProblem,
    /// The block `Y_i ⊇ A_i ∩ dom(fixed)` of each edge, all of size `k`.
    pub blocks: Vec<Vec<usize>>,
    /// Original vertex of each new vertex; `None` for padding.
    pub origin: Vec<Option<usize>>,
}

pub fn normalize_extension_witness(problem: &ExtensionProblem) -> Result<NormalizedExtension> {
    let k = problem
        .spill_bound
        .ok_or_else(|| Error::InvalidParams("normalization needs a declared spill bound".into()))?;
    problem.validate()?;
    let system = &problem.system;
    let n = system.ground_size();
    let inc = system.incidence();
    let mut origin: Vec<Option<usize>> = (0..n).map(Some).collect();
    let mut fixed = PartialColoring::new(problem.palette());
    let mut edges = system.edges().to_vec();
    let mut blocks = vec![Vec::with_capacity(k); edges.len()];

    for (&y, &c) in problem.fixed.assignment() {
        let on = &inc[y];
        for (nth, &i) in on.iter().enumerate() {
            let copy = if nth == 0 {
                y
            } else {
                origin.push(Some(y));
                origin.len() - 1
            };
            if copy != y {
                let pos = edges[i].iter().position(|&v| v == y).expect("incidence");
                edges[i][pos] = copy;
            }
            fixed.assign(copy, c)?;
            blocks[i].push(copy);
        }
    }
    for block in blocks.iter_mut() {
        while block.len() < k {
            origin.push(None);
            let pad = origin.len() - 1;
            fixed.assign(pad, 0)?;
            block.push(pad);
        }
        block.sort_unstable();
    }

    let mut meta = system.meta().clone();
    meta.insert(
        "normalized".into(),
        serde_json::json!({ "spill_bound": k, "added_vertices": origin.len() - n }),
    );
    let system = SetSystem::new(origin.len(), edges)?.with_meta(meta);
    let mut out = ExtensionProblem::new(system, fixed, problem.mode);
    out.spill_bound = Some(k);
    Ok(NormalizedExtension {
        problem: out,
        blocks,
        origin,
    })
}
