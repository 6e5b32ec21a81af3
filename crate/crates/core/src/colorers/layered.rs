//! Block-by-block weak extension along a layering of the ground set.
//!
//! A layering orders disjoint vertex blocks and sends each edge to a block so
//! that the edge lives in its block and earlier ones, with at most `spill`
//! vertices in earlier blocks. Blocks are extended one at a time; everything
//! in earlier blocks is treated as precolored (colored or not), so a block's
//! edges see at most `k + spill` precolored points.

use serde::{Deserialize, Serialize};

use super::ind0::{check_params, run, Ind0Certificate};
use crate::coloring::{is_weak_cf, PartialColoring};
use crate::error::{Error, Result};
use crate::solver::{ExtensionProblem, Mode};
use crate::system::SetSystem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayeringCertificate {
    pub blocks: Vec<Vec<usize>>,
    /// Block of every edge.
    pub edge_block: Vec<usize>,
    pub spill: usize,
}

impl LayeringCertificate {
    pub fn validate(&self, system: &SetSystem) -> Result<()> {
        let bad = |msg: String| Err(Error::CertificateRejected(msg));
        let n = system.ground_size();
        let mut block_of = vec![usize::MAX; n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &v in block {
                if v >= n {
                    return Err(Error::VertexOutOfRange {
                        vertex: v,
                        ground_size: n,
                    });
                }
                if block_of[v] != usize::MAX {
                    return bad(format!("vertex {v} lies in blocks {} and {b}", block_of[v]));
                }
                block_of[v] = b;
            }
        }
        if let Some(v) = block_of.iter().position(|&b| b == usize::MAX) {
            return bad(format!("vertex {v} is in no block"));
        }
        if self.edge_block.len() != system.num_edges() {
            return bad(format!(
                "{} edge assignments for {} edges",
                self.edge_block.len(),
                system.num_edges()
            ));
        }
        for (i, (e, &b)) in system.edges().iter().zip(&self.edge_block).enumerate() {
            if b >= self.blocks.len() {
                return bad(format!("edge {i} assigned to missing block {b}"));
            }
            if e.iter().any(|&v| block_of[v] > b) {
                return bad(format!("edge {i} reaches past its block {b}"));
            }
            let earlier = e.iter().filter(|&&v| block_of[v] < b).count();
            if earlier > self.spill {
                return Err(Error::SpillBoundViolated {
                    edge: i,
                    found: earlier,
                    bound: self.spill,
                });
            }
        }
        Ok(())
    }

    pub fn edges_of(&self, block: usize) -> Vec<usize> {
        (0..self.edge_block.len())
            .filter(|&i| self.edge_block[i] == block)
            .collect()
    }
}

/// `⌊((m+1)(d−1)+k+1)/2⌋ + 1`: enough colors for layerings with `m + 1`
/// blocks where block `j` has spill at most `j(d−1)`.
pub fn stepping_up_palette(m: usize, d: usize, k: usize) -> usize {
    ((m + 1) * d.saturating_sub(1) + k).div_ceil(2) + 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockReport {
    pub block: usize,
    pub edges: Vec<usize>,
    /// Largest number of precolored points on an edge of this block.
    pub budget: usize,
    pub certificate: Ind0Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayeredOutcome {
    pub coloring: PartialColoring,
    pub blocks: Vec<BlockReport>,
}

pub fn layered_extend(
    problem: &ExtensionProblem,
    layering: &LayeringCertificate,
    d: usize,
) -> Result<LayeredOutcome> {
    if problem.mode != Mode::Weak {
        return Err(Error::InvalidParams(
            "layered extension works in weak mode only".into(),
        ));
    }
    problem.validate()?;
    let system = &problem.system;
    layering.validate(system)?;
    let x = problem.palette();
    let mut frozen = vec![false; system.ground_size()];
    problem.fixed.domain().for_each(|v| frozen[v] = true);
    let mut g = problem.fixed.clone();
    let mut reports = Vec::new();
    for (b, block) in layering.blocks.iter().enumerate() {
        let ids = layering.edges_of(b);
        if !ids.is_empty() {
            let wrap = |source: Error| Error::InBlock {
                context: "layered extension",
                block: b,
                source: Box::new(source),
            };
            let local = SetSystem::new(
                system.ground_size(),
                ids.iter().map(|&i| system.edges()[i].clone()).collect(),
            )?;
            let budget = local
                .edges()
                .iter()
                .map(|e| e.iter().filter(|&&v| frozen[v]).count())
                .max()
                .unwrap_or(0);
            check_params(&local, x, d, budget).map_err(wrap)?;
            let (next, steps) = run(&local, &g, &frozen, x, d, &ids).map_err(wrap)?;
            g = next;
            reports.push(BlockReport {
                block: b,
                edges: ids,
                budget,
                certificate: Ind0Certificate {
                    x,
                    d,
                    k: budget,
                    steps,
                },
            });
        }
        block.iter().for_each(|&v| frozen[v] = true);
    }
    if let Some(e) = is_weak_cf(system, &g)?.first_violation() {
        return Err(Error::CertificateRejected(format!(
            "edge {e} has no unique color"
        )));
    }
    if !g.extends(&problem.fixed) {
        return Err(Error::CertificateRejected(
            "precoloring was overwritten".into(),
        ));
    }
    Ok(LayeredOutcome {
        coloring: g,
        blocks: reports,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayeringFailure {
    /// An edge that can neither join the current block nor wait.
    pub edge: usize,
    pub earlier: usize,
    pub spill: usize,
}

/// Greedy layering. Each block starts from the first unplaced edge and
/// absorbs every unplaced edge that meets it and could not be deferred
/// without exceeding `spill` earlier vertices; the rest wait. Blocks are
/// therefore as small as the closure allows: pairwise disjoint edges get one
/// block each. Vertices on no edge form a final block.
pub fn find_layering(
    system: &SetSystem,
    spill: usize,
) -> std::result::Result<LayeringCertificate, LayeringFailure> {
    let n = system.ground_size();
    let m = system.num_edges();
    let mut placed = vec![false; n];
    let mut edge_block = vec![usize::MAX; m];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let earlier_of = |e: &[usize], placed: &[bool]| e.iter().filter(|&&v| placed[v]).count();

    while let Some(seed) = (0..m).find(|&i| edge_block[i] == usize::MAX) {
        let seed_edge = &system.edges()[seed];
        let earlier = earlier_of(seed_edge, &placed);
        if earlier > spill {
            return Err(LayeringFailure {
                edge: seed,
                earlier,
                spill,
            });
        }
        let b = blocks.len();
        let mut in_block = vec![false; n];
        let mut block = Vec::new();
        let absorb = |e: &[usize], in_block: &mut Vec<bool>, block: &mut Vec<usize>| {
            for &v in e {
                if !placed[v] && !in_block[v] {
                    in_block[v] = true;
                    block.push(v);
                }
            }
        };
        absorb(seed_edge, &mut in_block, &mut block);
        edge_block[seed] = b;
        loop {
            let mut grew = false;
            for (i, e) in system.edges().iter().enumerate() {
                if edge_block[i] != usize::MAX {
                    continue;
                }
                if !e.iter().any(|&v| in_block[v]) {
                    continue;
                }
                let behind = e.iter().filter(|&&v| placed[v] || in_block[v]).count();
                let fully_inside = behind == e.len();
                if behind <= spill && !fully_inside {
                    continue;
                }
                let earlier = earlier_of(e, &placed);
                if earlier > spill {
                    return Err(LayeringFailure {
                        edge: i,
                        earlier,
                        spill,
                    });
                }
                absorb(e, &mut in_block, &mut block);
                edge_block[i] = b;
                grew = true;
            }
            if !grew {
                break;
            }
        }
        block.sort_unstable();
        block.iter().for_each(|&v| placed[v] = true);
        blocks.push(block);
    }
    let rest: Vec<usize> = (0..n).filter(|&v| !placed[v]).collect();
    if !rest.is_empty() {
        blocks.push(rest);
    }
    Ok(LayeringCertificate {
        blocks,
        edge_block,
        spill,
    })
}
