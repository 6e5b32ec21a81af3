//! Weak extension of a precoloring on a `d`-almost disjoint system with
//! `x` colors, when every edge meets the precolored set `C` in at most
//! `k ≤ 2x − d − 1` points.
//!
//! Edges are handled in input order. An edge that already has a unique color
//! is left alone. Otherwise some color `j` is absent from it (it carries at
//! most `k + d < 2x` colored points), and one new vertex gets `j`. The vertex
//! is the smallest one outside `C`, outside every earlier edge, and outside
//! every later edge that already holds `d` new points; this keeps earlier
//! edges untouched and every later edge at no more than `d` new points.

use serde::Serialize;

use crate::coloring::{is_weak_cf, PartialColoring};
use crate::error::{Error, Result};
use crate::solver::{ExtensionProblem, Mode};
use crate::system::{ADParams, SetSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "action", rename_all = "lowercase")]
pub enum StepAction {
    Kept { color: usize },
    Added { vertex: usize, color: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Ind0Step {
    pub edge: usize,
    #[serde(flatten)]
    pub action: StepAction,
    /// Most new points on any later edge once this step is done.
    pub max_new_later: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ind0Certificate {
    pub x: usize,
    pub d: usize,
    pub k: usize,
    pub steps: Vec<Ind0Step>,
}

impl Ind0Certificate {
    /// Every step left each later edge with at most `d` new points.
    pub fn invariant_holds(&self) -> bool {
        self.steps.iter().all(|s| s.max_new_later <= self.d)
    }

    pub fn added(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s.action, StepAction::Added { .. }))
            .count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ind0Outcome {
    pub coloring: PartialColoring,
    pub certificate: Ind0Certificate,
}

pub fn extend_ind0(problem: &ExtensionProblem, d: usize) -> Result<Ind0Outcome> {
    if problem.mode != Mode::Weak {
        return Err(Error::InvalidParams(
            "this extension works in weak mode only".into(),
        ));
    }
    problem.validate()?;
    let x = problem.palette();
    let k = problem.spill_bound.unwrap_or_else(|| problem.spill());
    check_params(&problem.system, x, d, k)?;
    let mut frozen = vec![false; problem.system.ground_size()];
    problem.fixed.domain().for_each(|v| frozen[v] = true);
    let labels: Vec<usize> = (0..problem.system.num_edges()).collect();
    let (coloring, steps) = run(&problem.system, &problem.fixed, &frozen, x, d, &labels)?;
    Ok(Ind0Outcome {
        coloring,
        certificate: Ind0Certificate { x, d, k, steps },
    })
}

pub(super) fn check_params(system: &SetSystem, x: usize, d: usize, k: usize) -> Result<()> {
    if d == 0 || 2 * x <= d {
        return Err(Error::InvalidParams(format!(
            "need d >= 1 and 2x > d, got x={x}, d={d}"
        )));
    }
    if k + d + 1 > 2 * x {
        return Err(Error::InvalidParams(format!(
            "budget k={k} exceeds 2x-d-1={} for x={x}, d={d}",
            2 * x - d - 1
        )));
    }
    let ad = system.is_almost_disjoint(ADParams::pairwise(d))?;
    if !ad.holds {
        return Err(Error::InvalidParams(format!(
            "system is not {d}-almost disjoint (edges {:?})",
            ad.witness.unwrap_or_default()
        )));
    }
    Ok(())
}

/// Core recursion. `frozen` marks `C`: those vertices are never newly
/// colored. `labels` names edges in errors and certificates.
pub(super) fn run(
    system: &SetSystem,
    start: &PartialColoring,
    frozen: &[bool],
    x: usize,
    d: usize,
    labels: &[usize],
) -> Result<(PartialColoring, Vec<Ind0Step>)> {
    let inc = system.incidence();
    let mut g = start.clone();
    let mut new_count = vec![0usize; system.num_edges()];
    let mut steps = Vec::with_capacity(system.num_edges());
    for (z, edge) in system.edges().iter().enumerate() {
        let mut mult = vec![0usize; x];
        edge.iter()
            .filter_map(|&v| g.get(v))
            .for_each(|c| mult[c] += 1);
        let action = if let Some(color) = mult.iter().position(|&n| n == 1) {
            StepAction::Kept { color }
        } else {
            let color = mult.iter().position(|&n| n == 0).ok_or_else(|| {
                Error::CertificateRejected(format!(
                    "edge {} carries every color at least twice",
                    labels[z]
                ))
            })?;
            let vertex = edge
                .iter()
                .copied()
                .find(|&v| {
                    !frozen[v]
                        && !g.is_assigned(v)
                        && inc[v]
                            .iter()
                            .all(|&e| e == z || (e > z && new_count[e] < d))
                })
                .ok_or(Error::VertexPoolExhausted { edge: labels[z] })?;
            g.assign(vertex, color)?;
            inc[vertex].iter().for_each(|&e| new_count[e] += 1);
            StepAction::Added { vertex, color }
        };
        let max_new_later = new_count[z + 1..].iter().copied().max().unwrap_or(0);
        debug_assert!(max_new_later <= d, "later edge above {d} new points");
        steps.push(Ind0Step {
            edge: labels[z],
            action,
            max_new_later,
        });
    }
    let report = is_weak_cf(system, &g)?;
    if let Some(e) = report.first_violation() {
        return Err(Error::CertificateRejected(format!(
            "edge {} has no unique color",
            labels[e]
        )));
    }
    if let Some(v) = g.domain().find(|&v| frozen[v] && !start.is_assigned(v)) {
        return Err(Error::CertificateRejected(format!(
            "precolored-set vertex {v} was colored"
        )));
    }
    Ok((g, steps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disjoint_edges_one_color() {
        let s = SetSystem::new(6, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        let p = ExtensionProblem::free(s, 1, Mode::Weak);
        let out = extend_ind0(&p, 1).unwrap();
        assert_eq!(out.coloring.assignment().clone(), [(0, 0), (3, 0)].into());
        assert!(out.certificate.invariant_holds());
        assert_eq!(out.certificate.added(), 2);
    }

    #[test]
    fn satisfied_edge_is_kept() {
        let s = SetSystem::new(7, vec![vec![0, 1, 2, 3], vec![3, 4, 5, 6]]).unwrap();
        let fixed = PartialColoring::from_map(2, [(0, 1)].into()).unwrap();
        let p = ExtensionProblem::new(s, fixed, Mode::Weak).with_spill_bound(1);
        let out = extend_ind0(&p, 2).unwrap();
        assert_eq!(
            out.certificate.steps[0].action,
            StepAction::Kept { color: 1 }
        );
        // vertex 3 lies on the processed first edge, so the second edge uses 4
        assert_eq!(
            out.certificate.steps[1].action,
            StepAction::Added {
                vertex: 4,
                color: 0
            }
        );
    }

    #[test]
    fn budget_above_bound_rejected() {
        let s = SetSystem::new(4, vec![vec![0, 1, 2, 3]]).unwrap();
        let p = ExtensionProblem::free(s.clone(), 2, Mode::Weak);
        assert_eq!(extend_ind0(&p, 2).unwrap().coloring.get(0), Some(0));
        let fixed = PartialColoring::from_map(2, [(0, 0), (1, 0)].into()).unwrap();
        let p = ExtensionProblem::new(s, fixed, Mode::Weak).with_spill_bound(2);
        // k = 2 is above 2x-d-1 = 1
        assert!(matches!(extend_ind0(&p, 2), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn preconditions() {
        let s = SetSystem::new(4, vec![vec![0, 1, 2], vec![0, 1, 3]]).unwrap();
        let p = ExtensionProblem::free(s.clone(), 2, Mode::Weak);
        assert!(extend_ind0(&p, 2).is_err());
        assert!(extend_ind0(&p, 3).is_ok());
        assert!(extend_ind0(&ExtensionProblem::free(s, 2, Mode::Strict), 3).is_err());
    }

    #[test]
    fn pool_exhaustion_is_named() {
        // a triangle: the last edge has no private vertex left
        let s = SetSystem::new(3, vec![vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap();
        let p = ExtensionProblem::free(s, 1, Mode::Weak);
        assert!(matches!(extend_ind0(&p, 1), Err(Error::InvalidParams(_))));
        let p = ExtensionProblem::free(
            SetSystem::new(3, vec![vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap(),
            2,
            Mode::Weak,
        );
        assert!(matches!(
            extend_ind0(&p, 2),
            Err(Error::VertexPoolExhausted { edge: 2 })
        ));
    }
}
