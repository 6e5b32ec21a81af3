//! Coloring through a witness set: find `X` meeting every edge in exactly
//! `tau` points, split the trace on `X` into disjoint remainders, and give
//! each remainder distinct colors. Every vertex off `X` gets color 0.
//!
//! For each edge `A` the colors missing from `I_c(A)` are then confined to
//! `{0} ∪ c[F(A ∩ X)]`, provided the colors on `F` are distinct; the
//! containment is checked on the result rather than assumed.

use std::collections::BTreeSet;

use serde::Serialize;

use super::ed_decompose;
use crate::coloring::{unique_color_set, PartialColoring};
use crate::error::{Error, Result};
use crate::system::SetSystem;

/// Greedy witness search in edge order: each edge is topped up to `tau`
/// points with its smallest vertices that keep every edge at `tau` or fewer.
pub fn find_witness(system: &SetSystem, tau: usize) -> Result<Vec<usize>> {
    let inc = system.incidence();
    let mut count = vec![0usize; system.num_edges()];
    let mut chosen = vec![false; system.ground_size()];
    for (i, e) in system.edges().iter().enumerate() {
        while count[i] < tau {
            let v = e
                .iter()
                .copied()
                .find(|&v| !chosen[v] && inc[v].iter().all(|&f| count[f] < tau))
                .ok_or(Error::NoWitness { tau, edge: i })?;
            chosen[v] = true;
            inc[v].iter().for_each(|&f| count[f] += 1);
        }
    }
    let x: Vec<usize> = (0..system.ground_size()).filter(|&v| chosen[v]).collect();
    if !system.is_witness(&x, tau)? {
        return Err(Error::CertificateRejected(
            "greedy witness miscounted".into(),
        ));
    }
    Ok(x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractReport {
    pub edge: usize,
    /// `palette ∖ I_c(A)`.
    pub missing: Vec<usize>,
    /// `{0} ∪ c[F(A ∩ X)]`.
    pub allowed: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReduction {
    pub witness: Vec<usize>,
    /// `F(A ∩ X)` for every original edge, in original vertex numbering.
    pub removal: Vec<Vec<usize>>,
    pub coloring: PartialColoring,
    pub edges: Vec<ContractReport>,
}

pub fn reduce_via_witness(system: &SetSystem, tau: usize) -> Result<WitnessReduction> {
    if tau < 2 {
        return Err(Error::InvalidParams(format!(
            "witness size must be at least 2, got {tau}"
        )));
    }
    let witness = find_witness(system, tau)?;
    let trace = system.restrict(&witness)?;
    let ed = ed_decompose(&trace.system)?;
    let back = |vs: &[usize]| -> Vec<usize> { vs.iter().map(|&v| trace.vertex_map[v]).collect() };

    let mut c = PartialColoring::new(tau);
    for t in 0..trace.system.num_edges() {
        let f = back(&ed.removal[t]);
        let used: BTreeSet<usize> = f
            .iter()
            .map(|&v| c.get(v).expect("claimed earlier"))
            .collect();
        let mut available: Vec<usize> = (1..tau).filter(|col| !used.contains(col)).collect();
        if !used.contains(&0) {
            available.push(0);
        }
        for (i, v) in back(&ed.remainder(&trace.system, t))
            .into_iter()
            .enumerate()
        {
            c.assign(v, available.get(i).copied().unwrap_or(0))?;
        }
    }
    for v in 0..system.ground_size() {
        if !c.is_assigned(v) {
            c.assign(v, 0)?;
        }
    }

    let mut removal = Vec::with_capacity(system.num_edges());
    let mut edges = Vec::with_capacity(system.num_edges());
    for i in 0..system.num_edges() {
        let t = trace.edge_map[i].expect("witness traces have tau >= 2 points");
        let f = back(&ed.removal[t]);
        let mut allowed: BTreeSet<usize> = f.iter().map(|&v| c.get(v).expect("total")).collect();
        allowed.insert(0);
        let unique = unique_color_set(system, &c, i)?;
        let missing: Vec<usize> = (0..tau).filter(|col| !unique.contains(col)).collect();
        if let Some(col) = missing.iter().find(|col| !allowed.contains(col)) {
            return Err(Error::CertificateRejected(format!(
                "edge {i} misses color {col}, outside {{0}} and the colors of its removal set"
            )));
        }
        removal.push(f);
        edges.push(ContractReport {
            edge: i,
            missing,
            allowed: allowed.into_iter().collect(),
        });
    }
    Ok(WitnessReduction {
        witness,
        removal,
        coloring: c,
        edges,
    })
}
