//! Partial colorings and the conflict-free verifiers.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::system::SetSystem;

/// A palette size together with a partial map vertex → color.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawColoring")]
pub struct PartialColoring {
    palette: usize,
    assignment: BTreeMap<usize, usize>,
}

#[derive(Deserialize)]
struct RawColoring {
    palette: usize,
    #[serde(default)]
    assignment: BTreeMap<usize, usize>,
}

impl TryFrom<RawColoring> for PartialColoring {
    type Error = Error;

    fn try_from(raw: RawColoring) -> Result<Self> {
        PartialColoring::from_map(raw.palette, raw.assignment)
    }
}

impl PartialColoring {
    pub fn new(palette: usize) -> Self {
        PartialColoring {
            palette,
            assignment: BTreeMap::new(),
        }
    }

    pub fn from_map(palette: usize, assignment: BTreeMap<usize, usize>) -> Result<Self> {
        if let Some((_, &c)) = assignment.iter().find(|(_, &c)| c >= palette) {
            return Err(Error::ColorOutOfRange { color: c, palette });
        }
        Ok(PartialColoring {
            palette,
            assignment,
        })
    }

    /// Total coloring of `0..colors.len()`.
    pub fn from_slice(palette: usize, colors: &[usize]) -> Result<Self> {
        Self::from_map(palette, colors.iter().copied().enumerate().collect())
    }

    pub fn palette(&self) -> usize {
        self.palette
    }

    pub fn assignment(&self) -> &BTreeMap<usize, usize> {
        &self.assignment
    }

    pub fn get(&self, v: usize) -> Option<usize> {
        self.assignment.get(&v).copied()
    }

    pub fn is_assigned(&self, v: usize) -> bool {
        self.assignment.contains_key(&v)
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn assign(&mut self, v: usize, color: usize) -> Result<()> {
        if color >= self.palette {
            return Err(Error::ColorOutOfRange {
                color,
                palette: self.palette,
            });
        }
        self.assignment.insert(v, color);
        Ok(())
    }

    pub fn unassign(&mut self, v: usize) -> Option<usize> {
        self.assignment.remove(&v)
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.assignment.keys().copied()
    }

    /// Same palette size, different assignment.
    pub fn with_palette(&self, palette: usize) -> Result<Self> {
        Self::from_map(palette, self.assignment.clone())
    }

    /// `self ⊇ other` as partial functions.
    pub fn extends(&self, other: &PartialColoring) -> bool {
        other
            .assignment
            .iter()
            .all(|(v, c)| self.assignment.get(v) == Some(c))
    }

    /// Colors as a dense vector over `0..n`.
    pub fn to_dense(&self, n: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; n];
        for (&v, &c) in &self.assignment {
            if v < n {
                out[v] = Some(c);
            }
        }
        out
    }

    pub fn check_domain(&self, ground_size: usize) -> Result<()> {
        match self.assignment.keys().find(|&&v| v >= ground_size) {
            Some(&vertex) => Err(Error::VertexOutOfRange {
                vertex,
                ground_size,
            }),
            None => Ok(()),
        }
    }
}

/// Color multiplicities on one edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeReport {
    pub edge: usize,
    pub multiplicities: BTreeMap<usize, usize>,
    /// Colors of multiplicity exactly one, i.e. `I_f(A)`.
    pub unique: BTreeSet<usize>,
    pub satisfied: bool,
}

/// Per-edge verification certificate for a (weak) conflict-free coloring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CfReport {
    pub weak: bool,
    pub edges: Vec<EdgeReport>,
}

impl CfReport {
    pub fn passed(&self) -> bool {
        self.edges.iter().all(|e| e.satisfied)
    }

    pub fn violations(&self) -> impl Iterator<Item = &EdgeReport> {
        self.edges.iter().filter(|e| !e.satisfied)
    }

    pub fn first_violation(&self) -> Option<usize> {
        self.violations().next().map(|e| e.edge)
    }
}

fn edge_report(system: &SetSystem, f: &PartialColoring, edge: usize) -> EdgeReport {
    let mut multiplicities = BTreeMap::new();
    for &v in &system.edges()[edge] {
        if let Some(c) = f.get(v) {
            *multiplicities.entry(c).or_insert(0) += 1;
        }
    }
    let unique: BTreeSet<usize> = multiplicities
        .iter()
        .filter(|(_, &m)| m == 1)
        .map(|(&c, _)| c)
        .collect();
    EdgeReport {
        edge,
        satisfied: !unique.is_empty(),
        multiplicities,
        unique,
    }
}

/// `I_f(A)`: the colors assigned to exactly one vertex of the edge.
pub fn unique_color_set(
    system: &SetSystem,
    f: &PartialColoring,
    edge_index: usize,
) -> Result<BTreeSet<usize>> {
    system.edge(edge_index)?;
    Ok(edge_report(system, f, edge_index).unique)
}

fn check_palette(system: &SetSystem, f: &PartialColoring) -> Result<()> {
    if f.palette() == 0 {
        return Err(Error::EmptyPalette);
    }
    f.check_domain(system.ground_size())
}

/// Conflict-free verification; `f` must color every vertex lying on an edge.
pub fn is_cf(system: &SetSystem, f: &PartialColoring) -> Result<CfReport> {
    check_palette(system, f)?;
    if let Some(vertex) = system.covered().into_iter().find(|&v| !f.is_assigned(v)) {
        return Err(Error::NotTotal { vertex });
    }
    Ok(CfReport {
        weak: false,
        edges: (0..system.num_edges())
            .map(|i| edge_report(system, f, i))
            .collect(),
    })
}

/// Weak conflict-free verification; uncolored vertices never count.
pub fn is_weak_cf(system: &SetSystem, f: &PartialColoring) -> Result<CfReport> {
    check_palette(system, f)?;
    Ok(CfReport {
        weak: true,
        edges: (0..system.num_edges())
            .map(|i| edge_report(system, f, i))
            .collect(),
    })
}

/// Proper coloring check: every edge sees at least two colors.
pub fn is_proper(system: &SetSystem, f: &PartialColoring) -> Result<bool> {
    check_palette(system, f)?;
    if let Some(vertex) = system.covered().into_iter().find(|&v| !f.is_assigned(v)) {
        return Err(Error::NotTotal { vertex });
    }
    Ok(system.edges().iter().all(|e| {
        let first = f.get(e[0]);
        e.iter().any(|&v| f.get(v) != first)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(n: usize, edges: &[&[usize]]) -> SetSystem {
        SetSystem::new(n, edges.iter().map(|e| e.to_vec()).collect()).unwrap()
    }

    #[test]
    fn unique_colors() {
        let s = sys(4, &[&[0, 1, 2], &[0, 1], &[0, 1, 2, 3]]);
        let inj = PartialColoring::from_slice(3, &[0, 1, 2]).unwrap();
        assert_eq!(
            unique_color_set(&s, &inj, 0).unwrap(),
            BTreeSet::from([0, 1, 2])
        );
        let constant = PartialColoring::from_slice(1, &[0, 0]).unwrap();
        assert!(unique_color_set(&s, &constant, 1).unwrap().is_empty());
        let f = PartialColoring::from_slice(3, &[0, 0, 1, 2]).unwrap();
        assert_eq!(unique_color_set(&s, &f, 2).unwrap(), BTreeSet::from([1, 2]));
        assert!(matches!(
            unique_color_set(&s, &f, 3),
            Err(Error::InvalidEdgeIndex { index: 3, count: 3 })
        ));
    }

    #[test]
    fn cf_reports() {
        let disjoint = sys(4, &[&[0, 1], &[2, 3]]);
        let f = PartialColoring::from_slice(4, &[0, 1, 2, 3]).unwrap();
        assert!(is_cf(&disjoint, &f).unwrap().passed());

        let k3 = sys(3, &[&[0, 1], &[0, 2], &[1, 2]]);
        let g = PartialColoring::from_slice(2, &[0, 0, 1]).unwrap();
        let rep = is_cf(&k3, &g).unwrap();
        assert!(!rep.passed());
        assert_eq!(rep.first_violation(), Some(0));

        let mut partial = PartialColoring::new(2);
        partial.assign(0, 1).unwrap();
        assert!(matches!(
            is_cf(&k3, &partial),
            Err(Error::NotTotal { vertex: 1 })
        ));
        let weak = is_weak_cf(&k3, &partial).unwrap();
        assert_eq!(weak.edges[0].unique, BTreeSet::from([1]));
        assert!(!weak.edges[2].satisfied);
    }

    #[test]
    fn coloring_validation() {
        assert!(PartialColoring::from_slice(2, &[0, 2]).is_err());
        let mut f = PartialColoring::new(2);
        assert!(f.assign(0, 5).is_err());
        f.assign(7, 1).unwrap();
        let s = sys(3, &[&[0, 1]]);
        assert!(is_weak_cf(&s, &f).is_err());
        assert!(matches!(
            is_weak_cf(&s, &PartialColoring::new(0)),
            Err(Error::EmptyPalette)
        ));
        let json = r#"{"palette": 2, "assignment": {"0": 3}}"#;
        assert!(serde_json::from_str::<PartialColoring>(json).is_err());
        let ok: PartialColoring =
            serde_json::from_str(r#"{"palette": 2, "assignment": {"4": 1}}"#).unwrap();
        assert_eq!(ok.get(4), Some(1));
    }

    #[test]
    fn proper_check() {
        let k3 = sys(3, &[&[0, 1], &[0, 2], &[1, 2]]);
        assert!(is_proper(&k3, &PartialColoring::from_slice(3, &[0, 1, 2]).unwrap()).unwrap());
        assert!(!is_proper(&k3, &PartialColoring::from_slice(2, &[0, 1, 1]).unwrap()).unwrap());
    }
}
