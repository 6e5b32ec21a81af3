//! Finite set systems and the structural predicates on them: almost
//! disjointness, transversals and witnesses, traces, essential disjointness.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// Systems on at most this many vertices also get a `u128` mask per edge.
pub const BITSET_THRESHOLD: usize = 128;

/// Default cap on the number of edge tuples examined by a ν-wise check.
pub const DEFAULT_TUPLE_CAP: u128 = 1_000_000;

/// A ground set `0..ground_size` with a list of edges.
///
/// Edges are strictly increasing index lists of size at least two, with no
/// repeated edges. Edge sizes may differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSystem", into = "RawSystem")]
pub struct SetSystem {
    ground_size: usize,
    edges: Vec<Vec<usize>>,
    meta: Map<String, Value>,
}

#[derive(Serialize, Deserialize)]
struct RawSystem {
    ground_size: usize,
    edges: Vec<Vec<usize>>,
    #[serde(default)]
    meta: Map<String, Value>,
}

impl TryFrom<RawSystem> for SetSystem {
    type Error = Error;

    fn try_from(raw: RawSystem) -> Result<Self> {
        let mut system = SetSystem::new(raw.ground_size, raw.edges)?;
        system.meta = raw.meta;
        Ok(system)
    }
}

impl From<SetSystem> for RawSystem {
    fn from(s: SetSystem) -> Self {
        RawSystem {
            ground_size: s.ground_size,
            edges: s.edges,
            meta: s.meta,
        }
    }
}

impl SetSystem {
    /// Normalizes every edge (sort, drop repeated vertices) and drops repeated
    /// edges, keeping the first occurrence.
    pub fn new(ground_size: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for (i, mut edge) in edges.into_iter().enumerate() {
            edge.sort_unstable();
            edge.dedup();
            if let Some(&v) = edge.iter().find(|&&v| v >= ground_size) {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    ground_size,
                });
            }
            if edge.len() < 2 {
                return Err(Error::EdgeTooSmall {
                    edge: i,
                    size: edge.len(),
                });
            }
            if seen.insert(edge.clone()) {
                out.push(edge);
            }
        }
        Ok(SetSystem {
            ground_size,
            edges: out,
            meta: Map::new(),
        })
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> Result<&[usize]> {
        self.edges
            .get(index)
            .map(Vec::as_slice)
            .ok_or(Error::InvalidEdgeIndex {
                index,
                count: self.edges.len(),
            })
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn meta(&self) -> &Map<String, Value> {
        &self.meta
    }

    pub fn meta_mut(&mut self) -> &mut Map<String, Value> {
        &mut self.meta
    }

    pub fn with_meta(mut self, meta: Map<String, Value>) -> Self {
        self.meta = meta;
        self
    }

    /// Provenance tag written by the generators, if any.
    pub fn family(&self) -> Option<&str> {
        self.meta.get("family").and_then(Value::as_str)
    }

    /// Union of all edges, ascending.
    pub fn covered(&self) -> Vec<usize> {
        let mut mark = vec![false; self.ground_size];
        for e in &self.edges {
            for &v in e {
                mark[v] = true;
            }
        }
        (0..self.ground_size).filter(|&v| mark[v]).collect()
    }

    /// Edge indices containing each vertex.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.ground_size];
        for (i, e) in self.edges.iter().enumerate() {
            for &v in e {
                inc[v].push(i);
            }
        }
        inc
    }

    pub fn max_edge_size(&self) -> usize {
        self.edges.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Bitset view of the edges, available for small ground sets.
    pub fn masks(&self) -> Option<Vec<u128>> {
        if self.ground_size > BITSET_THRESHOLD {
            return None;
        }
        Some(
            self.edges
                .iter()
                .map(|e| e.iter().fold(0u128, |m, &v| m | (1u128 << v)))
                .collect(),
        )
    }

    pub(crate) fn membership(&self, vertices: &[usize]) -> Result<Vec<bool>> {
        let mut mark = vec![false; self.ground_size];
        for &v in vertices {
            if v >= self.ground_size {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    ground_size: self.ground_size,
                });
            }
            mark[v] = true;
        }
        Ok(mark)
    }

    /// `(μ,ν)`-almost disjointness with the default tuple cap.
    pub fn is_almost_disjoint(&self, params: ADParams) -> Result<AdCheck> {
        self.is_almost_disjoint_capped(params, DEFAULT_TUPLE_CAP)
    }

    /// Every `ν` distinct edges (pairs when `nu` is absent) share fewer than
    /// `mu` vertices. Checks with `ν > 2` refuse to run past `cap` tuples.
    pub fn is_almost_disjoint_capped(&self, params: ADParams, cap: u128) -> Result<AdCheck> {
        params.validate()?;
        match params.nu {
            None | Some(2) => Ok(self.pairwise_check(params.mu)),
            Some(nu) => {
                let tuples = binomial(self.edges.len() as u128, nu as u128);
                if tuples > cap {
                    return Err(Error::BoundCheckTooLarge { tuples, cap });
                }
                for combo in (0..self.edges.len()).combinations(nu) {
                    let mut common: Vec<usize> = self.edges[combo[0]].clone();
                    for &i in &combo[1..] {
                        common = intersect(&common, &self.edges[i]);
                        if common.len() < params.mu {
                            break;
                        }
                    }
                    if common.len() >= params.mu {
                        return Ok(AdCheck {
                            holds: false,
                            witness: Some(combo),
                        });
                    }
                }
                Ok(AdCheck {
                    holds: true,
                    witness: None,
                })
            }
        }
    }

    fn pairwise_check(&self, mu: usize) -> AdCheck {
        if let Some(masks) = self.masks() {
            for i in 0..masks.len() {
                for j in i + 1..masks.len() {
                    if (masks[i] & masks[j]).count_ones() as usize >= mu {
                        return AdCheck {
                            holds: false,
                            witness: Some(vec![i, j]),
                        };
                    }
                }
            }
            return AdCheck {
                holds: true,
                witness: None,
            };
        }
        // count shared vertices with every later edge through the incidence lists
        let inc = self.incidence();
        let mut shared = vec![0usize; self.edges.len()];
        let mut touched = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            for &v in e {
                for &j in &inc[v] {
                    if j > i {
                        if shared[j] == 0 {
                            touched.push(j);
                        }
                        shared[j] += 1;
                    }
                }
            }
            let mut bad = None;
            for &j in &touched {
                if shared[j] >= mu {
                    bad = Some(bad.map_or(j, |b: usize| b.min(j)));
                }
                shared[j] = 0;
            }
            touched.clear();
            if let Some(j) = bad {
                return AdCheck {
                    holds: false,
                    witness: Some(vec![i, j]),
                };
            }
        }
        AdCheck {
            holds: true,
            witness: None,
        }
    }

    /// `0 < |X ∩ A| < tau` for every edge.
    pub fn is_transversal(&self, x: &[usize], tau: usize) -> Result<bool> {
        let mark = self.membership(x)?;
        Ok(self.edges.iter().all(|e| {
            let n = e.iter().filter(|&&v| mark[v]).count();
            n > 0 && n < tau
        }))
    }

    /// `|X ∩ A| = tau` for every edge.
    pub fn is_witness(&self, x: &[usize], tau: usize) -> Result<bool> {
        let mark = self.membership(x)?;
        Ok(self
            .edges
            .iter()
            .all(|e| e.iter().filter(|&&v| mark[v]).count() == tau))
    }

    /// Trace of the system on `x`, re-indexed to `0..|x|` in ascending order.
    ///
    /// Traces with fewer than two vertices are dropped and counted; traces that
    /// coincide are merged.
    pub fn restrict(&self, x: &[usize]) -> Result<Restriction> {
        if x.is_empty() {
            return Err(Error::InvalidParams(
                "restriction to an empty vertex set".into(),
            ));
        }
        let mark = self.membership(x)?;
        let vertex_map: Vec<usize> = (0..self.ground_size).filter(|&v| mark[v]).collect();
        let mut new_index = vec![usize::MAX; self.ground_size];
        for (i, &v) in vertex_map.iter().enumerate() {
            new_index[v] = i;
        }
        let mut index_of: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut edges = Vec::new();
        let mut edge_map = Vec::with_capacity(self.edges.len());
        let mut dropped = 0;
        for e in &self.edges {
            let trace: Vec<usize> = e
                .iter()
                .filter(|&&v| mark[v])
                .map(|&v| new_index[v])
                .collect();
            if trace.len() < 2 {
                dropped += 1;
                edge_map.push(None);
                continue;
            }
            let next = edges.len();
            let idx = *index_of.entry(trace.clone()).or_insert_with(|| {
                edges.push(trace);
                next
            });
            edge_map.push(Some(idx));
        }
        let mut meta = Map::new();
        meta.insert("family".into(), Value::from("restriction"));
        meta.insert(
            "params".into(),
            serde_json::json!({ "vertices": vertex_map, "dropped_edges": dropped }),
        );
        meta.insert("parent".into(), Value::Object(self.meta.clone()));
        let system = SetSystem {
            ground_size: vertex_map.len(),
            edges,
            meta,
        };
        Ok(Restriction {
            system,
            dropped,
            edge_map,
            vertex_map,
        })
    }

    /// Checks that the remainders `A ∖ F(A)` are pairwise disjoint.
    pub fn verify_ed(&self, ed: &EdDecomposition) -> Result<EdCheck> {
        if ed.removal.len() != self.edges.len() {
            return Err(Error::MalformedDecomposition(format!(
                "{} removal sets for {} edges",
                ed.removal.len(),
                self.edges.len()
            )));
        }
        let mut owner = vec![usize::MAX; self.ground_size];
        for (i, (edge, removed)) in self.edges.iter().zip(&ed.removal).enumerate() {
            if let Some(&v) = removed.iter().find(|v| edge.binary_search(v).is_err()) {
                return Err(Error::MalformedDecomposition(format!(
                    "removal set of edge {i} contains {v}, which is not in the edge"
                )));
            }
            for &v in edge {
                if removed.contains(&v) {
                    continue;
                }
                if owner[v] != usize::MAX {
                    return Ok(EdCheck {
                        disjoint: false,
                        overlap: Some(EdOverlap {
                            first: owner[v],
                            second: i,
                            vertex: v,
                        }),
                    });
                }
                owner[v] = i;
            }
        }
        Ok(EdCheck {
            disjoint: true,
            overlap: None,
        })
    }
}

/// Parameters of `(μ,ν)`-almost disjointness. `nu` is a finite subfamily size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ADParams {
    pub mu: usize,
    pub nu: Option<usize>,
}

impl ADParams {
    pub fn pairwise(mu: usize) -> Self {
        ADParams { mu, nu: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu < 1 {
            return Err(Error::InvalidParams("mu must be at least 1".into()));
        }
        if matches!(self.nu, Some(n) if n < 2) {
            return Err(Error::InvalidParams("nu must be at least 2".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdCheck {
    pub holds: bool,
    /// Edge indices of the first violating tuple.
    pub witness: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    pub system: SetSystem,
    pub dropped: usize,
    /// Original edge index to trace index (`None` when dropped).
    pub edge_map: Vec<Option<usize>>,
    /// New vertex index to original vertex.
    pub vertex_map: Vec<usize>,
}

/// Removal sets `F(A) ⊆ A`, one per edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdDecomposition {
    pub removal: Vec<Vec<usize>>,
}

impl EdDecomposition {
    /// Every removal set is a proper subset of its edge, so remainders are nonempty.
    pub fn is_coloring_grade(&self, system: &SetSystem) -> bool {
        self.removal
            .iter()
            .zip(system.edges())
            .all(|(f, e)| f.len() < e.len())
    }

    pub fn remainder(&self, system: &SetSystem, edge: usize) -> Vec<usize> {
        let f = &self.removal[edge];
        system.edges()[edge]
            .iter()
            .copied()
            .filter(|v| !f.contains(v))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdOverlap {
    pub first: usize,
    pub second: usize,
    pub vertex: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdCheck {
    pub disjoint: bool,
    pub overlap: Option<EdOverlap>,
}

pub(crate) fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

pub(crate) fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(n: usize, edges: &[&[usize]]) -> SetSystem {
        SetSystem::new(n, edges.iter().map(|e| e.to_vec()).collect()).unwrap()
    }

    fn affine3() -> SetSystem {
        // AG(2,3) built by hand so this test does not lean on the generator
        let mut lines = Vec::new();
        for slope in 0..3 {
            for b in 0..3 {
                lines.push((0..3).map(|x| x * 3 + (slope * x + b) % 3).collect());
            }
        }
        for c in 0..3 {
            lines.push((0..3).map(|y| c * 3 + y).collect());
        }
        SetSystem::new(9, lines).unwrap()
    }

    #[test]
    fn new_normalizes_and_rejects() {
        let s = SetSystem::new(4, vec![vec![2, 0, 2], vec![0, 2], vec![1, 3]]).unwrap();
        assert_eq!(s.edges(), &[vec![0, 2], vec![1, 3]]);
        assert!(matches!(
            SetSystem::new(3, vec![vec![0, 3]]),
            Err(Error::VertexOutOfRange { vertex: 3, .. })
        ));
        assert!(matches!(
            SetSystem::new(3, vec![vec![1, 1]]),
            Err(Error::EdgeTooSmall { edge: 0, size: 1 })
        ));
    }

    #[test]
    fn almost_disjoint_examples() {
        let disjoint = sys(4, &[&[0, 1], &[2, 3]]);
        assert!(
            disjoint
                .is_almost_disjoint(ADParams::pairwise(1))
                .unwrap()
                .holds
        );
        let overlapping = sys(4, &[&[0, 1, 2], &[1, 2, 3]]);
        let check = overlapping
            .is_almost_disjoint(ADParams::pairwise(2))
            .unwrap();
        assert!(!check.holds);
        assert_eq!(check.witness, Some(vec![0, 1]));
        assert!(
            affine3()
                .is_almost_disjoint(ADParams::pairwise(2))
                .unwrap()
                .holds
        );
        assert!(
            !affine3()
                .is_almost_disjoint(ADParams::pairwise(1))
                .unwrap()
                .holds
        );
    }

    #[test]
    fn large_ground_uses_incidence_path() {
        // two edges on a ground set above the bitset threshold
        let s = sys(300, &[&[0, 150, 299], &[5, 150, 299], &[1, 2]]);
        assert!(s.masks().is_none());
        let check = s.is_almost_disjoint(ADParams::pairwise(2)).unwrap();
        assert_eq!(check.witness, Some(vec![0, 1]));
        assert!(s.is_almost_disjoint(ADParams::pairwise(3)).unwrap().holds);
    }

    #[test]
    fn nu_wise_check_and_cap() {
        // any three lines of AG(2,3) share at most one point
        let ag = affine3();
        let p = ADParams { mu: 1, nu: Some(3) };
        let check = ag.is_almost_disjoint(p).unwrap();
        assert!(!check.holds); // three concurrent lines meet in a point
        let p2 = ADParams { mu: 2, nu: Some(3) };
        assert!(ag.is_almost_disjoint(p2).unwrap().holds);
        assert!(matches!(
            ag.is_almost_disjoint_capped(p2, 100),
            Err(Error::BoundCheckTooLarge {
                tuples: 220,
                cap: 100
            })
        ));
        assert!(ADParams { mu: 0, nu: None }.validate().is_err());
        assert!(ADParams { mu: 1, nu: Some(1) }.validate().is_err());
    }

    #[test]
    fn transversal_and_witness() {
        let s = sys(4, &[&[0, 1], &[2, 3]]);
        assert!(s.is_transversal(&[0, 2], 2).unwrap());
        assert!(s.is_witness(&[0, 2], 1).unwrap());
        assert!(!s.is_transversal(&[], 2).unwrap());
        let ag = affine3();
        let line = ag.edges()[0].clone();
        assert!(!ag.is_witness(&line, 2).unwrap());
        assert!(ag.is_witness(&(0..9).collect::<Vec<_>>(), 3).unwrap());
        assert!(s.is_transversal(&[7], 2).is_err());
    }

    #[test]
    fn affine3_has_no_two_witness() {
        // exhaustive over all 2^9 vertex subsets
        let ag = affine3();
        for bits in 0u32..512 {
            let x: Vec<usize> = (0..9).filter(|v| bits >> v & 1 == 1).collect();
            assert!(!ag.is_witness(&x, 2).unwrap());
        }
    }

    #[test]
    fn restrict_examples() {
        let s = sys(4, &[&[0, 1], &[2, 3], &[0, 2, 3]]);
        let full = s.restrict(&[0, 1, 2, 3]).unwrap();
        assert_eq!(full.system.edges(), s.edges());
        assert_eq!(full.dropped, 0);

        let k4 = sys(4, &[&[0, 1], &[0, 2], &[0, 3], &[1, 2], &[1, 3], &[2, 3]]);
        let r = k4.restrict(&[0, 1]).unwrap();
        assert_eq!(r.system.edges(), &[vec![0, 1]]);
        assert_eq!(r.dropped, 5);
        assert_eq!(r.edge_map[0], Some(0));
        assert_eq!(r.system.family(), Some("restriction"));

        // coinciding traces merge
        let t = sys(5, &[&[0, 1, 2], &[0, 1, 3], &[2, 4]]);
        let r = t.restrict(&[0, 1, 4]).unwrap();
        assert_eq!(r.system.edges(), &[vec![0, 1]]);
        assert_eq!(r.edge_map, vec![Some(0), Some(0), None]);
        assert!(t.restrict(&[]).is_err());
    }

    #[test]
    fn ed_examples() {
        let disjoint = sys(4, &[&[0, 1], &[2, 3]]);
        let none = EdDecomposition {
            removal: vec![vec![], vec![]],
        };
        assert!(disjoint.verify_ed(&none).unwrap().disjoint);

        let s = sys(5, &[&[0, 1, 2], &[0, 3, 4]]);
        let ok = EdDecomposition {
            removal: vec![vec![0], vec![]],
        };
        assert!(s.verify_ed(&ok).unwrap().disjoint);
        assert!(ok.is_coloring_grade(&s));
        let check = s.verify_ed(&none).unwrap();
        assert!(!check.disjoint);
        assert_eq!(check.overlap.unwrap().vertex, 0);
        let bad = EdDecomposition {
            removal: vec![vec![3], vec![]],
        };
        assert!(matches!(
            s.verify_ed(&bad),
            Err(Error::MalformedDecomposition(_))
        ));
    }

    #[test]
    fn json_roundtrip_validates() {
        let s = sys(3, &[&[0, 1], &[1, 2]]);
        let text = serde_json::to_string(&s).unwrap();
        let back: SetSystem = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let bad = r#"{"ground_size": 2, "edges": [[0, 5]]}"#;
        assert!(serde_json::from_str::<SetSystem>(bad).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(12, 3), 220);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(3, 5), 0);
    }
}
