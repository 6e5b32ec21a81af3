//! Constructive colorers. Each one re-verifies its output before returning;
//! none hands back an unchecked success.

mod ind0;
mod layered;
mod witness;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::coloring::{unique_color_set, PartialColoring};
use crate::error::{Error, Result};
use crate::system::{EdDecomposition, SetSystem};

pub use ind0::{extend_ind0, Ind0Certificate, Ind0Outcome, Ind0Step, StepAction};
pub use layered::{
    find_layering, layered_extend, stepping_up_palette, BlockReport, LayeredOutcome,
    LayeringCertificate, LayeringFailure,
};
pub use witness::{find_witness, reduce_via_witness, ContractReport, WitnessReduction};

/// Forbidden witness colors `g(A)`, one set per edge.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvoidMap {
    sets: Vec<BTreeSet<usize>>,
}

impl AvoidMap {
    pub fn empty(num_edges: usize) -> Self {
        AvoidMap {
            sets: vec![BTreeSet::new(); num_edges],
        }
    }

    pub fn from_sets(sets: Vec<BTreeSet<usize>>) -> Self {
        AvoidMap { sets }
    }

    pub fn get(&self, edge: usize) -> &BTreeSet<usize> {
        &self.sets[edge]
    }

    pub fn insert(&mut self, edge: usize, color: usize) {
        self.sets[edge].insert(color);
    }

    pub fn max_len(&self) -> usize {
        self.sets.iter().map(BTreeSet::len).max().unwrap_or(0)
    }

    pub fn validate(&self, num_edges: usize, palette: usize) -> Result<()> {
        if self.sets.len() != num_edges {
            return Err(Error::InvalidParams(format!(
                "avoid map has {} entries for {num_edges} edges",
                self.sets.len()
            )));
        }
        for set in &self.sets {
            if let Some(&c) = set.iter().find(|&&c| c >= palette) {
                return Err(Error::ColorOutOfRange { color: c, palette });
            }
        }
        Ok(())
    }
}

/// Which vertices the greedy colorer touches.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GreedyScope {
    /// Every covered vertex, injectively. Needs roughly `N + max |g(A)|` colors.
    #[default]
    AllVertices,
    /// Only vertices that are the maximum of some edge; the rest stay
    /// uncolored, so the result is a weak coloring.
    MaxVertices,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GreedyOutcome {
    pub coloring: PartialColoring,
    /// `f(max A)` for every edge; unique on `A` and outside `g(A)`.
    pub witness: Vec<usize>,
}

/// Colors vertices in ascending order, each with the smallest color not used
/// before and not forbidden by any edge whose maximum it is.
pub fn greedy_max_color(
    system: &SetSystem,
    avoid: &AvoidMap,
    palette: usize,
    scope: GreedyScope,
) -> Result<GreedyOutcome> {
    if palette == 0 {
        return Err(Error::EmptyPalette);
    }
    avoid.validate(system.num_edges(), palette)?;
    let mut ending_at: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, e) in system.edges().iter().enumerate() {
        ending_at
            .entry(*e.last().expect("nonempty edge"))
            .or_default()
            .push(i);
    }
    let order: Vec<usize> = match scope {
        GreedyScope::AllVertices => system.covered(),
        GreedyScope::MaxVertices => ending_at.keys().copied().collect(),
    };
    let mut f = PartialColoring::new(palette);
    let mut used = vec![false; palette];
    for v in order {
        let mut blocked = used.clone();
        for &e in ending_at.get(&v).into_iter().flatten() {
            avoid.get(e).iter().for_each(|&c| blocked[c] = true);
        }
        let c = blocked
            .iter()
            .position(|b| !b)
            .ok_or(Error::PaletteExhausted { vertex: v })?;
        used[c] = true;
        f.assign(v, c)?;
    }
    let mut witness = Vec::with_capacity(system.num_edges());
    for (i, e) in system.edges().iter().enumerate() {
        let c = f
            .get(*e.last().expect("nonempty"))
            .expect("max vertices are colored");
        let unique = unique_color_set(system, &f, i)?;
        if !unique.contains(&c) || avoid.get(i).contains(&c) {
            return Err(Error::CertificateRejected(format!(
                "edge {i}: color {c} of its maximum is not a valid witness"
            )));
        }
        witness.push(c);
    }
    Ok(GreedyOutcome {
        coloring: f,
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Deficiency {
    pub edge: usize,
    pub fresh: usize,
    pub overlap: usize,
    /// `|palette ∖ I_f(A)|`.
    pub deficiency: usize,
    /// `overlap + max(0, p − fresh)`.
    pub bound: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DisjointifyOutcome {
    pub coloring: PartialColoring,
    pub edges: Vec<Deficiency>,
}

/// Walks the edges in order and colors the first `p` vertices of each fresh
/// part `A_n ∖ ⋃_{m<n} A_m` with `0, 1, …`; later fresh vertices stay
/// uncolored so that every color is used at most once per fresh part. Each
/// earlier-covered vertex of `A_n` spoils at most one color, giving the
/// reported bound.
pub fn disjointify_color(system: &SetSystem, palette: usize) -> Result<DisjointifyOutcome> {
    if palette == 0 {
        return Err(Error::EmptyPalette);
    }
    let mut seen = vec![false; system.ground_size()];
    let mut f = PartialColoring::new(palette);
    let mut counts = Vec::with_capacity(system.num_edges());
    for e in system.edges() {
        let fresh: Vec<usize> = e.iter().copied().filter(|&v| !seen[v]).collect();
        for (c, &v) in fresh.iter().take(palette).enumerate() {
            f.assign(v, c)?;
        }
        e.iter().for_each(|&v| seen[v] = true);
        counts.push((fresh.len(), e.len() - fresh.len()));
    }
    let mut edges = Vec::with_capacity(counts.len());
    for (i, (fresh, overlap)) in counts.into_iter().enumerate() {
        let deficiency = palette - unique_color_set(system, &f, i)?.len();
        let bound = overlap + palette.saturating_sub(fresh);
        if deficiency > bound {
            return Err(Error::CertificateRejected(format!(
                "edge {i}: deficiency {deficiency} above bound {bound}"
            )));
        }
        edges.push(Deficiency {
            edge: i,
            fresh,
            overlap,
            deficiency,
            bound,
        });
    }
    Ok(DisjointifyOutcome { coloring: f, edges })
}

/// Greedy essential-disjointness sweep in edge order: `F(A_n)` is the part of
/// `A_n` already claimed by earlier remainders. Failure only means this order
/// does not work.
pub fn ed_decompose(system: &SetSystem) -> Result<EdDecomposition> {
    let mut claimed = vec![false; system.ground_size()];
    let mut removal = Vec::with_capacity(system.num_edges());
    for (i, e) in system.edges().iter().enumerate() {
        let (taken, rest): (Vec<usize>, Vec<usize>) = e.iter().copied().partition(|&v| claimed[v]);
        if rest.is_empty() {
            return Err(Error::NotEssentiallyDisjoint { edge: i });
        }
        rest.iter().for_each(|&v| claimed[v] = true);
        removal.push(taken);
    }
    let ed = EdDecomposition { removal };
    if !system.verify_ed(&ed)?.disjoint {
        return Err(Error::CertificateRejected(
            "greedy remainders overlap".into(),
        ));
    }
    Ok(ed)
}
