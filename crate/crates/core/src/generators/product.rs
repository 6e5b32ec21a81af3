//! The product gadget on `[λ]^{n-1} × k` and its homogeneous-set refuter.
//!
//! Vertex `⟨B, i⟩` has index `rank(B)·k + i`, where `rank` is the colex rank
//! `Σ_j C(b_j, j+1)` of the sorted subset `b_0 < … < b_{n-2}`. Edge `A_Y`
//! exists for every `Y ∈ [λ]^n`, in lex order of `Y`. Within `A_Y` coordinate
//! `i` receives `fill_counts(n, k, t)[i]` cells, taken from the first
//! `(n-1)`-subsets of `Y` in lex order, so no coordinate is used exactly once.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::GadgetParams;
use crate::coloring::PartialColoring;
use crate::error::{Error, Result};
use crate::system::{binomial, SetSystem};

const MAX_EDGES: u128 = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductParams {
    pub lambda: usize,
    pub n: usize,
    pub k: usize,
    pub t: usize,
}

impl ProductParams {
    pub fn new(lambda: usize, n: usize, k: usize, t: usize) -> Self {
        ProductParams { lambda, n, k, t }
    }

    pub fn validate(&self) -> Result<()> {
        let ProductParams { lambda, n, k, t } = *self;
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if n < 2 {
            return bad(format!("product needs n >= 2, got {n}"));
        }
        if !(0 < k && k < t && t <= n * k) {
            return bad(format!(
                "product needs 0 < k < t <= n*k, got k={k}, t={t}, n={n}"
            ));
        }
        if n == 2 && t % 2 == 1 {
            return bad(format!("product with n = 2 needs even t, got {t}"));
        }
        if lambda < n {
            return bad(format!(
                "product needs lambda >= n, got lambda={lambda}, n={n}"
            ));
        }
        if self.num_edges() > MAX_EDGES {
            return bad(format!("product would have {} edges", self.num_edges()));
        }
        Ok(())
    }

    pub fn num_edges(&self) -> u128 {
        binomial(self.lambda as u128, self.n as u128)
    }

    pub fn ground_size(&self) -> usize {
        binomial(self.lambda as u128, self.n as u128 - 1) as usize * self.k
    }

    pub fn vertex(&self, subset: &[usize], i: usize) -> usize {
        subset_rank(subset) * self.k + i
    }

    /// `A_Y` for a sorted `n`-set `Y`.
    pub fn edge_of(&self, y: &[usize]) -> Vec<usize> {
        let counts = fill_counts(self.n, self.k, self.t);
        let subsets: Vec<Vec<usize>> = y.iter().copied().combinations(self.n - 1).collect();
        let mut edge: Vec<usize> = counts
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| subsets[..c].iter().map(move |b| (b, i)))
            .map(|(b, i)| self.vertex(b, i))
            .collect();
        edge.sort_unstable();
        edge
    }
}

/// Colex rank of a sorted subset.
pub fn subset_rank(subset: &[usize]) -> usize {
    subset
        .iter()
        .enumerate()
        .map(|(j, &b)| binomial(b as u128, j as u128 + 1) as usize)
        .sum()
}

/// Cells per coordinate: the first `min(k, ⌊t/2⌋)` coordinates get two each,
/// an odd leftover joins coordinate 0, and anything beyond `2k` is dealt out
/// one at a time round-robin, never exceeding `n` per coordinate.
pub fn fill_counts(n: usize, k: usize, t: usize) -> Vec<usize> {
    let mut counts = vec![0; k];
    let m = k.min(t / 2);
    counts[..m].iter_mut().for_each(|c| *c = 2);
    let mut rest = t - 2 * m;
    if rest > 0 && m < k {
        counts[0] += rest;
        rest = 0;
    }
    let mut i = 0;
    while rest > 0 {
        if counts[i] < n {
            counts[i] += 1;
            rest -= 1;
        }
        i = (i + 1) % k;
    }
    counts
}

pub fn gen_product_gadget(params: &ProductParams) -> Result<SetSystem> {
    params.validate()?;
    let edges: Vec<Vec<usize>> = (0..params.lambda)
        .combinations(params.n)
        .map(|y| params.edge_of(&y))
        .collect();
    Ok(SetSystem::new(params.ground_size(), edges)?
        .with_meta(GadgetParams::Product(*params).to_meta()))
}

/// A homogeneous `Y` together with the recount on `A_Y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductRefutation {
    pub y: Vec<usize>,
    pub edge: usize,
    pub vertices: Vec<usize>,
    /// Multiplicity of every color present on `A_Y`; all are at least 2.
    pub multiplicities: BTreeMap<usize, usize>,
}

/// Looks for `Y` on whose `(n-1)`-subsets `B ↦ (f⟨B,0⟩, …, f⟨B,k-1⟩)` is
/// constant. `None` means no such `Y` exists, which says nothing about
/// whether `f` is conflict-free.
pub fn refute_product_coloring(
    gadget: &SetSystem,
    params: &ProductParams,
    f: &PartialColoring,
) -> Result<Option<ProductRefutation>> {
    params.validate()?;
    if gadget.ground_size() != params.ground_size()
        || gadget.num_edges() as u128 != params.num_edges()
    {
        return Err(Error::InvalidParams(
            "gadget does not match the product parameters".into(),
        ));
    }
    f.check_domain(gadget.ground_size())?;
    for v in gadget.covered() {
        if !f.is_assigned(v) {
            return Err(Error::NotTotal { vertex: v });
        }
    }
    let k = params.k;
    let pattern =
        |rank: usize| -> Vec<Option<usize>> { (0..k).map(|i| f.get(rank * k + i)).collect() };
    for (index, y) in (0..params.lambda).combinations(params.n).enumerate() {
        let mut subsets = y.iter().copied().combinations(params.n - 1);
        let first = pattern(subset_rank(&subsets.next().expect("n >= 2")));
        if !subsets.all(|b| pattern(subset_rank(&b)) == first) {
            continue;
        }
        let vertices = gadget.edge(index)?.to_vec();
        if vertices != params.edge_of(&y) {
            return Err(Error::Format(format!(
                "edge {index} is not A_Y for Y = {y:?}"
            )));
        }
        let mut multiplicities = BTreeMap::new();
        for &v in &vertices {
            *multiplicities.entry(f.get(v).expect("total")).or_insert(0) += 1;
        }
        return Ok(Some(ProductRefutation {
            y,
            edge: index,
            vertices,
            multiplicities,
        }));
    }
    Ok(None)
}
