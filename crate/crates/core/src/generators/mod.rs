//! Deterministic generators for the extremal constructions. Every output
//! carries `meta.family` and `meta.params`.

mod grid;
mod lift;
mod product;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::system::SetSystem;

pub use grid::{check_grid_gadget, gen_grid_gadget, GridCheck, GridGadget, LineClass};
pub use lift::{gen_lift0, LiftOptions, DEFAULT_LIFT_CAP};
pub use product::{
    fill_counts, gen_product_gadget, refute_product_coloring, subset_rank, ProductParams,
    ProductRefutation,
};

/// Family tag plus per-family parameters, as stored in `meta.params`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum GadgetParams {
    Quad { m: usize },
    Product(ProductParams),
    Affine { q: usize },
    Grid { rows: usize, cols: usize },
    Lift0(LiftParams),
    Union { parts: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftParams {
    pub t: usize,
    pub cap: u64,
    pub sample_seed: Option<u64>,
}

impl GadgetParams {
    pub fn family(&self) -> &'static str {
        match self {
            GadgetParams::Quad { .. } => "quad",
            GadgetParams::Product(_) => "product",
            GadgetParams::Affine { .. } => "affine",
            GadgetParams::Grid { .. } => "grid",
            GadgetParams::Lift0(_) => "lift0",
            GadgetParams::Union { .. } => "union",
        }
    }

    /// The `mu` at which the family is advertised to be almost disjoint, if any.
    pub fn advertised_mu(&self) -> Option<usize> {
        match self {
            GadgetParams::Product(p) => Some(p.k + 1),
            GadgetParams::Affine { .. } | GadgetParams::Grid { .. } => Some(2),
            GadgetParams::Lift0(l) => Some(2 * l.t),
            GadgetParams::Quad { .. } | GadgetParams::Union { .. } => None,
        }
    }

    pub(crate) fn to_meta(&self) -> Map<String, Value> {
        let mut params = serde_json::to_value(self).expect("params serialize");
        let params = params.as_object_mut().expect("tagged object");
        params.remove("family");
        let mut meta = Map::new();
        meta.insert("family".into(), json!(self.family()));
        meta.insert("params".into(), Value::Object(params.clone()));
        meta
    }
}

/// Builds a self-contained family (everything except lifts and unions).
pub fn generate(params: &GadgetParams) -> Result<SetSystem> {
    match params {
        GadgetParams::Quad { m } => gen_quad(*m),
        GadgetParams::Product(p) => gen_product_gadget(p),
        GadgetParams::Affine { q } => gen_affine_lines(*q),
        GadgetParams::Grid { rows, cols } => Ok(gen_grid_gadget(*rows, *cols)?.system),
        GadgetParams::Lift0(_) | GadgetParams::Union { .. } => Err(Error::InvalidParams(format!(
            "{} needs base instances",
            params.family()
        ))),
    }
}

/// All 4-subsets of `0..m` with exactly two even and two odd elements.
pub fn gen_quad(m: usize) -> Result<SetSystem> {
    if m < 4 {
        return Err(Error::InvalidParams(format!("quad needs m >= 4, got {m}")));
    }
    let evens: Vec<usize> = (0..m).step_by(2).collect();
    let odds: Vec<usize> = (1..m).step_by(2).collect();
    let mut edges: Vec<Vec<usize>> = evens
        .iter()
        .copied()
        .tuple_combinations()
        .cartesian_product(odds.iter().copied().tuple_combinations())
        .map(|((a, b), (c, d))| vec![a, b, c, d])
        .collect();
    for e in &mut edges {
        e.sort_unstable();
    }
    edges.sort();
    Ok(SetSystem::new(m, edges)?.with_meta(GadgetParams::Quad { m }.to_meta()))
}

pub fn is_prime(q: usize) -> bool {
    q >= 2
        && (2..)
            .take_while(|d| d * d <= q)
            .all(|d| !q.is_multiple_of(d))
}

/// All `q² + q` lines of the affine plane over `F_q`, `q` prime. Point
/// `(x, y)` is vertex `x*q + y`; lines `y = m x + b` come first, ordered by
/// slope then intercept, followed by the verticals `x = c`.
pub fn gen_affine_lines(q: usize) -> Result<SetSystem> {
    if !is_prime(q) {
        return Err(Error::InvalidParams(format!(
            "affine plane order {q} is not prime"
        )));
    }
    let mut edges = Vec::with_capacity(q * q + q);
    for m in 0..q {
        for b in 0..q {
            edges.push((0..q).map(|x| x * q + (m * x + b) % q).collect());
        }
    }
    for c in 0..q {
        edges.push((0..q).map(|y| c * q + y).collect());
    }
    Ok(SetSystem::new(q * q, edges)?.with_meta(GadgetParams::Affine { q }.to_meta()))
}

/// Disjoint union; part `j` is shifted by the total ground size of the
/// parts before it.
pub fn gen_union(parts: &[SetSystem]) -> Result<SetSystem> {
    if parts.is_empty() {
        return Err(Error::InvalidParams("union of an empty list".into()));
    }
    let mut offset = 0;
    let mut edges = Vec::new();
    let mut recorded = Vec::with_capacity(parts.len());
    for part in parts {
        edges.extend(
            part.edges()
                .iter()
                .map(|e| e.iter().map(|v| v + offset).collect::<Vec<_>>()),
        );
        recorded.push(json!({
            "offset": offset,
            "ground_size": part.ground_size(),
            "edges": part.num_edges(),
            "meta": part.meta(),
        }));
        offset += part.ground_size();
    }
    let mut meta = GadgetParams::Union { parts: parts.len() }.to_meta();
    meta.insert("parts".into(), Value::Array(recorded));
    Ok(SetSystem::new(offset, edges)?.with_meta(meta))
}
