//! Lifting a base system to `2t` disjoint copies plus all transversals.
//!
//! Copy `j` lives on `j·N .. (j+1)·N` for a base on `N` vertices. The copied
//! edges come first (copy by copy), then one edge per tuple in `[N]^{2t}` in
//! lexicographic order, taking vertex `v_j` from copy `j`.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{GadgetParams, LiftParams};
use crate::error::{Error, Result};
use crate::system::{ADParams, SetSystem};

pub const DEFAULT_LIFT_CAP: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LiftOptions {
    /// Most transversal edges to emit.
    pub cap: u64,
    /// When set and the full transversal count exceeds `cap`, draw `cap`
    /// distinct transversals with this seed instead of failing.
    pub sample_seed: Option<u64>,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions {
            cap: DEFAULT_LIFT_CAP,
            sample_seed: None,
        }
    }
}

pub fn gen_lift0(base: &SetSystem, t: usize, options: LiftOptions) -> Result<SetSystem> {
    if t == 0 {
        return Err(Error::InvalidParams("lift needs t >= 1".into()));
    }
    let copies = 2 * t;
    let ad = base.is_almost_disjoint(ADParams::pairwise(copies))?;
    if !ad.holds {
        return Err(Error::InvalidParams(format!(
            "base is not {copies}-almost disjoint (edges {:?})",
            ad.witness.unwrap_or_default()
        )));
    }
    let n = base.ground_size();
    let total = (n as u128).checked_pow(copies as u32).unwrap_or(u128::MAX);
    let sampled = total > options.cap as u128;
    let tuples: Vec<Vec<usize>> = if !sampled {
        all_tuples(n, copies)
    } else if let Some(seed) = options.sample_seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut drawn = BTreeSet::new();
        while drawn.len() < options.cap as usize {
            drawn.insert((0..copies).map(|_| rng.gen_range(0..n)).collect::<Vec<_>>());
        }
        drawn.into_iter().collect()
    } else {
        return Err(Error::LiftCapExceeded {
            transversals: total,
            cap: options.cap as u128,
        });
    };

    let mut edges = Vec::with_capacity(copies * base.num_edges() + tuples.len());
    for j in 0..copies {
        edges.extend(
            base.edges()
                .iter()
                .map(|e| e.iter().map(|v| j * n + v).collect::<Vec<_>>()),
        );
    }
    edges.extend(
        tuples
            .into_iter()
            .map(|tuple| tuple.iter().enumerate().map(|(j, v)| j * n + v).collect()),
    );
    let params = GadgetParams::Lift0(LiftParams {
        t,
        cap: options.cap,
        sample_seed: options.sample_seed,
    });
    let mut meta = params.to_meta();
    meta.insert("sampled".into(), json!(sampled));
    meta.insert(
        "base".into(),
        json!({ "ground_size": n, "edges": base.num_edges(), "meta": base.meta() }),
    );
    Ok(SetSystem::new(copies * n, edges)?.with_meta(meta))
}

fn all_tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut digits = vec![0; len];
    loop {
        out.push(digits.clone());
        let mut i = len;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < n {
                break;
            }
            digits[i] = 0;
        }
    }
}
