//! Seeded instance builders shared by the integration tests.
#![allow(dead_code)]

use cfchroma::{PartialColoring, SetSystem};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random edges of sizes in `sizes` on `0..n`; retries until at least one
/// edge survives deduplication.
pub fn random_system(
    rng: &mut ChaCha8Rng,
    n: usize,
    edges: usize,
    sizes: std::ops::RangeInclusive<usize>,
) -> SetSystem {
    let vertices: Vec<usize> = (0..n).collect();
    let list = (0..edges.max(1))
        .map(|_| {
            let size = rng.gen_range(sizes.clone()).min(n);
            vertices.choose_multiple(rng, size).copied().collect()
        })
        .collect();
    SetSystem::new(n, list).expect("edges of size >= 2")
}

/// A system whose edges pairwise share at most one vertex: every pair of
/// edges gets a common vertex with probability `share`, and every edge also
/// gets `private` vertices of its own.
pub fn random_two_ad(rng: &mut ChaCha8Rng, edges: usize, private: usize, share: f64) -> SetSystem {
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); edges];
    let mut next = 0;
    for i in 0..edges {
        for j in i + 1..edges {
            if rng.gen_bool(share) {
                members[i].push(next);
                members[j].push(next);
                next += 1;
            }
        }
    }
    for m in &mut members {
        for _ in 0..private {
            m.push(next);
            next += 1;
        }
    }
    // shuffle vertex labels so shared points are not always the smallest
    let mut labels: Vec<usize> = (0..next).collect();
    labels.shuffle(rng);
    let list = members
        .into_iter()
        .map(|m| m.into_iter().map(|v| labels[v]).collect())
        .collect();
    SetSystem::new(next, list).expect("valid")
}

/// Colors each vertex with probability `density`.
pub fn random_partial(
    rng: &mut ChaCha8Rng,
    n: usize,
    palette: usize,
    density: f64,
) -> PartialColoring {
    let mut f = PartialColoring::new(palette);
    for v in 0..n {
        if rng.gen_bool(density) {
            f.assign(v, rng.gen_range(0..palette)).expect("in range");
        }
    }
    f
}

/// Random precoloring with at most `k` colored points on every edge.
pub fn random_spill_bounded(
    rng: &mut ChaCha8Rng,
    system: &SetSystem,
    palette: usize,
    k: usize,
) -> PartialColoring {
    let inc = system.incidence();
    let mut load = vec![0usize; system.num_edges()];
    let mut order: Vec<usize> = (0..system.ground_size()).collect();
    order.shuffle(rng);
    let mut f = PartialColoring::new(palette);
    for v in order {
        if rng.gen_bool(0.5) && inc[v].iter().all(|&e| load[e] < k) {
            f.assign(v, rng.gen_range(0..palette)).expect("in range");
            inc[v].iter().for_each(|&e| load[e] += 1);
        }
    }
    f
}

/// Edges as sets, for order-free comparison.
pub fn edge_set(system: &SetSystem) -> std::collections::BTreeSet<Vec<usize>> {
    system.edges().iter().cloned().collect()
}

/// Decides the CNF encoding with an external SAT solver, independently of
/// the library's backend dispatch. `true` means satisfiable.
pub fn sat_decides(cnf: &cfchroma::solver::Cnf) -> bool {
    use varisat::{ExtendFormula, Lit, Solver};
    let mut solver = Solver::new();
    for clause in &cnf.clauses {
        let lits: Vec<Lit> = clause
            .iter()
            .map(|&l| Lit::from_dimacs(l as isize))
            .collect();
        solver.add_clause(&lits);
    }
    solver.solve().expect("solver runs")
}
