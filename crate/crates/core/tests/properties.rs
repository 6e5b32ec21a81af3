//! Randomized invariants. Every check recounts from the raw edges rather than
//! trusting the report it is checking.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use cfchroma::colorers::{
    disjointify_color, ed_decompose, find_layering, greedy_max_color, layered_extend,
    reduce_via_witness, AvoidMap, GreedyScope,
};
use cfchroma::generators::{fill_counts, gen_product_gadget, ProductParams};
use cfchroma::io::Instance;
use cfchroma::solver::{
    brute_oracle, chi_cf_with, export_cnf, feasible_with, normalize_extension_witness,
};
use cfchroma::{
    is_cf, is_weak_cf, ADParams, Chromatic, EdgeRule, ExtensionProblem, Mode, PartialColoring,
    SetSystem, SolverConfig, Verdict,
};
use common::{random_partial, random_spill_bounded, random_system, random_two_ad, rng};
use proptest::prelude::*;
use rand::Rng;

fn multiplicities(edge: &[usize], f: &PartialColoring) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for &v in edge {
        if let Some(c) = f.get(v) {
            *m.entry(c).or_insert(0) += 1;
        }
    }
    m
}

fn has_unique(edge: &[usize], f: &PartialColoring) -> bool {
    multiplicities(edge, f).values().any(|&m| m == 1)
}

fn total(rng: &mut rand_chacha::ChaCha8Rng, n: usize, palette: usize) -> PartialColoring {
    let colors: Vec<usize> = (0..n).map(|_| rng.gen_range(0..palette)).collect();
    PartialColoring::from_slice(palette, &colors).unwrap()
}

fn small_system(seed: u64) -> SetSystem {
    let mut r = rng(seed);
    let n = r.gen_range(3..=7);
    let m = r.gen_range(1..=6);
    random_system(&mut r, n, m, 2..=4)
}

fn mode_of(weak: bool) -> Mode {
    if weak {
        Mode::Weak
    } else {
        Mode::Strict
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cf_report_matches_recount(seed in any::<u64>(), palette in 1usize..5) {
        let mut r = rng(seed);
        let s = random_system(&mut r, 8, 6, 2..=5);
        let f = total(&mut r, 8, palette);
        let report = is_cf(&s, &f).unwrap();
        for (i, e) in s.edges().iter().enumerate() {
            let m = multiplicities(e, &f);
            let unique: BTreeSet<usize> =
                m.iter().filter(|(_, &k)| k == 1).map(|(&c, _)| c).collect();
            prop_assert_eq!(&report.edges[i].multiplicities, &m);
            prop_assert_eq!(&report.edges[i].unique, &unique);
            prop_assert_eq!(report.edges[i].satisfied, !unique.is_empty());
        }
        // on a total coloring the weak and strict notions coincide
        prop_assert_eq!(is_weak_cf(&s, &f).unwrap().passed(), report.passed());
    }

    #[test]
    fn weak_report_matches_recount(seed in any::<u64>(), palette in 1usize..5) {
        let mut r = rng(seed);
        let s = random_system(&mut r, 9, 6, 2..=5);
        let f = random_partial(&mut r, 9, palette, 0.6);
        let report = is_weak_cf(&s, &f).unwrap();
        for (i, e) in s.edges().iter().enumerate() {
            prop_assert_eq!(report.edges[i].satisfied, has_unique(e, &f));
        }
    }

    #[test]
    fn edge_verdict_is_local(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_system(&mut r, 10, 5, 2..=4);
        let mut f = total(&mut r, 10, 3);
        let before = is_cf(&s, &f).unwrap();
        let v = r.gen_range(0..10);
        f.assign(v, (f.get(v).unwrap() + 1) % 3).unwrap();
        let after = is_cf(&s, &f).unwrap();
        for (i, e) in s.edges().iter().enumerate() {
            if !e.contains(&v) {
                prop_assert_eq!(&before.edges[i], &after.edges[i]);
            }
        }
    }

    #[test]
    fn restriction_composes(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_system(&mut r, 10, 7, 2..=6);
        let x: Vec<usize> = (0..10).filter(|_| r.gen_bool(0.7)).collect();
        prop_assume!(x.len() >= 2);
        let y: Vec<usize> = x.iter().copied().filter(|_| r.gen_bool(0.7)).collect();
        prop_assume!(!y.is_empty());
        let outer = s.restrict(&x).unwrap();
        let y_inner: Vec<usize> = y
            .iter()
            .map(|v| outer.vertex_map.iter().position(|w| w == v).unwrap())
            .collect();
        let twice = outer.system.restrict(&y_inner).unwrap();
        let once = s.restrict(&y).unwrap();
        let lifted: BTreeSet<Vec<usize>> = twice
            .system
            .edges()
            .iter()
            .map(|e| e.iter().map(|&v| outer.vertex_map[twice.vertex_map[v]]).collect())
            .collect();
        let direct: BTreeSet<Vec<usize>> = once
            .system
            .edges()
            .iter()
            .map(|e| e.iter().map(|&v| once.vertex_map[v]).collect())
            .collect();
        prop_assert_eq!(lifted, direct);
        // every trace is the intersection with the original edge
        for (i, img) in once.edge_map.iter().enumerate() {
            let trace: Vec<usize> =
                s.edges()[i].iter().copied().filter(|v| y.contains(v)).collect();
            match img {
                Some(j) => {
                    let back: Vec<usize> =
                        once.system.edges()[*j].iter().map(|&v| once.vertex_map[v]).collect();
                    prop_assert_eq!(back, trace);
                }
                None => prop_assert!(trace.len() < 2),
            }
        }
    }

    #[test]
    fn almost_disjoint_matches_pair_count(seed in any::<u64>(), mu in 1usize..4) {
        let mut r = rng(seed);
        let s = random_system(&mut r, 12, 7, 2..=6);
        let mut direct = true;
        for (i, a) in s.edges().iter().enumerate() {
            for b in &s.edges()[i + 1..] {
                if a.iter().filter(|v| b.contains(v)).count() >= mu {
                    direct = false;
                }
            }
        }
        let check = s.is_almost_disjoint(ADParams::pairwise(mu)).unwrap();
        prop_assert_eq!(check.holds, direct);
        if let Some(w) = check.witness {
            let (a, b) = (&s.edges()[w[0]], &s.edges()[w[1]]);
            prop_assert!(a.iter().filter(|v| b.contains(v)).count() >= mu);
        }
    }

    #[test]
    fn transversal_and_witness_match_count(seed in any::<u64>(), tau in 1usize..4) {
        let mut r = rng(seed);
        let s = random_system(&mut r, 10, 6, 2..=5);
        let x: Vec<usize> = (0..10).filter(|_| r.gen_bool(0.5)).collect();
        let counts: Vec<usize> = s
            .edges()
            .iter()
            .map(|e| e.iter().filter(|v| x.contains(v)).count())
            .collect();
        prop_assert_eq!(
            s.is_transversal(&x, tau).unwrap(),
            counts.iter().all(|&c| c > 0 && c < tau)
        );
        prop_assert_eq!(s.is_witness(&x, tau).unwrap(), counts.iter().all(|&c| c == tau));
    }

    #[test]
    fn instance_json_round_trip(seed in any::<u64>(), with_fixed: bool) {
        let mut r = rng(seed);
        let s = random_system(&mut r, 9, 5, 2..=4);
        let inst = if with_fixed {
            Instance::with_fixed(s, random_partial(&mut r, 9, 3, 0.4))
        } else {
            Instance::new(s)
        };
        let back = Instance::from_json(&inst.to_json()).unwrap();
        prop_assert_eq!(back.to_json(), inst.to_json());
        prop_assert_eq!(back, inst);
    }

    #[test]
    fn fill_counts_partition_t(n in 2usize..6, k in 1usize..5, extra in 0usize..20) {
        let t = k + 1 + extra % (n * k - k).max(1);
        prop_assume!(ProductParams::new(n, n, k, t).validate().is_ok());
        let counts = fill_counts(n, k, t);
        prop_assert_eq!(counts.len(), k);
        prop_assert_eq!(counts.iter().sum::<usize>(), t);
        prop_assert!(counts.iter().all(|&c| c <= n));
    }

    #[test]
    fn greedy_witness_is_unique_and_avoided(seed in any::<u64>(), all: bool) {
        let mut r = rng(seed);
        let s = random_system(&mut r, 10, 6, 2..=5);
        let palette = 14;
        let mut avoid = AvoidMap::empty(s.num_edges());
        for e in 0..s.num_edges() {
            for _ in 0..r.gen_range(0..3) {
                avoid.insert(e, r.gen_range(0..palette));
            }
        }
        let scope = if all { GreedyScope::AllVertices } else { GreedyScope::MaxVertices };
        let out = greedy_max_color(&s, &avoid, palette, scope).unwrap();
        for (i, e) in s.edges().iter().enumerate() {
            let c = out.witness[i];
            prop_assert_eq!(out.coloring.get(*e.last().unwrap()), Some(c));
            prop_assert_eq!(multiplicities(e, &out.coloring)[&c], 1);
            prop_assert!(!avoid.get(i).contains(&c));
        }
    }

    #[test]
    fn disjointify_deficiency_recount(seed in any::<u64>(), palette in 1usize..6) {
        let mut r = rng(seed);
        let s = random_system(&mut r, 12, 6, 2..=7);
        let out = disjointify_color(&s, palette).unwrap();
        let mut seen = BTreeSet::new();
        for (i, e) in s.edges().iter().enumerate() {
            let fresh = e.iter().filter(|v| !seen.contains(*v)).count();
            let overlap = e.len() - fresh;
            seen.extend(e.iter().copied());
            let unique = multiplicities(e, &out.coloring).values().filter(|&&m| m == 1).count();
            let d = &out.edges[i];
            prop_assert_eq!(d.fresh, fresh);
            prop_assert_eq!(d.overlap, overlap);
            prop_assert_eq!(d.deficiency, palette - unique);
            prop_assert!(d.deficiency <= overlap + palette.saturating_sub(fresh));
        }
    }

    #[test]
    fn ed_decomposition_remainders_disjoint(seed in any::<u64>()) {
        let mut r = rng(seed);
        let private = r.gen_range(2..4);
        let s = random_two_ad(&mut r, 6, private, 0.4);
        if let Ok(ed) = ed_decompose(&s) {
            prop_assert!(s.verify_ed(&ed).unwrap().disjoint);
            let mut claimed = BTreeSet::new();
            for (i, e) in s.edges().iter().enumerate() {
                let rest: Vec<usize> =
                    e.iter().copied().filter(|v| !ed.removal[i].contains(v)).collect();
                prop_assert!(!rest.is_empty());
                prop_assert!(ed.removal[i].iter().all(|v| e.contains(v)));
                for v in rest {
                    prop_assert!(claimed.insert(v));
                }
            }
        }
    }

    #[test]
    fn witness_reduction_contract(seed in any::<u64>(), tau in 2usize..4) {
        let mut r = rng(seed);
        // a witness of size tau: every edge gets exactly tau marked points
        let edges = r.gen_range(1..6);
        let base = random_two_ad(&mut r, edges, tau + 1, 0.3);
        let Ok(red) = reduce_via_witness(&base, tau) else { return Ok(()); };
        prop_assert!(base.is_witness(&red.witness, tau).unwrap());
        for (i, rep) in red.edges.iter().enumerate() {
            let e = &base.edges()[rep.edge];
            let unique: BTreeSet<usize> = multiplicities(e, &red.coloring)
                .into_iter()
                .filter(|&(_, m)| m == 1)
                .map(|(c, _)| c)
                .collect();
            let missing: Vec<usize> = (0..tau).filter(|c| !unique.contains(c)).collect();
            prop_assert_eq!(&rep.missing, &missing);
            let mut allowed: BTreeSet<usize> = red.removal[rep.edge]
                .iter()
                .map(|&v| red.coloring.get(v).unwrap())
                .collect();
            allowed.insert(0);
            prop_assert!(missing.iter().all(|c| allowed.contains(c)), "edge {}", i);
        }
    }

    #[test]
    fn normalization_structure(seed in any::<u64>(), k in 1usize..3) {
        let mut r = rng(seed);
        let s = random_system(&mut r, 9, 5, 2..=5);
        let fixed = random_spill_bounded(&mut r, &s, 3, k);
        let p = ExtensionProblem::new(s.clone(), fixed.clone(), Mode::Weak).with_spill_bound(k);
        let norm = normalize_extension_witness(&p).unwrap();
        let ns = &norm.problem.system;
        prop_assert_eq!(ns.num_edges(), s.num_edges());
        prop_assert_eq!(norm.origin.len(), ns.ground_size());
        let mut used = BTreeSet::new();
        for (i, block) in norm.blocks.iter().enumerate() {
            prop_assert_eq!(block.len(), k);
            for &v in block {
                prop_assert!(used.insert(v), "blocks overlap at {}", v);
                prop_assert!(norm.problem.fixed.is_assigned(v));
            }
            let e = &ns.edges()[i];
            for &v in e {
                if norm.problem.fixed.is_assigned(v) {
                    prop_assert!(block.contains(&v));
                }
            }
            let back: BTreeSet<usize> = e.iter().map(|&v| norm.origin[v].unwrap()).collect();
            let orig: BTreeSet<usize> = s.edges()[i].iter().copied().collect();
            prop_assert_eq!(back, orig);
        }
        // copies keep their color; fixed points on no edge are dropped
        let covered = ns.covered();
        for (v, o) in norm.origin.iter().enumerate() {
            match (o, covered.binary_search(&v).is_ok()) {
                (Some(o), true) => prop_assert_eq!(norm.problem.fixed.get(v), fixed.get(*o)),
                (Some(o), false) => prop_assert!(!s.covered().contains(o)),
                (None, on_edge) => prop_assert!(!on_edge),
            }
        }
    }

    #[test]
    fn layered_extension_is_weak_cf(seed in any::<u64>(), k in 0usize..2) {
        let mut r = rng(seed);
        let edges = r.gen_range(2..7);
        let s = random_two_ad(&mut r, edges, k + 2, 0.4);
        let d = 2;
        let spill = r.gen_range(1..3);
        let Ok(layering) = find_layering(&s, spill) else { return Ok(()); };
        let x = (k + spill + d + 2) / 2;
        let fixed = random_spill_bounded(&mut r, &s, x, k);
        let p = ExtensionProblem::new(s.clone(), fixed.clone(), Mode::Weak);
        let out = layered_extend(&p, &layering, d).unwrap();
        prop_assert!(out.coloring.extends(&fixed));
        for e in s.edges() {
            prop_assert!(has_unique(e, &out.coloring));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn solver_witness_is_valid_and_matches_oracle(seed in any::<u64>(), weak: bool, palette in 1usize..4) {
        let mut r = rng(seed);
        let s = small_system(seed);
        let fixed = random_partial(&mut r, s.ground_size(), palette, 0.3);
        let p = ExtensionProblem::new(s.clone(), fixed.clone(), mode_of(weak));
        let res = feasible_with(&p, EdgeRule::ConflictFree, &SolverConfig::default()).unwrap();
        let oracle = brute_oracle(&p).unwrap();
        prop_assert_eq!(res.verdict, oracle.verdict);
        if let Some(w) = res.witness {
            prop_assert!(w.extends(&fixed));
            if weak {
                prop_assert!(is_weak_cf(&s, &w).unwrap().passed());
            } else {
                prop_assert!(is_cf(&s, &w).unwrap().passed());
            }
        }
    }

    #[test]
    fn cnf_agrees_with_solver(seed in any::<u64>(), weak: bool, palette in 1usize..4) {
        let mut r = rng(seed);
        let s = small_system(seed);
        let fixed = random_partial(&mut r, s.ground_size(), palette, 0.3);
        let p = ExtensionProblem::new(s, fixed, mode_of(weak));
        let (cnf, _) = export_cnf(&p).unwrap();
        let res = feasible_with(&p, EdgeRule::ConflictFree, &SolverConfig::default()).unwrap();
        prop_assert_eq!(common::sat_decides(&cnf), res.verdict == Verdict::Feasible);
        let sat = feasible_with(&p, EdgeRule::ConflictFree, &SolverConfig::sat()).unwrap();
        prop_assert_eq!(sat.verdict, res.verdict);
    }

    #[test]
    fn thread_count_does_not_change_verdict(seed in any::<u64>(), weak: bool) {
        let s = small_system(seed);
        let p = ExtensionProblem::free(s, 2, mode_of(weak));
        let one = feasible_with(&p, EdgeRule::ConflictFree, &SolverConfig { threads: 1, ..SolverConfig::default() }).unwrap();
        let four = feasible_with(&p, EdgeRule::ConflictFree, &SolverConfig { threads: 4, ..SolverConfig::default() }).unwrap();
        prop_assert_eq!(one.verdict, four.verdict);
    }

    #[test]
    fn dropping_an_edge_never_raises_chi_cf(seed in any::<u64>(), weak: bool) {
        let s = small_system(seed);
        prop_assume!(s.num_edges() >= 2);
        let mut r = rng(seed ^ 0x5eed);
        let drop = r.gen_range(0..s.num_edges());
        let sub_edges: Vec<Vec<usize>> = s
            .edges()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != drop)
            .map(|(_, e)| e.clone())
            .collect();
        let sub = SetSystem::new(s.ground_size(), sub_edges).unwrap();
        let cfg = SolverConfig::default();
        let value = |sys: &SetSystem| match chi_cf_with(sys, &cfg).unwrap() {
            Chromatic::Exact { value } => value,
            other => panic!("unexpected {other:?}"),
        };
        if weak {
            let full = cfchroma::solver::wchi_cf_with(&s, &cfg).unwrap().exact().unwrap();
            let part = cfchroma::solver::wchi_cf_with(&sub, &cfg).unwrap().exact().unwrap();
            prop_assert!(part <= full);
        } else {
            prop_assert!(value(&sub) <= value(&s));
        }
    }

    #[test]
    fn product_gadget_shape(lambda in 3usize..7, n in 2usize..4, k in 1usize..3, extra in 0usize..4) {
        prop_assume!(lambda >= n);
        let t = k + 1 + extra;
        let params = ProductParams::new(lambda, n, k, t);
        prop_assume!(params.validate().is_ok());
        let s = gen_product_gadget(&params).unwrap();
        prop_assert_eq!(s.num_edges() as u128, params.num_edges());
        prop_assert!(s.edges().iter().all(|e| e.len() == t));
        prop_assert!(s.is_almost_disjoint(ADParams::pairwise(k + 1)).unwrap().holds);
    }
}
