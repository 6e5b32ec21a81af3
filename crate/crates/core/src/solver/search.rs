//! Backtracking search with per-edge propagation.
//!
//! Every vertex on an edge carries a domain bitmask over the palette colors
//! (plus the blank value in weak mode). An edge is dead once no color can end
//! with multiplicity exactly one: either every color already occurs twice, or
//! no zero-count color is still available on an open vertex and no color
//! occurs exactly once. An edge with a single open vertex narrows that
//! vertex's domain to the values that leave a unique color.
//!
//! Colors that nobody uses yet are interchangeable at every node (all their
//! edge counts are zero and every filter depends only on counts), so only the
//! smallest unused color is branched on.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::time::Instant;

use super::{EdgeRule, ExtensionProblem, Mode, SolveResult, SolverConfig, Stats, Verdict};
use crate::coloring::PartialColoring;

const OPEN: u8 = u8::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outcome {
    Found,
    Exhausted,
    Stopped,
}

#[derive(Clone, Copy)]
enum Undo {
    Dom(usize, u64),
    Val(usize),
}

struct Shared<'s> {
    nodes: &'s AtomicU64,
    limit: Option<u64>,
    /// Smallest top-level branch index known to hold a solution.
    best_branch: &'s AtomicUsize,
}

#[derive(Clone)]
struct Engine<'a> {
    edges: &'a [Vec<usize>],
    inc: Vec<Vec<usize>>,
    rule: EdgeRule,
    colors: usize,
    blank: Option<usize>,
    dom: Vec<u64>,
    val: Vec<u8>,
    counts: Vec<u32>,
    open: Vec<u32>,
    used: Vec<u32>,
    order: Vec<usize>,
    trail: Vec<Undo>,
    queue: Vec<usize>,
    branch: usize,
}

impl<'a> Engine<'a> {
    fn new(problem: &'a ExtensionProblem, rule: EdgeRule) -> Self {
        let system = &problem.system;
        let n = system.ground_size();
        let colors = problem.palette();
        let blank = (problem.mode == Mode::Weak).then_some(colors);
        let inc = system.incidence();
        let full = ((1u64 << colors) - 1) | blank.map_or(0, |b| 1u64 << b);
        let mut dom = vec![0u64; n];
        let mut order = Vec::new();
        for v in 0..n {
            if inc[v].is_empty() {
                continue;
            }
            match problem.fixed.get(v) {
                Some(c) => dom[v] = 1u64 << c,
                None => {
                    dom[v] = full;
                    order.push(v);
                }
            }
        }
        order.sort_by_key(|&v| (std::cmp::Reverse(inc[v].len()), v));
        let edges = system.edges();
        Engine {
            edges,
            open: edges.iter().map(|e| e.len() as u32).collect(),
            counts: vec![0; edges.len() * colors],
            used: vec![0; colors],
            val: vec![OPEN; n],
            inc,
            rule,
            colors,
            blank,
            dom,
            order,
            trail: Vec::new(),
            queue: Vec::new(),
            branch: usize::MAX,
        }
    }

    /// Assigns the fixed part and propagates; false on an immediate conflict.
    fn init(&mut self) -> bool {
        for v in 0..self.dom.len() {
            if self.dom[v] != 0 && self.dom[v].count_ones() == 1 {
                self.queue.push(v);
            }
        }
        if !self.propagate() {
            return false;
        }
        (0..self.edges.len()).all(|e| self.check_edge(e))
    }

    fn assign(&mut self, v: usize, value: usize) {
        self.trail.push(Undo::Val(v));
        self.val[v] = value as u8;
        let colored = value < self.colors;
        if colored {
            self.used[value] += 1;
        }
        for &e in &self.inc[v] {
            self.open[e] -= 1;
            if colored {
                self.counts[e * self.colors + value] += 1;
            }
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Undo::Dom(v, old) => self.dom[v] = old,
                Undo::Val(v) => {
                    let value = self.val[v] as usize;
                    self.val[v] = OPEN;
                    let colored = value < self.colors;
                    if colored {
                        self.used[value] -= 1;
                    }
                    for &e in &self.inc[v] {
                        self.open[e] += 1;
                        if colored {
                            self.counts[e * self.colors + value] -= 1;
                        }
                    }
                }
            }
        }
        self.queue.clear();
    }

    fn restrict_dom(&mut self, v: usize, mask: u64) -> bool {
        let old = self.dom[v];
        let new = old & mask;
        if new != old {
            self.trail.push(Undo::Dom(v, old));
            self.dom[v] = new;
            if new.count_ones() == 1 {
                self.queue.push(v);
            }
        }
        new != 0
    }

    fn propagate(&mut self) -> bool {
        while let Some(v) = self.queue.pop() {
            if self.val[v] != OPEN {
                continue;
            }
            let value = self.dom[v].trailing_zeros() as usize;
            self.assign(v, value);
            for i in 0..self.inc[v].len() {
                let e = self.inc[v][i];
                if !self.check_edge(e) {
                    return false;
                }
            }
        }
        true
    }

    fn open_vertex(&self, e: usize) -> usize {
        *self.edges[e]
            .iter()
            .find(|&&w| self.val[w] == OPEN)
            .expect("edge has an open vertex")
    }

    fn check_edge(&mut self, e: usize) -> bool {
        let base = e * self.colors;
        let counts = &self.counts[base..base + self.colors];
        let open = self.open[e];
        match self.rule {
            EdgeRule::ConflictFree => {
                let ones = counts.iter().filter(|&&c| c == 1).count();
                if open == 0 {
                    return ones > 0;
                }
                if open == 1 {
                    let mut allowed = 0u64;
                    for (c, &cnt) in counts.iter().enumerate() {
                        let after = ones - usize::from(cnt == 1) + usize::from(cnt == 0);
                        if after > 0 {
                            allowed |= 1 << c;
                        }
                    }
                    if let Some(b) = self.blank {
                        if ones > 0 {
                            allowed |= 1 << b;
                        }
                    }
                    let w = self.open_vertex(e);
                    return self.restrict_dom(w, allowed);
                }
                if ones > 0 {
                    return true;
                }
                let zero: u64 = counts
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c == 0)
                    .fold(0, |m, (c, _)| m | 1 << c);
                if zero == 0 {
                    return false;
                }
                let reachable = self.edges[e]
                    .iter()
                    .filter(|&&w| self.val[w] == OPEN)
                    .fold(0u64, |m, &w| m | self.dom[w]);
                reachable & zero != 0
            }
            EdgeRule::Proper => {
                let mut present = counts.iter().enumerate().filter(|(_, &c)| c > 0);
                let first = present.next().map(|(c, _)| c);
                let distinct = usize::from(first.is_some()) + present.count();
                if open == 0 {
                    return distinct >= 2;
                }
                if open == 1 && distinct == 1 {
                    let w = self.open_vertex(e);
                    return self.restrict_dom(w, !(1u64 << first.unwrap()));
                }
                true
            }
        }
    }

    fn pick(&self) -> Option<usize> {
        let mut best: Option<(u32, usize)> = None;
        for &v in &self.order {
            if self.val[v] != OPEN {
                continue;
            }
            let size = self.dom[v].count_ones();
            if best.is_none_or(|(s, _)| size < s) {
                best = Some((size, v));
                if size <= 1 {
                    break;
                }
            }
        }
        best.map(|(_, v)| v)
    }

    /// Values to branch on, in order: colors ascending (only the first unused
    /// one), blank last.
    fn values(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut took_unused = false;
        for c in 0..self.colors {
            if self.dom[v] >> c & 1 == 0 {
                continue;
            }
            if self.used[c] == 0 {
                if took_unused {
                    continue;
                }
                took_unused = true;
            }
            out.push(c);
        }
        if let Some(b) = self.blank {
            if self.dom[v] >> b & 1 == 1 {
                out.push(b);
            }
        }
        out
    }

    fn tick(&self, shared: &Shared) -> bool {
        let n = shared.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if shared.limit.is_some_and(|l| n > l) {
            return false;
        }
        shared.best_branch.load(Ordering::Relaxed) >= self.branch
    }

    fn dfs(&mut self, shared: &Shared) -> Outcome {
        let Some(v) = self.pick() else {
            return Outcome::Found;
        };
        if !self.tick(shared) {
            return Outcome::Stopped;
        }
        for value in self.values(v) {
            let mark = self.trail.len();
            if self.restrict_dom(v, 1 << value) && self.propagate() {
                match self.dfs(shared) {
                    Outcome::Exhausted => {}
                    other => return other,
                }
            }
            self.undo_to(mark);
        }
        Outcome::Exhausted
    }

    fn witness(&self, problem: &ExtensionProblem) -> PartialColoring {
        let mut w = problem.fixed.clone();
        for (v, &value) in self.val.iter().enumerate() {
            if value != OPEN && (value as usize) < self.colors {
                w.assign(v, value as usize).expect("value within palette");
            }
        }
        w
    }
}

pub(super) fn solve(
    problem: &ExtensionProblem,
    rule: EdgeRule,
    config: &SolverConfig,
) -> SolveResult {
    let start = Instant::now();
    let nodes = AtomicU64::new(0);
    let best_branch = AtomicUsize::new(usize::MAX);
    let shared = Shared {
        nodes: &nodes,
        limit: config.node_limit,
        best_branch: &best_branch,
    };
    let mut root = Engine::new(problem, rule);
    let (outcome, witness) = if !root.init() {
        (Outcome::Exhausted, None)
    } else if config.threads <= 1 {
        let outcome = root.dfs(&shared);
        let witness = (outcome == Outcome::Found).then(|| root.witness(problem));
        (outcome, witness)
    } else {
        split(&mut root, problem, &shared, config.threads)
    };
    let verdict = match outcome {
        Outcome::Found => Verdict::Feasible,
        Outcome::Exhausted => Verdict::Infeasible,
        Outcome::Stopped => Verdict::Unknown,
    };
    SolveResult {
        verdict,
        witness,
        optimum: None,
        stats: Stats {
            nodes: nodes.load(Ordering::Relaxed),
            complete: verdict != Verdict::Unknown,
            elapsed: start.elapsed(),
        },
    }
}

/// Explores the root's branches on worker threads. The reported witness is
/// the one from the lowest-index feasible branch, which is exactly what the
/// sequential search finds first.
fn split(
    root: &mut Engine,
    problem: &ExtensionProblem,
    shared: &Shared,
    threads: usize,
) -> (Outcome, Option<PartialColoring>) {
    let Some(v) = root.pick() else {
        return (Outcome::Found, Some(root.witness(problem)));
    };
    if !root.tick(shared) {
        return (Outcome::Stopped, None);
    }
    let values = root.values(v);
    let next = AtomicUsize::new(0);
    let mut results: Vec<(usize, Outcome, Option<PartialColoring>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads.min(values.len()))
            .map(|_| {
                let base = root.clone();
                let values = &values;
                let next = &next;
                scope.spawn(move || {
                    let mut out = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i >= values.len() {
                            break;
                        }
                        let mut engine = base.clone();
                        engine.branch = i;
                        let outcome =
                            if engine.restrict_dom(v, 1 << values[i]) && engine.propagate() {
                                engine.dfs(shared)
                            } else {
                                Outcome::Exhausted
                            };
                        let witness = (outcome == Outcome::Found).then(|| engine.witness(problem));
                        if outcome == Outcome::Found {
                            shared.best_branch.fetch_min(i, Ordering::Relaxed);
                        }
                        out.push((i, outcome, witness));
                    }
                    out
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("search worker panicked"))
            .collect()
    });
    results.sort_by_key(|r| r.0);
    let mut stopped = false;
    for (_, outcome, witness) in results {
        match outcome {
            Outcome::Found => return (Outcome::Found, witness),
            Outcome::Stopped => stopped = true,
            Outcome::Exhausted => {}
        }
    }
    if stopped {
        (Outcome::Stopped, None)
    } else {
        (Outcome::Exhausted, None)
    }
}
