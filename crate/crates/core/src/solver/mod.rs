//! Exact decision and optimization of (weak) conflict-free and proper
//! colorings, optionally extending a fixed partial coloring.
//!
//! Weak colorings are searched as total assignments into the palette plus one
//! extra "blank" value that never counts toward a multiplicity, so one engine
//! serves both relations.

mod cnf;
mod normalize;
mod oracle;
mod sat;
mod search;

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::coloring::{is_cf, is_proper, is_weak_cf, PartialColoring};
use crate::error::{Error, Result};
use crate::system::SetSystem;

pub use cnf::{decode_model, export_cnf, export_cnf_rule, parse_dimacs, Cnf, CnfLayout};
pub use normalize::{normalize_extension_witness, NormalizedExtension};
pub use oracle::{brute_oracle, brute_oracle_capped, DEFAULT_ORACLE_CAP};

/// Largest palette the search engine accepts (values live in a `u64` mask
/// together with the blank).
pub const MAX_PALETTE: usize = 63;

/// Environment variable overriding the default node limit.
pub const NODE_LIMIT_ENV: &str = "CFCHROMA_NODE_LIMIT";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Total extension: every vertex on an edge gets a color.
    Strict,
    /// Partial extension: vertices may stay uncolored.
    Weak,
}

/// What each edge must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeRule {
    /// Some color occurs exactly once.
    ConflictFree,
    /// At least two colors occur (strict mode only).
    Proper,
}

/// Extend `fixed` to a (weak) conflict-free coloring with `fixed.palette()`
/// colors. In weak mode the extension leaves `dom(fixed)` untouched and may
/// color any other vertex or leave it blank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionProblem {
    pub system: SetSystem,
    pub fixed: PartialColoring,
    pub spill_bound: Option<usize>,
    pub mode: Mode,
}

impl ExtensionProblem {
    pub fn new(system: SetSystem, fixed: PartialColoring, mode: Mode) -> Self {
        ExtensionProblem {
            system,
            fixed,
            spill_bound: None,
            mode,
        }
    }

    /// No fixed part.
    pub fn free(system: SetSystem, palette: usize, mode: Mode) -> Self {
        Self::new(system, PartialColoring::new(palette), mode)
    }

    pub fn with_spill_bound(mut self, k: usize) -> Self {
        self.spill_bound = Some(k);
        self
    }

    pub fn palette(&self) -> usize {
        self.fixed.palette()
    }

    /// Largest `|A ∩ dom(fixed)|` over all edges.
    pub fn spill(&self) -> usize {
        self.system
            .edges()
            .iter()
            .map(|e| e.iter().filter(|&&v| self.fixed.is_assigned(v)).count())
            .max()
            .unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.palette() == 0 {
            return Err(Error::EmptyPalette);
        }
        if self.palette() > MAX_PALETTE {
            return Err(Error::InvalidParams(format!(
                "palette {} above the supported maximum {MAX_PALETTE}",
                self.palette()
            )));
        }
        self.fixed.check_domain(self.system.ground_size())?;
        if let Some(bound) = self.spill_bound {
            for (edge, e) in self.system.edges().iter().enumerate() {
                let found = e.iter().filter(|&&v| self.fixed.is_assigned(v)).count();
                if found > bound {
                    return Err(Error::SpillBoundViolated { edge, found, bound });
                }
            }
        }
        Ok(())
    }

    /// Whether `witness` solves this problem under `rule`.
    pub fn accepts(&self, rule: EdgeRule, witness: &PartialColoring) -> Result<bool> {
        if witness.palette() != self.palette() || !witness.extends(&self.fixed) {
            return Ok(false);
        }
        Ok(match (rule, self.mode) {
            (EdgeRule::ConflictFree, Mode::Strict) => match is_cf(&self.system, witness) {
                Ok(r) => r.passed(),
                Err(Error::NotTotal { .. }) => false,
                Err(e) => return Err(e),
            },
            (EdgeRule::ConflictFree, Mode::Weak) => is_weak_cf(&self.system, witness)?.passed(),
            (EdgeRule::Proper, _) => match is_proper(&self.system, witness) {
                Ok(b) => b,
                Err(Error::NotTotal { .. }) => false,
                Err(e) => return Err(e),
            },
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Feasible,
    Infeasible,
    /// The node limit was hit before the search finished.
    Unknown,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub nodes: u64,
    /// True when an infeasible verdict comes from an exhausted search tree.
    pub complete: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<PartialColoring>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimum: Option<usize>,
    pub stats: Stats,
}

/// Which engine decides a problem.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Built-in backtracking search with propagation.
    #[default]
    Search,
    /// The CNF encoding handed to a CDCL SAT solver. Ignores node limits and
    /// threads.
    Sat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub node_limit: Option<u64>,
    /// Worker threads for top-level subtree splitting; 1 means sequential.
    pub threads: usize,
    pub backend: Backend,
    /// Largest palette an optimum search tries before answering unknown.
    pub max_palette: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            node_limit: None,
            threads: 1,
            backend: Backend::Search,
            max_palette: None,
        }
    }
}

impl SolverConfig {
    pub fn with_node_limit(limit: u64) -> Self {
        SolverConfig {
            node_limit: Some(limit),
            ..Self::default()
        }
    }

    pub fn sat() -> Self {
        SolverConfig {
            backend: Backend::Sat,
            ..Self::default()
        }
    }

    /// Reads the node limit from `CFCHROMA_NODE_LIMIT` when set.
    pub fn from_env() -> Self {
        let node_limit = std::env::var(NODE_LIMIT_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok());
        SolverConfig {
            node_limit,
            ..Self::default()
        }
    }
}

/// Decides the extension problem with conflict-free edges.
pub fn feasible_cf(problem: &ExtensionProblem) -> Result<SolveResult> {
    feasible_with(problem, EdgeRule::ConflictFree, &SolverConfig::default())
}

/// Decides the extension problem under an arbitrary edge rule and limits.
pub fn feasible_with(
    problem: &ExtensionProblem,
    rule: EdgeRule,
    config: &SolverConfig,
) -> Result<SolveResult> {
    problem.validate()?;
    if rule == EdgeRule::Proper && problem.mode == Mode::Weak {
        return Err(Error::InvalidParams(
            "proper colorings are only defined in strict mode".into(),
        ));
    }
    let result = match config.backend {
        Backend::Search => search::solve(problem, rule, config),
        Backend::Sat => sat::solve(problem, rule)?,
    };
    if let Some(w) = &result.witness {
        // every witness leaves through the core verifiers
        if !problem.accepts(rule, w)? {
            return Err(Error::CertificateRejected(
                "search produced a witness the verifier rejects".into(),
            ));
        }
    }
    Ok(result)
}

/// Outcome of a chromatic-number computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Chromatic {
    Exact {
        value: usize,
    },
    /// Every palette below `lower_bound` is proven infeasible; the search at
    /// palette `lower_bound` ran out of nodes or was above the palette cap.
    Unknown {
        lower_bound: usize,
    },
    /// No palette works (only possible with a fixed part).
    Impossible,
}

impl Chromatic {
    pub fn exact(self) -> Option<usize> {
        match self {
            Chromatic::Exact { value } => Some(value),
            Chromatic::Unknown { .. } | Chromatic::Impossible => None,
        }
    }
}

/// Smallest palette admitting a solution, searching upward from a proven
/// lower bound. Also returns the witness at the optimum.
pub fn minimize(
    system: &SetSystem,
    fixed: &PartialColoring,
    mode: Mode,
    rule: EdgeRule,
    config: &SolverConfig,
) -> Result<(Chromatic, SolveResult)> {
    if system.is_empty() {
        return Err(Error::EmptySystem);
    }
    let used = fixed.assignment().values().max().map_or(0, |&c| c + 1);
    let start = lower_bound(system, mode, rule).max(used).max(1);
    // beyond this many colors the extra ones are interchangeable and unused
    let ceiling = used + system.covered().len();
    let mut total_nodes = 0;
    let mut palette = start;
    loop {
        if config.max_palette.is_some_and(|cap| palette > cap) {
            let result = SolveResult {
                verdict: Verdict::Unknown,
                witness: None,
                optimum: None,
                stats: Stats {
                    nodes: total_nodes,
                    complete: false,
                    elapsed: Duration::ZERO,
                },
            };
            return Ok((
                Chromatic::Unknown {
                    lower_bound: palette,
                },
                result,
            ));
        }
        let problem = ExtensionProblem::new(system.clone(), fixed.with_palette(palette)?, mode);
        let mut result = feasible_with(&problem, rule, config)?;
        total_nodes += result.stats.nodes;
        match result.verdict {
            Verdict::Feasible => {
                result.optimum = Some(palette);
                result.stats.nodes = total_nodes;
                return Ok((Chromatic::Exact { value: palette }, result));
            }
            Verdict::Unknown => {
                result.stats.nodes = total_nodes;
                return Ok((
                    Chromatic::Unknown {
                        lower_bound: palette,
                    },
                    result,
                ));
            }
            Verdict::Infeasible if palette >= ceiling.min(MAX_PALETTE) => {
                result.stats.nodes = total_nodes;
                return Ok((Chromatic::Impossible, result));
            }
            Verdict::Infeasible => palette += 1,
        }
    }
}

/// `χ`: smallest palette for a proper coloring.
pub fn chi(system: &SetSystem) -> Result<Chromatic> {
    chi_with(system, &SolverConfig::default())
}

pub fn chi_with(system: &SetSystem, config: &SolverConfig) -> Result<Chromatic> {
    let fixed = PartialColoring::new(1);
    Ok(minimize(system, &fixed, Mode::Strict, EdgeRule::Proper, config)?.0)
}

/// `χ_CF`: smallest palette for a conflict-free coloring.
pub fn chi_cf(system: &SetSystem) -> Result<Chromatic> {
    chi_cf_with(system, &SolverConfig::default())
}

pub fn chi_cf_with(system: &SetSystem, config: &SolverConfig) -> Result<Chromatic> {
    let fixed = PartialColoring::new(1);
    Ok(minimize(system, &fixed, Mode::Strict, EdgeRule::ConflictFree, config)?.0)
}

/// `wχ_CF`: smallest palette for a weak conflict-free coloring.
pub fn wchi_cf(system: &SetSystem) -> Result<Chromatic> {
    wchi_cf_with(system, &SolverConfig::default())
}

pub fn wchi_cf_with(system: &SetSystem, config: &SolverConfig) -> Result<Chromatic> {
    let fixed = PartialColoring::new(1);
    Ok(minimize(system, &fixed, Mode::Weak, EdgeRule::ConflictFree, config)?.0)
}

/// Cheap proven lower bound: two colors for strict colorings, raised by a
/// greedily found clique of two-element edges.
pub fn lower_bound(system: &SetSystem, mode: Mode, _rule: EdgeRule) -> usize {
    let clique = greedy_pair_clique(system);
    match mode {
        Mode::Strict => clique.max(2),
        Mode::Weak => clique.saturating_sub(1).max(1),
    }
}

fn greedy_pair_clique(system: &SetSystem) -> usize {
    let n = system.ground_size();
    let mut adj = vec![Vec::new(); n];
    for e in system.edges().iter().filter(|e| e.len() == 2) {
        adj[e[0]].push(e[1]);
        adj[e[1]].push(e[0]);
    }
    let mut order: Vec<usize> = (0..n).filter(|&v| !adj[v].is_empty()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(adj[v].len()), v));
    let mut best = 0;
    for &start in &order {
        let mut clique = vec![start];
        for &v in &order {
            if v != start && clique.iter().all(|u| adj[v].contains(u)) {
                clique.push(v);
            }
        }
        best = best.max(clique.len());
    }
    best
}
