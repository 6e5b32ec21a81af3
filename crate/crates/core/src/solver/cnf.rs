//! DIMACS CNF export of extension problems.
//!
//! Variables: `x(v,c)` for every covered vertex and palette color (exactly
//! one per vertex in strict mode, at most one in weak mode), then `u(A,c)` for
//! every edge and color, meaning "c occurs exactly once on A". Each `u(A,c)`
//! implies at least one `x(v,c)` on `A` and pairwise exclusion of the rest;
//! each edge needs some `u(A,c)`. Fixed colors become unit clauses.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{EdgeRule, ExtensionProblem, Mode};
use crate::coloring::PartialColoring;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i64>>,
    pub comments: Vec<String>,
}

/// How vertex-color variables are numbered, needed to decode a model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfLayout {
    pub palette: usize,
    pub mode: Mode,
    /// Covered vertices in variable order; `x(vertices[i], c) = 1 + i*palette + c`.
    pub vertices: Vec<usize>,
}

impl CnfLayout {
    pub fn var(&self, slot: usize, color: usize) -> i64 {
        (1 + slot * self.palette + color) as i64
    }
}

impl Cnf {
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "c {c}");
        }
        let _ = writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                let _ = write!(out, "{lit} ");
            }
            out.push_str("0\n");
        }
        out
    }
}

pub fn export_cnf(problem: &ExtensionProblem) -> Result<(Cnf, CnfLayout)> {
    export_cnf_rule(problem, EdgeRule::ConflictFree)
}

/// As [`export_cnf`], under either edge rule. A proper coloring only needs
/// `¬x(v,c)` for some `v ∈ A` per edge and color, so no uniqueness variables.
pub fn export_cnf_rule(problem: &ExtensionProblem, rule: EdgeRule) -> Result<(Cnf, CnfLayout)> {
    problem.validate()?;
    if rule == EdgeRule::Proper && problem.mode == Mode::Weak {
        return Err(Error::InvalidParams(
            "proper colorings are only defined in strict mode".into(),
        ));
    }
    let system = &problem.system;
    let p = problem.palette();
    let layout = CnfLayout {
        palette: p,
        mode: problem.mode,
        vertices: system.covered(),
    };
    let mut slot = vec![usize::MAX; system.ground_size()];
    for (i, &v) in layout.vertices.iter().enumerate() {
        slot[v] = i;
    }
    let mut clauses = Vec::new();
    for i in 0..layout.vertices.len() {
        if problem.mode == Mode::Strict {
            clauses.push((0..p).map(|c| layout.var(i, c)).collect());
        }
        for c in 0..p {
            for d in c + 1..p {
                clauses.push(vec![-layout.var(i, c), -layout.var(i, d)]);
            }
        }
    }
    let mut next = 1 + (layout.vertices.len() * p) as i64;
    for edge in system.edges() {
        if rule == EdgeRule::Proper {
            for c in 0..p {
                clauses.push(edge.iter().map(|&v| -layout.var(slot[v], c)).collect());
            }
            continue;
        }
        let mut any = Vec::with_capacity(p);
        for c in 0..p {
            let u = next;
            next += 1;
            any.push(u);
            let mut some = vec![-u];
            some.extend(edge.iter().map(|&v| layout.var(slot[v], c)));
            clauses.push(some);
            for (a, &v) in edge.iter().enumerate() {
                for &w in &edge[a + 1..] {
                    clauses.push(vec![-u, -layout.var(slot[v], c), -layout.var(slot[w], c)]);
                }
            }
        }
        clauses.push(any);
    }
    for (&v, &c) in problem.fixed.assignment() {
        if slot[v] != usize::MAX {
            clauses.push(vec![layout.var(slot[v], c)]);
        }
    }
    let comments = vec![
        format!(
            "{} extension, mode {:?}, palette {p}",
            match rule {
                EdgeRule::ConflictFree => "conflict-free",
                EdgeRule::Proper => "proper",
            },
            problem.mode
        ),
        format!(
            "x(v,c) = 1 + slot(v)*{p} + c over {} covered vertices; uniqueness vars follow",
            layout.vertices.len()
        ),
    ];
    Ok((
        Cnf {
            num_vars: (next - 1) as usize,
            clauses,
            comments,
        },
        layout,
    ))
}

/// Reads a coloring back from the true literals of a model. Fixed vertices
/// that lie on no edge are carried over from `fixed`.
pub fn decode_model(
    layout: &CnfLayout,
    fixed: &PartialColoring,
    true_literals: &[i64],
) -> Result<PartialColoring> {
    let mut w = fixed.clone();
    let limit = (layout.vertices.len() * layout.palette) as i64;
    for &lit in true_literals {
        if lit <= 0 || lit > limit {
            continue;
        }
        let idx = (lit - 1) as usize;
        let (slot, color) = (idx / layout.palette, idx % layout.palette);
        let v = layout.vertices[slot];
        if let Some(prev) = w.get(v) {
            if prev != color && !fixed.is_assigned(v) {
                return Err(Error::Format(format!(
                    "model assigns two colors to vertex {v}"
                )));
            }
            if fixed.is_assigned(v) {
                continue;
            }
        }
        w.assign(v, color)?;
    }
    Ok(w)
}

pub fn parse_dimacs(text: &str) -> Result<Cnf> {
    let mut num_vars = None;
    let mut declared = 0usize;
    let mut clauses = Vec::new();
    let mut comments = Vec::new();
    let mut current = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if let Some(c) = line.strip_prefix('c') {
            comments.push(c.trim().to_string());
            continue;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(Error::Format(format!("bad header: {line}")));
            }
            num_vars = Some(parts[2].parse().map_err(|_| Error::Format(line.into()))?);
            declared = parts[3].parse().map_err(|_| Error::Format(line.into()))?;
            continue;
        }
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| Error::Format(format!("bad literal {tok}")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(lit);
            }
        }
    }
    let num_vars = num_vars.ok_or_else(|| Error::Format("missing p cnf header".into()))?;
    if clauses.len() != declared {
        return Err(Error::Format(format!(
            "header declares {declared} clauses, found {}",
            clauses.len()
        )));
    }
    Ok(Cnf {
        num_vars,
        clauses,
        comments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::SetSystem;

    #[test]
    fn single_edge_layout() {
        let s = SetSystem::new(2, vec![vec![0, 1]]).unwrap();
        let (cnf, layout) = export_cnf(&ExtensionProblem::free(s, 1, Mode::Strict)).unwrap();
        // x(0,0), x(1,0), u(A,0)
        assert_eq!(cnf.num_vars, 3);
        assert_eq!(layout.vertices, vec![0, 1]);
        let text = cnf.to_dimacs();
        assert!(text
            .lines()
            .any(|l| l == format!("p cnf 3 {}", cnf.clauses.len())));
        assert_eq!(parse_dimacs(&text).unwrap().clauses, cnf.clauses);
    }

    #[test]
    fn decode_picks_vertex_colors() {
        let layout = CnfLayout {
            palette: 2,
            mode: Mode::Weak,
            vertices: vec![3, 5],
        };
        let w = decode_model(&layout, &PartialColoring::new(2), &[-1, 2, -3, -4, 7]).unwrap();
        assert_eq!(w.get(3), Some(1));
        assert_eq!(w.get(5), None);
    }

    #[test]
    fn header_mismatch_rejected() {
        assert!(parse_dimacs("p cnf 2 2\n1 2 0\n").is_err());
        assert!(parse_dimacs("1 2 0\n").is_err());
    }
}
