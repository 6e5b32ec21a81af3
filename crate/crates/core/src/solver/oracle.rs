//! Exhaustive enumeration, kept independent of the search engine so the two
//! can check each other.

use std::time::Instant;

use super::{EdgeRule, ExtensionProblem, Mode, SolveResult, Stats, Verdict};
use crate::coloring::PartialColoring;
use crate::error::{Error, Result};

pub const DEFAULT_ORACLE_CAP: u128 = 100_000_000;

/// Conflict-free brute force with the default enumeration cap.
pub fn brute_oracle(problem: &ExtensionProblem) -> Result<SolveResult> {
    brute_oracle_capped(problem, EdgeRule::ConflictFree, DEFAULT_ORACLE_CAP)
}

pub fn brute_oracle_capped(
    problem: &ExtensionProblem,
    rule: EdgeRule,
    cap: u128,
) -> Result<SolveResult> {
    problem.validate()?;
    let start = Instant::now();
    let system = &problem.system;
    let palette = problem.palette();
    // value `palette` stands for "uncolored" in weak mode
    let base = match problem.mode {
        Mode::Strict => palette,
        Mode::Weak => palette + 1,
    };
    let free: Vec<usize> = system
        .covered()
        .into_iter()
        .filter(|&v| !problem.fixed.is_assigned(v))
        .collect();
    let assignments = (base as u128)
        .checked_pow(free.len() as u32)
        .unwrap_or(u128::MAX);
    if assignments > cap {
        return Err(Error::OracleCapExceeded { assignments, cap });
    }

    let mut value = vec![usize::MAX; system.ground_size()];
    for (&v, &c) in problem.fixed.assignment() {
        value[v] = c;
    }
    let mut digits = vec![0usize; free.len()];
    let mut tally = vec![0usize; palette];
    let mut checked: u64 = 0;
    loop {
        for (&v, &d) in free.iter().zip(&digits) {
            value[v] = d;
        }
        checked += 1;
        let ok = system.edges().iter().all(|edge| {
            tally.iter_mut().for_each(|t| *t = 0);
            for &v in edge {
                if value[v] < palette {
                    tally[value[v]] += 1;
                }
            }
            match rule {
                EdgeRule::ConflictFree => tally.contains(&1),
                EdgeRule::Proper => {
                    tally.iter().filter(|&&t| t > 0).count() >= 2
                        && edge.iter().all(|&v| value[v] < palette)
                }
            }
        });
        if ok {
            let mut witness = PartialColoring::new(palette);
            for (v, &c) in value.iter().enumerate() {
                if c < palette {
                    witness.assign(v, c)?;
                }
            }
            return Ok(SolveResult {
                verdict: Verdict::Feasible,
                witness: Some(witness),
                optimum: None,
                stats: Stats {
                    nodes: checked,
                    complete: true,
                    elapsed: start.elapsed(),
                },
            });
        }
        // odometer step
        let mut i = 0;
        loop {
            if i == digits.len() {
                return Ok(SolveResult {
                    verdict: Verdict::Infeasible,
                    witness: None,
                    optimum: None,
                    stats: Stats {
                        nodes: checked,
                        complete: true,
                        elapsed: start.elapsed(),
                    },
                });
            }
            digits[i] += 1;
            if digits[i] < base {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::feasible_cf;
    use crate::system::SetSystem;

    #[test]
    fn single_edge_two_colors() {
        let s = SetSystem::new(2, vec![vec![0, 1]]).unwrap();
        let p = ExtensionProblem::free(s, 2, Mode::Strict);
        let o = brute_oracle(&p).unwrap();
        assert_eq!(o.verdict, Verdict::Feasible);
        assert_eq!(o.verdict, feasible_cf(&p).unwrap().verdict);
    }

    #[test]
    fn cap_refusal() {
        let s = SetSystem::new(10, vec![(0..10).collect()]).unwrap();
        let p = ExtensionProblem::free(s, 3, Mode::Strict);
        assert!(matches!(
            brute_oracle_capped(&p, EdgeRule::ConflictFree, 1000),
            Err(Error::OracleCapExceeded {
                assignments: 59049,
                cap: 1000
            })
        ));
    }
}
