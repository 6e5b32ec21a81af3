//! The grid gadget: a precolored set `C` on the lines of a `rows × cols`
//! integer grid that admits no conflict-free 3-coloring extension.
//!
//! Grid point `(x, y)` with `x < rows`, `y < cols` is vertex `x*cols + y`.
//! Lines through at least two grid points are listed in order of the first
//! (lexicographically smallest) pair of grid points spanning them. Each line
//! then claims four lattice points beyond the grid by walking its primitive
//! direction outward, alternating between the two ends, and skipping points
//! already claimed or lying on another gadget line. Claimed points are
//! numbered after the grid in claiming order. Every vertex's coordinates are
//! stored in `meta.points`.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::GadgetParams;
use crate::coloring::PartialColoring;
use crate::error::{Error, Result};
use crate::system::SetSystem;

const C_PER_LINE: usize = 4;
const MAX_WALK: i64 = 10_000;

type Point = (i64, i64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LineClass {
    /// First coordinate constant.
    Vertical,
    /// Second coordinate constant.
    Horizontal,
    Cross,
}

impl LineClass {
    /// Colors of the four precolored points: two each of a pair of colors.
    pub fn c_colors(self) -> [usize; C_PER_LINE] {
        match self {
            LineClass::Vertical => [0, 0, 1, 1],
            LineClass::Horizontal => [1, 1, 2, 2],
            LineClass::Cross => [0, 0, 2, 2],
        }
    }

    fn of_direction(d: Point) -> Self {
        match d {
            (0, _) => LineClass::Vertical,
            (_, 0) => LineClass::Horizontal,
            _ => LineClass::Cross,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridGadget {
    pub system: SetSystem,
    /// The coloring of `C`, palette 3.
    pub fixed: PartialColoring,
    pub classes: Vec<LineClass>,
}

struct Line {
    anchor: Point,
    dir: Point,
    grid: Vec<usize>,
    /// Parameter range `s` of the grid points `anchor + s·dir`.
    span: (i64, i64),
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn on_line(p: Point, anchor: Point, dir: Point) -> bool {
    (p.0 - anchor.0) * dir.1 - (p.1 - anchor.1) * dir.0 == 0
}

pub fn gen_grid_gadget(rows: usize, cols: usize) -> Result<GridGadget> {
    if rows < 2 || cols < 2 {
        return Err(Error::InvalidParams(format!(
            "grid needs at least 2x2, got {rows}x{cols}"
        )));
    }
    let points: Vec<Point> = (0..rows)
        .flat_map(|x| (0..cols).map(move |y| (x as i64, y as i64)))
        .collect();
    let mut seen = HashSet::new();
    let mut lines = Vec::new();
    for (a, &pa) in points.iter().enumerate() {
        for &pb in &points[a + 1..] {
            let (dx, dy) = (pb.0 - pa.0, pb.1 - pa.1);
            let g = gcd(dx, dy);
            let mut dir = (dx / g, dy / g);
            if dir.0 < 0 || (dir.0 == 0 && dir.1 < 0) {
                dir = (-dir.0, -dir.1);
            }
            let grid: Vec<usize> = (0..points.len())
                .filter(|&i| on_line(points[i], pa, dir))
                .collect();
            if !seen.insert(grid.clone()) {
                continue;
            }
            let param = |i: usize| {
                let p = points[i];
                ((p.0 - pa.0) * dir.0 + (p.1 - pa.1) * dir.1) / (dir.0 * dir.0 + dir.1 * dir.1)
            };
            let lo = grid.iter().map(|&i| param(i)).min().expect("two points");
            let hi = grid.iter().map(|&i| param(i)).max().expect("two points");
            lines.push(Line {
                anchor: pa,
                dir,
                grid,
                span: (lo, hi),
            });
        }
    }

    let mut coords = points.clone();
    let mut claimed: HashSet<Point> = HashSet::new();
    let mut fixed = PartialColoring::new(3);
    let mut edges = Vec::with_capacity(lines.len());
    let mut classes = Vec::with_capacity(lines.len());
    for (li, line) in lines.iter().enumerate() {
        let class = LineClass::of_direction(line.dir);
        let colors = class.c_colors();
        let mut edge = line.grid.clone();
        let mut step = 1;
        while edge.len() < line.grid.len() + C_PER_LINE {
            if step > MAX_WALK {
                return Err(Error::InvalidParams(format!(
                    "could not place outside points on line {li}"
                )));
            }
            for s in [line.span.1 + step, line.span.0 - step] {
                if edge.len() == line.grid.len() + C_PER_LINE {
                    break;
                }
                let p = (
                    line.anchor.0 + s * line.dir.0,
                    line.anchor.1 + s * line.dir.1,
                );
                let elsewhere = lines
                    .iter()
                    .enumerate()
                    .any(|(lj, other)| lj != li && on_line(p, other.anchor, other.dir));
                if elsewhere || !claimed.insert(p) {
                    continue;
                }
                let v = coords.len();
                coords.push(p);
                fixed.assign(v, colors[edge.len() - line.grid.len()])?;
                edge.push(v);
            }
            step += 1;
        }
        edges.push(edge);
        classes.push(class);
    }

    let mut meta = GadgetParams::Grid { rows, cols }.to_meta();
    meta.insert("lines".into(), json!(lines.len()));
    meta.insert("c_points".into(), json!(coords.len() - points.len()));
    meta.insert(
        "points".into(),
        Value::Array(coords.iter().map(|&(x, y)| json!([x, y])).collect()),
    );
    let system = SetSystem::new(coords.len(), edges)?.with_meta(meta);
    Ok(GridGadget {
        system,
        fixed,
        classes,
    })
}

/// Outcome of the structural check on a grid gadget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridCheck {
    pub lines: usize,
    pub c_points: usize,
    pub violations: Vec<String>,
}

impl GridCheck {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Re-derives the grid lines from the stored coordinates and checks that
/// every edge is one full grid line plus exactly four precolored points on
/// that line, that each line appears once, that the precolored blocks are
/// disjoint and off every other line, and the color counts: two 0s and two
/// 1s on verticals, two 1s and two 2s on horizontals, two 0s and two 2s on
/// all other lines.
pub fn check_grid_gadget(
    system: &SetSystem,
    fixed: &PartialColoring,
    rows: usize,
    cols: usize,
) -> Result<GridCheck> {
    let coords: Vec<Point> = system
        .meta()
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Format("grid gadget without meta.points".into()))?
        .iter()
        .map(|p| {
            let xy = p.as_array().filter(|a| a.len() == 2);
            xy.and_then(|a| Some((a[0].as_i64()?, a[1].as_i64()?)))
                .ok_or_else(|| Error::Format(format!("bad point {p}")))
        })
        .collect::<Result<_>>()?;
    if coords.len() != system.ground_size() {
        return Err(Error::Format(
            "meta.points does not cover the ground set".into(),
        ));
    }
    let in_grid = |p: Point| (0..rows as i64).contains(&p.0) && (0..cols as i64).contains(&p.1);
    let grid: Vec<Point> = (0..rows as i64)
        .flat_map(|x| (0..cols as i64).map(move |y| (x, y)))
        .collect();
    let collinear =
        |a: Point, b: Point, c: Point| (b.0 - a.0) * (c.1 - a.1) == (b.1 - a.1) * (c.0 - a.0);

    let mut expected: BTreeSet<BTreeSet<Point>> = BTreeSet::new();
    for (i, &a) in grid.iter().enumerate() {
        for &b in &grid[i + 1..] {
            expected.insert(
                grid.iter()
                    .copied()
                    .filter(|&c| collinear(a, b, c))
                    .collect(),
            );
        }
    }

    let mut violations = Vec::new();
    let mut found: BTreeSet<BTreeSet<Point>> = BTreeSet::new();
    let mut c_owner: Vec<Option<usize>> = vec![None; system.ground_size()];
    let mut spans = Vec::new();
    for (e, edge) in system.edges().iter().enumerate() {
        let on_grid: BTreeSet<Point> = edge
            .iter()
            .map(|&v| coords[v])
            .filter(|&p| in_grid(p))
            .collect();
        let outside: Vec<usize> = edge
            .iter()
            .copied()
            .filter(|&v| !in_grid(coords[v]))
            .collect();
        if !expected.contains(&on_grid) {
            violations.push(format!("edge {e}: grid part is not a full grid line"));
            continue;
        }
        if !found.insert(on_grid.clone()) {
            violations.push(format!("edge {e}: line listed twice"));
        }
        let mut it = on_grid.iter();
        let (a, b) = (*it.next().expect("line"), *it.next().expect("two points"));
        spans.push((e, a, b));
        if outside.len() != C_PER_LINE {
            violations.push(format!(
                "edge {e}: {} points outside the grid",
                outside.len()
            ));
        }
        let mut counts = [0usize; 3];
        for &v in &outside {
            if !collinear(a, b, coords[v]) {
                violations.push(format!("edge {e}: vertex {v} is off the line"));
            }
            match fixed.get(v) {
                Some(c) if c < 3 => counts[c] += 1,
                _ => violations.push(format!("edge {e}: outside vertex {v} is not precolored")),
            }
            if let Some(prev) = c_owner[v].replace(e) {
                violations.push(format!("edges {prev} and {e} share precolored vertex {v}"));
            }
        }
        let want = if a.0 == b.0 {
            [2, 2, 0]
        } else if a.1 == b.1 {
            [0, 2, 2]
        } else {
            [2, 0, 2]
        };
        if counts != want {
            violations.push(format!(
                "edge {e}: color counts {counts:?}, expected {want:?}"
            ));
        }
    }
    for (v, owner) in c_owner.iter().enumerate() {
        if let Some(owner) = owner {
            for &(e, a, b) in &spans {
                if e != *owner && collinear(a, b, coords[v]) {
                    violations.push(format!("precolored vertex {v} also lies on line {e}"));
                }
            }
        }
    }
    for &v in fixed.assignment().keys() {
        if v >= coords.len() || in_grid(coords[v]) || c_owner[v].is_none() {
            violations.push(format!(
                "precolored vertex {v} is not an outside point of a line"
            ));
        }
    }
    if found.len() != expected.len() {
        violations.push(format!(
            "{} of {} grid lines present",
            found.len(),
            expected.len()
        ));
    }
    Ok(GridCheck {
        lines: found.len(),
        c_points: c_owner.iter().filter(|o| o.is_some()).count(),
        violations,
    })
}
