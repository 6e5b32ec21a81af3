//! The constructive colorers on a small sunflower.

use cfchroma::colorers::{
    disjointify_color, extend_ind0, greedy_max_color, reduce_via_witness, AvoidMap, GreedyScope,
};
use cfchroma::{is_weak_cf, ExtensionProblem, Mode, PartialColoring, SetSystem};

fn main() -> cfchroma::Result<()> {
    // four petals of size 4 around vertex 0
    let edges = (0..4)
        .map(|p| std::iter::once(0).chain(1 + 3 * p..4 + 3 * p).collect())
        .collect();
    let sunflower = SetSystem::new(13, edges)?;

    let greedy = greedy_max_color(&sunflower, &AvoidMap::empty(4), 8, GreedyScope::MaxVertices)?;
    println!("greedy witness colors: {:?}", greedy.witness);

    let dj = disjointify_color(&sunflower, 3)?;
    for d in &dj.edges {
        println!(
            "disjointify edge {}: deficiency {} <= {}",
            d.edge, d.deficiency, d.bound
        );
    }

    let mut fixed = PartialColoring::new(2);
    // one petal point; the other three petals need new points
    fixed.assign(1, 0)?;
    let problem = ExtensionProblem::new(sunflower.clone(), fixed, Mode::Weak);
    let out = extend_ind0(&problem, 2)?;
    println!(
        "ind0 added {} vertices, weak cf: {}",
        out.certificate.added(),
        is_weak_cf(&sunflower, &out.coloring)?.passed()
    );

    let reduced = reduce_via_witness(&sunflower, 2)?;
    println!(
        "witness {:?}, coloring {:?}",
        reduced.witness,
        reduced.coloring.assignment()
    );
    Ok(())
}
