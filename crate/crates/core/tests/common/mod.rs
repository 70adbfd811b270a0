//! Reference implementations kept apart from the library code they check.
#![allow(dead_code)]

use std::collections::HashSet;

use treenorm::espace::EVector;
use treenorm::norm::TreeVector;
use treenorm::tree::Node;

/// Every node of the depth-`depth` tree, level by level.
pub fn all_nodes(depth: usize) -> Vec<Node> {
    let mut out = vec![Node::root()];
    let mut i = 0;
    while i < out.len() {
        let n = out[i];
        if n.level() + 1 < depth {
            out.extend(n.children().unwrap());
        }
        i += 1;
    }
    out
}

/// A path `top → bottom` as its node set plus its coordinate sum.
struct Path {
    nodes: HashSet<Node>,
    sum: f64,
}

fn paths_from(top: Node, x: &TreeVector) -> Vec<Path> {
    let mut out = Vec::new();
    let mut stack = vec![(top, HashSet::from([top]), x.get(&top))];
    while let Some((bottom, nodes, sum)) = stack.pop() {
        if bottom.level() + 1 < x.depth() {
            for c in bottom.children().unwrap() {
                let mut n2 = nodes.clone();
                n2.insert(c);
                stack.push((c, n2, sum + x.get(&c)));
            }
        }
        out.push(Path { nodes, sum });
    }
    out
}

fn best_family(paths: &[Path], start: usize, used: &mut Vec<usize>, acc: f64) -> f64 {
    let mut best = acc;
    for i in start..paths.len() {
        if used
            .iter()
            .any(|&j| !paths[j].nodes.is_disjoint(&paths[i].nodes))
        {
            continue;
        }
        used.push(i);
        best = best.max(best_family(
            paths,
            i + 1,
            used,
            acc + paths[i].sum * paths[i].sum,
        ));
        used.pop();
    }
    best
}

/// Squared tree norm: the best Σ (path sum)² over families of pairwise
/// node-disjoint downward paths that all start on one level. Paths through
/// zero-valued nodes only matter through their sums, so stopping at the
/// truncation loses nothing. Enumerates every such family.
pub fn naive_norm_sq(x: &TreeVector) -> f64 {
    let mut best = 0.0f64;
    for level in 0..x.depth() {
        let tops: Vec<Node> = all_nodes(x.depth())
            .into_iter()
            .filter(|n| n.level() == level)
            .filter(|n| x.iter().any(|(s, _)| n.is_ancestor_of(s)))
            .collect();
        let paths: Vec<Path> = tops
            .iter()
            .flat_map(|t| paths_from(*t, x))
            .filter(|p| p.sum != 0.0)
            .collect();
        best = best.max(best_family(&paths, 0, &mut Vec::new(), 0.0));
    }
    best
}

/// Interval norm by summing every interval of `0..=max index` from scratch.
pub fn naive_enorm(v: &EVector) -> f64 {
    let Some(last) = v.max_index() else {
        return 0.0;
    };
    let mut best = 0.0f64;
    for i in 0..=last {
        for j in i..=last {
            let s: f64 = (i..=j).map(|k| v.get(k)).sum();
            best = best.max(s.abs());
        }
    }
    best
}
