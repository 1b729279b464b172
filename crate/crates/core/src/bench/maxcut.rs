//! Three-terminal Multiway Cut instances whose optimum encodes a maximum cut.
//!
//! The edge-weighted gadget: every source vertex `u` is joined to terminals
//! `s1` and `s2` with weight `2 deg(u) + 1`; every orientation `(u, v)` of a
//! source edge adds private vertices `p`, `q` with edges `q s1`, `p s2`,
//! `p s3`, `q s3` of weight 2 and `q u`, `p v`, `p q` of weight 1. Its
//! optimum is `16 |E| + |V| − maxcut`.
//!
//! Conversion to unweighted vertex deletion: a weight-`w` edge becomes `w`
//! subdivision vertices adjacent to both ends, and every gadget vertex `x` is
//! replaced by `W(x) − max_j w(x, s_j)` false twins, where `W` is the
//! weighted degree. Deleting all twins then costs at least as much as
//! putting `x` on its heaviest terminal's side and cutting everything else
//! at `x`, so both steps keep the optimum.

use crate::graph::{Graph, MwcInstance};

/// Named source graphs accepted by `gen maxcut`.
pub const SOURCES: [&str; 8] = ["k2", "k3", "k4", "c4", "c5", "p3", "bull", "pan"];

pub fn source_graph(name: &str) -> Option<Graph> {
    let cycle = |n: usize| Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)));
    let complete = |n: usize| Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))));
    Some(match name {
        "k2" => complete(2),
        "k3" => complete(3),
        "k4" => complete(4),
        "c4" => cycle(4),
        "c5" => cycle(5),
        "p3" => Graph::from_edges(3, [(0, 1), (1, 2)]),
        "bull" => Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (1, 3), (2, 4)]),
        "pan" => Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)]),
        _ => return None,
    })
}

/// Edge-weighted gadget as `(node count, (u, v, weight) edges)`: nodes
/// `0, 1, 2` are the terminals, then the source vertices, then the private
/// pairs.
pub fn weighted_gadget(h: &Graph) -> (usize, Vec<(usize, usize, usize)>) {
    let base = 3;
    let mut edges = Vec::new();
    for u in 0..h.n() {
        let w = 2 * h.degree(u) + 1;
        edges.push((base + u, 0, w));
        edges.push((base + u, 1, w));
    }
    let mut next = base + h.n();
    for (a, b) in h.edges() {
        for (u, v) in [(a, b), (b, a)] {
            let (p, q) = (next, next + 1);
            next += 2;
            edges.extend([(q, 0, 2), (p, 1, 2), (p, 2, 2), (q, 2, 2), (q, base + u, 1), (p, base + v, 1), (p, q, 1)]);
        }
    }
    (next, edges)
}

/// Builds the unweighted instance. Terminals are vertices `0, 1, 2`.
pub fn gen_maxcut(source: &Graph) -> MwcInstance {
    let (nodes, edges) = weighted_gadget(source);
    let mut weight = vec![0; nodes];
    let mut heaviest = vec![0; nodes];
    for &(a, b, w) in &edges {
        weight[a] += w;
        weight[b] += w;
        for (x, y) in [(a, b), (b, a)] {
            if y < 3 {
                heaviest[x] = heaviest[x].max(w);
            }
        }
    }
    let mut g = Graph::new(3);
    let copies: Vec<Vec<usize>> = (0..nodes).map(|x| if x < 3 { vec![x] } else { (0..weight[x] - heaviest[x]).map(|_| g.add_vertex()).collect() }).collect();
    for &(a, b, w) in &edges {
        for _ in 0..w {
            let s = g.add_vertex();
            for &x in copies[a].iter().chain(&copies[b]) {
                g.add_edge(s, x);
            }
        }
    }
    MwcInstance::new(g, vec![0, 1, 2])
}

/// Max cut of `source` recovered from the optimum of [`gen_maxcut`].
pub fn decode_maxcut(source: &Graph, opt: usize) -> Option<usize> {
    (16 * source.m() + source.n()).checked_sub(opt)
}

/// Optimum the generated instance must have.
pub fn expected_opt(source: &Graph, maxcut: usize) -> usize {
    16 * source.m() + source.n() - maxcut
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2_instance_shape() {
        let inst = gen_maxcut(&source_graph("k2").unwrap());
        assert_eq!(inst.terminals, vec![0, 1, 2]);
        assert_eq!(inst.graph.n(), 63);
        assert!(inst.terminals.iter().all(|&s| inst.terminals.iter().all(|&t| !inst.graph.has_edge(s, t))));
    }

    #[test]
    fn every_source_builds() {
        for name in SOURCES {
            let h = source_graph(name).unwrap();
            assert_eq!(gen_maxcut(&h).terminals.len(), 3, "{name}");
        }
        assert!(source_graph("k9").is_none());
    }
}
