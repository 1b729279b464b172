//! Undirected simple graphs and the instance file formats.

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: vertex id {id} out of range for n = {n}")]
    OutOfRange { line: usize, id: usize, n: usize },
    #[error("line {line}: terminal {id} listed twice")]
    DuplicateTerminal { line: usize, id: usize },
    #[error("unexpected end of input, expected {expected}")]
    Truncated { expected: String },
}

/// Simple undirected graph on vertices `0..n` with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], m: 0 }
    }

    /// Builds a graph from an edge list, dropping loops and duplicates.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u},{v}) out of range for n = {n}");
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        let mut m = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            m += list.len();
        }
        Graph { adj, m: m / 2 }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    /// Inserts `{u, v}`; returns false for loops and existing edges.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        if u == v {
            return false;
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                self.m += 1;
                true
            }
        }
    }

    /// Edges as pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Removes all edges at `v`, keeping `v` as an isolated vertex.
    pub fn isolate(&mut self, v: usize) {
        let nbrs = std::mem::take(&mut self.adj[v]);
        for &u in &nbrs {
            let pos = self.adj[u].binary_search(&v).unwrap();
            self.adj[u].remove(pos);
        }
        self.m -= nbrs.len();
    }

    /// Makes `v` undeletable in a separation sense: its neighbourhood becomes
    /// a clique and `v` is isolated.
    pub fn bypass(&mut self, v: usize) {
        let nbrs = self.adj[v].clone();
        self.isolate(v);
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                self.add_edge(a, b);
            }
        }
    }

    /// Subgraph induced by `keep` (in the given order); returns the graph and
    /// the map from new ids to old ids.
    pub fn induced(&self, keep: &[usize]) -> (Graph, Vec<usize>) {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let edges = keep.iter().enumerate().flat_map(|(i, &v)| {
            let index = &index;
            self.adj[v].iter().filter(move |&&u| index[u] != usize::MAX && i < index[u]).map(move |&u| (i, index[u]))
        });
        (Graph::from_edges(keep.len(), edges.collect::<Vec<_>>()), keep.to_vec())
    }

    /// Graph with the vertices in `removed` deleted; returns the old ids of
    /// the surviving vertices, in increasing order.
    pub fn without(&self, removed: &[bool]) -> (Graph, Vec<usize>) {
        let keep: Vec<usize> = (0..self.n()).filter(|&v| !removed[v]).collect();
        self.induced(&keep)
    }

    pub fn bfs_dist(&self, s: usize, blocked: &[bool]) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        let mut q = VecDeque::new();
        dist[s] = 0;
        q.push_back(s);
        while let Some(u) = q.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX && !blocked[w] {
                    dist[w] = dist[u] + 1;
                    q.push_back(w);
                }
            }
        }
        dist
    }
}

/// Partition of the vertices into maximal connected sets, each sorted,
/// ordered by smallest member.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    components_avoiding(g, &vec![false; g.n()])
}

/// Components of `g - removed`.
pub fn components_avoiding(g: &Graph, removed: &[bool]) -> Vec<Vec<usize>> {
    let mut comp = vec![usize::MAX; g.n()];
    let mut out = Vec::new();
    for s in 0..g.n() {
        if comp[s] != usize::MAX || removed[s] {
            continue;
        }
        let id = out.len();
        let mut members = vec![s];
        comp[s] = id;
        let mut i = 0;
        while i < members.len() {
            let u = members[i];
            i += 1;
            for &w in g.neighbors(u) {
                if comp[w] == usize::MAX && !removed[w] {
                    comp[w] = id;
                    members.push(w);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// 2-colouring of `g - removed`, or `None` if some component has an odd cycle.
pub fn two_coloring(g: &Graph, removed: &[bool]) -> Option<Vec<u8>> {
    let mut color = vec![u8::MAX; g.n()];
    for s in 0..g.n() {
        if removed[s] || color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if removed[w] {
                    continue;
                }
                if color[w] == u8::MAX {
                    color[w] = 1 - color[u];
                    stack.push(w);
                } else if color[w] == color[u] {
                    return None;
                }
            }
        }
    }
    Some(color)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OctInstance {
    pub graph: Graph,
    pub budget: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MwcInstance {
    pub graph: Graph,
    pub terminals: Vec<usize>,
    pub budget: Option<usize>,
}

impl MwcInstance {
    pub fn new(graph: Graph, terminals: Vec<usize>) -> Self {
        let mut seen = vec![false; graph.n()];
        for &t in &terminals {
            assert!(t < graph.n() && !seen[t], "terminal {t} invalid or repeated");
            seen[t] = true;
        }
        MwcInstance { graph, terminals, budget: None }
    }

    pub fn terminal_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.graph.n()];
        for &t in &self.terminals {
            mask[t] = true;
        }
        mask
    }
}

/// `X` is an odd cycle transversal of `g`.
pub fn is_oct(g: &Graph, x: &[usize]) -> bool {
    let mut removed = vec![false; g.n()];
    for &v in x {
        removed[v] = true;
    }
    two_coloring(g, &removed).is_some()
}

/// `X` avoids the terminals and leaves every component of `G - X` with at most
/// one terminal.
pub fn is_multiway_cut(inst: &MwcInstance, x: &[usize]) -> bool {
    let term = inst.terminal_mask();
    let mut removed = vec![false; inst.graph.n()];
    for &v in x {
        if term[v] {
            return false;
        }
        removed[v] = true;
    }
    components_avoiding(&inst.graph, &removed)
        .iter()
        .all(|c| c.iter().filter(|&&v| term[v]).count() <= 1)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { inner: text.lines().enumerate() }
    }

    /// Next non-blank, non-comment line as (1-based number, fields).
    fn next_fields(&mut self, expected: &str) -> Result<(usize, Vec<&'a str>), ParseError> {
        for (i, line) in self.inner.by_ref() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with('c') && line[1..].starts_with(char::is_whitespace) {
                continue;
            }
            return Ok((i + 1, line.split_whitespace().collect()));
        }
        Err(ParseError::Truncated { expected: expected.to_string() })
    }
}

fn parse_nums(line: usize, fields: &[&str], count: usize) -> Result<Vec<usize>, ParseError> {
    if fields.len() != count {
        return Err(ParseError::Malformed { line, msg: format!("expected {count} integers, found {}", fields.len()) });
    }
    fields
        .iter()
        .map(|f| f.parse::<usize>().map_err(|_| ParseError::Malformed { line, msg: format!("not a nonnegative integer: {f:?}") }))
        .collect()
}

/// Parses "n m" followed by m edge lines. Ids may be 0- or 1-based; a file
/// using id `n` and never id 0 is read as 1-based. The flag reports this.
pub fn parse_oct_detailed(text: &str) -> Result<(OctInstance, bool), ParseError> {
    let mut lines = Lines::new(text);
    let (ln, f) = lines.next_fields("header \"n m\"")?;
    let hdr = parse_nums(ln, &f, 2)?;
    let (n, m) = (hdr[0], hdr[1]);
    let mut raw = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, f) = lines.next_fields("edge line")?;
        let e = parse_nums(ln, &f, 2)?;
        raw.push((ln, e[0], e[1]));
    }
    let max_id = raw.iter().map(|&(_, u, v)| u.max(v)).max().unwrap_or(0);
    let has_zero = raw.iter().any(|&(_, u, v)| u == 0 || v == 0);
    let one_based = max_id == n && n > 0 && !has_zero;
    let shift = usize::from(one_based);
    let mut edges = Vec::with_capacity(m);
    for (ln, u, v) in raw {
        for id in [u, v] {
            if id < shift || id - shift >= n {
                return Err(ParseError::OutOfRange { line: ln, id, n });
            }
        }
        edges.push((u - shift, v - shift));
    }
    if one_based {
        log::warn!("vertex ids look 1-based (max id = n = {n}); shifted to 0-based");
    }
    Ok((OctInstance { graph: Graph::from_edges(n, edges), budget: None }, one_based))
}

pub fn parse_oct(text: &str) -> Result<OctInstance, ParseError> {
    parse_oct_detailed(text).map(|(inst, _)| inst)
}

pub fn write_oct(inst: &OctInstance) -> String {
    let g = &inst.graph;
    let mut out = format!("{} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

/// Parses "n m t", t terminal lines, then m edge lines; ids are 0-based.
pub fn parse_mwc(text: &str) -> Result<MwcInstance, ParseError> {
    let mut lines = Lines::new(text);
    let (ln, f) = lines.next_fields("header \"n m t\"")?;
    let hdr = parse_nums(ln, &f, 3)?;
    let (n, m, t) = (hdr[0], hdr[1], hdr[2]);
    let mut terminals = Vec::with_capacity(t);
    let mut seen = vec![false; n];
    for _ in 0..t {
        let (ln, f) = lines.next_fields("terminal line")?;
        let id = parse_nums(ln, &f, 1)?[0];
        if id >= n {
            return Err(ParseError::OutOfRange { line: ln, id, n });
        }
        if seen[id] {
            return Err(ParseError::DuplicateTerminal { line: ln, id });
        }
        seen[id] = true;
        terminals.push(id);
    }
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, f) = lines.next_fields("edge line")?;
        let e = parse_nums(ln, &f, 2)?;
        for id in [e[0], e[1]] {
            if id >= n {
                return Err(ParseError::OutOfRange { line: ln, id, n });
            }
        }
        edges.push((e[0], e[1]));
    }
    Ok(MwcInstance { graph: Graph::from_edges(n, edges), terminals, budget: None })
}

pub fn write_mwc(inst: &MwcInstance) -> String {
    let g = &inst.graph;
    let mut out = format!("{} {} {}\n", g.n(), g.m(), inst.terminals.len());
    for t in &inst.terminals {
        writeln!(out, "{t}").unwrap();
    }
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

/// `.opt` companion: size on the first line, sorted ids on the second.
pub fn write_solution(solution: &[usize]) -> String {
    let mut ids = solution.to_vec();
    ids.sort_unstable();
    let list: Vec<String> = ids.iter().map(|v| v.to_string()).collect();
    format!("{}\n{}\n", ids.len(), list.join(" "))
}

pub fn parse_solution(text: &str) -> Result<Vec<usize>, ParseError> {
    let mut it = text.lines().enumerate();
    let (_, first) = it.next().ok_or(ParseError::Truncated { expected: "solution size".into() })?;
    let size: usize = first
        .trim()
        .parse()
        .map_err(|_| ParseError::Malformed { line: 1, msg: format!("bad solution size {first:?}") })?;
    let ids: Vec<usize> = match it.next() {
        Some((_, line)) => line
            .split_whitespace()
            .map(|f| f.parse().map_err(|_| ParseError::Malformed { line: 2, msg: format!("bad vertex id {f:?}") }))
            .collect::<Result<_, _>>()?,
        None => Vec::new(),
    };
    if ids.len() != size {
        return Err(ParseError::Malformed { line: 2, msg: format!("size {size} but {} ids listed", ids.len()) });
    }
    Ok(ids)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oct_triangle_and_dedup() {
        let tri = parse_oct("3 3\n0 1\n1 2\n2 0").unwrap();
        assert_eq!((tri.graph.n(), tri.graph.m()), (3, 3));
        assert!(!is_oct(&tri.graph, &[]));
        let dup = parse_oct("2 2\n0 1\n0 1").unwrap();
        assert_eq!(dup.graph.m(), 1);
        let c4 = parse_oct("4 4\n0 1\n1 2\n2 3\n3 0").unwrap();
        assert!(is_oct(&c4.graph, &[]));
    }

    #[test]
    fn oct_one_based_heuristic() {
        let (inst, one) = parse_oct_detailed("3 3\n1 2\n2 3\n3 1\n").unwrap();
        assert!(one);
        assert!(inst.graph.has_edge(0, 2));
        let (_, zero) = parse_oct_detailed("3 2\n0 1\n1 2\n").unwrap();
        assert!(!zero);
    }

    #[test]
    fn oct_errors_name_the_line() {
        assert_eq!(parse_oct("3 2\n0 1\n1 x\n"), Err(ParseError::Malformed { line: 3, msg: "not a nonnegative integer: \"x\"".into() }));
        assert!(matches!(parse_oct("3 1\n0 7\n"), Err(ParseError::OutOfRange { line: 2, id: 7, n: 3 })));
        assert!(matches!(parse_oct("3 2\n0 1\n"), Err(ParseError::Truncated { .. })));
        // both 0 and n present
        assert!(matches!(parse_oct("3 2\n0 1\n1 3\n"), Err(ParseError::OutOfRange { line: 3, .. })));
    }

    #[test]
    fn mwc_roundtrip_and_errors() {
        let text = "4 3 2\n0\n3\n0 1\n1 2\n2 3\n";
        let inst = parse_mwc(text).unwrap();
        assert_eq!(inst.terminals, vec![0, 3]);
        assert_eq!(write_mwc(&inst), text);
        assert!(matches!(parse_mwc("3 0 2\n1\n1\n"), Err(ParseError::DuplicateTerminal { line: 3, id: 1 })));
        assert!(matches!(parse_mwc("3 0 1\n3\n"), Err(ParseError::OutOfRange { line: 2, id: 3, n: 3 })));
    }

    #[test]
    fn solution_roundtrip() {
        let s = write_solution(&[4, 1]);
        assert_eq!(s, "2\n1 4\n");
        assert_eq!(parse_solution(&s).unwrap(), vec![1, 4]);
        assert_eq!(parse_solution("0\n\n").unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn components() {
        assert_eq!(connected_components(&Graph::new(3)).len(), 3);
        let tri = Graph::from_edges(3, [(0, 1), (1, 2), (2, 0)]);
        assert_eq!(connected_components(&tri).len(), 1);
        let tri_iso = Graph::from_edges(4, [(0, 1), (1, 2), (2, 0)]);
        assert_eq!(connected_components(&tri_iso), vec![vec![0, 1, 2], vec![3]]);
    }

    #[test]
    fn bypass_makes_clique() {
        let mut star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]);
        star.bypass(0);
        assert_eq!(star.degree(0), 0);
        assert_eq!(star.m(), 3);
        assert!(star.has_edge(1, 2) && star.has_edge(2, 3));
    }
}
