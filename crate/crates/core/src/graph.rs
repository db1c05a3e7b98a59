//! Labeled undirected graphs and vertex subsets.
//!
//! Labels are opaque whitespace-free strings mapped to dense indices in
//! insertion order. Everything downstream works on indices; labels only
//! matter at the I/O boundary.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Exhaustive balanced-cut search refuses graphs larger than this by default.
pub const BALANCED_CUT_CAP: usize = 20;

/// A subset of the vertices of a fixed graph, stored as a bitset over the
/// graph's vertex order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet {
            bits: FixedBitSet::with_capacity(universe),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        VertexSet { bits }
    }

    /// Panics if an index is outside the universe.
    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = VertexSet::empty(universe);
        for i in indices {
            set.insert(i);
        }
        set
    }

    /// Bit `i` of `mask` selects vertex `i`. Requires `universe <= 64`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= 64, "mask universe too large");
        VertexSet::from_indices(universe, (0..universe).filter(|&i| mask >> i & 1 == 1))
    }

    /// Inverse of [`VertexSet::from_mask`]; `None` past 64 vertices.
    pub fn mask(&self) -> Option<u64> {
        if self.universe() > 64 {
            return None;
        }
        Some(self.iter().fold(0u64, |acc, i| acc | 1 << i))
    }

    /// Size of the host vertex set this subset lives in.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits.contains(i)
    }

    pub fn insert(&mut self, i: usize) {
        self.bits.insert(i);
    }

    pub fn remove(&mut self, i: usize) {
        self.bits.set(i, false);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    /// Members in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn min(&self) -> Option<usize> {
        self.bits.minimum()
    }

    pub fn complement(&self) -> Self {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        VertexSet { bits }
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn union(&self, other: &VertexSet) -> Self {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        VertexSet { bits }
    }

    pub fn intersection(&self, other: &VertexSet) -> Self {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        VertexSet { bits }
    }

    pub fn difference(&self, other: &VertexSet) -> Self {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        VertexSet { bits }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Simple undirected graph with labeled vertices.
#[derive(Clone)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    // in input order and orientation, so text output round-trips
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    adj_bits: Vec<FixedBitSet>,
}

fn check_label(label: &str) -> Result<()> {
    if label.is_empty()
        || label.chars().any(char::is_whitespace)
        || label.starts_with('#')
        || label == "-"
    {
        return Err(Error::invalid(format!("unusable vertex label {label:?}")));
    }
    Ok(())
}

impl Graph {
    /// Builds a graph from labels and label pairs.
    pub fn new<S: AsRef<str>>(labels: &[S], edges: &[(S, S)]) -> Result<Self> {
        let labels: Vec<String> = labels.iter().map(|l| l.as_ref().to_string()).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            check_label(label)?;
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::invalid(format!("duplicate vertex label {label:?}")));
            }
        }
        let mut idx_edges = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let lookup = |l: &str| {
                index
                    .get(l)
                    .copied()
                    .ok_or_else(|| Error::invalid(format!("edge endpoint {l:?} is not a vertex")))
            };
            idx_edges.push((lookup(a.as_ref())?, lookup(b.as_ref())?));
        }
        Graph::assemble(labels, index, idx_edges)
    }

    /// Builds a graph on `0..n` with labels `"1"`, ..., `"n"`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        Graph::with_labels(labels, edges)
    }

    /// Builds a graph from owned labels and index pairs.
    pub fn with_labels(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            check_label(label)?;
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::invalid(format!("duplicate vertex label {label:?}")));
            }
        }
        Graph::assemble(labels, index, edges.to_vec())
    }

    fn assemble(
        labels: Vec<String>,
        index: HashMap<String, usize>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::invalid("graph has no vertices"));
        }
        let mut adj = vec![Vec::new(); n];
        let mut adj_bits = vec![FixedBitSet::with_capacity(n); n];
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(Error::invalid(format!("edge ({a}, {b}) out of range")));
            }
            if a == b {
                return Err(Error::invalid(format!("self-loop at {:?}", labels[a])));
            }
            if adj_bits[a].contains(b) {
                return Err(Error::invalid(format!(
                    "parallel edge {:?} {:?}",
                    labels[a], labels[b]
                )));
            }
            adj_bits[a].insert(b);
            adj_bits[b].insert(a);
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph {
            labels,
            index,
            edges,
            adj,
            adj_bits,
        })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::invalid(format!("unknown vertex {label:?}")))
    }

    /// Edges in input order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbors of `v`, sorted by index.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj_bits[a].contains(b)
    }

    pub fn vertex_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<VertexSet> {
        let mut set = VertexSet::empty(self.n());
        for l in labels {
            set.insert(self.index_of(l.as_ref())?);
        }
        Ok(set)
    }

    pub fn set_labels(&self, set: &VertexSet) -> Vec<&str> {
        set.iter().map(|v| self.label(v)).collect()
    }

    fn check_universe(&self, set: &VertexSet) -> Result<()> {
        if set.universe() != self.n() {
            return Err(Error::invalid(format!(
                "vertex set over {} vertices used with a graph on {}",
                set.universe(),
                self.n()
            )));
        }
        Ok(())
    }

    /// Components of the subgraph induced by `within`, ordered by their
    /// smallest member.
    pub(crate) fn components_within(&self, within: &VertexSet) -> Vec<VertexSet> {
        let n = self.n();
        let mut seen = FixedBitSet::with_capacity(n);
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in within.iter() {
            if seen.contains(start) {
                continue;
            }
            let mut comp = VertexSet::empty(n);
            seen.insert(start);
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                comp.insert(v);
                for &w in &self.adj[v] {
                    if within.contains(w) && !seen.contains(w) {
                        seen.insert(w);
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Partition of `V \ removed` into connected components, ordered by
    /// smallest member.
    pub fn connected_components(&self, removed: &VertexSet) -> Result<Vec<VertexSet>> {
        self.check_universe(removed)?;
        Ok(self.components_within(&removed.complement()))
    }

    /// Components of `G - removed` with at least two vertices.
    pub fn nontrivial_components(&self, removed: &VertexSet) -> Result<Vec<VertexSet>> {
        Ok(self
            .connected_components(removed)?
            .into_iter()
            .filter(|c| c.len() >= 2)
            .collect())
    }

    pub fn is_connected(&self) -> bool {
        self.components_within(&VertexSet::full(self.n())).len() == 1
    }

    /// True when `G[set]` is nonempty and connected.
    pub fn induces_connected(&self, set: &VertexSet) -> bool {
        set.universe() == self.n() && self.components_within(set).len() == 1
    }

    /// The subgraph induced by `u`, keeping the relative vertex order and the
    /// relative edge order.
    pub fn induced_subgraph(&self, u: &VertexSet) -> Result<Graph> {
        self.check_universe(u)?;
        let members = u.to_vec();
        let mut position = vec![usize::MAX; self.n()];
        for (k, &v) in members.iter().enumerate() {
            position[v] = k;
        }
        let labels = members.iter().map(|&v| self.labels[v].clone()).collect();
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|&&(a, b)| u.contains(a) && u.contains(b))
            .map(|&(a, b)| (position[a], position[b]))
            .collect();
        Graph::with_labels(labels, &edges)
    }

    /// Edges with exactly one endpoint in `x`, in edge order.
    pub fn cut_edges(&self, x: &VertexSet) -> Result<Vec<(usize, usize)>> {
        self.check_universe(x)?;
        Ok(self
            .edges
            .iter()
            .copied()
            .filter(|&(a, b)| x.contains(a) != x.contains(b))
            .collect())
    }

    /// Size of a minimum `s`-`t` cut, by unit-capacity augmenting paths.
    pub fn min_st_cut_value(&self, s: usize, t: usize) -> Result<usize> {
        let n = self.n();
        if s >= n || t >= n {
            return Err(Error::invalid("terminal out of range"));
        }
        if s == t {
            return Err(Error::invalid("s and t coincide"));
        }
        if !self.is_connected() {
            return Err(Error::invalid("graph is disconnected"));
        }
        // residual capacity per directed arc; each undirected edge is a pair
        // of opposite arcs with capacity one each
        let mut arc_of: HashMap<(usize, usize), usize> = HashMap::new();
        let mut cap = Vec::with_capacity(2 * self.m());
        for &(a, b) in &self.edges {
            arc_of.insert((a, b), cap.len());
            cap.push(1i32);
            arc_of.insert((b, a), cap.len());
            cap.push(1i32);
        }
        let mut flow = 0;
        loop {
            let mut pred = vec![usize::MAX; n];
            pred[s] = s;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                if v == t {
                    break;
                }
                for &w in &self.adj[v] {
                    if pred[w] == usize::MAX && cap[arc_of[&(v, w)]] > 0 {
                        pred[w] = v;
                        queue.push_back(w);
                    }
                }
            }
            if pred[t] == usize::MAX {
                return Ok(flow);
            }
            let mut v = t;
            while v != s {
                let p = pred[v];
                cap[arc_of[&(p, v)]] -= 1;
                cap[arc_of[&(v, p)]] += 1;
                v = p;
            }
            flow += 1;
        }
    }

    /// Searches for a minimum `s`-`t` cut `X` with `|X| = |V \ X|`, with the
    /// default size cap.
    pub fn balanced_min_cut(&self, s: usize, t: usize) -> Result<Option<VertexSet>> {
        self.balanced_min_cut_capped(s, t, BALANCED_CUT_CAP)
    }

    /// Exhaustive search over all `s`-`t` cuts of half size. The witness is
    /// the first hit when the free vertices are enumerated as binary numbers
    /// in vertex order.
    pub fn balanced_min_cut_capped(
        &self,
        s: usize,
        t: usize,
        cap: usize,
    ) -> Result<Option<VertexSet>> {
        let n = self.n();
        if n % 2 == 1 {
            return Err(Error::invalid("balanced cuts need an even vertex count"));
        }
        if n > cap {
            return Err(Error::limit(format!(
                "balanced cut search over {n} vertices exceeds the cap of {cap}"
            )));
        }
        let lambda = self.min_st_cut_value(s, t)?;
        let free: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
        let want = n / 2 - 1;
        for mask in 0u64..(1u64 << free.len()) {
            if mask.count_ones() as usize != want {
                continue;
            }
            let mut x = VertexSet::empty(n);
            x.insert(s);
            for (k, &v) in free.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    x.insert(v);
                }
            }
            if self.cut_edges(&x)?.len() == lambda {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }

    /// Parses the text format: `n m`, then `n` labels, then `m` label pairs.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let nums: Vec<&str> = header.split_whitespace().collect();
        if nums.len() != 2 {
            return Err(Error::parse(hl, "header must be `n m`"));
        }
        let n: usize = nums[0].parse().map_err(|_| Error::parse(hl, "bad vertex count"))?;
        let m: usize = nums[1].parse().map_err(|_| Error::parse(hl, "bad edge count"))?;
        let mut labels = Vec::with_capacity(n);
        for _ in 0..n {
            let (ln, l) = lines
                .next()
                .ok_or_else(|| Error::parse(hl, format!("expected {n} vertex labels")))?;
            if l.split_whitespace().count() != 1 {
                return Err(Error::parse(ln, "vertex line must hold exactly one label"));
            }
            labels.push(l);
        }
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let (ln, l) = lines
                .next()
                .ok_or_else(|| Error::parse(hl, format!("expected {m} edges")))?;
            let parts: Vec<&str> = l.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(Error::parse(ln, "edge line must hold two labels"));
            }
            edges.push((parts[0], parts[1]));
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::parse(ln, "trailing content"));
        }
        Graph::new(&labels, &edges).map_err(|e| match e {
            Error::InvalidArgument(msg) => Error::parse(hl, msg),
            other => other,
        })
    }

    /// Serializes to the text format accepted by [`Graph::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.m());
        for l in &self.labels {
            out.push_str(l);
            out.push('\n');
        }
        for &(a, b) in &self.edges {
            out.push_str(&self.labels[a]);
            out.push(' ');
            out.push_str(&self.labels[b]);
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("labels", &self.labels)
            .field("edges", &self.edges)
            .finish()
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.edges == other.edges
    }
}

impl Eq for Graph {}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    fn k4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn claw() -> Graph {
        Graph::new(&["c", "a", "b", "d"], &[("c", "a"), ("c", "b"), ("c", "d")]).unwrap()
    }

    fn labels_of(g: &Graph, sets: &[VertexSet]) -> Vec<Vec<String>> {
        sets.iter()
            .map(|s| g.set_labels(s).into_iter().map(String::from).collect())
            .collect()
    }

    #[test]
    fn rejects_malformed_graphs() {
        assert!(Graph::from_edges(2, &[(0, 0)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(&["a", "b"], &[("a", "z")]).is_err());
        assert!(Graph::new(&["a", "a"], &[]).is_err());
        assert!(Graph::new(&["a b"], &[]).is_err());
    }

    #[test]
    fn components_examples() {
        let g = path3();
        let comps = g.connected_components(&g.vertex_set(&["2"]).unwrap()).unwrap();
        assert_eq!(labels_of(&g, &comps), vec![vec!["1"], vec!["3"]]);

        let g = k4();
        let comps = g.connected_components(&VertexSet::empty(4)).unwrap();
        assert_eq!(comps, vec![VertexSet::full(4)]);

        let g = claw();
        let comps = g.connected_components(&g.vertex_set(&["c"]).unwrap()).unwrap();
        assert_eq!(labels_of(&g, &comps), vec![vec!["a"], vec!["b"], vec!["d"]]);
    }

    #[test]
    fn components_reject_foreign_sets() {
        let g = path3();
        assert!(matches!(
            g.connected_components(&VertexSet::empty(5)),
            Err(Error::InvalidArgument(_))
        ));
        assert!(g.vertex_set(&["9"]).is_err());
    }

    #[test]
    fn nontrivial_examples() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let comps = g.nontrivial_components(&g.vertex_set(&["2"]).unwrap()).unwrap();
        assert_eq!(labels_of(&g, &comps), vec![vec!["3", "4"]]);
        assert!(g.nontrivial_components(&VertexSet::full(4)).unwrap().is_empty());
        let c = claw();
        assert!(c
            .nontrivial_components(&c.vertex_set(&["c"]).unwrap())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn induced_subgraph_examples() {
        let g = k4();
        let sub = g.induced_subgraph(&g.vertex_set(&["1", "2"]).unwrap()).unwrap();
        assert_eq!(sub.n(), 2);
        assert_eq!(sub.m(), 1);

        let g = path3();
        let sub = g.induced_subgraph(&g.vertex_set(&["1", "3"]).unwrap()).unwrap();
        assert_eq!(sub.labels(), &["1", "3"]);
        assert_eq!(sub.m(), 0);

        assert_eq!(g.induced_subgraph(&VertexSet::full(3)).unwrap(), g);
    }

    #[test]
    fn cut_edge_examples() {
        let g = path3();
        assert_eq!(g.cut_edges(&g.vertex_set(&["1"]).unwrap()).unwrap(), vec![(0, 1)]);
        assert!(g.cut_edges(&VertexSet::empty(3)).unwrap().is_empty());
        let g = k4();
        assert_eq!(g.cut_edges(&g.vertex_set(&["1", "2"]).unwrap()).unwrap().len(), 4);
    }

    #[test]
    fn min_cut_examples() {
        let g = path3();
        assert_eq!(g.min_st_cut_value(0, 2).unwrap(), 1);
        let g = k4();
        for s in 0..4 {
            for t in 0..4 {
                if s != t {
                    assert_eq!(g.min_st_cut_value(s, t).unwrap(), 3);
                }
            }
        }
        let c4 = Graph::new(
            &["s", "a", "t", "b"],
            &[("s", "a"), ("a", "t"), ("t", "b"), ("b", "s")],
        )
        .unwrap();
        assert_eq!(c4.min_st_cut_value(0, 2).unwrap(), 2);
        assert!(c4.min_st_cut_value(0, 0).is_err());
        let split = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(split.min_st_cut_value(0, 1).is_err());
    }

    #[test]
    fn balanced_cut_examples() {
        let c4 = Graph::new(
            &["s", "a", "t", "b"],
            &[("s", "a"), ("a", "t"), ("t", "b"), ("b", "s")],
        )
        .unwrap();
        let x = c4.balanced_min_cut(0, 2).unwrap().unwrap();
        assert_eq!(c4.set_labels(&x), vec!["s", "a"]);

        let p = Graph::new(&["s", "a", "b", "t"], &[("s", "a"), ("a", "b"), ("b", "t")]).unwrap();
        let x = p.balanced_min_cut(0, 3).unwrap().unwrap();
        assert_eq!(p.set_labels(&x), vec!["s", "a"]);

        let star = Graph::new(&["s", "t", "a", "b"], &[("s", "t"), ("s", "a"), ("s", "b")]).unwrap();
        assert_eq!(star.balanced_min_cut(0, 1).unwrap(), None);

        assert!(path3().balanced_min_cut(0, 2).is_err());
        assert!(matches!(
            c4.balanced_min_cut_capped(0, 2, 2),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn text_round_trip_is_exact() {
        let text = "4 3\nc\na\nb\nd\nc a\nb c\nc d\n";
        let g = Graph::parse(text).unwrap();
        assert_eq!(g.to_text(), text);
        let commented = "# claw\n4 3\nc\na\n# mid\nb\nd\nc a\nb c\nc d\n";
        assert_eq!(Graph::parse(commented).unwrap().to_text(), text);
    }

    #[test]
    fn parse_errors_carry_lines() {
        assert!(matches!(Graph::parse(""), Err(Error::Parse { .. })));
        assert!(matches!(Graph::parse("2 1\na\nb\na c\n"), Err(Error::Parse { .. })));
        match Graph::parse("2 1\na\nb c\na b\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(Graph::parse("1 0\na\nextra\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn mask_round_trip() {
        let s = VertexSet::from_mask(5, 0b10110);
        assert_eq!(s.to_vec(), vec![1, 2, 4]);
        assert_eq!(s.mask(), Some(0b10110));
        assert_eq!(s.complement().to_vec(), vec![0, 3]);
    }
}
