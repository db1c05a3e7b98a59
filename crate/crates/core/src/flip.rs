//! The flip graph of a graph associahedron, searched as an implicit graph.
//!
//! Vertices are elimination trees and edges are swaps. Searches deduplicate
//! trees by [`ElimTree::canonical_key`] and expand frontiers in key order,
//! so witnesses do not depend on hash iteration order or thread count.

use std::cmp::Reverse;
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::elim::{ElimTree, Projector, SwapMove, VertexOrder};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::par::{self, Exec};

type Key = Vec<u8>;

/// Explicit caps on search effort. Exceeding either is a hard error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Maximum number of distinct trees held by a search.
    pub node_budget: usize,
    /// Rough bound on bytes spent on visited-set entries.
    pub memory_budget: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            node_budget: 10_000_000,
            memory_budget: 8 << 30,
        }
    }
}

impl SearchLimits {
    pub fn with_nodes(node_budget: usize) -> Self {
        SearchLimits {
            node_budget,
            ..Default::default()
        }
    }

    fn check(&self, nodes: usize, n: usize) -> Result<()> {
        if nodes > self.node_budget {
            return Err(Error::limit(format!(
                "search visited more than {} trees",
                self.node_budget
            )));
        }
        // key + stored tree + hash-map overhead, per entry
        let per_node = 2 * n + n * std::mem::size_of::<Option<usize>>() + 64;
        if nodes.saturating_mul(per_node) > self.memory_budget {
            return Err(Error::limit(format!(
                "search would exceed the memory budget of {} bytes",
                self.memory_budget
            )));
        }
        Ok(())
    }
}

/// Strictly positive vertex weights of arbitrary size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightFn(Vec<BigUint>);

impl WeightFn {
    pub fn new(weights: Vec<BigUint>) -> Result<Self> {
        if weights.iter().any(Zero::is_zero) {
            return Err(Error::invalid("weights must be positive"));
        }
        Ok(WeightFn(weights))
    }

    pub fn uniform(n: usize) -> Self {
        WeightFn(vec![BigUint::one(); n])
    }

    pub fn from_u64(weights: &[u64]) -> Result<Self> {
        WeightFn::new(weights.iter().map(|&w| BigUint::from(w)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: usize) -> &BigUint {
        &self.0[v]
    }

    pub fn as_slice(&self) -> &[BigUint] {
        &self.0
    }

    /// `w(u) * w(v)` for a move on `u` and `v`.
    pub fn swap_weight(&self, m: SwapMove) -> BigUint {
        &self.0[m.parent] * &self.0[m.child]
    }

    pub fn max(&self) -> BigUint {
        self.0.iter().max().cloned().unwrap_or_default()
    }

    /// Weights as machine integers, when they all fit.
    pub fn to_usize(&self) -> Option<Vec<usize>> {
        self.0
            .iter()
            .map(|w| usize::try_from(w).ok())
            .collect()
    }

    /// One `label weight` line per vertex, any order, every vertex once.
    pub fn parse(g: &Graph, text: &str) -> Result<Self> {
        let mut weights: Vec<Option<BigUint>> = vec![None; g.n()];
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(Error::parse(i + 1, "weight line must be `label weight`"));
            }
            let v = g
                .index_of(parts[0])
                .map_err(|e| Error::parse(i + 1, e.to_string()))?;
            let w: BigUint = parts[1]
                .parse()
                .map_err(|_| Error::parse(i + 1, "weight is not a nonnegative integer"))?;
            if w.is_zero() {
                return Err(Error::parse(i + 1, "weights must be positive"));
            }
            if weights[v].replace(w).is_some() {
                return Err(Error::parse(i + 1, format!("duplicate weight for {:?}", parts[0])));
            }
        }
        let weights = weights
            .into_iter()
            .enumerate()
            .map(|(v, w)| w.ok_or_else(|| Error::parse(0, format!("no weight for {:?}", g.label(v)))))
            .collect::<Result<Vec<_>>>()?;
        Ok(WeightFn(weights))
    }

    pub fn to_text(&self, g: &Graph) -> String {
        let mut out = String::new();
        for (v, w) in self.0.iter().enumerate() {
            let _ = writeln!(out, "{} {}", g.label(v), w);
        }
        out
    }
}

/// A start tree plus a list of swaps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconfigSequence {
    pub start: ElimTree,
    pub moves: Vec<SwapMove>,
}

impl ReconfigSequence {
    pub fn new(start: ElimTree, moves: Vec<SwapMove>) -> Self {
        ReconfigSequence { start, moves }
    }

    pub fn empty(start: ElimTree) -> Self {
        ReconfigSequence::new(start, Vec::new())
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Every tree along the sequence, starting with `start`.
    pub fn replay(&self, g: &Graph) -> Result<Vec<ElimTree>> {
        let mut trees = Vec::with_capacity(self.moves.len() + 1);
        trees.push(self.start.clone());
        for &m in &self.moves {
            let next = trees.last().expect("nonempty").apply_swap(g, m)?;
            trees.push(next);
        }
        Ok(trees)
    }

    /// Final tree, or an error at the first illegal move.
    pub fn end(&self, g: &Graph) -> Result<ElimTree> {
        let mut t = self.start.clone();
        for &m in &self.moves {
            t = t.apply_swap(g, m)?;
        }
        Ok(t)
    }

    /// The same walk traversed backwards.
    pub fn reversed(&self, g: &Graph) -> Result<ReconfigSequence> {
        let end = self.end(g)?;
        let moves = self.moves.iter().rev().map(|m| m.reversed()).collect();
        Ok(ReconfigSequence::new(end, moves))
    }

    /// One `parent child` label pair per line.
    pub fn moves_to_text(&self, g: &Graph) -> String {
        let mut out = String::new();
        for m in &self.moves {
            let _ = writeln!(out, "{} {}", g.label(m.parent), g.label(m.child));
        }
        out
    }

    pub fn parse_moves(g: &Graph, text: &str) -> Result<Vec<SwapMove>> {
        let mut moves = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(Error::parse(i + 1, "move line must be `parent child`"));
            }
            let idx = |l: &str| g.index_of(l).map_err(|e| Error::parse(i + 1, e.to_string()));
            moves.push(SwapMove::new(idx(parts[0])?, idx(parts[1])?));
        }
        Ok(moves)
    }

    /// Moves as label pairs, for JSON output.
    pub fn label_pairs(&self, g: &Graph) -> Vec<[String; 2]> {
        self.moves
            .iter()
            .map(|m| [g.label(m.parent).to_string(), g.label(m.child).to_string()])
            .collect()
    }
}

/// Replays the moves. Returns whether all were legal, together with the
/// last tree reached.
pub fn validate_sequence(g: &Graph, seq: &ReconfigSequence) -> (bool, ElimTree) {
    let mut t = seq.start.clone();
    if !t.is_valid(g) {
        return (false, t);
    }
    for &m in &seq.moves {
        match t.apply_swap(g, m) {
            Ok(next) => t = next,
            Err(_) => return (false, t),
        }
    }
    (true, t)
}

/// Sum of `w(u) * w(v)` over the moves of a legal sequence.
pub fn weighted_length(g: &Graph, seq: &ReconfigSequence, w: &WeightFn) -> Result<BigUint> {
    if w.len() != g.n() {
        return Err(Error::invalid("weight function does not match the graph"));
    }
    let (ok, _) = validate_sequence(g, seq);
    if !ok {
        return Err(Error::invalid("sequence contains an illegal move"));
    }
    Ok(seq.moves.iter().map(|&m| w.swap_weight(m)).sum())
}

fn check_endpoints(g: &Graph, trees: &[&ElimTree]) -> Result<()> {
    for t in trees {
        if !t.is_valid(g) {
            return Err(Error::invalid("tree is not an elimination tree of the graph"));
        }
    }
    Ok(())
}

/// All elimination trees of a connected graph, found by breadth-first
/// search over swaps from the tree of the identity ordering.
pub fn enumerate_all(g: &Graph, limits: &SearchLimits) -> Result<Vec<ElimTree>> {
    let start = ElimTree::from_ordering(g, &VertexOrder::new(g.n(), (0..g.n()).collect())?)?;
    let mut seen: HashMap<Key, usize> = HashMap::new();
    seen.insert(start.canonical_key(), 0);
    let mut trees = vec![start];
    let mut head = 0;
    while head < trees.len() {
        let t = trees[head].clone();
        head += 1;
        for m in t.swaps() {
            let next = t.apply_swap(g, m)?;
            let key = next.canonical_key();
            if let Entry::Vacant(slot) = seen.entry(key) {
                slot.insert(trees.len());
                trees.push(next);
                limits.check(trees.len(), g.n())?;
            }
        }
    }
    Ok(trees)
}

/// Distance with search statistics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub distance: usize,
    pub expanded: usize,
}

/// Combinatorial distance between two trees (bidirectional BFS).
pub fn distance(
    g: &Graph,
    t1: &ElimTree,
    t2: &ElimTree,
    limits: &SearchLimits,
    exec: Exec,
) -> Result<SearchOutcome> {
    let (seq, expanded) = shortest_path(g, t1, t2, limits, exec)?;
    Ok(SearchOutcome {
        distance: seq.len(),
        expanded,
    })
}

struct Side {
    // key -> (predecessor key, move from predecessor, depth)
    visited: HashMap<Key, (Option<Key>, Option<SwapMove>, usize)>,
    frontier: Vec<(Key, ElimTree)>,
    depth: usize,
}

impl Side {
    fn new(t: &ElimTree) -> Self {
        let key = t.canonical_key();
        let mut visited = HashMap::new();
        visited.insert(key.clone(), (None, None, 0));
        Side {
            visited,
            frontier: vec![(key, t.clone())],
            depth: 0,
        }
    }

    /// Moves from the side's root tree to `key`.
    fn moves_to(&self, key: &Key) -> Vec<SwapMove> {
        let mut moves = Vec::new();
        let mut cur = key.clone();
        while let Some((Some(prev), Some(m), _)) = self.visited.get(&cur) {
            moves.push(*m);
            cur = prev.clone();
        }
        moves.reverse();
        moves
    }
}

/// A shortest reconfiguration sequence from `t1` to `t2`, plus the number of
/// expanded trees.
///
/// Levels are expanded alternately from whichever side has the smaller
/// frontier. Among the meeting points found in the first level that meets,
/// the shortest total wins, then the smallest key.
pub fn shortest_path(
    g: &Graph,
    t1: &ElimTree,
    t2: &ElimTree,
    limits: &SearchLimits,
    exec: Exec,
) -> Result<(ReconfigSequence, usize)> {
    check_endpoints(g, &[t1, t2])?;
    if t1 == t2 {
        return Ok((ReconfigSequence::empty(t1.clone()), 0));
    }
    let mut fwd = Side::new(t1);
    let mut bwd = Side::new(t2);
    let mut expanded = 0;
    loop {
        if fwd.frontier.is_empty() || bwd.frontier.is_empty() {
            return Err(Error::invalid("trees are not connected in the flip graph"));
        }
        let forward = fwd.frontier.len() <= bwd.frontier.len();
        let (this, other) = if forward {
            (&mut fwd, &bwd)
        } else {
            (&mut bwd, &fwd)
        };
        let frontier = std::mem::take(&mut this.frontier);
        expanded += frontier.len();
        let neighbors: Vec<Vec<(SwapMove, ElimTree)>> = par::try_map(exec, &frontier, |(_, t)| {
            t.swaps()
                .into_iter()
                .map(|m| t.apply_swap(g, m).map(|n| (m, n)))
                .collect::<Result<Vec<_>>>()
        })?;
        let depth = this.depth + 1;
        let mut next = Vec::new();
        let mut best: Option<(usize, Key)> = None;
        for ((pkey, _), list) in frontier.iter().zip(neighbors) {
            for (m, t) in list {
                let key = t.canonical_key();
                if this.visited.contains_key(&key) {
                    continue;
                }
                this.visited.insert(key.clone(), (Some(pkey.clone()), Some(m), depth));
                if let Some(&(_, _, d)) = other.visited.get(&key) {
                    let total = depth + d;
                    let better = match &best {
                        None => true,
                        Some((bt, bk)) => (total, &key) < (*bt, bk),
                    };
                    if better {
                        best = Some((total, key.clone()));
                    }
                }
                next.push((key, t));
            }
        }
        limits.check(this.visited.len() + other.visited.len(), g.n())?;
        next.sort_by(|a, b| a.0.cmp(&b.0));
        this.frontier = next;
        this.depth = depth;
        if let Some((_, meet)) = best {
            let mut moves = fwd.moves_to(&meet);
            let back = bwd.moves_to(&meet);
            moves.extend(back.into_iter().rev().map(|m| m.reversed()));
            return Ok((ReconfigSequence::new(t1.clone(), moves), expanded));
        }
    }
}

/// Minimum total swap weight between two trees (uniform-cost search with
/// big-integer priorities), with a witness sequence and the number of
/// expanded trees.
pub fn weighted_shortest_path(
    g: &Graph,
    w: &WeightFn,
    t1: &ElimTree,
    t2: &ElimTree,
    limits: &SearchLimits,
) -> Result<(BigUint, ReconfigSequence, usize)> {
    if w.len() != g.n() {
        return Err(Error::invalid("weight function does not match the graph"));
    }
    check_endpoints(g, &[t1, t2])?;
    let target = t2.canonical_key();
    let start = t1.canonical_key();
    let mut best: HashMap<Key, BigUint> = HashMap::new();
    let mut pred: HashMap<Key, (Key, SwapMove)> = HashMap::new();
    let mut trees: HashMap<Key, ElimTree> = HashMap::new();
    let mut heap = BinaryHeap::new();
    best.insert(start.clone(), BigUint::zero());
    trees.insert(start.clone(), t1.clone());
    heap.push(Reverse((BigUint::zero(), start.clone())));
    let mut expanded = 0;
    while let Some(Reverse((d, key))) = heap.pop() {
        if best.get(&key).is_some_and(|b| *b < d) {
            continue;
        }
        if key == target {
            let mut moves = Vec::new();
            let mut cur = key;
            while let Some((prev, m)) = pred.get(&cur) {
                moves.push(*m);
                cur = prev.clone();
            }
            moves.reverse();
            return Ok((d, ReconfigSequence::new(t1.clone(), moves), expanded));
        }
        expanded += 1;
        let t = trees[&key].clone();
        for m in t.swaps() {
            let next = t.apply_swap(g, m)?;
            let nkey = next.canonical_key();
            let nd = &d + w.swap_weight(m);
            if best.get(&nkey).is_none_or(|b| nd < *b) {
                best.insert(nkey.clone(), nd.clone());
                pred.insert(nkey.clone(), (key.clone(), m));
                trees.entry(nkey.clone()).or_insert(next);
                heap.push(Reverse((nd, nkey)));
            }
        }
        limits.check(best.len(), g.n())?;
    }
    Err(Error::invalid("trees are not connected in the flip graph"))
}

/// Minimum total swap weight between two trees.
pub fn weighted_distance(
    g: &Graph,
    w: &WeightFn,
    t1: &ElimTree,
    t2: &ElimTree,
    limits: &SearchLimits,
) -> Result<BigUint> {
    weighted_shortest_path(g, w, t1, t2, limits).map(|(d, _, _)| d)
}

/// Weighted distances from `source` to every tree, by key.
pub fn weighted_distances_from(
    g: &Graph,
    w: &WeightFn,
    source: &ElimTree,
    limits: &SearchLimits,
) -> Result<HashMap<Key, BigUint>> {
    check_endpoints(g, &[source])?;
    let mut best: HashMap<Key, BigUint> = HashMap::new();
    let mut done: HashMap<Key, BigUint> = HashMap::new();
    let mut trees: HashMap<Key, ElimTree> = HashMap::new();
    let mut heap = BinaryHeap::new();
    let start = source.canonical_key();
    best.insert(start.clone(), BigUint::zero());
    trees.insert(start.clone(), source.clone());
    heap.push(Reverse((BigUint::zero(), start)));
    while let Some(Reverse((d, key))) = heap.pop() {
        if done.contains_key(&key) {
            continue;
        }
        let t = trees[&key].clone();
        done.insert(key, d.clone());
        for m in t.swaps() {
            let next = t.apply_swap(g, m)?;
            let nkey = next.canonical_key();
            let nd = &d + w.swap_weight(m);
            if best.get(&nkey).is_none_or(|b| nd < *b) {
                best.insert(nkey.clone(), nd.clone());
                trees.entry(nkey.clone()).or_insert(next);
                heap.push(Reverse((nd, nkey)));
            }
        }
        limits.check(best.len(), g.n())?;
    }
    Ok(done)
}

/// The whole flip graph, materialized with compact adjacency arrays.
#[derive(Debug, Clone)]
pub struct FlipGraph {
    trees: Vec<ElimTree>,
    index: HashMap<Key, u32>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

/// Result of a diameter computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiameterReport {
    pub diameter: usize,
    pub vertices: usize,
    pub bfs_runs: usize,
    pub method: &'static str,
}

/// Number of sources evaluated together by the pruned diameter sweep. Fixed
/// so that the sweep is identical for any thread count.
const SWEEP_BATCH: usize = 8;

impl FlipGraph {
    pub fn build(g: &Graph, limits: &SearchLimits, exec: Exec) -> Result<Self> {
        if g.n() > 0 && !g.is_connected() {
            return Err(Error::invalid("graph is disconnected"));
        }
        let trees = enumerate_all(g, limits)?;
        if trees.len() >= u32::MAX as usize {
            return Err(Error::limit("flip graph too large to index"));
        }
        let index: HashMap<Key, u32> = trees
            .iter()
            .enumerate()
            .map(|(i, t)| (t.canonical_key(), i as u32))
            .collect();
        let adjacency: Vec<Vec<u32>> = par::try_map(exec, &trees, |t| {
            t.swaps()
                .into_iter()
                .map(|m| {
                    let next = t.apply_swap(g, m)?;
                    Ok(index[&next.canonical_key()])
                })
                .collect::<Result<Vec<u32>>>()
        })?;
        let mut offsets = Vec::with_capacity(trees.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for list in adjacency {
            targets.extend(list);
            offsets.push(targets.len());
        }
        Ok(FlipGraph {
            trees,
            index,
            offsets,
            targets,
        })
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn trees(&self) -> &[ElimTree] {
        &self.trees
    }

    pub fn id_of(&self, t: &ElimTree) -> Option<usize> {
        self.index.get(&t.canonical_key()).map(|&i| i as usize)
    }

    pub fn neighbors(&self, id: usize) -> &[u32] {
        &self.targets[self.offsets[id]..self.offsets[id + 1]]
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    /// Hop distances from `source` to every tree.
    pub fn bfs(&self, source: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.len()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source as u32);
        while let Some(v) = queue.pop_front() {
            let d = dist[v as usize] + 1;
            for &w in self.neighbors(v as usize) {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = d;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn eccentricity(&self, source: usize) -> usize {
        self.bfs(source).into_iter().max().unwrap_or(0) as usize
    }

    /// Maximum eccentricity, one BFS per vertex.
    pub fn diameter_all_pairs(&self, exec: Exec) -> DiameterReport {
        let ecc = par::map_range(exec, self.len(), |v| self.eccentricity(v));
        DiameterReport {
            diameter: ecc.into_iter().max().unwrap_or(0),
            vertices: self.len(),
            bfs_runs: self.len(),
            method: "all-pairs",
        }
    }

    /// Exact diameter with eccentricity bounds: after a BFS from `v`, every
    /// `w` satisfies `max(d, ecc(v) - d) <= ecc(w) <= ecc(v) + d` with
    /// `d = d(v, w)`. Vertices whose upper bound cannot beat the best known
    /// eccentricity, or whose eccentricity is pinned, leave the candidate
    /// set. Sources alternate between the largest upper bound and the
    /// smallest lower bound.
    pub fn diameter_pruned(&self, exec: Exec) -> DiameterReport {
        let n = self.len();
        let mut lower = vec![0usize; n];
        let mut upper = vec![usize::MAX; n];
        let mut active = vec![true; n];
        let mut remaining = n;
        let mut best = 0usize;
        let mut runs = 0usize;
        let mut pick_high = true;
        while remaining > 0 {
            let mut batch = Vec::with_capacity(SWEEP_BATCH);
            while batch.len() < SWEEP_BATCH && batch.len() < remaining {
                let candidates = (0..n).filter(|&v| active[v] && !batch.contains(&v));
                let chosen = if pick_high {
                    candidates.min_by_key(|&v| (Reverse(upper[v]), v))
                } else {
                    candidates.min_by_key(|&v| (lower[v], v))
                };
                pick_high = !pick_high;
                match chosen {
                    Some(v) => batch.push(v),
                    None => break,
                }
            }
            let results = par::map(exec, &batch, |&v| self.bfs(v));
            runs += batch.len();
            for (&v, dist) in batch.iter().zip(&results) {
                let ecc = dist.iter().copied().max().unwrap_or(0) as usize;
                best = best.max(ecc);
                lower[v] = ecc;
                upper[v] = ecc;
                for w in 0..n {
                    let d = dist[w] as usize;
                    lower[w] = lower[w].max(d).max(ecc.saturating_sub(d));
                    upper[w] = upper[w].min(ecc + d);
                }
            }
            for w in 0..n {
                if !active[w] {
                    continue;
                }
                if lower[w] == upper[w] {
                    best = best.max(lower[w]);
                    active[w] = false;
                    remaining -= 1;
                } else if upper[w] <= best {
                    active[w] = false;
                    remaining -= 1;
                }
            }
        }
        DiameterReport {
            diameter: best,
            vertices: n,
            bfs_runs: runs,
            method: "bounded-eccentricity",
        }
    }

    /// Graphviz rendering; node labels list each vertex's parent.
    pub fn to_dot(&self, g: &Graph) -> String {
        let mut out = String::from("graph flip {\n");
        for (i, t) in self.trees.iter().enumerate() {
            let label = (0..g.n())
                .map(|v| match t.parent(v) {
                    Some(p) => format!("{}<{}", g.label(v), g.label(p)),
                    None => format!("{}*", g.label(v)),
                })
                .collect::<Vec<_>>()
                .join(" ");
            let _ = writeln!(out, "  t{i} [label=\"{label}\"];");
        }
        for v in 0..self.len() {
            for &w in self.neighbors(v) {
                if (v as u32) < w {
                    let _ = writeln!(out, "  t{v} -- t{w};");
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Exact diameter of the flip graph of `g`.
pub fn diameter(g: &Graph, limits: &SearchLimits, exec: Exec) -> Result<DiameterReport> {
    Ok(FlipGraph::build(g, limits, exec)?.diameter_pruned(exec))
}

/// Counts from [`check_projections`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProjectionReport {
    pub trees: usize,
    pub subsets: usize,
    pub checks: usize,
    pub failures: usize,
}

/// For every elimination tree, legal swap and connected subset `U`, checks
/// that the projections onto `U` before and after the swap are equal or
/// differ by that same swap, and are equal when the swap leaves `U`.
pub fn check_projections(g: &Graph, limits: &SearchLimits, exec: Exec) -> Result<ProjectionReport> {
    if g.n() > 16 {
        return Err(Error::limit("projection check enumerates subsets; at most 16 vertices"));
    }
    let trees = enumerate_all(g, limits)?;
    let projectors: Vec<Projector> = (1u64..1 << g.n())
        .map(|mask| VertexSet::from_mask(g.n(), mask))
        .filter(|u| g.induces_connected(u))
        .map(|u| Projector::new(g, &u))
        .collect::<Result<_>>()?;
    let per_tree = par::try_map(exec, &trees, |t| -> Result<(usize, usize)> {
        let (mut checks, mut failures) = (0, 0);
        for m in t.swaps() {
            let next = t.apply_swap(g, m)?;
            for p in &projectors {
                checks += 1;
                let (a, b) = (p.project(t)?, p.project(&next)?);
                let ok = match (p.position(m.parent), p.position(m.child)) {
                    (Some(pu), Some(pv)) => {
                        a == b || a.apply_swap(p.subgraph(), SwapMove::new(pu, pv)).ok() == Some(b)
                    }
                    _ => a == b,
                };
                if !ok {
                    failures += 1;
                }
            }
        }
        Ok((checks, failures))
    })?;
    Ok(ProjectionReport {
        trees: trees.len(),
        subsets: projectors.len(),
        checks: per_tree.iter().map(|r| r.0).sum(),
        failures: per_tree.iter().map(|r| r.1).sum(),
    })
}
