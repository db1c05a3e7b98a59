//! Elimination trees and the swap move.
//!
//! An elimination tree of a connected graph picks a root `v` and hangs an
//! elimination tree of every component of `G - v` below it. Trees are stored
//! as parent arrays over the graph's vertex indices.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Rotation of `child` above its current `parent`.
///
/// Direction matters: `SwapMove { parent: u, child: v }` and
/// `SwapMove { parent: v, child: u }` are different moves, each legal in
/// different trees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SwapMove {
    pub parent: usize,
    pub child: usize,
}

impl SwapMove {
    pub fn new(parent: usize, child: usize) -> Self {
        SwapMove { parent, child }
    }

    /// The move that undoes this one.
    pub fn reversed(self) -> Self {
        SwapMove {
            parent: self.child,
            child: self.parent,
        }
    }
}

/// A permutation of the vertices of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexOrder(Vec<usize>);

impl VertexOrder {
    pub fn new(n: usize, seq: Vec<usize>) -> Result<Self> {
        if seq.len() != n {
            return Err(Error::invalid(format!(
                "ordering has {} entries for {n} vertices",
                seq.len()
            )));
        }
        let mut seen = vec![false; n];
        for &v in &seq {
            if v >= n || seen[v] {
                return Err(Error::invalid("ordering is not a permutation"));
            }
            seen[v] = true;
        }
        Ok(VertexOrder(seq))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `position()[v]` is the rank of `v` in the ordering.
    pub fn position(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    /// Whitespace-separated labels.
    pub fn parse(g: &Graph, text: &str) -> Result<Self> {
        let seq = text
            .split_whitespace()
            .map(|l| {
                g.index_of(l)
                    .map_err(|_| Error::parse(1, format!("unknown vertex {l:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        VertexOrder::new(g.n(), seq).map_err(|e| Error::parse(1, e.to_string()))
    }

    pub fn to_text(&self, g: &Graph) -> String {
        let mut out = self
            .0
            .iter()
            .map(|&v| g.label(v))
            .collect::<Vec<_>>()
            .join(" ");
        out.push('\n');
        out
    }
}

/// A rooted tree on the vertex set of a graph.
///
/// The type only guarantees a well-formed rooted spanning tree; whether it
/// is an elimination tree of a particular graph is checked by
/// [`ElimTree::is_valid`]. Every constructor in this crate that takes a
/// graph produces valid trees.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElimTree {
    parent: Vec<Option<usize>>,
    root: usize,
}

impl ElimTree {
    /// Checks that `parent` describes one rooted tree spanning all indices.
    pub fn from_parents(parent: Vec<Option<usize>>) -> Result<Self> {
        let n = parent.len();
        if n == 0 {
            return Err(Error::invalid("empty tree"));
        }
        let roots: Vec<usize> = (0..n).filter(|&v| parent[v].is_none()).collect();
        if roots.len() != 1 {
            return Err(Error::invalid(format!("tree has {} roots", roots.len())));
        }
        if parent.iter().flatten().any(|&p| p >= n) {
            return Err(Error::invalid("parent index out of range"));
        }
        // 0 = unvisited, 1 = on current walk, 2 = reaches the root
        let mut state = vec![0u8; n];
        state[roots[0]] = 2;
        for start in 0..n {
            let mut walk = Vec::new();
            let mut v = start;
            while state[v] == 0 {
                state[v] = 1;
                walk.push(v);
                v = parent[v].expect("non-root has a parent");
            }
            if state[v] == 1 {
                return Err(Error::invalid("parent pointers contain a cycle"));
            }
            for w in walk {
                state[w] = 2;
            }
        }
        Ok(ElimTree {
            parent,
            root: roots[0],
        })
    }

    /// The tree obtained by deleting vertices in the given order: each
    /// vertex becomes the root of the elimination tree of its component.
    ///
    /// Runs backwards over the ordering with a union-find, so the cost is
    /// near-linear in `|V| + |E|`.
    pub fn from_ordering(g: &Graph, order: &VertexOrder) -> Result<Self> {
        let n = g.n();
        if order.len() != n {
            return Err(Error::invalid("ordering does not match the graph"));
        }
        let mut uf: Vec<usize> = (0..n).collect();
        let mut top: Vec<usize> = (0..n).collect();
        let mut active = vec![false; n];
        let mut parent = vec![None; n];

        fn find(uf: &mut [usize], mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }

        for &v in order.as_slice().iter().rev() {
            active[v] = true;
            for &w in g.neighbors(v) {
                if !active[w] {
                    continue;
                }
                let rw = find(&mut uf, w);
                let rv = find(&mut uf, v);
                if rw != rv {
                    parent[top[rw]] = Some(v);
                    uf[rw] = rv;
                    top[rv] = v;
                }
            }
        }
        let roots = parent.iter().filter(|p| p.is_none()).count();
        if roots != 1 {
            return Err(Error::invalid("graph is disconnected"));
        }
        ElimTree::from_parents(parent)
    }

    /// The single-node tree of a one-vertex graph.
    pub fn singleton() -> Self {
        ElimTree {
            parent: vec![None],
            root: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    /// Children lists, each sorted by index.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut children = vec![Vec::new(); self.n()];
        for (v, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                children[p].push(v);
            }
        }
        children
    }

    pub fn children_of(&self, v: usize) -> Vec<usize> {
        (0..self.n()).filter(|&c| self.parent[c] == Some(v)).collect()
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n() {
            return Err(Error::invalid(format!("vertex {v} not in tree")));
        }
        Ok(())
    }

    /// Proper ancestors of `v`.
    pub fn ancestors(&self, v: usize) -> Result<VertexSet> {
        self.check_vertex(v)?;
        let mut set = VertexSet::empty(self.n());
        let mut cur = self.parent[v];
        while let Some(p) = cur {
            set.insert(p);
            cur = self.parent[p];
        }
        Ok(set)
    }

    /// Proper descendants of `v`.
    pub fn descendants(&self, v: usize) -> Result<VertexSet> {
        let mut set = self.subtree(v)?;
        set.remove(v);
        Ok(set)
    }

    /// `T(v)`: the vertex set of the subtree rooted at `v`, including `v`.
    pub fn subtree(&self, v: usize) -> Result<VertexSet> {
        self.check_vertex(v)?;
        let children = self.children();
        let mut set = VertexSet::empty(self.n());
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            set.insert(x);
            stack.extend_from_slice(&children[x]);
        }
        Ok(set)
    }

    pub fn is_ancestor(&self, a: usize, b: usize) -> bool {
        let mut cur = self.parent[b];
        while let Some(p) = cur {
            if p == a {
                return true;
            }
            cur = self.parent[p];
        }
        false
    }

    pub fn comparable(&self, u: usize, v: usize) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.is_ancestor(u, v) || self.is_ancestor(v, u))
    }

    /// Depth-first preorder with children visited by increasing index.
    /// Every ancestor precedes its descendants.
    pub fn preorder(&self) -> Vec<usize> {
        let children = self.children();
        let mut out = Vec::with_capacity(self.n());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(children[v].iter().rev());
        }
        out
    }

    /// An ordering whose deletion tree is `self` (for valid trees).
    pub fn linear_extension(&self) -> VertexOrder {
        VertexOrder(self.preorder())
    }

    /// Whether this is an elimination tree of `g`.
    ///
    /// Equivalent characterization used here: every edge joins comparable
    /// vertices, and every subtree `T(c)` touches the parent of `c`. Together
    /// these say that the child subtrees of each node are exactly the
    /// components left after deleting it.
    pub fn is_valid(&self, g: &Graph) -> bool {
        let n = self.n();
        if g.n() != n {
            return false;
        }
        let children = self.children();
        // Euler intervals for O(1) ancestor tests
        let mut tin = vec![0usize; n];
        let mut tout = vec![0usize; n];
        let mut clock = 0;
        let mut stack = vec![(self.root, false)];
        while let Some((v, done)) = stack.pop() {
            if done {
                tout[v] = clock;
                continue;
            }
            tin[v] = clock;
            clock += 1;
            stack.push((v, true));
            for &c in children[v].iter().rev() {
                stack.push((c, false));
            }
        }
        let within = |a: usize, b: usize| tin[a] <= tin[b] && tin[b] < tout[a];
        for &(a, b) in g.edges() {
            if !within(a, b) && !within(b, a) {
                return false;
            }
        }
        for c in 0..n {
            if let Some(p) = self.parent[c] {
                if !g.neighbors(p).iter().any(|&x| within(c, x)) {
                    return false;
                }
            }
        }
        true
    }

    /// Rotates `m.child` above `m.parent`.
    ///
    /// The child takes the parent's place; the old parent keeps its other
    /// subtrees; each subtree of the child moves under the old parent exactly
    /// when it contains a neighbor of the old parent.
    pub fn apply_swap(&self, g: &Graph, m: SwapMove) -> Result<ElimTree> {
        let SwapMove { parent: u, child: v } = m;
        if u >= self.n() || v >= self.n() || self.parent[v] != Some(u) {
            let name = |x: usize| {
                if x < g.n() {
                    g.label(x).to_string()
                } else {
                    x.to_string()
                }
            };
            return Err(Error::IllegalMove {
                parent: name(u),
                child: name(v),
            });
        }
        let children = self.children();
        let mut parent = self.parent.clone();
        parent[v] = self.parent[u];
        parent[u] = Some(v);
        let mut stack = Vec::new();
        for &s in &children[v] {
            stack.clear();
            stack.push(s);
            let mut touches = false;
            while let Some(x) = stack.pop() {
                if g.adjacent(u, x) {
                    touches = true;
                    break;
                }
                stack.extend_from_slice(&children[x]);
            }
            if touches {
                parent[s] = Some(u);
            }
        }
        let root = if self.root == u { v } else { self.root };
        Ok(ElimTree { parent, root })
    }

    /// All legal moves: `(parent(v), v)` for every non-root `v`, by
    /// increasing `v`.
    pub fn swaps(&self) -> Vec<SwapMove> {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| SwapMove::new(p, v)))
            .collect()
    }

    /// The projection `T|_U` onto a connected vertex set `U`, as a tree of
    /// `G[U]` (indices follow the order of `U`).
    pub fn project(&self, g: &Graph, u: &VertexSet) -> Result<ElimTree> {
        Projector::new(g, u)?.project(self)
    }

    /// Parent array in vertex order, one byte per vertex while indices fit
    /// (`0xff` marks the root), four little-endian bytes per vertex beyond.
    pub fn canonical_key(&self) -> Vec<u8> {
        let n = self.n();
        if n < 0xff {
            self.parent
                .iter()
                .map(|p| p.map_or(0xff, |p| p as u8))
                .collect()
        } else {
            let mut out = Vec::with_capacity(4 * n);
            for p in &self.parent {
                let word = p.map_or(u32::MAX, |p| p as u32);
                out.extend_from_slice(&word.to_le_bytes());
            }
            out
        }
    }

    /// Text form: one `label parent-label` line per vertex in vertex order,
    /// `-` for the root.
    pub fn to_text(&self, g: &Graph) -> String {
        let mut out = String::new();
        for (v, p) in self.parent.iter().enumerate() {
            out.push_str(g.label(v));
            out.push(' ');
            match p {
                Some(p) => out.push_str(g.label(*p)),
                None => out.push('-'),
            }
            out.push('\n');
        }
        out
    }

    /// Parses [`ElimTree::to_text`] output. Lines may come in any order;
    /// only the tree shape is checked, not validity for `g`.
    pub fn parse(g: &Graph, text: &str) -> Result<Self> {
        let mut parent: Vec<Option<Option<usize>>> = vec![None; g.n()];
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(Error::parse(i + 1, "tree line must be `label parent`"));
            }
            let v = g
                .index_of(parts[0])
                .map_err(|e| Error::parse(i + 1, e.to_string()))?;
            let p = if parts[1] == "-" {
                None
            } else {
                Some(
                    g.index_of(parts[1])
                        .map_err(|e| Error::parse(i + 1, e.to_string()))?,
                )
            };
            if parent[v].is_some() {
                return Err(Error::parse(i + 1, format!("vertex {:?} listed twice", parts[0])));
            }
            parent[v] = Some(p);
        }
        let parent = parent
            .into_iter()
            .enumerate()
            .map(|(v, p)| p.ok_or_else(|| Error::parse(0, format!("vertex {:?} missing", g.label(v)))))
            .collect::<Result<Vec<_>>>()?;
        ElimTree::from_parents(parent).map_err(|e| Error::parse(0, e.to_string()))
    }
}

impl fmt::Debug for ElimTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ElimTree(root {}, parents {:?})", self.root, self.parent)
    }
}

/// Projection onto a fixed connected subset, with the induced subgraph
/// built once.
#[derive(Debug, Clone)]
pub struct Projector {
    sub: Graph,
    members: Vec<usize>,
    position: Vec<usize>,
}

impl Projector {
    pub fn new(g: &Graph, u: &VertexSet) -> Result<Self> {
        if !g.induces_connected(u) {
            return Err(Error::invalid("projection target does not induce a connected subgraph"));
        }
        let sub = g.induced_subgraph(u)?;
        let members = u.to_vec();
        let mut position = vec![usize::MAX; g.n()];
        for (k, &v) in members.iter().enumerate() {
            position[v] = k;
        }
        Ok(Projector {
            sub,
            members,
            position,
        })
    }

    /// `G[U]`, with vertex `k` being the `k`-th member of `U`.
    pub fn subgraph(&self) -> &Graph {
        &self.sub
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Index in `G[U]` of host vertex `v`, if `v` is in `U`.
    pub fn position(&self, v: usize) -> Option<usize> {
        match self.position.get(v) {
            Some(&p) if p != usize::MAX => Some(p),
            _ => None,
        }
    }

    /// Restricts any linear extension of `t` to `U` and rebuilds the tree in
    /// `G[U]`; the result does not depend on which extension is used.
    pub fn project(&self, t: &ElimTree) -> Result<ElimTree> {
        if t.n() != self.position.len() {
            return Err(Error::invalid("tree does not match the host graph"));
        }
        let seq: Vec<usize> = t
            .preorder()
            .into_iter()
            .filter_map(|v| self.position(v))
            .collect();
        ElimTree::from_ordering(&self.sub, &VertexOrder(seq))
    }
}
