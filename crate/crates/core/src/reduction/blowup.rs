//! Weighted to unweighted: every vertex becomes a clique of its weight.

use itertools::Itertools;
use num_bigint::BigUint;
use serde::Serialize;

use crate::elim::{ElimTree, Projector, SwapMove};
use crate::error::{Error, Result};
use crate::flip::{self, FlipGraph, ReconfigSequence, SearchLimits, WeightFn};
use crate::graph::{Graph, VertexSet};
use crate::par::{self, Exec};

/// Blow-ups with more vertices than this are refused.
pub const MAX_BLOWUP_VERTICES: usize = 1 << 20;
/// Cap on the number of copy-choice maps enumerated at once.
pub const MAX_PROJECTION_MAPS: usize = 1 << 20;

/// The blown-up graph and trees. Copies are numbered vertex-major: the
/// copies of source vertex 0 first, then those of vertex 1, and so on.
#[derive(Debug, Clone)]
pub struct BlowupInstance {
    pub g_prime: Graph,
    pub t_ini: ElimTree,
    pub t_tar: ElimTree,
    w: WeightFn,
    weights: Vec<usize>,
    copies: Vec<Vec<usize>>,
    owner: Vec<(usize, usize)>,
}

/// Replaces each vertex `v` by a clique `v_1 .. v_w(v)`, joins copies of
/// adjacent vertices completely, and replaces each tree vertex by the path
/// of its copies.
pub fn build_unweighted_instance(
    g: &Graph,
    w: &WeightFn,
    t_ini: &ElimTree,
    t_tar: &ElimTree,
) -> Result<BlowupInstance> {
    if w.len() != g.n() {
        return Err(Error::invalid("weight function does not match the graph"));
    }
    for t in [t_ini, t_tar] {
        if !t.is_valid(g) {
            return Err(Error::invalid("tree is not an elimination tree of the graph"));
        }
    }
    let weights = w
        .to_usize()
        .ok_or_else(|| Error::limit("weights too large to blow up"))?;
    let total = weights
        .iter()
        .try_fold(0usize, |acc, &x| acc.checked_add(x))
        .filter(|&t| t <= MAX_BLOWUP_VERTICES)
        .ok_or_else(|| Error::limit(format!("blow-up exceeds {MAX_BLOWUP_VERTICES} vertices")))?;

    let mut labels = Vec::with_capacity(total);
    let mut copies = Vec::with_capacity(g.n());
    let mut owner = Vec::with_capacity(total);
    for (v, &k) in weights.iter().enumerate() {
        let start = labels.len();
        for i in 1..=k {
            labels.push(format!("b:{}:{}", g.label(v), i));
            owner.push((v, i - 1));
        }
        copies.push((start..start + k).collect::<Vec<_>>());
    }
    let mut edges = Vec::new();
    for list in &copies {
        edges.extend(list.iter().copied().tuple_combinations::<(usize, usize)>());
    }
    for &(a, b) in g.edges() {
        edges.extend(copies[a].iter().copied().cartesian_product(copies[b].iter().copied()));
    }
    let g_prime = Graph::with_labels(labels, &edges)?;
    let mut inst = BlowupInstance {
        g_prime,
        t_ini: t_ini.clone(),
        t_tar: t_tar.clone(),
        w: w.clone(),
        weights,
        copies,
        owner,
    };
    inst.t_ini = inst.blow_tree(t_ini)?;
    inst.t_tar = inst.blow_tree(t_tar)?;
    Ok(inst)
}

/// A choice of one copy per source vertex, stored 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ProjectionMap(Vec<usize>);

impl ProjectionMap {
    pub fn new(inst: &BlowupInstance, phi: Vec<usize>) -> Result<Self> {
        if phi.len() != inst.weights.len() {
            return Err(Error::invalid("projection map has the wrong length"));
        }
        if phi.iter().zip(&inst.weights).any(|(&p, &w)| p == 0 || p > w) {
            return Err(Error::invalid("projection map picks a copy that does not exist"));
        }
        Ok(ProjectionMap(phi))
    }

    pub fn get(&self, v: usize) -> usize {
        self.0[v]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Every map, in lexicographic order.
    pub fn all(inst: &BlowupInstance) -> Result<Vec<ProjectionMap>> {
        let count = inst
            .weights
            .iter()
            .try_fold(1usize, |acc, &w| acc.checked_mul(w))
            .filter(|&c| c <= MAX_PROJECTION_MAPS)
            .ok_or_else(|| Error::limit("too many projection maps"))?;
        let mut out = Vec::with_capacity(count);
        if inst.weights.is_empty() {
            return Ok(out);
        }
        for phi in inst.weights.iter().map(|&w| 1..=w).multi_cartesian_product() {
            out.push(ProjectionMap(phi));
        }
        Ok(out)
    }
}

/// Outcome of projecting one blown-up sequence along every map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AveragingReport {
    pub maps: usize,
    pub length: usize,
    #[serde(serialize_with = "crate::reduction::ser_big")]
    pub min_weighted: BigUint,
    #[serde(serialize_with = "crate::reduction::ser_big")]
    pub sum_weighted: BigUint,
    /// `sum <= length * maps` and hence `min <= length`.
    pub holds: bool,
}

impl BlowupInstance {
    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn weight_fn(&self) -> &WeightFn {
        &self.w
    }

    /// Copies of source vertex `v`, in order.
    pub fn copies(&self, v: usize) -> &[usize] {
        &self.copies[v]
    }

    /// Source vertex and 0-based copy number of blown-up vertex `x`.
    pub fn owner(&self, x: usize) -> (usize, usize) {
        self.owner[x]
    }

    pub fn same_clique(&self, a: usize, b: usize) -> bool {
        self.owner[a].0 == self.owner[b].0
    }

    /// The tree with each vertex replaced by the path of its copies; an arc
    /// `(u, v)` becomes `(u_last, v_1)`.
    pub fn blow_tree(&self, t: &ElimTree) -> Result<ElimTree> {
        if t.n() != self.copies.len() {
            return Err(Error::invalid("tree does not match the source graph"));
        }
        let mut parent = vec![None; self.owner.len()];
        for (v, list) in self.copies.iter().enumerate() {
            parent[list[0]] = t.parent(v).map(|p| *self.copies[p].last().expect("nonempty clique"));
            for pair in list.windows(2) {
                parent[pair[1]] = Some(pair[0]);
            }
        }
        ElimTree::from_parents(parent)
    }

    /// Replaces each source swap `(u, v)` by the `w(u) w(v)` swaps that move
    /// the copies of `v`, first to last, above all copies of `u`.
    pub fn lift_sequence(&self, g: &Graph, seq: &ReconfigSequence) -> Result<ReconfigSequence> {
        let (ok, _) = flip::validate_sequence(g, seq);
        if !ok {
            return Err(Error::invalid("source sequence is not valid"));
        }
        let gp = &self.g_prime;
        let start = self.blow_tree(&seq.start)?;
        let mut src = seq.start.clone();
        let mut cur = start.clone();
        let mut moves = Vec::new();
        for &m in &seq.moves {
            for &vj in &self.copies[m.child] {
                for &ui in self.copies[m.parent].iter().rev() {
                    let mm = SwapMove::new(ui, vj);
                    cur = cur.apply_swap(gp, mm)?;
                    moves.push(mm);
                }
            }
            src = src.apply_swap(g, m)?;
            if cur != self.blow_tree(&src)? {
                return Err(Error::invalid("lifted swap does not reproduce the blown-up tree"));
            }
        }
        Ok(ReconfigSequence::new(start, moves))
    }

    /// Drops swaps inside a clique. Such a swap only exchanges the labels of
    /// two interchangeable copies, so later moves are renamed accordingly.
    /// The result is valid and ends at a relabeling of the original end.
    pub fn canonicalize_sequence(&self, seq: &ReconfigSequence) -> Result<ReconfigSequence> {
        let gp = &self.g_prime;
        let (ok, _) = flip::validate_sequence(gp, seq);
        if !ok {
            return Err(Error::invalid("sequence is not valid on the blown-up graph"));
        }
        let mut sigma: Vec<usize> = (0..gp.n()).collect();
        let mut moves = Vec::with_capacity(seq.moves.len());
        for &m in &seq.moves {
            if self.same_clique(m.parent, m.child) {
                sigma.swap(m.parent, m.child);
            } else {
                moves.push(SwapMove::new(sigma[m.parent], sigma[m.child]));
            }
        }
        let out = ReconfigSequence::new(seq.start.clone(), moves);
        if !flip::validate_sequence(gp, &out).0 {
            return Err(Error::invalid("canonicalized sequence is not valid"));
        }
        Ok(out)
    }

    fn chosen_set(&self, phi: &ProjectionMap) -> VertexSet {
        VertexSet::from_indices(
            self.owner.len(),
            self.copies.iter().zip(phi.as_slice()).map(|(list, &p)| list[p - 1]),
        )
    }

    /// Projects every tree of `seq` onto the chosen copies, drops repeats,
    /// and reads the result as a sequence on the source graph.
    pub fn project_sequence(
        &self,
        g: &Graph,
        seq: &ReconfigSequence,
        phi: &ProjectionMap,
    ) -> Result<ReconfigSequence> {
        if phi.as_slice().len() != self.copies.len() {
            return Err(Error::invalid("projection map does not match the instance"));
        }
        if seq.moves.iter().any(|m| self.same_clique(m.parent, m.child)) {
            return Err(Error::invalid(
                "sequence swaps two copies of one vertex; canonicalize it first",
            ));
        }
        let gp = &self.g_prime;
        // chosen copies are listed in source vertex order, so projected trees
        // are already indexed by source vertices
        let proj = Projector::new(gp, &self.chosen_set(phi))?;
        let mut t = seq.start.clone();
        let mut cur = proj.project(&t)?;
        let start = cur.clone();
        let mut moves = Vec::new();
        for &m in &seq.moves {
            t = t.apply_swap(gp, m)?;
            let next = proj.project(&t)?;
            if next != cur {
                let sm = SwapMove::new(self.owner[m.parent].0, self.owner[m.child].0);
                let expected = cur.apply_swap(g, sm)?;
                if expected != next {
                    return Err(Error::invalid("projection changed by more than one swap"));
                }
                moves.push(sm);
                cur = next;
            }
        }
        Ok(ReconfigSequence::new(start, moves))
    }

    /// Projects `seq` along every map and compares the average weighted
    /// length with the length of `seq`.
    pub fn averaging_check(
        &self,
        g: &Graph,
        seq: &ReconfigSequence,
        exec: Exec,
    ) -> Result<AveragingReport> {
        let maps = ProjectionMap::all(self)?;
        let lengths = par::try_map(exec, &maps, |phi| {
            let projected = self.project_sequence(g, seq, phi)?;
            flip::weighted_length(g, &projected, &self.w)
        })?;
        let sum: BigUint = lengths.iter().sum();
        let min = lengths.iter().min().cloned().unwrap_or_default();
        let bound = BigUint::from(seq.len()) * BigUint::from(maps.len());
        Ok(AveragingReport {
            maps: maps.len(),
            length: seq.len(),
            holds: sum <= bound && min <= BigUint::from(seq.len()),
            min_weighted: min,
            sum_weighted: sum,
        })
    }
}

/// Result of comparing weighted distances with blown-up distances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub trees: usize,
    pub blowup_trees: usize,
    pub pairs: usize,
    /// Source tree index pairs whose two distances differ.
    pub mismatches: Vec<(usize, usize)>,
}

/// For every ordered pair of elimination trees of `g`, compares the weighted
/// distance under `w` with the distance between the blown-up trees.
pub fn check_equivalence(
    g: &Graph,
    w: &WeightFn,
    limits: &SearchLimits,
    exec: Exec,
) -> Result<EquivalenceReport> {
    let trees = flip::enumerate_all(g, limits)?;
    let any = &trees[0];
    let inst = build_unweighted_instance(g, w, any, any)?;
    let big = FlipGraph::build(&inst.g_prime, limits, exec)?;
    let blown: Vec<usize> = trees
        .iter()
        .map(|t| {
            let b = inst.blow_tree(t)?;
            big.id_of(&b)
                .ok_or_else(|| Error::invalid("blown-up tree missing from the flip graph"))
        })
        .collect::<Result<_>>()?;
    let per_source = par::try_map(exec, &trees, |a| -> Result<Vec<bool>> {
        let weighted = flip::weighted_distances_from(g, w, a, limits)?;
        let hops = big.bfs(blown[trees.iter().position(|t| t == a).expect("present")]);
        Ok(trees
            .iter()
            .zip(&blown)
            .map(|(b, &id)| weighted[&b.canonical_key()] == BigUint::from(hops[id]))
            .collect())
    })?;
    let mut mismatches = Vec::new();
    for (i, row) in per_source.iter().enumerate() {
        for (j, &ok) in row.iter().enumerate() {
            if !ok {
                mismatches.push((i, j));
            }
        }
    }
    Ok(EquivalenceReport {
        trees: trees.len(),
        blowup_trees: big.len(),
        pairs: trees.len() * trees.len(),
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elim::VertexOrder;
    use crate::families::{complete, path};

    fn tree(g: &Graph, order: &[usize]) -> ElimTree {
        ElimTree::from_ordering(g, &VertexOrder::new(g.n(), order.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn unit_weights_change_nothing() {
        let g = path(4);
        let (a, b) = (tree(&g, &[0, 1, 2, 3]), tree(&g, &[2, 0, 3, 1]));
        let inst = build_unweighted_instance(&g, &WeightFn::uniform(4), &a, &b).unwrap();
        assert_eq!(inst.g_prime.edges(), g.edges());
        assert_eq!(inst.t_ini.parents(), a.parents());
        assert_eq!(inst.t_tar.parents(), b.parents());
    }

    #[test]
    fn edge_blows_up_to_a_clique() {
        let g = complete(2);
        let t = tree(&g, &[0, 1]);
        let w = WeightFn::from_u64(&[2, 3]).unwrap();
        let inst = build_unweighted_instance(&g, &w, &t, &t).unwrap();
        assert_eq!(inst.g_prime.n(), 5);
        assert_eq!(inst.g_prime.m(), 10);
    }

    #[test]
    fn trees_become_paths() {
        let g = path(2);
        let t = tree(&g, &[0, 1]);
        let inst = build_unweighted_instance(&g, &WeightFn::from_u64(&[2, 2]).unwrap(), &t, &t).unwrap();
        let gp = &inst.g_prime;
        let id = |l: &str| gp.index_of(l).unwrap();
        assert_eq!(inst.t_ini.root(), id("b:1:1"));
        assert_eq!(inst.t_ini.parent(id("b:1:2")), Some(id("b:1:1")));
        assert_eq!(inst.t_ini.parent(id("b:2:1")), Some(id("b:1:2")));
        assert_eq!(inst.t_ini.parent(id("b:2:2")), Some(id("b:2:1")));
        assert!(inst.t_ini.is_valid(gp));
    }

    #[test]
    fn lifting_counts_products() {
        let g = complete(2);
        let (a, b) = (tree(&g, &[0, 1]), tree(&g, &[1, 0]));
        let w = WeightFn::from_u64(&[2, 3]).unwrap();
        let inst = build_unweighted_instance(&g, &w, &a, &b).unwrap();
        let empty = inst.lift_sequence(&g, &ReconfigSequence::empty(a.clone())).unwrap();
        assert!(empty.is_empty());
        let one = ReconfigSequence::new(a, vec![SwapMove::new(0, 1)]);
        let lifted = inst.lift_sequence(&g, &one).unwrap();
        assert_eq!(lifted.len(), 6);
        assert_eq!(lifted.end(&inst.g_prime).unwrap(), inst.t_tar);
    }

    #[test]
    fn lifting_rejects_invalid_sources() {
        let g = path(3);
        let a = tree(&g, &[0, 1, 2]);
        let inst = build_unweighted_instance(&g, &WeightFn::uniform(3), &a, &a).unwrap();
        let bad = ReconfigSequence::new(a, vec![SwapMove::new(2, 1)]);
        assert!(inst.lift_sequence(&g, &bad).is_err());
    }

    #[test]
    fn projection_maps_are_checked() {
        let g = path(2);
        let t = tree(&g, &[0, 1]);
        let inst = build_unweighted_instance(&g, &WeightFn::from_u64(&[2, 3]).unwrap(), &t, &t).unwrap();
        assert_eq!(ProjectionMap::all(&inst).unwrap().len(), 6);
        assert!(ProjectionMap::new(&inst, vec![2, 3]).is_ok());
        assert!(ProjectionMap::new(&inst, vec![3, 1]).is_err());
        assert!(ProjectionMap::new(&inst, vec![0, 1]).is_err());
    }

    #[test]
    fn projecting_a_lift_recovers_the_endpoints() {
        let g = path(3);
        let (a, b) = (tree(&g, &[0, 1, 2]), tree(&g, &[2, 1, 0]));
        let w = WeightFn::from_u64(&[2, 1, 2]).unwrap();
        let inst = build_unweighted_instance(&g, &w, &a, &b).unwrap();
        let (src, _) = flip::shortest_path(&g, &a, &b, &SearchLimits::default(), Exec::Sequential).unwrap();
        let lifted = inst.lift_sequence(&g, &src).unwrap();
        let wl = flip::weighted_length(&g, &src, &w).unwrap();
        assert_eq!(BigUint::from(lifted.len()), wl);
        for phi in ProjectionMap::all(&inst).unwrap() {
            let p = inst.project_sequence(&g, &lifted, &phi).unwrap();
            assert_eq!(p.start, a);
            assert_eq!(p.end(&g).unwrap(), b);
            assert!(flip::weighted_length(&g, &p, &w).unwrap() <= wl);
        }
    }

    #[test]
    fn canonicalization_drops_clique_swaps() {
        let g = complete(2);
        let a = tree(&g, &[0, 1]);
        let w = WeightFn::from_u64(&[2, 1]).unwrap();
        let inst = build_unweighted_instance(&g, &w, &a, &a).unwrap();
        let gp = &inst.g_prime;
        // chain 1_1 -> 1_2 -> 2_1; swap the two copies, then move 2_1 up
        let seq = ReconfigSequence::new(
            inst.t_ini.clone(),
            vec![SwapMove::new(0, 1), SwapMove::new(0, 2)],
        );
        assert!(flip::validate_sequence(gp, &seq).0);
        let phi = ProjectionMap::new(&inst, vec![1, 1]).unwrap();
        assert!(inst.project_sequence(&g, &seq, &phi).is_err());
        let canon = inst.canonicalize_sequence(&seq).unwrap();
        assert_eq!(canon.moves, vec![SwapMove::new(1, 2)]);
        assert!(inst.project_sequence(&g, &canon, &phi).is_ok());
    }

    #[test]
    fn equivalence_on_a_small_instance() {
        let g = path(3);
        let w = WeightFn::from_u64(&[2, 1, 2]).unwrap();
        let rep = check_equivalence(&g, &w, &SearchLimits::default(), Exec::Parallel).unwrap();
        assert_eq!(rep.trees, 5);
        assert_eq!(rep.pairs, 25);
        assert!(rep.mismatches.is_empty());
    }
}
