//! Balanced minimum s-t cut gadget: a weighted instance whose short
//! reconfiguration sequences correspond to balanced minimum cuts.

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::elim::{ElimTree, SwapMove, VertexOrder};
use crate::error::{Error, Result};
use crate::flip::{ReconfigSequence, WeightFn};
use crate::graph::{Graph, VertexSet};

/// Instances whose gadget graph would exceed this many edges are refused.
pub const MAX_GADGET_EDGES: usize = 20_000_000;

/// The gadget graph `H`, its weights and the two trees, together with the
/// source cut instance.
#[derive(Debug, Clone)]
pub struct WeightedInstance {
    pub h: Graph,
    pub w: WeightFn,
    pub t_ini: ElimTree,
    pub t_tar: ElimTree,
    pub source: Graph,
    pub s: usize,
    pub t: usize,
    /// Half the number of source vertices other than `s` and `t`.
    pub n: usize,
    pub m: usize,
    pub big_n: usize,
    /// Minimum s-t cut value of the source graph.
    pub lambda: usize,
    /// `H` index of each source vertex other than `s`, `t`, in source order.
    v_nodes: Vec<usize>,
    /// Source vertex behind each entry of `v_nodes`.
    v_source: Vec<usize>,
    /// `H` index of the copy `x'` for each source vertex `x`.
    v_prime: Vec<usize>,
    /// `H` index of the subdivision vertex of each source edge.
    u_nodes: Vec<usize>,
    s_clique: Vec<usize>,
    t_clique: Vec<usize>,
}

/// `10 n^3 m`, the gadget parameter large enough for every step of the
/// correctness argument.
pub fn paper_n(n: usize, m: usize) -> BigUint {
    BigUint::from(10u32) * BigUint::from(n).pow(3) * BigUint::from(m)
}

fn pow(b: usize, e: u32) -> BigUint {
    BigUint::from(b).pow(e)
}

/// Builds the gadget for source graph `g` with terminals `s`, `t` and clique
/// parameter `big_n`; each terminal becomes a clique of `big_n^3` vertices.
pub fn build_weighted_instance(
    g: &Graph,
    s: usize,
    t: usize,
    big_n: usize,
) -> Result<WeightedInstance> {
    if s >= g.n() || t >= g.n() {
        return Err(Error::invalid("terminal out of range"));
    }
    if s == t {
        return Err(Error::invalid("terminals must differ"));
    }
    if !g.n().is_multiple_of(2) {
        return Err(Error::invalid("source graph must have an even number of vertices"));
    }
    if !g.is_connected() {
        return Err(Error::invalid("source graph is disconnected"));
    }
    if big_n < 2 {
        return Err(Error::invalid("N must be at least 2"));
    }
    let k = big_n
        .checked_pow(3)
        .ok_or_else(|| Error::limit("N^3 overflows"))?;
    let m = g.m();
    let n = (g.n() - 2) / 2;
    let deg_st = g.degree(s) + g.degree(t);
    let clique_edges = k.checked_mul(k - 1).ok_or_else(|| Error::limit("N^3 overflows"))?;
    let estimate = clique_edges + k * deg_st + 4 * m;
    if estimate > MAX_GADGET_EDGES {
        return Err(Error::limit(format!(
            "gadget would have about {estimate} edges (cap {MAX_GADGET_EDGES})"
        )));
    }

    // vertices are inserted in the initial ordering
    let mut labels = Vec::with_capacity(4 * n + 2 + m + 2 * k);
    let v_source: Vec<usize> = (0..g.n()).filter(|&x| x != s && x != t).collect();
    let mut v_nodes = Vec::with_capacity(2 * n);
    for &x in &v_source {
        v_nodes.push(labels.len());
        labels.push(format!("v:{}", g.label(x)));
    }
    let mut s_clique = Vec::with_capacity(k);
    let mut t_clique = Vec::with_capacity(k);
    for i in 1..=k {
        s_clique.push(labels.len());
        labels.push(format!("s:{i}"));
        t_clique.push(labels.len());
        labels.push(format!("t:{i}"));
    }
    let mut u_nodes = Vec::with_capacity(m);
    for e in 1..=m {
        u_nodes.push(labels.len());
        labels.push(format!("u:{e}"));
    }
    let mut v_prime = vec![0; g.n()];
    for &x in v_source.iter().chain([s, t].iter()) {
        v_prime[x] = labels.len();
        labels.push(format!("v':{}", g.label(x)));
    }
    let mut local = vec![usize::MAX; g.n()];
    for (i, &x) in v_source.iter().enumerate() {
        local[x] = v_nodes[i];
    }

    let mut edges = Vec::with_capacity(estimate);
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        let u = u_nodes[e];
        for x in [a, b] {
            if x == s {
                edges.extend(s_clique.iter().map(|&c| (c, u)));
            } else if x == t {
                edges.extend(t_clique.iter().map(|&c| (c, u)));
            } else {
                edges.push((local[x], u));
            }
            edges.push((v_prime[x], u));
        }
    }
    for clique in [&s_clique, &t_clique] {
        for (i, &a) in clique.iter().enumerate() {
            edges.extend(clique[i + 1..].iter().map(|&b| (a, b)));
        }
    }
    let h = Graph::with_labels(labels, &edges)?;

    let mut weights = vec![BigUint::from(1u32); h.n()];
    for &x in &v_nodes {
        weights[x] = BigUint::from(big_n);
    }
    for &x in &v_prime {
        weights[x] = pow(big_n, 8);
    }
    for &x in s_clique.iter().chain(&t_clique) {
        weights[x] = pow(big_n, 4);
    }
    let w = WeightFn::new(weights)?;

    let ini: Vec<usize> = (0..h.n()).collect();
    let mut tar: Vec<usize> = v_nodes.iter().rev().copied().collect();
    for i in 0..k {
        tar.push(t_clique[i]);
        tar.push(s_clique[i]);
    }
    tar.extend(2 * n + 2 * k..h.n());
    let t_ini = ElimTree::from_ordering(&h, &VertexOrder::new(h.n(), ini)?)?;
    let t_tar = ElimTree::from_ordering(&h, &VertexOrder::new(h.n(), tar)?)?;
    let lambda = g.min_st_cut_value(s, t)?;

    Ok(WeightedInstance {
        h,
        w,
        t_ini,
        t_tar,
        source: g.clone(),
        s,
        t,
        n,
        m,
        big_n,
        lambda,
        v_nodes,
        v_source,
        v_prime,
        u_nodes,
        s_clique,
        t_clique,
    })
}

/// The constructed sequence with its cost split by phase.
#[derive(Debug, Clone)]
pub struct SufficiencyReport {
    pub sequence: ReconfigSequence,
    /// Subdivision vertices of the cut edges, in lifting order.
    pub lifted: Vec<usize>,
    pub lift_up: BigUint,
    /// Reversal cost on the side of `s`, then on the side of `t`.
    pub reversal: [BigUint; 2],
    pub push_down: BigUint,
    pub total: BigUint,
}

impl WeightedInstance {
    /// `H` vertices standing for source vertices other than `s` and `t`.
    pub fn v_nodes(&self) -> &[usize] {
        &self.v_nodes
    }

    /// `H` vertex of the copy of source vertex `x`.
    pub fn v_prime(&self, x: usize) -> usize {
        self.v_prime[x]
    }

    /// `H` vertex subdividing source edge `e` (0-based).
    pub fn u_node(&self, e: usize) -> usize {
        self.u_nodes[e]
    }

    pub fn u_nodes(&self) -> &[usize] {
        &self.u_nodes
    }

    pub fn s_clique(&self) -> &[usize] {
        &self.s_clique
    }

    pub fn t_clique(&self) -> &[usize] {
        &self.t_clique
    }

    fn is_prime(&self, x: usize) -> bool {
        self.v_prime.contains(&x)
    }

    fn in_clique(&self, x: usize) -> bool {
        let lo = 2 * self.n;
        (lo..lo + self.s_clique.len() * 2).contains(&x)
    }

    /// `4 λ N^7 + (n^2 - n + 1) N^2`.
    pub fn threshold(&self) -> BigUint {
        let nn = BigUint::from(self.n * self.n - self.n + 1);
        BigUint::from(4 * self.lambda) * pow(self.big_n, 7) + nn * pow(self.big_n, 2)
    }

    /// `4 λ N^7 + n(n-1) N^2 + 4 λ n N + 2 λ m`, the closed form of the
    /// per-phase cost bounds added up.
    pub fn cost_formula(&self) -> BigUint {
        let (l, n, m, big_n) = (self.lambda, self.n, self.m, self.big_n);
        BigUint::from(4 * l) * pow(big_n, 7)
            + BigUint::from(n * (n.max(1) - 1)) * pow(big_n, 2)
            + BigUint::from(4 * l * n) * BigUint::from(big_n)
            + BigUint::from(2 * l * m)
    }

    /// `λ (2 n N + 2 N^7 + m)`, the bound on each lifting phase.
    pub fn lift_bound(&self) -> BigUint {
        BigUint::from(self.lambda)
            * (BigUint::from(2 * self.n * self.big_n) + BigUint::from(2u32) * pow(self.big_n, 7)
                + BigUint::from(self.m))
    }

    /// `C(n, 2) N^2`, the reversal cost on one side of a balanced cut.
    pub fn reversal_cost(&self) -> BigUint {
        BigUint::from(self.n * (self.n.max(1) - 1) / 2) * pow(self.big_n, 2)
    }

    /// Whether `N^2 > 4 λ n N + 2 λ m`, which makes the constructed sequence
    /// cheaper than the threshold.
    pub fn margin_holds(&self) -> bool {
        let lhs = pow(self.big_n, 2);
        let rhs = BigUint::from(4 * self.lambda * self.n * self.big_n + 2 * self.lambda * self.m);
        lhs > rhs
    }

    /// Moves every vertex of `up` (in the given order) above everything
    /// else by swapping it with its parent until the parent is in `up`.
    fn lift(&self, start: &ElimTree, up: &[usize]) -> Result<(ElimTree, Vec<SwapMove>)> {
        let mut t = start.clone();
        let mut moves = Vec::new();
        for &u in up {
            while let Some(p) = t.parent(u) {
                if up.contains(&p) {
                    break;
                }
                let m = SwapMove::new(p, u);
                t = t.apply_swap(&self.h, m)?;
                moves.push(m);
            }
        }
        Ok((t, moves))
    }

    /// Reverses the chain formed by `side` by raising each element in turn
    /// to the top of the chain.
    fn reverse_chain(&self, t: &mut ElimTree, side: &[usize], moves: &mut Vec<SwapMove>) -> Result<()> {
        let depth = |t: &ElimTree, x: usize| {
            let mut d = 0;
            let mut cur = x;
            while let Some(p) = t.parent(cur) {
                d += 1;
                cur = p;
            }
            d
        };
        let mut chain = side.to_vec();
        chain.sort_by_key(|&x| depth(t, x));
        for &a in chain.iter().skip(1) {
            while let Some(p) = t.parent(a) {
                if !side.contains(&p) {
                    break;
                }
                let m = SwapMove::new(p, a);
                *t = t.apply_swap(&self.h, m)?;
                moves.push(m);
            }
        }
        Ok(())
    }

    /// The explicit sequence for a balanced minimum cut `x` of the source:
    /// lift the cut's subdivision vertices to the top, reverse the chain of
    /// original vertices on each side, then lower the lifted vertices the
    /// way they would be lifted from the target tree.
    pub fn sufficiency_sequence(&self, x: &VertexSet) -> Result<SufficiencyReport> {
        let g = &self.source;
        if x.universe() != g.n() {
            return Err(Error::invalid("cut does not belong to the source graph"));
        }
        let x = if x.contains(self.s) { x.clone() } else { x.complement() };
        if x.contains(self.t) {
            return Err(Error::invalid("cut does not separate s from t"));
        }
        if 2 * x.len() != g.n() {
            return Err(Error::invalid("cut is not balanced"));
        }
        let cut_set: Vec<usize> = g
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| x.contains(a) != x.contains(b))
            .map(|(e, _)| e)
            .collect();
        if cut_set.len() != self.lambda {
            return Err(Error::invalid(format!(
                "cut has {} edges but the minimum is {}",
                cut_set.len(),
                self.lambda
            )));
        }
        let lifted: Vec<usize> = cut_set.iter().map(|&e| self.u_nodes[e]).collect();

        let (mut tree, mut moves) = self.lift(&self.t_ini, &lifted)?;
        let lift_count = moves.len();
        let mut reversal = [BigUint::default(), BigUint::default()];
        for (k, side_has) in [true, false].into_iter().enumerate() {
            let side: Vec<usize> = self
                .v_nodes
                .iter()
                .zip(&self.v_source)
                .filter(|(_, &src)| x.contains(src) == side_has)
                .map(|(&h, _)| h)
                .collect();
            let before = moves.len();
            self.reverse_chain(&mut tree, &side, &mut moves)?;
            reversal[k] = moves[before..].iter().map(|&m| self.w.swap_weight(m)).sum();
        }
        let (meet, from_target) = self.lift(&self.t_tar, &lifted)?;
        if meet != tree {
            return Err(Error::invalid(
                "lifted trees from the two ends differ; the cut does not fit the gadget",
            ));
        }
        let push_start = moves.len();
        moves.extend(from_target.iter().rev().map(|m| m.reversed()));

        let cost = |ms: &[SwapMove]| -> BigUint { ms.iter().map(|&m| self.w.swap_weight(m)).sum() };
        let lift_up = cost(&moves[..lift_count]);
        let push_down = cost(&moves[push_start..]);
        let total = &lift_up + &reversal[0] + &reversal[1] + &push_down;
        Ok(SufficiencyReport {
            sequence: ReconfigSequence::new(self.t_ini.clone(), moves),
            lifted,
            lift_up,
            reversal,
            push_down,
            total,
        })
    }

    /// A uniformly random walk from the initial tree that never moves a
    /// copy vertex `x'` and never swaps two clique vertices.
    pub fn random_walk<R: Rng + ?Sized>(&self, steps: usize, rng: &mut R) -> Result<ReconfigSequence> {
        let mut t = self.t_ini.clone();
        let mut moves = Vec::with_capacity(steps);
        for _ in 0..steps {
            let allowed: Vec<SwapMove> = t
                .swaps()
                .into_iter()
                .filter(|m| {
                    !self.is_prime(m.parent)
                        && !self.is_prime(m.child)
                        && !(self.in_clique(m.parent) && self.in_clique(m.child))
                })
                .collect();
            let Some(&m) = allowed.choose(rng) else { break };
            t = t.apply_swap(&self.h, m)?;
            moves.push(m);
        }
        Ok(ReconfigSequence::new(self.t_ini.clone(), moves))
    }
}

/// A pair of subdivision vertices whose ancestor relation flipped with no
/// swap between two subdivision vertices in the meantime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReversalViolation {
    pub first: usize,
    pub second: usize,
    /// Tree index where `first` was an ancestor of `second`.
    pub from_step: usize,
    /// Tree index where `second` is an ancestor of `first`.
    pub to_step: usize,
}

/// Scans a sequence for two vertices of `marked` whose ancestor relation is
/// reversed between two trees without any swap of two marked vertices in
/// between. Returns the first such event.
pub fn find_reversal_violation(
    g: &Graph,
    marked: &[usize],
    seq: &ReconfigSequence,
) -> Result<Option<ReversalViolation>> {
    let k = marked.len();
    let mut slot = vec![usize::MAX; g.n()];
    for (i, &v) in marked.iter().enumerate() {
        slot[v] = i;
    }
    // last_above[a * k + b]: last tree index where marked[a] is above marked[b]
    let mut last_above: Vec<Option<usize>> = vec![None; k * k];
    let mut last_marked_swap: Option<usize> = None;
    let mut t = seq.start.clone();
    for step in 0..=seq.moves.len() {
        if step > 0 {
            let m = seq.moves[step - 1];
            t = t.apply_swap(g, m)?;
            if slot[m.parent] != usize::MAX && slot[m.child] != usize::MAX {
                last_marked_swap = Some(step - 1);
            }
        }
        for (b, &vb) in marked.iter().enumerate() {
            let mut cur = t.parent(vb);
            while let Some(p) = cur {
                let a = slot[p];
                if a != usize::MAX {
                    if let Some(i) = last_above[b * k + a] {
                        if last_marked_swap.is_none_or(|s| s < i) {
                            return Ok(Some(ReversalViolation {
                                first: vb,
                                second: p,
                                from_step: i,
                                to_step: step,
                            }));
                        }
                    }
                    last_above[a * k + b] = Some(step);
                }
                cur = t.parent(p);
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{cycle, path};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn path_source() -> Graph {
        Graph::new(&["s", "a", "b", "t"], &[("s", "a"), ("a", "b"), ("b", "t")]).unwrap()
    }

    #[test]
    fn gadget_size_and_weights() {
        let g = path_source();
        let inst = build_weighted_instance(&g, 0, 3, 2).unwrap();
        assert_eq!(inst.h.n(), 25);
        assert_eq!((inst.n, inst.m, inst.lambda), (1, 3, 1));
        let s1 = inst.h.index_of("s:1").unwrap();
        assert_eq!(*inst.w.get(s1), BigUint::from(16u32));
        assert_eq!(*inst.w.get(inst.h.index_of("v:a").unwrap()), BigUint::from(2u32));
        assert_eq!(*inst.w.get(inst.h.index_of("v':s").unwrap()), BigUint::from(256u32));
        assert_eq!(*inst.w.get(inst.h.index_of("u:2").unwrap()), BigUint::from(1u32));
        // two cliques, clique-to-u edges, v-u edges, copy-to-u edges
        assert_eq!(inst.h.m(), 2 * 28 + 2 * 8 + 4 + 6);
    }

    #[test]
    fn initial_tree_starts_with_the_chain() {
        let g = path_source();
        let inst = build_weighted_instance(&g, 0, 3, 2).unwrap();
        let h = &inst.h;
        let chain = ["v:a", "v:b", "s:1", "t:1", "s:2", "t:2"];
        assert_eq!(inst.t_ini.root(), h.index_of("v:a").unwrap());
        for pair in chain.windows(2) {
            let (a, b) = (h.index_of(pair[0]).unwrap(), h.index_of(pair[1]).unwrap());
            assert_eq!(inst.t_ini.parent(b), Some(a));
        }
        assert_eq!(inst.t_tar.root(), h.index_of("v:b").unwrap());
        let t1 = h.index_of("t:1").unwrap();
        assert_eq!(inst.t_tar.parent(h.index_of("s:1").unwrap()), Some(t1));
        assert!(inst.t_ini.is_valid(h) && inst.t_tar.is_valid(h));
    }

    #[test]
    fn builder_rejects_bad_input() {
        let g = path_source();
        assert!(build_weighted_instance(&g, 0, 0, 2).is_err());
        assert!(build_weighted_instance(&path(3), 0, 2, 2).is_err());
        assert!(build_weighted_instance(&g, 0, 3, 1).is_err());
        let split = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(build_weighted_instance(&split, 0, 3, 2).is_err());
        assert!(matches!(
            build_weighted_instance(&g, 0, 3, 1000),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn threshold_examples() {
        let inst = build_weighted_instance(&path_source(), 0, 3, 2).unwrap();
        assert_eq!(inst.threshold(), BigUint::from(516u32));
        let c4 = cycle(4);
        let inst = build_weighted_instance(&c4, 0, 2, 6).unwrap();
        assert_eq!(inst.lambda, 2);
        assert_eq!(inst.threshold(), BigUint::from(8u64 * 6u64.pow(7) + 36));
        assert_eq!(paper_n(1, 3), BigUint::from(30u32));
    }

    #[test]
    fn sufficiency_on_path_source() {
        let g = path_source();
        let inst = build_weighted_instance(&g, 0, 3, 6).unwrap();
        assert!(inst.margin_holds());
        let x = g.vertex_set(&["s", "a"]).unwrap();
        let rep = inst.sufficiency_sequence(&x).unwrap();
        let end = rep.sequence.end(&inst.h).unwrap();
        assert_eq!(end, inst.t_tar);
        assert!(rep.lift_up <= inst.lift_bound());
        assert!(rep.push_down <= inst.lift_bound());
        assert_eq!(rep.reversal[0], inst.reversal_cost());
        assert!(rep.total < inst.threshold());
        // the complement describes the same cut
        let rep2 = inst.sufficiency_sequence(&x.complement()).unwrap();
        assert_eq!(rep2.total, rep.total);
    }

    #[test]
    fn sufficiency_rejects_non_cuts() {
        let g = path_source();
        let inst = build_weighted_instance(&g, 0, 3, 2).unwrap();
        assert!(inst.sufficiency_sequence(&g.vertex_set(&["s"]).unwrap()).is_err());
        assert!(inst.sufficiency_sequence(&g.vertex_set(&["s", "t"]).unwrap()).is_err());
        let c4 = cycle(4);
        let inst = build_weighted_instance(&c4, 0, 2, 2).unwrap();
        // {1, 2} crosses two edges but is not balanced around s = 1, t = 3
        assert!(inst.sufficiency_sequence(&VertexSet::from_indices(4, [0, 2])).is_err());
    }

    #[test]
    fn restricted_walks_keep_the_reversal_property() {
        let inst = build_weighted_instance(&path_source(), 0, 3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let walk = inst.random_walk(200, &mut rng).unwrap();
            assert_eq!(find_reversal_violation(&inst.h, inst.u_nodes(), &walk).unwrap(), None);
        }
    }

    #[test]
    fn reversal_checker_flags_flips_through_incomparability() {
        // star with center 0: chain 1 -> 0 -> 2, then 1 and 2 become
        // incomparable under 0, then 2 rises above 0 and hence above 1
        let g = crate::families::star(2);
        let start = ElimTree::from_ordering(&g, &VertexOrder::new(3, vec![1, 0, 2]).unwrap()).unwrap();
        let seq = ReconfigSequence::new(start, vec![SwapMove::new(1, 0), SwapMove::new(0, 2)]);
        let found = find_reversal_violation(&g, &[1, 2], &seq).unwrap().unwrap();
        assert_eq!((found.first, found.second, found.from_step, found.to_step), (1, 2, 0, 2));
        assert_eq!(find_reversal_violation(&g, &[0, 1, 2], &seq).unwrap(), None);
    }
}
