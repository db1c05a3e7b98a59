//! The polymatroid whose base polytope is the graph associahedron.
//!
//! For a connected graph on `n >= 2` vertices the rank of `X` is
//! `3^(n-2)` minus `3^(|C|-2)` summed over the components `C` of `G - X`
//! with at least two vertices. Greedy extreme points of this rank function
//! are exactly the integer vectors `x^T` with leaves at 0 and subtree sums
//! `3^(|T(v)|-2)`.

use std::collections::HashSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::elim::{ElimTree, VertexOrder};
use crate::error::{Error, Result};
use crate::flip::{self, SearchLimits};
use crate::graph::{Graph, VertexSet};
use crate::par::{self, Exec};

/// Default cap on the ground set size for exhaustive subset checks.
pub const AXIOM_CAP: usize = 12;
/// Cap on the number of vertices for [`verify_realization`].
pub const REALIZATION_CAP: usize = 8;

/// A set function on `0..ground_size()`.
pub trait RankOracle: Sync {
    fn ground_size(&self) -> usize;
    fn rank(&self, x: &VertexSet) -> Result<BigInt>;
}

fn pow3(e: usize) -> BigInt {
    BigInt::from(3u32).pow(e as u32)
}

/// `3^(k-2)` for `k >= 2`, and 0 for a single vertex.
fn subtree_sum(k: usize) -> BigInt {
    if k >= 2 {
        pow3(k - 2)
    } else {
        BigInt::zero()
    }
}

#[derive(Debug, Clone)]
pub struct GraphAssocRank {
    g: Graph,
}

impl GraphAssocRank {
    pub fn new(g: &Graph) -> Result<Self> {
        if g.n() < 2 {
            return Err(Error::invalid("rank function needs at least two vertices"));
        }
        if !g.is_connected() {
            return Err(Error::invalid("graph is disconnected"));
        }
        Ok(GraphAssocRank { g: g.clone() })
    }

    pub fn graph(&self) -> &Graph {
        &self.g
    }
}

impl RankOracle for GraphAssocRank {
    fn ground_size(&self) -> usize {
        self.g.n()
    }

    fn rank(&self, x: &VertexSet) -> Result<BigInt> {
        let comps = self.g.nontrivial_components(x)?;
        let mut r = pow3(self.g.n() - 2);
        for c in comps {
            r -= pow3(c.len() - 2);
        }
        Ok(r)
    }
}

/// Ranks of every subset, indexed by bitmask.
#[derive(Debug, Clone)]
pub struct RankTable {
    n: usize,
    ranks: Vec<BigInt>,
}

impl RankTable {
    pub fn build(o: &dyn RankOracle, cap: usize, exec: Exec) -> Result<Self> {
        let n = o.ground_size();
        if n > cap || n >= 64 {
            return Err(Error::limit(format!(
                "ground set of size {n} exceeds the exhaustive cap {cap}"
            )));
        }
        let ranks = par::map_range(exec, 1usize << n, |mask| {
            o.rank(&VertexSet::from_mask(n, mask as u64))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        Ok(RankTable { n, ranks })
    }

    pub fn get(&self, mask: usize) -> &BigInt {
        &self.ranks[mask]
    }
}

impl RankOracle for RankTable {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn rank(&self, x: &VertexSet) -> Result<BigInt> {
        if x.universe() != self.n {
            return Err(Error::invalid("set does not match the ground set"));
        }
        let mask = x.mask().expect("small ground set") as usize;
        Ok(self.ranks[mask].clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axiom {
    /// `rank(empty) = 0`
    Normalized,
    /// `rank(X) <= rank(X + u)`
    Monotone,
    /// `rank(X + u) + rank(X + v) >= rank(X + u + v) + rank(X)`
    Submodular,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub set: Vec<usize>,
    pub elements: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub ground_size: usize,
    pub subsets: usize,
    pub checks: usize,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// [`check_axioms_capped`] with the default cap.
pub fn check_axioms(o: &dyn RankOracle, exec: Exec) -> Result<AxiomReport> {
    check_axioms_capped(o, AXIOM_CAP, exec)
}

/// Exhaustive check of normalization, monotonicity under one-element
/// extensions, and the two-element local form of submodularity, which
/// together imply the full axioms.
pub fn check_axioms_capped(o: &dyn RankOracle, cap: usize, exec: Exec) -> Result<AxiomReport> {
    let table = RankTable::build(o, cap, exec)?;
    let n = table.n;
    let r = |m: usize| &table.ranks[m];
    let mut violations = Vec::new();
    if !r(0).is_zero() {
        violations.push(Violation {
            axiom: Axiom::Normalized,
            set: vec![],
            elements: vec![],
        });
    }
    let set_of = |mask: usize| (0..n).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>();
    let per_set = par::map_range(exec, 1usize << n, |x| {
        let mut found = Vec::new();
        let mut checks = 0usize;
        let outside: Vec<usize> = (0..n).filter(|&i| x >> i & 1 == 0).collect();
        for &u in &outside {
            checks += 1;
            if r(x) > r(x | 1 << u) {
                found.push(Violation {
                    axiom: Axiom::Monotone,
                    set: set_of(x),
                    elements: vec![u],
                });
            }
        }
        for (&u, &v) in outside.iter().tuple_combinations() {
            checks += 1;
            if r(x | 1 << u) + r(x | 1 << v) < r(x | 1 << u | 1 << v) + r(x) {
                found.push(Violation {
                    axiom: Axiom::Submodular,
                    set: set_of(x),
                    elements: vec![u, v],
                });
            }
        }
        (checks, found)
    });
    let mut checks = 1;
    for (c, found) in per_set {
        checks += c;
        violations.extend(found);
    }
    Ok(AxiomReport {
        ground_size: n,
        subsets: 1 << n,
        checks,
        violations,
    })
}

/// `3^(a_1 + ... + a_k) - (3^(a_1) + ... + 3^(a_k))`.
pub fn power_sum_gap(a: &[u32]) -> Result<BigInt> {
    if a.is_empty() || a.contains(&0) {
        return Err(Error::invalid("exponents must be a nonempty list of positive integers"));
    }
    let total: u32 = a.iter().sum();
    let sum: BigInt = a.iter().map(|&x| BigInt::from(3u32).pow(x)).sum();
    Ok(BigInt::from(3u32).pow(total) - sum)
}

/// Whether `3^(sum a_i) >= sum 3^(a_i)`; true for every valid input.
pub fn power_sum_inequality(a: &[u32]) -> Result<bool> {
    Ok(power_sum_gap(a)? >= BigInt::zero())
}

/// A point with one integer coordinate per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticePoint(pub Vec<BigInt>);

impl LatticePoint {
    pub fn get(&self, v: usize) -> &BigInt {
        &self.0[v]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> BigInt {
        self.0.iter().sum()
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticePoint(coords.iter().map(|&c| BigInt::from(c)).collect())
    }
}

impl Serialize for LatticePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|c| c.to_string()))
    }
}

/// Prefix rank differences along `sigma`.
pub fn greedy_extreme_point(o: &dyn RankOracle, sigma: &VertexOrder) -> Result<LatticePoint> {
    let n = o.ground_size();
    if sigma.len() != n {
        return Err(Error::invalid("ordering does not cover the ground set"));
    }
    let mut coords = vec![BigInt::zero(); n];
    let mut prefix = VertexSet::empty(n);
    let mut prev = o.rank(&prefix)?;
    for &v in sigma.as_slice() {
        prefix.insert(v);
        let r = o.rank(&prefix)?;
        coords[v] = &r - &prev;
        prev = r;
    }
    Ok(LatticePoint(coords))
}

/// Coordinates with leaves at 0 and each subtree summing to
/// `3^(|T(v)|-2)`.
pub fn devadoss_coordinates(g: &Graph, t: &ElimTree) -> Result<LatticePoint> {
    if g.n() < 2 {
        return Err(Error::invalid("coordinates need at least two vertices"));
    }
    if !t.is_valid(g) {
        return Err(Error::invalid("tree is not an elimination tree of the graph"));
    }
    let n = g.n();
    let mut size = vec![1usize; n];
    let order = t.preorder();
    for &v in order.iter().rev() {
        if let Some(p) = t.parent(v) {
            size[p] += size[v];
        }
    }
    let mut coords: Vec<BigInt> = (0..n).map(|v| subtree_sum(size[v])).collect();
    for (v, &sz) in size.iter().enumerate() {
        if let Some(p) = t.parent(v) {
            coords[p] -= subtree_sum(sz);
        }
    }
    Ok(LatticePoint(coords))
}

/// Whether `x` lies in the base polytope: `x(X) <= rank(X)` for all `X`,
/// with equality on the full set.
pub fn membership(o: &dyn RankOracle, x: &LatticePoint, exec: Exec) -> Result<bool> {
    let n = o.ground_size();
    if x.len() != n {
        return Err(Error::invalid("point does not match the ground set"));
    }
    let table = RankTable::build(o, AXIOM_CAP, exec)?;
    let full = (1usize << n) - 1;
    let value = |mask: usize| -> BigInt {
        (0..n)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| x.get(i).clone())
            .sum()
    };
    if value(full) != *table.get(full) {
        return Ok(false);
    }
    let ok = par::map_range(exec, 1usize << n, |mask| value(mask) <= *table.get(mask));
    Ok(ok.into_iter().all(|b| b))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RealizationChecks {
    /// Greedy point of each ordering equals the coordinates of its tree.
    pub compat: bool,
    /// Greedy points and tree coordinates form the same set.
    pub cover: bool,
    /// Distinct trees have distinct coordinates.
    pub injective: bool,
    /// A swap changes only the two swapped coordinates, with zero sum.
    pub swap_support: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RealizationReport {
    pub trees: usize,
    pub points: usize,
    pub orderings: usize,
    pub checks: RealizationChecks,
}

impl RealizationReport {
    pub fn ok(&self) -> bool {
        let c = &self.checks;
        c.compat && c.cover && c.injective && c.swap_support
    }
}

/// Compares greedy points over all orderings with tree coordinates over all
/// elimination trees.
pub fn verify_realization(g: &Graph, exec: Exec) -> Result<RealizationReport> {
    if g.n() > REALIZATION_CAP {
        return Err(Error::limit(format!(
            "realization check is capped at {REALIZATION_CAP} vertices"
        )));
    }
    let oracle = GraphAssocRank::new(g)?;
    let table = RankTable::build(&oracle, REALIZATION_CAP, exec)?;
    let n = g.n();
    let orderings: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let per_order = par::try_map(exec, &orderings, |seq| -> Result<(bool, LatticePoint)> {
        let sigma = VertexOrder::new(n, seq.clone())?;
        let t = ElimTree::from_ordering(g, &sigma)?;
        let pos = sigma.position();
        let extends = (0..n).all(|v| t.parent(v).is_none_or(|p| pos[p] < pos[v]));
        let greedy = greedy_extreme_point(&table, &sigma)?;
        Ok((extends && greedy == devadoss_coordinates(g, &t)?, greedy))
    })?;
    let compat = per_order.iter().all(|(ok, _)| *ok);
    let greedy_points: HashSet<LatticePoint> = per_order.into_iter().map(|(_, p)| p).collect();

    let trees = flip::enumerate_all(g, &SearchLimits::default())?;
    let coords = par::try_map(exec, &trees, |t| devadoss_coordinates(g, t))?;
    let tree_points: HashSet<LatticePoint> = coords.iter().cloned().collect();
    let injective = tree_points.len() == trees.len();
    let cover = tree_points == greedy_points;

    let swap_ok = par::try_map(exec, &trees, |t| -> Result<bool> {
        let x = devadoss_coordinates(g, t)?;
        for m in t.swaps() {
            let y = devadoss_coordinates(g, &t.apply_swap(g, m)?)?;
            let supported = (0..n).all(|v| v == m.parent || v == m.child || x.get(v) == y.get(v));
            if !supported || x.sum() != y.sum() {
                return Ok(false);
            }
        }
        Ok(true)
    })?;

    Ok(RealizationReport {
        trees: trees.len(),
        points: tree_points.len(),
        orderings: orderings.len(),
        checks: RealizationChecks {
            compat,
            cover,
            injective,
            swap_support: swap_ok.into_iter().all(|b| b),
        },
    })
}

/// The rank of the full ground set, `3^(n-2)`.
pub fn full_rank(n: usize) -> BigInt {
    if n >= 2 {
        pow3(n - 2)
    } else {
        BigInt::zero()
    }
}
