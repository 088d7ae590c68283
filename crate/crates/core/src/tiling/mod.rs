//! Weighted bipartite regions and their perfect matchings.
//!
//! A lozenge tiling of a triangular-lattice region is a perfect matching of
//! its dual graph (one vertex per unit triangle), so every tiling question
//! here reduces to [`count_matchings`] or [`for_each_matching`].

mod bijection;
mod iso;
mod lattice;
mod partition;

pub use bijection::{ciucu_factorize_check, cspp_bijection, rotation_invariant_tilings, CsppBijection, RotationCount};
pub use iso::{find_isomorphism, is_isomorphism};
pub use lattice::{
    hexagon_region, hexagon_rotation_quotient, hexagon_triangles, region_g, region_r, region_rl, region_rprime,
    Tri, TriRegion,
};
pub use partition::PlanePartition;

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::BiPoly;
use crate::rational::{fmt_rational, BigRational};

/// Marks an edge whose weight is one of the formal variables.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum WeightTag {
    X,
    Y,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RegionEdge {
    pub u: usize,
    pub v: usize,
    pub weight: BigRational,
    pub tag: Option<WeightTag>,
}

/// A finite weighted graph with a 2-colouring and integer positions. The
/// positions only serve as labels and as the sweep order of the counter.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PlanarRegion {
    coords: Vec<(i64, i64)>,
    color: Vec<u8>,
    edges: Vec<RegionEdge>,
}

impl PlanarRegion {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, coord: (i64, i64), color: u8) -> usize {
        self.coords.push(coord);
        self.color.push(color);
        self.coords.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize, weight: BigRational) -> usize {
        self.add_tagged_edge(u, v, weight, None)
    }

    pub fn add_tagged_edge(&mut self, u: usize, v: usize, weight: BigRational, tag: Option<WeightTag>) -> usize {
        assert!(u < self.coords.len() && v < self.coords.len(), "edge endpoint out of range");
        self.edges.push(RegionEdge { u, v, weight, tag });
        self.edges.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.coords.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[RegionEdge] {
        &self.edges
    }

    pub fn coord(&self, v: usize) -> (i64, i64) {
        self.coords[v]
    }

    pub fn color(&self, v: usize) -> u8 {
        self.color[v]
    }

    pub fn vertex_at(&self, coord: (i64, i64)) -> Option<usize> {
        self.coords.iter().position(|&c| c == coord)
    }

    /// Every edge joins the two colour classes.
    pub fn check_bipartite(&self) -> Result<()> {
        for e in &self.edges {
            if self.color[e.u] == self.color[e.v] {
                return Err(Error::NotBipartite(format!(
                    "edge {:?}-{:?} joins one colour class",
                    self.coords[e.u], self.coords[e.v]
                )));
            }
        }
        Ok(())
    }

    pub fn is_balanced(&self) -> bool {
        let black = self.color.iter().filter(|&&c| c == 1).count();
        2 * black == self.color.len()
    }

    /// Degree counting parallel edges.
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.u == v || e.v == v).count()
    }

    /// Substitutes values for the tagged edges.
    pub fn with_weights(&self, x: &BigRational, y: &BigRational) -> PlanarRegion {
        let mut r = self.clone();
        for e in &mut r.edges {
            match e.tag {
                Some(WeightTag::X) => e.weight = x.clone(),
                Some(WeightTag::Y) => e.weight = y.clone(),
                None => {}
            }
        }
        r
    }

    /// The same region with weight tags dropped, keeping the values.
    pub fn untagged(&self) -> PlanarRegion {
        let mut r = self.clone();
        for e in &mut r.edges {
            e.tag = None;
        }
        r
    }

    /// Two regions side by side; the second one's vertices are renumbered.
    pub fn disjoint_union(&self, other: &PlanarRegion) -> PlanarRegion {
        let mut r = self.clone();
        let shift = r.vertex_count();
        let dx = self.coords.iter().map(|c| c.0).max().unwrap_or(0) + 1
            - other.coords.iter().map(|c| c.0).min().unwrap_or(0);
        for (i, &(x, y)) in other.coords.iter().enumerate() {
            r.add_vertex((x + dx, y), other.color[i]);
        }
        for e in &other.edges {
            r.add_tagged_edge(e.u + shift, e.v + shift, e.weight.clone(), e.tag);
        }
        r
    }

    /// Removes the given vertices (and every edge touching them).
    pub fn without_vertices(&self, drop: &[usize]) -> PlanarRegion {
        let mut keep = vec![true; self.vertex_count()];
        for &v in drop {
            keep[v] = false;
        }
        let mut new_id = vec![usize::MAX; self.vertex_count()];
        let mut r = PlanarRegion::new();
        for v in 0..self.vertex_count() {
            if keep[v] {
                new_id[v] = r.add_vertex(self.coords[v], self.color[v]);
            }
        }
        for e in &self.edges {
            if keep[e.u] && keep[e.v] {
                r.add_tagged_edge(new_id[e.u], new_id[e.v], e.weight.clone(), e.tag);
            }
        }
        r
    }

    /// Edge-list text form, one `(x1,y1)-(x2,y2) w=p/q` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut lines: Vec<String> = self
            .edges
            .iter()
            .map(|e| {
                let (a, b) = (self.coords[e.u], self.coords[e.v]);
                let (a, b) = if a <= b { (a, b) } else { (b, a) };
                let w = match e.tag {
                    Some(WeightTag::X) => "x".to_string(),
                    Some(WeightTag::Y) => "y".to_string(),
                    None => fmt_rational(&e.weight),
                };
                format!("({},{})-({},{}) w={w}", a.0, a.1, b.0, b.1)
            })
            .collect();
        lines.sort();
        lines.join("\n") + "\n"
    }
}

impl fmt::Display for PlanarRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "region with {} vertices and {} edges", self.vertex_count(), self.edge_count())
    }
}

/// A perfect matching given by edge indices in increasing order.
#[derive(Clone, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct Tiling {
    pub edges: Vec<usize>,
}

impl Tiling {
    pub fn weight(&self, r: &PlanarRegion) -> BigRational {
        self.edges.iter().fold(BigRational::one(), |acc, &e| acc * &r.edges[e].weight)
    }

    pub fn is_perfect(&self, r: &PlanarRegion) -> bool {
        let mut seen = vec![false; r.vertex_count()];
        for &e in &self.edges {
            for v in [r.edges[e].u, r.edges[e].v] {
                if seen[v] {
                    return false;
                }
                seen[v] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }
}

type Bits = Vec<u64>;

fn has(bits: &Bits, i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 == 1
}

fn clear(bits: &mut Bits, i: usize) {
    bits[i / 64] &= !(1u64 << (i % 64));
}

fn first(bits: &Bits) -> Option<usize> {
    bits.iter().enumerate().find(|(_, &w)| w != 0).map(|(k, &w)| 64 * k + w.trailing_zeros() as usize)
}

/// Vertices renumbered in sweep order with adjacency lists of
/// `(neighbour, edge index)`.
struct Sweep {
    adj: Vec<Vec<(usize, usize)>>,
    words: usize,
}

impl Sweep {
    fn new(r: &PlanarRegion) -> Self {
        let mut order: Vec<usize> = (0..r.vertex_count()).collect();
        order.sort_by_key(|&v| (r.coords[v], v));
        let mut rank_of = vec![0; r.vertex_count()];
        for (k, &v) in order.iter().enumerate() {
            rank_of[v] = k;
        }
        let mut adj = vec![Vec::new(); r.vertex_count()];
        for (i, e) in r.edges.iter().enumerate() {
            let (a, b) = (rank_of[e.u], rank_of[e.v]);
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
        Sweep { adj, words: r.vertex_count().div_ceil(64).max(1) }
    }

    fn full(&self) -> Bits {
        let mut bits = vec![0u64; self.words];
        for i in 0..self.adj.len() {
            bits[i / 64] |= 1 << (i % 64);
        }
        bits
    }
}

struct Counter<'a, W> {
    sweep: &'a Sweep,
    weights: &'a [W],
    memo: HashMap<Bits, W>,
}

impl<W> Counter<'_, W>
where
    W: Clone + Zero + One,
    for<'b> &'b W: std::ops::Mul<&'b W, Output = W>,
{
    /// Weighted count of matchings of the vertex set `rem`, always matching
    /// the first remaining vertex in sweep order.
    fn count(&mut self, rem: &Bits) -> W {
        let Some(u) = first(rem) else {
            return W::one();
        };
        if let Some(w) = self.memo.get(rem) {
            return w.clone();
        }
        let mut total = W::zero();
        for &(v, e) in &self.sweep.adj[u] {
            if v != u && has(rem, v) {
                let mut next = rem.clone();
                clear(&mut next, u);
                clear(&mut next, v);
                let sub = self.count(&next);
                if !sub.is_zero() {
                    total = total + &self.weights[e] * &sub;
                }
            }
        }
        self.memo.insert(rem.clone(), total.clone());
        total
    }
}

/// Weighted perfect matching count with an arbitrary edge-weight semiring.
/// The first few branching levels run in parallel, each with its own memo.
pub fn count_matchings_with<W>(r: &PlanarRegion, weight: impl Fn(&RegionEdge) -> W) -> W
where
    W: Clone + Zero + One + Send + Sync,
    for<'b> &'b W: std::ops::Mul<&'b W, Output = W>,
{
    if !r.is_balanced() {
        return W::zero();
    }
    let sweep = Sweep::new(r);
    let weights: Vec<W> = r.edges.iter().map(&weight).collect();
    // Expand two levels by hand to get independent subproblems.
    let mut tasks: Vec<(W, Bits)> = vec![(W::one(), sweep.full())];
    for _ in 0..2 {
        let mut next_tasks = Vec::new();
        for (coef, rem) in tasks {
            let Some(u) = first(&rem) else {
                next_tasks.push((coef, rem));
                continue;
            };
            for &(v, e) in &sweep.adj[u] {
                if v != u && has(&rem, v) {
                    let mut next = rem.clone();
                    clear(&mut next, u);
                    clear(&mut next, v);
                    next_tasks.push((&coef * &weights[e], next));
                }
            }
        }
        tasks = next_tasks;
    }
    let parts = crate::par::map(tasks, |(coef, rem)| {
        let mut c = Counter { sweep: &sweep, weights: &weights, memo: HashMap::new() };
        let sub = c.count(&rem);
        &coef * &sub
    });
    parts.into_iter().fold(W::zero(), |acc, p| acc + p)
}

/// Exact weighted number of perfect matchings.
pub fn count_matchings(r: &PlanarRegion) -> BigRational {
    count_matchings_with(r, |e| e.weight.clone())
}

/// Matching generating polynomial with tagged edges read as `x` and `y`.
pub fn count_matchings_symbolic(r: &PlanarRegion) -> BiPoly {
    count_matchings_with(r, |e| match e.tag {
        Some(WeightTag::X) => BiPoly::x(),
        Some(WeightTag::Y) => BiPoly::y(),
        None => BiPoly::constant(e.weight.clone()),
    })
}

/// Calls `visit` on every perfect matching, in a fixed order.
pub fn for_each_matching(r: &PlanarRegion, mut visit: impl FnMut(&Tiling)) {
    if !r.is_balanced() {
        return;
    }
    let sweep = Sweep::new(r);
    let mut chosen = Vec::new();
    fn go(sweep: &Sweep, rem: &mut Bits, chosen: &mut Vec<usize>, visit: &mut dyn FnMut(&Tiling)) {
        let Some(u) = first(rem) else {
            let mut edges = chosen.clone();
            edges.sort_unstable();
            visit(&Tiling { edges });
            return;
        };
        for &(v, e) in &sweep.adj[u] {
            if v != u && has(rem, v) {
                clear(rem, u);
                clear(rem, v);
                chosen.push(e);
                go(sweep, rem, chosen, visit);
                chosen.pop();
                rem[u / 64] |= 1 << (u % 64);
                rem[v / 64] |= 1 << (v % 64);
            }
        }
    }
    let mut rem = sweep.full();
    go(&sweep, &mut rem, &mut chosen, &mut visit);
}

/// Every perfect matching, collected.
pub fn enumerate_matchings(r: &PlanarRegion) -> Vec<Tiling> {
    let mut out = Vec::new();
    for_each_matching(r, |t| out.push(t.clone()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn path(n: usize) -> PlanarRegion {
        let mut r = PlanarRegion::new();
        for i in 0..n {
            r.add_vertex((i as i64, 0), (i % 2) as u8);
        }
        for i in 1..n {
            r.add_edge(i - 1, i, rat(1, 1));
        }
        r
    }

    #[test]
    fn empty_region_has_one_matching() {
        assert_eq!(count_matchings(&PlanarRegion::new()), rat(1, 1));
        assert_eq!(enumerate_matchings(&PlanarRegion::new()).len(), 1);
    }

    #[test]
    fn paths_and_cycles() {
        assert_eq!(count_matchings(&path(4)), rat(1, 1));
        assert_eq!(count_matchings(&path(3)), rat(0, 1));
        let mut c = path(6);
        c.add_edge(5, 0, rat(1, 2));
        assert_eq!(count_matchings(&c), rat(3, 2));
        assert_eq!(enumerate_matchings(&c).len(), 2);
    }

    #[test]
    fn parallel_edges_count_separately() {
        let mut r = PlanarRegion::new();
        let a = r.add_vertex((0, 0), 0);
        let b = r.add_vertex((1, 0), 1);
        r.add_edge(a, b, rat(1, 1));
        r.add_edge(a, b, rat(1, 3));
        assert_eq!(count_matchings(&r), rat(4, 3));
    }

    #[test]
    fn odd_colour_classes_give_zero() {
        let mut r = PlanarRegion::new();
        r.add_vertex((0, 0), 0);
        r.add_vertex((1, 0), 0);
        assert_eq!(count_matchings(&r), rat(0, 1));
        assert!(enumerate_matchings(&r).is_empty());
    }

    #[test]
    fn edge_list_format() {
        let mut r = path(2);
        r.edges[0].weight = rat(1, 2);
        assert_eq!(r.to_edge_list(), "(0,0)-(1,0) w=1/2\n");
    }
}
