//! Regions of the triangular lattice.
//!
//! Lattice points are `(p, q)` meaning `p * b + q * v` for two unit vectors
//! `b`, `v` at 120 degrees. Unit triangles come in two orientations:
//! `A(p, q)` has corners `(p,q), (p+1,q), (p+1,q+1)` and `B(p, q)` has
//! corners `(p,q), (p,q+1), (p+1,q+1)`. `A(p, q)` touches exactly
//! `B(p, q)`, `B(p+1, q)` and `B(p, q-1)`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;

use crate::error::Result;
use crate::rational::{rat, BigRational};

use super::{PlanarRegion, WeightTag};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Tri {
    A(i64, i64),
    B(i64, i64),
}

impl Tri {
    pub fn corners(self) -> [(i64, i64); 3] {
        match self {
            Tri::A(p, q) => [(p, q), (p + 1, q), (p + 1, q + 1)],
            Tri::B(p, q) => [(p, q), (p, q + 1), (p + 1, q + 1)],
        }
    }

    /// The triangle with the given corner set, if it is a unit triangle.
    pub fn from_corners(pts: [(i64, i64); 3]) -> Option<Tri> {
        let mut s = pts;
        s.sort();
        let (p, q) = s[0];
        if s == Tri::A(p, q).corners() {
            Some(Tri::A(p, q))
        } else if s == Tri::B(p, q).corners() {
            Some(Tri::B(p, q))
        } else {
            None
        }
    }

    /// Three times the centroid; distinct triangles get distinct points.
    pub fn coord(self) -> (i64, i64) {
        match self {
            Tri::A(p, q) => (3 * p + 2, 3 * q + 1),
            Tri::B(p, q) => (3 * p + 1, 3 * q + 2),
        }
    }

    pub fn from_coord((x, y): (i64, i64)) -> Option<Tri> {
        match (x.rem_euclid(3), y.rem_euclid(3)) {
            (2, 1) => Some(Tri::A((x - 2) / 3, (y - 1) / 3)),
            (1, 2) => Some(Tri::B((x - 1) / 3, (y - 2) / 3)),
            _ => None,
        }
    }

    pub fn color(self) -> u8 {
        match self {
            Tri::A(..) => 0,
            Tri::B(..) => 1,
        }
    }

    /// Triangles across each side (only meaningful for `A`).
    pub fn b_neighbours(self) -> [Tri; 3] {
        match self {
            Tri::A(p, q) => [Tri::B(p, q), Tri::B(p + 1, q), Tri::B(p, q - 1)],
            Tri::B(p, q) => [Tri::A(p, q), Tri::A(p - 1, q), Tri::A(p, q + 1)],
        }
    }

    /// Image under the rotation by 120 degrees about the origin.
    pub fn rotate120(self) -> Tri {
        let c = self.corners().map(rotate120_point);
        Tri::from_corners(c).expect("rotation maps unit triangles to unit triangles")
    }

    /// The common side of two adjacent triangles.
    pub fn shared_side(self, other: Tri) -> Option<((i64, i64), (i64, i64))> {
        let a: BTreeSet<_> = self.corners().into_iter().collect();
        let common: Vec<_> = other.corners().into_iter().filter(|p| a.contains(p)).collect();
        (common.len() == 2).then(|| (common[0], common[1]))
    }
}

pub fn rotate120_point((p, q): (i64, i64)) -> (i64, i64) {
    (-q, p - q)
}

/// A set of unit triangles with optional lozenge weights and extra
/// adjacencies (for glued sides).
#[derive(Clone, Debug, Default)]
pub struct TriRegion {
    pub tris: BTreeSet<Tri>,
    /// Weight overrides keyed by `(A, B)` lozenge.
    pub weights: BTreeMap<(Tri, Tri), (BigRational, Option<WeightTag>)>,
    /// Extra `(A, B)` adjacencies across glued sides.
    pub glued: Vec<(Tri, Tri)>,
}

impl TriRegion {
    pub fn new(tris: impl IntoIterator<Item = Tri>) -> Self {
        TriRegion { tris: tris.into_iter().collect(), ..Default::default() }
    }

    pub fn set_weight(&mut self, a: Tri, b: Tri, w: BigRational, tag: Option<WeightTag>) {
        assert!(self.tris.contains(&a) && self.tris.contains(&b), "weighted lozenge outside region");
        self.weights.insert((a, b), (w, tag));
    }

    /// The dual graph: one vertex per triangle (ordered), one edge per pair
    /// of triangles sharing a side, plus glued pairs.
    pub fn to_region(&self) -> PlanarRegion {
        let mut r = PlanarRegion::new();
        let mut id = BTreeMap::new();
        for &t in &self.tris {
            id.insert(t, r.add_vertex(t.coord(), t.color()));
        }
        let mut add = |a: Tri, b: Tri| {
            let (w, tag) = self.weights.get(&(a, b)).cloned().unwrap_or_else(|| (BigRational::one(), None));
            r.add_tagged_edge(id[&a], id[&b], w, tag);
        };
        for &a in &self.tris {
            if let Tri::A(..) = a {
                for b in a.b_neighbours() {
                    if self.tris.contains(&b) {
                        add(a, b);
                    }
                }
            }
        }
        for &(a, b) in &self.glued {
            add(a, b);
        }
        r
    }
}

/// Triangles of the regular hexagon of side `a` centred at the origin.
pub fn hexagon_triangles(a: i64) -> BTreeSet<Tri> {
    let inside = |(p, q): (i64, i64)| p.abs().max(q.abs()).max((p - q).abs()) <= a;
    let mut out = BTreeSet::new();
    for p in -a - 1..=a {
        for q in -a - 1..=a {
            for t in [Tri::A(p, q), Tri::B(p, q)] {
                if t.corners().into_iter().all(inside) {
                    out.insert(t);
                }
            }
        }
    }
    out
}

pub fn hexagon_region(a: i64) -> PlanarRegion {
    TriRegion::new(hexagon_triangles(a)).to_region()
}

/// Quotient of the hexagon's dual graph by the rotation of order 3. Vertex
/// and edge orbits are represented by their least member; the action is
/// free because the centre is a lattice point. The second component maps
/// each quotient edge to its three lozenges.
pub fn hexagon_rotation_quotient(a: i64) -> (PlanarRegion, Vec<[(Tri, Tri); 3]>) {
    let tris = hexagon_triangles(a);
    let orbit = |t: Tri| {
        let r1 = t.rotate120();
        let r2 = r1.rotate120();
        debug_assert_eq!(r2.rotate120(), t);
        t.min(r1).min(r2)
    };
    let mut q = PlanarRegion::new();
    let mut id = BTreeMap::new();
    for &t in &tris {
        let rep = orbit(t);
        if rep == t {
            id.insert(rep, q.add_vertex(t.coord(), t.color()));
        }
    }
    let mut seen = BTreeSet::new();
    let mut lifts = Vec::new();
    for &a_tri in &tris {
        if let Tri::A(..) = a_tri {
            for b_tri in a_tri.b_neighbours() {
                if !tris.contains(&b_tri) {
                    continue;
                }
                let e0 = (a_tri, b_tri);
                let e1 = (e0.0.rotate120(), e0.1.rotate120());
                let e2 = (e1.0.rotate120(), e1.1.rotate120());
                let rep = e0.min(e1).min(e2);
                if seen.insert(rep) {
                    q.add_edge(id[&orbit(a_tri)], id[&orbit(b_tri)], BigRational::one());
                    lifts.push([e0, e1, e2]);
                }
            }
        }
    }
    (q, lifts)
}

/// The region whose weighted tilings are counted by the lattice path
/// determinant with `n` paths and `l` extra rows. Lozenges of weight `x`
/// and `y` carry the corresponding tags and evaluate to the given values.
pub fn region_rl(n: usize, l: usize, x: &BigRational, y: &BigRational) -> PlanarRegion {
    tri_region_rl(n, l, x, y).to_region()
}

pub(crate) fn tri_region_rl(n: usize, l: usize, x: &BigRational, y: &BigRational) -> TriRegion {
    let (n, l) = (n as i64, l as i64);
    let top = l + 2 * n - 1;
    let mut tris = BTreeSet::new();
    for p in 0..2 * n {
        for q in (p + 1) / 2..=(l + 1 + 2 * p).min(top) {
            tris.insert(Tri::A(p, q));
        }
        for q in p / 2..=(l + 2 * p).min(top) {
            tris.insert(Tri::B(p, q));
        }
    }
    let mut r = TriRegion::new(tris);
    for k in 1..=n {
        r.set_weight(Tri::A(2 * k - 2, k - 1), Tri::B(2 * k - 1, k - 1), x.clone(), Some(WeightTag::X));
    }
    for k in 0..n {
        r.set_weight(Tri::A(k, 2 * k + l + 1), Tri::B(k, 2 * k + l), y.clone(), Some(WeightTag::Y));
    }
    r
}

/// Upper half of the symmetric region after the factorisation cut, with
/// weight `1/2` on the cut lozenges.
pub fn region_r(k: usize) -> PlanarRegion {
    region_rl(k, 0, &rat(1, 2), &rat(1, 1))
}

/// Lower half of the symmetric region after the factorisation cut.
pub fn region_rprime(k: usize) -> PlanarRegion {
    region_rl(k, 1, &rat(1, 2), &rat(1, 1))
}

/// The honeycomb region whose perfect matchings are the half-turn
/// symmetric FPLs of size `2n + 1` with the odd fixed edges: an
/// `(n + 1) x n` rhombus of triangles whose top and right sides are glued,
/// the `b`-th segment of the right side meeting the `(b + 1)`-th of the top.
pub fn region_g(n: usize) -> Result<PlanarRegion> {
    let n = n as i64;
    let mut tris = BTreeSet::new();
    for p in 0..=n {
        for q in 0..n {
            tris.insert(Tri::A(p, q));
            tris.insert(Tri::B(p, q));
        }
    }
    let mut r = TriRegion::new(tris);
    for b in 0..n {
        r.glued.push((Tri::A(b + 1, 0), Tri::B(0, b)));
    }
    let region = r.to_region();
    region.check_bipartite()?;
    Ok(region)
}
