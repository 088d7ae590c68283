//! Plane partitions in a cube and their lozenge tilings.
//!
//! A tiling of the hexagon of side `a` is read as a stepped surface: the
//! lattice steps `(1,0)`, `(0,1)` and `(1,1)` along lozenge sides lift to
//! `+e_x`, `+e_y` and `-e_z`, and the lozenges `A(p,q) + B(p,q)` are the
//! horizontal faces.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::lattice::Tri;
use super::{PlanarRegion, Tiling};
use crate::error::{Error, Result};

/// Which side of the lifted surface is filled. Fixed by the handedness of
/// the lift above.
const SOLID_BELOW: bool = true;

/// Heights `rows[i][j]`, weakly decreasing along rows and columns, inside
/// an `a x a x a` box.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct PlanePartition {
    pub side: usize,
    pub rows: Vec<Vec<usize>>,
}

impl PlanePartition {
    pub fn new(side: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        let pp = PlanePartition { side, rows };
        if pp.rows.len() != side || pp.rows.iter().any(|r| r.len() != side) {
            return Err(Error::InvalidGrid(format!("plane partition is not {side}x{side}")));
        }
        for i in 0..side {
            for j in 0..side {
                let h = pp.rows[i][j];
                if h > side
                    || (i + 1 < side && pp.rows[i + 1][j] > h)
                    || (j + 1 < side && pp.rows[i][j + 1] > h)
                {
                    return Err(Error::InvalidGrid(format!("heights {:?} are not a plane partition", pp.rows)));
                }
            }
        }
        Ok(pp)
    }

    pub fn volume(&self) -> usize {
        self.rows.iter().flatten().sum()
    }

    pub fn contains(&self, (i, j, k): (usize, usize, usize)) -> bool {
        i < self.side && j < self.side && k < self.rows[i][j]
    }

    pub fn cubes(&self) -> BTreeSet<(usize, usize, usize)> {
        let mut out = BTreeSet::new();
        for i in 0..self.side {
            for j in 0..self.side {
                for k in 0..self.rows[i][j] {
                    out.insert((i, j, k));
                }
            }
        }
        out
    }

    pub fn from_cubes(side: usize, cubes: &BTreeSet<(usize, usize, usize)>) -> Result<Self> {
        let mut rows = vec![vec![0; side]; side];
        for &(i, j, _) in cubes {
            rows[i][j] += 1;
        }
        let pp = PlanePartition::new(side, rows)?;
        if &pp.cubes() != cubes {
            return Err(Error::InvalidGrid("cube set is not an order ideal".into()));
        }
        Ok(pp)
    }

    /// Invariant under the cyclic permutation of the three axes.
    pub fn is_cyclically_symmetric(&self) -> bool {
        self.cubes().iter().all(|&(i, j, k)| self.contains((j, k, i)))
    }

    /// Reads a lozenge tiling of the hexagon of side `side` (as built by
    /// `hexagon_region`) as a plane partition.
    pub fn from_tiling(side: usize, region: &PlanarRegion, tiling: &Tiling) -> Result<Self> {
        if !tiling.is_perfect(region) {
            return Err(Error::InvalidGrid("not a perfect matching".into()));
        }
        // Interior sides of lozenges are not part of the stepped surface.
        let mut interior = BTreeSet::new();
        let mut horizontal = Vec::new();
        for &e in &tiling.edges {
            let edge = &region.edges()[e];
            let (s, t) = (tri_of(region, edge.u)?, tri_of(region, edge.v)?);
            let cut = s.shared_side(t).ok_or_else(|| Error::InvalidGrid("matched triangles are not adjacent".into()))?;
            interior.insert(ordered(cut));
            let (a, b) = if let Tri::A(..) = s { (s, t) } else { (t, s) };
            if let (Tri::A(p, q), Tri::B(p2, q2)) = (a, b) {
                if (p, q) == (p2, q2) {
                    horizontal.push((p, q));
                }
            }
        }
        let mut adj: BTreeMap<(i64, i64), Vec<(i64, i64)>> = BTreeMap::new();
        for v in 0..region.vertex_count() {
            let t = tri_of(region, v)?;
            let c = t.corners();
            for (x, y) in [(c[0], c[1]), (c[1], c[2]), (c[0], c[2])] {
                if !interior.contains(&ordered((x, y))) {
                    adj.entry(x).or_default().push(y);
                    adj.entry(y).or_default().push(x);
                }
            }
        }
        let Some(&start) = adj.keys().next() else {
            return PlanePartition::new(side, vec![vec![0; side]; side]);
        };
        let mut lift: BTreeMap<(i64, i64), [i64; 3]> = BTreeMap::from([(start, [0, 0, 0])]);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let base = lift[&u];
            for &w in &adj[&u] {
                let step = match (w.0 - u.0, w.1 - u.1) {
                    (1, 0) => [1, 0, 0],
                    (-1, 0) => [-1, 0, 0],
                    (0, 1) => [0, 1, 0],
                    (0, -1) => [0, -1, 0],
                    (1, 1) => [0, 0, -1],
                    (-1, -1) => [0, 0, 1],
                    d => return Err(Error::InvalidGrid(format!("unexpected lattice step {d:?}"))),
                };
                let image = [base[0] + step[0], base[1] + step[1], base[2] + step[2]];
                match lift.get(&w) {
                    Some(&old) if old != image => {
                        return Err(Error::InvalidGrid("stepped surface does not close up".into()));
                    }
                    Some(_) => {}
                    None => {
                        lift.insert(w, image);
                        queue.push_back(w);
                    }
                }
            }
        }
        let min: Vec<i64> = (0..3).map(|k| lift.values().map(|p| p[k]).min().unwrap()).collect();
        let n = side as i64;
        let mut rows = vec![vec![0usize; side]; side];
        let mut filled = vec![vec![false; side]; side];
        for (p, q) in horizontal {
            let [x, y, z] = lift[&(p, q)];
            let (x, y, z) = (x - min[0], y - min[1], z - min[2]);
            if !(0..n).contains(&x) || !(0..n).contains(&y) || !(0..=n).contains(&z) {
                return Err(Error::InvalidGrid("horizontal face outside the box".into()));
            }
            let (i, j) = (x as usize, y as usize);
            if filled[i][j] {
                return Err(Error::InvalidGrid("two horizontal faces over one column".into()));
            }
            filled[i][j] = true;
            rows[i][j] = z as usize;
        }
        if filled.iter().flatten().any(|f| !f) {
            return Err(Error::InvalidGrid("column without a horizontal face".into()));
        }
        if !SOLID_BELOW {
            // The solid lies above the surface; reflect it into the corner.
            rows = (0..side).map(|i| (0..side).map(|j| side - rows[side - 1 - i][side - 1 - j]).collect()).collect();
        }
        PlanePartition::new(side, rows)
    }

    /// The tiling of `region` (a hexagon of side `self.side`) seen as the
    /// visible surface of the cubes. Inverse of [`Self::from_tiling`].
    pub fn to_tiling(&self, region: &PlanarRegion) -> Result<Tiling> {
        let a = self.side;
        let mut lozenges = Vec::new();
        for i in 0..a {
            for j in 0..a {
                let h = self.rows[i][j] as i64;
                let (p, q) = (i as i64 - h, j as i64 - h);
                lozenges.push((Tri::A(p, q), Tri::B(p, q)));
            }
        }
        for j in 0..a {
            for k in 0..a {
                let x = (0..a).filter(|&i| self.rows[i][j] > k).count() as i64;
                let (j, k) = (j as i64, k as i64);
                lozenges.push((Tri::A(x - k - 1, j - k), Tri::B(x - k - 1, j - k - 1)));
            }
        }
        for i in 0..a {
            for k in 0..a {
                let y = self.rows[i].iter().filter(|&&h| h > k).count() as i64;
                let (i, k) = (i as i64, k as i64);
                lozenges.push((Tri::A(i - k - 1, y - k - 1), Tri::B(i - k, y - k - 1)));
            }
        }
        // Translate the surface onto the region.
        let mut lookup = BTreeMap::new();
        for (idx, e) in region.edges().iter().enumerate() {
            let (s, t) = (tri_of(region, e.u)?, tri_of(region, e.v)?);
            let key = if let Tri::A(..) = s { (s, t) } else { (t, s) };
            lookup.insert(key, idx);
        }
        let anchor = |tris: &mut dyn Iterator<Item = Tri>| tris.map(|t| t.coord()).min();
        let raw_min = anchor(&mut lozenges.iter().flat_map(|&(s, t)| [s, t]));
        let region_min = anchor(&mut (0..region.vertex_count()).filter_map(|v| tri_of(region, v).ok()));
        let (Some(r0), Some(g0)) = (raw_min, region_min) else {
            return Ok(Tiling { edges: vec![] });
        };
        let (dx, dy) = ((g0.0 - r0.0) / 3, (g0.1 - r0.1) / 3);
        let shift = |t: Tri| match t {
            Tri::A(p, q) => Tri::A(p + dx, q + dy),
            Tri::B(p, q) => Tri::B(p + dx, q + dy),
        };
        let mut edges = Vec::with_capacity(lozenges.len());
        for (s, t) in lozenges {
            let idx = lookup
                .get(&(shift(s), shift(t)))
                .ok_or_else(|| Error::InvalidGrid("surface lozenge outside the region".into()))?;
            edges.push(*idx);
        }
        edges.sort_unstable();
        let tiling = Tiling { edges };
        if !tiling.is_perfect(region) {
            return Err(Error::InvalidGrid("surface lozenges overlap".into()));
        }
        Ok(tiling)
    }

    /// Every cyclically symmetric plane partition in the box, enumerated as
    /// order ideals of the poset of cube orbits.
    pub fn enumerate_cyclically_symmetric(side: usize) -> Vec<PlanePartition> {
        let mut orbits: Vec<Vec<(usize, usize, usize)>> = Vec::new();
        let mut seen = BTreeSet::new();
        let mut all = Vec::new();
        for i in 0..side {
            for j in 0..side {
                for k in 0..side {
                    all.push((i, j, k));
                }
            }
        }
        // Sorting by coordinate sum gives a linear extension.
        all.sort_by_key(|&(i, j, k)| (i + j + k, i, j, k));
        let mut orbit_of = BTreeMap::new();
        for &c in &all {
            if seen.insert(c) {
                let (i, j, k) = c;
                let orbit: BTreeSet<_> = [(i, j, k), (j, k, i), (k, i, j)].into_iter().collect();
                for &m in &orbit {
                    seen.insert(m);
                    orbit_of.insert(m, orbits.len());
                }
                orbits.push(orbit.into_iter().collect());
            }
        }
        let below: Vec<Vec<usize>> = orbits
            .iter()
            .map(|orb| {
                let mut b = BTreeSet::new();
                for &(i, j, k) in orb {
                    for c in [(i.wrapping_sub(1), j, k), (i, j.wrapping_sub(1), k), (i, j, k.wrapping_sub(1))] {
                        if let Some(&o) = orbit_of.get(&c) {
                            b.insert(o);
                        }
                    }
                }
                b.into_iter().collect()
            })
            .collect();
        let mut chosen = vec![false; orbits.len()];
        let mut out = Vec::new();
        fn go(
            idx: usize,
            side: usize,
            orbits: &[Vec<(usize, usize, usize)>],
            below: &[Vec<usize>],
            chosen: &mut Vec<bool>,
            out: &mut Vec<PlanePartition>,
        ) {
            if idx == orbits.len() {
                let cubes = orbits.iter().zip(chosen.iter()).filter(|(_, &c)| c).flat_map(|(o, _)| o.clone()).collect();
                out.push(PlanePartition::from_cubes(side, &cubes).expect("ideal of cube orbits"));
                return;
            }
            go(idx + 1, side, orbits, below, chosen, out);
            if below[idx].iter().all(|&b| chosen[b]) {
                chosen[idx] = true;
                go(idx + 1, side, orbits, below, chosen, out);
                chosen[idx] = false;
            }
        }
        go(0, side, &orbits, &below, &mut chosen, &mut out);
        out.sort();
        out
    }
}

fn tri_of(region: &PlanarRegion, v: usize) -> Result<Tri> {
    Tri::from_coord(region.coord(v)).ok_or_else(|| Error::InvalidGrid("vertex is not a unit triangle".into()))
}

fn ordered<T: Ord>((a, b): (T, T)) -> (T, T) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::{enumerate_matchings, hexagon_region};

    #[test]
    fn rejects_increasing_rows() {
        assert!(PlanePartition::new(2, vec![vec![0, 1], vec![0, 0]]).is_err());
        assert!(PlanePartition::new(2, vec![vec![3, 0], vec![0, 0]]).is_err());
    }

    #[test]
    fn cyclic_counts() {
        let counts: Vec<usize> = (0..=4).map(|a| PlanePartition::enumerate_cyclically_symmetric(a).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 20, 132]);
    }

    #[test]
    fn hexagon_tilings_give_distinct_partitions() {
        for a in 1..=3 {
            let r = hexagon_region(a as i64);
            let pps: BTreeSet<_> =
                enumerate_matchings(&r).iter().map(|t| PlanePartition::from_tiling(a, &r, t).unwrap()).collect();
            // MacMahon's box formula: 2, 20, 980.
            assert_eq!(pps.len(), [2, 20, 980][a - 1]);
        }
    }

    #[test]
    fn tiling_round_trip() {
        for a in 1..=3 {
            let r = hexagon_region(a as i64);
            for t in enumerate_matchings(&r) {
                let pp = PlanePartition::from_tiling(a, &r, &t).unwrap();
                assert_eq!(pp.to_tiling(&r).unwrap(), t);
            }
        }
    }
}
