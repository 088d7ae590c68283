//! Fully packed loop configurations on the `N x N` grid.
//!
//! Vertices are `(x, y)` with `x` the column from the left and `y` the row
//! from the bottom, both in `0..N`. `Edge::H(x, y)` joins `(x, y)` to
//! `(x + 1, y)` and `Edge::V(x, y)` joins `(x, y)` to `(x, y + 1)`; the
//! boundary stubs are the edges with an endpoint at coordinate `-1` or `N`.
//!
//! Stubs are numbered `t = 0..4N` counterclockwise from the top of the left
//! border. Stub `t` is occupied iff `t` is even, and the occupied stub `t`
//! carries the coupling label `t / 2 + 1`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coupling::{Coupling, HtCoupling};
use crate::error::{Error, Result};
use crate::par;
use crate::rational::BigInt;
use crate::tiling::PlanarRegion;

/// Default cap on the grid size accepted by the enumerators.
pub const DEFAULT_LIMIT: usize = 8;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Edge {
    H(i32, i32),
    V(i32, i32),
}

impl Edge {
    pub fn endpoints(self) -> ((i32, i32), (i32, i32)) {
        match self {
            Edge::H(x, y) => ((x, y), (x + 1, y)),
            Edge::V(x, y) => ((x, y), (x, y + 1)),
        }
    }

    /// The unit edge between two lattice points, if they are adjacent.
    pub fn between(a: (i32, i32), b: (i32, i32)) -> Option<Edge> {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        match (b.0 - a.0, b.1 - a.1) {
            (1, 0) => Some(Edge::H(a.0, a.1)),
            (0, 1) => Some(Edge::V(a.0, a.1)),
            _ => None,
        }
    }

    /// Maps both endpoints through `f` and rebuilds the edge.
    pub fn map_points(self, f: impl Fn((i32, i32)) -> (i32, i32)) -> Edge {
        let (a, b) = self.endpoints();
        Edge::between(f(a), f(b)).expect("lattice symmetry preserves adjacency")
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ((x1, y1), (x2, y2)) = self.endpoints();
        write!(f, "({x1},{y1})-({x2},{y2})")
    }
}

/// Grid symmetries used both as FPL tests and as search constraints.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Symmetry {
    None,
    /// Rotation by 180 degrees about the centre.
    HalfTurn,
    /// Reflection in the vertical axis (left-right mirror).
    Mirror,
}

/// Index arithmetic for one grid size.
#[derive(Clone, Debug)]
pub struct Geometry {
    n: i32,
    stub_edges: Vec<usize>,
    stub_of: Vec<Option<usize>>,
}

impl Geometry {
    pub fn new(size: usize) -> Self {
        let n = size as i32;
        let mut g = Geometry { n, stub_edges: Vec::new(), stub_of: Vec::new() };
        g.stub_of = vec![None; g.edge_count()];
        for t in 0..4 * size {
            let e = g.stub_edge(t);
            let idx = g.index(e);
            g.stub_edges.push(idx);
            g.stub_of[idx] = Some(t);
        }
        g
    }

    pub fn size(&self) -> usize {
        self.n as usize
    }

    pub fn edge_count(&self) -> usize {
        2 * (self.n * (self.n + 1)) as usize
    }

    pub fn vertex_count(&self) -> usize {
        (self.n * self.n) as usize
    }

    pub fn contains(&self, (x, y): (i32, i32)) -> bool {
        (0..self.n).contains(&x) && (0..self.n).contains(&y)
    }

    pub fn vertex_index(&self, (x, y): (i32, i32)) -> usize {
        (y * self.n + x) as usize
    }

    pub fn vertex_at(&self, idx: usize) -> (i32, i32) {
        let idx = idx as i32;
        (idx % self.n, idx / self.n)
    }

    pub fn is_valid(&self, e: Edge) -> bool {
        let n = self.n;
        match e {
            Edge::H(x, y) => (-1..n).contains(&x) && (0..n).contains(&y),
            Edge::V(x, y) => (0..n).contains(&x) && (-1..n).contains(&y),
        }
    }

    pub fn index(&self, e: Edge) -> usize {
        let n = self.n;
        debug_assert!(self.is_valid(e), "edge {e} outside grid {n}");
        match e {
            Edge::H(x, y) => (y * (n + 1) + x + 1) as usize,
            Edge::V(x, y) => (n * (n + 1) + x * (n + 1) + y + 1) as usize,
        }
    }

    pub fn edge(&self, idx: usize) -> Edge {
        let n = self.n;
        let i = idx as i32;
        if i < n * (n + 1) {
            Edge::H(i % (n + 1) - 1, i / (n + 1))
        } else {
            let j = i - n * (n + 1);
            Edge::V(j / (n + 1), j % (n + 1) - 1)
        }
    }

    pub fn is_stub(&self, e: Edge) -> bool {
        let ((x1, y1), (x2, y2)) = e.endpoints();
        !(self.contains((x1, y1)) && self.contains((x2, y2)))
    }

    /// Boundary stub number `t` in counterclockwise order.
    pub fn stub_edge(&self, t: usize) -> Edge {
        let n = self.n;
        let t = t as i32;
        match t / n {
            0 => Edge::H(-1, n - 1 - t),
            1 => Edge::V(t - n, -1),
            2 => Edge::H(n - 1, t - 2 * n),
            _ => Edge::V(n - 1 - (t - 3 * n), n - 1),
        }
    }

    pub fn stub_number(&self, e: Edge) -> Option<usize> {
        self.stub_of[self.index(e)]
    }

    /// The four edges at a vertex: left, right, down, up.
    pub fn incident(&self, (x, y): (i32, i32)) -> [Edge; 4] {
        [Edge::H(x - 1, y), Edge::H(x, y), Edge::V(x, y - 1), Edge::V(x, y)]
    }

    pub fn half_turn_point(&self, (x, y): (i32, i32)) -> (i32, i32) {
        (self.n - 1 - x, self.n - 1 - y)
    }

    pub fn mirror_point(&self, (x, y): (i32, i32)) -> (i32, i32) {
        (self.n - 1 - x, y)
    }

    /// Counterclockwise quarter turn.
    pub fn quarter_turn_point(&self, (x, y): (i32, i32)) -> (i32, i32) {
        (self.n - 1 - y, x)
    }

    pub fn image(&self, sym: Symmetry, e: Edge) -> Edge {
        match sym {
            Symmetry::None => e,
            Symmetry::HalfTurn => e.map_points(|p| self.half_turn_point(p)),
            Symmetry::Mirror => e.map_points(|p| self.mirror_point(p)),
        }
    }
}

/// An FPL given by the occupancy of every edge, stubs included.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FplGrid {
    size: usize,
    occupied: Vec<bool>,
}

impl FplGrid {
    /// Builds a grid from its occupied edges and checks the FPL conditions.
    pub fn from_edges(size: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let geo = Geometry::new(size);
        let mut occupied = vec![false; geo.edge_count()];
        for e in edges {
            if !geo.is_valid(e) {
                return Err(Error::InvalidGrid(format!("edge {e} outside a grid of size {size}")));
            }
            occupied[geo.index(e)] = true;
        }
        let f = FplGrid { size, occupied };
        f.validate(&geo)?;
        Ok(f)
    }

    fn validate(&self, geo: &Geometry) -> Result<()> {
        for t in 0..4 * self.size {
            if self.occupied[geo.stub_edges[t]] != (t % 2 == 0) {
                return Err(Error::InvalidGrid(format!("boundary stub {t} breaks the alternation")));
            }
        }
        for v in 0..geo.vertex_count() {
            let p = geo.vertex_at(v);
            let deg = geo.incident(p).iter().filter(|&&e| self.has(e)).count();
            if deg != 2 {
                return Err(Error::InvalidGrid(format!("vertex {p:?} has degree {deg}")));
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn has(&self, e: Edge) -> bool {
        let geo = Geometry::new(self.size);
        geo.is_valid(e) && self.occupied[geo.index(e)]
    }

    /// Occupied edges in index order (horizontal first).
    pub fn edges(&self) -> Vec<Edge> {
        let geo = Geometry::new(self.size);
        (0..self.occupied.len()).filter(|&i| self.occupied[i]).map(|i| geo.edge(i)).collect()
    }

    pub fn transformed(&self, sym: Symmetry) -> FplGrid {
        let geo = Geometry::new(self.size);
        let mut occupied = vec![false; self.occupied.len()];
        for (i, &on) in self.occupied.iter().enumerate() {
            if on {
                occupied[geo.index(geo.image(sym, geo.edge(i)))] = true;
            }
        }
        FplGrid { size: self.size, occupied }
    }

    pub fn is_half_turn_symmetric(&self) -> bool {
        self.transformed(Symmetry::HalfTurn) == *self
    }

    pub fn is_mirror_symmetric(&self) -> bool {
        self.transformed(Symmetry::Mirror) == *self
    }

    /// Whether every forced edge is present and every forbidden one absent.
    pub fn satisfies(&self, c: &EdgeConstraint) -> bool {
        c.forced_present.iter().all(|&e| self.has(e)) && c.forced_absent.iter().all(|&e| !self.has(e))
    }
}

/// Link pattern of an FPL: follows each open path between occupied stubs.
pub fn coupling_of(f: &FplGrid) -> Coupling {
    let geo = Geometry::new(f.size);
    let mut partner = vec![0; 2 * f.size];
    for t in (0..4 * f.size).step_by(2) {
        if partner[t / 2] != 0 {
            continue;
        }
        let start = geo.stub_edge(t);
        let (a, b) = start.endpoints();
        let mut at = if geo.contains(a) { a } else { b };
        let mut came = start;
        let end = loop {
            let next = geo
                .incident(at)
                .into_iter()
                .find(|&e| e != came && f.has(e))
                .expect("degree-2 vertex has an exit");
            if let Some(s) = geo.stub_number(next) {
                break s;
            }
            let (p, q) = next.endpoints();
            at = if p == at { q } else { p };
            came = next;
        };
        partner[t / 2] = end / 2 + 1;
        partner[end / 2] = t / 2 + 1;
    }
    Coupling::new(partner).expect("FPL paths are noncrossing")
}

/// Edges forced present or absent in a constrained enumeration.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct EdgeConstraint {
    pub size: usize,
    pub forced_present: BTreeSet<Edge>,
    pub forced_absent: BTreeSet<Edge>,
}

impl EdgeConstraint {
    pub fn new(size: usize) -> Self {
        EdgeConstraint { size, ..Default::default() }
    }

    /// Builds a constraint from forced edges; edges at vertices carrying two
    /// forced edges become forbidden.
    pub fn from_forced(size: usize, forced: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let geo = Geometry::new(size);
        let forced_present: BTreeSet<Edge> = forced.into_iter().collect();
        let mut forced_absent = BTreeSet::new();
        for v in 0..geo.vertex_count() {
            let p = geo.vertex_at(v);
            let inc = geo.incident(p);
            let k = inc.iter().filter(|e| forced_present.contains(e)).count();
            if k > 2 {
                return Err(Error::InconsistentConstraint(format!("vertex {p:?} has {k} forced edges")));
            }
            if k == 2 {
                forced_absent.extend(inc.iter().copied().filter(|e| !forced_present.contains(e)));
            }
        }
        Ok(EdgeConstraint { size, forced_present, forced_absent })
    }

    /// Vertices carrying exactly `k` forced edges.
    pub fn vertices_with(&self, k: usize) -> Vec<(i32, i32)> {
        let geo = Geometry::new(self.size);
        (0..geo.vertex_count())
            .map(|v| geo.vertex_at(v))
            .filter(|&p| geo.incident(p).iter().filter(|e| self.forced_present.contains(e)).count() == k)
            .collect()
    }

    pub fn is_invariant(&self, sym: Symmetry) -> bool {
        let geo = Geometry::new(self.size);
        self.forced_present.iter().all(|&e| self.forced_present.contains(&geo.image(sym, e)))
    }
}

/// Fixed edges selecting the fiber over the all-parallel coupling, on the
/// grid of size `2n`.
pub fn fixed_edges_even(n: usize) -> EdgeConstraint {
    let size = 2 * n;
    let geo = Geometry::new(size);
    let m = 2 * n as i32 - 1;
    let mut base = Vec::new();
    for x in -1..size as i32 {
        for y in (x + 1)..size as i32 {
            if x + y < m && (x + y).rem_euclid(2) == 0 {
                base.push(Edge::H(x, y));
            }
        }
    }
    let mut all = BTreeSet::new();
    for e in base {
        let mut cur = e;
        for _ in 0..4 {
            all.insert(cur);
            cur = cur.map_points(|p| geo.quarter_turn_point(p));
        }
    }
    EdgeConstraint::from_forced(size, all).expect("even fixed edges are consistent")
}

/// Fixed edges for the rare slit family at offset 0, on the grid of size
/// `2n + 1`. The centre vertex carries two of them.
pub fn fixed_edges_odd(n: usize) -> EdgeConstraint {
    let size = 2 * n + 1;
    let geo = Geometry::new(size);
    let s = size as i32;
    let m = 2 * n as i32;
    let mut all = BTreeSet::new();
    for x in -1..s {
        for y in (x + 1)..s {
            if x + y < m && (x + y).rem_euclid(2) == 1 {
                let e = Edge::H(x, y);
                all.insert(e);
                all.insert(e.map_points(|p| geo.mirror_point(p)));
            }
        }
    }
    // Vertical edges leave (x, y) downwards, mirrored top to bottom.
    for y in 0..s {
        for x in (y + 1)..s {
            if x + y < m && (x + y).rem_euclid(2) == 1 {
                let e = Edge::V(x, y - 1);
                all.insert(e);
                all.insert(e.map_points(|(a, b)| (a, s - 1 - b)));
            }
        }
    }
    EdgeConstraint::from_forced(size, all).expect("odd fixed edges are consistent")
}

/// Enumeration options: grid symmetry, forced edges and the size cap.
#[derive(Clone, Debug)]
pub struct EnumOptions {
    pub symmetry: Symmetry,
    pub constraint: Option<EdgeConstraint>,
    pub limit: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { symmetry: Symmetry::None, constraint: None, limit: DEFAULT_LIMIT }
    }
}

impl EnumOptions {
    pub fn symmetric(symmetry: Symmetry) -> Self {
        EnumOptions { symmetry, ..Default::default() }
    }

    pub fn with_constraint(mut self, c: EdgeConstraint) -> Self {
        self.constraint = Some(c);
        self
    }

    pub fn with_limit(mut self, limit: usize) -> Self {
        self.limit = limit;
        self
    }
}

const UNSET: u8 = 0;
const ON: u8 = 1;
const OFF: u8 = 2;

/// Backtracking state. Vertices are visited row by row from the top; at
/// each vertex its left and upper edges are already decided.
#[derive(Clone)]
struct Search<'g> {
    geo: &'g Geometry,
    sym: Symmetry,
    state: Vec<u8>,
    on: Vec<u8>,
    off: Vec<u8>,
    trail: Vec<usize>,
    order: &'g [(i32, i32)],
}

impl<'g> Search<'g> {
    fn new(geo: &'g Geometry, sym: Symmetry, order: &'g [(i32, i32)]) -> Self {
        Search {
            geo,
            sym,
            state: vec![UNSET; geo.edge_count()],
            on: vec![0; geo.vertex_count()],
            off: vec![0; geo.vertex_count()],
            trail: Vec::new(),
            order,
        }
    }

    fn set_one(&mut self, e: Edge, val: u8) -> bool {
        let idx = self.geo.index(e);
        match self.state[idx] {
            UNSET => {}
            cur => return cur == val,
        }
        self.state[idx] = val;
        self.trail.push(idx);
        let (a, b) = e.endpoints();
        let mut ok = true;
        for p in [a, b] {
            if self.geo.contains(p) {
                let v = self.geo.vertex_index(p);
                let c = if val == ON { &mut self.on[v] } else { &mut self.off[v] };
                *c += 1;
                ok &= *c <= 2;
            }
        }
        ok
    }

    /// Assigns an edge together with its symmetry image.
    fn set(&mut self, e: Edge, val: u8) -> bool {
        let img = self.geo.image(self.sym, e);
        self.set_one(e, val) && (img == e || self.set_one(img, val))
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let idx = self.trail.pop().expect("trail above mark");
            let val = self.state[idx];
            self.state[idx] = UNSET;
            let (a, b) = self.geo.edge(idx).endpoints();
            for p in [a, b] {
                if self.geo.contains(p) {
                    let v = self.geo.vertex_index(p);
                    if val == ON {
                        self.on[v] -= 1;
                    } else {
                        self.off[v] -= 1;
                    }
                }
            }
        }
    }

    fn initialise(&mut self, constraint: Option<&EdgeConstraint>) -> std::result::Result<(), String> {
        for t in 0..4 * self.geo.size() {
            let val = if t % 2 == 0 { ON } else { OFF };
            if !self.set(self.geo.stub_edge(t), val) {
                return Err(format!("boundary stub {t} conflicts with the symmetry"));
            }
        }
        if let Some(c) = constraint {
            for (set, val) in [(&c.forced_present, ON), (&c.forced_absent, OFF)] {
                for &e in set {
                    if !self.geo.is_valid(e) {
                        return Err(format!("edge {e} lies outside the grid"));
                    }
                    if !self.set(e, val) {
                        return Err(format!("edge {e} conflicts with the boundary, symmetry or degrees"));
                    }
                }
            }
        }
        self.trail.clear();
        Ok(())
    }

    /// Candidate assignments of the undecided right/down edges at vertex
    /// number `k` of the visiting order.
    fn choices(&self, k: usize) -> Vec<Vec<(Edge, u8)>> {
        let p = self.order[k];
        let [_, right, down, _] = self.geo.incident(p);
        let v = self.geo.vertex_index(p);
        let open: Vec<Edge> =
            [right, down].into_iter().filter(|&e| self.state[self.geo.index(e)] == UNSET).collect();
        let need = 2 - self.on[v] as usize;
        let mut out = Vec::new();
        for mask in 0..(1u32 << open.len()) {
            if mask.count_ones() as usize != need {
                continue;
            }
            out.push(
                open.iter()
                    .enumerate()
                    .map(|(b, &e)| (e, if mask >> b & 1 == 1 { ON } else { OFF }))
                    .collect(),
            );
        }
        out
    }

    fn apply(&mut self, choice: &[(Edge, u8)]) -> bool {
        choice.iter().all(|&(e, val)| self.set(e, val))
    }

    fn vertex_complete(&self, k: usize) -> bool {
        let v = self.geo.vertex_index(self.order[k]);
        self.on[v] == 2 && self.off[v] == 2
    }

    fn grid(&self) -> FplGrid {
        FplGrid { size: self.geo.size(), occupied: self.state.iter().map(|&s| s == ON).collect() }
    }

    fn run(&mut self, k: usize, visit: &mut dyn FnMut(&FplGrid)) {
        if k == self.order.len() {
            visit(&self.grid());
            return;
        }
        for choice in self.choices(k) {
            let mark = self.trail.len();
            if self.apply(&choice) && self.vertex_complete(k) {
                self.run(k + 1, visit);
            }
            self.undo(mark);
        }
    }

    /// All consistent partial states after the first `depth` vertices, in
    /// search order.
    fn split(&mut self, k: usize, depth: usize, out: &mut Vec<Search<'g>>) {
        if k == depth || k == self.order.len() {
            let mut s = self.clone();
            s.trail.clear();
            out.push(s);
            return;
        }
        for choice in self.choices(k) {
            let mark = self.trail.len();
            if self.apply(&choice) && self.vertex_complete(k) {
                self.split(k + 1, depth, out);
            }
            self.undo(mark);
        }
    }
}

fn visiting_order(size: usize) -> Vec<(i32, i32)> {
    let n = size as i32;
    (0..n).rev().flat_map(|y| (0..n).map(move |x| (x, y))).collect()
}

/// Folds every FPL matching `opts` into per-partition accumulators and
/// merges them in search order. Returns `Ok(None)` when the constraint (or
/// the symmetry with the boundary) is inconsistent.
pub fn fold_fpls<T, I, F, M>(size: usize, opts: &EnumOptions, init: I, visit: F, merge: M) -> Result<Option<T>>
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(&mut T, &FplGrid) + Sync + Send,
    M: Fn(&mut T, T),
{
    if size == 0 || size > opts.limit {
        return Err(Error::LimitExceeded { size, limit: opts.limit });
    }
    if let Some(c) = &opts.constraint {
        if c.size != size {
            return Err(Error::InconsistentConstraint(format!(
                "constraint for size {} used on size {size}",
                c.size
            )));
        }
    }
    let geo = Geometry::new(size);
    let order = visiting_order(size);
    let mut root = Search::new(&geo, opts.symmetry, &order);
    if root.initialise(opts.constraint.as_ref()).is_err() {
        return Ok(None);
    }
    let depth = (size + size / 2).min(order.len());
    let mut parts = Vec::new();
    root.split(0, depth, &mut parts);
    let results = par::map(parts, |mut s| {
        let mut acc = init();
        s.run(depth, &mut |f| visit(&mut acc, f));
        acc
    });
    let mut total = init();
    for r in results {
        merge(&mut total, r);
    }
    Ok(Some(total))
}

/// Result of a (possibly constrained) enumeration.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub grids: Vec<FplGrid>,
    /// Set when the constraint cannot be met; `grids` is then empty.
    pub diagnostic: Option<String>,
}

/// Every FPL of the given size matching `opts`, in deterministic order.
pub fn enumerate_fpls(size: usize, opts: &EnumOptions) -> Result<Enumeration> {
    if size == 0 || size > opts.limit {
        return Err(Error::LimitExceeded { size, limit: opts.limit });
    }
    let geo = Geometry::new(size);
    let order = visiting_order(size);
    let mut probe = Search::new(&geo, opts.symmetry, &order);
    if let Err(msg) = probe.initialise(opts.constraint.as_ref()) {
        return Ok(Enumeration { grids: vec![], diagnostic: Some(msg) });
    }
    let grids = fold_fpls(size, opts, Vec::new, |v, f| v.push(f.clone()), |a, b| a.extend(b))?
        .unwrap_or_default();
    Ok(Enumeration { grids, diagnostic: None })
}

/// Number of FPLs matching `opts`.
pub fn count_fpls(size: usize, opts: &EnumOptions) -> Result<BigInt> {
    let n = fold_fpls(size, opts, || 0u64, |c, _| *c += 1, |a, b| *a += b)?.unwrap_or(0);
    Ok(BigInt::from(n))
}

fn tally<K: Ord + Send>(
    size: usize,
    opts: &EnumOptions,
    key: impl Fn(&FplGrid) -> K + Sync + Send,
) -> Result<BTreeMap<K, BigInt>> {
    let counts = fold_fpls(
        size,
        opts,
        BTreeMap::<K, u64>::new,
        |m, f| *m.entry(key(f)).or_default() += 1,
        |a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
        },
    )?
    .unwrap_or_default();
    Ok(counts.into_iter().map(|(k, v)| (k, BigInt::from(v))).collect())
}

/// `A(N; pi)` for every coupling `pi` that occurs.
pub fn count_by_coupling(size: usize, opts: &EnumOptions) -> Result<BTreeMap<Coupling, BigInt>> {
    tally(size, &EnumOptions { symmetry: Symmetry::None, ..opts.clone() }, coupling_of)
}

/// `A_HT(N; pi)` keyed by the full half-turn symmetric coupling.
pub fn count_ht_by_coupling(size: usize, opts: &EnumOptions) -> Result<BTreeMap<HtCoupling, BigInt>> {
    tally(size, &EnumOptions { symmetry: Symmetry::HalfTurn, ..opts.clone() }, |f| {
        HtCoupling::new(coupling_of(f)).expect("half-turn symmetric FPL has a symmetric coupling")
    })
}

/// Which fixed-edge family a quotient graph is built from.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

/// The non-fixed edges of the grid as a graph: vertices are the grid
/// vertices carrying exactly one forced edge, edges the inner edges that
/// are neither forced nor forbidden. Perfect matchings of this graph are
/// exactly the FPLs satisfying the constraint.
pub fn nonfixed_graph(c: &EdgeConstraint) -> Result<PlanarRegion> {
    Ok(quotient_graph(c, Symmetry::None)?.0)
}

/// Half-turn quotient of the non-fixed graph. Perfect matchings are the
/// half-turn symmetric FPLs satisfying the constraint.
pub fn nonfixed_quotient_graph(n: usize, parity: Parity) -> Result<PlanarRegion> {
    Ok(nonfixed_quotient(n, parity)?.0)
}

/// The quotient graph together with the grid edge orbit behind each of its
/// edges (an edge and its half-turn image).
pub fn nonfixed_quotient(n: usize, parity: Parity) -> Result<(PlanarRegion, Vec<[Edge; 2]>)> {
    let c = match parity {
        Parity::Even => fixed_edges_even(n),
        Parity::Odd => fixed_edges_odd(n),
    };
    quotient_graph(&c, Symmetry::HalfTurn)
}

fn quotient_graph(c: &EdgeConstraint, sym: Symmetry) -> Result<(PlanarRegion, Vec<[Edge; 2]>)> {
    let geo = Geometry::new(c.size);
    let forced_at = |p: (i32, i32)| geo.incident(p).iter().filter(|e| c.forced_present.contains(e)).count();
    for v in 0..geo.vertex_count() {
        let p = geo.vertex_at(v);
        if forced_at(p) == 0 {
            return Err(Error::InvalidGrid(format!("vertex {p:?} has no forced edge")));
        }
    }
    let orbit_rep = |p: (i32, i32)| {
        let q = match sym {
            Symmetry::None => p,
            Symmetry::HalfTurn => geo.half_turn_point(p),
            Symmetry::Mirror => geo.mirror_point(p),
        };
        geo.vertex_index(p).min(geo.vertex_index(q))
    };
    let mut region = PlanarRegion::new();
    let mut ids = BTreeMap::new();
    for v in 0..geo.vertex_count() {
        let p = geo.vertex_at(v);
        if forced_at(p) != 1 {
            continue;
        }
        let rep = orbit_rep(p);
        ids.entry(rep).or_insert_with(|| {
            let q = geo.vertex_at(rep);
            let id = region.add_vertex((q.0 as i64, q.1 as i64), ((q.0 + q.1) % 2) as u8);
            id
        });
    }
    let mut seen = BTreeSet::new();
    let mut lifts = Vec::new();
    for idx in 0..geo.edge_count() {
        let e = geo.edge(idx);
        if geo.is_stub(e) || c.forced_present.contains(&e) || c.forced_absent.contains(&e) {
            continue;
        }
        let (a, b) = e.endpoints();
        if forced_at(a) != 1 || forced_at(b) != 1 {
            continue;
        }
        let img = geo.image(sym, e);
        let orbit = geo.index(e).min(geo.index(img));
        if !seen.insert(orbit) {
            continue;
        }
        let (u, v) = (ids[&orbit_rep(a)], ids[&orbit_rep(b)]);
        if u == v {
            return Err(Error::NotBipartite(format!("edge {e} closes a loop in the quotient")));
        }
        region.add_edge(u, v, crate::rational::rat(1, 1));
        lifts.push([e, img]);
    }
    region.check_bipartite()?;
    Ok((region, lifts))
}
