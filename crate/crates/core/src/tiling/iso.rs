//! Isomorphism search between small weighted multigraphs.
//!
//! Colour refinement run jointly on both graphs prunes the candidates, then
//! a backtracking search extends a partial map in BFS order, checking the
//! edge multisets towards every already-mapped vertex.

use std::collections::{BTreeMap, HashMap, VecDeque};

use super::{PlanarRegion, WeightTag};
use crate::rational::fmt_rational;

/// What an edge bundle between two vertices looks like: its multiplicity,
/// and with `weighted` also the sorted weights and tags.
type Bundle = Vec<(String, Option<u8>)>;

struct Graph {
    n: usize,
    bundles: Vec<BTreeMap<usize, Bundle>>,
}

impl Graph {
    fn new(r: &PlanarRegion, weighted: bool) -> Self {
        let n = r.vertex_count();
        let mut bundles = vec![BTreeMap::<usize, Bundle>::new(); n];
        for e in r.edges() {
            let label = if weighted {
                (fmt_rational(&e.weight), e.tag.map(|t| matches!(t, WeightTag::Y) as u8))
            } else {
                (String::new(), None)
            };
            bundles[e.u].entry(e.v).or_default().push(label.clone());
            bundles[e.v].entry(e.u).or_default().push(label);
        }
        for b in &mut bundles {
            for list in b.values_mut() {
                list.sort();
            }
        }
        Graph { n, bundles }
    }

    fn bundle(&self, u: usize, v: usize) -> Option<&Bundle> {
        self.bundles[u].get(&v)
    }
}

/// Stable colour refinement over the disjoint union of both graphs.
fn refine(g: &Graph, h: &Graph) -> (Vec<usize>, Vec<usize>) {
    let mut cg = vec![0usize; g.n];
    let mut ch = vec![0usize; h.n];
    let mut classes = 1;
    loop {
        let mut ids: HashMap<(usize, Vec<(Bundle, usize)>), usize> = HashMap::new();
        let sig = |graph: &Graph, col: &[usize], v: usize| {
            let mut s: Vec<(Bundle, usize)> =
                graph.bundles[v].iter().map(|(&w, b)| (b.clone(), col[w])).collect();
            s.sort();
            (col[v], s)
        };
        let sg: Vec<_> = (0..g.n).map(|v| sig(g, &cg, v)).collect();
        let sh: Vec<_> = (0..h.n).map(|v| sig(h, &ch, v)).collect();
        let mut keys: Vec<_> = sg.iter().chain(sh.iter()).cloned().collect();
        keys.sort();
        keys.dedup();
        for (i, k) in keys.into_iter().enumerate() {
            ids.insert(k, i);
        }
        let ng: Vec<usize> = sg.iter().map(|k| ids[k]).collect();
        let nh: Vec<usize> = sh.iter().map(|k| ids[k]).collect();
        let count = ids.len();
        cg = ng;
        ch = nh;
        if count == classes {
            return (cg, ch);
        }
        classes = count;
    }
}

/// A vertex bijection `map` from `a` to `b` preserving edge multiplicities
/// (and, with `weighted`, edge weights and tags), if one exists. Colours of
/// the bipartition are not required to match.
pub fn find_isomorphism(a: &PlanarRegion, b: &PlanarRegion, weighted: bool) -> Option<Vec<usize>> {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return None;
    }
    let g = Graph::new(a, weighted);
    let h = Graph::new(b, weighted);
    let (cg, ch) = refine(&g, &h);
    let mut hist_g = BTreeMap::new();
    let mut hist_h = BTreeMap::new();
    for &c in &cg {
        *hist_g.entry(c).or_insert(0) += 1;
    }
    for &c in &ch {
        *hist_h.entry(c).or_insert(0) += 1;
    }
    if hist_g != hist_h {
        return None;
    }
    // BFS order, each component started from its rarest colour.
    let mut order = Vec::with_capacity(g.n);
    let mut placed = vec![false; g.n];
    while order.len() < g.n {
        let start = (0..g.n).filter(|&v| !placed[v]).min_by_key(|&v| (hist_g[&cg[v]], v)).unwrap();
        placed[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in g.bundles[v].keys() {
                if !placed[w] {
                    placed[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let mut by_colour: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..h.n {
        by_colour.entry(ch[v]).or_default().push(v);
    }
    let mut map = vec![usize::MAX; g.n];
    let mut used = vec![false; h.n];
    if extend(&g, &h, &cg, &by_colour, &order, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    g: &Graph,
    h: &Graph,
    cg: &[usize],
    by_colour: &BTreeMap<usize, Vec<usize>>,
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&v) = order.get(depth) else {
        return true;
    };
    // Prefer candidates adjacent to the image of an already-mapped neighbour.
    let anchor = g.bundles[v].keys().find(|&&w| map[w] != usize::MAX).copied();
    let pool: Vec<usize> = match anchor {
        Some(w) => h.bundles[map[w]].keys().copied().collect(),
        None => by_colour[&cg[v]].clone(),
    };
    for cand in pool {
        if used[cand] || !by_colour[&cg[v]].contains(&cand) {
            continue;
        }
        let consistent = g.bundles[v].iter().all(|(&w, bund)| map[w] == usize::MAX || h.bundle(cand, map[w]) == Some(bund))
            && h.bundles[cand].keys().all(|&x| {
                // Every mapped neighbour of the image must come from a neighbour of v.
                !used[x] || g.bundles[v].keys().any(|&w| map[w] == x)
            });
        if !consistent {
            continue;
        }
        map[v] = cand;
        used[cand] = true;
        if extend(g, h, cg, by_colour, order, depth + 1, map, used) {
            return true;
        }
        map[v] = usize::MAX;
        used[cand] = false;
    }
    false
}

/// Checks that `map` is an isomorphism; used to certify search results.
pub fn is_isomorphism(a: &PlanarRegion, b: &PlanarRegion, map: &[usize], weighted: bool) -> bool {
    if map.len() != a.vertex_count() || a.vertex_count() != b.vertex_count() {
        return false;
    }
    let mut seen = vec![false; b.vertex_count()];
    for &m in map {
        if m >= seen.len() || seen[m] {
            return false;
        }
        seen[m] = true;
    }
    let g = Graph::new(a, weighted);
    let h = Graph::new(b, weighted);
    (0..g.n).all(|u| {
        g.bundles[u].len() == h.bundles[map[u]].len()
            && g.bundles[u].iter().all(|(&v, bund)| h.bundle(map[u], map[v]) == Some(bund))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn cycle(n: usize, offset: usize) -> PlanarRegion {
        let mut r = PlanarRegion::new();
        for i in 0..n {
            r.add_vertex((i as i64, 0), (i % 2) as u8);
        }
        for i in 0..n {
            let (u, v) = ((i + offset) % n, (i + offset + 1) % n);
            r.add_edge(u, v, rat(1, 1));
        }
        r
    }

    #[test]
    fn cycles_are_isomorphic() {
        let a = cycle(8, 0);
        let b = cycle(8, 3);
        let m = find_isomorphism(&a, &b, true).unwrap();
        assert!(is_isomorphism(&a, &b, &m, true));
    }

    #[test]
    fn weights_distinguish() {
        let a = cycle(4, 0);
        let mut b = PlanarRegion::new();
        for i in 0..4 {
            b.add_vertex((i, 0), (i % 2) as u8);
        }
        b.add_edge(0, 1, rat(1, 2));
        b.add_edge(1, 2, rat(1, 1));
        b.add_edge(2, 3, rat(1, 1));
        b.add_edge(3, 0, rat(1, 1));
        assert!(find_isomorphism(&a, &b, false).is_some());
        assert!(find_isomorphism(&a, &b, true).is_none());
    }

    #[test]
    fn multiplicity_matters() {
        let mut a = PlanarRegion::new();
        let mut b = PlanarRegion::new();
        for i in 0..4 {
            a.add_vertex((i, 0), (i % 2) as u8);
            b.add_vertex((i, 0), (i % 2) as u8);
        }
        // Path with a doubled end edge against a path with a doubled middle edge.
        a.add_edge(0, 1, rat(1, 1));
        a.add_edge(0, 1, rat(1, 1));
        a.add_edge(1, 2, rat(1, 1));
        a.add_edge(2, 3, rat(1, 1));
        b.add_edge(0, 1, rat(1, 1));
        b.add_edge(1, 2, rat(1, 1));
        b.add_edge(1, 2, rat(1, 1));
        b.add_edge(2, 3, rat(1, 1));
        assert!(find_isomorphism(&a, &b, false).is_none());
    }
}
