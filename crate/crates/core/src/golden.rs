//! Text formats for hand-transcribed figures.
//!
//! Grid files hold one `(x1,y1)-(x2,y2)` line per edge, with an optional
//! `# coupling ...` comment. Region files hold one dual-graph edge per line,
//! `(x1,y1)-(x2,y2) w=p/q` (or `w=x`, `w=y` for variable weights), where a
//! vertex is three times the centroid of a unit triangle. Region files may
//! also carry `fixed (a)-(b)` lozenges and `seamN (a)-(b)` lattice segments.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::fpl::{Edge, FplGrid};
use crate::rational::{parse_rational, BigRational};
use crate::tiling::{PlanarRegion, Tri, WeightTag};

type Point = (i64, i64);

fn parse_point(s: &str) -> Result<Point> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("bad point {s:?}")))?;
    let (a, b) = inner.split_once(',').ok_or_else(|| Error::Parse(format!("bad point {s:?}")))?;
    let num = |t: &str| t.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad coordinate in {s:?}")));
    Ok((num(a)?, num(b)?))
}

fn parse_segment(s: &str) -> Result<(Point, Point)> {
    let s = s.trim();
    let cut = s.find(")-(").ok_or_else(|| Error::Parse(format!("bad segment {s:?}")))?;
    Ok((parse_point(&s[..=cut])?, parse_point(&s[cut + 2..])?))
}

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

/// A transcribed grid figure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenGrid {
    /// From a `... size N` header, when present.
    pub size: Option<usize>,
    /// From a `# coupling ...` line, verbatim.
    pub coupling: Option<String>,
    pub edges: Vec<Edge>,
}

impl GoldenGrid {
    pub fn to_grid(&self) -> Result<FplGrid> {
        let size = self.size.ok_or_else(|| Error::Parse("grid size header missing".into()))?;
        FplGrid::from_edges(size, self.edges.iter().copied())
    }
}

pub fn parse_grid(text: &str) -> Result<GoldenGrid> {
    let mut size = None;
    let mut coupling = None;
    for line in text.lines().map(str::trim) {
        let Some(comment) = line.strip_prefix('#') else { continue };
        let comment = comment.trim();
        if let Some(c) = comment.strip_prefix("coupling") {
            coupling = Some(c.trim().to_string());
        } else if let Some(i) = comment.find("size ") {
            let digits: String = comment[i + 5..].chars().take_while(char::is_ascii_digit).collect();
            size = digits.parse().ok();
        }
    }
    let mut edges = Vec::new();
    for line in content_lines(text) {
        let (a, b) = parse_segment(line)?;
        let pt = |(x, y): Point| (x as i32, y as i32);
        let e = Edge::between(pt(a), pt(b)).ok_or_else(|| Error::Parse(format!("not a unit edge: {line:?}")))?;
        edges.push(e);
    }
    edges.sort();
    Ok(GoldenGrid { size, coupling, edges })
}

/// A transcribed region: its dual graph with weights, plus annotations.
#[derive(Clone, Debug)]
pub struct GoldenRegion {
    pub region: PlanarRegion,
    /// Lozenges present in every tiling, as pairs of triangle points.
    pub fixed: Vec<(Point, Point)>,
    /// Lattice segments of glued sides, by seam name, in file order.
    pub seams: BTreeMap<String, Vec<(Point, Point)>>,
}

impl GoldenRegion {
    /// The region with the triangles of every fixed lozenge removed.
    pub fn without_fixed(&self) -> Result<PlanarRegion> {
        let index: HashMap<Point, usize> = (0..self.region.vertex_count()).map(|v| (self.region.coord(v), v)).collect();
        let mut drop = Vec::new();
        for &(a, b) in &self.fixed {
            for p in [a, b] {
                drop.push(*index.get(&p).ok_or_else(|| Error::Parse(format!("fixed lozenge point {p:?} not in region")))?);
            }
        }
        Ok(self.region.without_vertices(&drop))
    }

    /// The region with its seams glued: the `k`-th segment of `seam1` is
    /// identified with the `k`-th segment of `seam2`, which joins the two
    /// triangles bounded by them with a unit-weight edge.
    pub fn glued(&self) -> Result<PlanarRegion> {
        let mut region = self.region.clone();
        let (Some(a), Some(b)) = (self.seams.get("seam1"), self.seams.get("seam2")) else {
            return Ok(region);
        };
        if a.len() != b.len() {
            return Err(Error::Parse(format!("seams of lengths {} and {}", a.len(), b.len())));
        }
        for (sa, sb) in a.iter().zip(b) {
            let (u, v) = (self.bounding_triangle(sa)?, self.bounding_triangle(sb)?);
            if region.color(u) == region.color(v) {
                return Err(Error::NotBipartite(format!("seam segments {sa:?} and {sb:?}")));
            }
            region.add_edge(u, v, BigRational::from_integer(1.into()));
        }
        Ok(region)
    }

    /// The unique region triangle having `seg` as a side.
    fn bounding_triangle(&self, seg: &(Point, Point)) -> Result<usize> {
        let found: Vec<usize> = (0..self.region.vertex_count())
            .filter(|&v| {
                Tri::from_coord(self.region.coord(v)).is_some_and(|t| {
                    let c = t.corners();
                    c.contains(&seg.0) && c.contains(&seg.1)
                })
            })
            .collect();
        match found[..] {
            [v] => Ok(v),
            _ => Err(Error::Parse(format!("seam segment {seg:?} bounds {} region triangles", found.len()))),
        }
    }
}

/// Parses a region file. Tagged weights are set to `x` and `y`.
pub fn parse_region(text: &str, x: &BigRational, y: &BigRational) -> Result<GoldenRegion> {
    let mut region = PlanarRegion::new();
    let mut index: HashMap<Point, usize> = HashMap::new();
    let mut vertex = |region: &mut PlanarRegion, p: Point| -> Result<usize> {
        if let Some(&v) = index.get(&p) {
            return Ok(v);
        }
        let tri = Tri::from_coord(p).ok_or_else(|| Error::Parse(format!("{p:?} is not a triangle point")))?;
        let v = region.add_vertex(p, tri.color());
        index.insert(p, v);
        Ok(v)
    };
    let mut fixed = Vec::new();
    let mut seams: BTreeMap<String, Vec<(Point, Point)>> = BTreeMap::new();
    for line in content_lines(text) {
        if let Some(rest) = line.strip_prefix("fixed") {
            fixed.push(parse_segment(rest)?);
            continue;
        }
        if line.starts_with("seam") {
            let (name, rest) = line.split_once(' ').ok_or_else(|| Error::Parse(format!("bad seam line {line:?}")))?;
            seams.entry(name.to_string()).or_default().push(parse_segment(rest)?);
            continue;
        }
        let (seg, weight) = line.split_once(" w=").ok_or_else(|| Error::Parse(format!("missing weight: {line:?}")))?;
        let (a, b) = parse_segment(seg)?;
        let (u, v) = (vertex(&mut region, a)?, vertex(&mut region, b)?);
        if region.color(u) == region.color(v) {
            return Err(Error::Parse(format!("edge joins triangles of one colour: {line:?}")));
        }
        let (w, tag) = match weight.trim() {
            "x" => (x.clone(), Some(WeightTag::X)),
            "y" => (y.clone(), Some(WeightTag::Y)),
            t => (parse_rational(t)?, None),
        };
        region.add_tagged_edge(u, v, w, tag);
    }
    Ok(GoldenRegion { region, fixed, seams })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn grid_header_and_edges() {
        let g = parse_grid("# FPL of size 1; stubs\n# coupling (1,2)\n(-1,0)-(0,0)\n(0,0)-(1,0)\n").unwrap();
        assert_eq!(g.size, Some(1));
        assert_eq!(g.coupling.as_deref(), Some("(1,2)"));
        assert_eq!(g.edges.len(), 2);
    }

    #[test]
    fn rejects_diagonal_edge() {
        assert!(parse_grid("(0,0)-(1,1)\n").is_err());
    }

    #[test]
    fn region_weights_and_fixed() {
        let a = Tri::A(0, 0).coord();
        let b = Tri::B(0, 0).coord();
        let c = Tri::B(1, 0).coord();
        let text = format!(
            "({},{})-({},{}) w=y\n({},{})-({},{}) w=3/4\nfixed ({},{})-({},{})\n",
            a.0, a.1, b.0, b.1, a.0, a.1, c.0, c.1, a.0, a.1, b.0, b.1
        );
        let g = parse_region(&text, &rat(1, 2), &rat(5, 1)).unwrap();
        assert_eq!(g.region.vertex_count(), 3);
        let ws: Vec<_> = g.region.edges().iter().map(|e| e.weight.clone()).collect();
        assert_eq!(ws, vec![rat(5, 1), rat(3, 4)]);
        assert_eq!(g.without_fixed().unwrap().vertex_count(), 1);
    }

    #[test]
    fn rejects_same_colour_edge() {
        let (a, b) = (Tri::A(0, 0).coord(), Tri::A(1, 0).coord());
        assert!(parse_region(&format!("({},{})-({},{}) w=1/1\n", a.0, a.1, b.0, b.1), &rat(1, 1), &rat(1, 1)).is_err());
    }
}
