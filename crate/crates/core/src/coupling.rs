//! Link patterns (couplings) and the cyclic Temperley-Lieb action.
//!
//! Boundary points are labelled `1..=2N` counterclockwise. All successor
//! arithmetic is cyclic, so generator `e_{2N}` links point `2N` with point
//! `1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A noncrossing perfect matching of `2N` cyclically ordered points.
///
/// Ordering is lexicographic on the partner array, which is the canonical
/// order used for every list and report.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Coupling {
    partner: Vec<usize>,
}

impl Coupling {
    /// Builds a coupling from its partner array (1-based labels,
    /// `partner[i - 1] = j`).
    pub fn new(partner: Vec<usize>) -> Result<Self> {
        let c = Coupling { partner };
        c.validate()?;
        Ok(c)
    }

    pub fn empty() -> Self {
        Coupling { partner: vec![] }
    }

    pub fn from_pairs(points: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut partner = vec![0; points];
        for &(a, b) in pairs {
            for p in [a, b] {
                if p == 0 || p > points {
                    return Err(Error::InvalidCoupling(format!("label {p} out of 1..={points}")));
                }
                if partner[p - 1] != 0 {
                    return Err(Error::InvalidCoupling(format!("label {p} used twice")));
                }
            }
            partner[a - 1] = b;
            partner[b - 1] = a;
        }
        Self::new(partner)
    }

    fn validate(&self) -> Result<()> {
        let n = self.partner.len();
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidCoupling(format!("odd number of points {n}")));
        }
        for i in 1..=n {
            let j = self.partner[i - 1];
            if j == 0 || j > n {
                return Err(Error::InvalidCoupling(format!("point {i} unmatched")));
            }
            if j == i {
                return Err(Error::InvalidCoupling(format!("point {i} matched to itself")));
            }
            if self.partner[j - 1] != i {
                return Err(Error::InvalidCoupling(format!("partner map not an involution at {i}")));
            }
        }
        if !is_noncrossing(&self.pairs()) {
            return Err(Error::InvalidCoupling("pairs cross".into()));
        }
        Ok(())
    }

    /// Number of boundary points (`2N`).
    pub fn points(&self) -> usize {
        self.partner.len()
    }

    /// Number of arcs (`N`).
    pub fn size(&self) -> usize {
        self.partner.len() / 2
    }

    pub fn partner(&self, i: usize) -> usize {
        self.partner[i - 1]
    }

    pub fn partner_array(&self) -> &[usize] {
        &self.partner
    }

    /// Pairs `(a, b)` with `a < b`, sorted by `a`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (1..=self.points())
            .filter_map(|i| {
                let j = self.partner[i - 1];
                (i < j).then_some((i, j))
            })
            .collect()
    }

    pub fn succ(&self, i: usize) -> usize {
        i % self.points() + 1
    }

    /// Applies the generator `e_i` of the cyclic Temperley-Lieb algebra:
    /// pairs `(i, j)` and `(i+1, k)` become `(i, i+1)` and `(j, k)`; a short
    /// link at `(i, i+1)` is left alone.
    pub fn tl_apply(&self, i: usize) -> Coupling {
        assert!((1..=self.points()).contains(&i), "generator index {i} out of range");
        let next = self.succ(i);
        let j = self.partner(i);
        if j == next {
            return self.clone();
        }
        let k = self.partner(next);
        let mut partner = self.partner.clone();
        partner[i - 1] = next;
        partner[next - 1] = i;
        partner[j - 1] = k;
        partner[k - 1] = j;
        Coupling { partner }
    }

    /// Links between cyclically adjacent points, written `(i, i+1)` with the
    /// wrap-around link written `(2N, 1)`.
    pub fn short_links(&self) -> Vec<(usize, usize)> {
        (1..=self.points())
            .filter(|&i| self.partner(i) == self.succ(i) && (self.points() > 2 || i == 1))
            .map(|i| (i, self.succ(i)))
            .collect()
    }

    /// Relabels every point `i` as `i + shift` (cyclically).
    pub fn rotate(&self, shift: usize) -> Coupling {
        let n = self.points();
        if n == 0 {
            return self.clone();
        }
        let mv = |p: usize| (p - 1 + shift) % n + 1;
        let mut partner = vec![0; n];
        for i in 1..=n {
            partner[mv(i) - 1] = mv(self.partner(i));
        }
        Coupling { partner }
    }
}

pub(crate) fn is_noncrossing(pairs: &[(usize, usize)]) -> bool {
    for (x, &(a, b)) in pairs.iter().enumerate() {
        for &(c, d) in &pairs[x + 1..] {
            let (a, b) = (a.min(b), a.max(b));
            let (c, d) = (c.min(d), c.max(d));
            if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                return false;
            }
        }
    }
    true
}

fn write_pairs(f: &mut fmt::Formatter<'_>, pairs: &[(usize, usize)]) -> fmt::Result {
    if pairs.is_empty() {
        return write!(f, "()");
    }
    for (a, b) in pairs {
        write!(f, "({a},{b})")?;
    }
    Ok(())
}

fn parse_pairs(s: &str) -> Result<Vec<(usize, usize)>> {
    let s = s.trim();
    if s == "()" || s.is_empty() {
        return Ok(vec![]);
    }
    let bad = || Error::Parse(format!("malformed pair list {s:?}"));
    let body = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
    body.split(")(")
        .map(|chunk| {
            let (a, b) = chunk.split_once(',').ok_or_else(bad)?;
            let a = a.trim().parse().map_err(|_| bad())?;
            let b = b.trim().parse().map_err(|_| bad())?;
            Ok((a, b))
        })
        .collect()
}

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_pairs(f, &self.pairs())
    }
}

impl FromStr for Coupling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let pairs = parse_pairs(s)?;
        Coupling::from_pairs(2 * pairs.len(), &pairs)
    }
}

impl Serialize for Coupling {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Coupling {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All couplings with `n` arcs, in canonical order. `n = 0` yields the
/// single empty coupling.
pub fn enumerate_couplings(n: usize) -> Vec<Coupling> {
    // The first point splits the rest into an inside and an outside block.
    fn gen(points: &[usize]) -> Vec<Vec<(usize, usize)>> {
        if points.is_empty() {
            return vec![vec![]];
        }
        let a = points[0];
        let mut out = Vec::new();
        for idx in (1..points.len()).step_by(2) {
            let inner = gen(&points[1..idx]);
            let outer = gen(&points[idx + 1..]);
            for i in &inner {
                for o in &outer {
                    let mut m = Vec::with_capacity(points.len() / 2);
                    m.push((a, points[idx]));
                    m.extend_from_slice(i);
                    m.extend_from_slice(o);
                    out.push(m);
                }
            }
        }
        out
    }
    let pts: Vec<usize> = (1..=2 * n).collect();
    let mut all: Vec<Coupling> = gen(&pts)
        .into_iter()
        .map(|pairs| Coupling::from_pairs(2 * n, &pairs).expect("generated coupling is valid"))
        .collect();
    all.sort();
    all
}

/// The all-parallel coupling `{ {i, 2n+1-i} : 1 <= i <= n }`.
pub fn pi0(n: usize) -> Coupling {
    let pairs: Vec<_> = (1..=n).map(|i| (i, 2 * n + 1 - i)).collect();
    Coupling::from_pairs(2 * n, &pairs).expect("parallel arches are noncrossing")
}

/// Whether a half-turn symmetric coupling has a diameter (odd half size) or
/// lives on a punctured disk (even half size).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HtKind {
    Punctured,
    Slit,
}

/// A coupling of `2L` points invariant under `i -> i + L`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct HtCoupling {
    full: Coupling,
}

impl HtCoupling {
    pub fn new(full: Coupling) -> Result<Self> {
        let p = full.points();
        if p == 0 || !p.is_multiple_of(2) {
            return Err(Error::InvalidCoupling(format!("half-turn coupling needs 2L points, got {p}")));
        }
        let l = p / 2;
        let shift = |i: usize| (i - 1 + l) % p + 1;
        for i in 1..=p {
            if full.partner(shift(i)) != shift(full.partner(i)) {
                return Err(Error::InvalidCoupling(format!("{full} is not half-turn symmetric")));
            }
        }
        let diameters = (1..=l).filter(|&i| full.partner(i) == i + l).count();
        let expected = if l % 2 == 1 { 1 } else { 0 };
        if diameters != expected {
            return Err(Error::InvalidCoupling(format!(
                "{full} has {diameters} diameters, expected {expected}"
            )));
        }
        Ok(HtCoupling { full })
    }

    pub fn full(&self) -> &Coupling {
        &self.full
    }

    /// The half size `L` (the FPL grid size).
    pub fn half(&self) -> usize {
        self.full.points() / 2
    }

    pub fn kind(&self) -> HtKind {
        if self.half().is_multiple_of(2) {
            HtKind::Punctured
        } else {
            HtKind::Slit
        }
    }

    /// Symmetrised generator `e'_i = e_i e_{i+L}` for `1 <= i <= L`.
    pub fn tl_sym_apply(&self, i: usize) -> HtCoupling {
        let l = self.half();
        assert!((1..=l).contains(&i), "symmetrised generator {i} out of 1..={l}");
        let full = self.full.tl_apply(i).tl_apply(i + l);
        HtCoupling { full }
    }

    /// Compact label: slit form for odd `L`, the full matching otherwise.
    pub fn label(&self) -> String {
        match self.kind() {
            HtKind::Slit => SlitCoupling::slit(self).expect("odd half size").to_string(),
            HtKind::Punctured => self.full.to_string(),
        }
    }
}

impl fmt::Display for HtCoupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.full.fmt(f)
    }
}

/// Symmetric couplings of `2L` points, canonical order.
pub fn enumerate_ht_couplings(half: usize) -> Vec<HtCoupling> {
    enumerate_couplings(half)
        .into_iter()
        .filter_map(|c| HtCoupling::new(c).ok())
        .collect()
}

/// Compact form of an odd half-turn coupling: the diameter becomes a
/// singleton and each orbit of two arcs becomes one pair on `1..=L`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SlitCoupling {
    size: usize,
    singleton: usize,
    partner: Vec<Option<usize>>,
}

impl SlitCoupling {
    pub fn new(size: usize, singleton: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if size.is_multiple_of(2) {
            return Err(Error::EvenSlit(size));
        }
        if singleton == 0 || singleton > size {
            return Err(Error::InvalidCoupling(format!("singleton {singleton} out of 1..={size}")));
        }
        let mut partner = vec![None; size];
        for &(a, b) in pairs {
            for p in [a, b] {
                if p == 0 || p > size || p == singleton || partner[p - 1].is_some() {
                    return Err(Error::InvalidCoupling(format!("bad slit label {p}")));
                }
            }
            if a == b {
                return Err(Error::InvalidCoupling(format!("degenerate pair ({a},{a})")));
            }
            partner[a - 1] = Some(b);
            partner[b - 1] = Some(a);
        }
        if partner.iter().enumerate().any(|(i, p)| p.is_none() && i + 1 != singleton) {
            return Err(Error::InvalidCoupling("slit coupling leaves a point unmatched".into()));
        }
        let sc = SlitCoupling { size, singleton, partner };
        // Arcs may not cross the slit: unwrapped from the singleton they must nest.
        let unwrapped: Vec<_> = sc.pairs().iter().map(|&(a, b)| (sc.offset(a), sc.offset(b))).collect();
        if !is_noncrossing(&unwrapped) {
            return Err(Error::InvalidCoupling("slit arcs cross".into()));
        }
        Ok(sc)
    }

    /// Position of `p` counted from just after the singleton.
    fn offset(&self, p: usize) -> usize {
        (p + self.size - self.singleton) % self.size
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn singleton(&self) -> usize {
        self.singleton
    }

    pub fn partner(&self, i: usize) -> Option<usize> {
        self.partner[i - 1]
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (1..=self.size)
            .filter_map(|i| self.partner[i - 1].filter(|&j| i < j).map(|j| (i, j)))
            .collect()
    }

    pub fn slit(hc: &HtCoupling) -> Result<Self> {
        let l = hc.half();
        if l.is_multiple_of(2) {
            return Err(Error::EvenSlit(l));
        }
        let full = hc.full();
        let singleton = (1..=l)
            .find(|&i| full.partner(i) == i + l)
            .expect("odd half-turn coupling has a diameter");
        let fold = |p: usize| (p - 1) % l + 1;
        let mut pairs: Vec<(usize, usize)> = full
            .pairs()
            .into_iter()
            .filter(|&(a, b)| b != a + l)
            .map(|(a, b)| {
                let (x, y) = (fold(a), fold(b));
                (x.min(y), x.max(y))
            })
            .collect();
        pairs.sort();
        pairs.dedup();
        Self::new(l, singleton, &pairs)
    }

    pub fn unslit(&self) -> HtCoupling {
        let l = self.size;
        let s = self.singleton;
        // Lift each label to its representative in s+1 ..= s+L-1 (mod 2L).
        let lift = |p: usize| if p > s { p } else { p + l };
        let wrap = |p: usize| (p - 1) % (2 * l) + 1;
        let mut pairs = vec![(s, s + l)];
        for (a, b) in self.pairs() {
            let (x, y) = (lift(a), lift(b));
            pairs.push((wrap(x), wrap(y)));
            pairs.push((wrap(x + l), wrap(y + l)));
        }
        let full = Coupling::from_pairs(2 * l, &pairs).expect("unslit coupling is valid");
        HtCoupling::new(full).expect("unslit coupling is half-turn symmetric")
    }

    pub fn rotate(&self, shift: usize) -> SlitCoupling {
        let n = self.size;
        let mv = |p: usize| (p - 1 + shift) % n + 1;
        let pairs: Vec<_> = self.pairs().into_iter().map(|(a, b)| (mv(a), mv(b))).collect();
        SlitCoupling::new(n, mv(self.singleton), &pairs).expect("rotation preserves validity")
    }
}

impl fmt::Display for SlitCoupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_pairs(f, &self.pairs())?;
        write!(f, "|s={}", self.singleton)
    }
}

impl FromStr for SlitCoupling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (pairs, single) = s
            .split_once("|s=")
            .ok_or_else(|| Error::Parse(format!("missing singleton in {s:?}")))?;
        let pairs = parse_pairs(pairs)?;
        let singleton: usize = single
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad singleton in {s:?}")))?;
        SlitCoupling::new(2 * pairs.len() + 1, singleton, &pairs)
    }
}

/// Slit couplings of size `L` in canonical order.
pub fn enumerate_slit_couplings(size: usize) -> Result<Vec<SlitCoupling>> {
    if size.is_multiple_of(2) {
        return Err(Error::EvenSlit(size));
    }
    let mut all: Vec<_> = enumerate_ht_couplings(size)
        .iter()
        .map(|h| SlitCoupling::slit(h).expect("odd half size"))
        .collect();
    all.sort();
    Ok(all)
}

/// One arc of a punctured coupling, on the `L` points of the quotient disk.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct PuncturedArc {
    pub a: usize,
    pub b: usize,
    /// Whether the arc passes around the puncture, i.e. its lift joins the
    /// two halves `1..=L` and `L+1..=2L` of the full coupling.
    pub winds: bool,
}

/// An even half-turn coupling viewed on the punctured disk with `L` points.
/// Equality and ordering go through the full `2L`-point matching; the arc
/// list is derived data.
#[derive(Clone, Debug)]
pub struct PuncturedCoupling {
    underlying: HtCoupling,
    arcs: Vec<PuncturedArc>,
}

impl PartialEq for PuncturedCoupling {
    fn eq(&self, other: &Self) -> bool {
        self.underlying == other.underlying
    }
}

impl Eq for PuncturedCoupling {}

impl PartialOrd for PuncturedCoupling {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PuncturedCoupling {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.underlying.cmp(&other.underlying)
    }
}

impl std::hash::Hash for PuncturedCoupling {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.underlying.hash(state)
    }
}

impl PuncturedCoupling {
    pub fn new(underlying: HtCoupling) -> Result<Self> {
        let l = underlying.half();
        if !l.is_multiple_of(2) {
            return Err(Error::OddPuncture(l));
        }
        let fold = |p: usize| (p - 1) % l + 1;
        let mut arcs: Vec<PuncturedArc> = underlying
            .full()
            .pairs()
            .into_iter()
            .filter(|&(a, _)| a <= l)
            .map(|(a, b)| {
                let (x, y) = (fold(a), fold(b));
                PuncturedArc { a: x.min(y), b: x.max(y), winds: b > l }
            })
            .collect();
        arcs.sort_by_key(|arc| (arc.a, arc.b));
        arcs.dedup_by_key(|arc| (arc.a, arc.b));
        Ok(PuncturedCoupling { underlying, arcs })
    }

    pub fn underlying(&self) -> &HtCoupling {
        &self.underlying
    }

    pub fn size(&self) -> usize {
        self.underlying.half()
    }

    pub fn arcs(&self) -> &[PuncturedArc] {
        &self.arcs
    }

    /// Forgets the puncture: the plane coupling on `L` points.
    pub fn project(&self) -> Coupling {
        let pairs: Vec<_> = self.arcs.iter().map(|arc| (arc.a, arc.b)).collect();
        Coupling::from_pairs(self.size(), &pairs).expect("projection of a punctured coupling is planar")
    }

    pub fn tl_sym_apply(&self, i: usize) -> PuncturedCoupling {
        PuncturedCoupling::new(self.underlying.tl_sym_apply(i)).expect("even size preserved")
    }
}

impl fmt::Display for PuncturedCoupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.underlying.fmt(f)
    }
}

/// Projection of any even half-turn coupling to the plane coupling of half
/// its size.
pub fn project_punctured(pp: &PuncturedCoupling) -> Coupling {
    pp.project()
}

/// Every punctured coupling whose projection is `pi`.
pub fn punctured_fiber(pi: &Coupling) -> Vec<PuncturedCoupling> {
    let l = pi.points();
    if l == 0 {
        return vec![];
    }
    enumerate_ht_couplings(l)
        .into_iter()
        .map(|h| PuncturedCoupling::new(h).expect("even half size"))
        .filter(|pp| pp.project() == *pi)
        .collect()
}

/// The coupling `pi'_{k,n}` of `4n` points: arcs `{i, 4n+1-i}` for `i <= k`,
/// arcs `{i, 2n+1-i}` for `k < i <= n`, closed under the half-turn.
pub fn punctured_pi0(k: usize, n: usize) -> PuncturedCoupling {
    assert!(k <= n);
    let p = 4 * n;
    let shift = |i: usize| (i - 1 + 2 * n) % p + 1;
    let mut pairs = Vec::new();
    for i in 1..=n {
        let j = if i <= k { 4 * n + 1 - i } else { 2 * n + 1 - i };
        pairs.push((i, j));
        pairs.push((shift(i), shift(j)));
    }
    let full = Coupling::from_pairs(p, &pairs).expect("pi'_{k,n} is a valid coupling");
    PuncturedCoupling::new(HtCoupling::new(full).expect("pi'_{k,n} is symmetric")).expect("even")
}

/// The rare slit couplings of size `2n+1`: for `k = 1..=n+1`, arcs
/// `{i, 2n+2-i}` (`i < k`), singleton `k`, arcs `{i, 2n+3-i}` (`k < i <= n+1`),
/// all rotated by `offset`.
pub fn slit_rare_family(n: usize, offset: usize) -> Vec<SlitCoupling> {
    let size = 2 * n + 1;
    assert!(offset < size, "offset {offset} out of 0..{size}");
    let mut fam: Vec<_> = (1..=n + 1)
        .map(|k| {
            let mut pairs: Vec<_> = (1..k).map(|i| (i, 2 * n + 2 - i)).collect();
            pairs.extend((k + 1..=n + 1).map(|i| (i, 2 * n + 3 - i)));
            SlitCoupling::new(size, k, &pairs)
                .expect("rare slit coupling is valid")
                .rotate(offset)
        })
        .collect();
    fam.sort();
    fam
}

/// Extended short-link positions allowed for the rare slit family at
/// `offset`: `(i,i+1)`, `(n+i+1,n+i+2)`, `(2n+i+1,2n+i+2)`, `(3n+i+2,3n+i+3)`
/// on `4n+2` points, cyclically.
pub fn rare_slit_short_positions(n: usize, offset: usize) -> Vec<(usize, usize)> {
    let p = 4 * n + 2;
    let w = |x: usize| (x + p - 1) % p + 1;
    let i = offset;
    let mut v = vec![
        (w(i + p), w(i + 1)),
        (w(n + i + 1), w(n + i + 2)),
        (w(2 * n + i + 1), w(2 * n + i + 2)),
        (w(3 * n + i + 2), w(3 * n + i + 3)),
    ];
    v.sort();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Coupling {
        s.parse().unwrap()
    }

    #[test]
    fn catalan_counts() {
        let counts: Vec<_> = (0..=6).map(|n| enumerate_couplings(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 14, 42, 132]);
        assert_eq!(enumerate_couplings(1), vec![c("(1,2)")]);
    }

    #[test]
    fn enumeration_is_sorted_and_distinct() {
        let all = enumerate_couplings(4);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn pi0_instances() {
        assert_eq!(pi0(1), c("(1,2)"));
        assert_eq!(pi0(2), c("(1,4)(2,3)"));
        assert_eq!(pi0(3), c("(1,6)(2,5)(3,4)"));
    }

    #[test]
    fn tl_examples() {
        assert_eq!(c("(1,2)(3,4)").tl_apply(1), c("(1,2)(3,4)"));
        assert_eq!(c("(1,2)(3,4)").tl_apply(2), c("(1,4)(2,3)"));
        assert_eq!(c("(1,4)(2,3)").tl_apply(3), c("(1,2)(3,4)"));
        // e_4 on 4 points joins 4 with 1 cyclically.
        assert_eq!(c("(1,4)(2,3)").tl_apply(4), c("(1,4)(2,3)"));
        assert_eq!(c("(1,2)(3,4)").tl_apply(4), c("(1,4)(2,3)"));
    }

    #[test]
    fn rejects_crossing_and_bad_involution() {
        assert!(Coupling::from_pairs(4, &[(1, 3), (2, 4)]).is_err());
        assert!(Coupling::new(vec![2, 1, 4, 4]).is_err());
        assert!(Coupling::new(vec![1, 2]).is_err());
        assert!("(1,2)(2,3)".parse::<Coupling>().is_err());
    }

    #[test]
    fn display_round_trip() {
        let x = c("(1,6)(2,3)(4,5)");
        assert_eq!(x.to_string(), "(1,6)(2,3)(4,5)");
        assert_eq!(Coupling::empty().to_string(), "()");
        assert_eq!("()".parse::<Coupling>().unwrap(), Coupling::empty());
    }

    #[test]
    fn short_links_wrap() {
        assert_eq!(c("(1,4)(2,3)").short_links(), vec![(2, 3), (4, 1)]);
        assert_eq!(c("(1,2)").short_links(), vec![(1, 2)]);
    }

    #[test]
    fn ht_enumeration_and_kind() {
        let two = enumerate_ht_couplings(2);
        assert_eq!(two.len(), 2);
        assert!(two.iter().all(|h| h.kind() == HtKind::Punctured));
        let three = enumerate_ht_couplings(3);
        assert_eq!(three.len(), 3);
        assert!(three.iter().all(|h| h.kind() == HtKind::Slit));
    }

    #[test]
    fn tl_sym_preserves_symmetry() {
        for l in 1..=6 {
            for h in enumerate_ht_couplings(l) {
                for i in 1..=l {
                    let out = h.tl_sym_apply(i);
                    assert!(HtCoupling::new(out.full().clone()).is_ok());
                    // e_i and e_{i+L} commute on symmetric couplings.
                    let other = h.full().tl_apply(i + l).tl_apply(i);
                    assert_eq!(out.full(), &other);
                }
            }
        }
    }

    #[test]
    fn tl_sym_example_on_four_points() {
        let a = HtCoupling::new(c("(1,2)(3,4)")).unwrap();
        let b = HtCoupling::new(c("(1,4)(2,3)")).unwrap();
        assert_eq!(a.tl_sym_apply(2), b);
        assert_eq!(a.tl_sym_apply(1), a);
    }

    #[test]
    fn slit_round_trip_small() {
        let single = SlitCoupling::new(1, 1, &[]).unwrap();
        assert_eq!(single.unslit().full(), &c("(1,2)"));
        for size in [1, 3, 5, 7] {
            for h in enumerate_ht_couplings(size) {
                let s = SlitCoupling::slit(&h).unwrap();
                assert_eq!(s.unslit(), h);
                assert_eq!(s.to_string().parse::<SlitCoupling>().unwrap(), s);
            }
        }
        assert_eq!(enumerate_slit_couplings(3).unwrap().len(), 3);
    }

    #[test]
    fn slit_rejects_even() {
        let h = HtCoupling::new(c("(1,2)(3,4)")).unwrap();
        assert_eq!(SlitCoupling::slit(&h), Err(Error::EvenSlit(2)));
        assert!(SlitCoupling::new(4, 1, &[(2, 3)]).is_err());
    }

    #[test]
    fn slit_arcs_may_not_cross_the_slit() {
        // Unwrapped from singleton 2 the order is 3,4,5,1: (3,1) encloses (4,5).
        assert!(SlitCoupling::new(5, 2, &[(1, 3), (4, 5)]).is_ok());
        // (1,4) and (3,5) interleave once unwrapped from singleton 2.
        assert!(SlitCoupling::new(5, 2, &[(1, 4), (3, 5)]).is_err());
    }

    #[test]
    fn punctured_fibers_of_pi0() {
        for n in 1..=4 {
            let fiber = punctured_fiber(&pi0(n));
            assert_eq!(fiber.len(), n + 1, "n = {n}");
            let mut expected: Vec<_> = (0..=n).map(|k| punctured_pi0(k, n)).collect();
            expected.sort();
            assert_eq!(fiber, expected);
            for pp in &fiber {
                assert_eq!(pp.project(), pi0(n));
            }
        }
    }

    #[test]
    fn pi_prime_short_links() {
        for n in 1..=4 {
            let allowed = [(1, 4 * n), (n, n + 1), (2 * n, 2 * n + 1), (3 * n, 3 * n + 1)];
            let norm = |(a, b): (usize, usize)| (a.min(b), a.max(b));
            for k in 0..=n {
                let pp = punctured_pi0(k, n);
                for link in pp.underlying().full().short_links() {
                    assert!(allowed.iter().any(|&x| norm(x) == norm(link)), "n={n} k={k} link={link:?}");
                }
            }
        }
    }

    #[test]
    fn projection_commutes_with_tl() {
        for l in [2, 4, 6] {
            for h in enumerate_ht_couplings(l) {
                let pp = PuncturedCoupling::new(h).unwrap();
                for i in 1..=l {
                    assert_eq!(pp.tl_sym_apply(i).project(), pp.project().tl_apply(i));
                }
            }
        }
    }

    #[test]
    fn winding_flags() {
        let fiber = punctured_fiber(&pi0(1));
        let flags: Vec<bool> = fiber.iter().map(|p| p.arcs()[0].winds).collect();
        assert_eq!(fiber.len(), 2);
        assert!(flags.contains(&true) && flags.contains(&false));
    }

    #[test]
    fn rare_slit_family_matches_short_link_description() {
        for n in 0..=3 {
            for offset in 0..2 * n + 1 {
                let fam = slit_rare_family(n, offset);
                let allowed = rare_slit_short_positions(n, offset);
                let norm = |(a, b): (usize, usize)| (a.min(b), a.max(b));
                let allowed: Vec<_> = allowed.into_iter().map(norm).collect();
                let described: Vec<_> = enumerate_slit_couplings(2 * n + 1)
                    .unwrap()
                    .into_iter()
                    .filter(|s| {
                        s.unslit()
                            .full()
                            .short_links()
                            .into_iter()
                            .all(|l| allowed.contains(&norm(l)))
                    })
                    .collect();
                assert_eq!(fam, described, "n={n} offset={offset}");
                assert_eq!(fam.len(), n + 1);
            }
        }
    }
}
