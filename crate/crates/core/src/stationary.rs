//! Temperley-Lieb Markov chains on couplings and their exact stationary
//! distributions, checked against FPL tallies.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Display;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::coupling::{enumerate_couplings, enumerate_ht_couplings, Coupling, HtCoupling, PuncturedCoupling};
use crate::det::RationalMatrix;
use crate::error::{Error, Result};
use crate::fpl::{count_by_coupling, count_ht_by_coupling, EnumOptions};
use crate::par;
use crate::rational::{fmt_rational, rat_int, BigInt, BigRational};
use crate::report::ReconciliationReport;

/// A chain given by its states (in canonical order) and, for every state
/// and generator, the index of the image state. Each step picks one
/// generator uniformly.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ChainSpec {
    pub labels: Vec<String>,
    pub generators: usize,
    pub targets: Vec<Vec<usize>>,
}

impl ChainSpec {
    /// Builds the chain, checking that every generator maps states into
    /// states.
    pub fn build<S, F>(states: &[S], generators: usize, apply: F) -> Result<Self>
    where
        S: Ord + Clone + Display + Sync + Send,
        F: Fn(&S, usize) -> S + Sync + Send,
    {
        let index: BTreeMap<&S, usize> = states.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let rows = par::map_range(0..states.len(), |k| {
            (0..generators)
                .map(|g| {
                    let image = apply(&states[k], g);
                    index.get(&image).copied().ok_or_else(|| Error::ClosureViolation {
                        generator: g + 1,
                        state: states[k].to_string(),
                    })
                })
                .collect::<Result<Vec<usize>>>()
        });
        let targets = rows.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(ChainSpec { labels: states.iter().map(|s| s.to_string()).collect(), generators, targets })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Plain chain on couplings of size `n` with generators `e_1..e_{2n}`.
    pub fn plain(n: usize) -> Result<(Self, Vec<Coupling>)> {
        let states = enumerate_couplings(n);
        let spec = ChainSpec::build(&states, 2 * n, |c, g| c.tl_apply(g + 1))?;
        Ok((spec, states))
    }

    /// Symmetrised chain on half-turn couplings of `2N` points with
    /// generators `e_i e_{i+N}`, `1 <= i <= N`.
    pub fn half_turn(size: usize) -> Result<(Self, Vec<HtCoupling>)> {
        let states = enumerate_ht_couplings(size);
        let spec = ChainSpec::build(&states, size, |c, g| c.tl_sym_apply(g + 1))?;
        Ok((spec, states))
    }
}

/// `P[s][t]` = (number of generators taking `s` to `t`) / (number of
/// generators).
pub fn transition_matrix(spec: &ChainSpec) -> RationalMatrix {
    let n = spec.len();
    let g = spec.generators.max(1) as i64;
    let mut counts = vec![vec![0i64; n]; n];
    for (s, row) in spec.targets.iter().enumerate() {
        for &t in row {
            counts[s][t] += 1;
        }
    }
    if spec.generators == 0 {
        for (s, row) in counts.iter_mut().enumerate() {
            row[s] = 1;
        }
    }
    RationalMatrix::from_fn(n, |s, t| BigRational::new(counts[s][t].into(), g.into()))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StationaryResult {
    pub distribution: Vec<BigRational>,
    /// `mu P - mu`, entrywise; exactly zero for a true stationary vector.
    pub residual: Vec<BigRational>,
}

impl StationaryResult {
    pub fn is_certified(&self) -> bool {
        self.residual.iter().all(Zero::is_zero)
            && self.distribution.iter().all(|p| !p.is_negative())
            && self.distribution.iter().fold(BigRational::zero(), |a, p| a + p) == BigRational::one()
    }
}

fn reachable(adj: &[Vec<usize>], from: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

/// Checks the support graph of `p` is strongly connected.
pub fn check_irreducible(p: &RationalMatrix, labels: &[String]) -> Result<()> {
    let n = p.dim();
    if n == 0 {
        return Ok(());
    }
    let mut fwd = vec![Vec::new(); n];
    let mut bwd = vec![Vec::new(); n];
    for s in 0..n {
        for t in 0..n {
            if !p.get(s, t).is_zero() {
                fwd[s].push(t);
                bwd[t].push(s);
            }
        }
    }
    let label = |i: usize| labels.get(i).cloned().unwrap_or_else(|| i.to_string());
    if let Some(t) = reachable(&fwd, 0).iter().position(|r| !r) {
        return Err(Error::Reducible { from: label(0), to: label(t) });
    }
    if let Some(s) = reachable(&bwd, 0).iter().position(|r| !r) {
        return Err(Error::Reducible { from: label(s), to: label(0) });
    }
    Ok(())
}

/// Solves `mu (P - I) = 0`, `sum mu = 1` by exact Gaussian elimination.
pub fn stationary(p: &RationalMatrix) -> Result<StationaryResult> {
    stationary_labelled(p, &[])
}

pub fn stationary_labelled(p: &RationalMatrix, labels: &[String]) -> Result<StationaryResult> {
    let n = p.dim();
    check_irreducible(p, labels)?;
    if n == 0 {
        return Ok(StationaryResult { distribution: vec![], residual: vec![] });
    }
    // Rows of the system are the columns of P^T - I; the last one is
    // replaced by the normalisation.
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|t| {
            (0..n)
                .map(|s| {
                    let mut v = p.get(s, t).clone();
                    if s == t {
                        v -= BigRational::one();
                    }
                    v
                })
                .collect()
        })
        .collect();
    let mut b = vec![BigRational::zero(); n];
    a[n - 1] = vec![BigRational::one(); n];
    b[n - 1] = BigRational::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::Singular)?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = BigRational::one() / &a[col][col];
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] * &inv;
                for c in col..n {
                    let delta = &f * &a[col][c];
                    a[r][c] -= delta;
                }
                let delta = &f * &b[col];
                b[r] -= delta;
            }
        }
    }
    let distribution: Vec<BigRational> = (0..n).map(|i| &b[i] / &a[i][i]).collect();
    let residual = (0..n)
        .map(|t| (0..n).fold(BigRational::zero(), |acc, s| acc + &distribution[s] * p.get(s, t)) - &distribution[t])
        .collect();
    Ok(StationaryResult { distribution, residual })
}

fn ratio(count: &BigInt, total: &BigInt) -> BigRational {
    BigRational::new(count.clone(), total.clone())
}

/// Stationary vector of the plain chain against `A(n; pi) / A(n)`.
pub fn verify_rs(n: usize, opts: &EnumOptions) -> Result<ReconciliationReport> {
    let (spec, states) = ChainSpec::plain(n)?;
    let mu = stationary_labelled(&transition_matrix(&spec), &spec.labels)?;
    let tallies = count_by_coupling(n, opts)?;
    let total: BigInt = tallies.values().sum();
    let mut r = ReconciliationReport::new("razumov-stroganov", n, true);
    r.check("stationary certificate", mu.is_certified());
    for (k, c) in states.iter().enumerate() {
        let count = tallies.get(c).cloned().unwrap_or_default();
        r.compare(c.to_string(), &mu.distribution[k], &ratio(&count, &total));
    }
    r.note(format!("A({n}) = {total}"));
    Ok(r)
}

/// Stationary vector of the symmetrised chain against `A_HT(N; pi) /
/// A_HT(N)`. States are full symmetric couplings, labelled in slit form
/// for odd `N`.
pub fn verify_dg(size: usize, opts: &EnumOptions) -> Result<ReconciliationReport> {
    let (spec, states) = ChainSpec::half_turn(size)?;
    let mut r = ReconciliationReport::new("de-gier", size, false);
    let p = transition_matrix(&spec);
    let mu = match stationary_labelled(&p, &spec.labels) {
        Ok(mu) => mu,
        Err(e) => {
            r.check("chain is irreducible", false);
            r.note(e.to_string());
            return Ok(r);
        }
    };
    let tallies = count_ht_by_coupling(size, opts)?;
    let total: BigInt = tallies.values().sum();
    r.check("stationary certificate", mu.is_certified());
    for (k, c) in states.iter().enumerate() {
        let count = tallies.get(c).cloned().unwrap_or_default();
        r.compare(c.label(), &mu.distribution[k], &ratio(&count, &total));
    }
    r.note(format!("A_HT({size}) = {total}"));
    Ok(r)
}

/// The cross-multiplied refined identity at plain size `n`:
/// `A(n; pi) A_HT(2n) = A(n) * sum over punctured pi' over pi of A_HT(2n; pi')`.
/// Also reports `A_HT(2n) / A(n)`.
pub fn verify_refined(n: usize, opts: &EnumOptions) -> Result<(ReconciliationReport, BigRational)> {
    let plain = count_by_coupling(n, opts)?;
    let ht = count_ht_by_coupling(2 * n, opts)?;
    let a_n: BigInt = plain.values().sum();
    let a_ht: BigInt = ht.values().sum();
    let mut fibers: BTreeMap<Coupling, BigInt> = BTreeMap::new();
    for (h, count) in &ht {
        let pc = PuncturedCoupling::new(h.clone())?;
        *fibers.entry(pc.project()).or_default() += count;
    }
    let mut r = ReconciliationReport::new("refined", n, true);
    for c in enumerate_couplings(n) {
        let lhs = plain.get(&c).cloned().unwrap_or_default() * &a_ht;
        let rhs = fibers.get(&c).cloned().unwrap_or_default() * &a_n;
        r.compare(c.to_string(), &rat_int(&lhs), &rat_int(&rhs));
    }
    let implied = ratio(&a_ht, &a_n);
    r.note(format!("A_HT({}) / A({n}) = {}", 2 * n, fmt_rational(&implied)));
    Ok((r, implied))
}

/// Pushes the stationary vector of the symmetrised chain of size `2n`
/// forward along the projection and compares with the plain chain of size
/// `n`.
pub fn verify_pushforward(n: usize) -> Result<ReconciliationReport> {
    let (pspec, plain) = ChainSpec::plain(n)?;
    let (hspec, ht) = ChainSpec::half_turn(2 * n)?;
    let mu_plain = stationary_labelled(&transition_matrix(&pspec), &pspec.labels)?;
    let mu_ht = stationary_labelled(&transition_matrix(&hspec), &hspec.labels)?;
    let mut pushed: BTreeMap<Coupling, BigRational> = BTreeMap::new();
    for (k, h) in ht.iter().enumerate() {
        let pc = PuncturedCoupling::new(h.clone())?;
        *pushed.entry(pc.project()).or_insert_with(BigRational::zero) += &mu_ht.distribution[k];
    }
    let mut r = ReconciliationReport::new("pushforward", n, false);
    for (k, c) in plain.iter().enumerate() {
        let v = pushed.get(c).cloned().unwrap_or_else(BigRational::zero);
        r.compare(c.to_string(), &v, &mu_plain.distribution[k]);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn single_state() {
        let (spec, _) = ChainSpec::plain(1).unwrap();
        let p = transition_matrix(&spec);
        assert_eq!(p.dim(), 1);
        assert_eq!(*p.get(0, 0), rat(1, 1));
        assert_eq!(stationary(&p).unwrap().distribution, vec![rat(1, 1)]);
    }

    #[test]
    fn two_states_uniform() {
        let (spec, _) = ChainSpec::plain(2).unwrap();
        let p = transition_matrix(&spec);
        for s in 0..2 {
            assert_eq!((0..2).fold(rat(0, 1), |a, t| a + p.get(s, t)), rat(1, 1));
        }
        let mu = stationary(&p).unwrap();
        assert!(mu.is_certified());
        assert_eq!(mu.distribution, vec![rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn three_is_irreducible_with_sevenths() {
        let (spec, _) = ChainSpec::plain(3).unwrap();
        let p = transition_matrix(&spec);
        check_irreducible(&p, &spec.labels).unwrap();
        let mut mu = stationary(&p).unwrap().distribution;
        mu.sort();
        assert_eq!(mu, vec![rat(1, 7), rat(1, 7), rat(1, 7), rat(2, 7), rat(2, 7)]);
    }

    #[test]
    fn reducible_chain_is_reported() {
        let p = RationalMatrix::identity(2);
        assert!(matches!(stationary(&p), Err(Error::Reducible { .. })));
    }

    #[test]
    fn closure_violation_names_generator() {
        let states = vec![1u32, 2];
        let e = ChainSpec::build(&states, 2, |s, g| if g == 1 { 7 } else { *s }).unwrap_err();
        assert_eq!(e, Error::ClosureViolation { generator: 2, state: "1".into() });
    }
}
