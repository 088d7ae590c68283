//! Figure transcriptions against the constructions that should reproduce them.

use std::collections::BTreeSet;

use fpl_core::det::{r_func, RFuncSpec};
use fpl_core::fpl::{coupling_of, fixed_edges_even, fixed_edges_odd, nonfixed_quotient_graph, Edge, Parity};
use fpl_core::golden::{parse_grid, parse_region, GoldenRegion};
use fpl_core::rational::{rat, BigRational};
use fpl_core::tiling::{count_matchings, find_isomorphism, is_isomorphism, region_g, region_r, region_rl, region_rprime, PlanarRegion};

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn region_file(name: &str, x: &BigRational, y: &BigRational) -> GoldenRegion {
    parse_region(&golden(name), x, y).unwrap()
}

fn assert_isomorphic(a: &PlanarRegion, b: &PlanarRegion, weighted: bool) {
    let map = find_isomorphism(a, b, weighted).expect("regions are not isomorphic");
    assert!(is_isomorphism(a, b, &map, weighted));
}

#[test]
fn size_eight_fpl_has_drawn_coupling() {
    let g = parse_grid(&golden("fig1_fpl_size8.txt")).unwrap();
    assert_eq!(g.size, Some(8));
    let grid = g.to_grid().unwrap();
    assert_eq!(coupling_of(&grid).to_string(), g.coupling.unwrap());
}

#[test]
fn even_fixed_edges_match_figure() {
    let g = parse_grid(&golden("fig4_fixed_even_n6.txt")).unwrap();
    assert_eq!(g.size, Some(12));
    let drawn: BTreeSet<Edge> = g.edges.into_iter().collect();
    assert_eq!(drawn, fixed_edges_even(6).forced_present);
}

#[test]
fn odd_fixed_edges_match_figure() {
    let g = parse_grid(&golden("fig6_fixed_odd_n6.txt")).unwrap();
    assert_eq!(g.size, Some(13));
    let drawn: BTreeSet<Edge> = g.edges.into_iter().collect();
    assert_eq!(drawn, fixed_edges_odd(6).forced_present);
}

#[test]
fn region_g4_matches_figure_and_odd_quotient() {
    let one = rat(1, 1);
    let fig = region_file("fig8_region_g4.txt", &one, &one);
    assert_eq!(fig.seams["seam1"].len(), 4);
    let glued = fig.glued().unwrap();
    assert_eq!(glued.vertex_count(), 40);
    assert_eq!(glued.edge_count(), fig.region.edge_count() + 4);
    assert_isomorphic(&glued, &region_g(4).unwrap(), true);
    assert_isomorphic(&glued, &nonfixed_quotient_graph(4, Parity::Odd).unwrap(), false);
    // Without the gluing the figure is a different graph.
    assert!(find_isomorphism(&fig.region, &region_g(4).unwrap().untagged(), false).is_none());
}

#[test]
fn region_rl_matches_figure_with_tags() {
    let (x, y) = (rat(2, 3), rat(5, 7));
    let fig = region_file("fig9_region_rl_n4_l3.txt", &x, &y);
    assert_isomorphic(&fig.region, &region_rl(4, 3, &x, &y), true);
    // Swapping the variables must break a weighted isomorphism.
    assert!(find_isomorphism(&fig.region, &region_rl(4, 3, &y, &x), true).is_none());
}

/// The decomposition figures: after removing the lozenges drawn as fixed,
/// what remains is the smaller region, and the tiling count is unchanged
/// up to the weights of the fixed lozenges.
fn check_decomposition(name: &str, expected: &PlanarRegion, fixed: usize, l: usize, k: usize) {
    let one = rat(1, 1);
    let fig = region_file(name, &one, &one);
    assert_eq!(fig.fixed.len(), fixed);
    let rest = fig.without_fixed().unwrap();
    assert_isomorphic(&rest, &expected.untagged(), true);
    let det = r_func(&RFuncSpec::new(l, k, rat(1, 2), rat(1, 1)));
    assert_eq!(count_matchings(&rest), det);
}

#[test]
fn decomposition_of_g6() {
    check_decomposition("figrr_g6_r.txt", &region_r(3), 0, 0, 3);
    check_decomposition("figrr_g6_rprime.txt", &region_rprime(2), 7, 1, 2);
}

#[test]
fn decomposition_of_g7() {
    check_decomposition("figrr_g7_r.txt", &region_r(3), 7, 0, 3);
    check_decomposition("figrr_g7_rprime.txt", &region_rprime(3), 1, 1, 3);
}
