use std::collections::BTreeSet;

use proptest::prelude::*;
use templex::fixtures::{self, TEMPLEXES};
use templex::genex::{self, concat, p_image, p_image_cycle, GenexOptions};
use templex::par::Exec;
use templex::{Digraph, DirectedCycle, DirectedPath, Error, PoincareEdge};

/// Every elementary cycle as a node-index sequence starting at its least
/// index, by exhaustive DFS.
fn brute_cycles(n: usize, edges: &BTreeSet<(usize, usize)>) -> BTreeSet<Vec<usize>> {
    fn walk(start: usize, path: &mut Vec<usize>, edges: &BTreeSet<(usize, usize)>, n: usize, out: &mut BTreeSet<Vec<usize>>) {
        let last = *path.last().unwrap();
        for next in 0..n {
            if !edges.contains(&(last, next)) {
                continue;
            }
            if next == start {
                out.insert(path.clone());
            } else if next > start && !path.contains(&next) {
                path.push(next);
                walk(start, path, edges, n, out);
                path.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    for s in 0..n {
        walk(s, &mut vec![s], edges, n, &mut out);
    }
    out
}

fn normalized(g: &Digraph, cycles: &[DirectedCycle]) -> BTreeSet<Vec<usize>> {
    cycles
        .iter()
        .map(|c| {
            let mut idx: Vec<usize> = c.nodes().iter().map(|l| g.index_of(l).unwrap()).collect();
            let m = (0..idx.len()).min_by_key(|&i| idx[i]).unwrap();
            idx.rotate_left(m);
            idx
        })
        .collect()
}

fn digraph() -> impl Strategy<Value = (usize, BTreeSet<(usize, usize)>)> {
    (1usize..=7).prop_flat_map(|n| (Just(n), prop::collection::btree_set((0..n, 0..n), 0..=n * 2)))
}

fn build(n: usize, edges: &BTreeSet<(usize, usize)>) -> Digraph {
    Digraph::new((0..n).map(|i| format!("v{i}")), edges.iter().map(|&(a, b)| (format!("v{a}"), format!("v{b}")))).unwrap()
}

/// A random walk of `len` steps through a fixture digraph.
fn walk(g: &Digraph, start: usize, choices: &[usize]) -> Vec<String> {
    let mut at = start % g.len();
    let mut out = vec![g.label(at).to_string()];
    for &c in choices {
        let succ = g.successors(at);
        if succ.is_empty() {
            break;
        }
        at = succ[c % succ.len()];
        out.push(g.label(at).to_string());
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn johnson_matches_brute_force((n, edges) in digraph()) {
        let g = build(n, &edges);
        let seq = genex::elementary_cycles_with(&g, 10_000, Exec::Sequential).unwrap();
        let par = genex::elementary_cycles_with(&g, 10_000, Exec::Parallel).unwrap();
        prop_assert_eq!(&seq, &par);
        prop_assert_eq!(normalized(&g, &seq), brute_cycles(n, &edges));
        prop_assert!(seq.iter().all(DirectedCycle::is_elementary));
    }

    #[test]
    fn cap_is_enforced((n, edges) in digraph()) {
        let g = build(n, &edges);
        let total = brute_cycles(n, &edges).len();
        prop_assume!(total >= 2);
        let r = genex::elementary_cycles(&g, total - 1);
        prop_assert!(matches!(r, Err(Error::CycleCapExceeded { .. })), "{:?}", r.map(|c| c.len()));
        prop_assert_eq!(genex::elementary_cycles(&g, total).unwrap().len(), total);
    }

    #[test]
    fn p_image_respects_concatenation(which in 0usize..4, start in 0usize..64, choices in prop::collection::vec(0usize..4, 2..40), cut in any::<prop::sample::Index>()) {
        let t = fixtures::templex(TEMPLEXES[which]).unwrap();
        let edges = t.poincare_edges().unwrap();
        let nodes = walk(&t.digraph, start, &choices);
        prop_assume!(nodes.len() >= 3);
        let k = 1 + cut.index(nodes.len() - 2);
        let p = DirectedPath::in_digraph(&t.digraph, nodes[..=k].to_vec()).unwrap();
        let q = DirectedPath::in_digraph(&t.digraph, nodes[k..].to_vec()).unwrap();
        let whole = concat(&p, &q).unwrap();
        prop_assert_eq!(whole.nodes(), &nodes[..]);
        prop_assert_eq!(p_image(&whole, &edges), p_image(&p, &edges).concat(&p_image(&q, &edges)));
    }

    #[test]
    fn cycle_image_ignores_rotation(which in 0usize..4, pick in any::<prop::sample::Index>(), shift in 0usize..32) {
        let t = fixtures::templex(TEMPLEXES[which]).unwrap();
        let edges = t.poincare_edges().unwrap();
        let cycles = genex::elementary_cycles(&t.digraph, 10_000).unwrap();
        let c = pick.get(&cycles);
        let mut nodes = c.nodes().to_vec();
        let len = nodes.len();
        nodes.rotate_left(shift % len);
        let rotated = DirectedCycle::new(nodes).unwrap();
        prop_assert_eq!(p_image_cycle(&rotated, &edges), p_image_cycle(c, &edges));
    }
}

#[test]
fn concatenation_requires_matching_ends() {
    let p = DirectedPath::new(["1", "2"]).unwrap();
    let q = DirectedPath::new(["3", "1"]).unwrap();
    assert!(concat(&p, &q).is_err());
    let r = concat(&q, &p).unwrap();
    assert_eq!(r.nodes(), ["3", "1", "2"]);
    let e = [PoincareEdge::new("3", "1")];
    assert_eq!(p_image(&r, &e).len(), 1);
}

#[test]
fn class_invariants_on_fixtures() {
    for name in TEMPLEXES {
        let t = fixtures::templex(name).unwrap();
        let a = genex::analyze(&t, &GenexOptions::default()).unwrap();
        let mut seen = BTreeSet::new();
        for c in &a.classes {
            assert!(seen.insert(c.signature.to_string()), "{name}: duplicate signature");
            for m in &c.members {
                assert_eq!(p_image_cycle(m, &a.poincare_edges), c.signature, "{name} {}", c.name());
            }
            assert_eq!(c.order, c.signature.order());
            if c.order > 0 {
                assert_eq!(c.stripexes.len(), c.order, "{name} {}", c.name());
                let mut joined = c.stripexes[0].clone();
                for s in &c.stripexes[1..] {
                    joined = concat(&joined, s).unwrap();
                }
                assert!(joined.is_closed());
                assert_eq!(DirectedCycle::from_path(&joined).unwrap().edge_set(), c.representative.edge_set());
            }
        }
        for b in &a.bonds {
            assert_eq!(b.valence, b.index_set.len(), "{name} {}", b.name());
            assert!(b.valence >= 2);
        }
    }
}
