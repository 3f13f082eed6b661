use templex::genex::{self, GenexOptions};
use templex::homology;
use templex::ingest::{build_bramah, simulate, BramahConfig, SimulationConfig, System};
use templex::{Error, PoincareMode, Templex};

fn build(system: System, cells: usize) -> templex::Result<templex::ingest::BramahOutput> {
    let cfg = SimulationConfig { sample_every: 5, ..SimulationConfig::new(system, 500.0, 0.01) };
    build_bramah(&simulate(&cfg)?, &BramahConfig::new(cells))
}

fn h1(t: &Templex) -> (usize, Vec<i64>) {
    let h = homology::homology(t.complex.as_ref().unwrap()).unwrap();
    (h[1].betti, h[1].torsion.clone())
}

fn digraph_classes(t: &Templex) -> usize {
    let opts = GenexOptions { mode: PoincareMode::Digraph, ..GenexOptions::default() };
    genex::analyze(t, &opts).unwrap().classes.len()
}

#[test]
fn rossler_five_cells() {
    let out = build(System::rossler(), 5).unwrap();
    assert_eq!(h1(&out.templex), (1, vec![]));
    assert_eq!(digraph_classes(&out.templex), 2);
    assert!(out.scaling.iter().flatten().all(|r| r.dimension == 2));
    assert!(out.warnings.iter().any(|w| w.contains("joining locus")));
}

#[test]
fn lorenz_eight_cells() {
    let out = build(System::lorenz(), 8).unwrap();
    assert_eq!(h1(&out.templex), (2, vec![]));
    // each wing loop is closed through the central cluster either directly
    // or via one more cluster, giving two classes per wing
    assert_eq!(digraph_classes(&out.templex), 4);
}

#[test]
fn coarse_rossler_cover_fails_condition_three() {
    match build(System::rossler(), 4) {
        Err(Error::LocalDimensionMismatch { .. }) => {}
        other => panic!("expected a dimension mismatch, got {:?}", other.map(|o| o.templex.digraph.len())),
    }
}
