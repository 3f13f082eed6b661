//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines always reach the terminal.
#![allow(clippy::type_complexity)]

use std::collections::BTreeSet;
use std::time::Instant;

use templex::fixtures;
use templex::genex::{self, GeneratexAnalysis, GenexOptions, Orientation};
use templex::homology;
use templex::ingest::{self, SimulationConfig, System};
use templex::matrix::{smith_normal_form, IntMatrix};
use templex::tmv::{self, label_trajectory};
use templex::{DirectedPath, Templex, TmvDecomposition};

type Check = Result<(), String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Check {
    if ok { Ok(()) } else { Err(what()) }
}

fn analysis(name: &str) -> Result<(Templex, GeneratexAnalysis), String> {
    let t = fixtures::templex(name).map_err(|e| e.to_string())?;
    let a = genex::analyze(&t, &GenexOptions::default()).map_err(|e| e.to_string())?;
    Ok((t, a))
}

fn signatures(a: &GeneratexAnalysis) -> BTreeSet<String> {
    a.classes.iter().map(|c| c.signature.to_string()).collect()
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// The bond whose classes carry exactly `sigs`, as (shared, exclusive, valence).
fn bond(a: &GeneratexAnalysis, sigs: &[&str]) -> Option<(Vec<String>, Vec<String>, usize)> {
    let mut idx: Vec<usize> = a
        .classes
        .iter()
        .filter(|c| sigs.contains(&c.signature.to_string().as_str()))
        .map(|c| c.index)
        .collect();
    if idx.len() != sigs.len() {
        return None;
    }
    idx.sort_unstable();
    let show = |v: Vec<DirectedPath>| v.iter().map(ToString::to_string).collect();
    a.bonds.iter().find(|b| b.index_set == idx).map(|b| (show(b.shared_chains()), show(b.exclusive_chains()), b.valence))
}

fn class<'a>(a: &'a GeneratexAnalysis, sig: &str) -> Option<&'a genex::GeneratexClass> {
    a.classes.iter().find(|c| c.signature.to_string() == sig)
}

fn table_one() -> Check {
    let rows: [(&str, [usize; 3], bool, Vec<i64>); 5] = [
        ("sphere", [1, 0, 1], true, vec![]),
        ("cylinder", [1, 1, 0], true, vec![]),
        ("mobius", [1, 1, 0], false, vec![]),
        ("torus", [1, 2, 1], true, vec![]),
        ("klein", [1, 1, 0], false, vec![2]),
    ];
    for (name, betti, orientable, torsion) in rows {
        let k = fixtures::surface(name).map_err(|e| e.to_string())?;
        let h = homology::homology(&k).map_err(|e| e.to_string())?;
        let got: Vec<usize> = h.iter().map(|g| g.betti).collect();
        ensure(got == betti, || format!("{name}: betti {got:?}"))?;
        ensure(h[1].torsion == torsion, || format!("{name}: H1 torsion {:?}", h[1].torsion))?;
        let o = homology::betti_table(&k).map_err(|e| e.to_string())?.orientable;
        ensure(o == orientable, || format!("{name}: orientable {o}"))?;
    }
    Ok(())
}

fn rossler() -> Check {
    let (t, a) = analysis("rossler")?;
    let h = homology::homology(t.complex.as_ref().ok_or("no complex")?).map_err(|e| e.to_string())?;
    let groups: Vec<String> = h.iter().map(ToString::to_string).collect();
    ensure(groups == ["ℤ", "ℤ", "0"], || format!("homology {groups:?}"))?;
    ensure(signatures(&a) == set(&["{⟨3|1⟩}", "{⟨4|1⟩}"]), || format!("classes {:?}", signatures(&a)))?;
    let b = bond(&a, &["{⟨3|1⟩}", "{⟨4|1⟩}"]);
    ensure(b.as_ref().is_some_and(|b| b.0 == ["1→2"] && b.2 == 2), || format!("B12 {b:?}"))?;
    let o1 = class(&a, "{⟨3|1⟩}").map(|c| c.orientation);
    let o2 = class(&a, "{⟨4|1⟩}").map(|c| c.orientation);
    ensure(o1 == Some(Orientation::Preserving) && o2 == Some(Orientation::Reversing), || format!("orientations {o1:?} {o2:?}"))
}

fn lorenz() -> Check {
    let (t, a) = analysis("lorenz")?;
    let h = homology::homology(t.complex.as_ref().ok_or("no complex")?).map_err(|e| e.to_string())?;
    ensure(h[1].betti == 2 && h[1].torsion.is_empty(), || format!("H1 = {}", h[1]))?;
    let (g1, g2, g3) = ("{⟨3|1⟩}", "{⟨7|5⟩}", "{⟨4|5⟩, ⟨8|1⟩}");
    ensure(signatures(&a) == set(&[g1, g2, g3]), || format!("classes {:?}", signatures(&a)))?;
    let b13 = bond(&a, &[g1, g3]);
    let b23 = bond(&a, &[g2, g3]);
    ensure(b13.as_ref().is_some_and(|b| b.0 == ["1→2"] && b.2 == 2), || format!("B13 {b13:?}"))?;
    ensure(b23.as_ref().is_some_and(|b| b.0 == ["5→6"] && b.2 == 2), || format!("B23 {b23:?}"))?;
    ensure(bond(&a, &[g1, g2]).is_none(), || "G1∩G2 bond present".into())?;
    ensure(a.classes.iter().all(|c| c.orientation == Orientation::Preserving), || "a reversing class".into())?;
    let c = class(&a, g3).ok_or("no G3")?;
    ensure(c.order == 2 && c.stripexes.len() == 2, || format!("G3 order {} stripexes {}", c.order, c.stripexes.len()))
}

fn speech() -> Check {
    let (_, a) = analysis("speech")?;
    let cycles: BTreeSet<String> = a.classes.iter().filter_map(|c| c.representative.path_from("7")).map(|p| p.to_string()).collect();
    let want = set(&[
        "7→17→9→18→20→21→15→16→7",
        "7→17→9→10→11→13→14→15→16→7",
        "7→17→9→22→23→25→19→12→1→2→3→4→5→6→7",
    ]);
    ensure(cycles == want, || format!("cycles {cycles:?}"))?;
    let (g1, g2, g3) = ("{⟨16|7⟩, ⟨21|15⟩}", "{⟨14|15⟩, ⟨16|7⟩}", "{⟨6|7⟩}");
    ensure(signatures(&a) == set(&[g1, g2, g3]), || format!("P-images {:?}", signatures(&a)))?;
    let b123 = bond(&a, &[g1, g2, g3]);
    ensure(b123.as_ref().is_some_and(|b| b.0 == ["7→17→9"] && b.2 == 3), || format!("B123 {b123:?}"))?;
    let b12 = bond(&a, &[g1, g2]);
    ensure(b12.as_ref().is_some_and(|b| b.1 == ["15→16→7"] && b.2 == 2), || format!("B12 {b12:?}"))?;
    ensure(a.classes.iter().all(|c| c.orientation == Orientation::Unknown), || "orientation known".into())
}

fn gyre() -> Check {
    let (_, a) = analysis("gyre")?;
    let sigs: Vec<String> = ["4", "22", "13", "8", "11", "16"].iter().map(|x| format!("{{⟨{x}|1⟩}}")).collect();
    let refs: Vec<&str> = sigs.iter().map(String::as_str).collect();
    ensure(signatures(&a) == set(&refs), || format!("P-images {:?}", signatures(&a)))?;
    let all = bond(&a, &refs);
    ensure(all.as_ref().is_some_and(|b| b.0 == ["1→2→3"] && b.2 == 6), || format!("B123456 {all:?}"))?;
    let five = bond(&a, &refs[1..]);
    ensure(five.as_ref().is_some_and(|b| b.0 == ["1→2→3→5→6"] && b.2 == 5), || format!("B23456 {five:?}"))
}

fn simulated(system: System, name: &str) -> Result<(GeneratexAnalysis, TmvDecomposition), String> {
    let cfg = SimulationConfig { sample_every: 2, ..SimulationConfig::new(system, 2000.0, 0.01) };
    let traj = ingest::simulate(&cfg).map_err(|e| e.to_string())?;
    let cells = match system {
        System::Rossler { .. } => ingest::rossler_partition(&traj),
        System::Lorenz { .. } => ingest::lorenz_partition(&traj),
    }
    .map_err(|e| e.to_string())?;
    let (t, a) = analysis(name)?;
    let itinerary = cells.to_itinerary().map_err(|e| e.to_string())?;
    let d = label_trajectory(&itinerary, &t.digraph, &a.classes, &a.poincare_edges).map_err(|e| e.to_string())?;
    Ok((a, d))
}

fn end_to_end() -> Check {
    let start = Instant::now();
    let (ra, rd) = simulated(System::rossler(), "rossler")?;
    let (la, ld) = simulated(System::lorenz(), "lorenz")?;
    ensure(ra.classes.len() == 2 && la.classes.len() == 3, || format!("classes {} / {}", ra.classes.len(), la.classes.len()))?;

    let idx = |a: &GeneratexAnalysis, sig: &str| class(a, sig).map(|c| c.index).ok_or(format!("no class {sig}"));
    let (l1, l2, l3) = (idx(&la, "{⟨3|1⟩}")?, idx(&la, "{⟨7|5⟩}")?, idx(&la, "{⟨4|5⟩, ⟨8|1⟩}")?);
    let direct = ld.sigma.windows(2).filter(|w| (w[0], w[1]) == (l1, l2) || (w[0], w[1]) == (l2, l1)).count();
    ensure(direct == 0, || format!("{direct} direct G1↔G2 transitions"))?;
    let counts = tmv::sigma_counts(&ld);
    let n = |c: usize| counts.get(&c).copied().unwrap_or(0) as i64;
    ensure((n(l3) - n(l1) - n(l2)).abs() <= 2, || format!("count(G3)={} count(G1)={} count(G2)={}", n(l3), n(l1), n(l2)))?;

    let stats = tmv::tmv_stats(&rd);
    let (r1, r2) = (idx(&ra, "{⟨3|1⟩}")?, idx(&ra, "{⟨4|1⟩}")?);
    let ratio = stats.mean(r1) / stats.mean(r2);
    ensure((2.0..=4.0).contains(&ratio), || format!("mean residence ratio {ratio:.3}"))?;
    let elapsed = start.elapsed().as_secs_f64();
    ensure(elapsed <= 60.0, || format!("runtime {elapsed:.1} s"))
}

fn properties() -> Check {
    let mut complexes: Vec<_> = fixtures::SURFACES.iter().map(|n| fixtures::surface(n).unwrap()).collect();
    complexes.extend(fixtures::TEMPLEXES.iter().filter_map(|n| fixtures::templex(n).unwrap().complex));
    for k in &complexes {
        for i in 2..=k.dimension() {
            let dd = k.boundary_matrix(i - 1).and_then(|a| a.checked_mul(&k.boundary_matrix(i)?)).map_err(|e| e.to_string())?;
            ensure(dd.is_zero(), || "∂∂ ≠ 0".into())?;
        }
    }

    // SNF identities on 200 pseudo-random matrices
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for _ in 0..200 {
        let (r, c) = (1 + (next() % 5) as usize, 1 + (next() % 5) as usize);
        let data: Vec<i64> = (0..r * c).map(|_| (next() % 11) as i64 - 5).collect();
        let m = IntMatrix::from_vec(r, c, data);
        let s = smith_normal_form(&m).map_err(|e| e.to_string())?;
        let d = s.u.checked_mul(&m).and_then(|x| x.checked_mul(&s.v)).map_err(|e| e.to_string())?;
        ensure(d == s.d, || format!("UMV ≠ D for {m}"))?;
        let f = s.invariant_factors();
        ensure(f.windows(2).all(|w| w[1] % w[0] == 0), || format!("factors {f:?}"))?;
    }

    // subdivision and relabeling on the first three splittable complexes
    let mut subdivided = 0;
    for k in &complexes {
        let Some(cell) = k.cells(k.dimension().min(2)).iter().find(|c| k.subdivide_cell(c.dim, &c.id).is_ok()) else { continue };
        let s = k.subdivide_cell(cell.dim, &cell.id).map_err(|e| e.to_string())?;
        let r = s.relabel(&|d, l| format!("{d}/{l}")).map_err(|e| e.to_string())?;
        let sig = |x| homology::homology(x).map(|h| h.iter().map(ToString::to_string).collect::<Vec<_>>());
        ensure(sig(k).ok() == sig(&r).ok(), || "homology changed under subdivision".into())?;
        subdivided += 1;
        if subdivided == 3 {
            break;
        }
    }
    ensure(subdivided == 3, || format!("only {subdivided} fixtures subdivided"))?;
    for name in fixtures::TEMPLEXES {
        let (t, a) = analysis(name)?;
        let node = t.digraph.label(0).to_string();
        let g = t.digraph.subdivide_node(&node).map_err(|e| e.to_string())?;
        let opts = GenexOptions { mode: templex::PoincareMode::Digraph, ..GenexOptions::default() };
        let before = genex::analyze(&Templex::digraph_only(t.digraph.clone()), &opts).map_err(|e| e.to_string())?;
        let after = genex::analyze(&Templex::digraph_only(g), &opts).map_err(|e| e.to_string())?;
        ensure(before.classes.len() == after.classes.len(), || format!("{name}: class count changed"))?;

        // P of a concatenation is the concatenation of the images
        for c in &a.classes {
            let p = c.representative.to_path();
            let nodes = p.nodes();
            let mid = nodes.len() / 2;
            let (x, y) = (DirectedPath::new(nodes[..=mid].to_vec()), DirectedPath::new(nodes[mid..].to_vec()));
            if let (Ok(x), Ok(y)) = (x, y) {
                let whole = genex::p_image(&p, &a.poincare_edges);
                let parts = genex::p_image(&x, &a.poincare_edges).concat(&genex::p_image(&y, &a.poincare_edges));
                ensure(whole == parts, || format!("{name}: P not compatible with concat"))?;
            }
        }
    }

    // tiling of the gyre decomposition
    let (t, a) = analysis("gyre")?;
    let it = fixtures::gyre_itinerary();
    let d = label_trajectory(&it, &t.digraph, &a.classes, &a.poincare_edges).map_err(|e| e.to_string())?;
    let (t0, t1) = it.span().ok_or("empty itinerary")?;
    let tiles = d.intervals.first().map(|i| i.start) == Some(t0)
        && d.intervals.last().map(|i| i.end) == Some(t1)
        && d.intervals.windows(2).all(|w| w[0].end == w[1].start && w[0].class != w[1].class);
    ensure(tiles, || "gyre intervals do not tile".into())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 7] = [
        ("1 Table I surfaces", table_one),
        ("2 Rössler templex", rossler),
        ("3 Lorenz templex", lorenz),
        ("4 speech templex", speech),
        ("5 gyre templex", gyre),
        ("6 end-to-end Rössler/Lorenz", end_to_end),
        ("7 property spot checks", properties),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(()) => println!("PASS criterion {name}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
