//! Bundled fixtures and the named checks run against them.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cellcomplex::CellComplex;
use crate::error::{Error, Result};
use crate::genex::{self, GeneratexAnalysis, GenexOptions, Orientation};
use crate::homology;
use crate::templex::Templex;
use crate::tmv::{self, Itinerary};

pub const TEMPLEXES: [&str; 4] = ["rossler", "lorenz", "speech", "gyre"];
pub const SURFACES: [&str; 5] = ["sphere", "cylinder", "mobius", "torus", "klein"];

pub fn embedded(name: &str) -> Option<&'static str> {
    Some(match name {
        "rossler" => include_str!("../../../fixtures/rossler.json"),
        "lorenz" => include_str!("../../../fixtures/lorenz.json"),
        "speech" => include_str!("../../../fixtures/speech.json"),
        "gyre" => include_str!("../../../fixtures/gyre.json"),
        "sphere" => include_str!("../../../fixtures/sphere.json"),
        "cylinder" => include_str!("../../../fixtures/cylinder.json"),
        "mobius" => include_str!("../../../fixtures/mobius.json"),
        "torus" => include_str!("../../../fixtures/torus.json"),
        "klein" => include_str!("../../../fixtures/klein.json"),
        _ => return None,
    })
}

fn source(name: &str, dir: Option<&Path>) -> Result<String> {
    match dir {
        Some(d) => Ok(std::fs::read_to_string(d.join(format!("{name}.json")))?),
        None => embedded(name).map(str::to_string).ok_or_else(|| Error::Io(format!("no fixture named {name}"))),
    }
}

pub fn templex(name: &str) -> Result<Templex> {
    Templex::from_json_str(embedded(name).ok_or_else(|| Error::Io(format!("no fixture named {name}")))?)
}

pub fn surface(name: &str) -> Result<CellComplex> {
    CellComplex::from_json_str(embedded(name).ok_or_else(|| Error::Io(format!("no fixture named {name}")))?)
}

/// The loop through node 1 whose Poincaré edge leaves `exit`.
fn gyre_loop(exit: u32) -> Vec<u32> {
    let tail: &[u32] = match exit {
        4 => return vec![1, 2, 3, 4],
        8 => &[7, 8],
        11 => &[9, 10, 11],
        13 => &[12, 13],
        16 => &[14, 15, 16],
        22 => &[17, 18, 19, 20, 21, 22],
        _ => unreachable!("not a gyre exit"),
    };
    [1, 2, 3, 5, 6].iter().chain(tail).copied().collect()
}

/// A 300-year itinerary on the gyre digraph, half a year per node. Loops are
/// named by the node feeding back into 1. Until year 150 only the 22, 13 and
/// 8 loops run; from then on 4 and 11 join, and 16 joins from year 275.
/// Every running loop recurs within a few decades.
pub fn gyre_itinerary() -> Itinerary {
    const STEP: f64 = 0.5;
    let mut samples = Vec::new();
    let mut t = 0.0;
    let mut turn = 0;
    let mut phase = 0;
    while t < 300.0 {
        let next_phase = if t >= 275.0 { 2 } else if t >= 150.0 { 1 } else { 0 };
        if next_phase != phase {
            phase = next_phase;
            turn = 0;
        }
        let rotation: &[u32] = match phase {
            0 => &[22, 13, 8],
            1 => &[4, 11, 22, 13, 8],
            _ => &[16, 4, 11, 22, 13, 8],
        };
        for node in gyre_loop(rotation[turn % rotation.len()]) {
            samples.push((t, node.to_string()));
            t += STEP;
        }
        turn += 1;
    }
    samples.push((t, "1".to_string()));
    Itinerary::new(samples).expect("times increase")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Mismatches, one per line, when failed.
    pub detail: String,
}

#[derive(Default)]
struct Diff(Vec<String>);

impl Diff {
    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, got: T, want: T) {
        if got != want {
            self.0.push(format!("{what}: expected {want:?}, got {got:?}"));
        }
    }

    fn into_result(self) -> std::result::Result<(), String> {
        if self.0.is_empty() { Ok(()) } else { Err(self.0.join("\n")) }
    }
}

type Outcome = std::result::Result<(), String>;

fn analysis(t: &Templex) -> std::result::Result<GeneratexAnalysis, String> {
    genex::analyze(t, &GenexOptions::default()).map_err(|e| e.to_string())
}

fn signature_set(a: &GeneratexAnalysis) -> BTreeSet<String> {
    a.classes.iter().map(|c| c.signature.to_string()).collect()
}

fn class_index(a: &GeneratexAnalysis, sig: &[(&str, &str)]) -> Option<usize> {
    a.class_by_signature(sig).map(|c| c.index)
}

/// Bond on the classes with the given signatures, as (shared chains, valence).
fn bond_on(a: &GeneratexAnalysis, sigs: &[&[(&str, &str)]]) -> Option<(Vec<String>, Vec<String>, usize)> {
    let mut idx: Vec<usize> = sigs.iter().map(|s| class_index(a, s)).collect::<Option<_>>()?;
    idx.sort_unstable();
    a.bonds.iter().find(|b| b.index_set == idx).map(|b| {
        let show = |p: Vec<genex::DirectedPath>| p.iter().map(ToString::to_string).collect();
        (show(b.shared_chains()), show(b.exclusive_chains()), b.valence)
    })
}

fn check_surface(name: &str, text: &str) -> Outcome {
    let k = CellComplex::from_json_str(text).map_err(|e| e.to_string())?;
    let t = homology::betti_table(&k).map_err(|e| e.to_string())?;
    let (betti, orientable): (Vec<usize>, bool) = match name {
        "sphere" => (vec![1, 0, 1], true),
        "cylinder" => (vec![1, 1, 0], true),
        "mobius" => (vec![1, 1, 0], false),
        "torus" => (vec![1, 2, 1], true),
        "klein" => (vec![1, 1, 0], false),
        _ => unreachable!(),
    };
    let mut d = Diff::default();
    d.eq("betti", t.betti.clone(), betti);
    d.eq("orientable", t.orientable, orientable);
    let torsion_h1 = t.torsion.get(1).cloned().unwrap_or_default();
    d.eq("H1 torsion", torsion_h1, if name == "klein" { vec![2] } else { vec![] });
    d.into_result()
}

fn check_rossler(text: &str) -> Outcome {
    let t = Templex::from_json_str(text).map_err(|e| e.to_string())?;
    let mut d = Diff::default();
    let h = homology::homology(t.complex.as_ref().ok_or("no complex")?).map_err(|e| e.to_string())?;
    d.eq("betti", h.iter().map(|g| g.betti).collect::<Vec<_>>(), vec![1, 1, 0]);
    d.eq("torsion", h.iter().all(|g| g.torsion.is_empty()), true);
    let a = analysis(&t)?;
    d.eq("classes", signature_set(&a), ["{⟨3|1⟩}", "{⟨4|1⟩}"].map(String::from).into());
    d.eq("bonds", a.bonds.len(), 1);
    d.eq("B12", bond_on(&a, &[&[("3", "1")], &[("4", "1")]]).map(|b| (b.0, b.2)), Some((vec!["1→2".into()], 2)));
    let orient = |sig: &[(&str, &str)]| a.class_by_signature(sig).map(|c| c.orientation);
    d.eq("orientation ⟨3|1⟩", orient(&[("3", "1")]), Some(Orientation::Preserving));
    d.eq("orientation ⟨4|1⟩", orient(&[("4", "1")]), Some(Orientation::Reversing));
    d.into_result()
}

fn check_lorenz(text: &str) -> Outcome {
    let t = Templex::from_json_str(text).map_err(|e| e.to_string())?;
    let mut d = Diff::default();
    let h = homology::homology(t.complex.as_ref().ok_or("no complex")?).map_err(|e| e.to_string())?;
    d.eq("H1", h.get(1).map(|g| (g.betti, g.torsion.clone())), Some((2, vec![])));
    let a = analysis(&t)?;
    d.eq("classes", signature_set(&a), ["{⟨3|1⟩}", "{⟨7|5⟩}", "{⟨4|5⟩, ⟨8|1⟩}"].map(String::from).into());
    let g1: &[(&str, &str)] = &[("3", "1")];
    let g2: &[(&str, &str)] = &[("7", "5")];
    let g3: &[(&str, &str)] = &[("4", "5"), ("8", "1")];
    d.eq("B13", bond_on(&a, &[g1, g3]).map(|b| (b.0, b.2)), Some((vec!["1→2".into()], 2)));
    d.eq("B23", bond_on(&a, &[g2, g3]).map(|b| (b.0, b.2)), Some((vec!["5→6".into()], 2)));
    d.eq("G1∩G2 bond", bond_on(&a, &[g1, g2]).is_some(), false);
    d.eq("bonds", a.bonds.len(), 2);
    d.eq(
        "orientations",
        a.classes.iter().map(|c| c.orientation).collect::<Vec<_>>(),
        vec![Orientation::Preserving; a.classes.len()],
    );
    let g = a.class_by_signature(g3);
    d.eq("G3 order", g.map(|c| c.order), Some(2));
    d.eq("G3 stripexes", g.map(|c| c.stripexes.len()), Some(2));
    d.into_result()
}

fn check_speech(text: &str) -> Outcome {
    let t = Templex::from_json_str(text).map_err(|e| e.to_string())?;
    let mut d = Diff::default();
    let a = analysis(&t)?;
    let cycles: BTreeSet<String> = a.classes.iter().map(|c| c.representative.path_from("7").map_or_else(|| c.representative.to_string(), |p| p.to_string())).collect();
    d.eq(
        "cycles",
        cycles,
        [
            "7→17→9→18→20→21→15→16→7",
            "7→17→9→10→11→13→14→15→16→7",
            "7→17→9→22→23→25→19→12→1→2→3→4→5→6→7",
        ]
        .map(String::from)
        .into(),
    );
    d.eq(
        "P-images",
        signature_set(&a),
        ["{⟨16|7⟩, ⟨21|15⟩}", "{⟨14|15⟩, ⟨16|7⟩}", "{⟨6|7⟩}"].map(String::from).into(),
    );
    let g1: &[(&str, &str)] = &[("21", "15"), ("16", "7")];
    let g2: &[(&str, &str)] = &[("14", "15"), ("16", "7")];
    let g3: &[(&str, &str)] = &[("6", "7")];
    d.eq("B123", bond_on(&a, &[g1, g2, g3]).map(|b| (b.0, b.2)), Some((vec!["7→17→9".into()], 3)));
    d.eq("B12", bond_on(&a, &[g1, g2]).map(|b| (b.1, b.2)), Some((vec!["15→16→7".into()], 2)));
    d.eq(
        "orientations",
        a.classes.iter().map(|c| c.orientation).collect::<Vec<_>>(),
        vec![Orientation::Unknown; a.classes.len()],
    );
    d.into_result()
}

const GYRE_EXITS: [&str; 6] = ["4", "22", "13", "8", "11", "16"];

fn check_gyre(text: &str) -> Outcome {
    let t = Templex::from_json_str(text).map_err(|e| e.to_string())?;
    let mut d = Diff::default();
    let a = analysis(&t)?;
    d.eq("classes", signature_set(&a), GYRE_EXITS.iter().map(|x| format!("{{⟨{x}|1⟩}}")).collect());
    let sig = |x: &'static str| -> Vec<(&'static str, &'static str)> { vec![(x, "1")] };
    let all: Vec<Vec<_>> = GYRE_EXITS.iter().map(|x| sig(x)).collect();
    let refs: Vec<&[(&str, &str)]> = all.iter().map(Vec::as_slice).collect();
    d.eq("B123456", bond_on(&a, &refs).map(|b| (b.0, b.2)), Some((vec!["1→2→3".into()], 6)));
    d.eq("B23456", bond_on(&a, &refs[1..]).map(|b| (b.0, b.2)), Some((vec!["1→2→3→5→6".into()], 5)));
    d.into_result()
}

fn check_gyre_tipping(text: &str) -> Outcome {
    let t = Templex::from_json_str(text).map_err(|e| e.to_string())?;
    let a = analysis(&t)?;
    let decomposition = tmv::label_trajectory(&gyre_itinerary(), &t.digraph, &a.classes, &a.poincare_edges)
        .map_err(|e| e.to_string())?;
    let timeline = tmv::tipping_timeline(&decomposition, 50.0, 10.0).map_err(|e| e.to_string())?;
    let by_exit = |xs: &[&str]| -> BTreeSet<usize> { xs.iter().filter_map(|x| class_index(&a, &[(x, "1")])).collect() };
    let mut d = Diff::default();
    d.eq("events", timeline.events.len(), 2);
    if let [first, second] = &timeline.events[..] {
        d.eq("first event sizes", (first.before.len(), first.after.len()), (3, 5));
        d.eq("first event classes", first.appeared().into_iter().collect(), by_exit(&["4", "11"]));
        d.eq("first event time", (100.0..=150.0).contains(&first.time), true);
        d.eq("second event sizes", (second.before.len(), second.after.len()), (5, 6));
        d.eq("second event classes", second.appeared().into_iter().collect(), by_exit(&["16"]));
        d.eq("second event time", (220.0..=280.0).contains(&second.time), true);
    }
    d.into_result()
}

pub const CHECKS: [&str; 10] = [
    "table1-sphere",
    "table1-cylinder",
    "table1-mobius",
    "table1-torus",
    "table1-klein",
    "rossler",
    "lorenz",
    "speech",
    "gyre",
    "gyre-tipping",
];

/// Runs every check whose name contains `filter`, reading fixtures from `dir`
/// when given and from the bundled copies otherwise. Unreadable fixtures fail
/// their checks.
pub fn run_checks(filter: Option<&str>, dir: Option<&Path>) -> Vec<CheckResult> {
    CHECKS
        .iter()
        .filter(|name| filter.is_none_or(|f| name.contains(f)))
        .map(|&name| {
            let fixture = name.strip_prefix("table1-").unwrap_or(name).trim_end_matches("-tipping");
            let outcome = source(fixture, dir).map_err(|e| e.to_string()).and_then(|text| match name {
                "rossler" => check_rossler(&text),
                "lorenz" => check_lorenz(&text),
                "speech" => check_speech(&text),
                "gyre" => check_gyre(&text),
                "gyre-tipping" => check_gyre_tipping(&text),
                _ => check_surface(fixture, &text),
            });
            CheckResult {
                name: name.to_string(),
                passed: outcome.is_ok(),
                detail: outcome.err().unwrap_or_default(),
            }
        })
        .collect()
}
