//! One report, two renderings: plain text and JSON.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::genex::{self, GeneratexAnalysis, GenexOptions};
use crate::homology;
use crate::templex::Templex;
use crate::tmv::{self, TmvDecomposition};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomologyRow {
    pub k: usize,
    pub betti: usize,
    pub torsion: Vec<i64>,
    pub group: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocusSummary {
    pub cells: Vec<String>,
    pub kind: String,
    pub ingoing: Vec<String>,
    pub outgoing: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub name: String,
    pub cycle: String,
    pub signature: String,
    pub order: usize,
    pub members: usize,
    pub stripexes: Vec<String>,
    pub orientation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BondSummary {
    pub name: String,
    pub shared: Vec<String>,
    pub exclusive: Vec<String>,
    pub valence: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassTime {
    pub class: String,
    pub visits: usize,
    pub total: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TmvSummary {
    pub span: (f64, f64),
    pub intervals: usize,
    pub per_class: Vec<ClassTime>,
    /// Row `i`, column `j`: segments labelled G(i+1) followed by G(j+1).
    pub transitions: Vec<Vec<usize>>,
    pub repaired_jumps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub nodes: usize,
    pub edges: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homology: Option<Vec<HomologyRow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientable: Option<bool>,
    pub detection: String,
    pub loci: Vec<LocusSummary>,
    pub poincare_edges: Vec<String>,
    pub classes: Vec<ClassSummary>,
    pub bonds: Vec<BondSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tmv: Option<TmvSummary>,
    pub warnings: Vec<String>,
}

fn chains(paths: Vec<genex::DirectedPath>) -> Vec<String> {
    paths.iter().map(ToString::to_string).collect()
}

impl AnalysisReport {
    pub fn build(templex: &Templex, analysis: &GeneratexAnalysis) -> Result<Self> {
        let (homology, orientable) = match &templex.complex {
            Some(k) => {
                let rows = homology::homology(k)?
                    .iter()
                    .map(|g| HomologyRow { k: g.k, betti: g.betti, torsion: g.torsion.clone(), group: g.to_string() })
                    .collect();
                (Some(rows), Some(homology::betti_table(k)?.orientable))
            }
            None => (None, None),
        };
        let name = templex
            .metadata
            .as_ref()
            .and_then(|m| m.get("name"))
            .and_then(|v| v.as_str())
            .map(str::to_string);
        Ok(AnalysisReport {
            name,
            nodes: templex.digraph.len(),
            edges: templex.digraph.edges().len(),
            homology,
            orientable,
            detection: analysis.detection.clone(),
            loci: analysis
                .loci
                .iter()
                .map(|l| LocusSummary {
                    cells: l.cells.iter().map(ToString::to_string).collect(),
                    kind: l.kind.to_string(),
                    ingoing: l.ingoing.clone(),
                    outgoing: l.outgoing.clone(),
                })
                .collect(),
            poincare_edges: analysis.poincare_edges.iter().map(ToString::to_string).collect(),
            classes: analysis
                .classes
                .iter()
                .map(|c| ClassSummary {
                    name: c.name(),
                    cycle: c.representative.to_string(),
                    signature: c.signature.to_string(),
                    order: c.order,
                    members: c.members.len(),
                    stripexes: c.stripexes.iter().map(ToString::to_string).collect(),
                    orientation: c.orientation.to_string(),
                    witness: c.orientation_witness.clone(),
                })
                .collect(),
            bonds: analysis
                .bonds
                .iter()
                .map(|b| BondSummary {
                    name: b.name(),
                    shared: chains(b.shared_chains()),
                    exclusive: chains(b.exclusive_chains()),
                    valence: b.valence,
                })
                .collect(),
            tmv: None,
            warnings: analysis.warnings.clone(),
        })
    }

    /// Runs the generatex analysis and builds the report from it.
    pub fn analyze(templex: &Templex, opts: &GenexOptions) -> Result<Self> {
        Self::build(templex, &genex::analyze(templex, opts)?)
    }

    pub fn with_tmv(mut self, d: &TmvDecomposition) -> Self {
        let stats = tmv::tmv_stats(d);
        self.tmv = Some(TmvSummary {
            span: (d.t0, d.t_end),
            intervals: d.intervals.len(),
            per_class: stats
                .per_class
                .iter()
                .map(|(&k, s)| ClassTime { class: format!("G{k}"), visits: s.visits, total: s.total, mean: s.mean })
                .collect(),
            transitions: tmv::transition_matrix(d),
            repaired_jumps: d.repaired_jumps,
        });
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = &self.name {
            writeln!(f, "{name}")?;
        }
        writeln!(f, "digraph: {} nodes, {} edges", self.nodes, self.edges)?;
        if let Some(rows) = &self.homology {
            writeln!(f, "homology:")?;
            for r in rows {
                writeln!(f, "  H{} = {}", r.k, r.group)?;
            }
        }
        if let Some(o) = self.orientable {
            writeln!(f, "orientable: {}", if o { "yes" } else { "no" })?;
        }
        for l in &self.loci {
            writeln!(
                f,
                "locus {{{}}} {}: in {{{}}} out {{{}}}",
                l.cells.join(", "),
                l.kind,
                l.ingoing.join(", "),
                l.outgoing.join(", ")
            )?;
        }
        writeln!(f, "Poincaré edges ({}): {}", self.detection, self.poincare_edges.join(" "))?;
        writeln!(f, "classes:")?;
        for c in &self.classes {
            write!(f, "  {}: {}  P = {}  order {}  {}", c.name, c.cycle, c.signature, c.order, c.orientation)?;
            if c.members > 1 {
                write!(f, "  ({} cycles)", c.members)?;
            }
            if let Some(w) = &c.witness {
                write!(f, "  witness {w}")?;
            }
            writeln!(f)?;
            if c.stripexes.len() > 1 {
                writeln!(f, "    stripexes: {}", c.stripexes.join(", "))?;
            }
        }
        if !self.bonds.is_empty() {
            writeln!(f, "bonds:")?;
            for b in &self.bonds {
                write!(f, "  {} = {{{}}}", b.name, b.shared.join(", "))?;
                if b.exclusive != b.shared {
                    write!(f, " (exclusive {{{}}})", b.exclusive.join(", "))?;
                }
                writeln!(f, ", valence {}", b.valence)?;
            }
        }
        if let Some(t) = &self.tmv {
            writeln!(f, "time-ordered decomposition over [{}, {}]: {} intervals", t.span.0, t.span.1, t.intervals)?;
            for c in &t.per_class {
                writeln!(f, "  {}: {} visits, total {:.3}, mean {:.3}", c.class, c.visits, c.total, c.mean)?;
            }
            writeln!(f, "  transitions:")?;
            for row in &t.transitions {
                let cells: Vec<String> = row.iter().map(|n| format!("{n:>5}")).collect();
                writeln!(f, "  {}", cells.join(""))?;
            }
            if t.repaired_jumps > 0 {
                writeln!(f, "  repaired jumps: {}", t.repaired_jumps)?;
            }
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}
