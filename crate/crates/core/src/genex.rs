//! The directed path algebra of a templex.
//!
//! Directed paths form a semigroup under concatenation. The Poincaré-edge
//! operator contracts a path onto the merge edges it crosses; directed
//! cycles with the same (cyclic) image form a generatex class. Classes carry
//! an order, a stripex decomposition and an orientation class, and overlap
//! along bonds.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use serde::{Deserialize, Serialize};

use crate::cellcomplex::CellId;
use crate::error::{Error, Result};
use crate::homology::orientability_report;
use crate::label::{label_cmp, seq_cmp};
use crate::par::{self, Exec};
use crate::templex::{Digraph, JunctionLocus, PoincareEdge, PoincareMode, Templex};

pub const DEFAULT_CYCLE_CAP: usize = 10_000;
/// Environment variable overriding the cycle cap.
pub const CYCLE_CAP_ENV: &str = "TEMPLEX_CYCLE_CAP";

/// A directed path `n0 → n1 → … → nm` with at least one edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DirectedPath {
    nodes: Vec<String>,
}

impl DirectedPath {
    pub fn new<S: Into<String>>(nodes: impl IntoIterator<Item = S>) -> Result<Self> {
        let nodes: Vec<String> = nodes.into_iter().map(Into::into).collect();
        if nodes.len() < 2 {
            return Err(Error::EmptyPath);
        }
        Ok(DirectedPath { nodes })
    }

    /// A path whose every step is an edge of `g`.
    pub fn in_digraph<S: Into<String>>(g: &Digraph, nodes: impl IntoIterator<Item = S>) -> Result<Self> {
        let p = Self::new(nodes)?;
        for (a, b) in p.steps() {
            if !g.has_edge(a, b) {
                return Err(Error::MissingEdge(a.to_string(), b.to_string()));
            }
        }
        Ok(p)
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn first(&self) -> &str {
        &self.nodes[0]
    }

    pub fn last(&self) -> &str {
        self.nodes.last().expect("nonempty path")
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_closed(&self) -> bool {
        self.first() == self.last()
    }

    pub fn steps(&self) -> impl Iterator<Item = (&str, &str)> {
        self.nodes.windows(2).map(|w| (w[0].as_str(), w[1].as_str()))
    }

    pub fn concat(&self, other: &DirectedPath) -> Result<DirectedPath> {
        concat(self, other)
    }
}

impl fmt::Display for DirectedPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.nodes.join("→"))
    }
}

/// `p·q`, defined only when `p` ends where `q` starts.
pub fn concat(p: &DirectedPath, q: &DirectedPath) -> Result<DirectedPath> {
    if p.last() != q.first() {
        return Err(Error::NotComposable { tail: p.last().to_string(), head: q.first().to_string() });
    }
    let mut nodes = p.nodes.clone();
    nodes.extend_from_slice(&q.nodes[1..]);
    Ok(DirectedPath { nodes })
}

/// Rotation index of the lexicographically least rotation.
fn min_rotation<T>(items: &[T], cmp: impl Fn(&T, &T) -> std::cmp::Ordering) -> usize {
    let n = items.len();
    (0..n)
        .min_by(|&a, &b| {
            (0..n)
                .map(|k| cmp(&items[(a + k) % n], &items[(b + k) % n]))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap_or(0)
}

/// A closed directed path, stored once round (no repeated start) in its
/// lexicographically least rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DirectedCycle {
    nodes: Vec<String>,
}

impl DirectedCycle {
    /// From the node sequence of one turn, with or without the closing repeat.
    pub fn new<S: Into<String>>(nodes: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut nodes: Vec<String> = nodes.into_iter().map(Into::into).collect();
        if nodes.len() >= 2 && nodes.first() == nodes.last() {
            nodes.pop();
        }
        if nodes.is_empty() {
            return Err(Error::EmptyPath);
        }
        let r = min_rotation(&nodes, |a, b| label_cmp(a, b));
        nodes.rotate_left(r);
        Ok(DirectedCycle { nodes })
    }

    pub fn from_path(p: &DirectedPath) -> Result<Self> {
        if !p.is_closed() {
            return Err(Error::NotComposable { tail: p.last().to_string(), head: p.first().to_string() });
        }
        Self::new(p.nodes.iter().cloned())
    }

    /// Nodes of one turn, starting at the canonical start.
    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    /// Number of edges (= number of node visits).
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_elementary(&self) -> bool {
        let set: HashSet<&String> = self.nodes.iter().collect();
        set.len() == self.nodes.len()
    }

    pub fn steps(&self) -> impl Iterator<Item = (&str, &str)> {
        let n = self.nodes.len();
        (0..n).map(move |i| (self.nodes[i].as_str(), self.nodes[(i + 1) % n].as_str()))
    }

    pub fn edge_set(&self) -> BTreeSet<(String, String)> {
        self.steps().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    /// The cycle as a closed path from its canonical start.
    pub fn to_path(&self) -> DirectedPath {
        let mut nodes = self.nodes.clone();
        nodes.push(self.nodes[0].clone());
        DirectedPath { nodes }
    }

    /// The cycle as a closed path starting at `node`.
    pub fn path_from(&self, node: &str) -> Option<DirectedPath> {
        let at = self.nodes.iter().position(|n| n == node)?;
        let mut nodes = self.nodes.clone();
        nodes.rotate_left(at);
        nodes.push(nodes[0].clone());
        Some(DirectedPath { nodes })
    }

    fn order_key(a: &Self, b: &Self) -> std::cmp::Ordering {
        a.len().cmp(&b.len()).then_with(|| seq_cmp(&a.nodes, &b.nodes))
    }
}

impl fmt::Display for DirectedCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_path())
    }
}

/// Ordered list of Poincaré edges crossed by a path; cyclic for cycles.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PSignature {
    pub edges: Vec<PoincareEdge>,
    pub cyclic: bool,
}

impl PSignature {
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    /// Rotates a cyclic signature to its least rotation under the
    /// (ingoing, outgoing) natural order.
    pub fn canonical(mut self) -> Self {
        if self.cyclic {
            let r = min_rotation(&self.edges, |a, b| a.cmp(b));
            self.edges.rotate_left(r);
        }
        self
    }

    /// Signature of a concatenated path.
    pub fn concat(&self, other: &PSignature) -> PSignature {
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().cloned());
        PSignature { edges, cyclic: false }
    }

    /// Number of distinct ingoing nodes.
    pub fn order(&self) -> usize {
        self.edges.iter().map(|e| e.ingoing.as_str()).collect::<HashSet<_>>().len()
    }
}

impl fmt::Display for PSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.edges.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn edge_lookup(edges: &[PoincareEdge]) -> HashSet<(&str, &str)> {
    edges.iter().map(|e| (e.ingoing.as_str(), e.outgoing.as_str())).collect()
}

/// Poincaré edges traversed by `path`, in traversal order.
pub fn p_image(path: &DirectedPath, edges: &[PoincareEdge]) -> PSignature {
    let lookup = edge_lookup(edges);
    PSignature {
        edges: path.steps().filter(|s| lookup.contains(s)).map(|(a, b)| PoincareEdge::new(a, b)).collect(),
        cyclic: false,
    }
}

/// Canonical cyclic image of a cycle.
pub fn p_image_cycle(cycle: &DirectedCycle, edges: &[PoincareEdge]) -> PSignature {
    let lookup = edge_lookup(edges);
    PSignature {
        edges: cycle.steps().filter(|s| lookup.contains(s)).map(|(a, b)| PoincareEdge::new(a, b)).collect(),
        cyclic: true,
    }
    .canonical()
}

/// Strongly connected components (Kosaraju), each sorted, in order of their
/// least node.
pub fn strongly_connected_components(g: &Digraph) -> Vec<Vec<usize>> {
    let n = g.len();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![(s, 0usize)];
        while let Some(&mut (v, ref mut k)) = stack.last_mut() {
            if let Some(&w) = g.successors(v).get(*k) {
                *k += 1;
                if !seen[w] {
                    seen[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(v);
                stack.pop();
            }
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for &s in order.iter().rev() {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut members = vec![s];
        comp[s] = id;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &w in g.predecessors(v) {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    members.push(w);
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        comps.push(members);
    }
    comps.sort_by_key(|c| c[0]);
    comps
}

struct Johnson<'a> {
    adj: &'a [Vec<usize>],
    start: usize,
    allowed: Vec<bool>,
    blocked: Vec<bool>,
    blist: Vec<Vec<usize>>,
    stack: Vec<usize>,
    out: Vec<Vec<usize>>,
    counter: &'a AtomicUsize,
    cap: usize,
}

impl Johnson<'_> {
    fn unblock(&mut self, u: usize) {
        let mut work = vec![u];
        while let Some(u) = work.pop() {
            if self.blocked[u] {
                self.blocked[u] = false;
                work.extend(std::mem::take(&mut self.blist[u]));
            }
        }
    }

    fn circuit(&mut self, v: usize) -> Result<bool> {
        let mut found = false;
        self.stack.push(v);
        self.blocked[v] = true;
        for k in 0..self.adj[v].len() {
            let w = self.adj[v][k];
            if !self.allowed[w] {
                continue;
            }
            if w == self.start {
                if self.counter.fetch_add(1, AtomicOrdering::Relaxed) >= self.cap {
                    return Err(Error::CycleCapExceeded { cap: self.cap });
                }
                self.out.push(self.stack.clone());
                found = true;
            } else if !self.blocked[w] && self.circuit(w)? {
                found = true;
            }
        }
        if found {
            self.unblock(v);
        } else {
            for k in 0..self.adj[v].len() {
                let w = self.adj[v][k];
                if self.allowed[w] && !self.blist[w].contains(&v) {
                    self.blist[w].push(v);
                }
            }
        }
        self.stack.pop();
        Ok(found)
    }
}

/// Johnson's circuit enumeration on a strongly connected piece with local
/// node indices.
fn circuits_in_component(adj: &[Vec<usize>], counter: &AtomicUsize, cap: usize) -> Result<Vec<Vec<usize>>> {
    let n = adj.len();
    let mut radj = vec![Vec::new(); n];
    for (v, ws) in adj.iter().enumerate() {
        for &w in ws {
            radj[w].push(v);
        }
    }
    let mut out = Vec::new();
    for s in 0..n {
        // strong component of s within the nodes ≥ s
        let reach = |graph: &[Vec<usize>]| {
            let mut seen = vec![false; n];
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &w in &graph[v] {
                    if w >= s && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            seen
        };
        let fwd = reach(adj);
        let bwd = reach(&radj);
        let allowed: Vec<bool> = (0..n).map(|i| fwd[i] && bwd[i]).collect();
        if !adj[s].iter().any(|&w| allowed[w]) {
            continue;
        }
        let mut j = Johnson {
            adj,
            start: s,
            allowed,
            blocked: vec![false; n],
            blist: vec![Vec::new(); n],
            stack: Vec::new(),
            out: Vec::new(),
            counter,
            cap,
        };
        j.circuit(s)?;
        out.append(&mut j.out);
    }
    Ok(out)
}

/// All elementary directed cycles, canonically rotated and sorted by
/// (length, natural node sequence).
pub fn elementary_cycles(g: &Digraph, cap: usize) -> Result<Vec<DirectedCycle>> {
    elementary_cycles_with(g, cap, Exec::default())
}

/// As [`elementary_cycles`]; strongly connected components are enumerated
/// independently under `exec`. The result does not depend on `exec`.
pub fn elementary_cycles_with(g: &Digraph, cap: usize, exec: Exec) -> Result<Vec<DirectedCycle>> {
    if cap == 0 {
        return Err(Error::InvalidParameter("cycle cap must be positive".into()));
    }
    let comps: Vec<Vec<usize>> = strongly_connected_components(g)
        .into_iter()
        .filter(|c| c.len() > 1 || g.successors(c[0]).contains(&c[0]))
        .collect();
    let counter = AtomicUsize::new(0);
    let per_comp = par::map_slice(exec, &comps, |comp| {
        let local: HashMap<usize, usize> = comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj: Vec<Vec<usize>> = comp
            .iter()
            .map(|&v| g.successors(v).iter().filter_map(|w| local.get(w).copied()).collect())
            .collect();
        circuits_in_component(&adj, &counter, cap)
            .map(|cs| cs.into_iter().map(|c| c.into_iter().map(|i| comp[i]).collect::<Vec<_>>()).collect::<Vec<_>>())
    });
    let mut cycles = Vec::new();
    for r in per_comp {
        for c in r? {
            cycles.push(DirectedCycle::new(c.into_iter().map(|i| g.label(i).to_string()))?);
        }
    }
    if cycles.len() > cap {
        return Err(Error::CycleCapExceeded { cap });
    }
    cycles.sort_by(DirectedCycle::order_key);
    Ok(cycles)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Preserving,
    Reversing,
    Unknown,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Preserving => "preserving",
            Orientation::Reversing => "reversing",
            Orientation::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratexClass {
    /// 1-based position in the class list.
    pub index: usize,
    pub signature: PSignature,
    pub representative: DirectedCycle,
    pub members: Vec<DirectedCycle>,
    pub order: usize,
    pub stripexes: Vec<DirectedPath>,
    pub orientation: Orientation,
    /// Interior face certifying a reversing class.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation_witness: Option<String>,
}

impl GeneratexClass {
    pub fn is_trivial(&self) -> bool {
        self.signature.is_empty()
    }

    pub fn name(&self) -> String {
        format!("G{}", self.index)
    }

    /// Edges of all members.
    pub fn edge_union(&self) -> BTreeSet<(String, String)> {
        self.members.iter().flat_map(DirectedCycle::edge_set).collect()
    }

    /// Nodes of all members.
    pub fn node_union(&self) -> BTreeSet<String> {
        self.members.iter().flat_map(|m| m.nodes().iter().cloned()).collect()
    }
}

/// Cuts the representative at the outgoing node of each signature edge,
/// starting from the first edge of the canonical signature.
pub fn stripex_decomposition(class: &GeneratexClass) -> Result<Vec<DirectedPath>> {
    stripexes_of(&class.representative, &class.signature)
}

fn stripexes_of(cycle: &DirectedCycle, signature: &PSignature) -> Result<Vec<DirectedPath>> {
    let first = signature.edges.first().ok_or(Error::TrivialClass)?;
    let n = cycle.len();
    let nodes = cycle.nodes();
    let landing = (0..n)
        .find(|&i| nodes[(i + n - 1) % n] == first.ingoing && nodes[i] == first.outgoing)
        .ok_or_else(|| Error::MissingEdge(first.ingoing.clone(), first.outgoing.clone()))?;
    let lookup = edge_lookup(&signature.edges);
    let mut out = Vec::new();
    let mut current = vec![nodes[landing].clone()];
    for k in 1..=n {
        let prev = &nodes[(landing + k - 1) % n];
        let next = &nodes[(landing + k) % n];
        current.push(next.clone());
        if lookup.contains(&(prev.as_str(), next.as_str())) {
            out.push(DirectedPath { nodes: std::mem::replace(&mut current, vec![next.clone()]) });
        }
    }
    Ok(out)
}

/// Orientation class of a generatex from the subcomplex of its top-cells.
pub fn classify_orientation(class: &GeneratexClass, templex: &Templex) -> Result<(Orientation, Option<String>)> {
    let complex = templex.complex.as_ref().ok_or(Error::MissingBinding)?;
    if templex.binding.is_none() {
        return Err(Error::MissingBinding);
    }
    let cells: Vec<CellId> = class
        .node_union()
        .iter()
        .map(|n| templex.cell_of(n).ok_or_else(|| Error::UnknownNode(n.clone())))
        .collect::<Result<_>>()?;
    let sub = complex.closure(&cells)?;
    let report = orientability_report(&sub, Some(&cells))?;
    Ok(if report.orientable {
        (Orientation::Preserving, None)
    } else {
        (Orientation::Reversing, report.witness)
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenexOptions {
    pub cap: usize,
    pub mode: PoincareMode,
    pub exec: Exec,
}

impl Default for GenexOptions {
    fn default() -> Self {
        GenexOptions { cap: DEFAULT_CYCLE_CAP, mode: PoincareMode::Auto, exec: Exec::default() }
    }
}

impl GenexOptions {
    /// Defaults, with the cap taken from [`CYCLE_CAP_ENV`] when set.
    pub fn from_env() -> Result<Self> {
        let mut o = Self::default();
        if let Ok(v) = std::env::var(CYCLE_CAP_ENV) {
            o.cap = v
                .trim()
                .parse()
                .ok()
                .filter(|&c: &usize| c > 0)
                .ok_or_else(|| Error::InvalidParameter(format!("{CYCLE_CAP_ENV}={v} is not a positive integer")))?;
        }
        Ok(o)
    }
}

/// Groups elementary cycles by canonical Poincaré signature.
pub fn generatex_classes(templex: &Templex, cap: usize) -> Result<Vec<GeneratexClass>> {
    let opts = GenexOptions { cap, ..GenexOptions::default() };
    let edges = templex.poincare_edges_with(opts.mode)?;
    classes_from(templex, &edges, &opts).map(|(c, _)| c)
}

fn classes_from(
    templex: &Templex,
    edges: &[PoincareEdge],
    opts: &GenexOptions,
) -> Result<(Vec<GeneratexClass>, Vec<String>)> {
    let mut warnings = Vec::new();
    let cycles = elementary_cycles_with(&templex.digraph, opts.cap, opts.exec)?;
    let mut groups: Vec<(PSignature, Vec<DirectedCycle>)> = Vec::new();
    for c in cycles {
        let sig = p_image_cycle(&c, edges);
        match groups.iter_mut().find(|(s, _)| *s == sig) {
            Some((_, members)) => members.push(c),
            None => groups.push((sig, vec![c])),
        }
    }
    groups.sort_by(|(sa, a), (sb, b)| {
        sa.is_empty().cmp(&sb.is_empty()).then_with(|| DirectedCycle::order_key(&a[0], &b[0]))
    });
    let mut classes = Vec::with_capacity(groups.len());
    for (i, (signature, members)) in groups.into_iter().enumerate() {
        let representative = members[0].clone();
        let order = signature.order();
        let stripexes = if signature.is_empty() { Vec::new() } else { stripexes_of(&representative, &signature)? };
        let mut class = GeneratexClass {
            index: i + 1,
            signature,
            representative,
            members,
            order,
            stripexes,
            orientation: Orientation::Unknown,
            orientation_witness: None,
        };
        if templex.has_binding() {
            match classify_orientation(&class, templex) {
                Ok((o, w)) => {
                    class.orientation = o;
                    class.orientation_witness = w;
                }
                Err(e) => warnings.push(format!("{}: orientation unavailable ({e})", class.name())),
            }
        }
        classes.push(class);
    }
    Ok((classes, warnings))
}

/// Edge set written as maximal directed chains.
pub fn edge_chains(edges: &BTreeSet<(String, String)>) -> Vec<DirectedPath> {
    let mut out_of: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    let mut indeg: HashMap<&str, usize> = HashMap::new();
    for (a, b) in edges {
        out_of.entry(a).or_default().push(b);
        *indeg.entry(b).or_default() += 1;
    }
    let mut used: HashSet<(&str, &str)> = HashSet::new();
    let mut starts: Vec<&str> = out_of.keys().copied().collect();
    // chains start where nothing enters, or where branching happens
    starts.sort_by(|a, b| {
        let ka = indeg.get(a).copied().unwrap_or(0) == 1;
        let kb = indeg.get(b).copied().unwrap_or(0) == 1;
        ka.cmp(&kb).then_with(|| label_cmp(a, b))
    });
    let mut chains = Vec::new();
    for s in starts {
        while let Some(&t) = out_of[s].iter().find(|&&t| !used.contains(&(s, t))) {
            used.insert((s, t));
            let mut nodes = vec![s.to_string(), t.to_string()];
            let mut cur = t;
            while indeg.get(cur).copied().unwrap_or(0) == 1 {
                let next = out_of.get(cur).and_then(|v| if v.len() == 1 { Some(v[0]) } else { None });
                match next {
                    Some(n) if !used.contains(&(cur, n)) => {
                        used.insert((cur, n));
                        nodes.push(n.to_string());
                        cur = n;
                    }
                    _ => break,
                }
            }
            chains.push(DirectedPath { nodes });
        }
    }
    chains
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bond {
    /// 1-based class indices.
    pub index_set: Vec<usize>,
    /// Edges common to the representatives of every class in the set.
    pub shared_edges: BTreeSet<(String, String)>,
    /// Edges used by exactly the classes of the set.
    pub exclusive_edges: BTreeSet<(String, String)>,
    pub valence: usize,
    /// Intersection over all members, when it differs from `shared_edges`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub member_shared_edges: Option<BTreeSet<(String, String)>>,
}

impl Bond {
    pub fn name(&self) -> String {
        let idx: Vec<String> = self.index_set.iter().map(ToString::to_string).collect();
        let sep = if self.index_set.iter().any(|&i| i >= 10) { "," } else { "" };
        format!("B{}", idx.join(sep))
    }

    pub fn shared_chains(&self) -> Vec<DirectedPath> {
        edge_chains(&self.shared_edges)
    }

    pub fn exclusive_chains(&self) -> Vec<DirectedPath> {
        edge_chains(&self.exclusive_edges)
    }
}

fn chains_text(chains: &[DirectedPath]) -> String {
    if chains.is_empty() {
        return "∅".into();
    }
    let parts: Vec<String> = chains.iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

impl fmt::Display for Bond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} = {} (exclusive {}), valence {}",
            self.name(),
            chains_text(&self.shared_chains()),
            chains_text(&self.exclusive_chains()),
            self.valence
        )
    }
}

/// Bonds between nontrivial classes: one per index set that is the exact
/// set of classes sharing some edge, or an intersection of such sets.
pub fn bonds(classes: &[GeneratexClass]) -> Vec<Bond> {
    let nontrivial: Vec<&GeneratexClass> = classes.iter().filter(|c| !c.is_trivial()).collect();
    let rep_edges: BTreeMap<usize, BTreeSet<(String, String)>> =
        nontrivial.iter().map(|c| (c.index, c.representative.edge_set())).collect();
    let mut users: BTreeMap<(String, String), BTreeSet<usize>> = BTreeMap::new();
    for (&i, es) in &rep_edges {
        for e in es {
            users.entry(e.clone()).or_default().insert(i);
        }
    }
    let mut family: BTreeSet<BTreeSet<usize>> = users.values().filter(|s| s.len() >= 2).cloned().collect();
    loop {
        let mut grown = family.clone();
        for a in &family {
            for b in &family {
                let x: BTreeSet<usize> = a.intersection(b).copied().collect();
                if x.len() >= 2 {
                    grown.insert(x);
                }
            }
        }
        if grown.len() == family.len() {
            break;
        }
        family = grown;
    }
    let mut sets: Vec<BTreeSet<usize>> = family.into_iter().collect();
    sets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));

    let by_index: HashMap<usize, &GeneratexClass> = nontrivial.iter().map(|c| (c.index, *c)).collect();
    sets.into_iter()
        .map(|set| {
            let intersect = |edge_sets: Vec<BTreeSet<(String, String)>>| -> BTreeSet<(String, String)> {
                let mut it = edge_sets.into_iter();
                let first = it.next().unwrap_or_default();
                it.fold(first, |acc, s| acc.intersection(&s).cloned().collect())
            };
            let shared = intersect(set.iter().map(|i| rep_edges[i].clone()).collect());
            let member_level = intersect(
                set.iter()
                    .map(|i| {
                        let ms = &by_index[i].members;
                        intersect(ms.iter().map(DirectedCycle::edge_set).collect())
                    })
                    .collect(),
            );
            let exclusive = users.iter().filter(|(_, s)| **s == set).map(|(e, _)| e.clone()).collect();
            Bond {
                valence: set.len(),
                index_set: set.into_iter().collect(),
                member_shared_edges: (member_level != shared).then_some(member_level),
                shared_edges: shared,
                exclusive_edges: exclusive,
            }
        })
        .collect()
}

/// Union of representative cycles with one parallel edge per class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultigraphView {
    pub nodes: Vec<String>,
    /// (source, target, class index)
    pub edges: Vec<(String, String, usize)>,
}

const PALETTE: [&str; 10] =
    ["red", "blue", "green4", "magenta", "orange", "gray40", "cyan3", "brown", "purple", "gold3"];

impl MultigraphView {
    pub fn parallel_count(&self, a: &str, b: &str) -> usize {
        self.edges.iter().filter(|(s, t, _)| s == a && t == b).count()
    }

    /// Graphviz rendering, edges colored by class.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph generatexes {\n  rankdir=LR;\n  node [shape=circle];\n");
        for n in &self.nodes {
            out.push_str(&format!("  \"{n}\";\n"));
        }
        for (a, b, k) in &self.edges {
            let color = PALETTE[(k - 1) % PALETTE.len()];
            out.push_str(&format!("  \"{a}\" -> \"{b}\" [color={color}, label=\"G{k}\", fontcolor={color}];\n"));
        }
        out.push_str("}\n");
        out
    }
}

pub fn multigraph_view(classes: &[GeneratexClass]) -> MultigraphView {
    let mut nodes: BTreeSet<crate::label::Natural> = BTreeSet::new();
    let mut edges = Vec::new();
    for c in classes {
        for (a, b) in c.representative.steps() {
            nodes.insert(crate::label::Natural(a.to_string()));
            edges.push((a.to_string(), b.to_string(), c.index));
        }
    }
    edges.sort_by(|x, y| label_cmp(&x.0, &y.0).then_with(|| label_cmp(&x.1, &y.1)).then(x.2.cmp(&y.2)));
    MultigraphView { nodes: nodes.into_iter().map(|n| n.0).collect(), edges }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PushoutDiagram {
    pub left: usize,
    pub right: usize,
    pub bond: String,
    pub glued: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PushoutReport {
    pub bond: String,
    pub shared: Vec<String>,
    pub diagrams: Vec<PushoutDiagram>,
    /// Legs of the joint cospan when the valence exceeds two.
    pub cospan: Option<Vec<usize>>,
}

impl fmt::Display for PushoutReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} = {{{}}}", self.bond, self.shared.join(", "))?;
        for d in &self.diagrams {
            writeln!(f, "  G{} ↩ {} ↪ G{}   ⇒   {}", d.left, d.bond, d.right, d.glued)?;
        }
        if let Some(legs) = &self.cospan {
            let names: Vec<String> = legs.iter().map(|i| format!("G{i}")).collect();
            writeln!(f, "  {} ↪ {}   ⇒   {}", self.bond, names.join(", "), names.join(&format!(" ⊔_{} ", self.bond)))?;
        }
        Ok(())
    }
}

/// Describes the pushout squares gluing the classes of a bond.
pub fn pushout_report(bond: &Bond) -> PushoutReport {
    let name = bond.name();
    let mut diagrams = Vec::new();
    for (a, &i) in bond.index_set.iter().enumerate() {
        for &j in &bond.index_set[a + 1..] {
            diagrams.push(PushoutDiagram { left: i, right: j, bond: name.clone(), glued: format!("G{i} ⊔_{name} G{j}") });
        }
    }
    PushoutReport {
        shared: bond.shared_chains().iter().map(ToString::to_string).collect(),
        bond: name,
        diagrams,
        cospan: (bond.valence >= 3).then(|| bond.index_set.clone()),
    }
}

/// Everything derived from the digraph of a templex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratexAnalysis {
    /// "complex" or "digraph"
    pub detection: String,
    pub loci: Vec<JunctionLocus>,
    pub poincare_edges: Vec<PoincareEdge>,
    pub classes: Vec<GeneratexClass>,
    pub bonds: Vec<Bond>,
    pub warnings: Vec<String>,
}

impl GeneratexAnalysis {
    pub fn class_by_signature(&self, sig: &[(&str, &str)]) -> Option<&GeneratexClass> {
        let want = PSignature {
            edges: sig.iter().map(|(a, b)| PoincareEdge::new(*a, *b)).collect(),
            cyclic: true,
        }
        .canonical();
        self.classes.iter().find(|c| c.signature == want)
    }

    pub fn multigraph(&self) -> MultigraphView {
        multigraph_view(&self.classes)
    }
}

pub fn analyze(templex: &Templex, opts: &GenexOptions) -> Result<GeneratexAnalysis> {
    let use_complex = match opts.mode {
        PoincareMode::Auto => templex.has_binding(),
        PoincareMode::Complex => true,
        PoincareMode::Digraph => false,
    };
    let mut warnings = Vec::new();
    let loci = if templex.has_binding() { templex.junction_loci()? } else { Vec::new() };
    for l in &loci {
        if !l.incident_only.is_empty() {
            warnings.push(format!(
                "locus on {}: nodes {:?} are incident only",
                l.cells.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "),
                l.incident_only
            ));
        }
    }
    let edges = templex.poincare_edges_with(opts.mode)?;
    let (classes, mut w) = classes_from(templex, &edges, opts)?;
    warnings.append(&mut w);
    let bonds = bonds(&classes);
    for b in &bonds {
        if b.member_shared_edges.is_some() {
            warnings.push(format!("{}: member-level intersection differs from representatives", b.name()));
        }
    }
    Ok(GeneratexAnalysis {
        detection: if use_complex { "complex" } else { "digraph" }.into(),
        loci,
        poincare_edges: edges,
        classes,
        bonds,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(s: &str) -> DirectedPath {
        DirectedPath::new(s.split('→')).unwrap()
    }

    fn lorenz() -> Templex {
        Templex::digraph_only(Digraph::from_edges(&[
            ("1", "2"), ("2", "3"), ("2", "4"), ("3", "1"), ("4", "5"),
            ("5", "6"), ("6", "7"), ("7", "5"), ("6", "8"), ("8", "1"),
        ]))
    }

    #[test]
    fn concatenation() {
        assert_eq!(concat(&path("3→1"), &path("1→2")).unwrap().to_string(), "3→1→2");
        assert!(matches!(concat(&path("1→2"), &path("3→1")), Err(Error::NotComposable { .. })));
        let c = path("1→2→1");
        assert_eq!(concat(&c, &c).unwrap().len(), 4);
        assert!(matches!(DirectedPath::new(["1"]), Err(Error::EmptyPath)));
    }

    #[test]
    fn cycle_rotation() {
        let a = DirectedCycle::new(["3", "1", "2", "3"]).unwrap();
        let b = DirectedCycle::new(["2", "3", "1"]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "1→2→3→1");
        assert_eq!(DirectedCycle::new(["17", "9", "7"]).unwrap().nodes()[0], "7");
    }

    #[test]
    fn self_loop() {
        let g = Digraph::from_edges(&[("a", "a")]);
        let cs = elementary_cycles(&g, 10).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].len(), 1);
    }

    #[test]
    fn lorenz_classes_and_stripexes() {
        let classes = generatex_classes(&lorenz(), 100).unwrap();
        let reps: Vec<String> = classes.iter().map(|c| c.representative.to_string()).collect();
        assert_eq!(reps, ["1→2→3→1", "5→6→7→5", "1→2→4→5→6→8→1"]);
        let g3 = &classes[2];
        assert_eq!(g3.signature.to_string(), "{⟨4|5⟩, ⟨8|1⟩}");
        assert_eq!(g3.order, 2);
        let s: Vec<String> = g3.stripexes.iter().map(ToString::to_string).collect();
        assert_eq!(s, ["5→6→8→1", "1→2→4→5"]);
        assert_eq!(classes[0].stripexes.len(), 1);
        assert_eq!(classes[0].stripexes[0].to_string(), "1→2→3→1");
        assert!(classes.iter().all(|c| c.orientation == Orientation::Unknown));
    }

    #[test]
    fn trivial_class_for_plain_cycle() {
        let t = Templex::digraph_only(Digraph::from_edges(&[("1", "2"), ("2", "3"), ("3", "1")]));
        let classes = generatex_classes(&t, 10).unwrap();
        assert_eq!(classes.len(), 1);
        assert!(classes[0].is_trivial());
        assert_eq!(classes[0].order, 0);
        assert!(matches!(stripex_decomposition(&classes[0]), Err(Error::TrivialClass)));
    }

    #[test]
    fn cap_is_enforced() {
        let mut edges = Vec::new();
        for i in 0..6 {
            for j in 0..6 {
                if i != j {
                    edges.push((i.to_string(), j.to_string()));
                }
            }
        }
        let g = Digraph::from_edges(&edges);
        assert!(matches!(elementary_cycles(&g, 50), Err(Error::CycleCapExceeded { cap: 50 })));
        // K6 has Σ_k C(6,k)(k−1)! = 409 elementary cycles
        assert_eq!(elementary_cycles(&g, 1000).unwrap().len(), 409);
    }

    #[test]
    fn lorenz_bonds() {
        let classes = generatex_classes(&lorenz(), 100).unwrap();
        let names: Vec<String> = bonds(&classes).iter().map(ToString::to_string).collect();
        assert_eq!(names, ["B13 = {1→2} (exclusive {1→2}), valence 2", "B23 = {5→6} (exclusive {5→6}), valence 2"]);
        let mg = multigraph_view(&classes);
        assert_eq!(mg.parallel_count("1", "2"), 2);
        assert_eq!(mg.parallel_count("2", "3"), 1);
        assert!(mg.to_dot().contains("color=red"));
    }

    #[test]
    fn pushout_of_triple_bond() {
        let b = Bond {
            index_set: vec![1, 2, 3],
            shared_edges: [("7".to_string(), "17".to_string())].into_iter().collect(),
            exclusive_edges: BTreeSet::new(),
            valence: 3,
            member_shared_edges: None,
        };
        let r = pushout_report(&b);
        assert_eq!(r.diagrams.len(), 3);
        assert_eq!(r.diagrams[0].glued, "G1 ⊔_B123 G2");
        assert_eq!(r.cospan, Some(vec![1, 2, 3]));
    }

    #[test]
    fn chains_follow_edges() {
        let e: BTreeSet<(String, String)> =
            [("1", "2"), ("2", "3"), ("3", "5"), ("5", "6")].iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        assert_eq!(edge_chains(&e)[0].to_string(), "1→2→3→5→6");
    }
}
