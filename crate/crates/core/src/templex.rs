//! Templexes: a cell complex together with a flow digraph on its top-cells.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cellcomplex::{CellComplex, CellId};
use crate::error::{Error, Result};
use crate::label::label_cmp;

/// A simple digraph on string labels. Nodes are kept in natural label order
/// and referred to internally by position.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Digraph {
    nodes: Vec<String>,
    edges: Vec<(String, String)>,
    index: HashMap<String, usize>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl Digraph {
    /// Duplicate edges collapse; endpoints must be listed nodes.
    pub fn new<N, E, S>(nodes: N, edges: E) -> Result<Self>
    where
        N: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S)>,
        S: Into<String>,
    {
        let mut nodes: Vec<String> = nodes.into_iter().map(Into::into).collect();
        nodes.sort_by(|a, b| label_cmp(a, b));
        nodes.dedup();
        let index: HashMap<String, usize> = nodes.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let mut succ = vec![Vec::new(); nodes.len()];
        let mut pred = vec![Vec::new(); nodes.len()];
        let mut pairs = BTreeSet::new();
        for (a, b) in edges {
            let (a, b) = (a.into(), b.into());
            let ia = *index.get(&a).ok_or_else(|| Error::UnknownNode(a.clone()))?;
            let ib = *index.get(&b).ok_or_else(|| Error::UnknownNode(b.clone()))?;
            pairs.insert((ia, ib));
        }
        for &(a, b) in &pairs {
            succ[a].push(b);
            pred[b].push(a);
        }
        let edges = pairs.iter().map(|&(a, b)| (nodes[a].clone(), nodes[b].clone())).collect();
        Ok(Digraph { nodes, edges, index, succ, pred })
    }

    /// Node set inferred from the edges.
    pub fn from_edges<S: AsRef<str>>(edges: &[(S, S)]) -> Self {
        let nodes: Vec<String> = edges.iter().flat_map(|(a, b)| [a.as_ref().to_string(), b.as_ref().to_string()]).collect();
        let edges = edges.iter().map(|(a, b)| (a.as_ref().to_string(), b.as_ref().to_string()));
        Self::new(nodes, edges).expect("endpoints are nodes by construction")
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    /// Edges in (source, target) natural order.
    pub fn edges(&self) -> &[(String, String)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.nodes[i]
    }

    pub fn successors(&self, i: usize) -> &[usize] {
        &self.succ[i]
    }

    pub fn predecessors(&self, i: usize) -> &[usize] {
        &self.pred[i]
    }

    pub fn in_degree(&self, label: &str) -> usize {
        self.index_of(label).map_or(0, |i| self.pred[i].len())
    }

    pub fn out_degree(&self, label: &str) -> usize {
        self.index_of(label).map_or(0, |i| self.succ[i].len())
    }

    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(a), Some(b)) => self.succ[a].binary_search(&b).is_ok(),
            _ => false,
        }
    }

    pub fn relabel(&self, map: &dyn Fn(&str) -> String) -> Result<Digraph> {
        Digraph::new(
            self.nodes.iter().map(|n| map(n)),
            self.edges.iter().map(|(a, b)| (map(a), map(b))),
        )
    }

    /// Replaces `node` by a series pair `node·in → node·out`: incoming edges
    /// end at the first, outgoing edges start at the second.
    pub fn subdivide_node(&self, node: &str) -> Result<Digraph> {
        self.index_of(node).ok_or_else(|| Error::UnknownNode(node.to_string()))?;
        let a = format!("{node}·in");
        let b = format!("{node}·out");
        let rename = |x: &str, head: bool| -> String {
            if x == node {
                if head { a.clone() } else { b.clone() }
            } else {
                x.to_string()
            }
        };
        let nodes = self.nodes.iter().filter(|n| *n != node).cloned().chain([a.clone(), b.clone()]);
        let mut edges: Vec<(String, String)> =
            self.edges.iter().map(|(s, t)| (rename(s, false), rename(t, true))).collect();
        edges.push((a.clone(), b.clone()));
        Digraph::new(nodes, edges)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocusKind {
    Joining,
    Splitting,
    Mixed,
    /// No node receives from or sends to two incident nodes.
    Inert,
}

impl fmt::Display for LocusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LocusKind::Joining => "joining",
            LocusKind::Splitting => "splitting",
            LocusKind::Mixed => "mixed",
            LocusKind::Inert => "inert",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JunctionLocus {
    pub cells: Vec<CellId>,
    pub incident: Vec<String>,
    pub ingoing: Vec<String>,
    pub outgoing: Vec<String>,
    pub kind: LocusKind,
    /// Incident nodes that neither feed nor receive a merge here.
    pub incident_only: Vec<String>,
}

/// A digraph edge into a merging node, written `⟨ingoing|outgoing⟩`.
/// Equality and order ignore the locus reference.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PoincareEdge {
    pub ingoing: String,
    pub outgoing: String,
    /// Index into [`Templex::junction_loci`] when detected from the complex.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locus: Option<usize>,
}

impl PoincareEdge {
    pub fn new(ingoing: impl Into<String>, outgoing: impl Into<String>) -> Self {
        PoincareEdge { ingoing: ingoing.into(), outgoing: outgoing.into(), locus: None }
    }
}

impl PartialEq for PoincareEdge {
    fn eq(&self, other: &Self) -> bool {
        self.ingoing == other.ingoing && self.outgoing == other.outgoing
    }
}

impl Eq for PoincareEdge {}

impl Ord for PoincareEdge {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        label_cmp(&self.ingoing, &other.ingoing).then_with(|| label_cmp(&self.outgoing, &other.outgoing))
    }
}

impl PartialOrd for PoincareEdge {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl std::hash::Hash for PoincareEdge {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ingoing.hash(state);
        self.outgoing.hash(state);
    }
}

impl fmt::Display for PoincareEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{}|{}⟩", self.ingoing, self.outgoing)
    }
}

/// How Poincaré edges are detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PoincareMode {
    /// From junction loci when a binding exists, otherwise from in-degrees.
    #[default]
    Auto,
    Complex,
    Digraph,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Templex {
    pub complex: Option<CellComplex>,
    pub digraph: Digraph,
    /// node → top-cell label
    pub binding: Option<BTreeMap<String, String>>,
    pub metadata: Option<Value>,
}

impl Templex {
    pub fn digraph_only(digraph: Digraph) -> Self {
        Templex { complex: None, digraph, binding: None, metadata: None }
    }

    /// Checks that the binding is a bijection between nodes and top-cells.
    pub fn new(complex: CellComplex, digraph: Digraph, binding: BTreeMap<String, String>) -> Result<Self> {
        let t = Templex { complex: Some(complex), digraph, binding: Some(binding), metadata: None };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        let Some(binding) = &self.binding else { return Ok(()) };
        let complex = self
            .complex
            .as_ref()
            .ok_or_else(|| Error::schema("binding", "a binding needs a complex"))?;
        for node in self.digraph.nodes() {
            if !binding.contains_key(node) {
                return Err(Error::schema(format!("binding.{node}"), "node has no top-cell"));
            }
        }
        let top: BTreeSet<String> = complex.top_cells().into_iter().map(|c| c.label).collect();
        let mut seen = BTreeSet::new();
        for (node, cell) in binding {
            if self.digraph.index_of(node).is_none() {
                return Err(Error::schema(format!("binding.{node}"), "not a digraph node"));
            }
            if !top.contains(cell) {
                return Err(Error::schema(format!("binding.{node}"), format!("{cell} is not a top-cell")));
            }
            if !seen.insert(cell.clone()) {
                return Err(Error::schema(format!("binding.{node}"), format!("{cell} is bound twice")));
            }
        }
        if seen.len() != top.len() {
            let missing: Vec<&String> = top.difference(&seen).collect();
            return Err(Error::schema("binding", format!("top-cells without a node: {missing:?}")));
        }
        Ok(())
    }

    pub fn has_binding(&self) -> bool {
        self.binding.is_some()
    }

    fn cell_to_node(&self) -> Result<(&CellComplex, HashMap<&str, &str>)> {
        let (Some(complex), Some(binding)) = (&self.complex, &self.binding) else {
            return Err(Error::MissingBinding);
        };
        Ok((complex, binding.iter().map(|(n, c)| (c.as_str(), n.as_str())).collect()))
    }

    /// Top-cell bound to `node`.
    pub fn cell_of(&self, node: &str) -> Option<CellId> {
        let complex = self.complex.as_ref()?;
        let label = self.binding.as_ref()?.get(node)?;
        complex.top_cells().into_iter().find(|c| &c.label == label)
    }

    /// Lower-dimensional cells where three or more top-cells meet, grouped
    /// into loci and classified by the digraph edges among incident nodes.
    pub fn junction_loci(&self) -> Result<Vec<JunctionLocus>> {
        let (complex, node_of) = self.cell_to_node()?;
        let top = complex.top_cells();

        // face -> incident nodes, over direct boundary entries of top-cells
        let mut incidence: BTreeMap<CellId, BTreeSet<&str>> = BTreeMap::new();
        for id in &top {
            let cell = complex.cell(id.dim, &id.label).expect("top-cell exists");
            for (f, _) in &cell.boundary {
                incidence.entry(CellId::new(id.dim - 1, f.clone())).or_default().insert(node_of[id.label.as_str()]);
            }
        }
        let junction: Vec<(CellId, BTreeSet<&str>)> = incidence.into_iter().filter(|(_, s)| s.len() >= 3).collect();

        // merge junction cells that touch and share an incident top-cell
        let faces_of = |id: &CellId| -> BTreeSet<String> {
            complex.cell(id.dim, &id.label).map(|c| c.boundary.iter().map(|(f, _)| f.clone()).collect()).unwrap_or_default()
        };
        let touches = |a: &CellId, b: &CellId| -> bool {
            if a.dim == b.dim {
                return !faces_of(a).is_disjoint(&faces_of(b));
            }
            let (lo, hi) = if a.dim < b.dim { (a, b) } else { (b, a) };
            hi.dim == lo.dim + 1 && faces_of(hi).contains(&lo.label)
        };
        let mut parent: Vec<usize> = (0..junction.len()).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for i in 0..junction.len() {
            for j in i + 1..junction.len() {
                if touches(&junction[i].0, &junction[j].0) && !junction[i].1.is_disjoint(&junction[j].1) {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..junction.len() {
            let root = find(&mut parent, i);
            groups.entry(root).or_default().push(i);
        }

        let g = &self.digraph;
        let mut loci = Vec::new();
        for members in groups.values() {
            let cells: Vec<CellId> = members.iter().map(|&i| junction[i].0.clone()).collect();
            let incident: BTreeSet<&str> = members.iter().flat_map(|&i| junction[i].1.iter().copied()).collect();
            let mut ingoing = BTreeSet::new();
            let mut outgoing = BTreeSet::new();
            for &n in &incident {
                let sources: Vec<&str> = incident.iter().copied().filter(|&m| m != n && g.has_edge(m, n)).collect();
                if sources.len() >= 2 {
                    outgoing.insert(n);
                    ingoing.extend(sources);
                }
                let targets: Vec<&str> = incident.iter().copied().filter(|&m| m != n && g.has_edge(n, m)).collect();
                if targets.len() >= 2 {
                    ingoing.insert(n);
                    outgoing.extend(targets);
                }
            }
            let kind = match (ingoing.len(), outgoing.len()) {
                (i, 1) if i >= 2 => LocusKind::Joining,
                (1, o) if o >= 2 => LocusKind::Splitting,
                (i, o) if i >= 2 && o >= 2 => LocusKind::Mixed,
                _ => LocusKind::Inert,
            };
            let sorted = |s: &BTreeSet<&str>| -> Vec<String> {
                let mut v: Vec<String> = s.iter().map(|x| x.to_string()).collect();
                v.sort_by(|a, b| label_cmp(a, b));
                v
            };
            let incident_only: BTreeSet<&str> =
                incident.iter().copied().filter(|n| !ingoing.contains(n) && !outgoing.contains(n)).collect();
            loci.push(JunctionLocus {
                cells,
                incident: sorted(&incident),
                ingoing: sorted(&ingoing),
                outgoing: sorted(&outgoing),
                kind,
                incident_only: sorted(&incident_only),
            });
        }
        Ok(loci)
    }

    /// Poincaré edges, from junction loci when a binding is present and from
    /// in-degrees otherwise.
    pub fn poincare_edges(&self) -> Result<Vec<PoincareEdge>> {
        self.poincare_edges_with(PoincareMode::Auto)
    }

    pub fn poincare_edges_with(&self, mode: PoincareMode) -> Result<Vec<PoincareEdge>> {
        let use_complex = match mode {
            PoincareMode::Auto => self.has_binding(),
            PoincareMode::Complex => true,
            PoincareMode::Digraph => false,
        };
        let mut out = if use_complex {
            let loci = self.junction_loci()?;
            let mut edges = Vec::new();
            for (li, locus) in loci.iter().enumerate() {
                for o in &locus.outgoing {
                    let sources: Vec<&String> =
                        locus.incident.iter().filter(|i| *i != o && self.digraph.has_edge(i, o)).collect();
                    if sources.len() >= 2 {
                        edges.extend(sources.into_iter().map(|i| PoincareEdge {
                            ingoing: i.clone(),
                            outgoing: o.clone(),
                            locus: Some(li),
                        }));
                    }
                }
            }
            edges
        } else {
            digraph_poincare_edges(&self.digraph)
        };
        out.sort();
        out.dedup();
        Ok(out)
    }

    pub fn relabel_nodes(&self, map: &dyn Fn(&str) -> String) -> Result<Templex> {
        let t = Templex {
            complex: self.complex.clone(),
            digraph: self.digraph.relabel(map)?,
            binding: self.binding.as_ref().map(|b| b.iter().map(|(n, c)| (map(n), c.clone())).collect()),
            metadata: self.metadata.clone(),
        };
        t.validate()?;
        Ok(t)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json_value(serde_json::from_str(s)?)
    }

    pub fn from_json_value(v: Value) -> Result<Self> {
        let Value::Object(mut obj) = v else {
            return Err(Error::schema("$", "templex must be a JSON object"));
        };
        let complex = match obj.remove("complex") {
            None | Some(Value::Null) => None,
            Some(c) => Some(CellComplex::from_json_value(c).map_err(|e| match e {
                Error::Schema { location, message } => Error::schema(format!("complex: {location}"), message),
                other => other,
            })?),
        };
        let nodes = match obj.remove("nodes") {
            None | Some(Value::Null) => Vec::new(),
            Some(Value::Array(a)) => a
                .iter()
                .enumerate()
                .map(|(i, n)| label_from(n, &format!("nodes[{i}]")))
                .collect::<Result<Vec<_>>>()?,
            Some(_) => return Err(Error::schema("nodes", "expected an array")),
        };
        let edges = match obj.remove("edges") {
            None | Some(Value::Null) => Vec::new(),
            Some(Value::Array(a)) => a
                .iter()
                .enumerate()
                .map(|(i, e)| match e {
                    Value::Array(p) if p.len() == 2 => {
                        Ok((label_from(&p[0], &format!("edges[{i}][0]"))?, label_from(&p[1], &format!("edges[{i}][1]"))?))
                    }
                    _ => Err(Error::schema(format!("edges[{i}]"), "expected a [source, target] pair")),
                })
                .collect::<Result<Vec<_>>>()?,
            Some(_) => return Err(Error::schema("edges", "expected an array")),
        };
        for (i, (a, b)) in edges.iter().enumerate() {
            for end in [a, b] {
                if !nodes.contains(end) {
                    return Err(Error::schema(format!("edges[{i}]"), format!("unknown node {end}")));
                }
            }
        }
        let binding = match obj.remove("binding") {
            None | Some(Value::Null) => None,
            Some(Value::Object(m)) => Some(
                m.iter()
                    .map(|(k, v)| Ok((k.clone(), label_from(v, &format!("binding.{k}"))?)))
                    .collect::<Result<BTreeMap<_, _>>>()?,
            ),
            Some(_) => return Err(Error::schema("binding", "expected an object")),
        };
        let metadata = obj.remove("metadata").filter(|m| !m.is_null());
        let t = Templex { complex, digraph: Digraph::new(nodes, edges)?, binding, metadata };
        t.validate()?;
        Ok(t)
    }

    pub fn to_json_value(&self) -> Value {
        let mut obj = serde_json::Map::new();
        obj.insert("complex".into(), self.complex.as_ref().map_or(Value::Null, CellComplex::to_json_value));
        obj.insert("nodes".into(), self.digraph.nodes().iter().map(|n| Value::String(n.clone())).collect());
        obj.insert(
            "edges".into(),
            self.digraph.edges().iter().map(|(a, b)| Value::Array(vec![a.clone().into(), b.clone().into()])).collect(),
        );
        obj.insert(
            "binding".into(),
            self.binding.as_ref().map_or(Value::Null, |b| {
                Value::Object(b.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect())
            }),
        );
        if let Some(m) = &self.metadata {
            obj.insert("metadata".into(), m.clone());
        }
        Value::Object(obj)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("templex serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string())?;
        Ok(())
    }
}

fn label_from(v: &Value, location: &str) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(Error::schema(location, "expected a string or integer label")),
    }
}

/// Edges into nodes of in-degree ≥ 2.
pub fn digraph_poincare_edges(g: &Digraph) -> Vec<PoincareEdge> {
    let mut out = Vec::new();
    for (o, preds) in (0..g.len()).map(|i| (i, g.predecessors(i))) {
        if preds.len() >= 2 {
            out.extend(preds.iter().map(|&i| PoincareEdge::new(g.label(i), g.label(o))));
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rossler_digraph() -> Digraph {
        Digraph::from_edges(&[("1", "2"), ("2", "3"), ("2", "4"), ("3", "1"), ("4", "1")])
    }

    #[test]
    fn digraph_basics() {
        let g = rossler_digraph();
        assert_eq!(g.nodes(), ["1", "2", "3", "4"]);
        assert_eq!(g.in_degree("1"), 2);
        assert!(g.has_edge("2", "4") && !g.has_edge("4", "2"));
        assert!(Digraph::new(["1"], [("1", "9")]).is_err());
    }

    #[test]
    fn in_degree_rule() {
        let names: Vec<String> = digraph_poincare_edges(&rossler_digraph()).iter().map(ToString::to_string).collect();
        assert_eq!(names, ["⟨3|1⟩", "⟨4|1⟩"]);
        let cyc = Digraph::from_edges(&[("1", "2"), ("2", "3"), ("3", "1")]);
        assert!(digraph_poincare_edges(&cyc).is_empty());
    }

    #[test]
    fn node_split_is_series() {
        let g = rossler_digraph().subdivide_node("1").unwrap();
        assert_eq!(g.len(), 5);
        assert!(g.has_edge("1·in", "1·out") && g.has_edge("3", "1·in") && g.has_edge("1·out", "2"));
        assert_eq!(g.in_degree("1·in"), 2);
    }

    #[test]
    fn empty_templex_file() {
        let t = Templex::from_json_str(r#"{"complex": null, "nodes": [], "edges": []}"#).unwrap();
        assert!(t.digraph.is_empty());
        assert!(matches!(t.junction_loci(), Err(Error::MissingBinding)));
        assert!(t.poincare_edges().unwrap().is_empty());
    }

    #[test]
    fn schema_errors_have_locations() {
        let e = Templex::from_json_str(r#"{"nodes": ["1"], "edges": [["1"]]}"#).unwrap_err();
        assert!(matches!(e, Error::Schema { ref location, .. } if location == "edges[0]"));
        let e = Templex::from_json_str(r#"{"nodes": ["1"], "edges": [["1", "2"]]}"#).unwrap_err();
        assert!(matches!(e, Error::Schema { ref location, .. } if location == "edges[0]"));
    }

    #[test]
    fn numeric_labels_accepted() {
        let t = Templex::from_json_str(r#"{"nodes": [1, 2], "edges": [[1, 2], [2, 1]]}"#).unwrap();
        assert!(t.digraph.has_edge("2", "1"));
    }
}
