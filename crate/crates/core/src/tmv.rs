//! Topological modes of variability.
//!
//! A trajectory's top-cell itinerary is cut at every crossing of a Poincaré
//! edge. Each piece (including the closing crossing) is labeled by the
//! generatex class whose edges contain it; maximal runs of one label are the
//! intervals `I_k` of the decomposition and their labels form σ.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genex::GeneratexClass;
use crate::par::{self, Exec};
use crate::templex::{Digraph, PoincareEdge};

/// Time-stamped top-cell labels with strictly increasing times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Itinerary {
    samples: Vec<(f64, String)>,
}

#[derive(Debug, Deserialize, Serialize)]
struct ItineraryRow {
    time: f64,
    node: String,
}

/// Consecutive samples in one cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Visit {
    pub node: String,
    pub start: f64,
    pub end: f64,
    /// Time of the last sample inside the cell.
    pub last_sample: f64,
    /// True for cells inserted to repair a sampling jump.
    #[serde(default)]
    pub interpolated: bool,
}

impl Itinerary {
    pub fn new<S: Into<String>>(samples: impl IntoIterator<Item = (f64, S)>) -> Result<Self> {
        let samples: Vec<(f64, String)> = samples.into_iter().map(|(t, n)| (t, n.into())).collect();
        for (i, w) in samples.windows(2).enumerate() {
            if !(w[1].0 > w[0].0) {
                return Err(Error::NonMonotonicTime(i + 1));
            }
        }
        if let Some(i) = samples.iter().position(|s| !s.0.is_finite()) {
            return Err(Error::NonMonotonicTime(i));
        }
        Ok(Itinerary { samples })
    }

    pub fn samples(&self) -> &[(f64, String)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn span(&self) -> Option<(f64, f64)> {
        Some((self.samples.first()?.0, self.samples.last()?.0))
    }

    /// Collapses runs of one node into visits; a visit ends where the next begins.
    pub fn visits(&self) -> Vec<Visit> {
        let mut out: Vec<Visit> = Vec::new();
        for (t, n) in &self.samples {
            match out.last_mut() {
                Some(v) if &v.node == n => v.last_sample = *t,
                _ => {
                    if let Some(v) = out.last_mut() {
                        v.end = *t;
                    }
                    out.push(Visit { node: n.clone(), start: *t, end: *t, last_sample: *t, interpolated: false });
                }
            }
        }
        if let (Some(v), Some((_, end))) = (out.last_mut(), self.span()) {
            v.end = end;
        }
        out
    }

    pub fn from_csv_reader(r: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
        let mut samples = Vec::new();
        for row in rdr.deserialize() {
            let row: ItineraryRow = row?;
            samples.push((row.time, row.node));
        }
        Self::new(samples)
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv_reader(std::fs::File::open(path)?)
    }

    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        for (time, node) in &self.samples {
            wtr.serialize(ItineraryRow { time: *time, node: node.clone() })?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// Times multiplied by `factor` (> 0).
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.samples.iter().map(|(t, n)| (t * factor, n.clone())))
    }
}

/// Counts shortest directed paths from `a` to `b`, returning the path when
/// it is unique.
fn unique_shortest_path(g: &Digraph, a: usize, b: usize) -> std::result::Result<Vec<usize>, usize> {
    let n = g.len();
    let mut dist = vec![usize::MAX; n];
    let mut count = vec![0usize; n];
    let mut parent = vec![usize::MAX; n];
    dist[a] = 0;
    count[a] = 1;
    let mut queue = VecDeque::from([a]);
    while let Some(v) = queue.pop_front() {
        for &w in g.successors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                count[w] = count[v];
                parent[w] = v;
                queue.push_back(w);
            } else if dist[w] == dist[v] + 1 {
                count[w] = count[w].saturating_add(count[v]);
            }
        }
    }
    if count[b] != 1 {
        return Err(count[b]);
    }
    let mut path = vec![b];
    while *path.last().unwrap() != a {
        path.push(parent[*path.last().unwrap()]);
    }
    path.reverse();
    Ok(path)
}

/// Visits with sampling jumps filled by the unique shortest directed path.
/// Inserted cells share the gap between the last sample before the jump and
/// the first sample after it.
pub fn repair(itinerary: &Itinerary, g: &Digraph) -> Result<Vec<Visit>> {
    let visits = itinerary.visits();
    for v in &visits {
        if g.index_of(&v.node).is_none() {
            return Err(Error::UnreachableNode(v.node.clone()));
        }
    }
    let mut out: Vec<Visit> = Vec::with_capacity(visits.len());
    for v in visits {
        if let Some(prev) = out.last_mut() {
            if !g.has_edge(&prev.node, &v.node) {
                let (a, b) = (g.index_of(&prev.node).unwrap(), g.index_of(&v.node).unwrap());
                let path = unique_shortest_path(g, a, b).map_err(|count| {
                    let (from, to, time) = (prev.node.clone(), v.node.clone(), v.start);
                    if count == 0 {
                        Error::UnreachableJump { from, to, time }
                    } else {
                        Error::AmbiguousJump { from, to, time }
                    }
                })?;
                let inner = &path[1..path.len() - 1];
                let (t0, t1) = (prev.last_sample, v.start);
                let step = (t1 - t0) / (inner.len() + 1) as f64;
                prev.end = t0 + step;
                for (k, &node) in inner.iter().enumerate() {
                    let start = t0 + step * (k + 1) as f64;
                    out.push(Visit {
                        node: g.label(node).to_string(),
                        start,
                        end: start + step,
                        last_sample: start,
                        interpolated: true,
                    });
                }
                if let Some(last) = out.last_mut() {
                    last.end = t1;
                }
            }
        }
        out.push(v);
    }
    Ok(out)
}

/// Part of the itinerary between two successive Poincaré crossings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    pub nodes: Vec<String>,
    /// Whether the segment ends by crossing a Poincaré edge.
    pub closed: bool,
    pub candidates: Vec<usize>,
    pub class: usize,
    pub provisional: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
    pub class: usize,
    pub provisional: bool,
}

impl Interval {
    pub fn len(&self) -> f64 {
        self.end - self.start
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TmvDecomposition {
    pub t0: f64,
    pub t_end: f64,
    pub intervals: Vec<Interval>,
    /// Class of each interval, in time order.
    pub sigma: Vec<usize>,
    pub segments: Vec<Segment>,
    /// Number of classes the labels refer to (1-based indices up to this).
    pub class_count: usize,
    pub repaired_jumps: usize,
}

impl TmvDecomposition {
    /// χ(t); at an interval boundary the later interval wins.
    pub fn chi(&self, t: f64) -> Option<usize> {
        if t < self.t0 || t > self.t_end {
            return None;
        }
        let i = self.intervals.partition_point(|iv| iv.start <= t);
        self.intervals.get(i.saturating_sub(1)).map(|iv| iv.class)
    }

    /// χ(t) as a step series: one row per interval start plus the end point.
    pub fn step_series(&self) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = self.intervals.iter().map(|iv| (iv.start, iv.class)).collect();
        if let Some(last) = self.intervals.last() {
            out.push((last.end, last.class));
        }
        out
    }

    pub fn write_step_csv(&self, w: impl Write) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["time", "class"])?;
        for (t, c) in self.step_series() {
            wtr.write_record([t.to_string(), c.to_string()])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Labels an itinerary by generatex class.
///
/// A segment's candidates are the classes whose member edges contain every
/// edge the segment traverses (its closing crossing included); a segment
/// without edges uses the classes through its node. Ambiguous segments take
/// the next resolved label among their candidates, then the previous one,
/// then the lowest index, and are marked provisional when not resolved by
/// lookahead.
pub fn label_trajectory(
    itinerary: &Itinerary,
    g: &Digraph,
    classes: &[GeneratexClass],
    edges: &[PoincareEdge],
) -> Result<TmvDecomposition> {
    let (t0, t_end) = itinerary.span().ok_or_else(|| Error::InvalidParameter("empty itinerary".into()))?;
    let raw_visits = itinerary.visits().len();
    let visits = repair(itinerary, g)?;
    let crossing: HashSet<(&str, &str)> = edges.iter().map(|e| (e.ingoing.as_str(), e.outgoing.as_str())).collect();

    // cut points: indices k where visits[k-1] → visits[k] is a Poincaré edge
    let mut cuts = vec![0];
    for k in 1..visits.len() {
        if crossing.contains(&(visits[k - 1].node.as_str(), visits[k].node.as_str())) {
            cuts.push(k);
        }
    }
    cuts.push(visits.len());

    let unions: Vec<(usize, BTreeSet<(String, String)>, BTreeSet<String>)> =
        classes.iter().map(|c| (c.index, c.edge_union(), c.node_union())).collect();

    let mut segments = Vec::with_capacity(cuts.len());
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a == b {
            continue;
        }
        let closed = b < visits.len();
        let mut steps: Vec<(String, String)> =
            visits[a..b].windows(2).map(|p| (p[0].node.clone(), p[1].node.clone())).collect();
        if closed {
            steps.push((visits[b - 1].node.clone(), visits[b].node.clone()));
        }
        let candidates: Vec<usize> = if steps.is_empty() {
            unions.iter().filter(|(_, _, ns)| ns.contains(&visits[a].node)).map(|u| u.0).collect()
        } else {
            unions.iter().filter(|(_, es, _)| steps.iter().all(|s| es.contains(s))).map(|u| u.0).collect()
        };
        let start = visits[a].start;
        let end = if closed { visits[b].start } else { t_end };
        if candidates.is_empty() {
            return Err(Error::NoConsistentClass { start, end });
        }
        segments.push(Segment {
            start,
            end,
            nodes: visits[a..b].iter().map(|v| v.node.clone()).collect(),
            closed,
            class: candidates[0],
            provisional: false,
            candidates,
        });
    }

    // lookahead: nearest later resolved segment
    let mut next_resolved: Option<usize> = None;
    let mut ahead = vec![None; segments.len()];
    for (i, s) in segments.iter().enumerate().rev() {
        ahead[i] = next_resolved;
        if s.candidates.len() == 1 {
            next_resolved = Some(s.candidates[0]);
        }
    }
    let mut previous: Option<usize> = None;
    for (i, s) in segments.iter_mut().enumerate() {
        if s.candidates.len() > 1 {
            match ahead[i].filter(|c| s.candidates.contains(c)) {
                Some(c) => s.class = c,
                None => {
                    s.class = previous.filter(|c| s.candidates.contains(c)).unwrap_or(s.candidates[0]);
                    s.provisional = true;
                }
            }
        }
        previous = Some(s.class);
    }

    let mut intervals: Vec<Interval> = Vec::new();
    for s in &segments {
        match intervals.last_mut() {
            Some(iv) if iv.class == s.class => {
                iv.end = s.end;
                iv.provisional |= s.provisional;
            }
            _ => intervals.push(Interval { start: s.start, end: s.end, class: s.class, provisional: s.provisional }),
        }
    }
    Ok(TmvDecomposition {
        t0,
        t_end,
        sigma: intervals.iter().map(|iv| iv.class).collect(),
        intervals,
        segments,
        class_count: classes.iter().map(|c| c.index).max().unwrap_or(0),
        repaired_jumps: visits.len() - raw_visits,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassStats {
    pub visits: usize,
    pub total: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TmvStats {
    /// Keyed by class index; classes never visited are listed with zeros.
    pub per_class: BTreeMap<usize, ClassStats>,
    pub transitions: Vec<Vec<usize>>,
    pub total_time: f64,
    pub intervals: usize,
    /// Carried from the input (e.g. "s", "years"); informational.
    pub units: Option<String>,
}

impl TmvStats {
    pub fn mean(&self, class: usize) -> f64 {
        self.per_class.get(&class).map_or(0.0, |s| s.mean)
    }

    pub fn visits(&self, class: usize) -> usize {
        self.per_class.get(&class).map_or(0, |s| s.visits)
    }
}

pub fn tmv_stats(d: &TmvDecomposition) -> TmvStats {
    let mut per_class: BTreeMap<usize, ClassStats> =
        (1..=d.class_count).map(|c| (c, ClassStats { visits: 0, total: 0.0, mean: 0.0 })).collect();
    for iv in &d.intervals {
        let s = per_class.entry(iv.class).or_insert(ClassStats { visits: 0, total: 0.0, mean: 0.0 });
        s.visits += 1;
        s.total += iv.len();
    }
    for s in per_class.values_mut() {
        if s.visits > 0 {
            s.mean = s.total / s.visits as f64;
        }
    }
    TmvStats {
        per_class,
        transitions: transition_matrix(d),
        total_time: d.t_end - d.t0,
        intervals: d.intervals.len(),
        units: None,
    }
}

/// Counts of consecutive segment labels, one per crossing; entry `[i][j]`
/// is class `i+1` followed by class `j+1`. Off-diagonal entries equal the
/// transitions of σ; the diagonal counts self-concatenations.
pub fn transition_matrix(d: &TmvDecomposition) -> Vec<Vec<usize>> {
    let n = d.class_count.max(d.segments.iter().map(|s| s.class).max().unwrap_or(0));
    let mut m = vec![vec![0; n]; n];
    for w in d.segments.windows(2) {
        m[w[0].class - 1][w[1].class - 1] += 1;
    }
    m
}

/// Classes that share a node (the only pairs a trajectory can pass between
/// directly).
pub fn adjacent_classes(classes: &[GeneratexClass]) -> BTreeSet<(usize, usize)> {
    let nodes: Vec<(usize, BTreeSet<String>)> = classes.iter().map(|c| (c.index, c.node_union())).collect();
    let mut out = BTreeSet::new();
    for (i, a) in &nodes {
        for (j, b) in &nodes {
            if !a.is_disjoint(b) {
                out.insert((*i, *j));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TippingWindow {
    pub start: f64,
    pub end: f64,
    pub active: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TippingEvent {
    pub time: f64,
    pub before: BTreeSet<usize>,
    pub after: BTreeSet<usize>,
}

impl TippingEvent {
    pub fn appeared(&self) -> Vec<usize> {
        self.after.difference(&self.before).copied().collect()
    }

    pub fn vanished(&self) -> Vec<usize> {
        self.before.difference(&self.after).copied().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TippingTimeline {
    pub window: f64,
    pub stride: f64,
    pub windows: Vec<TippingWindow>,
    pub events: Vec<TippingEvent>,
}

pub fn tipping_timeline(d: &TmvDecomposition, window: f64, stride: f64) -> Result<TippingTimeline> {
    tipping_timeline_with(d, window, stride, Exec::default())
}

/// Sliding windows `[t0 + k·stride, t0 + k·stride + window]` inside the
/// record; the active set of a window is every class whose interval overlaps
/// it. An event is recorded where consecutive windows differ.
pub fn tipping_timeline_with(d: &TmvDecomposition, window: f64, stride: f64, exec: Exec) -> Result<TippingTimeline> {
    if !(window > 0.0) || !(stride > 0.0) {
        return Err(Error::InvalidParameter("window and stride must be positive".into()));
    }
    let span = d.t_end - d.t0;
    let tol = 1e-9 * span.abs().max(1.0);
    if window > span + tol {
        return Err(Error::WindowTooLarge { window, span });
    }
    let count = ((span - window + tol) / stride).floor() as usize + 1;
    let windows = par::map_range(exec, count, |k| {
        let start = d.t0 + k as f64 * stride;
        let end = start + window;
        let lo = d.intervals.partition_point(|iv| iv.end <= start);
        let active = d.intervals[lo..].iter().take_while(|iv| iv.start < end).map(|iv| iv.class).collect();
        TippingWindow { start, end, active }
    });
    let events = windows
        .windows(2)
        .filter(|w| w[0].active != w[1].active)
        .map(|w| TippingEvent { time: w[1].start, before: w[0].active.clone(), after: w[1].active.clone() })
        .collect();
    Ok(TippingTimeline { window, stride, windows, events })
}

/// Visit counts per class label in σ; convenience for reports.
pub fn sigma_counts(d: &TmvDecomposition) -> HashMap<usize, usize> {
    let mut m = HashMap::new();
    for &c in &d.sigma {
        *m.entry(c).or_insert(0) += 1;
    }
    m
}
