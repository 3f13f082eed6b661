//! Best-effort BraMAH-style construction: clusters become 2-cells glued along
//! the dual blocks of their witness nerve, and the flow between clusters
//! becomes the digraph. A nerve triangle needs its own witnesses and all
//! three of its edges witnessed as nearest pairs.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::charts::{scaling_test, CellAssignment, LocalChart, ScalingReport};
use super::Trajectory;
use crate::cellcomplex::{Cell, CellComplex};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::templex::{Digraph, PoincareMode, Templex};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BramahConfig {
    pub cells: usize,
    /// Expected local dimension of every cluster.
    pub dimension: usize,
    pub check_dimension: bool,
    pub scaling_steps: usize,
    /// Samples needed before a nerve simplex is kept.
    pub min_witnesses: usize,
    /// Consecutive-sample transitions needed before a digraph edge is kept.
    /// An edge also needs more crossings than its reverse.
    pub min_transitions: usize,
    pub max_iterations: usize,
    #[serde(skip)]
    pub exec: Exec,
}

impl BramahConfig {
    pub fn new(cells: usize) -> Self {
        BramahConfig {
            cells,
            dimension: 2,
            check_dimension: true,
            scaling_steps: 6,
            min_witnesses: 1,
            min_transitions: 1,
            max_iterations: 100,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BramahOutput {
    pub templex: Templex,
    pub charts: Vec<LocalChart>,
    pub assignment: CellAssignment,
    pub scaling: Vec<Option<ScalingReport>>,
    pub warnings: Vec<String>,
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(p: &[f64], centers: &[Vec<f64>], k: usize) -> Vec<usize> {
    let mut idx: Vec<(f64, usize)> = centers.iter().enumerate().map(|(i, c)| (dist2(p, c), i)).collect();
    idx.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    idx.into_iter().take(k).map(|(_, i)| i).collect()
}

/// Lloyd iterations from a farthest-point seeding anchored at the first sample.
fn kmeans(points: &[Vec<f64>], k: usize, max_iterations: usize, exec: Exec) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut centers = vec![points[0].clone()];
    let mut d: Vec<f64> = points.iter().map(|p| dist2(p, &centers[0])).collect();
    while centers.len() < k {
        let far = (0..points.len()).fold(0, |best, i| if d[i] > d[best] { i } else { best });
        centers.push(points[far].clone());
        for (di, p) in d.iter_mut().zip(points) {
            *di = di.min(dist2(p, &points[far]));
        }
    }
    let mut labels: Vec<usize> = Vec::new();
    for _ in 0..max_iterations {
        let next: Vec<usize> = par::map_slice(exec, points, |p| nearest(p, &centers, 1)[0]);
        if next == labels {
            break;
        }
        labels = next;
        let dim = points[0].len();
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &l) in points.iter().zip(&labels) {
            counts[l] += 1;
            sums[l].iter_mut().zip(p).for_each(|(s, v)| *s += v);
        }
        for c in 0..k {
            if counts[c] > 0 {
                centers[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }
    }
    (centers, labels)
}

fn vertex(i: usize) -> String {
    format!("c{}", i + 1)
}

fn mid(e: (usize, usize)) -> String {
    format!("m{}-{}", e.0 + 1, e.1 + 1)
}

fn bary(f: (usize, usize, usize)) -> String {
    format!("t{}-{}-{}", f.0 + 1, f.1 + 1, f.2 + 1)
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// The other two vertices of `f` besides `c`.
fn opposite(f: (usize, usize, usize), c: usize) -> (usize, usize) {
    let v: Vec<usize> = [f.0, f.1, f.2].into_iter().filter(|&x| x != c).collect();
    (v[0], v[1])
}

struct Trail {
    start: (usize, usize),
    end: (usize, usize),
    steps: Vec<((usize, usize, usize), (usize, usize), (usize, usize))>,
}

impl Trail {
    fn is_closed(&self) -> bool {
        !self.steps.is_empty() && self.start == self.end
    }
}

/// Decomposes the link of nerve vertex `c` into greedy trails, odd-degree
/// starts first. Link vertices are the nerve edges at `c`; link edges are the
/// triangles at `c`. Isolated link vertices become empty trails.
fn link_trails(c: usize, edges: &[(usize, usize)], triangles: &[(usize, usize, usize)]) -> Vec<Trail> {
    let mut incident: BTreeMap<(usize, usize), Vec<usize>> = edges.iter().map(|&e| (e, Vec::new())).collect();
    for (t, &f) in triangles.iter().enumerate() {
        let (a, b) = opposite(f, c);
        incident.entry(ordered(c, a)).or_default().push(t);
        incident.entry(ordered(c, b)).or_default().push(t);
    }
    let mut used = vec![false; triangles.len()];
    let mut trails: Vec<Trail> =
        incident.iter().filter(|(_, ts)| ts.is_empty()).map(|(&e, _)| Trail { start: e, end: e, steps: Vec::new() }).collect();
    loop {
        let free = |e: &(usize, usize), used: &[bool]| incident[e].iter().filter(|&&t| !used[t]).count();
        let start = incident
            .keys()
            .find(|e| free(e, &used) % 2 == 1)
            .or_else(|| incident.keys().find(|e| free(e, &used) > 0))
            .copied();
        let Some(start) = start else { break };
        let mut trail = Trail { start, end: start, steps: Vec::new() };
        while let Some(&t) = incident[&trail.end].iter().find(|&&t| !used[t]) {
            used[t] = true;
            let (a, b) = opposite(triangles[t], c);
            let (ea, eb) = (ordered(c, a), ordered(c, b));
            let to = if ea == trail.end { eb } else { ea };
            trail.steps.push((triangles[t], trail.end, to));
            trail.end = to;
        }
        trails.push(trail);
    }
    trails
}

/// Where an open trail of cluster `c` enters or leaves its border: a free end
/// of the border when one exists, otherwise the cluster's own vertex. Returns
/// the port and the connecting 1-cell as (tail, head).
fn trail_port(c: usize, e: (usize, usize), degree: usize, at_start: bool) -> (String, (String, String)) {
    let m = mid(e);
    match degree {
        0 => {
            let x = format!("x{}-{}/{}", e.0 + 1, e.1 + 1, if at_start { 0 } else { 1 });
            (x.clone(), (m, x))
        }
        1 => {
            let x = format!("x{}-{}", e.0 + 1, e.1 + 1);
            (x.clone(), (m, x))
        }
        _ => (vertex(c), (vertex(c), m)),
    }
}

pub fn build_bramah(traj: &Trajectory, cfg: &BramahConfig) -> Result<BramahOutput> {
    let k = cfg.cells;
    if k == 0 {
        return Err(Error::InvalidParameter("cell count must be positive".into()));
    }
    let need = 8 * k;
    if traj.len() < need {
        return Err(Error::InsufficientPoints { have: traj.len(), need });
    }
    let mut warnings = Vec::new();
    let (centers, labels) = kmeans(&traj.points, k, cfg.max_iterations, cfg.exec);

    let mut members: Vec<Vec<&[f64]>> = vec![Vec::new(); k];
    for (p, &l) in traj.points.iter().zip(&labels) {
        members[l].push(p);
    }
    let mut charts = Vec::with_capacity(k);
    let mut scaling = Vec::with_capacity(k);
    for (i, pts) in members.iter().enumerate() {
        if pts.is_empty() {
            return Err(Error::InsufficientPoints { have: 0, need: 1 });
        }
        let chart = LocalChart::fit((i + 1).to_string(), pts)?;
        let report = match scaling_test(pts, &chart.center, cfg.scaling_steps) {
            Ok(r) => Some(r),
            Err(e) => {
                warnings.push(format!("cluster {}: scaling test skipped ({e})", i + 1));
                None
            }
        };
        if cfg.check_dimension {
            if let Some(r) = &report {
                if r.dimension != cfg.dimension {
                    return Err(Error::LocalDimensionMismatch {
                        cluster: i + 1,
                        found: r.dimension,
                        expected: cfg.dimension,
                        profile: chart.singular_values.clone(),
                    });
                }
            }
        }
        charts.push(chart);
        scaling.push(report);
    }

    let witnesses = par::map_slice(cfg.exec, &traj.points, |p| nearest(p, &centers, 3));
    let mut edge_count: HashMap<(usize, usize), usize> = HashMap::new();
    let mut tri_count: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for w in &witnesses {
        if w.len() >= 2 {
            *edge_count.entry(ordered(w[0], w[1])).or_default() += 1;
        }
        if w.len() >= 3 {
            let mut t = [w[0], w[1], w[2]];
            t.sort_unstable();
            *tri_count.entry((t[0], t[1], t[2])).or_default() += 1;
        }
    }
    let witnessed = |e: (usize, usize)| edge_count.get(&e).is_some_and(|&n| n >= cfg.min_witnesses);
    let triangles: BTreeSet<(usize, usize, usize)> = tri_count
        .into_iter()
        .filter(|&((a, b, c), n)| n >= cfg.min_witnesses && witnessed((a, b)) && witnessed((a, c)) && witnessed((b, c)))
        .map(|(t, _)| t)
        .collect();

    let edges: BTreeSet<(usize, usize)> =
        edge_count.iter().filter(|&(_, &n)| n >= cfg.min_witnesses).map(|(&e, _)| e).collect();
    let mut degree: HashMap<(usize, usize), usize> = HashMap::new();
    for &(a, b, c) in &triangles {
        for e in [(a, b), (a, c), (b, c)] {
            *degree.entry(e).or_default() += 1;
        }
    }

    let mut one_cells: BTreeMap<String, (String, String)> = BTreeMap::new();
    let mut tops = Vec::with_capacity(k);
    for c in 0..k {
        let star: Vec<_> = triangles.iter().copied().filter(|&(a, b, d)| a == c || b == c || d == c).collect();
        let at_c: Vec<_> = edges.iter().copied().filter(|&(a, b)| a == c || b == c).collect();
        let mut chain: BTreeMap<String, i64> = BTreeMap::new();
        // traverses the 1-cell tail→head from `from`
        let mut walk = |(tail, head): (String, String), from: &str, label: Option<String>, chain: &mut BTreeMap<String, i64>| {
            let label = label.unwrap_or_else(|| format!("{tail}|{head}"));
            *chain.entry(label.clone()).or_default() += if tail == from { 1 } else { -1 };
            one_cells.insert(label, (tail, head));
        };
        if at_c.is_empty() {
            let v = vertex(c);
            walk((v.clone(), v.clone()), &v, Some(format!("ℓ{}", c + 1)), &mut chain);
        }
        let trails = link_trails(c, &at_c, &star);
        let deg = |e| degree.get(&e).copied().unwrap_or(0);
        let mut ports = Vec::new();
        for trail in &trails {
            for &(f, from, to) in &trail.steps {
                walk((mid(from), bary(f)), &mid(from), None, &mut chain);
                walk((mid(to), bary(f)), &bary(f), None, &mut chain);
            }
            if trail.is_closed() {
                continue;
            }
            let (p, into) = trail_port(c, trail.start, deg(trail.start), true);
            walk(into, &p, None, &mut chain);
            let (q, out) = trail_port(c, trail.end, deg(trail.end), false);
            walk(out, &mid(trail.end), None, &mut chain);
            ports.push((p, q));
        }
        // private arcs close the walk from each trail's exit to the next entry
        for i in 0..ports.len() {
            let (from, to) = (&ports[i].1, &ports[(i + 1) % ports.len()].0);
            if from != to {
                walk((from.clone(), to.clone()), from, Some(format!("{from}|{to}@{}", c + 1)), &mut chain);
            }
        }
        chain.retain(|_, v| *v != 0);
        tops.push(Cell::with_boundary(format!("γ{}", c + 1), 2, chain));
    }
    let mut cells_by_dim: [BTreeMap<String, Vec<(String, i64)>>; 2] = Default::default();
    for (label, (a, b)) in one_cells {
        cells_by_dim[0].insert(a.clone(), Vec::new());
        cells_by_dim[0].insert(b.clone(), Vec::new());
        cells_by_dim[1].insert(label, vec![(a, -1), (b, 1)]);
    }
    let cells = cells_by_dim
        .into_iter()
        .enumerate()
        .flat_map(|(d, m)| m.into_iter().map(move |(id, b)| Cell::with_boundary(id, d, b)))
        .chain(tops);
    let complex = CellComplex::build(cells)?;

    let mut transitions: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for w in labels.windows(2) {
        if w[0] != w[1] {
            *transitions.entry((w[0], w[1])).or_default() += 1;
        }
    }
    let nodes: Vec<String> = (1..=k).map(|i| i.to_string()).collect();
    let edges: Vec<(String, String)> = transitions
        .iter()
        .filter(|&(&(a, b), &n)| n >= cfg.min_transitions && n > transitions.get(&(b, a)).copied().unwrap_or(0))
        .map(|(&e, &n)| (e, n))
        .map(|((a, b), _)| ((a + 1).to_string(), (b + 1).to_string()))
        .collect();
    let digraph = Digraph::new(nodes.clone(), edges)?;
    let binding = nodes.iter().map(|n| (n.clone(), format!("γ{n}"))).collect();
    let mut templex = Templex::new(complex, digraph, binding)?;
    templex.metadata = Some(serde_json::json!({ "builder": "bramah", "config": cfg, "points": traj.len() }));
    if templex.poincare_edges_with(PoincareMode::Complex)?.is_empty()
        && !templex.poincare_edges_with(PoincareMode::Digraph)?.is_empty()
    {
        warnings.push("no joining locus in the built complex; use digraph-mode Poincaré edges".into());
    }

    let assignment = CellAssignment {
        times: traj.times.clone(),
        labels: labels.iter().map(|&l| Some((l + 1).to_string())).collect(),
    };
    Ok(BramahOutput { templex, charts, assignment, scaling, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::homology;

    fn disk(n: usize) -> Trajectory {
        let mut pts = Vec::new();
        let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
        for i in 0..n {
            let r = ((i as f64 + 0.5) / n as f64).sqrt();
            let a = i as f64 * golden;
            pts.push(vec![r * a.cos(), r * a.sin(), 0.001 * ((i % 7) as f64 - 3.0)]);
        }
        Trajectory::new((0..n).map(|i| i as f64).collect(), pts).unwrap()
    }

    #[test]
    fn single_region_disk() {
        let out = build_bramah(&disk(400), &BramahConfig::new(1)).unwrap();
        let h = homology(out.templex.complex.as_ref().unwrap()).unwrap();
        assert_eq!(h[0].betti, 1);
        assert!(h[1].is_trivial());
        assert!(out.templex.digraph.edges().is_empty());
    }

    #[test]
    fn disk_cover_is_contractible() {
        let out = build_bramah(&disk(2000), &BramahConfig::new(7)).unwrap();
        let h = homology(out.templex.complex.as_ref().unwrap()).unwrap();
        assert_eq!(h[0].betti, 1);
        assert!(h[1].is_trivial(), "{}", h[1]);
    }

    #[test]
    fn circulating_annulus_has_one_hole() {
        let n = 3000;
        let pts: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let a = i as f64 * 0.05;
                let r = 1.0 + 0.3 * ((i as f64 * 0.618).fract());
                vec![r * a.cos(), r * a.sin(), 0.0]
            })
            .collect();
        let t = Trajectory::new((0..n).map(|i| i as f64).collect(), pts).unwrap();
        let mut cfg = BramahConfig::new(8);
        cfg.check_dimension = false;
        let out = build_bramah(&t, &cfg).unwrap();
        let h = homology(out.templex.complex.as_ref().unwrap()).unwrap();
        assert_eq!((h[0].betti, h[1].betti), (1, 1));
        assert!(h[2].is_trivial());
        let cycles = crate::genex::elementary_cycles(&out.templex.digraph, 100).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].len(), 8);
    }

    #[test]
    fn thick_cloud_fails_condition_three() {
        let pts: Vec<Vec<f64>> = (0..1000)
            .map(|i| {
                let f = |m: usize| ((i * m) % 101) as f64 / 101.0;
                vec![f(37), f(59), f(83)]
            })
            .collect();
        let t = Trajectory::new((0..1000).map(|i| i as f64).collect(), pts).unwrap();
        let err = build_bramah(&t, &BramahConfig::new(1)).unwrap_err();
        assert!(matches!(err, Error::LocalDimensionMismatch { found: 3, expected: 2, .. }), "{err:?}");
    }
}
