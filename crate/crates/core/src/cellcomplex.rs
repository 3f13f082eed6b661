//! Finite cell complexes with integer incidence.
//!
//! Boundaries are written in word form: a face may appear several times in
//! a boundary list and the incidence number is the sum of its entries. This
//! keeps the attaching loop of a 2-cell visible (needed by subdivision and
//! orientability) while still encoding minimal CW models such as the torus
//! `a b a⁻¹ b⁻¹`, whose incidences cancel to zero.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::label_cmp;
use crate::matrix::IntMatrix;

/// A cell is addressed by its dimension and a label unique in that dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CellId {
    pub dim: usize,
    pub label: String,
}

impl CellId {
    pub fn new(dim: usize, label: impl Into<String>) -> Self {
        CellId { dim, label: label.into() }
    }
}

impl Ord for CellId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.dim.cmp(&other.dim).then_with(|| label_cmp(&self.label, &other.label))
    }
}

impl PartialOrd for CellId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub id: String,
    pub dim: usize,
    #[serde(default)]
    pub boundary: Vec<(String, i64)>,
}

impl Cell {
    pub fn new(id: impl Into<String>, dim: usize) -> Self {
        Cell { id: id.into(), dim, boundary: Vec::new() }
    }

    pub fn with_boundary<S: Into<String>>(
        id: impl Into<String>,
        dim: usize,
        boundary: impl IntoIterator<Item = (S, i64)>,
    ) -> Self {
        Cell {
            id: id.into(),
            dim,
            boundary: boundary.into_iter().map(|(f, c)| (f.into(), c)).collect(),
        }
    }

    /// Net incidence per face, in first-appearance order.
    pub fn incidence(&self) -> Vec<(&str, i64)> {
        let mut out: Vec<(&str, i64)> = Vec::new();
        for (f, c) in &self.boundary {
            match out.iter_mut().find(|(g, _)| g == f) {
                Some(slot) => slot.1 += c,
                None => out.push((f, *c)),
            }
        }
        out.retain(|&(_, c)| c != 0);
        out
    }
}

/// An integer chain: a formal sum of cells of one dimension.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Chain {
    pub dim: usize,
    pub coeffs: BTreeMap<String, i64>,
}

impl Chain {
    pub fn zero(dim: usize) -> Self {
        Chain { dim, coeffs: BTreeMap::new() }
    }

    pub fn from_terms<S: Into<String>>(dim: usize, terms: impl IntoIterator<Item = (S, i64)>) -> Self {
        let mut c = Chain::zero(dim);
        for (label, k) in terms {
            c.add_term(label.into(), k).expect("chain coefficient overflow");
        }
        c
    }

    pub fn add_term(&mut self, label: String, k: i64) -> Result<()> {
        if k == 0 {
            return Ok(());
        }
        match self.coeffs.entry(label) {
            Entry::Vacant(e) => {
                e.insert(k);
            }
            Entry::Occupied(mut e) => {
                let v = e.get().checked_add(k).ok_or(Error::ArithmeticOverflow)?;
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, label: &str) -> i64 {
        self.coeffs.get(label).copied().unwrap_or(0)
    }

    /// Terms in natural label order.
    pub fn terms(&self) -> Vec<(&str, i64)> {
        let mut t: Vec<(&str, i64)> = self.coeffs.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        t.sort_by(|a, b| label_cmp(a.0, b.0));
        t
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (label, k)) in self.terms().into_iter().enumerate() {
            let sign = if k < 0 { "−" } else if i > 0 { "+" } else { "" };
            if i > 0 {
                f.write_str(" ")?;
            }
            match k.unsigned_abs() {
                1 => write!(f, "{sign}{label}")?,
                m => write!(f, "{sign}{m}·{label}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexFile {
    cells: Vec<Cell>,
}

/// A validated finite cell complex. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct CellComplex {
    cells: Vec<Vec<Cell>>,
    index: Vec<HashMap<String, usize>>,
}

impl CellComplex {
    /// Validates and assembles a complex. Cells must be listed bottom-up, so
    /// every face is already known when its coface is read.
    pub fn build(input: impl IntoIterator<Item = Cell>) -> Result<Self> {
        let mut cells: Vec<Vec<Cell>> = Vec::new();
        let mut index: Vec<HashMap<String, usize>> = Vec::new();
        for cell in input {
            while cells.len() <= cell.dim {
                cells.push(Vec::new());
                index.push(HashMap::new());
            }
            if index[cell.dim].contains_key(&cell.id) {
                return Err(Error::DuplicateCell(cell.id));
            }
            if cell.dim == 0 && !cell.boundary.is_empty() {
                return Err(Error::InvalidBoundary {
                    cell: cell.id,
                    reason: "0-cells have empty boundary".into(),
                });
            }
            for (face, c) in &cell.boundary {
                if *c == 0 {
                    return Err(Error::ZeroCoefficient { cell: cell.id.clone(), face: face.clone() });
                }
                if cell.dim > 0 && !index[cell.dim - 1].contains_key(face) {
                    return Err(Error::DanglingFace { cell: cell.id.clone(), face: face.clone() });
                }
            }
            let k = cell.dim;
            index[k].insert(cell.id.clone(), cells[k].len());
            cells[k].push(cell);
        }
        let complex = CellComplex { cells, index };
        for k in 2..complex.cells.len() {
            for cell in &complex.cells[k] {
                let dd = complex.boundary(&complex.boundary_of(cell)?)?;
                if let Some((face, _)) = dd.terms().first() {
                    return Err(Error::BoundaryNotClosed { cell: cell.id.clone(), face: face.to_string() });
                }
            }
        }
        Ok(complex)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: ComplexFile = serde_json::from_str(s)?;
        Self::build(file.cells)
    }

    pub fn from_json_value(v: serde_json::Value) -> Result<Self> {
        let file: ComplexFile = serde_json::from_value(v)?;
        Self::build(file.cells)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(ComplexFile { cells: self.iter().cloned().collect() })
            .expect("complex serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("complex serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string())?;
        Ok(())
    }

    /// Highest cell dimension; 0 for the empty complex.
    pub fn dimension(&self) -> usize {
        self.cells.iter().rposition(|c| !c.is_empty()).unwrap_or(0)
    }

    pub fn count(&self, k: usize) -> usize {
        self.cells.get(k).map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(Vec::is_empty)
    }

    pub fn cells(&self, k: usize) -> &[Cell] {
        self.cells.get(k).map_or(&[], Vec::as_slice)
    }

    /// All cells, bottom-up in construction order.
    pub fn iter(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().flatten()
    }

    pub fn cell(&self, dim: usize, label: &str) -> Option<&Cell> {
        self.position(dim, label).map(|i| &self.cells[dim][i])
    }

    pub fn position(&self, dim: usize, label: &str) -> Option<usize> {
        self.index.get(dim)?.get(label).copied()
    }

    fn require(&self, dim: usize, label: &str) -> Result<&Cell> {
        self.cell(dim, label).ok_or_else(|| Error::UnknownCell(label.to_string()))
    }

    /// Unsigned incidence matrix `∂_k`: rows are (k−1)-cells, columns k-cells.
    pub fn boundary_matrix(&self, k: usize) -> Result<IntMatrix> {
        if k == 0 || k > self.dimension() {
            return Err(Error::DimensionOutOfRange { k, dimension: self.dimension() });
        }
        self.boundary_matrix_unchecked(k)
    }

    /// `∂_k` for any k, with empty shapes outside the complex's range.
    pub(crate) fn boundary_matrix_unchecked(&self, k: usize) -> Result<IntMatrix> {
        let rows = if k == 0 { 0 } else { self.count(k - 1) };
        let mut m = IntMatrix::zeros(rows, self.count(k));
        if k == 0 {
            return Ok(m);
        }
        for (j, cell) in self.cells(k).iter().enumerate() {
            for (face, c) in &cell.boundary {
                let i = self.index[k - 1][face];
                let v = m.get(i, j).checked_add(*c).ok_or(Error::ArithmeticOverflow)?;
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn boundary_of(&self, cell: &Cell) -> Result<Chain> {
        let mut chain = Chain::zero(cell.dim.saturating_sub(1));
        for (face, c) in &cell.boundary {
            chain.add_term(face.clone(), *c)?;
        }
        Ok(chain)
    }

    /// `∂` applied to a chain.
    pub fn boundary(&self, chain: &Chain) -> Result<Chain> {
        let mut out = Chain::zero(chain.dim.saturating_sub(1));
        for (label, k) in &chain.coeffs {
            let cell = self.require(chain.dim, label)?;
            for (face, c) in &cell.boundary {
                out.add_term(face.clone(), k.checked_mul(*c).ok_or(Error::ArithmeticOverflow)?)?;
            }
        }
        Ok(out)
    }

    /// Cells that are not a face of any other cell.
    pub fn top_cells(&self) -> Vec<CellId> {
        let used: BTreeSet<(usize, &str)> = self
            .iter()
            .filter(|c| c.dim > 0)
            .flat_map(|c| c.boundary.iter().map(move |(f, _)| (c.dim - 1, f.as_str())))
            .collect();
        let mut top: Vec<CellId> = self
            .iter()
            .filter(|c| !used.contains(&(c.dim, c.id.as_str())))
            .map(|c| CellId::new(c.dim, c.id.clone()))
            .collect();
        top.sort();
        top
    }

    /// Cells having `(dim, label)` in their boundary list.
    pub fn cofaces(&self, dim: usize, label: &str) -> Vec<&Cell> {
        self.cells(dim + 1).iter().filter(|c| c.boundary.iter().any(|(f, _)| f == label)).collect()
    }

    /// Closure of the given cells (the cells and all their faces).
    pub fn closure(&self, ids: &[CellId]) -> Result<CellComplex> {
        let mut keep: BTreeSet<(usize, String)> = BTreeSet::new();
        let mut stack: Vec<(usize, String)> = Vec::new();
        for id in ids {
            self.require(id.dim, &id.label)?;
            stack.push((id.dim, id.label.clone()));
        }
        while let Some((d, l)) = stack.pop() {
            if !keep.insert((d, l.clone())) {
                continue;
            }
            for (f, _) in &self.cells[d][self.index[d][&l]].boundary {
                stack.push((d - 1, f.clone()));
            }
        }
        Self::build(self.iter().filter(|c| keep.contains(&(c.dim, c.id.clone()))).cloned())
    }

    /// Flips the orientation of one cell: its boundary and its appearances in
    /// cofaces change sign.
    pub fn reorient(&self, dim: usize, label: &str) -> Result<CellComplex> {
        self.require(dim, label)?;
        let cells = self.iter().map(|c| {
            let mut c = c.clone();
            if c.dim == dim && c.id == label {
                for e in &mut c.boundary {
                    e.1 = -e.1;
                }
            } else if c.dim == dim + 1 {
                for e in c.boundary.iter_mut().filter(|e| e.0 == label) {
                    e.1 = -e.1;
                }
            }
            c
        });
        Self::build(cells)
    }

    /// Renames cells; labels absent from `map` are kept.
    pub fn relabel(&self, map: &dyn Fn(usize, &str) -> String) -> Result<CellComplex> {
        let cells = self.iter().map(|c| Cell {
            id: map(c.dim, &c.id),
            dim: c.dim,
            boundary: c.boundary.iter().map(|(f, k)| (map(c.dim - 1, f), *k)).collect(),
        });
        Self::build(cells)
    }

    fn fresh_label(&self, dim: usize, base: &str) -> String {
        let mut label = base.to_string();
        while self.position(dim, &label).is_some() {
            label.push('\'');
        }
        label
    }

    /// Endpoints `(tail, head)` of a regular 1-cell (`−tail + head`, loops allowed).
    fn edge_ends(&self, cell: &Cell) -> Option<(String, String)> {
        match cell.boundary.as_slice() {
            [(a, -1), (b, 1)] => Some((a.clone(), b.clone())),
            [(b, 1), (a, -1)] => Some((a.clone(), b.clone())),
            _ => None,
        }
    }

    /// Splits a 1- or 2-cell in two along a new interior face.
    ///
    /// A 1-cell gains a midpoint. A 2-cell must be attached along a closed
    /// walk of regular edges with ±1 entries; it is cut by a chord between
    /// the walk's first vertex and the vertex halfway round.
    pub fn subdivide_cell(&self, dim: usize, label: &str) -> Result<CellComplex> {
        let cell = self.require(dim, label)?;
        let irregular = |reason: &str| Error::IrregularCell { cell: label.to_string(), reason: reason.into() };
        let (new_cells, halves): (Vec<Cell>, [String; 2]) = match dim {
            0 => return Err(irregular("0-cells cannot be split")),
            1 => {
                let (tail, head) = self.edge_ends(cell).ok_or_else(|| irregular("boundary is not −tail + head"))?;
                let mid = self.fresh_label(0, &format!("{label}·m"));
                let a = self.fresh_label(1, &format!("{label}·0"));
                let b = self.fresh_label(1, &format!("{label}·1"));
                (
                    vec![
                        Cell::new(mid.clone(), 0),
                        Cell::with_boundary(a.clone(), 1, [(tail, -1), (mid.clone(), 1)]),
                        Cell::with_boundary(b.clone(), 1, [(mid, -1), (head, 1)]),
                    ],
                    [a, b],
                )
            }
            2 => {
                let walk = self.attaching_walk(cell).map_err(|r| irregular(&r))?;
                let n = walk.len();
                let mid = n / 2;
                let chord = self.fresh_label(1, &format!("{label}·c"));
                let a = self.fresh_label(2, &format!("{label}·0"));
                let b = self.fresh_label(2, &format!("{label}·1"));
                let mut first: Vec<(String, i64)> = cell.boundary[..mid].to_vec();
                first.push((chord.clone(), -1));
                let mut second = vec![(chord.clone(), 1)];
                second.extend_from_slice(&cell.boundary[mid..]);
                (
                    vec![
                        Cell::with_boundary(chord, 1, [(walk[0].clone(), -1), (walk[mid].clone(), 1)]),
                        Cell { id: a.clone(), dim: 2, boundary: first },
                        Cell { id: b.clone(), dim: 2, boundary: second },
                    ],
                    [a, b],
                )
            }
            _ => return Err(irregular("only 1- and 2-cells are subdivided")),
        };

        let mut out: Vec<Cell> = Vec::new();
        for c in self.iter() {
            if c.dim == dim && c.id == label {
                continue;
            }
            let mut c = c.clone();
            if c.dim == dim + 1 {
                let mut boundary = Vec::with_capacity(c.boundary.len() + 1);
                for (f, k) in c.boundary {
                    if f == label {
                        let (x, y) = if k > 0 { (0, 1) } else { (1, 0) };
                        boundary.push((halves[x].clone(), k));
                        boundary.push((halves[y].clone(), k));
                    } else {
                        boundary.push((f, k));
                    }
                }
                c.boundary = boundary;
            }
            out.push(c);
        }
        // new cells go right after the last cell of the lowest dimension they need
        for nc in new_cells {
            let at = out.iter().rposition(|c| c.dim <= nc.dim).map_or(0, |p| p + 1);
            out.insert(at, nc);
        }
        Self::build(out)
    }

    /// Vertex sequence visited by the attaching loop of a 2-cell.
    fn attaching_walk(&self, cell: &Cell) -> std::result::Result<Vec<String>, String> {
        if cell.boundary.len() < 2 {
            return Err("attaching loop needs at least two edges".into());
        }
        let mut walk = Vec::with_capacity(cell.boundary.len());
        let mut prev_head: Option<String> = None;
        for (e, k) in &cell.boundary {
            let edge = &self.cells[1][self.index[1][e]];
            let (tail, head) = self.edge_ends(edge).ok_or_else(|| format!("edge {e} is not regular"))?;
            let (from, to) = match k {
                1 => (tail, head),
                -1 => (head, tail),
                _ => return Err(format!("edge {e} attached with coefficient {k}")),
            };
            if let Some(p) = &prev_head {
                if *p != from {
                    return Err(format!("edge {e} does not continue the loop"));
                }
            }
            walk.push(from);
            prev_head = Some(to);
        }
        if prev_head.as_ref() != walk.first() {
            return Err("attaching walk is not closed".into());
        }
        Ok(walk)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mobius() -> CellComplex {
        CellComplex::build([
            Cell::new("x", 0),
            Cell::new("y", 0),
            Cell::with_boundary("u", 1, [("x", -1), ("y", 1)]),
            Cell::with_boundary("s", 1, [("y", -1), ("x", 1)]),
            Cell::with_boundary("t", 1, [("x", -1), ("y", 1)]),
            Cell::with_boundary("m", 2, [("u", 1), ("s", 1), ("t", 1), ("s", 1)]),
        ])
        .unwrap()
    }

    fn torus() -> CellComplex {
        CellComplex::build([
            Cell::new("v", 0),
            Cell::with_boundary("a", 1, [("v", -1), ("v", 1)]),
            Cell::with_boundary("b", 1, [("v", -1), ("v", 1)]),
            Cell::with_boundary("T", 2, [("a", 1), ("b", 1), ("a", -1), ("b", -1)]),
        ])
        .unwrap()
    }

    #[test]
    fn point_has_dimension_zero() {
        let k = CellComplex::build([Cell::new("p", 0)]).unwrap();
        assert_eq!(k.dimension(), 0);
        assert_eq!(k.top_cells(), vec![CellId::new(0, "p")]);
    }

    #[test]
    fn edge_boundary_is_head_minus_tail() {
        let k = CellComplex::build([
            Cell::new("i", 0),
            Cell::new("j", 0),
            Cell::with_boundary("⟨i,j⟩", 1, [("i", -1), ("j", 1)]),
        ])
        .unwrap();
        let m = k.boundary_matrix(1).unwrap();
        assert_eq!(m.column(0), vec![-1, 1]);
    }

    #[test]
    fn mobius_dd_is_zero() {
        let k = mobius();
        assert_eq!(k.dimension(), 2);
        let dd = k.boundary_matrix(1).unwrap().checked_mul(&k.boundary_matrix(2).unwrap()).unwrap();
        assert!(dd.is_zero());
        // s is traversed twice in the same direction
        assert_eq!(k.boundary_matrix(2).unwrap().column(0), vec![1, 2, 1]);
    }

    #[test]
    fn torus_top_boundary_vanishes() {
        assert!(torus().boundary_matrix(2).unwrap().is_zero());
    }

    #[test]
    fn broken_attaching_loop_is_rejected() {
        let r = CellComplex::build([
            Cell::new("a", 0),
            Cell::new("b", 0),
            Cell::new("c", 0),
            Cell::with_boundary("ab", 1, [("a", -1), ("b", 1)]),
            Cell::with_boundary("bc", 1, [("b", -1), ("c", 1)]),
            Cell::with_boundary("ca", 1, [("c", -1), ("a", 1)]),
            Cell::with_boundary("f", 2, [("ab", 1), ("bc", 1)]),
        ]);
        assert!(matches!(r, Err(Error::BoundaryNotClosed { ref cell, .. }) if cell == "f"));
    }

    #[test]
    fn dangling_and_duplicate() {
        let r = CellComplex::build([Cell::new("a", 0), Cell::with_boundary("e", 1, [("a", -1), ("z", 1)])]);
        assert!(matches!(r, Err(Error::DanglingFace { ref face, .. }) if face == "z"));
        let r = CellComplex::build([Cell::new("a", 0), Cell::new("a", 0)]);
        assert!(matches!(r, Err(Error::DuplicateCell(_))));
        // same label in different dimensions is fine
        assert!(CellComplex::build([Cell::new("a", 0), Cell::with_boundary("a", 1, [("a", -1), ("a", 1)])]).is_ok());
    }

    #[test]
    fn out_of_range_degree() {
        assert!(matches!(torus().boundary_matrix(3), Err(Error::DimensionOutOfRange { k: 3, .. })));
        assert!(matches!(torus().boundary_matrix(0), Err(Error::DimensionOutOfRange { .. })));
    }

    #[test]
    fn empty_degree_gives_empty_matrix() {
        let k = CellComplex::build([Cell::new("a", 0), Cell::new("b", 0), Cell::with_boundary("f", 2, Vec::<(String, i64)>::new())]).unwrap();
        let m = k.boundary_matrix(1).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (2, 0));
    }

    #[test]
    fn hanging_edge_is_top() {
        let k = CellComplex::build([
            Cell::new("a", 0),
            Cell::new("b", 0),
            Cell::new("c", 0),
            Cell::with_boundary("ab", 1, [("a", -1), ("b", 1)]),
            Cell::with_boundary("bc", 1, [("b", -1), ("c", 1)]),
            Cell::with_boundary("ca", 1, [("c", -1), ("a", 1)]),
            Cell::with_boundary("ad", 1, [("a", -1), ("a", 1)]),
            Cell::with_boundary("f", 2, [("ab", 1), ("bc", 1), ("ca", 1)]),
        ])
        .unwrap();
        assert_eq!(k.top_cells(), vec![CellId::new(1, "ad"), CellId::new(2, "f")]);
    }

    #[test]
    fn subdivision_keeps_dd_zero() {
        let k = mobius();
        let k1 = k.subdivide_cell(1, "s").unwrap();
        assert_eq!((k1.count(0), k1.count(1), k1.count(2)), (3, 4, 1));
        let k2 = k.subdivide_cell(2, "m").unwrap();
        assert_eq!(k2.top_cells().len(), 2);
        let t = torus().subdivide_cell(2, "T").unwrap();
        assert_eq!(t.count(2), 2);
        assert!(matches!(k.subdivide_cell(0, "x"), Err(Error::IrregularCell { .. })));
    }

    #[test]
    fn reorient_flips_signs() {
        let k = torus().reorient(1, "a").unwrap();
        assert_eq!(k.cell(1, "a").unwrap().boundary, vec![("v".to_string(), 1), ("v".to_string(), -1)]);
        assert_eq!(k.cell(2, "T").unwrap().boundary[0], ("a".to_string(), -1));
    }

    #[test]
    fn json_round_trip() {
        let k = mobius();
        let back = CellComplex::from_json_str(&k.to_json_string()).unwrap();
        assert_eq!(k, back);
        let err = CellComplex::from_json_str(r#"{"cells":[{"id":"e","dim":1,"boundary":[["q",1]]}]}"#);
        assert!(matches!(err, Err(Error::DanglingFace { .. })));
    }

    #[test]
    fn chain_display() {
        let c = Chain::from_terms(1, [("b", 2), ("a", -1), ("c", 1)]);
        assert_eq!(c.to_string(), "−a +2·b +c");
    }
}
