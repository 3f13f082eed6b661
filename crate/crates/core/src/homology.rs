//! Integer homology through Smith normal form, and orientability of
//! pure subcomplexes.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cellcomplex::{Cell, CellComplex, CellId, Chain};
use crate::error::{Error, Result};
use crate::label::label_cmp;
use crate::matrix::{smith_normal_form, IntMatrix, SmithDecomposition};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub k: usize,
    pub betti: usize,
    /// Invariant factors greater than one, in divisibility order.
    pub torsion: Vec<i64>,
    /// One cycle per free generator.
    pub generators: Vec<Chain>,
    /// One cycle per torsion factor, aligned with `torsion`.
    pub torsion_generators: Vec<Chain>,
}

impl HomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("ℤ".to_string()),
            b => parts.push(format!("ℤ^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("ℤ/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" ⊕ "))
        }
    }
}

/// Coordinates of a cycle's class: free part and torsion residues.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyClass {
    pub free: Vec<i64>,
    pub torsion: Vec<i64>,
}

/// The two reductions behind `H_k`.
struct Reduction {
    n: usize,
    /// rank of ∂_k
    r: usize,
    dk: IntMatrix,
    snf_k: SmithDecomposition,
    snf_w: SmithDecomposition,
}

impl Reduction {
    fn new(complex: &CellComplex, k: usize) -> Result<Self> {
        let dk = complex.boundary_matrix_unchecked(k)?;
        let dk1 = complex.boundary_matrix_unchecked(k + 1)?;
        let snf_k = smith_normal_form(&dk)?;
        let r = snf_k.rank;
        // image of ∂_{k+1} in the basis given by the columns of V_k;
        // its first r rows vanish because im ∂_{k+1} ⊆ ker ∂_k
        let w = snf_k.v_inv.checked_mul(&dk1)?.row_slice(r, dk.ncols());
        let snf_w = smith_normal_form(&w)?;
        Ok(Reduction { n: dk.ncols(), r, dk, snf_k, snf_w })
    }

    /// Basis of ker ∂_k adapted to im ∂_{k+1}: column j pairs with the j-th
    /// invariant factor of W (or is free beyond the rank).
    fn adapted_basis(&self) -> Result<IntMatrix> {
        let kernel = self.snf_k.v.col_slice(self.r, self.n);
        kernel.checked_mul(&self.snf_w.u_inv)
    }

    fn class(&self, x: &[i64]) -> Result<Option<HomologyClass>> {
        if self.dk.checked_mul_vec(x)?.iter().any(|&v| v != 0) {
            return Ok(None);
        }
        let y = self.snf_k.v_inv.checked_mul_vec(x)?;
        let z = self.snf_w.u.checked_mul_vec(&y[self.r..])?;
        let factors = self.snf_w.invariant_factors();
        let torsion = factors
            .iter()
            .zip(&z)
            .filter(|(&d, _)| d > 1)
            .map(|(&d, &c)| c.rem_euclid(d))
            .collect();
        Ok(Some(HomologyClass { free: z[factors.len()..].to_vec(), torsion }))
    }
}

fn chain_from_column(complex: &CellComplex, k: usize, m: &IntMatrix, j: usize) -> Chain {
    Chain::from_terms(k, complex.cells(k).iter().zip(m.column(j)).map(|(c, v)| (c.id.clone(), v)))
}

fn coordinates(complex: &CellComplex, chain: &Chain) -> Result<Vec<i64>> {
    let mut x = vec![0; complex.count(chain.dim)];
    for (label, &v) in &chain.coeffs {
        let i = complex.position(chain.dim, label).ok_or_else(|| Error::UnknownCell(label.clone()))?;
        x[i] = v;
    }
    Ok(x)
}

/// `H_k(K; ℤ)` with explicit generator cycles. Degrees above the dimension
/// give the trivial group.
pub fn homology_group(complex: &CellComplex, k: usize) -> Result<HomologyGroup> {
    let red = Reduction::new(complex, k)?;
    let basis = red.adapted_basis()?;
    let factors = red.snf_w.invariant_factors();
    let mut torsion = Vec::new();
    let mut torsion_generators = Vec::new();
    for (j, &d) in factors.iter().enumerate() {
        if d > 1 {
            torsion.push(d);
            torsion_generators.push(chain_from_column(complex, k, &basis, j));
        }
    }
    let generators = (factors.len()..basis.ncols()).map(|j| chain_from_column(complex, k, &basis, j)).collect();
    Ok(HomologyGroup { k, betti: basis.ncols() - factors.len(), torsion, generators, torsion_generators })
}

/// `H_0 … H_dim`.
pub fn homology(complex: &CellComplex) -> Result<Vec<HomologyGroup>> {
    (0..=complex.dimension()).map(|k| homology_group(complex, k)).collect()
}

/// Homology class of a k-cycle in the basis of [`homology_group`];
/// `None` when the chain is not a cycle.
pub fn class_of(complex: &CellComplex, chain: &Chain) -> Result<Option<HomologyClass>> {
    let red = Reduction::new(complex, chain.dim)?;
    red.class(&coordinates(complex, chain)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientabilityReport {
    pub orientable: bool,
    /// Sign per selected top-cell, when orientable.
    pub orientation: Option<BTreeMap<String, i8>>,
    /// First interior face with |coefficient| ≥ 2, when not.
    pub witness: Option<String>,
    /// The signed sum Σ s_c ∂c under the propagated signs.
    pub chain: Chain,
}

struct Propagation {
    signs: Vec<i8>,
    components: usize,
    chain: Chain,
    witness: Option<String>,
}

/// Sign propagation over the dual graph of a pure selection of cells.
///
/// A face is interior when it is used exactly twice (counting multiplicity)
/// by the selection. Interior faces glue the cells using them; a consistent
/// sign choice makes every interior face cancel in Σ s_c ∂c.
fn propagate(cells: &[&Cell]) -> Result<Propagation> {
    let dim = cells.first().map_or(0, |c| c.dim);
    // face -> (cell, entry coefficient) for every appearance
    let mut slots: BTreeMap<&str, Vec<(usize, i64)>> = BTreeMap::new();
    for (i, c) in cells.iter().enumerate() {
        for (f, k) in &c.boundary {
            slots.entry(f.as_str()).or_default().push((i, *k));
        }
    }
    let mut faces: Vec<&str> = slots.keys().copied().collect();
    faces.sort_by(|a, b| label_cmp(a, b));

    let mut adjacency: Vec<Vec<(usize, i8)>> = vec![Vec::new(); cells.len()];
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); cells.len()];
    for f in &faces {
        let uses = &slots[f];
        let mut owners: Vec<usize> = uses.iter().map(|u| u.0).collect();
        owners.dedup();
        for w in owners.windows(2) {
            touching[w[0]].push(w[1]);
            touching[w[1]].push(w[0]);
        }
        let weight: i64 = uses.iter().map(|u| u.1.abs()).sum();
        if let [(a, ca), (b, cb)] = uses.as_slice() {
            if weight == 2 && a != b {
                // s_a·ca + s_b·cb = 0
                let rel = (-ca * cb) as i8;
                adjacency[*a].push((*b, rel));
                adjacency[*b].push((*a, rel));
            }
        }
    }

    let mut component = vec![usize::MAX; cells.len()];
    let mut components = 0;
    for start in 0..cells.len() {
        if component[start] != usize::MAX {
            continue;
        }
        let mut queue = VecDeque::from([start]);
        component[start] = components;
        while let Some(i) = queue.pop_front() {
            for &j in &touching[i] {
                if component[j] == usize::MAX {
                    component[j] = components;
                    queue.push_back(j);
                }
            }
        }
        components += 1;
    }

    let mut signs = vec![0i8; cells.len()];
    for start in 0..cells.len() {
        if signs[start] != 0 {
            continue;
        }
        signs[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for &(j, rel) in &adjacency[i] {
                if signs[j] == 0 {
                    signs[j] = signs[i] * rel;
                    queue.push_back(j);
                }
            }
        }
    }

    let mut chain = Chain::zero(dim.saturating_sub(1));
    for (c, &s) in cells.iter().zip(&signs) {
        for (f, k) in &c.boundary {
            chain.add_term(f.clone(), i64::from(s) * k)?;
        }
    }
    let witness = faces
        .iter()
        .find(|f| {
            let weight: i64 = slots[*f].iter().map(|u| u.1.abs()).sum();
            weight == 2 && chain.get(f).abs() >= 2
        })
        .map(|f| f.to_string());
    Ok(Propagation { signs, components, chain, witness })
}

fn select<'a>(complex: &'a CellComplex, ids: &[CellId]) -> Result<Vec<&'a Cell>> {
    ids.iter()
        .map(|id| complex.cell(id.dim, &id.label).ok_or_else(|| Error::UnknownCell(id.label.clone())))
        .collect()
}

/// Orientability of a face-connected pure selection of top-cells (all
/// top-cells when `selection` is `None`).
pub fn orientability_report(complex: &CellComplex, selection: Option<&[CellId]>) -> Result<OrientabilityReport> {
    let ids = match selection {
        Some(s) => s.to_vec(),
        None => complex.top_cells(),
    };
    let mut dims: Vec<usize> = ids.iter().map(|c| c.dim).collect();
    dims.sort_unstable();
    dims.dedup();
    if dims.len() > 1 {
        return Err(Error::MixedDimensionSelection(dims));
    }
    let cells = select(complex, &ids)?;
    let p = propagate(&cells)?;
    if p.components > 1 {
        return Err(Error::DisconnectedSelection(p.components));
    }
    Ok(report(&cells, p))
}

fn report(cells: &[&Cell], p: Propagation) -> OrientabilityReport {
    let orientable = p.witness.is_none();
    OrientabilityReport {
        orientable,
        orientation: orientable
            .then(|| cells.iter().zip(&p.signs).map(|(c, &s)| (c.id.clone(), s)).collect()),
        witness: p.witness,
        chain: p.chain,
    }
}

/// Betti numbers (at least β0..β2), torsion and global orientability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BettiTable {
    pub betti: Vec<usize>,
    pub torsion: Vec<Vec<i64>>,
    pub orientable: bool,
    pub witness: Option<String>,
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.betti.iter().map(ToString::to_string).collect();
        write!(f, "{} {}", b.join(" "), if self.orientable { "orientable" } else { "non-orientable" })
    }
}

/// Table-I style summary. Orientability is judged on the top-dimensional
/// cells, component by component.
pub fn betti_table(complex: &CellComplex) -> Result<BettiTable> {
    let groups = homology(complex)?;
    let mut betti: Vec<usize> = groups.iter().map(|g| g.betti).collect();
    let mut torsion: Vec<Vec<i64>> = groups.into_iter().map(|g| g.torsion).collect();
    while betti.len() < 3 {
        betti.push(0);
        torsion.push(Vec::new());
    }
    let dim = complex.dimension();
    let ids: Vec<CellId> = complex.top_cells().into_iter().filter(|c| c.dim == dim).collect();
    let cells = select(complex, &ids)?;
    let p = propagate(&cells)?;
    Ok(BettiTable { betti, torsion, orientable: p.witness.is_none(), witness: p.witness })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk() -> CellComplex {
        CellComplex::build([
            Cell::new("a", 0),
            Cell::new("b", 0),
            Cell::with_boundary("ab", 1, [("a", -1), ("b", 1)]),
            Cell::with_boundary("ba", 1, [("b", -1), ("a", 1)]),
            Cell::with_boundary("D", 2, [("ab", 1), ("ba", 1)]),
        ])
        .unwrap()
    }

    fn klein() -> CellComplex {
        CellComplex::build([
            Cell::new("v", 0),
            Cell::with_boundary("a", 1, [("v", -1), ("v", 1)]),
            Cell::with_boundary("b", 1, [("v", -1), ("v", 1)]),
            Cell::with_boundary("K", 2, [("a", 1), ("b", 1), ("a", -1), ("b", 1)]),
        ])
        .unwrap()
    }

    #[test]
    fn disk_is_contractible_and_orientable() {
        let k = disk();
        let h: Vec<String> = homology(&k).unwrap().iter().map(ToString::to_string).collect();
        assert_eq!(h, vec!["ℤ", "0", "0"]);
        let r = orientability_report(&k, None).unwrap();
        assert!(r.orientable);
        assert_eq!(r.orientation.unwrap()["D"], 1);
    }

    #[test]
    fn klein_has_two_torsion() {
        let h1 = homology_group(&klein(), 1).unwrap();
        assert_eq!(h1.betti, 1);
        assert_eq!(h1.torsion, vec![2]);
        assert_eq!(h1.to_string(), "ℤ ⊕ ℤ/2");
        let h2 = homology_group(&klein(), 2).unwrap();
        assert!(h2.is_trivial());
        let r = orientability_report(&klein(), None).unwrap();
        assert_eq!(r.witness.as_deref(), Some("b"));
    }

    #[test]
    fn generators_are_cycles_not_boundaries() {
        let k = klein();
        let h1 = homology_group(&k, 1).unwrap();
        for g in h1.generators.iter().chain(&h1.torsion_generators) {
            assert!(k.boundary(g).unwrap().is_zero());
            let c = class_of(&k, g).unwrap().unwrap();
            assert!(c.free.iter().any(|&x| x != 0) || c.torsion.iter().any(|&x| x != 0));
        }
        // 2b = ∂K is a boundary
        let two_b = Chain::from_terms(1, [("b", 2)]);
        let c = class_of(&k, &two_b).unwrap().unwrap();
        assert!(c.free.iter().all(|&x| x == 0) && c.torsion.iter().all(|&x| x == 0));
        let a = class_of(&k, &Chain::from_terms(1, [("a", 1)])).unwrap().unwrap();
        assert_eq!(a.free.iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn non_cycle_has_no_class() {
        let k = disk();
        assert_eq!(class_of(&k, &Chain::from_terms(1, [("ab", 1)])).unwrap(), None);
    }

    #[test]
    fn degree_above_dimension_is_trivial() {
        assert!(homology_group(&disk(), 5).unwrap().is_trivial());
    }

    #[test]
    fn mixed_and_disconnected_selections() {
        let k = CellComplex::build([
            Cell::new("a", 0),
            Cell::new("b", 0),
            Cell::with_boundary("l", 1, [("a", -1), ("a", 1)]),
            Cell::with_boundary("m", 1, [("b", -1), ("b", 1)]),
            Cell::with_boundary("D", 2, [("l", 1)]),
        ])
        .unwrap();
        let r = orientability_report(&k, None);
        assert!(matches!(r, Err(Error::MixedDimensionSelection(_))));
        let two = [CellId::new(0, "a"), CellId::new(0, "b")];
        assert!(matches!(orientability_report(&k, Some(&two)), Err(Error::DisconnectedSelection(2))));
    }
}
