//! Chain-level linear algebra: equivalence tests and witness solving.

use std::collections::BTreeMap;

use crate::ainfty::ChainComplex;
use crate::error::{Error, Result};
use crate::linalg::{self, Echelon, SparseRow};
use crate::multimap::{MultiMap, Tuple};
use crate::scalar::{Field, Scalar};
use crate::space::GradedSpace;

/// Whether the mapping cone of the chain map `f` is acyclic, i.e. whether
/// `f` induces an isomorphism in homology. Returns `false` for maps that
/// are not chain maps.
pub fn check_chain_equivalence(f: &MultiMap, source: &ChainComplex, target: &ChainComplex) -> Result<bool> {
    if f.source() != source.space() || f.target() != target.space() || f.degree() != 0 || f.arity() != 1 {
        return Err(Error::Shape(
            "f must be a degree 0 map between the given complexes".into(),
        ));
    }
    if !source.is_chain_map(target, f)? {
        return Ok(false);
    }
    // cone C = A[-1] ⊕ B, d(a, b) = (−∂a, f a + ∂b); acyclic iff dim C = 2 rank d
    let na = source.space().dim();
    let nb = target.space().dim();
    let field = source.field();
    let mut rows: Vec<SparseRow> = Vec::with_capacity(na + nb);
    for a in 0..na as u32 {
        let mut row = SparseRow::new();
        if let Some(col) = source.differential().column(&[a]) {
            for (o, v) in col {
                row.insert(o[0] as usize, -v.clone());
            }
        }
        if let Some(col) = f.column(&[a]) {
            for (o, v) in col {
                row.insert(na + o[0] as usize, v.clone());
            }
        }
        rows.push(row);
    }
    for b in 0..nb as u32 {
        let mut row = SparseRow::new();
        if let Some(col) = target.differential().column(&[b]) {
            for (o, v) in col {
                row.insert(na + o[0] as usize, v.clone());
            }
        }
        rows.push(row);
    }
    Ok(2 * linalg::rank(field, rows) == na + nb)
}

/// Unknown linear map `X : source → target` of a fixed degree, occupying a
/// contiguous range of solver columns.
struct Unknown {
    source: GradedSpace,
    target: GradedSpace,
    degree: i64,
    offset: usize,
    index: BTreeMap<(u32, u32), usize>,
}

impl Unknown {
    fn new(source: &GradedSpace, target: &GradedSpace, degree: i64, offset: usize) -> Self {
        let mut index = BTreeMap::new();
        for i in 0..source.dim() as u32 {
            for o in target.basis_in_degree(source.degree(i) + degree) {
                let next = offset + index.len();
                index.insert((i, o), next);
            }
        }
        Unknown {
            source: source.clone(),
            target: target.clone(),
            degree,
            offset,
            index,
        }
    }

    fn end(&self) -> usize {
        self.offset + self.index.len()
    }

    fn read(&self, field: Field, x: &[Scalar]) -> MultiMap {
        let mut m = MultiMap::zero(field, &self.source, &self.target, 1, 1, self.degree);
        for (&(i, o), &col) in &self.index {
            if !x[col].is_zero() {
                m.add_entry(Tuple::from_slice(&[i]), Tuple::from_slice(&[o]), x[col].clone());
            }
        }
        m
    }
}

/// Linear equations between linear maps, one row per `(equation, input,
/// output)` coefficient.
struct System {
    field: Field,
    rows: BTreeMap<(usize, u32, u32), (SparseRow, Scalar)>,
}

impl System {
    fn new(field: Field) -> Self {
        System {
            field,
            rows: BTreeMap::new(),
        }
    }

    fn row(&mut self, eq: usize, i: u32, o: u32) -> &mut (SparseRow, Scalar) {
        let zero = self.field.zero();
        self.rows.entry((eq, i, o)).or_insert_with(|| (SparseRow::new(), zero))
    }

    fn bump(&mut self, eq: usize, i: u32, o: u32, var: usize, v: Scalar) {
        let zero = self.field.zero();
        let slot = self.row(eq, i, o).0.entry(var).or_insert(zero);
        *slot += &v;
    }

    /// Adds `c · M ∘ X`.
    fn post(&mut self, eq: usize, c: &Scalar, m: &MultiMap, x: &Unknown) {
        for (&(i, j), &var) in &x.index {
            if let Some(col) = m.column(&[j]) {
                for (o, v) in col {
                    self.bump(eq, i, o[0], var, c * v);
                }
            }
        }
    }

    /// Adds `c · X ∘ M`.
    fn pre(&mut self, eq: usize, c: &Scalar, x: &Unknown, m: &MultiMap) {
        for (input, col) in m.entries() {
            for (j, v) in col {
                for (&(_, o), &var) in x.index.range((j[0], 0)..=(j[0], u32::MAX)) {
                    self.bump(eq, input[0], o, var, c * v);
                }
            }
        }
    }

    /// Moves `c · M` (a known map) to the right-hand side.
    fn rhs(&mut self, eq: usize, c: &Scalar, m: &MultiMap) {
        for (i, col) in m.entries() {
            for (o, v) in col {
                let r = self.row(eq, i[0], o[0]);
                r.1 += &(c * v);
            }
        }
    }

    fn solve(self, ncols: usize) -> Option<Vec<Scalar>> {
        let mut ech = Echelon::new(self.field);
        for (_, (row, rhs)) in self.rows {
            if !ech.insert(row, rhs) {
                return None;
            }
        }
        ech.solve(ncols)
    }
}

/// A chain homotopy equivalence `f : A → B` with witnesses: `g` a chain
/// map, `gf − 𝟙 = ∂h + h∂`, and optionally `fg − 𝟙 = ∂k + k∂`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomotopyEquivalenceData {
    pub source: ChainComplex,
    pub target: ChainComplex,
    pub f: MultiMap,
    pub g: MultiMap,
    pub h: MultiMap,
    pub k: Option<MultiMap>,
}

impl HomotopyEquivalenceData {
    /// Validates every invariant exactly.
    pub fn new(
        source: &ChainComplex,
        target: &ChainComplex,
        f: MultiMap,
        g: MultiMap,
        h: MultiMap,
        k: Option<MultiMap>,
    ) -> Result<Self> {
        let (a, b) = (source.space(), target.space());
        let shape = |m: &MultiMap, s: &GradedSpace, t: &GradedSpace, d: i64, name: &str| -> Result<()> {
            if m.arity() != 1 || m.coarity() != 1 || m.source() != s || m.target() != t || m.degree() != d {
                return Err(Error::Shape(format!("{name} must be a degree {d} map {s} -> {t}")));
            }
            Ok(())
        };
        shape(&f, a, b, 0, "f")?;
        shape(&g, b, a, 0, "g")?;
        shape(&h, a, a, 1, "h")?;
        if let Some(k) = &k {
            shape(k, b, b, 1, "k")?;
        }
        if !source.is_chain_map(target, &f)? || !target.is_chain_map(source, &g)? {
            return Err(Error::Precondition("f and g must be chain maps".into()));
        }
        let id_a = MultiMap::identity(source.field(), a);
        if g.compose(&f)?.sub(&id_a)? != source.boundary_of(source, &h)? {
            return Err(Error::Precondition("gf − 𝟙 ≠ ∂h + h∂".into()));
        }
        if let Some(k) = &k {
            let id_b = MultiMap::identity(source.field(), b);
            if f.compose(&g)?.sub(&id_b)? != target.boundary_of(target, k)? {
                return Err(Error::Precondition("fg − 𝟙 ≠ ∂k + k∂".into()));
            }
        }
        Ok(HomotopyEquivalenceData {
            source: source.clone(),
            target: target.clone(),
            f,
            g,
            h,
            k,
        })
    }

    /// The same equivalence read backwards: `(g, f, k, h)`.
    pub fn reversed(&self) -> Result<Self> {
        let k = self
            .k
            .clone()
            .ok_or_else(|| Error::Precondition("reversing needs both homotopies".into()))?;
        Ok(HomotopyEquivalenceData {
            source: self.target.clone(),
            target: self.source.clone(),
            f: self.g.clone(),
            g: self.f.clone(),
            h: k,
            k: Some(self.h.clone()),
        })
    }
}

/// Solves for `g, h, k` making `f` a chain homotopy equivalence. Unknowns
/// are ordered `g`, `h`, `k`; free coefficients are zero.
pub fn find_witnesses(f: &MultiMap, source: &ChainComplex, target: &ChainComplex) -> Result<HomotopyEquivalenceData> {
    let field = source.field();
    let (a, b) = (source.space(), target.space());
    let (da, db) = (source.differential(), target.differential());
    let g = Unknown::new(b, a, 0, 0);
    let h = Unknown::new(a, a, 1, g.end());
    let k = Unknown::new(b, b, 1, h.end());
    let one = field.one();
    let m1 = -field.one();
    let mut sys = System::new(field);
    // gf − ∂h − h∂ = 𝟙
    sys.pre(0, &one, &g, f);
    sys.post(0, &m1, da, &h);
    sys.pre(0, &m1, &h, da);
    sys.rhs(0, &one, &MultiMap::identity(field, a));
    // fg − ∂k − k∂ = 𝟙
    sys.post(1, &one, f, &g);
    sys.post(1, &m1, db, &k);
    sys.pre(1, &m1, &k, db);
    sys.rhs(1, &one, &MultiMap::identity(field, b));
    // ∂g − g∂ = 0
    sys.post(2, &one, da, &g);
    sys.pre(2, &m1, &g, db);
    let x = sys
        .solve(k.end())
        .ok_or_else(|| Error::Unsolvable("f is not a chain homotopy equivalence".into()))?;
    HomotopyEquivalenceData::new(
        source,
        target,
        f.clone(),
        g.read(field, &x),
        h.read(field, &x),
        Some(k.read(field, &x)),
    )
}

/// Solves `f1 − f0 = ∂w + w∂` for a degree +1 map `w`.
pub fn solve_chain_homotopy(
    f0: &MultiMap,
    f1: &MultiMap,
    source: &ChainComplex,
    target: &ChainComplex,
) -> Result<Option<MultiMap>> {
    let field = source.field();
    let w = Unknown::new(source.space(), target.space(), 1, 0);
    let one = field.one();
    let mut sys = System::new(field);
    sys.post(0, &one, target.differential(), &w);
    sys.pre(0, &one, &w, source.differential());
    sys.rhs(0, &one, f1);
    sys.rhs(0, &-one.clone(), f0);
    Ok(sys.solve(w.end()).map(|x| w.read(field, &x)))
}
