//! Finite-dimensional graded vector spaces with an ordered basis.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A finite-dimensional ℤ-graded space.
///
/// Basis elements are numbered globally `0..dim()`, ordered by degree and
/// then by their index inside the degree. A space may be a suspension of
/// another: `suspension` counts how many times `s` (degree +1) has been
/// applied, so `(sA)_i = A_{i-1}` while the basis numbering is unchanged.
#[derive(Clone)]
pub struct GradedSpace(Arc<SpaceData>);

#[derive(PartialEq, Eq, Hash, Debug)]
struct SpaceData {
    name: String,
    suspension: i64,
    dims: BTreeMap<i64, usize>,
    base_degrees: Vec<i64>,
    offsets: BTreeMap<i64, usize>,
}

impl GradedSpace {
    /// Degrees with dimension zero are dropped; the total dimension must be
    /// positive.
    pub fn new(name: impl Into<String>, dims: impl IntoIterator<Item = (i64, usize)>) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::InvalidSpace("empty name".into()));
        }
        let mut map = BTreeMap::new();
        for (deg, dim) in dims {
            if dim > 0 {
                *map.entry(deg).or_insert(0) += dim;
            }
        }
        let total: usize = map.values().sum();
        if total == 0 {
            return Err(Error::InvalidSpace(format!("space {name} has total dimension 0")));
        }
        if total > u32::MAX as usize {
            return Err(Error::InvalidSpace(format!("space {name} is too large")));
        }
        Ok(Self::build(name, 0, map))
    }

    fn build(name: String, suspension: i64, dims: BTreeMap<i64, usize>) -> Self {
        let mut base_degrees = Vec::new();
        let mut offsets = BTreeMap::new();
        for (&deg, &dim) in &dims {
            offsets.insert(deg, base_degrees.len());
            base_degrees.extend(std::iter::repeat_n(deg, dim));
        }
        GradedSpace(Arc::new(SpaceData {
            name,
            suspension,
            dims,
            base_degrees,
            offsets,
        }))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    /// Dimensions keyed by the degree of the unsuspended space.
    pub fn base_dims(&self) -> &BTreeMap<i64, usize> {
        &self.0.dims
    }

    /// Dimensions keyed by the actual degree of this space.
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.0.dims.iter().map(|(d, n)| (d + self.0.suspension, *n)).collect()
    }

    pub fn dim(&self) -> usize {
        self.0.base_degrees.len()
    }

    pub fn dim_in_degree(&self, degree: i64) -> usize {
        self.0.dims.get(&(degree - self.0.suspension)).copied().unwrap_or(0)
    }

    pub fn suspension(&self) -> i64 {
        self.0.suspension
    }

    /// Degree of global basis element `idx`.
    pub fn degree(&self, idx: u32) -> i64 {
        self.0.base_degrees[idx as usize] + self.0.suspension
    }

    /// Degree of `idx` in the unsuspended space.
    pub fn base_degree(&self, idx: u32) -> i64 {
        self.0.base_degrees[idx as usize]
    }

    /// Total degree of a basis tuple.
    pub fn tuple_degree(&self, tuple: &[u32]) -> i64 {
        tuple.iter().map(|&i| self.degree(i)).sum()
    }

    /// Global indices of the basis in a given degree.
    pub fn basis_in_degree(&self, degree: i64) -> Range<u32> {
        let base = degree - self.0.suspension;
        match (self.0.offsets.get(&base), self.0.dims.get(&base)) {
            (Some(&off), Some(&dim)) => off as u32..(off + dim) as u32,
            _ => 0..0,
        }
    }

    /// Global index of the `local`-th basis vector of `degree`.
    pub fn global_index(&self, degree: i64, local: usize) -> Option<u32> {
        let range = self.basis_in_degree(degree);
        let idx = range.start as usize + local;
        (idx < range.end as usize).then_some(idx as u32)
    }

    /// `(degree, local index)` of a global basis element.
    pub fn local_index(&self, idx: u32) -> (i64, usize) {
        let base = self.0.base_degrees[idx as usize];
        (base + self.0.suspension, idx as usize - self.0.offsets[&base])
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.0.dims.keys().map(move |d| d + self.0.suspension)
    }

    /// The suspension `sA`, with `(sA)_i = A_{i-1}`.
    pub fn suspend(&self) -> GradedSpace {
        Self::build(self.0.name.clone(), self.0.suspension + 1, self.0.dims.clone())
    }

    pub fn desuspend(&self) -> GradedSpace {
        Self::build(self.0.name.clone(), self.0.suspension - 1, self.0.dims.clone())
    }

    /// The same space with the suspension counter reset to zero.
    pub fn unsuspended(&self) -> GradedSpace {
        if self.0.suspension == 0 {
            self.clone()
        } else {
            Self::build(self.0.name.clone(), 0, self.0.dims.clone())
        }
    }

    /// All basis tuples of length `k` whose total degree is `degree`, in
    /// lexicographic order.
    pub fn tuples_of_degree(&self, k: usize, degree: i64) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        self.fill_tuples(k, Some(degree), &mut cur, &mut out);
        out
    }

    /// All basis tuples of length `k`, in lexicographic order.
    pub fn tuples(&self, k: usize) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        self.fill_tuples(k, None, &mut cur, &mut out);
        out
    }

    fn fill_tuples(&self, k: usize, degree: Option<i64>, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            if degree.is_none_or(|d| self.tuple_degree(cur) == d) {
                out.push(cur.clone());
            }
            return;
        }
        for i in 0..self.dim() as u32 {
            cur.push(i);
            self.fill_tuples(k, degree, cur, out);
            cur.pop();
        }
    }
}

impl PartialEq for GradedSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for GradedSpace {}

impl std::hash::Hash for GradedSpace {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Display for GradedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for _ in 0..self.0.suspension.max(0) {
            write!(f, "s")?;
        }
        write!(f, "{}", self.0.name)?;
        for _ in 0..(-self.0.suspension).max(0) {
            write!(f, "⁻")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GradedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}{:?}", self.dims())
    }
}
