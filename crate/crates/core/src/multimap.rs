//! Sparse degree-homogeneous multilinear maps `V^{⊗k} → W^{⊗c}` and the
//! Koszul-signed operations on them.
//!
//! Every sign in the crate comes from three places in this module: the
//! interchange sign of [`MultiMap::tensor`], the insertion sign of
//! [`MultiMap::plug`] / [`MultiMap::compose_tensor`], and the suspension
//! sign of [`MultiMap::shift`]. All three are the Koszul rule
//! `(f ⊗ g)(x ⊗ y) = (-1)^{|g||x|} f(x) ⊗ g(y)` applied mechanically.

use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};
use crate::space::GradedSpace;

/// A basis tuple of a tensor power, as global basis indices.
pub type Tuple = SmallVec<[u32; 8]>;

/// A sparse vector of a tensor power. Never stores zeros.
pub type Column = BTreeMap<Tuple, Scalar>;

/// A graded linear map is an arity-one, coarity-one [`MultiMap`].
pub type GradedLinearMap = MultiMap;

pub(crate) fn odd(x: i64) -> bool {
    x.rem_euclid(2) == 1
}

pub(crate) fn add_into(col: &mut Column, key: Tuple, value: Scalar) {
    if value.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match col.entry(key) {
        Entry::Vacant(v) => {
            v.insert(value);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += &value;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Sign of `s^{⊗k}` (each `s` of odd degree) on a tuple with the given
/// element degrees: `(-1)^{Σ_i (k-i)|x_i|}`.
fn suspension_sign(degrees: impl Iterator<Item = i64>) -> bool {
    // left-to-right: the j-th s passes x_1..x_{j-1}
    let mut passed = 0i64;
    let mut total = 0i64;
    for d in degrees {
        total += passed;
        passed += d;
    }
    odd(total)
}

#[derive(Clone, PartialEq, Eq)]
pub struct MultiMap {
    field: Field,
    source: GradedSpace,
    target: GradedSpace,
    arity: usize,
    coarity: usize,
    degree: i64,
    entries: BTreeMap<Tuple, Column>,
}

impl MultiMap {
    pub fn zero(
        field: Field,
        source: &GradedSpace,
        target: &GradedSpace,
        arity: usize,
        coarity: usize,
        degree: i64,
    ) -> MultiMap {
        assert!(arity >= 1 && coarity >= 1, "arity and coarity start at 1");
        MultiMap {
            field,
            source: source.clone(),
            target: target.clone(),
            arity,
            coarity,
            degree,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(field: Field, space: &GradedSpace) -> MultiMap {
        let mut m = MultiMap::zero(field, space, space, 1, 1, 0);
        for i in 0..space.dim() as u32 {
            m.insert_column(
                Tuple::from_slice(&[i]),
                Column::from([(Tuple::from_slice(&[i]), field.one())]),
            );
        }
        m
    }

    /// `s : A → sA`, the degree +1 suspension map.
    pub fn suspension(field: Field, space: &GradedSpace) -> MultiMap {
        let target = space.suspend();
        let mut m = MultiMap::zero(field, space, &target, 1, 1, 1);
        for i in 0..space.dim() as u32 {
            m.insert_column(
                Tuple::from_slice(&[i]),
                Column::from([(Tuple::from_slice(&[i]), field.one())]),
            );
        }
        m
    }

    /// `s^{-1} : sA → A`, the degree −1 desuspension map.
    pub fn desuspension(field: Field, space: &GradedSpace) -> MultiMap {
        let target = space.desuspend();
        let mut m = MultiMap::zero(field, space, &target, 1, 1, -1);
        for i in 0..space.dim() as u32 {
            m.insert_column(
                Tuple::from_slice(&[i]),
                Column::from([(Tuple::from_slice(&[i]), field.one())]),
            );
        }
        m
    }

    /// Builds a map from `(input tuple, output tuple, scalar)` triples,
    /// summing repeated positions. Checks index ranges, tuple lengths,
    /// the field of every scalar and the degree bookkeeping.
    #[allow(clippy::too_many_arguments)]
    pub fn from_entries<I>(
        field: Field,
        source: &GradedSpace,
        target: &GradedSpace,
        arity: usize,
        coarity: usize,
        degree: i64,
        entries: I,
    ) -> Result<MultiMap>
    where
        I: IntoIterator<Item = (Vec<u32>, Vec<u32>, Scalar)>,
    {
        if arity == 0 || coarity == 0 {
            return Err(Error::Shape("arity and coarity must be at least 1".into()));
        }
        let mut m = MultiMap::zero(field, source, target, arity, coarity, degree);
        for (input, output, value) in entries {
            if input.len() != arity || output.len() != coarity {
                return Err(Error::Shape(format!(
                    "entry {input:?} -> {output:?} does not have shape {arity} -> {coarity}"
                )));
            }
            if input.iter().any(|&i| i as usize >= source.dim()) || output.iter().any(|&i| i as usize >= target.dim()) {
                return Err(Error::Shape(format!(
                    "entry {input:?} -> {output:?} has an out-of-range index"
                )));
            }
            if value.field() != field {
                return Err(Error::FieldMismatch(field.to_string(), value.field().to_string()));
            }
            let din = source.tuple_degree(&input);
            let dout = target.tuple_degree(&output);
            if dout != din + degree {
                return Err(Error::Degree(format!(
                    "entry {input:?} -> {output:?} maps degree {din} to {dout}, expected {}",
                    din + degree
                )));
            }
            m.add_entry(Tuple::from_vec(input), Tuple::from_vec(output), value);
        }
        Ok(m)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn source(&self) -> &GradedSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedSpace {
        &self.target
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn coarity(&self) -> usize {
        self.coarity
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// Nonzero columns keyed by input tuple.
    pub fn entries(&self) -> &BTreeMap<Tuple, Column> {
        &self.entries
    }

    /// All nonzero `(input, output, scalar)` triples in lexicographic order.
    pub fn triples(&self) -> impl Iterator<Item = (&Tuple, &Tuple, &Scalar)> {
        self.entries
            .iter()
            .flat_map(|(i, col)| col.iter().map(move |(o, v)| (i, o, v)))
    }

    pub fn column(&self, input: &[u32]) -> Option<&Column> {
        self.entries.get(input)
    }

    pub fn coefficient(&self, input: &[u32], output: &[u32]) -> Scalar {
        self.entries
            .get(input)
            .and_then(|c| c.get(output))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn nnz(&self) -> usize {
        self.entries.values().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.arity == 1
            && self.coarity == 1
            && self.degree == 0
            && self.source == self.target
            && *self == MultiMap::identity(self.field, &self.source)
    }

    /// Degrees of the elements of an input tuple, in the source grading.
    pub fn degree_tuple(&self, input: &[u32]) -> Vec<i64> {
        input.iter().map(|&i| self.source.degree(i)).collect()
    }

    pub(crate) fn add_entry(&mut self, input: Tuple, output: Tuple, value: Scalar) {
        if value.is_zero() {
            return;
        }
        let col = self.entries.entry(input.clone()).or_default();
        add_into(col, output, value);
        if col.is_empty() {
            self.entries.remove(&input);
        }
    }

    pub(crate) fn insert_column(&mut self, input: Tuple, column: Column) {
        if !column.is_empty() {
            self.entries.insert(input, column);
        }
    }

    /// Re-checks the degree bookkeeping of every stored entry.
    pub fn audit(&self) -> Result<()> {
        for (input, output, value) in self.triples() {
            if value.is_zero() {
                return Err(Error::Degree(format!("stored zero at {input:?} -> {output:?}")));
            }
            let din = self.source.tuple_degree(input);
            let dout = self.target.tuple_degree(output);
            if dout != din + self.degree {
                return Err(Error::Degree(format!(
                    "entry {input:?} -> {output:?} maps degree {din} to {dout} in a map of degree {}",
                    self.degree
                )));
            }
        }
        Ok(())
    }

    fn same_shape(&self, other: &MultiMap) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        if self.source != other.source {
            return Err(Error::SpaceMismatch {
                expected: self.source.to_string(),
                found: other.source.to_string(),
            });
        }
        if self.target != other.target {
            return Err(Error::SpaceMismatch {
                expected: self.target.to_string(),
                found: other.target.to_string(),
            });
        }
        if (self.arity, self.coarity, self.degree) != (other.arity, other.coarity, other.degree) {
            return Err(Error::Shape(format!(
                "({}, {}, deg {}) vs ({}, {}, deg {})",
                self.arity, self.coarity, self.degree, other.arity, other.coarity, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiMap) -> Result<MultiMap> {
        self.same_shape(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other, &self.field.one());
        Ok(out)
    }

    pub fn sub(&self, other: &MultiMap) -> Result<MultiMap> {
        self.same_shape(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other, &-self.field.one());
        Ok(out)
    }

    /// `self += c · other`, shapes already checked.
    pub(crate) fn add_assign_unchecked(&mut self, other: &MultiMap, c: &Scalar) {
        for (input, col) in &other.entries {
            let target = self.entries.entry(input.clone()).or_default();
            for (o, v) in col {
                add_into(target, o.clone(), c * v);
            }
            if target.is_empty() {
                self.entries.remove(input);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &MultiMap, c: &Scalar) -> Result<()> {
        self.same_shape(other)?;
        self.add_assign_unchecked(other, c);
        Ok(())
    }

    pub fn scale(&self, c: &Scalar) -> MultiMap {
        let mut out = MultiMap::zero(
            self.field,
            &self.source,
            &self.target,
            self.arity,
            self.coarity,
            self.degree,
        );
        if c.is_zero() {
            return out;
        }
        for (input, col) in &self.entries {
            out.entries
                .insert(input.clone(), col.iter().map(|(o, v)| (o.clone(), c * v)).collect());
        }
        out
    }

    pub fn neg(&self) -> MultiMap {
        self.scale(&-self.field.one())
    }

    /// Keeps only the input columns accepted by `keep`.
    pub fn filter_inputs(&self, mut keep: impl FnMut(&[u32]) -> bool) -> MultiMap {
        let mut out = self.clone();
        out.entries.retain(|k, _| keep(k));
        out
    }

    /// Applies the map to a sparse tensor of its source power.
    pub fn apply(&self, v: &Column) -> Column {
        let mut out = Column::new();
        for (t, c) in v {
            if let Some(col) = self.entries.get(t) {
                for (o, w) in col {
                    add_into(&mut out, o.clone(), c * w);
                }
            }
        }
        out
    }

    /// Plain composite `self ∘ inner` (no sign: composition of graded maps
    /// carries none).
    pub fn compose(&self, inner: &MultiMap) -> Result<MultiMap> {
        if self.field != inner.field {
            return Err(Error::FieldMismatch(self.field.to_string(), inner.field.to_string()));
        }
        if inner.target != self.source {
            return Err(Error::SpaceMismatch {
                expected: self.source.to_string(),
                found: inner.target.to_string(),
            });
        }
        if inner.coarity != self.arity {
            return Err(Error::Shape(format!(
                "cannot compose arity {} after coarity {}",
                self.arity, inner.coarity
            )));
        }
        let mut out = MultiMap::zero(
            self.field,
            &inner.source,
            &self.target,
            inner.arity,
            self.coarity,
            self.degree + inner.degree,
        );
        for (input, col) in &inner.entries {
            let image = self.apply(col);
            out.insert_column(input.clone(), image);
        }
        Ok(out)
    }

    /// Operadic insertion `self ∘_i inner` (1-based `position`), with the
    /// Koszul sign `(-1)^{|inner| · (|x_1| + … + |x_{i-1}|)}`.
    pub fn plug(&self, position: usize, inner: &MultiMap) -> Result<MultiMap> {
        if position == 0 || position > self.arity {
            return Err(Error::ArityOutOfRange {
                arity: position,
                max: self.arity,
            });
        }
        if inner.source != self.source {
            return Err(Error::SpaceMismatch {
                expected: self.source.to_string(),
                found: inner.source.to_string(),
            });
        }
        self.compose_at(position - 1, inner)
    }

    fn compose_at(&self, pos: usize, inner: &MultiMap) -> Result<MultiMap> {
        if self.field != inner.field {
            return Err(Error::FieldMismatch(self.field.to_string(), inner.field.to_string()));
        }
        if inner.target != self.source {
            return Err(Error::SpaceMismatch {
                expected: self.source.to_string(),
                found: inner.target.to_string(),
            });
        }
        if inner.coarity != 1 {
            return Err(Error::Shape("only coarity-1 maps can be inserted".into()));
        }
        let entries = plug_raw(&self.entries, pos, inner, &inner.source);
        Ok(MultiMap {
            field: self.field,
            source: inner.source.clone(),
            target: self.target.clone(),
            arity: self.arity + inner.arity - 1,
            coarity: self.coarity,
            degree: self.degree + inner.degree,
            entries,
        })
    }

    /// `self ∘ (inners[0] ⊗ … ⊗ inners[k-1])`, computed by successive
    /// left-to-right insertions. All inners must share a source and have
    /// `self.source()` as target.
    pub fn compose_tensor(&self, inners: &[&MultiMap]) -> Result<MultiMap> {
        if inners.len() != self.arity {
            return Err(Error::Shape(format!(
                "{} maps inserted into an arity-{} map",
                inners.len(),
                self.arity
            )));
        }
        let new_source = inners[0].source.clone();
        let mut entries = self.entries.clone();
        let mut pos = 0;
        let mut degree = self.degree;
        let mut arity = 0;
        for inner in inners {
            if inner.field != self.field {
                return Err(Error::FieldMismatch(self.field.to_string(), inner.field.to_string()));
            }
            if inner.target != self.source || inner.source != new_source || inner.coarity != 1 {
                return Err(Error::SpaceMismatch {
                    expected: format!("{} -> {}", new_source, self.source),
                    found: format!("{} -> {}", inner.source, inner.target),
                });
            }
            if !entries.is_empty() {
                entries = plug_raw(&entries, pos, inner, &new_source);
            }
            pos += inner.arity;
            degree += inner.degree;
            arity += inner.arity;
        }
        Ok(MultiMap {
            field: self.field,
            source: new_source,
            target: self.target.clone(),
            arity,
            coarity: self.coarity,
            degree,
            entries,
        })
    }

    /// Tensor product `fs[0] ⊗ … ⊗ fs[m-1]` with the Koszul interchange
    /// sign. All factors must share source and target.
    pub fn tensor(fs: &[&MultiMap]) -> Result<MultiMap> {
        let (first, rest) = fs
            .split_first()
            .ok_or_else(|| Error::Shape("tensor of an empty list".into()))?;
        let mut acc = (*first).clone();
        for f in rest {
            acc = acc.tensor2(f)?;
        }
        Ok(acc)
    }

    fn tensor2(&self, other: &MultiMap) -> Result<MultiMap> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        if self.source != other.source || self.target != other.target {
            return Err(Error::SpaceMismatch {
                expected: format!("{} -> {}", self.source, self.target),
                found: format!("{} -> {}", other.source, other.target),
            });
        }
        let mut out = MultiMap::zero(
            self.field,
            &self.source,
            &self.target,
            self.arity + other.arity,
            self.coarity + other.coarity,
            self.degree + other.degree,
        );
        for (x, fx) in &self.entries {
            let sign = odd(other.degree * self.source.tuple_degree(x));
            for (y, gy) in &other.entries {
                let mut key = x.clone();
                key.extend_from_slice(y);
                let mut col = Column::new();
                for (a, c) in fx {
                    for (b, d) in gy {
                        let mut o = a.clone();
                        o.extend_from_slice(b);
                        add_into(&mut col, o, (c * d).signed(sign));
                    }
                }
                out.insert_column(key, col);
            }
        }
        Ok(out)
    }

    /// Transports the map to suspended spaces: `s^{⊗c} ∘ m ∘ (s^{⊗k})^{-1}`.
    /// An arity-`k`, coarity-1 map of degree `d` becomes one of degree
    /// `d − k + 1`.
    pub fn shift(&self) -> MultiMap {
        self.transport(
            &self.source.suspend(),
            &self.target.suspend(),
            self.degree + self.coarity as i64 - self.arity as i64,
        )
    }

    /// Exact inverse of [`MultiMap::shift`]: `(s^{⊗c})^{-1} ∘ b ∘ s^{⊗k}`.
    pub fn unshift(&self) -> MultiMap {
        let source = self.source.desuspend();
        let target = self.target.desuspend();
        let degree = self.degree - self.coarity as i64 + self.arity as i64;
        let mut out = MultiMap::zero(self.field, &source, &target, self.arity, self.coarity, degree);
        for (x, col) in &self.entries {
            let sx = suspension_sign(x.iter().map(|&i| source.degree(i)));
            let image = col
                .iter()
                .map(|(t, v)| {
                    let st = suspension_sign(t.iter().map(|&i| target.degree(i)));
                    (t.clone(), v.clone().signed(sx ^ st))
                })
                .collect();
            out.insert_column(x.clone(), image);
        }
        out
    }

    fn transport(&self, source: &GradedSpace, target: &GradedSpace, degree: i64) -> MultiMap {
        // (s^{⊗k})^{-1}(s x) = ε_k(x) x since s^{⊗k}(x) = ε_k(x) s x, ε = ±1
        let mut out = MultiMap::zero(self.field, source, target, self.arity, self.coarity, degree);
        for (x, col) in &self.entries {
            let sx = suspension_sign(x.iter().map(|&i| self.source.degree(i)));
            let image = col
                .iter()
                .map(|(t, v)| {
                    let st = suspension_sign(t.iter().map(|&i| self.target.degree(i)));
                    (t.clone(), v.clone().signed(sx ^ st))
                })
                .collect();
            out.insert_column(x.clone(), image);
        }
        out
    }

    /// Inverse of a map whose columns each hold exactly one unit entry and
    /// whose outputs are pairwise distinct (e.g. `s^{⊗k}`).
    pub fn invert_monomial(&self) -> Result<MultiMap> {
        let mut out = MultiMap::zero(
            self.field,
            &self.target,
            &self.source,
            self.coarity,
            self.arity,
            -self.degree,
        );
        for (x, col) in &self.entries {
            if col.len() != 1 {
                return Err(Error::Precondition("map is not monomial".into()));
            }
            let (t, v) = col.iter().next().expect("one entry");
            if out.entries.contains_key(t) {
                return Err(Error::Precondition("map is not injective on basis tuples".into()));
            }
            let inv = v.inv().expect("stored entries are nonzero");
            out.insert_column(t.clone(), Column::from([(x.clone(), inv)]));
        }
        Ok(out)
    }
}

/// Inserts `inner` at key position `pos` of every column of `outer`.
/// `prefix_space` grades the elements already sitting before `pos`.
fn plug_raw(
    outer: &BTreeMap<Tuple, Column>,
    pos: usize,
    inner: &MultiMap,
    prefix_space: &GradedSpace,
) -> BTreeMap<Tuple, Column> {
    let mut by_slot: BTreeMap<u32, Vec<(&Tuple, &Column)>> = BTreeMap::new();
    for (key, col) in outer {
        by_slot.entry(key[pos]).or_default().push((key, col));
    }
    let mut out: BTreeMap<Tuple, Column> = BTreeMap::new();
    let inner_odd = odd(inner.degree);
    for (ykey, ycol) in &inner.entries {
        for (o, c) in ycol {
            let Some(list) = by_slot.get(&o[0]) else {
                continue;
            };
            for (xkey, xcol) in list {
                let sign = inner_odd && odd(prefix_space.tuple_degree(&xkey[..pos]));
                let mut key = Tuple::with_capacity(xkey.len() + ykey.len() - 1);
                key.extend_from_slice(&xkey[..pos]);
                key.extend_from_slice(ykey);
                key.extend_from_slice(&xkey[pos + 1..]);
                let coeff = c.clone().signed(sign);
                let target = out.entry(key).or_default();
                for (t, w) in xcol.iter() {
                    add_into(target, t.clone(), &coeff * w);
                }
            }
        }
    }
    out.retain(|_, col| !col.is_empty());
    out
}

impl fmt::Debug for MultiMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "MultiMap {}^{} -> {}^{} deg {} ({} entries)",
            self.source,
            self.arity,
            self.target,
            self.coarity,
            self.degree,
            self.nnz()
        )?;
        for (i, o, v) in self.triples() {
            writeln!(f, "  {:?} -> {:?}: {}", i.as_slice(), o.as_slice(), v)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    fn space() -> GradedSpace {
        GradedSpace::new("A", [(0, 1), (1, 2)]).unwrap()
    }

    fn linear(entries: &[(u32, u32, i64)], degree: i64) -> MultiMap {
        let a = space();
        MultiMap::from_entries(
            q(),
            &a,
            &a,
            1,
            1,
            degree,
            entries.iter().map(|&(i, o, v)| (vec![i], vec![o], q().from_i64(v))),
        )
        .unwrap()
    }

    #[test]
    fn identity_is_a_unit_for_compose() {
        let a = space();
        let d = linear(&[(1, 0, 2), (2, 0, -1)], -1);
        let id = MultiMap::identity(q(), &a);
        assert_eq!(id.compose(&d).unwrap(), d);
        assert_eq!(d.compose(&id).unwrap(), d);
    }

    #[test]
    fn degree_audit_rejects_bad_entries() {
        let a = space();
        let err = MultiMap::from_entries(q(), &a, &a, 1, 1, -1, [(vec![0], vec![1], q().one())]);
        assert!(matches!(err, Err(Error::Degree(_))));
    }

    #[test]
    fn plug_of_identity_is_unchanged() {
        let a = space();
        let m = MultiMap::from_entries(
            q(),
            &a,
            &a,
            2,
            1,
            -1,
            [(vec![1, 2], vec![1], q().from_i64(3)), (vec![0, 1], vec![0], q().one())],
        )
        .unwrap();
        let id = MultiMap::identity(q(), &a);
        assert_eq!(m.plug(1, &id).unwrap(), m);
        assert_eq!(m.plug(2, &id).unwrap(), m);
        assert!(m.plug(3, &id).is_err());
        assert!(m.plug(0, &id).is_err());
    }

    #[test]
    fn plug_sign_on_odd_prefix() {
        // m(x, y) with inner d of degree -1 at position 2 on x odd: sign -1.
        let a = space();
        let m = MultiMap::from_entries(q(), &a, &a, 2, 1, 0, [(vec![1, 0], vec![1], q().one())]).unwrap();
        let d = linear(&[(1, 0, 1)], -1);
        let p = m.plug(2, &d).unwrap();
        assert_eq!(p.coefficient(&[1, 1], &[1]), q().from_i64(-1));
        // at position 1 nothing precedes: no sign
        let m1 = MultiMap::from_entries(q(), &a, &a, 2, 1, 0, [(vec![0, 1], vec![1], q().one())]).unwrap();
        assert_eq!(m1.plug(1, &d).unwrap().coefficient(&[1, 1], &[1]), q().one());
    }

    #[test]
    fn tensor_of_identities_is_identity_of_power() {
        let a = space();
        let id = MultiMap::identity(q(), &a);
        let t = MultiMap::tensor(&[&id, &id]).unwrap();
        assert_eq!(t.nnz(), 9);
        for (i, o, v) in t.triples() {
            assert_eq!(i, o);
            assert!(v.is_one());
        }
        let zero = MultiMap::zero(q(), &a, &a, 1, 1, 0);
        assert!(MultiMap::tensor(&[&id, &zero]).unwrap().is_zero());
        assert!(MultiMap::tensor(&[]).is_err());
    }

    #[test]
    fn shift_degrees() {
        let a = space();
        let mu2 = MultiMap::from_entries(q(), &a, &a, 2, 1, 0, [(vec![1, 2], vec![0], q().one())]);
        // degree 0 needs total input degree = output degree; (1,1) -> 0 is degree -2
        assert!(mu2.is_err());
        let mu2 = MultiMap::from_entries(q(), &a, &a, 2, 1, 0, [(vec![0, 1], vec![2], q().one())]).unwrap();
        assert_eq!(mu2.shift().degree(), -1);
        let mu3 = MultiMap::from_entries(q(), &a, &a, 3, 1, 1, [(vec![0, 0, 0], vec![1], q().one())]).unwrap();
        assert_eq!(mu3.shift().degree(), -1);
        assert_eq!(mu3.shift().unshift(), mu3);
    }

    #[test]
    fn shift_agrees_with_suspension_composites() {
        let a = space();
        let m = MultiMap::from_entries(
            q(),
            &a,
            &a,
            2,
            1,
            -1,
            [
                (vec![1, 2], vec![1], q().from_i64(3)),
                (vec![0, 1], vec![0], q().one()),
                (vec![2, 0], vec![0], q().from_i64(-2)),
            ],
        )
        .unwrap();
        let s = MultiMap::suspension(q(), &a);
        let s2 = MultiMap::tensor(&[&s, &s]).unwrap();
        let mechanical = s.compose(&m.compose(&s2.invert_monomial().unwrap()).unwrap()).unwrap();
        assert_eq!(m.shift(), mechanical);
        let sinv = MultiMap::desuspension(q(), &a.suspend());
        let back = sinv.compose(&m.shift().compose(&s2).unwrap()).unwrap();
        assert_eq!(back, m);
    }
}
