//! The tensor-coalgebra picture of A∞ notions.
//!
//! A coderivation, a coalgebra morphism or a coderivation homotopy on the
//! tensor coalgebra `T^c(V)` of a suspended space is determined by its
//! cogenerating family: the components `V^{⊗n} → V` obtained by projecting
//! to the cogenerators. The coproducts are never materialised; every
//! coalgebra-level map is handled through the closed-form expansion of its
//! `V^{⊗n} → V^{⊗m}` components.
//!
//! Two evaluation routes exist. The `*_expand` functions build full
//! `V^{⊗n} → V^{⊗m}` components with [`MultiMap::tensor`]; they are the
//! reference route. [`precompose`] and [`corestrict`] fuse a coarity-one
//! map with an expansion through successive insertions, which is what the
//! checkers and constructions use.

mod check;
mod ops;
mod solve;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::multimap::MultiMap;
use crate::scalar::{Field, Scalar};
use crate::space::GradedSpace;

pub use check::{check_homotopy, check_morphism, check_square_zero, CheckReport, Equation, Violation};
pub use ops::{compose_families, invert_isotopy, transport_coderivation, whisker, WhiskerSide};
pub use solve::solve_homotopy;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Coderivation,
    Morphism,
    Homotopy,
}

impl FamilyKind {
    /// Uniform degree of every component in the suspended picture.
    pub fn degree(self) -> i64 {
        match self {
            FamilyKind::Coderivation => -1,
            FamilyKind::Morphism => 0,
            FamilyKind::Homotopy => 1,
        }
    }
}

/// The two coalgebra morphisms a homotopy interpolates: `η` rel `(φ, ψ)`
/// satisfies `Δη = (ψ ⊗ η + η ⊗ φ)Δ`, and is a homotopy when
/// `ψ − φ = δ″η + ηδ′`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bordering {
    pub phi: CogeneratingFamily,
    pub psi: CogeneratingFamily,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CogeneratingFamily {
    kind: FamilyKind,
    field: Field,
    source: GradedSpace,
    target: GradedSpace,
    truncation: usize,
    components: BTreeMap<usize, MultiMap>,
    bordering: Option<Arc<Bordering>>,
}

impl CogeneratingFamily {
    fn build(
        kind: FamilyKind,
        field: Field,
        source: &GradedSpace,
        target: &GradedSpace,
        truncation: usize,
        components: BTreeMap<usize, MultiMap>,
        bordering: Option<Arc<Bordering>>,
    ) -> Result<Self> {
        if truncation == 0 {
            return Err(Error::ArityOutOfRange { arity: 0, max: 0 });
        }
        if kind == FamilyKind::Coderivation && source != target {
            return Err(Error::SpaceMismatch {
                expected: source.to_string(),
                found: target.to_string(),
            });
        }
        let mut kept = BTreeMap::new();
        for (n, c) in components {
            if n == 0 || n > truncation {
                return Err(Error::ArityOutOfRange {
                    arity: n,
                    max: truncation,
                });
            }
            if c.arity() != n || c.coarity() != 1 {
                return Err(Error::Shape(format!(
                    "component {n} has shape {} -> {}",
                    c.arity(),
                    c.coarity()
                )));
            }
            if c.degree() != kind.degree() {
                return Err(Error::Degree(format!(
                    "{kind:?} component {n} has degree {}, expected {}",
                    c.degree(),
                    kind.degree()
                )));
            }
            if c.field() != field {
                return Err(Error::FieldMismatch(field.to_string(), c.field().to_string()));
            }
            if c.source() != source || c.target() != target {
                return Err(Error::SpaceMismatch {
                    expected: format!("{source} -> {target}"),
                    found: format!("{} -> {}", c.source(), c.target()),
                });
            }
            if !c.is_zero() {
                kept.insert(n, c);
            }
        }
        Ok(CogeneratingFamily {
            kind,
            field,
            source: source.clone(),
            target: target.clone(),
            truncation,
            components: kept,
            bordering,
        })
    }

    pub fn coderivation(
        field: Field,
        space: &GradedSpace,
        truncation: usize,
        components: BTreeMap<usize, MultiMap>,
    ) -> Result<Self> {
        Self::build(
            FamilyKind::Coderivation,
            field,
            space,
            space,
            truncation,
            components,
            None,
        )
    }

    pub fn morphism(
        field: Field,
        source: &GradedSpace,
        target: &GradedSpace,
        truncation: usize,
        components: BTreeMap<usize, MultiMap>,
    ) -> Result<Self> {
        Self::build(
            FamilyKind::Morphism,
            field,
            source,
            target,
            truncation,
            components,
            None,
        )
    }

    /// A homotopy family rel `(phi, psi)`.
    pub fn homotopy(
        phi: &CogeneratingFamily,
        psi: &CogeneratingFamily,
        components: BTreeMap<usize, MultiMap>,
    ) -> Result<Self> {
        if phi.kind != FamilyKind::Morphism || psi.kind != FamilyKind::Morphism {
            return Err(Error::Precondition(
                "a homotopy is bordered by two morphism families".into(),
            ));
        }
        if phi.source != psi.source || phi.target != psi.target {
            return Err(Error::SpaceMismatch {
                expected: format!("{} -> {}", phi.source, phi.target),
                found: format!("{} -> {}", psi.source, psi.target),
            });
        }
        if phi.truncation != psi.truncation {
            return Err(Error::TruncationMismatch(phi.truncation, psi.truncation));
        }
        Self::build(
            FamilyKind::Homotopy,
            phi.field,
            &phi.source,
            &phi.target,
            phi.truncation,
            components,
            Some(Arc::new(Bordering {
                phi: phi.clone(),
                psi: psi.clone(),
            })),
        )
    }

    pub fn identity(field: Field, space: &GradedSpace, truncation: usize) -> Self {
        let comps = BTreeMap::from([(1, MultiMap::identity(field, space))]);
        Self::morphism(field, space, space, truncation, comps).expect("identity family is well formed")
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
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

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn degree(&self) -> i64 {
        self.kind.degree()
    }

    pub fn component(&self, n: usize) -> Option<&MultiMap> {
        self.components.get(&n)
    }

    pub fn component_or_zero(&self, n: usize) -> MultiMap {
        self.components
            .get(&n)
            .cloned()
            .unwrap_or_else(|| MultiMap::zero(self.field, &self.source, &self.target, n, 1, self.kind.degree()))
    }

    /// Nonzero components keyed by arity.
    pub fn components(&self) -> &BTreeMap<usize, MultiMap> {
        &self.components
    }

    pub fn bordering(&self) -> Option<&Bordering> {
        self.bordering.as_deref()
    }

    /// The family restricted to arities `≤ n`.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.truncation {
            return Err(Error::ArityOutOfRange {
                arity: n,
                max: self.truncation,
            });
        }
        let bordering = match &self.bordering {
            Some(b) => Some(Arc::new(Bordering {
                phi: b.phi.truncated(n)?,
                psi: b.psi.truncated(n)?,
            })),
            None => None,
        };
        let components = self.components.range(..=n).map(|(k, v)| (*k, v.clone())).collect();
        Ok(CogeneratingFamily {
            components,
            truncation: n,
            bordering,
            ..self.clone()
        })
    }

    fn check_range(&self, n: usize, m: usize) -> Result<()> {
        if n == 0 || n > self.truncation {
            return Err(Error::ArityOutOfRange {
                arity: n,
                max: self.truncation,
            });
        }
        if m == 0 || m > n {
            return Err(Error::ArityOutOfRange { arity: m, max: n });
        }
        Ok(())
    }

    fn require(&self, kind: FamilyKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Precondition(format!(
                "expected a {kind:?} family, found {:?}",
                self.kind
            )));
        }
        Ok(())
    }

    fn bordering_or_err(&self) -> Result<&Bordering> {
        self.bordering
            .as_deref()
            .ok_or_else(|| Error::Precondition("homotopy family without bordering morphisms".into()))
    }
}

/// Ordered compositions of `n` into `m` positive parts, lexicographic.
pub fn compositions(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if m == 0 {
            if n == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if n < m {
            return;
        }
        for first in 1..=n - (m - 1) {
            cur.push(first);
            go(n - first, m - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m >= 1 && n >= m {
        go(n, m, &mut Vec::with_capacity(m), &mut out);
    }
    out
}

fn zero_power(f: &CogeneratingFamily, n: usize, m: usize, degree: i64) -> MultiMap {
    MultiMap::zero(f.field, &f.source, &f.target, n, m, degree)
}

/// The `V^{⊗n} → V^{⊗m}` component of the coderivation extending `d`:
/// `Σ_i 1^{⊗i-1} ⊗ d_{n-m+1} ⊗ 1^{⊗m-i}`.
pub fn coderivation_expand(d: &CogeneratingFamily, n: usize, m: usize) -> Result<MultiMap> {
    d.require(FamilyKind::Coderivation)?;
    d.check_range(n, m)?;
    let mut out = zero_power(d, n, m, -1);
    let Some(dk) = d.component(n - m + 1) else {
        return Ok(out);
    };
    let id = MultiMap::identity(d.field, &d.source);
    for i in 1..=m {
        let mut factors: Vec<&MultiMap> = Vec::with_capacity(m);
        factors.extend(std::iter::repeat_n(&id, i - 1));
        factors.push(dk);
        factors.extend(std::iter::repeat_n(&id, m - i));
        let term = MultiMap::tensor(&factors)?;
        out.add_assign_unchecked(&term, &d.field.one());
    }
    Ok(out)
}

/// The `V′^{⊗n} → V″^{⊗m}` component of the coalgebra morphism extending
/// `f`: `Σ_{r_1+…+r_m=n} f_{r_1} ⊗ … ⊗ f_{r_m}`.
pub fn morphism_expand(f: &CogeneratingFamily, n: usize, m: usize) -> Result<MultiMap> {
    f.require(FamilyKind::Morphism)?;
    f.check_range(n, m)?;
    let mut out = zero_power(f, n, m, 0);
    'comp: for r in compositions(n, m) {
        let mut factors = Vec::with_capacity(m);
        for &k in &r {
            match f.component(k) {
                Some(c) => factors.push(c),
                None => continue 'comp,
            }
        }
        out.add_assign_unchecked(&MultiMap::tensor(&factors)?, &f.field.one());
    }
    Ok(out)
}

/// The `V′^{⊗n} → V″^{⊗m}` component of the coderivation homotopy
/// extending `h` rel `(φ, ψ)`:
/// `Σ ψ_{r_1} ⊗ … ⊗ ψ_{r_{i-1}} ⊗ h_{r_i} ⊗ φ_{r_{i+1}} ⊗ … ⊗ φ_{r_m}`.
pub fn homotopy_expand(h: &CogeneratingFamily, n: usize, m: usize) -> Result<MultiMap> {
    h.require(FamilyKind::Homotopy)?;
    h.check_range(n, m)?;
    let b = h.bordering_or_err()?;
    let mut out = zero_power(h, n, m, 1);
    for r in compositions(n, m) {
        'slot: for i in 0..m {
            let mut factors = Vec::with_capacity(m);
            for (j, &k) in r.iter().enumerate() {
                let c = match j.cmp(&i) {
                    std::cmp::Ordering::Less => b.psi.component(k),
                    std::cmp::Ordering::Equal => h.component(k),
                    std::cmp::Ordering::Greater => b.phi.component(k),
                };
                match c {
                    Some(c) => factors.push(c),
                    None => continue 'slot,
                }
            }
            out.add_assign_unchecked(&MultiMap::tensor(&factors)?, &h.field.one());
        }
    }
    Ok(out)
}

/// Expansion of any family, dispatching on its kind.
pub fn expand(family: &CogeneratingFamily, n: usize, m: usize) -> Result<MultiMap> {
    match family.kind {
        FamilyKind::Coderivation => coderivation_expand(family, n, m),
        FamilyKind::Morphism => morphism_expand(family, n, m),
        FamilyKind::Homotopy => homotopy_expand(family, n, m),
    }
}

/// `outer ∘ family_{n → m}` for a coarity-one `outer` of arity `m`,
/// evaluated by insertions (never forming the `V^{⊗m}` component).
pub fn precompose(outer: &MultiMap, family: &CogeneratingFamily, n: usize) -> Result<MultiMap> {
    let m = outer.arity();
    if outer.coarity() != 1 {
        return Err(Error::Shape("precompose needs a coarity-one map".into()));
    }
    if outer.source() != family.target() {
        return Err(Error::SpaceMismatch {
            expected: outer.source().to_string(),
            found: family.target().to_string(),
        });
    }
    family.check_range(n, m)?;
    let f = family.field;
    let mut out = MultiMap::zero(
        f,
        &family.source,
        outer.target(),
        n,
        1,
        outer.degree() + family.degree(),
    );
    match family.kind {
        FamilyKind::Coderivation => {
            if let Some(dk) = family.component(n - m + 1) {
                for i in 1..=m {
                    out.add_assign_unchecked(&outer.plug(i, dk)?, &f.one());
                }
            }
        }
        FamilyKind::Morphism => {
            'comp: for r in compositions(n, m) {
                let mut factors = Vec::with_capacity(m);
                for &k in &r {
                    match family.component(k) {
                        Some(c) => factors.push(c),
                        None => continue 'comp,
                    }
                }
                out.add_assign_unchecked(&outer.compose_tensor(&factors)?, &f.one());
            }
        }
        FamilyKind::Homotopy => {
            let b = family.bordering_or_err()?;
            for r in compositions(n, m) {
                'slot: for i in 0..m {
                    let mut factors = Vec::with_capacity(m);
                    for (j, &k) in r.iter().enumerate() {
                        let c = match j.cmp(&i) {
                            std::cmp::Ordering::Less => b.psi.component(k),
                            std::cmp::Ordering::Equal => family.component(k),
                            std::cmp::Ordering::Greater => b.phi.component(k),
                        };
                        match c {
                            Some(c) => factors.push(c),
                            None => continue 'slot,
                        }
                    }
                    out.add_assign_unchecked(&outer.compose_tensor(&factors)?, &f.one());
                }
            }
        }
    }
    Ok(out)
}

/// A formal linear combination of composites of coalgebra-level maps. Each
/// composite lists its factors left to right, so `[a, b]` is `a ∘ b`.
#[derive(Clone, Debug, Default)]
pub struct Expr<'a> {
    terms: Vec<(Scalar, Vec<&'a CogeneratingFamily>)>,
}

impl<'a> Expr<'a> {
    pub fn new() -> Self {
        Expr { terms: Vec::new() }
    }

    pub fn term(mut self, coefficient: Scalar, factors: &[&'a CogeneratingFamily]) -> Self {
        self.terms.push((coefficient, factors.to_vec()));
        self
    }

    pub fn plus(self, factors: &[&'a CogeneratingFamily]) -> Self {
        let one = factors[0].field.one();
        self.term(one, factors)
    }

    pub fn minus(self, factors: &[&'a CogeneratingFamily]) -> Self {
        let m1 = -factors[0].field.one();
        self.term(m1, factors)
    }
}

/// The `V^{⊗n} → V` component of a composite `factors[0] ∘ … ∘ factors[k-1]`.
pub fn corestrict_composite(factors: &[&CogeneratingFamily], n: usize) -> Result<MultiMap> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::Shape("empty composite".into()))?;
    for w in factors.windows(2) {
        if w[0].source != w[1].target {
            return Err(Error::SpaceMismatch {
                expected: w[0].source.to_string(),
                found: w[1].target.to_string(),
            });
        }
        if w[0].field != w[1].field {
            return Err(Error::FieldMismatch(w[0].field.to_string(), w[1].field.to_string()));
        }
    }
    let last = factors[factors.len() - 1];
    if n == 0 || factors.iter().any(|f| n > f.truncation) {
        return Err(Error::ArityOutOfRange {
            arity: n,
            max: factors.iter().map(|f| f.truncation).min().unwrap_or(0),
        });
    }
    let degree: i64 = factors.iter().map(|f| f.degree()).sum();
    // left fold: K is the corestricted family of the composite so far
    let mut k: BTreeMap<usize, MultiMap> = first.components.range(..=n).map(|(a, c)| (*a, c.clone())).collect();
    let mut k_degree = first.degree();
    for (idx, family) in rest.iter().enumerate() {
        let is_last = idx + 1 == rest.len();
        let arities: Vec<usize> = if is_last { vec![n] } else { (1..=n).collect() };
        let mut next = BTreeMap::new();
        for p in arities {
            let mut acc = MultiMap::zero(
                first.field,
                &family.source,
                &first.target,
                p,
                1,
                k_degree + family.degree(),
            );
            for (_, km) in k.range(..=p) {
                let term = precompose(km, family, p)?;
                acc.add_assign_unchecked(&term, &first.field.one());
            }
            if !acc.is_zero() {
                next.insert(p, acc);
            }
        }
        k = next;
        k_degree += family.degree();
    }
    Ok(k.remove(&n)
        .unwrap_or_else(|| MultiMap::zero(first.field, &last.source, &first.target, n, 1, degree)))
}

/// The `V^{⊗n} → V` component of a formal sum of composites.
pub fn corestrict(expr: &Expr<'_>, n: usize) -> Result<MultiMap> {
    let mut acc: Option<MultiMap> = None;
    for (c, factors) in &expr.terms {
        let term = corestrict_composite(factors, n)?;
        match &mut acc {
            None => acc = Some(term.scale(c)),
            Some(a) => a.add_scaled(&term, c)?,
        }
    }
    acc.ok_or_else(|| Error::Shape("empty expression".into()))
}
