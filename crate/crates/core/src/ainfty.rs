//! A∞-algebras, morphisms and homotopies in the unshifted convention.
//!
//! Degrees: `∂` is −1, `μ_k` is `k − 2`, `f_k` is `k − 1`, `h_k` is `k`.
//! Every object also carries its cogenerating family on the suspension,
//! where the profiles become −1, 0 and +1; all checks run there.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::coalgebra::{self, CheckReport, CogeneratingFamily, WhiskerSide};
use crate::error::{Error, Result};
use crate::multimap::MultiMap;
use crate::scalar::Field;
use crate::space::GradedSpace;

fn space_mismatch(expected: impl fmt::Display, found: impl fmt::Display) -> Error {
    Error::SpaceMismatch {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

fn check_linear(
    m: &MultiMap,
    field: Field,
    source: &GradedSpace,
    target: &GradedSpace,
    degree: i64,
    what: &str,
) -> Result<()> {
    if m.field() != field {
        return Err(Error::FieldMismatch(field.to_string(), m.field().to_string()));
    }
    if m.arity() != 1 || m.coarity() != 1 {
        return Err(Error::Shape(format!("{what} must be a linear map")));
    }
    if m.source() != source || m.target() != target {
        return Err(space_mismatch(
            format!("{source} -> {target}"),
            format!("{} -> {}", m.source(), m.target()),
        ));
    }
    if m.degree() != degree {
        return Err(Error::Degree(format!(
            "{what} has degree {}, expected {degree}",
            m.degree()
        )));
    }
    Ok(())
}

/// A finite-dimensional chain complex with a degree −1 differential.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainComplex {
    field: Field,
    space: GradedSpace,
    differential: MultiMap,
}

impl ChainComplex {
    pub fn new(field: Field, space: &GradedSpace, differential: MultiMap) -> Result<Self> {
        check_linear(&differential, field, space, space, -1, "differential")?;
        if !differential.compose(&differential)?.is_zero() {
            return Err(Error::Precondition(format!(
                "differential of {space} does not square to zero"
            )));
        }
        Ok(ChainComplex {
            field,
            space: space.clone(),
            differential,
        })
    }

    /// The complex with zero differential.
    pub fn zero(field: Field, space: &GradedSpace) -> Self {
        ChainComplex {
            field,
            space: space.clone(),
            differential: MultiMap::zero(field, space, space, 1, 1, -1),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn differential(&self) -> &MultiMap {
        &self.differential
    }

    /// `∂_target ∘ h + h ∘ ∂_self` for a degree +1 map `h : self → target`.
    pub fn boundary_of(&self, target: &ChainComplex, h: &MultiMap) -> Result<MultiMap> {
        target.differential.compose(h)?.add(&h.compose(&self.differential)?)
    }

    /// Whether `f : self → target` commutes with the differentials.
    pub fn is_chain_map(&self, target: &ChainComplex, f: &MultiMap) -> Result<bool> {
        Ok(target.differential.compose(f)? == f.compose(&self.differential)?)
    }
}

struct AlgebraData {
    complex: ChainComplex,
    mu: BTreeMap<usize, MultiMap>,
    truncation: usize,
    shifted: CogeneratingFamily,
}

/// A truncated A∞-algebra `(A, ∂, μ_2, …, μ_N)`.
///
/// Construction only audits shapes and degrees; use [`AInfAlgebra::verify`]
/// for the Stasheff identities.
#[derive(Clone)]
pub struct AInfAlgebra(Arc<AlgebraData>);

impl AInfAlgebra {
    pub fn new(complex: &ChainComplex, mu: BTreeMap<usize, MultiMap>, truncation: usize) -> Result<Self> {
        let field = complex.field;
        let space = &complex.space;
        let mut kept = BTreeMap::new();
        for (k, m) in mu {
            if k < 2 || k > truncation {
                return Err(Error::ArityOutOfRange {
                    arity: k,
                    max: truncation,
                });
            }
            if m.arity() != k || m.coarity() != 1 {
                return Err(Error::Shape(format!("μ_{k} has arity {}", m.arity())));
            }
            if m.field() != field {
                return Err(Error::FieldMismatch(field.to_string(), m.field().to_string()));
            }
            if m.source() != space || m.target() != space {
                return Err(space_mismatch(space, m.source()));
            }
            if m.degree() != k as i64 - 2 {
                return Err(Error::Degree(format!(
                    "μ_{k} has degree {}, expected {}",
                    m.degree(),
                    k as i64 - 2
                )));
            }
            if !m.is_zero() {
                kept.insert(k, m);
            }
        }
        let mut comps = BTreeMap::from([(1, complex.differential.shift())]);
        comps.extend(kept.iter().map(|(k, m)| (*k, m.shift())));
        let shifted = CogeneratingFamily::coderivation(field, &space.suspend(), truncation, comps)?;
        Ok(AInfAlgebra(Arc::new(AlgebraData {
            complex: complex.clone(),
            mu: kept,
            truncation,
            shifted,
        })))
    }

    /// All higher products zero.
    pub fn trivial(complex: &ChainComplex, truncation: usize) -> Result<Self> {
        Self::new(complex, BTreeMap::new(), truncation)
    }

    /// Reads a coderivation family on `sA` back as an algebra on `A`.
    pub fn from_shifted(family: &CogeneratingFamily) -> Result<Self> {
        let space = family.source().desuspend();
        let field = family.field();
        let complex = ChainComplex::new(field, &space, family.component_or_zero(1).unshift())?;
        let mu = family.components().range(2..).map(|(k, b)| (*k, b.unshift())).collect();
        Self::new(&complex, mu, family.truncation())
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.0.complex
    }

    pub fn field(&self) -> Field {
        self.0.complex.field
    }

    pub fn space(&self) -> &GradedSpace {
        &self.0.complex.space
    }

    pub fn differential(&self) -> &MultiMap {
        &self.0.complex.differential
    }

    pub fn truncation(&self) -> usize {
        self.0.truncation
    }

    pub fn mu(&self, k: usize) -> Option<&MultiMap> {
        self.0.mu.get(&k)
    }

    /// Nonzero higher products keyed by arity.
    pub fn products(&self) -> &BTreeMap<usize, MultiMap> {
        &self.0.mu
    }

    pub fn shifted(&self) -> &CogeneratingFamily {
        &self.0.shifted
    }

    pub fn verify(&self) -> Result<CheckReport> {
        self.verify_up_to(self.truncation())
    }

    pub fn verify_up_to(&self, n: usize) -> Result<CheckReport> {
        coalgebra::check_square_zero(&self.0.shifted, n)
    }

    pub fn truncated(&self, n: usize) -> Result<Self> {
        Self::from_shifted(&self.0.shifted.truncated(n)?)
    }

    /// Same complex, same truncation.
    pub fn same_carrier(&self, other: &AInfAlgebra) -> bool {
        self.0.complex == other.0.complex && self.0.truncation == other.0.truncation
    }
}

impl PartialEq for AInfAlgebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.complex == other.0.complex && self.0.truncation == other.0.truncation && self.0.mu == other.0.mu)
    }
}

impl fmt::Debug for AInfAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AInfAlgebra")
            .field("space", self.space())
            .field("truncation", &self.truncation())
            .field("products", &self.0.mu.keys().collect::<Vec<_>>())
            .finish()
    }
}

struct MorphismData {
    source: AInfAlgebra,
    target: AInfAlgebra,
    components: BTreeMap<usize, MultiMap>,
    shifted: CogeneratingFamily,
}

/// A truncated A∞-morphism `(f_1, f_2, …, f_N)`.
#[derive(Clone)]
pub struct AInfMorphism(Arc<MorphismData>);

fn same_truncation(a: &AInfAlgebra, b: &AInfAlgebra) -> Result<usize> {
    if a.truncation() != b.truncation() {
        return Err(Error::TruncationMismatch(a.truncation(), b.truncation()));
    }
    Ok(a.truncation())
}

fn check_components(
    components: BTreeMap<usize, MultiMap>,
    field: Field,
    source: &GradedSpace,
    target: &GradedSpace,
    truncation: usize,
    offset: i64,
    what: &str,
) -> Result<BTreeMap<usize, MultiMap>> {
    let mut kept = BTreeMap::new();
    for (k, m) in components {
        if k == 0 || k > truncation {
            return Err(Error::ArityOutOfRange {
                arity: k,
                max: truncation,
            });
        }
        if m.arity() != k || m.coarity() != 1 {
            return Err(Error::Shape(format!("{what}_{k} has arity {}", m.arity())));
        }
        if m.field() != field {
            return Err(Error::FieldMismatch(field.to_string(), m.field().to_string()));
        }
        if m.source() != source || m.target() != target {
            return Err(space_mismatch(
                format!("{source} -> {target}"),
                format!("{} -> {}", m.source(), m.target()),
            ));
        }
        let expected = k as i64 + offset;
        if m.degree() != expected {
            return Err(Error::Degree(format!(
                "{what}_{k} has degree {}, expected {expected}",
                m.degree()
            )));
        }
        if !m.is_zero() {
            kept.insert(k, m);
        }
    }
    Ok(kept)
}

impl AInfMorphism {
    /// Audits shapes and degrees (`f_k` of degree `k − 1`).
    pub fn new(source: &AInfAlgebra, target: &AInfAlgebra, components: BTreeMap<usize, MultiMap>) -> Result<Self> {
        let n = same_truncation(source, target)?;
        if source.field() != target.field() {
            return Err(Error::FieldMismatch(
                source.field().to_string(),
                target.field().to_string(),
            ));
        }
        let kept = check_components(components, source.field(), source.space(), target.space(), n, -1, "f")?;
        let shifted = CogeneratingFamily::morphism(
            source.field(),
            source.shifted().source(),
            target.shifted().source(),
            n,
            kept.iter().map(|(k, m)| (*k, m.shift())).collect(),
        )?;
        Ok(AInfMorphism(Arc::new(MorphismData {
            source: source.clone(),
            target: target.clone(),
            components: kept,
            shifted,
        })))
    }

    pub fn from_shifted(source: &AInfAlgebra, target: &AInfAlgebra, family: &CogeneratingFamily) -> Result<Self> {
        if family.source() != source.shifted().source() || family.target() != target.shifted().source() {
            return Err(space_mismatch(
                format!("{} -> {}", source.shifted().source(), target.shifted().source()),
                format!("{} -> {}", family.source(), family.target()),
            ));
        }
        let comps = family.components().iter().map(|(k, m)| (*k, m.unshift())).collect();
        Self::new(source, target, comps)
    }

    pub fn identity(algebra: &AInfAlgebra) -> Self {
        let comps = BTreeMap::from([(1, MultiMap::identity(algebra.field(), algebra.space()))]);
        Self::new(algebra, algebra, comps).expect("identity is well formed")
    }

    pub fn source(&self) -> &AInfAlgebra {
        &self.0.source
    }

    pub fn target(&self) -> &AInfAlgebra {
        &self.0.target
    }

    pub fn field(&self) -> Field {
        self.0.source.field()
    }

    pub fn truncation(&self) -> usize {
        self.0.shifted.truncation()
    }

    pub fn component(&self, k: usize) -> Option<&MultiMap> {
        self.0.components.get(&k)
    }

    /// Nonzero components keyed by arity.
    pub fn components(&self) -> &BTreeMap<usize, MultiMap> {
        &self.0.components
    }

    /// The linear part `f_1`.
    pub fn linear(&self) -> MultiMap {
        self.component(1)
            .cloned()
            .unwrap_or_else(|| MultiMap::zero(self.field(), self.source().space(), self.target().space(), 1, 1, 0))
    }

    pub fn shifted(&self) -> &CogeneratingFamily {
        &self.0.shifted
    }

    pub fn verify(&self) -> Result<CheckReport> {
        self.verify_up_to(self.truncation())
    }

    pub fn verify_up_to(&self, n: usize) -> Result<CheckReport> {
        coalgebra::check_morphism(&self.0.shifted, self.source().shifted(), self.target().shifted(), n)
    }

    /// A morphism between structures on one complex whose linear part is
    /// exactly the identity.
    pub fn is_isotopy(&self) -> bool {
        self.source().complex() == self.target().complex() && self.component(1).is_some_and(MultiMap::is_identity)
    }

    pub fn invert_isotopy(&self) -> Result<Self> {
        if !self.is_isotopy() {
            return Err(Error::Precondition("not an isotopy".into()));
        }
        let inv = coalgebra::invert_isotopy(&self.0.shifted)?;
        Self::from_shifted(self.target(), self.source(), &inv)
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &AInfMorphism) -> Result<Self> {
        compose(self, inner)
    }

    pub fn truncated(&self, n: usize) -> Result<Self> {
        let s = self.source().truncated(n)?;
        let t = self.target().truncated(n)?;
        Self::from_shifted(&s, &t, &self.0.shifted.truncated(n)?)
    }
}

/// `outer ∘ inner`.
pub fn compose(outer: &AInfMorphism, inner: &AInfMorphism) -> Result<AInfMorphism> {
    if inner.target() != outer.source() {
        return Err(Error::Precondition(
            "the target structure of the inner morphism differs from the source of the outer one".into(),
        ));
    }
    let fam = coalgebra::compose_families(outer.shifted(), inner.shifted())?;
    AInfMorphism::from_shifted(inner.source(), outer.target(), &fam)
}

impl PartialEq for AInfMorphism {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.source == other.0.source
                && self.0.target == other.0.target
                && self.0.components == other.0.components)
    }
}

impl fmt::Debug for AInfMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AInfMorphism")
            .field("source", self.source().space())
            .field("target", self.target().space())
            .field("components", &self.0.components.keys().collect::<Vec<_>>())
            .finish()
    }
}

/// Pushes `algebra` forward along an isotopy-shaped family `s`
/// (`s_1 = 𝟙`, `s_k` of degree `k − 1`): returns the structure `ν` for
/// which `s : (A, μ) → (A, ν)` is an A∞-morphism, and that morphism.
pub fn pushforward_along_isotopy(
    algebra: &AInfAlgebra,
    s: BTreeMap<usize, MultiMap>,
) -> Result<(AInfAlgebra, AInfMorphism)> {
    let n = algebra.truncation();
    let kept = check_components(s, algebra.field(), algebra.space(), algebra.space(), n, -1, "s")?;
    if !kept.get(&1).is_some_and(MultiMap::is_identity) {
        return Err(Error::Precondition(
            "linear part of the isotopy is not the identity".into(),
        ));
    }
    let sigma = CogeneratingFamily::morphism(
        algebra.field(),
        algebra.shifted().source(),
        algebra.shifted().source(),
        n,
        kept.iter().map(|(k, m)| (*k, m.shift())).collect(),
    )?;
    let nu = coalgebra::transport_coderivation(algebra.shifted(), &sigma)?;
    let nu = AInfAlgebra::from_shifted(&nu)?;
    let iso = AInfMorphism::new(algebra, &nu, kept)?;
    Ok((nu, iso))
}

struct HomotopyData {
    from: AInfMorphism,
    to: AInfMorphism,
    components: BTreeMap<usize, MultiMap>,
    shifted: CogeneratingFamily,
}

/// An A∞-homotopy `(h_1, h_2, …)` from `F` to `G`: in the suspended
/// picture `G − F = δ″η + ηδ′`.
#[derive(Clone)]
pub struct AInfHomotopy(Arc<HomotopyData>);

impl AInfHomotopy {
    /// Audits shapes and degrees (`h_k` of degree `k`).
    pub fn new(from: &AInfMorphism, to: &AInfMorphism, components: BTreeMap<usize, MultiMap>) -> Result<Self> {
        if from.source() != to.source() || from.target() != to.target() {
            return Err(Error::Precondition(
                "bordering morphisms must share source and target".into(),
            ));
        }
        let n = from.truncation();
        let kept = check_components(
            components,
            from.field(),
            from.source().space(),
            from.target().space(),
            n,
            0,
            "h",
        )?;
        let shifted = CogeneratingFamily::homotopy(
            from.shifted(),
            to.shifted(),
            kept.iter().map(|(k, m)| (*k, m.shift())).collect(),
        )?;
        Ok(AInfHomotopy(Arc::new(HomotopyData {
            from: from.clone(),
            to: to.clone(),
            components: kept,
            shifted,
        })))
    }

    pub fn from_shifted(from: &AInfMorphism, to: &AInfMorphism, family: &CogeneratingFamily) -> Result<Self> {
        let comps = family.components().iter().map(|(k, m)| (*k, m.unshift())).collect();
        Self::new(from, to, comps)
    }

    /// The zero homotopy from `f` to itself.
    pub fn zero(f: &AInfMorphism) -> Self {
        Self::new(f, f, BTreeMap::new()).expect("zero homotopy is well formed")
    }

    pub fn from(&self) -> &AInfMorphism {
        &self.0.from
    }

    pub fn to(&self) -> &AInfMorphism {
        &self.0.to
    }

    pub fn truncation(&self) -> usize {
        self.0.shifted.truncation()
    }

    pub fn component(&self, k: usize) -> Option<&MultiMap> {
        self.0.components.get(&k)
    }

    pub fn components(&self) -> &BTreeMap<usize, MultiMap> {
        &self.0.components
    }

    pub fn shifted(&self) -> &CogeneratingFamily {
        &self.0.shifted
    }

    /// Checks the homotopy equation together with both bordering morphisms.
    pub fn verify(&self) -> Result<CheckReport> {
        self.verify_up_to(self.truncation())
    }

    pub fn verify_up_to(&self, n: usize) -> Result<CheckReport> {
        let mut report = coalgebra::check_homotopy(
            &self.0.shifted,
            self.from().source().shifted(),
            self.from().target().shifted(),
            n,
        )?;
        report.merge(self.from().verify_up_to(n)?);
        report.merge(self.to().verify_up_to(n)?);
        Ok(report)
    }

    /// `H ∘ ξ`, a homotopy from `Fξ` to `Gξ`.
    pub fn whisker_pre(&self, xi: &AInfMorphism) -> Result<Self> {
        if xi.target() != self.from().source() {
            return Err(Error::Precondition(
                "whiskering morphism does not land in the homotopy's source".into(),
            ));
        }
        let fam = coalgebra::whisker(
            &self.0.shifted,
            xi.shifted(),
            xi.source().shifted(),
            xi.target().shifted(),
            WhiskerSide::Pre,
        )?;
        Self::from_shifted(&compose(self.from(), xi)?, &compose(self.to(), xi)?, &fam)
    }

    /// `ξ ∘ H`, a homotopy from `ξF` to `ξG`.
    pub fn whisker_post(&self, xi: &AInfMorphism) -> Result<Self> {
        if xi.source() != self.from().target() {
            return Err(Error::Precondition(
                "whiskering morphism does not start at the homotopy's target".into(),
            ));
        }
        let fam = coalgebra::whisker(
            &self.0.shifted,
            xi.shifted(),
            xi.source().shifted(),
            xi.target().shifted(),
            WhiskerSide::Post,
        )?;
        Self::from_shifted(&compose(xi, self.from())?, &compose(xi, self.to())?, &fam)
    }
}

/// Solves for a homotopy from `from` to `to`, if one exists.
pub fn solve_homotopy(from: &AInfMorphism, to: &AInfMorphism) -> Result<Option<AInfHomotopy>> {
    if from.source() != to.source() || from.target() != to.target() {
        return Err(Error::Precondition(
            "bordering morphisms must share source and target".into(),
        ));
    }
    let fam = coalgebra::solve_homotopy(
        from.shifted(),
        to.shifted(),
        from.source().shifted(),
        from.target().shifted(),
    )?;
    fam.map(|f| AInfHomotopy::from_shifted(from, to, &f)).transpose()
}

impl PartialEq for AInfHomotopy {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.from == other.0.from && self.0.to == other.0.to && self.0.components == other.0.components)
    }
}

impl fmt::Debug for AInfHomotopy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AInfHomotopy")
            .field("from", &self.0.from)
            .field("to", &self.0.to)
            .field("components", &self.0.components.keys().collect::<Vec<_>>())
            .finish()
    }
}
