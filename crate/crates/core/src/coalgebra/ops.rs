use std::collections::BTreeMap;

use super::{check_morphism, corestrict_composite, precompose, CogeneratingFamily, FamilyKind};
use crate::error::{Error, Result};
use crate::multimap::MultiMap;

fn same_truncation(a: &CogeneratingFamily, b: &CogeneratingFamily) -> Result<usize> {
    if a.truncation() != b.truncation() {
        return Err(Error::TruncationMismatch(a.truncation(), b.truncation()));
    }
    Ok(a.truncation())
}

/// The cogenerating family of `outer ∘ inner` for two morphism families.
pub fn compose_families(outer: &CogeneratingFamily, inner: &CogeneratingFamily) -> Result<CogeneratingFamily> {
    outer.require(FamilyKind::Morphism)?;
    inner.require(FamilyKind::Morphism)?;
    let n = same_truncation(outer, inner)?;
    let mut comps = BTreeMap::new();
    for k in 1..=n {
        comps.insert(k, corestrict_composite(&[outer, inner], k)?);
    }
    CogeneratingFamily::morphism(outer.field(), inner.source(), outer.target(), n, comps)
}

fn require_isotopy(psi: &CogeneratingFamily) -> Result<()> {
    psi.require(FamilyKind::Morphism)?;
    if psi.source() != psi.target() || !psi.component(1).is_some_and(MultiMap::is_identity) {
        return Err(Error::Precondition(
            "not an isotopy: linear component is not the identity".into(),
        ));
    }
    Ok(())
}

/// The inverse of a morphism family whose linear component is the identity.
pub fn invert_isotopy(psi: &CogeneratingFamily) -> Result<CogeneratingFamily> {
    require_isotopy(psi)?;
    let field = psi.field();
    let mut inv: BTreeMap<usize, MultiMap> = BTreeMap::from([(1, MultiMap::identity(field, psi.source()))]);
    for n in 2..=psi.truncation() {
        let mut acc = MultiMap::zero(field, psi.source(), psi.target(), n, 1, 0);
        for (_, im) in inv.range(..n) {
            acc.add_assign_unchecked(&precompose(im, psi, n)?, &-field.one());
        }
        inv.insert(n, acc);
    }
    CogeneratingFamily::morphism(field, psi.source(), psi.target(), psi.truncation(), inv)
}

/// The coderivation `S δ S⁻¹` for an isotopy `S`.
pub fn transport_coderivation(delta: &CogeneratingFamily, s: &CogeneratingFamily) -> Result<CogeneratingFamily> {
    delta.require(FamilyKind::Coderivation)?;
    require_isotopy(s)?;
    if delta.source() != s.source() {
        return Err(Error::SpaceMismatch {
            expected: delta.source().to_string(),
            found: s.source().to_string(),
        });
    }
    let n_max = same_truncation(delta, s)?;
    let field = delta.field();
    let mut nu: BTreeMap<usize, MultiMap> = BTreeMap::new();
    for n in 1..=n_max {
        let mut acc = corestrict_composite(&[s, delta], n)?;
        for (_, nm) in nu.range(..n) {
            acc.add_assign_unchecked(&precompose(nm, s, n)?, &-field.one());
        }
        nu.insert(n, acc);
    }
    CogeneratingFamily::coderivation(field, delta.source(), n_max, nu)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WhiskerSide {
    /// `η ∘ ξ`, a homotopy rel `(φξ, ψξ)`.
    Pre,
    /// `ξ ∘ η`, a homotopy rel `(ξφ, ξψ)`.
    Post,
}

/// Whiskers a homotopy family with a morphism family `ξ`, which must
/// commute with the coderivations `xi_source` and `xi_target`.
pub fn whisker(
    eta: &CogeneratingFamily,
    xi: &CogeneratingFamily,
    xi_source: &CogeneratingFamily,
    xi_target: &CogeneratingFamily,
    side: WhiskerSide,
) -> Result<CogeneratingFamily> {
    eta.require(FamilyKind::Homotopy)?;
    xi.require(FamilyKind::Morphism)?;
    let n = same_truncation(eta, xi)?;
    check_morphism(xi, xi_source, xi_target, n)?.into_result("whiskering morphism")?;
    let b = eta.bordering_or_err()?;
    let (factors, phi, psi): ([&CogeneratingFamily; 2], _, _) = match side {
        WhiskerSide::Pre => ([eta, xi], compose_families(&b.phi, xi)?, compose_families(&b.psi, xi)?),
        WhiskerSide::Post => ([xi, eta], compose_families(xi, &b.phi)?, compose_families(xi, &b.psi)?),
    };
    let mut comps = BTreeMap::new();
    for k in 1..=n {
        comps.insert(k, corestrict_composite(&factors, k)?);
    }
    CogeneratingFamily::homotopy(&phi, &psi, comps)
}
