//! Extending a chain map homotopic to the linear part of an A∞-morphism.
//!
//! Given `F : (A, μ′) → (B, μ″)`, a chain map `g` and `h` with
//! `g = ∂h + h∂ + f_1`, the components `g_n` are produced arity by arity
//! as the arity-`n` corestriction of `φ + δ″η + ηδ′`. At arity `n` that
//! expression only involves `g_r` for `r < n`, and the resulting `Ψ` is an
//! A∞-morphism homotopic to `F`.

use std::collections::BTreeMap;

use rand::Rng;

use crate::ainfty::{AInfHomotopy, AInfMorphism};
use crate::coalgebra::{self, corestrict, CheckReport, CogeneratingFamily, Equation, Expr};
use crate::error::{Error, Result};
use crate::multimap::{MultiMap, Tuple};
use crate::scalar::Field;
use crate::space::GradedSpace;

#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionResult {
    /// The extension `Ψ` with `Ψ_1 = g`.
    pub psi: AInfMorphism,
    /// A homotopy from `F` to `Ψ` with linear part `h`.
    pub eta: AInfHomotopy,
}

/// Extends `g` to an A∞-morphism homotopic to `f`.
///
/// `higher_h` supplies `h_k` for `k ≥ 2` (degree `k`); missing arities are
/// zero.
pub fn extend_homotopic_map(
    f: &AInfMorphism,
    g: &MultiMap,
    h: &MultiMap,
    higher_h: &BTreeMap<usize, MultiMap>,
) -> Result<ExtensionResult> {
    let source = f.source();
    let target = f.target();
    let n_max = f.truncation();
    let field = f.field();
    if higher_h.contains_key(&1) {
        return Err(Error::Precondition(
            "the linear homotopy is passed separately from higher_h".into(),
        ));
    }

    // arity 1: g − f = ∂h + h∂
    let g_placeholder = AInfMorphism::new(source, target, BTreeMap::from([(1, g.clone())]))?;
    let mut h_all = higher_h.clone();
    h_all.insert(1, h.clone());
    let eta_check = AInfHomotopy::new(f, &g_placeholder, h_all.clone())?;
    let residual = corestrict(
        &Expr::new()
            .plus(&[g_placeholder.shifted()])
            .minus(&[f.shifted()])
            .minus(&[target.shifted(), eta_check.shifted()])
            .minus(&[eta_check.shifted(), source.shifted()]),
        1,
    )?;
    if !residual.is_zero() {
        let mut report = CheckReport::pass();
        report.record(Equation::Homotopy, 1, &residual);
        return Err(Error::verification("linear homotopy relation g = ∂h + h∂ + f", report));
    }

    let phi = f.shifted();
    let eta_comps = eta_check.shifted().components().clone();
    let mut psi: BTreeMap<usize, MultiMap> = BTreeMap::from([(1, g.shift())]);
    for n in 2..=n_max {
        let partial = CogeneratingFamily::morphism(field, phi.source(), phi.target(), n_max, psi.clone())?;
        let eta = CogeneratingFamily::homotopy(phi, &partial, eta_comps.clone())?;
        let gn = corestrict(
            &Expr::new()
                .plus(&[phi])
                .plus(&[target.shifted(), &eta])
                .plus(&[&eta, source.shifted()]),
            n,
        )?;
        psi.insert(n, gn);
    }
    let psi_family = CogeneratingFamily::morphism(field, phi.source(), phi.target(), n_max, psi)?;
    let psi = AInfMorphism::from_shifted(source, target, &psi_family)?;
    let eta_family = CogeneratingFamily::homotopy(phi, psi.shifted(), eta_comps)?;
    let eta = AInfHomotopy::from_shifted(f, &psi, &eta_family)?;
    coalgebra::check_morphism(psi.shifted(), source.shifted(), target.shifted(), n_max)?
        .into_result("extended morphism")?;
    coalgebra::check_homotopy(eta.shifted(), source.shifted(), target.shifted(), n_max)?
        .into_result("extension homotopy")?;
    Ok(ExtensionResult { psi, eta })
}

/// Replaces `e : (X, μ′) → (X, μ″)` by a homotopic isotopy `T`, given `h`
/// with `𝟙 = ∂h + h∂ + e_1`. Returns `T` and a homotopy from `e` to `T`.
pub fn straighten_to_isotopy(
    e: &AInfMorphism,
    h: &MultiMap,
    higher_h: &BTreeMap<usize, MultiMap>,
) -> Result<ExtensionResult> {
    if e.source().complex() != e.target().complex() {
        return Err(Error::Precondition(
            "straightening needs an endomorphism of one complex".into(),
        ));
    }
    let id = MultiMap::identity(e.field(), e.source().space());
    let out = extend_homotopic_map(e, &id, h, higher_h)?;
    debug_assert!(out.psi.is_isotopy());
    Ok(out)
}

/// Random sparse `h_k : X^{⊗k} → Y` of degree `k` for `2 ≤ k ≤ n`, with
/// entries in `{−1, 1}`.
pub fn random_higher_homotopy<R: Rng>(
    field: Field,
    source: &GradedSpace,
    target: &GradedSpace,
    n: usize,
    density: f64,
    rng: &mut R,
) -> BTreeMap<usize, MultiMap> {
    let mut out = BTreeMap::new();
    for k in 2..=n {
        let mut m = MultiMap::zero(field, source, target, k, 1, k as i64);
        for x in source.tuples(k) {
            for y in target.basis_in_degree(source.tuple_degree(&x) + k as i64) {
                if rng.gen_bool(density) {
                    let v = if rng.gen_bool(0.5) { 1 } else { -1 };
                    m.add_entry(Tuple::from_slice(&x), Tuple::from_slice(&[y]), field.from_i64(v));
                }
            }
        }
        if !m.is_zero() {
            out.insert(k, m);
        }
    }
    out
}
