//! Lifting structures along chain homotopy equivalences, and certificates
//! that two lifts agree up to isotopy.
//!
//! An opfibration lift moves a structure on `A` forward along `f : A → B`;
//! a fibration lift pulls a structure on `B` back along `f`. Lifts are
//! unique only up to isotopy, which [`connect_lifts`] makes explicit: it
//! returns isotopies `S`, `T` and a homotopy `TF′ ≃ F″S`.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ainfty::{
    compose, pushforward_along_isotopy, solve_homotopy, AInfAlgebra, AInfHomotopy, AInfMorphism, ChainComplex,
};
use crate::coalgebra::CheckReport;
use crate::error::{Error, Result};
use crate::extension::{extend_homotopic_map, random_higher_homotopy, straighten_to_isotopy};
use crate::generate::random_isotopy;
use crate::multimap::MultiMap;
use crate::transfer::{
    check_chain_equivalence, find_witnesses, full_transfer, solve_chain_homotopy, transfer_structure,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LiftDirection {
    /// Structure on the source, transported to the target.
    Opfibration,
    /// Structure on the target, pulled back to the source.
    Fibration,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiftRequest {
    pub direction: LiftDirection,
    /// On `A` for opfibration lifts, on `B` for fibration lifts.
    pub structure: AInfAlgebra,
    /// The complex on the other side of `f`.
    pub other: ChainComplex,
    pub f: MultiMap,
    pub truncation: usize,
}

impl LiftRequest {
    pub fn new(
        direction: LiftDirection,
        structure: &AInfAlgebra,
        other: &ChainComplex,
        f: MultiMap,
        truncation: usize,
    ) -> Result<Self> {
        if truncation > structure.truncation() {
            return Err(Error::TruncationMismatch(truncation, structure.truncation()));
        }
        let req = LiftRequest {
            direction,
            structure: structure.truncated(truncation)?,
            other: other.clone(),
            f,
            truncation,
        };
        let (a, b) = req.complexes();
        if !check_chain_equivalence(&req.f, a, b)? {
            return Err(Error::Precondition("f is not a chain homotopy equivalence".into()));
        }
        Ok(req)
    }

    /// `(A, B)` with `f : A → B`.
    pub fn complexes(&self) -> (&ChainComplex, &ChainComplex) {
        match self.direction {
            LiftDirection::Opfibration => (self.structure.complex(), &self.other),
            LiftDirection::Fibration => (&self.other, self.structure.complex()),
        }
    }
}

/// A lifted structure and the morphism `F : (A, μ) → (B, ν)` with `F_1 = f`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lift {
    /// `ν` for opfibration lifts, `μ` for fibration lifts.
    pub structure: AInfAlgebra,
    pub morphism: AInfMorphism,
}

pub fn opfibration_lift(req: &LiftRequest) -> Result<Lift> {
    if req.direction != LiftDirection::Opfibration {
        return Err(Error::Precondition("expected an opfibration request".into()));
    }
    let (a, b) = req.complexes();
    let data = find_witnesses(&req.f, a, b)?;
    let r = full_transfer(&req.structure, &data)?;
    Ok(Lift {
        structure: r.nu,
        morphism: r.f,
    })
}

pub fn fibration_lift(req: &LiftRequest) -> Result<Lift> {
    if req.direction != LiftDirection::Fibration {
        return Err(Error::Precondition("expected a fibration request".into()));
    }
    let (a, b) = req.complexes();
    let data = find_witnesses(&req.f, a, b)?;
    // transferring along g produces the morphism back along f directly
    let (mu, f) = transfer_structure(&req.structure, &data.reversed()?)?;
    Ok(Lift {
        structure: mu,
        morphism: f,
    })
}

/// Runs the lift for `req.direction`. With a seed, the result is moved to
/// another representative: its higher components are re-extended with
/// random higher homotopies and the free side is pushed along a random
/// isotopy.
pub fn lift(req: &LiftRequest, seed: Option<u64>) -> Result<Lift> {
    let base = match req.direction {
        LiftDirection::Opfibration => opfibration_lift(req)?,
        LiftDirection::Fibration => fibration_lift(req)?,
    };
    let Some(seed) = seed else {
        return Ok(base);
    };
    let f = &base.morphism;
    let field = f.field();
    let n = req.truncation;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b) = (f.source().space(), f.target().space());
    let higher = random_higher_homotopy(field, a, b, n, 0.2, &mut rng);
    let zero = MultiMap::zero(field, a, b, 1, 1, 1);
    let psi = extend_homotopic_map(f, &req.f, &zero, &higher)?.psi;
    let out = match req.direction {
        LiftDirection::Opfibration => {
            let u = random_isotopy(field, b, n, 0.3, &mut rng);
            let (nu, u) = pushforward_along_isotopy(psi.target(), u)?;
            Lift {
                structure: nu,
                morphism: compose(&u, &psi)?,
            }
        }
        LiftDirection::Fibration => {
            let u = random_isotopy(field, a, n, 0.3, &mut rng);
            let (mu, u) = pushforward_along_isotopy(psi.source(), u)?;
            Lift {
                structure: mu,
                morphism: compose(&psi, &u.invert_isotopy()?)?,
            }
        }
    };
    out.morphism.verify()?.into_result("perturbed lift")?;
    Ok(out)
}

/// Isotopies `S : μ′ → μ″`, `T : ν′ → ν″` and a homotopy from `TF′` to
/// `F″S`.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareCertificate {
    pub s: AInfMorphism,
    pub t: AInfMorphism,
    pub eta: AInfHomotopy,
}

impl SquareCertificate {
    /// Re-runs every checker. Shape problems are errors; identity failures
    /// are collected in the report.
    pub fn verify(&self) -> Result<CheckReport> {
        if !self.s.is_isotopy() || !self.t.is_isotopy() {
            return Err(Error::Precondition("S and T must be isotopies".into()));
        }
        let from = self.eta.from();
        let to = self.eta.to();
        if from.source() != self.s.source()
            || from.target() != self.t.target()
            || to.source() != self.s.source()
            || to.target() != self.t.target()
        {
            return Err(Error::Precondition("the homotopy does not fit the square".into()));
        }
        let mut report = self.s.verify()?;
        report.merge(self.t.verify()?);
        report.merge(self.eta.verify()?);
        Ok(report)
    }

    /// Also checks that the homotopy runs from `T ∘ left` to `right ∘ S`.
    pub fn verify_square(&self, left: &AInfMorphism, right: &AInfMorphism) -> Result<CheckReport> {
        let report = self.verify()?;
        if self.eta.from() != &compose(&self.t, left)? || self.eta.to() != &compose(right, &self.s)? {
            return Err(Error::Precondition(
                "the certificate belongs to a different square".into(),
            ));
        }
        Ok(report)
    }
}

/// The isotopy fixed in advance when connecting two lifts.
#[derive(Clone, Debug, PartialEq)]
pub enum GivenIsotopy {
    Source(AInfMorphism),
    Target(AInfMorphism),
}

/// Connects `left : (A, μ′) → (B, ν′)` and `right : (A, μ″) → (B, ν″)`.
///
/// `witness` is `w` with `f″ − f′ = ∂w + w∂`; it is solved for when absent.
pub fn connect_lifts(
    left: &AInfMorphism,
    right: &AInfMorphism,
    given: &GivenIsotopy,
    witness: Option<&MultiMap>,
) -> Result<SquareCertificate> {
    let a = left.source().complex();
    let b = left.target().complex();
    if right.source().complex() != a || right.target().complex() != b {
        return Err(Error::Precondition(
            "both morphisms must run between the same complexes".into(),
        ));
    }
    if left.truncation() != right.truncation() {
        return Err(Error::TruncationMismatch(left.truncation(), right.truncation()));
    }
    left.verify()?.into_result("left morphism")?;
    right.verify()?.into_result("right morphism")?;
    let (f1, f2) = (left.linear(), right.linear());
    let w = match witness {
        Some(w) => {
            if f2.sub(&f1)? != a.boundary_of(b, w)? {
                return Err(Error::Precondition(
                    "the chain homotopy witness fails f″ − f′ = ∂w + w∂".into(),
                ));
            }
            w.clone()
        }
        None => solve_chain_homotopy(&f1, &f2, a, b)?
            .ok_or_else(|| Error::Precondition("the linear parts are not chain homotopic".into()))?,
    };
    let (s, t) = match given {
        GivenIsotopy::Source(s) => {
            check_given(s, left.source(), right.source())?;
            let data = find_witnesses(&f1, a, b)?;
            let k = data.k.clone().expect("find_witnesses returns both homotopies");
            let tr = full_transfer(left.source(), &data)?;
            let g0 = &tr.g;
            // 𝟙 − f′ḡ = ∂(−k) + (−k)∂
            let t1 = straighten_to_isotopy(&compose(left, g0)?, &k.neg(), &BTreeMap::new())?.psi;
            // 𝟙 − f″ḡ = ∂x + x∂ with x = −(wḡ + k)
            let x = w.compose(&data.g)?.add(&k)?.neg();
            let t2 = straighten_to_isotopy(&compose(right, &compose(s, g0)?)?, &x, &BTreeMap::new())?.psi;
            (s.clone(), compose(&t2, &t1.invert_isotopy()?)?)
        }
        GivenIsotopy::Target(t) => {
            check_given(t, left.target(), right.target())?;
            let data = find_witnesses(&f2, a, b)?;
            let tr = full_transfer(right.target(), &data.reversed()?)?;
            let g0 = &tr.f;
            // 𝟙 − gf′ = ∂x + x∂ with x = gw − h
            let x = data.g.compose(&w)?.sub(&data.h)?;
            let s1 = straighten_to_isotopy(&compose(g0, &compose(t, left)?)?, &x, &BTreeMap::new())?.psi;
            let s2 = straighten_to_isotopy(&compose(g0, right)?, &data.h.neg(), &BTreeMap::new())?.psi;
            (compose(&s2.invert_isotopy()?, &s1)?, t.clone())
        }
    };
    let from = compose(&t, left)?;
    let to = compose(right, &s)?;
    let eta = solve_homotopy(&from, &to)?.ok_or_else(|| Error::Unsolvable("no homotopy closes the square".into()))?;
    let cert = SquareCertificate { s, t, eta };
    cert.verify()?.into_result("square certificate")?;
    Ok(cert)
}

fn check_given(iso: &AInfMorphism, from: &AInfAlgebra, to: &AInfAlgebra) -> Result<()> {
    if !iso.is_isotopy() {
        return Err(Error::Precondition("the given map is not an isotopy".into()));
    }
    if iso.source() != from || iso.target() != to {
        return Err(Error::Precondition(
            "the given isotopy does not connect the two structures".into(),
        ));
    }
    iso.verify()?.into_result("given isotopy")
}

/// `Y ∘ S ∘ F` for `F : (A, μ) → (B, ν′)`, `S : ν′ → ν″` and
/// `Y : (B, ν″) → (C, ω)`.
pub fn compose_arrows(f: &AInfMorphism, y: &AInfMorphism, s: &AInfMorphism) -> Result<AInfMorphism> {
    if !s.is_isotopy() {
        return Err(Error::Precondition("the connecting map is not an isotopy".into()));
    }
    let out = compose(y, &compose(s, f)?)?;
    out.verify()?.into_result("composed arrow")?;
    Ok(out)
}
