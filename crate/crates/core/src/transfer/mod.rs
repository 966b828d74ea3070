//! Transferring A∞-structures along chain homotopy equivalences.
//!
//! In the suspended picture write `b` for the coderivation of `(A, μ)`,
//! `p = sf`, `i = sg` and `K = sh`, so that `ip − 𝟙 = b_1K + Kb_1`. A
//! planar tree with `n` leaves is decorated by putting `b_m` on every
//! vertex with `m` children, `i` on every leaf and `K` on every internal
//! edge. With `M_n` the sum over all trees,
//! `ν_n = p ∘ M_n` and `G_n = K ∘ M_n` for `n ≥ 2`, while `G_1 = i`.

mod chain;
mod trees;

use std::collections::BTreeMap;

use crate::ainfty::{compose, AInfAlgebra, AInfHomotopy, AInfMorphism};
use crate::coalgebra::{self, CogeneratingFamily};
use crate::error::{Error, Result};
use crate::extension::straighten_to_isotopy;
use crate::multimap::MultiMap;

pub use chain::{check_chain_equivalence, find_witnesses, solve_chain_homotopy, HomotopyEquivalenceData};
pub use trees::{planar_trees, PlanarTree};

/// Outcome of a full transfer along `f : A → B`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferResult {
    pub nu: AInfAlgebra,
    /// `(A, μ) → (B, ν)` with linear part `f`.
    pub f: AInfMorphism,
    /// `(B, ν) → (A, μ)` with linear part `g`.
    pub g: AInfMorphism,
    /// A homotopy from `G ∘ F` to the identity of `(A, μ)`.
    pub h: AInfHomotopy,
}

struct TreeEvaluator<'a> {
    b: &'a CogeneratingFamily,
    i: MultiMap,
    k: MultiMap,
    memo: BTreeMap<PlanarTree, MultiMap>,
}

impl TreeEvaluator<'_> {
    /// Value of the decorated tree, without the root's outgoing edge.
    fn value(&mut self, tree: &PlanarTree) -> Result<Option<MultiMap>> {
        let PlanarTree::Node(children) = tree else {
            return Ok(Some(self.i.clone()));
        };
        if let Some(v) = self.memo.get(tree) {
            return Ok(Some(v.clone()));
        }
        let Some(bm) = self.b.component(children.len()) else {
            return Ok(None);
        };
        let mut factors = Vec::with_capacity(children.len());
        for c in children {
            match c {
                PlanarTree::Leaf => factors.push(self.i.clone()),
                node => match self.value(node)? {
                    Some(v) => factors.push(self.k.compose(&v)?),
                    None => return Ok(None),
                },
            }
        }
        let refs: Vec<&MultiMap> = factors.iter().collect();
        let v = bm.compose_tensor(&refs)?;
        self.memo.insert(tree.clone(), v.clone());
        Ok(Some(v))
    }
}

/// Transfers the structure of `algebra` along `data.f`, returning `ν` on
/// the target complex and `G : (B, ν) → (A, μ)` with `G_1 = g`.
pub fn transfer_structure(
    algebra: &AInfAlgebra,
    data: &HomotopyEquivalenceData,
) -> Result<(AInfAlgebra, AInfMorphism)> {
    if algebra.complex() != &data.source {
        return Err(Error::Precondition(
            "the structure does not live on the source complex of the equivalence".into(),
        ));
    }
    let n_max = algebra.truncation();
    let field = algebra.field();
    let b = algebra.shifted();
    let p = data.f.shift();
    let mut eval = TreeEvaluator {
        b,
        i: data.g.shift(),
        k: data.h.shift(),
        memo: BTreeMap::new(),
    };
    let target_shifted = data.target.space().suspend();
    let mut nu = BTreeMap::from([(1, data.target.differential().shift())]);
    let mut g = BTreeMap::from([(1, eval.i.clone())]);
    for n in 2..=n_max {
        let mut m_n = MultiMap::zero(field, &target_shifted, b.source(), n, 1, -1);
        for tree in planar_trees(n) {
            if let Some(v) = eval.value(&tree)? {
                m_n.add_scaled(&v, &field.one())?;
            }
        }
        nu.insert(n, p.compose(&m_n)?);
        g.insert(n, eval.k.compose(&m_n)?);
    }
    let nu = AInfAlgebra::from_shifted(&CogeneratingFamily::coderivation(field, &target_shifted, n_max, nu)?)?;
    nu.verify()?.into_result("transferred structure")?;
    let g_family = CogeneratingFamily::morphism(field, &target_shifted, b.source(), n_max, g)?;
    let g = AInfMorphism::from_shifted(&nu, algebra, &g_family)?;
    g.verify()?.into_result("transferred morphism G")?;
    Ok((nu, g))
}

/// Transfers `algebra` along a two-sided equivalence and builds `F`, `G`
/// and a homotopy `GF ≃ 𝟙`.
pub fn full_transfer(algebra: &AInfAlgebra, data: &HomotopyEquivalenceData) -> Result<TransferResult> {
    let (nu, g) = transfer_structure(algebra, data)?;
    // back along g: F̃ : (A, μ̃) → (B, ν) with linear part f
    let (_, f_tilde) = transfer_structure(&nu, &data.reversed()?)?;
    let e = compose(&g, &f_tilde)?;
    // 𝟙 = ∂(−h) + (−h)∂ + gf
    let straight = straighten_to_isotopy(&e, &data.h.neg(), &BTreeMap::new())?;
    let s_inv = straight.psi.invert_isotopy()?;
    let f = compose(&f_tilde, &s_inv)?;
    f.verify()?.into_result("transferred morphism F")?;
    let h = straight.eta.whisker_pre(&s_inv)?;
    let h = AInfHomotopy::from_shifted(&compose(&g, &f)?, &AInfMorphism::identity(algebra), h.shifted())?;
    h.verify()?.into_result("transfer homotopy")?;
    Ok(TransferResult { nu, f, g, h })
}

#[doc(hidden)]
pub fn transfer_by_recursion(
    algebra: &AInfAlgebra,
    data: &HomotopyEquivalenceData,
) -> Result<(CogeneratingFamily, CogeneratingFamily)> {
    let n_max = algebra.truncation();
    let field = algebra.field();
    let b = algebra.shifted();
    let p = data.f.shift();
    let k = data.h.shift();
    let target_shifted = data.target.space().suspend();
    let mut nu = BTreeMap::from([(1, data.target.differential().shift())]);
    let mut g = BTreeMap::from([(1, data.g.shift())]);
    for n in 2..=n_max {
        let partial = CogeneratingFamily::morphism(field, &target_shifted, b.source(), n_max, g.clone())?;
        let mut m_n = MultiMap::zero(field, &target_shifted, b.source(), n, 1, -1);
        for (_, bm) in b.components().range(2..=n) {
            m_n.add_scaled(&coalgebra::precompose(bm, &partial, n)?, &field.one())?;
        }
        nu.insert(n, p.compose(&m_n)?);
        g.insert(n, k.compose(&m_n)?);
    }
    Ok((
        CogeneratingFamily::coderivation(field, &target_shifted, n_max, nu)?,
        CogeneratingFamily::morphism(field, &target_shifted, b.source(), n_max, g)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate_instance, BaseAlgebra, Flavor, Profile};

    fn instance(base: BaseAlgebra, seed: u64, n: usize) -> (AInfAlgebra, HomotopyEquivalenceData) {
        let mut p = Profile::new(base, Flavor::Equivalence, n);
        p.source_cones = vec![0];
        p.target_cones = vec![0];
        let inst = generate_instance(seed, &p).unwrap();
        (inst.algebra, inst.equivalence.unwrap())
    }

    #[test]
    fn transfer_verifies() {
        for base in BaseAlgebra::ALL {
            for seed in 0..3 {
                let (a, data) = instance(base, seed, 4);
                let (nu, g) = transfer_structure(&a, &data).unwrap();
                assert_eq!(g.linear(), data.g);
                assert!(nu.verify().unwrap().passed);
            }
        }
    }

    #[test]
    fn trees_agree_with_recursion() {
        let (a, data) = instance(BaseAlgebra::Exterior, 5, 4);
        let (nu, g) = transfer_structure(&a, &data).unwrap();
        let (nu2, g2) = transfer_by_recursion(&a, &data).unwrap();
        assert_eq!(nu.shifted(), &nu2);
        assert_eq!(g.shifted(), &g2);
    }

    #[test]
    fn full_transfer_verifies() {
        for base in BaseAlgebra::ALL {
            let (a, data) = instance(base, 11, 4);
            let r = full_transfer(&a, &data).unwrap();
            assert_eq!(r.f.linear(), data.f);
            assert_eq!(r.h.component(1), Some(&data.h.neg()));
            assert!(r.h.verify().unwrap().passed);
        }
    }

    #[test]
    fn identity_data_returns_the_input() {
        let (a, _) = instance(BaseAlgebra::UpperTriangular, 2, 4);
        let cx = a.complex();
        let id = MultiMap::identity(a.field(), a.space());
        let zero = MultiMap::zero(a.field(), a.space(), a.space(), 1, 1, 1);
        let data = HomotopyEquivalenceData::new(cx, cx, id.clone(), id, zero.clone(), Some(zero)).unwrap();
        let r = full_transfer(&a, &data).unwrap();
        assert_eq!(r.nu, a);
        assert_eq!(r.f, AInfMorphism::identity(&a));
        assert_eq!(r.g, AInfMorphism::identity(&a));
        assert!(r.h.components().is_empty());
    }

    #[test]
    fn interval_collapse_product() {
        use crate::generate::interval_collapse;
        use crate::scalar::Field;
        let (a, b, f) = interval_collapse(Field::Rational, 4).unwrap();
        let data = find_witnesses(&f, a.complex(), &b).unwrap();
        let r = full_transfer(&a, &data).unwrap();
        let nu2 = r.nu.mu(2).unwrap();
        assert_eq!(nu2.coefficient(&[0, 0], &[0]), Field::Rational.one());
        assert_eq!(nu2.nnz(), 1);
        assert!(r.nu.products().range(3..).all(|(_, m)| m.is_zero()));
        assert!(r.h.verify().unwrap().passed);
    }
}
