//! Seeded test instances.
//!
//! Three flavors: a small associative algebra, optionally direct-summed
//! with acyclic two-term cones (zero products on the cones); the same
//! pushed forward along a random isotopy; and an equivalence
//! `A ↪ A ⊕ cones` perturbed by a null-homotopic map, with explicit
//! witnesses.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ainfty::{pushforward_along_isotopy, AInfAlgebra, ChainComplex};
use crate::error::{Error, Result};
use crate::multimap::{MultiMap, Tuple};
use crate::scalar::Field;
use crate::space::GradedSpace;
use crate::transfer::HomotopyEquivalenceData;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseAlgebra {
    /// `k[ε]/ε²`, basis `1, ε` in degree 0.
    DualNumbers,
    /// Upper-triangular 2×2 matrices, basis `e11, e12, e22` in degree 0.
    UpperTriangular,
    /// Exterior algebra on `x` of degree 1, basis `1, x`.
    Exterior,
}

impl BaseAlgebra {
    pub const ALL: [BaseAlgebra; 3] = [
        BaseAlgebra::DualNumbers,
        BaseAlgebra::UpperTriangular,
        BaseAlgebra::Exterior,
    ];

    fn dims(self) -> Vec<(i64, usize)> {
        match self {
            BaseAlgebra::DualNumbers => vec![(0, 2)],
            BaseAlgebra::UpperTriangular => vec![(0, 3)],
            BaseAlgebra::Exterior => vec![(0, 1), (1, 1)],
        }
    }

    /// Structure constants `(i, j) ↦ k` with `e_i e_j = e_k`.
    fn table(self) -> Vec<(u32, u32, u32)> {
        match self {
            BaseAlgebra::DualNumbers => vec![(0, 0, 0), (0, 1, 1), (1, 0, 1)],
            // e11 = 0, e12 = 1, e22 = 2
            BaseAlgebra::UpperTriangular => vec![(0, 0, 0), (0, 1, 1), (1, 2, 1), (2, 2, 2)],
            BaseAlgebra::Exterior => vec![(0, 0, 0), (0, 1, 1), (1, 0, 1)],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BaseAlgebra::DualNumbers => "dual",
            BaseAlgebra::UpperTriangular => "upper",
            BaseAlgebra::Exterior => "exterior",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    Associative,
    Pushforward,
    Equivalence,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    pub base: BaseAlgebra,
    /// Bottom degrees `d` of cones `u ↦ v` (`|u| = d + 1`, `|v| = d`) added
    /// to the algebra.
    pub source_cones: Vec<i64>,
    /// Cones added to form the target of the equivalence flavor.
    pub target_cones: Vec<i64>,
    pub truncation: usize,
    pub field: Field,
    pub flavor: Flavor,
    /// Probability that a coefficient of a random map is nonzero.
    pub density: f64,
}

impl Profile {
    pub fn new(base: BaseAlgebra, flavor: Flavor, truncation: usize) -> Self {
        Profile {
            base,
            source_cones: Vec::new(),
            target_cones: if flavor == Flavor::Equivalence {
                vec![0]
            } else {
                Vec::new()
            },
            truncation,
            field: Field::Rational,
            flavor,
            density: 0.3,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub algebra: AInfAlgebra,
    pub equivalence: Option<HomotopyEquivalenceData>,
    /// The algebra extended by zero over the target cones, for lifts that
    /// start from the target.
    pub target_algebra: Option<AInfAlgebra>,
}

/// Base dims plus cones, listing which global indices are cone `u`/`v`.
struct Layout {
    space: GradedSpace,
    /// global index in the new space of the old basis element
    embed: Vec<u32>,
    /// (u, v) pairs of new cone elements
    cones: Vec<(u32, u32)>,
}

fn extend_space(name: &str, base: &BTreeMap<i64, usize>, cones: &[i64]) -> Result<Layout> {
    let mut dims = base.clone();
    for &d in cones {
        *dims.entry(d + 1).or_insert(0) += 1;
        *dims.entry(d).or_insert(0) += 1;
    }
    let space = GradedSpace::new(name, dims.iter().map(|(d, n)| (*d, *n)))?;
    // old elements come first inside each degree, then the cone elements in order
    let mut used: BTreeMap<i64, usize> = base.clone();
    let mut embed = Vec::new();
    for (&d, &n) in base {
        for j in 0..n {
            embed.push(space.global_index(d, j).expect("old basis fits"));
        }
    }
    let mut pairs = Vec::new();
    for &d in cones {
        let take = |used: &mut BTreeMap<i64, usize>, deg: i64| {
            let slot = used.entry(deg).or_insert(0);
            let idx = space.global_index(deg, *slot).expect("cone basis fits");
            *slot += 1;
            idx
        };
        let u = take(&mut used, d + 1);
        let v = take(&mut used, d);
        pairs.push((u, v));
    }
    Ok(Layout {
        space,
        embed,
        cones: pairs,
    })
}

fn base_algebra(profile: &Profile) -> Result<AInfAlgebra> {
    let field = profile.field;
    let base = GradedSpace::new("A", profile.base.dims())?;
    let layout = extend_space("A", base.base_dims(), &profile.source_cones)?;
    let a = &layout.space;
    let mut d = MultiMap::zero(field, a, a, 1, 1, -1);
    for &(u, v) in &layout.cones {
        d.add_entry(Tuple::from_slice(&[u]), Tuple::from_slice(&[v]), field.one());
    }
    let complex = ChainComplex::new(field, a, d)?;
    let mut mu2 = MultiMap::zero(field, a, a, 2, 1, 0);
    for (i, j, k) in profile.base.table() {
        let e = &layout.embed;
        mu2.add_entry(
            Tuple::from_slice(&[e[i as usize], e[j as usize]]),
            Tuple::from_slice(&[e[k as usize]]),
            field.one(),
        );
    }
    AInfAlgebra::new(&complex, BTreeMap::from([(2, mu2)]), profile.truncation)
}

fn random_value<R: Rng>(field: Field, rng: &mut R) -> crate::scalar::Scalar {
    let v = rng.gen_range(1..=2) * if rng.gen_bool(0.5) { 1 } else { -1 };
    field.from_i64(v)
}

/// Random isotopy-shaped family on `space`: `s_1 = 𝟙`, sparse `s_k`.
pub fn random_isotopy<R: Rng>(
    field: Field,
    space: &GradedSpace,
    truncation: usize,
    density: f64,
    rng: &mut R,
) -> BTreeMap<usize, MultiMap> {
    let mut out = BTreeMap::from([(1, MultiMap::identity(field, space))]);
    for k in 2..=truncation {
        // keep higher arities sparser so entries stay small
        let p = density / (k - 1) as f64;
        let mut m = MultiMap::zero(field, space, space, k, 1, k as i64 - 1);
        for x in space.tuples(k) {
            for y in space.basis_in_degree(space.tuple_degree(&x) + k as i64 - 1) {
                if rng.gen_bool(p) {
                    m.add_entry(Tuple::from_slice(&x), Tuple::from_slice(&[y]), random_value(field, rng));
                }
            }
        }
        out.insert(k, m);
    }
    out
}

/// Extends `algebra` by zero over `cones` added to its space; returns the
/// extension, the inclusion, the projection and `k0` with
/// `ιπ − 𝟙 = ∂k0 + k0∂`.
fn cone_extension(
    algebra: &AInfAlgebra,
    cones: &[i64],
    name: &str,
) -> Result<(AInfAlgebra, MultiMap, MultiMap, MultiMap)> {
    let field = algebra.field();
    let a = algebra.space();
    let layout = extend_space(name, a.base_dims(), cones)?;
    let b = &layout.space;
    let e = &layout.embed;
    let mut d = MultiMap::zero(field, b, b, 1, 1, -1);
    for (x, y, v) in algebra.differential().triples() {
        d.add_entry(
            Tuple::from_slice(&[e[x[0] as usize]]),
            Tuple::from_slice(&[e[y[0] as usize]]),
            v.clone(),
        );
    }
    let mut k0 = MultiMap::zero(field, b, b, 1, 1, 1);
    for &(u, v) in &layout.cones {
        d.add_entry(Tuple::from_slice(&[u]), Tuple::from_slice(&[v]), field.one());
        k0.add_entry(Tuple::from_slice(&[v]), Tuple::from_slice(&[u]), -field.one());
    }
    let complex = ChainComplex::new(field, b, d)?;
    let mut mu = BTreeMap::new();
    for (&k, m) in algebra.products() {
        let mut mk = MultiMap::zero(field, b, b, k, 1, k as i64 - 2);
        for (x, y, v) in m.triples() {
            let xs: Tuple = x.iter().map(|&i| e[i as usize]).collect();
            mk.add_entry(xs, Tuple::from_slice(&[e[y[0] as usize]]), v.clone());
        }
        mu.insert(k, mk);
    }
    let extended = AInfAlgebra::new(&complex, mu, algebra.truncation())?;
    let mut iota = MultiMap::zero(field, a, b, 1, 1, 0);
    let mut proj = MultiMap::zero(field, b, a, 1, 1, 0);
    for (i, &j) in e.iter().enumerate() {
        iota.add_entry(Tuple::from_slice(&[i as u32]), Tuple::from_slice(&[j]), field.one());
        proj.add_entry(Tuple::from_slice(&[j]), Tuple::from_slice(&[i as u32]), field.one());
    }
    Ok((extended, iota, proj, k0))
}

/// `f = ι + ∂θ + θ∂ : A → A ⊕ cones` for a random `θ`, with witnesses
/// `g = π`, `h = πθ` and `k = k0 + θπ`.
fn equivalence_onto_cones<R: Rng>(
    algebra: &AInfAlgebra,
    cones: &[i64],
    name: &str,
    density: f64,
    rng: &mut R,
) -> Result<(AInfAlgebra, HomotopyEquivalenceData)> {
    if cones.is_empty() {
        return Err(Error::Precondition(
            "the equivalence flavor needs at least one target cone".into(),
        ));
    }
    let field = algebra.field();
    let (target_algebra, iota, proj, k0) = cone_extension(algebra, cones, name)?;
    let a = algebra.space();
    let b = target_algebra.space();
    let mut theta = MultiMap::zero(field, a, b, 1, 1, 1);
    for x in 0..a.dim() as u32 {
        for y in b.basis_in_degree(a.degree(x) + 1) {
            if rng.gen_bool(density.max(0.5)) {
                theta.add_entry(
                    Tuple::from_slice(&[x]),
                    Tuple::from_slice(&[y]),
                    random_value(field, rng),
                );
            }
        }
    }
    let source = algebra.complex();
    let target = target_algebra.complex();
    let f = iota.add(&source.boundary_of(target, &theta)?)?;
    let h = proj.compose(&theta)?;
    let k = k0.add(&theta.compose(&proj)?)?;
    let data = HomotopyEquivalenceData::new(source, target, f, proj, h, Some(k))?;
    Ok((target_algebra, data))
}

/// Two composable equivalences `A → B → C`, each adding `profile.target_cones`.
/// The profile's flavor is ignored beyond the structure on `A`.
pub fn generate_composable_pair(
    seed: u64,
    profile: &Profile,
) -> Result<(AInfAlgebra, HomotopyEquivalenceData, HomotopyEquivalenceData)> {
    let mut p = profile.clone();
    p.flavor = Flavor::Equivalence;
    let inst = generate_instance(seed, &p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let b = inst.target_algebra.expect("equivalence flavor");
    let (_, second) = equivalence_onto_cones(&b, &profile.target_cones, "C", profile.density, &mut rng)?;
    Ok((inst.algebra, inst.equivalence.expect("equivalence flavor"), second))
}

/// An equivalence from `algebra` onto `algebra ⊕ cones`, seeded like the
/// equivalence flavor but starting from any structure.
pub fn equivalence_onto(
    algebra: &AInfAlgebra,
    cones: &[i64],
    seed: u64,
    density: f64,
) -> Result<(AInfAlgebra, HomotopyEquivalenceData)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    equivalence_onto_cones(algebra, cones, "B", density, &mut rng)
}

pub fn generate_instance(seed: u64, profile: &Profile) -> Result<Instance> {
    if profile.truncation < 2 {
        return Err(Error::Precondition("truncation must be at least 2".into()));
    }
    if !(0.0..=1.0).contains(&profile.density) {
        return Err(Error::Precondition("density must lie in [0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = profile.field;
    let mut algebra = base_algebra(profile)?;
    if profile.flavor != Flavor::Associative {
        let s = random_isotopy(field, algebra.space(), profile.truncation, profile.density, &mut rng);
        algebra = pushforward_along_isotopy(&algebra, s)?.0;
    }
    if profile.flavor != Flavor::Equivalence {
        return Ok(Instance {
            algebra,
            equivalence: None,
            target_algebra: None,
        });
    }
    let (target_algebra, data) =
        equivalence_onto_cones(&algebra, &profile.target_cones, "B", profile.density, &mut rng)?;
    Ok(Instance {
        algebra,
        equivalence: Some(data),
        target_algebra: Some(target_algebra),
    })
}

/// The interval `A` (`x, y` in degree 0, `a` in degree 1, `∂a = x − y`)
/// collapsing onto a point `B = ⟨z⟩`, with `f(x) = f(y) = z`. The product
/// makes `x` a unit and `y` an idempotent; everything else vanishes.
pub fn interval_collapse(field: Field, truncation: usize) -> Result<(AInfAlgebra, ChainComplex, MultiMap)> {
    let a = GradedSpace::new("A", [(0, 2), (1, 1)])?;
    let b = GradedSpace::new("B", [(0, 1)])?;
    let (x, y, e) = (0u32, 1u32, 2u32);
    let one = field.one();
    let d = MultiMap::from_entries(
        field,
        &a,
        &a,
        1,
        1,
        -1,
        [(vec![e], vec![x], one.clone()), (vec![e], vec![y], -one.clone())],
    )?;
    let complex = ChainComplex::new(field, &a, d)?;
    let table = [(x, x, x), (x, y, y), (y, x, y), (y, y, y), (x, e, e), (e, x, e)];
    let mu2 = MultiMap::from_entries(
        field,
        &a,
        &a,
        2,
        1,
        0,
        table.iter().map(|&(i, j, k)| (vec![i, j], vec![k], one.clone())),
    )?;
    let algebra = AInfAlgebra::new(&complex, BTreeMap::from([(2, mu2)]), truncation)?;
    let target = ChainComplex::zero(field, &b);
    let f = MultiMap::from_entries(
        field,
        &a,
        &b,
        1,
        1,
        0,
        [(vec![x], vec![0], one.clone()), (vec![y], vec![0], one)],
    )?;
    Ok((algebra, target, f))
}
