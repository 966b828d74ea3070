//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, Instant};

use ainf_cli::{emit, parse, run, Bundle};
use ainf_core::ainfty::{compose, pushforward_along_isotopy, AInfAlgebra, AInfMorphism};
use ainf_core::bifib::{compose_arrows, connect_lifts, lift, GivenIsotopy, LiftDirection, LiftRequest};
use ainf_core::coalgebra::check_square_zero;
use ainf_core::extension::{extend_homotopic_map, random_higher_homotopy};
use ainf_core::generate::{
    equivalence_onto, generate_composable_pair, generate_instance, random_isotopy, BaseAlgebra, Flavor, Profile,
};
use ainf_core::transfer::{full_transfer, planar_trees, transfer_structure, HomotopyEquivalenceData};
use ainf_core::{Field, GradedSpace, MultiMap, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn core<T>(r: ainf_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn passes(r: ainf_core::Result<ainf_core::coalgebra::CheckReport>, what: &str) -> Result<(), String> {
    let r = core(r)?;
    ensure(r.passed, || format!("{what}: {r}"))
}

fn timed<T>(limit: Duration, what: &str, f: impl FnOnce() -> Result<T, String>) -> Result<T, String> {
    let start = Instant::now();
    let out = f()?;
    let took = start.elapsed();
    ensure(took <= limit, || format!("{what} took {took:?}, limit {limit:?}"))?;
    Ok(out)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn base(seed: u64) -> BaseAlgebra {
    BaseAlgebra::ALL[(seed % 3) as usize]
}

// ---------------------------------------------------------------- 1

fn random_map(rng: &mut ChaCha8Rng, v: &GradedSpace, arity: usize, degree: i64) -> MultiMap {
    let field = Field::Rational;
    let mut entries = Vec::new();
    for x in v.tuples(arity) {
        for y in v.basis_in_degree(v.tuple_degree(&x) + degree) {
            if rng.gen_bool(0.5) {
                let c = rng.gen_range(-3..=3);
                entries.push((x.clone(), vec![y], field.from_i64(c)));
            }
        }
    }
    MultiMap::from_entries(field, v, v, arity, 1, degree, entries).unwrap()
}

fn engine_soundness() -> Outcome {
    let v = GradedSpace::new("V", [(-1, 1), (0, 2), (1, 1)]).unwrap();
    let start = Instant::now();
    for seed in 0..500u64 {
        let mut r = rng(seed);
        let mut deg = || r.gen_range(-1..=1i64);
        let (df, dg, dp, dq) = (deg(), deg(), deg(), deg());
        let f = random_map(&mut r, &v, 1, df);
        let g = random_map(&mut r, &v, 1, dg);
        let (kp, kq) = (r.gen_range(1..=2), r.gen_range(1..=2));
        let p = random_map(&mut r, &v, kp, dp);
        let q = random_map(&mut r, &v, kq, dq);
        let lhs = core(core(MultiMap::tensor(&[&f, &g]))?.compose(&core(MultiMap::tensor(&[&p, &q]))?))?;
        let mut rhs = core(MultiMap::tensor(&[&core(f.compose(&p))?, &core(g.compose(&q))?]))?;
        if (dg * dp) % 2 != 0 {
            rhs = rhs.neg();
        }
        ensure(lhs == rhs, || format!("interchange fails for seed {seed}"))?;
    }
    for seed in 0..500u64 {
        let mut r = rng(1000 + seed);
        let (ka, kb, kc) = (r.gen_range(2..=3), r.gen_range(1..=2), r.gen_range(1..=2));
        let mut deg = || r.gen_range(-1..=1i64);
        let (da, db, dc) = (deg(), deg(), deg());
        let a = random_map(&mut r, &v, ka, da);
        let b = random_map(&mut r, &v, kb, db);
        let c = random_map(&mut r, &v, kc, dc);
        let (i, j) = (r.gen_range(1..=ka), r.gen_range(1..=kb));
        let nested = core(a.plug(i, &core(b.plug(j, &c))?))?;
        let stepwise = core(core(a.plug(i, &b))?.plug(i + j - 1, &c))?;
        ensure(nested == stepwise, || format!("nested plug fails for seed {seed}"))?;
        let first = core(core(a.plug(1, &b))?.plug(ka + kb - 1, &c))?;
        let mut second = core(core(a.plug(ka, &c))?.plug(1, &b))?;
        if (db * dc) % 2 != 0 {
            second = second.neg();
        }
        ensure(first == second, || format!("disjoint plug fails for seed {seed}"))?;
    }
    for seed in 0..500u64 {
        let mut r = rng(2000 + seed);
        let k = r.gen_range(1..=3);
        let d = r.gen_range(-1..=1);
        let m = random_map(&mut r, &v, k, d);
        let s = m.shift();
        ensure(s.degree() == d + 1 - k as i64 && s.unshift() == m, || {
            format!("shift round trip fails for seed {seed}")
        })?;
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(30), || format!("took {took:?}"))?;
    Ok("3 × 500 cases".into())
}

// ---------------------------------------------------------------- 2

/// Dense tables of `μ_k` (with `μ_1 = ∂`), indexed by the flattened input
/// tuple and the output.
struct Dense {
    dim: usize,
    degree: Vec<i64>,
    mu: BTreeMap<usize, Vec<Scalar>>,
    field: Field,
}

impl Dense {
    fn new(a: &AInfAlgebra) -> Self {
        let space = a.space();
        let dim = space.dim();
        let field = a.field();
        let degree = (0..dim as u32).map(|i| space.degree(i)).collect();
        let mut mu = BTreeMap::new();
        let mut put = |k: usize, m: &MultiMap| {
            let mut table = vec![field.zero(); dim.pow(k as u32) * dim];
            for (x, y, v) in m.triples() {
                let row = x.iter().fold(0, |acc, &i| acc * dim + i as usize);
                table[row * dim + y[0] as usize] = v.clone();
            }
            mu.insert(k, table);
        };
        put(1, a.differential());
        for (k, m) in a.products() {
            put(*k, m);
        }
        Dense { dim, degree, mu, field }
    }

    fn apply(&self, k: usize, x: &[usize]) -> Vec<Scalar> {
        let Some(t) = self.mu.get(&k) else {
            return vec![self.field.zero(); self.dim];
        };
        let row = x.iter().fold(0, |acc, &i| acc * self.dim + i);
        t[row * self.dim..(row + 1) * self.dim].to_vec()
    }

    /// Parity of the sign in `s^{⊗k}(x_1 ⊗ … ⊗ x_k) = ± sx_1 ⊗ … ⊗ sx_k`:
    /// the `j`-th `s` moves past `x_1, …, x_{j−1}`.
    fn suspension_parity(&self, x: &[usize]) -> i64 {
        let k = x.len() as i64;
        x.iter()
            .enumerate()
            .map(|(i, &e)| (k - 1 - i as i64) * self.degree[e])
            .sum()
    }

    /// `Σ b_{r+1+t}(1^r ⊗ b_s ⊗ 1^t)(sx_1 ⊗ … ⊗ sx_n)` with
    /// `b_k = s ∘ μ_k ∘ (s^{⊗k})^{−1}`, read off as a vector on `sA`.
    fn stasheff(&self, x: &[usize]) -> Vec<Scalar> {
        let n = x.len();
        let mut out = vec![self.field.zero(); self.dim];
        for s in 1..=n {
            for r in 0..=n - s {
                let u = n - s + 1;
                // b_s has degree −1 and passes sx_1 … sx_r
                let passed: i64 = x[..r].iter().map(|&i| self.degree[i] + 1).sum();
                let inner_sign = passed + self.suspension_parity(&x[r..r + s]);
                for (y, c) in self.apply(s, &x[r..r + s]).iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut args = x[..r].to_vec();
                    args.push(y);
                    args.extend_from_slice(&x[r + s..]);
                    let odd = (inner_sign + self.suspension_parity(&args)).rem_euclid(2) == 1;
                    for (o, v) in self.apply(u, &args).iter().enumerate() {
                        out[o] += &(c * v).signed(odd);
                    }
                }
            }
        }
        out
    }

    /// First nonzero residual coefficient as `(arity, inputs, output, value)`.
    fn first_violation(&self, n_max: usize) -> Option<(usize, Vec<u32>, u32, Scalar)> {
        for n in 1..=n_max {
            let total = self.dim.pow(n as u32);
            for row in 0..total {
                let mut x = vec![0; n];
                let mut rest = row;
                for slot in x.iter_mut().rev() {
                    *slot = rest % self.dim;
                    rest /= self.dim;
                }
                for (o, v) in self.stasheff(&x).into_iter().enumerate() {
                    if !v.is_zero() {
                        return Some((n, x.iter().map(|&i| i as u32).collect(), o as u32, v));
                    }
                }
            }
        }
        None
    }
}

fn small_structure(seed: u64) -> Result<AInfAlgebra, String> {
    let flavor = [Flavor::Associative, Flavor::Pushforward, Flavor::Equivalence][(seed / 3 % 3) as usize];
    let mut p = Profile::new(base(seed), flavor, 4);
    if flavor != Flavor::Equivalence && seed.is_multiple_of(2) {
        p.source_cones = vec![(seed % 4) as i64 / 2];
    }
    let inst = core(generate_instance(seed, &p))?;
    if flavor != Flavor::Equivalence {
        return Ok(inst.algebra);
    }
    // the structure transferred back from the bigger complex
    let data = core(inst.equivalence.unwrap().reversed())?;
    Ok(core(transfer_structure(&inst.target_algebra.unwrap(), &data))?.0)
}

fn corrupt(a: &AInfAlgebra, r: &mut ChaCha8Rng) -> Result<AInfAlgebra, String> {
    let space = a.space();
    let mut mu = a.products().clone();
    let slots = |k: usize| -> Vec<(Vec<u32>, u32)> {
        space
            .tuples(k)
            .into_iter()
            .flat_map(|x| {
                let d = space.tuple_degree(&x) + k as i64 - 2;
                space.basis_in_degree(d).map(move |y| (x.clone(), y))
            })
            .collect()
    };
    let first = r.gen_range(2..=3);
    let Some((k, candidates)) = [first, 5 - first]
        .into_iter()
        .map(|k| (k, slots(k)))
        .find(|(_, c)| !c.is_empty())
    else {
        return Err("no room to perturb".into());
    };
    let m = mu
        .entry(k)
        .or_insert_with(|| MultiMap::zero(a.field(), space, space, k, 1, k as i64 - 2));
    let (x, y) = candidates[r.gen_range(0..candidates.len())].clone();
    let bump = a.field().from_i64(if r.gen_bool(0.5) { 1 } else { -1 });
    let old = m.coefficient(&x, &[y]);
    let mut entries: Vec<(Vec<u32>, Vec<u32>, Scalar)> = m
        .triples()
        .filter(|(xx, yy, _)| !(xx.as_slice() == x.as_slice() && yy[0] == y))
        .map(|(xx, yy, v)| (xx.to_vec(), yy.to_vec(), v.clone()))
        .collect();
    entries.push((x, vec![y], &old + &bump));
    *m = core(MultiMap::from_entries(
        a.field(),
        space,
        space,
        k,
        1,
        k as i64 - 2,
        entries,
    ))?;
    core(AInfAlgebra::new(a.complex(), mu, a.truncation()))
}

fn compare_with_oracle(a: &AInfAlgebra, label: &str) -> Result<bool, String> {
    let report = core(check_square_zero(a.shifted(), 4))?;
    let oracle = Dense::new(a).first_violation(4);
    match (report.first(), oracle) {
        (None, None) => Ok(true),
        (Some(v), Some((n, x, o, val))) => {
            ensure(v.arity == n && v.inputs == x && v.output == o, || {
                format!(
                    "{label}: checker reports arity {} at {:?}→{}, oracle arity {n} at {x:?}→{o}",
                    v.arity, v.inputs, v.output
                )
            })?;
            ensure(v.value == val || v.value == -val.clone(), || {
                format!("{label}: values {} and {val} differ", v.value)
            })?;
            Ok(false)
        }
        (c, o) => Err(format!(
            "{label}: checker {} but oracle {}",
            if c.is_none() { "passes" } else { "fails" },
            if o.is_none() { "passes" } else { "fails" }
        )),
    }
}

fn dictionary_equivalence() -> Outcome {
    let mut failing = 0;
    for seed in 0..100u64 {
        let a = small_structure(seed)?;
        ensure(a.space().dim() <= 6, || {
            format!("seed {seed}: dimension {}", a.space().dim())
        })?;
        ensure(compare_with_oracle(&a, &format!("structure {seed}"))?, || {
            format!("structure {seed} is not valid")
        })?;
    }
    for seed in 0..20u64 {
        let a = small_structure(seed)?;
        let mut r = rng(seed);
        // redraw until the oracle sees the damage, so every variant is invalid
        let bad = (0..50)
            .map(|_| corrupt(&a, &mut r))
            .find(|b| b.as_ref().map_or(true, |b| Dense::new(b).first_violation(4).is_some()))
            .ok_or_else(|| format!("structure {seed} could not be corrupted"))??;
        if !compare_with_oracle(&bad, &format!("corruption {seed}"))? {
            failing += 1;
        }
    }
    ensure(failing == 20, || {
        format!("only {failing} of 20 corruptions were detected")
    })?;
    Ok("100 valid structures and 20 corruptions agree".into())
}

// ---------------------------------------------------------------- 3

fn extension_instance(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let phi = if seed.is_multiple_of(2) {
        let mut p = Profile::new(base(seed), Flavor::Pushforward, 4);
        p.source_cones = vec![0];
        let a = core(generate_instance(seed, &p))?.algebra;
        core(pushforward_along_isotopy(
            &a,
            random_isotopy(a.field(), a.space(), 4, 0.3, &mut r),
        ))?
        .1
    } else {
        let p = Profile::new(base(seed), Flavor::Equivalence, 4);
        let inst = core(generate_instance(seed, &p))?;
        core(full_transfer(&inst.algebra, &inst.equivalence.unwrap()))?.f
    };
    let (a, b) = (phi.source(), phi.target());
    let h = random_map_between(&mut r, a.space(), b.space(), 1);
    let g = core(phi.linear().add(&core(a.complex().boundary_of(b.complex(), &h))?))?;
    let higher = random_higher_homotopy(a.field(), a.space(), b.space(), 4, 0.2, &mut r);
    let out = core(extend_homotopic_map(&phi, &g, &h, &higher))?;
    ensure(out.psi.linear() == g, || format!("seed {seed}: Ψ₁ ≠ g"))?;
    passes(out.psi.verify_up_to(4), &format!("seed {seed}: Ψ"))?;
    passes(out.eta.verify_up_to(4), &format!("seed {seed}: η"))?;
    let zero = MultiMap::zero(a.field(), a.space(), b.space(), 1, 1, 1);
    let same = core(extend_homotopic_map(&phi, &phi.linear(), &zero, &BTreeMap::new()))?;
    ensure(same.psi == phi, || {
        format!("seed {seed}: trivial data changed the morphism")
    })
}

fn random_map_between(rng: &mut ChaCha8Rng, a: &GradedSpace, b: &GradedSpace, degree: i64) -> MultiMap {
    let field = Field::Rational;
    let mut entries = Vec::new();
    for x in 0..a.dim() as u32 {
        for y in b.basis_in_degree(a.degree(x) + degree) {
            if rng.gen_bool(0.5) {
                entries.push((vec![x], vec![y], field.from_i64(rng.gen_range(-2..=2))));
            }
        }
    }
    MultiMap::from_entries(field, a, b, 1, 1, degree, entries).unwrap()
}

fn extension_checks() -> Outcome {
    let mut slowest = Duration::ZERO;
    for seed in 0..100u64 {
        let start = Instant::now();
        timed(Duration::from_secs(5), &format!("extension {seed}"), || {
            extension_instance(seed)
        })?;
        slowest = slowest.max(start.elapsed());
    }
    Ok(format!("100 instances, slowest {slowest:.2?}"))
}

// ---------------------------------------------------------------- 4

fn transfer_instance(seed: u64) -> Result<(), String> {
    let flavor = [Flavor::Associative, Flavor::Pushforward, Flavor::Equivalence][(seed % 3) as usize];
    let mut p = Profile::new(base(seed / 3), flavor, 4);
    if seed % 2 == 1 {
        p.target_cones = vec![0, 1];
    }
    let inst = core(generate_instance(seed, &p))?;
    let (target_alg, data) = match (inst.target_algebra, inst.equivalence) {
        (Some(t), Some(d)) => (t, d),
        _ => core(equivalence_onto(&inst.algebra, &[0], seed, 0.3))?,
    };
    for (alg, data, dir) in [
        (&inst.algebra, data.clone(), "forward"),
        (&target_alg, core(data.reversed())?, "backward"),
    ] {
        let what = format!("seed {seed} {dir}");
        let (nu, g) = core(transfer_structure(alg, &data))?;
        passes(nu.verify_up_to(4), &format!("{what}: ν"))?;
        passes(g.verify_up_to(4), &format!("{what}: G"))?;
        let full = core(full_transfer(alg, &data))?;
        ensure(full.nu == nu, || format!("{what}: the two transfers disagree"))?;
        passes(full.f.verify_up_to(4), &format!("{what}: F"))?;
        passes(full.h.verify_up_to(4), &format!("{what}: H"))?;
    }
    Ok(())
}

fn transfer_checks() -> Outcome {
    let mut slowest = Duration::ZERO;
    for seed in 0..100u64 {
        let start = Instant::now();
        timed(Duration::from_secs(10), &format!("transfer {seed}"), || {
            transfer_instance(seed)
        })?;
        slowest = slowest.max(start.elapsed());
    }
    for seed in 0..3u64 {
        let mut p = Profile::new(base(seed), Flavor::Pushforward, 4);
        p.source_cones = vec![0];
        let a = core(generate_instance(seed, &p))?.algebra;
        let (cx, field) = (a.complex(), a.field());
        let id = MultiMap::identity(field, a.space());
        let zero = MultiMap::zero(field, a.space(), a.space(), 1, 1, 1);
        let data = core(HomotopyEquivalenceData::new(
            cx,
            cx,
            id.clone(),
            id,
            zero.clone(),
            Some(zero),
        ))?;
        let (nu, _) = core(transfer_structure(&a, &data))?;
        ensure(nu == a, || format!("identity data changed structure {seed}"))?;
    }
    Ok(format!(
        "100 instances in both directions, slowest {slowest:.2?}; identity data exact"
    ))
}

// ---------------------------------------------------------------- 5

/// Little Schröder numbers from `(n+1)s(n+1) = 3(2n−1)s(n) − (n−2)s(n−1)`.
fn schroeder(n: usize) -> u64 {
    let mut s = vec![0u64, 1, 1];
    for m in 2..n {
        let m64 = m as u64;
        let next = (3 * (2 * m64 - 1) * s[m] - (m64 - 2) * s[m - 1]) / (m64 + 1);
        s.push(next);
    }
    s[n]
}

fn tree_combinatorics() -> Outcome {
    let mut counts = Vec::new();
    for n in 2..=5 {
        let trees = planar_trees(n);
        ensure(trees.iter().all(|t| t.leaves() == n), || {
            format!("a tree with the wrong leaf count at n = {n}")
        })?;
        let mut unique = trees.clone();
        unique.sort();
        unique.dedup();
        ensure(unique.len() == trees.len(), || format!("duplicate trees at n = {n}"))?;
        ensure(trees.len() as u64 == schroeder(n), || {
            format!("n = {n}: {} trees, oracle {}", trees.len(), schroeder(n))
        })?;
        counts.push(trees.len());
    }
    ensure(counts == [1, 3, 11, 45], || format!("counts {counts:?}"))?;
    Ok(format!("counts {counts:?}"))
}

// ---------------------------------------------------------------- 6

fn isotopy_group() -> Outcome {
    for seed in 0..100u64 {
        let mut p = Profile::new(base(seed), Flavor::Associative, 5);
        if seed.is_multiple_of(2) {
            p.source_cones = vec![0];
        }
        let a = core(generate_instance(seed, &p))?.algebra;
        let mut r = rng(seed);
        let mut next =
            |x: &AInfAlgebra| pushforward_along_isotopy(x, random_isotopy(x.field(), x.space(), 5, 0.3, &mut r));
        let (b, s1) = core(next(&a))?;
        let (c, s2) = core(next(&b))?;
        let (_, s3) = core(next(&c))?;
        let inv = core(s1.invert_isotopy())?;
        let id_a = AInfMorphism::identity(&a);
        let id_b = AInfMorphism::identity(&b);
        ensure(core(compose(&inv, &s1))? == id_a, || {
            format!("seed {seed}: left inverse")
        })?;
        ensure(core(compose(&s1, &inv))? == id_b, || {
            format!("seed {seed}: right inverse")
        })?;
        ensure(
            core(compose(&s1, &id_a))? == s1 && core(compose(&id_b, &s1))? == s1,
            || format!("seed {seed}: unit"),
        )?;
        let left = core(compose(&core(compose(&s3, &s2))?, &s1))?;
        let right = core(compose(&s3, &core(compose(&s2, &s1))?))?;
        ensure(left == right, || format!("seed {seed}: associativity"))?;
        ensure(left.is_isotopy(), || format!("seed {seed}: closure"))?;
        passes(left.verify(), &format!("seed {seed}: composite"))?;
        passes(inv.verify(), &format!("seed {seed}: inverse"))?;
    }
    Ok("100 isotopies at N = 5".into())
}

// ---------------------------------------------------------------- 7

fn reload(bundle: &Bundle) -> Result<Bundle, String> {
    let text = emit(bundle).map_err(|e| e.to_string())?;
    let back = parse(&text, bundle.field).map_err(|e| e.to_string())?;
    ensure(emit(&back).map_err(|e| e.to_string())? == text, || {
        "emit is not stable".into()
    })?;
    Ok(back)
}

fn lift_pair(seed: u64, direction: LiftDirection) -> Result<(), String> {
    let mut p = Profile::new(base(seed), Flavor::Equivalence, 3);
    if seed.is_multiple_of(2) {
        p.source_cones = vec![0];
    }
    let inst = core(generate_instance(seed, &p))?;
    let data = inst.equivalence.unwrap();
    let req = match direction {
        LiftDirection::Opfibration => core(LiftRequest::new(
            direction,
            &inst.algebra,
            &data.target,
            data.f.clone(),
            3,
        ))?,
        LiftDirection::Fibration => core(LiftRequest::new(
            direction,
            &inst.target_algebra.unwrap(),
            &data.source,
            data.f.clone(),
            3,
        ))?,
    };
    let l1 = core(lift(&req, Some(2 * seed)))?;
    let l2 = core(lift(&req, Some(2 * seed + 1)))?;
    passes(l1.morphism.verify(), "first lift")?;
    passes(l2.morphism.verify(), "second lift")?;
    let id = AInfMorphism::identity(&req.structure);
    let given = match direction {
        LiftDirection::Opfibration => GivenIsotopy::Source(id),
        LiftDirection::Fibration => GivenIsotopy::Target(id),
    };
    let cert = core(connect_lifts(&l1.morphism, &l2.morphism, &given, None))?;
    passes(
        cert.verify_square(&l1.morphism, &l2.morphism),
        &format!("seed {seed} square"),
    )?;
    let mut bundle = Bundle::new(Field::Rational);
    bundle.morphisms.insert("F1".into(), l1.morphism.clone());
    bundle.morphisms.insert("F2".into(), l2.morphism.clone());
    bundle.certificates.insert("cert".into(), cert);
    let back = reload(&bundle)?;
    ensure(
        back.morphisms["F1"] == l1.morphism && back.certificates["cert"] == bundle.certificates["cert"],
        || format!("seed {seed}: reload changed the lifts"),
    )?;
    passes(
        back.certificates["cert"].verify_square(&back.morphisms["F1"], &back.morphisms["F2"]),
        &format!("seed {seed} reloaded square"),
    )
}

fn bifibration_uniqueness() -> Outcome {
    let start = Instant::now();
    for direction in [LiftDirection::Opfibration, LiftDirection::Fibration] {
        for seed in 0..50u64 {
            lift_pair(seed, direction).map_err(|e| format!("{direction:?} seed {seed}: {e}"))?;
        }
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(600), || format!("took {took:?}"))?;
    Ok(format!("2 × 50 lift pairs in {took:.2?}"))
}

// ---------------------------------------------------------------- 8

fn functoriality() -> Outcome {
    for seed in 0..25u64 {
        let mut p = Profile::new(base(seed), Flavor::Equivalence, 3);
        if seed % 3 == 0 {
            p.source_cones = vec![0];
        }
        let (a, first, second) = core(generate_composable_pair(seed, &p))?;
        let r1 = core(LiftRequest::new(
            LiftDirection::Opfibration,
            &a,
            &first.target,
            first.f.clone(),
            3,
        ))?;
        let l1 = core(lift(&r1, Some(seed)))?;
        let r2 = core(LiftRequest::new(
            LiftDirection::Opfibration,
            &l1.structure,
            &second.target,
            second.f.clone(),
            3,
        ))?;
        let l2 = core(lift(&r2, Some(seed + 100)))?;
        let gf = core(second.f.compose(&first.f))?;
        let r12 = core(LiftRequest::new(LiftDirection::Opfibration, &a, &second.target, gf, 3))?;
        let l12 = core(lift(&r12, Some(seed + 200)))?;
        let two_step = core(compose_arrows(
            &l1.morphism,
            &l2.morphism,
            &AInfMorphism::identity(&l1.structure),
        ))?;
        let id = AInfMorphism::identity(&a);
        let cert = core(connect_lifts(
            &two_step,
            &l12.morphism,
            &GivenIsotopy::Source(id.clone()),
            None,
        ))?;
        ensure(cert.s == id, || {
            format!("seed {seed}: source isotopy is not the identity")
        })?;
        passes(cert.verify_square(&two_step, &l12.morphism), &format!("seed {seed}"))?;
    }
    Ok("25 composable pairs".into())
}

// ---------------------------------------------------------------- 9

fn ainf(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("ainf").chain(args.iter().copied()), &mut out, &mut err);
    (
        code,
        String::from_utf8_lossy(&out).into_owned() + &String::from_utf8_lossy(&err),
    )
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn cli() -> Outcome {
    let dir = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let file = dir.path().join("x.json");
    let f = path_str(&file);
    let profiles = [
        "interval",
        "base=dual",
        "base=upper,flavor=b",
        "base=exterior,flavor=c,n=3",
        "base=dual,flavor=c,n=3,source-cones=0",
    ];
    for i in 0..50u64 {
        let profile = profiles[(i % 5) as usize];
        let (code, msg) = ainf(&["gen", "--seed", &i.to_string(), "--profile", profile, "--out", f]);
        ensure(code == 0, || format!("gen {profile}: {msg}"))?;
        let mut text = std::fs::read_to_string(&file).map_err(|e| e.to_string())?;
        if i % 5 == 3 {
            // round trip a transfer result as well
            let out = dir.path().join("t.json");
            let (code, msg) = ainf(&[
                "transfer",
                "--in",
                f,
                "--structure",
                "mu",
                "--fwd",
                "f",
                "--bwd",
                "g",
                "--htpy",
                "h",
                "--htpy-b",
                "k",
                "--out",
                path_str(&out),
            ]);
            ensure(code == 0, || format!("transfer: {msg}"))?;
            text = std::fs::read_to_string(&out).map_err(|e| e.to_string())?;
        }
        let b = parse(&text, Field::Rational).map_err(|e| e.to_string())?;
        ensure(emit(&b).map_err(|e| e.to_string())? == text, || {
            format!("bundle {i} does not round trip")
        })?;
    }

    let mut codes = BTreeMap::new();
    ainf(&["gen", "--seed", "1", "--profile", "base=dual", "--out", f]);
    codes.insert(0, ainf(&["verify", "--in", f]).0 == 0);
    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    for e in doc["maps"]["mu.2"]["entries"].as_array_mut().unwrap() {
        if e[0] == serde_json::json!([0, 1]) {
            e[2] = serde_json::Value::String("2".into());
        }
    }
    std::fs::write(&file, doc.to_string()).unwrap();
    let (code, msg) = ainf(&["verify", "--in", f]);
    codes.insert(1, code == 1 && msg.contains("arity=3"));
    codes.insert(
        2,
        ainf(&["verify", "--in", f, "--no-such-flag"]).0 == 2
            && ainf(&["verify", "--in", "/nonexistent/x.json"]).0 == 2,
    );
    ensure(codes.values().all(|&ok| ok), || format!("exit codes {codes:?}"))?;

    let exe = env!("CARGO_BIN_EXE_ainf");
    let mut outputs = Vec::new();
    for name in ["a.json", "b.json"] {
        let p = dir.path().join(name);
        let status = std::process::Command::new(exe)
            .args([
                "gen",
                "--seed",
                "42",
                "--profile",
                "base=upper,flavor=c,n=3",
                "--out",
                path_str(&p),
            ])
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), || "gen failed".into())?;
        outputs.push(std::fs::read(&p).map_err(|e| e.to_string())?);
    }
    ensure(outputs[0] == outputs[1], || "gen --seed 42 is not reproducible".into())?;
    Ok("50 round trips; exit codes 0, 1, 2; gen reproducible".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("engine soundness", engine_soundness),
        ("dictionary equivalence", dictionary_equivalence),
        ("extension", extension_checks),
        ("transfer", transfer_checks),
        ("tree combinatorics", tree_combinatorics),
        ("isotopy group", isotopy_group),
        ("lift uniqueness", bifibration_uniqueness),
        ("functoriality", functoriality),
        ("cli", cli),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        match result {
            Ok(detail) => println!("criterion {}: PASS  {name} ({took:.2?}): {detail}", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({took:.2?}): {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
