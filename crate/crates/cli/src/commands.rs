use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use ainf_core::ainfty::ChainComplex;
use ainf_core::bifib::{compose_arrows, connect_lifts, lift, GivenIsotopy, LiftDirection, LiftRequest};
use ainf_core::coalgebra::{CheckReport, Violation};
use ainf_core::extension::{extend_homotopic_map, random_higher_homotopy};
use ainf_core::generate::{generate_instance, interval_collapse, BaseAlgebra, Flavor, Profile};
use ainf_core::transfer::{find_witnesses, full_transfer, transfer_structure, HomotopyEquivalenceData};
use ainf_core::{Field, GradedSpace, MultiMap};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{from_core, CliError};
use crate::format::{emit, parse, Bundle, Kind};

/// Environment variable holding the field used when a file names none.
pub const FIELD_VAR: &str = "AINF_FIELD";

#[derive(Debug, Parser)]
#[command(name = "ainf", version, about = "Exact A∞-algebra computations on instance files")]
pub struct Cli {
    /// Field for files that do not name one (overrides AINF_FIELD).
    #[arg(long, global = true)]
    pub field: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Dir {
    Op,
    Fib,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Source,
    Target,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the defining identities of one object, or of everything.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        object: Option<String>,
        #[arg(long)]
        arity_max: Option<usize>,
    },
    /// Transfer a structure along a chain homotopy equivalence.
    Transfer {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        structure: String,
        #[arg(long)]
        fwd: String,
        #[arg(long)]
        bwd: String,
        #[arg(long)]
        htpy: String,
        #[arg(long)]
        htpy_b: Option<String>,
        /// Complex on the target space, when the file has several.
        #[arg(long)]
        target_complex: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Extend a chain map homotopic to the linear part of a morphism.
    Extend {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        morphism: String,
        #[arg(long)]
        map: String,
        #[arg(long)]
        htpy: String,
        /// Draw random higher homotopy components from this seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Lift a structure along an equivalence.
    Lift {
        #[arg(long)]
        dir: Dir,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        structure: String,
        #[arg(long)]
        map: String,
        /// Complex on the side without a structure, when ambiguous.
        #[arg(long)]
        other_complex: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a square certificate between two lifts.
    Connect {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        given_isotopy: String,
        #[arg(long)]
        side: Option<Side>,
        /// A map w with right₁ − left₁ = ∂w + w∂.
        #[arg(long)]
        witness: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compose two arrows through a connecting isotopy.
    Compose {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
        #[arg(long)]
        isotopy: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a generated instance.
    Gen {
        #[arg(long)]
        seed: u64,
        /// `interval`, or comma-separated `key=value` pairs: base, flavor,
        /// n, density, source-cones, target-cones (cones as `0+1`).
        #[arg(long)]
        profile: String,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code: 0 success, 1 verification failure, 2 bad input.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return e.exit_code();
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if let CliError::Failed { report: Some(r), .. } = &e {
                if let Some(v) = r.first() {
                    let _ = writeln!(err, "{}", violation_line(v));
                }
            }
            e.exit_code()
        }
    }
}

pub fn violation_line(v: &Violation) -> String {
    let list = |xs: Vec<String>| format!("({})", xs.join(","));
    format!(
        "violation: equation={} arity={} degrees={} basis={} output={} value={}",
        v.equation,
        v.arity,
        list(v.degrees.iter().map(i64::to_string).collect()),
        list(v.inputs.iter().map(u32::to_string).collect()),
        v.output,
        v.value
    )
}

fn default_field(cli: &Cli) -> Result<Field, CliError> {
    let text = match &cli.field {
        Some(f) => f.clone(),
        None => std::env::var(FIELD_VAR).unwrap_or_else(|_| "Q".to_string()),
    };
    text.parse()
        .map_err(|e: ainf_core::Error| CliError::Usage(e.to_string()))
}

fn read(path: &Path, field: Field) -> Result<Bundle, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse(&text, field).map_err(|e| match e {
        CliError::Syntax { line, column, message } => CliError::Syntax {
            line,
            column,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

fn write_bundle(path: &Path, bundle: &Bundle) -> Result<(), CliError> {
    let text = emit(bundle)?;
    std::fs::write(path, text).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn get<'a, T>(section: &'a BTreeMap<String, T>, kind: Kind, name: &str) -> Result<&'a T, CliError> {
    section.get(name).ok_or_else(|| CliError::Undefined {
        kind,
        name: name.to_string(),
        at: "command line".to_string(),
    })
}

/// The complex named `explicit`, or the only complex on `space`.
fn complex_on(bundle: &Bundle, space: &GradedSpace, explicit: Option<&String>) -> Result<ChainComplex, CliError> {
    if let Some(name) = explicit {
        let c = get(&bundle.complexes, Kind::Complex, name)?;
        if c.space() != space {
            return Err(CliError::Usage(format!(
                "complex {name} does not live on space {}",
                space.name()
            )));
        }
        return Ok(c.clone());
    }
    let mut found: Vec<&ChainComplex> = bundle.complexes.values().filter(|c| c.space() == space).collect();
    found.dedup();
    match found.as_slice() {
        [c] => Ok((*c).clone()),
        [] => Err(CliError::Usage(format!(
            "no complex on space {} in the file",
            space.name()
        ))),
        _ => Err(CliError::Usage(format!(
            "several complexes on space {}; name one explicitly",
            space.name()
        ))),
    }
}

fn report_line(out: &mut dyn Write, kind: Kind, name: &str, report: &CheckReport) -> bool {
    match report.first() {
        None => {
            let _ = writeln!(out, "ok {kind} {name}");
            true
        }
        Some(v) => {
            let _ = writeln!(out, "FAIL {kind} {name}");
            let _ = writeln!(out, "{}", violation_line(v));
            false
        }
    }
}

fn verify_one(bundle: &Bundle, kind: Kind, name: &str, arity_max: Option<usize>) -> Result<CheckReport, CliError> {
    let ctx = format!("{kind} {name}");
    let upto = |n: usize| -> Result<usize, CliError> {
        match arity_max {
            Some(m) if m > n => Err(CliError::Usage(format!("{ctx} is truncated at arity {n}, below {m}"))),
            Some(m) => Ok(m),
            None => Ok(n),
        }
    };
    let r = match kind {
        Kind::Algebra => {
            let a = &bundle.algebras[name];
            a.verify_up_to(upto(a.truncation())?)
        }
        Kind::Morphism => {
            let m = &bundle.morphisms[name];
            m.verify_up_to(upto(m.truncation())?)
        }
        Kind::Homotopy => {
            let h = &bundle.homotopies[name];
            h.verify_up_to(upto(h.truncation())?)
        }
        Kind::Certificate => bundle.certificates[name].verify(),
        _ => Ok(CheckReport::pass()),
    };
    r.map_err(|e| from_core(&ctx, e))
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let field = default_field(cli)?;
    match &cli.command {
        Command::Verify {
            input,
            object,
            arity_max,
        } => {
            let b = read(input, field)?;
            let mut targets: Vec<(Kind, String)> = Vec::new();
            let sections: [(Kind, Vec<&String>); 4] = [
                (Kind::Algebra, b.algebras.keys().collect()),
                (Kind::Morphism, b.morphisms.keys().collect()),
                (Kind::Homotopy, b.homotopies.keys().collect()),
                (Kind::Certificate, b.certificates.keys().collect()),
            ];
            for (kind, names) in sections {
                for n in names {
                    if object.as_ref().is_none_or(|o| o == n) {
                        targets.push((kind, n.clone()));
                    }
                }
            }
            if let Some(o) = object {
                if targets.is_empty() {
                    return Err(CliError::Undefined {
                        kind: Kind::Algebra,
                        name: o.clone(),
                        at: "--object (no algebra, morphism, homotopy or certificate)".into(),
                    });
                }
            }
            let mut all = true;
            for (kind, name) in &targets {
                let report = verify_one(&b, *kind, name, *arity_max)?;
                all &= report_line(out, *kind, name, &report);
            }
            Ok(if all { 0 } else { 1 })
        }
        Command::Transfer {
            input,
            structure,
            fwd,
            bwd,
            htpy,
            htpy_b,
            target_complex,
            out: path,
        } => {
            let mut b = read(input, field)?;
            let alg = get(&b.algebras, Kind::Algebra, structure)?.clone();
            let f = get(&b.maps, Kind::Map, fwd)?.clone();
            let g = get(&b.maps, Kind::Map, bwd)?.clone();
            let h = get(&b.maps, Kind::Map, htpy)?.clone();
            let k = htpy_b
                .as_ref()
                .map(|k| get(&b.maps, Kind::Map, k).cloned())
                .transpose()?;
            let target = complex_on(&b, f.target(), target_complex.as_ref())?;
            let data = HomotopyEquivalenceData::new(alg.complex(), &target, f, g, h, k.clone())
                .map_err(|e| from_core("equivalence data", e))?;
            if k.is_some() {
                let r = full_transfer(&alg, &data).map_err(|e| from_core("transfer", e))?;
                let n = b.fresh_name("nu");
                b.algebras.insert(n, r.nu);
                let nf = b.fresh_name("F");
                b.morphisms.insert(nf, r.f);
                let ng = b.fresh_name("G");
                b.morphisms.insert(ng, r.g);
                let nh = b.fresh_name("H");
                b.homotopies.insert(nh, r.h);
            } else {
                let (nu, g) = transfer_structure(&alg, &data).map_err(|e| from_core("transfer", e))?;
                let n = b.fresh_name("nu");
                b.algebras.insert(n, nu);
                let ng = b.fresh_name("G");
                b.morphisms.insert(ng, g);
            }
            write_bundle(path, &b)?;
            let _ = writeln!(out, "ok transfer written to {}", path.display());
            Ok(0)
        }
        Command::Extend {
            input,
            morphism,
            map,
            htpy,
            seed,
            out: path,
        } => {
            let mut b = read(input, field)?;
            let phi = get(&b.morphisms, Kind::Morphism, morphism)?.clone();
            let g = get(&b.maps, Kind::Map, map)?.clone();
            let h = get(&b.maps, Kind::Map, htpy)?.clone();
            let higher = match seed {
                Some(s) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(*s);
                    random_higher_homotopy(
                        phi.field(),
                        phi.source().space(),
                        phi.target().space(),
                        phi.truncation(),
                        0.2,
                        &mut rng,
                    )
                }
                None => BTreeMap::new(),
            };
            let r = extend_homotopic_map(&phi, &g, &h, &higher).map_err(|e| from_core("extension", e))?;
            let np = b.fresh_name("Psi");
            b.morphisms.insert(np, r.psi);
            let ne = b.fresh_name("eta");
            b.homotopies.insert(ne, r.eta);
            write_bundle(path, &b)?;
            let _ = writeln!(out, "ok extension written to {}", path.display());
            Ok(0)
        }
        Command::Lift {
            dir,
            input,
            structure,
            map,
            other_complex,
            seed,
            out: path,
        } => {
            let mut b = read(input, field)?;
            let alg = get(&b.algebras, Kind::Algebra, structure)?.clone();
            let f = get(&b.maps, Kind::Map, map)?.clone();
            let (direction, other_space, base) = match dir {
                Dir::Op => (LiftDirection::Opfibration, f.target().clone(), "nu"),
                Dir::Fib => (LiftDirection::Fibration, f.source().clone(), "mu"),
            };
            let other = complex_on(&b, &other_space, other_complex.as_ref())?;
            let req = LiftRequest::new(direction, &alg, &other, f, alg.truncation())
                .map_err(|e| from_core("lift request", e))?;
            let l = lift(&req, *seed).map_err(|e| from_core("lift", e))?;
            let n = b.fresh_name(base);
            b.algebras.insert(n, l.structure);
            let nf = b.fresh_name("F");
            b.morphisms.insert(nf, l.morphism);
            write_bundle(path, &b)?;
            let _ = writeln!(out, "ok lift written to {}", path.display());
            Ok(0)
        }
        Command::Connect {
            input,
            left,
            right,
            given_isotopy,
            side,
            witness,
            out: path,
        } => {
            let mut b = read(input, field)?;
            let l = get(&b.morphisms, Kind::Morphism, left)?.clone();
            let r = get(&b.morphisms, Kind::Morphism, right)?.clone();
            let s = get(&b.morphisms, Kind::Morphism, given_isotopy)?.clone();
            let w = witness
                .as_ref()
                .map(|w| get(&b.maps, Kind::Map, w).cloned())
                .transpose()?;
            let fits_source = s.source() == l.source() && s.target() == r.source();
            let fits_target = s.source() == l.target() && s.target() == r.target();
            let side = match (side, fits_source, fits_target) {
                (Some(side), _, _) => *side,
                (None, true, false) => Side::Source,
                (None, false, true) => Side::Target,
                (None, true, true) => return Err(CliError::Usage("the isotopy fits both sides; pass --side".into())),
                (None, false, false) => {
                    return Err(CliError::Usage(format!(
                        "{given_isotopy} connects neither the sources nor the targets"
                    )))
                }
            };
            let given = match side {
                Side::Source => GivenIsotopy::Source(s),
                Side::Target => GivenIsotopy::Target(s),
            };
            let cert = connect_lifts(&l, &r, &given, w.as_ref()).map_err(|e| from_core("connect", e))?;
            let n = b.fresh_name("cert");
            b.certificates.insert(n, cert);
            write_bundle(path, &b)?;
            let _ = writeln!(out, "ok certificate written to {}", path.display());
            Ok(0)
        }
        Command::Compose {
            input,
            first,
            second,
            isotopy,
            out: path,
        } => {
            let mut b = read(input, field)?;
            let f = get(&b.morphisms, Kind::Morphism, first)?.clone();
            let y = get(&b.morphisms, Kind::Morphism, second)?.clone();
            let s = get(&b.morphisms, Kind::Morphism, isotopy)?.clone();
            let c = compose_arrows(&f, &y, &s).map_err(|e| from_core("compose", e))?;
            let n = b.fresh_name("composite");
            b.morphisms.insert(n, c);
            write_bundle(path, &b)?;
            let _ = writeln!(out, "ok composite written to {}", path.display());
            Ok(0)
        }
        Command::Gen {
            seed,
            profile,
            out: path,
        } => {
            let b = generate(*seed, profile, field)?;
            write_bundle(path, &b)?;
            let _ = writeln!(out, "ok instance written to {}", path.display());
            Ok(0)
        }
    }
}

fn parse_cones(text: &str) -> Result<Vec<i64>, CliError> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split('+')
        .map(|c| {
            c.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad cone degree {c:?}")))
        })
        .collect()
}

/// Builds the bundle for `gen`.
pub fn generate(seed: u64, profile: &str, field: Field) -> Result<Bundle, CliError> {
    let mut base = None;
    let mut flavor = Flavor::Associative;
    let mut n = 4;
    let mut density = None;
    let mut source_cones = None;
    let mut target_cones = None;
    for part in profile.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part.split_once('=').unwrap_or(("base", part));
        let bad = || CliError::Usage(format!("bad profile entry {part:?}"));
        match key {
            "base" => base = Some(value.to_string()),
            "flavor" => {
                flavor = match value {
                    "a" | "associative" => Flavor::Associative,
                    "b" | "pushforward" => Flavor::Pushforward,
                    "c" | "equivalence" => Flavor::Equivalence,
                    _ => return Err(bad()),
                }
            }
            "n" => n = value.parse().map_err(|_| bad())?,
            "density" => density = Some(value.parse::<f64>().map_err(|_| bad())?),
            "source-cones" => source_cones = Some(parse_cones(value)?),
            "target-cones" => target_cones = Some(parse_cones(value)?),
            _ => return Err(bad()),
        }
    }
    let base = base.unwrap_or_else(|| "exterior".to_string());
    let mut bundle = Bundle::new(field);
    bundle.seed = Some(seed);
    bundle.truncation = Some(n);
    if base == "interval" {
        let (a, target, f) = interval_collapse(field, n).map_err(|e| from_core("interval", e))?;
        let data = find_witnesses(&f, a.complex(), &target).map_err(|e| from_core("interval", e))?;
        for s in [a.space(), target.space()] {
            bundle.spaces.insert(s.name().to_string(), s.clone());
        }
        bundle.complexes.insert("A".into(), a.complex().clone());
        bundle.complexes.insert("B".into(), target);
        insert_data(&mut bundle, &data);
        bundle.algebras.insert("mu".into(), a);
        return Ok(bundle);
    }
    let base_alg = match base.as_str() {
        "dual" => BaseAlgebra::DualNumbers,
        "upper" => BaseAlgebra::UpperTriangular,
        "exterior" => BaseAlgebra::Exterior,
        other => return Err(CliError::Usage(format!("unknown base algebra {other:?}"))),
    };
    let mut p = Profile::new(base_alg, flavor, n);
    p.field = field;
    if let Some(d) = density {
        p.density = d;
    }
    if let Some(c) = source_cones {
        p.source_cones = c;
    }
    if let Some(c) = target_cones {
        p.target_cones = c;
    }
    let inst = generate_instance(seed, &p).map_err(|e| from_core("gen", e))?;
    bundle
        .spaces
        .insert(inst.algebra.space().name().to_string(), inst.algebra.space().clone());
    bundle.complexes.insert("A".into(), inst.algebra.complex().clone());
    bundle.algebras.insert("mu".into(), inst.algebra);
    if let (Some(data), Some(tb)) = (inst.equivalence, inst.target_algebra) {
        bundle.spaces.insert(tb.space().name().to_string(), tb.space().clone());
        bundle.complexes.insert("B".into(), tb.complex().clone());
        bundle.algebras.insert("mu_b".into(), tb);
        insert_data(&mut bundle, &data);
    }
    Ok(bundle)
}

fn insert_data(bundle: &mut Bundle, data: &HomotopyEquivalenceData) {
    let maps: [(&str, Option<&MultiMap>); 4] = [
        ("f", Some(&data.f)),
        ("g", Some(&data.g)),
        ("h", Some(&data.h)),
        ("k", data.k.as_ref()),
    ];
    for (name, m) in maps {
        if let Some(m) = m {
            bundle.maps.insert(name.to_string(), m.clone());
        }
    }
}
