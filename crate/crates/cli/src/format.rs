//! The JSON instance format.
//!
//! A file is one object with sorted keys. Every section is a map from names
//! to entries, and entries refer to each other by name: a complex names its
//! space and differential, an algebra names its complex and one map per
//! arity, and so on. Scalars are strings (`"3"`, `"-1/2"`), basis indices
//! are 0-based global indices (ordered by degree, then position), and
//! degree keys of a space are signed decimal strings.

use std::collections::BTreeMap;
use std::fmt;

use ainf_core::ainfty::{AInfAlgebra, AInfHomotopy, AInfMorphism, ChainComplex};
use ainf_core::bifib::SquareCertificate;
use ainf_core::{Field, GradedSpace, MultiMap};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const FORMAT_TAG: &str = "ainf-instance/1";

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    #[serde(default)]
    pub algebras: BTreeMap<String, AlgebraDoc>,
    #[serde(default)]
    pub certificates: BTreeMap<String, CertificateDoc>,
    #[serde(default)]
    pub complexes: BTreeMap<String, ComplexDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(default)]
    pub homotopies: BTreeMap<String, HomotopyDoc>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapDoc>,
    #[serde(default)]
    pub morphisms: BTreeMap<String, MorphismDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub spaces: BTreeMap<String, BTreeMap<String, usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tool_version: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
}

/// A map `source^{⊗arity} → target`; each entry is `[inputs, output, value]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub arity: usize,
    pub degree: i64,
    pub entries: Vec<(Vec<u32>, u32, String)>,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    /// Absent for the zero differential.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub differential: Option<String>,
    pub space: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub complex: String,
    /// Arity `k ≥ 2` to the name of `μ_k`.
    #[serde(default)]
    pub products: BTreeMap<usize, String>,
    pub truncation: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub components: BTreeMap<usize, String>,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomotopyDoc {
    #[serde(default)]
    pub components: BTreeMap<usize, String>,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub eta: String,
    pub s: String,
    pub t: String,
}

/// Resolved contents of an instance file.
#[derive(Clone, Debug, PartialEq)]
pub struct Bundle {
    pub field: Field,
    pub truncation: Option<usize>,
    pub seed: Option<u64>,
    pub spaces: BTreeMap<String, GradedSpace>,
    pub maps: BTreeMap<String, MultiMap>,
    pub complexes: BTreeMap<String, ChainComplex>,
    pub algebras: BTreeMap<String, AInfAlgebra>,
    pub morphisms: BTreeMap<String, AInfMorphism>,
    pub homotopies: BTreeMap<String, AInfHomotopy>,
    pub certificates: BTreeMap<String, SquareCertificate>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Space,
    Map,
    Complex,
    Algebra,
    Morphism,
    Homotopy,
    Certificate,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Space => "space",
            Kind::Map => "map",
            Kind::Complex => "complex",
            Kind::Algebra => "algebra",
            Kind::Morphism => "morphism",
            Kind::Homotopy => "homotopy",
            Kind::Certificate => "certificate",
        })
    }
}

fn lookup<'a, T>(section: &'a BTreeMap<String, T>, kind: Kind, name: &str, at: &str) -> Result<&'a T, CliError> {
    section.get(name).ok_or_else(|| CliError::Undefined {
        kind,
        name: name.to_string(),
        at: at.to_string(),
    })
}

fn invalid(at: &str, err: impl fmt::Display) -> CliError {
    CliError::Invalid {
        at: at.to_string(),
        message: err.to_string(),
    }
}

impl Bundle {
    pub fn new(field: Field) -> Self {
        Bundle {
            field,
            truncation: None,
            seed: None,
            spaces: BTreeMap::new(),
            maps: BTreeMap::new(),
            complexes: BTreeMap::new(),
            algebras: BTreeMap::new(),
            morphisms: BTreeMap::new(),
            homotopies: BTreeMap::new(),
            certificates: BTreeMap::new(),
        }
    }

    /// Resolves every reference and checks all degree profiles. The field
    /// falls back to `default_field` when the file has none.
    pub fn from_document(doc: &Document, default_field: Field) -> Result<Self, CliError> {
        if let Some(tag) = &doc.format {
            if tag != FORMAT_TAG {
                return Err(invalid("format", format!("unsupported format {tag:?}")));
            }
        }
        let field = match &doc.field {
            Some(s) => s.parse::<Field>().map_err(|e| invalid("field", e))?,
            None => default_field,
        };
        let mut b = Bundle::new(field);
        b.truncation = doc.truncation;
        b.seed = doc.seed;
        for (name, dims) in &doc.spaces {
            let at = format!("spaces.{name}");
            let mut parsed = Vec::new();
            for (deg, dim) in dims {
                let d: i64 = deg
                    .parse()
                    .map_err(|_| invalid(&at, format!("degree key {deg:?} is not an integer")))?;
                parsed.push((d, *dim));
            }
            let space = GradedSpace::new(name.clone(), parsed).map_err(|e| invalid(&at, e))?;
            b.spaces.insert(name.clone(), space);
        }
        for (name, m) in &doc.maps {
            let at = format!("maps.{name}");
            let source = lookup(&b.spaces, Kind::Space, &m.source, &at)?;
            let target = lookup(&b.spaces, Kind::Space, &m.target, &at)?;
            let mut entries = Vec::with_capacity(m.entries.len());
            for (i, (inputs, output, value)) in m.entries.iter().enumerate() {
                let v = field
                    .parse(value)
                    .map_err(|e| invalid(&format!("{at}.entries[{i}]"), e))?;
                entries.push((inputs.clone(), vec![*output], v));
            }
            let map = MultiMap::from_entries(field, source, target, m.arity, 1, m.degree, entries)
                .map_err(|e| invalid(&at, e))?;
            b.maps.insert(name.clone(), map);
        }
        for (name, c) in &doc.complexes {
            let at = format!("complexes.{name}");
            let space = lookup(&b.spaces, Kind::Space, &c.space, &at)?;
            let cx = match &c.differential {
                Some(d) => {
                    let d = lookup(&b.maps, Kind::Map, d, &at)?;
                    ChainComplex::new(field, space, d.clone()).map_err(|e| invalid(&at, e))?
                }
                None => ChainComplex::zero(field, space),
            };
            b.complexes.insert(name.clone(), cx);
        }
        for (name, a) in &doc.algebras {
            let at = format!("algebras.{name}");
            let cx = lookup(&b.complexes, Kind::Complex, &a.complex, &at)?;
            let mut mu = BTreeMap::new();
            for (k, m) in &a.products {
                mu.insert(*k, lookup(&b.maps, Kind::Map, m, &at)?.clone());
            }
            let alg = AInfAlgebra::new(cx, mu, a.truncation).map_err(|e| invalid(&at, e))?;
            b.algebras.insert(name.clone(), alg);
        }
        for (name, m) in &doc.morphisms {
            let at = format!("morphisms.{name}");
            let source = lookup(&b.algebras, Kind::Algebra, &m.source, &at)?;
            let target = lookup(&b.algebras, Kind::Algebra, &m.target, &at)?;
            let comps = resolve_components(&b.maps, &m.components, &at)?;
            let mor = AInfMorphism::new(source, target, comps).map_err(|e| invalid(&at, e))?;
            b.morphisms.insert(name.clone(), mor);
        }
        for (name, h) in &doc.homotopies {
            let at = format!("homotopies.{name}");
            let from = lookup(&b.morphisms, Kind::Morphism, &h.from, &at)?;
            let to = lookup(&b.morphisms, Kind::Morphism, &h.to, &at)?;
            let comps = resolve_components(&b.maps, &h.components, &at)?;
            let hom = AInfHomotopy::new(from, to, comps).map_err(|e| invalid(&at, e))?;
            b.homotopies.insert(name.clone(), hom);
        }
        for (name, c) in &doc.certificates {
            let at = format!("certificates.{name}");
            let cert = SquareCertificate {
                s: lookup(&b.morphisms, Kind::Morphism, &c.s, &at)?.clone(),
                t: lookup(&b.morphisms, Kind::Morphism, &c.t, &at)?.clone(),
                eta: lookup(&b.homotopies, Kind::Homotopy, &c.eta, &at)?.clone(),
            };
            b.certificates.insert(name.clone(), cert);
        }
        Ok(b)
    }

    /// Writes the bundle out, naming every nested object that has no name
    /// yet after its owner (`F.1`, `mu.2`, `F.source`, …).
    pub fn to_document(&self) -> Result<Document, CliError> {
        let mut e = Emitter::new(self);
        for (name, s) in &self.spaces {
            e.space_named(name, s)?;
        }
        for (name, m) in &self.maps {
            e.map_named(name, m)?;
        }
        for (name, c) in &self.complexes {
            e.complex_named(name, c)?;
        }
        for (name, a) in &self.algebras {
            e.algebra_named(name, a)?;
        }
        for (name, m) in &self.morphisms {
            e.morphism_named(name, m)?;
        }
        for (name, h) in &self.homotopies {
            e.homotopy_named(name, h)?;
        }
        for (name, c) in &self.certificates {
            let s = e.morphism(&format!("{name}.s"), &c.s)?;
            let t = e.morphism(&format!("{name}.t"), &c.t)?;
            let eta = e.homotopy(&format!("{name}.eta"), &c.eta)?;
            e.doc.certificates.insert(name.clone(), CertificateDoc { eta, s, t });
        }
        Ok(e.doc)
    }

    /// Picks a name not used in any section, starting from `base`.
    pub fn fresh_name(&self, base: &str) -> String {
        let taken = |n: &str| {
            self.maps.contains_key(n)
                || self.complexes.contains_key(n)
                || self.algebras.contains_key(n)
                || self.morphisms.contains_key(n)
                || self.homotopies.contains_key(n)
                || self.certificates.contains_key(n)
        };
        if !taken(base) {
            return base.to_string();
        }
        (1..)
            .map(|i| format!("{base}_{i}"))
            .find(|n| !taken(n))
            .expect("unbounded")
    }
}

fn resolve_components(
    maps: &BTreeMap<String, MultiMap>,
    comps: &BTreeMap<usize, String>,
    at: &str,
) -> Result<BTreeMap<usize, MultiMap>, CliError> {
    let mut out = BTreeMap::new();
    for (k, m) in comps {
        out.insert(*k, lookup(maps, Kind::Map, m, at)?.clone());
    }
    Ok(out)
}

struct Emitter<'a> {
    bundle: &'a Bundle,
    doc: Document,
    maps: Vec<(String, MultiMap)>,
    complexes: Vec<(String, ChainComplex)>,
    algebras: Vec<(String, AInfAlgebra)>,
    morphisms: Vec<(String, AInfMorphism)>,
    homotopies: Vec<(String, AInfHomotopy)>,
}

impl<'a> Emitter<'a> {
    fn new(bundle: &'a Bundle) -> Self {
        Emitter {
            bundle,
            doc: Document {
                field: Some(bundle.field.to_string()),
                format: Some(FORMAT_TAG.to_string()),
                seed: bundle.seed,
                tool_version: Some(env!("CARGO_PKG_VERSION").to_string()),
                truncation: bundle.truncation,
                ..Document::default()
            },
            maps: Vec::new(),
            complexes: Vec::new(),
            algebras: Vec::new(),
            morphisms: Vec::new(),
            homotopies: Vec::new(),
        }
    }

    fn unused(&self, base: &str) -> String {
        let d = &self.doc;
        let taken = |n: &str| {
            d.maps.contains_key(n)
                || d.complexes.contains_key(n)
                || d.algebras.contains_key(n)
                || d.morphisms.contains_key(n)
                || d.homotopies.contains_key(n)
                || d.certificates.contains_key(n)
                || self.bundle.fresh_name(n) != n
        };
        if !taken(base) {
            return base.to_string();
        }
        (1..)
            .map(|i| format!("{base}_{i}"))
            .find(|n| !taken(n))
            .expect("unbounded")
    }

    fn space_named(&mut self, name: &str, s: &GradedSpace) -> Result<String, CliError> {
        if s.suspension() != 0 {
            return Err(invalid(name, "suspended spaces are not written to files"));
        }
        if s.name() != name {
            return Err(invalid(
                name,
                format!("space is registered as {name:?} but named {:?}", s.name()),
            ));
        }
        self.space(s)
    }

    fn space(&mut self, s: &GradedSpace) -> Result<String, CliError> {
        let name = s.name().to_string();
        let dims: BTreeMap<String, usize> = s.dims().iter().map(|(d, n)| (d.to_string(), *n)).collect();
        match self.doc.spaces.get(&name) {
            Some(existing) if *existing != dims => Err(invalid(&name, "two different spaces share this name")),
            Some(_) => Ok(name),
            None => {
                self.doc.spaces.insert(name.clone(), dims);
                Ok(name)
            }
        }
    }

    fn map_named(&mut self, name: &str, m: &MultiMap) -> Result<String, CliError> {
        if m.coarity() != 1 {
            return Err(invalid(name, "only maps with one output are written to files"));
        }
        let source = self.space(m.source())?;
        let target = self.space(m.target())?;
        let entries = m.triples().map(|(x, y, v)| (x.to_vec(), y[0], v.to_string())).collect();
        self.doc.maps.insert(
            name.to_string(),
            MapDoc {
                arity: m.arity(),
                degree: m.degree(),
                entries,
                source,
                target,
            },
        );
        self.maps.push((name.to_string(), m.clone()));
        Ok(name.to_string())
    }

    fn map(&mut self, base: &str, m: &MultiMap) -> Result<String, CliError> {
        if let Some((n, _)) = self.maps.iter().find(|(_, x)| x == m) {
            return Ok(n.clone());
        }
        let name = self.unused(base);
        self.map_named(&name, m)
    }

    fn complex_named(&mut self, name: &str, c: &ChainComplex) -> Result<String, CliError> {
        let space = self.space(c.space())?;
        let differential = if c.differential().is_zero() {
            None
        } else {
            Some(self.map(&format!("{name}.d"), c.differential())?)
        };
        self.doc
            .complexes
            .insert(name.to_string(), ComplexDoc { differential, space });
        self.complexes.push((name.to_string(), c.clone()));
        Ok(name.to_string())
    }

    fn complex(&mut self, c: &ChainComplex) -> Result<String, CliError> {
        if let Some((n, _)) = self.complexes.iter().find(|(_, x)| x == c) {
            return Ok(n.clone());
        }
        let name = self.unused(c.space().name());
        self.complex_named(&name, c)
    }

    fn algebra_named(&mut self, name: &str, a: &AInfAlgebra) -> Result<String, CliError> {
        let complex = self.complex(a.complex())?;
        let mut products = BTreeMap::new();
        for (k, m) in a.products() {
            if !m.is_zero() {
                products.insert(*k, self.map(&format!("{name}.{k}"), m)?);
            }
        }
        self.doc.algebras.insert(
            name.to_string(),
            AlgebraDoc {
                complex,
                products,
                truncation: a.truncation(),
            },
        );
        self.algebras.push((name.to_string(), a.clone()));
        Ok(name.to_string())
    }

    fn algebra(&mut self, base: &str, a: &AInfAlgebra) -> Result<String, CliError> {
        if let Some((n, _)) = self.algebras.iter().find(|(_, x)| x == a) {
            return Ok(n.clone());
        }
        let name = self.unused(base);
        self.algebra_named(&name, a)
    }

    fn components(
        &mut self,
        owner: &str,
        comps: &BTreeMap<usize, MultiMap>,
    ) -> Result<BTreeMap<usize, String>, CliError> {
        let mut out = BTreeMap::new();
        for (k, m) in comps {
            if !m.is_zero() || *k == 1 {
                out.insert(*k, self.map(&format!("{owner}.{k}"), m)?);
            }
        }
        Ok(out)
    }

    fn morphism_named(&mut self, name: &str, m: &AInfMorphism) -> Result<String, CliError> {
        let source = self.algebra(&format!("{name}.source"), m.source())?;
        let target = self.algebra(&format!("{name}.target"), m.target())?;
        let components = self.components(name, m.components())?;
        self.doc.morphisms.insert(
            name.to_string(),
            MorphismDoc {
                components,
                source,
                target,
            },
        );
        self.morphisms.push((name.to_string(), m.clone()));
        Ok(name.to_string())
    }

    fn morphism(&mut self, base: &str, m: &AInfMorphism) -> Result<String, CliError> {
        if let Some((n, _)) = self.morphisms.iter().find(|(_, x)| x == m) {
            return Ok(n.clone());
        }
        let name = self.unused(base);
        self.morphism_named(&name, m)
    }

    fn homotopy_named(&mut self, name: &str, h: &AInfHomotopy) -> Result<String, CliError> {
        let from = self.morphism(&format!("{name}.from"), h.from())?;
        let to = self.morphism(&format!("{name}.to"), h.to())?;
        let components = self.components(name, h.components())?;
        self.doc
            .homotopies
            .insert(name.to_string(), HomotopyDoc { components, from, to });
        self.homotopies.push((name.to_string(), h.clone()));
        Ok(name.to_string())
    }

    fn homotopy(&mut self, base: &str, h: &AInfHomotopy) -> Result<String, CliError> {
        if let Some((n, _)) = self.homotopies.iter().find(|(_, x)| x == h) {
            return Ok(n.clone());
        }
        let name = self.unused(base);
        self.homotopy_named(&name, h)
    }
}

/// Serializes with two-space indentation and a trailing newline. Arrays
/// without objects inside (map entries) stay on one line.
pub fn emit(bundle: &Bundle) -> Result<String, CliError> {
    let doc = serde_json::to_value(bundle.to_document()?).expect("documents always serialize");
    let mut out = String::new();
    write_value(&doc, 0, &mut out);
    out.push('\n');
    Ok(out)
}

fn write_value(v: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |n: usize| "  ".repeat(n);
    let nested = |v: &Value| match v {
        Value::Object(_) => true,
        Value::Array(xs) => xs.iter().any(|x| matches!(x, Value::Object(_))),
        _ => false,
    };
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(k).expect("string keys"));
                out.push_str(": ");
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(xs) if nested(v) => {
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < xs.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Array(xs) if xs.len() > 1 && xs.iter().all(|x| matches!(x, Value::Array(_))) => {
            // one map entry per line
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(x).expect("plain values"));
                out.push_str(if i + 1 < xs.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        _ => out.push_str(&serde_json::to_string(v).expect("plain values")),
    }
}

/// Parses file contents; JSON errors carry line and column.
pub fn parse(text: &str, default_field: Field) -> Result<Bundle, CliError> {
    let doc: Document = serde_json::from_str(text).map_err(|e| CliError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Bundle::from_document(&doc, default_field)
}
