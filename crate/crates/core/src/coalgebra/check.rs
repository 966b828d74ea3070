use std::fmt;
use std::str::FromStr;

use super::{corestrict, CogeneratingFamily, Expr, FamilyKind};
use crate::error::{Error, Result};
use crate::multimap::MultiMap;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Equation {
    SquareZero,
    Morphism,
    Homotopy,
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Equation::SquareZero => "square_zero",
            Equation::Morphism => "morphism",
            Equation::Homotopy => "homotopy",
        })
    }
}

impl FromStr for Equation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square_zero" => Ok(Equation::SquareZero),
            "morphism" => Ok(Equation::Morphism),
            "homotopy" => Ok(Equation::Homotopy),
            _ => Err(Error::Parse(format!("unknown equation {s:?}"))),
        }
    }
}

/// One nonzero coefficient of a residual: the residual of `equation` at
/// `arity` sends the basis tuple `inputs` to `value · output`.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub equation: Equation,
    pub arity: usize,
    /// Degrees of the inputs in the unsuspended space.
    pub degrees: Vec<i64>,
    pub inputs: Vec<u32>,
    pub output: u32,
    pub value: Scalar,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} equation fails in arity {}: inputs {:?} (degrees {:?}) give {} on output {}",
            self.equation, self.arity, self.inputs, self.degrees, self.value, self.output
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckReport {
    pub passed: bool,
    /// Sorted by equation, arity, input tuple and output.
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn pass() -> Self {
        CheckReport {
            passed: true,
            violations: Vec::new(),
        }
    }

    pub(crate) fn record(&mut self, equation: Equation, arity: usize, residual: &MultiMap) {
        let source = residual.source();
        for (x, col) in residual.entries() {
            for (o, v) in col {
                self.violations.push(Violation {
                    equation,
                    arity,
                    degrees: x.iter().map(|&i| source.base_degree(i)).collect(),
                    inputs: x.to_vec(),
                    output: o[0],
                    value: v.clone(),
                });
            }
        }
        self.passed = self.violations.is_empty();
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.violations.extend(other.violations);
        self.violations.sort_by(|a, b| {
            (a.equation, a.arity, &a.inputs, a.output).cmp(&(b.equation, b.arity, &b.inputs, b.output))
        });
        self.passed = self.violations.is_empty();
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }

    /// `Ok(())` on success, otherwise a verification error carrying the report.
    pub fn into_result(self, context: &str) -> Result<()> {
        if self.passed {
            Ok(())
        } else {
            Err(Error::verification(context, self))
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.first() {
            None => write!(f, "all equations hold"),
            Some(v) => write!(f, "{} violation(s); first: {v}", self.violations.len()),
        }
    }
}

fn check_n(n: usize, families: &[&CogeneratingFamily]) -> Result<()> {
    let max = families.iter().map(|f| f.truncation()).min().unwrap_or(0);
    if n == 0 || n > max {
        return Err(Error::ArityOutOfRange { arity: n, max });
    }
    Ok(())
}

fn require(f: &CogeneratingFamily, kind: FamilyKind) -> Result<()> {
    f.require(kind)
}

/// Checks `δ ∘ δ = 0` through arity `n`.
pub fn check_square_zero(delta: &CogeneratingFamily, n: usize) -> Result<CheckReport> {
    require(delta, FamilyKind::Coderivation)?;
    check_n(n, &[delta])?;
    let mut report = CheckReport::pass();
    for k in 1..=n {
        let r = corestrict(&Expr::new().plus(&[delta, delta]), k)?;
        report.record(Equation::SquareZero, k, &r);
    }
    Ok(report)
}

/// Checks `δ″ ∘ φ = φ ∘ δ′` through arity `n`.
pub fn check_morphism(
    phi: &CogeneratingFamily,
    d_source: &CogeneratingFamily,
    d_target: &CogeneratingFamily,
    n: usize,
) -> Result<CheckReport> {
    require(phi, FamilyKind::Morphism)?;
    require(d_source, FamilyKind::Coderivation)?;
    require(d_target, FamilyKind::Coderivation)?;
    check_n(n, &[phi, d_source, d_target])?;
    let mut report = CheckReport::pass();
    for k in 1..=n {
        let r = corestrict(&Expr::new().plus(&[d_target, phi]).minus(&[phi, d_source]), k)?;
        report.record(Equation::Morphism, k, &r);
    }
    Ok(report)
}

/// Checks `ψ − φ = δ″η + ηδ′` through arity `n` for `η` rel `(φ, ψ)`.
pub fn check_homotopy(
    eta: &CogeneratingFamily,
    d_source: &CogeneratingFamily,
    d_target: &CogeneratingFamily,
    n: usize,
) -> Result<CheckReport> {
    require(eta, FamilyKind::Homotopy)?;
    require(d_source, FamilyKind::Coderivation)?;
    require(d_target, FamilyKind::Coderivation)?;
    check_n(n, &[eta, d_source, d_target])?;
    let b = eta.bordering_or_err()?;
    let mut report = CheckReport::pass();
    for k in 1..=n {
        let r = corestrict(
            &Expr::new()
                .plus(&[&b.psi])
                .minus(&[&b.phi])
                .minus(&[d_target, eta])
                .minus(&[eta, d_source]),
            k,
        )?;
        report.record(Equation::Homotopy, k, &r);
    }
    Ok(report)
}
