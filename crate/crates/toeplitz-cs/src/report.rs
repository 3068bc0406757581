//! Report types returned by the decision procedures.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::symbol::{C64, Mat2};

pub const DEFAULT_TOL: f64 = 1e-10;

fn ser_complex<S: Serializer>(c: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(2))?;
    seq.serialize_element(&c.re)?;
    seq.serialize_element(&c.im)?;
    seq.end()
}

fn ser_complex_opt<S: Serializer>(
    c: &Option<C64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match c {
        Some(v) => ser_complex(v, s),
        None => s.serialize_none(),
    }
}

fn ser_mat2_opt<S: Serializer>(
    m: &Option<Mat2>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match m {
        Some(m) => {
            let rows: Vec<Vec<[f64; 2]>> = (0..2)
                .map(|r| (0..2).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
                .collect();
            rows.serialize(s)
        }
        None => s.serialize_none(),
    }
}

/// Outcome of a single complex-symmetry check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub verdict: bool,
    /// Scaled residual: max coefficient violation or normalized Frobenius norm.
    pub residual: f64,
    pub tol: f64,
    #[serde(serialize_with = "ser_complex_opt", skip_serializing_if = "Option::is_none")]
    pub lambda: Option<C64>,
    #[serde(serialize_with = "ser_complex_opt", skip_serializing_if = "Option::is_none")]
    pub mu: Option<C64>,
    /// Coefficient index n of the worst violated relation, when one exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violated_index: Option<i64>,
    /// Which of the four paired block relations (1..=4) is violated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violated_relation: Option<usize>,
    /// Set when the input imposes no constraint at all (constants, zero symbol).
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub unconstrained: bool,
}

impl CheckReport {
    pub fn pass(residual: f64, tol: f64) -> Self {
        CheckReport {
            verdict: residual <= tol,
            residual,
            tol,
            lambda: None,
            mu: None,
            violated_index: None,
            violated_relation: None,
            unconstrained: false,
        }
    }

    pub fn with_lambda(mut self, lambda: C64) -> Self {
        self.lambda = Some(lambda);
        self
    }

    pub fn with_mu(mut self, mu: C64) -> Self {
        self.mu = Some(mu);
        self
    }
}

/// Three-valued outcome for the normality procedures whose hypotheses are
/// structural: failing a hypothesis is reported distinctly from failing the
/// criterion itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b { Verdict::Pass } else { Verdict::Fail }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NamedResidual {
    pub name: String,
    pub value: f64,
}

/// Outcome of a normality check, with per-condition residuals and the
/// witnesses recovered along the way.
#[derive(Debug, Clone, Serialize)]
pub struct NormalityReport {
    pub verdict: Verdict,
    pub residuals: Vec<NamedResidual>,
    pub tol: f64,
    /// Brown-Halmos phase u with phi-hat(-n) = u * conj(phi-hat(n)).
    #[serde(serialize_with = "ser_complex_opt", skip_serializing_if = "Option::is_none")]
    pub phase_u: Option<C64>,
    /// Constant unitary factor recovered from Phi_+ = Phi_- U.
    #[serde(serialize_with = "ser_mat2_opt", skip_serializing_if = "Option::is_none")]
    pub unitary_u: Option<Mat2>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub commutator_norm: Option<f64>,
    /// Reason text for not-applicable verdicts.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl NormalityReport {
    pub fn new(tol: f64) -> Self {
        NormalityReport {
            verdict: Verdict::Pass,
            residuals: Vec::new(),
            tol,
            phase_u: None,
            unitary_u: None,
            commutator_norm: None,
            detail: None,
        }
    }

    pub fn not_applicable(tol: f64, reason: impl Into<String>) -> Self {
        let mut r = Self::new(tol);
        r.verdict = Verdict::NotApplicable;
        r.detail = Some(reason.into());
        r
    }

    pub fn push_residual(&mut self, name: impl Into<String>, value: f64) {
        self.residuals.push(NamedResidual { name: name.into(), value });
    }

    /// Set the verdict from the recorded residuals.
    pub fn finish(mut self) -> Self {
        if self.verdict != Verdict::NotApplicable {
            let ok = self.residuals.iter().all(|r| r.value <= self.tol);
            self.verdict = Verdict::from_bool(ok);
        }
        self
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.value).fold(0.0, f64::max)
    }
}
