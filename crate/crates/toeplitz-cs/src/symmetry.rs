//! Complex-symmetry decision procedures: coefficient-level predicates on the
//! symbol, the independent dense-matrix test on truncations, generators for
//! symbols that are complex symmetric by construction, lambda inference, and
//! the coefficient-identity verifier.

use crate::error::{Error, Result};
use crate::operator::{frobenius, AntilinearOp, TruncatedOperator};
use crate::report::{CheckReport, DEFAULT_TOL};
use crate::symbol::{require_unimodular, MatrixSymbol, Mat2, ScalarSymbol, C64};

/// Dense test T = W T^t conj(W) for the antilinear C x = W conj(x); this is
/// the matrix form of T = C T* C. Residual is Frobenius, scaled by
/// max(1, ||T||_F).
pub fn cs_numeric(t: &TruncatedOperator, c: &AntilinearOp, tol: f64) -> Result<CheckReport> {
    if t.dim() != c.dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator dimension {} vs conjugation dimension {}",
            t.dim(),
            c.dim()
        )));
    }
    let wc = c.w.map(|v| v.conj());
    let rhs = &c.w * t.data.transpose() * wc;
    let residual = frobenius(&(&t.data - rhs)) / frobenius(&t.data).max(1.0);
    Ok(CheckReport::pass(residual, tol))
}

/// Coefficient predicate for the scalar conjugation family:
/// phi-hat(-n) = lambda^n phi-hat(n) for all n >= 1.
pub fn cs_coeff_scalar(phi: &ScalarSymbol, lambda: C64, tol: f64) -> Result<CheckReport> {
    require_unimodular(lambda, "lambda")?;
    let scale = phi.max_abs().max(1.0);
    let mut worst = 0.0_f64;
    let mut worst_n = None;
    for n in 1..=phi.band_degree() {
        let v = (phi.coeff(-n) - lambda.powi(n as i32) * phi.coeff(n)).norm() / scale;
        if v > worst {
            worst = v;
            worst_n = Some(n);
        }
    }
    let mut rep = CheckReport::pass(worst, tol).with_lambda(lambda);
    rep.unconstrained = phi.band_degree() == 0;
    if !rep.verdict {
        rep.violated_index = worst_n;
    }
    Ok(rep)
}

fn block_combos(phi: &MatrixSymbol) -> [ScalarSymbol; 4] {
    let [p1, p2, p3, p4] = phi.entries();
    [p1.add(&p2), p1.sub(&p2), p3.sub(&p4), p3.add(&p4)]
}

/// Coefficient predicate for the block conjugation: the four paired
/// relations, for all n >= 0 up to the band degree,
///   (phi1+phi2)^(-n) = lambda^n (phi1+phi2)^(n)
///   (phi1-phi2)^(-n) = lambda^n (phi3+phi4)^(n)
///   (phi3-phi4)^(-n) = lambda^n (phi3-phi4)^(n)
///   (phi3+phi4)^(-n) = lambda^n (phi1-phi2)^(n).
/// Scanning both signs of every index up to the band degree also enforces
/// that the positive and negative support extents of the paired
/// combinations coincide. At n = 0 the first and third relations are
/// trivial, but the paired ones still tie the constant terms together:
/// (phi1-phi2)^(0) = (phi3+phi4)^(0).
pub fn cs_coeff_block(phi: &MatrixSymbol, lambda: C64, tol: f64) -> Result<CheckReport> {
    require_unimodular(lambda, "lambda")?;
    let [sum12, dif12, dif34, sum34] = block_combos(phi);
    // relation k: lhs-hat(-n) = lambda^n rhs-hat(n)
    let relations: [(&ScalarSymbol, &ScalarSymbol); 4] =
        [(&sum12, &sum12), (&dif12, &sum34), (&dif34, &dif34), (&sum34, &dif12)];
    let scale = phi.max_abs().max(1.0);
    let mut worst = 0.0_f64;
    let mut worst_at = None;
    for n in 0..=phi.band_degree() {
        let ln = lambda.powi(n as i32);
        for (k, (lhs, rhs)) in relations.iter().enumerate() {
            let v = (lhs.coeff(-n) - ln * rhs.coeff(n)).norm() / scale;
            if v > worst {
                worst = v;
                worst_at = Some((k + 1, n));
            }
        }
    }
    let mut rep = CheckReport::pass(worst, tol).with_lambda(lambda);
    rep.unconstrained = phi.band_degree() == 0;
    if !rep.verdict {
        if let Some((rel, n)) = worst_at {
            rep.violated_relation = Some(rel);
            rep.violated_index = Some(n);
        }
    }
    Ok(rep)
}

/// General solution of the four paired relations: given lambda-symmetric
/// scalar symbols `s` and `d` and an arbitrary `g`, returns Phi with
/// phi1 = (s+g)/2, phi2 = (s-g)/2, phi3 = (g(lambda conj z) + d)/2,
/// phi4 = (g(lambda conj z) - d)/2.
pub fn generate_cs_block(
    s: &ScalarSymbol,
    d: &ScalarSymbol,
    g: &ScalarSymbol,
    lambda: C64,
) -> Result<MatrixSymbol> {
    require_unimodular(lambda, "lambda")?;
    for (name, sym) in [("s", s), ("d", d)] {
        if !cs_coeff_scalar(sym, lambda, DEFAULT_TOL)?.verdict {
            return Err(Error::InvalidArgument(format!(
                "{name} must satisfy the scalar lambda-symmetry relation"
            )));
        }
    }
    let half = C64::new(0.5, 0.0);
    let gi = g.involute(lambda)?;
    let phi1 = s.add(g).scale(half);
    let phi2 = s.sub(g).scale(half);
    let phi3 = gi.add(d).scale(half);
    let phi4 = gi.sub(d).scale(half);
    Ok(MatrixSymbol::from_entries(&phi1, &phi2, &phi3, &phi4))
}

/// Builder from the analytic-part form Phi(z) = Phi_+(z) + Phi_0 +
/// Phi_+(lambda conj z). The entry phi1 is derived as phi2 + phi3 + phi4
/// (in the analytic part and in the constant term), the hypothesis under
/// which the form is equivalent to block complex symmetry.
pub fn generate_cs_block_iv(
    phi2_plus: &ScalarSymbol,
    phi3_plus: &ScalarSymbol,
    phi4_plus: &ScalarSymbol,
    phi0: Mat2,
    lambda: C64,
) -> Result<MatrixSymbol> {
    require_unimodular(lambda, "lambda")?;
    for (name, sym) in [("phi2", phi2_plus), ("phi3", phi3_plus), ("phi4", phi4_plus)] {
        if !sym.is_analytic() {
            return Err(Error::InvalidArgument(format!(
                "{name} analytic part must be supported on n >= 1"
            )));
        }
    }
    let phi1_plus = phi2_plus.add(phi3_plus).add(phi4_plus);
    let plus = MatrixSymbol::from_entries(&phi1_plus, phi2_plus, phi3_plus, phi4_plus);
    let mut phi0 = phi0;
    phi0[(0, 0)] = phi0[(0, 1)] + phi0[(1, 0)] + phi0[(1, 1)];
    Ok(plus.add(&MatrixSymbol::constant(phi0)).add(&plus.involute(lambda)?))
}

/// Result of lambda inference: either the symbol imposes no constraint at
/// all, or the list of unimodular candidates that pass the full predicate.
#[derive(Debug, Clone)]
pub struct LambdaInference {
    pub unconstrained: bool,
    pub candidates: Vec<(C64, CheckReport)>,
}

// threshold below which a coefficient is treated as structurally zero when
// collecting lambda constraints
const ACTIVE_TOL: f64 = 1e-12;

fn roots_of_constraint(order: i64, ratio: C64) -> Vec<C64> {
    let k = order as usize;
    let base = ratio.arg();
    (0..k)
        .map(|j| C64::from_polar(1.0, (base + 2.0 * std::f64::consts::PI * j as f64) / order as f64))
        .collect()
}

fn infer_from_pairs<F>(
    pairs: &[(i64, C64, C64)], // (n, lhs = hat(-n) side, rhs = hat(n) side)
    scale: f64,
    check: F,
) -> LambdaInference
where
    F: Fn(C64) -> Option<CheckReport>,
{
    // lowest-order constraint with both sides active
    let mut lowest: Option<(i64, C64)> = None;
    let mut any_active = false;
    for &(n, lhs, rhs) in pairs {
        let la = lhs.norm() > ACTIVE_TOL * scale;
        let ra = rhs.norm() > ACTIVE_TOL * scale;
        if la || ra {
            any_active = true;
        }
        if la && ra && lowest.is_none() {
            let ratio = lhs / rhs;
            if (ratio.norm() - 1.0).abs() <= 1e-6 {
                lowest = Some((n, ratio / C64::new(ratio.norm(), 0.0)));
            }
        }
    }
    if !any_active {
        return LambdaInference { unconstrained: true, candidates: Vec::new() };
    }
    let Some((order, ratio)) = lowest else {
        // active constraints exist but none is solvable (one side zero or
        // off-modulus ratio): no unimodular lambda can work
        return LambdaInference { unconstrained: false, candidates: Vec::new() };
    };
    let candidates = roots_of_constraint(order, ratio)
        .into_iter()
        .filter_map(|lam| check(lam).filter(|r| r.verdict).map(|r| (lam, r)))
        .collect();
    LambdaInference { unconstrained: false, candidates }
}

pub fn infer_lambda_scalar(phi: &ScalarSymbol, tol: f64) -> LambdaInference {
    let pairs: Vec<(i64, C64, C64)> = (1..=phi.band_degree())
        .map(|n| (n, phi.coeff(-n), phi.coeff(n)))
        .collect();
    infer_from_pairs(&pairs, phi.max_abs().max(1.0), |lam| {
        cs_coeff_scalar(phi, lam, tol).ok()
    })
}

pub fn infer_lambda_block(phi: &MatrixSymbol, tol: f64) -> LambdaInference {
    let [sum12, dif12, dif34, sum34] = block_combos(phi);
    let relations: [(&ScalarSymbol, &ScalarSymbol); 4] =
        [(&sum12, &sum12), (&dif12, &sum34), (&dif34, &dif34), (&sum34, &dif12)];
    let mut pairs: Vec<(i64, C64, C64)> = Vec::new();
    for n in 1..=phi.band_degree() {
        for (lhs, rhs) in &relations {
            pairs.push((n, lhs.coeff(-n), rhs.coeff(n)));
        }
    }
    let mut inf = infer_from_pairs(&pairs, phi.max_abs().max(1.0), |lam| {
        cs_coeff_block(phi, lam, tol).ok()
    });
    if inf.unconstrained {
        // the constant-term relation is lambda-free and can still fail
        if let Ok(rep) = cs_coeff_block(phi, C64::new(1.0, 0.0), tol) {
            if !rep.verdict {
                inf.unconstrained = false;
            }
        }
    }
    inf
}

/// Check phi_- = C phi_+ coefficientwise for the conjugation that fixes every
/// basis vector (so C e_0 = e_0 forces lambda = 1): phi-hat(-n-1) =
/// phi-hat(n+1) for all n >= 0. Agrees with `cs_coeff_scalar(phi, 1)`.
pub fn cs_prop_cso_check(phi: &ScalarSymbol, tol: f64) -> CheckReport {
    let d = phi.decompose();
    // C_{1,1} acts on coefficient sequences by entrywise conjugation
    let c_plus = ScalarSymbol::new(d.plus.iter().map(|(n, v)| (n, v.conj())));
    let diff = d.minus.sub(&c_plus);
    let scale = phi.max_abs().max(1.0);
    let residual = diff.max_abs() / scale;
    let mut rep = CheckReport::pass(residual, tol).with_lambda(C64::new(1.0, 0.0));
    rep.unconstrained = phi.band_degree() == 0;
    if !rep.verdict {
        rep.violated_index = diff
            .iter()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .map(|(n, _)| n);
    }
    rep
}

/// Per-k residuals of the four coefficient identities evaluated against
/// finitely supported test sequences a and b.
#[derive(Debug, Clone)]
pub struct CorGeneralRow {
    pub k: usize,
    /// residuals of identities (a), (b), (c), (d)
    pub residuals: [f64; 4],
}

fn cor_identity_residual(
    u: &ScalarSymbol, // symbol whose positive-side coefficients enter the left sum
    v: &ScalarSymbol, // symbol whose negative-side coefficients enter with lambda powers
    seq: &[C64],
    k: usize,
    lambda: C64,
    scale: f64,
) -> f64 {
    let lc = lambda.conj();
    let at = |i: usize| seq.get(i).copied().unwrap_or(C64::new(0.0, 0.0));
    let mut lhs = C64::new(0.0, 0.0);
    for (i, &ai) in seq.iter().enumerate().take(k) {
        let m = (k - i) as i64;
        lhs += (u.coeff(m) - lc.powu((k + i) as u32) * v.coeff(-m)) * ai;
    }
    let mut rhs = C64::new(0.0, 0.0);
    let n_max = seq.len().saturating_sub(k);
    for n in 1..=n_max as i64 {
        rhs += (lc.powu((n as usize + 2 * k) as u32) * v.coeff(n) - u.coeff(-n))
            * at(n as usize + k);
    }
    (lhs - rhs).norm() / scale
}

/// Evaluate both sides of the four coefficient identities for k = 1..=k_max
/// against arbitrary finitely supported sequences a and b, reporting the
/// residuals rather than asserting them.
pub fn verify_cor_general(
    phi: &MatrixSymbol,
    lambda: C64,
    a: &[C64],
    b: &[C64],
    k_max: usize,
) -> Result<Vec<CorGeneralRow>> {
    require_unimodular(lambda, "lambda")?;
    let [p1, p2, p3, p4] = phi.entries();
    let sum13 = p1.add(&p3);
    let dif24 = p2.sub(&p4);
    let sum24 = p2.add(&p4);
    let dif13 = p1.sub(&p3);
    let seq_max = a
        .iter()
        .chain(b.iter())
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    let scale = (phi.max_abs() * seq_max).max(1.0);
    Ok((1..=k_max)
        .map(|k| CorGeneralRow {
            k,
            residuals: [
                cor_identity_residual(&sum13, &sum13, a, k, lambda, scale),
                cor_identity_residual(&dif24, &dif24, b, k, lambda, scale),
                cor_identity_residual(&sum24, &dif13, b, k, lambda, scale),
                cor_identity_residual(&dif13, &sum24, a, k, lambda, scale),
            ],
        })
        .collect())
}

/// Summary of a predicate scan over analytic samples and a lambda grid.
#[derive(Debug, Clone)]
pub struct ScanSummary {
    pub cases: usize,
    pub passes: usize,
    /// (sample index, lambda) of the first unexpected pass, if any.
    pub counterexample: Option<(usize, C64)>,
}

/// Scan nonconstant analytic (or coanalytic) block symbols against a lambda
/// grid; a complex symmetric verdict for any of them contradicts the
/// constancy theorem and is reported as a counterexample.
pub fn analytic_cs_property_scan(
    samples: &[MatrixSymbol],
    lambdas: &[C64],
    tol: f64,
) -> Result<ScanSummary> {
    let mut summary = ScanSummary { cases: 0, passes: 0, counterexample: None };
    for (idx, phi) in samples.iter().enumerate() {
        for &lam in lambdas {
            summary.cases += 1;
            if cs_coeff_block(phi, lam, tol)?.verdict {
                summary.passes += 1;
                summary.counterexample.get_or_insert((idx, lam));
            }
        }
    }
    Ok(summary)
}

/// Residuals of the reproducing-kernel eigen-relation T_{conj f} k_mu =
/// conj(f(mu)) k_mu on growing truncations, for analytic f and |mu| < 1.
pub fn kernel_eigen_residuals(
    f: &ScalarSymbol,
    mu: C64,
    sizes: &[usize],
) -> Result<Vec<f64>> {
    if !f.is_analytic() && f.band_degree() != 0 {
        return Err(Error::InvalidArgument("f must be analytic".into()));
    }
    if mu.norm() >= 1.0 {
        return Err(Error::InvalidArgument("|mu| must be < 1".into()));
    }
    // value of the analytic symbol inside the disk
    let f_mu: C64 = f.iter().map(|(n, v)| v * mu.powu(n as u32)).sum();
    let conj_sym = f.conj_fn();
    sizes
        .iter()
        .map(|&n| {
            let k = crate::operator::kernel_vector(mu, n)?;
            let t = crate::operator::toeplitz(&conj_sym, n)?;
            let r = &t.data * &k - &k * f_mu.conj();
            Ok(r.norm() / k.norm())
        })
        .collect()
}

/// Residual of the intertwining identity C_{1,lambda} T_phi C_{1,lambda} =
/// T_{conj(phi(lambda conj z))} on an N x N truncation: the left side as a
/// linear map is W conj(T_phi) conj(W).
pub fn lemma_intertwine_residual(phi: &ScalarSymbol, lambda: C64, n: usize) -> Result<f64> {
    let spec = crate::operator::ConjugationSpec::scalar(C64::new(1.0, 0.0), lambda);
    let c = crate::operator::conjugation_op(&spec, n)?;
    let t = crate::operator::toeplitz(phi, n)?;
    let lhs = &c.w * t.data.map(|v| v.conj()) * c.w.map(|v| v.conj());
    let rhs = crate::operator::toeplitz(&phi.involute(lambda)?.conj_fn(), n)?;
    Ok(frobenius(&(lhs - &rhs.data)) / frobenius(&t.data).max(1.0))
}
