//! Seeded property-suite runner covering every check in the library, with
//! counterexample capture and deterministic per-property RNG streams.

use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gen::{
    perturb_block, perturb_scalar, random_block, random_scalar, random_unimodular, rng_for,
    Constraint,
};
use crate::io::{serialize_symbol, ParsedSymbol};
use crate::normality::{
    brown_halmos_scalar, build_nor1_commuting, build_nor1_noncommuting, build_nor2_commuting,
    build_nor2_noncommuting, d_skew_defect, default_truncation, ghr_normal_check,
    kkl_normal_check, self_commutator_corner,
};
use crate::operator::{
    block_toeplitz, conjugation_op, frobenius, toeplitz, ConjugationSpec,
};
use crate::report::Verdict;
use crate::symbol::{example_phi, example_psi, MatrixSymbol, ScalarSymbol, C64};
use crate::symmetry::{
    cs_coeff_block, cs_coeff_scalar, cs_numeric, cs_prop_cso_check, infer_lambda_block,
    kernel_eigen_residuals, lemma_intertwine_residual, verify_cor_general,
};

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub symbol: String,
    pub parameters: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub max_residual: f64,
    pub counterexamples: Vec<Counterexample>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub sizes: Vec<usize>,
    pub tol: f64,
    pub wall_time_ms: f64,
    pub properties: Vec<PropertyResult>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.properties.iter().all(|p| p.failures == 0)
    }

    pub fn total_failures(&self) -> usize {
        self.properties.iter().map(|p| p.failures).sum()
    }
}

/// Deliberate defect injection, used to demonstrate that the suite localizes
/// failures to the property that actually broke.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Mislabel a perturbed symbol as symmetric in the scalar oracle
    /// equivalence property.
    OracleEquivalence,
}

struct Recorder {
    result: PropertyResult,
}

impl Recorder {
    fn new(name: &str) -> Self {
        Recorder {
            result: PropertyResult {
                name: name.to_owned(),
                cases: 0,
                failures: 0,
                max_residual: 0.0,
                counterexamples: Vec::new(),
            },
        }
    }

    fn case(&mut self, pass: bool, residual: f64, witness: impl FnOnce() -> Counterexample) {
        self.result.cases += 1;
        self.result.max_residual = self.result.max_residual.max(residual);
        if !pass {
            self.result.failures += 1;
            if self.result.counterexamples.len() < 3 {
                self.result.counterexamples.push(witness());
            }
        }
    }
}

fn stream(seed: u64, index: u64) -> u64 {
    seed ^ 0x9e37_79b9_7f4a_7c15u64.wrapping_mul(index + 1)
}

fn no_witness() -> Counterexample {
    Counterexample { symbol: String::new(), parameters: String::new() }
}

fn scalar_witness(s: &ScalarSymbol, params: String) -> Counterexample {
    Counterexample {
        symbol: serialize_symbol(&ParsedSymbol::Scalar(s.clone()), None),
        parameters: params,
    }
}

fn block_witness(m: &MatrixSymbol, params: String) -> Counterexample {
    Counterexample {
        symbol: serialize_symbol(&ParsedSymbol::Block(m.clone()), None),
        parameters: params,
    }
}

fn scalar_numeric(phi: &ScalarSymbol, lambda: C64, n: usize, tol: f64) -> Result<bool> {
    let t = toeplitz(phi, n)?;
    let c = conjugation_op(&ConjugationSpec::scalar(C64::new(1.0, 0.0), lambda), n)?;
    Ok(cs_numeric(&t, &c, tol)?.verdict)
}

fn block_numeric(phi: &MatrixSymbol, lambda: C64, n: usize, tol: f64) -> Result<bool> {
    let t = block_toeplitz(phi, n)?;
    let c = conjugation_op(&ConjugationSpec::block(C64::new(1.0, 0.0), lambda), n)?;
    Ok(cs_numeric(&t, &c, tol)?.verdict)
}

pub fn run_suite(seed: u64, sizes: &[usize], tol: f64) -> Result<SuiteReport> {
    run_suite_with_fault(seed, sizes, tol, None)
}

pub fn run_suite_with_fault(
    seed: u64,
    sizes: &[usize],
    tol: f64,
    fault: Option<Fault>,
) -> Result<SuiteReport> {
    if sizes.is_empty() {
        return Err(Error::InvalidArgument("sizes list must be nonempty".into()));
    }
    if sizes.iter().any(|&n| n == 0) {
        return Err(Error::InvalidArgument("sizes must be positive".into()));
    }
    let start = Instant::now();
    let min_size = *sizes.iter().min().expect("nonempty");
    let degree = ((min_size as i64) - 1).clamp(0, 4);

    let mut props = Vec::new();
    let mut idx = 0u64;
    let mut next = || {
        idx += 1;
        stream(seed, idx)
    };

    props.push(prop_paper_examples(tol)?);
    props.push(prop_involution(next(), degree)?);
    props.push(prop_arithmetic_eval(next(), degree)?);
    props.push(prop_decomposition(next(), degree)?);
    props.push(prop_serialization(next(), degree)?);
    props.push(prop_scalar_oracle(next(), sizes, degree, tol, fault)?);
    props.push(prop_block_oracle(next(), sizes, degree, tol)?);
    props.push(prop_mu_independence(next(), degree)?);
    props.push(prop_conjugation_axioms(next(), sizes)?);
    props.push(prop_analytic_constant(next(), degree, tol)?);
    props.push(prop_kernel_decay()?);
    props.push(prop_brown_halmos(next(), degree)?);
    props.push(prop_ghr_kkl(next(), degree, tol)?);
    props.push(prop_nor_builds(next(), degree, tol)?);
    props.push(prop_lambda_inference(next(), degree, tol)?);
    props.push(prop_intertwine(next(), degree)?);
    props.push(prop_cso(next(), degree, tol)?);
    props.push(prop_cor_general(next(), degree)?);
    props.push(prop_stability(next(), sizes, degree, tol)?);

    Ok(SuiteReport {
        seed,
        sizes: sizes.to_vec(),
        tol,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        properties: props,
    })
}

fn prop_paper_examples(tol: f64) -> Result<PropertyResult> {
    let mut rec = Recorder::new("published-examples");
    let phi = example_phi();
    let lam = C64::new(-1.0, 0.0);
    let coeff = cs_coeff_block(&phi, lam, tol)?;
    rec.case(coeff.verdict, coeff.residual, || {
        block_witness(&phi, "coefficient test at lambda=-1".into())
    });
    for n in [2usize, 4, 8, 16] {
        let t = block_toeplitz(&phi, n)?;
        let c = conjugation_op(&ConjugationSpec::block(C64::new(1.0, 0.0), lam), n)?;
        let rep = cs_numeric(&t, &c, 1e-12)?;
        rec.case(rep.verdict, rep.residual, || {
            block_witness(&phi, format!("dense test at N={n}"))
        });
    }
    let psi = example_psi();
    let rep = cs_coeff_block(&psi, C64::new(1.0, 0.0), tol)?;
    let ok = !rep.verdict && rep.violated_relation == Some(1) && rep.violated_index == Some(1);
    rec.case(ok, rep.residual, || {
        block_witness(&psi, "expected first relation violated at n=1".into())
    });
    let t = block_toeplitz(&psi, 4)?;
    let c = conjugation_op(&ConjugationSpec::block(C64::new(1.0, 0.0), C64::new(1.0, 0.0)), 4)?;
    let rep = cs_numeric(&t, &c, tol)?;
    rec.case(!rep.verdict && rep.residual > 1e-2, rep.residual, || {
        block_witness(&psi, "dense residual should exceed 1e-2".into())
    });
    Ok(rec.result)
}

fn prop_involution(seed: u64, degree: i64) -> Result<PropertyResult> {
    let mut rec = Recorder::new("involution-is-involutive");
    let rng = &mut rng_for(seed);
    for i in 0..40 {
        let lam = random_unimodular(rng);
        let s = random_scalar(stream(seed, 100 + i), degree, Constraint::Free)?;
        let back = s.involute(lam)?.involute(lam)?;
        let r = back.sub(&s).max_abs() / s.max_abs().max(1.0);
        rec.case(r <= 1e-14, r, || scalar_witness(&s, format!("lambda={lam}")));
        let m = random_block(stream(seed, 200 + i), degree, Constraint::Free)?;
        let back = m.involute(lam)?.involute(lam)?;
        let r = back.sub(&m).max_abs() / m.max_abs().max(1.0);
        rec.case(r <= 1e-14, r, || block_witness(&m, format!("lambda={lam}")));
    }
    Ok(rec.result)
}

fn prop_arithmetic_eval(seed: u64, degree: i64) -> Result<PropertyResult> {
    let mut rec = Recorder::new("arithmetic-matches-pointwise-evaluation");
    let rng = &mut rng_for(seed);
    for i in 0..30 {
        let a = random_scalar(stream(seed, 100 + i), degree, Constraint::Free)?;
        let b = random_scalar(stream(seed, 200 + i), degree, Constraint::Free)?;
        let c = C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let scale = (a.max_abs() * b.max_abs()).max(1.0);
        let mut worst = 0.0_f64;
        for k in 0..8 {
            let z = C64::from_polar(1.0, 0.7 + k as f64);
            let (ea, eb) = (a.eval(z)?, b.eval(z)?);
            worst = worst.max((a.mul(&b).eval(z)? - ea * eb).norm() / scale);
            worst = worst.max((a.add(&b).eval(z)? - (ea + eb)).norm() / scale);
            worst = worst.max((a.scale(c).eval(z)? - c * ea).norm() / scale);
            worst = worst.max((a.conj_fn().eval(z)? - ea.conj()).norm() / scale);
        }
        rec.case(worst <= 1e-12, worst, || scalar_witness(&a, "arithmetic".into()));
    }
    Ok(rec.result)
}

fn prop_decomposition(seed: u64, degree: i64) -> Result<PropertyResult> {
    let mut rec = Recorder::new("decomposition-reassembles");
    for i in 0..30 {
        let s = random_scalar(stream(seed, 100 + i), degree, Constraint::Free)?;
        let r = s.decompose().reassemble().sub(&s).max_abs();
        rec.case(r == 0.0, r, || scalar_witness(&s, "scalar decomposition".into()));
        let m = random_block(stream(seed, 200 + i), degree, Constraint::Free)?;
        let r = m.decompose().reassemble().sub(&m).max_abs();
        rec.case(r == 0.0, r, || block_witness(&m, "block decomposition".into()));
    }
    Ok(rec.result)
}

fn prop_serialization(seed: u64, degree: i64) -> Result<PropertyResult> {
    let mut rec = Recorder::new("serialization-round-trip");
    for i in 0..30 {
        let s = random_scalar(stream(seed, 100 + i), degree, Constraint::Free)?;
        let parsed = crate::io::parse_symbol(&serialize_symbol(
            &ParsedSymbol::Scalar(s.clone()),
            None,
        ))?;
        let ok = matches!(&parsed, ParsedSymbol::Scalar(back) if *back == s);
        rec.case(ok, 0.0, || scalar_witness(&s, "scalar round trip".into()));
        let m = random_block(stream(seed, 200 + i), degree, Constraint::Free)?;
        let parsed =
            crate::io::parse_symbol(&serialize_symbol(&ParsedSymbol::Block(m.clone()), None))?;
        let ok = matches!(&parsed, ParsedSymbol::Block(back) if *back == m);
        rec.case(ok, 0.0, || block_witness(&m, "block round trip".into()));
    }
    Ok(rec.result)
}

fn prop_scalar_oracle(
    seed: u64,
    sizes: &[usize],
    degree: i64,
    tol: f64,
    fault: Option<Fault>,
) -> Result<PropertyResult> {
    let mut rec = Recorder::new("scalar-coefficient-vs-dense-oracle");
    let rng = &mut rng_for(seed);
    for i in 0..40 {
        let lam = random_unimodular(rng);
        let sym = random_scalar(stream(seed, 100 + i), degree, Constraint::LambdaSymmetric(lam))?;
        let broken = perturb_scalar(&sym, stream(seed, 300 + i), 0.1);
        for s in [&sym, &broken] {
            let coeff = cs_coeff_scalar(s, lam, tol)?.verdict;
            // the injected defect feeds the dense oracle a corrupted copy, so
            // the two verdicts must disagree
            let dense_input = if fault == Some(Fault::OracleEquivalence) {
                perturb_scalar(s, stream(seed, 900 + i), 0.1)
            } else {
                s.clone()
            };
            for &n in sizes {
                if (n as i64) < s.band_degree() + 1 {
                    continue;
                }
                let numeric = scalar_numeric(&dense_input, lam, n, tol)?;
                rec.case(coeff == numeric, 0.0, || {
                    scalar_witness(s, format!("lambda={lam}, N={n}, coeff={coeff}"))
                });
            }
        }
    }
    Ok(rec.result)
}

fn prop_block_oracle(seed: u64, sizes: &[usize], degree: i64, tol: f64) -> Result<PropertyResult> {
    let mut rec = Recorder::new("block-coefficient-vs-dense-oracle");
    let rng = &mut rng_for(seed);
    for i in 0..40 {
        let lam = random_unimodular(rng);
        let sym = random_block(stream(seed, 100 + i), degree, Constraint::LambdaSymmetric(lam))?;
        let broken = perturb_block(&sym, stream(seed, 300 + i), 0.1);
        for m in [&sym, &broken] {
            let coeff = cs_coeff_block(m, lam, tol)?.verdict;
            for &n in sizes {
                if (n as i64) < m.band_degree() + 1 {
                    continue;
                }
                let numeric = block_numeric(m, lam, n, tol)?;
                rec.case(coeff == numeric, 0.0, || {
                    block_witness(m, format!("lambda={lam}, N={n}, coeff={coeff}"))
                });
            }
        }
    }
    Ok(rec.result)
}

fn prop_mu_independence(seed: u64, degree: i64) -> Result<PropertyResult> {
    let mut rec = Recorder::new("conjugation-phase-independence");
    let rng = &mut rng_for(seed);
    for i in 0..40 {
        let lam = random_unimodular(rng);
        let mu = random_unimodular(rng);
        let n = rng.gen_range(4..12);
        let m = random_block(stream(seed, 100 + i), degree, Constraint::Free)?;
        let t = block_toeplitz(&m, n)?;
        let c1 = conjugation_op(&ConjugationSpec::block(C64::new(1.0, 0.0), lam), n)?;
        let cm = conjugation_op(&ConjugationSpec::block(mu, lam), n)?;
        let r1 = cs_numeric(&t, &c1, 1e-10)?.residual;
        let rm = cs_numeric(&t, &cm, 1e-10)?.residual;
        let diff = (r1 - rm).abs();
        rec.case(diff <= 1e-13, diff, || {
            block_witness(&m, format!("mu={mu}, lambda={lam}, N={n}"))
        });
    }
    Ok(rec.result)
}

fn prop_conjugation_axioms(seed: u64, sizes: &[usize]) -> Result<PropertyResult> {
    let mut rec = Recorder::new("conjugation-axioms");
    let rng = &mut rng_for(seed);
    for _ in 0..40 {
        let lam = random_unimodular(rng);
        let mu = random_unimodular(rng);
        let n = sizes[rng.gen_range(0..sizes.len())];
        for spec in [ConjugationSpec::scalar(mu, lam), ConjugationSpec::block(mu, lam)] {
            let c = conjugation_op(&spec, n)?;
            let dim = c.dim();
            // C^2 = I realized as W conj(W) = I
            let wcw = &c.w * c.w.map(|v| v.conj());
            let r_inv = frobenius(&(wcw - nalgebra::DMatrix::identity(dim, dim)));
            // unitarity of W
            let r_unit =
                frobenius(&(c.w.adjoint() * &c.w - nalgebra::DMatrix::identity(dim, dim)));
            // antilinear isometry <Cx, Cy> = conj(<x, y>)
            let x = nalgebra::DVector::from_fn(dim, |_, _| {
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let y = nalgebra::DVector::from_fn(dim, |_, _| {
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let (cx, cy) = (c.apply(&x)?, c.apply(&y)?);
            let r_iso = (cx.dotc(&cy) - x.dotc(&y).conj()).norm() / x.norm() / y.norm();
            let worst = r_inv.max(r_unit).max(r_iso);
            rec.case(worst <= 1e-12, worst, || Counterexample {
                symbol: String::new(),
                parameters: format!("mu={mu}, lambda={lam}, N={n}, kind={:?}", spec.kind),
            });
        }
    }
    Ok(rec.result)
}

fn prop_analytic_constant(seed: u64, degree: i64, tol: f64) -> Result<PropertyResult> {
    let mut rec = Recorder::new("nonconstant-analytic-never-symmetric");
    let rng = &mut rng_for(seed);
    let d = degree.max(1);
    for i in 0..30 {
        let m = random_block(stream(seed, 100 + i), d, Constraint::Analytic)?;
        for _ in 0..8 {
            let lam = random_unimodular(rng);
            let rep = cs_coeff_block(&m, lam, tol)?;
            rec.case(!rep.verdict, rep.residual, || {
                block_witness(&m, format!("analytic symbol passed at lambda={lam}"))
            });
        }
    }
    Ok(rec.result)
}

fn prop_kernel_decay() -> Result<PropertyResult> {
    let mut rec = Recorder::new("kernel-eigen-relation-decay");
    let f = ScalarSymbol::monomial(2, C64::new(1.0, 0.0));
    let res = kernel_eigen_residuals(&f, C64::new(0.5, 0.0), &[8, 16, 32, 64])?;
    for w in res.windows(2) {
        rec.case(w[1] < w[0], w[1], no_witness);
    }
    rec.case(res[3] <= 1e-6, res[3], no_witness);
    Ok(rec.result)
}

fn prop_brown_halmos(seed: u64, degree: i64) -> Result<PropertyResult> {
    let mut rec = Recorder::new("normal-scalar-cross-oracle");
    let d = degree.max(1);
    for i in 0..40 {
        let normal = random_scalar(stream(seed, 100 + i), d, Constraint::BrownHalmos)?;
        let broken = perturb_scalar(&normal, stream(seed, 300 + i), 0.3);
        for s in [&normal, &broken] {
            let verdict = brown_halmos_scalar(s, 1e-10).verdict.is_pass();
            let (n, pad) = default_truncation(s.band_degree());
            let comm = self_commutator_corner(s, n, pad)?;
            rec.case(verdict == (comm <= 1e-10), comm, || {
                scalar_witness(s, format!("coefficient verdict {verdict}, commutator {comm:.3e}"))
            });
        }
    }
    Ok(rec.result)
}

fn prop_ghr_kkl(seed: u64, degree: i64, tol: f64) -> Result<PropertyResult> {
    let mut rec = Recorder::new("symbol-vs-truncation-normality");
    let rng = &mut rng_for(seed);
    let d = degree.max(1);
    for i in 0..30 {
        let rho = random_scalar(stream(seed, 100 + i), d, Constraint::LambdaSymmetric(C64::new(1.0, 0.0)))?;
        let rho = ScalarSymbol::new(rho.iter().map(|(n, v)| (n, C64::new(v.re, 0.0))));
        let normal = build_nor2_commuting(
            &rho,
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        )?;
        let free = random_block(stream(seed, 200 + i), d, Constraint::Free)?;
        for m in [&normal, &free] {
            let ghr = ghr_normal_check(m, tol)?;
            if ghr.verdict == Verdict::NotApplicable {
                continue;
            }
            let (n, pad) = default_truncation(m.band_degree());
            let kkl = kkl_normal_check(m, n, pad, tol)?;
            rec.case(ghr.verdict == kkl.verdict, ghr.max_residual(), || {
                block_witness(m, format!("symbol {:?} vs truncation {:?}", ghr.verdict, kkl.verdict))
            });
        }
    }
    Ok(rec.result)
}

fn prop_nor_builds(seed: u64, degree: i64, tol: f64) -> Result<PropertyResult> {
    let mut rec = Recorder::new("normal-block-constructions");
    let rng = &mut rng_for(seed);
    let d = degree.max(1);
    let one = C64::new(1.0, 0.0);
    for i in 0..15 {
        let rho1 = real_symmetric(stream(seed, 100 + i), d)?;
        let rho2 = ScalarSymbol::new([
            (d + 1, one),
            (-(d + 1), one),
        ]);
        let alpha = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let commuting = [
            build_nor1_commuting(&rho1, alpha, one, C64::new(rng.gen_range(-1.0..1.0), 0.0), one)?,
            build_nor2_commuting(&rho1, alpha, one, rng.gen_range(-1.0..1.0), 1.0)?,
        ];
        for m in commuting {
            let (n, pad) = default_truncation(m.band_degree());
            let kkl = kkl_normal_check(&m, n, pad, tol)?;
            let cs = cs_coeff_block(&m, one, tol)?;
            rec.case(kkl.verdict.is_pass() && cs.verdict, kkl.max_residual(), || {
                block_witness(&m, "commuting build should be normal and symmetric".into())
            });
        }
        let noncommuting = [
            build_nor1_noncommuting(&rho1, &rho2, alpha, C64::new(0.0, 0.0))?,
            build_nor2_noncommuting(&rho1, &rho2, alpha)?,
        ];
        for m in noncommuting {
            let (n, pad) = default_truncation(m.band_degree());
            let [p1, p2, _, _] = m.entries();
            let defect = d_skew_defect(&p1, &p2, n, pad)?;
            let kkl = kkl_normal_check(&m, n, pad, tol)?;
            let cs = cs_coeff_block(&m, one, tol)?;
            let ok = defect > 1e-6 && kkl.verdict == Verdict::Fail && cs.verdict;
            rec.case(ok, defect, || {
                block_witness(&m, format!("defect {defect:.3e}, kkl {:?}", kkl.verdict))
            });
        }
    }
    Ok(rec.result)
}

fn real_symmetric(seed: u64, degree: i64) -> Result<ScalarSymbol> {
    let rng = &mut rng_for(seed);
    let mut coeffs = vec![(0i64, C64::new(rng.gen_range(-1.0..1.0), 0.0))];
    for n in 1..=degree {
        let v = C64::new(rng.gen_range(0.25..1.0), 0.0);
        coeffs.push((n, v));
        coeffs.push((-n, v));
    }
    Ok(ScalarSymbol::new(coeffs))
}

fn prop_lambda_inference(seed: u64, degree: i64, tol: f64) -> Result<PropertyResult> {
    let mut rec = Recorder::new("symmetry-phase-inference");
    let rng = &mut rng_for(seed);
    let d = degree.max(1);
    for i in 0..30 {
        let lam = random_unimodular(rng);
        let m = random_block(stream(seed, 100 + i), d, Constraint::LambdaSymmetric(lam))?;
        let inf = infer_lambda_block(&m, tol);
        let found = inf
            .candidates
            .iter()
            .any(|(c, rep)| (c - lam).norm() <= 1e-8 && rep.verdict);
        rec.case(found || inf.unconstrained, 0.0, || {
            block_witness(&m, format!("expected lambda={lam} among candidates"))
        });
    }
    Ok(rec.result)
}

fn prop_intertwine(seed: u64, degree: i64) -> Result<PropertyResult> {
    let mut rec = Recorder::new("conjugated-operator-symbol-identity");
    let rng = &mut rng_for(seed);
    for i in 0..30 {
        let lam = random_unimodular(rng);
        let s = random_scalar(stream(seed, 100 + i), degree, Constraint::Free)?;
        let r = lemma_intertwine_residual(&s, lam, 16)?;
        rec.case(r <= 1e-12, r, || scalar_witness(&s, format!("lambda={lam}")));
    }
    Ok(rec.result)
}

fn prop_cso(seed: u64, degree: i64, tol: f64) -> Result<PropertyResult> {
    let mut rec = Recorder::new("coefficient-form-of-symmetry-at-one");
    let one = C64::new(1.0, 0.0);
    let d = degree.max(1);
    for i in 0..30 {
        let s = random_scalar(stream(seed, 100 + i), d, Constraint::LambdaSymmetric(one))?;
        let rep = cs_prop_cso_check(&s, tol);
        rec.case(rep.verdict, rep.residual, || scalar_witness(&s, "symmetric case".into()));
        let broken = perturb_scalar(&s, stream(seed, 300 + i), 0.2);
        let rep = cs_prop_cso_check(&broken, tol);
        rec.case(!rep.verdict, rep.residual, || {
            scalar_witness(&broken, "perturbed case should fail".into())
        });
    }
    Ok(rec.result)
}

fn prop_cor_general(seed: u64, degree: i64) -> Result<PropertyResult> {
    let mut rec = Recorder::new("coefficient-identities-at-real-phases");
    let rng = &mut rng_for(seed);
    let d = degree.max(1);
    for i in 0..20 {
        for lam in [C64::new(1.0, 0.0), C64::new(-1.0, 0.0)] {
            let m = random_block(stream(seed, 100 + i), d, Constraint::LambdaSymmetric(lam))?;
            let a: Vec<C64> = (0..10)
                .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let b: Vec<C64> = (0..10)
                .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let rows = verify_cor_general(&m, lam, &a, &b, 4)?;
            let worst = rows
                .iter()
                .flat_map(|r| r.residuals.iter().copied())
                .fold(0.0_f64, f64::max);
            rec.case(worst <= 1e-10, worst, || {
                block_witness(&m, format!("identities at lambda={lam}"))
            });
        }
    }
    Ok(rec.result)
}

fn prop_stability(seed: u64, sizes: &[usize], degree: i64, tol: f64) -> Result<PropertyResult> {
    let mut rec = Recorder::new("verdicts-stable-under-doubling");
    let rng = &mut rng_for(seed);
    let d = degree.max(1);
    for i in 0..15 {
        let lam = random_unimodular(rng);
        let sym = random_block(stream(seed, 100 + i), d, Constraint::LambdaSymmetric(lam))?;
        let broken = perturb_block(&sym, stream(seed, 300 + i), 0.1);
        for m in [&sym, &broken] {
            for &n in sizes {
                if (n as i64) < m.band_degree() + 1 {
                    continue;
                }
                let v1 = block_numeric(m, lam, n, tol)?;
                let v2 = block_numeric(m, lam, 2 * n, tol)?;
                rec.case(v1 == v2, 0.0, || {
                    block_witness(m, format!("dense verdict changed from N={n} to N={}", 2 * n))
                });
            }
            let (n, pad) = default_truncation(m.band_degree());
            let k1 = kkl_normal_check(m, n, pad, tol)?.verdict;
            let k2 = kkl_normal_check(m, 2 * n, 2 * pad, tol)?.verdict;
            rec.case(k1 == k2, 0.0, || {
                block_witness(m, "normality verdict changed under doubling".into())
            });
        }
    }
    Ok(rec.result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_sizes_rejected() {
        assert!(run_suite(1, &[], 1e-10).is_err());
    }

    #[test]
    fn suite_is_deterministic() {
        let a = run_suite(5, &[6], 1e-10).unwrap();
        let b = run_suite(5, &[6], 1e-10).unwrap();
        assert!(a.all_pass(), "failures: {:?}", failing(&a));
        let names_a: Vec<_> = a.properties.iter().map(|p| (&p.name, p.cases, p.failures)).collect();
        let names_b: Vec<_> = b.properties.iter().map(|p| (&p.name, p.cases, p.failures)).collect();
        assert_eq!(names_a, names_b);
    }

    #[test]
    fn fault_injection_localizes() {
        let rep = run_suite_with_fault(5, &[6], 1e-10, Some(Fault::OracleEquivalence)).unwrap();
        assert!(!rep.all_pass());
        for p in &rep.properties {
            if p.name == "scalar-coefficient-vs-dense-oracle" {
                assert!(p.failures > 0);
                assert!(!p.counterexamples.is_empty());
                // counterexample payload replays
                let parsed =
                    crate::io::parse_symbol(&p.counterexamples[0].symbol).unwrap();
                assert!(matches!(parsed, ParsedSymbol::Scalar(_)));
            } else {
                assert_eq!(p.failures, 0, "unexpected failure in {}", p.name);
            }
        }
    }

    fn failing(rep: &SuiteReport) -> Vec<(&str, usize, f64)> {
        rep.properties
            .iter()
            .filter(|p| p.failures > 0)
            .map(|p| (p.name.as_str(), p.failures, p.max_residual))
            .collect()
    }
}
