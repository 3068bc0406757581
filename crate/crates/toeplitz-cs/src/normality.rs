//! Normality decision procedures: the Brown-Halmos coefficient test for
//! scalar symbols, the t/s-condition test for 2x2 operator matrices on padded
//! truncations, its specialized cases, the symbol-level test with unitary
//! factor recovery, and generators for normal (and deliberately nonnormal)
//! complex symmetric block symbols.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::operator::{
    block_toeplitz, frobenius, padded_product, padded_product_block, Factor,
};
use crate::report::NormalityReport;
#[cfg(test)]
use crate::report::Verdict;
use crate::symbol::{MatrixSymbol, Mat2, ScalarSymbol, C64};

/// Default truncation parameters for band degree d: N = 4(d+1), pad = 2(d+1).
pub fn default_truncation(band_degree: i64) -> (usize, usize) {
    let u = (band_degree + 1) as usize;
    (4 * u, 2 * u)
}

fn symbols_close(a: &ScalarSymbol, b: &ScalarSymbol, tol: f64) -> bool {
    let scale = a.max_abs().max(b.max_abs()).max(1.0);
    a.sub(b).max_abs() <= tol * scale
}

/// Corner Frobenius norm of T_phi* T_phi - T_phi T_phi*, scaled.
pub fn self_commutator_corner(phi: &ScalarSymbol, n: usize, pad: usize) -> Result<f64> {
    let tt = padded_product(&[Factor::adj(phi), Factor::plain(phi)], n, pad)?;
    let ts = padded_product(&[Factor::plain(phi), Factor::adj(phi)], n, pad)?;
    let scale = frobenius(&crate::operator::toeplitz(phi, n)?.data).max(1.0);
    Ok(frobenius(&(&tt.data - &ts.data)) / scale)
}

/// Corner Frobenius norm of [T_phi, T_psi], scaled.
pub fn commutator_corner(
    phi: &ScalarSymbol,
    psi: &ScalarSymbol,
    n: usize,
    pad: usize,
) -> Result<f64> {
    let ab = padded_product(&[Factor::plain(phi), Factor::plain(psi)], n, pad)?;
    let ba = padded_product(&[Factor::plain(psi), Factor::plain(phi)], n, pad)?;
    let scale = frobenius(&crate::operator::toeplitz(phi, n)?.data)
        .max(frobenius(&crate::operator::toeplitz(psi, n)?.data))
        .max(1.0);
    Ok(frobenius(&(&ab.data - &ba.data)) / scale)
}

/// Corner Frobenius norm of [T_phi*, T_psi], scaled (the Fuglede-Putnam
/// consequence for commuting pairs with a normal first factor).
pub fn adjoint_commutator_corner(
    phi: &ScalarSymbol,
    psi: &ScalarSymbol,
    n: usize,
    pad: usize,
) -> Result<f64> {
    let ab = padded_product(&[Factor::adj(phi), Factor::plain(psi)], n, pad)?;
    let ba = padded_product(&[Factor::plain(psi), Factor::adj(phi)], n, pad)?;
    let scale = frobenius(&crate::operator::toeplitz(phi, n)?.data)
        .max(frobenius(&crate::operator::toeplitz(psi, n)?.data))
        .max(1.0);
    Ok(frobenius(&(&ab.data - &ba.data)) / scale)
}

/// Corner norm of D + D* for D = T_phi1 T_phi2* - T_phi2* T_phi1; nonzero
/// means D* != -D.
pub fn d_skew_defect(
    phi1: &ScalarSymbol,
    phi2: &ScalarSymbol,
    n: usize,
    pad: usize,
) -> Result<f64> {
    let ab = padded_product(&[Factor::plain(phi1), Factor::adj(phi2)], n, pad)?;
    let ba = padded_product(&[Factor::adj(phi2), Factor::plain(phi1)], n, pad)?;
    let d = &ab.data - &ba.data;
    let scale = frobenius(&crate::operator::toeplitz(phi1, n)?.data)
        .max(frobenius(&crate::operator::toeplitz(phi2, n)?.data))
        .max(1.0);
    Ok(frobenius(&(&d + d.adjoint())) / scale)
}

/// Brown-Halmos test: T_phi is normal iff phi = alpha + beta * rho with rho
/// real-valued, i.e. phi-hat(-n) = u * conj(phi-hat(n)) for a fixed
/// unimodular u taken from the lowest active index.
pub fn brown_halmos_scalar(phi: &ScalarSymbol, tol: f64) -> NormalityReport {
    let mut rep = NormalityReport::new(tol);
    let d = phi.band_degree();
    if d == 0 {
        rep.push_residual("constant", 0.0);
        return rep.finish();
    }
    let scale = phi.max_abs().max(1.0);
    let n0 = (1..=d)
        .find(|&n| phi.coeff(n).norm() > tol * scale || phi.coeff(-n).norm() > tol * scale)
        .expect("nonconstant symbol has an active index");
    let (pos, neg) = (phi.coeff(n0), phi.coeff(-n0));
    if pos.norm() <= tol * scale || neg.norm() <= tol * scale {
        rep.push_residual(
            format!("one-sided coefficient at n={n0}"),
            pos.norm().max(neg.norm()) / scale,
        );
        return rep.finish();
    }
    if (pos.norm() - neg.norm()).abs() > tol * scale {
        rep.push_residual(
            format!("modulus mismatch at n={n0}"),
            (pos.norm() - neg.norm()).abs() / scale,
        );
        return rep.finish();
    }
    let u = neg / pos.conj();
    rep.phase_u = Some(u);
    let mut worst = 0.0_f64;
    for n in 1..=d {
        worst = worst.max((phi.coeff(-n) - u * phi.coeff(n).conj()).norm() / scale);
    }
    rep.push_residual("phase relation", worst);
    rep.finish()
}

/// Normality of the block truncation via the six operator words:
/// t1 = A*A + C*C, t2 = A*B + C*D, t3 = B*B + D*D and
/// s1 = AA* + BB*, s2 = AC* + BD*, s3 = CC* + DD*, computed as the
/// boundary-exact corners of T_Phi* T_Phi and T_Phi T_Phi*.
pub fn kkl_normal_check(
    phi: &MatrixSymbol,
    n: usize,
    pad: usize,
    tol: f64,
) -> Result<NormalityReport> {
    let d = phi.band_degree();
    let (min_n, min_pad) = default_truncation(d);
    if pad < min_pad || n < min_n {
        return Err(Error::InvalidArgument(format!(
            "kkl check needs N >= {min_n} and pad >= {min_pad} for band degree {d}"
        )));
    }
    let tt = padded_product_block(&[Factor::adj(phi), Factor::plain(phi)], n, pad)?;
    let ts = padded_product_block(&[Factor::plain(phi), Factor::adj(phi)], n, pad)?;
    let scale = frobenius(&block_toeplitz(phi, n)?.data).max(1.0);
    let mut rep = NormalityReport::new(tol);
    for (j, (r, c)) in [(0, 0), (0, 1), (1, 1)].iter().enumerate() {
        let diff = tt.block(*r, *c) - ts.block(*r, *c);
        rep.push_residual(format!("t{0} - s{0}", j + 1), frobenius(&diff) / scale);
    }
    Ok(rep.finish())
}

/// The specialized 2x2 operator-matrix cases. Each case has structural
/// hypotheses; when they fail the report is not-applicable rather than false.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalCase {
    /// T = [[A, B], [B, D]] with A, B, D normal: normal iff
    /// A*B + B*D = AB* + BD*.
    I,
    /// T = [[A, B], [C, A]] with A normal and [A,B] = [A,C] = 0: normal iff
    /// B*B = CC* and BB* = C*C.
    II,
    /// T = [[A, B], [B, A]]: normal iff A and B are normal and [A,B] = 0.
    IV,
}

pub fn normal1_case(
    phi: &MatrixSymbol,
    case: NormalCase,
    n: usize,
    pad: usize,
    tol: f64,
) -> Result<NormalityReport> {
    let d = phi.band_degree();
    let (min_n, min_pad) = default_truncation(d);
    if pad < min_pad || n < min_n {
        return Err(Error::InvalidArgument(format!(
            "case check needs N >= {min_n} and pad >= {min_pad} for band degree {d}"
        )));
    }
    let [p1, p2, p3, p4] = phi.entries();
    let scale = frobenius(&block_toeplitz(phi, n)?.data).max(1.0);
    let mut rep = NormalityReport::new(tol);
    match case {
        NormalCase::I => {
            if !symbols_close(&p3, &p2, tol) {
                return Ok(NormalityReport::not_applicable(tol, "case i needs phi3 = phi2"));
            }
            for (name, p) in [("phi1", &p1), ("phi2", &p2), ("phi4", &p4)] {
                if !brown_halmos_scalar(p, tol).verdict.is_pass() {
                    return Ok(NormalityReport::not_applicable(
                        tol,
                        format!("case i needs T_{name} normal"),
                    ));
                }
            }
            // A*B + B*D vs AB* + BD*
            let lhs = padded_product(&[Factor::adj(&p1), Factor::plain(&p2)], n, pad)?
                .data
                + padded_product(&[Factor::adj(&p2), Factor::plain(&p4)], n, pad)?.data;
            let rhs = padded_product(&[Factor::plain(&p1), Factor::adj(&p2)], n, pad)?
                .data
                + padded_product(&[Factor::plain(&p2), Factor::adj(&p4)], n, pad)?.data;
            rep.push_residual("A*B + B*D - AB* - BD*", frobenius(&(lhs - rhs)) / scale);
        }
        NormalCase::II => {
            if !symbols_close(&p4, &p1, tol) {
                return Ok(NormalityReport::not_applicable(tol, "case ii needs phi4 = phi1"));
            }
            if !brown_halmos_scalar(&p1, tol).verdict.is_pass() {
                return Ok(NormalityReport::not_applicable(tol, "case ii needs T_phi1 normal"));
            }
            for (name, p) in [("[A,B]", &p2), ("[A,C]", &p3)] {
                if commutator_corner(&p1, p, n, pad)? > tol {
                    return Ok(NormalityReport::not_applicable(
                        tol,
                        format!("case ii needs {name} = 0"),
                    ));
                }
            }
            let bsb = padded_product(&[Factor::adj(&p2), Factor::plain(&p2)], n, pad)?.data;
            let ccs = padded_product(&[Factor::plain(&p3), Factor::adj(&p3)], n, pad)?.data;
            let bbs = padded_product(&[Factor::plain(&p2), Factor::adj(&p2)], n, pad)?.data;
            let csc = padded_product(&[Factor::adj(&p3), Factor::plain(&p3)], n, pad)?.data;
            rep.push_residual("B*B - CC*", frobenius(&(bsb - ccs)) / scale);
            rep.push_residual("BB* - C*C", frobenius(&(bbs - csc)) / scale);
        }
        NormalCase::IV => {
            if !symbols_close(&p3, &p2, tol) || !symbols_close(&p4, &p1, tol) {
                return Ok(NormalityReport::not_applicable(
                    tol,
                    "case iv needs phi3 = phi2 and phi4 = phi1",
                ));
            }
            rep.push_residual("A self-commutator", self_commutator_corner(&p1, n, pad)?);
            rep.push_residual("B self-commutator", self_commutator_corner(&p2, n, pad)?);
            rep.push_residual("[A, B]", commutator_corner(&p1, &p2, n, pad)?);
        }
    }
    Ok(rep.finish())
}

fn stack_rows(mats: &[(Mat2, Mat2)]) -> (DMatrix<C64>, DMatrix<C64>) {
    let k = mats.len();
    let mut a = DMatrix::zeros(2 * k, 2);
    let mut b = DMatrix::zeros(2 * k, 2);
    for (i, (am, bm)) in mats.iter().enumerate() {
        for r in 0..2 {
            for c in 0..2 {
                a[(2 * i + r, c)] = am[(r, c)];
                b[(2 * i + r, c)] = bm[(r, c)];
            }
        }
    }
    (a, b)
}

fn to_mat2(m: &DMatrix<C64>) -> Mat2 {
    Mat2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)])
}

fn polar_unitary(u: &DMatrix<C64>) -> Mat2 {
    let svd = u.clone().svd(true, true);
    let p = svd.u.unwrap();
    let qh = svd.v_t.unwrap();
    to_mat2(&(p * qh))
}

/// Least-squares recovery of a constant right factor U from stacked rows
/// A U = B. Returns (solved U, relative residual, unitarity defect).
fn recover_unitary(rows: &[(Mat2, Mat2)]) -> (DMatrix<C64>, f64, f64) {
    let (a, b) = stack_rows(rows);
    let svd = a.clone().svd(true, true);
    let u = svd
        .solve(&b, 1e-14)
        .unwrap_or_else(|_| DMatrix::zeros(2, 2));
    let residual = frobenius(&(&a * &u - &b)) / frobenius(&b).max(1.0);
    let unit_defect = frobenius(&(u.adjoint() * &u - DMatrix::identity(2, 2)));
    (u, residual, unit_defect)
}

/// Symbol-level normality test: Phi* Phi = Phi Phi* coefficientwise and
/// Phi_+ = Phi_- U for a constant unitary U, applicable when det(Phi_+) is
/// not identically zero. The verdict uses the unprojected least-squares
/// residual; the reported U is the polar projection.
pub fn ghr_normal_check(phi: &MatrixSymbol, tol: f64) -> Result<NormalityReport> {
    if phi.det_plus().is_zero() {
        return Ok(NormalityReport::not_applicable(tol, "det(Phi_+) is identically zero"));
    }
    let mut rep = NormalityReport::new(tol);
    let adj = phi.adjoint_fn();
    let comm = adj.mul(phi).sub(&phi.mul(&adj));
    let comm_scale = (phi.max_abs() * phi.max_abs()).max(1.0);
    rep.push_residual("Phi*Phi - PhiPhi*", comm.max_abs() / comm_scale);

    let plus = phi.analytic_part();
    let minus = phi.minus_part();
    let ns: std::collections::BTreeSet<i64> = plus.support().chain(minus.support()).collect();
    let rows: Vec<(Mat2, Mat2)> = ns
        .into_iter()
        .map(|n| (minus.coeff(n), plus.coeff(n)))
        .collect();
    let (u, residual, unit_defect) = recover_unitary(&rows);
    rep.push_residual("Phi_+ - Phi_- U", residual);
    rep.push_residual("U unitarity", unit_defect);
    rep.unitary_u = Some(polar_unitary(&u));
    Ok(rep.finish())
}

fn require_real_symmetric(rho: &ScalarSymbol, name: &str) -> Result<()> {
    if !rho.is_real_valued(1e-12) {
        return Err(Error::InvalidArgument(format!("{name} must be real-valued")));
    }
    let symmetric = rho
        .support()
        .all(|n| (rho.coeff(-n) - rho.coeff(n)).norm() <= 1e-12 * rho.max_abs().max(1.0));
    if !symmetric {
        return Err(Error::InvalidArgument(format!(
            "{name} must have symmetric coefficients (rho-hat(-n) = rho-hat(n))"
        )));
    }
    Ok(())
}

/// Commuting build for the first normality proposition: phi1 = alpha1 +
/// beta1 * rho1, phi2 = phi3 = a * phi1 + b, phi4 = phi1 - 2 phi2. The affine
/// dependence forces T_phi1 and T_phi2 to commute, so the result is normal
/// and complex symmetric at lambda = 1.
pub fn build_nor1_commuting(
    rho1: &ScalarSymbol,
    alpha1: C64,
    beta1: C64,
    a: C64,
    b: C64,
) -> Result<MatrixSymbol> {
    require_real_symmetric(rho1, "rho1")?;
    let phi1 = rho1.scale(beta1).add(&ScalarSymbol::constant(alpha1));
    let phi2 = phi1.scale(a).add(&ScalarSymbol::constant(b));
    let phi4 = phi1.sub(&phi2.scale(C64::new(2.0, 0.0)));
    Ok(MatrixSymbol::from_entries(&phi1, &phi2, &phi2, &phi4))
}

/// Noncommuting build for the first normality proposition: phi1 = alpha1 +
/// rho1 and phi2 = phi3 = alpha2 + i*rho2 with independent rho's, so that
/// D = T_phi1 T_phi2* - T_phi2* T_phi1 satisfies D* = D != -D; phi4 =
/// phi1 - 2 phi2. Complex symmetric at lambda = 1, not normal.
pub fn build_nor1_noncommuting(
    rho1: &ScalarSymbol,
    rho2: &ScalarSymbol,
    alpha1: C64,
    alpha2: C64,
) -> Result<MatrixSymbol> {
    require_real_symmetric(rho1, "rho1")?;
    require_real_symmetric(rho2, "rho2")?;
    let phi1 = rho1.add(&ScalarSymbol::constant(alpha1));
    let phi2 = rho2.scale(C64::new(0.0, 1.0)).add(&ScalarSymbol::constant(alpha2));
    let phi4 = phi1.sub(&phi2.scale(C64::new(2.0, 0.0)));
    Ok(MatrixSymbol::from_entries(&phi1, &phi2, &phi2, &phi4))
}

/// Commuting build for the second normality proposition: phi1 = alpha1 +
/// beta1 * rho, phi2 = i*(s + t*rho) (so Re(phi2) = 0 and the pair commutes),
/// phi3 = conj(phi2) pointwise, phi4 = phi1.
pub fn build_nor2_commuting(
    rho: &ScalarSymbol,
    alpha1: C64,
    beta1: C64,
    s: f64,
    t: f64,
) -> Result<MatrixSymbol> {
    require_real_symmetric(rho, "rho")?;
    let phi1 = rho.scale(beta1).add(&ScalarSymbol::constant(alpha1));
    let phi2 = rho
        .scale(C64::new(0.0, t))
        .add(&ScalarSymbol::constant(C64::new(0.0, s)));
    let phi3 = phi2.conj_fn();
    Ok(MatrixSymbol::from_entries(&phi1, &phi2, &phi3, &phi1))
}

/// Noncommuting build for the second normality proposition: phi1 = alpha1 +
/// (1+i)*rho1, phi2 = i*rho2 with independent rho's, phi3 = conj(phi2),
/// phi4 = phi1. The real part of the rho1 coefficient makes D* != -D and the
/// imaginary part breaks the t2 = s2 word identity, so the operator is not
/// normal.
pub fn build_nor2_noncommuting(
    rho1: &ScalarSymbol,
    rho2: &ScalarSymbol,
    alpha1: C64,
) -> Result<MatrixSymbol> {
    require_real_symmetric(rho1, "rho1")?;
    require_real_symmetric(rho2, "rho2")?;
    let phi1 = rho1.scale(C64::new(1.0, 1.0)).add(&ScalarSymbol::constant(alpha1));
    let phi2 = rho2.scale(C64::new(0.0, 1.0));
    let phi3 = phi2.conj_fn();
    Ok(MatrixSymbol::from_entries(&phi1, &phi2, &phi3, &phi1))
}

/// Pointwise test for the final normality criterion: |phi2| = |phi3| and
/// (phi1 - phi4) conj(phi3) = (conj(phi1) - conj(phi4)) phi2 on a grid of
/// unit-circle points, plus recovery of the constant unitary U with
/// Phi-hat(n) = U conj(Phi-hat(n)). Hypotheses: every phi_j is
/// lambda=1-symmetric and phi1 = phi2 + phi3 + phi4.
pub fn final_prop_check(phi: &MatrixSymbol, tol: f64) -> Result<NormalityReport> {
    let [p1, p2, p3, p4] = phi.entries();
    for (name, p) in [("phi1", &p1), ("phi2", &p2), ("phi3", &p3), ("phi4", &p4)] {
        if !crate::symmetry::cs_coeff_scalar(p, C64::new(1.0, 0.0), tol)?.verdict {
            return Ok(NormalityReport::not_applicable(
                tol,
                format!("{name} is not symmetric at lambda = 1"),
            ));
        }
    }
    if !symbols_close(&p1, &p2.add(&p3).add(&p4), tol) {
        return Ok(NormalityReport::not_applicable(
            tol,
            "phi1 = phi2 + phi3 + phi4 fails",
        ));
    }
    let scale = phi.max_abs().max(1.0);
    let grid = 64;
    let mut mod_worst = 0.0_f64;
    let mut cross_worst = 0.0_f64;
    for k in 0..grid {
        let z = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / grid as f64);
        let (e1, e2, e3, e4) = (
            p1.eval(z)?,
            p2.eval(z)?,
            p3.eval(z)?,
            p4.eval(z)?,
        );
        mod_worst = mod_worst.max((e2.norm() - e3.norm()).abs() / scale);
        let cross = (e1 - e4) * e3.conj() - (e1.conj() - e4.conj()) * e2;
        cross_worst = cross_worst.max(cross.norm() / (scale * scale).max(1.0));
    }
    let mut rep = NormalityReport::new(tol);
    rep.push_residual("|phi2| - |phi3|", mod_worst);
    rep.push_residual("cross relation", cross_worst);

    let plus = phi.analytic_part();
    let rows: Vec<(Mat2, Mat2)> = plus
        .support()
        .map(|n| {
            // U conj(Phi-hat(n)) = Phi-hat(n): transpose to stack as right factor
            let a = plus.coeff(n).map(|c| c.conj()).transpose();
            let b = plus.coeff(n).transpose();
            (a, b)
        })
        .collect();
    if rows.is_empty() {
        rep.push_residual("U recovery", 0.0);
    } else {
        let (x, residual, unit_defect) = recover_unitary(&rows);
        rep.push_residual("U recovery", residual);
        rep.push_residual("U unitarity", unit_defect);
        rep.unitary_u = Some(polar_unitary(&x.transpose()));
    }
    Ok(rep.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::cs_coeff_block;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn one() -> C64 {
        c(1.0, 0.0)
    }

    fn real_cosine() -> ScalarSymbol {
        ScalarSymbol::new([(1, one()), (-1, one())])
    }

    fn h_mat() -> Mat2 {
        Mat2::new(one(), one(), one(), -one())
    }

    fn h_times(s: &ScalarSymbol) -> MatrixSymbol {
        MatrixSymbol::new(s.iter().map(|(n, v)| (n, h_mat() * v)))
    }

    #[test]
    fn brown_halmos_real_harmonic() {
        let rep = brown_halmos_scalar(&real_cosine(), 1e-10);
        assert!(rep.verdict.is_pass());
        assert!((rep.phase_u.unwrap() - one()).norm() < 1e-12);
    }

    #[test]
    fn brown_halmos_analytic_fails() {
        let rep = brown_halmos_scalar(&ScalarSymbol::monomial(1, one()), 1e-10);
        assert_eq!(rep.verdict, Verdict::Fail);
    }

    #[test]
    fn brown_halmos_constructed_alpha_beta_rho() {
        // phi = (1+2i) + (3+i)(z + zbar + z^2 + zbar^2)
        let rho = ScalarSymbol::new([(1, one()), (-1, one()), (2, one()), (-2, one())]);
        let phi = rho.scale(c(3.0, 1.0)).add(&ScalarSymbol::constant(c(1.0, 2.0)));
        let rep = brown_halmos_scalar(&phi, 1e-10);
        assert!(rep.verdict.is_pass());
        let expect = c(3.0, 1.0) / c(3.0, -1.0);
        assert!((rep.phase_u.unwrap() - expect).norm() < 1e-12);
        // cross-check against the padded commutator corner
        let (n, pad) = default_truncation(phi.band_degree());
        assert!(self_commutator_corner(&phi, n, pad).unwrap() <= 1e-12);
    }

    #[test]
    fn kkl_skew_adjoint_block_is_normal() {
        let s = ScalarSymbol::new([(1, one()), (-1, -one())]);
        let phi = h_times(&s); // H (z - zbar): T_Phi is skew-adjoint
        let (n, pad) = default_truncation(phi.band_degree());
        let rep = kkl_normal_check(&phi, n, pad, 1e-10).unwrap();
        assert!(rep.verdict.is_pass());
        assert!(rep.max_residual() <= 1e-12);
    }

    #[test]
    fn kkl_diag_shift_is_not_normal() {
        let z = ScalarSymbol::monomial(1, one());
        let zero = ScalarSymbol::zero();
        let phi = MatrixSymbol::from_entries(&z, &zero, &zero, &z);
        let (n, pad) = default_truncation(phi.band_degree());
        let rep = kkl_normal_check(&phi, n, pad, 1e-10).unwrap();
        assert_eq!(rep.verdict, Verdict::Fail);
        // e0 defect of S*S - SS* shows up in t1 - s1
        assert!(rep.residuals[0].value > 1e-2);
    }

    #[test]
    fn kkl_zero_is_normal() {
        let rep = kkl_normal_check(&MatrixSymbol::zero(), 4, 2, 1e-10).unwrap();
        assert!(rep.verdict.is_pass());
    }

    #[test]
    fn kkl_rejects_undersized_truncation() {
        let phi = h_times(&real_cosine());
        assert!(kkl_normal_check(&phi, 2, 1, 1e-10).is_err());
    }

    #[test]
    fn case_iv_commuting_pair() {
        let phi_s = real_cosine();
        let psi_s = phi_s.add(&ScalarSymbol::constant(c(2.0, 0.0)));
        let m = MatrixSymbol::from_entries(&phi_s, &psi_s, &psi_s, &phi_s);
        let (n, pad) = default_truncation(m.band_degree());
        let rep = normal1_case(&m, NormalCase::IV, n, pad, 1e-10).unwrap();
        assert!(rep.verdict.is_pass());
        let kkl = kkl_normal_check(&m, n, pad, 1e-10).unwrap();
        assert_eq!(rep.verdict, kkl.verdict);
    }

    #[test]
    fn case_ii_shift_pair_matches_kkl() {
        // Phi = [[0, z], [zbar, 0]]: T_Phi is self-adjoint, hence normal,
        // and the case-(ii) conditions hold (B*B = CC* = I, BB* = C*C = SS*).
        let z = ScalarSymbol::monomial(1, one());
        let zb = ScalarSymbol::monomial(-1, one());
        let zero = ScalarSymbol::zero();
        let m = MatrixSymbol::from_entries(&zero, &z, &zb, &zero);
        let (n, pad) = default_truncation(m.band_degree());
        let rep = normal1_case(&m, NormalCase::II, n, pad, 1e-10).unwrap();
        assert!(rep.verdict.is_pass());
        assert_eq!(
            kkl_normal_check(&m, n, pad, 1e-10).unwrap().verdict,
            Verdict::Pass
        );

        // scaling C breaks B*B = CC* and normality
        let m2 = MatrixSymbol::from_entries(&zero, &z, &zb.scale(c(2.0, 0.0)), &zero);
        let rep2 = normal1_case(&m2, NormalCase::II, n, pad, 1e-10).unwrap();
        assert_eq!(rep2.verdict, Verdict::Fail);
        assert_eq!(
            kkl_normal_check(&m2, n, pad, 1e-10).unwrap().verdict,
            Verdict::Fail
        );
    }

    #[test]
    fn case_i_all_equal_entries() {
        let p = real_cosine();
        let m = MatrixSymbol::from_entries(&p, &p, &p, &p);
        let (n, pad) = default_truncation(m.band_degree());
        let rep = normal1_case(&m, NormalCase::I, n, pad, 1e-10).unwrap();
        assert!(rep.verdict.is_pass());
        assert_eq!(
            kkl_normal_check(&m, n, pad, 1e-10).unwrap().verdict,
            Verdict::Pass
        );
    }

    #[test]
    fn case_reports_not_applicable() {
        let z = ScalarSymbol::monomial(1, one());
        let zero = ScalarSymbol::zero();
        // phi3 != phi2
        let m = MatrixSymbol::from_entries(&zero, &z, &zero, &zero);
        let (n, pad) = default_truncation(m.band_degree());
        let rep = normal1_case(&m, NormalCase::I, n, pad, 1e-10).unwrap();
        assert_eq!(rep.verdict, Verdict::NotApplicable);
    }

    #[test]
    fn ghr_skew_adjoint_block() {
        let s = ScalarSymbol::new([(1, one()), (-1, -one())]);
        let phi = h_times(&s);
        let rep = ghr_normal_check(&phi, 1e-10).unwrap();
        assert!(rep.verdict.is_pass());
        let u = rep.unitary_u.unwrap();
        assert!((u + Mat2::identity()).map(|v| v.norm()).max() < 1e-10, "U should be -I");
    }

    #[test]
    fn ghr_hermitian_symbol() {
        // Phi = Phi_+ + Phi_0 + Phi_+^H pointwise Hermitian: U = I
        let a = Mat2::new(c(1.0, 2.0), c(0.5, -1.0), c(2.0, 0.0), c(0.0, 1.0));
        let phi = MatrixSymbol::new([(1, a), (-1, a.adjoint()), (0, Mat2::identity())]);
        let rep = ghr_normal_check(&phi, 1e-10).unwrap();
        assert!(rep.verdict.is_pass());
        let u = rep.unitary_u.unwrap();
        assert!((u - Mat2::identity()).map(|v| v.norm()).max() < 1e-10);
    }

    #[test]
    fn ghr_analytic_nonconstant_fails() {
        let a = Mat2::new(one(), c(0.0, 1.0), c(2.0, 0.0), one());
        let phi = MatrixSymbol::new([(1, a)]);
        let rep = ghr_normal_check(&phi, 1e-10).unwrap();
        assert_eq!(rep.verdict, Verdict::Fail);
    }

    #[test]
    fn ghr_not_applicable_when_det_plus_vanishes() {
        let z = ScalarSymbol::monomial(1, one());
        // analytic part [[z, z], [z, z]] has det = 0
        let phi = MatrixSymbol::from_entries(&z, &z, &z, &z);
        let rep = ghr_normal_check(&phi, 1e-10).unwrap();
        assert_eq!(rep.verdict, Verdict::NotApplicable);
    }

    #[test]
    fn nor1_commuting_build_is_normal_cs() {
        let phi = build_nor1_commuting(&real_cosine(), c(0.0, 0.0), one(), c(0.5, 0.0), c(0.0, 0.0))
            .unwrap();
        let (n, pad) = default_truncation(phi.band_degree());
        assert!(kkl_normal_check(&phi, n, pad, 1e-10).unwrap().verdict.is_pass());
        assert!(cs_coeff_block(&phi, one(), 1e-10).unwrap().verdict);
        // Fuglede-Putnam consequence for the commuting pair
        let [p1, p2, _, _] = phi.entries();
        assert!(adjoint_commutator_corner(&p1, &p2, n, pad).unwrap() <= 1e-10);
    }

    #[test]
    fn nor1_noncommuting_build_is_cs_not_normal() {
        let rho2 = ScalarSymbol::new([(2, one()), (-2, one())]);
        let phi =
            build_nor1_noncommuting(&real_cosine(), &rho2, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        let (n, pad) = default_truncation(phi.band_degree());
        let [p1, p2, _, _] = phi.entries();
        assert!(d_skew_defect(&p1, &p2, n, pad).unwrap() > 1e-6);
        assert_eq!(kkl_normal_check(&phi, n, pad, 1e-10).unwrap().verdict, Verdict::Fail);
        assert!(cs_coeff_block(&phi, one(), 1e-10).unwrap().verdict);
    }

    #[test]
    fn nor1_degenerate_block_diagonal() {
        let phi = build_nor1_commuting(&real_cosine(), c(1.0, 0.0), c(0.0, 2.0), c(0.0, 0.0), c(0.0, 0.0))
            .unwrap();
        // a = b = 0 gives phi2 = 0: block diagonal with normal entries
        assert!(phi.entry(2).is_zero());
        let (n, pad) = default_truncation(phi.band_degree());
        assert!(kkl_normal_check(&phi, n, pad, 1e-10).unwrap().verdict.is_pass());
    }

    #[test]
    fn nor2_builds() {
        let phi = build_nor2_commuting(&real_cosine(), c(1.0, 1.0), c(2.0, 0.0), 0.5, 1.5).unwrap();
        let (n, pad) = default_truncation(phi.band_degree());
        assert!(kkl_normal_check(&phi, n, pad, 1e-10).unwrap().verdict.is_pass());
        assert!(cs_coeff_block(&phi, one(), 1e-10).unwrap().verdict);

        let rho2 = ScalarSymbol::new([(2, one()), (-2, one())]);
        let phi = build_nor2_noncommuting(&real_cosine(), &rho2, c(0.0, 0.0)).unwrap();
        let (n, pad) = default_truncation(phi.band_degree());
        let [p1, p2, _, _] = phi.entries();
        assert!(d_skew_defect(&p1, &p2, n, pad).unwrap() > 1e-6);
        assert_eq!(kkl_normal_check(&phi, n, pad, 1e-10).unwrap().verdict, Verdict::Fail);
        assert!(cs_coeff_block(&phi, one(), 1e-10).unwrap().verdict);
    }

    #[test]
    fn builders_reject_non_real_rho() {
        let bad = ScalarSymbol::monomial(1, c(0.0, 1.0));
        assert!(build_nor1_commuting(&bad, one(), one(), one(), one()).is_err());
        assert!(build_nor2_noncommuting(&bad, &real_cosine(), one()).is_err());
    }

    #[test]
    fn final_prop_symmetric_h_block() {
        let phi = h_times(&real_cosine());
        // entries: phi1 = phi2 = phi3 = cos-form, phi4 = -cos-form; the sum
        // rule phi1 = phi2 + phi3 + phi4 holds
        let rep = final_prop_check(&phi, 1e-10).unwrap();
        assert!(rep.verdict.is_pass());
        let u = rep.unitary_u.unwrap();
        assert!((u - Mat2::identity()).map(|v| v.norm()).max() < 1e-10);
        let (n, pad) = default_truncation(phi.band_degree());
        assert!(kkl_normal_check(&phi, n, pad, 1e-10).unwrap().verdict.is_pass());
        assert!(cs_coeff_block(&phi, one(), 1e-10).unwrap().verdict);
    }

    #[test]
    fn final_prop_modulus_mismatch() {
        let p2 = real_cosine();
        let p3 = real_cosine().scale(c(2.0, 0.0));
        let p4 = real_cosine();
        let p1 = p2.add(&p3).add(&p4);
        let phi = MatrixSymbol::from_entries(&p1, &p2, &p3, &p4);
        let rep = final_prop_check(&phi, 1e-10).unwrap();
        assert_eq!(rep.verdict, Verdict::Fail);
        assert!(rep.residuals[0].value > 1e-3);
    }

    #[test]
    fn final_prop_zero_symbol() {
        let rep = final_prop_check(&MatrixSymbol::zero(), 1e-10).unwrap();
        assert!(rep.verdict.is_pass());
        assert_eq!(rep.max_residual(), 0.0);
    }
}
