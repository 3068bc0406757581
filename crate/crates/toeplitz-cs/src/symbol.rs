//! Laurent-polynomial symbols on the unit circle: scalar and 2x2-matrix-valued
//! trigonometric polynomials with finitely supported Fourier coefficients.
//!
//! All values are immutable after construction and all operations are pure.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type Mat2 = Matrix2<C64>;

/// Relative magnitude below which stored coefficients are dropped.
pub const DROP_TOL: f64 = 1e-14;
/// Tolerance for the |lambda| = 1 and |z| = 1 preconditions.
pub const UNIMODULAR_TOL: f64 = 1e-12;

pub(crate) fn require_unimodular(v: C64, what: &str) -> Result<()> {
    if (v.norm() - 1.0).abs() > UNIMODULAR_TOL {
        return Err(Error::InvalidArgument(format!(
            "{what} must be unimodular, got modulus {}",
            v.norm()
        )));
    }
    Ok(())
}

fn mat2_max_abs(m: &Mat2) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Scalar symbol: finitely supported map n -> Fourier coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSymbol {
    coeffs: BTreeMap<i64, C64>,
}

impl ScalarSymbol {
    /// Canonical construction: duplicates are summed, entries below the drop
    /// tolerance (relative to the largest magnitude) are removed.
    pub fn new<I: IntoIterator<Item = (i64, C64)>>(entries: I) -> Self {
        let mut coeffs: BTreeMap<i64, C64> = BTreeMap::new();
        for (n, v) in entries {
            *coeffs.entry(n).or_insert(C64::new(0.0, 0.0)) += v;
        }
        let max = coeffs.values().map(|c| c.norm()).fold(0.0, f64::max);
        coeffs.retain(|_, v| v.norm() > DROP_TOL * max && v.norm() > 0.0);
        ScalarSymbol { coeffs }
    }

    pub fn zero() -> Self {
        ScalarSymbol { coeffs: BTreeMap::new() }
    }

    pub fn constant(c: C64) -> Self {
        Self::new([(0, c)])
    }

    pub fn monomial(n: i64, c: C64) -> Self {
        Self::new([(n, c)])
    }

    pub fn coeff(&self, n: i64) -> C64 {
        self.coeffs.get(&n).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        self.coeffs.iter().map(|(&n, &v)| (n, v))
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// max |n| over the support; 0 for constants and for the zero symbol
    /// (check `is_zero` to distinguish the latter).
    pub fn band_degree(&self) -> i64 {
        self.coeffs.keys().map(|n| n.abs()).max().unwrap_or(0)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Support contained in n >= 1.
    pub fn is_analytic(&self) -> bool {
        self.coeffs.keys().all(|&n| n >= 1)
    }

    /// phi-hat(-n) = conj(phi-hat(n)) for all n, i.e. real-valued on |z| = 1.
    pub fn is_real_valued(&self, tol: f64) -> bool {
        let scale = self.max_abs().max(1.0);
        self.coeffs
            .keys()
            .all(|&n| (self.coeff(-n) - self.coeff(n).conj()).norm() <= tol * scale)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.iter().chain(other.iter()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.iter().chain(other.iter().map(|(n, v)| (n, -v))))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.iter().map(|(n, v)| (n, -v)))
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::new(self.iter().map(|(n, v)| (n, c * v)))
    }

    /// Laurent convolution product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut acc: Vec<(i64, C64)> = Vec::new();
        for (n, a) in self.iter() {
            for (m, b) in other.iter() {
                acc.push((n + m, a * b));
            }
        }
        Self::new(acc)
    }

    /// psi(z) = phi(lambda * conj(z)) on |z| = 1, i.e.
    /// psi-hat(n) = conj(lambda)^n * phi-hat(-n).
    pub fn involute(&self, lambda: C64) -> Result<Self> {
        require_unimodular(lambda, "lambda")?;
        let lc = lambda.conj();
        Ok(Self::new(self.iter().map(|(n, v)| (-n, lc.powi(-n as i32) * v))))
    }

    /// Pointwise complex conjugate on |z| = 1: coefficient n -> conj(phi-hat(-n)).
    pub fn conj_fn(&self) -> Self {
        Self::new(self.iter().map(|(n, v)| (-n, v.conj())))
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        require_unimodular(z, "evaluation point z")?;
        Ok(self
            .iter()
            .map(|(n, v)| v * z.powi(n as i32))
            .sum())
    }

    /// Split into the shifted analytic tail, the constant term, and the
    /// shifted coanalytic tail (see [`ScalarDecomposition`]).
    pub fn decompose(&self) -> ScalarDecomposition {
        let plus = Self::new(
            self.iter().filter(|&(n, _)| n >= 1).map(|(n, v)| (n - 1, v)),
        );
        let minus = Self::new(
            self.iter()
                .filter(|&(n, _)| n <= -1)
                .map(|(n, v)| (-n - 1, v.conj())),
        );
        ScalarDecomposition { plus, zero: self.coeff(0), minus }
    }
}

/// Decomposition phi = phi_+ + phi_0 + conj(phi_-) in shifted coordinates:
/// `plus` holds phi-hat(n+1) at slot n and `minus` holds conj(phi-hat(-n-1))
/// at slot n, matching phi_+ = S* T_phi e_0 and phi_- = S* T_phi* e_0.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarDecomposition {
    pub plus: ScalarSymbol,
    pub zero: C64,
    pub minus: ScalarSymbol,
}

impl ScalarDecomposition {
    pub fn reassemble(&self) -> ScalarSymbol {
        let mut entries: Vec<(i64, C64)> = vec![(0, self.zero)];
        entries.extend(self.plus.iter().map(|(n, v)| (n + 1, v)));
        entries.extend(self.minus.iter().map(|(n, v)| (-n - 1, v.conj())));
        ScalarSymbol::new(entries)
    }
}

/// 2x2-matrix-valued symbol: finitely supported map n -> 2x2 coefficient
/// matrix. Entry layout is [[phi1, phi2], [phi3, phi4]].
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSymbol {
    coeffs: BTreeMap<i64, Mat2>,
}

impl MatrixSymbol {
    pub fn new<I: IntoIterator<Item = (i64, Mat2)>>(entries: I) -> Self {
        let mut coeffs: BTreeMap<i64, Mat2> = BTreeMap::new();
        for (n, v) in entries {
            *coeffs.entry(n).or_insert_with(Mat2::zeros) += v;
        }
        let max = coeffs.values().map(mat2_max_abs).fold(0.0, f64::max);
        coeffs.retain(|_, v| {
            v.iter_mut()
                .for_each(|c| if c.norm() <= DROP_TOL * max { *c = C64::new(0.0, 0.0) });
            mat2_max_abs(v) > 0.0
        });
        MatrixSymbol { coeffs }
    }

    pub fn zero() -> Self {
        MatrixSymbol { coeffs: BTreeMap::new() }
    }

    pub fn constant(m: Mat2) -> Self {
        Self::new([(0, m)])
    }

    /// Build from the four scalar entries in layout [[phi1, phi2], [phi3, phi4]].
    pub fn from_entries(
        phi1: &ScalarSymbol,
        phi2: &ScalarSymbol,
        phi3: &ScalarSymbol,
        phi4: &ScalarSymbol,
    ) -> Self {
        let mut support: BTreeSet<i64> = BTreeSet::new();
        for p in [phi1, phi2, phi3, phi4] {
            support.extend(p.support());
        }
        Self::new(support.into_iter().map(|n| {
            (
                n,
                Mat2::new(phi1.coeff(n), phi2.coeff(n), phi3.coeff(n), phi4.coeff(n)),
            )
        }))
    }

    /// Scalar entry phi_j, j in 1..=4 (row-major).
    pub fn entry(&self, j: usize) -> ScalarSymbol {
        assert!((1..=4).contains(&j), "entry index must be 1..=4");
        let (r, c) = ((j - 1) / 2, (j - 1) % 2);
        ScalarSymbol::new(self.iter().map(|(n, m)| (n, m[(r, c)])))
    }

    pub fn entries(&self) -> [ScalarSymbol; 4] {
        [self.entry(1), self.entry(2), self.entry(3), self.entry(4)]
    }

    pub fn coeff(&self, n: i64) -> Mat2 {
        self.coeffs.get(&n).copied().unwrap_or_else(Mat2::zeros)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Mat2)> + '_ {
        self.coeffs.iter().map(|(&n, &v)| (n, v))
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn band_degree(&self) -> i64 {
        self.coeffs.keys().map(|n| n.abs()).max().unwrap_or(0)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(mat2_max_abs).fold(0.0, f64::max)
    }

    pub fn is_analytic(&self) -> bool {
        self.coeffs.keys().all(|&n| n >= 1)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.iter().chain(other.iter()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.iter().chain(other.iter().map(|(n, v)| (n, -v))))
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::new(self.iter().map(|(n, v)| (n, v * c)))
    }

    /// Matrix-valued Laurent convolution (order matters).
    pub fn mul(&self, other: &Self) -> Self {
        let mut acc: Vec<(i64, Mat2)> = Vec::new();
        for (n, a) in self.iter() {
            for (m, b) in other.iter() {
                acc.push((n + m, a * b));
            }
        }
        Self::new(acc)
    }

    /// Psi(z) = Phi(lambda * conj(z)) entrywise.
    pub fn involute(&self, lambda: C64) -> Result<Self> {
        require_unimodular(lambda, "lambda")?;
        let lc = lambda.conj();
        Ok(Self::new(self.iter().map(|(n, v)| (-n, v * lc.powi(-n as i32)))))
    }

    /// Pointwise conjugate transpose on |z| = 1: coefficient n -> Phi-hat(-n)^H.
    pub fn adjoint_fn(&self) -> Self {
        Self::new(self.iter().map(|(n, v)| (-n, v.adjoint())))
    }

    pub fn eval(&self, z: C64) -> Result<Mat2> {
        require_unimodular(z, "evaluation point z")?;
        let mut acc = Mat2::zeros();
        for (n, v) in self.iter() {
            acc += v * z.powi(n as i32);
        }
        Ok(acc)
    }

    pub fn decompose(&self) -> MatrixDecomposition {
        let plus = Self::new(
            self.iter().filter(|&(n, _)| n >= 1).map(|(n, v)| (n - 1, v)),
        );
        let minus = Self::new(
            self.iter()
                .filter(|&(n, _)| n <= -1)
                .map(|(n, v)| (-n - 1, v.map(|c| c.conj()))),
        );
        MatrixDecomposition { plus, zero: self.coeff(0), minus }
    }

    /// Analytic part Phi_+ with its original indices (support n >= 1).
    pub fn analytic_part(&self) -> Self {
        Self::new(self.iter().filter(|&(n, _)| n >= 1))
    }

    /// Phi_-(z) = sum_{n>=1} Phi-hat(-n)^H z^n, so that the pointwise
    /// conjugate transpose of Phi_- restores the co-analytic part.
    pub fn minus_part(&self) -> Self {
        Self::new(
            self.iter()
                .filter(|&(n, _)| n <= -1)
                .map(|(n, v)| (-n, v.adjoint())),
        )
    }

    /// det of the analytic part as a scalar Laurent polynomial:
    /// phi1_+ * phi4_+ - phi2_+ * phi3_+.
    pub fn det_plus(&self) -> ScalarSymbol {
        let p = self.analytic_part();
        let [p1, p2, p3, p4] = p.entries();
        p1.mul(&p4).sub(&p2.mul(&p3))
    }
}

/// Matrix analogue of [`ScalarDecomposition`], in the same shifted
/// coordinates; `minus` holds the entrywise conjugate of Phi-hat(-n-1).
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixDecomposition {
    pub plus: MatrixSymbol,
    pub zero: Mat2,
    pub minus: MatrixSymbol,
}

impl MatrixDecomposition {
    pub fn reassemble(&self) -> MatrixSymbol {
        let mut entries: Vec<(i64, Mat2)> = vec![(0, self.zero)];
        entries.extend(self.plus.iter().map(|(n, v)| (n + 1, v)));
        entries.extend(
            self.minus
                .iter()
                .map(|(n, v)| (-n - 1, v.map(|c| c.conj()))),
        );
        MatrixSymbol::new(entries)
    }
}

/// The worked example's complex symmetric block symbol:
/// Phi-hat(1) = [[1,1],[1,-1]], Phi-hat(-1) = -Phi-hat(1).
pub fn example_phi() -> MatrixSymbol {
    let h = Mat2::new(
        C64::new(1.0, 0.0),
        C64::new(1.0, 0.0),
        C64::new(1.0, 0.0),
        C64::new(-1.0, 0.0),
    );
    MatrixSymbol::new([(1, h), (-1, -h)])
}

/// The worked example's non-complex-symmetric block symbol:
/// Phi-hat(-1) = [[1,-1],[-1,1]], Phi-hat(1) = [[1,1],[1/2,3/2]].
pub fn example_psi() -> MatrixSymbol {
    let m_neg = Mat2::new(
        C64::new(1.0, 0.0),
        C64::new(-1.0, 0.0),
        C64::new(-1.0, 0.0),
        C64::new(1.0, 0.0),
    );
    let m_pos = Mat2::new(
        C64::new(1.0, 0.0),
        C64::new(1.0, 0.0),
        C64::new(0.5, 0.0),
        C64::new(1.5, 0.0),
    );
    MatrixSymbol::new([(-1, m_neg), (1, m_pos)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn one() -> C64 {
        c(1.0, 0.0)
    }

    #[test]
    fn make_scalar_empty_is_zero() {
        let s = ScalarSymbol::new([]);
        assert!(s.is_zero());
        assert_eq!(s.band_degree(), 0);
    }

    #[test]
    fn make_scalar_duplicates_summed() {
        let s = ScalarSymbol::new([(1, one()), (1, c(2.0, 0.0))]);
        assert_eq!(s.coeff(1), c(3.0, 0.0));
    }

    #[test]
    fn make_scalar_z_plus_zbar() {
        let s = ScalarSymbol::new([(1, one()), (-1, one())]);
        assert_eq!(s.coeff(1), one());
        assert_eq!(s.coeff(-1), one());
        assert_eq!(s.band_degree(), 1);
    }

    #[test]
    fn involute_monomial_minus_one() {
        let s = ScalarSymbol::monomial(1, one());
        let t = s.involute(c(-1.0, 0.0)).unwrap();
        assert_eq!(t.coeff(-1), c(-1.0, 0.0));
        assert!(t.coeff(1).norm() == 0.0);
    }

    #[test]
    fn involute_fixed_point() {
        let s = ScalarSymbol::new([(1, one()), (-1, one())]);
        let t = s.involute(one()).unwrap();
        assert_eq!(t, s);
    }

    #[test]
    fn involute_z_squared_at_i() {
        let s = ScalarSymbol::monomial(2, one());
        let t = s.involute(c(0.0, 1.0)).unwrap();
        assert!((t.coeff(-2) - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn involute_rejects_non_unimodular() {
        let s = ScalarSymbol::monomial(1, one());
        assert!(s.involute(c(2.0, 0.0)).is_err());
    }

    #[test]
    fn conj_fn_of_z() {
        let s = ScalarSymbol::monomial(1, one());
        let t = s.conj_fn();
        assert_eq!(t.coeff(-1), one());
        assert!(t.coeff(1).norm() == 0.0);
    }

    #[test]
    fn adjoint_of_constant_nilpotent() {
        let m = Mat2::new(c(0.0, 0.0), one(), c(0.0, 0.0), c(0.0, 0.0));
        let s = MatrixSymbol::constant(m);
        let a = s.adjoint_fn();
        assert_eq!(a.coeff(0), m.adjoint());
    }

    #[test]
    fn adjoint_is_involution_on_example() {
        let phi = example_phi();
        assert_eq!(phi.adjoint_fn().adjoint_fn(), phi);
    }

    #[test]
    fn mul_z_times_zbar() {
        let z = ScalarSymbol::monomial(1, one());
        let zb = ScalarSymbol::monomial(-1, one());
        let p = z.mul(&zb);
        assert_eq!(p, ScalarSymbol::constant(one()));
    }

    #[test]
    fn square_of_z_plus_zbar() {
        let s = ScalarSymbol::new([(1, one()), (-1, one())]);
        let p = s.mul(&s);
        assert_eq!(p.coeff(2), one());
        assert_eq!(p.coeff(0), c(2.0, 0.0));
        assert_eq!(p.coeff(-2), one());
        assert!(p.coeff(1).norm() == 0.0);
    }

    #[test]
    fn example_like_symbol_commutes_with_its_adjoint() {
        // Phi = H (z - zbar) with Hermitian H: Phi* Phi = Phi Phi*.
        let h = Mat2::new(one(), one(), one(), -one());
        let phi = MatrixSymbol::new([(1, h), (-1, -h)]);
        let lhs = phi.adjoint_fn().mul(&phi);
        let rhs = phi.mul(&phi.adjoint_fn());
        assert_eq!(lhs, rhs);
        // both sides equal -(z - zbar)^2 * 2I = (2 - z^2 - zbar^2) * 2I
        assert_eq!(lhs.coeff(0), Mat2::identity() * c(4.0, 0.0));
        assert_eq!(lhs.coeff(2), Mat2::identity() * c(-2.0, 0.0));
    }

    #[test]
    fn eval_scalar() {
        let s = ScalarSymbol::new([(1, one()), (-1, one())]);
        assert!((s.eval(one()).unwrap() - c(2.0, 0.0)).norm() < 1e-15);
        assert!(s.eval(c(0.0, 1.0)).unwrap().norm() < 1e-15);
        assert!(s.eval(c(0.5, 0.0)).is_err());
    }

    #[test]
    fn eval_example_phi_at_one_vanishes() {
        let phi = example_phi();
        let v = phi.eval(C64::new(1.0, 0.0)).unwrap();
        assert!(mat2_max_abs(&v) < 1e-15);
    }

    #[test]
    fn decompose_read_off() {
        let s = ScalarSymbol::new([(0, c(2.0, 0.0)), (1, c(3.0, 0.0)), (-1, c(4.0, 0.0))]);
        let d = s.decompose();
        assert_eq!(d.plus.coeff(0), c(3.0, 0.0));
        assert_eq!(d.zero, c(2.0, 0.0));
        assert_eq!(d.minus.coeff(0), c(4.0, 0.0));
        assert_eq!(d.reassemble(), s);
    }

    #[test]
    fn decompose_analytic_has_empty_minus() {
        let s = ScalarSymbol::monomial(2, one());
        let d = s.decompose();
        assert!(d.minus.is_zero());
        assert_eq!(d.reassemble(), s);
    }

    #[test]
    fn decompose_example_phi_minus_slot() {
        let d = example_phi().decompose();
        let expect = Mat2::new(-one(), -one(), -one(), one());
        assert_eq!(d.minus.coeff(0), expect);
        assert_eq!(d.reassemble(), example_phi());
    }

    #[test]
    fn matrix_entry_views_roundtrip() {
        let phi = example_psi();
        let [p1, p2, p3, p4] = phi.entries();
        assert_eq!(MatrixSymbol::from_entries(&p1, &p2, &p3, &p4), phi);
    }
}
