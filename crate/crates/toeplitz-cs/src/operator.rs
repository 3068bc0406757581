//! Finite truncations of Toeplitz and block Toeplitz operators, antilinear
//! conjugations represented as unitary-times-entrywise-conjugation, and
//! boundary-exact corners of operator products on padded truncations.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::symbol::{require_unimodular, MatrixSymbol, ScalarSymbol, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    Scalar,
    Block2x2,
}

/// Dense truncation of a (block) Toeplitz operator. `n` is the scalar
/// truncation size, so the stored matrix is n x n for scalar layout and
/// 2n x 2n for block layout, with block (r, c) occupying rows r*n..(r+1)*n
/// and columns c*n..(c+1)*n.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    pub data: DMatrix<C64>,
    pub n: usize,
    pub band_degree: i64,
    pub layout: Layout,
}

impl TruncatedOperator {
    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    /// Block (r, c) of a block-layout operator as an owned n x n matrix.
    pub fn block(&self, r: usize, c: usize) -> DMatrix<C64> {
        assert_eq!(self.layout, Layout::Block2x2, "block() requires block layout");
        self.data.view((r * self.n, c * self.n), (self.n, self.n)).into_owned()
    }
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("truncation size N must be >= 1".into()));
    }
    Ok(())
}

fn toeplitz_data(phi: &ScalarSymbol, n: usize) -> DMatrix<C64> {
    DMatrix::from_fn(n, n, |j, k| phi.coeff(j as i64 - k as i64))
}

/// N x N truncation of T_phi: entry (j, k) = phi-hat(j - k).
pub fn toeplitz(phi: &ScalarSymbol, n: usize) -> Result<TruncatedOperator> {
    check_size(n)?;
    Ok(TruncatedOperator {
        data: toeplitz_data(phi, n),
        n,
        band_degree: phi.band_degree(),
        layout: Layout::Scalar,
    })
}

/// 2N x 2N truncation of T_Phi in the layout [[T_phi1, T_phi2], [T_phi3, T_phi4]].
pub fn block_toeplitz(phi: &MatrixSymbol, n: usize) -> Result<TruncatedOperator> {
    check_size(n)?;
    let mut data = DMatrix::zeros(2 * n, 2 * n);
    for r in 0..2 {
        for c in 0..2 {
            let entry = phi.entry(2 * r + c + 1);
            data.view_mut((r * n, c * n), (n, n)).copy_from(&toeplitz_data(&entry, n));
        }
    }
    Ok(TruncatedOperator {
        data,
        n,
        band_degree: phi.band_degree(),
        layout: Layout::Block2x2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConjugationKind {
    Scalar,
    Block2x2,
}

/// Parameters of the conjugation family: the scalar map
/// f(z) -> mu * conj(f(lambda * conj(z))) and its 2x2 block combination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugationSpec {
    pub mu: C64,
    pub lambda: C64,
    pub kind: ConjugationKind,
}

impl ConjugationSpec {
    pub fn scalar(mu: C64, lambda: C64) -> Self {
        ConjugationSpec { mu, lambda, kind: ConjugationKind::Scalar }
    }

    pub fn block(mu: C64, lambda: C64) -> Self {
        ConjugationSpec { mu, lambda, kind: ConjugationKind::Block2x2 }
    }
}

/// Antilinear map x -> W * conj(x) with W unitary and W * conj(W) = I.
#[derive(Debug, Clone, PartialEq)]
pub struct AntilinearOp {
    pub w: DMatrix<C64>,
}

impl AntilinearOp {
    pub fn dim(&self) -> usize {
        self.w.nrows()
    }

    pub fn apply(&self, x: &DVector<C64>) -> Result<DVector<C64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} vs operator dimension {}",
                x.len(),
                self.dim()
            )));
        }
        Ok(&self.w * x.map(|c| c.conj()))
    }
}

/// Realize the conjugation as W with C x = W * conj(x). Scalar case:
/// W = mu * diag(conj(lambda)^j). Block case: W = (mu / sqrt 2) *
/// [[W0, W0], [W0, -W0]] with W0 the scalar W at mu = 1.
pub fn conjugation_op(spec: &ConjugationSpec, n: usize) -> Result<AntilinearOp> {
    check_size(n)?;
    require_unimodular(spec.mu, "mu")?;
    require_unimodular(spec.lambda, "lambda")?;
    let lc = spec.lambda.conj();
    let w0 = DMatrix::from_fn(n, n, |j, k| {
        if j == k { lc.powu(j as u32) } else { C64::new(0.0, 0.0) }
    });
    let w = match spec.kind {
        ConjugationKind::Scalar => &w0 * spec.mu,
        ConjugationKind::Block2x2 => {
            let s = spec.mu / C64::new(2.0_f64.sqrt(), 0.0);
            let mut w = DMatrix::zeros(2 * n, 2 * n);
            w.view_mut((0, 0), (n, n)).copy_from(&(&w0 * s));
            w.view_mut((0, n), (n, n)).copy_from(&(&w0 * s));
            w.view_mut((n, 0), (n, n)).copy_from(&(&w0 * s));
            w.view_mut((n, n), (n, n)).copy_from(&(&w0 * (-s)));
            w
        }
    };
    Ok(AntilinearOp { w })
}

/// One factor of an operator word: a symbol, optionally adjointed. The
/// adjoint of a truncated Toeplitz matrix is exactly the truncation of the
/// pointwise-adjoint symbol, so adjoints commute with truncation here.
#[derive(Debug, Clone, Copy)]
pub struct Factor<'a, S> {
    pub symbol: &'a S,
    pub adjoint: bool,
}

impl<'a, S> Factor<'a, S> {
    pub fn plain(symbol: &'a S) -> Self {
        Factor { symbol, adjoint: false }
    }

    pub fn adj(symbol: &'a S) -> Self {
        Factor { symbol, adjoint: true }
    }
}

fn check_pad(max_degree: i64, pad: usize) -> Result<()> {
    let min_pad = 2 * (max_degree + 1) as usize;
    if pad < min_pad {
        return Err(Error::InvalidArgument(format!(
            "pad {pad} below minimum {min_pad} for band degree {max_degree}"
        )));
    }
    Ok(())
}

/// Leading N x N corner of the product of (N + pad)-sized truncations of the
/// factors. For band-limited symbols this corner equals the corresponding
/// corner of the product of the semi-infinite operators.
pub fn padded_product(
    factors: &[Factor<'_, ScalarSymbol>],
    n: usize,
    pad: usize,
) -> Result<TruncatedOperator> {
    check_size(n)?;
    if factors.is_empty() {
        return Err(Error::InvalidArgument("empty factor list".into()));
    }
    let max_degree = factors.iter().map(|f| f.symbol.band_degree()).max().unwrap();
    check_pad(max_degree, pad)?;
    let m = n + pad;
    let mut acc = DMatrix::<C64>::identity(m, m);
    for f in factors {
        let sym = if f.adjoint { f.symbol.conj_fn() } else { f.symbol.clone() };
        acc *= toeplitz_data(&sym, m);
    }
    Ok(TruncatedOperator {
        data: acc.view((0, 0), (n, n)).into_owned(),
        n,
        band_degree: max_degree,
        layout: Layout::Scalar,
    })
}

/// Block variant of [`padded_product`]: multiplies 2(N + pad)-sized block
/// truncations and keeps the boundary-exact leading corner of each block.
pub fn padded_product_block(
    factors: &[Factor<'_, MatrixSymbol>],
    n: usize,
    pad: usize,
) -> Result<TruncatedOperator> {
    check_size(n)?;
    if factors.is_empty() {
        return Err(Error::InvalidArgument("empty factor list".into()));
    }
    let max_degree = factors.iter().map(|f| f.symbol.band_degree()).max().unwrap();
    check_pad(max_degree, pad)?;
    let m = n + pad;
    let mut acc = DMatrix::<C64>::identity(2 * m, 2 * m);
    for f in factors {
        let sym = if f.adjoint { f.symbol.adjoint_fn() } else { f.symbol.clone() };
        acc *= block_toeplitz(&sym, m)?.data;
    }
    let mut data = DMatrix::zeros(2 * n, 2 * n);
    for r in 0..2 {
        for c in 0..2 {
            data.view_mut((r * n, c * n), (n, n))
                .copy_from(&acc.view((r * m, c * m), (n, n)));
        }
    }
    Ok(TruncatedOperator { data, n, band_degree: max_degree, layout: Layout::Block2x2 })
}

/// Truncated (unnormalized) reproducing kernel of the disk at mu:
/// entries conj(mu)^j for j = 0..N-1.
pub fn kernel_vector(mu: C64, n: usize) -> Result<DVector<C64>> {
    check_size(n)?;
    if mu.norm() >= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "kernel point must satisfy |mu| < 1, got {}",
            mu.norm()
        )));
    }
    Ok(DVector::from_fn(n, |j, _| mu.conj().powu(j as u32)))
}

pub fn frobenius(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}
