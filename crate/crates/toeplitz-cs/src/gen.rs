//! Seeded random symbol generators with structural constraints.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::symbol::{Mat2, MatrixSymbol, ScalarSymbol, C64};
use crate::symmetry::generate_cs_block;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Constraint {
    Free,
    /// Only nonnegative coefficient indices, nonzero top coefficient.
    Analytic,
    /// phi-hat(-n) = conj(phi-hat(n)), real constant term.
    RealValued,
    /// phi = alpha + beta * rho with rho real-valued.
    BrownHalmos,
    /// phi-hat(-n) = lambda^n phi-hat(n) (blocks route through the
    /// four-relation parametrization).
    LambdaSymmetric(C64),
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_c(rng: &mut impl Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Random complex value bounded away from zero, for leading coefficients.
fn random_c_nonzero(rng: &mut impl Rng) -> C64 {
    loop {
        let v = random_c(rng);
        if v.norm() > 0.2 {
            return v;
        }
    }
}

pub fn random_unimodular(rng: &mut impl Rng) -> C64 {
    C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
}

pub fn random_in_open_disk(rng: &mut impl Rng) -> C64 {
    loop {
        let v = random_c(rng);
        if v.norm() < 0.95 {
            return v;
        }
    }
}

fn check_degree(degree: i64) -> Result<()> {
    if degree < 0 {
        return Err(Error::InvalidArgument("band degree must be >= 0".into()));
    }
    Ok(())
}

fn scalar_with(rng: &mut impl Rng, degree: i64, constraint: Constraint) -> Result<ScalarSymbol> {
    check_degree(degree)?;
    match constraint {
        Constraint::Free => {
            let mut coeffs: Vec<(i64, C64)> = (-degree..=degree)
                .map(|n| (n, random_c(rng)))
                .collect();
            if degree > 0 {
                coeffs.push((degree, random_c_nonzero(rng)));
                coeffs.push((-degree, random_c_nonzero(rng)));
            }
            Ok(ScalarSymbol::new(coeffs))
        }
        Constraint::Analytic => {
            let mut coeffs: Vec<(i64, C64)> =
                (1..=degree).map(|n| (n, random_c(rng))).collect();
            if degree > 0 {
                coeffs.push((degree, random_c_nonzero(rng)));
            }
            Ok(ScalarSymbol::new(coeffs))
        }
        Constraint::RealValued => {
            let mut coeffs = vec![(0, C64::new(rng.gen_range(-1.0..1.0), 0.0))];
            for n in 1..=degree {
                let v = if n == degree { random_c_nonzero(rng) } else { random_c(rng) };
                coeffs.push((n, v));
                coeffs.push((-n, v.conj()));
            }
            Ok(ScalarSymbol::new(coeffs))
        }
        Constraint::BrownHalmos => {
            let rho = scalar_with(rng, degree, Constraint::RealValued)?;
            let alpha = random_c(rng);
            let beta = random_c_nonzero(rng);
            Ok(rho.scale(beta).add(&ScalarSymbol::constant(alpha)))
        }
        Constraint::LambdaSymmetric(lambda) => {
            crate::symbol::require_unimodular(lambda, "lambda")?;
            let mut coeffs = vec![(0, random_c(rng))];
            for n in 1..=degree {
                let v = if n == degree { random_c_nonzero(rng) } else { random_c(rng) };
                coeffs.push((n, v));
                coeffs.push((-n, lambda.powi(n as i32) * v));
            }
            Ok(ScalarSymbol::new(coeffs))
        }
    }
}

pub fn random_scalar(seed: u64, degree: i64, constraint: Constraint) -> Result<ScalarSymbol> {
    scalar_with(&mut rng_for(seed), degree, constraint)
}

pub fn random_block(seed: u64, degree: i64, constraint: Constraint) -> Result<MatrixSymbol> {
    check_degree(degree)?;
    let rng = &mut rng_for(seed);
    match constraint {
        Constraint::LambdaSymmetric(lambda) => {
            let s = scalar_with(rng, degree, Constraint::LambdaSymmetric(lambda))?;
            let d = scalar_with(rng, degree, Constraint::LambdaSymmetric(lambda))?;
            let g = scalar_with(rng, degree, Constraint::Free)?;
            generate_cs_block(&s, &d, &g, lambda)
        }
        c => {
            let e1 = scalar_with(rng, degree, c)?;
            let e2 = scalar_with(rng, degree, c)?;
            let e3 = scalar_with(rng, degree, c)?;
            let e4 = scalar_with(rng, degree, c)?;
            Ok(MatrixSymbol::from_entries(&e1, &e2, &e3, &e4))
        }
    }
}

/// Add a random perturbation of size about eps to one coefficient, breaking
/// fragile structure deterministically.
pub fn perturb_scalar(phi: &ScalarSymbol, seed: u64, eps: f64) -> ScalarSymbol {
    let rng = &mut rng_for(seed);
    let n = nonzero_index(rng, phi.band_degree().max(1));
    phi.add(&ScalarSymbol::monomial(n, random_c_nonzero(rng) * eps))
}

fn nonzero_index(rng: &mut impl Rng, d: i64) -> i64 {
    // index 0 would leave every symmetry relation intact
    let k = rng.gen_range(1..=d);
    if rng.gen_bool(0.5) {
        k
    } else {
        -k
    }
}

pub fn perturb_block(phi: &MatrixSymbol, seed: u64, eps: f64) -> MatrixSymbol {
    let rng = &mut rng_for(seed);
    let n = nonzero_index(rng, phi.band_degree().max(1));
    let mut a = Mat2::zeros();
    a[(rng.gen_range(0..2), rng.gen_range(0..2))] = random_c_nonzero(rng) * eps;
    phi.add(&MatrixSymbol::new([(n, a)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::{cs_coeff_block, cs_coeff_scalar};

    #[test]
    fn deterministic_per_seed() {
        let a = random_scalar(7, 3, Constraint::Free).unwrap();
        let b = random_scalar(7, 3, Constraint::Free).unwrap();
        assert_eq!(a, b);
        let c = random_scalar(8, 3, Constraint::Free).unwrap();
        assert_ne!(a, c);
        let m1 = random_block(7, 2, Constraint::Free).unwrap();
        let m2 = random_block(7, 2, Constraint::Free).unwrap();
        assert_eq!(m1, m2);
    }

    #[test]
    fn free_hits_requested_degree() {
        for seed in 0..20 {
            let s = random_scalar(seed, 4, Constraint::Free).unwrap();
            assert_eq!(s.band_degree(), 4);
        }
    }

    #[test]
    fn real_valued_constraint_holds() {
        let s = random_scalar(11, 2, Constraint::RealValued).unwrap();
        assert!(s.is_real_valued(1e-14));
    }

    #[test]
    fn analytic_constraint_holds() {
        let s = random_scalar(11, 3, Constraint::Analytic).unwrap();
        assert!(s.is_analytic());
        assert_eq!(s.band_degree(), 3);
    }

    #[test]
    fn brown_halmos_constraint_holds() {
        for seed in 0..10 {
            let s = random_scalar(seed, 3, Constraint::BrownHalmos).unwrap();
            let rep = crate::normality::brown_halmos_scalar(&s, 1e-10);
            assert!(rep.verdict.is_pass(), "seed {seed}");
        }
    }

    #[test]
    fn lambda_symmetric_scalar_and_block() {
        let lam = C64::new(0.0, 1.0);
        for seed in 0..10 {
            let s = random_scalar(seed, 3, Constraint::LambdaSymmetric(lam)).unwrap();
            assert!(cs_coeff_scalar(&s, lam, 1e-10).unwrap().verdict, "seed {seed}");
            let m = random_block(seed, 3, Constraint::LambdaSymmetric(lam)).unwrap();
            assert!(cs_coeff_block(&m, lam, 1e-10).unwrap().verdict, "seed {seed}");
        }
    }

    #[test]
    fn non_unimodular_lambda_rejected() {
        let r = random_scalar(1, 2, Constraint::LambdaSymmetric(C64::new(2.0, 0.0)));
        assert!(r.is_err());
    }

    #[test]
    fn perturbation_breaks_symmetry() {
        let lam = C64::new(-1.0, 0.0);
        let m = random_block(42, 2, Constraint::LambdaSymmetric(lam)).unwrap();
        let p = perturb_block(&m, 43, 0.1);
        assert!(!cs_coeff_block(&p, lam, 1e-10).unwrap().verdict);
    }
}
