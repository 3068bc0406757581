//! Randomized invariants driven by proptest.

use proptest::prelude::*;

use toeplitz_cs::gen::{perturb_block, random_block, random_scalar, Constraint};
use toeplitz_cs::io::{parse_symbol, serialize_symbol, ParsedSymbol};
use toeplitz_cs::operator::{block_toeplitz, conjugation_op, ConjugationSpec};
use toeplitz_cs::symbol::{Mat2, MatrixSymbol, ScalarSymbol};
use toeplitz_cs::symmetry::{cs_coeff_block, cs_numeric};
use toeplitz_cs::C64;

fn arb_unimodular() -> impl Strategy<Value = C64> {
    (0.0..std::f64::consts::TAU).prop_map(|t| C64::from_polar(1.0, t))
}

fn arb_scalar(max_degree: i64) -> impl Strategy<Value = ScalarSymbol> {
    (any::<u64>(), 0..=max_degree)
        .prop_map(|(seed, d)| random_scalar(seed, d, Constraint::Free).unwrap())
}

fn arb_block(max_degree: i64) -> impl Strategy<Value = MatrixSymbol> {
    (any::<u64>(), 0..=max_degree)
        .prop_map(|(seed, d)| random_block(seed, d, Constraint::Free).unwrap())
}

fn scalar_close(a: &ScalarSymbol, b: &ScalarSymbol, tol: f64) -> bool {
    a.sub(b).max_abs() <= tol * a.max_abs().max(b.max_abs()).max(1.0)
}

fn block_close(a: &MatrixSymbol, b: &MatrixSymbol, tol: f64) -> bool {
    a.sub(b).max_abs() <= tol * a.max_abs().max(b.max_abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn involution_is_involutive(phi in arb_scalar(5), lam in arb_unimodular()) {
        let twice = phi.involute(lam).unwrap().involute(lam).unwrap();
        prop_assert!(scalar_close(&twice, &phi, 1e-14));
    }

    #[test]
    fn block_involution_is_involutive(phi in arb_block(4), lam in arb_unimodular()) {
        let twice = phi.involute(lam).unwrap().involute(lam).unwrap();
        prop_assert!(block_close(&twice, &phi, 1e-14));
    }

    #[test]
    fn involution_matches_evaluation(phi in arb_scalar(4), lam in arb_unimodular(),
                                     t in 0.0..std::f64::consts::TAU) {
        // (phi o tau_lambda)(z) = phi(lambda * conj(z)) on the circle
        let z = C64::from_polar(1.0, t);
        let lhs = phi.involute(lam).unwrap().eval(z).unwrap();
        let rhs = phi.eval(lam * z.conj()).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * phi.max_abs().max(1.0));
    }

    #[test]
    fn decomposition_reassembles(phi in arb_scalar(5)) {
        prop_assert!(scalar_close(&phi.decompose().reassemble(), &phi, 0.0));
    }

    #[test]
    fn block_decomposition_reassembles(phi in arb_block(4)) {
        prop_assert!(block_close(&phi.decompose().reassemble(), &phi, 0.0));
    }

    #[test]
    fn product_matches_pointwise_evaluation(a in arb_scalar(4), b in arb_scalar(4),
                                            t in 0.0..std::f64::consts::TAU) {
        let z = C64::from_polar(1.0, t);
        let lhs = a.mul(&b).eval(z).unwrap();
        let rhs = a.eval(z).unwrap() * b.eval(z).unwrap();
        let scale = (a.max_abs() * b.max_abs()).max(1.0);
        prop_assert!((lhs - rhs).norm() <= 1e-11 * scale);
    }

    #[test]
    fn block_product_matches_pointwise_evaluation(a in arb_block(3), b in arb_block(3),
                                                  t in 0.0..std::f64::consts::TAU) {
        let z = C64::from_polar(1.0, t);
        let lhs = a.mul(&b).eval(z).unwrap();
        let rhs = a.eval(z).unwrap() * b.eval(z).unwrap();
        let scale = (a.max_abs() * b.max_abs()).max(1.0);
        prop_assert!((lhs - rhs).map(|v| v.norm()).max() <= 1e-11 * scale);
    }

    #[test]
    fn scalar_serialization_round_trips(phi in arb_scalar(5)) {
        let text = serialize_symbol(&ParsedSymbol::Scalar(phi.clone()), Some("probe"));
        match parse_symbol(&text).unwrap() {
            ParsedSymbol::Scalar(back) => prop_assert!(scalar_close(&back, &phi, 0.0)),
            _ => prop_assert!(false, "kind changed in round trip"),
        }
    }

    #[test]
    fn block_serialization_round_trips(phi in arb_block(4)) {
        let text = serialize_symbol(&ParsedSymbol::Block(phi.clone()), None);
        match parse_symbol(&text).unwrap() {
            ParsedSymbol::Block(back) => prop_assert!(block_close(&back, &phi, 0.0)),
            _ => prop_assert!(false, "kind changed in round trip"),
        }
    }

    #[test]
    fn coefficient_and_dense_oracles_agree(seed in any::<u64>(), d in 1i64..=3,
                                           lam in arb_unimodular(), broken in any::<bool>()) {
        let mut phi = random_block(seed, d, Constraint::LambdaSymmetric(lam)).unwrap();
        if broken {
            phi = perturb_block(&phi, seed ^ 0xabcd, 0.1);
        }
        let coeff = cs_coeff_block(&phi, lam, 1e-10).unwrap().verdict;
        let t = block_toeplitz(&phi, 6).unwrap();
        let c = conjugation_op(&ConjugationSpec::block(C64::new(1.0, 0.0), lam), 6).unwrap();
        let dense = cs_numeric(&t, &c, 1e-10).unwrap().verdict;
        prop_assert_eq!(coeff, dense);
    }

    #[test]
    fn adjoint_fn_is_pointwise_adjoint(phi in arb_block(4), t in 0.0..std::f64::consts::TAU) {
        let z = C64::from_polar(1.0, t);
        let lhs = phi.adjoint_fn().eval(z).unwrap();
        let rhs: Mat2 = phi.eval(z).unwrap().adjoint();
        prop_assert!((lhs - rhs).map(|v| v.norm()).max() <= 1e-12 * phi.max_abs().max(1.0));
    }
}
