mod common;

use common::{kernel_oracle, lambda_derivative, lambda_value, slavnov_oracle};
use tlkp_core::chain::{kernel, lambda_du, lambda_eval, slavnov};
use tlkp_core::instances::{instance_rng, random_instance};
use tlkp_core::{ChainParams, Field, Float, Rational};

fn r(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

#[test]
fn eigenvalue_matches_typed_formula() {
    for (n, m, q) in [(2, 1, r(2, 1)), (3, 2, r(3, 2)), (4, 3, r(-5, 3))] {
        let p = ChainParams::spin_half(n, m, q.clone()).unwrap();
        let mut rng = instance_rng(11, n as u64);
        for _ in 0..5 {
            let (u, v) = random_instance(&p, &mut rng).unwrap();
            assert_eq!(lambda_eval(&p, &v[0], &u).unwrap(), lambda_value(n, &q, &v[0], &u));
            for i in 0..m {
                assert_eq!(lambda_du(&p, i, &v[0], &u).unwrap(), lambda_derivative(n, &q, i, &v[0], &u));
            }
        }
    }
}

#[test]
fn derivative_against_central_difference() {
    let p = ChainParams::spin_half(3, 2, Float::from_f64(1.5)).unwrap();
    let u = [Float::from_f64(0.3), Float::from_f64(-0.7)];
    let v = Float::from_f64(0.45);
    let h = Float::from_f64(1e-6);
    for i in 0..2 {
        let mut up = u.to_vec();
        let mut dn = u.to_vec();
        up[i] = up[i].clone() + &h;
        dn[i] = dn[i].clone() - &h;
        let fd = (lambda_eval(&p, &v, &up).unwrap() - lambda_eval(&p, &v, &dn).unwrap())
            / (h.clone() * Float::from_i64(2));
        let exact = lambda_du(&p, i, &v, &u).unwrap();
        let rel = ((fd - &exact) / &exact).abs().to_f64();
        assert!(rel < 1e-8, "relative error {rel}");
    }
}

#[test]
fn kernel_and_product_match_monolithic_formula() {
    for (n, m, q) in [(2, 2, r(2, 1)), (3, 1, r(3, 2)), (3, 3, r(2, 1))] {
        let p = ChainParams::spin_half(n, m, q.clone()).unwrap();
        let mut rng = instance_rng(5, m as u64);
        for _ in 0..5 {
            let (u, v) = random_instance(&p, &mut rng).unwrap();
            assert_eq!(kernel(&p, &u, &v).unwrap(), kernel_oracle(n, &q, &u, &v));
            let s = slavnov(&p, &u, &v).unwrap();
            assert_eq!(s, slavnov_oracle(n, 1, &q, &-q.clone(), &u, &v));
        }
    }
}

#[test]
fn spin_one_product_matches_monolithic_formula() {
    use tlkp_core::{QBranch, Quadratic};
    let p = ChainParams::from_boundary(2, 2, 2, Quadratic::from_i64(2), QBranch::Large).unwrap();
    let mut rng = instance_rng(9, 0);
    let (u, v) = random_instance(&p, &mut rng).unwrap();
    assert_eq!(slavnov(&p, &u, &v).unwrap(), slavnov_oracle(2, 2, p.q(), p.big_q(), &u, &v));
}
