use tlkp_core::chain::kernel;
use tlkp_core::tau::tau_det;
use tlkp_core::{ChainParams, Family, Rational};

#[test]
fn quotient_example() -> tlkp_core::Result<()> {
    let p = ChainParams::spin_half(3, 2, Rational::from_integer(2.into()))?;
    let u = vec![Rational::new(1.into(), 3.into()), Rational::new(2.into(), 5.into())];
    let v = vec![Rational::new(3.into(), 7.into()), Rational::new(5.into(), 3.into())];
    let quotient = tau_det(&p, Family::One, &u, &v)? / tau_det(&p, Family::Two, &u, &v)?;
    assert_eq!(quotient, kernel(&p, &u, &v)?);
    Ok(())
}
