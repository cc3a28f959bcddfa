//! Seeded random test instances drawn from small rationals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::{family_det, g_prefactor, ChainParams, Family, ParameterVector};
use crate::error::{Error, Result};
use crate::field::{Field, Rational};
use crate::matrix::check_distinct;

/// Largest numerator magnitude and denominator drawn.
pub const HEIGHT: i64 = 13;
const MAX_ATTEMPTS: usize = 10_000;

/// Independent stream `index` of the generator seeded with `seed`.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `n/d` with `0 < |n| ≤ 13` and `1 ≤ d ≤ 13`.
pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    let mut n = 0;
    while n == 0 {
        n = rng.random_range(-HEIGHT..=HEIGHT);
    }
    let d = rng.random_range(1..=HEIGHT);
    Rational::from_ratio(n, d)
}

pub fn small_rationals<R: Rng, F: Field>(rng: &mut R, count: usize) -> Vec<F> {
    (0..count).map(|_| F::from_rational(&small_rational(rng))).collect()
}

/// Admissible Bethe roots `u` and free parameters `v` for which the Slavnov
/// prefactor and both family determinants are defined, `det F⁽²⁾(v) ≠ 0`
/// and the squares `vᵢ²` are distinct. Draws are rejected until all of that holds.
pub fn random_instance<R: Rng, F: Field>(p: &ChainParams<F>, rng: &mut R) -> Result<(Vec<F>, Vec<F>)> {
    let m = p.m();
    for _ in 0..MAX_ATTEMPTS {
        let u: Vec<F> = small_rationals(rng, m);
        let v: Vec<F> = small_rationals(rng, m);
        if ParameterVector::bethe_roots(u.clone(), p).is_err() || ParameterVector::free(v.clone(), p, &u).is_err() {
            continue;
        }
        let squares: Vec<F> = v.iter().map(|x| x.clone() * x).collect();
        if check_distinct(&squares).is_err() {
            continue;
        }
        let Ok(den) = family_det(p, Family::Two, &u, &v) else { continue };
        if den.is_negligible() || family_det(p, Family::One, &u, &v).is_err() || g_prefactor(p, &u, &v).is_err() {
            continue;
        }
        return Ok((u, v));
    }
    Err(Error::Domain(format!("no admissible instance after {MAX_ATTEMPTS} draws")))
}

/// Random Bethe roots alone, admissible and in generic position.
pub fn random_roots<R: Rng, F: Field>(p: &ChainParams<F>, rng: &mut R) -> Result<Vec<F>> {
    for _ in 0..MAX_ATTEMPTS {
        let u: Vec<F> = small_rationals(rng, p.m());
        if ParameterVector::bethe_roots(u.clone(), p).is_ok() {
            return Ok(u);
        }
    }
    Err(Error::Domain(format!("no admissible roots after {MAX_ATTEMPTS} draws")))
}

/// `count` distinct points at which every `F⁽¹⁾ᵢ` and `F⁽²⁾ᵢ` is defined.
pub fn random_points<R: Rng, F: Field>(
    p: &ChainParams<F>,
    u: &[F],
    count: usize,
    rng: &mut R,
) -> Result<Vec<F>> {
    for _ in 0..MAX_ATTEMPTS {
        let pts: Vec<F> = small_rationals(rng, count);
        if check_distinct(&pts).is_err() {
            continue;
        }
        let ok = pts.iter().all(|x| {
            (0..u.len()).all(|i| {
                crate::chain::f_eval(p, Family::One, i, x, u).is_ok() && crate::chain::f_eval(p, Family::Two, i, x, u).is_ok()
            })
        });
        if ok {
            return Ok(pts);
        }
    }
    Err(Error::Domain(format!("no admissible points after {MAX_ATTEMPTS} draws")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_bounded() {
        let a: Vec<Rational> = small_rationals(&mut instance_rng(7, 3), 20);
        let b: Vec<Rational> = small_rationals(&mut instance_rng(7, 3), 20);
        assert_eq!(a, b);
        let c: Vec<Rational> = small_rationals(&mut instance_rng(7, 4), 20);
        assert_ne!(a, c);
        for x in a {
            assert!(!num::Zero::is_zero(&x));
            assert!(x.numer().magnitude() <= &13u32.into() && x.denom() <= &13.into());
        }
    }

    #[test]
    fn instances_are_admissible() {
        let p = ChainParams::spin_half(3, 2, Rational::from_i64(2)).unwrap();
        let mut rng = instance_rng(1, 0);
        for _ in 0..10 {
            let (u, v) = random_instance(&p, &mut rng).unwrap();
            assert!(crate::chain::kernel(&p, &u, &v).is_ok());
        }
    }
}
