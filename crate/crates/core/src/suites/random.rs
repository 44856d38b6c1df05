//! Seeded random inputs.

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::padic::scalar::PadicScalar;
use crate::series::rigid::RigidSeries;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// A residue mod `p^m`, as a scalar of precision `prec`.
pub fn integral(rng: &mut ChaCha8Rng, p: u32, m: i64, prec: i64) -> PadicScalar {
    let q = BigInt::from(p).pow(m as u32);
    let digits: Vec<u32> = (0..m).map(|_| rng.gen_range(0..p)).collect();
    let mut x = BigInt::from(0);
    for d in digits.iter().rev() {
        x = x * BigInt::from(p) + BigInt::from(*d);
    }
    PadicScalar::from_bigint(p, &(x % q), prec)
}

pub fn small(rng: &mut ChaCha8Rng, p: u32, prec: i64) -> PadicScalar {
    let b = (p as i64).pow(2);
    let mut c = 0;
    while c == 0 {
        c = rng.gen_range(-b..=b);
    }
    PadicScalar::from_i64(p, c, prec)
}

/// An integral polynomial of degree below `n`.
pub fn integral_poly(rng: &mut ChaCha8Rng, p: u32, n: usize, m: i64, prec: i64) -> RigidSeries {
    RigidSeries::exact(p, (0..n).map(|_| integral(rng, p, m, prec)).collect())
}

pub fn unit_exponent(rng: &mut ChaCha8Rng, p: u32, max: u64) -> u64 {
    loop {
        let a = rng.gen_range(1..max);
        if a % p as u64 != 0 {
            return a;
        }
    }
}

/// `sum_a c_a (1 + pi)^a` over `terms` units `a < max`: an exact `psi = 0` polynomial.
pub fn psi_zero(rng: &mut ChaCha8Rng, p: u32, terms: usize, max: u64, prec: i64) -> RigidSeries {
    let mut f = RigidSeries::zero(p);
    for _ in 0..terms {
        let a = unit_exponent(rng, p, max);
        f = &f + &RigidSeries::one_plus_pi_pow(p, a, prec).scale(&small(rng, p, prec));
    }
    f
}
