//! Rank one Wach modules and the finite-lattice picture of `D(T)^{psi = 1}`.
//!
//! `N(T)` is written in the basis `n_1 = pi^{-j} e_j`, where `e_j` spans
//! `D(Z_p(j))` twisted by an unramified `phi(e) = alpha e`. Then
//! `phi(n_1) = alpha q^{-j} n_1` and `psi(g n_1) = alpha^{-1} pi^j psi(pi^{-j} g) n_1`.

pub mod laurent;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ops::psi_laurent;
use crate::padic::scalar::PadicScalar;
use crate::padic::snf::{modulus, Smith};
use crate::series::laurent::RigidLaurent;
use crate::series::rigid::{RigidSeries, Tail};
pub use laurent::IntLaurent;

/// Default pole cap for Laurent computations.
pub const POLE_CAP: usize = 8;

#[derive(Clone, Debug)]
pub struct WachRank1 {
    pub p: u32,
    pub j: i64,
    pub alpha: PadicScalar,
}

/// `chi(gamma_1) = exp(p)`.
fn chi1(p: u32, prec: i64) -> Result<PadicScalar> {
    PadicScalar::from_i64(p, p as i64, prec).exp()
}

pub fn wach_rank1(p: u32, j: i64, alpha: &PadicScalar) -> Result<WachRank1> {
    if alpha.is_zero() || alpha.valuation() != 0 {
        return Err(Error::Domain("alpha must be a p-adic unit".into()));
    }
    let w = WachRank1 { p, j, alpha: alpha.clone() };
    // phi(pi^j n_1) = alpha pi^j n_1: the quotient of pi^j N by phi^* is trivial
    let k = j.unsigned_abs() as usize;
    let phi_pi = IntLaurent::monomial(p, 1).mul(&IntLaurent::q(p));
    if phi_pi.pow(k) != IntLaurent::monomial(p, k as i64).mul(&IntLaurent::q(p).pow(k)) {
        return Err(Error::Internal("phi(pi)^j differs from pi^j q^j".into()));
    }
    let u = w.gamma_on_basis(0, 2, alpha.precision().min(40))?;
    if !u.coeff(0).is_some_and(|c| c.eq_at(&PadicScalar::one(p, c.precision()))) {
        return Err(Error::Internal("gamma is not trivial on N / pi N".into()));
    }
    Ok(w)
}

impl WachRank1 {
    /// Lower end `a` of the Hodge-Tate range, in the convention where `Z_p(j)` has weight `j`.
    pub fn weight(&self) -> i64 {
        self.j
    }

    /// `u` with `gamma_1 (pi^s n_1) = u pi^s n_1`, to order `n`: `(gamma(pi)/pi)^{s - j} chi^j`.
    pub fn gamma_on_basis(&self, s: i64, n: usize, prec: i64) -> Result<RigidSeries> {
        let p = self.p;
        let chi = chi1(p, prec)?;
        // ((1 + pi)^chi - 1) / pi
        let c: Vec<PadicScalar> = RigidSeries::binomial(&chi, n + 1)?.coeffs().iter().skip(1).cloned().collect();
        let base = RigidSeries::truncated(p, c, Tail::new(0, 0));
        let e = s - self.j;
        let mut u = RigidSeries::constant(&chi.pow(self.j)?);
        let factor = if e >= 0 { base } else { base.inverse(n)? };
        for _ in 0..e.unsigned_abs() {
            u = (&u * &factor).truncate(n);
        }
        Ok(u.truncate(n))
    }

    /// Whether `Gamma` acts trivially on `pi^s N / pi^{s+1} N`.
    pub fn gamma_trivial_mod_pi(&self, s: i64, prec: i64) -> Result<bool> {
        let u = self.gamma_on_basis(s, 2, prec)?;
        let c = u.coeff(0).ok_or_else(|| Error::PrecisionExhausted("empty expansion".into()))?;
        Ok(c.eq_at(&PadicScalar::one(self.p, c.precision())))
    }

    /// `pi^j psi(pi^{-j} g)`: `psi` in `n_1` coordinates without the unit `alpha^{-1}`.
    pub fn psi_untwisted(&self, g: &IntLaurent) -> IntLaurent {
        g.mul_pi_pow(-self.j).psi().mul_pi_pow(self.j)
    }
}

/// `psi(pi^{-m}) = pi^{-m} (lead + pi Q_m)`, computed as `pi^{-m} psi(q^m)`; `Q_m` must be integral.
pub fn psi_pole_expansion(p: u32, m: usize, prec: i64) -> Result<(PadicScalar, RigidSeries)> {
    if m == 0 || m > POLE_CAP {
        return Err(Error::Domain(format!("m = {m} outside 1..={POLE_CAP}")));
    }
    let r = psi_laurent(&RigidLaurent::pi_inv_pow(p, m, prec), POLE_CAP)?;
    let s = r.with_pole(m).series().clone();
    let lead = s.coeff(0).ok_or_else(|| Error::PrecisionExhausted("empty expansion".into()))?;
    let mut tail = s.clone();
    let mut c = tail.coeffs().to_vec();
    c[0] = PadicScalar::zero(p, lead.precision());
    tail = RigidSeries::exact(p, c);
    let q = tail.div_pi_pow(1)?;
    if let Some(bad) = q.coeffs().iter().find(|c| !c.is_zero() && c.valuation() < 0) {
        return Err(Error::Internal(format!("Q_{m} is not integral: coefficient {bad}")));
    }
    Ok((lead, q))
}

fn random_laurent(rng: &mut ChaCha8Rng, p: u32, low: i64, len: usize) -> IntLaurent {
    let b = (p as i64).pow(3);
    IntLaurent::from_coeffs(p, low, (0..len).map(|_| BigInt::from(rng.gen_range(-b..=b))).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub samples: usize,
    /// Samples for which the hypothesis held (all of them for the stability probe).
    pub applicable: usize,
    pub failures: usize,
}

impl ProbeReport {
    pub fn pass(&self) -> bool {
        self.failures == 0
    }
}

/// `psi(p D + pi^{-(k+1)} N) in p D + pi^{-k} N`, and for `k = 0`, `psi(p D + pi^{-1} N) in p D + pi^{-1} N`.
pub fn psi_stability_probe(w: &WachRank1, k: usize, samples: usize, seed: u64) -> Result<ProbeReport> {
    if w.j < 0 {
        return Err(Error::NotPositive(format!("weight {} < 0", w.j)));
    }
    if k + 1 > POLE_CAP {
        return Err(Error::Domain(format!("pole {} exceeds the cap {POLE_CAP}", k + 1)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = w.p;
    let target = -(k.max(1) as i64);
    let mut failures = 0;
    for _ in 0..samples {
        let y = random_laurent(&mut rng, p, -(POLE_CAP as i64), POLE_CAP + 16).scale(&BigInt::from(p));
        let n = random_laurent(&mut rng, p, 0, 16).mul_pi_pow(-(k as i64) - 1);
        let x = y.add(&n);
        if !w.psi_untwisted(&x).in_p_plus_pi_pow(target) {
            failures += 1;
        }
    }
    Ok(ProbeReport { samples, applicable: samples, failures })
}

/// If `psi(x) - x in p D + pi^{-k} N` then `x in p D + pi^{-k} N`, on sampled `x = p y + pi^{-l} n`.
pub fn psi_descent_probe(w: &WachRank1, k: usize, samples: usize, seed: u64) -> Result<ProbeReport> {
    if w.j < 0 {
        return Err(Error::NotPositive(format!("weight {} < 0", w.j)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = w.p;
    let (mut applicable, mut failures) = (0, 0);
    for _ in 0..samples {
        let l = rng.gen_range(0..=POLE_CAP) as i64;
        let y = random_laurent(&mut rng, p, -(POLE_CAP as i64), POLE_CAP + 16).scale(&BigInt::from(p));
        // half of the samples start from a psi-fixed part so the hypothesis can hold with l > k
        let mut n = random_laurent(&mut rng, p, 0, 16).mul_pi_pow(-l);
        if rng.gen_bool(0.5) {
            n = n.scale(&BigInt::from(p)).add(&IntLaurent::monomial(p, -1));
        }
        let x = y.add(&n);
        let d = w.psi_untwisted(&x).sub(&x);
        if d.in_p_plus_pi_pow(-(k as i64)) {
            applicable += 1;
            if !x.in_p_plus_pi_pow(-(k as i64)) {
                failures += 1;
            }
        }
    }
    Ok(ProbeReport { samples, applicable, failures })
}

/// `ker(psi - 1)` on `span(pi^{-c}, ..., pi^{N-1}) n_1` over `Z / p^M`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KernelReport {
    pub p: u32,
    pub j: i64,
    pub c: usize,
    pub n: usize,
    pub m: u32,
    /// Exponents of the basis, `-c .. N`.
    pub low: i64,
    pub divisors: Vec<u32>,
    pub free_rank: usize,
    /// Kernel generators as residues on the basis.
    pub generators: Vec<Vec<u128>>,
    /// Every generator lies in `pi^{a-1} N`.
    pub contained: bool,
    /// Every generator lies in `pi^a N`.
    pub sharper: bool,
    /// Some elementary divisor is too close to `p^M` to separate torsion from kernel.
    pub inconclusive: bool,
    #[serde(skip)]
    matrix: Vec<Vec<u128>>,
}

fn below(gen: &[u128], low: i64, bound: i64) -> bool {
    gen.iter().enumerate().all(|(i, &x)| low + i as i64 >= bound || x == 0)
}

pub fn psi_fixed_kernel(w: &WachRank1, c: usize, n: usize, m: u32) -> Result<KernelReport> {
    if c > POLE_CAP {
        return Err(Error::Domain(format!("pole {c} exceeds the cap {POLE_CAP}")));
    }
    let p = w.p;
    let q = modulus(p, m)?;
    let low = -(c as i64);
    let dim = n + c;
    let ainv = w.alpha.inv()?.residue_u128(m)?;
    let mut a = vec![vec![0u128; dim]; dim];
    for col in 0..dim {
        let e = low + col as i64;
        let img = w.psi_untwisted(&IntLaurent::monomial(p, e));
        if img.order().is_some_and(|o| o < low) || img.high() > n as i64 {
            return Err(Error::Internal(format!("psi(pi^{e}) leaves the lattice")));
        }
        let r = img.residues(low, n as i64, q);
        for (row, x) in r.into_iter().enumerate() {
            a[row][col] = x * ainv % q;
        }
        a[col][col] = (a[col][col] + q - 1) % q;
    }
    let s = Smith::new(&a, p, m)?;
    let generators = s.kernel();
    let bound = w.weight() - 1;
    let contained = generators.iter().all(|g| below(g, low, bound));
    let sharper = generators.iter().all(|g| below(g, low, bound + 1));
    let inconclusive = s.divisors.iter().any(|&d| d > 0 && d < m && 2 * d >= m);
    Ok(KernelReport {
        p,
        j: w.j,
        c,
        n,
        m,
        low,
        divisors: s.divisors.iter().copied().filter(|&d| d > 0).collect(),
        free_rank: s.free_rank(),
        generators,
        contained,
        sharper,
        inconclusive,
        matrix: a,
    })
}

impl KernelReport {
    /// Same verdicts, same free rank, and the generators of `other` (at higher `M`)
    /// reduce into this kernel.
    pub fn reproduced_by(&self, other: &KernelReport) -> bool {
        if other.m < self.m || (self.p, self.j, self.c, self.n) != (other.p, other.j, other.c, other.n) {
            return false;
        }
        let q = (self.p as u128).pow(self.m);
        let reduces = other.generators.iter().all(|g| {
            self.matrix.iter().all(|row| row.iter().zip(g).map(|(a, x)| a * (x % q) % q).sum::<u128>() % q == 0)
        });
        reduces && self.free_rank == other.free_rank && self.contained == other.contained && self.sharper == other.sharper
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const W: i64 = 30;

    fn one(p: u32) -> PadicScalar {
        PadicScalar::one(p, W)
    }

    #[test]
    fn construction_and_gamma() {
        for p in [3, 5] {
            for j in [-1, 0, 2] {
                let w = wach_rank1(p, j, &one(p)).unwrap();
                assert!(w.gamma_trivial_mod_pi(0, W).unwrap());
                assert!(!w.gamma_trivial_mod_pi(1, W).unwrap());
                assert!(!w.gamma_trivial_mod_pi(-1, W).unwrap());
            }
        }
        assert!(wach_rank1(3, 0, &PadicScalar::from_i64(3, 3, W)).is_err());
    }

    #[test]
    fn twisting_down_multiplies_by_pi() {
        // N(Z_p(-1)) = pi Z_p[[pi]] e_{-1}: n_1 = pi e_{-1}, and psi(g n_1) = pi^{-1} psi(pi g) n_1
        let p = 3;
        let w = wach_rank1(p, -1, &one(p)).unwrap();
        let x = IntLaurent::monomial(p, 2);
        assert_eq!(w.psi_untwisted(&x), IntLaurent::monomial(p, 3).psi().mul_pi_pow(-1));
    }

    #[test]
    fn pole_expansion() {
        let (lead, q) = psi_pole_expansion(3, 1, W).unwrap();
        assert!(lead.eq_at(&one(3)));
        assert!(q.coeffs().iter().all(|c| c.is_zero()));
        let (lead, _) = psi_pole_expansion(5, 3, W).unwrap();
        assert!(lead.eq_at(&PadicScalar::from_i64(5, 25, W)));
    }

    #[test]
    fn stability_and_descent() {
        let w = wach_rank1(3, 0, &one(3)).unwrap();
        for k in [0, 1, 3, POLE_CAP - 1] {
            assert!(psi_stability_probe(&w, k, 20, 1).unwrap().pass(), "k={k}");
        }
        let d = psi_descent_probe(&w, 1, 40, 2).unwrap();
        assert!(d.pass() && d.applicable > 0, "{d:?}");
    }

    #[test]
    fn kernel_for_the_trivial_lattice() {
        let w = wach_rank1(3, 0, &one(3)).unwrap();
        let k = psi_fixed_kernel(&w, 3, 20, 6).unwrap();
        assert!(k.contained && !k.sharper, "{k:?}");
        assert!(k.free_rank >= 2);
    }

    #[test]
    fn twisted_kernel_and_doubled_precision() {
        let w = wach_rank1(5, -1, &one(5)).unwrap();
        let a = psi_fixed_kernel(&w, 3, 24, 6).unwrap();
        let b = psi_fixed_kernel(&w, 3, 24, 12).unwrap();
        assert!(a.contained && !a.sharper && !a.inconclusive);
        assert!(a.reproduced_by(&b));
    }

    #[test]
    fn nontrivial_unit_kills_the_kernel() {
        let w = wach_rank1(5, 0, &PadicScalar::from_i64(5, 2, W)).unwrap();
        let k = psi_fixed_kernel(&w, 3, 24, 6).unwrap();
        assert_eq!(k.free_rank, 0);
        assert!(k.generators.is_empty());
    }
}
