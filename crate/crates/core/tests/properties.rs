use proptest::prelude::*;

use phigamma::crys::{apply_psi, force_delta_zero, one_minus_phi};
use phigamma::ops::{frobenius, nabla, phi_inverse_by_substitution, phi_inverse_n, psi};
use phigamma::padic::snf::Smith;
use phigamma::report::{digits_series, EXACT};
use phigamma::suites::{self, random, SuiteConfig};
use phigamma::wach::{psi_descent_probe, psi_stability_probe, wach_rank1};
use phigamma::{CrysRep, ModuleElement, PadicScalar, PsiOneElement, RigidSeries};

const W: i64 = 40;

fn prime() -> impl Strategy<Value = u32> {
    prop_oneof![Just(3u32), Just(5u32)]
}

fn poly(p: u32, max_len: usize) -> impl Strategy<Value = RigidSeries> {
    prop::collection::vec(-1000i64..1000, 1..max_len).prop_map(move |c| RigidSeries::from_i64s(p, &c, W))
}

fn with_prime(max_len: usize) -> impl Strategy<Value = (u32, RigidSeries)> {
    prime().prop_flat_map(move |p| (Just(p), poly(p, max_len)))
}

fn pair(max_len: usize) -> impl Strategy<Value = (u32, RigidSeries, RigidSeries)> {
    prime().prop_flat_map(move |p| (Just(p), poly(p, max_len), poly(p, max_len)))
}

fn agree(a: &RigidSeries, b: &RigidSeries, n: usize, floor: i64) -> Result<(), TestCaseError> {
    let d = digits_series(a, b, n);
    prop_assert!(d >= floor, "only {d} digits, floor {floor}");
    Ok(())
}

/// Equal at the working precision on every coefficient below `n` that both sides know.
fn same(a: &RigidSeries, b: &RigidSeries, n: usize) -> Result<(), TestCaseError> {
    let mut compared = 0;
    for k in 0..n {
        if let (Some(x), Some(y)) = (a.coeff(k), b.coeff(k)) {
            prop_assert!(x.eq_at(&y), "coefficient {}: {} vs {}", k, x, y);
            compared += 1;
        }
    }
    prop_assert!(compared + 1 >= n, "only {} of {} coefficients known", compared, n);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn leibniz((_p, f, g) in pair(20)) {
        let lhs = (&f * &g).nabla();
        let rhs = &(&f.nabla() * &g) + &(&f * &g.nabla());
        agree(&lhs, &rhs, 40, W - 4)?;
    }

    #[test]
    fn derivative_against_frobenius((p, f) in with_prime(12)) {
        let lhs = frobenius(&f).nabla();
        let rhs = frobenius(&f.nabla()).scale(&PadicScalar::from_i64(p, p as i64, W));
        agree(&lhs, &rhs, 12 * p as usize, W - 4)?;
    }

    #[test]
    fn psi_and_the_derivative((p, f) in with_prime(40)) {
        // from d o phi = p phi o d
        let lhs = psi(&f.nabla());
        let rhs = psi(&f).nabla().scale(&PadicScalar::from_i64(p, p as i64, W));
        agree(&lhs, &rhs, 40 / p as usize, W - 8)?;
    }

    #[test]
    fn psi_left_inverse_of_phi((_p, f) in with_prime(30)) {
        agree(&psi(&frobenius(&f)), &f, 30, W - 2)?;
    }

    #[test]
    fn truncation_coherence((_p, f, g) in pair(48), cut in 4usize..32) {
        let n = 48;
        let big = (&f * &g).truncate(n).truncate(cut);
        let small = (&f.truncate(cut) * &g.truncate(cut)).truncate(cut);
        same(&big, &small, cut)?;
        let big = nabla(1, &f, n, W).truncate(cut);
        let small = nabla(1, &f.truncate(n).truncate(cut), cut, W);
        same(&big, &small, cut)?;
    }

    #[test]
    fn localization_routes_agree((_p, f) in with_prime(10), level in 1u32..3) {
        let a = phi_inverse_n(level, &f, 3, W).unwrap();
        let b = phi_inverse_by_substitution(level, &f, 3, W).unwrap();
        for k in 0..3 {
            prop_assert!(a.coeff(k).discrepancy(b.coeff(k)) >= W - 12);
        }
    }

    #[test]
    fn solver_output_solves(seed in any::<u64>(), p in prime(), j in 0i64..2) {
        let rep = CrysRep::cyclotomic(p, j, W).unwrap();
        let mut r = random::rng(seed);
        let x = ModuleElement::new(rep.twist, vec![random::psi_zero(&mut r, p, 3, 3 * p as u64, W)]);
        let h = rep.min_h() as usize;
        let f = force_delta_zero(&rep, &x, h, W).unwrap();
        let (e, _) = PsiOneElement::solve(&rep, &f, h, 128, W).unwrap();
        let back = one_minus_phi(&rep, &e.y).unwrap();
        agree(&back.comps[0], &f.comps[0].truncate(48), 48, 20)?;
        // psi fixes y on the coefficients it certifies
        let py = apply_psi(&rep, &e.y).unwrap();
        let judged = py.comps[0].coeffs().iter().take_while(|c| c.precision() >= 10).count();
        prop_assert!(judged > 0);
        for k in 0..judged {
            prop_assert!(py.comps[0].coeffs()[k].eq_at(&e.y.comps[0].coeff(k).unwrap()), "coefficient {}", k);
        }
    }

    #[test]
    fn smith_kernel_is_annihilated(p in prime(), rows in prop::collection::vec(prop::collection::vec(0u64..1000, 5), 1..5)) {
        let m = 6;
        let q = (p as u128).pow(m);
        let a: Vec<Vec<u128>> = rows.iter().map(|r| r.iter().map(|&x| x as u128 % q).collect()).collect();
        let s = Smith::new(&a, p, m).unwrap();
        for v in s.kernel() {
            for row in &a {
                let dot = row.iter().zip(&v).fold(0u128, |acc, (x, y)| (acc + x * y % q) % q);
                prop_assert_eq!(dot, 0);
            }
        }
        prop_assert!(s.free_rank() >= 5 - a.len());
    }
}

#[test]
fn wach_stability_and_descent() {
    for p in [3, 5] {
        let w = wach_rank1(p, 0, &PadicScalar::one(p, 20)).unwrap();
        for k in 0..4 {
            assert!(psi_stability_probe(&w, k, 40, k as u64).unwrap().pass(), "p={p} k={k}");
            let d = psi_descent_probe(&w, k.max(1), 40, 7 + k as u64).unwrap();
            assert!(d.pass(), "p={p} k={k}: {d:?}");
        }
    }
}

#[test]
fn suites_are_deterministic() {
    let cfg = SuiteConfig { primes: vec![3], seed: 5, ..SuiteConfig::default() };
    for name in ["exo", "mellin", "adjoint", "wach"] {
        let a = suites::run_suite(name, &cfg).unwrap();
        let b = suites::run_suite(name, &cfg).unwrap();
        assert_eq!(a, b, "{name}");
        assert!(a.iter().all(|r| r.max_discrepancy_valuation <= EXACT));
    }
}

#[test]
fn non_psi_zero_forcing_breaks_psi_fixedness() {
    // y with (1 - phi) y = 1 + pi is not psi-fixed
    let p = 3;
    let rep = CrysRep::cyclotomic(p, 1, W).unwrap();
    let f = ModuleElement::new(rep.twist, vec![RigidSeries::from_i64s(p, &[0, 1], W)]);
    let f = force_delta_zero(&rep, &f, 1, W).unwrap();
    let (e, _) = PsiOneElement::solve(&rep, &f, 1, 96, W).unwrap();
    let py = apply_psi(&rep, &e.y).unwrap();
    let judged = py.comps[0].coeffs().iter().take_while(|c| c.precision() >= 10).count();
    assert!((0..judged).any(|k| !py.comps[0].coeffs()[k].eq_at(&e.y.comps[0].coeff(k).unwrap())));
}
