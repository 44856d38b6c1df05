use serde_json::json;

use crate::crys::psi_one::mat_apply_elem;
use crate::crys::{apply_psi, delta_map, force_delta_zero, kernel_basis, one_minus_phi, CrysRep, ModuleElement, PsiOneElement};
use crate::error::{Error, Result};
use crate::padic::cyclo::CycloElement;
use crate::report::{digits_elems, digits_zero, params, Report, EXACT};
use crate::suites::random::{self, rng};
use crate::suites::SuiteConfig;

pub(crate) fn test_reps(p: u32, prec: i64) -> Result<Vec<CrysRep>> {
    Ok(vec![CrysRep::cyclotomic(p, 0, prec)?, CrysRep::cyclotomic(p, 1, prec)?, CrysRep::diagonal(p, &[0, 1], prec)?])
}

/// A random `psi = 0` forcing term with `Delta = 0` in degrees `0..=h`.
pub(crate) fn forced(r: &mut rand_chacha::ChaCha8Rng, rep: &CrysRep, h: usize, prec: i64) -> Result<ModuleElement> {
    let p = rep.p;
    let comps = (0..rep.dim()).map(|_| random::psi_zero(r, p, 3, 3 * p as u64, prec)).collect();
    force_delta_zero(rep, &ModuleElement::new(rep.twist, comps), h, prec)
}

pub(crate) fn top_h(rep: &CrysRep) -> usize {
    rep.weights.1.max(1) as usize
}

const TRACE_CASES: usize = 2;

/// `p^{-m} Tr_{F_m / F_n} d_V(phi^{-m}(y))`.
fn traced(e: &PsiOneElement, m: u32, n: u32) -> Result<Vec<CycloElement>> {
    Ok(e.exp_eval(m)?.iter().map(|x| x.trace(n)).collect())
}

pub fn trace(cfg: &SuiteConfig, p: u32) -> Result<Vec<Report>> {
    let mut r = rng(cfg.seed_for("trace", p));
    let prec = cfg.work();
    let mut out = Vec::new();
    for rep in test_reps(p, prec)? {
        let h = top_h(&rep);
        let elems = (0..TRACE_CASES)
            .map(|_| Ok(PsiOneElement::solve(&rep, &forced(&mut r, &rep, h, prec)?, h, cfg.n, prec)?.0))
            .collect::<Result<Vec<_>>>()?;
        for n in 0..=2u32 {
            let mut digits = EXACT;
            for e in &elems {
                let base = if n == 0 { e.exp_eval(0)? } else { traced(e, n, n)? };
                let top = if n == 0 { 2 } else { n + 2 };
                for m in n.max(1)..=top {
                    if m == n {
                        continue;
                    }
                    digits = digits.min(digits_elems(&traced(e, m, n)?, &base));
                }
            }
            let ps = params(&[
                ("p", json!(p)),
                ("V", json!(rep.name())),
                ("n", json!(n)),
                ("N", json!(cfg.n)),
                ("cases", json!(TRACE_CASES)),
            ]);
            let id = if n == 0 { "p^-m Tr d_V(phi^-m y) = (1 - p^-1 phi^-1) d_V(y)" } else { "p^-m Tr_{m/n} d_V(phi^-m y) independent of m" };
            out.push(Report::new(id, ps, 12, digits));
        }
    }
    Ok(out)
}

const SEQ_CASES: usize = 20;
const SEQ_H: usize = 2;
const PSI_FLOOR: i64 = 12;

/// `psi(y) = y` on the leading coefficients `psi` certifies to `floor` digits, and the trace form of it.
fn psi_fixed_digits(e: &PsiOneElement, floor: i64) -> Result<i64> {
    let rep = &e.rep;
    let ps = apply_psi(rep, &e.y)?;
    let mut digits = EXACT;
    for (a, b) in ps.comps.iter().zip(&e.y.comps) {
        let diff: Vec<_> = a.coeffs().iter().enumerate().map(|(i, c)| c - &b.coeff(i).unwrap()).take_while(|d| d.precision() >= floor).collect();
        if diff.is_empty() {
            return Ok(i64::MIN / 4);
        }
        digits = digits.min(digits_zero(&diff));
    }
    // phi^{-1}(psi(y)) at pi_n is p^{-1} P^{-1} Tr_{n+1/n} of the value at pi_{n+1}
    let pinv = rep.frobenius_inverse();
    for n in 1..=2u32 {
        let lo = e.value_at(n)?;
        let hi = e.value_at(n + 1)?;
        let tr: Vec<CycloElement> = hi.iter().map(|x| x.trace(n).shift(-1)).collect();
        digits = digits.min(digits_elems(&mat_apply_elem(&pinv, &tr), &lo));
    }
    Ok(digits)
}

pub fn exact_sequence(cfg: &SuiteConfig, p: u32) -> Result<Vec<Report>> {
    let mut r = rng(cfg.seed_for("exact-seq", p));
    let prec = cfg.work();
    let n = cfg.n;
    let mut out = Vec::new();
    for rep in test_reps(p, prec)? {
        let h = SEQ_H.max(top_h(&rep));
        let ps = |check: &str| params(&[("p", json!(p)), ("V", json!(rep.name())), ("h", json!(h)), ("check", json!(check)), ("cases", json!(SEQ_CASES))]);

        // Delta o (1 - phi) = 0
        let mut digits = EXACT;
        for _ in 0..SEQ_CASES {
            let comps = (0..rep.dim()).map(|_| random::integral_poly(&mut r, p, 12, cfg.m, prec)).collect();
            let x = one_minus_phi(&rep, &ModuleElement::new(rep.twist, comps))?;
            for e in delta_map(&rep, &x, h, prec)?.entries {
                digits = digits.min(digits_zero(&e.obstruction));
            }
        }
        out.push(Report::new("Delta o (1 - phi) = 0", ps("delta"), cfg.m, digits));

        // the solver succeeds exactly when Delta vanishes
        let mut mismatches = 0;
        let mut psi_digits = EXACT;
        for _ in 0..SEQ_CASES {
            let f = forced(&mut r, &rep, h, prec)?;
            // twice the order, so that psi certifies the leading coefficients to the floor
            match PsiOneElement::solve(&rep, &f, h, 2 * n, prec) {
                Ok((e, _)) => psi_digits = psi_digits.min(psi_fixed_digits(&e, PSI_FLOOR)?),
                Err(_) => mismatches += 1,
            }
            let g = ModuleElement::new(rep.twist, (0..rep.dim()).map(|_| random::psi_zero(&mut r, p, 3, 3 * p as u64, prec)).collect());
            let obstructed = !delta_map(&rep, &g, h, prec)?.is_zero();
            match PsiOneElement::solve(&rep, &g, h, n, prec) {
                Err(Error::Unsolvable { .. }) if obstructed => {}
                Ok(_) if !obstructed => {}
                _ => mismatches += 1,
            }
        }
        out.push(
            Report::new("solvable iff Delta = 0", ps("solvability"), 0, EXACT)
                .with_check(mismatches == 0, &format!("{mismatches} cases disagree with Delta")),
        );

        let mut kdigits = EXACT;
        for k in kernel_basis(&rep, h, n, prec) {
            let z = one_minus_phi(&rep, &k.element)?;
            for c in &z.comps {
                kdigits = kdigits.min(digits_zero(&c.coeffs()[..n.min(c.coeffs().len())]));
            }
        }
        out.push(Report::new("(1 - phi) kills the kernel basis", ps("kernel"), cfg.m, kdigits));
        out.push(Report::new("psi(solve(f)) = solve(f)", ps("psi-fixed"), PSI_FLOOR, psi_digits));
    }
    Ok(out)
}
