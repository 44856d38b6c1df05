use serde_json::{json, Map, Value};

use crate::crys::{CrysRep, ModuleElement, PsiOneElement};
use crate::error::Result;
use crate::maps::{
    check_reciprocity_evaluation, check_recip_taylor, inclusion_probe, omega, reduce_mod_lines, t_pow, twist_element, DualPair,
    SignConvention,
};
use crate::ops::nabla;
use crate::report::{params, Report, EXACT};
use crate::suites::crys::forced;
use crate::suites::random::{self, rng};
use crate::suites::SuiteConfig;

/// Run a check, turning an error into a failing report.
fn guarded(id: &str, ps: Map<String, Value>, floor: i64, f: impl FnOnce() -> Result<i64>) -> Report {
    match f() {
        Ok(d) => Report::new(id, ps, floor, d),
        Err(e) => Report::new(id, ps, floor, i64::MIN / 4).with_check(false, &e.to_string()),
    }
}

pub fn recip(cfg: &SuiteConfig, p: u32) -> Result<Vec<Report>> {
    let mut r = rng(cfg.seed_for("recip", p));
    let prec = cfg.work();
    let mut out = Vec::new();
    for rep in [CrysRep::cyclotomic(p, 0, prec)?, CrysRep::cyclotomic(p, 1, prec)?] {
        for h in 1..=2usize {
            for j in -2..=2i64 {
                let f = forced(&mut r, &rep, h + j.max(0) as usize, prec)?;
                let ps = params(&[("p", json!(p)), ("V", json!(rep.name())), ("h", json!(h)), ("j", json!(j)), ("n", json!([1, 2]))]);
                let id = if h as i64 + j >= 1 { "Taylor identity, (-1)^(h+j-1) (h+j-1)! route" } else { "Taylor identity, (-h-j)!^-1 route" };
                out.push(guarded(id, ps, 10, || {
                    let (e, _) = PsiOneElement::solve(&rep, &f, h, cfg.n, prec)?;
                    let mut d = EXACT;
                    for n in 1..=2 {
                        d = d.min(check_recip_taylor(&e, h, j, n, SignConvention::GammaMinusOne)?.digits());
                    }
                    Ok(d)
                }));
            }
        }
    }
    Ok(out)
}

const TWIST_CASES: usize = 10;

fn times_t(y: &ModuleElement, k: usize, n: usize, prec: i64) -> ModuleElement {
    if k == 0 {
        return y.clone();
    }
    let t = t_pow(y.p(), k, n, prec);
    y.map(|c| (c * &t).truncate(n))
}

/// `Omega_{V,h}(x) (x) e_j` against `Omega_{V(j),h+j}(d^{-j} x (x) t^{-j} e_j)`, compared as
/// `t^{max(0,-j)} Y' = t^{max(0,j)} Y` modulo the lines `t^{h + max(0,j)} (x) v`, `P v = p^{-h} v`.
fn twist_digits(rep: &CrysRep, h: usize, j: i64, x: &ModuleElement, n: usize, prec: i64) -> Result<i64> {
    let y = omega(rep, h, x, n, prec)?.value;
    let vj = rep.twist_rep(j);
    let y2 = omega(&vj, (h as i64 + j) as usize, &twist_element(x, j)?, n, prec)?.value.retag(rep.twist);
    let a = times_t(&y2, (-j).max(0) as usize, n, prec);
    let b = times_t(&y, j.max(0) as usize, n, prec);
    let (a, b) = if j > 0 {
        let deg = [h + j as usize];
        (reduce_mod_lines(&vj, &a.retag(vj.twist), &deg, prec)?, reduce_mod_lines(&vj, &b.retag(vj.twist), &deg, prec)?)
    } else {
        (reduce_mod_lines(rep, &a, &[h], prec)?, reduce_mod_lines(rep, &b, &[h], prec)?)
    };
    Ok(crate::report::digits_series_vec(&a.comps, &b.comps, n))
}

/// `Omega_{V,h}(nabla_h x) = Omega_{V,h+1}(x)` modulo the lines of degrees `h` and `h + 1`.
fn nabla_digits(rep: &CrysRep, h: usize, x: &ModuleElement, n: usize, prec: i64) -> Result<i64> {
    let nx = x.map(|c| nabla(h as i64, c, n, prec));
    let a = omega(rep, h, &nx, n, prec)?.value;
    let b = omega(rep, h + 1, x, n, prec)?.value;
    let deg = [h, h + 1];
    let (a, b) = (reduce_mod_lines(rep, &a, &deg, prec)?, reduce_mod_lines(rep, &b, &deg, prec)?);
    Ok(crate::report::digits_series_vec(&a.comps, &b.comps, n))
}

pub fn twist(cfg: &SuiteConfig, p: u32) -> Result<Vec<Report>> {
    let mut r = rng(cfg.seed_for("twist", p));
    let prec = cfg.work();
    let n = cfg.n;
    let mut out = Vec::new();
    for rep in [CrysRep::cyclotomic(p, 0, prec)?, CrysRep::cyclotomic(p, 1, prec)?] {
        for h in 1..=2usize {
            for j in [-1i64, 1, 2] {
                if (h as i64 + j) < (rep.weights.1 + j).max(0) {
                    continue;
                }
                let xs = (0..TWIST_CASES).map(|_| forced(&mut r, &rep, h + 3, prec)).collect::<Result<Vec<_>>>()?;
                let ps = params(&[("p", json!(p)), ("V", json!(rep.name())), ("h", json!(h)), ("j", json!(j)), ("cases", json!(TWIST_CASES))]);
                out.push(guarded("Omega_{V,h}(x) e_j = Omega_{V(j),h+j}(d^-j x t^-j e_j)", ps, 10, || {
                    xs.iter().try_fold(EXACT, |d, x| Ok(d.min(twist_digits(&rep, h, j, x, n, prec)?)))
                }));
            }
            let xs = (0..TWIST_CASES).map(|_| forced(&mut r, &rep, h + 2, prec)).collect::<Result<Vec<_>>>()?;
            let ps = params(&[("p", json!(p)), ("V", json!(rep.name())), ("h", json!(h)), ("cases", json!(TWIST_CASES))]);
            out.push(guarded("Omega_{V,h}(nabla_h x) = Omega_{V,h+1}(x)", ps, 10, || {
                xs.iter().try_fold(EXACT, |d, x| Ok(d.min(nabla_digits(&rep, h, x, n, prec)?)))
            }));
        }
    }
    Ok(out)
}

const INCLU_CASES: usize = 20;
/// Truncation for the inclusion probe; the growth test needs more terms than the default.
pub const INCLU_ORDER: usize = 96;

pub fn inclusion(cfg: &SuiteConfig, p: u32) -> Result<Vec<Report>> {
    let mut r = rng(cfg.seed_for("inclu-nabla", p));
    let prec = cfg.work();
    let fs: Vec<_> = (0..INCLU_CASES).map(|_| random::psi_zero(&mut r, p, 3, 3 * p as u64, prec)).collect();
    let mut out = Vec::new();
    for level in 1..=2u32 {
        let ps = params(&[("p", json!(p)), ("n", json!(level)), ("N", json!(INCLU_ORDER)), ("cases", json!(INCLU_CASES))]);
        let mut bad = None;
        let rep = guarded("(phi^n(pi)/t) nabla_0/(gamma_n - 1) f is a psi = 0 power series", ps, 10, || {
            let mut d = EXACT;
            for f in &fs {
                let probe = inclusion_probe(f, level, INCLU_ORDER, prec)?;
                if let Some(k) = probe.growth_violation() {
                    bad = Some(format!("coefficient {k} decays like a pole"));
                }
                let (digits, count) = probe.psi_digits(10);
                if count == 0 {
                    bad = Some("psi certifies no coefficient".into());
                }
                d = d.min(digits);
            }
            Ok(d)
        });
        let ok = bad.is_none();
        out.push(rep.with_check(ok, &bad.unwrap_or_default()));
    }
    Ok(out)
}

const ADJOINT_CASES: usize = 20;

pub fn adjoint(cfg: &SuiteConfig, p: u32) -> Result<Vec<Report>> {
    let mut r = rng(cfg.seed_for("adjoint", p));
    let prec = cfg.work();
    let pair = DualPair::diagonal(p, &[0], prec)?;
    let mut out = Vec::new();
    for j in 0..=2i64 {
        let mut cases = Vec::new();
        for _ in 0..ADJOINT_CASES {
            cases.push((forced(&mut r, &pair.v, 1 + j as usize, prec)?, forced(&mut r, &pair.w, 1, prec)?));
        }
        let ps = params(&[("p", json!(p)), ("V", json!(format!("Q_p({j})"))), ("W", json!(format!("Q_p({})", 1 - j))), ("cases", json!(ADJOINT_CASES))]);
        out.push(guarded("[(1 - p^-1 phi^-1) u, v] = [u, (1 - phi) v]", ps, 12, || {
            let mut d = EXACT;
            for (f1, f2) in &cases {
                let (y1, _) = PsiOneElement::solve(&pair.v, f1, 1, cfg.n, prec)?;
                let (y2, _) = PsiOneElement::solve(&pair.w, f2, 1, cfg.n, prec)?;
                d = d.min(check_reciprocity_evaluation(&pair, &y1, &y2, j)?.digits());
            }
            Ok(d)
        }));
    }
    Ok(out)
}

/// The reciprocity identities recomputed under `nabla_0 / (1 - gamma_n)`: one line per
/// configuration, `true` where the identity still holds to the floor.
pub fn sign_audit(cfg: &SuiteConfig, p: u32) -> Result<Vec<(String, bool)>> {
    let mut r = rng(cfg.seed_for("recip", p));
    let prec = cfg.work();
    let mut out = Vec::new();
    for rep in [CrysRep::cyclotomic(p, 0, prec)?, CrysRep::cyclotomic(p, 1, prec)?] {
        for h in 1..=2usize {
            for j in -2..=2i64 {
                let f = forced(&mut r, &rep, h + j.max(0) as usize, prec)?;
                let (e, _) = PsiOneElement::solve(&rep, &f, h, cfg.n, prec)?;
                let mut d = EXACT;
                for n in 1..=2 {
                    d = d.min(check_recip_taylor(&e, h, j, n, SignConvention::OneMinusGamma)?.digits());
                }
                out.push((format!("p={p} V={} h={h} j={j}", rep.name()), d >= 10));
            }
        }
    }
    Ok(out)
}
