use serde_json::json;

use crate::error::Result;
use crate::padic::scalar::PadicScalar;
use crate::report::{params, Report};
use crate::suites::SuiteConfig;
use crate::wach::{psi_fixed_kernel, wach_rank1};

const POLE: usize = 3;
const ORDER: usize = 40;
const DIGITS: u32 = 8;

pub fn kernel_containment(_cfg: &SuiteConfig, p: u32) -> Result<Vec<Report>> {
    let mut out = Vec::new();
    for (j, name) in [(0i64, "Z_p"), (-1, "Z_p(-1)")] {
        let w = wach_rank1(p, j, &PadicScalar::one(p, 2 * DIGITS as i64))?;
        let k = psi_fixed_kernel(&w, POLE, ORDER, DIGITS)?;
        let k2 = psi_fixed_kernel(&w, POLE, ORDER, 2 * DIGITS)?;
        let ps = |check: &str| {
            params(&[
                ("p", json!(p)),
                ("T", json!(name)),
                ("c", json!(POLE)),
                ("N", json!(ORDER)),
                ("M", json!(DIGITS)),
                ("check", json!(check)),
                ("free_rank", json!(k.free_rank)),
                ("torsion", json!(k.divisors.iter().filter(|&&d| d < DIGITS).collect::<Vec<_>>())),
            ])
        };
        let why = if k.inconclusive {
            "SNF inconclusive at this precision"
        } else if !k.reproduced_by(&k2) {
            "not reproduced at doubled precision"
        } else {
            "kernel leaves pi^(a-1) N"
        };
        let ok = k.contained && !k.inconclusive && k.reproduced_by(&k2);
        out.push(Report::new("D(T)^{psi=1} in pi^(a-1) N(T)", ps("containment"), DIGITS as i64, DIGITS as i64).with_check(ok, why));
        if j == 0 {
            let ok = !k.sharper && !k.inconclusive;
            out.push(
                Report::new("sharper bound pi^a N(T) fails for T = Z_p", ps("sharper"), DIGITS as i64, DIGITS as i64)
                    .with_check(ok, "kernel unexpectedly inside N(T)"),
            );
        }
    }
    Ok(out)
}
