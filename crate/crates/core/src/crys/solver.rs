use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::crys::element::ModuleElement;
use crate::crys::rep::CrysRep;
use crate::error::{Error, Result};
use crate::padic::linalg::Matrix;
use crate::padic::poly::mul_trunc;
use crate::padic::scalar::{ilog, PadicScalar};
use crate::series::rigid::{RigidSeries, Tail};

/// One degree of `Delta(f)`: the class of `(d^k f)(0)` in `D / (1 - p^k phi)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaEntry {
    pub k: usize,
    pub value: Vec<PadicScalar>,
    pub invertible: bool,
    /// Coordinates of the class against a basis of the cokernel; empty when invertible.
    pub obstruction: Vec<PadicScalar>,
}

impl DeltaEntry {
    pub fn is_zero(&self) -> bool {
        self.obstruction.iter().all(|c| c.is_zero())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeltaReport {
    pub entries: Vec<DeltaEntry>,
}

impl DeltaReport {
    pub fn first_obstructed(&self) -> Option<usize> {
        self.entries.iter().find(|e| !e.is_zero()).map(|e| e.k)
    }

    pub fn is_zero(&self) -> bool {
        self.first_obstructed().is_none()
    }
}

/// `I - p^k P`.
pub fn degree_operator(rep: &CrysRep, k: usize, prec: i64) -> Matrix {
    let id = Matrix::identity(rep.p, rep.dim(), prec);
    &id - &rep.frobenius.shift(k as i64)
}

/// `Delta(f) = (d^k f)(0)` modulo the image of `1 - p^k phi`, for `k = 0..=h`.
pub fn delta_map(rep: &CrysRep, f: &ModuleElement, h: usize, prec: i64) -> Result<DeltaReport> {
    f.check_rep(rep)?;
    let mut entries = Vec::with_capacity(h + 1);
    for k in 0..=h {
        let value = f.derivative_at_zero(k);
        let m = degree_operator(rep, k, prec);
        let coker = m.left_kernel();
        let obstruction = coker
            .iter()
            .map(|l| {
                let mut acc = PadicScalar::zero(rep.p, prec);
                for (a, b) in l.iter().zip(&value) {
                    acc = &acc + &(a * b);
                }
                acc
            })
            .collect();
        entries.push(DeltaEntry { k, value, invertible: coker.is_empty(), obstruction });
    }
    Ok(DeltaReport { entries })
}

/// Subtract `sum_a (1 + pi)^a (x) c_a` over small units `a` so that `Delta(f)` vanishes in degrees `0..=h`.
pub fn force_delta_zero(rep: &CrysRep, f: &ModuleElement, h: usize, prec: i64) -> Result<ModuleElement> {
    let p = rep.p;
    let d = rep.dim();
    let report = delta_map(rep, f, h, prec)?;
    // the part of each (d^k f)(0) that must be removed, as a vector in D
    let mut targets = Vec::with_capacity(h + 1);
    for e in &report.entries {
        if e.invertible {
            targets.push(vec![PadicScalar::zero(p, prec); d]);
            continue;
        }
        let m = degree_operator(rep, e.k, prec);
        let coker = m.left_kernel();
        // w with l_i . w = l_i . value for every cokernel functional
        let lmat = Matrix::from_rows(coker.clone())?;
        let w = lmat.solve(&e.obstruction)?;
        targets.push(w);
    }
    let units: Vec<u64> = (1..).filter(|a| a % p as u64 != 0).take(h + 1).collect();
    let vander = Matrix::from_rows(
        (0..=h).map(|k| units.iter().map(|&a| PadicScalar::from_i64(p, a as i64, prec).pow(k as i64).unwrap()).collect()).collect(),
    )?;
    let mut out = f.clone();
    for i in 0..d {
        let rhs: Vec<PadicScalar> = targets.iter().map(|w| w[i].clone()).collect();
        let c = vander.solve(&rhs)?;
        let mut corr = RigidSeries::zero(p);
        for (a, ca) in units.iter().zip(&c) {
            corr = &corr + &RigidSeries::one_plus_pi_pow(p, *a, prec).scale(ca);
        }
        out.comps[i] = &out.comps[i] - &corr;
    }
    Ok(out)
}

type PowerTable = Arc<Vec<Vec<PadicScalar>>>;

/// Coefficients of `phi(pi)^j` below `pi^n`, for `j < n`.
fn phi_pi_powers(p: u32, n: usize, prec: i64) -> PowerTable {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize, i64), PowerTable>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&(p, n, prec)) {
        return t.clone();
    }
    let phi_pi = crate::ops::frobenius(&RigidSeries::pi(p, prec));
    let base: Vec<PadicScalar> = phi_pi.coeffs().to_vec();
    let mut rows = Vec::with_capacity(n);
    let mut cur = vec![PadicScalar::one(p, prec)];
    for _ in 0..n {
        let mut padded = cur.clone();
        padded.resize(n, PadicScalar::zero(p, prec));
        rows.push(padded);
        cur = mul_trunc(&cur, &base, n, prec);
    }
    let t = Arc::new(rows);
    cache.lock().unwrap().insert((p, n, prec), t.clone());
    t
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelElement {
    pub k: usize,
    pub vector: Vec<PadicScalar>,
    /// `t^k (x) v` to the solver order.
    pub element: ModuleElement,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub y: ModuleElement,
    pub kernel: Vec<KernelElement>,
}

/// Solve `(1 - phi) y = f` to order `n`.
///
/// In degree `k` the equation reads `(I - p^k P) y_k = f_k + P sum_{j<k} c_{kj} y_j`
/// with `c_{kj}` the `pi^k` coefficient of `phi(pi)^j`. Where `I - p^k P` is
/// singular the component of `y_k` along its kernel is set to zero.
pub fn solve_one_minus_phi(rep: &CrysRep, f: &ModuleElement, h: usize, n: usize, prec: i64) -> Result<Solution> {
    f.check_rep(rep)?;
    if (h as i64) < rep.weights.1 {
        return Err(Error::Domain(format!("h = {h} is below the top weight {}", rep.weights.1)));
    }
    if let Some(k) = delta_map(rep, f, h, prec)?.first_obstructed() {
        return Err(Error::Unsolvable { degree: k });
    }
    let p = rep.p;
    let d = rep.dim();
    let table = phi_pi_powers(p, n, prec);
    let mut fk: Vec<Vec<PadicScalar>> = Vec::with_capacity(n);
    for k in 0..n {
        let row = f
            .comps
            .iter()
            .map(|c| c.coeff(k).ok_or_else(|| Error::PrecisionExhausted(format!("f is only known to order {k}"))))
            .collect::<Result<Vec<_>>>()?;
        fk.push(row);
    }
    let mut y: Vec<Vec<PadicScalar>> = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = vec![PadicScalar::zero(p, i64::MAX / 8); d];
        for (j, yj) in y.iter().enumerate() {
            let c = &table[j][k];
            if c.is_zero() {
                continue;
            }
            for (a, b) in acc.iter_mut().zip(yj) {
                *a = &*a + &(c * b);
            }
        }
        let pacc = rep.frobenius.apply(&acc);
        let rhs: Vec<PadicScalar> = fk[k].iter().zip(&pacc).map(|(a, b)| a + b).collect();
        let m = degree_operator(rep, k, prec);
        let yk = m.solve(&rhs).map_err(|_| {
            if k <= h {
                Error::Unsolvable { degree: k }
            } else {
                Error::PrecisionExhausted(format!("I - p^{k} P is singular beyond h = {h}"))
            }
        })?;
        y.push(yk);
    }
    let growth = (-rep.frobenius.min_valuation()).max(0) as u32;
    let f_tail = f.comps.iter().filter_map(|c| c.tail()).fold(None, |acc: Option<Tail>, t| {
        Some(acc.map_or(t, |a| Tail::new(a.val.min(t.val), a.growth.max(t.growth))))
    });
    let growth = growth.max(f_tail.map_or(0, |t| t.growth));
    let comps: Vec<RigidSeries> = (0..d)
        .map(|i| {
            let coeffs: Vec<PadicScalar> = y.iter().map(|v| v[i].clone()).collect();
            let val = coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(m, c)| c.valuation().min(c.precision()) + growth as i64 * ilog(p, m as u64) as i64)
                .min()
                .unwrap_or(0)
                .min(f_tail.map_or(i64::MAX / 8, |t| t.val))
                - 1;
            RigidSeries::truncated(p, coeffs, Tail::new(val, growth))
        })
        .collect();
    let y = ModuleElement::new(rep.twist, comps);
    Ok(Solution { y, kernel: kernel_basis(rep, h, n, prec) })
}

/// `t^k (x) v` with `P v = p^{-k} v`, `0 <= k <= h`.
pub fn kernel_basis(rep: &CrysRep, h: usize, n: usize, prec: i64) -> Vec<KernelElement> {
    let p = rep.p;
    let t = RigidSeries::log_one_plus_pi(p, n, prec);
    let mut c = vec![PadicScalar::zero(p, prec); n];
    c[0] = PadicScalar::one(p, prec);
    let mut tk = RigidSeries::truncated(p, c, Tail::new(i64::MAX / 8, 0));
    let mut out = Vec::new();
    for k in 0..=h {
        if k > 0 {
            tk = (&tk * &t).truncate(n);
        }
        for v in degree_operator(rep, k, prec).kernel() {
            let comps = v.iter().map(|c| tk.scale(c)).collect();
            out.push(KernelElement { k, vector: v, element: ModuleElement::new(rep.twist, comps) });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crys::element::one_minus_phi;
    use crate::ops::frobenius;

    const W: i64 = 30;

    fn unit_poly(p: u32, terms: &[(u64, i64)]) -> RigidSeries {
        let mut f = RigidSeries::zero(p);
        for &(a, c) in terms {
            f = &f + &RigidSeries::one_plus_pi_pow(p, a, W).scale(&PadicScalar::from_i64(p, c, W));
        }
        f
    }

    #[test]
    fn recovers_pi_from_its_image() {
        let p = 3;
        let v = CrysRep::cyclotomic(p, 0, W).unwrap();
        let pi = RigidSeries::pi(p, W);
        let f = ModuleElement::new(0, vec![&pi - &frobenius(&pi)]);
        let sol = solve_one_minus_phi(&v, &f, 1, 16, W).unwrap();
        let want = ModuleElement::new(0, vec![pi]);
        assert!(sol.y.discrepancy(&want, 16) >= W - 4);
    }

    #[test]
    fn constant_is_obstructed() {
        let p = 5;
        let v = CrysRep::cyclotomic(p, 0, W).unwrap();
        let f = ModuleElement::new(0, vec![RigidSeries::constant(&PadicScalar::one(p, W))]);
        let d = delta_map(&v, &f, 1, W).unwrap();
        assert_eq!(d.first_obstructed(), Some(0));
        assert_eq!(solve_one_minus_phi(&v, &f, 1, 8, W).unwrap_err(), Error::Unsolvable { degree: 0 });
        let g = force_delta_zero(&v, &f, 1, W).unwrap();
        assert!(delta_map(&v, &g, 1, W).unwrap().is_zero());
    }

    #[test]
    fn solution_solves() {
        let p = 5;
        let v = CrysRep::cyclotomic(p, 1, W).unwrap();
        let f = ModuleElement::new(0, vec![unit_poly(p, &[(1, 2), (2, -1)])]);
        assert!(delta_map(&v, &f, 1, W).unwrap().is_zero());
        let n = 16;
        let sol = solve_one_minus_phi(&v, &f, 1, n, W).unwrap();
        let back = one_minus_phi(&v, &sol.y).unwrap();
        assert!(back.discrepancy(&f, n) >= W - 6, "{}", back.discrepancy(&f, n));
    }

    #[test]
    fn kernel_is_annihilated() {
        let p = 3;
        let v = CrysRep::diagonal(p, &[0, 1, 2], W).unwrap();
        let ker = kernel_basis(&v, 2, 14, W);
        assert_eq!(ker.iter().map(|k| k.k).collect::<Vec<_>>(), vec![0, 1, 2]);
        for k in &ker {
            let z = one_minus_phi(&v, &k.element).unwrap();
            assert!(z.discrepancy(&ModuleElement::zero(&v), 14) >= W - 6);
        }
    }
}
