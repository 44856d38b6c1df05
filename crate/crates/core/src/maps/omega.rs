use crate::crys::solver::degree_operator;
use crate::crys::{solve_one_minus_phi, CrysRep, ModuleElement};
use crate::error::{Error, Result};
use crate::ops::nabla_chain;
use crate::padic::linalg::Matrix;
use crate::padic::scalar::PadicScalar;
use crate::series::rigid::{RigidSeries, Tail};

/// `Omega_{V,h}(x) = nabla_{h-1} ... nabla_0 (1 - phi)^{-1} x`.
#[derive(Clone, Debug)]
pub struct Omega {
    pub value: ModuleElement,
    pub h: usize,
    /// `v` with `P v = p^{-h} v`: the value is only defined modulo `t^h (x) v`.
    pub ambiguous: Vec<Vec<PadicScalar>>,
}

impl Omega {
    pub fn is_well_defined(&self) -> bool {
        self.ambiguous.is_empty()
    }
}

pub fn omega(rep: &CrysRep, h: usize, x: &ModuleElement, n: usize, prec: i64) -> Result<Omega> {
    let sol = solve_one_minus_phi(rep, x, h, n, prec)?;
    let value = sol.y.map(|c| nabla_chain(h, c, n, prec));
    for c in &value.comps {
        c.divide_by_t(h).map_err(|e| Error::Internal(format!("Omega output is not divisible by t^{h}: {e}")))?;
    }
    Ok(Omega { value, h, ambiguous: degree_operator(rep, h, prec).kernel() })
}

/// `t^k` to order `n`.
pub fn t_pow(p: u32, k: usize, n: usize, prec: i64) -> RigidSeries {
    let t = RigidSeries::log_one_plus_pi(p, n, prec);
    let mut c = vec![PadicScalar::zero(p, prec); n];
    c[0] = PadicScalar::one(p, prec);
    let mut out = RigidSeries::truncated(p, c, Tail::new(i64::MAX / 8, 0));
    for _ in 0..k {
        out = (&out * &t).truncate(n);
    }
    out
}

/// Subtract the components `c t^k (x) v`, `v` in `ker(I - p^k P)`, for each `k` in `degrees`.
///
/// The coefficient `c` is read off `pi^k` against the cokernel functionals, so
/// two values that differ by such lines reduce to the same element.
pub fn reduce_mod_lines(rep: &CrysRep, y: &ModuleElement, degrees: &[usize], prec: i64) -> Result<ModuleElement> {
    let p = rep.p;
    let mut degrees = degrees.to_vec();
    degrees.sort_unstable();
    let top = degrees.last().map_or(0, |k| k + 1);
    let n = y.comps.iter().filter_map(|c| c.order()).min().unwrap_or_else(|| {
        y.comps.iter().map(|c| c.coeffs().len()).max().unwrap_or(0).max(top)
    });
    let mut out = y.clone();
    for k in degrees {
        if k >= n {
            return Err(Error::PrecisionExhausted(format!("line t^{k} beyond order {n}")));
        }
        let m = degree_operator(rep, k, prec);
        let ker = m.kernel();
        if ker.is_empty() {
            continue;
        }
        let coker = m.left_kernel();
        let yk: Vec<PadicScalar> = out.comps.iter().map(|c| c.coeff(k).unwrap_or_else(|| PadicScalar::zero(p, prec))).collect();
        let l = Matrix::from_rows(coker)?;
        let kmat = Matrix::from_rows(ker.clone())?.transpose();
        let lk = &l * &kmat;
        let c = lk.solve(&l.apply(&yk))?;
        let tk = t_pow(p, k, n, prec);
        for (ci, v) in c.iter().zip(&ker) {
            for (comp, vi) in out.comps.iter_mut().zip(v) {
                *comp = (&*comp - &tk.scale(&(ci * vi))).truncate(n);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crys::one_minus_phi;
    use crate::ops::frobenius;

    const W: i64 = 30;

    #[test]
    fn omega_of_an_image_is_t_times_derivative() {
        let p = 3;
        let v = CrysRep::cyclotomic(p, 0, W).unwrap();
        let y0 = RigidSeries::from_i64s(p, &[0, 2, -1, 4], W);
        let x = ModuleElement::new(0, vec![&y0 - &frobenius(&y0)]);
        let n = 16;
        let om = omega(&v, 1, &x, n, W).unwrap();
        let want = (&t_pow(p, 1, n, W) * &y0.nabla()).truncate(n);
        assert!(om.value.discrepancy(&ModuleElement::new(0, vec![want]), n) >= W - 6);
        assert!(om.is_well_defined());
    }

    #[test]
    fn kernel_elements_are_killed() {
        let p = 5;
        let v = CrysRep::diagonal(p, &[0, 1], W).unwrap();
        let n = 12;
        for k in crate::crys::kernel_basis(&v, 2, n, W) {
            let z = k.element.map(|c| nabla_chain(2, c, n, W));
            assert!(z.discrepancy(&ModuleElement::zero(&v), n) >= W - 6, "degree {}", k.k);
            assert!(one_minus_phi(&v, &k.element).unwrap().discrepancy(&ModuleElement::zero(&v), n) >= W - 6);
        }
    }

    #[test]
    fn reduction_removes_the_line() {
        let p = 3;
        let v = CrysRep::cyclotomic(p, 1, W).unwrap();
        let n = 10;
        let base = ModuleElement::new(0, vec![RigidSeries::from_i64s(p, &[0, 0, 1, 3], W).truncate(n)]);
        let moved = base.add(&ModuleElement::new(0, vec![t_pow(p, 1, n, W).scale(&PadicScalar::from_i64(p, 7, W))])).unwrap();
        let a = reduce_mod_lines(&v, &base, &[1], W).unwrap();
        let b = reduce_mod_lines(&v, &moved, &[1], W).unwrap();
        assert!(a.discrepancy(&b, n) >= W - 4);
    }
}
