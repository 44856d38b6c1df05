use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::linalg::Matrix;
use crate::padic::scalar::{is_odd_prime, PadicScalar};

/// Frobenius data of a crystalline representation on a fixed basis of `D_cris(V)`.
///
/// `phi(e_i) = sum_k P[k][i] e_k`, so on coordinate vectors `phi` acts by
/// `v -> P phi(v)`. The weight of `Q_p(1)` is `1`, and `Q_p(j)` has `P = [p^{-j}]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CrysRep {
    pub label: String,
    pub p: u32,
    pub frobenius: Matrix,
    pub weights: (i64, i64),
    /// Number of Tate twists applied since construction; module elements carry the same tag.
    pub twist: i64,
}

#[derive(Serialize, Deserialize)]
struct RepJson {
    label: String,
    p: u32,
    d: usize,
    frobenius: Vec<Vec<String>>,
    weights: [i64; 2],
}

impl CrysRep {
    pub fn new(label: &str, p: u32, frobenius: Matrix, weights: (i64, i64)) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::Domain(format!("p = {p} is not an odd prime")));
        }
        if frobenius.rows != frobenius.cols || frobenius.rows == 0 {
            return Err(Error::Domain("frobenius matrix must be square and nonempty".into()));
        }
        if weights.0 > weights.1 {
            return Err(Error::Domain(format!("empty weight interval [{}, {}]", weights.0, weights.1)));
        }
        frobenius.inverse()?;
        Ok(CrysRep { label: label.to_string(), p, frobenius, weights, twist: 0 })
    }

    /// `Q_p(j)`.
    pub fn cyclotomic(p: u32, j: i64, prec: i64) -> Result<Self> {
        let a = PadicScalar::one(p, prec).shift(-j);
        let label = if j == 0 { "Q_p".to_string() } else { format!("Q_p({j})") };
        Self::new(&label, p, Matrix::scalar(1, &a), (j, j))
    }

    /// `Q_p(j_1) + ... + Q_p(j_d)`.
    pub fn diagonal(p: u32, twists: &[i64], prec: i64) -> Result<Self> {
        let d = twists.len();
        let mut m = Matrix::zeros(p, d, d, prec);
        for (i, &j) in twists.iter().enumerate() {
            m.set(i, i, PadicScalar::one(p, prec).shift(-j));
        }
        let lo = *twists.iter().min().ok_or_else(|| Error::Domain("empty twist list".into()))?;
        let hi = *twists.iter().max().unwrap();
        let label = format!("diag({})", twists.iter().map(|j| format!("p^{}", -j)).collect::<Vec<_>>().join(", "));
        Self::new(&label, p, m, (lo, hi))
    }

    /// Label with the accumulated twist, e.g. `Q_p(2)` for `Q_p` twisted twice.
    pub fn name(&self) -> String {
        if self.twist == 0 {
            self.label.clone()
        } else {
            format!("{}({})", self.label, self.twist)
        }
    }

    pub fn dim(&self) -> usize {
        self.frobenius.rows
    }

    pub fn frobenius_inverse(&self) -> Matrix {
        self.frobenius.inverse().expect("checked at construction")
    }

    /// Smallest `h >= 1` with `Fil^{-h} D = D`.
    pub fn min_h(&self) -> i64 {
        self.weights.1.max(1)
    }

    /// `V(j)`: `P -> p^{-j} P`, weights shifted by `j`.
    pub fn twist_rep(&self, j: i64) -> CrysRep {
        CrysRep {
            label: self.label.clone(),
            p: self.p,
            frobenius: self.frobenius.shift(-j),
            weights: (self.weights.0 + j, self.weights.1 + j),
            twist: self.twist + j,
        }
    }

    pub fn from_json(text: &str, prec: i64) -> Result<Self> {
        let raw: RepJson = serde_json::from_str(text).map_err(|e| Error::Parse(format!("representation: {e}")))?;
        if raw.frobenius.len() != raw.d || raw.frobenius.iter().any(|r| r.len() != raw.d) {
            return Err(Error::Parse(format!("frobenius must be a {0}x{0} matrix", raw.d)));
        }
        if !is_odd_prime(raw.p) {
            return Err(Error::Parse(format!("p = {} is not an odd prime", raw.p)));
        }
        let mut rows = Vec::with_capacity(raw.d);
        for (i, r) in raw.frobenius.iter().enumerate() {
            let row = r
                .iter()
                .enumerate()
                .map(|(j, s)| {
                    PadicScalar::parse_with_default(raw.p, s, prec)
                        .map_err(|e| Error::Parse(format!("frobenius[{i}][{j}]: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::new(&raw.label, raw.p, Matrix::from_rows(rows)?, (raw.weights[0], raw.weights[1]))
    }

    pub fn to_json(&self) -> String {
        let d = self.dim();
        let raw = RepJson {
            label: self.label.clone(),
            p: self.p,
            d,
            frobenius: (0..d).map(|i| (0..d).map(|j| self.frobenius.get(i, j).to_text()).collect()).collect(),
            weights: [self.weights.0, self.weights.1],
        };
        serde_json::to_string_pretty(&raw).expect("plain data")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twist_of_trivial_is_cyclotomic() {
        let p = 5;
        let v = CrysRep::cyclotomic(p, 0, 30).unwrap();
        let w = v.twist_rep(1);
        let q1 = CrysRep::cyclotomic(p, 1, 30).unwrap();
        assert!(w.frobenius.get(0, 0).eq_at(q1.frobenius.get(0, 0)));
        assert_eq!(w.weights, (1, 1));
        let back = w.twist_rep(-1);
        assert_eq!(back.frobenius, v.frobenius);
        assert_eq!(back.weights, v.weights);
        assert_eq!(back.label, v.label);
        assert_eq!(back.twist, 0);
    }

    #[test]
    fn json_roundtrip_and_singular_matrix() {
        let v = CrysRep::diagonal(3, &[0, 1], 30).unwrap();
        let back = CrysRep::from_json(&v.to_json(), 30).unwrap();
        assert_eq!(back.dim(), 2);
        assert!(back.frobenius.get(1, 1).eq_at(v.frobenius.get(1, 1)));
        let bad = r#"{"label":"x","p":3,"d":2,"frobenius":[["1","2"],["2","4"]],"weights":[0,1]}"#;
        assert_eq!(CrysRep::from_json(bad, 30), Err(Error::SingularFrobenius));
        assert!(matches!(CrysRep::from_json("{", 30), Err(Error::Parse(_))));
    }
}
