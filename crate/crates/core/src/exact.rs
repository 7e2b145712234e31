//! Exact rational scalars and dense linear algebra over `Q`.
//!
//! Every quantity in the crate (divisor coefficients, intersection numbers,
//! inductances) lives here as a [`BigRational`]; nothing is ever rounded.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type Q = BigRational;

/// Coefficient vector in a fixed basis.
pub type QVector = Vec<Q>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("singular form: determinant is zero")]
    SingularForm,
    #[error("dimension mismatch: form has dimension {form}, vector has length {vector}")]
    DimensionMismatch { form: usize, vector: usize },
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
}

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Least integer `>= a`.
pub fn ceil(a: &Q) -> BigInt {
    a.numer().div_ceil(a.denom())
}

/// Returns `(ceil(a), ceil(a) - a)`. The second component is the upper
/// fractional part `]a[`, which lies in `[0, 1)`.
pub fn ceil_and_ufrac(a: &Q) -> (BigInt, Q) {
    let c = ceil(a);
    let frac = Q::from_integer(c.clone()) - a;
    (c, frac)
}

/// Upper fractional part `]a[ = ceil(a) - a`.
pub fn ufrac(a: &Q) -> Q {
    ceil_and_ufrac(a).1
}

/// Formats a rational as `p/q`, or `p` when integral.
pub fn fmt_q(a: &Q) -> String {
    if a.is_integer() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q, LinAlgError> {
    let bad = || LinAlgError::BadRational(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Symmetric bilinear form on `Q^n`, stored densely.
#[derive(Clone, PartialEq, Eq)]
pub struct SymmetricForm {
    dim: usize,
    entries: Vec<Q>,
}

impl fmt::Debug for SymmetricForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| fmt_q(self.get(i, j))).collect())
            .collect();
        f.debug_struct("SymmetricForm").field("rows", &rows).finish()
    }
}

impl SymmetricForm {
    pub fn zero(dim: usize) -> Self {
        SymmetricForm {
            dim,
            entries: vec![Q::zero(); dim * dim],
        }
    }

    /// Builds a form from integer rows; fails unless the rows are square and symmetric.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, LinAlgError> {
        let dim = rows.len();
        let mut form = Self::zero(dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(LinAlgError::DimensionMismatch {
                    form: dim,
                    vector: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if rows[j][i] != v {
                    return Err(LinAlgError::NotSymmetric(i, j));
                }
                form.entries[i * dim + j] = q(v);
            }
        }
        Ok(form)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.entries[i * self.dim + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, value: Q) {
        self.entries[j * self.dim + i] = value.clone();
        self.entries[i * self.dim + j] = value;
    }

    pub fn negated(&self) -> Self {
        SymmetricForm {
            dim: self.dim,
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }

    /// Restriction to the basis elements listed in `idx`, in that order.
    pub fn restrict(&self, idx: &[usize]) -> Self {
        let mut out = Self::zero(idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out.entries[a * idx.len() + b] = self.get(i, j).clone();
            }
        }
        out
    }

    fn rows(&self) -> Vec<Vec<Q>> {
        self.entries
            .chunks(self.dim.max(1))
            .take(self.dim)
            .map(|r| r.to_vec())
            .collect()
    }

    pub fn mul_vec(&self, x: &[Q]) -> Result<QVector, LinAlgError> {
        self.check_len(x)?;
        Ok((0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .filter(|&j| !self.get(i, j).is_zero() && !x[j].is_zero())
                    .fold(Q::zero(), |acc, j| acc + self.get(i, j) * &x[j])
            })
            .collect())
    }

    /// `x^T M y`.
    pub fn pair(&self, x: &[Q], y: &[Q]) -> Result<Q, LinAlgError> {
        let my = self.mul_vec(y)?;
        self.check_len(x)?;
        Ok(dot(x, &my))
    }

    fn check_len(&self, x: &[Q]) -> Result<(), LinAlgError> {
        if x.len() != self.dim {
            return Err(LinAlgError::DimensionMismatch {
                form: self.dim,
                vector: x.len(),
            });
        }
        Ok(())
    }

    /// `det(M)`, by rational Gaussian elimination.
    pub fn det(&self) -> Q {
        let mut rows = self.rows();
        let mut det = Q::one();
        for c in 0..self.dim {
            let Some(p) = (c..self.dim).find(|&r| !rows[r][c].is_zero()) else {
                return Q::zero();
            };
            if p != c {
                rows.swap(p, c);
                det = -det;
            }
            let pivot = rows[c][c].clone();
            det *= &pivot;
            eliminate_below(&mut rows, c, &pivot);
        }
        det
    }

    /// `det(-M)`; the empty form has determinant 1.
    pub fn det_neg(&self) -> Q {
        let d = self.det();
        if self.dim.is_multiple_of(2) {
            d
        } else {
            -d
        }
    }

    /// Solves `M x = t` exactly.
    pub fn solve(&self, t: &[Q]) -> Result<QVector, LinAlgError> {
        self.check_len(t)?;
        let n = self.dim;
        let mut rows: Vec<Vec<Q>> = self
            .rows()
            .into_iter()
            .zip(t)
            .map(|(mut r, ti)| {
                r.push(ti.clone());
                r
            })
            .collect();
        for c in 0..n {
            let p = (c..n)
                .find(|&r| !rows[r][c].is_zero())
                .ok_or(LinAlgError::SingularForm)?;
            rows.swap(p, c);
            let pivot = rows[c][c].clone();
            eliminate_below(&mut rows, c, &pivot);
        }
        let mut x = vec![Q::zero(); n];
        for i in (0..n).rev() {
            let mut acc = rows[i][n].clone();
            for j in i + 1..n {
                if !rows[i][j].is_zero() {
                    acc -= &rows[i][j] * &x[j];
                }
            }
            x[i] = acc / &rows[i][i];
        }
        Ok(x)
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<SymmetricForm, LinAlgError> {
        let n = self.dim;
        let mut rows = self.rows();
        let mut inv: Vec<Vec<Q>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
            .collect();
        for c in 0..n {
            let p = (c..n)
                .find(|&r| !rows[r][c].is_zero())
                .ok_or(LinAlgError::SingularForm)?;
            rows.swap(p, c);
            inv.swap(p, c);
            let pivot = rows[c][c].clone();
            for k in 0..n {
                if !rows[c][k].is_zero() {
                    rows[c][k] = &rows[c][k] / &pivot;
                }
                if !inv[c][k].is_zero() {
                    inv[c][k] = &inv[c][k] / &pivot;
                }
            }
            for r in 0..n {
                if r == c || rows[r][c].is_zero() {
                    continue;
                }
                let f = rows[r][c].clone();
                for k in 0..n {
                    if !rows[c][k].is_zero() {
                        let d = &f * &rows[c][k];
                        rows[r][k] -= d;
                    }
                    if !inv[c][k].is_zero() {
                        let d = &f * &inv[c][k];
                        inv[r][k] -= d;
                    }
                }
            }
        }
        Ok(SymmetricForm {
            dim: n,
            entries: inv.into_iter().flatten().collect(),
        })
    }

    /// Leading principal minors `det(M[0..k, 0..k])` for `k = 1..=dim`.
    ///
    /// Elimination without row exchanges: while pivots are non-zero the
    /// k-th minor is the product of the first k pivots.
    pub fn leading_minors(&self) -> Vec<Q> {
        let mut rows = self.rows();
        let mut out = Vec::with_capacity(self.dim);
        let mut acc = Q::one();
        for c in 0..self.dim {
            if rows[c][c].is_zero() {
                out.extend((c + 1..=self.dim).map(|k| self.restrict(&(0..k).collect::<Vec<_>>()).det()));
                break;
            }
            let pivot = rows[c][c].clone();
            acc *= &pivot;
            out.push(acc.clone());
            eliminate_below(&mut rows, c, &pivot);
        }
        out
    }

    /// Sylvester's criterion applied to `-M`. The empty form counts as negative definite.
    pub fn is_negative_definite(&self) -> bool {
        self.negated().leading_minors().iter().all(|m| m.is_positive())
    }
}

fn eliminate_below(rows: &mut [Vec<Q>], c: usize, pivot: &Q) {
    let width = rows[c].len();
    let (head, tail) = rows.split_at_mut(c + 1);
    let prow = &head[c];
    for row in tail.iter_mut() {
        if row[c].is_zero() {
            continue;
        }
        let f = &row[c] / pivot;
        for k in c..width {
            if !prow[k].is_zero() {
                row[k] -= &f * &prow[k];
            }
        }
    }
}

pub fn dot(x: &[Q], y: &[Q]) -> Q {
    x.iter()
        .zip(y)
        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
        .fold(Q::zero(), |acc, (a, b)| acc + a * b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_and_ufrac_examples() {
        assert_eq!(ceil_and_ufrac(&qr(3, 2)), (BigInt::from(2), qr(1, 2)));
        assert_eq!(ceil_and_ufrac(&q(2)), (BigInt::from(2), q(0)));
        assert_eq!(ceil_and_ufrac(&qr(2, 3)), (BigInt::from(1), qr(1, 3)));
        assert_eq!(ceil_and_ufrac(&qr(-7, 3)), (BigInt::from(-2), qr(1, 3)));
    }

    #[test]
    fn det_neg_examples() {
        assert_eq!(SymmetricForm::zero(0).det_neg(), q(1));
        assert_eq!(SymmetricForm::from_rows(&[vec![-2]]).unwrap().det_neg(), q(2));
        let m = SymmetricForm::from_rows(&[vec![-2, 1], vec![1, -2]]).unwrap();
        assert_eq!(m.det_neg(), q(3));
    }

    #[test]
    fn solve_examples() {
        let m = SymmetricForm::from_rows(&[vec![-2]]).unwrap();
        assert_eq!(m.solve(&[q(-1)]).unwrap(), vec![qr(1, 2)]);
        assert_eq!(m.solve(&[q(0)]).unwrap(), vec![q(0)]);
        let cusp = SymmetricForm::from_rows(&[vec![-3, 0, 1], vec![0, -2, 1], vec![1, 1, -1]]).unwrap();
        assert_eq!(cusp.solve(&[q(1), q(0), q(-1)]).unwrap(), vec![q(1), q(2), q(4)]);
    }

    #[test]
    fn solve_rejects_singular() {
        let m = SymmetricForm::from_rows(&[vec![-1, 1], vec![1, -1]]).unwrap();
        assert_eq!(m.solve(&[q(1), q(0)]), Err(LinAlgError::SingularForm));
        assert_eq!(m.inverse(), Err(LinAlgError::SingularForm));
    }

    #[test]
    fn definiteness_examples() {
        assert!(SymmetricForm::from_rows(&[vec![-2]]).unwrap().is_negative_definite());
        assert!(!SymmetricForm::from_rows(&[vec![-1, 1], vec![1, -1]])
            .unwrap()
            .is_negative_definite());
        assert!(SymmetricForm::zero(0).is_negative_definite());
    }

    #[test]
    fn from_rows_rejects_asymmetric() {
        assert_eq!(
            SymmetricForm::from_rows(&[vec![1, 2], vec![3, 4]]),
            Err(LinAlgError::NotSymmetric(0, 1))
        );
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "-5", "5/6", "-1/6"] {
            assert_eq!(fmt_q(&parse_q(s).unwrap()), s);
        }
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }
}
