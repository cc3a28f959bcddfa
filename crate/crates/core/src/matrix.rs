//! Dense square matrices and determinants.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::{Field, RingElement};

#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix<R> {
    dim: usize,
    entries: Vec<R>,
}

impl<R: RingElement> SquareMatrix<R> {
    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Dimension("matrix must be at least 1×1".into()));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != dim) {
            return Err(Error::Dimension(format!(
                "row {bad} has {} entries, expected {dim}",
                rows[bad].len()
            )));
        }
        Ok(SquareMatrix { dim, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        assert!(dim > 0, "matrix must be at least 1×1");
        let entries = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        SquareMatrix { dim, entries }
    }

    /// Like [`from_fn`](Self::from_fn) with a fallible entry function.
    pub fn try_from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Result<R>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension("matrix must be at least 1×1".into()));
        }
        let entries = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect::<Result<_>>()?;
        Ok(SquareMatrix { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.entries[i * self.dim + j]
    }

    pub fn transpose(&self) -> Self {
        SquareMatrix::from_fn(self.dim, |i, j| self.get(j, i).clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.dim {
                self.entries.swap(a * self.dim + j, b * self.dim + j);
            }
        }
    }

    /// Division-free determinant by Laplace expansion along rows, memoized
    /// on the set of remaining columns. Works over any commutative ring;
    /// cost is `O(2^M · M)` ring products.
    pub fn det_ring(&self) -> R {
        let n = self.dim;
        assert!(n <= 20, "division-free determinant limited to 20×20");
        let zero = self.get(0, 0).zero_like();
        // memo[cols] = det of the submatrix of the last |cols| rows on those columns.
        let mut memo: HashMap<u32, R> = HashMap::new();
        memo.insert(0, self.get(0, 0).one_like());
        for size in 1..=n {
            let row = n - size;
            let mut next = HashMap::new();
            for (&cols, _) in memo.iter() {
                for c in 0..n {
                    if cols & (1 << c) != 0 {
                        continue;
                    }
                    let key = cols | (1 << c);
                    if next.contains_key(&key) {
                        continue;
                    }
                    next.insert(key, expand_row(self, row, key, &memo, &zero));
                }
            }
            memo = next;
        }
        memo.remove(&((1u32 << n) - 1)).expect("full column set")
    }
}

/// Expands along `row` over the columns in `cols`, using minors from `memo`.
fn expand_row<R: RingElement>(
    m: &SquareMatrix<R>,
    row: usize,
    cols: u32,
    memo: &HashMap<u32, R>,
    zero: &R,
) -> R {
    let mut acc = zero.clone();
    let mut sign_pos = true;
    for c in 0..m.dim {
        if cols & (1 << c) == 0 {
            continue;
        }
        let entry = m.get(row, c);
        if !entry.is_zero() {
            let minor = &memo[&(cols & !(1 << c))];
            let term = entry.clone() * minor;
            acc = if sign_pos { acc + term } else { acc - term };
        }
        sign_pos = !sign_pos;
    }
    acc
}

impl<F: Field> SquareMatrix<F> {
    /// Determinant by fraction-free Bareiss elimination. Inexact fields pick
    /// the largest available pivot; exact fields take the first nonzero one.
    pub fn det(&self) -> F {
        let n = self.dim;
        let mut a = self.clone();
        let mut sign_flip = false;
        let mut prev = F::one();
        for k in 0..n - 1 {
            let Some(p) = a.choose_pivot(k) else {
                return F::zero();
            };
            if p != k {
                a.swap_rows(p, k);
                sign_flip = !sign_flip;
            }
            let pivot = a.get(k, k).clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = pivot.clone() * a.get(i, j) - a.get(i, k).clone() * a.get(k, j);
                    a.entries[i * n + j] = v / &prev;
                }
                a.entries[i * n + k] = F::zero();
            }
            prev = pivot;
        }
        let d = a.get(n - 1, n - 1).clone();
        if sign_flip {
            -d
        } else {
            d
        }
    }

    fn choose_pivot(&self, k: usize) -> Option<usize> {
        let rows = k..self.dim;
        if F::is_exact() {
            rows.into_iter().find(|&i| !self.get(i, k).is_zero())
        } else {
            rows.into_iter()
                .filter(|&i| !self.get(i, k).is_zero())
                .max_by(|&a, &b| {
                    self.get(a, k)
                        .magnitude()
                        .partial_cmp(&self.get(b, k).magnitude())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
        }
    }

    /// Solves `A x = b` by Gaussian elimination with pivoting.
    pub fn solve(&self, b: &[F]) -> Result<Vec<F>> {
        let n = self.dim;
        if b.len() != n {
            return Err(Error::Dimension(format!("right-hand side has {} entries, expected {n}", b.len())));
        }
        let mut a = self.clone();
        let mut rhs = b.to_vec();
        for k in 0..n {
            let p = a
                .choose_pivot(k)
                .filter(|&p| !a.get(p, k).is_negligible())
                .ok_or_else(|| Error::Singular(format!("no pivot in column {k}")))?;
            if p != k {
                a.swap_rows(p, k);
                rhs.swap(p, k);
            }
            let pivot = a.get(k, k).clone();
            for i in k + 1..n {
                let factor = a.get(i, k).clone() / &pivot;
                if factor.is_zero() {
                    continue;
                }
                for j in k..n {
                    let v = a.get(i, j).clone() - factor.clone() * a.get(k, j);
                    a.entries[i * n + j] = v;
                }
                rhs[i] = rhs[i].clone() - factor * &rhs[k];
            }
        }
        let mut x = vec![F::zero(); n];
        for i in (0..n).rev() {
            let mut acc = rhs[i].clone();
            for j in i + 1..n {
                acc = acc - a.get(i, j).clone() * &x[j];
            }
            x[i] = acc / a.get(i, i);
        }
        Ok(x)
    }
}

/// `Π_{i<j} (xᵢ - xⱼ)`; 1 for fewer than two points.
pub fn vandermonde<F: Field>(points: &[F]) -> F {
    let mut acc = F::one();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            acc = acc * (points[i].clone() - &points[j]);
        }
    }
    acc
}

/// Rejects repeated entries, reporting the first coinciding pair.
pub fn check_distinct<F: Field>(points: &[F]) -> Result<()> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if (points[i].clone() - &points[j]).is_negligible() {
                return Err(Error::RepeatedPoint(i, j));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Float, Rational};

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn small_determinants() {
        let one = SquareMatrix::from_rows(vec![vec![r(1, 1)]]).unwrap();
        assert_eq!(one.det(), r(1, 1));
        let id = SquareMatrix::from_fn(2, |i, j| if i == j { r(1, 1) } else { r(0, 1) });
        assert_eq!(id.det(), r(1, 1));
        let cauchy =
            SquareMatrix::from_rows(vec![vec![r(-1, 3), r(-1, 5)], vec![r(-1, 2), r(-1, 4)]]).unwrap();
        assert_eq!(cauchy.det(), r(-1, 60));
        assert_eq!(cauchy.det_ring(), r(-1, 60));
    }

    #[test]
    fn pivoting_needed() {
        let m = SquareMatrix::from_rows(vec![
            vec![r(0, 1), r(1, 1), r(2, 1)],
            vec![r(1, 1), r(0, 1), r(3, 1)],
            vec![r(4, 1), r(-3, 1), r(8, 1)],
        ])
        .unwrap();
        // 0(0+9) - 1(8-12) + 2(-3-0) = -2
        assert_eq!(m.det(), r(-2, 1));
        assert_eq!(m.det_ring(), r(-2, 1));
    }

    #[test]
    fn singular_is_zero() {
        let m = SquareMatrix::from_fn(3, |i, j| r((i + j) as i64, 1));
        assert_eq!(m.det(), r(0, 1));
    }

    #[test]
    fn vandermonde_examples() {
        assert_eq!(vandermonde(&[r(5, 1)]), r(1, 1));
        assert_eq!(vandermonde(&[r(2, 1), r(1, 1)]), r(1, 1));
        assert_eq!(vandermonde(&[r(3, 1), r(2, 1), r(1, 1)]), r(2, 1));
    }

    #[test]
    fn solve_roundtrip() {
        let m = SquareMatrix::from_rows(vec![
            vec![Float::from_i64(0), Float::from_i64(2)],
            vec![Float::from_i64(3), Float::from_i64(1)],
        ])
        .unwrap();
        let x = m.solve(&[Float::from_i64(4), Float::from_i64(5)]).unwrap();
        assert!(x[0].approx_eq(&Float::from_i64(1)));
        assert!(x[1].approx_eq(&Float::from_i64(2)));
    }

    #[test]
    fn ragged_rejected() {
        assert!(SquareMatrix::from_rows(vec![vec![r(1, 1), r(2, 1)], vec![r(3, 1)]]).is_err());
    }
}
