//! Independent reference implementations used by the integration tests.
//! Nothing here calls the library's chain, tau or Schur code paths.
#![allow(dead_code)]

use tlkp_core::field::Field;
use tlkp_core::series::LaurentSeries;

/// `a + b·ε` with `ε² = 0`.
#[derive(Clone, Debug)]
pub struct Dual<F> {
    pub re: F,
    pub eps: F,
}

impl<F: Field> Dual<F> {
    pub fn constant(x: F) -> Self {
        Dual { re: x, eps: F::zero() }
    }
    pub fn variable(x: F) -> Self {
        Dual { re: x, eps: F::one() }
    }
    pub fn add(&self, o: &Self) -> Self {
        Dual { re: self.re.clone() + &o.re, eps: self.eps.clone() + &o.eps }
    }
    pub fn sub(&self, o: &Self) -> Self {
        Dual { re: self.re.clone() - &o.re, eps: self.eps.clone() - &o.eps }
    }
    pub fn mul(&self, o: &Self) -> Self {
        Dual {
            re: self.re.clone() * &o.re,
            eps: self.re.clone() * &o.eps + self.eps.clone() * &o.re,
        }
    }
    pub fn inv(&self) -> Self {
        let r = self.re.inv().expect("dual inverse of zero");
        Dual { re: r.clone(), eps: -(self.eps.clone() * &r * &r) }
    }
    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }
    pub fn scale(&self, k: &F) -> Self {
        Dual { re: self.re.clone() * k, eps: self.eps.clone() * k }
    }
    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Dual::constant(F::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
    /// `x − 1/x`.
    pub fn w(&self) -> Self {
        self.sub(&self.inv())
    }
}

/// The transfer-matrix eigenvalue typed in directly from its defining formula.
pub fn lambda_dual<F: Field>(n: usize, q: &F, v: &Dual<F>, u: &[Dual<F>]) -> Dual<F> {
    let qd = Dual::constant(q.clone());
    let qi = Dual::constant(q.inv().unwrap());
    let q2 = qd.mul(&qd);
    let v2 = v.mul(v);
    let mut pa = Dual::constant(F::one());
    let mut pb = Dual::constant(F::one());
    for uj in u {
        let den = v.div(uj).w().mul(&v.mul(&qd).mul(uj).w());
        pa = pa.mul(&v.mul(&qi).div(uj).w().mul(&v.mul(uj).w()).div(&den));
        pb = pb.mul(&v.mul(&qd).div(uj).w().mul(&v.mul(&q2).mul(uj).w()).div(&den));
    }
    let first = v2.mul(&q2).w().mul(&v.mul(&qd).w().pow(2 * n as u32)).mul(&pa);
    let second = v2.w().mul(&v.w().pow(2 * n as u32)).mul(&pb);
    let pref = v2.mul(&qd).w().inv();
    Dual::constant(-F::one()).mul(&pref).mul(&first.add(&second))
}

pub fn lambda_value<F: Field>(n: usize, q: &F, v: &F, u: &[F]) -> F {
    let ud: Vec<Dual<F>> = u.iter().cloned().map(Dual::constant).collect();
    lambda_dual(n, q, &Dual::constant(v.clone()), &ud).re
}

/// `∂_{uᵢ}Λ(v)` by forward-mode differentiation.
pub fn lambda_derivative<F: Field>(n: usize, q: &F, i: usize, v: &F, u: &[F]) -> F {
    let ud: Vec<Dual<F>> = u
        .iter()
        .enumerate()
        .map(|(k, x)| if k == i { Dual::variable(x.clone()) } else { Dual::constant(x.clone()) })
        .collect();
    lambda_dual(n, q, &Dual::constant(v.clone()), &ud).eps
}

fn w<F: Field>(x: F) -> F {
    let inv = x.inv().expect("w at zero");
    x - inv
}

/// Leibniz expansion over all permutations.
pub fn det_leibniz<F: Field>(m: &[Vec<F>]) -> F {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut acc = F::zero();
    permute(&mut perm, 0, &mut |p| {
        let mut term = F::one();
        for (i, &j) in p.iter().enumerate() {
            term = term * &m[i][j];
        }
        if parity(p) {
            acc = acc.clone() - term;
        } else {
            acc = acc.clone() + term;
        }
    });
    acc
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// True for odd permutations.
pub fn parity(p: &[usize]) -> bool {
    let mut odd = false;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                odd = !odd;
            }
        }
    }
    odd
}

/// All permutations of `0..n` with their parities.
pub fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    permute(&mut p, 0, &mut |x| out.push((x.to_vec(), parity(x))));
    out
}

/// The kernel from its defining ratio of determinants, with derivatives by
/// dual numbers and determinants by permutation sums.
pub fn kernel_oracle<F: Field>(n: usize, q: &F, u: &[F], v: &[F]) -> F {
    let m = u.len();
    let num: Vec<Vec<F>> = (0..m)
        .map(|i| (0..m).map(|j| lambda_derivative(n, q, i, &v[j], u)).collect())
        .collect();
    let den: Vec<Vec<F>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let a = w(v[i].clone() / &u[j]) * w(v[i].clone() * &u[j] * q);
                    a.inv().unwrap()
                })
                .collect()
        })
        .collect();
    det_leibniz(&num) / det_leibniz(&den)
}

/// The full Slavnov product, prefactor and kernel together.
pub fn slavnov_oracle<F: Field>(n: usize, spin_twice: u32, q: &F, big_q: &F, u: &[F], v: &[F]) -> F {
    let m = u.len();
    let mut g = F::from_ratio(1, 1 << m);
    g = g * big_q.powi(-(2 * m as i64) * spin_twice as i64 / 2).unwrap();
    let q2 = q.clone() * q;
    for j in 0..m {
        let uj2 = u[j].clone() * &u[j];
        g = g * w(u[j].clone()).pow(2 * n as u32) * &u[j] * w(uj2.clone());
        g = g / (w(uj2) * w(v[j].clone() * &v[j] * &q2));
    }
    for i in 0..m {
        for j in 0..i {
            let uu = u[i].clone() * &u[j];
            g = g * w(uu.clone() * &q2) / w(uu);
        }
    }
    g * kernel_oracle(n, q, u, v)
}

/// `Π_{i<j}(xᵢ − xⱼ)`.
pub fn vandermonde_oracle<F: Field>(x: &[F]) -> F {
    let mut acc = F::one();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            acc = acc * (x[i].clone() - &x[j]);
        }
    }
    acc
}

/// Determinant of a matrix of series by permutation sums.
pub fn series_det<F: Field>(m: &[Vec<LaurentSeries<F>>], var: &str, trunc: i32) -> LaurentSeries<F> {
    let mut acc = LaurentSeries::zero(var, trunc);
    for (p, odd) in permutations(m.len()) {
        let mut term = LaurentSeries::constant(var, F::one());
        for (i, &j) in p.iter().enumerate() {
            term = term.mul(&m[i][j]).unwrap();
        }
        acc = if odd { acc.sub(&term).unwrap() } else { acc.add(&term).unwrap() };
    }
    acc
}

/// Monomial expansion of `s_λ(x)` as a sum over semistandard tableaux,
/// enumerated by filling rows left to right.
pub fn schur_tableaux<F: Field>(shape: &[u32], x: &[F]) -> F {
    let cells: Vec<(usize, usize)> = shape
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len as usize).map(move |c| (r, c)))
        .collect();
    let mut filling = vec![vec![0usize; shape.first().copied().unwrap_or(0) as usize]; shape.len()];
    let mut acc = F::zero();
    fill_tableau(&cells, 0, x, &mut filling, &mut acc);
    acc
}

fn fill_tableau<F: Field>(cells: &[(usize, usize)], k: usize, x: &[F], t: &mut Vec<Vec<usize>>, acc: &mut F) {
    if k == cells.len() {
        let mut term = F::one();
        for &(r, c) in cells {
            term = term * &x[t[r][c]];
        }
        *acc = acc.clone() + term;
        return;
    }
    let (r, c) = cells[k];
    for val in 0..x.len() {
        if c > 0 && val < t[r][c - 1] {
            continue;
        }
        if r > 0 && val <= t[r - 1][c] {
            continue;
        }
        t[r][c] = val;
        fill_tableau(cells, k + 1, x, t, acc);
    }
}
