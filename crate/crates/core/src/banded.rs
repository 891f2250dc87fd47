//! Complex banded LU with partial pivoting, stored column-wise with room
//! for fill-in.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub(crate) struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    ab: Vec<Complex64>,
}

impl BandMatrix {
    pub(crate) fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        Self {
            n,
            kl,
            ku,
            ab: vec![Complex64::new(0.0, 0.0); (2 * kl + ku + 1) * n],
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.n
    }

    fn ldab(&self) -> usize {
        2 * self.kl + self.ku + 1
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i + self.kl + self.ku >= j && i <= j + self.kl);
        j * self.ldab() + self.kl + self.ku + i - j
    }

    pub(crate) fn add(&mut self, i: usize, j: usize, v: Complex64) {
        assert!(j <= i + self.ku && i <= j + self.kl, "entry ({i}, {j}) outside the band");
        let t = self.idx(i, j);
        self.ab[t] += v;
    }

    #[cfg(test)]
    pub(crate) fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.n];
        for (j, &xj) in x.iter().enumerate() {
            let lo = j.saturating_sub(self.ku);
            let hi = (j + self.kl).min(self.n - 1);
            for (i, yi) in y.iter_mut().enumerate().take(hi + 1).skip(lo) {
                *yi += self.ab[self.idx(i, j)] * xj;
            }
        }
        y
    }

    /// Factors in place. A zero pivot is an error naming its column.
    pub(crate) fn factor(mut self) -> Result<BandLu> {
        let n = self.n;
        let (kl, ku) = (self.kl, self.ku);
        let mut ipiv = vec![0; n];
        let mut max_pivot: f64 = 0.0;
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            let mut p = j;
            let mut best = self.ab[self.idx(j, j)].norm();
            for i in j + 1..=j + km {
                let m = self.ab[self.idx(i, j)].norm();
                if m > best {
                    best = m;
                    p = i;
                }
            }
            ipiv[j] = p;
            max_pivot = max_pivot.max(best);
            if best == 0.0 || !best.is_finite() {
                return Err(Error::SingularSystem { pivot: j });
            }
            let ju = (j + ku + kl).min(n - 1);
            if p != j {
                for c in j..=ju {
                    let (a, b) = (self.idx(j, c), self.idx(p, c));
                    self.ab.swap(a, b);
                }
            }
            let d = self.ab[self.idx(j, j)];
            for i in j + 1..=j + km {
                let t = self.idx(i, j);
                let l = self.ab[t] / d;
                self.ab[t] = l;
                if l == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in j + 1..=ju {
                    let u = self.ab[self.idx(j, c)];
                    let t = self.idx(i, c);
                    self.ab[t] -= l * u;
                }
            }
        }
        Ok(BandLu { m: self, ipiv })
    }
}

#[derive(Debug, Clone)]
pub(crate) struct BandLu {
    m: BandMatrix,
    ipiv: Vec<usize>,
}

impl BandLu {
    fn at(&self, i: usize, j: usize) -> Complex64 {
        self.m.ab[self.m.idx(i, j)]
    }

    pub(crate) fn solve(&self, b: &mut [Complex64]) {
        let n = self.m.n;
        let (kl, w) = (self.m.kl, self.m.kl + self.m.ku);
        for j in 0..n {
            b.swap(j, self.ipiv[j]);
            let bj = b[j];
            for i in j + 1..=(j + kl).min(n - 1) {
                b[i] -= self.at(i, j) * bj;
            }
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for c in i + 1..=(i + w).min(n - 1) {
                s -= self.at(i, c) * b[c];
            }
            b[i] = s / self.at(i, i);
        }
    }

    /// Solves `Aᴴ y = b` in place.
    pub(crate) fn solve_adjoint(&self, b: &mut [Complex64]) {
        let n = self.m.n;
        let (kl, w) = (self.m.kl, self.m.kl + self.m.ku);
        for i in 0..n {
            let mut s = b[i];
            for c in i.saturating_sub(w)..i {
                s -= self.at(c, i).conj() * b[c];
            }
            b[i] = s / self.at(i, i).conj();
        }
        for j in (0..n).rev() {
            let mut s = b[j];
            for i in j + 1..=(j + kl).min(n - 1) {
                s -= self.at(i, j).conj() * b[i];
            }
            b[j] = s;
            b.swap(j, self.ipiv[j]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample(n: usize, kl: usize, ku: usize, seed: u64) -> (BandMatrix, Vec<Vec<Complex64>>) {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut m = BandMatrix::zeros(n, kl, ku);
        let mut dense = vec![vec![c(0.0, 0.0); n]; n];
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                // small diagonal forces pivoting
                let v = if i == j { c(0.01 * next(), 0.0) } else { c(next(), next()) };
                m.add(i, j, v);
                dense[i][j] = v;
            }
        }
        (m, dense)
    }

    #[test]
    fn solve_and_adjoint_solve_match_dense_products() {
        let (n, kl, ku) = (12, 2, 2);
        let (m, dense) = sample(n, kl, ku, 7);
        let x: Vec<Complex64> = (0..n).map(|i| c(i as f64, 1.0 - i as f64 * 0.5)).collect();
        let b = m.mul_vec(&x);
        for (i, row) in dense.iter().enumerate() {
            let d: Complex64 = row.iter().zip(&x).map(|(a, b)| a * b).sum();
            assert!((d - b[i]).norm() < 1e-12);
        }
        let lu = m.factor().unwrap();
        let mut y = b.clone();
        lu.solve(&mut y);
        for (a, b) in y.iter().zip(&x) {
            assert!((a - b).norm() < 1e-10, "{a} {b}");
        }
        // Aᴴ x
        let bh: Vec<Complex64> = (0..n)
            .map(|j| (0..n).map(|i| dense[i][j].conj() * x[i]).sum())
            .collect();
        let mut z = bh;
        lu.solve_adjoint(&mut z);
        for (a, b) in z.iter().zip(&x) {
            assert!((a - b).norm() < 1e-10, "{a} {b}");
        }
    }

    #[test]
    fn singular_matrix_reports_pivot() {
        let mut m = BandMatrix::zeros(3, 1, 1);
        m.add(0, 0, c(1.0, 0.0));
        m.add(1, 0, c(1.0, 0.0));
        m.add(2, 2, c(1.0, 0.0));
        assert_eq!(m.factor().unwrap_err(), Error::SingularSystem { pivot: 1 });
    }
}
