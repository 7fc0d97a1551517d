use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Dense row-major square matrix, small (`n ≤ 8`) and meant to be symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, v) in d.iter().enumerate() {
            m.set(i, i, *v);
        }
        m
    }

    pub fn from_rows(n: usize, rows: &[f64]) -> Result<Self> {
        if rows.len() != n * n {
            return Err(Error::InvalidData("matrix data length is not n*n"));
        }
        Ok(SymMatrix { n, data: rows.to_vec() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn scaled_add(&self, other: &SymMatrix, s: f64) -> SymMatrix {
        let mut out = self.clone();
        for (o, v) in out.data.iter_mut().zip(&other.data) {
            *o += s * v;
        }
        out
    }

    fn off_diagonal_norm2(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    acc += self.get(i, j) * self.get(i, j);
                }
            }
        }
        acc
    }
}

/// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations,
/// sorted ascending. Sweeps until the off-diagonal Frobenius mass is below
/// `1e-24` relative to the total.
pub fn sym_eigen(m: &SymMatrix) -> Result<Vec<f64>> {
    let n = m.dim();
    if n == 0 || n > 8 {
        return Err(Error::InvalidData("sym_eigen supports 1..=8 rows"));
    }
    if !m.is_symmetric() {
        return Err(Error::InvalidData("matrix is not symmetric"));
    }
    let mut a = m.clone();
    let scale: f64 = a.data.iter().map(|v| v * v).sum();
    for _sweep in 0..100 {
        if a.off_diagonal_norm2() <= 1e-24 * scale.max(f64::MIN_POSITIVE) {
            let mut ev: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
            ev.sort_by(f64::total_cmp);
            return Ok(ev);
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + crate::math::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / crate::math::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
            }
        }
    }
    Err(Error::NoConvergence("Jacobi eigenvalue sweeps"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_diagonal() {
        assert_eq!(sym_eigen(&SymMatrix::identity(5)).unwrap(), vec![1.0; 5]);
        let ev = sym_eigen(&SymMatrix::from_diagonal(&[3.0, -1.0, 2.0])).unwrap();
        assert_eq!(ev, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two_closed_form() {
        let m = SymMatrix::from_rows(2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
        let ev = sym_eigen(&m).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn trace_preserved() {
        let mut m = SymMatrix::zeros(6);
        for i in 0..6 {
            for j in 0..=i {
                let v = ((i * 7 + j * 3) % 11) as f64 - 5.0;
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        let ev = sym_eigen(&m).unwrap();
        assert!((ev.iter().sum::<f64>() - m.trace()).abs() < 1e-10);
    }

    #[test]
    fn asymmetric_rejected() {
        let m = SymMatrix::from_rows(2, &[1.0, 2.0, 0.0, 1.0]).unwrap();
        assert!(sym_eigen(&m).is_err());
    }
}
