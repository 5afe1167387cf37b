//! Small dense complex matrices and a Hermitian eigensolver.
//!
//! Matrices here are at most a few tens of rows, so everything is dense and
//! row-major. The eigensolver is the cyclic complex Jacobi method, which is
//! accurate to a few ulps of the matrix norm for every eigenvalue and gives
//! orthonormal eigenvectors without a separate re-orthogonalization pass.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use libm::{fabs, sqrt};

use crate::{Error, Result, C64};

const ZERO: C64 = C64::new(0.0, 0.0);
const MAX_SWEEPS: usize = 64;

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_rows(dim: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::BasisMismatch { expected: dim * dim, found: data.len() });
        }
        Ok(CMatrix { dim, data })
    }

    /// Real symmetric convenience constructor.
    pub fn from_real_rows(dim: usize, data: &[f64]) -> Result<Self> {
        Self::from_rows(dim, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, factor: f64) -> Self {
        CMatrix { dim: self.dim, data: self.data.iter().map(|z| z * factor).collect() }
    }

    pub fn matmul(&self, other: &CMatrix) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::BasisMismatch { expected: self.dim, found: other.dim });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dim {
            return Err(Error::BasisMismatch { expected: self.dim, found: v.len() });
        }
        Ok((0..self.dim).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect())
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest `|H_ij − conj(H_ji)|` over all entries.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Hermitian within `rel_tol` of the largest entry.
    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.hermiticity_defect() <= rel_tol * self.max_abs().max(f64::MIN_POSITIVE)
    }

    /// Eigendecomposition of a Hermitian matrix. Only the upper triangle is
    /// read; the lower triangle is assumed to be its conjugate.
    pub fn eigh(&self) -> Result<HermitianEigen> {
        jacobi_eigh(self)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

/// `A = V · diag(values) · V†`, eigenvalues ascending, eigenvectors in the
/// columns of `vectors`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    /// `V† v`: coordinates of `v` in the eigenbasis.
    pub fn to_eigenbasis(&self, v: &[C64]) -> Vec<C64> {
        let n = self.values.len();
        (0..n).map(|k| (0..n).map(|i| self.vectors[(i, k)].conj() * v[i]).sum()).collect()
    }

    /// `V c`: back from eigenbasis coordinates.
    pub fn from_eigenbasis(&self, c: &[C64]) -> Vec<C64> {
        let n = self.values.len();
        (0..n).map(|i| (0..n).map(|k| self.vectors[(i, k)] * c[k]).sum()).collect()
    }

    /// Applies `exp(−i·A·t)` to `v`.
    pub fn evolve(&self, v: &[C64], t: f64) -> Vec<C64> {
        let c: Vec<C64> = self
            .to_eigenbasis(v)
            .into_iter()
            .zip(&self.values)
            .map(|(ck, &lambda)| ck * C64::from_polar(1.0, -lambda * t))
            .collect();
        self.from_eigenbasis(&c)
    }
}

fn off_diagonal_norm_sqr(a: &CMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            s += a[(i, j)].norm_sqr();
        }
    }
    s
}

fn jacobi_eigh(input: &CMatrix) -> Result<HermitianEigen> {
    let n = input.dim();
    // symmetrize from the upper triangle
    let mut a = input.clone();
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            a[(j, i)] = a[(i, j)].conj();
        }
    }
    let mut v = CMatrix::identity(n);
    let scale: f64 = a.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>();
    if !scale.is_finite() {
        return Err(Error::Numerical("matrix has non-finite entries".into()));
    }
    let threshold = scale * (f64::EPSILON * f64::EPSILON) * 1e-4;

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm_sqr(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm_sqr(&a) > threshold {
        return Err(Error::Numerical("Jacobi eigensolver did not converge".into()));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut vectors = CMatrix::zeros(n);
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, col)] = v[(i, k)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// One complex Jacobi rotation zeroing `a[p][q]`.
///
/// The rotation is `J = D·R` with `D = diag(1, e^{−iθ})` on (p, q), which
/// makes the pivot real, followed by the usual real Givens rotation `R`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // skip pivots already negligible against both diagonal entries
    if r < f64::EPSILON * 1e-3 * (fabs(app) + fabs(aqq)) {
        a[(p, q)] = ZERO;
        a[(q, p)] = ZERO;
        return;
    }
    let phase = apq / r; // e^{iθ}
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta >= 0.0 {
        1.0 / (theta + sqrt(theta * theta + 1.0))
    } else {
        -1.0 / (-theta + sqrt(theta * theta + 1.0))
    };
    let c = 1.0 / sqrt(t * t + 1.0);
    let s = t * c;
    let n = a.dim();

    // columns: A ← A·J
    let pc = phase.conj();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * pc * s;
        a[(k, q)] = akp * s + akq * pc * c;
    }
    // rows: A ← J†·A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * phase * s;
        a[(q, k)] = apk * s + aqk * phase * c;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(app - t * r, 0.0);
    a[(q, q)] = C64::new(aqq + t * r, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * pc * s;
        v[(k, q)] = vkp * s + vkq * pc * c;
    }
}

/// `⟨a|b⟩`.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    sqrt(v.iter().map(|z| z.norm_sqr()).sum())
}

/// `|⟨a|b⟩|²`, i.e. state fidelity modulo global phase for normalized inputs.
pub fn fidelity(a: &[C64], b: &[C64]) -> f64 {
    inner(a, b).norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn two_level_eigenvalues() {
        let m = CMatrix::from_real_rows(2, &[0.0, 0.5, 0.5, 0.0]).unwrap();
        let e = m.eigh().unwrap();
        assert!((e.values[0] + 0.5).abs() < 1e-15);
        assert!((e.values[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn complex_pivot_reconstructs() {
        let m = CMatrix::from_rows(
            3,
            vec![
                c(1.0, 0.0),
                c(0.3, 0.4),
                c(0.0, -0.2),
                c(0.3, -0.4),
                c(-2.0, 0.0),
                c(0.1, 0.1),
                c(0.0, 0.2),
                c(0.1, -0.1),
                c(0.5, 0.0),
            ],
        )
        .unwrap();
        let e = m.eigh().unwrap();
        let vdv = {
            let mut d = CMatrix::zeros(3);
            for i in 0..3 {
                d[(i, i)] = c(e.values[i], 0.0);
            }
            e.vectors.matmul(&d).unwrap().matmul(&e.vectors.adjoint()).unwrap()
        };
        for i in 0..3 {
            for j in 0..3 {
                assert!((vdv[(i, j)] - m[(i, j)]).norm() < 1e-14);
            }
        }
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn diagonal_is_untouched() {
        let m = CMatrix::from_real_rows(3, &[3.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 2.0]).unwrap();
        let e = m.eigh().unwrap();
        assert_eq!(e.values, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn wrong_length_rejected() {
        assert!(CMatrix::from_rows(2, vec![ZERO; 3]).is_err());
    }
}
