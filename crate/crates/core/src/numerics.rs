//! Dense complex linear algebra.
//!
//! [`ComplexMatrix`] is a small row-major matrix used for every operator in
//! the crate (Kraus elements, Choi matrices, states, SDP blocks). The
//! Hermitian eigensolver and the SVD are delegated to `nalgebra`; everything
//! else is written out directly since the matrices never exceed 16×16 here.
//!
//! Eigenvalues are returned in descending order. Degenerate eigenvalues keep
//! the (stable) order produced by the sort, and their eigenvectors span the
//! eigenspace but are otherwise arbitrary.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::TOL;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

/// Which tensor factor a partial trace removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major data, rejecting wrong lengths and non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("empty shape {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(k) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for col in 0..cols {
                data.push(f(r, col));
            }
        }
        Self { rows, cols, data }
    }

    /// Square matrix from nested real rows. Panics on ragged input; meant for literals.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let m = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        Self::from_fn(n, m, |i, j| c(rows[i][j], 0.0))
    }

    /// Matrix from nested complex rows. Panics on ragged input; meant for literals.
    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let n = rows.len();
        let m = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        Self::from_fn(n, m, |i, j| rows[i][j])
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { c(values[i], 0.0) } else { ZERO })
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    /// `|e_i⟩⟨e_j|` in dimension `n`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = ONE;
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, col)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_c(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius distance; panics on shape mismatch.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `Re Tr(A† B)`, the real Hilbert–Schmidt inner product.
    pub fn inner_re(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.conj() * b).re)
            .sum()
    }

    /// Max abs entry of `self - self†`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `(self + self†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale(0.5)
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(
            self.cols, rhs.rows,
            "matmul shape mismatch {:?} x {:?}",
            self.shape(),
            rhs.shape()
        );
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let rrow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `A X A†`.
    pub fn conjugate(&self, x: &Self) -> Self {
        self.matmul(x).matmul(&self.adjoint())
    }

    pub fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<C64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    /// Applies a real function to the spectrum of a Hermitian matrix.
    pub fn hermitian_fn(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let eig = hermitian_eig(self)?;
        let vals: Vec<f64> = eig.values.iter().map(|&l| f(l)).collect();
        Ok(eig.reconstruct_with(&vals))
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(r) {
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (r, col): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + col]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, col): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + col]
    }
}

macro_rules! elementwise {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                assert_eq!(self.shape(), rhs.shape(), "elementwise shape mismatch");
                ComplexMatrix {
                    rows: self.rows,
                    cols: self.cols,
                    data: self.data.iter().zip(&rhs.data).map(|(a, b)| a $op b).collect(),
                }
            }
        }
        impl $trait<ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                (&self).$method(rhs)
            }
        }
    };
}

elementwise!(Add, add, +);
elementwise!(Sub, sub, -);

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.shape(), rhs.shape());
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl SubAssign<&ComplexMatrix> for ComplexMatrix {
    fn sub_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.shape(), rhs.shape());
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
    }
}

impl Mul<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Mul<ComplexMatrix> for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        self.matmul(&rhs)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale(-1.0)
    }
}

/// The Pauli matrices `σ_x, σ_y, σ_z`.
pub fn pauli() -> [ComplexMatrix; 3] {
    [
        ComplexMatrix::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]),
        ComplexMatrix::from_rows(&[&[ZERO, -I], &[I, ZERO]]),
        ComplexMatrix::from_rows(&[&[ONE, ZERO], &[ZERO, -ONE]]),
    ]
}

/// Kronecker product; dimensions multiply.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    ComplexMatrix::from_fn(ar * br, ac * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Partial trace of an operator on `A ⊗ B` over the named factor.
pub fn partial_trace(
    x: &ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
    subsystem: Subsystem,
) -> Result<ComplexMatrix> {
    let n = dim_a * dim_b;
    if x.shape() != (n, n) {
        return Err(Error::Dimension(format!(
            "partial trace of a {}x{} matrix over {dim_a}x{dim_b}",
            x.rows(),
            x.cols()
        )));
    }
    Ok(match subsystem {
        Subsystem::B => ComplexMatrix::from_fn(dim_a, dim_a, |i, j| {
            (0..dim_b).map(|k| x[(i * dim_b + k, j * dim_b + k)]).sum()
        }),
        Subsystem::A => ComplexMatrix::from_fn(dim_b, dim_b, |i, j| {
            (0..dim_a).map(|k| x[(k * dim_b + i, k * dim_b + j)]).sum()
        }),
    })
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    /// Columns are the eigenvectors, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// `V diag(vals) V†`.
    pub fn reconstruct_with(&self, vals: &[f64]) -> ComplexMatrix {
        let n = self.vectors.rows();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            vals.iter()
                .enumerate()
                .map(|(k, &l)| v[(i, k)] * v[(j, k)].conj() * l)
                .sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(&self.values)
    }

    pub fn min(&self) -> f64 {
        *self.values.last().expect("nonempty spectrum")
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }
}

/// Eigendecomposition of a Hermitian matrix (deviation ≤ 1e-10 required).
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEig> {
    if !h.is_square() {
        return Err(Error::Dimension(format!(
            "eigendecomposition of a non-square {}x{} matrix",
            h.rows(),
            h.cols()
        )));
    }
    let deviation = h.hermitian_deviation();
    if deviation > TOL.hermitian {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(hermitian_eig_unchecked(&h.hermitian_part()))
}

fn hermitian_eig_unchecked(h: &ComplexMatrix) -> HermitianEig {
    let n = h.rows();
    let eig = nalgebra::SymmetricEigen::new(h.to_nalgebra());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    HermitianEig { values, vectors }
}

/// Eigenvalues only, descending.
pub fn eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eig(h)?.values)
}

/// Thin singular value decomposition `m = U Σ V†`, singular values descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let k = self.singular_values.len();
        let (m, n) = (self.u.rows(), self.v.rows());
        ComplexMatrix::from_fn(m, n, |i, j| {
            (0..k)
                .map(|l| self.u[(i, l)] * self.v[(j, l)].conj() * self.singular_values[l])
                .sum()
        })
    }
}

pub fn svd(m: &ComplexMatrix) -> Svd {
    let s = nalgebra::SVD::new(m.to_nalgebra(), true, true);
    let u = s.u.expect("requested U");
    let v_t = s.v_t.expect("requested V^T");
    let k = s.singular_values.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| s.singular_values[b].total_cmp(&s.singular_values[a]));
    Svd {
        u: ComplexMatrix::from_fn(u.nrows(), k, |i, j| u[(i, order[j])]),
        singular_values: order.iter().map(|&l| s.singular_values[l]).collect(),
        v: ComplexMatrix::from_fn(v_t.ncols(), k, |i, j| v_t[(order[j], i)].conj()),
    }
}

/// `Tr √(X†X)`, the sum of singular values.
pub fn trace_norm(x: &ComplexMatrix) -> f64 {
    if x.is_hermitian(TOL.hermitian) {
        return hermitian_eig_unchecked(&x.hermitian_part())
            .values
            .iter()
            .map(|l| l.abs())
            .sum();
    }
    svd(x).singular_values.iter().sum()
}

/// Largest absolute eigenvalue of a Hermitian matrix.
pub fn spectral_norm(h: &ComplexMatrix) -> Result<f64> {
    let eig = hermitian_eig(h)?;
    Ok(eig.max().abs().max(eig.min().abs()))
}

/// Real 3-vectors and 3×3 matrices used by the Bloch representation.
pub type Vec3 = nalgebra::Vector3<f64>;
pub type Mat3 = nalgebra::Matrix3<f64>;

#[cfg(test)]
mod tests {
    use super::*;

    fn sx() -> ComplexMatrix {
        pauli()[0].clone()
    }
    fn sz() -> ComplexMatrix {
        pauli()[2].clone()
    }

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        a.distance(b) <= tol
    }

    #[test]
    fn kron_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert!(close(&kron(&i2, &i2), &ComplexMatrix::identity(4), 0.0));
        let k = kron(
            &ComplexMatrix::diag_real(&[1.0, 2.0]),
            &ComplexMatrix::diag_real(&[3.0, 4.0]),
        );
        assert!(close(&k, &ComplexMatrix::diag_real(&[3.0, 4.0, 6.0, 8.0]), 0.0));
        let xx = kron(&sx(), &sx());
        let anti = ComplexMatrix::from_fn(4, 4, |i, j| if i + j == 3 { ONE } else { ZERO });
        assert!(close(&xx, &anti, 0.0));
    }

    #[test]
    fn partial_trace_examples() {
        let mut phi = ComplexMatrix::zeros(4, 4);
        for &(i, j) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
            phi[(i, j)] = ONE;
        }
        let r = partial_trace(&phi, 2, 2, Subsystem::B).unwrap();
        assert!(close(&r, &ComplexMatrix::identity(2), 1e-15));

        let r = partial_trace(&ComplexMatrix::identity(4), 2, 2, Subsystem::A).unwrap();
        assert!(close(&r, &ComplexMatrix::identity(2).scale(2.0), 1e-15));

        let d = ComplexMatrix::diag_real(&[1.0, 2.0, 3.0, 4.0]);
        let r = partial_trace(&d, 2, 2, Subsystem::B).unwrap();
        assert!(close(&r, &ComplexMatrix::diag_real(&[3.0, 7.0]), 1e-15));
        let r = partial_trace(&d, 2, 2, Subsystem::A).unwrap();
        assert!(close(&r, &ComplexMatrix::diag_real(&[4.0, 6.0]), 1e-15));
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        let e = partial_trace(&ComplexMatrix::identity(4), 2, 3, Subsystem::B);
        assert!(matches!(e, Err(Error::Dimension(_))));
    }

    #[test]
    fn eig_examples() {
        assert_eq!(eigenvalues(&sz()).unwrap(), vec![1.0, -1.0]);
        assert_eq!(eigenvalues(&ComplexMatrix::identity(2)).unwrap(), vec![1.0, 1.0]);

        let e = hermitian_eig(&sx()).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14 && (e.values[1] + 1.0).abs() < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = e.vector(0);
        let minus = e.vector(1);
        // up to global phase
        let ov_plus = (plus[0].conj() * s + plus[1].conj() * s).norm();
        let ov_minus = (minus[0].conj() * s - minus[1].conj() * s).norm();
        assert!((ov_plus - 1.0).abs() < 1e-12);
        assert!((ov_minus - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        match hermitian_eig(&m) {
            Err(Error::NotHermitian { deviation }) => assert!((deviation - 1.0).abs() < 1e-15),
            other => panic!("expected NotHermitian, got {other:?}"),
        }
        assert!(spectral_norm(&m).is_err());
    }

    #[test]
    fn svd_examples() {
        let s = svd(&ComplexMatrix::diag_real(&[0.5, 0.5, 0.0]));
        assert_eq!(s.singular_values.len(), 3);
        for (a, b) in s.singular_values.iter().zip([0.5, 0.5, 0.0]) {
            assert!((a - b).abs() < 1e-14);
        }
        let s = svd(&ComplexMatrix::identity(3));
        assert!(s.singular_values.iter().all(|v| (v - 1.0).abs() < 1e-14));
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[1.0, 0.0]]);
        let s = svd(&m);
        assert!((s.singular_values[0] - 2.0).abs() < 1e-14);
        assert!((s.singular_values[1] - 1.0).abs() < 1e-14);
        assert!(s.reconstruct().distance(&m) < 1e-12);
    }

    #[test]
    fn trace_norm_examples() {
        assert!((trace_norm(&ComplexMatrix::diag_real(&[1.0, -2.0])) - 3.0).abs() < 1e-14);
        let h = ComplexMatrix::from_rows(&[&[ONE, ZERO], &[ZERO, I]]);
        assert!((trace_norm(&h) - 2.0).abs() < 1e-14);
        let s = 0.5;
        let zero = ComplexMatrix::diag_real(&[1.0, 0.0]);
        let plus = ComplexMatrix::from_real_rows(&[&[s, s], &[s, s]]);
        assert!((trace_norm(&(zero - plus)) - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn spectral_norm_examples() {
        assert!((spectral_norm(&ComplexMatrix::diag_real(&[0.3, 0.9])).unwrap() - 0.9).abs() < 1e-15);
        assert_eq!(spectral_norm(&ComplexMatrix::zeros(3, 3)).unwrap(), 0.0);
        let h = sx() + sz();
        assert!((spectral_norm(&h).unwrap() - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn new_rejects_non_finite_and_bad_length() {
        assert!(matches!(
            ComplexMatrix::new(1, 2, vec![ONE, c(f64::NAN, 0.0)]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
        assert!(ComplexMatrix::new(2, 2, vec![ONE]).is_err());
    }
}
