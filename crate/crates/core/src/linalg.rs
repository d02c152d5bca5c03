//! Dense complex matrices and the Hermitian spectral toolkit built on a
//! cyclic Jacobi eigensolver.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::TOL_REL;

pub type C64 = Complex<f64>;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<C64>,
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl CMatrix {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows*cols");
        CMatrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// Real matrix from row slices.
    pub fn real(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        CMatrix::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        CMatrix::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn diag_real(d: &[f64]) -> Self {
        let n = d.len();
        CMatrix::from_fn(n, n, |i, j| if i == j { C64::new(d[i], 0.0) } else { ZERO })
    }

    /// Matrix unit `|k><l|` of size `n`.
    pub fn unit(n: usize, k: usize, l: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        m[(k, l)] = ONE;
        m
    }

    /// Column vector.
    pub fn column(v: &[C64]) -> Self {
        CMatrix::from_vec(v.len(), 1, v.to_vec())
    }

    pub fn from_columns(rows: usize, cols: &[Vec<C64>]) -> Self {
        CMatrix::from_fn(rows, cols.len(), |r, c| cols[c][r])
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn col(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    pub fn mul(&self, other: &CMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let mut out = vec![ZERO; n * m];
        for i in 0..n {
            let row = &mut out[i * m..(i + 1) * m];
            for l in 0..k {
                let a = self.data[i * k + l];
                if a == ZERO {
                    continue;
                }
                let brow = &other.data[l * m..(l + 1) * m];
                for (o, &b) in row.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        CMatrix { rows: n, cols: m, data: out }
    }

    fn zip(&self, other: &CMatrix, f: impl Fn(C64, C64) -> C64) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shapes must agree");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &CMatrix) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &CMatrix) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn add_assign(&mut self, other: &CMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shapes must agree");
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    /// `A*B` without forming the adjoint.
    pub fn adj_mul(&self, other: &CMatrix) -> Self {
        assert_eq!(self.rows, other.rows, "row counts must agree");
        let (k, n, m) = (self.rows, self.cols, other.cols);
        let mut out = vec![ZERO; n * m];
        for l in 0..k {
            let arow = &self.data[l * n..(l + 1) * n];
            let brow = &other.data[l * m..(l + 1) * m];
            for (i, &a) in arow.iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                let a = a.conj();
                for (o, &b) in out[i * m..(i + 1) * m].iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        CMatrix { rows: n, cols: m, data: out }
    }

    /// `V* A V`.
    pub fn congruence(&self, v: &CMatrix) -> Self {
        v.adj_mul(&self.mul(v))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Hilbert–Schmidt inner product `tr(A* B)`.
    pub fn inner(&self, other: &CMatrix) -> C64 {
        assert_eq!(self.data.len(), other.data.len(), "shapes must agree");
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn frob_norm(&self) -> f64 {
        Float::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum::<f64>())
    }

    /// Max entrywise distance; shapes must agree.
    pub fn dist(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shapes must agree");
        self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn asymmetry(&self) -> f64 {
        assert!(self.is_square());
        let mut m: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                m = m.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        m
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.asymmetry() <= tol
    }

    pub fn hermitian_part(&self) -> Self {
        self.add(&self.adjoint()).scale_re(0.5)
    }

    pub fn commutator(&self, other: &CMatrix) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn kron(&self, other: &CMatrix) -> Self {
        let (p, q) = (other.rows, other.cols);
        CMatrix::from_fn(self.rows * p, self.cols * q, |r, c| {
            self[(r / p, c / q)] * other[(r % p, c % q)]
        })
    }

    /// Block-diagonal `A ⊕ B`.
    pub fn dirsum(&self, other: &CMatrix) -> Self {
        let mut out = CMatrix::zeros(self.rows + other.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, self.cols, other);
        out
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        CMatrix::from_fn(rows, cols, |r, c| self[(r0 + r, c0 + c)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &CMatrix) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self[(r0 + r, c0 + c)] = b[(r, c)];
            }
        }
    }

    pub fn hstack(parts: &[CMatrix]) -> Self {
        let rows = parts.first().map_or(0, |p| p.rows);
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = CMatrix::zeros(rows, cols);
        let mut c0 = 0;
        for p in parts {
            assert_eq!(p.rows, rows, "row counts must agree");
            out.set_block(0, c0, p);
            c0 += p.cols;
        }
        out
    }

    pub fn vstack(parts: &[CMatrix]) -> Self {
        let cols = parts.first().map_or(0, |p| p.cols);
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = CMatrix::zeros(rows, cols);
        let mut r0 = 0;
        for p in parts {
            assert_eq!(p.cols, cols, "column counts must agree");
            out.set_block(r0, 0, p);
            r0 += p.rows;
        }
        out
    }

    /// Reinterpret the row-major entries with a new shape.
    pub fn reshape(&self, rows: usize, cols: usize) -> Self {
        assert_eq!(rows * cols, self.data.len(), "reshape must keep the entry count");
        CMatrix { rows, cols, data: self.data.clone() }
    }

    /// Modified Gram–Schmidt on the columns, dropping columns whose residual
    /// norm falls below `tol`. Returns `None` only for an empty input.
    pub fn orthonormalize_columns(&self, tol: f64) -> Option<CMatrix> {
        if self.cols == 0 {
            return None;
        }
        let mut basis: Vec<Vec<C64>> = Vec::new();
        for c in 0..self.cols {
            let mut v = self.col(c);
            for _ in 0..2 {
                for b in &basis {
                    let proj: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi -= proj * bi;
                    }
                }
            }
            let n = Float::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>());
            if n > tol {
                basis.push(v.into_iter().map(|z| z / n).collect());
            }
        }
        Some(CMatrix::from_columns(self.rows, &basis))
    }

    /// Multiply each column by a phase so its first entry above `tol` in
    /// modulus is real and positive.
    pub fn fix_column_phases(&mut self, tol: f64) {
        for c in 0..self.cols {
            if let Some(r) = (0..self.rows).find(|&r| self[(r, c)].norm() > tol) {
                let z = self[(r, c)];
                let ph = z.conj() / z.norm();
                for rr in 0..self.rows {
                    self[(rr, c)] *= ph;
                }
            }
        }
    }
}

/// Eigenvalues ascending; `basis` columns are the matching eigenvectors.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub basis: CMatrix,
}

impl EigenDecomposition {
    pub fn max_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn min_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// `U f(D) U*`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.basis.clone();
        for c in 0..n {
            let s = f(self.values[c]);
            for r in 0..n {
                scaled[(r, c)] *= s;
            }
        }
        scaled.mul(&self.basis.adjoint()).hermitian_part()
    }

    /// Columns of the basis whose eigenvalue satisfies `keep`.
    pub fn select(&self, keep: impl Fn(f64) -> bool) -> CMatrix {
        let cols: Vec<Vec<C64>> = (0..self.values.len())
            .filter(|&c| keep(self.values[c]))
            .map(|c| self.basis.col(c))
            .collect();
        CMatrix::from_columns(self.basis.rows, &cols)
    }

    /// Rank cutoff: relative to the top eigenvalue, absolute when that is tiny.
    pub fn threshold(&self, tol_rel: f64) -> f64 {
        let top = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if top < 1e-12 {
            1e-12
        } else {
            tol_rel * top
        }
    }

    pub fn rank(&self, tol_rel: f64) -> usize {
        let t = self.threshold(tol_rel);
        self.values.iter().filter(|&&v| v > t).count()
    }
}

const MAX_SWEEPS: usize = 64;

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
pub fn herm_eig(a: &CMatrix, tol: f64) -> Result<EigenDecomposition> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch("herm_eig needs a square matrix"));
    }
    let asym = a.asymmetry();
    if asym > tol * a.max_abs().max(1.0) {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    Ok(jacobi(&a.hermitian_part()))
}

fn jacobi(a: &CMatrix) -> EigenDecomposition {
    let n = a.rows;
    let mut m = a.data.clone();
    let mut v = CMatrix::identity(n).data;
    for i in 0..n {
        m[i * n + i] = C64::new(m[i * n + i].re, 0.0);
    }
    let scale = Float::sqrt(m.iter().map(|z| z.norm_sqr()).sum::<f64>());
    if scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            let mut off = 0.0;
            for p in 0..n {
                for q in p + 1..n {
                    off += 2.0 * m[p * n + q].norm_sqr();
                }
            }
            if Float::sqrt(off) < 1e-12 * scale {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    rotate(&mut m, &mut v, n, p, q);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].re.total_cmp(&m[j * n + j].re));
    let values = order.iter().map(|&i| m[i * n + i].re).collect();
    let basis = CMatrix::from_fn(n, n, |r, c| v[r * n + order[c]]);
    EigenDecomposition { values, basis }
}

// Annihilates m[p][q] with G = [[c, s], [-s e^{-iφ}, c e^{-iφ}]]; m <- G* m G, v <- v G.
fn rotate(m: &mut [C64], v: &mut [C64], n: usize, p: usize, q: usize) {
    let b = m[p * n + q];
    let babs = b.norm();
    if babs < 1e-300 {
        return;
    }
    let ph = b / babs;
    let phc = ph.conj();
    let tau = (m[q * n + q].re - m[p * n + p].re) / (2.0 * babs);
    let t = if tau >= 0.0 { 1.0 } else { -1.0 } / (tau.abs() + Float::sqrt(1.0 + tau * tau));
    let c = 1.0 / Float::sqrt(1.0 + t * t);
    let s = t * c;
    for r in 0..n {
        let x = m[r * n + p];
        let y = m[r * n + q];
        m[r * n + p] = x * c - y * phc * s;
        m[r * n + q] = x * s + y * phc * c;
    }
    for k in 0..n {
        let x = m[p * n + k];
        let y = m[q * n + k];
        m[p * n + k] = x * c - y * ph * s;
        m[q * n + k] = x * s + y * ph * c;
    }
    m[p * n + q] = ZERO;
    m[q * n + p] = ZERO;
    m[p * n + p] = C64::new(m[p * n + p].re, 0.0);
    m[q * n + q] = C64::new(m[q * n + q].re, 0.0);
    for r in 0..n {
        let x = v[r * n + p];
        let y = v[r * n + q];
        v[r * n + p] = x * c - y * phc * s;
        v[r * n + q] = x * s + y * phc * c;
    }
}

/// Eigendecomposition of a PSD matrix with negative dust clamped to zero.
pub fn psd_eig(a: &CMatrix, tol: f64) -> Result<EigenDecomposition> {
    let mut e = herm_eig(a, tol)?;
    let floor = -tol * e.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if e.min_value() < floor {
        return Err(Error::NotPsd { min_eig: e.min_value() });
    }
    for v in &mut e.values {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    Ok(e)
}

/// Eigenvalues at rounding level are zeroed first; their roots would
/// otherwise surface at ~1e-8.
pub fn sqrt_psd(a: &CMatrix, tol: f64) -> Result<CMatrix> {
    let e = psd_eig(a, tol)?;
    let t = e.threshold(1e-13);
    Ok(e.apply_fn(|x| if x > t { Float::sqrt(x) } else { 0.0 }))
}

/// Least projection `P` with `PA = A`; alias `ceil`.
pub fn support_proj(a: &CMatrix, tol: f64) -> Result<CMatrix> {
    let e = psd_eig(a, tol)?;
    let t = e.threshold(TOL_REL);
    Ok(e.apply_fn(|x| if x > t { 1.0 } else { 0.0 }))
}

pub fn ceil(a: &CMatrix, tol: f64) -> Result<CMatrix> {
    support_proj(a, tol)
}

/// Greatest projection below an effect: `1 - ceil(1 - a)`.
pub fn floor_proj(a: &CMatrix, tol: f64) -> Result<CMatrix> {
    if !is_effect(a, tol) {
        return Err(Error::NotEffect);
    }
    let id = CMatrix::identity(a.rows);
    let c = support_proj(&id.sub(a), tol)?;
    Ok(id.sub(&c))
}

pub fn is_effect(a: &CMatrix, tol: f64) -> bool {
    if !a.is_hermitian(tol) {
        return false;
    }
    let e = jacobi(&a.hermitian_part());
    e.min_value() >= -tol && e.max_value() <= 1.0 + tol
}

pub fn is_projection(a: &CMatrix, tol: f64) -> bool {
    a.is_hermitian(tol) && a.mul(a).dist(a) <= tol
}

/// Moore–Penrose pseudoinverse.
pub fn pinv(a: &CMatrix, tol: f64) -> CMatrix {
    if a.is_square() && a.is_hermitian(1e-14 * a.max_abs().max(1.0)) {
        let e = jacobi(&a.hermitian_part());
        let top = e.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let t = if top < 1e-300 { f64::INFINITY } else { tol * top };
        return e.apply_fn(|x| if x.abs() > t { 1.0 / x } else { 0.0 });
    }
    let g = a.adj_mul(a);
    let e = jacobi(&g.hermitian_part());
    let top = e.max_value();
    let t = if top < 1e-300 { f64::INFINITY } else { (tol * tol).max(1e-15) * top };
    e.apply_fn(|x| if x > t { 1.0 / x } else { 0.0 }).mul(&a.adjoint())
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kron(b)
}

pub fn dirsum(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.dirsum(b)
}

/// Largest singular value.
pub fn op_norm(a: &CMatrix) -> f64 {
    if a.rows == 0 || a.cols == 0 {
        return 0.0;
    }
    let g = if a.rows <= a.cols { a.mul(&a.adjoint()) } else { a.adj_mul(a) };
    Float::sqrt(jacobi(&g.hermitian_part()).max_value().max(0.0))
}

/// Orthonormal columns spanning the right kernel of `a`: singular values
/// at or below `tol_rel` times the largest.
pub fn nullspace(a: &CMatrix, tol_rel: f64) -> CMatrix {
    let g = a.adj_mul(a).hermitian_part();
    // eigenvalues of a*a are squared singular values, as in `rank`
    nullspace_of_gram(&g, (tol_rel * tol_rel).max(1e-15))
}

/// Kernel of a PSD Gram matrix.
pub fn nullspace_of_gram(g: &CMatrix, tol_rel: f64) -> CMatrix {
    let e = jacobi(&g.hermitian_part());
    let t = e.threshold(tol_rel);
    let mut k = e.select(|x| x <= t);
    k.fix_column_phases(1e-10);
    k
}

/// Orthonormal columns spanning the range of `a`.
pub fn range_basis(a: &CMatrix, tol_rel: f64) -> CMatrix {
    let g = a.mul(&a.adjoint()).hermitian_part();
    let e = jacobi(&g);
    let t = e.threshold(tol_rel);
    let mut b = e.select(|x| x > t);
    b.fix_column_phases(1e-10);
    b
}

pub fn rank(a: &CMatrix, tol_rel: f64) -> usize {
    let g = if a.rows <= a.cols { a.mul(&a.adjoint()) } else { a.adj_mul(a) };
    // singular values squared: square the relative threshold, floored above round-off
    jacobi(&g.hermitian_part()).rank((tol_rel * tol_rel).max(1e-15))
}

pub fn min_eig(a: &CMatrix) -> f64 {
    jacobi(&a.hermitian_part()).min_value()
}

/// `a ≤ b` in the Loewner order.
pub fn loewner_le(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    min_eig(&b.sub(a)) >= -tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;
    use proptest::prelude::*;

    fn hadamard() -> CMatrix {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        CMatrix::real(&[&[s, s], &[s, -s]])
    }

    fn reconstruct(e: &EigenDecomposition) -> CMatrix {
        e.apply_fn(|x| x)
    }

    #[test]
    fn eig_identity() {
        let e = herm_eig(&CMatrix::identity(2), 1e-9).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0]);
    }

    #[test]
    fn eig_diag_sorted() {
        let e = herm_eig(&CMatrix::diag_real(&[2.0, 1.0]), 1e-9).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0]);
        assert!((e.basis[(1, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eig_hadamard_conjugated() {
        let h = hadamard();
        let a = h.mul(&CMatrix::diag_real(&[0.0, 1.0])).mul(&h);
        let e = herm_eig(&a, 1e-9).unwrap();
        assert!(e.values[0].abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
        let v = e.basis.col(1);
        // proportional to (1, -1)/sqrt 2
        let overlap = (v[0] - v[1]) * core::f64::consts::FRAC_1_SQRT_2;
        assert!((overlap.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let a = CMatrix::real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(herm_eig(&a, 1e-9), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eig_complex_entries() {
        // Pauli Y has eigenvalues -1, 1
        let mut y = CMatrix::zeros(2, 2);
        y[(0, 1)] = C64::new(0.0, -1.0);
        y[(1, 0)] = C64::new(0.0, 1.0);
        let e = herm_eig(&y, 1e-9).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
        assert!(reconstruct(&e).dist(&y) < 1e-14);
    }

    #[test]
    fn sqrt_examples() {
        let p = CMatrix::diag_real(&[1.0, 0.0]);
        assert!(sqrt_psd(&p, 1e-9).unwrap().dist(&p) < 1e-15);
        let four = CMatrix::identity(3).scale_re(4.0);
        assert!(sqrt_psd(&four, 1e-9).unwrap().dist(&CMatrix::identity(3).scale_re(2.0)) < 1e-14);
        let neg = CMatrix::diag_real(&[1.0, -0.5]);
        assert!(matches!(sqrt_psd(&neg, 1e-9), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn sqrt_of_gram_squares_back() {
        let mut r = Rng::new(11);
        let g = r.ginibre(6, 6);
        let b = g.adj_mul(&g);
        let s = sqrt_psd(&b, 1e-9).unwrap();
        assert!(s.mul(&s).dist(&b) < 1e-9);
    }

    #[test]
    fn support_examples() {
        assert!(support_proj(&CMatrix::zeros(2, 2), 1e-9).unwrap().max_abs() == 0.0);
        let d = CMatrix::diag_real(&[0.5, 0.0]);
        assert!(support_proj(&d, 1e-9).unwrap().dist(&CMatrix::diag_real(&[1.0, 0.0])) < 1e-15);
    }

    #[test]
    fn floor_examples() {
        let id = CMatrix::identity(2);
        assert!(floor_proj(&id, 1e-9).unwrap().dist(&id) < 1e-15);
        let a = CMatrix::diag_real(&[1.0, 0.5]);
        assert!(floor_proj(&a, 1e-9).unwrap().dist(&CMatrix::diag_real(&[1.0, 0.0])) < 1e-15);
        let plus = CMatrix::real(&[&[0.45, 0.45], &[0.45, 0.45]]);
        assert!(floor_proj(&plus, 1e-9).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn plumbing_examples() {
        let p = pinv(&CMatrix::diag_real(&[2.0, 0.0]), 1e-9);
        assert!(p.dist(&CMatrix::diag_real(&[0.5, 0.0])) < 1e-15);
        assert_eq!(kron(&CMatrix::identity(2), &CMatrix::identity(3)), CMatrix::identity(6));
        assert!((op_norm(&hadamard()) - 1.0).abs() < 1e-14);
        let s = dirsum(&CMatrix::identity(2), &CMatrix::identity(1));
        assert_eq!((s.rows, s.cols), (3, 3));
    }

    #[test]
    fn pinv_rectangular_penrose() {
        let mut r = Rng::new(5);
        let a = r.ginibre(4, 2).mul(&r.ginibre(2, 3));
        let p = pinv(&a, 1e-9);
        assert!(a.mul(&p).mul(&a).dist(&a) < 1e-9);
        assert!(p.mul(&a).mul(&p).dist(&p) < 1e-9);
        assert!(a.mul(&p).is_hermitian(1e-9) && p.mul(&a).is_hermitian(1e-9));
    }

    #[test]
    fn nullspace_of_rank_deficient() {
        let mut r = Rng::new(9);
        let a = r.ginibre(3, 2).mul(&r.ginibre(2, 5));
        let k = nullspace(&a, 1e-9);
        assert_eq!(k.cols, 3);
        assert!(a.mul(&k).max_abs() < 1e-10);
        assert_eq!(rank(&a, 1e-9), 2);
    }

    fn psd_strategy() -> impl Strategy<Value = CMatrix> {
        (1usize..=12, any::<u64>(), 1usize..=12).prop_map(|(n, seed, k)| {
            let mut r = Rng::new(seed);
            let g = r.ginibre(k.min(n), n);
            g.adj_mul(&g)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn prop_reconstruction(seed in any::<u64>(), n in 1usize..=10) {
            let a = Rng::new(seed).hermitian(n);
            let e = herm_eig(&a, 1e-9).unwrap();
            prop_assert!(reconstruct(&e).dist(&a) <= 1e-9 * a.max_abs().max(1.0));
            prop_assert!(e.basis.adj_mul(&e.basis).dist(&CMatrix::identity(n)) < 1e-10);
            prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn prop_deterministic(seed in any::<u64>()) {
            let a = Rng::new(seed).hermitian(5);
            let e1 = herm_eig(&a, 1e-9).unwrap();
            let e2 = herm_eig(&a, 1e-9).unwrap();
            prop_assert_eq!(e1.values, e2.values);
            prop_assert_eq!(e1.basis, e2.basis);
        }

        #[test]
        fn prop_support_absorbs(a in psd_strategy()) {
            let p = support_proj(&a, 1e-9).unwrap();
            let id = CMatrix::identity(a.rows);
            let tol = 1e-9 * a.max_abs().max(1.0);
            prop_assert!(p.mul(&a).dist(&a) <= tol);
            prop_assert!(id.sub(&p).mul(&a).max_abs() <= tol);
        }

        #[test]
        fn prop_sqrt_squares(a in psd_strategy()) {
            let s = sqrt_psd(&a, 1e-9).unwrap();
            prop_assert!(s.mul(&s).dist(&a) <= 1e-8 * a.max_abs().max(1.0));
            prop_assert!(min_eig(&s) >= -1e-9);
        }

        #[test]
        fn prop_floor_below_ceil(seed in any::<u64>(), n in 1usize..=6) {
            let mut r = Rng::new(seed);
            let mut a = r.effect(n);
            if n > 1 {
                // force an eigenvalue-one direction half the time
                if seed % 2 == 0 {
                    let p = r.projection_of_rank(n, 1);
                    a = p.add(&CMatrix::identity(n).sub(&p).mul(&a).mul(&CMatrix::identity(n).sub(&p)));
                }
            }
            let fl = floor_proj(&a, 1e-9).unwrap();
            let ce = support_proj(&a, 1e-9).unwrap();
            prop_assert!(loewner_le(&fl, &a, 1e-9));
            prop_assert!(loewner_le(&a, &ce, 1e-9));
        }
    }
}
