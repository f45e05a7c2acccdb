//! Dense square complex matrices.
//!
//! Storage is row-major. Orders in this crate never exceed 16, so there is
//! no blocking or sparse path. The checked entry points (`matmul`,
//! `approx_eq`, ...) return [`Error::DimensionMismatch`]; the operator
//! overloads panic on mismatched orders and are meant for internal use where
//! the orders are known to agree.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type Complex = Complex64;

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);
pub const I: Complex = Complex::new(0.0, 1.0);

/// Serializes as `{"order": n, "entries": [[re, im], ...]}`, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr")]
pub struct ComplexMatrix {
    order: usize,
    entries: Vec<Complex>,
}

#[derive(Deserialize)]
struct MatrixRepr {
    order: usize,
    entries: Vec<Complex>,
}

impl TryFrom<MatrixRepr> for ComplexMatrix {
    type Error = Error;
    fn try_from(r: MatrixRepr) -> Result<Self> {
        Self::new(r.order, r.entries)
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries. Rejects non-finite values.
    pub fn new(order: usize, entries: Vec<Complex>) -> Result<Self> {
        if order == 0 || entries.len() != order * order {
            return Err(Error::InvalidShape {
                order,
                len: entries.len(),
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { order, entries })
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        assert!(order > 0, "matrix order must be positive");
        let mut entries = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                entries.push(f(i, j));
            }
        }
        Self { order, entries }
    }

    /// 2x2 matrix from `[[a, b], [c, d]]`.
    pub fn from_2x2(rows: [[Complex; 2]; 2]) -> Self {
        Self {
            order: 2,
            entries: vec![rows[0][0], rows[0][1], rows[1][0], rows[1][1]],
        }
    }

    pub fn identity(order: usize) -> Self {
        Self::from_fn(order, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn zeros(order: usize) -> Self {
        Self::from_fn(order, |_, _| ZERO)
    }

    pub fn diagonal(diag: &[Complex]) -> Self {
        Self::from_fn(diag.len(), |i, j| if i == j { diag[i] } else { ZERO })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex> {
        self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.entries[row * self.order + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex) {
        self.entries[row * self.order + col] = value;
    }

    fn check_same_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::DimensionMismatch {
                expected: self.order,
                actual: other.order,
            });
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        Ok(self.matmul_unchecked(other))
    }

    fn matmul_unchecked(&self, other: &Self) -> Self {
        let n = self.order;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.entries[k * n..(k + 1) * n];
                for (o, b) in out[i * n..(i + 1) * n].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Self { order: n, entries: out }
    }

    /// Kronecker product; block (i, j) of the result is `self[i, j] * other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (p, q) = (self.order, other.order);
        Self::from_fn(p * q, |r, c| self.get(r / q, c / q) * other.get(r % q, c % q))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.order, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.order, |i, j| self.get(j, i))
    }

    pub fn trace(&self) -> Complex {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }

    /// `Tr(self^dagger other)`.
    pub fn trace_inner(&self, other: &Self) -> Result<Complex> {
        self.check_same_order(other)?;
        Ok(self.entries.iter().zip(&other.entries).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn scale(&self, factor: Complex) -> Self {
        Self {
            order: self.order,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_order(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// True iff the largest entrywise modulus difference is at most `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> Result<bool> {
        Ok(self.max_abs_diff(other)? <= tol)
    }

    /// `self * other + other * self`.
    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        Ok(&self.matmul_unchecked(other) + &other.matmul_unchecked(self))
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        Ok(&self.matmul_unchecked(other) - &other.matmul_unchecked(self))
    }

    /// `max |A - A^dagger|`.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.order;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// `max |A^2 - sign * I|`.
    pub fn involution_residual(&self, sign: f64) -> f64 {
        let sq = self.matmul_unchecked(self);
        sq.max_abs_diff(&Self::identity(self.order).scale(Complex::from(sign)))
            .expect("same order")
    }

    /// LU factorization with partial pivoting. Returns the packed factors,
    /// the row permutation and the parity of the permutation, or `None` for
    /// an exactly singular matrix.
    fn lu(&self) -> Option<(Vec<Complex>, Vec<usize>, bool)> {
        let n = self.order;
        let mut a = self.entries.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut odd = false;
        for k in 0..n {
            let (pivot_row, pivot_abs) =
                (k..n)
                    .map(|r| (r, a[r * n + k].norm()))
                    .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot_abs == 0.0 {
                return None;
            }
            if pivot_row != k {
                for c in 0..n {
                    a.swap(k * n + c, pivot_row * n + c);
                }
                perm.swap(k, pivot_row);
                odd = !odd;
            }
            let pivot = a[k * n + k];
            for r in (k + 1)..n {
                let factor = a[r * n + k] / pivot;
                a[r * n + k] = factor;
                for c in (k + 1)..n {
                    let upper = a[k * n + c];
                    a[r * n + c] -= factor * upper;
                }
            }
        }
        Some((a, perm, odd))
    }

    /// Determinant by LU with partial pivoting. Singular input yields zero.
    pub fn det_lu(&self) -> Complex {
        let n = self.order;
        match self.lu() {
            None => ZERO,
            Some((a, _, odd)) => {
                let prod: Complex = (0..n).map(|i| a[i * n + i]).product();
                if odd {
                    -prod
                } else {
                    prod
                }
            }
        }
    }

    /// Inverse from the LU factors, solving one column of the identity at a
    /// time.
    pub fn inverse_lu(&self) -> Result<Self> {
        let n = self.order;
        let singular = || Error::Singular {
            determinant: 0.0,
            floor: 0.0,
        };
        let (a, perm, _) = self.lu().ok_or_else(singular)?;
        let mut inv = Self::zeros(n);
        let mut col = vec![ZERO; n];
        for j in 0..n {
            for (i, slot) in col.iter_mut().enumerate() {
                *slot = if perm[i] == j { ONE } else { ZERO };
            }
            // forward substitution, unit lower triangle
            for i in 0..n {
                let mut s = col[i];
                for k in 0..i {
                    s -= a[i * n + k] * col[k];
                }
                col[i] = s;
            }
            for i in (0..n).rev() {
                let mut s = col[i];
                for k in (i + 1)..n {
                    s -= a[i * n + k] * col[k];
                }
                col[i] = s / a[i * n + i];
            }
            for (i, v) in col.iter().enumerate() {
                inv.set(i, j, *v);
            }
        }
        Ok(inv)
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.order {
            let row: Vec<String> = (0..self.order)
                .map(|j| {
                    let z = self.get(i, j);
                    format!("{:>8.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.order, rhs.order, "matrix order mismatch");
        self.matmul_unchecked(rhs)
    }
}

impl Mul<Complex> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Complex) -> ComplexMatrix {
        self.scale(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.order, rhs.order, "matrix order mismatch");
        ComplexMatrix {
            order: self.order,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.order, rhs.order, "matrix order mismatch");
        ComplexMatrix {
            order: self.order,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale(-ONE)
    }
}

/// Sum of `coefficient * matrix` terms. All matrices must share one order.
pub fn linear_combination<'a>(
    order: usize,
    terms: impl IntoIterator<Item = (Complex, &'a ComplexMatrix)>,
) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(order);
    for (c, m) in terms {
        assert_eq!(m.order, order, "matrix order mismatch");
        for (a, b) in acc.entries.iter_mut().zip(&m.entries) {
            *a += c * b;
        }
    }
    acc
}
