//! Euler rotations in the x-convention, `E = Ez(gamma) Ex(beta) Ez(alpha)`.
//!
//! Row `mu` of the rotation matrix holds the direction cosines `lambda^mu`,
//! i.e. `E[mu][j] = lambda_j^mu`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::complexmat::Complex;

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EulerAngles {
    pub const fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self { alpha, beta, gamma }
    }

    /// All angles zero; the rotation is the identity.
    pub const fn trivial() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    /// Angles drawn uniformly from `[0, 2pi)`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let tau = std::f64::consts::TAU;
        Self::new(
            rng.gen_range(0.0..tau),
            rng.gen_range(0.0..tau),
            rng.gen_range(0.0..tau),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.alpha.is_finite() && self.beta.is_finite() && self.gamma.is_finite()
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.alpha, self.beta, self.gamma]
    }
}

/// 3x3 real rotation matrix of direction cosines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirectionCosines(pub [[f64; 3]; 3]);

impl DirectionCosines {
    pub const IDENTITY: Self = Self([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    /// `lambda_j^mu` with both indices 1-based, as they are written in the
    /// literature.
    pub fn lambda(&self, mu: usize, j: usize) -> f64 {
        self.0[mu - 1][j - 1]
    }

    /// The vector `lambda^mu` (row `mu`, 1-based).
    pub fn row(&self, mu: usize) -> [f64; 3] {
        self.0[mu - 1]
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Self(std::array::from_fn(|i| std::array::from_fn(|j| m[j][i])))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        Self(std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum())
        }))
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// `max |E^T E - I|`.
    pub fn orthonormality_residual(&self) -> f64 {
        self.transpose().matmul(self).max_abs_diff(&Self::IDENTITY)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).abs());
            }
        }
        worst
    }

    /// `E v` for a complex 3-vector.
    pub fn apply_complex(&self, v: &[Complex; 3]) -> [Complex; 3] {
        std::array::from_fn(|i| (0..3).map(|j| v[j] * self.0[i][j]).sum())
    }

    /// `E^T v` for a complex 3-vector.
    pub fn apply_transpose_complex(&self, v: &[Complex; 3]) -> [Complex; 3] {
        std::array::from_fn(|i| (0..3).map(|j| v[j] * self.0[j][i]).sum())
    }
}

/// The x-convention Euler matrix.
///
/// Element (3, 2) is `-cos(alpha) sin(beta)`: the bottom row is
/// `(sin a sin b, -cos a sin b, cos b)`. With that sign the rows reproduce the
/// parametric spin matrices (see [`crate::generators::r_matrices`]) and the
/// matrix is a proper rotation.
pub fn euler_matrix(angles: EulerAngles) -> DirectionCosines {
    let (sa, ca) = angles.alpha.sin_cos();
    let (sb, cb) = angles.beta.sin_cos();
    let (sg, cg) = angles.gamma.sin_cos();
    DirectionCosines([
        [ca * cg - sa * cb * sg, sa * cg + ca * cb * sg, sb * sg],
        [-ca * sg - sa * cb * cg, -sa * sg + ca * cb * cg, sb * cg],
        [sa * sb, -ca * sb, cb],
    ])
}

/// `E v`.
pub fn rotate_vector(rotation: &DirectionCosines, v: [f64; 3]) -> [f64; 3] {
    let m = &rotation.0;
    std::array::from_fn(|i| (0..3).map(|j| m[i][j] * v[j]).sum())
}
