use std::fmt;

use serde::Serialize;

use super::{determinant_formula, inverse_params, scaled, FourVector, FourVectorParams};
use crate::complexmat::{Complex, ComplexMatrix, ONE};
use crate::error::{Error, Result};
use crate::euler::EulerAngles;

/// Residuals behind a unitarity decision.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnitaryReport {
    /// `max |Y^dagger Y - I|`.
    pub unitarity_residual: f64,
    /// LU determinant of `Y`.
    pub determinant: Complex,
    /// `|det Y - 1|`.
    pub determinant_residual: f64,
    /// Largest violation of the closed-form conditions of the special case.
    pub condition_residual: f64,
    pub tol: f64,
    pub accepted: bool,
}

impl fmt::Display for UnitaryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "|Y'Y - I| = {:.3e}, |det - 1| = {:.3e}, closed-form conditions {:.3e}, tol {:.1e}: {}",
            self.unitarity_residual,
            self.determinant_residual,
            self.condition_residual,
            self.tol,
            if self.accepted { "unitary" } else { "rejected" }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnitaryElement {
    pub params: FourVectorParams,
    pub report: UnitaryReport,
}

impl UnitaryElement {
    /// Builds the report for `params`; acceptance needs `Y^dagger Y = I` and
    /// `det Y = 1` within `tol`.
    pub fn check(params: FourVectorParams, condition_residual: f64, tol: f64) -> UnitaryElement {
        let y = params.to_matrix();
        let unitarity_residual = y
            .adjoint()
            .matmul(&y)
            .and_then(|p| p.max_abs_diff(&ComplexMatrix::identity(4)))
            .expect("order 4");
        let determinant = y.det_lu();
        let determinant_residual = (determinant - ONE).norm();
        let accepted = unitarity_residual <= tol && determinant_residual <= tol;
        UnitaryElement {
            params,
            report: UnitaryReport {
                unitarity_residual,
                determinant,
                determinant_residual,
                condition_residual,
                tol,
                accepted,
            },
        }
    }

    fn into_result(self) -> Result<UnitaryElement> {
        if self.report.accepted {
            Ok(self)
        } else {
            Err(Error::NotUnitary(self.report.to_string()))
        }
    }
}

fn inv_or_inf(z: Complex) -> Option<Complex> {
    (z.norm() > 0.0).then(|| ONE / z)
}

/// The block-diagonal element with `n = l = 0`. Its adjoint must be
/// `diag((kk)^-1 (k0 I - k.R), (mm)^-1 (m0 I + m.R))` with `(kk)(mm) = 1`;
/// the report carries the gap to that form.
pub fn block_diagonal_unitary(k: FourVector, m: FourVector, angles: EulerAngles, tol: f64) -> Result<UnitaryElement> {
    let p = FourVectorParams::new(k, FourVector::ZERO, FourVector::ZERO, m, angles)?;
    let (kk, mm) = (k.bilinear(&k), m.bilinear(&m));
    let condition = match (inv_or_inf(kk), inv_or_inf(mm)) {
        (Some(ik), Some(im)) => {
            let expected = FourVectorParams {
                k: FourVector::new(k.scalar * ik, scaled(&k.vector, -ik)),
                n: FourVector::ZERO,
                l: FourVector::ZERO,
                m: FourVector::new(m.scalar * im, scaled(&m.vector, -im)),
                angles,
            };
            let gap = p.to_matrix().adjoint().max_abs_diff(&expected.to_matrix())?;
            gap.max((kk * mm - ONE).norm())
        }
        _ => f64::INFINITY,
    };
    UnitaryElement::check(p, condition, tol).into_result()
}

/// The anti-diagonal element with `k = m = 0`. Its adjoint must be
/// `[[0, -(ll)^-1 (l0 I - l.R)], [(nn)^-1 (n0 I + n.R), 0]]` with
/// `(ll)(nn) = 1`.
pub fn block_antidiagonal_unitary(
    n: FourVector,
    l: FourVector,
    angles: EulerAngles,
    tol: f64,
) -> Result<UnitaryElement> {
    let p = FourVectorParams::new(FourVector::ZERO, n, l, FourVector::ZERO, angles)?;
    let (nn, ll) = (n.bilinear(&n), l.bilinear(&l));
    let condition = match (inv_or_inf(nn), inv_or_inf(ll)) {
        (Some(inn), Some(il)) => {
            let expected = FourVectorParams {
                k: FourVector::ZERO,
                n: FourVector::new(-l.scalar * il, scaled(&l.vector, -il)),
                l: FourVector::new(-n.scalar * inn, scaled(&n.vector, -inn)),
                m: FourVector::ZERO,
                angles,
            };
            let gap = p.to_matrix().adjoint().max_abs_diff(&expected.to_matrix())?;
            gap.max((ll * nn - ONE).norm())
        }
        _ => f64::INFINITY,
    };
    UnitaryElement::check(p, condition, tol).into_result()
}

/// Largest violation of the general conditions `Y^dagger = Y^-1`, `|Y| = 1`
/// written on the parameters:
/// `k0* = k0^-1`, `k* = k^-1`, `-l0* = n0^-1`, `l* = n^-1`,
/// `n0* = -l0^-1`, `n* = l^-1`, `m0* = m0^-1`, `m* = m^-1`.
pub fn su4_condition_residual(p: &FourVectorParams, floor: f64) -> Result<f64> {
    let inv = inverse_params(p, floor)?;
    let conj = |v: &FourVector| FourVector::new(v.scalar.conj(), v.vector.map(|z| z.conj()));
    let (k, n, l, m) = (conj(&p.k), conj(&p.n), conj(&p.l), conj(&p.m));
    let worst = [
        (k.scalar - inv.k.scalar).norm(),
        (-l.scalar - inv.n.scalar).norm(),
        (n.scalar + inv.l.scalar).norm(),
        (m.scalar - inv.m.scalar).norm(),
        FourVector::new(inv.k.scalar, k.vector).max_abs_diff(&inv.k),
        FourVector::new(inv.n.scalar, l.vector).max_abs_diff(&inv.n),
        FourVector::new(inv.l.scalar, n.vector).max_abs_diff(&inv.l),
        FourVector::new(inv.m.scalar, m.vector).max_abs_diff(&inv.m),
        (determinant_formula(p) - ONE).norm(),
    ];
    Ok(worst.into_iter().fold(0.0, f64::max))
}
