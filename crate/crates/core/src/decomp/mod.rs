//! Trace decompositions, Cayley tables and basis changes.

mod bases;
mod cayley;
mod quintet;

pub use bases::{dirac_residual, to_dirac, to_gellmann};
pub use cayley::{cayley_table, cayley_table_with_pool, snap_product, CayleyEntry, CayleyTable, Phase};
pub use quintet::{decompose_via_quintet, QuintetDecomposition, QuintetTerm};

use serde::{Serialize, Serializer};

use crate::complexmat::{linear_combination, Complex, ComplexMatrix};
use crate::error::{Error, Result};
use crate::euler::DirectionCosines;
use crate::generators::{pauli, Labeled};

/// Expansion coefficients over a labeled basis, in basis order, with the
/// residual of the reconstruction that produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisCoefficients<L> {
    pub entries: Vec<(L, Complex)>,
    pub residual: f64,
}

impl<L: PartialEq> BasisCoefficients<L> {
    /// Coefficient of `label`, zero when absent.
    pub fn get(&self, label: &L) -> Complex {
        self.entries
            .iter()
            .find(|(l, _)| l == label)
            .map_or(Complex::new(0.0, 0.0), |(_, c)| *c)
    }

    /// `sum_a c_a B_a` with the matrices taken from `basis` by label.
    pub fn reconstruct(&self, basis: &[Labeled<L>]) -> Result<ComplexMatrix> {
        let order = basis.first().ok_or(Error::Empty("basis"))?.matrix.order();
        let mut terms = Vec::with_capacity(self.entries.len());
        for (label, c) in &self.entries {
            let b = basis
                .iter()
                .find(|b| &b.label == label)
                .ok_or_else(|| Error::IncompleteBasis("label missing from basis".into()))?;
            terms.push((*c, &b.matrix));
        }
        Ok(linear_combination(order, terms))
    }

    /// Largest coefficient difference against `other`, matched by label.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for (l, c) in &self.entries {
            worst = worst.max((c - other.get(l)).norm());
        }
        for (l, c) in &other.entries {
            worst = worst.max((c - self.get(l)).norm());
        }
        worst
    }
}

impl<L: Serialize> Serialize for BasisCoefficients<L> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a, L> {
            label: &'a L,
            value: [f64; 2],
        }
        #[derive(Serialize)]
        struct Out<'a, L> {
            coefficients: Vec<Term<'a, L>>,
            residual: f64,
        }
        Out {
            coefficients: self
                .entries
                .iter()
                .map(|(label, c)| Term {
                    label,
                    value: [c.re, c.im],
                })
                .collect(),
            residual: self.residual,
        }
        .serialize(s)
    }
}

/// Trace decomposition `c_a = Tr(B_a^dagger Y) / Tr(B_a^dagger B_a)` over a
/// complete orthogonal basis. Fails if the basis is incomplete or not
/// trace-orthogonal, or if the reconstruction misses `y` by more than `tol`.
pub fn decompose<L: Clone>(y: &ComplexMatrix, basis: &[Labeled<L>], tol: f64) -> Result<BasisCoefficients<L>> {
    let order = y.order();
    for b in basis {
        if b.matrix.order() != order {
            return Err(Error::DimensionMismatch {
                expected: order,
                actual: b.matrix.order(),
            });
        }
    }
    if basis.len() != order * order {
        return Err(Error::IncompleteBasis(format!(
            "{} elements for order {order}, need {}",
            basis.len(),
            order * order
        )));
    }
    let norms: Vec<Complex> = basis
        .iter()
        .map(|b| b.matrix.trace_inner(&b.matrix).expect("orders checked"))
        .collect();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let overlap = basis[i].matrix.trace_inner(&basis[j].matrix).expect("orders checked");
            if overlap.norm() > tol * order as f64 {
                return Err(Error::IncompleteBasis(format!(
                    "elements {i} and {j} are not trace-orthogonal"
                )));
            }
        }
    }
    let entries: Vec<(L, Complex)> = basis
        .iter()
        .zip(&norms)
        .map(|(b, n)| (b.label.clone(), b.matrix.trace_inner(y).expect("orders checked") / n))
        .collect();
    let rebuilt = linear_combination(order, entries.iter().zip(basis).map(|((_, c), b)| (*c, &b.matrix)));
    let residual = rebuilt.max_abs_diff(y)?;
    if residual > tol {
        return Err(Error::VerificationFailed(format!(
            "reconstruction residual {residual:.3e} exceeds {tol:.1e}"
        )));
    }
    Ok(BasisCoefficients { entries, residual })
}

/// Direction cosines `lambda_j^mu = Tr(sigma_j R_mu) / 2` of three order-2
/// matrices. Fails if any entry has an imaginary part above `tol`, which
/// means the input is not a set of parametric spin matrices.
pub fn recover_euler(r: &[ComplexMatrix; 3], tol: f64) -> Result<DirectionCosines> {
    let mut out = [[0.0; 3]; 3];
    for (mu, m) in r.iter().enumerate() {
        if m.order() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                actual: m.order(),
            });
        }
        for (j, slot) in out[mu].iter_mut().enumerate() {
            let v = pauli(j as u8 + 1).matmul(m)?.trace() * 0.5;
            if v.im.abs() > tol {
                return Err(Error::NotParametric(v.im));
            }
            *slot = v.re;
        }
    }
    Ok(DirectionCosines(out))
}
