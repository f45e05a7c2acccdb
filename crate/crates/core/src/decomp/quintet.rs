use serde::Serialize;

use super::cayley::{snap_product, Phase};
use crate::anticommute::{verify_family, GeneratorFamily};
use crate::complexmat::{linear_combination, Complex, ComplexMatrix};
use crate::error::{Error, Result};
use crate::generators::{all_generators, GeneratorIndex};

/// One term `h * q_i q_j ...` of a quintet expansion. `factors` is empty for
/// the identity; the product equals `phase * label`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuintetTerm {
    pub factors: Vec<GeneratorIndex>,
    pub label: GeneratorIndex,
    pub phase: Phase,
    pub coefficient: Complex,
}

impl QuintetTerm {
    /// E.g. `A10 A21`, or `A00` for the empty product.
    pub fn expression(&self) -> String {
        if self.factors.is_empty() {
            return self.label.to_string();
        }
        self.factors
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuintetDecomposition {
    pub terms: Vec<QuintetTerm>,
    pub residual: f64,
}

impl QuintetDecomposition {
    pub fn term(&self, label: &GeneratorIndex) -> Option<&QuintetTerm> {
        self.terms.iter().find(|t| &t.label == label)
    }
}

/// Expands `y` over the identity, the five quintet members and their ten
/// pairwise products. Members are sorted by label first, so for the
/// `{A10, A2nu, A30}` quintet the pair terms read `A10 A2nu`, `A10 A30`,
/// `A2nu A2tau` and `A2nu A30`.
pub fn decompose_via_quintet(y: &ComplexMatrix, quintet: &GeneratorFamily, tol: f64) -> Result<QuintetDecomposition> {
    let report = verify_family(quintet, tol);
    if !report.passed || quintet.len() != 5 || quintet.order() != 4 {
        return Err(Error::VerificationFailed(format!(
            "{} is not an anticommuting quintet of order 4: {}",
            quintet.describe(),
            report.summary()
        )));
    }
    if y.order() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: y.order(),
        });
    }
    let mut members = quintet.members.clone();
    members.sort_by(|a, b| a.label.cmp(&b.label));

    let mut products: Vec<(Vec<GeneratorIndex>, ComplexMatrix)> = vec![(Vec::new(), ComplexMatrix::identity(4))];
    for m in &members {
        products.push((vec![m.label.clone()], m.matrix.clone()));
    }
    for i in 0..members.len() {
        for j in (i + 1)..members.len() {
            products.push((
                vec![members[i].label.clone(), members[j].label.clone()],
                members[i].matrix.matmul(&members[j].matrix)?,
            ));
        }
    }

    let pool = all_generators(&quintet.angles);
    let mut terms = Vec::with_capacity(16);
    for (factors, p) in &products {
        let (k, phase, _) = snap_product(p, &pool, tol)?.ok_or_else(|| Error::QuasiClosureViolation {
            row: factors.first().map_or("A00".into(), ToString::to_string),
            col: factors.get(1).map_or(String::new(), ToString::to_string),
            residual: f64::INFINITY,
        })?;
        let b = &pool[k].matrix;
        let c = b.trace_inner(y)? / b.trace_inner(b)?;
        terms.push(QuintetTerm {
            factors: factors.clone(),
            label: pool[k].label.clone(),
            phase,
            coefficient: c / phase.value(),
        });
    }
    let mut labels: Vec<&GeneratorIndex> = terms.iter().map(|t| &t.label).collect();
    labels.sort();
    labels.dedup();
    if labels.len() != 16 {
        return Err(Error::IncompleteBasis(format!(
            "quintet products cover {} of 16 basis elements",
            labels.len()
        )));
    }
    let rebuilt = linear_combination(4, terms.iter().zip(&products).map(|(t, (_, p))| (t.coefficient, p)));
    let residual = rebuilt.max_abs_diff(y)?;
    if residual > tol {
        return Err(Error::VerificationFailed(format!(
            "quintet reconstruction residual {residual:.3e} exceeds {tol:.1e}"
        )));
    }
    Ok(QuintetDecomposition { terms, residual })
}
