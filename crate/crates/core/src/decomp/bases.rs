use super::{decompose, BasisCoefficients};
use crate::complexmat::{linear_combination, Complex, ComplexMatrix, I, ONE};
use crate::error::{Error, Result};
use crate::euler::{euler_matrix, DirectionCosines};
use crate::generators::{
    build_generator, dirac_basis, gellmann4_basis, gellmann_matrix, AngleList, DiracLabel, GellMannLabel,
    GeneratorIndex,
};

fn order4_parts(index: &GeneratorIndex, angles: &AngleList) -> Result<(u8, u8, DirectionCosines, DirectionCosines)> {
    if index.len() != 2 || angles.len() != 2 {
        return Err(Error::AngleCountMismatch {
            index: index.len(),
            angles: angles.len(),
        });
    }
    let c = index.components();
    Ok((c[0], c[1], euler_matrix(angles.get(0)), euler_matrix(angles.get(1))))
}

/// Closed-form coefficients of `A_{mu nu}` over the sixteen Dirac-algebra
/// involutions:
///
/// * `A_{mu nu} = (l1^mu g0 - i l2^mu I - l3^mu g5) (l^nu . g)`
/// * `A_{mu 0} = l1^mu g5 - l2^mu i g0 g5 + l3^mu g0`
/// * `A_{0 nu} = l1^nu i g2 g3 + l2^nu i g3 g1 + l3^nu i g1 g2`
///
/// where `l^mu` is row `mu` of the first factor's Euler matrix and `l^nu`
/// of the second's.
pub fn to_dirac(index: &GeneratorIndex, angles: &AngleList) -> Result<BasisCoefficients<DiracLabel>> {
    use DiracLabel::*;
    let (mu, nu, e1, e2) = order4_parts(index, angles)?;
    let re = Complex::from;
    let mut entries: Vec<(DiracLabel, Complex)> = Vec::new();
    match (mu, nu) {
        (0, 0) => entries.push((Identity, ONE)),
        (mu, 0) => {
            let l = e1.row(mu as usize);
            entries.push((Gamma5, re(l[0])));
            entries.push((MinusIGamma0Gamma5, re(l[1])));
            entries.push((Gamma0, re(l[2])));
        }
        (0, nu) => {
            let l = e2.row(nu as usize);
            for k in 1..=3u8 {
                entries.push((IGammaPair(k), re(l[k as usize - 1])));
            }
        }
        (mu, nu) => {
            let (a, b) = (e1.row(mu as usize), e2.row(nu as usize));
            for j in 1..=3u8 {
                let lj = b[j as usize - 1];
                entries.push((Gamma0GammaK(j), re(a[0] * lj)));
                // -i l2^mu gamma_j = l2^mu (-i gamma_j)
                entries.push((MinusIGammaK(j), re(a[1] * lj)));
                // -l3^mu gamma_5 gamma_j = l3^mu gamma_j gamma_5
                entries.push((GammaKGamma5(j), re(a[2] * lj)));
            }
        }
    }
    let basis = dirac_basis();
    let mut out = BasisCoefficients { entries, residual: 0.0 };
    let target = build_generator(index, angles)?.matrix;
    out.residual = out.reconstruct(&basis)?.max_abs_diff(&target)?;
    Ok(out)
}

/// Largest coefficient gap between [`to_dirac`] and a trace decomposition
/// over the Dirac basis.
pub fn dirac_residual(index: &GeneratorIndex, angles: &AngleList, tol: f64) -> Result<f64> {
    let closed = to_dirac(index, angles)?;
    let traced = decompose(&build_generator(index, angles)?.matrix, &dirac_basis(), tol)?;
    Ok(closed.max_abs_diff(&traced))
}

fn lm(a: u8) -> ComplexMatrix {
    gellmann_matrix(a)
}

fn combo(terms: &[(Complex, u8)]) -> ComplexMatrix {
    let mats: Vec<(Complex, ComplexMatrix)> = terms.iter().map(|&(c, a)| (c, lm(a))).collect();
    linear_combination(4, mats.iter().map(|(c, m)| (*c, m)))
}

/// Coefficients of `A_{mu nu}` over `{I, L1, ..., L15}` from the Gell-Mann
/// forms of the Dirac expansions. For `mu, nu != 0` the two bracketed
/// combinations are multiplied as matrices and the product is decomposed by
/// trace.
pub fn to_gellmann(index: &GeneratorIndex, angles: &AngleList) -> Result<BasisCoefficients<GellMannLabel>> {
    let (mu, nu, e1, e2) = order4_parts(index, angles)?;
    let re = Complex::from;
    let (s3, s6) = (3f64.sqrt(), 6f64.sqrt());
    let basis = gellmann4_basis();
    let target = build_generator(index, angles)?.matrix;
    let m = match (mu, nu) {
        (0, 0) => ComplexMatrix::identity(4),
        (mu, 0) => {
            let l = e1.row(mu as usize);
            combo(&[
                (re(l[0]), 4),
                (re(l[0]), 11),
                (re(l[1]), 5),
                (re(l[1]), 12),
                (re(l[2] * 2.0 * s3 / 3.0), 8),
                (re(l[2] * s6 / 3.0), 15),
            ])
        }
        (0, nu) => {
            let l = e2.row(nu as usize);
            combo(&[
                (re(l[0]), 1),
                (re(l[0]), 13),
                (re(l[1]), 2),
                (re(l[1]), 14),
                (re(l[2]), 3),
                (re(-l[2] * s3 / 3.0), 8),
                (re(l[2] * s6 / 3.0), 15),
            ])
        }
        (mu, nu) => {
            let (a, b) = (e1.row(mu as usize), e2.row(nu as usize));
            let first = &combo(&[
                (re(a[0] * 2.0 * s3 / 3.0), 8),
                (re(a[0] * s6 / 3.0), 15),
                (re(-a[2]), 4),
                (re(-a[2]), 11),
            ]) - &ComplexMatrix::identity(4).scale(I * a[1]);
            let second = combo(&[
                (I * b[0], 7),
                (I * b[0], 10),
                (I * b[1], 6),
                (-I * b[1], 9),
                (I * b[2], 5),
                (-I * b[2], 12),
            ]);
            first.matmul(&second)?
        }
    };
    let mut out = decompose(&m, &basis, crate::STRUCTURAL_TOL)?;
    out.residual = out.reconstruct(&basis)?.max_abs_diff(&target)?;
    Ok(out)
}
