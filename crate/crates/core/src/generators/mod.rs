//! Parametric spin matrices and their Kronecker-product generators.
//!
//! The order-2 building blocks are `R_0 = I` and the three Euler-angle
//! parametrized Hermitian involutions `R_1, R_2, R_3`. A generator of order
//! `2^n` is labeled by a multi-index `(mu_1, ..., mu_n)` with each
//! `mu_i in {0, 1, 2, 3}` and equals `R_mu1 (x) ... (x) R_mun`, where factor
//! `i` uses its own triple of Euler angles.

mod canonical;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use canonical::{
    dirac_basis, dirac_matrix, gamma, gamma5, gellmann4_basis, gellmann_matrix, DiracLabel, GellMannLabel,
};

use crate::anticommute::{verify_family, GeneratorFamily};
use crate::complexmat::{Complex, ComplexMatrix, I, ONE, ZERO};
use crate::error::{Error, Result};
use crate::euler::EulerAngles;

/// Multi-index `(mu_1, ..., mu_n)` of a Kronecker-product generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct GeneratorIndex(Vec<u8>);

impl GeneratorIndex {
    pub fn new(components: Vec<u8>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Empty("generator index"));
        }
        if let Some(&bad) = components.iter().find(|&&c| c > 3) {
            return Err(Error::IndexOutOfRange(bad));
        }
        Ok(Self(components))
    }

    /// The all-zero index, i.e. the identity of order `2^n`.
    pub fn identity(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn components(&self) -> &[u8] {
        &self.0
    }

    /// Number of Kronecker factors.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// `(a, self...)`.
    pub fn prepend(&self, a: u8) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(a);
        v.extend_from_slice(&self.0);
        Self(v)
    }

    /// `(self..., a)`.
    pub fn append(&self, a: u8) -> Self {
        let mut v = self.0.clone();
        v.push(a);
        Self(v)
    }

    /// Every index with `n` factors in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = GeneratorIndex> {
        (0..4usize.pow(n as u32)).map(move |mut code| {
            let mut v = vec![0u8; n];
            for slot in v.iter_mut().rev() {
                *slot = (code % 4) as u8;
                code /= 4;
            }
            GeneratorIndex(v)
        })
    }

    fn prefix(&self) -> char {
        match self.0.len() {
            1 => 'R',
            2 => 'A',
            3 => 'B',
            4 => 'C',
            _ => 'M',
        }
    }
}

impl TryFrom<Vec<u8>> for GeneratorIndex {
    type Error = Error;
    fn try_from(v: Vec<u8>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<GeneratorIndex> for Vec<u8> {
    fn from(i: GeneratorIndex) -> Self {
        i.0
    }
}

impl TryFrom<String> for GeneratorIndex {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<GeneratorIndex> for String {
    fn from(i: GeneratorIndex) -> Self {
        i.to_string()
    }
}

/// Renders as `R1`, `A21`, `B102`, `C3000`; longer indices use `M`.
impl fmt::Display for GeneratorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.prefix())?;
        for c in &self.0 {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Accepts `A21`, `21` or `2,1`.
impl FromStr for GeneratorIndex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches(|c: char| c.is_ascii_alphabetic());
        let digits: Vec<u8> = if body.contains(',') {
            body.split(',')
                .map(|p| p.trim().parse::<u8>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::InvalidInput(format!("bad index {s:?}: {e}")))?
        } else {
            body.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| Error::InvalidInput(format!("bad index {s:?}")))
                })
                .collect::<Result<_>>()?
        };
        Self::new(digits)
    }
}

/// A matrix tagged with a label.
#[derive(Clone, Debug, PartialEq)]
pub struct Labeled<L> {
    pub label: L,
    pub matrix: ComplexMatrix,
}

pub type LabeledGenerator = Labeled<GeneratorIndex>;

/// One Euler-angle triple per Kronecker factor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<EulerAngles>", into = "Vec<EulerAngles>")]
pub struct AngleList(Vec<EulerAngles>);

impl AngleList {
    pub fn new(factors: Vec<EulerAngles>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Empty("angle list"));
        }
        if factors.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(factors))
    }

    /// The same triple on all `n` factors.
    pub fn replicated(angles: EulerAngles, n: usize) -> Self {
        assert!(n > 0);
        Self(vec![angles; n])
    }

    pub fn trivial(n: usize) -> Self {
        Self::replicated(EulerAngles::trivial(), n)
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Self {
        assert!(n > 0);
        Self((0..n).map(|_| EulerAngles::random(rng)).collect())
    }

    /// From `3n` numbers `alpha_1, beta_1, gamma_1, alpha_2, ...`.
    pub fn from_flat(values: &[f64]) -> Result<Self> {
        if !values.len().is_multiple_of(3) {
            return Err(Error::InvalidInput(format!(
                "expected a multiple of 3 angles, got {}",
                values.len()
            )));
        }
        Self::new(values.chunks(3).map(|c| EulerAngles::new(c[0], c[1], c[2])).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[EulerAngles] {
        &self.0
    }

    pub fn get(&self, i: usize) -> EulerAngles {
        self.0[i]
    }

    /// The triples of factors `range`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Self {
        Self(self.0[range].to_vec())
    }
}

impl TryFrom<Vec<EulerAngles>> for AngleList {
    type Error = Error;
    fn try_from(v: Vec<EulerAngles>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<AngleList> for Vec<EulerAngles> {
    fn from(a: AngleList) -> Self {
        a.0
    }
}

/// Canonical Pauli matrix `sigma_mu`, with `sigma_0 = I`.
pub fn pauli(mu: u8) -> ComplexMatrix {
    match mu {
        0 => ComplexMatrix::identity(2),
        1 => ComplexMatrix::from_2x2([[ZERO, ONE], [ONE, ZERO]]),
        2 => ComplexMatrix::from_2x2([[ZERO, -I], [I, ZERO]]),
        3 => ComplexMatrix::from_2x2([[ONE, ZERO], [ZERO, -ONE]]),
        _ => panic!("pauli index {mu} out of range"),
    }
}

/// Parametric spin matrix `R_mu` at the given angles (`R_0 = I`).
pub fn r_matrix(mu: u8, angles: EulerAngles) -> ComplexMatrix {
    let (sa, ca) = angles.alpha.sin_cos();
    let (sb, cb) = angles.beta.sin_cos();
    let (sg, cg) = angles.gamma.sin_cos();
    let e_minus = Complex::new(ca, -sa); // e^{-i alpha}
    let e_plus = Complex::new(ca, sa); // e^{+i alpha}
    let re = Complex::from;
    match mu {
        0 => ComplexMatrix::identity(2),
        1 => ComplexMatrix::from_2x2([
            [re(sb * sg), e_minus * Complex::new(cg, -cb * sg)],
            [e_plus * Complex::new(cg, cb * sg), re(-sb * sg)],
        ]),
        2 => ComplexMatrix::from_2x2([
            [re(sb * cg), -I * e_minus * Complex::new(cb * cg, -sg)],
            [I * e_plus * Complex::new(cb * cg, sg), re(-sb * cg)],
        ]),
        3 => ComplexMatrix::from_2x2([[re(cb), I * e_minus * sb], [-I * e_plus * sb, re(-cb)]]),
        _ => panic!("R-matrix index {mu} out of range"),
    }
}

/// `(R_0, R_1, R_2, R_3)` at one angle triple.
pub fn r_matrices(angles: EulerAngles) -> [LabeledGenerator; 4] {
    std::array::from_fn(|mu| Labeled {
        label: GeneratorIndex(vec![mu as u8]),
        matrix: r_matrix(mu as u8, angles),
    })
}

/// Left-to-right Kronecker product of the factor-wise R-matrices; factor `i`
/// is built with `angles[i]`.
pub fn build_generator(index: &GeneratorIndex, angles: &AngleList) -> Result<LabeledGenerator> {
    if index.len() != angles.len() {
        return Err(Error::AngleCountMismatch {
            index: index.len(),
            angles: angles.len(),
        });
    }
    let mut factors = index
        .components()
        .iter()
        .zip(angles.factors())
        .map(|(&mu, &a)| r_matrix(mu, a));
    let first = factors.next().expect("non-empty index");
    let matrix = factors.fold(first, |acc, f| acc.kron(&f));
    Ok(Labeled {
        label: index.clone(),
        matrix,
    })
}

/// All `4^n` labeled generators for an angle list of length `n`, in
/// lexicographic index order.
pub fn all_generators(angles: &AngleList) -> Vec<LabeledGenerator> {
    let per_factor: Vec<[ComplexMatrix; 4]> = angles
        .factors()
        .iter()
        .map(|&a| std::array::from_fn(|mu| r_matrix(mu as u8, a)))
        .collect();
    GeneratorIndex::all(angles.len())
        .map(|index| {
            let c = index.components();
            let mut m = per_factor[0][c[0] as usize].clone();
            for (k, &mu) in c.iter().enumerate().skip(1) {
                m = m.kron(&per_factor[k][mu as usize]);
            }
            Labeled {
                label: index,
                matrix: m,
            }
        })
        .collect()
}

/// Whether U commutes or anticommutes with the family members.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Commutes,
    Anticommutes,
    Neither,
}

/// Scaled product of all members of a family.
#[derive(Clone, Debug)]
pub struct UMatrix {
    pub matrix: ComplexMatrix,
    /// Phase multiplied onto the raw product: `1` or `-i`.
    pub phase: Complex,
    pub member_count: usize,
    /// `max |U^2 - I|`.
    pub square_residual: f64,
    /// `max_k |[U, P_k]|`.
    pub commutator_residual: f64,
    /// `max_k |{U, P_k}|`.
    pub anticommutator_residual: f64,
    pub relation: Relation,
}

impl UMatrix {
    /// Odd member count commutes, even anticommutes.
    pub fn expected_relation(&self) -> Relation {
        if self.member_count % 2 == 1 {
            Relation::Commutes
        } else {
            Relation::Anticommutes
        }
    }
}

/// Product of all generators of a verified family, rescaled so that
/// `U^2 = I`.
///
/// The raw product of an anticommuting set of involutions squares to `+-I`.
/// For `-I` the product is divided by the principal root `i`.
pub fn u_matrix(family: &GeneratorFamily, tol: f64) -> Result<UMatrix> {
    let report = verify_family(family, tol);
    if !report.passed {
        return Err(Error::VerificationFailed(report.summary()));
    }
    let members = &family.members;
    let first = members.first().ok_or(Error::Empty("family"))?;
    let order = first.matrix.order();
    let raw = members
        .iter()
        .skip(1)
        .fold(first.matrix.clone(), |acc, m| &acc * &m.matrix);
    let sq = &raw * &raw;
    let scalar = sq.trace() / order as f64;
    let phase = if scalar.re >= 0.0 { ONE } else { -I };
    let matrix = raw.scale(phase);
    let identity = ComplexMatrix::identity(order);
    let square_residual = (&matrix * &matrix).max_abs_diff(&identity)?;

    let mut commutator_residual = 0.0f64;
    let mut anticommutator_residual = 0.0f64;
    for m in members {
        commutator_residual = commutator_residual.max(matrix.commutator(&m.matrix)?.max_norm());
        anticommutator_residual = anticommutator_residual.max(matrix.anticommutator(&m.matrix)?.max_norm());
    }
    let relation = if anticommutator_residual <= tol {
        Relation::Anticommutes
    } else if commutator_residual <= tol {
        Relation::Commutes
    } else {
        Relation::Neither
    };
    Ok(UMatrix {
        matrix,
        phase,
        member_count: members.len(),
        square_residual,
        commutator_residual,
        anticommutator_residual,
        relation,
    })
}

/// Multiplies the last `q` members by `i` so that they square to `-I`,
/// turning a `Cl_{p+q,0}` family into a `Cl_{p,q}` one.
pub fn signature_twist(family: &GeneratorFamily, q: usize) -> Result<GeneratorFamily> {
    let size = family.members.len();
    if q > size {
        return Err(Error::SignatureOutOfRange { q, size });
    }
    if family.negative_count != 0 {
        return Err(Error::InvalidInput("family is already twisted".into()));
    }
    let mut twisted = family.clone();
    for m in twisted.members.iter_mut().skip(size - q) {
        m.matrix = m.matrix.scale(I);
    }
    twisted.negative_count = q;
    Ok(twisted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anticommute::{quintets_order4, FamilyStructure};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, TAU};

    const TOL: f64 = 1e-10;

    fn pauli_family() -> GeneratorFamily {
        GeneratorFamily::from_indices(
            &[vec![1], vec![2], vec![3]],
            &AngleList::trivial(1),
            FamilyStructure::Base,
        )
        .unwrap()
    }

    #[test]
    fn index_parse_and_display() {
        let i: GeneratorIndex = "A21".parse().unwrap();
        assert_eq!(i.components(), &[2, 1]);
        assert_eq!(i.to_string(), "A21");
        assert_eq!("2,1".parse::<GeneratorIndex>().unwrap(), i);
        assert_eq!("1,0,3".parse::<GeneratorIndex>().unwrap().to_string(), "B103");
        assert_eq!(GeneratorIndex::new(vec![4]), Err(Error::IndexOutOfRange(4)));
        assert!("".parse::<GeneratorIndex>().is_err());
        assert_eq!(GeneratorIndex::all(2).count(), 16);
    }

    #[test]
    fn r_matrices_reduce_to_pauli() {
        for r in r_matrices(EulerAngles::trivial()) {
            let mu = r.label.components()[0];
            assert!(r.matrix.approx_eq(&pauli(mu), 0.0).unwrap(), "R{mu}");
        }
    }

    #[test]
    fn r3_at_right_angles_is_sigma1() {
        let r3 = r_matrix(3, EulerAngles::new(FRAC_PI_2, FRAC_PI_2, 0.0));
        assert!(r3.approx_eq(&pauli(1), 1e-15).unwrap());
    }

    #[test]
    fn r3_with_beta_full_turn() {
        // alpha + gamma = 0 and beta = 2pi
        let r3 = r_matrix(3, EulerAngles::new(0.4, TAU, -0.4));
        assert!(r3.approx_eq(&pauli(3), 1e-12).unwrap());
        let r1 = r_matrix(1, EulerAngles::new(0.4, TAU, -0.4));
        assert!(r1.approx_eq(&pauli(1), 1e-12).unwrap());
    }

    #[test]
    fn r_matrices_trace_det() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let a = EulerAngles::random(&mut rng);
            for mu in 1..=3 {
                let r = r_matrix(mu, a);
                assert!(r.trace().norm() < 1e-15);
                assert!((r.det_lu() + ONE).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn build_generator_identity_and_dirac() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let angles = AngleList::random(&mut rng, 2);
        let g = build_generator(&GeneratorIndex::identity(2), &angles).unwrap();
        assert!((g.matrix.trace() - Complex::from(4.0)).norm() < 1e-14);

        let a21 = build_generator(&"A21".parse().unwrap(), &AngleList::trivial(2)).unwrap();
        // -i gamma_1
        let expected = gamma(1).scale(-I);
        assert!(a21.matrix.approx_eq(&expected, 0.0).unwrap());
    }

    #[test]
    fn build_generator_errors() {
        let angles = AngleList::trivial(2);
        assert!(matches!(
            build_generator(&"B111".parse().unwrap(), &angles),
            Err(Error::AngleCountMismatch { index: 3, angles: 2 })
        ));
    }

    #[test]
    fn order_eight_generator_is_hermitian_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let angles = AngleList::random(&mut rng, 3);
        let b = build_generator(&"B111".parse().unwrap(), &angles).unwrap();
        assert_eq!(b.matrix.order(), 8);
        assert!(b.matrix.hermiticity_residual() < 1e-12);
        assert!(b.matrix.involution_residual(1.0) < TOL);
        assert!(b.matrix.trace().norm() < 1e-12);
    }

    #[test]
    fn all_generators_match_build_generator() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let angles = AngleList::random(&mut rng, 2);
        for g in all_generators(&angles) {
            let direct = build_generator(&g.label, &angles).unwrap();
            assert!(g.matrix.approx_eq(&direct.matrix, 0.0).unwrap());
        }
    }

    #[test]
    fn u_matrix_of_pauli_pair_and_triple() {
        let pair = pauli_family().without(2);
        let u = u_matrix(&pair, TOL).unwrap();
        assert!(u.square_residual < TOL);
        assert_eq!(u.relation, Relation::Anticommutes);
        // sigma1 sigma2 = i sigma3 squares to -I; scaled by -i gives sigma3
        assert!(u.matrix.approx_eq(&pauli(3), 1e-15).unwrap());

        let u = u_matrix(&pauli_family(), TOL).unwrap();
        assert_eq!(u.phase, -I);
        assert!(u.matrix.approx_eq(&ComplexMatrix::identity(2), 1e-15).unwrap());
        assert_eq!(u.relation, Relation::Commutes);
    }

    #[test]
    fn u_matrix_of_first_quintet_commutes() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let q = &quintets_order4(&AngleList::random(&mut rng, 2)).unwrap()[0];
        let u = u_matrix(q, TOL).unwrap();
        assert!(u.square_residual < TOL);
        assert_eq!(u.relation, Relation::Commutes);
        assert_eq!(u.relation, u.expected_relation());
    }

    #[test]
    fn u_matrix_rejects_non_family() {
        let bad = GeneratorFamily::from_indices(&[vec![1], vec![1]], &AngleList::trivial(1), FamilyStructure::Custom)
            .unwrap();
        assert!(matches!(u_matrix(&bad, TOL), Err(Error::VerificationFailed(_))));
    }

    #[test]
    fn signature_twist_cases() {
        let fam = pauli_family();
        assert_eq!(signature_twist(&fam, 0).unwrap().members, fam.members);

        let t = signature_twist(&fam, 1).unwrap();
        assert!(t.members[2].matrix.involution_residual(-1.0) < 1e-15);
        assert!(t.members[0].matrix.involution_residual(1.0) < 1e-15);
        assert!(verify_family(&t, TOL).passed);

        assert!(matches!(
            signature_twist(&fam, 4),
            Err(Error::SignatureOutOfRange { q: 4, size: 3 })
        ));
        assert!(signature_twist(&t, 1).is_err());
    }

    #[test]
    fn signature_twist_on_dirac_quintet() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let q = &quintets_order4(&AngleList::random(&mut rng, 2)).unwrap()[1];
        let t = signature_twist(q, 3).unwrap();
        let negatives = t
            .members
            .iter()
            .filter(|m| m.matrix.involution_residual(-1.0) < TOL)
            .count();
        assert_eq!(negatives, 3);
        let report = verify_family(&t, TOL);
        assert!(report.passed, "{}", report.summary());
    }
}
