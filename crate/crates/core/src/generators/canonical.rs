//! Dirac-representation gamma matrices and the order-4 Gell-Mann basis.

use std::fmt;

use serde::{Serialize, Serializer};

use super::{pauli, Labeled};
use crate::complexmat::{linear_combination, Complex, ComplexMatrix, I};

/// `gamma_mu` for `mu in 0..=3`, with `gamma_0 = sigma_3 (x) sigma_0` and
/// `gamma_k = i sigma_2 (x) sigma_k`.
pub fn gamma(mu: u8) -> ComplexMatrix {
    match mu {
        0 => pauli(3).kron(&pauli(0)),
        1..=3 => pauli(2).kron(&pauli(mu)).scale(I),
        _ => panic!("gamma index {mu} out of range"),
    }
}

/// `gamma_5 = sigma_1 (x) sigma_0`.
pub fn gamma5() -> ComplexMatrix {
    pauli(1).kron(&pauli(0))
}

/// The sixteen Hermitian involutions of the Dirac algebra, named by the
/// gamma product they stand for. `k` runs over `1..=3`; `IGammaPair(k)` is
/// `i gamma_a gamma_b` with `(k, a, b)` cyclic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiracLabel {
    Identity,
    Gamma5,
    MinusIGamma0Gamma5,
    Gamma0,
    IGammaPair(u8),
    Gamma0GammaK(u8),
    MinusIGammaK(u8),
    GammaKGamma5(u8),
}

impl DiracLabel {
    /// All sixteen labels ordered by their `sigma_a (x) sigma_b` position.
    pub fn all() -> Vec<DiracLabel> {
        (0..4u8)
            .flat_map(|a| (0..4u8).map(move |b| DiracLabel::from_sigma_index(a, b)))
            .collect()
    }

    /// The label whose matrix equals `sigma_a (x) sigma_b`.
    pub fn from_sigma_index(a: u8, b: u8) -> DiracLabel {
        use DiracLabel::*;
        match (a, b) {
            (0, 0) => Identity,
            (1, 0) => Gamma5,
            (2, 0) => MinusIGamma0Gamma5,
            (3, 0) => Gamma0,
            (0, k) => IGammaPair(k),
            (1, k) => Gamma0GammaK(k),
            (2, k) => MinusIGammaK(k),
            (3, k) => GammaKGamma5(k),
            _ => panic!("sigma index out of range"),
        }
    }

    pub fn sigma_index(self) -> (u8, u8) {
        use DiracLabel::*;
        match self {
            Identity => (0, 0),
            Gamma5 => (1, 0),
            MinusIGamma0Gamma5 => (2, 0),
            Gamma0 => (3, 0),
            IGammaPair(k) => (0, k),
            Gamma0GammaK(k) => (1, k),
            MinusIGammaK(k) => (2, k),
            GammaKGamma5(k) => (3, k),
        }
    }
}

impl fmt::Display for DiracLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use DiracLabel::*;
        match *self {
            Identity => write!(f, "I"),
            Gamma5 => write!(f, "g5"),
            MinusIGamma0Gamma5 => write!(f, "-ig0g5"),
            Gamma0 => write!(f, "g0"),
            IGammaPair(k) => {
                let (a, b) = cyclic_pair(k);
                write!(f, "ig{a}g{b}")
            }
            Gamma0GammaK(k) => write!(f, "g0g{k}"),
            MinusIGammaK(k) => write!(f, "-ig{k}"),
            GammaKGamma5(k) => write!(f, "g{k}g5"),
        }
    }
}

impl Serialize for DiracLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn cyclic_pair(k: u8) -> (u8, u8) {
    match k {
        1 => (2, 3),
        2 => (3, 1),
        3 => (1, 2),
        _ => panic!("cyclic index {k} out of range"),
    }
}

/// Matrix of a Dirac label, computed from gamma-matrix products.
pub fn dirac_matrix(label: DiracLabel) -> ComplexMatrix {
    use DiracLabel::*;
    match label {
        Identity => ComplexMatrix::identity(4),
        Gamma5 => gamma5(),
        MinusIGamma0Gamma5 => (&gamma(0) * &gamma5()).scale(-I),
        Gamma0 => gamma(0),
        IGammaPair(k) => {
            let (a, b) = cyclic_pair(k);
            (&gamma(a) * &gamma(b)).scale(I)
        }
        Gamma0GammaK(k) => &gamma(0) * &gamma(k),
        MinusIGammaK(k) => gamma(k).scale(-I),
        GammaKGamma5(k) => &gamma(k) * &gamma5(),
    }
}

pub fn dirac_basis() -> Vec<Labeled<DiracLabel>> {
    DiracLabel::all()
        .into_iter()
        .map(|label| Labeled {
            label,
            matrix: dirac_matrix(label),
        })
        .collect()
}

/// `Lambda_a` for `a in 1..=15`; `0` stands for the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GellMannLabel(pub u8);

impl GellMannLabel {
    pub const IDENTITY: GellMannLabel = GellMannLabel(0);
}

impl fmt::Display for GellMannLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            write!(f, "I")
        } else {
            write!(f, "L{}", self.0)
        }
    }
}

impl Serialize for GellMannLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Order-4 Gell-Mann matrix written as a combination of Dirac matrices.
pub fn gellmann_matrix(a: u8) -> ComplexMatrix {
    let g = |mu| gamma(mu);
    let g5 = gamma5();
    let prod = |x: &ComplexMatrix, y: &ComplexMatrix| x * y;
    let half = Complex::from(0.5);
    let i_half = Complex::new(0.0, 0.5);
    let comb = |terms: &[(Complex, &ComplexMatrix)]| linear_combination(4, terms.iter().map(|(c, m)| (*c, *m)));
    // i g_a g_b
    let ipair = |x: u8, y: u8| prod(&g(x), &g(y)).scale(I);
    let gk5 = |k: u8| prod(&g(k), &g5);
    let g0k = |k: u8| prod(&g(0), &g(k));
    let g05 = prod(&g(0), &g5);
    match a {
        0 => ComplexMatrix::identity(4),
        1 => comb(&[(half, &ipair(2, 3)), (half, &gk5(1))]),
        2 => comb(&[(half, &ipair(3, 1)), (half, &gk5(2))]),
        3 => comb(&[(half, &ipair(1, 2)), (half, &gk5(3))]),
        4 => comb(&[(half, &g5), (half, &g0k(3))]),
        5 => comb(&[(-i_half, &g05), (-i_half, &g(3))]),
        6 => comb(&[(half, &g0k(1)), (-i_half, &g(2))]),
        7 => comb(&[(-i_half, &g(1)), (-half, &g0k(2))]),
        8 => {
            let s = Complex::from(1.0 / 3f64.sqrt());
            comb(&[(s, &g(0)), (s * half, &gk5(3)), (-s * half, &ipair(1, 2))])
        }
        9 => comb(&[(half, &g0k(1)), (i_half, &g(2))]),
        10 => comb(&[(-i_half, &g(1)), (half, &g0k(2))]),
        11 => comb(&[(half, &g5), (-half, &g0k(3))]),
        12 => comb(&[(-i_half, &g05), (i_half, &g(3))]),
        13 => comb(&[(half, &ipair(2, 3)), (-half, &gk5(1))]),
        14 => comb(&[(half, &ipair(3, 1)), (-half, &gk5(2))]),
        15 => {
            let s = Complex::from(1.0 / 6f64.sqrt());
            comb(&[(s, &g(0)), (-s, &gk5(3)), (s, &ipair(1, 2))])
        }
        _ => panic!("Gell-Mann index {a} out of range"),
    }
}

/// Identity followed by `Lambda_1 .. Lambda_15`.
pub fn gellmann4_basis() -> Vec<Labeled<GellMannLabel>> {
    (0..=15u8)
        .map(|a| Labeled {
            label: GellMannLabel(a),
            matrix: gellmann_matrix(a),
        })
        .collect()
}
