//! Four-vector parametrization of GL(4).
//!
//! An order-4 matrix is written in 2x2 blocks over the parametric spin
//! matrices `R = (R_1, R_2, R_3)` of one angle triple:
//!
//! ```text
//! Y = | k0 I + k.R      n0 I - n.R |
//!     | -l0 I - l.R     m0 I - m.R |
//! ```
//!
//! All bilinears are unconjugated: `(ab) = a0 b0 - a.b`.

mod unitary;

pub use unitary::{
    block_antidiagonal_unitary, block_diagonal_unitary, su4_condition_residual, UnitaryElement, UnitaryReport,
};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::complexmat::{Complex, ComplexMatrix, I, ONE, ZERO};
use crate::decomp::BasisCoefficients;
use crate::error::{Error, Result};
use crate::euler::{euler_matrix, DirectionCosines, EulerAngles};
use crate::generators::{r_matrix, GeneratorIndex};

pub type Vec3 = [Complex; 3];

pub fn dot(a: &Vec3, b: &Vec3) -> Complex {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// `a . (b x c)`.
pub fn triple(a: &Vec3, b: &Vec3, c: &Vec3) -> Complex {
    dot(a, &cross(b, c))
}

fn add(a: &Vec3, b: &Vec3) -> Vec3 {
    std::array::from_fn(|i| a[i] + b[i])
}

fn scaled(a: &Vec3, s: Complex) -> Vec3 {
    std::array::from_fn(|i| a[i] * s)
}

/// Sum of `coefficient * vector` terms.
fn vsum(terms: &[(Complex, Vec3)]) -> Vec3 {
    terms.iter().fold([ZERO; 3], |acc, (c, v)| add(&acc, &scaled(v, *c)))
}

/// A complex four-component object: scalar part and 3-vector part.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourVector {
    #[serde(rename = "s")]
    pub scalar: Complex,
    #[serde(rename = "v")]
    pub vector: Vec3,
}

impl FourVector {
    pub const ZERO: FourVector = FourVector {
        scalar: ZERO,
        vector: [ZERO; 3],
    };

    pub const fn new(scalar: Complex, vector: Vec3) -> Self {
        Self { scalar, vector }
    }

    /// Scalar part only.
    pub const fn scalar(s: Complex) -> Self {
        Self::new(s, [ZERO; 3])
    }

    /// Components drawn uniformly from the unit square in each of re, im.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut c = || Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        Self::new(c(), [c(), c(), c()])
    }

    /// The unconjugated bilinear `a0 b0 - a.b`.
    pub fn bilinear(&self, other: &FourVector) -> Complex {
        self.scalar * other.scalar - dot(&self.vector, &other.vector)
    }

    pub fn is_finite(&self) -> bool {
        self.scalar.is_finite() && self.vector.iter().all(|z| z.is_finite())
    }

    pub fn max_abs_diff(&self, other: &FourVector) -> f64 {
        self.vector
            .iter()
            .zip(&other.vector)
            .map(|(a, b)| (a - b).norm())
            .fold((self.scalar - other.scalar).norm(), f64::max)
    }
}

/// `(k, n, l, m)` plus the angle triple of the `R` matrices in the blocks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourVectorParams {
    pub k: FourVector,
    pub n: FourVector,
    pub l: FourVector,
    pub m: FourVector,
    pub angles: EulerAngles,
}

impl FourVectorParams {
    pub fn new(k: FourVector, n: FourVector, l: FourVector, m: FourVector, angles: EulerAngles) -> Result<Self> {
        let p = Self { k, n, l, m, angles };
        if ![k, n, l, m].iter().all(FourVector::is_finite) || !angles.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(p)
    }

    /// `k0 = m0 = 1`, everything else zero.
    pub fn identity(angles: EulerAngles) -> Self {
        Self {
            k: FourVector::scalar(ONE),
            n: FourVector::ZERO,
            l: FourVector::ZERO,
            m: FourVector::scalar(ONE),
            angles,
        }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let (k, n, l, m) = (
            FourVector::random(rng),
            FourVector::random(rng),
            FourVector::random(rng),
            FourVector::random(rng),
        );
        Self {
            k,
            n,
            l,
            m,
            angles: EulerAngles::random(rng),
        }
    }

    pub fn euler(&self) -> DirectionCosines {
        euler_matrix(self.angles)
    }

    pub fn max_abs_diff(&self, other: &FourVectorParams) -> f64 {
        [
            self.k.max_abs_diff(&other.k),
            self.n.max_abs_diff(&other.n),
            self.l.max_abs_diff(&other.l),
            self.m.max_abs_diff(&other.m),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// The 4x4 block matrix.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let r: [ComplexMatrix; 4] = std::array::from_fn(|mu| r_matrix(mu as u8, self.angles));
        // s0 I + sign * v.R
        let block = |s0: Complex, v: &Vec3, sign: f64| {
            let mut b = r[0].scale(s0);
            for j in 0..3 {
                b = &b + &r[j + 1].scale(v[j] * sign);
            }
            b
        };
        let blocks = [
            [
                block(self.k.scalar, &self.k.vector, 1.0),
                block(self.n.scalar, &self.n.vector, -1.0),
            ],
            [
                block(-self.l.scalar, &self.l.vector, -1.0),
                block(self.m.scalar, &self.m.vector, -1.0),
            ],
        ];
        ComplexMatrix::from_fn(4, |row, col| blocks[row / 2][col / 2].get(row % 2, col % 2))
    }
}

/// Parameters from order-4 trace coefficients `h_{mu nu}` with both factors
/// at the same angles.
pub fn from_h(h: &BasisCoefficients<GeneratorIndex>, angles: EulerAngles) -> Result<FourVectorParams> {
    from_h_factors(h, angles, angles)
}

/// Parameters from `h_{mu nu}` over `A_{mu nu} = R_mu(outer) (x) R_nu(inner)`:
///
/// * `k_nu = h_{0 nu} + sum_mu h_{mu nu} l3^mu`
/// * `n_0 = sum_mu h_{mu 0} (l1^mu - i l2^mu)`, `-n_nu` the same for `nu > 0`
/// * `-l_nu = sum_mu h_{mu nu} (l1^mu + i l2^mu)`
/// * `m_0 = h_00 - sum_mu h_{mu 0} l3^mu`, `-m_nu = h_{0 nu} - sum_mu h_{mu nu} l3^mu`
///
/// with `l^mu` from the outer Euler matrix. The result lives in the `R` basis
/// of `inner`.
pub fn from_h_factors(
    h: &BasisCoefficients<GeneratorIndex>,
    outer: EulerAngles,
    inner: EulerAngles,
) -> Result<FourVectorParams> {
    let mut table = [[ZERO; 4]; 4];
    for (label, c) in &h.entries {
        let comp = label.components();
        if comp.len() != 2 {
            return Err(Error::AngleCountMismatch {
                index: comp.len(),
                angles: 2,
            });
        }
        table[comp[0] as usize][comp[1] as usize] += c;
    }
    let e = euler_matrix(outer);
    let sum = |nu: usize, f: &dyn Fn(usize) -> Complex| -> Complex { (1..=3).map(|mu| table[mu][nu] * f(mu)).sum() };
    let l3 = |mu: usize| Complex::from(e.lambda(mu, 3));
    let minus = |mu: usize| Complex::new(e.lambda(mu, 1), -e.lambda(mu, 2));
    let plus = |mu: usize| Complex::new(e.lambda(mu, 1), e.lambda(mu, 2));

    let k: [Complex; 4] = std::array::from_fn(|nu| table[0][nu] + sum(nu, &l3));
    let n: [Complex; 4] = std::array::from_fn(|nu| if nu == 0 { sum(0, &minus) } else { -sum(nu, &minus) });
    let l: [Complex; 4] = std::array::from_fn(|nu| -sum(nu, &plus));
    let m: [Complex; 4] = std::array::from_fn(|nu| {
        if nu == 0 {
            table[0][0] - sum(0, &l3)
        } else {
            -(table[0][nu] - sum(nu, &l3))
        }
    });
    let fv = |a: [Complex; 4]| FourVector::new(a[0], [a[1], a[2], a[3]]);
    FourVectorParams::new(fv(k), fv(n), fv(l), fv(m), inner)
}

/// Parameters of `Y'' = Y' Y` for `p2 = Y'` and `p1 = Y`.
pub fn compose(p2: &FourVectorParams, p1: &FourVectorParams) -> Result<FourVectorParams> {
    if p2.angles != p1.angles {
        return Err(Error::AngleMismatch);
    }
    let (k0p, kp) = (p2.k.scalar, &p2.k.vector);
    let (n0p, np) = (p2.n.scalar, &p2.n.vector);
    let (l0p, lp) = (p2.l.scalar, &p2.l.vector);
    let (m0p, mp) = (p2.m.scalar, &p2.m.vector);
    let (k0, k) = (p1.k.scalar, &p1.k.vector);
    let (n0, n) = (p1.n.scalar, &p1.n.vector);
    let (l0, l) = (p1.l.scalar, &p1.l.vector);
    let (m0, m) = (p1.m.scalar, &p1.m.vector);

    let k0pp = k0p * k0 + dot(kp, k) - n0p * l0 + dot(np, l);
    let kpp = vsum(&[
        (k0p, *k),
        (k0, *kp),
        (I, cross(kp, k)),
        (-n0p, *l),
        (l0, *np),
        (I, cross(np, l)),
    ]);
    let n0pp = k0p * n0 - dot(kp, n) + n0p * m0 + dot(np, m);
    let minus_npp = vsum(&[
        (-k0p, *n),
        (n0, *kp),
        (-I, cross(kp, n)),
        (-n0p, *m),
        (-m0, *np),
        (I, cross(np, m)),
    ]);
    let minus_l0pp = -l0p * k0 - dot(lp, k) - m0p * l0 + dot(mp, l);
    let minus_lpp = vsum(&[
        (-l0p, *k),
        (-k0, *lp),
        (-I, cross(lp, k)),
        (-m0p, *l),
        (l0, *mp),
        (I, cross(mp, l)),
    ]);
    let m0pp = -l0p * n0 + dot(lp, n) + m0p * m0 + dot(mp, m);
    let minus_mpp = vsum(&[
        (l0p, *n),
        (-n0, *lp),
        (I, cross(lp, n)),
        (-m0p, *m),
        (-m0, *mp),
        (I, cross(mp, m)),
    ]);
    FourVectorParams::new(
        FourVector::new(k0pp, kpp),
        FourVector::new(n0pp, scaled(&minus_npp, -ONE)),
        FourVector::new(-minus_l0pp, scaled(&minus_lpp, -ONE)),
        FourVector::new(m0pp, scaled(&minus_mpp, -ONE)),
        p1.angles,
    )
}

/// Re-expresses every vector part over the canonical Pauli matrices,
/// `v -> E^T v`, and resets the angles to zero.
pub fn rotate_params(p: &FourVectorParams) -> FourVectorParams {
    let e = p.euler();
    let rot = |v: &FourVector| FourVector::new(v.scalar, e.apply_transpose_complex(&v.vector));
    FourVectorParams {
        k: rot(&p.k),
        n: rot(&p.n),
        l: rot(&p.l),
        m: rot(&p.m),
        angles: EulerAngles::trivial(),
    }
}

/// Closed-form determinant:
///
/// `(kk)(mm) + (ll)(nn) + 2(mk)(ln) + 2(lk)(nm) - 2(nk)(lm)
///  + 2i[(E^T l).(E^T m)x E^T(k0 n + n0 k) + (E^T k).(E^T n)x E^T(m0 l + l0 m)]
///  + 4(k.n)(m.l) - 4(k.m)(n.l)`
pub fn determinant_formula(p: &FourVectorParams) -> Complex {
    let (k, n, l, m) = (&p.k, &p.n, &p.l, &p.m);
    let e = p.euler();
    let et = |v: &Vec3| e.apply_transpose_complex(v);
    let b = FourVector::bilinear;
    let kn = add(&scaled(&n.vector, k.scalar), &scaled(&k.vector, n.scalar));
    let lm = add(&scaled(&l.vector, m.scalar), &scaled(&m.vector, l.scalar));
    b(k, k) * b(m, m) + b(l, l) * b(n, n) + 2.0 * b(m, k) * b(l, n) + 2.0 * b(l, k) * b(n, m) - 2.0 * b(n, k) * b(l, m)
        + 2.0
            * I
            * (triple(&et(&l.vector), &et(&m.vector), &et(&kn)) + triple(&et(&k.vector), &et(&n.vector), &et(&lm)))
        + 4.0 * dot(&k.vector, &n.vector) * dot(&m.vector, &l.vector)
        - 4.0 * dot(&k.vector, &m.vector) * dot(&n.vector, &l.vector)
}

/// Closed-form inverse. Fails with [`Error::Singular`] when the closed-form
/// determinant has modulus at most `floor`.
pub fn inverse_params(p: &FourVectorParams, floor: f64) -> Result<FourVectorParams> {
    let det = determinant_formula(p);
    if det.norm() <= floor || det.is_nan() {
        return Err(Error::Singular {
            determinant: det.norm(),
            floor,
        });
    }
    let e = p.euler();
    let et = |v: &Vec3| e.apply_transpose_complex(v);
    let ev = |v: &Vec3| e.apply_complex(v);
    let b = FourVector::bilinear;
    let (k, n, l, m) = (&p.k, &p.n, &p.l, &p.m);
    let (k0, n0, l0, m0) = (k.scalar, n.scalar, l.scalar, m.scalar);
    let (kv, nv, lv, mv) = (&k.vector, &n.vector, &l.vector, &m.vector);
    let (tk, tn, tl, tm) = (et(kv), et(nv), et(lv), et(mv));
    let inv = ONE / det;

    let k0i = inv * (k0 * b(m, m) + m0 * b(l, n) + l0 * b(n, m) - n0 * b(l, m) + I * triple(&tl, &tm, &tn));
    let ki = scaled(
        &add(
            &vsum(&[
                (-b(m, m), *kv),
                (-b(l, n), *mv),
                (-b(n, m), *lv),
                (b(l, m), *nv),
                (2.0 * ONE, cross(lv, &cross(nv, mv))),
            ]),
            &scaled(
                &ev(&vsum(&[
                    (m0, cross(&tn, &tl)),
                    (l0, cross(&tn, &tm)),
                    (n0, cross(&tl, &tm)),
                ])),
                I,
            ),
        ),
        inv,
    );

    let n0i = inv * (-k0 * b(n, m) + m0 * b(k, n) - l0 * b(n, n) - n0 * b(k, m) + I * triple(&tk, &tm, &tn));
    let ni = scaled(
        &add(
            &vsum(&[
                (-b(n, m), *kv),
                (b(k, n), *mv),
                (-b(n, n), *lv),
                (-b(k, m), *nv),
                (2.0 * ONE, cross(kv, &cross(mv, nv))),
            ]),
            &scaled(
                &ev(&vsum(&[
                    (k0, cross(&tm, &tn)),
                    (m0, cross(&tk, &tn)),
                    (n0, cross(&tm, &tk)),
                ])),
                I,
            ),
        ),
        inv,
    );

    let l0i = inv * (k0 * b(m, l) - m0 * b(k, l) - l0 * b(k, m) - n0 * b(l, l) + I * triple(&tm, &tl, &tk));
    let li = scaled(
        &add(
            &vsum(&[
                (b(m, l), *kv),
                (-b(k, l), *mv),
                (-b(k, m), *lv),
                (-b(l, l), *nv),
                (2.0 * ONE, cross(mv, &cross(kv, lv))),
            ]),
            &scaled(
                &ev(&vsum(&[
                    (m0, cross(&tl, &tk)),
                    (k0, cross(&tl, &tm)),
                    (l0, cross(&tm, &tk)),
                ])),
                I,
            ),
        ),
        inv,
    );

    let m0i = inv * (k0 * b(l, n) + m0 * b(k, k) - l0 * b(k, n) + n0 * b(l, k) + I * triple(&tn, &tl, &tk));
    let mi = scaled(
        &add(
            &vsum(&[
                (-b(l, n), *kv),
                (-b(k, k), *mv),
                (b(k, n), *lv),
                (-b(k, l), *nv),
                (2.0 * ONE, cross(nv, &cross(lv, kv))),
            ]),
            &scaled(
                &ev(&vsum(&[
                    (n0, cross(&tk, &tl)),
                    (l0, cross(&tk, &tn)),
                    (k0, cross(&tn, &tl)),
                ])),
                I,
            ),
        ),
        inv,
    );

    FourVectorParams::new(
        FourVector::new(k0i, ki),
        FourVector::new(n0i, ni),
        FourVector::new(l0i, li),
        FourVector::new(m0i, mi),
        p.angles,
    )
}
