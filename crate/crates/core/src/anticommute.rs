//! Anticommuting generator families.
//!
//! Families of `2n + 1` mutually anticommuting generators of order `2^n` are
//! produced by two recursions from the families one order down:
//!
//! * left form:  `{R_a (x) M_i} + {R_b (x) I, R_c (x) I}`
//! * right form: `{M_i (x) R_a} + {I (x) R_b, I (x) R_c}`
//!
//! with `(a, b, c)` a cyclic permutation of `(1, 2, 3)`. Each parent family
//! yields six children, so order `2^n` has `6^(n-1)` structural families.
//!
//! [`brute_force_maximal_sets`] is an independent check: it builds the
//! anticommutation graph over every non-identity labeled generator and
//! enumerates its maximal cliques.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::complexmat::ComplexMatrix;
use crate::error::{Error, Result};
use crate::generators::{all_generators, build_generator, AngleList, GeneratorIndex, LabeledGenerator};

/// Which recursion produced a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "form", rename_all = "lowercase")]
pub enum FamilyStructure {
    /// `{R_1, R_2, R_3}` at order 2.
    Base,
    /// `R_a (x) M_i`, `R_b (x) I`, `R_c (x) I`.
    Left {
        a: u8,
        parent: Option<usize>,
    },
    /// `M_i (x) R_a`, `I (x) R_b`, `I (x) R_c`.
    Right {
        a: u8,
        parent: Option<usize>,
    },
    /// Found by clique enumeration.
    Clique,
    Custom,
}

impl FamilyStructure {
    /// The cyclic triple `(a, b, c)` of a left or right form.
    pub fn cycle(&self) -> Option<(u8, u8, u8)> {
        match *self {
            FamilyStructure::Left { a, .. } | FamilyStructure::Right { a, .. } => Some(cycle_of(a)),
            _ => None,
        }
    }
}

impl fmt::Display for FamilyStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parent = |p: &Option<usize>| p.map_or(String::new(), |p| format!(" parent={p}"));
        match self {
            FamilyStructure::Base => write!(f, "base"),
            FamilyStructure::Left { a, parent: p } => {
                let (a, b, c) = cycle_of(*a);
                write!(f, "left (a,b,c)=({a},{b},{c}){}", parent(p))
            }
            FamilyStructure::Right { a, parent: p } => {
                let (a, b, c) = cycle_of(*a);
                write!(f, "right (a,b,c)=({a},{b},{c}){}", parent(p))
            }
            FamilyStructure::Clique => write!(f, "clique"),
            FamilyStructure::Custom => write!(f, "custom"),
        }
    }
}

fn cycle_of(a: u8) -> (u8, u8, u8) {
    match a {
        1 => (1, 2, 3),
        2 => (2, 3, 1),
        3 => (3, 1, 2),
        _ => panic!("cyclic index {a} out of range"),
    }
}

/// An ordered set of generators of order `2^n`, all built at `angles`.
///
/// The last `negative_count` members square to `-I` (see
/// [`crate::generators::signature_twist`]); all others square to `+I`.
#[derive(Clone, Debug)]
pub struct GeneratorFamily {
    pub order_exponent: usize,
    pub angles: AngleList,
    pub members: Vec<LabeledGenerator>,
    pub structure: FamilyStructure,
    pub negative_count: usize,
}

impl GeneratorFamily {
    pub fn new(indices: Vec<GeneratorIndex>, angles: &AngleList, structure: FamilyStructure) -> Result<Self> {
        let members = indices
            .iter()
            .map(|i| build_generator(i, angles))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            order_exponent: angles.len(),
            angles: angles.clone(),
            members,
            structure,
            negative_count: 0,
        })
    }

    pub fn from_indices(indices: &[Vec<u8>], angles: &AngleList, structure: FamilyStructure) -> Result<Self> {
        let indices = indices
            .iter()
            .map(|v| GeneratorIndex::new(v.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(indices, angles, structure)
    }

    /// Matrix order `2^n`.
    pub fn order(&self) -> usize {
        1 << self.order_exponent
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn labels(&self) -> Vec<GeneratorIndex> {
        self.members.iter().map(|m| m.label.clone()).collect()
    }

    /// Member labels sorted lexicographically; equal keys mean equal sets.
    pub fn canonical_key(&self) -> Vec<GeneratorIndex> {
        let mut labels = self.labels();
        labels.sort();
        labels
    }

    /// A copy with member `i` removed.
    pub fn without(&self, i: usize) -> GeneratorFamily {
        let mut out = self.clone();
        let removed_negative = i >= self.members.len() - self.negative_count;
        out.members.remove(i);
        if removed_negative {
            out.negative_count -= 1;
        }
        out.structure = FamilyStructure::Custom;
        out
    }

    /// Space-separated member labels, e.g. `A11 A12 A13 A20 A30`.
    pub fn describe(&self) -> String {
        self.members
            .iter()
            .enumerate()
            .map(|(k, m)| {
                if k >= self.members.len() - self.negative_count {
                    format!("i{}", m.label)
                } else {
                    m.label.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Residuals of the defining relations of a family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub member_count: usize,
    /// `2n + 1`.
    pub max_members: usize,
    /// `max_{i != j} |{P_i, P_j}|`.
    pub anticommutation: f64,
    /// `max_i |P_i - s_i P_i^dagger|` with `s_i = +1`, or `-1` for twisted members.
    pub hermiticity: f64,
    /// `max_i |P_i^2 - s_i I|`.
    pub involution: f64,
    /// `max_i |Tr P_i|`.
    pub trace: f64,
    pub tol: f64,
    pub passed: bool,
}

impl VerificationReport {
    pub fn max_residual(&self) -> f64 {
        self.anticommutation
            .max(self.hermiticity)
            .max(self.involution)
            .max(self.trace)
    }

    pub fn summary(&self) -> String {
        format!(
            "{} members (max {}), anticommutation {:.3e}, hermiticity {:.3e}, involution {:.3e}, trace {:.3e}, tol {:.1e}: {}",
            self.member_count,
            self.max_members,
            self.anticommutation,
            self.hermiticity,
            self.involution,
            self.trace,
            self.tol,
            if self.passed { "pass" } else { "FAIL" }
        )
    }
}

fn anti_hermiticity_residual(m: &ComplexMatrix) -> f64 {
    m.scale(crate::complexmat::I).hermiticity_residual()
}

/// Checks `{P_i, P_j} = 2 s_i delta_ij I`, Hermiticity, involution and
/// vanishing trace for every member. Never fails; the report carries the
/// residuals.
pub fn verify_family(family: &GeneratorFamily, tol: f64) -> VerificationReport {
    let members = &family.members;
    let first_negative = members.len().saturating_sub(family.negative_count);
    let mut hermiticity = 0.0f64;
    let mut involution = 0.0f64;
    let mut trace = 0.0f64;
    let mut order_ok = true;
    for (k, m) in members.iter().enumerate() {
        if m.matrix.order() != family.order() {
            order_ok = false;
            continue;
        }
        let negative = k >= first_negative;
        hermiticity = hermiticity.max(if negative {
            anti_hermiticity_residual(&m.matrix)
        } else {
            m.matrix.hermiticity_residual()
        });
        involution = involution.max(m.matrix.involution_residual(if negative { -1.0 } else { 1.0 }));
        trace = trace.max(m.matrix.trace().norm());
    }
    let mut anticommutation = 0.0f64;
    if order_ok {
        for i in 0..members.len() {
            for j in (i + 1)..members.len() {
                let ac = members[i]
                    .matrix
                    .anticommutator(&members[j].matrix)
                    .expect("orders checked");
                anticommutation = anticommutation.max(ac.max_norm());
            }
        }
    }
    let max_members = 2 * family.order_exponent + 1;
    let mut report = VerificationReport {
        member_count: members.len(),
        max_members,
        anticommutation,
        hermiticity,
        involution,
        trace,
        tol,
        passed: false,
    };
    report.passed = order_ok && !members.is_empty() && members.len() <= max_members && report.max_residual() <= tol;
    report
}

/// `{R_1, R_2, R_3}` at one angle triple.
pub fn base_family(angles: &AngleList) -> Result<GeneratorFamily> {
    if angles.len() != 1 {
        return Err(Error::AngleCountMismatch {
            index: 1,
            angles: angles.len(),
        });
    }
    GeneratorFamily::from_indices(&[vec![1], vec![2], vec![3]], angles, FamilyStructure::Base)
}

fn left_child(parent: &[GeneratorIndex], a: u8, n: usize) -> Vec<GeneratorIndex> {
    let (_, b, c) = cycle_of(a);
    let (b, c) = (b.min(c), b.max(c));
    let rest = GeneratorIndex::identity(n - 1);
    parent
        .iter()
        .map(|m| m.prepend(a))
        .chain([rest.prepend(b), rest.prepend(c)])
        .collect()
}

fn right_child(parent: &[GeneratorIndex], a: u8, n: usize) -> Vec<GeneratorIndex> {
    let (_, b, c) = cycle_of(a);
    let (b, c) = (b.min(c), b.max(c));
    let rest = GeneratorIndex::identity(n - 1);
    parent
        .iter()
        .map(|m| m.append(a))
        .chain([rest.append(b), rest.append(c)])
        .collect()
}

/// The six anticommuting quintets of order 4, numbered as in the classic
/// listing: left forms for `a = 1, 2, 3`, then right forms for `a = 3, 2, 1`.
pub fn quintets_order4(angles: &AngleList) -> Result<Vec<GeneratorFamily>> {
    if angles.len() != 2 {
        return Err(Error::AngleCountMismatch {
            index: 2,
            angles: angles.len(),
        });
    }
    let base: Vec<GeneratorIndex> = (1..=3u8)
        .map(|mu| GeneratorIndex::new(vec![mu]).expect("valid"))
        .collect();
    let mut out = Vec::with_capacity(6);
    for a in 1..=3u8 {
        out.push(GeneratorFamily::new(
            left_child(&base, a, 2),
            angles,
            FamilyStructure::Left { a, parent: Some(0) },
        )?);
    }
    for a in (1..=3u8).rev() {
        out.push(GeneratorFamily::new(
            right_child(&base, a, 2),
            angles,
            FamilyStructure::Right { a, parent: Some(0) },
        )?);
    }
    for f in &out {
        let report = verify_family(f, crate::STRUCTURAL_TOL);
        if !report.passed {
            return Err(Error::VerificationFailed(format!(
                "{}: {}",
                f.describe(),
                report.summary()
            )));
        }
    }
    Ok(out)
}

/// Six children per parent: left forms for `a = 1, 2, 3`, then right forms
/// for `a = 1, 2, 3`. Duplicate sets are dropped.
///
/// Parents must be verified families of order `2^(n-1)` where `n` is the
/// length of `angles`; children are built at `angles` and verified too.
pub fn extend_families(parents: &[GeneratorFamily], angles: &AngleList) -> Result<Vec<GeneratorFamily>> {
    extend_families_with_tol(parents, angles, crate::STRUCTURAL_TOL)
}

pub fn extend_families_with_tol(
    parents: &[GeneratorFamily],
    angles: &AngleList,
    tol: f64,
) -> Result<Vec<GeneratorFamily>> {
    let n = angles.len();
    if n < 2 {
        return Err(Error::UnsupportedOrder(n));
    }
    let children: Vec<Vec<GeneratorFamily>> = parents
        .par_iter()
        .enumerate()
        .map(|(pid, parent)| {
            if parent.order_exponent != n - 1 {
                return Err(Error::DimensionMismatch {
                    expected: n - 1,
                    actual: parent.order_exponent,
                });
            }
            let report = verify_family(parent, tol);
            if !report.passed || parent.len() != 2 * (n - 1) + 1 {
                return Err(Error::VerificationFailed(format!(
                    "parent {pid} ({}): {}",
                    parent.describe(),
                    report.summary()
                )));
            }
            let labels = parent.labels();
            let mut kids = Vec::with_capacity(6);
            for a in 1..=3u8 {
                kids.push(GeneratorFamily::new(
                    left_child(&labels, a, n),
                    angles,
                    FamilyStructure::Left { a, parent: Some(pid) },
                )?);
            }
            for a in 1..=3u8 {
                kids.push(GeneratorFamily::new(
                    right_child(&labels, a, n),
                    angles,
                    FamilyStructure::Right { a, parent: Some(pid) },
                )?);
            }
            for kid in &kids {
                let report = verify_family(kid, tol);
                if !report.passed {
                    return Err(Error::VerificationFailed(format!(
                        "child {}: {}",
                        kid.describe(),
                        report.summary()
                    )));
                }
            }
            Ok(kids)
        })
        .collect::<Result<_>>()?;

    let mut seen = std::collections::HashSet::new();
    Ok(children
        .into_iter()
        .flatten()
        .filter(|f| seen.insert(f.canonical_key()))
        .collect())
}

/// All `6^(n-1)` structural families at order `2^n`: the base triple for
/// `n = 1`, the six numbered quintets for `n = 2`, then six children per
/// family for each further factor.
pub fn structural_families(angles: &AngleList) -> Result<Vec<GeneratorFamily>> {
    if angles.len() == 1 {
        return Ok(vec![base_family(angles)?]);
    }
    let mut families = quintets_order4(&angles.slice(0..2))?;
    for k in 3..=angles.len() {
        families = extend_families(&families, &angles.slice(0..k))?;
    }
    Ok(families)
}

/// Fixed-width bitset over graph vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
        }
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    fn contains(&self, i: usize) -> bool {
        self.words[i / 64] & (1 << (i % 64)) != 0
    }

    fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn intersection(&self, other: &Self) -> Self {
        Self {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    fn difference(&self, other: &Self) -> Self {
        Self {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect(),
        }
    }

    fn intersection_len(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + t)
            })
        })
    }
}

/// Undirected graph over the non-identity generators of one order, with an
/// edge wherever two generators anticommute.
#[derive(Clone, Debug)]
pub struct AnticommutationGraph {
    pub vertices: Vec<GeneratorIndex>,
    adjacency: Vec<BitSet>,
}

impl AnticommutationGraph {
    /// Edge `(i, j)` iff `|{M_i, M_j}|_max <= tol` at `angles` and again at
    /// `confirm`.
    pub fn build(angles: &AngleList, confirm: &AngleList, tol: f64) -> Result<Self> {
        if angles.len() != confirm.len() {
            return Err(Error::AngleCountMismatch {
                index: angles.len(),
                angles: confirm.len(),
            });
        }
        let first: Vec<LabeledGenerator> = all_generators(angles).into_iter().skip(1).collect();
        let second: Vec<LabeledGenerator> = all_generators(confirm).into_iter().skip(1).collect();
        let count = first.len();
        let rows: Vec<Vec<usize>> = (0..count)
            .into_par_iter()
            .map(|i| {
                ((i + 1)..count)
                    .filter(|&j| {
                        anticommute(&first[i].matrix, &first[j].matrix, tol)
                            && anticommute(&second[i].matrix, &second[j].matrix, tol)
                    })
                    .collect()
            })
            .collect();
        let mut adjacency = vec![BitSet::new(count); count];
        for (i, row) in rows.iter().enumerate() {
            for &j in row {
                adjacency[i].insert(j);
                adjacency[j].insert(i);
            }
        }
        Ok(Self {
            vertices: first.into_iter().map(|g| g.label).collect(),
            adjacency,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(v)
    }

    /// Edges as sorted label pairs.
    pub fn edges(&self) -> Vec<(GeneratorIndex, GeneratorIndex)> {
        let mut out = Vec::new();
        for (i, row) in self.adjacency.iter().enumerate() {
            for j in row.iter().filter(|&j| j > i) {
                out.push((self.vertices[i].clone(), self.vertices[j].clone()));
            }
        }
        out
    }

    /// Vertices in degeneracy order (repeatedly removing a minimum-degree
    /// vertex).
    fn degeneracy_order(&self) -> Vec<usize> {
        let n = self.vertex_count();
        let mut alive = BitSet::new(n);
        for v in 0..n {
            alive.insert(v);
        }
        let mut order = Vec::with_capacity(n);
        while !alive.is_empty() {
            let v = alive
                .iter()
                .min_by_key(|&v| self.adjacency[v].intersection_len(&alive))
                .expect("non-empty");
            alive.remove(v);
            order.push(v);
        }
        order
    }

    /// All maximal cliques with at least `min_size` vertices, via
    /// Bron-Kerbosch with pivoting. Each clique is returned as sorted vertex
    /// ids; the list is sorted.
    pub fn maximal_cliques(&self, min_size: usize) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut out = Vec::new();
        let order = self.degeneracy_order();
        let mut p = BitSet::new(n);
        for v in 0..n {
            p.insert(v);
        }
        let mut x = BitSet::new(n);
        for v in order {
            let nbrs = &self.adjacency[v];
            let mut r = vec![v];
            self.expand(&mut r, p.intersection(nbrs), x.intersection(nbrs), min_size, &mut out);
            p.remove(v);
            x.insert(v);
        }
        for c in out.iter_mut() {
            c.sort_unstable();
        }
        out.sort();
        out
    }

    fn expand(&self, r: &mut Vec<usize>, mut p: BitSet, mut x: BitSet, min_size: usize, out: &mut Vec<Vec<usize>>) {
        if p.is_empty() {
            if x.is_empty() && r.len() >= min_size {
                out.push(r.clone());
            }
            return;
        }
        if r.len() + p.len() < min_size {
            return;
        }
        let pivot = p
            .iter()
            .chain(x.iter())
            .max_by_key(|&u| self.adjacency[u].intersection_len(&p))
            .expect("p is non-empty");
        let candidates: Vec<usize> = p.difference(&self.adjacency[pivot]).iter().collect();
        for v in candidates {
            let nbrs = &self.adjacency[v];
            r.push(v);
            self.expand(r, p.intersection(nbrs), x.intersection(nbrs), min_size, out);
            r.pop();
            p.remove(v);
            x.insert(v);
        }
    }
}

fn anticommute(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
    a.anticommutator(b).expect("same order").max_norm() <= tol
}

/// Options for [`brute_force_maximal_sets`].
#[derive(Clone, Copy, Debug)]
pub struct BruteForceOptions {
    pub tol: f64,
    /// Permit `n = 4` (255 vertices).
    pub allow_slow: bool,
}

impl Default for BruteForceOptions {
    fn default() -> Self {
        Self {
            tol: crate::STRUCTURAL_TOL,
            allow_slow: false,
        }
    }
}

/// Every maximal anticommuting set of `2n + 1` labeled generators of order
/// `2^n`, found by clique enumeration on the anticommutation graph. Edges are
/// tested at `angles` and confirmed at `confirm`. Families are built at
/// `angles` and sorted by canonical key.
///
/// Maximal cliques larger than `2n + 1` would contradict the upper bound on
/// anticommuting sets and are reported as an error.
pub fn brute_force_maximal_sets(
    angles: &AngleList,
    confirm: &AngleList,
    opts: BruteForceOptions,
) -> Result<Vec<GeneratorFamily>> {
    let n = angles.len();
    match n {
        1..=3 => {}
        4 if opts.allow_slow => {}
        _ => return Err(Error::UnsupportedOrder(n)),
    }
    let graph = AnticommutationGraph::build(angles, confirm, opts.tol)?;
    let target = 2 * n + 1;
    let cliques = graph.maximal_cliques(target);
    let mut families = Vec::with_capacity(cliques.len());
    for clique in cliques {
        if clique.len() > target {
            return Err(Error::VerificationFailed(format!(
                "maximal clique of size {} exceeds {target}",
                clique.len()
            )));
        }
        let indices = clique.iter().map(|&v| graph.vertices[v].clone()).collect();
        families.push(GeneratorFamily::new(indices, angles, FamilyStructure::Clique)?);
    }
    families.sort_by_key(|f| f.canonical_key());
    Ok(families)
}
