use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::complexmat::{Complex, ComplexMatrix, I, ONE};
use crate::error::{Error, Result};
use crate::generators::{GeneratorIndex, LabeledGenerator};

impl std::ops::Neg for Phase {
    type Output = Phase;

    fn neg(self) -> Phase {
        match self {
            Phase::One => Phase::MinusOne,
            Phase::MinusOne => Phase::One,
            Phase::I => Phase::MinusI,
            Phase::MinusI => Phase::I,
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;

    fn mul(self, other: Phase) -> Phase {
        Phase::nearest(self.value() * other.value())
    }
}

/// A unit phase `+1, -1, +i, -i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    One,
    MinusOne,
    I,
    MinusI,
}

impl Phase {
    pub const ALL: [Phase; 4] = [Phase::One, Phase::MinusOne, Phase::I, Phase::MinusI];

    pub fn value(self) -> Complex {
        match self {
            Phase::One => ONE,
            Phase::MinusOne => -ONE,
            Phase::I => I,
            Phase::MinusI => -I,
        }
    }

    /// The unit phase closest to `z`.
    pub fn nearest(z: Complex) -> Phase {
        Phase::ALL
            .into_iter()
            .min_by(|a, b| (z - a.value()).norm().total_cmp(&(z - b.value()).norm()))
            .expect("non-empty")
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Phase::One => "1",
            Phase::MinusOne => "-1",
            Phase::I => "i",
            Phase::MinusI => "-i",
        }
    }

    /// Prefix used when the phase multiplies a label, e.g. `-i` in `-iA03`.
    pub fn prefix(self) -> &'static str {
        match self {
            Phase::One => "",
            Phase::MinusOne => "-",
            Phase::I => "i",
            Phase::MinusI => "-i",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// One table cell: `row * col = phase * label`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CayleyEntry {
    #[serde(rename = "result")]
    pub label: GeneratorIndex,
    pub phase: Phase,
    #[serde(skip)]
    pub residual: f64,
}

impl fmt::Display for CayleyEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.phase.prefix(), self.label)
    }
}

/// Matches `product` to `phase * pool[k]`, choosing the pool element with the
/// largest normalized trace overlap. Returns `(k, phase, residual)`; `None`
/// when the best match misses by more than `tol`.
pub fn snap_product(
    product: &ComplexMatrix,
    pool: &[LabeledGenerator],
    tol: f64,
) -> Result<Option<(usize, Phase, f64)>> {
    let mut best: Option<(usize, Complex)> = None;
    for (k, b) in pool.iter().enumerate() {
        let norm = b.matrix.trace_inner(&b.matrix)?;
        let c = b.matrix.trace_inner(product)? / norm;
        if best.is_none_or(|(_, bc)| c.norm() > bc.norm()) {
            best = Some((k, c));
        }
    }
    let Some((k, c)) = best else {
        return Ok(None);
    };
    let phase = Phase::nearest(c);
    let residual = product.max_abs_diff(&pool[k].matrix.scale(phase.value()))?;
    Ok((residual <= tol).then_some((k, phase, residual)))
}

/// Products of every ordered pair of `labels`, each expressed as a unit
/// phase times a basis element.
#[derive(Clone, Debug, PartialEq)]
pub struct CayleyTable {
    pub labels: Vec<GeneratorIndex>,
    entries: Vec<CayleyEntry>,
}

/// Full table of a quasi-closed basis.
pub fn cayley_table(basis: &[LabeledGenerator], tol: f64) -> Result<CayleyTable> {
    cayley_table_with_pool(basis, basis, tol)
}

/// Table over `rows` whose products are snapped to elements of `pool`.
pub fn cayley_table_with_pool(rows: &[LabeledGenerator], pool: &[LabeledGenerator], tol: f64) -> Result<CayleyTable> {
    if rows.is_empty() {
        return Err(Error::Empty("cayley table rows"));
    }
    let cells: Vec<Vec<CayleyEntry>> = rows
        .par_iter()
        .map(|a| {
            rows.iter()
                .map(|b| {
                    let p = a.matrix.matmul(&b.matrix)?;
                    match snap_product(&p, pool, tol)? {
                        Some((k, phase, residual)) => Ok(CayleyEntry {
                            label: pool[k].label.clone(),
                            phase,
                            residual,
                        }),
                        None => Err(Error::QuasiClosureViolation {
                            row: a.label.to_string(),
                            col: b.label.to_string(),
                            residual: f64::INFINITY,
                        }),
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(CayleyTable {
        labels: rows.iter().map(|r| r.label.clone()).collect(),
        entries: cells.into_iter().flatten().collect(),
    })
}

impl CayleyTable {
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    fn position(&self, label: &GeneratorIndex) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn entry_at(&self, row: usize, col: usize) -> &CayleyEntry {
        &self.entries[row * self.size() + col]
    }

    pub fn entry(&self, row: &GeneratorIndex, col: &GeneratorIndex) -> Option<&CayleyEntry> {
        Some(self.entry_at(self.position(row)?, self.position(col)?))
    }

    /// Largest snap residual over all cells.
    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.residual).fold(0.0, f64::max)
    }

    /// The table restricted to `labels`, in that order.
    pub fn subtable(&self, labels: &[GeneratorIndex]) -> Result<CayleyTable> {
        let pos = labels
            .iter()
            .map(|l| {
                self.position(l)
                    .ok_or_else(|| Error::InvalidInput(format!("{l} is not in the table")))
            })
            .collect::<Result<Vec<_>>>()?;
        let entries = pos
            .iter()
            .flat_map(|&i| pos.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.entry_at(i, j).clone())
            .collect();
        Ok(CayleyTable {
            labels: labels.to_vec(),
            entries,
        })
    }

    /// True iff `a b = -b a` according to the table.
    pub fn anticommute(&self, a: usize, b: usize) -> bool {
        let (ab, ba) = (self.entry_at(a, b), self.entry_at(b, a));
        ab.label == ba.label && ab.phase == -ba.phase
    }

    /// For each label, the number of table members it anticommutes with.
    pub fn census(&self) -> Vec<(GeneratorIndex, usize)> {
        (0..self.size())
            .map(|a| {
                let count = (0..self.size()).filter(|&b| self.anticommute(a, b)).count();
                (self.labels[a].clone(), count)
            })
            .collect()
    }

    /// Long format, one `row,col,result,phase` line per cell.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,result,phase\n");
        for (i, a) in self.labels.iter().enumerate() {
            for (j, b) in self.labels.iter().enumerate() {
                let e = self.entry_at(i, j);
                out.push_str(&format!("{a},{b},{},{}\n", e.label, e.phase));
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    /// Aligned grid with cells like `iA31`.
    pub fn pretty(&self) -> String {
        let cells: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        let width = cells
            .iter()
            .map(String::len)
            .chain(self.labels.iter().map(|l| l.to_string().len()))
            .max()
            .unwrap_or(1);
        let mut out = format!("{:>width$}", "*");
        for l in &self.labels {
            out.push_str(&format!(" {:>width$}", l.to_string()));
        }
        out.push('\n');
        for (i, l) in self.labels.iter().enumerate() {
            out.push_str(&format!("{:>width$}", l.to_string()));
            for j in 0..self.size() {
                out.push_str(&format!(" {:>width$}", cells[i * self.size() + j]));
            }
            out.push('\n');
        }
        out
    }
}

impl Serialize for CayleyTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            labels: &'a [GeneratorIndex],
            rows: Vec<&'a [CayleyEntry]>,
        }
        Out {
            labels: &self.labels,
            rows: self.entries.chunks(self.size()).collect(),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{all_generators, build_generator, AngleList};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-10;

    fn idx(s: &str) -> GeneratorIndex {
        s.parse().unwrap()
    }

    fn full_table(seed: u64) -> CayleyTable {
        let angles = AngleList::random(&mut ChaCha8Rng::seed_from_u64(seed), 2);
        cayley_table(&all_generators(&angles), TOL).unwrap()
    }

    #[test]
    fn quintet_subtable_cells() {
        let table = full_table(1);
        let labels = ["A10", "A21", "A22", "A23", "A30"].map(idx);
        let sub = table.subtable(&labels).unwrap();
        let expected = [
            ["A00", "iA31", "iA32", "iA33", "-iA20"],
            ["-iA31", "A00", "iA03", "-iA02", "iA11"],
            ["-iA32", "-iA03", "A00", "iA01", "iA12"],
            ["-iA33", "iA02", "-iA01", "A00", "iA13"],
            ["iA20", "-iA11", "-iA12", "-iA13", "A00"],
        ];
        for (i, row) in expected.iter().enumerate() {
            for (j, cell) in row.iter().enumerate() {
                assert_eq!(sub.entry_at(i, j).to_string(), *cell, "({i},{j})");
            }
        }
    }

    #[test]
    fn diagonal_is_identity() {
        let table = full_table(2);
        for i in 0..16 {
            let e = table.entry_at(i, i);
            assert_eq!((e.label.clone(), e.phase), (idx("A00"), Phase::One));
        }
        assert!(table.max_residual() <= TOL);
    }

    #[test]
    fn census_is_eight() {
        let table = full_table(3);
        for (label, count) in table.census() {
            let expected = if label.is_identity() { 0 } else { 8 };
            assert_eq!(count, expected, "{label}");
        }
    }

    #[test]
    fn transpose_symmetry() {
        let table = full_table(4);
        for a in 0..16 {
            for b in 0..16 {
                let (ab, ba) = (table.entry_at(a, b), table.entry_at(b, a));
                assert_eq!(ab.label, ba.label);
                assert!(ab.phase == ba.phase || ab.phase == -ba.phase);
            }
        }
    }

    #[test]
    fn table_is_associative() {
        let angles = AngleList::random(&mut ChaCha8Rng::seed_from_u64(5), 2);
        let basis = all_generators(&angles);
        let table = cayley_table(&basis, TOL).unwrap();
        let pos = |l: &GeneratorIndex| basis.iter().position(|b| &b.label == l).unwrap();
        for a in 0..16 {
            for b in 0..16 {
                let ab = table.entry_at(a, b);
                for c in 0..16 {
                    let abc = table.entry_at(pos(&ab.label), c);
                    let predicted = basis[pos(&abc.label)].matrix.scale((ab.phase * abc.phase).value());
                    let direct = &(&basis[a].matrix * &basis[b].matrix) * &basis[c].matrix;
                    assert!(predicted.approx_eq(&direct, TOL).unwrap());
                }
            }
        }
    }

    #[test]
    fn order_eight_is_quasi_closed() {
        let angles = AngleList::random(&mut ChaCha8Rng::seed_from_u64(6), 3);
        let table = cayley_table(&all_generators(&angles), TOL).unwrap();
        assert_eq!(table.size(), 64);
        for (label, count) in table.census() {
            if !label.is_identity() {
                assert_eq!(count, 32, "{label}");
            }
        }
    }

    #[test]
    fn non_closed_pool_is_rejected() {
        let angles = AngleList::trivial(2);
        let rows: Vec<_> = ["A10", "A21"]
            .iter()
            .map(|s| build_generator(&idx(s), &angles).unwrap())
            .collect();
        let err = cayley_table(&rows, TOL).unwrap_err();
        assert!(matches!(err, Error::QuasiClosureViolation { .. }));
    }

    #[test]
    fn csv_and_json_shapes() {
        let table = full_table(7).subtable(&["A10", "A21"].map(idx)).unwrap();
        let csv = table.to_csv();
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.contains("A10,A21,A31,i\n"));
        let json = table.to_json();
        assert_eq!(json["rows"][0][1]["result"], "A31");
        assert_eq!(json["rows"][0][1]["phase"], "i");
        assert!(table.pretty().contains("-iA31"));
    }

    #[test]
    fn phase_algebra() {
        assert_eq!(Phase::I * Phase::I, Phase::MinusOne);
        assert_eq!(Phase::MinusI * Phase::I, Phase::One);
        assert_eq!(Phase::nearest(Complex::new(0.1, -0.9)), Phase::MinusI);
    }
}
