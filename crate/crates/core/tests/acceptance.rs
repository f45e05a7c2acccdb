//! Acceptance suite. Runs every criterion, prints one line each and exits
//! nonzero if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use cliffgen::anticommute::{brute_force_maximal_sets, structural_families, BruteForceOptions, GeneratorFamily};
use cliffgen::complexmat::{Complex, ComplexMatrix, I, ONE};
use cliffgen::decomp::{cayley_table, recover_euler, to_dirac, to_gellmann};
use cliffgen::euler::{euler_matrix, EulerAngles};
use cliffgen::generators::{
    all_generators, build_generator, gellmann4_basis, r_matrices, u_matrix, AngleList, DiracLabel, GeneratorIndex,
    Relation,
};
use cliffgen::gl4::{
    block_antidiagonal_unitary, block_diagonal_unitary, compose, determinant_formula, inverse_params, FourVector,
    FourVectorParams, UnitaryElement,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn m2(rows: [[(f64, f64); 2]; 2]) -> ComplexMatrix {
    ComplexMatrix::from_2x2(rows.map(|r| r.map(|(a, b)| Complex::new(a, b))))
}

fn sigma(k: usize) -> ComplexMatrix {
    match k {
        0 => m2([[(1., 0.), (0., 0.)], [(0., 0.), (1., 0.)]]),
        1 => m2([[(0., 0.), (1., 0.)], [(1., 0.), (0., 0.)]]),
        2 => m2([[(0., 0.), (0., -1.)], [(0., 1.), (0., 0.)]]),
        _ => m2([[(1., 0.), (0., 0.)], [(0., 0.), (-1., 0.)]]),
    }
}

/// Block matrix `[[a, b], [c, d]]` of 2x2 blocks.
fn blocks(a: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix, d: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(4, |i, j| {
        let q = match (i / 2, j / 2) {
            (0, 0) => a,
            (0, 1) => b,
            (1, 0) => c,
            _ => d,
        };
        q.get(i % 2, j % 2)
    })
}

fn residuals(f: &GeneratorFamily) -> f64 {
    let order = f.order();
    let id = ComplexMatrix::identity(order);
    let mut worst = 0.0f64;
    for (i, p) in f.members.iter().enumerate() {
        let p = &p.matrix;
        worst = worst.max(p.max_abs_diff(&p.adjoint()).unwrap());
        worst = worst.max((p * p).max_abs_diff(&id).unwrap());
        worst = worst.max(p.trace().norm());
        for q in &f.members[i + 1..] {
            let q = &q.matrix;
            worst = worst.max((&(p * q) + &(q * p)).max_norm());
        }
    }
    worst
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    for n in 1..=4 {
        let sizes = [3usize, 5, 7, 9];
        for _ in 0..100 {
            let angles = AngleList::random(&mut rng, n);
            for f in structural_families(&angles).map_err(|e| e.to_string())? {
                ensure(f.len() == sizes[n - 1], || format!("n={n}: family of size {}", f.len()))?;
                worst = worst.max(residuals(&f));
                checked += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(worst <= 1e-10, || format!("max residual {worst:.3e}"))?;
    ensure(elapsed < Duration::from_secs(30), || format!("runtime {elapsed:.1?}"))?;
    Ok(format!("{checked} families, max residual {worst:.2e}, {elapsed:.1?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let expected = [1usize, 6, 36, 216];
    let mut counts = Vec::new();
    for n in 1..=4 {
        let c = structural_families(&AngleList::random(&mut rng, n))
            .map_err(|e| e.to_string())?
            .len();
        counts.push(c);
    }
    ensure(counts == expected, || format!("structural counts {counts:?}"))?;
    let mut brute = Vec::new();
    let mut failures = Vec::new();
    for n in 1..=3 {
        let angles = AngleList::random(&mut rng, n);
        let confirm = AngleList::random(&mut rng, n);
        let structural: BTreeSet<_> = structural_families(&angles)
            .map_err(|e| e.to_string())?
            .iter()
            .map(GeneratorFamily::canonical_key)
            .collect();
        let found: BTreeSet<_> = brute_force_maximal_sets(&angles, &confirm, BruteForceOptions::default())
            .map_err(|e| e.to_string())?
            .iter()
            .map(GeneratorFamily::canonical_key)
            .collect();
        brute.push(found.len());
        if found.len() != expected[n - 1] || found != structural {
            failures.push(format!(
                "n={n}: brute force {} vs {} expected, structural subset {}",
                found.len(),
                expected[n - 1],
                structural.is_subset(&found)
            ));
        }
    }
    let elapsed = start.elapsed();
    ensure(failures.is_empty(), || {
        format!("structural {counts:?}, brute force {brute:?}; {}", failures.join("; "))
    })?;
    ensure(elapsed < Duration::from_secs(60), || format!("runtime {elapsed:.1?}"))?;
    Ok(format!("structural {counts:?}, brute force {brute:?}, {elapsed:.1?}"))
}

fn criterion_3() -> Outcome {
    let angles = AngleList::random(&mut ChaCha8Rng::seed_from_u64(303), 2);
    let full = cayley_table(&all_generators(&angles), 1e-10).map_err(|e| e.to_string())?;
    let labels: Vec<GeneratorIndex> = ["A10", "A21", "A22", "A23", "A30"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let sub = full.subtable(&labels).map_err(|e| e.to_string())?;
    let expected = [
        ["A00", "iA31", "iA32", "iA33", "-iA20"],
        ["-iA31", "A00", "iA03", "-iA02", "iA11"],
        ["-iA32", "-iA03", "A00", "iA01", "iA12"],
        ["-iA33", "iA02", "-iA01", "A00", "iA13"],
        ["iA20", "-iA11", "-iA12", "-iA13", "A00"],
    ];
    let mut matched = 0;
    for (i, row) in expected.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            let got = sub.entry_at(i, j).to_string();
            ensure(got == *cell, || {
                format!("cell ({}, {}) is {got}, expected {cell}", labels[i], labels[j])
            })?;
            matched += 1;
        }
    }
    let census: Vec<_> = full.census().into_iter().filter(|(l, _)| !l.is_identity()).collect();
    ensure(census.len() == 15, || format!("census has {} entries", census.len()))?;
    for (label, count) in &census {
        ensure(*count == 8, || format!("{label} anticommutes with {count}"))?;
    }
    Ok(format!("{matched}/25 cells, census 15 x 8"))
}

fn dirac_target(index: &GeneratorIndex) -> ComplexMatrix {
    let zero = m2([[(0., 0.); 2]; 2]);
    let one = sigma(0);
    let g0 = blocks(&one, &zero, &zero, &one.scale(-ONE));
    let g5 = blocks(&zero, &one, &one, &zero);
    let gk = |k: usize| blocks(&zero, &sigma(k), &sigma(k).scale(-ONE), &zero);
    let (a, b) = (index.components()[0] as usize, index.components()[1] as usize);
    match (a, b) {
        (0, 0) => ComplexMatrix::identity(4),
        (0, k) => {
            let (x, y) = [(2, 3), (3, 1), (1, 2)][k - 1];
            (&gk(x) * &gk(y)).scale(I)
        }
        (1, 0) => g5,
        (2, 0) => (&g0 * &g5).scale(-I),
        (3, 0) => g0,
        (1, k) => &g0 * &gk(k),
        (2, k) => gk(k).scale(-I),
        (_, k) => &gk(k) * &g5,
    }
}

fn criterion_4() -> Outcome {
    let angles = AngleList::trivial(2);
    let mut worst = 0.0f64;
    for index in GeneratorIndex::all(2) {
        let g = build_generator(&index, &angles).map_err(|e| e.to_string())?;
        let r = g.matrix.max_abs_diff(&dirac_target(&index)).unwrap();
        ensure(r <= 1e-12, || format!("{index}: residual {r:.3e}"))?;
        let (a, b) = (index.components()[0], index.components()[1]);
        let c = to_dirac(&index, &angles).map_err(|e| e.to_string())?;
        let label = DiracLabel::from_sigma_index(a, b);
        ensure(c.get(&label) == ONE, || format!("{index}: closed form is not {label}"))?;
        worst = worst.max(r);
    }
    Ok(format!("16 generators, max residual {worst:.2e}"))
}

/// Trace coefficients computed directly, `Tr(B^dagger Y) / 4`.
fn trace_coefficient(b: &ComplexMatrix, y: &ComplexMatrix) -> Complex {
    (&b.adjoint() * y).trace() / Complex::from((&b.adjoint() * b).trace().re)
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let dirac: Vec<(DiracLabel, ComplexMatrix)> = GeneratorIndex::all(2)
        .map(|i| {
            let (a, b) = (i.components()[0], i.components()[1]);
            (DiracLabel::from_sigma_index(a, b), dirac_target(&i))
        })
        .collect();
    let gellmann = gellmann4_basis();
    let (mut recon, mut agree) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let angles = AngleList::random(&mut rng, 2);
        for index in GeneratorIndex::all(2) {
            let y = build_generator(&index, &angles).map_err(|e| e.to_string())?.matrix;
            let d = to_dirac(&index, &angles).map_err(|e| e.to_string())?;
            let mut rebuilt = ComplexMatrix::zeros(4);
            for (label, b) in &dirac {
                rebuilt = &rebuilt + &b.scale(d.get(label));
                agree = agree.max((d.get(label) - trace_coefficient(b, &y)).norm());
            }
            recon = recon.max(rebuilt.max_abs_diff(&y).unwrap());

            let g = to_gellmann(&index, &angles).map_err(|e| e.to_string())?;
            let mut rebuilt = ComplexMatrix::zeros(4);
            for b in &gellmann {
                rebuilt = &rebuilt + &b.matrix.scale(g.get(&b.label));
                agree = agree.max((g.get(&b.label) - trace_coefficient(&b.matrix, &y)).norm());
            }
            recon = recon.max(rebuilt.max_abs_diff(&y).unwrap());
        }
    }
    ensure(recon <= 1e-10, || format!("reconstruction residual {recon:.3e}"))?;
    ensure(agree <= 1e-10, || format!("trace disagreement {agree:.3e}"))?;
    Ok(format!(
        "1600 decompositions per basis, residual {recon:.2e}, agreement {agree:.2e}"
    ))
}

fn relative(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.max_abs_diff(b).unwrap() / b.max_norm().max(a.max_norm())
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let (mut comp, mut inv, mut det) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let p1 = FourVectorParams::random(&mut rng);
        let mut p2 = FourVectorParams::random(&mut rng);
        p2.angles = p1.angles;
        let (y1, y2) = (p1.to_matrix(), p2.to_matrix());
        let c = compose(&p2, &p1).map_err(|e| e.to_string())?;
        comp = comp.max(relative(&c.to_matrix(), &(&y2 * &y1)));
        let lu = y1.inverse_lu().map_err(|e| e.to_string())?;
        let closed = inverse_params(&p1, 1e-12).map_err(|e| e.to_string())?;
        inv = inv.max(relative(&closed.to_matrix(), &lu));
        let (d, dl) = (determinant_formula(&p1), y1.det_lu());
        det = det.max((d - dl).norm() / dl.norm().max(d.norm()));
    }
    let elapsed = start.elapsed();
    ensure(comp <= 1e-9 && inv <= 1e-9 && det <= 1e-9, || {
        format!("compose {comp:.3e}, inverse {inv:.3e}, det {det:.3e}")
    })?;
    ensure(elapsed < Duration::from_secs(10), || format!("runtime {elapsed:.1?}"))?;
    Ok(format!(
        "compose {comp:.2e}, inverse {inv:.2e}, det {det:.2e}, {elapsed:.1?}"
    ))
}

/// `e^{i phi} (cos t, i sin t u)` with `u` a random real unit vector.
fn su2_like(rng: &mut impl Rng, phi: f64) -> FourVector {
    let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let u: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
    let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let ph = Complex::from_polar(1.0, phi);
    FourVector::new(ph * t.cos(), u.map(|x| ph * I * (t.sin() * x / norm)))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut det_gap = 0.0f64;
    for _ in 0..200 {
        let mut p = FourVectorParams::random(&mut rng);
        let mut q = p;
        p.n = FourVector::ZERO;
        p.l = FourVector::ZERO;
        let want = p.k.bilinear(&p.k) * p.m.bilinear(&p.m);
        det_gap = det_gap.max((determinant_formula(&p) - want).norm() / want.norm());
        det_gap = det_gap.max((p.to_matrix().det_lu() - want).norm() / want.norm());
        q.k = FourVector::ZERO;
        q.m = FourVector::ZERO;
        let want = q.l.bilinear(&q.l) * q.n.bilinear(&q.n);
        det_gap = det_gap.max((determinant_formula(&q) - want).norm() / want.norm());
        det_gap = det_gap.max((q.to_matrix().det_lu() - want).norm() / want.norm());
    }
    ensure(det_gap <= 1e-12, || {
        format!("special-case determinant gap {det_gap:.3e}")
    })?;

    let mut accepted = Vec::new();
    for _ in 0..20 {
        let angles = EulerAngles::random(&mut rng);
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        let d = block_diagonal_unitary(su2_like(&mut rng, phi), su2_like(&mut rng, -phi), angles, 1e-9)
            .map_err(|e| e.to_string())?;
        accepted.push(d);
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        let l = su2_like(&mut rng, -phi);
        let l = FourVector::new(-l.scalar, l.vector.map(|z| -z));
        let a = block_antidiagonal_unitary(su2_like(&mut rng, phi), l, angles, 1e-9).map_err(|e| e.to_string())?;
        accepted.push(a);
    }
    let id = ComplexMatrix::identity(4);
    let mut unitarity = 0.0f64;
    let mut products = 0;
    for a in &accepted {
        let y = a.params.to_matrix();
        unitarity = unitarity.max((&y.adjoint() * &y).max_abs_diff(&id).unwrap());
        for b in &accepted {
            if a.params.angles != b.params.angles {
                continue;
            }
            let ab = compose(&a.params, &b.params).map_err(|e| e.to_string())?;
            let e = UnitaryElement::check(ab, 0.0, 1e-9);
            ensure(e.report.accepted, || format!("product rejected: {}", e.report))?;
            unitarity = unitarity.max(e.report.unitarity_residual);
            products += 1;
        }
    }
    ensure(unitarity <= 1e-9, || format!("unitarity residual {unitarity:.3e}"))?;
    Ok(format!(
        "determinant gap {det_gap:.2e}, {} elements, {products} products, unitarity {unitarity:.2e}",
        accepted.len()
    ))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let angles = EulerAngles::random(&mut rng);
        let r = r_matrices(angles);
        let rec = recover_euler(&[r[1].matrix.clone(), r[2].matrix.clone(), r[3].matrix.clone()], 1e-12)
            .map_err(|e| e.to_string())?;
        worst = worst.max(rec.max_abs_diff(&euler_matrix(angles)));
        let (sa, ca) = angles.alpha.sin_cos();
        let (sb, cb) = angles.beta.sin_cos();
        let (sg, cg) = angles.gamma.sin_cos();
        let oracle = [
            [ca * cg - sa * cb * sg, sa * cg + ca * cb * sg, sb * sg],
            [-ca * sg - sa * cb * cg, -sa * sg + ca * cb * cg, sb * cg],
            [sa * sb, -ca * sb, cb],
        ];
        for (mu, row) in oracle.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                worst = worst.max((rec.lambda(mu + 1, j + 1) - v).abs());
            }
        }
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:.3e}"))?;
    Ok(format!("1000 draws, max deviation {worst:.2e}"))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    for n in 1..=3 {
        let angles = AngleList::random(&mut rng, n);
        for f in structural_families(&angles).map_err(|e| e.to_string())? {
            let mut variants = vec![f.clone()];
            variants.extend((0..f.len()).map(|i| f.without(i)));
            for v in variants {
                let u = u_matrix(&v, 1e-10).map_err(|e| e.to_string())?;
                let expected = if v.len() % 2 == 0 {
                    Relation::Anticommutes
                } else {
                    Relation::Commutes
                };
                let id = ComplexMatrix::identity(v.order());
                let sq = (&u.matrix * &u.matrix).max_abs_diff(&id).unwrap();
                let mut rel = 0.0f64;
                for m in &v.members {
                    let (um, mu) = (&u.matrix * &m.matrix, &m.matrix * &u.matrix);
                    let r = if expected == Relation::Anticommutes {
                        &um + &mu
                    } else {
                        &um - &mu
                    };
                    rel = rel.max(r.max_norm());
                }
                ensure(sq <= 1e-10 && rel <= 1e-10 && u.relation == expected, || {
                    format!("{}: U^2 residual {sq:.3e}, relation residual {rel:.3e}", v.describe())
                })?;
                worst = worst.max(sq).max(rel);
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} families and drop-one subsets, max residual {worst:.2e}"
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("defining relations, n = 1..4", criterion_1),
        ("family counts and brute-force match", criterion_2),
        ("quintet Cayley sub-table and census", criterion_3),
        ("Dirac correspondence at trivial angles", criterion_4),
        ("closed-form Dirac and Gell-Mann decompositions", criterion_5),
        ("GL(4) composition, inverse, determinant", criterion_6),
        ("special cases and unitary closure", criterion_7),
        ("Euler recovery round trip", criterion_8),
        ("U-matrix relations", criterion_9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let tag = format!("criterion {}", k + 1);
        if !filter.is_empty()
            && !filter
                .iter()
                .any(|f| tag.contains(f.as_str()) || name.contains(f.as_str()))
        {
            continue;
        }
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("{tag}: PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("{tag}: FAIL  {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
