//! End-to-end acceptance run. Each criterion prints one `PASS`/`FAIL` line;
//! the process exits nonzero if any criterion fails.
//!
//! Criteria run one after another so their timings are not distorted by
//! each other.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use morsereduce::{
    bpl, check_admissible, count_components, decompose, hexagonal_reduce, reduce_pipeline,
    reduce_pipeline_with, reorder, rs_algorithm, sort_by_lambda, vf_reduction_via_bpl, BinaryImage,
    DiscreteVectorField, Gf2Matrix, Perturbation, PipelineOptions, TruncatedComplex,
};
use petgraph::algo::toposort;
use petgraph::graph::DiGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{
    naive_rank, random_invertible, random_matrix, random_unit_lower, reduction_identities_hold,
    topological_betti,
};

struct Outcome {
    name: &'static str,
    passed: bool,
    detail: String,
}

impl Outcome {
    fn print(&self) {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        println!("{tag} {}: {}", self.name, self.detail);
    }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

/// Random images of the two batch criteria: sides in `sides`, density in
/// `[0.1, 0.9]`, image `i` generated from seed `base + i`.
fn random_images(n: usize, sides: std::ops::RangeInclusive<usize>, base: u64) -> Vec<BinaryImage> {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    (0..n)
        .map(|i| {
            let w = rng.gen_range(sides.clone());
            let h = rng.gen_range(sides.clone());
            let density = rng.gen_range(0.1..=0.9);
            BinaryImage::random(w, h, density, base + i as u64)
        })
        .collect()
}

fn all_four_by_four() -> impl Iterator<Item = BinaryImage> {
    (0..1u64 << 16).map(|mask| BinaryImage::from_mask(4, 4, mask))
}

/// Homology against the topological oracle, and the reduction identities,
/// on one shared set of instances.
fn homology_and_axioms() -> [Outcome; 2] {
    const BUDGET: Duration = Duration::from_secs(120);
    let random = random_images(500, 8..=64, 1_000);
    let mut pipeline_time = Duration::ZERO;
    let (mut instances, mut homology_bad, mut axioms_bad) = (0usize, Vec::new(), Vec::new());

    for (label, img) in random
        .into_iter()
        .enumerate()
        .map(|(i, img)| (format!("random #{i}"), img))
        .chain(
            all_four_by_four()
                .enumerate()
                .map(|(m, img)| (format!("4x4 mask {m:#06x}"), img)),
        )
    {
        instances += 1;
        let start = Instant::now();
        let res = match reduce_pipeline(&img) {
            Ok(res) => res,
            Err(e) => {
                homology_bad.push(format!("{label}: {e}"));
                axioms_bad.push(label);
                continue;
            }
        };
        pipeline_time += start.elapsed();

        let oracle = topological_betti(&img);
        let homology_ok = res.betti_reduced == res.betti_original
            && res.betti_original == oracle
            && res.betti_original[0] == count_components(&img)
            && res.betti_original[2] == 0;
        if !homology_ok {
            homology_bad.push(format!(
                "{label}: reduced {:?} original {:?} oracle {oracle:?}",
                res.betti_reduced, res.betti_original
            ));
        }
        let axioms_ok =
            res.checks.reduction_axioms == Some(true) && reduction_identities_hold(&res.reduction);
        if !axioms_ok {
            axioms_bad.push(label);
        }
    }

    let homology = Outcome {
        name: "oracle homology equivalence",
        passed: homology_bad.is_empty() && pipeline_time < BUDGET,
        detail: format!(
            "{instances} images, {} mismatches, pipeline {:.1} s (budget {} s){}",
            homology_bad.len(),
            secs(pipeline_time),
            BUDGET.as_secs(),
            first(&homology_bad)
        ),
    };
    let axioms = Outcome {
        name: "reduction axioms",
        passed: axioms_bad.is_empty(),
        detail: format!(
            "{instances} reductions, {} violations{}",
            axioms_bad.len(),
            first(&axioms_bad)
        ),
    };
    [homology, axioms]
}

fn first(list: &[String]) -> String {
    list.first()
        .map(|s| format!("; first: {s}"))
        .unwrap_or_default()
}

/// Longest outgoing path per row of the pair digraph, by petgraph's
/// topological sort. `None` if the digraph has a cycle.
fn oracle_lambda(m: &Gf2Matrix, vf: &DiscreteVectorField) -> Option<Vec<usize>> {
    let mut g = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..m.rows()).map(|_| g.add_node(())).collect();
    for &(i, j) in &vf.pairs {
        for k in m.col_ones(j).filter(|&k| k != i) {
            g.add_edge(nodes[i], nodes[k], ());
        }
    }
    let order = toposort(&g, None).ok()?;
    let mut longest = vec![0usize; m.rows()];
    for n in order.into_iter().rev() {
        longest[n.index()] = g
            .neighbors(n)
            .map(|t| longest[t.index()] + 1)
            .max()
            .unwrap_or(0);
    }
    Some(vf.pairs.iter().map(|&(i, _)| longest[i]).collect())
}

fn field_sound(m: &Gf2Matrix) -> Result<(), String> {
    let vf = rs_algorithm(m);
    let report = check_admissible(m, &vf);
    if !report.all_passed() {
        return Err(format!(
            "admissibility: {}",
            report.failures().collect::<Vec<_>>().join(", ")
        ));
    }
    if oracle_lambda(m, &vf).as_deref() != Some(vf.lambda.as_slice()) {
        return Err("lambda differs from the longest-path oracle".into());
    }
    let sorted = sort_by_lambda(&vf);
    let t = TruncatedComplex::new(m.clone(), Gf2Matrix::zeros(m.cols(), 0))
        .map_err(|e| e.to_string())?;
    let rc = reorder(&t, &sorted).map_err(|e| e.to_string())?;
    if !rc.l.is_lower_unitriangular().unwrap_or(false) {
        return Err("L is not unit lower triangular".into());
    }
    let nil =
        rc.l.add(&Gf2Matrix::identity(rc.nv))
            .map_err(|e| e.to_string())?;
    if !nil.pow(rc.nv).map_err(|e| e.to_string())?.is_zero() {
        return Err("(L + 1)^nv is not zero".into());
    }
    Ok(())
}

fn vector_fields() -> Outcome {
    const BUDGET: Duration = Duration::from_secs(60);
    let mut rng = ChaCha8Rng::seed_from_u64(2_000);
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut count = 0;
    for i in 0..500 {
        let rows = rng.gen_range(1..=100);
        let cols = rng.gen_range(1..=100);
        let density = rng.gen_range(0.01..=0.6);
        let m = random_matrix(&mut rng, rows, cols, density);
        count += 1;
        if let Err(e) = field_sound(&m) {
            bad.push(format!("random #{i} ({rows}x{cols}): {e}"));
        }
    }
    for mask in 0u32..512 {
        let m = Gf2Matrix::from_fn(3, 3, |i, j| mask >> (3 * i + j) & 1 == 1);
        count += 1;
        if let Err(e) = field_sound(&m) {
            bad.push(format!("3x3 mask {mask:#05x}: {e}"));
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        name: "vector field correctness",
        passed: bad.is_empty() && elapsed < BUDGET,
        detail: format!(
            "{count} matrices, {} failures, {:.1} s (budget {} s){}",
            bad.len(),
            secs(elapsed),
            BUDGET.as_secs(),
            first(&bad)
        ),
    }
}

fn perturbation_machinery() -> Outcome {
    const BUDGET: Duration = Duration::from_secs(120);
    let images = random_images(200, 1..=32, 3_000);
    let start = Instant::now();
    let mut bad = Vec::new();
    for (i, img) in images.iter().enumerate() {
        let outcome = (|| -> Result<(), String> {
            let res = reduce_pipeline_with(img, PipelineOptions { verify: false })
                .map_err(|e| e.to_string())?;
            let nv = res.nv();
            let reduction = &res.reduction;

            let dec = decompose(reduction).map_err(|e| format!("decompose: {e}"))?;
            let [r0, r1, r2] = res.reduced.dims();
            let expect = [[0, nv, r0], [nv, 0, r1], [0, 0, r2]];
            let got = [dec.blocks(0), dec.blocks(1), dec.blocks(2)];
            if got != expect {
                return Err(format!("block sizes {got:?}, expected {expect:?}"));
            }

            let zero = Perturbation::zero(reduction.big());
            let same = bpl(reduction, &zero, 1).map_err(|e| format!("zero perturbation: {e}"))?;
            if same != *reduction {
                return Err("zero perturbation changed the reduction".into());
            }

            let (small, _) = hexagonal_reduce(&res.reordered).map_err(|e| e.to_string())?;
            let route = vf_reduction_via_bpl(&res.reordered).map_err(|e| format!("route: {e}"))?;
            let via = route.reduction.small();
            if *via.d(1) != small.d1 || *via.d(2) != small.d2 {
                return Err("perturbed route differs from the direct reduction".into());
            }
            if !reduction_identities_hold(&route.reduction) {
                return Err("perturbed route breaks the reduction identities".into());
            }
            Ok(())
        })();
        if let Err(e) = outcome {
            bad.push(format!("image #{i}: {e}"));
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        name: "perturbation machinery",
        passed: bad.is_empty() && elapsed < BUDGET,
        detail: format!(
            "{} images, {} failures, {:.1} s (budget {} s){}",
            images.len(),
            bad.len(),
            secs(elapsed),
            BUDGET.as_secs(),
            first(&bad)
        ),
    }
}

fn scale() -> Outcome {
    const TARGET: (usize, usize) = (690, 1400);
    const PIPELINE_BUDGET: f64 = 5_000.0;
    const HOMOLOGY_BUDGET: f64 = 500.0;
    let mut bad = Vec::new();
    let mut lines = Vec::new();
    for seed in 0..5u64 {
        let img = BinaryImage::random(26, 26, 0.9, 4_000 + seed);
        let res = match reduce_pipeline(&img) {
            Ok(res) => res,
            Err(e) => {
                bad.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        let (rows, cols) = res.original.d1.shape();
        let total = res.timings_ms["total"];
        let homology = res.timings_ms["betti_reduced"];
        let near = |x: usize, t: usize| x.abs_diff(t) * 10 <= t;
        lines.push(format!(
            "D1 {rows}x{cols} -> {}x{} in {total:.0} ms (reduced homology {homology:.2} ms)",
            res.reduced.d1.rows(),
            res.reduced.d1.cols()
        ));
        if !near(rows, TARGET.0) || !near(cols, TARGET.1) {
            bad.push(format!(
                "seed {seed}: D1 {rows}x{cols} is not near {TARGET:?}"
            ));
        }
        if !res.all_passed() {
            bad.push(format!("seed {seed}: verification failed"));
        }
        if total >= PIPELINE_BUDGET || homology >= HOMOLOGY_BUDGET {
            bad.push(format!("seed {seed}: over budget"));
        }
    }
    Outcome {
        name: "scale and performance",
        passed: bad.is_empty(),
        detail: format!(
            "{}; budgets {PIPELINE_BUDGET} ms / {HOMOLOGY_BUDGET} ms{}",
            lines.join("; "),
            first(&bad)
        ),
    }
}

fn gf2_kernel() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5_000);
    let mut bad = Vec::new();
    let checks = 1000;
    for i in 0..checks {
        let rows = rng.gen_range(1..=64);
        let cols = rng.gen_range(1..=64);
        let density = rng.gen_range(0.05..=0.7);
        let m = random_matrix(&mut rng, rows, cols, density);
        let k = m.right_kernel_basis();
        let kernel_ok = m.mul(&k).is_ok_and(|p| p.is_zero())
            && k.cols() == cols - naive_rank(&m)
            && naive_rank(&k) == k.cols();

        let n = rng.gen_range(1..=48);
        let a = random_invertible(&mut rng, n);
        let inverse_ok = a.inverse().is_ok_and(|inv| {
            a.mul(&inv).is_ok_and(|p| p.is_identity()) && inv.mul(&a).is_ok_and(|p| p.is_identity())
        });

        let fill = rng.gen_range(0.05..=0.7);
        let l = random_unit_lower(&mut rng, n, fill);
        let nil = l.add(&Gf2Matrix::identity(n)).expect("square");
        let series_ok = match (
            nil.nilpotent_series_inverse(n),
            l.inverse(),
            l.inv_unit_lower_triangular(),
        ) {
            (Ok(s), Ok(inv), Ok(tri)) => {
                s == inv && tri == inv && l.mul(&s).is_ok_and(|p| p.is_identity())
            }
            _ => false,
        };

        if !(kernel_ok && inverse_ok && series_ok) {
            bad.push(format!(
                "check #{i}: kernel {kernel_ok} inverse {inverse_ok} series {series_ok}"
            ));
        }
    }
    Outcome {
        name: "gf2 kernel",
        passed: bad.is_empty(),
        detail: format!(
            "{checks} randomized checks, {} failures{}",
            bad.len(),
            first(&bad)
        ),
    }
}

fn main() -> ExitCode {
    let mut outcomes = Vec::new();
    let mut run = |o: Outcome| {
        o.print();
        outcomes.push(o.passed);
    };
    for o in homology_and_axioms() {
        run(o);
    }
    run(vector_fields());
    run(perturbation_machinery());
    run(scale());
    run(gf2_kernel());

    let failed = outcomes.iter().filter(|&&p| !p).count();
    println!(
        "{} of {} criteria passed",
        outcomes.len() - failed,
        outcomes.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
