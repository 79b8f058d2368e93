//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints one PASS or FAIL line, and exits nonzero on any failure.

use kgkms::classifier::{classify, BetaRange, PhaseReport};
use kgkms::fixtures;
use kgkms::kms::{extend_blocks, kms1_dominant_state, simplex, y_beta, y_beta_series, Dynamics};
use kgkms::matrix::IntMatrix;
use kgkms::path2::{gap_projection_value, kms_spot_check, GapProjectionSpec};
use kgkms::skeleton::Skeleton;
use kgkms::spectral::{rational_independence, SpectralSummary};
use kgkms::structure::{order_vertices, Decomposition};
use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::ExitCode;
use std::time::Instant;

type Outcome = Result<String, String>;

struct Setup {
    s: Skeleton,
    d: Decomposition,
    sum: SpectralSummary,
}

fn setup(s: Skeleton) -> Setup {
    let d = Decomposition::new(&s);
    let sum = SpectralSummary::new(&s, &d).expect("spectral summary");
    Setup { s, d, sum }
}

fn inf_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn figure1_report() -> Result<(Setup, PhaseReport), String> {
    let f = setup(fixtures::figure1());
    let dy = Dynamics::preferred(&f.sum).map_err(|e| e.to_string())?;
    let rep = classify(&f.s, &f.d, &f.sum, &dy, &[]).map_err(|e| e.to_string())?;
    Ok((f, rep))
}

/// Dominant KMS₁ state of the four-vertex example.
fn dominant_state_golden() -> Outcome {
    let f = setup(fixtures::figure1());
    let dy = Dynamics::preferred(&f.sum).map_err(|e| e.to_string())?;
    let r = [8f64.ln(), 12f64.ln()];
    ensure(inf_dist(&dy.r, &r) == 0.0, || format!("preferred rates {:?}", dy.r))?;
    let x = f.d.comp_of[3];
    let (st, _) = kms1_dominant_state(&f.s, &f.d, &f.sum, &dy, x).map_err(|e| e.to_string())?;
    let want: Vec<f64> = [3.0, 1.0, 12.0, 8.0].iter().map(|v| v / 24.0).collect();
    let err = inf_dist(&st.m, &want);
    ensure(err <= 1e-9, || format!("m = {:?}, error {err:.3e}", st.m))?;
    let m = DVector::from_vec(st.m.clone());
    let mut worst = 0.0f64;
    for (a, rho) in f.s.matrices().iter().zip([8.0, 12.0]) {
        let res = a.to_f64() * &m - &m * rho;
        worst = worst.max(res.amax());
    }
    ensure(worst <= 1e-9, || format!("eigen residual {worst:.3e}"))?;
    Ok(format!("error {err:.1e}, residual {worst:.1e}"))
}

/// The β = 1 set is a 3-simplex built over the 2-simplex on Λ \ D.
fn simplex_dimension() -> Outcome {
    let (_, rep) = figure1_report()?;
    let one = rep
        .regimes
        .iter()
        .find(|g| g.beta == BetaRange::Point { at: 1.0 })
        .ok_or("no β = 1 regime")?;
    ensure(one.dimension == Some(3), || format!("dimension {:?}", one.dimension))?;
    let boundary = one.simplices.first().ok_or("no boundary simplex")?;
    ensure(boundary.dimension == 2 && boundary.vertices == vec![0, 1, 2], || {
        format!("boundary simplex on {:?} of dimension {}", boundary.vertices, boundary.dimension)
    })?;
    // Four affinely independent extreme points span a 3-simplex.
    ensure(one.states.len() == 4, || format!("{} extreme states", one.states.len()))?;
    let base = DVector::from_vec(one.states[0].m.clone());
    let diffs = DMatrix::from_fn(4, 3, |i, j| one.states[j + 1].m[i] - base[i]);
    let rank = diffs.svd(false, false).singular_values.iter().filter(|&&s| s > 1e-9).count();
    ensure(rank == 3, || format!("affine rank {rank}"))?;
    Ok("3-simplex over the 2-simplex on {u,v,w}".into())
}

/// Second critical inverse temperature and the state living there.
fn second_critical_point() -> Outcome {
    let (f, rep) = figure1_report()?;
    let bc = rep.beta_c.ok_or("no second critical point")?;
    let r = [8f64.ln(), 12f64.ln()];
    // Λ \ D has a single nontrivial component {u}; its radii are the loop counts.
    let oracle = (0..2).map(|i| (f.s.matrix(i).get(0, 0) as f64).ln() / r[i]).fold(f64::MIN, f64::max);
    let stated = 6f64.ln() / 12f64.ln();
    ensure((bc - oracle).abs() <= 1e-15 && (bc - stated).abs() <= 1e-15, || format!("β_c = {bc}, oracle {oracle}"))?;
    let at = rep
        .regimes
        .iter()
        .find(|g| g.beta == BetaRange::Point { at: bc })
        .ok_or("no regime at β_c")?;
    ensure(at.dimension == Some(0) && at.states.len() == 1, || "state at β_c is not unique".into())?;
    let m = &at.states[0].m;
    ensure(m[1].abs() <= 1e-9 && m[2].abs() <= 1e-9, || format!("φ(q_v) = {}, φ(q_w) = {}", m[1], m[2]))?;
    Ok(format!("β_c = {bc:.15}, φ(q_v) = {:.1e}, φ(q_w) = {:.1e}", m[1], m[2]))
}

/// Smallest `g ≥ 2` with `n` a power of `g`, found by repeated division.
fn primitive_root(n: u64) -> u64 {
    (2..=n)
        .find(|&g| {
            let mut x = n;
            while x % g == 0 {
                x /= g;
            }
            x == 1
        })
        .unwrap()
}

/// Exact rational independence of logarithms against a brute-force oracle.
fn rational_independence_oracle() -> Outcome {
    ensure(rational_independence(&[8, 12]).is_independent(), || "(8, 12) reported dependent".into())?;
    let roots: Vec<u64> = (0..=1000u64).map(|n| if n < 2 { n } else { primitive_root(n) }).collect();
    let mut mismatches = 0usize;
    let mut first = None;
    for m in 1..=1000u64 {
        for n in 1..=1000u64 {
            let dependent = m == 1 || n == 1 || roots[m as usize] == roots[n as usize];
            if rational_independence(&[m, n]).is_independent() == dependent {
                mismatches += 1;
                first.get_or_insert((m, n));
            }
        }
    }
    ensure(mismatches == 0, || format!("{mismatches} mismatches, first {first:?}"))?;
    Ok("10^6 pairs, 0 mismatches".into())
}

/// Random block upper-triangular matrix with `sizes` diagonal blocks and
/// unit-ish diagonal blocks, so it is well conditioned.
fn random_block_triangular(rng: &mut ChaCha8Rng, sizes: &[usize]) -> DMatrix<f64> {
    let n: usize = sizes.iter().sum();
    let block_of: Vec<usize> = sizes.iter().enumerate().flat_map(|(b, &s)| std::iter::repeat(b).take(s)).collect();
    DMatrix::from_fn(n, n, |r, c| {
        if r == c {
            1.0
        } else if block_of[r] <= block_of[c] {
            rng.gen_range(-0.4..0.4)
        } else {
            0.0
        }
    })
}

/// Extension of a common eigenvector from the lower block of commuting
/// families sharing an eigenbasis.
fn extension_families() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6_1);
    let families = 250;
    let mut worst_agree = 0.0f64;
    let mut worst_res = 0.0f64;
    for fam in 0..families {
        let k = rng.gen_range(2..=3);
        let sizes = [rng.gen_range(1..=4), rng.gen_range(1..=4), rng.gen_range(0..=3)];
        let (nf, nd) = (sizes[0], sizes[1]);
        let n: usize = sizes.iter().sum();
        let p = random_block_triangular(&mut rng, &sizes);
        let pinv = p.clone().try_inverse().ok_or("singular eigenbasis")?;
        let mut mats = Vec::new();
        let mut rho = Vec::new();
        for _ in 0..k {
            let top = rng.gen_range(1.0..6.0);
            // Eigenvalue `top` on the first lower-block column; everything in
            // the upper block stays strictly below it.
            let lambda: Vec<f64> = (0..n)
                .map(|i| {
                    if i == nf {
                        top
                    } else if i < nf {
                        rng.gen_range(0.0..0.9) * top
                    } else if i < nf + nd {
                        rng.gen_range(0.0..1.0) * top
                    } else {
                        rng.gen_range(0.0..2.0) * top
                    }
                })
                .collect();
            mats.push(&p * DMatrix::from_diagonal(&DVector::from_vec(lambda)) * &pinv);
            rho.push(top);
        }
        for a in &mats {
            for b in &mats {
                let c = (a * b - b * a).amax();
                ensure(c < 1e-9, || format!("family {fam}: commutator {c:.1e}"))?;
            }
        }
        let e: Vec<DMatrix<f64>> = mats.iter().map(|m| m.view((0, 0), (nf, nf)).into_owned()).collect();
        let b: Vec<DMatrix<f64>> = mats.iter().map(|m| m.view((0, nf), (nf, nd)).into_owned()).collect();
        let x = p.view((nf, nf), (nd, 1)).column(0).into_owned();
        let ext = extend_blocks(&e, &b, &x, &rho).map_err(|err| format!("family {fam}: {err}"))?;
        worst_agree = worst_agree.max(ext.disagreement);
        let y = &ext.per_color[0];
        let mut full = DVector::zeros(n);
        full.rows_mut(0, nf).copy_from(y);
        full.rows_mut(nf, nd).copy_from(&x);
        let scale = full.amax().max(1.0);
        for (m, &r) in mats.iter().zip(&rho) {
            worst_res = worst_res.max((m * &full - &full * r).amax() / scale);
        }
        // The eigenbasis column itself is the expected extension.
        let expect = p.view((0, nf), (nf, 1)).column(0).into_owned();
        worst_res = worst_res.max((y - expect).amax() / scale);
    }
    ensure(worst_agree <= 1e-9 && worst_res <= 1e-9, || format!("agreement {worst_agree:.1e}, residual {worst_res:.1e}"))?;
    Ok(format!("{families} families, agreement {worst_agree:.1e}, residual {worst_res:.1e}"))
}

/// Random commuting graph with `sizes.len()` nontrivial components, all
/// coordinatewise irreducible and free of sinks and sources.
fn random_valid_graph(rng: &mut ChaCha8Rng, sizes: &[usize]) -> Skeleton {
    let n: usize = sizes.iter().sum();
    let mut a = vec![vec![0u64; n]; n];
    let mut start = 0;
    let mut comp = vec![0; n];
    for (ci, &sz) in sizes.iter().enumerate() {
        let idx: Vec<usize> = (start..start + sz).collect();
        for (j, &v) in idx.iter().enumerate() {
            comp[v] = ci;
            // a cycle through the block keeps it strongly connected
            a[idx[(j + 1) % sz]][v] = 1;
        }
        for &r in &idx {
            for &c in &idx {
                if rng.gen_bool(0.25) {
                    a[r][c] += 1;
                }
            }
        }
        start += sz;
    }
    for r in 0..n {
        for c in 0..n {
            if comp[r] < comp[c] && rng.gen_bool(0.3) {
                a[r][c] = 1;
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let rows: Vec<Vec<u64>> = (0..n).map(|r| (0..n).map(|c| a[perm[r]][perm[c]]).collect()).collect();
    let m = IntMatrix::from_rows(&rows);
    let sq = m.checked_mul(&m).unwrap();
    let (c0, c1) = (rng.gen_range(0..=2u64), rng.gen_range(1..=2u64));
    let red: Vec<Vec<u64>> =
        (0..n).map(|r| (0..n).map(|c| sq.get(r, c) + c1 * m.get(r, c) + if r == c { c0 } else { 0 }).collect()).collect();
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Skeleton::from_matrices(&refs, &[rows, red]).unwrap()
}

/// Simultaneous block triangularization on random valid graphs.
fn block_triangular_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3_1);
    let graphs = 100;
    for gi in 0..graphs {
        let ncomp = rng.gen_range(1..=3);
        let mut sizes: Vec<usize> = (0..ncomp).map(|_| rng.gen_range(1..=4)).collect();
        while sizes.iter().sum::<usize>() > 10 {
            let i = sizes.iter().position(|&s| s > 1).unwrap();
            sizes[i] -= 1;
        }
        let s = random_valid_graph(&mut rng, &sizes);
        let d = Decomposition::new(&s);
        ensure(d.components.len() == ncomp, || format!("graph {gi}: {} components", d.components.len()))?;
        let o = order_vertices(&s, &d).map_err(|e| format!("graph {gi}: {e}"))?;
        // Block labels by first appearance along the order; each component must be contiguous.
        let mut label = vec![usize::MAX; d.components.len()];
        let mut next = 0;
        let mut pos_block = Vec::with_capacity(s.n());
        for (p, &v) in o.order.iter().enumerate() {
            let c = d.comp_of[v];
            if label[c] == usize::MAX {
                label[c] = next;
                next += 1;
            } else {
                ensure(d.comp_of[o.order[p - 1]] == c, || format!("graph {gi}: component split by the order"))?;
            }
            pos_block.push(label[c]);
        }
        for (i, m) in s.matrices().iter().enumerate() {
            for p in 0..s.n() {
                for q in 0..s.n() {
                    let x = m.get(o.order[p], o.order[q]);
                    ensure(x == 0 || pos_block[p] <= pos_block[q], || {
                        format!("graph {gi}: colour {} entry ({p},{q}) = {x} below the diagonal blocks", i + 1)
                    })?;
                }
            }
        }
    }
    Ok(format!("{graphs} graphs"))
}

/// Gap projections on the second concrete example.
fn gap_projection_oracle() -> Outcome {
    let g = fixtures::figure2_concrete();
    let s = g.skeleton();
    let f = setup(s.clone());
    let r = vec![8f64.ln(), 12f64.ln()];
    let dy = Dynamics::with_rates(r.clone(), &f.sum).map_err(|e| e.to_string())?;
    let sim = simplex(s, &dy, 1.0, &[0, 1, 2]).map_err(|e| e.to_string())?;
    let gap = |eps: &DVector<f64>, v: usize, e: Vec<usize>| {
        let spec = GapProjectionSpec::new(&g, v, e).map_err(|e| e.to_string())?;
        gap_projection_value(&g, eps, 1.0, &r, &spec).map_err(|e| e.to_string())
    };
    let mut worst_diff = 0.0f64;
    let at_w = &sim.extreme_points[2];
    let eps_w = DVector::from_vec(vec![0.0, 0.0, at_w.epsilon]);
    for v in [0, 1] {
        let val = gap(&eps_w, v, g.all_edges_at(v))?;
        ensure(val.inclusion_exclusion.abs() <= 1e-9 && val.direct.abs() <= 1e-9, || format!("at w, vertex {v}: {val:?}"))?;
        worst_diff = worst_diff.max(val.difference);
    }
    let at_u = &sim.extreme_points[0];
    let eps_u = DVector::from_vec(vec![at_u.epsilon, 0.0, 0.0]);
    let val = gap(&eps_u, 0, g.all_edges_at(0))?;
    ensure(val.direct >= at_u.epsilon - 1e-12 && val.inclusion_exclusion >= at_u.epsilon - 1e-9, || {
        format!("at u: {val:?} against ε_u = {}", at_u.epsilon)
    })?;
    worst_diff = worst_diff.max(val.difference);
    // Singletons, full sets and random subsets at u and v, under three measures.
    let mut rng = ChaCha8Rng::seed_from_u64(0x8_2);
    let mut cases = 0;
    for eps in [eps_w.clone(), eps_u.clone(), DVector::from_vec(vec![0.2, 0.3, 0.1])] {
        for v in [0, 1] {
            let all = g.all_edges_at(v);
            let mut subsets: Vec<Vec<usize>> = all.iter().map(|&e| vec![e]).collect();
            subsets.push(all.clone());
            for _ in 0..60 {
                let p = rng.gen_range(0.1..0.95);
                let e: Vec<usize> = all.iter().copied().filter(|_| rng.gen_bool(p)).collect();
                if !e.is_empty() {
                    subsets.push(e);
                }
            }
            for e in subsets {
                let val = gap(&eps, v, e)?;
                worst_diff = worst_diff.max(val.difference);
                cases += 1;
            }
        }
    }
    ensure(worst_diff <= 1e-9, || format!("methods differ by {worst_diff:.1e}"))?;
    Ok(format!("{cases} (v, E) cases, methods agree to {worst_diff:.1e}"))
}

/// KMS identity on spanning elements, with a perturbed negative control.
fn kms_spot_check_suite() -> Outcome {
    let g = fixtures::figure1_concrete();
    let f = setup(g.skeleton().clone());
    let dy = Dynamics::preferred(&f.sum).map_err(|e| e.to_string())?;
    let (st, _) = kms1_dominant_state(&f.s, &f.d, &f.sum, &dy, f.d.comp_of[3]).map_err(|e| e.to_string())?;
    let rep = kms_spot_check(&g, &st, 200, 2024, 3);
    ensure(rep.max_violation <= 1e-8 && rep.passes(1e-8), || format!("{rep:?}"))?;
    ensure(rep.nontrivial >= 40, || format!("only {} nontrivial samples", rep.nontrivial))?;
    let mut bad = st.clone();
    bad.m[3] += 0.2;
    bad.m.iter_mut().for_each(|x| *x /= 1.2);
    let neg = kms_spot_check(&g, &bad, 200, 2024, 3);
    ensure(neg.max_violation.max(neg.positivity_violation) > 1e-2, || format!("negative control passed: {neg:?}"))?;
    Ok(format!(
        "violation {:.1e} over {} nontrivial pairs; control {:.2e}",
        rep.max_violation,
        rep.nontrivial,
        neg.max_violation.max(neg.positivity_violation)
    ))
}

/// Closed-form y^β against the certified truncated series.
fn y_beta_dual() -> Outcome {
    let mut compared = 0;
    let mut worst = 0.0f64;
    for (name, s) in fixtures::valid_skeletons() {
        let f = setup(s);
        let dy = Dynamics::preferred(&f.sum).or_else(|_| Dynamics::with_rates(vec![1.0; f.s.k()], &f.sum)).map_err(|e| format!("{name}: {e}"))?;
        let all: Vec<usize> = (0..f.s.n()).collect();
        for beta in [1.01, 1.5, 3.0] {
            let closed = y_beta(&f.s, &dy, beta, &all).map_err(|e| format!("{name} at {beta}: {e}"))?;
            let series = y_beta_series(&f.s, &dy, beta, &all, 1e-11).map_err(|e| format!("{name} at {beta}: {e}"))?;
            if series.tail_bound >= 1e-10 {
                continue;
            }
            let scale = closed.y.iter().fold(1.0f64, |a, &b| a.max(b.abs()));
            let diff = inf_dist(&closed.y, &series.y) / scale;
            ensure(diff <= 1e-8, || format!("{name} at β = {beta}: differ by {diff:.1e}"))?;
            worst = worst.max(diff);
            compared += 1;
        }
    }
    ensure(compared == 3 * fixtures::valid_skeletons().len(), || format!("only {compared} certified comparisons"))?;
    Ok(format!("{compared} comparisons, worst {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("dominant state golden values", dominant_state_golden),
        ("β = 1 simplex dimension", simplex_dimension),
        ("second critical point", second_critical_point),
        ("rational independence oracle", rational_independence_oracle),
        ("eigenvector extension families", extension_families),
        ("block triangularization", block_triangular_suite),
        ("gap projection oracle", gap_projection_oracle),
        ("KMS condition spot check", kms_spot_check_suite),
        ("y^β closed form against series", y_beta_dual),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}) [{ms} ms]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail} [{ms} ms]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
