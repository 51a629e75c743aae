//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p cvcluster --test acceptance` (add `--release` for
//! representative timings).

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cvcluster::analysis::{adjacency_from_unitary, find_regular_phases, SearchStage, DEFAULT_PHASE_SEED};
use cvcluster::blochmessiah::{real_form_conditions, bloch_messiah, canonical_cluster_interferometer};
use cvcluster::ensemble::{
    random_adjacency, random_compatible_gauge, random_hermitian_pd, random_orthogonal_seed, random_phases,
    random_symmetric_unitary,
};
use cvcluster::graph::parse_graph;
use cvcluster::matfun::{hermitian_apply, symmetric_unitary_spectrum};
use cvcluster::oracle::{bogoliubov_oracle, convergence_sweep, covariance_oracle};
use cvcluster::synthesis::{
    bogoliubov_from_interaction, covariance_closed_form, gauge_faithful, gauge_identity, interaction_from_cluster,
    unitary_from_adjacency, validate_gauge,
};
use cvcluster::{AdjacencyMatrix64, ComplexMatrix64, Gauge, InteractionMatrix, PhaseVector64, Result, SqueezeScale, Tolerances64};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { passed, detail })
}

fn tol() -> Tolerances64 {
    Tolerances64::default()
}

fn scale(z: f64) -> SqueezeScale<f64> {
    SqueezeScale::new(z).expect("positive z")
}

fn instance(rng: &mut ChaCha8Rng, max_n: usize) -> (AdjacencyMatrix64, PhaseVector64) {
    let n = rng.random_range(1..=max_n);
    let density = rng.random_range(0.3..=1.0);
    (random_adjacency(rng, n, 2.0, density), random_phases(rng, n))
}

fn faithful_identity() -> Result<Outcome> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let (a, theta) = instance(&mut rng, 8);
        for z in [0.5, 1.0, 2.0] {
            let p = gauge_faithful(&a, &theta, scale(z), &tol())?;
            let c = covariance_closed_form(&a, &theta, &p, scale(z), &tol())?;
            let target = ComplexMatrix64::identity(a.n()).scale_real((-2.0 * z).exp());
            worst = worst.max(c.c.max_diff(&target));
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-9 && elapsed < Duration::from_secs(5),
        format!("max |C - e^(-2z) 1| = {worst:.3e} (tol 1e-9), {:.2} s (limit 5 s)", elapsed.as_secs_f64()),
    )
}

fn self_inverse() -> Result<Outcome> {
    let a = parse_graph::<f64>("2\n0 1 1\n")?;
    let theta = PhaseVector64::zeros(2);
    let c = covariance_closed_form(&a, &theta, &gauge_identity(2), scale(1.0), &tol())?;
    let target = ComplexMatrix64::identity(2).scale_real(2.0 * (-2.0f64).exp());
    let err = c.c.max_diff(&target);
    outcome(err <= 1e-10, format!("C[0][0] = {:.9}, max deviation from 2e^(-2) 1 = {err:.3e} (tol 1e-10)", c.c[(0, 0)].re))
}

fn unit_gauge() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let (a, theta) = instance(&mut rng, 8);
        let z = rng.random_range(0.25..=3.0);
        let c = covariance_closed_form(&a, &theta, &gauge_identity(a.n()), scale(z), &tol())?;
        let target = hermitian_apply(&a.to_complex(), |l| (l * l + 1.0) * (-2.0 * z).exp(), tol().rtol)?;
        worst = worst.max(c.c.max_diff(&target));
    }
    outcome(worst <= 1e-9, format!("max |C - (A^2+1) e^(-2z)| = {worst:.3e} (tol 1e-9)"))
}

/// Identity, faithful or random compatible gauge, in rotation.
fn gauge_for(k: usize, rng: &mut ChaCha8Rng, a: &AdjacencyMatrix64, theta: &PhaseVector64, z: f64) -> Result<ComplexMatrix64> {
    match k % 3 {
        0 => Ok(gauge_identity(a.n())),
        1 => gauge_faithful(a, theta, scale(z), &tol()),
        _ => random_compatible_gauge(rng, a, theta),
    }
}

fn oracle_equivalence(bogoliubov_worst: &mut f64) -> Result<Outcome> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut worst: f64 = 0.0;
    for k in 0..200 {
        let (a, theta) = instance(&mut rng, 6);
        let z = rng.random_range(0.1..=3.0);
        let p = gauge_for(k, &mut rng, &a, &theta, z)?;
        let zm = interaction_from_cluster(&a, &theta, &p, &tol())?;
        let closed = covariance_closed_form(&a, &theta, &p, scale(z), &tol())?;
        let oracle = covariance_oracle(&a, &theta, &zm, scale(z), &tol())?;
        worst = worst.max(closed.c.max_diff(&oracle.c));
        let direct = bogoliubov_from_interaction(&zm, scale(z), &tol())?;
        let exp = bogoliubov_oracle(&zm, scale(z), &tol())?;
        *bogoliubov_worst = bogoliubov_worst.max(direct.residual()).max(exp.residual());
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-8 && elapsed < Duration::from_secs(30),
        format!("max |C_closed - C_oracle| = {worst:.3e} over 200 instances (tol 1e-8), {:.2} s (limit 30 s)", elapsed.as_secs_f64()),
    )
}

fn necessity() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut failures = 0;
    let mut smallest_ratio = f64::INFINITY;
    let mut count = 0;
    while count < 20 {
        let n = rng.random_range(1..=6);
        let a = random_adjacency::<f64, _>(&mut rng, n, 2.0, 0.7);
        let theta = random_phases(&mut rng, n);
        let wrong = random_symmetric_unitary::<f64, _>(&mut rng, n);
        if wrong.max_diff(&unitary_from_adjacency(&a, &theta, &tol())?) < 0.1 {
            continue;
        }
        count += 1;
        let zm = InteractionMatrix::from_factors(ComplexMatrix64::identity(n), wrong, &tol())?;
        let c3 = covariance_oracle(&a, &theta, &zm, scale(3.0), &tol())?.max_abs;
        let c4 = covariance_oracle(&a, &theta, &zm, scale(4.0), &tol())?.max_abs;
        smallest_ratio = smallest_ratio.min(c4 / c3);
        if c4 < c3 {
            failures += 1;
        }
    }
    outcome(failures == 0, format!("{failures}/20 mismatched unitaries decreased; min ||C(4)||/||C(3)|| = {smallest_ratio:.3e}"))
}

fn round_trip() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let mut worst: f64 = 0.0;
    let mut searched = 0;
    for k in 0..200 {
        let (a, theta) = instance(&mut rng, 8);
        if k % 4 != 3 {
            let u = unitary_from_adjacency(&a, &theta, &tol())?;
            let back = adjacency_from_unitary(&u, &theta, &tol())?;
            worst = worst.max(back.max_abs_diff(&a));
            continue;
        }
        // Rotate U so that Θ = 0 sits exactly on the singular set: one
        // eigenvalue of e^{−2iφ}·U₀ is moved to −i.
        let n = a.n();
        let u0 = unitary_from_adjacency(&a, &PhaseVector64::zeros(n), &tol())?;
        let mu = symmetric_unitary_spectrum(&u0, &tol())?.angles[0];
        let phi = (mu + std::f64::consts::FRAC_PI_2) / 2.0;
        let u = u0.scale(Complex::from_polar(1.0, -2.0 * phi));
        let search = find_regular_phases(&u, DEFAULT_PHASE_SEED, &tol())?;
        if search.stage == SearchStage::Zero || search.zero_sigma_min > 1e-8 {
            return outcome(false, format!("instance {k}: Θ = 0 unexpectedly regular (σ_min = {:.3e})", search.zero_sigma_min));
        }
        searched += 1;
        let recovered = adjacency_from_unitary(&u, &search.phases, &tol())?;
        let forward = unitary_from_adjacency(&recovered, &search.phases, &tol())?;
        let again = adjacency_from_unitary(&forward, &search.phases, &tol())?;
        worst = worst.max(forward.max_diff(&u)).max(again.max_abs_diff(&recovered));
    }
    outcome(worst <= 1e-8, format!("max round-trip error = {worst:.3e} over 200 instances, {searched} via phase search (tol 1e-8)"))
}

fn bogoliubov_conditions(worst: f64) -> Result<Outcome> {
    outcome(worst <= 1e-9, format!("max relative commutation-relation residual = {worst:.3e} over all produced pairs (tol 1e-9)"))
}

fn bloch_messiah_checks(bogoliubov_worst: &mut f64) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let (mut recon, mut uivv, mut real_form): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for k in 0..30 {
        let (a, theta) = instance(&mut rng, 8);
        let z = rng.random_range(0.25..=2.0);
        let p = gauge_for(k, &mut rng, &a, &theta, z)?;
        let zm = interaction_from_cluster(&a, &theta, &p, &tol())?;
        let f = bloch_messiah(&zm, scale(z), &tol())?;
        let pair = f.reconstruct();
        let direct = bogoliubov_from_interaction(&zm, scale(z), &tol())?;
        recon = recon.max(pair.max_diff(&direct));
        uivv = uivv.max(f.interferometer_residual(zm.u()));
        *bogoliubov_worst = bogoliubov_worst.max(pair.residual());
        for _ in 0..20 {
            let o = random_orthogonal_seed(&mut rng, a.n());
            let v = canonical_cluster_interferometer(&a, &theta, &o, &tol())?;
            let r = real_form_conditions(&v, &a, &theta, &tol())?;
            real_form = real_form.max(r.imaginary).max(r.gram);
        }
    }
    outcome(
        recon <= 1e-8 && uivv <= 1e-9 && real_form <= 1e-9,
        format!("reconstruction {recon:.3e} (tol 1e-8), U - iVV^T {uivv:.3e} (tol 1e-9), real-form conditions {real_form:.3e} (tol 1e-9)"),
    )
}

fn gauge_biconditional() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let mut disagreements = 0;
    let (mut compatible, mut incompatible) = (0, 0);
    for k in 0..200 {
        let (a, theta) = loop {
            let inst = instance(&mut rng, 8);
            if inst.0.n() > 1 || k % 2 == 0 {
                break inst;
            }
        };
        let p = if k % 2 == 0 { random_compatible_gauge(&mut rng, &a, &theta)? } else { random_hermitian_pd(&mut rng, a.n()) };
        let check = validate_gauge(&a, &theta, &p, &tol())?;
        let direct = check.pu_symmetry_residual <= tol().rtol;
        if check.compatible != direct || check.compatible != (k % 2 == 0) {
            disagreements += 1;
        }
        if check.compatible {
            compatible += 1;
        } else {
            incompatible += 1;
        }
    }
    outcome(disagreements == 0, format!("{disagreements} disagreements; {compatible} compatible / {incompatible} incompatible classified"))
}

fn sweep() -> Result<Outcome> {
    let a = parse_graph::<f64>("2\n0 1 1\n")?;
    let report = convergence_sweep(&a, &PhaseVector64::zeros(2), &Gauge::Identity, &[1.0, 2.0, 3.0], &tol())?;
    let expected = [0.270671, 0.036631, 0.004958];
    let got: Vec<f64> = report.rows.iter().map(|r| r.max_abs_c).collect();
    let exact = got.iter().zip([1.0f64, 2.0, 3.0]).map(|(g, z)| (g - 2.0 * (-2.0 * z).exp()).abs()).fold(0.0, f64::max);
    let ok = got.len() == 3 && got.iter().zip(expected).all(|(g, e)| format!("{g:.6}") == format!("{e:.6}")) && exact < 1e-12;
    outcome(
        ok && report.is_strictly_decreasing(),
        format!("max_abs_C = {:.6}, {:.6}, {:.6} (expected 0.270671, 0.036631, 0.004958)", got[0], got[1], got[2]),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut bogoliubov_worst: f64 = 0.0;
    let mut results: Vec<(&str, Result<Outcome>)> = vec![
        ("1 faithful-gauge identity", faithful_identity()),
        ("2 self-inverse EPR", self_inverse()),
        ("3 unit gauge", unit_gauge()),
        ("4 oracle equivalence", oracle_equivalence(&mut bogoliubov_worst)),
        ("5 unitary necessity", necessity()),
        ("6 round trip", round_trip()),
    ];
    let bm = bloch_messiah_checks(&mut bogoliubov_worst);
    results.push(("7 Bogoliubov conditions", bogoliubov_conditions(bogoliubov_worst)));
    results.push(("8 Bloch-Messiah", bm));
    results.push(("9 gauge biconditional", gauge_biconditional()));
    results.push(("10 convergence sweep", sweep()));

    let mut all = true;
    for (name, result) in &results {
        match result {
            Ok(o) => {
                all &= o.passed;
                println!("[{}] {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
            }
            Err(e) => {
                all = false;
                println!("[FAIL] {name}: error: {e}");
            }
        }
    }
    let total = start.elapsed();
    let in_time = total < Duration::from_secs(120);
    all &= in_time;
    println!(
        "[{}] suite runtime: {:.2} s (limit 120 s)",
        if in_time { "PASS" } else { "FAIL" },
        total.as_secs_f64()
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
