//! One function per subcommand; each returns the rendered output and an exit code.

use cvcluster::analysis::{analyze_interaction, SearchStage};
use cvcluster::blochmessiah::bloch_messiah;
use cvcluster::graph::serialize_graph;
use cvcluster::oracle::convergence_sweep;
use cvcluster::synthesis::{
    bogoliubov_from_interaction, covariance_closed_form, interaction_from_cluster, squeezer_spectrum, validate_gauge,
};
use cvcluster::{AdjacencyMatrix64, CovarianceReport, Gauge, InteractionMatrix64, PhaseVector64, SqueezeScale, Tolerances64};
use serde_json::{json, Map, Value};

use crate::checks::{self, Battery};
use crate::error::{CliError, EXIT_NUMERICAL, EXIT_VERIFY_FAILED};
use crate::input::InteractionInput;
use crate::json::{self as js, matrix, real_vector};
use crate::Format;

pub struct Outcome {
    pub body: String,
    pub exit: u8,
    /// Lines for standard error.
    pub notes: Vec<String>,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome { body, exit: 0, notes: Vec::new() }
    }

    /// Failed checks become an exit code and one stderr line each.
    fn with_battery(body: String, battery: &Battery, failure_code: u8) -> Self {
        let notes: Vec<String> = battery
            .failures()
            .map(|c| format!("check {} failed: residual {:e} exceeds {:e}", c.name, c.residual, c.tolerance))
            .collect();
        let exit = if notes.is_empty() { 0 } else { failure_code };
        Outcome { body, exit, notes }
    }
}

fn object(entries: Vec<(&str, Value)>) -> Value {
    Value::Object(entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}

fn covariance_json(cov: &CovarianceReport<f64>) -> Value {
    object(vec![
        ("C", matrix(&cov.c)),
        ("max_abs", json!(cov.max_abs)),
        ("frobenius", json!(cov.frobenius)),
        ("imag_residual", json!(cov.imag_residual)),
    ])
}

fn phases_text(theta: &PhaseVector64) -> String {
    theta.angles().iter().map(|t| format!("{t:?}")).collect::<Vec<_>>().join(" ")
}

/// Zeroes weights that are rounding noise relative to the largest weight.
fn snap(a: &AdjacencyMatrix64, tol: &Tolerances64) -> Result<AdjacencyMatrix64, CliError> {
    let cutoff = tol.rtol * a.to_complex().max_abs().max(1.0);
    let weights = a.weights().iter().map(|&w| if w.abs() <= cutoff { 0.0 } else { w }).collect();
    Ok(AdjacencyMatrix64::new(a.n(), weights, 0.0)?)
}

pub struct ClusterInput {
    pub a: AdjacencyMatrix64,
    pub theta: PhaseVector64,
    pub gauge: Gauge<f64>,
}

pub fn synthesize(cluster: &ClusterInput, z: f64, seed: u64, tol: &Tolerances64, format: Format) -> Result<Outcome, CliError> {
    let ClusterInput { a, theta, gauge } = cluster;
    let scale = SqueezeScale::new(z)?;
    let p = gauge.resolve(a, theta, scale, tol)?;
    let zm = interaction_from_cluster(a, theta, &p, tol)?;
    let pair = bogoliubov_from_interaction(&zm, scale, tol)?;
    let cov = covariance_closed_form(a, theta, &p, scale, tol)?;
    let squeezers = squeezer_spectrum(&zm, scale, tol)?;

    let mut battery = Battery::default();
    checks::polar_checks(&mut battery, &zm, tol);
    checks::synthesis_checks(&mut battery, a, theta, &zm, &pair, &cov, scale, tol)?;
    checks::inverse_checks(&mut battery, a, theta, &zm, seed, tol)?;

    let body = match format {
        Format::Json => js::to_string(&object(vec![
            ("command", json!("synthesize")),
            ("n", json!(a.n())),
            ("z", json!(z)),
            ("gauge", json!(gauge.name())),
            ("phases", real_vector(theta.angles())),
            ("adjacency", matrix(&a.to_complex())),
            ("graph", json!(serialize_graph(a))),
            ("Z", matrix(zm.matrix())),
            ("P", matrix(zm.p())),
            ("U", matrix(zm.u())),
            ("X", matrix(&pair.x)),
            ("Y", matrix(&pair.y)),
            ("C", matrix(&cov.c)),
            ("E", matrix(&cov.e)),
            ("covariance", object(vec![
                ("max_abs", json!(cov.max_abs)),
                ("frobenius", json!(cov.frobenius)),
                ("imag_residual", json!(cov.imag_residual)),
            ])),
            ("squeezers", Value::Array(
                squeezers
                    .iter()
                    .map(|m| json!({"lambda": m.lambda, "mu": m.mu, "nu": m.nu, "decibels": m.decibels}))
                    .collect(),
            )),
            ("checks", battery.to_json()),
            ("skipped", battery.skipped_json()),
            ("all_passed", json!(battery.all_passed())),
        ])),
        Format::Text => {
            let mut out = format!(
                "modes {}\nz {z}\ngauge {}\nphases {}\nmax_abs_C {:?}\nfrobenius_C {:?}\n",
                a.n(),
                gauge.name(),
                phases_text(theta),
                cov.max_abs,
                cov.frobenius
            );
            for (k, m) in squeezers.iter().enumerate() {
                out.push_str(&format!("squeezer {k} lambda {:?} dB {:?}\n", m.lambda, m.decibels));
            }
            out + &battery.to_text()
        }
        Format::Csv => unreachable!("rejected before dispatch"),
    };
    Ok(Outcome::with_battery(body, &battery, EXIT_NUMERICAL))
}

fn stage_json(stage: SearchStage) -> Value {
    match stage {
        SearchStage::Zero => json!({"kind": "zero"}),
        SearchStage::Uniform { k } => json!({"kind": "uniform", "k": k}),
        SearchStage::Random { draw } => json!({"kind": "random", "draw": draw}),
    }
}

fn stage_text(stage: SearchStage) -> String {
    match stage {
        SearchStage::Zero => "zero".into(),
        SearchStage::Uniform { k } => format!("uniform k={k}"),
        SearchStage::Random { draw } => format!("random draw={draw}"),
    }
}

pub fn analyze(
    zm: &InteractionMatrix64,
    phases: Option<&PhaseVector64>,
    z: f64,
    seed: u64,
    tol: &Tolerances64,
    format: Format,
) -> Result<Outcome, CliError> {
    let scale = SqueezeScale::new(z)?;
    let report = analyze_interaction(zm, phases, scale, seed, tol)?;
    let a = snap(&report.adjacency, tol)?;
    let roundtrip = cvcluster::synthesis::unitary_from_adjacency(&a, &report.phases, tol)?.max_diff(zm.u());
    let gauge_residual = validate_gauge(&a, &report.phases, zm.p(), tol)?.residual;
    let graph = serialize_graph(&a);

    let body = match format {
        Format::Json => {
            let search = match &report.search {
                Some(s) => object(vec![
                    ("stage", stage_json(s.stage)),
                    ("attempts", json!(s.attempts)),
                    ("zero_sigma_min", json!(s.zero_sigma_min)),
                    ("zero_rejected", json!(s.zero_sigma_min < tol.regular_accept)),
                    ("accepted", json!(s.accepted)),
                ]),
                None => Value::Null,
            };
            js::to_string(&object(vec![
                ("command", json!("analyze")),
                ("n", json!(zm.n())),
                ("z", json!(z)),
                ("seed", json!(seed)),
                ("phases", real_vector(report.phases.angles())),
                ("sigma_min", json!(report.sigma_min)),
                ("given_sigma_min", report.given_sigma_min.map_or(Value::Null, |s| json!(s))),
                ("search", search),
                ("adjacency", matrix(&a.to_complex())),
                ("graph", json!(graph)),
                ("roundtrip_residual", json!(roundtrip)),
                ("gauge_residual", json!(gauge_residual)),
                ("covariance", covariance_json(&report.covariance)),
            ]))
        }
        Format::Text => {
            let mut out = format!("# phases {}\n# sigma_min {:?}\n", phases_text(&report.phases), report.sigma_min);
            if let Some(s) = &report.search {
                out.push_str(&format!(
                    "# search {} after {} attempts, zero sigma_min {:?}, accepted {}\n",
                    stage_text(s.stage),
                    s.attempts,
                    s.zero_sigma_min,
                    s.accepted
                ));
            }
            out.push_str(&format!("# roundtrip_residual {:?}\n# gauge_residual {:?}\n", roundtrip, gauge_residual));
            out + &graph
        }
        Format::Csv => unreachable!("rejected before dispatch"),
    };
    Ok(Outcome::ok(body))
}

pub fn decompose(
    zm: &InteractionMatrix64,
    cluster: Option<(&AdjacencyMatrix64, &PhaseVector64)>,
    z: f64,
    tol: &Tolerances64,
    format: Format,
) -> Result<Outcome, CliError> {
    let f = bloch_messiah(zm, SqueezeScale::new(z)?, tol)?;
    let mut battery = Battery::default();
    checks::bloch_messiah_checks(&mut battery, &f, zm, cluster, tol)?;
    let body = match format {
        Format::Json => js::to_string(&object(vec![
            ("command", json!("decompose")),
            ("n", json!(zm.n())),
            ("z", json!(z)),
            ("V", matrix(&f.v)),
            ("W", matrix(&f.w)),
            ("D", real_vector(&f.d)),
            ("squeezing", real_vector(&f.squeezing())),
            ("decibels", real_vector(&f.decibels())),
            ("dx", real_vector(&f.dx())),
            ("dy", real_vector(&f.dy())),
            ("checks", battery.to_json()),
            ("skipped", battery.skipped_json()),
            ("all_passed", json!(battery.all_passed())),
        ])),
        Format::Text => {
            let mut out = format!("modes {}\nz {z}\n", zm.n());
            for (k, (d, db)) in f.d.iter().zip(f.decibels()).enumerate() {
                out.push_str(&format!("mode {k} D {d:?} dB {db:?}\n"));
            }
            out + &battery.to_text()
        }
        Format::Csv => unreachable!("rejected before dispatch"),
    };
    Ok(Outcome::with_battery(body, &battery, EXIT_NUMERICAL))
}

/// Where `verify` got its cluster from.
pub enum VerifySource<'a> {
    /// `--graph` with phases and gauge, optionally with an interaction file to compare.
    Cluster { cluster: ClusterInput, interaction: Option<&'a InteractionInput> },
    /// `--interaction` only; a bundle supplies its cluster, a bare `Z` is analyzed.
    Interaction { input: &'a InteractionInput, phases: Option<PhaseVector64> },
}

fn compare_bundle(battery: &mut Battery, input: &InteractionInput, name: &str, expected: &cvcluster::ComplexMatrix64, tol: &Tolerances64) -> Result<(), CliError> {
    if let Some(m) = input.matrix(name)? {
        let residual = if m.rows() == expected.rows() && m.cols() == expected.cols() {
            m.max_diff(expected) / expected.max_abs().max(1.0)
        } else {
            f64::INFINITY
        };
        battery.push(&format!("bundle_{name}"), residual, tol.rtol);
    }
    Ok(())
}

pub fn verify(source: VerifySource<'_>, z: Option<f64>, seed: u64, tol: &Tolerances64, format: Format) -> Result<Outcome, CliError> {
    let mut battery = Battery::default();
    let (a, theta, zm, z, bundle, origin) = match source {
        VerifySource::Cluster { cluster, interaction } => {
            let z = z.unwrap_or(1.0);
            let scale = SqueezeScale::new(z)?;
            let p = cluster.gauge.resolve(&cluster.a, &cluster.theta, scale, tol)?;
            let gauge = validate_gauge(&cluster.a, &cluster.theta, &p, tol)?;
            if !gauge.compatible {
                battery.push("gauge_compatible", gauge.residual, tol.rtol);
                let body = verify_body(&battery, "graph", cluster.a.n(), z, &cluster.theta, format);
                return Ok(Outcome::with_battery(body, &battery, EXIT_VERIFY_FAILED));
            }
            let zm = interaction_from_cluster(&cluster.a, &cluster.theta, &p, tol)?;
            if let Some(input) = interaction {
                let given = &input.z_matrix;
                let residual = if given.rows() == zm.n() && given.cols() == zm.n() {
                    given.max_diff(zm.matrix()) / zm.matrix().max_abs().max(1.0)
                } else {
                    f64::INFINITY
                };
                battery.push("interaction_matches_cluster", residual, tol.rtol);
            }
            (cluster.a, cluster.theta, zm, z, interaction, "graph")
        }
        VerifySource::Interaction { input, phases } => {
            let zm = input.interaction(tol)?;
            let z = z.or(input.z()).unwrap_or(1.0);
            match (input.adjacency(tol)?, phases.or(input.phases()?)) {
                (Some(a), Some(theta)) => {
                    checks::cluster_match(&mut battery, &a, &theta, &zm, tol)?;
                    (a, theta, zm, z, Some(input), "bundle")
                }
                (_, phases) => {
                    let report = analyze_interaction(&zm, phases.as_ref(), SqueezeScale::new(z)?, seed, tol)?;
                    let a = report.adjacency;
                    checks::cluster_match(&mut battery, &a, &report.phases, &zm, tol)?;
                    (a, report.phases, zm, z, Some(input), "interaction")
                }
            }
        }
    };

    let scale = SqueezeScale::new(z)?;
    checks::polar_checks(&mut battery, &zm, tol);
    let gauge = validate_gauge(&a, &theta, zm.p(), tol)?;
    if !gauge.compatible {
        battery.push("gauge_compatible", gauge.residual, tol.rtol);
        let body = verify_body(&battery, origin, zm.n(), z, &theta, format);
        return Ok(Outcome::with_battery(body, &battery, EXIT_VERIFY_FAILED));
    }
    let pair = bogoliubov_from_interaction(&zm, scale, tol)?;
    let cov = covariance_closed_form(&a, &theta, zm.p(), scale, tol)?;
    checks::synthesis_checks(&mut battery, &a, &theta, &zm, &pair, &cov, scale, tol)?;
    checks::inverse_checks(&mut battery, &a, &theta, &zm, seed, tol)?;
    let f = bloch_messiah(&zm, scale, tol)?;
    checks::bloch_messiah_checks(&mut battery, &f, &zm, Some((&a, &theta)), tol)?;

    if let Some(input) = bundle.filter(|i| i.value.get("rows").is_none()) {
        if input.z().is_none_or(|bz| bz == z) {
            compare_bundle(&mut battery, input, "P", zm.p(), tol)?;
            compare_bundle(&mut battery, input, "U", zm.u(), tol)?;
            compare_bundle(&mut battery, input, "X", &pair.x, tol)?;
            compare_bundle(&mut battery, input, "Y", &pair.y, tol)?;
            compare_bundle(&mut battery, input, "C", &cov.c, tol)?;
        } else {
            battery.skip("bundle_matrices", "bundle was written for a different z");
        }
    }

    let body = verify_body(&battery, origin, zm.n(), z, &theta, format);
    Ok(Outcome::with_battery(body, &battery, EXIT_VERIFY_FAILED))
}

fn verify_body(battery: &Battery, origin: &str, n: usize, z: f64, theta: &PhaseVector64, format: Format) -> String {
    let failed = battery.failures().count();
    match format {
        Format::Json => js::to_string(&object(vec![
            ("command", json!("verify")),
            ("source", json!(origin)),
            ("n", json!(n)),
            ("z", json!(z)),
            ("phases", real_vector(theta.angles())),
            ("checks", battery.to_json()),
            ("skipped", battery.skipped_json()),
            ("failed", json!(failed)),
            ("all_passed", json!(failed == 0)),
        ])),
        Format::Text => {
            let verdict = if failed == 0 { "all checks passed".to_string() } else { format!("{failed} checks failed") };
            format!("{}{verdict}\n", battery.to_text())
        }
        Format::Csv => unreachable!("rejected before dispatch"),
    }
}

pub fn sweep(cluster: &ClusterInput, z_values: &[f64], tol: &Tolerances64, format: Format) -> Result<Outcome, CliError> {
    let report = convergence_sweep(&cluster.a, &cluster.theta, &cluster.gauge, z_values, tol)?;
    let body = match format {
        Format::Csv => {
            let mut out = String::from("z,max_abs_C,frobenius_C\n");
            for r in &report.rows {
                out.push_str(&format!("{:?},{:?},{:?}\n", r.z, r.max_abs_c, r.frobenius_c));
            }
            out
        }
        Format::Json => js::to_string(&object(vec![
            ("command", json!("sweep")),
            ("gauge", json!(cluster.gauge.name())),
            ("rows", Value::Array(
                report
                    .rows
                    .iter()
                    .map(|r| json!({"z": r.z, "max_abs_C": r.max_abs_c, "frobenius_C": r.frobenius_c}))
                    .collect(),
            )),
            ("oracle_checks", Value::Array(report.oracle_checks.iter().map(|&(z, r)| json!({"z": z, "residual": r})).collect())),
            ("strictly_decreasing", json!(report.is_strictly_decreasing())),
        ])),
        Format::Text => {
            let mut out = format!("{:>12} {:>24} {:>24}\n", "z", "max_abs_C", "frobenius_C");
            for r in &report.rows {
                out.push_str(&format!("{:>12} {:>24.16e} {:>24.16e}\n", r.z, r.max_abs_c, r.frobenius_c));
            }
            out
        }
    };
    Ok(Outcome::ok(body))
}
