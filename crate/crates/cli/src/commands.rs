use std::f64::consts::PI;
use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::json;

use covest::integrals::{
    delta_pattern, phase_error_kernel_complex, su2_error_kernel, su2_single_irrep_integral,
};
use covest::phase::{bdm_input, min_covariant_error, optimal_input};
use covest::sim::{self, Protocol, SimConfig, SimDesign};
use covest::su2_estimation::{design_optimal, self_entanglement_feasible, Parity, ReferenceMode};

use crate::output::{csv_num, Format, Manifest, Report};
use crate::{Failure, Method, Mode, ProtocolArg};

/// Simulations pass when the empirical mean is within this many standard errors.
pub const Z_THRESHOLD: f64 = 4.0;

fn name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_owned()
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn reference_mode(mode: Mode) -> ReferenceMode {
    match mode {
        Mode::External => ReferenceMode::External,
        Mode::SelfEntangled => ReferenceMode::SelfEntangled,
    }
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("result serializes")
}

#[derive(Serialize)]
struct PhaseOptResult {
    n: usize,
    method: String,
    amplitudes: Vec<f64>,
    error: f64,
    /// `π²/(4n²)`; absent for `n = 0`.
    asymptote: Option<f64>,
    ratio: Option<f64>,
}

pub fn phase_opt(n: usize, method: Method, format: Format) -> Result<Report, Failure> {
    let (amplitudes, error) = match method {
        Method::Exact => {
            let d = optimal_input(n);
            (d.input.magnitudes(), d.error)
        }
        Method::Bdm => {
            let x = bdm_input(n)?;
            let e = min_covariant_error(&x);
            (x.magnitudes(), e)
        }
    };
    let asymptote = (n > 0).then(|| PI * PI / (4.0 * (n * n) as f64));
    let result = PhaseOptResult {
        n,
        method: name(method),
        ratio: asymptote.map(|a| error / a),
        amplitudes,
        error,
        asymptote,
    };
    let mut csv = String::from("k,amplitude\n");
    for (k, a) in result.amplitudes.iter().enumerate() {
        writeln!(csv, "{k},{}", csv_num(*a)).unwrap();
    }
    Ok(Report {
        stem: format!("phase-opt-n{n}-{}", result.method),
        manifest: Manifest::new(
            "phase-opt",
            json!({ "n": n, "method": result.method }),
            None,
        ),
        format,
        result: to_value(&result),
        csv,
    })
}

#[derive(Serialize)]
struct BlockRow {
    block: usize,
    dim: usize,
    /// Decimal string; multiplicities outgrow every machine integer.
    multiplicity: String,
    reference_dim: usize,
    feasible: bool,
    amplitude: f64,
}

#[derive(Serialize)]
struct Feasibility {
    usable: Vec<usize>,
    achievable_error: Option<f64>,
}

#[derive(Serialize)]
struct Su2DesignResult {
    n: usize,
    parity: &'static str,
    mode: String,
    blocks: Vec<BlockRow>,
    seed: &'static str,
    error_formula: &'static str,
    error: f64,
    asymptote: f64,
    ratio: f64,
    feasibility: Feasibility,
}

pub fn su2_design(n: usize, mode: Mode, format: Format) -> Result<Report, Failure> {
    let design = design_optimal(n, reference_mode(mode))?;
    let report = self_entanglement_feasible(n)?;
    let parity = Parity::of(n);
    let blocks: Vec<BlockRow> = report
        .blocks
        .iter()
        .zip(design.blocks.amplitudes())
        .enumerate()
        .map(|(i, (b, &a))| BlockRow {
            block: i,
            dim: b.dim,
            multiplicity: b.multiplicity.to_string(),
            reference_dim: b.reference_dim,
            feasible: b.feasible,
            amplitude: a,
        })
        .collect();
    let asymptote = PI * PI / (n * n) as f64;
    let result = Su2DesignResult {
        n,
        parity: match parity {
            Parity::Odd => "odd",
            Parity::Even => "even",
        },
        mode: name(mode),
        blocks,
        seed: "rank-one, t_kl = 1 for all block pairs",
        error_formula: match parity {
            Parity::Odd => "(1/2)(1 - sum_k a_k a_(k+1))",
            Parity::Even => "(1/2)(1 - sum_k a_k a_(k+1)) + a_0/4",
        },
        error: design.error,
        asymptote,
        ratio: design.error / asymptote,
        feasibility: Feasibility {
            usable: report.usable,
            achievable_error: report.achievable_error,
        },
    };
    let mut csv = String::from("block,dim,multiplicity,feasible,amplitude\n");
    for b in &result.blocks {
        writeln!(
            csv,
            "{},{},{},{},{}",
            b.block,
            b.dim,
            b.multiplicity,
            b.feasible,
            csv_num(b.amplitude)
        )
        .unwrap();
    }
    Ok(Report {
        stem: format!("su2-design-n{n}-{}", result.mode),
        manifest: Manifest::new("su2-design", json!({ "n": n, "mode": result.mode }), None),
        format,
        result: to_value(&result),
        csv,
    })
}

#[derive(Serialize)]
struct IdentityRow {
    identity: &'static str,
    entries: usize,
    worst_deviation: f64,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyResult {
    kmax: usize,
    tol: f64,
    passed: bool,
    identities: Vec<IdentityRow>,
}

pub fn verify_integrals(kmax: usize, tol: f64, format: Format) -> Result<(Report, bool), Failure> {
    if kmax == 0 {
        return Err(usage("kmax must be >= 1"));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(usage("tol must be a positive number"));
    }
    let mut rows = Vec::new();
    let mut push = |identity, deviations: Vec<f64>| {
        let worst = deviations.iter().copied().fold(0.0, f64::max);
        rows.push(IdentityRow {
            identity,
            entries: deviations.len(),
            worst_deviation: worst,
            pass: worst <= tol,
        });
    };
    push(
        "single-irrep-trivial",
        vec![(su2_single_irrep_integral(1)? - 0.75).abs()],
    );
    push(
        "single-irrep-nontrivial",
        (2..=2 * kmax)
            .map(|j| su2_single_irrep_integral(j).map(|v| (v - 0.5).abs()))
            .collect::<Result<_, _>>()?,
    );
    let pairs: Vec<(usize, usize)> = (1..=kmax)
        .flat_map(|k| (1..=kmax).map(move |l| (k, l)))
        .collect();
    let su2: Vec<f64> = pairs
        .iter()
        .map(|&(k, l)| su2_error_kernel(k, l))
        .collect::<Result<_, _>>()?;
    let phase: Vec<_> = pairs
        .iter()
        .map(|&(k, l)| phase_error_kernel_complex(k, l))
        .collect();
    push(
        "su2-kernel-delta",
        pairs
            .iter()
            .zip(&su2)
            .map(|(&(k, l), s)| (s - delta_pattern(k, l)).abs())
            .collect(),
    );
    push(
        "phase-kernel-delta",
        pairs
            .iter()
            .zip(&phase)
            .map(|(&(k, l), p)| (p - delta_pattern(k, l)).norm())
            .collect(),
    );
    push(
        "kernel-equivalence",
        su2.iter()
            .zip(&phase)
            .map(|(s, p)| (p - s).norm())
            .collect(),
    );
    let passed = rows.iter().all(|r| r.pass);
    let result = VerifyResult {
        kmax,
        tol,
        passed,
        identities: rows,
    };
    let mut csv = String::from("identity,entries,worst_deviation,tol,pass\n");
    for r in &result.identities {
        writeln!(
            csv,
            "{},{},{},{},{}",
            r.identity,
            r.entries,
            csv_num(r.worst_deviation),
            csv_num(tol),
            r.pass
        )
        .unwrap();
    }
    let report = Report {
        stem: format!("verify-integrals-k{kmax}"),
        manifest: Manifest::new(
            "verify-integrals",
            json!({ "kmax": kmax, "tol": tol }),
            None,
        ),
        format,
        result: to_value(&result),
        csv,
    };
    Ok((report, passed))
}

pub struct SimulateArgs {
    pub protocol: ProtocolArg,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub mode: Mode,
    pub grid_size: usize,
    pub workers: usize,
}

#[derive(Serialize)]
struct SimulateResult {
    protocol: String,
    n: usize,
    mode: Option<String>,
    trials: usize,
    empirical_mean_error: f64,
    standard_error: f64,
    closed_form: f64,
    z_score: f64,
    z_threshold: f64,
    passed: bool,
}

pub fn simulate(args: SimulateArgs, format: Format) -> Result<(Report, bool), Failure> {
    let SimulateArgs {
        protocol,
        n,
        trials,
        seed,
        mode,
        grid_size,
        workers,
    } = args;
    let (core_protocol, design, mode_name) = match protocol {
        ProtocolArg::Phase => (Protocol::Phase, SimDesign::Phase(optimal_input(n)), None),
        ProtocolArg::Su2 => {
            let d = design_optimal(n, reference_mode(mode))?;
            (Protocol::Su2, SimDesign::Su2(d), Some(name(mode)))
        }
    };
    let config = SimConfig::new(core_protocol, n, trials, seed)?
        .with_grid_size(grid_size)?
        .with_workers(workers)?;
    let res = sim::simulate(&config, &design)?;
    let passed = res.z_score.abs() < Z_THRESHOLD;
    let result = SimulateResult {
        protocol: name(protocol),
        n,
        mode: mode_name,
        trials: res.trials,
        empirical_mean_error: res.empirical_mean_error,
        standard_error: res.standard_error,
        closed_form: res.closed_form,
        z_score: res.z_score,
        z_threshold: Z_THRESHOLD,
        passed,
    };
    let csv = format!(
        "protocol,n,trials,seed,empirical_mean_error,standard_error,closed_form,z_score,passed\n\
         {},{n},{},{seed},{},{},{},{},{passed}\n",
        result.protocol,
        result.trials,
        csv_num(result.empirical_mean_error),
        csv_num(result.standard_error),
        csv_num(result.closed_form),
        csv_num(result.z_score),
    );
    let params = json!({
        "protocol": result.protocol,
        "n": n,
        "trials": trials,
        "seed": seed,
        "mode": result.mode,
        "grid_size": grid_size,
        "workers": workers,
    });
    let report = Report {
        stem: format!("simulate-{}-n{n}-s{seed}", result.protocol),
        manifest: Manifest::new("simulate", params, Some(seed)),
        format,
        result: to_value(&result),
        csv,
    };
    Ok((report, passed))
}

pub const SCALING_HEADER: &str = "n,phase_exact,phase_bdm,phase_asymptote,su2_error,su2_asymptote";

#[derive(Serialize)]
struct ScalingRow {
    n: usize,
    phase_exact: f64,
    phase_bdm: f64,
    phase_asymptote: f64,
    su2_error: f64,
    su2_asymptote: f64,
}

pub fn scaling(max_n: usize, step: usize, format: Format) -> Result<Report, Failure> {
    if max_n < 2 {
        return Err(usage("max_n must be >= 2"));
    }
    if step == 0 || step > max_n {
        return Err(usage("step must be between 1 and max_n"));
    }
    let rows: Vec<ScalingRow> = (step..=max_n)
        .step_by(step)
        .map(|n| {
            let nf = n as f64;
            Ok(ScalingRow {
                n,
                phase_exact: optimal_input(n).error,
                phase_bdm: min_covariant_error(&bdm_input(n)?),
                phase_asymptote: PI * PI / (4.0 * nf * nf),
                su2_error: design_optimal(n, ReferenceMode::External)?.error,
                su2_asymptote: PI * PI / (nf * nf),
            })
        })
        .collect::<Result<_, Failure>>()?;
    let mut csv = format!("{SCALING_HEADER}\n");
    for r in &rows {
        writeln!(
            csv,
            "{},{},{},{},{},{}",
            r.n,
            csv_num(r.phase_exact),
            csv_num(r.phase_bdm),
            csv_num(r.phase_asymptote),
            csv_num(r.su2_error),
            csv_num(r.su2_asymptote)
        )
        .unwrap();
    }
    Ok(Report {
        stem: format!("scaling-{max_n}-{step}"),
        manifest: Manifest::new("scaling", json!({ "max_n": max_n, "step": step }), None),
        format,
        result: json!({ "max_n": max_n, "step": step, "rows": rows }),
        csv,
    })
}
