//! The seven subcommand drivers. Each writes its CSV (and SVG where it has
//! one) into the output directory, returns its summary payload plus the
//! built-in assertions, and the dispatcher writes `summary.json` and maps
//! the verdict to the exit code.

use anyhow::{anyhow, Context, Result};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use uniq_core::decay::{
    cascade_growth_fit, gamma_moment_bound, moment_cascade, recursion_floor, stretched_envelope,
    CascadeConfig, Envelope,
};
use uniq_core::exponents::{
    consistent_b0, derive_constants, diagonal_threshold, omega_fixed_point, recursion_trace,
    region_a_membership, ExponentPair, Side,
};
use uniq_core::sampling::{
    apply, build_operator_from_families, reconstruct, sweep, OperatorOptions,
};
use uniq_core::sharpness::{average_gap_report, build_sharpness_sequence};
use uniq_core::special::ln_factorial;
use uniq_core::{BasisSpec, NodeFamily, Parity};

use crate::config::{NodesKind, RunConfig};
use crate::output::{
    fmt_float, fmt_limit, heatmap_svg, json_float, json_limit, membership_svg, summary, write_json,
    write_text, Assertion, Csv,
};

pub fn run(cfg: &RunConfig) -> Result<bool> {
    std::fs::create_dir_all(&cfg.out)
        .with_context(|| format!("cannot create output directory {}", cfg.out.display()))?;
    let (derived, assertions) = match cfg.command {
        "region" => region(cfg)?,
        "recursion" => recursion(cfg)?,
        "bounds" => bounds(cfg)?,
        "moments" => moments(cfg)?,
        "sharpness" => sharpness(cfg)?,
        "sweep" => run_sweep(cfg)?,
        "reconstruct" => run_reconstruct(cfg)?,
        other => return Err(anyhow!("unknown subcommand {other}")),
    };
    let doc = summary(cfg.command, config_echo(cfg), derived, &assertions);
    write_json(&cfg.out, "summary.json", &doc)?;
    for a in &assertions {
        println!("{} {}: {}", if a.pass { "PASS" } else { "FAIL" }, a.name, a.detail);
    }
    Ok(assertions.iter().all(|a| a.pass))
}

fn config_echo(cfg: &RunConfig) -> Value {
    json!({
        "alpha": cfg.alpha,
        "beta": cfg.beta,
        "grid": cfg.grid,
        "basis": cfg.basis,
        "nodes": cfg.nodes,
        "k-max": cfg.k_max,
        "omega": cfg.omega,
        "nodes-kind": cfg.nodes_kind.echo(),
        "out": cfg.out.display().to_string(),
        "seed": cfg.seed,
        "parity": match cfg.parity { Parity::Even => "even", Parity::All => "all" },
        "j": cfg.j,
        "blocked": cfg.blocked,
        "steps": cfg.steps,
        "a0": cfg.a0,
        "tol": cfg.tol,
        "sweep-floor": cfg.sweep_floor,
        "config_file": cfg.config_file.as_ref().map(|p| p.display().to_string()),
    })
}

fn pair_of(cfg: &RunConfig) -> Result<ExponentPair> {
    Ok(ExponentPair::new(cfg.alpha, cfg.beta)?)
}

fn basis_of(cfg: &RunConfig) -> BasisSpec {
    match cfg.parity {
        Parity::Even => BasisSpec::even(cfg.basis),
        Parity::All => BasisSpec::all(cfg.basis),
    }
}

/// Cell centers `(i + 1/2)/g` — strictly inside (0,1) for every resolution.
fn centers(g: usize) -> Vec<f64> {
    (0..g).map(|i| (i as f64 + 0.5) / g as f64).collect()
}

fn region(cfg: &RunConfig) -> Result<(Value, Vec<Assertion>)> {
    let g = cfg.grid;
    let xs = centers(g);
    let mut csv = Csv::new(&["alpha", "beta", "in_A", "L1", "L2", "order_bound", "hadamard"]);
    let mut cells = vec![vec![false; g]; g];
    let mut inside = 0usize;
    for (i, &a) in xs.iter().enumerate() {
        for (j, &b) in xs.iter().enumerate() {
            let pair = ExponentPair::new(a, b)?;
            let rep = region_a_membership(pair);
            let c = derive_constants(pair);
            cells[i][j] = rep.in_region;
            inside += rep.in_region as usize;
            csv.row(&[
                fmt_float(a),
                fmt_float(b),
                rep.in_region.to_string(),
                fmt_limit(c.l1),
                fmt_limit(c.l2),
                fmt_limit(rep.order_bound),
                rep.hadamard_contradiction.to_string(),
            ]);
        }
    }
    write_text(&cfg.out, "region.csv", &csv.into_string())?;
    write_text(&cfg.out, "region.svg", &membership_svg(&cells, "admissible exponent region"))?;

    let t = diagonal_threshold();
    let step = 1.0 / g as f64;
    let flips: Vec<f64> = (1..g)
        .filter(|&i| cells[i][i] != cells[i - 1][i - 1])
        .map(|i| (xs[i] + xs[i - 1]) / 2.0)
        .collect();
    let diag_ok = flips.len() == 1 && (flips[0] - t).abs() <= step;
    let monotone = (0..g).all(|i| {
        (1..g).all(|j| cells[i][j] as u8 <= cells[i][j - 1] as u8)
            && (1..g).all(|j| cells[j][i] as u8 <= cells[j - 1][i] as u8)
    });

    let derived = json!({
        "diagonal_threshold": t,
        "diagonal_flip": flips.first().map(|&f| json_float(f)),
        "grid_step": step,
        "cells_in_region": inside,
    });
    let assertions = vec![
        Assertion::new(
            "diagonal-flip-near-threshold",
            diag_ok,
            format!("membership flips at {:?}, threshold {t:.6}, step {step:.6}", flips),
        ),
        Assertion::new(
            "region-downward-closed-on-grid",
            monotone,
            "membership only turns off as either exponent grows",
        ),
    ];
    Ok((derived, assertions))
}

fn recursion(cfg: &RunConfig) -> Result<(Value, Vec<Assertion>)> {
    let pair = pair_of(cfg)?;
    let c = derive_constants(pair);
    if !(c.gamma < 1.0) {
        return Err(anyhow!(
            "recursion does not contract: gamma = {} for alpha+beta = {}",
            c.gamma,
            cfg.alpha + cfg.beta
        ));
    }
    let (la, lb) = omega_fixed_point(pair, cfg.omega)?;
    // Default: enough steps for a 1e-12 contraction, plus two to absorb the
    // seed-dependent prefactor on the b-component.
    let steps = cfg
        .steps
        .unwrap_or_else(|| ((1e-12f64.ln() / c.gamma.ln()).ceil() as usize).max(1) + 2);
    let b0 = consistent_b0(pair, cfg.a0, cfg.omega);
    let trace = recursion_trace(pair, cfg.a0, b0, steps, cfg.omega);

    let mut csv = Csv::new(&["step", "a", "b", "err_a", "err_b"]);
    let mut max_ratio = 0.0f64;
    let mut prev_err = f64::NAN;
    for (n, &(a, b)) in trace.iter().enumerate() {
        let ea = (a - la).abs();
        let eb = (b - lb).abs();
        if n > 0 && prev_err > 1e-12 * la.abs().max(1.0) {
            max_ratio = max_ratio.max(ea / prev_err);
        }
        prev_err = ea;
        csv.row(&[
            n.to_string(),
            fmt_float(a),
            fmt_float(b),
            fmt_float(ea),
            fmt_float(eb),
        ]);
    }
    write_text(&cfg.out, "recursion.csv", &csv.into_string())?;

    let (fa, fb) = *trace.last().expect("nonempty trace");
    let final_err = (fa - la).abs().max((fb - lb).abs());
    let derived = json!({
        "gamma": c.gamma,
        "l1": json_limit(c.l1),
        "l2": json_limit(c.l2),
        "omega": cfg.omega,
        "fixed_a": la,
        "fixed_b": lb,
        "b0": b0,
        "steps": steps,
        "final_error": json_float(final_err),
    });
    let assertions = vec![
        Assertion::new(
            "final-error-under-tol",
            final_err <= cfg.tol,
            format!("max(|a-{la:.6}|, |b-{lb:.6}|) = {final_err:.3e} after {steps} steps"),
        ),
        Assertion::new(
            "error-contracts-by-gamma",
            max_ratio <= c.gamma * (1.0 + 1e-6),
            format!("worst per-step error ratio {max_ratio:.6} vs gamma {:.6}", c.gamma),
        ),
    ];
    Ok((derived, assertions))
}

fn bounds(cfg: &RunConfig) -> Result<(Value, Vec<Assertion>)> {
    let pair = pair_of(cfg)?;
    let c = derive_constants(pair);
    let tau = c.tau.finite().ok_or_else(|| anyhow!("tau is infinite: alpha+beta ≥ 1"))?;
    let floor = recursion_floor(pair)?;
    if cfg.k_max < floor + 2 {
        return Err(anyhow!(
            "--k-max {} is too small: the cascade only descends above k = {floor}",
            cfg.k_max
        ));
    }
    let cascade = CascadeConfig::new(pair);

    let mut csv = Csv::new(&["k", "log_moment_bound", "seed_index", "round_trips"]);
    let mut all_finite = true;
    for k in 0..=cfg.k_max {
        let bound = moment_cascade(&cascade, k)?;
        all_finite &= bound.log_bound.is_finite();
        csv.row(&[
            k.to_string(),
            fmt_float(bound.log_bound),
            bound.seed_index.to_string(),
            bound.steps.len().to_string(),
        ]);
    }
    write_text(&cfg.out, "bounds.csv", &csv.into_string())?;

    let ks: Vec<u32> = (floor + 1..=cfg.k_max).collect();
    let (c1, c2) = cascade_growth_fit(&cascade, &ks)?;
    // The transform-side certificate consumes the fitted growth of the
    // direct-side moments.
    let cert = stretched_envelope(pair, c1.max(0.0), Side::Transform)?;
    let (exponent, margin) = match cert.envelope {
        Envelope::StretchedExp { exponent, margin } => (exponent, margin),
        other => return Err(anyhow!("unexpected envelope shape {other:?}")),
    };
    let probes: Vec<Value> = [2.0, 5.0, 10.0, 20.0, 50.0]
        .iter()
        .map(|&x| json!({"x": x, "log_bound": json_float(cert.log_bound(x))}))
        .collect();

    let derived = json!({
        "tau": tau,
        "recursion_floor": floor,
        "fit_k_log_k": c1,
        "fit_k": c2,
        "certificate": {
            "side": "transform",
            "log_constant": cert.log_constant,
            "exponent": exponent,
            "margin": margin,
            "valid_from": cert.valid_from,
            "log_bound_at": probes,
        },
    });
    let assertions = vec![
        Assertion::new(
            "cascade-slope-under-tau",
            c1 <= tau + 0.1,
            format!("fitted k·log k coefficient {c1:.4} vs tau + 0.1 = {:.4}", tau + 0.1),
        ),
        Assertion::new("cascade-bounds-finite", all_finite, "every log moment bound is finite"),
    ];
    Ok((derived, assertions))
}

fn moments(cfg: &RunConfig) -> Result<(Value, Vec<Assertion>)> {
    const DELTAS: [f64; 4] = [0.5, 1.0, 1.5, 2.0];
    const THETAS: [f64; 3] = [0.0, 0.3, 0.6];

    let mut csv = Csv::new(&["delta", "theta", "k", "log_value", "value", "overflowed"]);
    let mut exact_ok = true;
    let mut exact_worst = 0.0f64;
    let mut monotone_ok = true;
    let mut finite_ok = true;
    for &delta in &DELTAS {
        for k in 0..=cfg.k_max {
            let mut prev: Option<f64> = None;
            for &theta in &THETAS {
                let m = gamma_moment_bound(delta, theta, k)?;
                finite_ok &= m.log_value.is_finite();
                if let Some(p) = prev {
                    monotone_ok &= m.log_value > p;
                }
                prev = Some(m.log_value);
                if delta == 1.0 && theta == 0.0 {
                    // Closed form collapses to 2·k! here.
                    let exact = 2.0f64.ln() + ln_factorial(k as u64);
                    let dev = (m.log_value - exact).abs();
                    exact_worst = exact_worst.max(dev);
                    exact_ok &= dev <= 1e-12;
                }
                csv.row(&[
                    fmt_float(delta),
                    fmt_float(theta),
                    k.to_string(),
                    fmt_float(m.log_value),
                    fmt_float(m.value),
                    m.overflowed.to_string(),
                ]);
            }
        }
    }
    write_text(&cfg.out, "moments.csv", &csv.into_string())?;

    let derived = json!({
        "deltas": DELTAS,
        "thetas": THETAS,
        "k_range": [0, cfg.k_max],
        "rows": DELTAS.len() * THETAS.len() * (cfg.k_max as usize + 1),
    });
    let assertions = vec![
        Assertion::new(
            "exp-linear-rows-factorial",
            exact_ok,
            format!("delta=1, theta=0 rows match 2·k! (worst log deviation {exact_worst:.2e})"),
        ),
        Assertion::new(
            "monotone-in-theta",
            monotone_ok,
            "moment grows strictly with the margin slack",
        ),
        Assertion::new("log-values-finite", finite_ok, "no overflow in the log domain"),
    ];
    Ok((derived, assertions))
}

fn sharpness(cfg: &RunConfig) -> Result<(Value, Vec<Assertion>)> {
    let seq = build_sharpness_sequence(cfg.alpha, cfg.j, cfg.k_max, cfg.blocked)?;
    let verified = seq.verify();

    let mut csv = Csv::new(&[
        "k",
        "budget",
        "first_gap",
        "mean_gap",
        "mean_cap",
        "largest_gap",
        "gap_count",
        "big_gap_count",
        "truncated",
    ]);
    let unit = 2f64.powf(-(1.0 - cfg.alpha) * cfg.j as f64 / cfg.alpha);
    let mut mean_ok = true;
    let mut constant = f64::INFINITY;
    for k in 0..=cfg.k_max {
        let rep = average_gap_report(&seq, k)?;
        mean_ok &= rep.mean_gap <= rep.bound * (1.0 + 1e-12);
        if k >= 1 {
            constant = constant.min(seq.first_gap(k) / (k as f64 * unit));
        }
        csv.row(&[
            k.to_string(),
            fmt_float(seq.nominal_budget(k)),
            fmt_float(seq.first_gap(k)),
            fmt_float(rep.mean_gap),
            fmt_float(rep.bound),
            fmt_float(rep.largest_gap),
            rep.gap_count.to_string(),
            rep.big_gap_count.to_string(),
            rep.truncated.to_string(),
        ]);
    }
    write_text(&cfg.out, "sharpness.csv", &csv.into_string())?;

    let derived = json!({
        "alpha": cfg.alpha,
        "j": cfg.j,
        "k_max": cfg.k_max,
        "blocked": cfg.blocked,
        "block_start": seq.block_start,
        "block_end": seq.block_end,
        "window_len": seq.window_len,
        "sub_block": seq.sub_block(),
        "truncated": seq.truncated,
        "budget_floored": seq.budget_floored,
        "first_gap_constant": json_float(constant),
        "gap_unit": unit,
    });
    let assertions = vec![
        Assertion::new(
            "interlacing-and-budgets-verified",
            verified.is_ok(),
            match &verified {
                Ok(()) => "structural verification passed".to_string(),
                Err(e) => format!("verification failed: {e}"),
            },
        ),
        Assertion::new("mean-gap-under-cap", mean_ok, "every level mean gap is within its cap"),
        Assertion::new(
            "first-gap-constant",
            constant >= 0.1,
            format!("min_k first_gap/(k·2^(-(1-alpha)j/alpha)) = {constant:.4}"),
        ),
    ];
    Ok((derived, assertions))
}

fn run_sweep(cfg: &RunConfig) -> Result<(Value, Vec<Assertion>)> {
    let xs = centers(cfg.grid);
    let res = sweep(&xs, &xs, basis_of(cfg), cfg.nodes)?;

    let mut csv = Csv::new(&[
        "alpha",
        "beta",
        "sigma_min",
        "sigma_max",
        "normalized",
        "predicted",
        "excluded_rows",
    ]);
    let g = cfg.grid;
    let mut values = vec![vec![0.0f64; g]; g];
    let mut predicted = vec![vec![false; g]; g];
    let mut unit_ok = true;
    let mut min_in_region = f64::INFINITY;
    let mut max_norm = 0.0f64;
    for i in 0..g {
        for j in 0..g {
            let cell = res.cell(i, j);
            values[i][j] = cell.normalized;
            predicted[i][j] = cell.predicted;
            unit_ok &= (0.0..=1.0 + 1e-12).contains(&cell.normalized);
            max_norm = max_norm.max(cell.normalized);
            if cell.predicted {
                min_in_region = min_in_region.min(cell.normalized);
            }
            csv.row(&[
                fmt_float(cell.alpha),
                fmt_float(cell.beta),
                fmt_float(cell.sigma_min),
                fmt_float(cell.sigma_max),
                fmt_float(cell.normalized),
                cell.predicted.to_string(),
                cell.excluded_rows.to_string(),
            ]);
        }
    }
    write_text(&cfg.out, "sweep.csv", &csv.into_string())?;
    write_text(
        &cfg.out,
        "sweep.svg",
        &heatmap_svg(&values, &predicted, "normalized sigma_min over the exponent plane"),
    )?;

    let floor_detail = if min_in_region.is_finite() {
        format!("min normalized sigma_min over in-region cells {min_in_region:.3e}")
    } else {
        "no in-region cells on this grid".to_string()
    };
    let derived = json!({
        "max_normalized": json_float(max_norm),
        "min_in_region_normalized": json_float(min_in_region),
        "cells": g * g,
    });
    let assertions = vec![
        Assertion::new("normalized-in-unit-interval", unit_ok, "sigma_min/sigma_max within [0,1]"),
        Assertion::new(
            "in-region-cells-above-floor",
            !min_in_region.is_finite() || min_in_region >= cfg.sweep_floor,
            floor_detail,
        ),
    ];
    Ok((derived, assertions))
}

fn run_reconstruct(cfg: &RunConfig) -> Result<(Value, Vec<Assertion>)> {
    let direct = match &cfg.nodes_kind {
        NodesKind::Power => NodeFamily::power(cfg.alpha)?,
        NodesKind::Log => NodeFamily::Log,
        NodesKind::Custom(_) => {
            NodeFamily::custom(cfg.custom_nodes.clone().expect("loaded at resolve time"))?
        }
    };
    let transform = NodeFamily::power(cfg.beta)?;
    let op = build_operator_from_families(
        &direct,
        cfg.nodes,
        &transform,
        cfg.nodes,
        basis_of(cfg),
        OperatorOptions::default(),
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let coeffs: Vec<f64> = (0..cfg.basis)
        .map(|_| 2.0 * ((rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64) - 1.0)
        .collect();
    let samples = apply(&op, &coeffs)?;
    let rec = reconstruct(&op, &samples)?;

    let orders = op.basis.orders();
    let mut csv = Csv::new(&["index", "order", "true", "recovered_re", "recovered_im", "abs_err"]);
    let mut max_err = 0.0f64;
    for (i, (&truth, &(re, im))) in coeffs.iter().zip(rec.coefficients.iter()).enumerate() {
        let err = ((re - truth).powi(2) + im.powi(2)).sqrt();
        max_err = max_err.max(err);
        csv.row(&[
            i.to_string(),
            orders[i].to_string(),
            fmt_float(truth),
            fmt_float(re),
            fmt_float(im),
            fmt_float(err),
        ]);
    }
    write_text(&cfg.out, "reconstruct.csv", &csv.into_string())?;

    let derived = json!({
        "sigma_min": json_float(rec.sigma_min),
        "sigma_max": json_float(rec.sigma_max),
        "condition": json_float(rec.sigma_max / rec.sigma_min),
        "residual": json_float(rec.residual),
        "max_coefficient_error": json_float(max_err),
        "excluded_rows": op.excluded_rows,
        "direct_rows": op.direct_nodes.len(),
        "transform_rows": op.transform_nodes.len(),
    });
    let assertions = vec![
        Assertion::new(
            "residual-under-tol",
            rec.residual <= cfg.tol,
            format!("relative residual {:.3e} vs tolerance {:.1e}", rec.residual, cfg.tol),
        ),
        Assertion::new(
            "operator-injective",
            rec.sigma_min > 0.0,
            format!("sigma_min {:.3e}", rec.sigma_min),
        ),
    ];
    Ok((derived, assertions))
}
