use serde_json::{json, Value};

use shg_core::dynamics::{h1_norm_sq, linear_propagate, picard_iterate, recommended_panels, EvolutionParams, Sign, SplitStep, Trajectory};
use shg_core::inequalities::{apriori_h1_bound, apriori_terms, calibrate_a, gn_envelope, gn_ratio, gn_records, random_corpus, GnRecord};
use shg_core::observables::conservation_report;
use shg_core::resonance::{counting_table, verify_transformed_equation};
use shg_core::strichartz::{projector_bilinear_ratio, run_scan, scaling_fit, Cell, ScanConfig};
use shg_core::{rng, Complex64, Dyadic, SigmaRational, SpectralField, SpectrumModel, SphereGrid};

use crate::args::{Command, RunConfig, SignArg, Solver};
use crate::error::{CliError, Result};
use crate::output::Table;
use crate::row;

/// What a subcommand produced. `failure` is set when the run completed but an
/// invariant check failed; outputs are still written.
pub struct Report {
    pub table: Table,
    pub result: Value,
    pub failure: Option<String>,
}

impl Report {
    fn ok(table: Table, result: Value) -> Self {
        Self {
            table,
            result,
            failure: None,
        }
    }
}

/// Inputs shared by the subcommands, checked before any computation.
pub struct Validated {
    pub sigma: SigmaRational,
    pub seed: u64,
}

pub fn validate(cmd: Command, c: &RunConfig) -> Result<Validated> {
    let sigma = SigmaRational::new(c.sigma[0], c.sigma[1])?;
    if c.require_square && !sigma.is_perfect_square_pair() {
        return Err(shg_core::Error::Precondition(format!(
            "--require-square: sigma = {}/{} is not a ratio of perfect squares",
            c.sigma[0], c.sigma[1]
        ))
        .into());
    }
    if c.band_limit == 0 {
        return Err(CliError::Config("--band-limit must be >= 1".into()));
    }
    let seed = match (cmd.is_stochastic(), c.seed) {
        (true, None) => return Err(CliError::Config(format!("{} draws random data: --seed is required", cmd.name()))),
        (_, s) => s.unwrap_or(0),
    };
    let positive = |name: &str, x: f64| {
        if x > 0.0 && x.is_finite() {
            Ok(())
        } else {
            Err(CliError::Config(format!("--{name} must be positive and finite, got {x}")))
        }
    };
    match cmd {
        Command::Evolve | Command::Bound => {
            positive("time", c.time)?;
            positive("dt", c.dt)?;
            if c.dt > c.time {
                return Err(CliError::Config(format!("--dt {} exceeds --time {}", c.dt, c.time)));
            }
            if !c.amplitude.is_finite() || !c.decay.is_finite() {
                return Err(CliError::Config("--amplitude and --decay must be finite".into()));
            }
        }
        Command::Count | Command::Strichartz => {
            if c.dyadic_n.is_empty() || c.dyadic_l.is_empty() {
                return Err(CliError::Config("--dyadic-n and --dyadic-l must be nonempty".into()));
            }
            for &n in c.dyadic_n.iter().chain(&c.dyadic_l) {
                Dyadic::new(n)?;
            }
        }
        Command::ProjectorBilinear => {
            if c.dyadic_n.contains(&0) || c.dyadic_l.contains(&0) {
                return Err(CliError::Config("projector-bilinear degrees must be >= 1".into()));
            }
        }
        Command::Gn => positive("gn-tol", c.gn_tol)?,
        Command::Selftest => {}
    }
    if c.trials == 0 && matches!(cmd, Command::Strichartz | Command::ProjectorBilinear | Command::Gn) {
        return Err(CliError::Config("--trials must be >= 1".into()));
    }
    Ok(Validated { sigma, seed })
}

pub fn run(cmd: Command, c: &RunConfig, v: &Validated) -> Result<Report> {
    match cmd {
        Command::Selftest => selftest(c, v),
        Command::Evolve => evolve(c, v),
        Command::Count => count(c, v),
        Command::Strichartz => strichartz(c, v),
        Command::ProjectorBilinear => projector_bilinear(c, v),
        Command::Gn => gn(c, v),
        Command::Bound => bound(c, v),
    }
}

fn params(c: &RunConfig, v: &Validated) -> Result<EvolutionParams> {
    Ok(EvolutionParams::new(
        v.sigma,
        c.alpha,
        Complex64::new(c.eps1[0], c.eps1[1]),
        Complex64::new(c.eps2[0], c.eps2[1]),
    )?)
}

/// v₀ then u₀, each coefficient amplitude·g/(1+k)^decay with g standard
/// complex Gaussian.
fn initial_data(c: &RunConfig, seed: u64) -> (SpectralField, SpectralField) {
    let mut r = rng::stream(seed, &[]);
    let mut draw =
        || SpectralField::from_fn(c.band_limit, |i| rng::complex_gaussian(&mut r) * c.amplitude / (1.0 + i.k as f64).powf(c.decay));
    let v0 = draw();
    let u0 = draw();
    (v0, u0)
}

fn evolve_trajectory(c: &RunConfig, p: &EvolutionParams, grid: &SphereGrid, seed: u64) -> Result<Trajectory> {
    let (v0, u0) = initial_data(c, seed);
    let traj = match c.solver {
        Solver::SplitStep => SplitStep::new(c.dt).sample_every(c.sample_every).run(&v0, &u0, p, grid, c.time)?,
        Solver::Picard => {
            let panels = recommended_panels(p, c.band_limit, c.time);
            picard_iterate(&v0, &u0, p, grid, c.time, panels, c.max_iter, c.tol)?
        }
    };
    Ok(traj)
}

fn check(table: &mut Table, failures: &mut Vec<String>, name: &str, value: f64, tolerance: f64) {
    let pass = value <= tolerance;
    if !pass {
        failures.push(format!("{name}: {value:e} > {tolerance:e}"));
    }
    table.push(row![name, value, tolerance, pass]);
}

fn selftest(c: &RunConfig, v: &Validated) -> Result<Report> {
    let band = c.band_limit;
    let grid = SphereGrid::new(band)?;
    let model = SpectrumModel::S2;
    let mut r = rng::stream(v.seed, &[]);
    let f = SpectralField::from_fn(band, |_| rng::complex_gaussian(&mut r));
    let norm_sq = f.norm_l2_sq();

    let mut table = Table::new(&["check", "value", "tolerance", "pass"]);
    let mut failures = Vec::new();

    let values = grid.synthesize(&f)?;
    let back = grid.analyze(&values)?;
    check(&mut table, &mut failures, "round_trip", back.max_abs_diff(&f)?, 1e-10);

    let quad = grid.integrate_real(|j, l| values.get(j, l).norm_sqr());
    check(&mut table, &mut failures, "parseval", (quad - norm_sq).abs() / norm_sq, 1e-10);

    // Conjugation commutes with synthesis up to the m → −m relabelling.
    let conj_grid = grid.synthesize(&f.conj())?;
    let conj_err = conj_grid
        .values()
        .iter()
        .zip(values.values())
        .map(|(a, b)| (a - b.conj()).norm())
        .fold(0.0, f64::max);
    check(&mut table, &mut failures, "conjugation", conj_err / values.max_abs().max(1e-300), 1e-10);

    // Dyadic projectors: partition of unity, idempotence, orthogonality.
    let blocks: Vec<Dyadic> = Dyadic::up_to(4 * (band as u64 + 1)).collect();
    let mut sum = SpectralField::zeros(band);
    let mut idem: f64 = 0.0;
    let mut block_mass = 0.0;
    for &n in &blocks {
        let p = f.dyadic_project(n, &model);
        idem = idem.max(p.dyadic_project(n, &model).max_abs_diff(&p)?);
        block_mass += p.norm_l2_sq();
        sum += &p;
    }
    check(&mut table, &mut failures, "dyadic_partition", sum.max_abs_diff(&f)?, 1e-14);
    check(&mut table, &mut failures, "dyadic_idempotence", idem, 1e-14);
    check(&mut table, &mut failures, "dyadic_orthogonality", (block_mass - norm_sq).abs() / norm_sq, 1e-12);

    // Degree projectors sum to the identity as well.
    let mut by_degree = SpectralField::zeros(band);
    for k in 0..=band {
        by_degree += &f.project_degree(k);
    }
    check(&mut table, &mut failures, "degree_partition", by_degree.max_abs_diff(&f)?, 1e-14);

    // Linear groups are unitary.
    let p = EvolutionParams::new(v.sigma, c.alpha, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))?;
    let mut unitarity: f64 = 0.0;
    for t in [0.1, 1.0, 10.0] {
        for spec in [p.group_v(), p.group_u()] {
            let g = linear_propagate(&f, spec, t, &model);
            unitarity = unitarity.max((g.norm_l2_sq() - norm_sq).abs() / norm_sq);
        }
    }
    check(&mut table, &mut failures, "unitarity", unitarity, 1e-12);

    // Multiplying by the constant 1 = √(4π)·Y₀⁰ is the identity.
    let one = SpectralField::single_mode(band, 0, 0, Complex64::new((4.0 * std::f64::consts::PI).sqrt(), 0.0))?;
    check(&mut table, &mut failures, "unit_product", grid.multiply(&one, &f, band)?.max_abs_diff(&f)?, 1e-10);

    let passed = failures.is_empty();
    let result = json!({ "checks": table.rows.len(), "passed": passed, "failures": failures });
    Ok(Report {
        table,
        result,
        failure: (!passed).then(|| format!("selftest failed: {}", failures.join("; "))),
    })
}

fn evolve(c: &RunConfig, v: &Validated) -> Result<Report> {
    let grid = SphereGrid::new(c.band_limit)?;
    let p = params(c, v)?;
    let traj = evolve_trajectory(c, &p, &grid, v.seed)?;
    let rep = conservation_report(&traj, &p, &grid, &SpectrumModel::S2)?;

    let mut table = Table::new(&["t", "mass", "energy", "h1_sq"]);
    for (i, (t, fv, fu)) in traj.iter().enumerate() {
        table.push(row![t, rep.mass[i], rep.energy[i], h1_norm_sq(fv, fu)]);
    }
    let result = json!({
        "samples": traj.len(),
        "meta": traj.meta,
        "mass_drift": rep.mass_drift,
        "energy_drift": rep.energy_drift,
        "mass_conserving": rep.mass_conserving,
        "conservative": rep.conservative,
        "initial": { "mass": rep.mass[0], "energy": rep.energy[0] },
    });
    Ok(Report::ok(table, result))
}

fn count(c: &RunConfig, v: &Validated) -> Result<Report> {
    let model = SpectrumModel::S2;
    let mut table = Table::new(&["n", "l", "m", "count"]);
    let mut cells = Vec::new();
    for &n in &c.dyadic_n {
        for &l in &c.dyadic_l {
            let (dn, dl) = (Dyadic::new(n)?, Dyadic::new(l)?);
            let t = counting_table(dn, dl, v.sigma, &model);
            for m in t.m_range() {
                table.push(row![n, l, m, t.count_at(m)]);
            }
            let transformed = if v.sigma.is_perfect_square_pair() {
                let chk = verify_transformed_equation(dn, dl, v.sigma, 2, None)?;
                json!({
                    "holds": chk.holds,
                    "checked": chk.checked,
                    "witness": chk.witness,
                    "outside_degree_box": chk.outside_degree_box,
                })
            } else {
                Value::Null
            };
            cells.push(json!({
                "n": n,
                "l": l,
                "sup": t.sup,
                "argmax": t.argmax,
                "pairs": t.pairs,
                "total": t.total(),
                "transformed": transformed,
            }));
        }
    }
    let result = json!({
        "sigma": { "beta": v.sigma.beta(), "theta": v.sigma.theta(), "perfect_square_pair": v.sigma.is_perfect_square_pair() },
        "cells": cells,
    });
    Ok(Report::ok(table, result))
}

fn strichartz(c: &RunConfig, v: &Validated) -> Result<Report> {
    let mut cfg = ScanConfig::new(c.dyadic_n.clone(), c.dyadic_l.clone(), c.trials, v.seed, v.sigma);
    cfg.sign = match c.sign {
        SignArg::Plus => Sign::Plus,
        SignArg::Minus => Sign::Minus,
    };
    let scan = run_scan(&cfg)?;
    let mut table = Table::new(&["n", "l", "trial", "time_nodes", "ratio"]);
    for r in &scan.records {
        table.push(row![r.n, r.l, r.trial, r.time_nodes, r.ratio]);
    }
    let result = json!({
        "slope": scan.fit.slope,
        "intercept": scan.fit.intercept,
        "residual": scan.fit.residual,
        "buckets": scan.fit.buckets,
        "s0": cfg.s0,
    });
    Ok(Report::ok(table, result))
}

fn projector_bilinear(c: &RunConfig, v: &Validated) -> Result<Report> {
    let mut table = Table::new(&["k", "l", "ratio"]);
    let mut cells = Vec::new();
    for &k in &c.dyadic_n {
        for &l in &c.dyadic_l {
            let grid = SphereGrid::for_product(k as usize, l as usize)?;
            let ratio = projector_bilinear_ratio(k as usize, l as usize, c.trials, v.seed, &grid)?;
            table.push(row![k, l, ratio]);
            cells.push(Cell { n: k, l, ratio });
        }
    }
    let fit = scaling_fit(&cells)?;
    let result = json!({
        "slope": fit.slope,
        "intercept": fit.intercept,
        "residual": fit.residual,
        "buckets": fit.buckets,
        "flagged": fit.slope > 0.3,
    });
    Ok(Report::ok(table, result))
}

fn gn_table(records: &[GnRecord]) -> Table {
    let mut table = Table::new(&["sample", "r", "theta", "lhs", "grad_term", "mass_term", "ratio"]);
    for (i, g) in records.iter().enumerate() {
        table.push(row![i, g.r, g.theta, g.lhs, g.grad_term, g.mass_term, g.ratio]);
    }
    table
}

fn gn(c: &RunConfig, v: &Validated) -> Result<Report> {
    let grid = SphereGrid::new(c.band_limit)?;
    let corpus = random_corpus(c.trials, c.band_limit, v.seed);
    let records = gn_records(&corpus, c.gn_r, &grid, &SpectrumModel::S2)?;
    let envelope = gn_envelope(&records)?;
    let calibration = calibrate_a(&records, c.gn_b, c.gn_tol)?;
    let result = json!({ "envelope": envelope, "calibration": calibration });
    Ok(Report::ok(gn_table(&records), result))
}

fn bound(c: &RunConfig, v: &Validated) -> Result<Report> {
    let grid = SphereGrid::new(c.band_limit)?;
    let model = SpectrumModel::S2;
    let p = params(c, v)?;
    let traj = evolve_trajectory(c, &p, &grid, v.seed)?;
    let rep = conservation_report(&traj, &p, &grid, &model)?;

    let records: Vec<GnRecord> = traj
        .v
        .iter()
        .chain(&traj.u)
        .map(|f| gn_ratio(f, c.gn_r, &grid, &model))
        .collect::<shg_core::Result<_>>()?;
    let cal = calibrate_a(&records, c.gn_b, c.gn_tol)?;
    let sigma = v.sigma.value();
    let (m0, e0) = (rep.mass[0], rep.energy[0]);
    let terms = apriori_terms(sigma, c.alpha, 2, m0, e0, cal.a, cal.b)?;
    let bound = apriori_h1_bound(sigma, c.alpha, 2, m0, e0, cal.a, cal.b)?;

    let mut table = Table::new(&["t", "h1_sq", "bound", "within"]);
    let mut worst: f64 = 0.0;
    let mut violations = 0usize;
    for (t, fv, fu) in traj.iter() {
        let h = h1_norm_sq(fv, fu);
        worst = worst.max(h);
        violations += usize::from(h > bound);
        table.push(row![t, h, bound, h <= bound]);
    }
    let result = json!({
        "m0": m0,
        "e0": e0,
        "calibration": cal,
        "terms": terms,
        "bound": bound,
        "max_h1_sq": worst,
        "violations": violations,
        "mass_drift": rep.mass_drift,
        "energy_drift": rep.energy_drift,
        "conservative": rep.conservative,
    });
    Ok(Report::ok(table, result))
}
