//! Command-line entry point for the workbench.
//!
//! Each subcommand runs one experiment, prints a summary, writes CSV
//! artifacts plus the resolved configuration to the output directory, and
//! exits nonzero when any declared assertion fails. Outputs are byte-stable
//! for a fixed seed. The output root can be redirected with the
//! `REEBLAB_OUT` environment variable; a config file passed with `--config`
//! overrides the command-line flags.

mod config;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use reeb_lab::calabi::{self, OrbitSearch, SurfaceMapModel, TwistProfile};
use reeb_lab::ellipsoid::{self, AngularChart, Ellipsoid, PqSurface};
use reeb_lab::flow::{self, IntegratorConfig, Section};
use reeb_lab::inflation::{
    self, InflationProfile, RadialLiouvilleDisk, Sigma0SlabChart, TubeChart,
    TubeSlabChart,
};
use reeb_lab::model::evaluate_main_inequality;
use reeb_lab::report::{fmt_f64, inequality_table, Csv};
use reeb_lab::spectrum::{self, ActionSpectrum};
use reeb_lab::verify;

#[derive(Parser)]
#[command(
    name = "reeblab",
    about = "Reeb-flow and surface-map experiments: ellipsoid invariants, crossing \
             statistics, contact-form inflation, action spectra, Calabi experiments",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Output directory (joined under $REEBLAB_OUT when relative).
    #[arg(long, default_value = "reeblab-out")]
    out: PathBuf,
    /// Config file; values in it override the flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form invariants of an ellipsoid-boundary surface.
    EllipsoidReport {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = std::f64::consts::SQRT_2)]
        b: f64,
        /// Use the disk page instead of a line-class surface.
        #[arg(long, default_value_t = false)]
        disk: bool,
        #[arg(long, default_value_t = 1)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        q: u32,
        /// Absolute tolerance for equality verdicts.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Integrate the ellipsoid Reeb flow and count surface crossings.
    FlowSim {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = std::f64::consts::SQRT_2)]
        b: f64,
        #[arg(long, default_value_t = false)]
        disk: bool,
        #[arg(long, default_value_t = 1)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        q: u32,
        #[arg(long, default_value_t = 200.0)]
        duration: f64,
        /// Start point `theta1,theta2,x`.
        #[arg(long, value_delimiter = ',', default_values_t = [0.3, 1.1, 0.5])]
        start: Vec<f64>,
        /// Angular offset of the surface within its class.
        #[arg(long, default_value_t = 0.9)]
        section_offset: f64,
    },
    /// Audit the inflated contact form: Reeb identities, traversal, volume.
    InflateCheck {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 1.0)]
        s0: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 0.5)]
        r0: f64,
        #[arg(long, default_value_t = 1.0)]
        tube_period: f64,
        #[arg(long, default_value_t = std::f64::consts::SQRT_2)]
        tube_rot_tau: f64,
        #[arg(long, default_value_t = 0)]
        tube_p: i64,
        #[arg(long, default_value_t = 1)]
        tube_q: i64,
        #[arg(long, default_value_t = 0.25)]
        theta_b: f64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Orbit-set action spectrum with optional Weyl diagnostics.
    Spectrum {
        #[command(flatten)]
        common: CommonArgs,
        /// Simple-orbit actions, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        generators: Vec<f64>,
        #[arg(long, default_value_t = 10_000)]
        k_max: usize,
        /// Emit Weyl-law diagnostics (needs a volume, see --volume).
        #[arg(long, default_value_t = false)]
        weyl: bool,
        /// Contact volume hint; defaults to the product of two generators.
        #[arg(long)]
        volume: Option<f64>,
        /// Cap on the number of spectrum rows written to CSV.
        #[arg(long, default_value_t = 10_000)]
        dump_limit: usize,
    },
    /// Calabi invariant and mean-action experiments on a surface map model.
    Calabi {
        #[command(flatten)]
        common: CommonArgs,
        /// Model: ideal-twist | flipped-twist | smooth-twist | rigid:<theta>
        /// | annulus-ramp | knots:r=tau,r=tau,... (last knot at r = 1)
        #[arg(long, default_value = "ideal-twist")]
        model: String,
        /// Max denominator for the radial orbit search.
        #[arg(long, default_value_t = 3)]
        budget: u32,
        /// Evaluate the mean-action inequalities on the found orbits.
        #[arg(long, default_value_t = false)]
        check_theorem: bool,
        #[arg(long, default_value_t = 1e-9)]
        quad_tol: f64,
    },
    /// Run the complete acceptance suite.
    VerifyAll {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn out_dir(requested: &Path) -> Result<PathBuf> {
    let dir = if requested.is_absolute() {
        requested.to_path_buf()
    } else {
        match std::env::var_os("REEBLAB_OUT") {
            Some(root) => PathBuf::from(root).join(requested),
            None => requested.to_path_buf(),
        }
    };
    std::fs::create_dir_all(&dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))?;
    Ok(dir)
}

fn write_artifact(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn surface(disk: bool, p: u32, q: u32) -> Result<PqSurface> {
    if disk {
        Ok(PqSurface::disk())
    } else {
        Ok(PqSurface::line_class(p, q)?)
    }
}

fn run_ellipsoid_report(mut params: config::EllipsoidParams, common: &CommonArgs) -> Result<bool> {
    if let Some(path) = &common.config {
        let file = config::load(path, "ellipsoid-report")?;
        params.apply(&file.ellipsoid_report);
    }
    let dir = out_dir(&common.out)?;
    write_artifact(
        &dir,
        "resolved_config.toml",
        &config::resolved_toml("ellipsoid-report", "ellipsoid_report", &params)?,
    )?;

    let e = Ellipsoid::new(params.a, params.b, true)?;
    let s = surface(params.disk, params.p, params.q)?;
    let record = ellipsoid::pq_surface_data(&e, &s)?;
    let crossings = ellipsoid::orbit_crossings(&e, &s)?;
    let entries = ellipsoid::ratio_entries(&e, &s)?;
    let report = evaluate_main_inequality(&entries, record.area, e.volume(), params.tol)?;

    let mut csv = Csv::new(vec![
        "orbit",
        "action",
        "rot_tau",
        "rot_sigma",
        "intersections",
        "ratio",
        "threshold",
    ]);
    for c in &crossings {
        csv.row(vec![
            c.orbit.label.clone(),
            fmt_f64(c.orbit.action),
            fmt_f64(c.orbit.rot_tau),
            c.rot_sigma.map(fmt_f64).unwrap_or_else(|| "interior".into()),
            fmt_f64(c.intersections),
            fmt_f64(c.intersections / c.orbit.action),
            fmt_f64(report.threshold),
        ]);
    }
    write_artifact(&dir, "ellipsoid_report.csv", &csv.render())?;

    println!(
        "ellipsoid (a, b) = ({}, {}), surface {:?}",
        params.a, params.b, s.kind
    );
    println!(
        "area = {}  volume = {}",
        fmt_f64(record.area),
        fmt_f64(e.volume())
    );
    print!("{}", inequality_table(&report));

    // the model surfaces realize the equality case; assert it
    let ok = report
        .rows
        .iter()
        .all(|row| (row.ratio - report.threshold).abs() <= params.tol);
    if !ok {
        eprintln!("assertion failed: frequency ratios do not meet the threshold");
    }
    Ok(ok)
}

fn run_flow_sim(mut params: config::FlowParams, common: &CommonArgs) -> Result<bool> {
    if let Some(path) = &common.config {
        let file = config::load(path, "flow-sim")?;
        params.apply(&file.flow_sim);
    }
    let dir = out_dir(&common.out)?;
    write_artifact(
        &dir,
        "resolved_config.toml",
        &config::resolved_toml("flow-sim", "flow_sim", &params)?,
    )?;
    if params.start.len() != 3 {
        bail!("start point needs 3 coordinates, got {}", params.start.len());
    }

    let e = Ellipsoid::new(params.a, params.b, true)?;
    let s = surface(params.disk, params.p, params.q)?;
    let rate = ellipsoid::torus_crossing_rate(&e, &s);
    let chart = AngularChart { e };
    let offset = params.section_offset;
    // surface defect: q theta1 - p theta2 for the line class, theta2 alone
    // for the disk page; the sine vanishes on the surface and its antipode,
    // the filter keeps the surface zeros
    let (cp, cq) = match s.kind {
        ellipsoid::SurfaceKind::LineClass { p, q } => (p as f64, q as f64),
        ellipsoid::SurfaceKind::Disk => (-1.0, 0.0),
    };
    let value = move |x: &[f64; 3]| (cq * x[0] - cp * x[1] - offset).sin();
    let filter = move |x: &[f64; 3]| (cq * x[0] - cp * x[1] - offset).cos() > 0.0;
    let section = Section::with_filter(&value, &filter);
    let cfg = IntegratorConfig {
        record_samples: true,
        ..IntegratorConfig::default()
    };
    let start = [params.start[0], params.start[1], params.start[2]];
    let summary = flow::integrate(&chart, &start, params.duration, Some(&section), &cfg)?;

    let mut traj = Csv::new(vec!["time", "theta1", "theta2", "x", "section"]);
    for sample in &summary.samples {
        traj.row(vec![
            fmt_f64(sample.time),
            fmt_f64(sample.point[0]),
            fmt_f64(sample.point[1]),
            fmt_f64(sample.point[2]),
            fmt_f64(sample.section),
        ]);
    }
    write_artifact(&dir, "trajectory.csv", &traj.render())?;
    let mut events = Csv::new(vec!["time", "sign"]);
    for ev in &summary.events {
        events.row(vec![fmt_f64(ev.time), ev.sign.to_string()]);
    }
    write_artifact(&dir, "events.csv", &events.render())?;

    let empirical = summary.empirical_rate();
    println!(
        "crossings {} over duration {} (closed-form rate {}, empirical {})",
        summary.crossing_count,
        params.duration,
        fmt_f64(rate),
        fmt_f64(empirical)
    );
    let count_ok = (summary.crossing_count as f64 - rate * params.duration).abs() <= 1.0;
    let rate_ok = rate == 0.0 || (empirical - rate).abs() / rate <= 0.02;
    if !count_ok || !rate_ok {
        eprintln!("assertion failed: crossing statistics disagree with the closed form");
    }
    Ok(count_ok && rate_ok)
}

fn run_inflate_check(mut params: config::InflateParams, common: &CommonArgs) -> Result<bool> {
    if let Some(path) = &common.config {
        let file = config::load(path, "inflate-check")?;
        params.apply(&file.inflate_check);
    }
    let dir = out_dir(&common.out)?;
    write_artifact(
        &dir,
        "resolved_config.toml",
        &config::resolved_toml("inflate-check", "inflate_check", &params)?,
    )?;

    let profile = InflationProfile::new(params.s0, params.r0, params.delta)?;
    let tube = TubeChart::new(
        params.tube_period,
        params.tube_rot_tau,
        params.r0,
        params.tube_p,
        params.tube_q,
        params.theta_b,
    )?;
    let tube_chart = TubeSlabChart::new(tube, profile)?;
    let disk = RadialLiouvilleDisk::new(1.0)?;
    let sigma_chart = Sigma0SlabChart::new(disk, profile);

    let mut ok = true;
    let mut audit_csv = Csv::new(vec!["chart", "max_pairing_dev", "max_contraction"]);
    let mut sample_csv = Csv::new(vec![
        "chart",
        "c1",
        "c2",
        "c3",
        "pairing_dev",
        "contraction",
    ]);
    let tube_rows = inflation::contact_audit_samples(&tube_chart, params.samples, params.seed);
    let sigma_rows =
        inflation::contact_audit_samples(&sigma_chart, params.samples, params.seed + 1);
    for (name, rows) in [("tube", &tube_rows), ("sigma0", &sigma_rows)] {
        let max_pairing = rows.iter().map(|s| s.pairing_dev).fold(0.0, f64::max);
        let max_contraction = rows.iter().map(|s| s.contraction).fold(0.0, f64::max);
        println!(
            "{name}: |lambda(R) - 1| <= {}  |iota_R dlambda| <= {}",
            fmt_f64(max_pairing),
            fmt_f64(max_contraction)
        );
        ok &= max_pairing <= 1e-8 && max_contraction <= 1e-6;
        audit_csv.row(vec![
            name.to_string(),
            fmt_f64(max_pairing),
            fmt_f64(max_contraction),
        ]);
        for s in rows.iter() {
            sample_csv.row(vec![
                name.to_string(),
                fmt_f64(s.point[0]),
                fmt_f64(s.point[1]),
                fmt_f64(s.point[2]),
                fmt_f64(s.pairing_dev),
                fmt_f64(s.contraction),
            ]);
        }
    }
    write_artifact(&dir, "contact_audit.csv", &audit_csv.render())?;
    write_artifact(&dir, "contact_audit_samples.csv", &sample_csv.render())?;

    let traversal = inflation::slab_traversal(&profile, &disk, (0.35, -0.2))?;
    let expected = params.s0 + params.delta;
    println!(
        "slab traversal time {} (expected {}), return defect {}",
        fmt_f64(traversal.time),
        fmt_f64(expected),
        fmt_f64(traversal.return_defect)
    );
    ok &= (traversal.time - expected).abs() <= 1e-8 && traversal.return_defect <= 1e-8;
    let mut trav_csv = Csv::new(vec!["time", "expected", "return_defect"]);
    trav_csv.row(vec![
        fmt_f64(traversal.time),
        fmt_f64(expected),
        fmt_f64(traversal.return_defect),
    ]);
    write_artifact(&dir, "traversal.csv", &trav_csv.render())?;

    let region = inflation::SlabRegion {
        a0: disk.area(),
        profile,
    };
    let volume = inflation::slab_volume(&region)?;
    println!(
        "slab volume {} > delta*A0 = {}: {}",
        fmt_f64(volume.value),
        fmt_f64(volume.lower_bound),
        volume.exceeds_lower_bound
    );
    ok &= volume.exceeds_lower_bound;
    let mut vol_csv = Csv::new(vec!["value", "step_value", "smoothing_budget", "lower_bound"]);
    vol_csv.row(vec![
        fmt_f64(volume.value),
        fmt_f64(volume.step_value),
        fmt_f64(volume.smoothing_budget),
        fmt_f64(volume.lower_bound),
    ]);
    write_artifact(&dir, "slab_volume.csv", &vol_csv.render())?;

    if !ok {
        eprintln!("assertion failed: inflation audit out of tolerance");
    }
    Ok(ok)
}

fn run_spectrum(mut params: config::SpectrumParams, common: &CommonArgs) -> Result<bool> {
    if let Some(path) = &common.config {
        let file = config::load(path, "spectrum")?;
        params.apply(&file.spectrum);
    }
    let dir = out_dir(&common.out)?;
    write_artifact(
        &dir,
        "resolved_config.toml",
        &config::resolved_toml("spectrum", "spectrum", &params)?,
    )?;

    let volume = params.volume.or_else(|| {
        (params.generators.len() == 2).then(|| params.generators[0] * params.generators[1])
    });
    let mut spec = ActionSpectrum::new(params.generators.clone())?;
    if let Some(v) = volume {
        spec = spec.with_volume_hint(v);
    }

    let values = spec.prefix(params.k_max)?.to_vec();
    let mut ok = values.windows(2).all(|w| w[0] <= w[1]) && values[0] == 0.0;

    let mut csv = Csv::new(vec!["k", "value", "witness"]);
    let limit = params.dump_limit.min(params.k_max);
    for (k, value) in values.iter().enumerate().take(limit + 1) {
        let witness = spec
            .witness(k)?
            .iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        csv.row(vec![k.to_string(), fmt_f64(*value), witness]);
    }
    write_artifact(&dir, "spectrum.csv", &csv.render())?;
    println!(
        "orbit-set action spectrum (spectrality candidates): {} values up to k = {}",
        params.k_max + 1,
        params.k_max
    );

    if params.weyl {
        let Some(v) = volume else {
            bail!("weyl diagnostics need --volume (or exactly two generators)");
        };
        let ks: Vec<usize> = (1..=params.k_max)
            .filter(|k| k % (params.k_max / 100).max(1) == 0)
            .collect();
        let diags = spectrum::weyl_diagnostics(&mut spec, &ks)?;
        let mut weyl_csv = Csv::new(vec!["k", "value", "normalized"]);
        for d in &diags {
            weyl_csv.row(vec![
                d.k.to_string(),
                fmt_f64(d.value),
                fmt_f64(d.normalized),
            ]);
        }
        write_artifact(&dir, "weyl.csv", &weyl_csv.render())?;
        if let Some(last) = diags.last() {
            println!(
                "weyl normalization at k = {}: {} (volume {})",
                last.k,
                fmt_f64(last.normalized),
                fmt_f64(v)
            );
            ok &= last.normalized.is_finite();
        } else {
            println!("weyl diagnostics: no indices k >= 1 requested (volume {})", fmt_f64(v));
        }
    }
    if !ok {
        eprintln!("assertion failed: spectrum is not a valid nondecreasing sequence");
    }
    Ok(ok)
}

fn build_calabi_model(name: &str) -> Result<SurfaceMapModel> {
    if let Some(theta) = name.strip_prefix("rigid:") {
        let theta: f64 = theta.parse().context("rigid:<theta> needs a number")?;
        return Ok(SurfaceMapModel::twist_disk(TwistProfile::rigid(theta), theta));
    }
    if let Some(spec) = name.strip_prefix("knots:") {
        // knots:r=tau,r=tau,... over [0, 1] (disk) or [r_in, 1] (annulus when
        // the first radius is positive); the last knot must sit at r = 1 and
        // fixes theta_b
        let mut knots = Vec::new();
        for part in spec.split(',') {
            let (r, tau) = part
                .split_once('=')
                .with_context(|| format!("knot '{part}' is not r=tau"))?;
            knots.push((
                r.parse::<f64>().context("knot radius")?,
                tau.parse::<f64>().context("knot value")?,
            ));
        }
        let last = knots.last().copied().unwrap_or((0.0, 0.0));
        if (last.0 - 1.0).abs() > 1e-12 {
            bail!("the last knot must be at r = 1");
        }
        let profile = TwistProfile::from_knots(&knots)?;
        let r_first = knots[0].0;
        return if r_first <= 1e-12 {
            Ok(SurfaceMapModel::twist_disk(profile, last.1))
        } else {
            Ok(SurfaceMapModel::twist_annulus(profile, r_first, last.1)?)
        };
    }
    match name {
        "ideal-twist" => Ok(SurfaceMapModel::twist_disk(TwistProfile::ideal(), 0.0)),
        "flipped-twist" => Ok(SurfaceMapModel::twist_disk(
            TwistProfile::flipped_ideal(),
            0.0,
        )),
        "smooth-twist" => Ok(SurfaceMapModel::twist_disk(
            TwistProfile::smoothed(),
            TwistProfile::smoothed_theta_b(),
        )),
        "annulus-ramp" => Ok(SurfaceMapModel::twist_annulus(
            TwistProfile::annulus_ramp(0.5, -1.5, -0.25),
            0.5,
            -0.25,
        )?),
        other => bail!(
            "unknown model '{other}' (expected ideal-twist, flipped-twist, smooth-twist, \
             rigid:<theta>, annulus-ramp)"
        ),
    }
}

fn run_calabi(mut params: config::CalabiParams, common: &CommonArgs) -> Result<bool> {
    if let Some(path) = &common.config {
        let file = config::load(path, "calabi")?;
        params.apply(&file.calabi);
    }
    let dir = out_dir(&common.out)?;
    write_artifact(
        &dir,
        "resolved_config.toml",
        &config::resolved_toml("calabi", "calabi", &params)?,
    )?;

    let model = build_calabi_model(&params.model)?;
    let beta = calabi::standard_primitive(model.domain);
    let flux = calabi::compute_flux(&model, &beta)?;
    let f = calabi::action_function(&model, &beta)?;
    let cal = calabi::calabi_invariant(&model, &f, params.quad_tol)?;
    println!("model {}: Cal = {}", params.model, fmt_f64(cal));
    println!(
        "flux periods: [{}]",
        flux.periods
            .iter()
            .map(|p| fmt_f64(*p))
            .collect::<Vec<_>>()
            .join(", ")
    );

    let census = calabi::find_periodic_orbits(
        &model,
        OrbitSearch::Radial {
            max_denominator: params.budget,
        },
    )?;
    let mut orbits_csv = Csv::new(vec!["label", "d", "x", "y", "action", "mean_action"]);
    for orbit in &census.orbits {
        let (action, mean) = calabi::orbit_action(orbit, &f)?;
        orbits_csv.row(vec![
            orbit.label.clone(),
            orbit.d().to_string(),
            fmt_f64(orbit.points[0].0),
            fmt_f64(orbit.points[0].1),
            fmt_f64(action),
            fmt_f64(mean),
        ]);
    }
    write_artifact(&dir, "orbits.csv", &orbits_csv.render())?;
    println!(
        "{} periodic orbits found (denominators up to {})",
        census.orbits.len(),
        params.budget
    );
    for note in &census.skipped {
        println!("  skipped: {note}");
    }

    let mut ok = flux.is_zero;
    let mut report_csv = Csv::new(vec!["quantity", "value"]);
    report_csv.row(vec!["cal".to_string(), fmt_f64(cal)]);
    if params.check_theorem {
        let report = calabi::theorem_check(&model, &f, cal, &census.orbits, 1e-9)?;
        for (label, value) in &report.boundary_values {
            println!("boundary {label}: f = {}", fmt_f64(*value));
            report_csv.row(vec![format!("boundary_{label}"), fmt_f64(*value)]);
        }
        println!(
            "lower hypothesis (Cal < min boundary): {}",
            verdict(report.lower_hypothesis_holds, report.boundary_equality)
        );
        println!(
            "upper hypothesis (Cal > max boundary): {}",
            verdict(report.upper_hypothesis_holds, report.boundary_equality)
        );
        if let Some((label, mean)) = &report.min_mean {
            println!("min mean action {} at {label}", fmt_f64(*mean));
            report_csv.row(vec!["min_mean".to_string(), fmt_f64(*mean)]);
        }
        if let Some((label, mean)) = &report.max_mean {
            println!("max mean action {} at {label}", fmt_f64(*mean));
            report_csv.row(vec!["max_mean".to_string(), fmt_f64(*mean)]);
        }
        println!(
            "conclusion witnessed: lower {} upper {}",
            report.lower_witnessed, report.upper_witnessed
        );
        // when a hypothesis holds, the matching conclusion must be witnessed
        if report.lower_hypothesis_holds {
            ok &= report.lower_witnessed;
        }
        if report.upper_hypothesis_holds {
            ok &= report.upper_witnessed;
        }
    }
    write_artifact(&dir, "calabi_report.csv", &report_csv.render())?;
    if !ok {
        eprintln!("assertion failed: calabi experiment inconsistent");
    }
    Ok(ok)
}

fn verdict(holds: bool, equality: bool) -> &'static str {
    if holds {
        "holds"
    } else if equality {
        "fails (equality within tol)"
    } else {
        "fails"
    }
}

fn run_verify_all(mut params: config::VerifyParams, common: &CommonArgs) -> Result<bool> {
    if let Some(path) = &common.config {
        let file = config::load(path, "verify-all")?;
        params.apply(&file.verify_all);
    }
    let dir = out_dir(&common.out)?;
    write_artifact(
        &dir,
        "resolved_config.toml",
        &config::resolved_toml("verify-all", "verify_all", &params)?,
    )?;

    let outcomes = verify::run_all(params.seed);
    let mut summary = Csv::new(vec!["id", "name", "passed", "details"]);
    let mut all_ok = true;
    for outcome in &outcomes {
        println!("{}", outcome.status_line());
        all_ok &= outcome.passed;
        summary.row(vec![
            outcome.id.to_string(),
            outcome.name.to_string(),
            outcome.passed.to_string(),
            outcome.details.replace(',', ";"),
        ]);
        for (name, contents) in &outcome.artifacts {
            write_artifact(&dir, name, contents)?;
        }
    }
    write_artifact(&dir, "criteria.csv", &summary.render())?;
    println!(
        "{}",
        if all_ok {
            "all criteria passed"
        } else {
            "SOME CRITERIA FAILED"
        }
    );
    Ok(all_ok)
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::EllipsoidReport {
            common,
            a,
            b,
            disk,
            p,
            q,
            tol,
        } => run_ellipsoid_report(
            config::EllipsoidParams {
                a,
                b,
                disk,
                p,
                q,
                tol,
            },
            &common,
        ),
        Command::FlowSim {
            common,
            a,
            b,
            disk,
            p,
            q,
            duration,
            start,
            section_offset,
        } => run_flow_sim(
            config::FlowParams {
                a,
                b,
                disk,
                p,
                q,
                duration,
                start,
                section_offset,
            },
            &common,
        ),
        Command::InflateCheck {
            common,
            s0,
            delta,
            r0,
            tube_period,
            tube_rot_tau,
            tube_p,
            tube_q,
            theta_b,
            samples,
            seed,
        } => run_inflate_check(
            config::InflateParams {
                s0,
                delta,
                r0,
                tube_period,
                tube_rot_tau,
                tube_p,
                tube_q,
                theta_b,
                samples,
                seed,
            },
            &common,
        ),
        Command::Spectrum {
            common,
            generators,
            k_max,
            weyl,
            volume,
            dump_limit,
        } => run_spectrum(
            config::SpectrumParams {
                generators,
                k_max,
                weyl,
                volume,
                dump_limit,
            },
            &common,
        ),
        Command::Calabi {
            common,
            model,
            budget,
            check_theorem,
            quad_tol,
        } => run_calabi(
            config::CalabiParams {
                model,
                budget,
                check_theorem,
                quad_tol,
            },
            &common,
        ),
        Command::VerifyAll { common, seed } => {
            run_verify_all(config::VerifyParams { seed }, &common)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
