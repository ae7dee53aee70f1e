//! The four pipelines behind the subcommands.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use cosmic_vacuum::correlation::{correlation_grid, export_grid_csv, GridMode};
use cosmic_vacuum::defaults;
use cosmic_vacuum::distance::{
    cutoff_from_kappa, distance_lcdm_closed, fit_kappa, hubble_ratio, kappa_from_cutoff, solve_omega_infinity,
    TensionFit,
};
use cosmic_vacuum::history::ExpansionHistory;
use cosmic_vacuum::noise::{export_grid, synthesize, GridFormat, ModeGeometry, NoiseSpec};
use cosmic_vacuum::params::{parse_key_values, CosmologyParams};
use cosmic_vacuum::renorm::critical_energy_row;
use cosmic_vacuum::{Error, Result};

use crate::manifest::{io_error, RunManifest};
use crate::{CorrelateArgs, CorrelateMode, CosmologyArgs, GeometryArg, NoiseArgs, TensionArgs, VacuumEnergyArgs};

pub struct Context {
    pub config: Option<PathBuf>,
    pub out_dir: PathBuf,
}

/// Shortest text that parses back to the same `f64`.
fn num(x: f64) -> String {
    format!("{x}")
}

/// Layers defaults, the config file and flags. The resolved values are
/// returned as flag/value pairs for the manifest.
fn resolve_cosmology(ctx: &Context, args: &CosmologyArgs) -> Result<(CosmologyParams, BTreeMap<String, String>)> {
    let text = match &ctx.config {
        Some(path) => std::fs::read_to_string(path).map_err(|e| io_error(path, e))?,
        None => String::new(),
    };
    let (mut p, rest) = CosmologyParams::planck().merge_config(&text)?;
    if let Some(key) = rest.keys().next() {
        return Err(Error::Config(format!("unknown config key '{key}'")));
    }
    // H₀ is carried in km/s/Mpc so a replay converts the same number.
    let mut h0 = defaults::H0_KM_S_MPC;
    for (k, v) in parse_key_values(&text)? {
        if k == "h0" {
            h0 = v
                .parse()
                .map_err(|_| Error::Config(format!("h0: cannot parse {v:?}")))?;
        }
    }
    let h0 = args.h0.unwrap_or(h0);
    p.set("h0", &num(h0))?;
    let overrides = [
        ("omega_m", args.omega_m),
        ("omega_l", args.omega_l),
        ("omega_r", args.omega_r),
        ("a_star", args.a_star),
    ];
    for (key, v) in overrides {
        if let Some(v) = v {
            p.set(key, &num(v))?;
        }
    }
    p.validate()?;
    let mut rec = BTreeMap::new();
    rec.insert("h0".into(), num(h0));
    rec.insert("omega-m".into(), num(p.omega_m));
    rec.insert("omega-l".into(), num(p.omega_l));
    rec.insert("omega-r".into(), num(p.omega_r));
    rec.insert("a-star".into(), num(p.a_star));
    Ok((p, rec))
}

/// `desitter`, `power-law:P`, `lcdm` or `static`, with time in 1/H₀.
pub fn parse_history(spec: &str, params: &CosmologyParams) -> Result<ExpansionHistory> {
    let spec = spec.trim().to_ascii_lowercase();
    match spec.as_str() {
        "desitter" | "de-sitter" => ExpansionHistory::de_sitter(1.0, 1.0),
        "lcdm" => ExpansionHistory::lcdm(params, false),
        "static" => ExpansionHistory::static_medium(1.0),
        s => {
            let Some(p) = s.strip_prefix("power-law:") else {
                return Err(Error::Config(format!(
                    "unknown history '{s}' (desitter, power-law:P, lcdm, static)"
                )));
            };
            let bad = || Error::Config(format!("power-law exponent {p:?} is not a number"));
            let exponent = match p.split_once('/') {
                Some((n, d)) => {
                    n.trim().parse::<f64>().map_err(|_| bad())? / d.trim().parse::<f64>().map_err(|_| bad())?
                }
                None => p.trim().parse().map_err(|_| bad())?,
            };
            ExpansionHistory::power_law(exponent)
        }
    }
}

/// `start:stop:count` as evenly spaced values including both ends.
pub fn parse_range(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::Config(format!("expected start:stop:count, got {text:?}"));
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err(bad());
    };
    let (a, b): (f64, f64) = (
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    );
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| io_error(path, e))
}

pub fn tension(ctx: &Context, args: TensionArgs) -> Result<RunManifest> {
    let (p, mut params) = resolve_cosmology(ctx, &args.cosmology)?;
    let from_kappa = |kappa: f64| -> Result<TensionFit> {
        if !(kappa >= 0.0) {
            return Err(Error::Config(format!("kappa must be non-negative, got {kappa}")));
        }
        Ok(TensionFit {
            kappa,
            ell_over_lp: (kappa > 0.0).then(|| cutoff_from_kappa(kappa)),
            omega_inf: solve_omega_infinity(&p, kappa)?,
            hubble_ratio: hubble_ratio(&p, kappa)?,
            d_match_gly: distance_lcdm_closed(&p)?.gly(),
        })
    };
    let fit = match (args.kappa, args.ell, args.target_ratio) {
        (Some(k), _, _) => {
            params.insert("kappa".into(), num(k));
            from_kappa(k)?
        }
        (_, Some(ell), _) => {
            params.insert("ell".into(), num(ell));
            if !(ell > 0.0) {
                return Err(Error::Config(format!("ell must be positive, got {ell}")));
            }
            from_kappa(kappa_from_cutoff(ell))?
        }
        (_, _, Some(r)) => {
            params.insert("target-ratio".into(), num(r));
            fit_kappa(&p, r)?
        }
        _ => {
            return Err(Error::Config(
                "one of --kappa, --ell, --target-ratio is required".into(),
            ))
        }
    };
    println!("{:<14}{:.7}", "kappa", fit.kappa);
    match fit.ell_over_lp {
        Some(l) => println!("{:<14}{l:.5}", "ell/ell_P"),
        None => println!("{:<14}inf", "ell/ell_P"),
    }
    println!("{:<14}{:.6}", "omega_inf", fit.omega_inf);
    println!("{:<14}{:.6}", "hubble_ratio", fit.hubble_ratio);
    println!("{:<14}{:.3}", "d_match_gly", fit.d_match_gly);

    let path = ctx.out_dir.join("tension.json");
    let json = serde_json::to_string_pretty(&fit).map_err(|e| Error::Format(e.to_string()))?;
    std::fs::write(&path, json + "\n").map_err(|e| io_error(&path, e))?;
    let mut m = RunManifest::new("tension", params, None);
    m.outputs.push(path);
    Ok(m)
}

pub fn vacuum_energy(ctx: &Context, args: VacuumEnergyArgs) -> Result<RunManifest> {
    let (p, mut params) = resolve_cosmology(ctx, &args.cosmology)?;
    let kappa = match (args.kappa, args.ell) {
        (Some(k), _) => k,
        (_, Some(ell)) => kappa_from_cutoff(ell),
        _ if p.kappa > 0.0 => p.kappa,
        _ => kappa_from_cutoff(defaults::CUTOFF_ELL_OVER_LP),
    };
    let history = parse_history(&args.history, &p)?;
    let times = parse_range(&args.t_grid)?;
    params.insert("history".into(), args.history.clone());
    params.insert("kappa".into(), num(kappa));
    params.insert("t-grid".into(), args.t_grid.clone());
    params.insert("eps-inf".into(), num(args.eps_inf));

    let rows = times
        .iter()
        .map(|&t| critical_energy_row(&history, t, kappa, args.eps_inf, 1.0))
        .collect::<Result<Vec<_>>>()?;
    let path = ctx.out_dir.join("vacuum-energy.csv");
    let mut out = create(&path)?;
    let mut write = || -> std::io::Result<()> {
        writeln!(out, "t,eps_vac,eps_lambda,p_vac,p_lambda,conservation_residual")?;
        for r in &rows {
            // Adding 0.0 turns −0 into 0.
            let cols = [r.eps_vac, r.eps_lambda, r.p_vac, r.p_lambda, r.conservation_residual]
                .map(|v| format!("{:e}", v + 0.0));
            writeln!(out, "{},{}", r.t, cols.join(","))?;
        }
        out.flush()
    };
    write().map_err(|e| io_error(&path, e))?;
    let worst = rows.iter().map(|r| r.conservation_residual).fold(0.0, f64::max);
    println!(
        "{} rows, kappa = {kappa:.6e}, max conservation residual {worst:.2e}",
        rows.len()
    );
    let mut m = RunManifest::new("vacuum-energy", params, None);
    m.outputs.push(path);
    Ok(m)
}

pub fn correlate(ctx: &Context, args: CorrelateArgs) -> Result<RunManifest> {
    let (mode, name) = match args.mode {
        CorrelateMode::Vacuum => (GridMode::Vacuum, "vacuum"),
        CorrelateMode::DesitterThermal => (GridMode::DesitterThermal, "desitter-thermal"),
        CorrelateMode::KmsCheck => (GridMode::KmsCheck, "kms-check"),
        CorrelateMode::FdtCheck => (GridMode::FdtCheck { width: args.width }, "fdt-check"),
    };
    let times = parse_range(&args.times)?;
    let radii = parse_range(&args.radii)?;
    let rows = correlation_grid(mode, &times, &radii)?;
    let path = ctx.out_dir.join(format!("correlate-{name}.csv"));
    export_grid_csv(&rows, &path)?;

    let singular = rows.iter().filter(|r| r.value.is_none()).count();
    let max_of = |f: fn(&cosmic_vacuum::correlation::GridRow) -> Option<f64>| {
        rows.iter().filter_map(f).map(f64::abs).fold(0.0, f64::max)
    };
    match args.mode {
        CorrelateMode::KmsCheck => println!("max KMS residual {:.2e}", max_of(|r| r.value)),
        CorrelateMode::DesitterThermal | CorrelateMode::FdtCheck => {
            println!("max relative difference {:.2e}", max_of(|r| r.rel_diff))
        }
        CorrelateMode::Vacuum => {}
    }
    println!("{} cells, {singular} on the light cone", rows.len());

    let mut params = BTreeMap::new();
    params.insert("mode".into(), name.to_string());
    params.insert("times".into(), args.times);
    params.insert("radii".into(), args.radii);
    params.insert("width".into(), num(args.width));
    let mut m = RunManifest::new("correlate", params, None);
    m.outputs.push(path);
    Ok(m)
}

pub fn noise(ctx: &Context, args: NoiseArgs) -> Result<RunManifest> {
    let (p, mut params) = resolve_cosmology(ctx, &args.cosmology)?;
    let history = parse_history(&args.history, &p)?;
    let format: GridFormat = args.format.parse()?;
    let (nt, nx) = args
        .grid
        .split_once(['x', 'X'])
        .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)))
        .filter(|&(a, b)| a >= 2 && b >= 2)
        .ok_or_else(|| Error::Config(format!("grid must be NTxNX with both at least 2, got {:?}", args.grid)))?;
    let t_min = match args.t_min {
        Some(t) => t,
        None => {
            let lo = history.domain().0;
            if lo.is_finite() {
                lo
            } else {
                0.0
            }
        }
    };
    let t_max = match args.t_max {
        Some(t) => t,
        None => history.time_at(1.0)?,
    };
    if !(t_max > t_min) || !(args.x_max > 0.0) {
        return Err(Error::Config(format!(
            "need t_max > t_min and x_max > 0 (t = [{t_min}, {t_max}], x_max = {})",
            args.x_max
        )));
    }
    let t_range = format!("{t_min}:{t_max}:{nt}");
    let x_range = format!("{}:{}:{nx}", -args.x_max, args.x_max);
    let geometry = match args.geometry {
        GeometryArg::Line => ModeGeometry::Line,
        GeometryArg::Isotropic => ModeGeometry::Isotropic {
            k_cutoff: args.k_cutoff,
        },
    };
    let mut spec = NoiseSpec::new(parse_range(&t_range)?, parse_range(&x_range)?)
        .with_modes(args.modes)
        .with_geometry(geometry);
    if let Some(l) = args.box_length {
        spec = spec.with_box_length(l);
        params.insert("box-length".into(), num(l));
    }
    let grid = synthesize(&history, &spec, args.seed)?;
    let path = ctx.out_dir.join(format!("noise.{}", format.extension()));
    export_grid(&grid, &path, format)?;
    println!("{nt}x{nx} samples, {} modes, seed {}", args.modes, args.seed);

    for (k, v) in [
        ("seed", args.seed.to_string()),
        ("modes", args.modes.to_string()),
        ("grid", format!("{nt}x{nx}")),
        ("format", format.to_string()),
        ("history", args.history.clone()),
        ("t-min", num(t_min)),
        ("t-max", num(t_max)),
        ("x-max", num(args.x_max)),
        (
            "geometry",
            match args.geometry {
                GeometryArg::Line => "line".to_string(),
                GeometryArg::Isotropic => "isotropic".to_string(),
            },
        ),
        ("k-cutoff", num(args.k_cutoff)),
    ] {
        params.insert(k.into(), v);
    }
    let mut m = RunManifest::new("noise", params, Some(args.seed));
    m.outputs.push(path);
    Ok(m)
}
