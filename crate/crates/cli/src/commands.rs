//! One function per subcommand. Each fills a [`Summary`]; artifacts go to
//! the output directory when one is given.

use std::path::PathBuf;

use hexwave::bifurcation::{cubic_closed_form, pipeline_cubic};
use hexwave::lattice::{enumerate_resonance_set, operator_bound, DEFAULT_EPS_RES};
use hexwave::linop::kernel_basis;
use hexwave::presets::FigurePreset;
use hexwave::spectral::Coeff;
use hexwave::verify::{kernel_certificate_at, log_spaced, nonlinear_residual, order_fit_with};
use hexwave::{
    cubic_coefficients, second_order_coefficients, solve_amplitudes_with, synthesize, Amplitudes,
    BifurcationCoefficients, BranchPoint, CubicCoefficients, L3Convention, Order,
};
use serde_json::{json, Map, Value};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{ensure_dir, export_grid, to_json, write_file};

#[derive(Debug, Default)]
pub struct Summary {
    pub config: Value,
    pub resonance_set: Value,
    pub coefficients: Value,
    pub amplitudes: Value,
    pub residual: Value,
    pub warnings: Vec<String>,
    pub extra: Map<String, Value>,
    pub error: Option<Value>,
}

impl Summary {
    pub fn to_value(&self) -> Value {
        let mut v = json!({
            "config": self.config,
            "resonance_set": self.resonance_set,
            "coefficients": self.coefficients,
            "amplitudes": self.amplitudes,
            "residual": self.residual,
            "warnings": self.warnings,
        });
        let obj = v.as_object_mut().expect("summary is an object");
        for (k, x) in &self.extra {
            obj.insert(k.clone(), x.clone());
        }
        if let Some(e) = &self.error {
            obj.insert("error".into(), e.clone());
        }
        v
    }

    pub fn to_json(&self) -> String {
        to_json(&self.to_value())
    }
}

pub struct Context {
    pub cfg: RunConfig,
    pub out: Option<PathBuf>,
}

impl Context {
    fn artifact(&self, name: &str) -> Result<Option<PathBuf>, CliError> {
        match &self.out {
            Some(dir) => {
                ensure_dir(dir)?;
                Ok(Some(dir.join(name)))
            }
            None => Ok(None),
        }
    }

    fn config_value(&self) -> Value {
        let c = &self.cfg;
        json!({
            "omega": c.omega, "k1": c.k1, "k2": c.k2, "tau1": c.tau1, "tau2": c.tau2,
            "beta0": c.beta0, "q": c.q, "mu": c.mu, "C": c.c, "sigma": c.sigma,
            "order": c.order, "normalization": c.normalization.name(),
            "grid": {
                "x1": [c.grid.x1_min, c.grid.x1_max], "x2": [c.grid.x2_min, c.grid.x2_max],
                "nx1": c.grid.nx1, "nx2": c.grid.nx2, "t": c.grid.t,
            },
        })
    }
}

fn complex_pair(z: num_complex::Complex64) -> Value {
    json!([z.re, z.im])
}

fn coeff_value(c: &Coeff) -> Value {
    json!({"eta": complex_pair(c[0]), "v1": complex_pair(c[1]), "v2": complex_pair(c[2])})
}

fn coefficients_value(co: &BifurcationCoefficients, ls: &CubicCoefficients) -> Value {
    json!({
        "a": co.a(), "b": co.b(), "d": co.d(), "l": ls.l(),
        "l_pipeline": ls.pipeline, "variant": ls.variant.name(),
    })
}

fn amplitudes_value(a: &Amplitudes) -> Value {
    json!({
        "A1": a.a1(), "A2": a.a2(), "A1_sq": a.a1_sq, "A2_sq": a.a2_sq,
        "mu": a.mu, "C": a.c, "normalization": a.normalization.name(),
    })
}

fn resonance(ctx: &Context, s: &mut Summary) -> Result<(), CliError> {
    let lattice = ctx.cfg.lattice();
    let set = enumerate_resonance_set(ctx.cfg.beta0, &lattice, DEFAULT_EPS_RES);
    s.resonance_set = json!(set.iter().map(|m| m.to_string()).collect::<Vec<_>>());
    let m = operator_bound(ctx.cfg.beta0, &lattice, DEFAULT_EPS_RES)?;
    s.extra.insert("operator_bound".into(), json!(m));
    Ok(())
}

fn kernel(ctx: &Context, s: &mut Summary) -> Result<(), CliError> {
    let lattice = ctx.cfg.lattice();
    let basis = kernel_basis(ctx.cfg.beta0, &lattice, DEFAULT_EPS_RES)?;
    s.resonance_set = json!(basis.resonant.iter().map(|m| m.to_string()).collect::<Vec<_>>());
    let elements: Vec<Value> = basis
        .xis
        .iter()
        .map(|(idx, xi)| json!({"index": idx.to_string(), "coefficients": coeff_value(&xi.get(idx))}))
        .collect();
    let cert = kernel_certificate_at(&lattice, ctx.cfg.beta0, ctx.cfg.beta0)?;
    s.extra.insert("kernel".into(), json!(elements));
    s.extra.insert(
        "kernel_certificate".into(),
        json!({"max_residual": cert.max_residual, "elements": cert.elements}),
    );
    Ok(())
}

struct Reduced {
    bp: BranchPoint,
    ls: CubicCoefficients,
}

fn reduce(ctx: &Context, s: &mut Summary) -> Result<Reduced, CliError> {
    let bp = BranchPoint::validate(ctx.cfg.beta0, ctx.cfg.q, &ctx.cfg.lattice())?;
    s.resonance_set = json!(bp.resonant.iter().map(|m| m.to_string()).collect::<Vec<_>>());
    let co = second_order_coefficients(&bp)?;
    let ls = cubic_coefficients(&bp, &co)?;
    s.coefficients = coefficients_value(&co, &ls);
    Ok(Reduced { bp, ls })
}

fn coeffs(ctx: &Context, s: &mut Summary) -> Result<(), CliError> {
    reduce(ctx, s).map(|_| ())
}

fn solve(ctx: &Context, s: &mut Summary) -> Result<(Reduced, Amplitudes), CliError> {
    let r = reduce(ctx, s)?;
    let amps = solve_amplitudes_with(&r.bp, &r.ls, ctx.cfg.mu, ctx.cfg.c, ctx.cfg.normalization)?;
    s.amplitudes = amplitudes_value(&amps);
    Ok((r, amps))
}

fn amplitudes(ctx: &Context, s: &mut Summary) -> Result<(), CliError> {
    solve(ctx, s).map(|_| ())
}

fn residual_norms(bp: &BranchPoint, amps: &Amplitudes, sigma: [f64; 2]) -> Value {
    let mut out = Map::new();
    for order in [Order::First, Order::Second] {
        let r = nonlinear_residual(&synthesize(bp, amps, sigma, order));
        out.insert(
            format!("order{}", order.as_int()),
            json!({"eta": r.eta_equation_norm, "v": r.v_equation_norm, "total": r.total}),
        );
    }
    Value::Object(out)
}

fn write_grid(ctx: &Context, bp: &BranchPoint, amps: &Amplitudes, s: &mut Summary) -> Result<(), CliError> {
    let order = Order::from_int(ctx.cfg.order)?;
    let sol = synthesize(bp, amps, ctx.cfg.sigma, order);
    match ctx.artifact("grid.csv")? {
        Some(path) => export_grid(&path, &sol.field, &bp.cfg, &ctx.cfg.grid),
        None => {
            s.warnings.push("no --out directory given; grid not written".into());
            Ok(())
        }
    }
}

fn synthesize_cmd(ctx: &Context, s: &mut Summary) -> Result<(), CliError> {
    let (r, amps) = solve(ctx, s)?;
    s.residual = json!({"norms": residual_norms(&r.bp, &amps, ctx.cfg.sigma)});
    write_grid(ctx, &r.bp, &amps, s)
}

fn scan_mus(mu: f64) -> Vec<f64> {
    let sign = if mu > 0.0 { 1.0 } else { -1.0 };
    log_spaced(sign, -4.0, -2.0, 5)
}

fn slopes(ctx: &Context, r: &Reduced) -> Result<(Value, Vec<[f64; 3]>), CliError> {
    let mus = scan_mus(ctx.cfg.mu);
    let first = order_fit_with(&r.bp, ctx.cfg.c, Order::First, &mus, ctx.cfg.normalization)?;
    let second = order_fit_with(&r.bp, ctx.cfg.c, Order::Second, &mus, ctx.cfg.normalization)?;
    let rows = mus
        .iter()
        .zip(first.residuals.iter().zip(&second.residuals))
        .map(|(m, (a, b))| [*m, *a, *b])
        .collect();
    let slope = json!({
        "order1": first.slope, "order2": second.slope,
        "r_squared": [first.r_squared, second.r_squared],
    });
    Ok((slope, rows))
}

fn residual_scan(ctx: &Context, s: &mut Summary) -> Result<(), CliError> {
    let r = reduce(ctx, s)?;
    let (slope, rows) = slopes(ctx, &r)?;
    let samples: Vec<Value> = rows
        .iter()
        .map(|[m, a, b]| json!({"mu": m, "order1": a, "order2": b}))
        .collect();
    s.residual = json!({"norms": samples, "slope": slope});
    if let Some(path) = ctx.artifact("residual.csv")? {
        let mut csv = String::from("mu,residual_order1,residual_order2\n");
        for [m, a, b] in rows {
            csv.push_str(&format!("{m:.16e},{a:.16e},{b:.16e}\n"));
        }
        write_file(&path, &csv)?;
    }
    Ok(())
}

fn compare_reference(p: &FigurePreset, amps: &Amplitudes, s: &mut Summary) {
    for (name, got, want) in [("|A1|", amps.a1(), p.reference[0]), ("|A2|", amps.a2(), p.reference[1])] {
        if (got - want).abs() > 1e-4 {
            s.warnings.push(format!(
                "{name} = {got:.6} differs from the reference value {want} by {:.2e}",
                (got - want).abs()
            ));
        }
    }
}

/// Closed-form amplitudes for a configuration that fails the resonance
/// hypothesis. Diagnostic only.
fn unchecked_amplitudes(p: &FigurePreset, ctx: &Context, s: &mut Summary) -> Result<(), CliError> {
    let bp = BranchPoint::unchecked(p.beta0, p.q, &p.cfg);
    let co = second_order_coefficients(&bp)?;
    let l = cubic_closed_form(&bp, &co, L3Convention::Quarter);
    let ls = CubicCoefficients {
        l1: l[0],
        l2: l[1],
        l3: l[2],
        variant: L3Convention::Quarter,
        pipeline: pipeline_cubic(&bp),
    };
    s.coefficients = coefficients_value(&co, &ls);
    let amps = solve_amplitudes_with(&bp, &ls, ctx.cfg.mu, ctx.cfg.c, ctx.cfg.normalization)?;
    s.amplitudes = amplitudes_value(&amps);
    compare_reference(p, &amps, s);
    s.warnings
        .push("closed forms evaluated outside the validated domain; no grid written".into());
    Ok(())
}

fn figures(
    n: u8,
    preset: &hexwave::Result<FigurePreset>,
    ctx: &Context,
    s: &mut Summary,
) -> Result<(), CliError> {
    s.extra.insert("figure".into(), json!(n));
    // A preset that cannot be built is a failed hypothesis, not bad usage.
    let p = preset.as_ref().map_err(|e| match e {
        hexwave::Error::InvalidConfig(msg) => {
            CliError::Core(hexwave::Error::InconsistentConfig(msg.clone()))
        }
        other => CliError::Core(other.clone()),
    })?;
    s.warnings.extend(p.notes.iter().cloned());
    s.extra.insert("reference_amplitudes".into(), json!(p.reference));

    if let Err(e) = BranchPoint::validate(p.beta0, p.q, &p.cfg) {
        let hypothesis = match e {
            hexwave::Error::InvalidConfig(msg) => hexwave::Error::InconsistentConfig(msg),
            other => other,
        };
        unchecked_amplitudes(p, ctx, s)?;
        return Err(CliError::Core(hypothesis));
    }

    let (r, amps) = solve(ctx, s)?;
    compare_reference(p, &amps, s);
    let (slope, _) = slopes(ctx, &r)?;
    s.residual = json!({"norms": residual_norms(&r.bp, &amps, ctx.cfg.sigma), "slope": slope});
    write_grid(ctx, &r.bp, &amps, s)
}

pub enum Command {
    Resonance,
    Kernel,
    Coeffs,
    Amplitudes,
    Synthesize,
    ResidualScan,
    Figures {
        n: u8,
        preset: hexwave::Result<FigurePreset>,
    },
}

/// Runs one subcommand and returns the filled summary alongside the
/// outcome. The summary is meaningful even on error.
pub fn execute(cmd: &Command, ctx: Context) -> (Summary, Result<(), CliError>) {
    let mut s = Summary {
        config: ctx.config_value(),
        ..Default::default()
    };
    let result = match cmd {
        Command::Resonance => resonance(&ctx, &mut s),
        Command::Kernel => kernel(&ctx, &mut s),
        Command::Coeffs => coeffs(&ctx, &mut s),
        Command::Amplitudes => amplitudes(&ctx, &mut s),
        Command::Synthesize => synthesize_cmd(&ctx, &mut s),
        Command::ResidualScan => residual_scan(&ctx, &mut s),
        Command::Figures { n, preset } => figures(*n, preset, &ctx, &mut s),
    };
    if let Err(e) = &result {
        s.error = Some(json!({"kind": e.kind(), "message": e.to_string()}));
    }
    let written = write_summary(&ctx, &s);
    (s, result.and(written))
}

fn write_summary(ctx: &Context, s: &Summary) -> Result<(), CliError> {
    if let Some(dir) = &ctx.out {
        ensure_dir(dir)?;
        write_file(&dir.join("summary.json"), &s.to_json())?;
        write_file(&dir.join("config.txt"), &ctx.cfg.to_text())?;
    }
    Ok(())
}
