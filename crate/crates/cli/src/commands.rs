use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use landau_core::hall::{
    auto_grid_hall, drift_report, hall_eigen_residual, hall_state, HallParams,
};
use landau_core::oscillator::{landau_nonsplitting_check, zeeman_split};
use landau_core::overlap::{
    auto_grid_overlap, class_inequality_report, overlap_table, verify_superposition, ClassConfig,
    KSampling, Relation,
};
use landau_core::states::{
    auto_grid_landau1, auto_grid_landau2, auto_grid_packet, auto_grid_symmetric, landau1_state,
    landau2_state, packet_state, symmetric_state,
};
use landau_core::verify::run_suite;
use landau_core::{
    Engine, FdOrder, GridSpec, LandauError, OperatorKind, OperatorSpec, PacketForm, PacketSpec,
    PhysicalParams, WaveField,
};

use crate::args::{
    ExpectArgs, ExpectMode, Family, Form, GridArgs, HallArgs, OutputArgs, OverlapArgs, Physics,
    StateArgs, VerifyArgs, ZeemanArgs,
};
use crate::output::{derived_constants, fmt, grid_json, write_sidecar, Csv};

/// Failure classes, mapped onto exit codes 2 (usage) and 1 (everything else).
#[derive(Debug)]
pub enum CliError {
    Usage { code: String, message: String },
    Failed(String),
}

impl CliError {
    pub fn usage(code: &str, message: impl Into<String>) -> Self {
        CliError::Usage {
            code: code.into(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage { .. } => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage { code, message } => write!(f, "error: {code}: {message}"),
            CliError::Failed(message) => write!(f, "error: failed: {message}"),
        }
    }
}

impl From<LandauError> for CliError {
    fn from(e: LandauError) -> Self {
        match e {
            LandauError::Stagnated { .. }
            | LandauError::Quadrature(_)
            | LandauError::GridMismatch => CliError::Failed(format!("{}: {e}", e.code())),
            _ => CliError::usage(e.code(), e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failed(format!("io: {e}"))
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Failed(format!("{e:#}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Everything a run depends on, echoed into the sidecar.
#[derive(Serialize)]
struct RunConfig<'a, A: Serialize> {
    subcommand: &'a str,
    physics: &'a Physics,
    threads: Option<usize>,
    args: &'a A,
    grid: Option<Value>,
}

pub struct Ctx {
    pub physics: Physics,
    pub threads: Option<usize>,
}

impl Ctx {
    pub fn params(&self) -> CliResult<PhysicalParams> {
        Ok(PhysicalParams::new(
            self.physics.e,
            self.physics.b,
            self.physics.m_e,
        )?)
    }

    fn config<'a, A: Serialize>(
        &'a self,
        sub: &'a str,
        args: &'a A,
        grid: Option<&GridSpec>,
    ) -> RunConfig<'a, A> {
        RunConfig {
            subcommand: sub,
            physics: &self.physics,
            threads: self.threads,
            args,
            grid: grid.map(grid_json),
        }
    }
}

/// `-o -` means stdout; no `-o` means `landau-<sub>.csv`.
fn csv_path(out: &OutputArgs, sub: &str) -> Option<PathBuf> {
    match &out.output {
        Some(p) if p.as_os_str() == "-" => None,
        Some(p) => Some(p.clone()),
        None => Some(PathBuf::from(format!("landau-{sub}.csv"))),
    }
}

fn engine(order: u32) -> CliResult<Engine> {
    Ok(Engine::with_order(FdOrder::from_accuracy(order)?))
}

fn resolve_grid(auto: GridSpec, g: &GridArgs) -> CliResult<GridSpec> {
    if g.nx.is_none() && g.ny.is_none() && g.extent.is_none() {
        return Ok(auto);
    }
    let cx = 0.5 * (auto.x_min + auto.x_max);
    let cy = 0.5 * (auto.y_min + auto.y_max);
    let (hx, hy) = match g.extent {
        Some(e) => (e, e),
        None => (
            0.5 * (auto.x_max - auto.x_min),
            0.5 * (auto.y_max - auto.y_min),
        ),
    };
    let (dnx, dny) = if g.extent.is_some() {
        (512, 512)
    } else {
        (auto.nx, auto.ny)
    };
    let nx = g.nx.unwrap_or(dnx);
    let ny = g.ny.or(g.nx).unwrap_or(dny);
    Ok(GridSpec::new(cx - hx, cx + hx, cy - hy, cy + hy, nx, ny)?)
}

fn require<T: Copy>(v: Option<T>, flag: &str, family: &str) -> CliResult<T> {
    v.ok_or_else(|| {
        CliError::usage(
            "missing-argument",
            format!("{flag} is required for --gauge {family}"),
        )
    })
}

fn packet_spec(sigma: f64, form: Form) -> CliResult<PacketSpec> {
    let form = match form {
        Form::Superposition => PacketForm::Superposition,
        Form::Product => PacketForm::Product,
    };
    Ok(PacketSpec::new(sigma)?.with_form(form))
}

fn build_state(a: &StateArgs, p: &PhysicalParams) -> CliResult<WaveField> {
    // validate the labels before touching the grid
    let psi = match a.gauge {
        Family::Symmetric => {
            let m = require(a.m, "-m", "symmetric")?;
            let grid = resolve_grid(auto_grid_symmetric(a.n, m, p)?, &a.grid)?;
            symmetric_state(a.n, m, p, &grid)?
        }
        Family::Landau1 => {
            let k = require(a.kx, "--kx", "landau1")?;
            let grid = resolve_grid(auto_grid_landau1(a.n, k, 8.0 * p.l_b(), p)?, &a.grid)?;
            landau1_state(a.n, k, p, &grid)?
        }
        Family::Landau2 => {
            let k = require(a.ky, "--ky", "landau2")?;
            let grid = resolve_grid(auto_grid_landau2(a.n, k, 8.0 * p.l_b(), p)?, &a.grid)?;
            landau2_state(a.n, k, p, &grid)?
        }
        Family::Packet => {
            let k = require(a.kx, "--kx", "packet")?;
            let sigma = require(a.sigma, "--sigma", "packet")?;
            let spec = packet_spec(sigma, a.form)?;
            let auto = auto_grid_packet(a.n, p.l_b2() * k, &spec, p, p.l_b() / 16.0)?;
            let grid = resolve_grid(auto, &a.grid)?;
            packet_state(a.n, k, &spec, p, &grid)?
        }
    };
    Ok(psi)
}

fn state_results(psi: &WaveField) -> CliResult<Value> {
    Ok(json!({
        "state": psi.label.describe(),
        "gauge": psi.gauge.describe(),
        "grid_norm": psi.norm_sqr()?,
    }))
}

pub fn density(ctx: &Ctx, a: &StateArgs) -> CliResult<()> {
    let p = ctx.params()?;
    let psi = build_state(a, &p)?;
    let path = csv_path(&a.out, "density");
    let g = psi.grid;
    let mut csv = Csv::create(path.as_deref(), &["x", "y", "density"])?;
    for j in 0..g.ny {
        for i in 0..g.nx {
            csv.row(&[fmt(g.x(i)), fmt(g.y(j)), fmt(psi.at(i, j).norm_sqr())])?;
        }
    }
    csv.finish()?;
    let results = state_results(&psi)?;
    write_sidecar(
        path.as_deref(),
        &ctx.config("density", a, Some(&g)),
        derived_constants(&p),
        results,
    )?;
    Ok(())
}

pub fn current(ctx: &Ctx, a: &StateArgs) -> CliResult<()> {
    let p = ctx.params()?;
    let psi = build_state(a, &p)?;
    let maps = engine(a.order)?.density_current_maps(&psi)?;
    let path = csv_path(&a.out, "current");
    let g = psi.grid;
    let mut csv = Csv::create(path.as_deref(), &["x", "y", "jx", "jy"])?;
    for j in 0..g.ny {
        for i in 0..g.nx {
            let k = g.index(i, j);
            csv.row(&[fmt(g.x(i)), fmt(g.y(j)), fmt(maps.jx[k]), fmt(maps.jy[k])])?;
        }
    }
    csv.finish()?;
    let mut results = state_results(&psi)?;
    results["invalid_band"] = json!(maps.band);
    write_sidecar(
        path.as_deref(),
        &ctx.config("current", a, Some(&g)),
        derived_constants(&p),
        results,
    )?;
    Ok(())
}

const TABLE_KINDS: [OperatorKind; 14] = [
    OperatorKind::PCanX,
    OperatorKind::PCanY,
    OperatorKind::LCanZ,
    OperatorKind::PMechX,
    OperatorKind::PMechY,
    OperatorKind::LMechZ,
    OperatorKind::PConsX,
    OperatorKind::PConsY,
    OperatorKind::LConsZ,
    OperatorKind::XGuiding,
    OperatorKind::YGuiding,
    OperatorKind::Rc2,
    OperatorKind::R2,
    OperatorKind::Hamiltonian,
];

pub fn expect(ctx: &Ctx, a: &ExpectArgs) -> CliResult<()> {
    let p = ctx.params()?;
    let e = engine(a.state.order)?;
    let path = csv_path(&a.state.out, "expect");
    let header = ["operator", "state", "value_re", "value_im", "abs_err"];
    let (grid, results) = match a.mode {
        ExpectMode::Table | ExpectMode::Guiding => {
            let psi = build_state(&a.state, &p)?;
            if psi.is_plane_wave() {
                return Err(LandauError::PlaneWaveExpectation.into());
            }
            let state = psi.label.describe();
            let mut rows = Vec::new();
            if a.mode == ExpectMode::Table {
                for kind in TABLE_KINDS {
                    let r = e.expectation(&OperatorSpec::for_field(kind, &psi), &psi)?;
                    rows.push(vec![
                        r.operator,
                        state.clone(),
                        fmt(r.value.re),
                        fmt(r.value.im),
                        fmt(r.abs_err),
                    ]);
                }
            } else {
                let r = e.guiding_center_report(&psi)?;
                for (name, est) in [("Rc2", r.rc2), ("R2", r.r2), ("Lcan_z", r.lcan)] {
                    rows.push(vec![
                        name.into(),
                        state.clone(),
                        fmt(est.value),
                        fmt(0.0),
                        fmt(est.abs_err),
                    ]);
                }
                rows.push(vec![
                    "johnson_lippmann_residual".into(),
                    state.clone(),
                    fmt(r.johnson_lippmann_residual),
                    fmt(0.0),
                    fmt(0.0),
                ]);
            }
            let mut csv = Csv::create(path.as_deref(), &header)?;
            for r in &rows {
                csv.row(r)?;
            }
            csv.finish()?;
            (Some(psi.grid), state_results(&psi)?)
        }
        ExpectMode::Inequality => {
            let d = ClassConfig::default();
            let cfg = ClassConfig {
                n: a.state.n,
                m: a.state.m.unwrap_or(d.m.min(a.state.n as i32)),
                k_x: a.state.kx.unwrap_or(d.k_x),
                sigma_k: a.state.sigma.unwrap_or(d.sigma_k),
                seed: a.seed,
                ..d
            };
            let report = class_inequality_report(&e, &cfg, &p)?;
            let mut csv = Csv::create(path.as_deref(), &[&header[..], &["flag"]].concat())?;
            for row in &report.rows {
                let flag = report
                    .comparisons
                    .iter()
                    .find(|c| c.operator == row.operator)
                    .map(|c| match c.relation {
                        Relation::Equal => "EQUAL",
                        Relation::Unequal => "UNEQUAL",
                    })
                    .unwrap_or("");
                csv.row(&[
                    row.operator.clone(),
                    row.class.clone(),
                    fmt(row.value),
                    fmt(0.0),
                    fmt(row.abs_err),
                    flag.into(),
                ])?;
            }
            csv.finish()?;
            (
                None,
                json!({ "class_config": cfg, "comparisons": report.comparisons, "max_chi_spread": report.max_chi_spread }),
            )
        }
    };
    write_sidecar(
        path.as_deref(),
        &ctx.config("expect", a, grid.as_ref()),
        derived_constants(&p),
        results,
    )?;
    Ok(())
}

pub fn hall(ctx: &Ctx, a: &HallArgs) -> CliResult<()> {
    let p = ctx.params()?;
    let hp = HallParams::new(p, a.e_field)?;
    let spec = PacketSpec::new(a.sigma)?;
    let grid = auto_grid_hall(a.n, a.kx, &hp, &spec)?;
    let psi = hall_state(a.n, a.kx, &hp, &spec, &grid)?;
    let e = Engine::with_order(FdOrder::Eight);
    let d = drift_report(&e, &psi, &hp)?;
    let residual = hall_eigen_residual(&e, &psi, &hp, a.n)?;
    let path = csv_path(&a.out, "hall");
    let mut csv = Csv::create(path.as_deref(), &["quantity", "value"])?;
    for (name, v) in [
        ("j_x", d.j_x),
        ("j_y", d.j_y),
        ("j_can_x", d.j_can_x),
        ("j_gauge_x", d.j_gauge_x),
        ("v_x", d.v_x),
        ("mean_y", d.mean_y),
        ("cancellation", d.cancellation),
        ("eigen_residual", residual),
    ] {
        csv.row(&[name.into(), fmt(v)])?;
    }
    csv.finish()?;
    let mut derived = derived_constants(&p);
    derived["drift_velocity"] = json!(hp.drift_velocity());
    derived["guiding_center"] = json!(hp.guiding_center(a.kx));
    derived["energy"] = json!(hp.energy(a.n, a.kx));
    write_sidecar(
        path.as_deref(),
        &ctx.config("hall", a, Some(&grid)),
        derived,
        json!(d),
    )?;
    Ok(())
}

pub fn zeeman(ctx: &Ctx, a: &ZeemanArgs) -> CliResult<()> {
    let p = ctx.params()?;
    let path = csv_path(&a.out, "zeeman");
    let results = match a.delta_b {
        None => {
            let z = zeeman_split(a.shell, a.lambda);
            let mut csv = Csv::create(
                path.as_deref(),
                &["level", "eigenvalue", "n_x", "n_y", "coeff_re", "coeff_im"],
            )?;
            for (level, (ev, v)) in z.eigenvalues.iter().zip(&z.eigenvectors).enumerate() {
                for (ny, c) in v.coeffs.iter().enumerate() {
                    csv.row(&[
                        level.to_string(),
                        fmt(*ev),
                        (a.shell - ny).to_string(),
                        ny.to_string(),
                        fmt(c.re),
                        fmt(c.im),
                    ])?;
                }
            }
            csv.finish()?;
            json!({ "eigenvalues": z.eigenvalues })
        }
        Some(db) => {
            let t = landau_nonsplitting_check(a.n, &a.ms, db, &p)?;
            let mut csv = Csv::create(path.as_deref(), &["family", "label", "shift"])?;
            for r in &t.rows {
                csv.row(&[
                    "landau".into(),
                    format!("n={};m={}", a.n, r.m),
                    fmt(r.energy - r.energy_unperturbed),
                ])?;
            }
            for (ev, m) in t.oscillator_n1.iter().zip([1, -1]) {
                csv.row(&["oscillator".into(), format!("n=1;m={m}"), fmt(*ev)])?;
            }
            csv.finish()?;
            json!(t)
        }
    };
    write_sidecar(
        path.as_deref(),
        &ctx.config("zeeman", a, None),
        derived_constants(&p),
        results,
    )?;
    Ok(())
}

pub fn overlap(ctx: &Ctx, a: &OverlapArgs) -> CliResult<()> {
    let p = ctx.params()?;
    let sampling = KSampling::new(a.k_max, a.nk)?;
    let grid = resolve_grid(auto_grid_overlap(a.n, a.m, &p)?, &a.grid)?;
    let level = a.level.unwrap_or(a.n);
    let exec = Engine::default().exec;
    let t = overlap_table(exec, a.n, a.m, level, &p, &grid, &sampling)?;
    let path = csv_path(&a.out, "overlap");
    let mut csv = Csv::create(path.as_deref(), &["k", "u_re", "u_im", "abs_u"])?;
    for (k, u) in t.ks.iter().zip(&t.values) {
        csv.row(&[fmt(*k), fmt(u.re), fmt(u.im), fmt(u.norm())])?;
    }
    csv.finish()?;
    let mut results = json!({ "parseval": t.parseval, "level": level });
    if level == a.n {
        let c = verify_superposition(exec, a.n, a.m, &p, &grid, &sampling)?;
        results["superposition_residual"] = json!(c.residual);
    }
    write_sidecar(
        path.as_deref(),
        &ctx.config("overlap", a, Some(&grid)),
        derived_constants(&p),
        results,
    )?;
    Ok(())
}

pub fn verify(ctx: &Ctx, a: &VerifyArgs) -> CliResult<bool> {
    let reports = run_suite(a.fast);
    let pass = reports.iter().all(|r| r.pass);
    for r in &reports {
        eprintln!("{}", r.summary());
    }
    let checks: Vec<Value> = reports
        .iter()
        .flat_map(|r| {
            r.checks.iter().map(move |c| {
                json!({
                    "criterion": r.id,
                    "check_id": c.check_id,
                    "target": c.target,
                    "measured": c.measured,
                    "tolerance": c.tolerance,
                    "kind": c.kind,
                    "pass": c.pass,
                })
            })
        })
        .collect();
    let criteria: Vec<Value> = reports
        .iter()
        .map(|r| json!({ "id": r.id, "title": r.title, "pass": r.pass, "seconds": r.seconds, "error": r.error }))
        .collect();
    let doc = json!({
        "config": ctx.config("verify", a, None),
        "pass": pass,
        "criteria": criteria,
        "checks": checks,
    });
    let text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Failed(e.to_string()))?;
    println!("{text}");
    if let Some(out) = &a.output {
        write_text(out, &text)?;
    }
    Ok(pass)
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, format!("{text}\n"))?;
    Ok(())
}
