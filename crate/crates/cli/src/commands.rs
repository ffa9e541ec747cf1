use std::fmt::Write as _;

use serde_json::{json, Value};
use shapeinv::catalog::{family_info, FamilyId, ParamSet, SuperpotentialSpec};
use shapeinv::ladder::{apply_aplus, ground_state, hamiltonian, overlap, GROUND_STATE_TOL};
use shapeinv::models::{
    check_reduction_with, default_grid, model_domain, model_registry, model_spectrum_check, reduction_grid, ModelId, ModelParams,
    ModelSystem, PartnerSign,
};
use shapeinv::spectral::{assemble_within, eigen_lowest, GridFunction, GridSpec, SolverOptions, DEFAULT_MAX_UNKNOWNS};
use shapeinv::verifier::{verify, SampleGrid};
use shapeinv::Error;

use crate::config::{Command, RunConfig, FAMILY_PARAMS, MODEL_PARAMS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Tolerance,
    Numerical,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Library(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Library(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Library(e) => e.to_string(),
        }
    }
}

pub struct Outcome {
    pub status: Status,
    pub document: Value,
    pub table: String,
    pub csv: String,
    /// Extra CSV file requested through `states`.
    pub states: Option<(String, String)>,
}

type Run = Result<Outcome, Failure>;

pub fn run(cfg: &mut RunConfig) -> Run {
    match cfg.command {
        Command::List => list(cfg),
        Command::Verify => verify_cmd(cfg),
        Command::Spectrum => spectrum(cfg),
        Command::Ladder => ladder(cfg),
    }
}

fn finish(cfg: &RunConfig, status: Status, mut body: Value, table: String, csv: String, states: Option<(String, String)>) -> Outcome {
    body["config"] = cfg.to_json();
    body["status"] = json!(match status {
        Status::Pass => "pass",
        Status::Tolerance => "tolerance_failure",
        Status::Numerical => "numerical_failure",
    });
    Outcome { status, document: body, table, csv, states }
}

fn list(cfg: &mut RunConfig) -> Run {
    let dim = cfg.count("dim");
    let keep = |d: Option<usize>| dim.is_none() || d == dim;
    let families: Vec<_> = FamilyId::PRINTED.into_iter().filter(|f| keep(f.dim())).map(family_info).collect();
    let models: Vec<_> = model_registry().into_iter().filter(|m| keep(Some(m.dim))).collect();

    let mut table = format!("{:<13} {:>3}  {:<36} {:<34} {}\n", "id", "dim", "parameters", "domain", "description");
    let mut csv = String::from("kind,id,dim,parameters,domain,description\n");
    for f in &families {
        let d = f.dim.map(|d| d.to_string()).unwrap_or_else(|| "n".into());
        let _ = writeln!(table, "{:<13} {:>3}  {:<36} {:<34} {}", f.id.name(), d, f.params.join(" "), f.domain, f.description);
        let _ = writeln!(csv, "family,{},{},{},{},{}", f.id.name(), d, f.params.join(" "), quote(f.domain), quote(f.description));
    }
    for m in &models {
        let domain = format!("{:?}", model_domain(m.id, &m.defaults));
        let _ = writeln!(table, "{:<13} {:>3}  {:<36} {:<34} {}", m.id.name(), m.dim, m.params.join(" "), m.family.name(), m.description);
        let _ = writeln!(csv, "model,{},{},{},{},{}", m.id.name(), m.dim, m.params.join(" "), quote(&domain), quote(m.description));
    }
    let _ = writeln!(table, "{} families, {} models", families.len(), models.len());
    let body = json!({ "families": families, "models": models, "counts": { "families": families.len(), "models": models.len() } });
    Ok(finish(cfg, Status::Pass, body, table, csv, None))
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn model_params(cfg: &mut RunConfig, id: ModelId) -> Result<ModelParams, Failure> {
    let mut p = ModelParams::defaults(id);
    for name in MODEL_PARAMS {
        if let Some(v) = cfg.real(name) {
            p.set(name, v)?;
        }
    }
    for name in id.params_used() {
        let v = serde_json::to_value(p).expect("plain struct")[*name].clone();
        cfg.resolve(name, v);
    }
    Ok(p)
}

fn model_id(cfg: &RunConfig) -> Result<ModelId, Failure> {
    let name = cfg.text("model").ok_or_else(|| Failure::Usage(format!("{} needs a model (--model)", cfg.command.name())))?;
    Ok(name.parse::<ModelId>()?)
}

fn verify_cmd(cfg: &mut RunConfig) -> Run {
    match (cfg.text("family"), cfg.text("model")) {
        (Some(_), Some(_)) => Err(Failure::Usage("verify takes either --family or --model, not both".into())),
        (Some(f), None) => {
            let family: FamilyId = f.parse()?;
            verify_family(cfg, family)
        }
        (None, Some(_)) => verify_model(cfg),
        (None, None) => Err(Failure::Usage("verify needs --family or --model".into())),
    }
}

fn verify_family(cfg: &mut RunConfig, family: FamilyId) -> Run {
    let mut params = ParamSet::default();
    for name in FAMILY_PARAMS {
        if let Some(v) = cfg.real(name) {
            params.set(name, v)?;
        }
    }
    for name in ["m", "j"] {
        if cfg.has(name) {
            return Err(Failure::Usage(format!("'{name}' is a model label; families take kappa")));
        }
    }
    cfg.resolve("kappa", json!(1.0));
    cfg.resolve("samples", json!(50));
    cfg.resolve("tol", json!(1e-9));
    let kappa = cfg.real("kappa").unwrap();
    let samples = cfg.count("samples").unwrap();
    let tol = cfg.real("tol").unwrap();
    let spec = SuperpotentialSpec::new(family, params.clone())?;
    let grid = SampleGrid::for_spec(&spec, samples)?;
    let rep = verify(&spec, kappa, &grid)?;
    let status = if rep.passes(tol) { Status::Pass } else { Status::Tolerance };

    let mut table = format!("family {family} ({}), kappa = {kappa}\n", family.description());
    let _ = writeln!(table, "grid: {} points on [{}, {}]", rep.samples, rep.grid.lo, rep.grid.hi);
    let mut csv = String::from("kind,name,value\n");
    for (k, v) in &rep.residuals {
        let _ = writeln!(table, "  residual {k:<20} {v:.3e}");
        let _ = writeln!(csv, "residual,{k},{v:?}");
    }
    for (k, v) in &rep.fitted {
        let _ = writeln!(table, "  fitted   {k:<20} {v}");
        let _ = writeln!(csv, "fitted,{k},{v:?}");
    }
    let _ = writeln!(table, "{} (tolerance {tol:e})", if status == Status::Pass { "PASS" } else { "FAIL" });
    let body = json!({ "family": family_info(family), "params": params, "report": rep });
    Ok(finish(cfg, status, body, table, csv, None))
}

fn verify_model(cfg: &mut RunConfig) -> Run {
    let id = model_id(cfg)?;
    let p = model_params(cfg, id)?;
    cfg.resolve("samples", json!(200));
    cfg.resolve("tol", json!(1e-10));
    let samples = cfg.count("samples").unwrap();
    let tol = cfg.real("tol").unwrap();
    let grid = reduction_grid(id, &p, samples)?;
    let minus = check_reduction_with(id, &p, &grid, PartnerSign::Minus)?;
    let plus = check_reduction_with(id, &p, &grid, PartnerSign::Plus)?;
    let status = if minus.max_deviation < tol { Status::Pass } else { Status::Tolerance };
    let mut table = format!("model {id}: {}\n  from {}\n", id.description(), id.substitution());
    let _ = writeln!(table, "  W^2 - W' deviation {:.3e} (constant offset {})", minus.max_deviation, minus.constant_offset);
    let _ = writeln!(table, "  W^2 + W' deviation {:.3e}", plus.max_deviation);
    let _ = writeln!(table, "{} (tolerance {tol:e})", if status == Status::Pass { "PASS" } else { "FAIL" });
    let csv = format!(
        "sign,max_deviation,constant_offset,samples\nminus,{:?},{:?},{}\nplus,{:?},{:?},{}\n",
        minus.max_deviation, minus.constant_offset, minus.samples, plus.max_deviation, plus.constant_offset, plus.samples
    );
    let body = json!({ "model": id, "params": p, "reduction": minus, "reduction_plus": plus });
    Ok(finish(cfg, status, body, table, csv, None))
}

/// Default grid for the model, with any of xmin/xmax/eps/length/n_points overriding it.
fn resolve_grid(cfg: &mut RunConfig, id: ModelId, p: &ModelParams, levels: usize) -> Result<GridSpec, Failure> {
    cfg.resolve("n_points", json!(2000));
    let n = cfg.count("n_points").unwrap();
    let def = default_grid(id, p, levels, n)?;
    let dom = model_domain(id, p);
    let (mut lo, mut hi) = (def.xmin, def.xmax);
    if id.is_radial() {
        if let Some(l) = cfg.real("length") {
            hi = dom.lo + l;
            lo = dom.lo + 1e-3 * l;
        }
        if let Some(e) = cfg.real("eps") {
            lo = dom.lo + e;
        }
    } else if cfg.has("eps") || cfg.has("length") {
        return Err(Failure::Usage(format!("eps and length apply to radial models; use xmin/xmax for {id}")));
    }
    lo = cfg.real("xmin").unwrap_or(lo);
    hi = cfg.real("xmax").unwrap_or(hi);
    let grid = GridSpec::new(lo, hi, n, id.dim())?;
    cfg.set("xmin", json!(lo));
    cfg.set("xmax", json!(hi));
    if id.is_radial() {
        cfg.set("eps", json!(lo - dom.lo));
        cfg.set("length", json!(hi - dom.lo));
    }
    cfg.resolve("max_unknowns", json!(DEFAULT_MAX_UNKNOWNS));
    Ok(grid)
}

fn states_csv(grid: &GridSpec, names: &[String], funcs: &[&GridFunction]) -> String {
    let mut out = String::from("x");
    for name in names {
        for c in 1..=grid.channels {
            let _ = write!(out, ",{name}_re_{c},{name}_im_{c}");
        }
    }
    out.push('\n');
    for i in 0..grid.n_points {
        let _ = write!(out, "{:?}", grid.x(i));
        for f in funcs {
            for z in f.at(i) {
                let _ = write!(out, ",{:?},{:?}", z.re, z.im);
            }
        }
        out.push('\n');
    }
    out
}

fn spectrum(cfg: &mut RunConfig) -> Run {
    let id = model_id(cfg)?;
    let p = model_params(cfg, id)?;
    cfg.resolve("levels", json!(3));
    cfg.resolve("tol", json!(2e-3));
    let levels = cfg.count("levels").unwrap();
    if levels == 0 {
        return Err(Failure::Usage("levels must be at least 1".into()));
    }
    let tol = cfg.real("tol").unwrap();
    let grid = resolve_grid(cfg, id, &p, levels)?;
    let opts = SolverOptions { max_unknowns: cfg.count("max_unknowns").unwrap() };
    let rep = model_spectrum_check(id, &p, levels, &grid, &opts)?;
    let dev = rep.max_deviation().unwrap_or(0.0);
    let status = if dev <= tol { Status::Pass } else { Status::Tolerance };

    let mut table = format!("model {id}: {}\n", id.description());
    let _ = writeln!(table, "grids: {} and {} points on [{}, {}]", rep.grids[0].n_points, rep.grids[1].n_points, grid.xmin, grid.xmax);
    let _ = writeln!(table, "{:>5} {:>22} {:>22} {:>22} {:>12}", "level", "eigenvalue", "gap", "analytic gap", "deviation");
    for i in 0..rep.eigenvalues.len() {
        let a = rep.analytic_gaps.as_ref().and_then(|g| g.get(i)).map(|v| format!("{v:.12}")).unwrap_or_else(|| "-".into());
        let d = rep.deviations.as_ref().and_then(|g| g.get(i)).map(|v| format!("{v:.3e}")).unwrap_or_else(|| "-".into());
        let _ = writeln!(table, "{i:>5} {:>22.12} {:>22.12} {a:>22} {d:>12}", rep.eigenvalues[i], rep.gaps[i]);
    }
    if let (Some(t), Some(b)) = (rep.threshold, rep.bound_levels) {
        let _ = writeln!(table, "continuum threshold {t}: {b} bound levels");
    }
    for n in &rep.notes {
        let _ = writeln!(table, "note: {n}");
    }
    let _ = writeln!(table, "{} (max deviation {dev:.3e}, tolerance {tol:e})", if status == Status::Pass { "PASS" } else { "FAIL" });

    let states = match cfg.text("states") {
        Some(path) => {
            let fine = rep.grids[rep.grids.len() - 1];
            let h = assemble_within(|x| shapeinv::models::model_potential(id, &p, x), &fine, opts.max_unknowns)?;
            let pairs = eigen_lowest(&h, levels)?;
            let names: Vec<String> = (0..levels).map(|k| format!("psi{k}")).collect();
            let funcs: Vec<&GridFunction> = pairs.vectors.iter().collect();
            Some((path.to_string(), states_csv(&fine, &names, &funcs)))
        }
        None => None,
    };
    let body = json!({ "model": id, "params": p, "report": rep });
    Ok(finish(cfg, status, body, table, rep.to_csv(), states))
}

fn ladder(cfg: &mut RunConfig) -> Run {
    let id = model_id(cfg)?;
    let p = model_params(cfg, id)?;
    cfg.resolve("n", json!(1));
    cfg.resolve("tol", json!(0.999));
    let n = cfg.count("n").unwrap();
    let tol = cfg.real("tol").unwrap();
    let grid = resolve_grid(cfg, id, &p, n + 1)?;
    if grid.unknowns() > cfg.count("max_unknowns").unwrap() {
        return Err(Error::MemoryBudget { requested: grid.unknowns(), budget: cfg.count("max_unknowns").unwrap() }.into());
    }
    let sys = ModelSystem::new(id, &p)?;
    let k = sys.kappa();

    let mut rungs = Vec::new();
    let mut grounds = Vec::new();
    let mut table = format!("model {id}, ladder from kappa = {k}, n = {n}\n");
    let _ = writeln!(table, "{:>4} {:>10} {:>24} {:>14}", "rung", "kappa", "factorization energy", "annihilation");
    let mut csv = String::from("rung,kappa,factorization_energy,annihilation\n");
    let mut broken = None;
    for j in 0..=n {
        let kj = k + j as f64;
        let g = ground_state(&sys, kj, &grid)?;
        let _ = writeln!(table, "{j:>4} {kj:>10} {:>24.12} {:>14.3e}", g.energy, g.annihilation);
        let _ = writeln!(csv, "{j},{kj:?},{:?},{:?}", g.energy, g.annihilation);
        rungs.push(json!({ "rung": j, "kappa": kj, "factorization_energy": g.energy, "annihilation": g.annihilation }));
        if !(g.annihilation < GROUND_STATE_TOL) && broken.is_none() {
            broken = Some(Error::MissingGroundState { kappa: kj, residual: g.annihilation });
        }
        grounds.push(g);
    }
    if let Some(e) = broken {
        let _ = writeln!(table, "FAIL: {e}");
        let body = json!({ "model": id, "params": p, "rungs": rungs, "error": e.to_string() });
        return Ok(finish(cfg, Status::Numerical, body, table, csv, None));
    }

    if n == 0 {
        let _ = writeln!(table, "ground state only");
        let states = cfg.text("states").map(|path| (path.to_string(), states_csv(&grid, &["ground".to_string()], &[&grounds[0].state])));
        let body = json!({ "model": id, "params": p, "rungs": rungs, "energy": grounds[0].energy });
        return Ok(finish(cfg, Status::Pass, body, table, csv, states));
    }

    let mut psi = grounds[n].state.clone();
    for j in (0..n).rev() {
        psi = apply_aplus(&sys, k + j as f64, &psi)?.normalized()?;
    }
    let h = hamiltonian(&sys, k, &grid)?;
    let pairs = eigen_lowest(&h, n + 2)?;
    let energy = h.expectation(&psi)?;
    let target = overlap(&psi, &pairs.vectors[n])?;
    let nearest = (0..pairs.values.len())
        .min_by(|&a, &b| (pairs.values[a] - energy).abs().total_cmp(&(pairs.values[b] - energy).abs()))
        .expect("at least one level");
    let status = if target > tol { Status::Pass } else { Status::Tolerance };
    let _ = writeln!(table, "ladder state energy {energy:.12}, eigenvalue E_{n} = {:.12}", pairs.values[n]);
    let _ = writeln!(table, "overlap with eigenvector {n}: {target:.9}");
    if nearest != n {
        let _ = writeln!(table, "nearest eigenvalue is level {nearest} ({:.12})", pairs.values[nearest]);
    }
    let _ = writeln!(table, "{} (overlap threshold {tol})", if status == Status::Pass { "PASS" } else { "FAIL" });

    let states = cfg.text("states").map(|path| {
        let names = vec!["ladder".to_string(), format!("eigen{n}")];
        (path.to_string(), states_csv(&grid, &names, &[&psi, &pairs.vectors[n]]))
    });
    let body = json!({
        "model": id,
        "params": p,
        "rungs": rungs,
        "energy": energy,
        "eigenvalues": pairs.values,
        "overlap": target,
        "nearest_level": nearest,
        "energy_deviation": (energy - pairs.values[n]).abs(),
    });
    Ok(finish(cfg, status, body, table, csv, states))
}
