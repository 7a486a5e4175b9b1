use std::fs;
use std::io::Write;
use std::path::Path;

use freestein::cltlab::{clt_rate_table, write_csv, CltExperiment};
use freestein::ncalg::json::{KernelMatrixJson, PolyJson, TensorJson, TupleJson};
use freestein::ncalg::{
    cyclic_gradient, delta, explicit_kernel, jacobian, partial, NcPoly, PolyTuple,
};
use freestein::poincare::{
    biane_gap_check, default_norm_order, poincare_lower_bound, voiculescu_bound, BianeReport,
    PoincareReport,
};
use freestein::states::{
    mc_moment_table, validate_state, CumulantSpec, CumulantState, MatrixEnsembleConfig,
    MomentFunctional, MomentTable,
};
use freestein::stein::{discrepancy_bounds, SteinProblem, SteinReport};
use freestein::Tolerances;
use serde::Serialize;

use crate::args::{
    CltArgs, DeriveArgs, McArgs, OutArgs, PoincareArgs, Preset, StateOpts, SteinArgs, TolArgs, What,
};
use crate::error::CliError;

type CliResult<T> = Result<T, CliError>;

const VALIDATION_ORDER_CAP: usize = 8;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::from(e).in_input(&path.display().to_string()))
}

fn with_source<T>(r: freestein::Result<T>, path: &Path) -> CliResult<T> {
    r.map_err(|e| CliError::from(e).in_input(&path.display().to_string()))
}

fn emit(out: &OutArgs, body: &[u8]) -> CliResult<()> {
    match &out.out {
        Some(p) => {
            fs::write(p, body).map_err(|e| CliError::from(e).in_input(&p.display().to_string()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(out: &OutArgs, value: &T) -> CliResult<()> {
    let mut s = serde_json::to_string_pretty(value).map_err(freestein::Error::from)?;
    s.push('\n');
    emit(out, s.as_bytes())
}

fn tolerances(t: &TolArgs) -> Tolerances {
    let mut tol = Tolerances::default();
    if let Some(v) = t.tol_admissibility {
        tol.admissibility = v;
    }
    if let Some(v) = t.tol_psd {
        tol.psd = v;
    }
    if let Some(v) = t.tol_pinv {
        tol.pinv = v;
    }
    if let Some(v) = t.tol_identity {
        tol.identity = v;
    }
    tol
}

fn require_nvars(nvars: Option<usize>, what: &str) -> CliResult<usize> {
    match nvars {
        Some(n) if n > 0 => Ok(n),
        _ => Err(CliError::usage(
            format!("`{what}` needs --nvars ≥ 1"),
            "nvars",
        )),
    }
}

fn preset_spec(preset: Preset, nvars: usize) -> CliResult<CumulantSpec> {
    if nvars == 0 {
        return Err(CliError::usage("--nvars must be at least 1", "nvars"));
    }
    Ok(match preset {
        Preset::Semicircular => CumulantSpec::semicircular(nvars),
        Preset::FreePoisson => CumulantSpec::free_poisson_centered(nvars, 16),
    })
}

fn load_ensemble(path: &Path, seed: Option<u64>) -> CliResult<MatrixEnsembleConfig> {
    let mut cfg = with_source(MatrixEnsembleConfig::from_json_str(&read(path)?), path)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn load_state(opts: &StateOpts) -> CliResult<Box<dyn MomentFunctional>> {
    let src = &opts.source;
    if let Some(p) = &src.state {
        return Ok(Box::new(with_source(
            MomentTable::from_json_str(&read(p)?),
            p,
        )?));
    }
    if let Some(p) = &src.cumulants {
        let spec = with_source(CumulantSpec::from_json_str(&read(p)?), p)?;
        return Ok(Box::new(CumulantState::new(spec)));
    }
    if let Some(p) = &src.ensemble {
        let cfg = load_ensemble(p, opts.seed)?;
        return Ok(Box::new(mc_moment_table(&cfg, opts.max_order)?));
    }
    let preset = src.preset.expect("clap enforces one state source");
    Ok(Box::new(CumulantState::new(preset_spec(
        preset, opts.nvars,
    )?)))
}

/// Checks unit, Hermitian symmetry, positivity and (for tracial states)
/// cyclicity up to the order the command will touch.
fn validate(phi: &dyn MomentFunctional, needed: usize, tol: &Tolerances) -> CliResult<()> {
    let order = (needed.max(2).min(phi.max_order()).min(VALIDATION_ORDER_CAP) / 2) * 2;
    validate_state(phi, order, tol.psd)?;
    Ok(())
}

fn load_potential(spec: &str, nvars: usize) -> CliResult<NcPoly> {
    if spec == "quadratic" {
        return Ok(NcPoly::quadratic_potential(nvars));
    }
    let path = Path::new(spec);
    let json: PolyJson = with_source(serde_json::from_str(&read(path)?).map_err(Into::into), path)?;
    with_source(json.to_poly(), path)
}

pub fn derive(a: &DeriveArgs) -> CliResult<()> {
    if a.what == What::Jacobian {
        let tuple = if a.input == "coordinates" {
            PolyTuple::coordinates(require_nvars(a.nvars, "coordinates")?)
        } else {
            let path = Path::new(&a.input);
            let json: TupleJson =
                with_source(serde_json::from_str(&read(path)?).map_err(Into::into), path)?;
            with_source(json.to_tuple(), path)?
        };
        return emit_json(&a.out, &KernelMatrixJson::from_matrix(&jacobian(&tuple)));
    }
    let p = if a.input == "quadratic" {
        NcPoly::quadratic_potential(require_nvars(a.nvars, "quadratic")?)
    } else {
        load_potential(&a.input, 0)?
    };
    match a.what {
        What::Partial => {
            let i = match a.index {
                Some(i) if (1..=p.nvars()).contains(&i) => i - 1,
                _ => {
                    return Err(CliError::usage(
                        format!("`partial` needs --index in 1..={}", p.nvars()),
                        "index",
                    ))
                }
            };
            emit_json(&a.out, &TensorJson::from_tensor(&partial(i, &p)?))
        }
        What::Delta => emit_json(&a.out, &TensorJson::from_tensor(&delta(&p))),
        What::CyclicGradient => emit_json(&a.out, &TupleJson::from_tuple(&cyclic_gradient(&p))),
        What::ExplicitKernel => {
            emit_json(&a.out, &KernelMatrixJson::from_matrix(&explicit_kernel(&p)))
        }
        What::Jacobian => unreachable!(),
    }
}

pub fn stein(a: &SteinArgs) -> CliResult<()> {
    let tol = tolerances(&a.tol);
    let phi = load_state(&a.state)?;
    validate(phi.as_ref(), 2 * a.degree, &tol)?;
    let v = load_potential(&a.potential, phi.nvars())?;
    let prob = SteinProblem::with_tolerances(phi.as_ref(), v, tol)?;
    let report = discrepancy_bounds(&prob, a.degree, a.poincare_constant)?;
    emit_json(&a.out, &SteinReport::new(&prob, &report))
}

#[derive(Serialize)]
struct PoincareOutput {
    #[serde(flatten)]
    report: PoincareReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    biane: Option<BianeReport>,
}

pub fn poincare(a: &PoincareArgs) -> CliResult<()> {
    let tol = tolerances(&a.tol);
    let phi = load_state(&a.state)?;
    validate(phi.as_ref(), 2 * a.degree, &tol)?;
    let est = poincare_lower_bound(phi.as_ref(), a.degree, &tol)?;
    let voic = voiculescu_bound(phi.as_ref(), default_norm_order(phi.max_order()))?;
    let biane = if a.biane {
        Some(biane_gap_check(phi.as_ref(), a.degree, &tol)?)
    } else {
        None
    };
    emit_json(
        &a.out,
        &PoincareOutput {
            report: PoincareReport::new(&est, &voic),
            biane,
        },
    )
}

pub fn clt(a: &CltArgs) -> CliResult<()> {
    let tol = tolerances(&a.tol);
    let base = match (&a.cumulants, a.preset) {
        (Some(p), _) => with_source(CumulantSpec::from_json_str(&read(p)?), p)?,
        (None, Some(preset)) => preset_spec(preset, a.nvars)?,
        (None, None) => preset_spec(Preset::FreePoisson, a.nvars)?,
    };
    let phi = CumulantState::new(base.clone());
    validate(&phi, 2 * a.degree + 2, &tol)?;
    let exp = CltExperiment::new(base, a.ks.clone(), a.degree)?;
    let rows = clt_rate_table(&exp, &tol)?;
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf)?;
    emit(&a.out, &buf)
}

pub fn mc(a: &McArgs) -> CliResult<()> {
    let cfg = match &a.ensemble {
        Some(p) => load_ensemble(p, a.seed)?,
        None => {
            let cfg = MatrixEnsembleConfig::gue(a.nvars, a.size, a.samples, a.seed.unwrap_or(0));
            cfg.validate()?;
            cfg
        }
    };
    let table = mc_moment_table(&cfg, a.max_order)?;
    let mut s = table.to_json_string()?;
    s.push('\n');
    emit(&a.out, s.as_bytes())
}
