use std::fmt::Write as _;
use std::path::Path;

use lateral_core::graph::{nodal_report, nodal_reports, NodalOptions, NodalReport, DEFAULT_TORUS_STEP};
use lateral_core::inertia::relative_tol;
use lateral_core::io::{parse_family, parse_graph, parse_matrix, read_file, MatrixJson};
use lateral_core::lateral::{hessian_q, spectral_shift, PerturbationFamily};
use lateral_core::sample::{random_family, seeded, FamilyOptions};
use lateral_core::schur::{haynsworth_report, schur_complement, BlockPartition};
use lateral_core::verify::{run_all, SuiteSizes};
use lateral_core::{inertia as inertia_of, Error, HermitianMatrix};
use serde::Serialize;
use serde_json::json;

use crate::{CliError, Emitted, Format, RunConfig};

pub(crate) fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn csv_unsupported(what: &str) -> CliError {
    CliError::Usage(format!("{what} has no CSV form; use --format json"))
}

fn load_matrix(path: &Path) -> Result<HermitianMatrix, CliError> {
    Ok(parse_matrix(&read_file(path)?)?)
}

pub(crate) fn load_family(cfg: &RunConfig, path: &Path) -> Result<PerturbationFamily, CliError> {
    Ok(parse_family(&read_file(path)?, cfg.tol)?)
}

fn partition(n: usize, first: &[usize]) -> Result<BlockPartition, CliError> {
    let mut first = first.to_vec();
    first.sort_unstable();
    Ok(BlockPartition::with_first(n, first)?)
}

pub fn inertia(cfg: &RunConfig, file: &Path, shift: f64) -> Result<Emitted, CliError> {
    let m = load_matrix(file)?.shifted(shift);
    let i = inertia_of(&m, relative_tol(&m, cfg.tol));
    let ambiguous = i.is_ambiguous();
    let text = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&json!({
            "minus": i.minus,
            "zero": i.zero,
            "plus": i.plus,
            "ambiguous": ambiguous,
        })),
        Format::Csv => format!("minus,zero,plus,ambiguous\n{},{},{},{}\n", i.minus, i.zero, i.plus, ambiguous),
    };
    Ok(Emitted::ok(text))
}

pub fn schur(cfg: &RunConfig, file: &Path, first: &[usize]) -> Result<Emitted, CliError> {
    if cfg.format == Some(Format::Csv) {
        return Err(csv_unsupported("schur"));
    }
    let m = load_matrix(file)?;
    let p = partition(m.dim(), first)?;
    let c = schur_complement(&m, &p, relative_tol(&m, cfg.tol))?;
    Ok(Emitted::ok(to_json(&MatrixJson::from_hermitian(&c))))
}

pub fn haynsworth(cfg: &RunConfig, file: &Path, first: &[usize]) -> Result<Emitted, CliError> {
    let m = load_matrix(file)?;
    let p = partition(m.dim(), first)?;
    let r = haynsworth_report(&m, &p, relative_tol(&m, cfg.tol))?;
    let mut verdict = Ok(());
    if !r.any_ambiguous() {
        if r.kernel_condition_d_holds && !r.identity_primal_holds {
            verdict = Err(CliError::Falsified("primal inertia identity".into()));
        } else if r.kernel_condition_d_holds && r.kernel_condition_a_holds && !r.identity_dual_holds {
            verdict = Err(CliError::Falsified("dual inertia identity".into()));
        }
    }
    let text = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&r),
        Format::Csv => format!(
            "kernel_condition_d,kernel_condition_a,primal,dual,ambiguous\n{},{},{},{},{}\n",
            r.kernel_condition_d_holds,
            r.kernel_condition_a_holds,
            r.identity_primal_holds,
            r.identity_dual_holds,
            r.any_ambiguous()
        ),
    };
    Ok(Emitted { text, verdict })
}

pub fn shift(cfg: &RunConfig, file: &Path) -> Result<Emitted, CliError> {
    let fam = load_family(cfg, file)?;
    let sigma = spectral_shift(&fam, cfg.tol)?;
    let text = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&json!({ "sigma": sigma })),
        Format::Csv => format!("sigma\n{sigma}\n"),
    };
    Ok(Emitted::ok(text))
}

pub fn hessian(cfg: &RunConfig, file: &Path) -> Result<Emitted, CliError> {
    let fam = load_family(cfg, file)?;
    let r = hessian_q(&fam, cfg.tol)?;
    let verdict = if r.theorem_index_holds && r.theorem_nullity_holds {
        Ok(())
    } else {
        Err(CliError::Falsified(format!(
            "index {} / nullity {} identities (morse {}, sigma {}, i_minus_omega {}, m {})",
            r.theorem_index_holds, r.theorem_nullity_holds, r.morse_index, r.sigma, r.i_minus_omega, r.m
        )))
    };
    let text = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut value = serde_json::to_value(&r).expect("report serializes");
            value["Q"] = serde_json::to_value(MatrixJson::from_hermitian(&r.q)).expect("matrix serializes");
            to_json(&value)
        }
        Format::Csv => format!(
            "morse_index,nullity,sigma,i_minus_omega,m,theorem_index_holds,theorem_nullity_holds\n{},{},{},{},{},{},{}\n",
            r.morse_index, r.nullity, r.sigma, r.i_minus_omega, r.m, r.theorem_index_holds, r.theorem_nullity_holds
        ),
    };
    Ok(Emitted { text, verdict })
}

pub fn flow(cfg: &RunConfig, file: &Path, tmin: f64, tmax: f64, steps: usize) -> Result<Emitted, CliError> {
    if steps < 2 {
        return Err(CliError::Usage(format!("--steps must be at least 2, got {steps}")));
    }
    if !(tmin.is_finite() && tmax.is_finite()) {
        return Err(CliError::Usage("--tmin and --tmax must be finite".into()));
    }
    let fam = load_family(cfg, file)?;
    let coupling = fam.k0().adjoint() * fam.omega().matrix() * fam.k0();
    let grid: Vec<f64> = (0..steps)
        .map(|i| tmin + (tmax - tmin) * i as f64 / (steps - 1) as f64)
        .collect();
    let rows: Vec<Vec<f64>> = grid
        .iter()
        .map(|&t| {
            let h = fam.s().matrix() + coupling.scale(t);
            HermitianMatrix::new(h).map(|h| h.eigenvalues())
        })
        .collect::<Result<_, Error>>()?;
    let text = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = String::from("t");
            for j in 1..=fam.n() {
                write!(out, ",lambda_{j}").unwrap();
            }
            out.push('\n');
            for (t, row) in grid.iter().zip(&rows) {
                write!(out, "{t}").unwrap();
                for v in row {
                    write!(out, ",{v}").unwrap();
                }
                out.push('\n');
            }
            out
        }
        Format::Json => to_json(&json!({ "t": grid, "lambda": rows })),
    };
    Ok(Emitted::ok(text))
}

fn graph_csv(reports: &[NodalReport]) -> String {
    let opt = |x: Option<String>| x.unwrap_or_default();
    let mut out = String::from(
        "n,lambda,assumptions_met,flip_count,surplus,morse_index_fd,morse_index_q,nullity,theorem_holds\n",
    );
    for r in reports {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.n,
            r.lambda,
            r.assumptions_met,
            opt(r.flip_count.map(|x| x.to_string())),
            opt(r.surplus.map(|x| x.to_string())),
            opt(r.morse_index_fd.map(|x| x.to_string())),
            opt(r.morse_index_q.map(|x| x.to_string())),
            opt(r.nullity.map(|x| x.to_string())),
            r.theorem_holds
        )
        .unwrap();
    }
    out
}

pub fn graph(cfg: &RunConfig, file: &Path, level: Option<usize>) -> Result<Emitted, CliError> {
    let (g, frame) = parse_graph(&read_file(file)?)?;
    let frame = frame.ok_or(Error::BetaZero)?;
    let opts = NodalOptions {
        fd_step: cfg.fd_step.unwrap_or(DEFAULT_TORUS_STEP),
        rel_tol: cfg.tol,
    };
    let reports = match level {
        Some(n) => vec![nodal_report(&g, &frame, n, &opts)?],
        None => nodal_reports(&g, &frame, &opts)?,
    };
    let falsified: Vec<usize> = reports.iter().filter(|r| r.falsifies()).map(|r| r.n).collect();
    let verdict = if falsified.is_empty() {
        Ok(())
    } else {
        Err(CliError::Falsified(format!("levels {falsified:?} meet the hypotheses but disagree")))
    };
    let text = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&reports),
        Format::Csv => graph_csv(&reports),
    };
    Ok(Emitted { text, verdict })
}

pub fn selftest(cfg: &RunConfig, quick: bool, write_family: Option<&Path>) -> Result<Emitted, CliError> {
    if let Some(path) = write_family {
        let mut rng = seeded(cfg.seed);
        let fam = (0..1000)
            .find_map(|_| random_family(&mut rng, &FamilyOptions::default()).ok())
            .ok_or_else(|| CliError::Usage("no valid family in 1000 draws".into()))?;
        std::fs::write(path, lateral_core::io::family_to_string(&fam))?;
        return Ok(Emitted::ok(format!("wrote {}\n", path.display())));
    }
    let sizes = if quick {
        SuiteSizes {
            haynsworth: 60,
            haynsworth_singular: 15,
            sylvester: 30,
            main_theorem: 60,
            criticality: 10,
            branch_equation: 10,
            switch: 10,
            magnetic_graphs: 10,
            fiedler_trees: 10,
        }
    } else {
        SuiteSizes::default()
    };
    let outcomes = run_all(cfg.seed, &sizes);
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.ok()).map(|o| o.name.as_str()).collect();
    let verdict = if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Falsified(format!("suites {failed:?}")))
    };
    let text = match cfg.format {
        Some(Format::Json) => to_json(&outcomes),
        Some(Format::Csv) => {
            let mut out = String::from("suite,evaluated,passed,failed,discarded,seconds\n");
            for o in &outcomes {
                writeln!(out, "{},{},{},{},{},{:.3}", o.name, o.evaluated, o.passed(), o.failed, o.discarded, o.seconds)
                    .unwrap();
            }
            out
        }
        None => {
            let mut out = String::new();
            for o in &outcomes {
                writeln!(
                    out,
                    "{:<16} {}  {} passed, {} failed, {} discarded ({:.2} s)",
                    o.name,
                    if o.ok() { "PASS" } else { "FAIL" },
                    o.passed(),
                    o.failed,
                    o.discarded,
                    o.seconds
                )
                .unwrap();
                for note in o.notes.iter().filter(|n| !n.starts_with("discarded")) {
                    writeln!(out, "    {note}").unwrap();
                }
            }
            out
        }
    };
    Ok(Emitted { text, verdict })
}
