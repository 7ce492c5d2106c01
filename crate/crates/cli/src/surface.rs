//! Grid evaluation of the branch through `λ°` on a two-parameter plane of operators.

use std::fmt::Write as _;
use std::path::Path;

use lateral_core::io::{parse_complex_matrix, read_file};
use lateral_core::lateral::{fd_hessian, restricted_hessian, track_step, PerturbationFamily};
use lateral_core::sample::{real_gaussian, seeded};
use lateral_core::{CMatrix, CVector, Error};
use serde_json::json;

use crate::commands::{load_family, to_json};
use crate::{CliError, Emitted, Format, RunConfig};

fn direction(path: Option<&Path>, fam: &PerturbationFamily) -> Result<Option<CMatrix>, CliError> {
    let Some(path) = path else { return Ok(None) };
    let d = parse_complex_matrix(&read_file(path)?)?;
    if d.shape() != fam.k0().shape() {
        return Err(Error::DimensionMismatch(format!(
            "{}: direction is {}x{}, K0 is {}x{}",
            path.display(),
            d.nrows(),
            d.ncols(),
            fam.k(),
            fam.n()
        ))
        .into());
    }
    Ok(Some(d))
}

fn coordinate(r: f64, m: usize, i: usize) -> f64 {
    (i as f64 - m as f64) / m as f64 * r
}

/// `Λ` on the `(2m+1)²` grid `s = r (i − m)/m`, indexed `[row j][column i]` with `s₂`
/// along rows. The center column is tracked first, then every row outward from it.
fn track_grid(fam: &PerturbationFamily, dirs: &[CMatrix; 2], r: f64, m: usize) -> Result<Vec<Vec<f64>>, CliError> {
    let size = 2 * m + 1;
    let s = |i: usize| coordinate(r, m, i);
    let at = |i: usize, j: usize, reference: &CVector| -> Result<(f64, CVector), CliError> {
        let h = fam.assemble(&fam.displaced(dirs, &[s(i), s(j)]))?;
        let sample = track_step(&h, reference, s(i))
            .map_err(|e| CliError::At(format!("grid point (s1, s2) = ({}, {})", s(i), s(j)), e))?;
        Ok((sample.lambda, sample.eigenvector))
    };
    let mut values = vec![vec![f64::NAN; size]; size];
    let mut column: Vec<Option<CVector>> = vec![None; size];
    let (l, v) = at(m, m, fam.f())?;
    values[m][m] = l;
    column[m] = Some(v);
    for range in [(m + 1..size).collect::<Vec<_>>(), (0..m).rev().collect()] {
        let mut reference = column[m].clone().expect("center");
        for j in range {
            let (l, v) = at(m, j, &reference)?;
            values[j][m] = l;
            column[j] = Some(v.clone());
            reference = v;
        }
    }
    for j in 0..size {
        for range in [(m + 1..size).collect::<Vec<_>>(), (0..m).rev().collect()] {
            let mut reference = column[j].clone().expect("tracked column");
            for i in range {
                let (l, v) = at(i, j, &reference)?;
                values[j][i] = l;
                reference = v;
            }
        }
    }
    Ok(values)
}

pub fn run(
    cfg: &RunConfig,
    file: &Path,
    dir1: Option<&Path>,
    dir2: Option<&Path>,
    range: f64,
    grid: usize,
) -> Result<Emitted, CliError> {
    if grid < 3 || grid % 2 == 0 {
        return Err(CliError::Usage(format!("--grid must be odd and at least 3, got {grid}")));
    }
    if !(range > 0.0 && range.is_finite()) {
        return Err(CliError::Usage(format!("--range must be positive, got {range}")));
    }
    let fam = load_family(cfg, file)?;
    let mut rng = seeded(cfg.seed);
    let mut draw = |given: Option<CMatrix>| given.unwrap_or_else(|| real_gaussian(&mut rng, fam.k(), fam.n()));
    let d1 = draw(direction(dir1, &fam)?);
    let d2 = draw(direction(dir2, &fam)?);
    let dirs = [d1, d2];

    let rh = restricted_hessian(&fam, &dirs, cfg.tol)?;
    let analytic = &rh.matrix * 2.0;
    let fd = fd_hessian(&fam, &dirs, cfg.fd_step.unwrap_or(1e-4))?;
    let kind = rh.classify();
    let values = track_grid(&fam, &dirs, range, grid)?;

    let size = 2 * grid + 1;
    let s = |i: usize| coordinate(range, grid, i);
    let rows = |m: &nalgebra::DMatrix<f64>| -> Vec<Vec<f64>> {
        (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
    };
    let meta = json!({
        "seed": cfg.seed,
        "lambda0": fam.lambda0(),
        "classification": kind,
        "hessian_analytic": rows(&analytic),
        "hessian_fd": rows(&fd),
        "range": range,
        "grid": grid,
    });
    let text = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            eprintln!("# {meta}");
            let mut out = String::from("s1,s2,Lambda\n");
            for (j, row) in values.iter().enumerate() {
                for (i, v) in row.iter().enumerate() {
                    writeln!(out, "{},{},{}", s(i), s(j), v).unwrap();
                }
            }
            out
        }
        Format::Json => {
            let points: Vec<_> = (0..size)
                .flat_map(|j| (0..size).map(move |i| (i, j)))
                .map(|(i, j)| json!({ "s1": s(i), "s2": s(j), "Lambda": values[j][i] }))
                .collect();
            let mut value = meta;
            value["points"] = json!(points);
            to_json(&value)
        }
    };
    Ok(Emitted::ok(text))
}
