use std::fs;
use std::path::{Path, PathBuf};

use super::BenchError;
use crate::optimizers::{sweep_group, ConvergenceRecord, SweepTrace};

fn num(v: f64) -> String {
    v.to_string()
}

pub fn run_file_name(repetition: usize) -> String {
    format!("run_{repetition:03}.csv")
}

pub fn write_records(
    path: &Path,
    dim: usize,
    records: &[ConvergenceRecord],
) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["run_id".to_string(), "eval_index".to_string()];
    header.extend((0..dim).map(|j| format!("x_{j}")));
    header.extend(["f", "best_so_far", "provenance"].map(String::from));
    w.write_record(&header)?;
    for r in records {
        let mut row = vec![r.run_id.to_string(), r.eval_index.to_string()];
        row.extend(r.point.iter().copied().map(num));
        row.extend([num(r.f_value), num(r.best_so_far), r.provenance.to_string()]);
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a run file written by [`write_records`].
pub fn read_records(path: &Path) -> Result<Vec<ConvergenceRecord>, BenchError> {
    let mut reader = csv::Reader::from_path(path)?;
    let header = reader.headers()?.clone();
    let dim = header.iter().filter(|h| h.starts_with("x_")).count();
    if header.len() != dim + 5 {
        return Err(BenchError::Format(format!("{}: unexpected header", path.display())));
    }
    let bad = |what: &str| BenchError::Format(format!("{}: bad {what}", path.display()));
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row?;
        let field = |i: usize| row.get(i).unwrap_or("");
        let float = |i: usize| field(i).parse::<f64>().map_err(|_| bad("number"));
        out.push(ConvergenceRecord {
            run_id: field(0).parse().map_err(|_| bad("run_id"))?,
            eval_index: field(1).parse().map_err(|_| bad("eval_index"))?,
            point: (0..dim).map(|j| float(2 + j)).collect::<Result<_, _>>()?,
            f_value: float(2 + dim)?,
            best_so_far: float(3 + dim)?,
            provenance: field(4 + dim).parse().map_err(|_| bad("provenance"))?,
        });
    }
    Ok(out)
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Median best-so-far per evaluation index across runs.
///
/// Runs shorter than the longest one contribute their final best value.
pub fn median_best(runs: &[Vec<f64>]) -> Vec<f64> {
    let runs: Vec<&Vec<f64>> = runs.iter().filter(|r| !r.is_empty()).collect();
    let len = runs.iter().map(|r| r.len()).max().unwrap_or(0);
    (0..len)
        .map(|i| {
            let mut column: Vec<f64> = runs.iter().map(|r| r[i.min(r.len() - 1)]).collect();
            median(&mut column)
        })
        .collect()
}

pub fn write_aggregate(path: &Path, medians: &[f64]) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["eval_index", "median_best"])?;
    for (i, m) in medians.iter().enumerate() {
        w.write_record([(i + 1).to_string(), num(*m)])?;
    }
    w.flush()?;
    Ok(())
}

/// Run files in `dir`, sorted by name.
pub fn run_files(dir: &Path) -> Result<Vec<PathBuf>, BenchError> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.starts_with("run_") && n.ends_with(".csv"))
        })
        .collect();
    files.sort();
    Ok(files)
}

/// Recomputes the aggregate curve from every run file in `dir`.
pub fn aggregate_dir(dir: &Path, out: &Path) -> Result<Vec<f64>, BenchError> {
    let files = run_files(dir)?;
    if files.is_empty() {
        return Err(BenchError::Format(format!("no run files in {}", dir.display())));
    }
    let runs = files
        .iter()
        .map(|p| Ok(read_records(p)?.iter().map(|r| r.best_so_far).collect()))
        .collect::<Result<Vec<Vec<f64>>, BenchError>>()?;
    let medians = median_best(&runs);
    write_aggregate(out, &medians)?;
    Ok(medians)
}

pub fn trace_file_name(repetition: usize, iteration: usize) -> String {
    format!("sweep_{repetition:03}_iter_{iteration:03}.csv")
}

/// One row per grid length-scale: its infill point, objective value and group.
pub fn write_trace(path: &Path, trace: &SweepTrace) -> Result<(), BenchError> {
    let dim = trace.candidates.first().map_or(0, Vec::len);
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["theta".to_string()];
    header.extend((0..dim).map(|j| format!("x_{j}")));
    header.extend(["f", "group"].map(String::from));
    w.write_record(&header)?;
    let n = trace.thetas.len();
    for (i, ((theta, x), f)) in
        trace.thetas.iter().zip(&trace.candidates).zip(&trace.values).enumerate()
    {
        let mut row = vec![num(*theta)];
        row.extend(x.iter().copied().map(num));
        row.extend([num(*f), sweep_group(i, n).to_string()]);
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
