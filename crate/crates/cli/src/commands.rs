use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};

use gsign::io::{
    pairwise_compare, quantile_split, read_csv_matrix, read_vector, render, Artifact, CsvOptions,
    LabeledDataset, OutputFormat,
};
use gsign::simgen::{oracle_null, power_study_with_progress};
use gsign::{one_sample_test, two_sample_test, GroupLabels};

use crate::args::{Format, OracleArgs, PairwiseArgs, SimulateArgs, TestOneArgs, TestTwoArgs};
use crate::config::{
    load_scenario_file, load_test_file, scenario, test_config, Destination, DEFAULT_ORACLE_DRAWS,
    TEST_KEYS,
};
use crate::error::{usage, CliError, Result};

fn keys(extra: &[&'static str]) -> Vec<&'static str> {
    TEST_KEYS.iter().chain(extra).copied().collect()
}

fn emit(artifact: Artifact<'_>, dest: &Destination, fallback: OutputFormat) -> Result<()> {
    let format = match (dest.format, &dest.path) {
        (Some(Format::Csv), _) => OutputFormat::Csv,
        (Some(Format::Json), _) => OutputFormat::Json,
        (None, Some(path)) if path.extension().is_some() => OutputFormat::from_path(path),
        (None, _) => fallback,
    };
    let text = render(artifact, format)?;
    match &dest.path {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            gsign::Error::Io {
                path: path.clone(),
                source: e,
            }
            .into()
        }),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(CliError::Stdout),
    }
}

fn read(
    path: &Path,
    header: bool,
    label: Option<&str>,
    score: Option<&str>,
) -> Result<LabeledDataset> {
    let options = CsvOptions {
        has_header: header || label.is_some() || score.is_some(),
        label_column: label,
        score_column: score,
    };
    Ok(read_csv_matrix(path, &options)?)
}

pub fn test_one(args: TestOneArgs) -> Result<()> {
    let file = load_test_file(args.config.as_deref(), &keys(&["data", "mu0", "header"]))?;
    let data = args
        .data
        .or(file.data.clone())
        .ok_or_else(|| usage("--data is required"))?;
    let header = args.header || file.header.unwrap_or(false);
    let mut x = read(&data, header, None, None)?.data;
    if let Some(mu0) = args.mu0.or(file.mu0.clone()) {
        x = x.centered(&read_vector(&mu0)?)?;
    }
    let config = test_config(&file, &args.test, x.p())?;
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let scaling = config.scaling_spec(x.n(), x.p())?;
    let result = one_sample_test(
        &x,
        &scaling,
        &config.kernel,
        config.resamples,
        config.alpha,
        seed,
    )?;
    let dest = Destination::new(&args.output, file.out.clone(), file.format);
    emit(Artifact::Test(&result), &dest, OutputFormat::Json)
}

pub fn test_two(args: TestTwoArgs) -> Result<()> {
    let file = load_test_file(
        args.config.as_deref(),
        &keys(&[
            "data",
            "data1",
            "data2",
            "header",
            "label_column",
            "score_column",
            "quantile",
        ]),
    )?;
    let header = args.header || file.header.unwrap_or(false);
    let data = args.data.or(file.data.clone());
    let pair = match (
        args.data1.or(file.data1.clone()),
        args.data2.or(file.data2.clone()),
    ) {
        (Some(a), Some(b)) => Some((a, b)),
        (None, None) => None,
        _ => return Err(usage("--data1 and --data2 go together")),
    };
    let label = args.label_column.or(file.label_column.clone());
    let score = args.score_column.or(file.score_column.clone());
    let quantile = args.quantile.or(file.quantile);

    let (x, labels) = match (pair, data) {
        (Some(_), Some(_)) => return Err(usage("give either --data1/--data2 or --data")),
        (Some((a, b)), None) => {
            let first = read(&a, header, None, None)?.data;
            let second = read(&b, header, None, None)?.data;
            let labels = GroupLabels::split(first.n(), second.n())?;
            (first.vstack(&second)?, labels)
        }
        (None, Some(path)) => match (label, score, quantile) {
            (Some(label), None, None) => {
                let ds = read(&path, header, Some(&label), None)?;
                let names = ds.labels.unwrap_or_default();
                let classes: BTreeSet<&str> = names.iter().map(String::as_str).collect();
                if classes.len() != 2 {
                    return Err(usage(format!(
                        "column '{label}' must hold exactly two classes, found {}",
                        classes.len()
                    )));
                }
                let first = *classes.iter().next().expect("two classes");
                let codes: Vec<u8> = names.iter().map(|c| u8::from(c != first)).collect();
                (ds.data, GroupLabels::from_codes(&codes)?)
            }
            (None, Some(score), Some(k)) => {
                let ds = read(&path, header, None, Some(&score))?;
                let split = quantile_split(&ds, k)?;
                (split.data, split.labels)
            }
            (None, Some(_), None) => return Err(usage("--score-column needs --quantile")),
            (None, None, Some(_)) => return Err(usage("--quantile needs --score-column")),
            (None, None, None) => {
                return Err(usage(
                    "--data needs --label-column, or --score-column with --quantile",
                ))
            }
            (Some(_), Some(_), _) | (Some(_), None, Some(_)) => {
                return Err(usage(
                    "--label-column cannot be combined with --score-column or --quantile",
                ))
            }
        },
        (None, None) => return Err(usage("give --data1 and --data2, or --data")),
    };

    let config = test_config(&file, &args.test, x.p())?;
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let scaling = config.scaling_spec(x.n(), x.p())?;
    let result = two_sample_test(
        &x,
        &labels,
        &scaling,
        &config.kernel,
        config.resamples,
        config.alpha,
        seed,
    )?;
    let dest = Destination::new(&args.output, file.out.clone(), file.format);
    emit(Artifact::Test(&result), &dest, OutputFormat::Json)
}

pub fn pairwise(args: PairwiseArgs) -> Result<()> {
    let file = load_test_file(args.config.as_deref(), &keys(&["data", "label_column"]))?;
    let data = args
        .data
        .or(file.data.clone())
        .ok_or_else(|| usage("--data is required"))?;
    let label = args
        .label_column
        .or(file.label_column.clone())
        .ok_or_else(|| usage("--label-column is required"))?;
    let ds = read(&data, true, Some(&label), None)?;
    let config = test_config(&file, &args.test, ds.data.p())?;
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let matrix = pairwise_compare(&ds, &config, seed)?;
    let dest = Destination::new(&args.output, file.out.clone(), file.format);
    emit(Artifact::Pvalues(&matrix), &dest, OutputFormat::Csv)
}

struct Progress {
    quiet: bool,
    label: &'static str,
    last: AtomicUsize,
}

impl Progress {
    fn new(quiet: bool, label: &'static str) -> Self {
        Self {
            quiet,
            label,
            last: AtomicUsize::new(0),
        }
    }

    fn report(&self, done: usize, total: usize) {
        if self.quiet {
            return;
        }
        let percent = done * 100 / total.max(1);
        if self.last.fetch_max(percent + 1, Ordering::Relaxed) <= percent {
            eprint!("\r{}: {done}/{total} replicates", self.label);
            if done == total {
                eprintln!();
            }
        }
    }
}

pub fn simulate(args: SimulateArgs, quiet: bool) -> Result<()> {
    let file = load_scenario_file(args.scenario.config.as_deref(), &["oracle"])?;
    let spec = scenario(
        file.spec,
        &args.scenario,
        args.deltas.as_deref(),
        args.replications,
    )?;
    let oracle = match args.oracle.or(file.oracle) {
        Some(draws) => {
            if !quiet {
                eprintln!("simulate: drawing {draws} oracle null datasets");
            }
            Some(oracle_null(&spec, draws)?)
        }
        None => None,
    };
    let progress = Progress::new(quiet, "simulate");
    let table = power_study_with_progress(&spec, oracle.as_ref(), |done, total| {
        progress.report(done, total)
    })?;
    let dest = Destination::new(&args.scenario.output, file.out, file.format);
    emit(Artifact::Power(&table), &dest, OutputFormat::Csv)
}

pub fn oracle(args: OracleArgs) -> Result<()> {
    let file = load_scenario_file(args.scenario.config.as_deref(), &["draws", "oracle"])?;
    let spec = scenario(file.spec, &args.scenario, None, None)?;
    let draws = args
        .draws
        .or(file.draws)
        .or(file.oracle)
        .unwrap_or(DEFAULT_ORACLE_DRAWS);
    let null = oracle_null(&spec, draws)?;
    let dest = Destination::new(&args.scenario.output, file.out, file.format);
    emit(Artifact::Null(&null), &dest, OutputFormat::Csv)
}
