//! Subcommand implementations.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use hoi_core::formats::{read_matrix, read_time_series_rows, write_sweep_csv, write_time_series, TimeSeriesMetadata};
use hoi_core::plot::LineChart;
use hoi_core::spectral::toy::{self, ToyOutcome};
use hoi_core::spectral::{
    periodogram_cross_spectra, spectral_measure_sweep, ArModel, SimulationSpec, SweepConfig, SweepMeasure, SweepTable,
    TimeSeriesEpochs,
};
use hoi_core::{
    kappa_dtc, kappa_tc, lambda_rsi, oinfo_gradient, oracle, pi_dtc, pi_tc, sigma_rsi, FieldKind, HermitianMatrix,
    MeasureReport, Partition, StructuredReport,
};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::{InfoArgs, KindArg, Selector, SimulateArgs, SpectraArgs, ToyArgs, VerifyArgs};

fn open_input(path: &Path) -> CliResult<Box<dyn Read>> {
    if path == Path::new("-") {
        return Ok(Box::new(std::io::stdin().lock()));
    }
    Ok(Box::new(File::open(path).map_err(|e| CliError::io(path, e))?))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(|e| CliError::io(path, e))?))
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Inline JSON (`[[0,1],[2]]`) or a path to a file holding it.
fn parse_partition(arg: &str, p: usize) -> CliResult<Partition> {
    let text = if arg.trim_start().starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::io(arg, e))?
    };
    let groups: Vec<Vec<usize>> = serde_json::from_str(&text).map_err(|e| CliError::Partition(e.to_string()))?;
    Partition::new(groups, p).map_err(|e| CliError::Partition(e.to_string()))
}

fn selected(sel: Selector, len: usize, what: &str) -> CliResult<Vec<usize>> {
    match sel {
        Selector::All => Ok((0..len).collect()),
        Selector::One(i) if i < len => Ok(vec![i]),
        Selector::One(i) => Err(CliError::Input(format!("{what} {i} out of range (have {len})"))),
    }
}

#[derive(Serialize)]
struct Global {
    tc: f64,
    dtc: f64,
    oinfo: f64,
    tse: f64,
}

#[derive(Serialize)]
struct Structured {
    groups: usize,
    sigma_tc: f64,
    sigma_dtc: f64,
    sigma_oinfo: f64,
    sigma_tse: f64,
}

#[derive(Serialize)]
struct NodeEntry {
    node: usize,
    lambda_rsi: f64,
    oinfo_gradient: f64,
    pi_tc: f64,
    pi_dtc: f64,
    pi_oinfo: f64,
    pi_tse: f64,
}

#[derive(Serialize)]
struct GroupEntry {
    group: usize,
    sigma_rsi: f64,
    kappa_tc: f64,
    kappa_dtc: f64,
    kappa_oinfo: f64,
    kappa_tse: f64,
}

#[derive(Serialize)]
struct InfoReport {
    p: usize,
    kind: FieldKind,
    units: &'static str,
    measures: Global,
    #[serde(skip_serializing_if = "Option::is_none")]
    structured: Option<Structured>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nodes: Option<Vec<NodeEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    groups: Option<Vec<GroupEntry>>,
}

pub fn info(args: &InfoArgs) -> CliResult<()> {
    let mut s = read_matrix(open_input(&args.matrix)?)?;
    if let Some(kind) = args.kind_override {
        s = s.with_kind(match kind {
            KindArg::Real => FieldKind::Real,
            KindArg::Complex => FieldKind::Complex,
        })?;
    }
    if let Some(eps) = args.ridge {
        s = s.ridge(eps)?;
    }
    let p = s.dim();
    let partition = args.partition.as_deref().map(|a| parse_partition(a, p)).transpose()?;
    let u = if args.bits { 1.0 / std::f64::consts::LN_2 } else { 1.0 };

    let r = MeasureReport::compute(&s)?;
    let measures = Global { tc: u * r.tc, dtc: u * r.dtc, oinfo: u * r.oinfo, tse: u * r.tse };
    let structured = match &partition {
        Some(part) => {
            let q = StructuredReport::compute(&s, part)?;
            Some(Structured {
                groups: part.len(),
                sigma_tc: u * q.sigma_tc,
                sigma_dtc: u * q.sigma_dtc,
                sigma_oinfo: u * q.sigma_oinfo,
                sigma_tse: u * q.sigma_tse,
            })
        }
        None => None,
    };
    let nodes = match args.node {
        Some(sel) => {
            Some(selected(sel, p, "node")?.into_iter().map(|i| node_entry(&s, i, u)).collect::<CliResult<Vec<_>>>()?)
        }
        None => None,
    };
    let groups = match args.group {
        Some(sel) => {
            let part = partition.as_ref().ok_or_else(|| CliError::Partition("--group needs --partition".into()))?;
            Some(
                selected(sel, part.len(), "group")?
                    .into_iter()
                    .map(|k| group_entry(&s, part, k, u))
                    .collect::<CliResult<Vec<_>>>()?,
            )
        }
        None => None,
    };
    let report = InfoReport {
        p,
        kind: s.kind(),
        units: if args.bits { "bits" } else { "nats" },
        measures,
        structured,
        nodes,
        groups,
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(())
}

fn node_entry(s: &HermitianMatrix, i: usize, u: f64) -> CliResult<NodeEntry> {
    let (tc, dtc) = (pi_tc(s, i)?, pi_dtc(s, i)?);
    Ok(NodeEntry {
        node: i,
        lambda_rsi: u * lambda_rsi(s, i)?,
        oinfo_gradient: u * oinfo_gradient(s, i)?,
        pi_tc: u * tc,
        pi_dtc: u * dtc,
        pi_oinfo: u * (tc - dtc),
        pi_tse: u * (tc + dtc),
    })
}

fn group_entry(s: &HermitianMatrix, part: &Partition, k: usize, u: f64) -> CliResult<GroupEntry> {
    let (tc, dtc) = (kappa_tc(s, part, k)?, kappa_dtc(s, part, k)?);
    Ok(GroupEntry {
        group: k,
        sigma_rsi: u * sigma_rsi(s, part, k)?,
        kappa_tc: u * tc,
        kappa_dtc: u * dtc,
        kappa_oinfo: u * (tc - dtc),
        kappa_tse: u * (tc + dtc),
    })
}

/// Writes one SVG per entry of `charts` (`file stem`, `title`, columns).
fn write_charts(dir: &Path, table: &SweepTable, charts: &[(String, String, Vec<String>)], bits: bool) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    for (stem, title, columns) in charts {
        let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
        let mut chart = LineChart::from_table(table, title, &cols);
        if bits {
            chart.y_label = "bits".into();
        }
        write_file(&dir.join(format!("{stem}.svg")), &chart.to_svg())?;
    }
    Ok(())
}

fn family_columns(config: &SweepConfig, m: SweepMeasure, p: usize) -> CliResult<Vec<String>> {
    let single = SweepConfig { measures: vec![m], partition: config.partition.clone(), ridge: None };
    Ok(single.columns(p)?)
}

pub fn spectra(args: &SpectraArgs) -> CliResult<()> {
    let rows = read_time_series_rows(open_input(&args.timeseries)?)?;
    let ts = TimeSeriesEpochs::from_rows(&rows, args.epoch_len, args.fs)?;
    let measures = args.measures.iter().map(|m| m.parse::<SweepMeasure>()).collect::<Result<Vec<_>, _>>()?;
    let partition = args.partition.as_deref().map(|a| parse_partition(a, ts.p)).transpose()?;
    let config = SweepConfig { measures, partition, ridge: args.ridge };
    let cs = periodogram_cross_spectra(&ts)?;
    let mut table = spectral_measure_sweep(&cs, &config)?;
    if args.bits {
        table = table.to_bits();
    }
    match &args.out {
        Some(path) => {
            let mut w = create(path)?;
            write_sweep_csv(&table, &mut w)?;
            w.flush().map_err(|e| CliError::io(path, e))?;
        }
        None => {
            let mut w = BufWriter::new(std::io::stdout().lock());
            write_sweep_csv(&table, &mut w)?;
            w.flush().map_err(|e| CliError::io("stdout", e))?;
        }
    }
    if let Some(dir) = &args.plot {
        let mut charts = Vec::new();
        let global: Vec<String> =
            config.measures.iter().filter(|m| SweepMeasure::GLOBAL.contains(m)).map(|m| m.name().to_string()).collect();
        if !global.is_empty() {
            charts.push(("global".to_string(), "Global measures".to_string(), global));
        }
        for &m in config.measures.iter().filter(|m| !SweepMeasure::GLOBAL.contains(m)) {
            charts.push((m.name().to_string(), m.name().to_string(), family_columns(&config, m, ts.p)?));
        }
        write_charts(dir, &table, &charts, args.bits)?;
    }
    Ok(())
}

fn load_model(name: &str) -> CliResult<ArModel> {
    match name {
        "toy1" => Ok(toy::toy1_model()),
        "toy2" => Ok(toy::toy2_model()),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            Ok(ArModel::from_json(&text)?)
        }
    }
}

pub fn simulate(args: &SimulateArgs) -> CliResult<()> {
    let model = load_model(&args.model)?;
    let spec = SimulationSpec { epochs: args.epochs, samples: args.samples, seed: args.seed, burn_in: args.burn_in };
    let ts = model.simulate(&spec)?;
    let meta = TimeSeriesMetadata {
        epochs: spec.epochs,
        samples_per_epoch: spec.samples,
        channels: model.p,
        fs: model.fs,
        seed: Some(spec.seed),
        burn_in: Some(spec.burn_in),
        source: args.model.clone(),
    };
    let meta_json = serde_json::to_string_pretty(&meta).expect("metadata serializes");
    match &args.out {
        Some(path) => {
            let mut w = create(path)?;
            write_time_series(&ts, &mut w)?;
            w.flush().map_err(|e| CliError::io(path, e))?;
            write_file(&sidecar_path(path), &(meta_json + "\n"))?;
        }
        None => {
            let mut w = BufWriter::new(std::io::stdout().lock());
            write_time_series(&ts, &mut w)?;
            w.flush().map_err(|e| CliError::io("stdout", e))?;
            log::info!("metadata: {meta_json}");
        }
    }
    Ok(())
}

/// `run.csv` -> `run.json`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

#[derive(Serialize)]
struct ToyRun<'a> {
    experiment: u8,
    seed: u64,
    epochs: usize,
    samples_per_epoch: usize,
    burn_in: usize,
    fs: f64,
    passed: bool,
    checks: &'a [toy::ToyCheck],
}

pub fn toy(args: &ToyArgs) -> CliResult<()> {
    let spec = toy::toy_spec(args.seed);
    let outcome: ToyOutcome = match args.which {
        1 => toy::run_toy1(&spec)?,
        _ => toy::run_toy2(&spec)?,
    };
    let dir = args.outdir.clone().unwrap_or_else(|| PathBuf::from(format!("toy{}", args.which)));
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;

    let table = &outcome.table;
    let mut w = create(&dir.join("sweep.csv"))?;
    write_sweep_csv(table, &mut w)?;
    w.flush().map_err(|e| CliError::io(dir.join("sweep.csv"), e))?;

    let global = ["tc", "dtc", "oinfo", "tse"].map(String::from).to_vec();
    let indexed = |name: &str, n: usize| (0..n).map(|i| format!("{name}_{i}")).collect::<Vec<_>>();
    let charts: Vec<(String, String, Vec<String>)> = if args.which == 1 {
        vec![
            ("global".into(), "Toy 1: global measures".into(), global),
            ("oinfo".into(), "Toy 1: O-information".into(), vec!["oinfo".into()]),
            ("lambda_rsi".into(), "Toy 1: node redundancy-synergy index".into(), indexed("lambda_rsi", 6)),
        ]
    } else {
        vec![
            ("global".into(), "Toy 2: global measures".into(), global),
            (
                "oinfo".into(),
                "Toy 2: global vs structured O-information".into(),
                vec!["oinfo".into(), "sigma_oinfo".into()],
            ),
            ("kappa_oinfo".into(), "Toy 2: group contributions to O-information".into(), indexed("kappa_oinfo", 4)),
            ("sigma_rsi".into(), "Toy 2: group redundancy-synergy index".into(), indexed("sigma_rsi", 4)),
        ]
    };
    write_charts(&dir, table, &charts, false)?;

    let run = ToyRun {
        experiment: args.which,
        seed: spec.seed,
        epochs: spec.epochs,
        samples_per_epoch: spec.samples,
        burn_in: spec.burn_in,
        fs: toy::TOY_FS,
        passed: outcome.passed(),
        checks: &outcome.checks,
    };
    write_file(&dir.join("run.json"), &(serde_json::to_string_pretty(&run).expect("run serializes") + "\n"))?;

    for c in &outcome.checks {
        println!("{}: {} ({})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    if outcome.passed() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("toy {} checks failed", args.which)))
    }
}

pub fn verify(args: &VerifyArgs) -> CliResult<()> {
    let report = oracle::verify(args.corpus_size, args.seed, oracle::VERIFY_TOLERANCE)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<&str> = report.oracles.iter().filter(|o| !o.passed).map(|o| o.name.as_str()).collect();
        Err(CliError::Failed(format!("oracle mismatch: {}", failed.join(", "))))
    }
}
