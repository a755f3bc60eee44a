//! Built-in reference systems with known redundancy/synergy structure.
//!
//! * `toy1`: 6 nodes, AR(2), 256 Hz. Node 0 resonates at 28 Hz and drives
//!   nodes 1 and 2 (common driver, redundant). Nodes 3 and 4 resonate at
//!   16 Hz and both drive node 5 (collider, synergistic).
//! * `toy2`: 12 nodes in 4 groups of 3, AR(1), 256 Hz. Within each group
//!   the first node drives the other two; the first nodes of groups 0-2 all
//!   drive node 9 of group 3. Groups 0-2 also receive a 40 Hz sine with a
//!   random phase per epoch. Globally redundant, synergistic between groups.

use serde::{Deserialize, Serialize};

use super::{
    periodogram_cross_spectra, spectral_measure_sweep, ArModel, SimulationSpec, Sinusoid, SweepConfig, SweepMeasure,
    SweepTable,
};
use crate::error::Result;
use crate::partition::Partition;

pub const TOY_FS: f64 = 256.0;
pub const TOY_EPOCHS: usize = 100;
pub const TOY_SAMPLES: usize = 256;

pub const TOY1_REDUNDANT_HZ: f64 = 28.0;
pub const TOY1_SYNERGISTIC_HZ: f64 = 16.0;
pub const TOY1_REDUNDANT_BAND: (f64, f64) = (26.0, 30.0);
pub const TOY1_SYNERGISTIC_BAND: (f64, f64) = (14.0, 18.0);
pub const TOY2_DRIVE_HZ: f64 = 40.0;

const POLE_RADIUS: f64 = 0.9;
const TOY1_DRIVER_GAIN: f64 = 0.12;
const TOY1_COLLIDER_GAIN: f64 = 0.08;
const TOY2_WITHIN_GAIN: f64 = 0.6;
const TOY2_BETWEEN_GAIN: f64 = 0.4;
const TOY2_SINE_AMP: f64 = 0.5;

/// AR(2) coefficients with complex poles of radius `r` at `freq_hz`.
fn resonator(freq_hz: f64, r: f64) -> (f64, f64) {
    let theta = std::f64::consts::TAU * freq_hz / TOY_FS;
    (2.0 * r * theta.cos(), -r * r)
}

pub fn toy1_model() -> ArModel {
    let p = 6;
    let mut a1 = vec![vec![0.0; p]; p];
    let mut a2 = vec![vec![0.0; p]; p];
    let (c1, c2) = resonator(TOY1_REDUNDANT_HZ, POLE_RADIUS);
    a1[0][0] = c1;
    a2[0][0] = c2;
    a1[1][0] = TOY1_DRIVER_GAIN;
    a1[2][0] = TOY1_DRIVER_GAIN;
    let (c1, c2) = resonator(TOY1_SYNERGISTIC_HZ, POLE_RADIUS);
    for i in [3, 4] {
        a1[i][i] = c1;
        a2[i][i] = c2;
    }
    a1[5][3] = TOY1_COLLIDER_GAIN;
    a1[5][4] = TOY1_COLLIDER_GAIN;
    ArModel { p, order: 2, coeffs: vec![a1, a2], innovation_cov: None, sinusoids: None, fs: TOY_FS }
}

pub fn toy2_model() -> ArModel {
    let p = 12;
    let mut a = vec![vec![0.0; p]; p];
    for hub in [0, 3, 6, 9] {
        a[hub + 1][hub] = TOY2_WITHIN_GAIN;
        a[hub + 2][hub] = TOY2_WITHIN_GAIN;
    }
    for hub in [0, 3, 6] {
        a[9][hub] = TOY2_BETWEEN_GAIN;
    }
    let sinusoids = [0, 3, 6]
        .into_iter()
        .map(|node| Sinusoid { node, amp: TOY2_SINE_AMP, freq_hz: TOY2_DRIVE_HZ, phase: None })
        .collect();
    ArModel { p, order: 1, coeffs: vec![a], innovation_cov: None, sinusoids: Some(sinusoids), fs: TOY_FS }
}

pub fn toy2_partition() -> Partition {
    Partition::contiguous(&[3, 3, 3, 3]).expect("fixed sizes")
}

/// One qualitative check of a toy run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToyCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl ToyCheck {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self { name: name.to_string(), passed, detail }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToyOutcome {
    pub table: SweepTable,
    pub checks: Vec<ToyCheck>,
}

impl ToyOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn toy1_config() -> SweepConfig {
    SweepConfig {
        measures: vec![
            SweepMeasure::Tc,
            SweepMeasure::Dtc,
            SweepMeasure::Oinfo,
            SweepMeasure::Tse,
            SweepMeasure::LambdaRsi,
        ],
        partition: None,
        ridge: None,
    }
}

pub fn toy2_config() -> SweepConfig {
    SweepConfig {
        measures: vec![
            SweepMeasure::Tc,
            SweepMeasure::Dtc,
            SweepMeasure::Oinfo,
            SweepMeasure::Tse,
            SweepMeasure::SigmaOinfo,
            SweepMeasure::KappaOinfo,
            SweepMeasure::SigmaRsi,
        ],
        partition: Some(toy2_partition()),
        ridge: None,
    }
}

fn band_values(table: &SweepTable, column: &str, band: (f64, f64)) -> Vec<f64> {
    let j = table.column_index(column).expect("column present");
    table
        .rows
        .iter()
        .filter(|r| r.freq_hz >= band.0 && r.freq_hz <= band.1)
        .map(|r| r.values[j])
        .filter(|v| !v.is_nan())
        .collect()
}

fn at(table: &SweepTable, column: &str, freq_hz: f64) -> f64 {
    let j = table.column_index(column).expect("column present");
    table.nearest_row(freq_hz).map_or(f64::NAN, |r| r.values[j])
}

fn fmt_values(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.4}")).collect();
    format!("[{}]", parts.join(", "))
}

/// Checks on a toy-1 sweep table (needs `oinfo` and `lambda_rsi_*`).
pub fn toy1_checks(table: &SweepTable) -> Vec<ToyCheck> {
    let low = band_values(table, "oinfo", TOY1_SYNERGISTIC_BAND);
    let min_low = low.iter().copied().fold(f64::INFINITY, f64::min);
    let high = band_values(table, "oinfo", TOY1_REDUNDANT_BAND);
    let max_high = high.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let red: Vec<f64> = (0..3).map(|i| at(table, &format!("lambda_rsi_{i}"), TOY1_REDUNDANT_HZ)).collect();
    let syn: Vec<f64> = (3..6).map(|i| at(table, &format!("lambda_rsi_{i}"), TOY1_SYNERGISTIC_HZ)).collect();
    vec![
        ToyCheck::new("oinfo negative in 14-18 Hz", min_low < 0.0, format!("min oinfo in band = {min_low:.4}")),
        ToyCheck::new("oinfo positive in 26-30 Hz", max_high > 0.0, format!("max oinfo in band = {max_high:.4}")),
        ToyCheck::new(
            "nodes 0-2 redundant at 28 Hz",
            red.iter().all(|&v| v > 0.0),
            format!("lambda_rsi = {}", fmt_values(&red)),
        ),
        ToyCheck::new(
            "nodes 3-5 synergistic at 16 Hz",
            syn.iter().all(|&v| v < 0.0),
            format!("lambda_rsi = {}", fmt_values(&syn)),
        ),
    ]
}

/// Checks on a toy-2 sweep table at the driven bin.
pub fn toy2_checks(table: &SweepTable) -> Vec<ToyCheck> {
    let omega = at(table, "oinfo", TOY2_DRIVE_HZ);
    let sigma = at(table, "sigma_oinfo", TOY2_DRIVE_HZ);
    let kappa: Vec<f64> = (0..4).map(|k| at(table, &format!("kappa_oinfo_{k}"), TOY2_DRIVE_HZ)).collect();
    let srsi: Vec<f64> = (0..4).map(|k| at(table, &format!("sigma_rsi_{k}"), TOY2_DRIVE_HZ)).collect();
    vec![
        ToyCheck::new("global oinfo positive at 40 Hz", omega > 0.0, format!("oinfo = {omega:.4}")),
        ToyCheck::new("structured oinfo negative at 40 Hz", sigma < 0.0, format!("sigma_oinfo = {sigma:.4}")),
        ToyCheck::new(
            "every group kappa_oinfo negative at 40 Hz",
            kappa.iter().all(|&v| v < 0.0),
            format!("kappa_oinfo = {}", fmt_values(&kappa)),
        ),
        ToyCheck::new(
            "every group sigma_rsi negative at 40 Hz",
            srsi.iter().all(|&v| v < 0.0),
            format!("sigma_rsi = {}", fmt_values(&srsi)),
        ),
    ]
}

fn run(model: &ArModel, config: &SweepConfig, spec: &SimulationSpec) -> Result<SweepTable> {
    let ts = model.simulate(spec)?;
    let cs = periodogram_cross_spectra(&ts)?;
    spectral_measure_sweep(&cs, config)
}

pub fn run_toy1(spec: &SimulationSpec) -> Result<ToyOutcome> {
    let table = run(&toy1_model(), &toy1_config(), spec)?;
    let checks = toy1_checks(&table);
    Ok(ToyOutcome { table, checks })
}

pub fn run_toy2(spec: &SimulationSpec) -> Result<ToyOutcome> {
    let table = run(&toy2_model(), &toy2_config(), spec)?;
    let checks = toy2_checks(&table);
    Ok(ToyOutcome { table, checks })
}

/// Default run parameters for a toy experiment.
pub fn toy_spec(seed: u64) -> SimulationSpec {
    SimulationSpec::new(TOY_EPOCHS, TOY_SAMPLES, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy_models_are_stable() {
        let r1 = toy1_model().ensure_stable().unwrap();
        assert!((r1 - POLE_RADIUS).abs() < 1e-6, "{r1}");
        assert_eq!(toy2_model().ensure_stable().unwrap(), 0.0);
    }

    #[test]
    fn toy1_seed0_passes() {
        let out = run_toy1(&toy_spec(0)).unwrap();
        assert!(out.passed(), "{:?}", out.checks);
        assert_eq!(out.table.rows.len(), 128);
    }

    #[test]
    fn toy2_seed0_passes() {
        let out = run_toy2(&toy_spec(0)).unwrap();
        assert!(out.passed(), "{:?}", out.checks);
    }
}
