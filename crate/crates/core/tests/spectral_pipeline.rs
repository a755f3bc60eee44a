use hoi_core::oracle::random_pd;
use hoi_core::spectral::toy::{toy1_model, toy2_model};
use hoi_core::spectral::*;
use hoi_core::*;

fn config(name: &str) -> ArModel {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/");
    ArModel::from_json(&std::fs::read_to_string(format!("{path}{name}")).unwrap()).unwrap()
}

#[test]
fn shipped_configs_match_builtins() {
    assert_eq!(config("toy1.json"), toy1_model());
    assert_eq!(config("toy2.json"), toy2_model());
}

#[test]
fn toy_models_are_stable() {
    let r1 = toy1_model().stability().unwrap();
    assert!(r1.stable && (r1.radius - 0.9).abs() < 1e-6, "{r1:?}");
    let r2 = toy2_model().stability().unwrap();
    assert!(r2.stable && r2.radius < 1e-6, "{r2:?}");
}

#[test]
fn periodogram_tracks_parametric_tc() {
    let model = toy1_model();
    let ts = model.simulate(&SimulationSpec::new(400, 256, 0)).unwrap();
    let est = periodogram_cross_spectra(&ts).unwrap();
    let exact = parametric_cross_spectra(&model, &est.frequencies).unwrap();
    let close = est
        .matrices
        .iter()
        .zip(&exact.matrices)
        .filter(|(a, b)| (total_correlation(a).unwrap() - total_correlation(b).unwrap()).abs() <= 0.1)
        .count();
    assert!(close as f64 >= 0.9 * est.len() as f64, "{close}/{}", est.len());
}

#[test]
fn periodogram_is_positive_definite() {
    for seed in 0..10 {
        let ts = toy2_model().simulate(&SimulationSpec::new(100, 256, seed)).unwrap();
        let cs = periodogram_cross_spectra(&ts).unwrap();
        for m in &cs.matrices {
            assert!(m.cholesky().is_ok(), "seed {seed}");
        }
    }
}

#[test]
fn simulation_is_deterministic() {
    let spec = SimulationSpec::new(8, 64, 42);
    let a = toy2_model().simulate(&spec).unwrap();
    let b = toy2_model().simulate(&spec).unwrap();
    assert_eq!(a, b);
    let c = toy2_model().simulate(&SimulationSpec::new(8, 64, 43)).unwrap();
    assert_ne!(a.data, c.data);
}

#[test]
fn sweep_is_invariant_to_channel_scaling() {
    let model = toy1_model();
    let ts = model.simulate(&SimulationSpec::new(20, 128, 3)).unwrap();
    let gains = [0.1, 3.0, 1.0, 50.0, 0.7, 2.0];
    let mut scaled = ts.clone();
    for (n, x) in scaled.data.iter_mut().enumerate() {
        *x *= gains[n % 6];
    }
    let config = SweepConfig {
        measures: SweepMeasure::ALL.to_vec(),
        partition: Some(Partition::contiguous(&[2, 2, 2]).unwrap()),
        ridge: None,
    };
    let a = spectral_measure_sweep(&periodogram_cross_spectra(&ts).unwrap(), &config).unwrap();
    let b = spectral_measure_sweep(&periodogram_cross_spectra(&scaled).unwrap(), &config).unwrap();
    assert_eq!(a.columns, b.columns);
    for (ra, rb) in a.rows.iter().zip(&b.rows) {
        for (x, y) in ra.values.iter().zip(&rb.values) {
            assert!((x - y).abs() <= 1e-8, "{x} vs {y}");
        }
    }
}

#[test]
fn sweep_frequencies_ascend() {
    let ts = toy1_model().simulate(&SimulationSpec::new(4, 64, 0)).unwrap();
    let table = spectral_measure_sweep(&periodogram_cross_spectra(&ts).unwrap(), &SweepConfig::default()).unwrap();
    let f = table.frequencies();
    assert!(f.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(table.columns, ["tc", "dtc", "oinfo", "tse"]);
}

#[test]
fn elliptical_scatter_errors_are_unbiased() {
    let targets = 20;
    let mut sums = [0.0; 3];
    let mut within = 0;
    for seed in 0..targets {
        let s = random_pd(5, FieldKind::Real, 1000 + seed);
        let x = sample_multivariate_t(&s, 5.0, 20_000, seed).unwrap();
        let scatter = sample_scatter(&x, 5).unwrap();
        let (a, b) = (MeasureReport::compute(&s).unwrap(), MeasureReport::compute(&scatter).unwrap());
        let pairs = [(a.tc, b.tc), (a.dtc, b.dtc), (a.oinfo, b.oinfo)];
        for (sum, (truth, est)) in sums.iter_mut().zip(pairs) {
            *sum += est - truth;
        }
        if pairs.iter().all(|(t, e)| (t - e).abs() <= (0.05 * t.abs()).max(0.02)) {
            within += 1;
        }
    }
    for sum in sums {
        assert!((sum / targets as f64).abs() <= 0.01, "mean error {}", sum / targets as f64);
    }
    assert!(within >= targets - 2, "{within}/{targets}");
}
