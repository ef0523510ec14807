//! Per-epoch training time against predictor size, with a least-squares line.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use rand::seq::index::sample;
use subsevo_core::nn::{evaluate_accuracy, train_epoch, NetworkSpec, Sgd, TrainConfig, TrainedModel};
use subsevo_core::{mix_seed, seeded_rng, Dataset};

use crate::plot::{render_svg, PlotKind, Series};
use crate::{write_file, ExperimentError, Result};

/// Epoch times of one predictor size.
#[derive(Debug, Clone, PartialEq)]
pub struct TimingRecord {
    pub size: usize,
    pub runs_ms: Vec<f64>,
    pub mean_ms: f64,
    /// Sample standard deviation (n - 1 denominator; 0 for a single run).
    pub std_ms: f64,
}

impl TimingRecord {
    pub fn from_runs(size: usize, runs_ms: Vec<f64>) -> Self {
        let n = runs_ms.len() as f64;
        let mean_ms = runs_ms.iter().sum::<f64>() / n;
        let std_ms = if runs_ms.len() > 1 {
            (runs_ms.iter().map(|t| (t - mean_ms).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Self {
            size,
            runs_ms,
            mean_ms,
            std_ms,
        }
    }
}

/// `y = slope * x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares. Needs at least two distinct x values.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let n = xs.len() as f64;
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Some(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Instrumentation of the bench loop.
pub trait BenchObserver {
    fn timed_start(&mut self, _size: usize, _repetition: usize) {}
    fn timed_end(&mut self, _size: usize, _repetition: usize, _ms: f64) {}
    fn evaluated(&mut self, _size: usize, _accuracy: f64) {}
}

pub struct NoObserver;

impl BenchObserver for NoObserver {}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub records: Vec<TimingRecord>,
    pub fit: LinearFit,
}

/// For each size, draws a seeded random subset, then `repetitions` times
/// initializes a fresh network and times one training epoch on it. The
/// trained network of the last repetition is evaluated on `test` after the
/// clock has stopped. Runs on the calling thread only.
#[allow(clippy::too_many_arguments)]
pub fn run_timing_bench(
    spec: &NetworkSpec,
    train_config: &TrainConfig,
    train: &Dataset,
    test: Option<&Dataset>,
    sizes: &[usize],
    repetitions: usize,
    seed: u64,
    observer: &mut dyn BenchObserver,
) -> Result<BenchReport> {
    crate::config::check_sizes(sizes).map_err(|m| ExperimentError::Runtime(format!("bench sizes: {m}")))?;
    if repetitions == 0 {
        return Err(ExperimentError::Runtime("bench needs at least one repetition".into()));
    }
    if let Some(&too_big) = sizes.iter().find(|&&s| s > train.len()) {
        return Err(ExperimentError::Runtime(format!(
            "bench size {too_big} exceeds the {} training samples",
            train.len()
        )));
    }
    let mut records = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let mut rng = seeded_rng(mix_seed(seed, size as u64));
        let view = train.subset(sample(&mut rng, train.len(), size).into_vec())?;
        let mut runs = Vec::with_capacity(repetitions);
        let mut last = None;
        for rep in 0..repetitions {
            let mut model = TrainedModel::init(spec, &mut rng);
            let mut sgd = Sgd::new(train_config.clone());
            observer.timed_start(size, rep);
            let start = Instant::now();
            train_epoch(&mut model, &view, &mut sgd, &mut rng)?;
            let ms = start.elapsed().as_secs_f64() * 1e3;
            observer.timed_end(size, rep, ms);
            runs.push(ms);
            last = Some(model);
        }
        if let (Some(test), Some(model)) = (test, last) {
            let acc = evaluate_accuracy(&model, &test.view())?;
            observer.evaluated(size, acc);
        }
        records.push(TimingRecord::from_runs(size, runs));
    }
    let xs: Vec<f64> = records.iter().map(|r| r.size as f64).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.mean_ms).collect();
    let fit = fit_line(&xs, &ys).unwrap_or(LinearFit {
        slope: f64::NAN,
        intercept: f64::NAN,
        r_squared: f64::NAN,
    });
    Ok(BenchReport { records, fit })
}

pub const TIMING_HEADER: &str = "size,runs,mean_ms,std_ms";

pub fn timing_csv(records: &[TimingRecord]) -> String {
    let mut s = String::from(TIMING_HEADER);
    s.push('\n');
    for r in records {
        let _ = writeln!(s, "{},{},{:.6},{:.6}", r.size, r.runs_ms.len(), r.mean_ms, r.std_ms);
    }
    s
}

pub fn timing_runs_csv(records: &[TimingRecord]) -> String {
    let mut s = String::from("size,run,ms\n");
    for r in records {
        for (i, ms) in r.runs_ms.iter().enumerate() {
            let _ = writeln!(s, "{},{i},{ms:.6}", r.size);
        }
    }
    s
}

/// Writes `timing.csv`, `timing_runs.csv`, `timing_fit.csv` and `timing.svg`.
pub fn write_bench(out: &Path, report: &BenchReport) -> Result<()> {
    write_file(&out.join("timing.csv"), timing_csv(&report.records))?;
    write_file(&out.join("timing_runs.csv"), timing_runs_csv(&report.records))?;
    let f = report.fit;
    write_file(
        &out.join("timing_fit.csv"),
        format!(
            "slope_ms_per_sample,intercept_ms,r_squared\n{:.9},{:.6},{:.6}\n",
            f.slope, f.intercept, f.r_squared
        ),
    )?;
    let series = Series {
        name: "epoch time".into(),
        points: report.records.iter().map(|r| (r.size as f64, r.mean_ms)).collect(),
    };
    write_file(&out.join("timing.svg"), render_svg(&[series], PlotKind::TimingLine))
}

#[cfg(test)]
mod tests {
    use super::*;
    use subsevo_core::data::make_synthetic;

    #[test]
    fn fit_recovers_exact_line() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x + 2.0).collect();
        let f = fit_line(&xs, &ys).unwrap();
        assert!((f.slope - 3.0).abs() < 1e-12 && (f.intercept - 2.0).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        assert!(fit_line(&[1.0, 1.0], &[2.0, 3.0]).is_none());
    }

    #[test]
    fn fit_matches_hand_computation() {
        // x = [0, 1, 2], y = [1, 2, 4]: slope 1.5, intercept 5/6,
        // residuals [1/6, -1/3, 1/6], SSres = 1/6, SStot = 14/3.
        let f = fit_line(&[0.0, 1.0, 2.0], &[1.0, 2.0, 4.0]).unwrap();
        assert!((f.slope - 1.5).abs() < 1e-12);
        assert!((f.intercept - 5.0 / 6.0).abs() < 1e-12);
        assert!((f.r_squared - (1.0 - (1.0 / 6.0) / (14.0 / 3.0))).abs() < 1e-12);
    }

    #[test]
    fn record_statistics_are_recomputable() {
        let r = TimingRecord::from_runs(10, vec![2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]);
        assert!((r.mean_ms - 5.0).abs() < 1e-9);
        assert!((r.std_ms - (32.0f64 / 7.0).sqrt()).abs() < 1e-9);
    }

    #[derive(Default)]
    struct Probe {
        inside: bool,
        evaluated_inside: bool,
        timed: usize,
        evaluations: usize,
    }

    impl BenchObserver for Probe {
        fn timed_start(&mut self, _: usize, _: usize) {
            self.inside = true;
            self.timed += 1;
        }
        fn timed_end(&mut self, _: usize, _: usize, _: f64) {
            self.inside = false;
        }
        fn evaluated(&mut self, _: usize, _: f64) {
            self.evaluated_inside |= self.inside;
            self.evaluations += 1;
        }
    }

    #[test]
    fn evaluation_stays_outside_timed_region() {
        let train = make_synthetic(3, 20, 6, 0.2, 1).unwrap();
        let test = make_synthetic(3, 5, 6, 0.2, 2).unwrap();
        let spec = NetworkSpec::linear(train.sample_shape(), 3).unwrap();
        let mut probe = Probe::default();
        let report = run_timing_bench(
            &spec,
            &TrainConfig::default(),
            &train,
            Some(&test),
            &[10, 20, 40],
            3,
            0,
            &mut probe,
        )
        .unwrap();
        assert_eq!(probe.timed, 9);
        assert_eq!(probe.evaluations, 3);
        assert!(!probe.evaluated_inside);
        assert_eq!(report.records.len(), 3);
        assert!(run_timing_bench(
            &spec,
            &TrainConfig::default(),
            &train,
            None,
            &[10, 10],
            1,
            0,
            &mut NoObserver
        )
        .is_err());
        assert!(run_timing_bench(
            &spec,
            &TrainConfig::default(),
            &train,
            None,
            &[100],
            1,
            0,
            &mut NoObserver
        )
        .is_err());
    }
}
