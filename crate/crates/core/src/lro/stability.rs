use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dense::frobenius_distance;
use crate::error::{Error, Result};

use super::branches::reduced_projector;
use super::cost::CostModel;
use super::optimize::ReductionReport;
use super::problem::ReductionProblem;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityConfig {
    /// Relative perturbation magnitudes in percent.
    pub magnitudes_percent: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
}

impl Default for StabilityConfig {
    fn default() -> Self {
        Self { magnitudes_percent: vec![0.0, 1e-6, 1e-4, 1e-2, 1.0, 10.0], samples: 32, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityRow {
    pub delta_percent: f64,
    pub mean_density_err: f64,
    pub max_density_err: f64,
    pub mean_spectral_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub rows: Vec<StabilityRow>,
    pub samples: usize,
    pub seed: u64,
}

impl StabilityReport {
    /// `delta_percent,mean_density_err,max_density_err,mean_spectral_err`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["delta_percent", "mean_density_err", "max_density_err", "mean_spectral_err"])?;
        for r in &self.rows {
            w.write_record(
                [r.delta_percent, r.mean_density_err, r.max_density_err, r.mean_spectral_err].map(|x| format!("{x:e}")),
            )?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn row(&self, delta_percent: f64) -> Option<&StabilityRow> {
        self.rows.iter().find(|r| r.delta_percent == delta_percent)
    }
}

/// Ground-group density error `||n^p - n^r||_F / ||n^p||_F` and spectral
/// error over the tracked levels, at coefficients `d`.
fn errors(model: &CostModel, d: &[f64]) -> (f64, f64) {
    let p = model.problem();
    let spec = model.spectrum(d);
    let ground = model.tracked_groups()[0].clone();
    let reduced = reduced_projector(&spec.eigenvectors, ground.clone(), p.n_physical(), p.n_ancilla);
    let density = frobenius_distance(model.target_projector(0), &reduced) / (ground.len() as f64).sqrt();
    let target = &model.target_spectrum().eigenvalues;
    let spectral = (0..p.i_m).map(|i| (spec.eigenvalues[i] - target[i]).abs()).sum();
    (density, spectral)
}

/// Perturbs every coefficient by an independent uniform relative amount in
/// `[-delta, delta]` and records the resulting errors.
pub fn stability_sweep(
    report: &ReductionReport,
    problem: &ReductionProblem,
    cfg: &StabilityConfig,
) -> Result<StabilityReport> {
    if !report.converged {
        return Err(Error::NotConverged { cost: report.cost.total });
    }
    if cfg.samples == 0 {
        return Err(Error::InvalidInput("samples must be positive".into()));
    }
    let model = CostModel::new(problem)?;
    if report.d.len() != model.dim() {
        return Err(Error::LengthMismatch { expected: model.dim(), got: report.d.len() });
    }
    let rows = cfg
        .magnitudes_percent
        .par_iter()
        .enumerate()
        .map(|(k, &pct)| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(k as u64);
            let frac = pct / 100.0;
            let (mut sum_d, mut max_d, mut sum_s) = (0.0, 0.0f64, 0.0);
            for _ in 0..cfg.samples {
                let d: Vec<f64> =
                    report.d.iter().map(|&x| x * (1.0 + frac * rng.gen_range(-1.0..=1.0))).collect();
                let (de, se) = errors(&model, &d);
                sum_d += de;
                max_d = max_d.max(de);
                sum_s += se;
            }
            let n = cfg.samples as f64;
            StabilityRow { delta_percent: pct, mean_density_err: sum_d / n, max_density_err: max_d, mean_spectral_err: sum_s / n }
        })
        .collect();
    Ok(StabilityReport { rows, samples: cfg.samples, seed: cfg.seed })
}
