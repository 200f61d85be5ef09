use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::experiment::config::ExperimentConfig;
use crate::experiment::pulse::PulseSampler;
use crate::experiment::tally::{CoincidenceRates, CoincidenceTally};

/// Plateau points lie at least this many overlap scales from zero delay.
pub const PLATEAU_SCALES: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub delay_fs: f64,
    /// Raw counts; absent for analytic rows.
    pub tally: Option<CoincidenceTally>,
    pub rates: CoincidenceRates,
    pub errors: CoincidenceRates,
    /// Three-fold rates after background subtraction, equal to the raw ones before.
    pub d1f1f2_corr: f64,
    pub d2f1f2_corr: f64,
    pub err_d1f1f2_corr: f64,
    pub err_d2f1f2_corr: f64,
}

impl ScanRow {
    pub fn new(
        delay_fs: f64,
        tally: Option<CoincidenceTally>,
        rates: CoincidenceRates,
        errors: CoincidenceRates,
    ) -> Self {
        Self {
            delay_fs,
            tally,
            rates,
            errors,
            d1f1f2_corr: rates.d1f1f2,
            d2f1f2_corr: rates.d2f1f2,
            err_d1f1f2_corr: errors.d1f1f2,
            err_d2f1f2_corr: errors.d2f1f2,
        }
    }

    pub fn from_tally(delay_fs: f64, tally: CoincidenceTally) -> Self {
        Self::new(delay_fs, Some(tally), tally.rates(), tally.errors())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub rows: Vec<ScanRow>,
    /// `|delay|` from which rows count as plateau.
    pub plateau_threshold_fs: f64,
    pub background_subtracted: bool,
}

#[derive(Serialize)]
struct CsvRecord {
    delay_fs: f64,
    f1f2: f64,
    d1f1f2: f64,
    d2f1f2: f64,
    d1f1f2_corr: f64,
    d2f1f2_corr: f64,
    p_d1f1f2: f64,
    p_d2f1f2: f64,
    err_f1f2: f64,
    err_d1f1f2: f64,
    err_d2f1f2: f64,
    err_d1f1f2_corr: f64,
    err_d2f1f2_corr: f64,
    err_p_d1f1f2: f64,
    err_p_d2f1f2: f64,
}

impl ScanResult {
    pub fn delays(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.delay_fs).collect()
    }

    pub fn row_at(&self, delay_fs: f64) -> Option<&ScanRow> {
        self.rows
            .iter()
            .find(|r| (r.delay_fs - delay_fs).abs() < 1e-9)
    }

    pub fn plateau_rows(&self) -> impl Iterator<Item = &ScanRow> {
        let t = self.plateau_threshold_fs;
        self.rows.iter().filter(move |r| r.delay_fs.abs() >= t)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.rows {
            w.serialize(CsvRecord {
                delay_fs: r.delay_fs,
                f1f2: r.rates.f1f2,
                d1f1f2: r.rates.d1f1f2,
                d2f1f2: r.rates.d2f1f2,
                d1f1f2_corr: r.d1f1f2_corr,
                d2f1f2_corr: r.d2f1f2_corr,
                p_d1f1f2: r.rates.pd1f1f2,
                p_d2f1f2: r.rates.pd2f1f2,
                err_f1f2: r.errors.f1f2,
                err_d1f1f2: r.errors.d1f1f2,
                err_d2f1f2: r.errors.d2f1f2,
                err_d1f1f2_corr: r.err_d1f1f2_corr,
                err_d2f1f2_corr: r.err_d2f1f2_corr,
                err_p_d1f1f2: r.errors.pd1f1f2,
                err_p_d2f1f2: r.errors.pd2f1f2,
            })?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path.as_ref())?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

pub fn plateau_threshold(config: &ExperimentConfig) -> f64 {
    PLATEAU_SCALES * config.overlap_model.scale_fs()
}

/// Tally `pulses` pulses at one delay using RNG stream `stream`.
pub fn run_delay(
    config: &ExperimentConfig,
    delay_fs: f64,
    stream: u64,
    pulses: u64,
) -> CoincidenceTally {
    let sampler = PulseSampler::new(config, delay_fs);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(stream);
    let mut tally = CoincidenceTally::default();
    for _ in 0..pulses {
        tally.record(&sampler.sample(&mut rng));
    }
    tally
}

/// Monte Carlo scan over the configured delays, one RNG stream per delay index.
pub fn run_scan(config: &ExperimentConfig) -> Result<ScanResult> {
    let threads = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    run_scan_threaded(config, threads)
}

/// As [`run_scan`] with an explicit worker count. The result does not depend on it.
pub fn run_scan_threaded(config: &ExperimentConfig, threads: usize) -> Result<ScanResult> {
    config.validate()?;
    let delays = &config.delays_fs;
    let threads = threads.clamp(1, delays.len());
    let mut tallies = vec![CoincidenceTally::default(); delays.len()];
    if threads == 1 {
        for (i, d) in delays.iter().enumerate() {
            tallies[i] = run_delay(config, *d, i as u64, config.pulses_per_delay);
        }
    } else {
        std::thread::scope(|s| {
            for (w, chunk) in tallies
                .chunks_mut(delays.len().div_ceil(threads))
                .enumerate()
            {
                let start = w * delays.len().div_ceil(threads);
                s.spawn(move || {
                    for (k, slot) in chunk.iter_mut().enumerate() {
                        let i = start + k;
                        *slot = run_delay(config, delays[i], i as u64, config.pulses_per_delay);
                    }
                });
            }
        });
    }
    let rows = delays
        .iter()
        .zip(tallies)
        .map(|(d, t)| ScanRow::from_tally(*d, t))
        .collect();
    Ok(ScanResult {
        rows,
        plateau_threshold_fs: plateau_threshold(config),
        background_subtracted: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            delays_fs: vec![-1200.0, 0.0, 1200.0],
            pulses_per_delay: 20_000,
            source: crate::experiment::config::SourceConfig {
                mean_pairs_pass1: 0.4,
                mean_pairs_pass2: 0.4,
                ..Default::default()
            },
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn deterministic_and_thread_independent() {
        let c = small();
        let a = run_scan_threaded(&c, 1).unwrap();
        let b = run_scan_threaded(&c, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_csv_string().unwrap(), b.to_csv_string().unwrap());
        let mut c2 = c.clone();
        c2.seed += 1;
        assert_ne!(a, run_scan_threaded(&c2, 1).unwrap());
    }

    #[test]
    fn csv_header_and_hierarchy() {
        let r = run_scan(&small()).unwrap();
        let csv = r.to_csv_string().unwrap();
        let header = csv.lines().next().unwrap();
        assert_eq!(
            header,
            "delay_fs,f1f2,d1f1f2,d2f1f2,d1f1f2_corr,d2f1f2_corr,p_d1f1f2,p_d2f1f2,err_f1f2,err_d1f1f2,\
             err_d2f1f2,err_d1f1f2_corr,err_d2f1f2_corr,err_p_d1f1f2,err_p_d2f1f2"
        );
        assert_eq!(csv.lines().count(), 4);
        for row in &r.rows {
            assert!(row.tally.unwrap().is_consistent());
            assert_eq!(row.d1f1f2_corr, row.rates.d1f1f2);
        }
    }
}
