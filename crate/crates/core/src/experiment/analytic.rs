//! Exact enumeration of the pulse model, used as the oracle for the Monte Carlo engine.
//!
//! Every emission configuration up to two pairs per pass is expanded over
//! polarizer outcomes, beam-splitter pairings, per-pair routing elements and
//! Bob's analyzer outcomes. All operators act on disjoint photons, so each
//! branch weight is a single expectation value in the product of singlets.

use crate::error::{Error, Result};
use crate::experiment::config::ExperimentConfig;
use crate::experiment::scan::{plateau_threshold, ScanResult, ScanRow};
use crate::experiment::tally::CoincidenceRates;
use crate::interference::CoincidencePovm;
use crate::polarization::{bell_state, BellOutcome, Operator, PureState};

/// Largest number of pairs per pass the enumeration accepts.
pub const MAX_PAIRS_ANALYTIC: usize = 2;

fn click(n: usize, eta: f64) -> f64 {
    1.0 - (1.0 - eta).powi(n as i32)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Ordered selections of `k` distinct items out of `0..n`.
fn selections(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for s in &out {
            for i in (0..n).filter(|i| !s.contains(i)) {
                let mut t = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

struct Counts {
    f1: usize,
    f2: usize,
}

struct Model<'a> {
    config: &'a ExperimentConfig,
    prep: [Operator<f64>; 2],
    /// split, both to f1, both to f2
    pair: [(Operator<f64>, Counts); 3],
    bob: [Operator<f64>; 2],
    rates: CoincidenceRates,
}

impl Model<'_> {
    fn accumulate(&mut self, w: f64, f1: usize, f2: usize, d1: usize, d2: usize, p: usize) {
        let d = &self.config.detectors;
        let ff = w * click(f1, d.f1) * click(f2, d.f2);
        let pp = click(p, d.p);
        let (c1, c2) = (click(d1, d.d1), click(d2, d.d2));
        let r = &mut self.rates;
        r.p += w * pp;
        r.f1f2 += ff;
        r.d1f1f2 += ff * c1;
        r.d2f1f2 += ff * c2;
        r.pf1f2 += ff * pp;
        r.pd1f1f2 += ff * c1 * pp;
        r.pd2f1f2 += ff * c2 * pp;
    }

    fn emission(&mut self, n1: usize, n2: usize, weight: f64, psi: &PureState<f64>) {
        let masks = if self.config.block_photon1_path {
            1
        } else {
            1usize << n2
        };
        for mask in 0..masks {
            let mut phi = psi.clone();
            let mut port1 = Vec::new();
            if !self.config.block_photon1_path {
                for j in 0..n2 {
                    let idx = 2 * n1 + 2 * j;
                    let pass = mask >> j & 1 == 1;
                    phi = phi.apply_raw(&self.prep[usize::from(!pass)], &[idx]);
                    if pass {
                        port1.push(idx);
                    }
                }
            }
            let port2: Vec<usize> = (0..n1).map(|i| 2 * i).collect();
            let (longer, shorter) = if port1.len() >= port2.len() {
                (&port1, &port2)
            } else {
                (&port2, &port1)
            };
            let matchings = selections(longer.len(), shorter.len());
            let w_match = weight / matchings.len() as f64;
            for sel in &matchings {
                let pairs: Vec<[usize; 2]> = sel
                    .iter()
                    .zip(shorter)
                    .map(|(&i, &b)| [longer[i], b])
                    .collect();
                let unmatched = longer.len() - shorter.len();
                self.routing(n1, n2, w_match, &phi, psi, &pairs, unmatched);
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn routing(
        &mut self,
        n1: usize,
        n2: usize,
        weight: f64,
        phi: &PureState<f64>,
        psi: &PureState<f64>,
        pairs: &[[usize; 2]],
        unmatched: usize,
    ) {
        let k = pairs.len();
        for code in 0..3usize.pow(k as u32) {
            let mut chi = phi.clone();
            let (mut f1, mut f2) = (0, 0);
            let mut c = code;
            for pair in pairs {
                let (op, counts) = &self.pair[c % 3];
                c /= 3;
                chi = chi.apply_raw(op, pair);
                f1 += counts.f1;
                f2 += counts.f2;
            }
            for bob_mask in 0..1usize << n1 {
                let mut xi = chi.clone();
                let d2 = bob_mask.count_ones() as usize;
                for i in 0..n1 {
                    xi = xi.apply_raw(&self.bob[usize::from(bob_mask >> i & 1 == 0)], &[2 * i + 1]);
                }
                let q = psi.inner(&xi).expect("same dimension").re;
                if q <= 0.0 {
                    continue;
                }
                for to_f1 in 0..=unmatched {
                    let w = weight * q * binomial(unmatched, to_f1) / (1u64 << unmatched) as f64;
                    self.accumulate(w, f1 + to_f1, f2 + unmatched - to_f1, n1 - d2, d2, n2);
                }
            }
        }
    }
}

/// Exact per-pulse rates at the given delay.
pub fn analytic_rates(config: &ExperimentConfig, delay_fs: f64) -> Result<CoincidenceRates> {
    analytic_rates_at_overlap(config, config.overlap_model.overlap(delay_fs))
}

/// Exact per-pulse rates at mode overlap `v`.
pub fn analytic_rates_at_overlap(config: &ExperimentConfig, v: f64) -> Result<CoincidenceRates> {
    let max = config.source.max_pairs_per_pass;
    if max > MAX_PAIRS_ANALYTIC {
        return Err(Error::TooManyPairs { max_pairs: max });
    }
    let povm = CoincidencePovm::new(v)?;
    let chi = config.prep.chi;
    let basis = config.analysis();
    let one_port = povm.element_one_port();
    let mut model = Model {
        config,
        prep: [
            Operator::projector(&chi.state()),
            Operator::projector(&chi.orthogonal().state()),
        ],
        pair: [
            (povm.element_coinc().clone(), Counts { f1: 1, f2: 1 }),
            (one_port.clone(), Counts { f1: 2, f2: 0 }),
            (one_port, Counts { f1: 0, f2: 2 }),
        ],
        // bit set means d2
        bob: [
            Operator::projector(&basis.d2.state()),
            Operator::projector(&basis.d1.state()),
        ],
        rates: CoincidenceRates::default(),
    };
    let p1 = config.source.pair_distribution(1);
    let p2 = config.source.pair_distribution(2);
    let singlet = bell_state::<f64>(BellOutcome::PsiMinus);
    let mut products = vec![singlet.clone()];
    for _ in 1..2 * max {
        let next = products.last().expect("nonempty").tensor(&singlet);
        products.push(next);
    }
    for (n1, w1) in p1.iter().enumerate() {
        for (n2, w2) in p2.iter().enumerate() {
            if n1 + n2 == 0 {
                continue;
            }
            model.emission(n1, n2, w1 * w2, &products[n1 + n2 - 1]);
        }
    }
    Ok(model.rates)
}

/// Exact rates on the configured delay grid, with zero errors.
pub fn analytic_scan(config: &ExperimentConfig) -> Result<ScanResult> {
    config.validate()?;
    let rows = config
        .delays_fs
        .iter()
        .map(|&d| {
            Ok(ScanRow::new(
                d,
                None,
                analytic_rates(config, d)?,
                CoincidenceRates::default(),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanResult {
        rows,
        plateau_threshold_fs: plateau_threshold(config),
        background_subtracted: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::config::{DetectorConfig, SourceConfig};
    use crate::interference::threefold_rates;
    use crate::polarization::PolarizationSpec;

    fn ideal(chi: PolarizationSpec) -> ExperimentConfig {
        let mut c = ExperimentConfig::default().with_chi(chi);
        c.source = SourceConfig {
            mean_pairs_pass1: 0.5,
            mean_pairs_pass2: 0.5,
            max_pairs_per_pass: 1,
            ..Default::default()
        };
        c
    }

    #[test]
    fn single_pair_reduces_to_threefold_rates() {
        for chi in PolarizationSpec::TABLE {
            let c = ideal(chi);
            let norm = c.signal_probability();
            for v in [0.0, 0.4, 0.9, 1.0] {
                let r = analytic_rates_at_overlap(&c, v).unwrap();
                let (orth, par) = threefold_rates(&chi, v).unwrap();
                assert!((r.d1f1f2 / norm - orth).abs() < 1e-12, "{chi} {v}");
                assert!((r.d2f1f2 / norm - par).abs() < 1e-12);
                assert!((r.pd1f1f2 - r.d1f1f2).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn twofold_halves_at_zero_delay() {
        let c = ideal(PolarizationSpec::Diagonal);
        let far = analytic_rates_at_overlap(&c, 0.0).unwrap();
        let near = analytic_rates_at_overlap(&c, 1.0).unwrap();
        assert!((near.f1f2 - far.f1f2 / 2.0).abs() < 1e-12);
    }

    #[test]
    fn trigger_rate_is_pass2_probability() {
        let c = ExperimentConfig {
            detectors: DetectorConfig::uniform(0.7),
            ..Default::default()
        };
        let r = analytic_rates(&c, 0.0).unwrap();
        let p2 = c.source.pair_distribution(2);
        let expect = p2[1] * 0.7 + p2[2] * (1.0 - 0.09);
        assert!((r.p - expect).abs() < 1e-12);
    }

    #[test]
    fn spurious_channel_needs_pass1_double_pairs() {
        let c = ExperimentConfig::default().blocked();
        let r = analytic_rates(&c, 0.0).unwrap();
        assert!(r.d1f1f2 > 0.0 && r.d2f1f2 > 0.0);
        // the trigger suppresses it to the rate of an extra pass-2 pair
        assert!((r.pd1f1f2 - r.d1f1f2 * r.p).abs() < 1e-15);
        let mut single = c.clone();
        single.source.max_pairs_per_pass = 1;
        let r = analytic_rates(&single, 0.0).unwrap();
        assert_eq!(r.f1f2, 0.0);
    }

    #[test]
    fn hierarchy_holds() {
        for v in [0.0, 0.5, 1.0] {
            let r = analytic_rates_at_overlap(&ExperimentConfig::default(), v).unwrap();
            assert!(
                r.pd1f1f2 <= r.d1f1f2 && r.d1f1f2 <= r.f1f2 && r.pf1f2 <= r.f1f2 && r.pf1f2 <= r.p
            );
        }
    }

    #[test]
    fn too_many_pairs() {
        let mut c = ExperimentConfig::default();
        c.source.max_pairs_per_pass = 3;
        assert_eq!(
            analytic_rates(&c, 0.0).unwrap_err(),
            Error::TooManyPairs { max_pairs: 3 }
        );
    }

    #[test]
    fn selections_count() {
        assert_eq!(selections(2, 1).len(), 2);
        assert_eq!(selections(2, 2).len(), 2);
        assert_eq!(selections(3, 0).len(), 1);
    }
}
