//! Monte Carlo simulation of one pump pulse.
//!
//! Photon layout for `n1` pass-1 pairs and `n2` pass-2 pairs: photon 2 of
//! pair `i` is at index `2i`, its partner 3 at `2i + 1`; photon 1 of pair `j`
//! is at `2 n1 + 2j`, its partner 4 at `2 n1 + 2j + 1`. Every pair starts in
//! the singlet.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::experiment::config::ExperimentConfig;
use crate::interference::antisymmetric_projector;
use crate::polarization::{bell_state, measure_trusted, BellOutcome, Operator, PureState};

/// Detectors that fired during one pulse.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClickSet {
    pub f1: bool,
    pub f2: bool,
    pub d1: bool,
    pub d2: bool,
    pub p: bool,
}

impl ClickSet {
    pub fn is_empty(&self) -> bool {
        !(self.f1 || self.f2 || self.d1 || self.d2 || self.p)
    }

    pub fn f1f2(&self) -> bool {
        self.f1 && self.f2
    }
}

/// Photon numbers arriving at each detector before efficiency thinning.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PhotonCounts {
    pub f1: usize,
    pub f2: usize,
    pub d1: usize,
    pub d2: usize,
    pub p: usize,
}

/// Per-delay sampler with the projector sets and singlet products prepared once.
#[derive(Debug, Clone)]
pub struct PulseSampler {
    pass1: Vec<f64>,
    pass2: Vec<f64>,
    v_sqr: f64,
    blocked: bool,
    eta: [f64; 5],
    prep: [Operator<f64>; 2],
    bs: [Operator<f64>; 2],
    bob: [Operator<f64>; 2],
    /// `singlets[k]` holds `k + 1` singlet pairs.
    singlets: Vec<PureState<f64>>,
}

fn sample_index<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (k, w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return k;
        }
    }
    weights.len() - 1
}

/// Threshold detection of `n` photons with efficiency `eta`.
fn detect<R: Rng + ?Sized>(n: usize, eta: f64, rng: &mut R) -> bool {
    if n == 0 {
        return false;
    }
    if eta >= 1.0 {
        return true;
    }
    (0..n).any(|_| rng.random::<f64>() < eta)
}

impl PulseSampler {
    pub fn new(config: &ExperimentConfig, delay_fs: f64) -> Self {
        let v = config.overlap_model.overlap(delay_fs);
        let chi = config.prep.chi.state::<f64>();
        let basis = config.analysis();
        let anti = antisymmetric_projector::<f64>();
        let sym = Operator::identity(2)
            .sub(&anti)
            .expect("two-photon operators");
        let d = config.detectors;
        let max_pairs = 2 * config.source.max_pairs_per_pass;
        let singlet = bell_state::<f64>(BellOutcome::PsiMinus);
        let mut singlets: Vec<PureState<f64>> = vec![singlet.clone()];
        for _ in 1..max_pairs {
            let next = singlets.last().expect("nonempty").tensor(&singlet);
            singlets.push(next);
        }
        Self {
            pass1: config.source.pair_distribution(1),
            pass2: config.source.pair_distribution(2),
            v_sqr: v * v,
            blocked: config.block_photon1_path,
            eta: [d.f1, d.f2, d.d1, d.d2, d.p],
            prep: [
                Operator::projector(&chi),
                Operator::projector(&config.prep.chi.orthogonal().state()),
            ],
            bs: [anti, sym],
            bob: [
                Operator::projector(&basis.d2.state()),
                Operator::projector(&basis.d1.state()),
            ],
            singlets,
        }
    }

    /// Sample photon arrivals at every detector for one pulse.
    pub fn sample_counts<R: Rng + ?Sized>(&self, rng: &mut R) -> PhotonCounts {
        let n1 = sample_index(&self.pass1, rng);
        let n2 = sample_index(&self.pass2, rng);
        let mut counts = PhotonCounts {
            p: n2,
            ..PhotonCounts::default()
        };
        if n1 + n2 == 0 {
            return counts;
        }
        let mut state = self.singlets[n1 + n2 - 1].clone();

        let mut port1: Vec<usize> = Vec::with_capacity(n2);
        if !self.blocked {
            for j in 0..n2 {
                let idx = 2 * n1 + 2 * j;
                let m = measure_trusted(&state, &self.prep, &[idx], rng);
                state = m.state;
                if m.outcome == 0 {
                    port1.push(idx);
                }
            }
        }
        let mut port2: Vec<usize> = (0..n1).map(|i| 2 * i).collect();

        // uniform random matching between the two input ports
        let (longer, shorter) = if port1.len() >= port2.len() {
            (&mut port1, &port2)
        } else {
            (&mut port2, &port1)
        };
        longer.shuffle(rng);
        let matched = shorter.len();
        for (&a, &b) in longer.iter().zip(shorter.iter()) {
            if rng.random::<f64>() < self.v_sqr {
                let m = measure_trusted(&state, &self.bs, &[a, b], rng);
                state = m.state;
                if m.outcome == 0 {
                    counts.f1 += 1;
                    counts.f2 += 1;
                } else if rng.random::<bool>() {
                    counts.f1 += 2;
                } else {
                    counts.f2 += 2;
                }
            } else {
                for _ in 0..2 {
                    if rng.random::<bool>() {
                        counts.f1 += 1;
                    } else {
                        counts.f2 += 1;
                    }
                }
            }
        }
        for _ in matched..longer.len() {
            if rng.random::<bool>() {
                counts.f1 += 1;
            } else {
                counts.f2 += 1;
            }
        }

        for i in 0..n1 {
            let m = measure_trusted(&state, &self.bob, &[2 * i + 1], rng);
            state = m.state;
            if m.outcome == 0 {
                counts.d2 += 1;
            } else {
                counts.d1 += 1;
            }
        }
        counts
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ClickSet {
        let n = self.sample_counts(rng);
        ClickSet {
            f1: detect(n.f1, self.eta[0], rng),
            f2: detect(n.f2, self.eta[1], rng),
            d1: detect(n.d1, self.eta[2], rng),
            d2: detect(n.d2, self.eta[3], rng),
            p: detect(n.p, self.eta[4], rng),
        }
    }
}

/// One pulse at the given delay. Building a [`PulseSampler`] once per delay
/// is cheaper for repeated sampling.
pub fn simulate_pulse<R: Rng + ?Sized>(
    config: &ExperimentConfig,
    delay_fs: f64,
    rng: &mut R,
) -> ClickSet {
    PulseSampler::new(config, delay_fs).sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polarization::PolarizationSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn base() -> ExperimentConfig {
        ExperimentConfig::default().with_chi(PolarizationSpec::Diagonal)
    }

    fn sampler_with(n1: usize, n2: usize, config: &ExperimentConfig, delay: f64) -> PulseSampler {
        let mut s = PulseSampler::new(config, delay);
        s.pass1 = (0..=2).map(|k| if k == n1 { 1.0 } else { 0.0 }).collect();
        s.pass2 = (0..=2).map(|k| if k == n2 { 1.0 } else { 0.0 }).collect();
        s
    }

    #[test]
    fn vacuum_gives_no_clicks() {
        let c = base();
        let s = sampler_with(0, 0, &c, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            assert!(s.sample(&mut rng).is_empty());
        }
    }

    #[test]
    fn single_pass1_pair_with_blocked_path_never_coincides() {
        let c = base().blocked();
        let s = sampler_with(1, 1, &c, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..2000 {
            assert!(!s.sample(&mut rng).f1f2());
        }
        // a pass-1 double pair does produce coincidences with the path blocked
        let s = sampler_with(2, 0, &c, 0.0);
        assert!((0..2000).any(|_| {
            let k = s.sample(&mut rng);
            k.f1f2() && (k.d1 || k.d2)
        }));
    }

    #[test]
    fn orthogonal_threefold_vanishes_at_perfect_overlap() {
        let c = base();
        let s = sampler_with(1, 1, &c, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut parallel = 0;
        for _ in 0..20_000 {
            let k = s.sample(&mut rng);
            assert!(!(k.f1f2() && k.d1));
            parallel += usize::from(k.f1f2() && k.d2);
        }
        // P(prep) · P(coinc | prep) = ½ · ¼
        assert!((parallel as f64 / 20_000.0 - 0.125).abs() < 0.01);
    }

    #[test]
    fn trigger_follows_pass2() {
        let c = base();
        let s = sampler_with(0, 2, &c, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        assert!((0..100).all(|_| s.sample(&mut rng).p));
    }
}
