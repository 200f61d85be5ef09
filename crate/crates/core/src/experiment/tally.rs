use serde::{Deserialize, Serialize};

use crate::experiment::pulse::ClickSet;

/// Coincidence counts accumulated at one delay.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoincidenceTally {
    pub pulses: u64,
    pub f1f2: u64,
    pub d1f1f2: u64,
    pub d2f1f2: u64,
    pub p: u64,
    pub pf1f2: u64,
    pub pd1f1f2: u64,
    pub pd2f1f2: u64,
}

/// Rates per pulse for each coincidence channel.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CoincidenceRates {
    pub f1f2: f64,
    pub d1f1f2: f64,
    pub d2f1f2: f64,
    pub p: f64,
    pub pf1f2: f64,
    pub pd1f1f2: f64,
    pub pd2f1f2: f64,
}

impl CoincidenceRates {
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            f1f2: f(self.f1f2),
            d1f1f2: f(self.d1f1f2),
            d2f1f2: f(self.d2f1f2),
            p: f(self.p),
            pf1f2: f(self.pf1f2),
            pd1f1f2: f(self.pd1f1f2),
            pd2f1f2: f(self.pd2f1f2),
        }
    }

    pub fn as_array(&self) -> [f64; 7] {
        [
            self.f1f2,
            self.d1f1f2,
            self.d2f1f2,
            self.p,
            self.pf1f2,
            self.pd1f1f2,
            self.pd2f1f2,
        ]
    }
}

impl CoincidenceTally {
    pub fn record(&mut self, k: &ClickSet) {
        self.pulses += 1;
        let ff = k.f1 && k.f2;
        self.p += u64::from(k.p);
        if !ff {
            return;
        }
        self.f1f2 += 1;
        self.d1f1f2 += u64::from(k.d1);
        self.d2f1f2 += u64::from(k.d2);
        if k.p {
            self.pf1f2 += 1;
            self.pd1f1f2 += u64::from(k.d1);
            self.pd2f1f2 += u64::from(k.d2);
        }
    }

    /// Counts add, so merging is associative and commutative.
    pub fn merge(&self, other: &Self) -> Self {
        Self {
            pulses: self.pulses + other.pulses,
            f1f2: self.f1f2 + other.f1f2,
            d1f1f2: self.d1f1f2 + other.d1f1f2,
            d2f1f2: self.d2f1f2 + other.d2f1f2,
            p: self.p + other.p,
            pf1f2: self.pf1f2 + other.pf1f2,
            pd1f1f2: self.pd1f1f2 + other.pd1f1f2,
            pd2f1f2: self.pd2f1f2 + other.pd2f1f2,
        }
    }

    /// Every coincidence count is bounded by each count it contains.
    pub fn is_consistent(&self) -> bool {
        self.f1f2 <= self.pulses
            && self.p <= self.pulses
            && self.d1f1f2 <= self.f1f2
            && self.d2f1f2 <= self.f1f2
            && self.pf1f2 <= self.f1f2
            && self.pf1f2 <= self.p
            && self.pd1f1f2 <= self.d1f1f2
            && self.pd1f1f2 <= self.pf1f2
            && self.pd2f1f2 <= self.d2f1f2
            && self.pd2f1f2 <= self.pf1f2
    }

    fn counts(&self) -> CoincidenceRates {
        CoincidenceRates {
            f1f2: self.f1f2 as f64,
            d1f1f2: self.d1f1f2 as f64,
            d2f1f2: self.d2f1f2 as f64,
            p: self.p as f64,
            pf1f2: self.pf1f2 as f64,
            pd1f1f2: self.pd1f1f2 as f64,
            pd2f1f2: self.pd2f1f2 as f64,
        }
    }

    pub fn rates(&self) -> CoincidenceRates {
        let n = self.pulses.max(1) as f64;
        self.counts().map(|c| c / n)
    }

    /// `√N / pulses` for each channel.
    pub fn errors(&self) -> CoincidenceRates {
        let n = self.pulses.max(1) as f64;
        self.counts().map(|c| c.sqrt() / n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_and_merge() {
        let mut a = CoincidenceTally::default();
        a.record(&ClickSet {
            f1: true,
            f2: true,
            d1: true,
            d2: false,
            p: true,
        });
        a.record(&ClickSet {
            f1: true,
            f2: false,
            d1: true,
            d2: true,
            p: false,
        });
        let mut b = CoincidenceTally::default();
        b.record(&ClickSet {
            f1: true,
            f2: true,
            d1: false,
            d2: true,
            p: false,
        });
        let ab = a.merge(&b);
        assert_eq!(ab, b.merge(&a));
        assert_eq!(
            (ab.pulses, ab.f1f2, ab.d1f1f2, ab.d2f1f2, ab.p, ab.pd1f1f2, ab.pd2f1f2),
            (3, 2, 1, 1, 1, 1, 0)
        );
        assert!(ab.is_consistent());
        assert!((ab.rates().f1f2 - 2.0 / 3.0).abs() < 1e-15);
        assert!((ab.errors().d1f1f2 - 1.0 / 3.0).abs() < 1e-15);
    }
}
