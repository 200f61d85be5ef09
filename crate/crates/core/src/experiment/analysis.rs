use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::config::VisibilityFormula;
use crate::experiment::scan::{ScanResult, ScanRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Channel {
    /// Orthogonal three-fold, background-corrected when available.
    #[serde(rename = "d1f1f2")]
    D1F1F2,
    /// Parallel three-fold, background-corrected when available.
    #[serde(rename = "d2f1f2")]
    D2F1F2,
    #[serde(rename = "fourfold-d1")]
    FourfoldD1,
    #[serde(rename = "fourfold-d2")]
    FourfoldD2,
}

impl Channel {
    pub const ALL: [Channel; 4] = [
        Channel::D1F1F2,
        Channel::D2F1F2,
        Channel::FourfoldD1,
        Channel::FourfoldD2,
    ];

    /// `(rate, error)` of this channel in one row.
    pub fn value(&self, row: &ScanRow) -> (f64, f64) {
        match self {
            Channel::D1F1F2 => (row.d1f1f2_corr, row.err_d1f1f2_corr),
            Channel::D2F1F2 => (row.d2f1f2_corr, row.err_d2f1f2_corr),
            Channel::FourfoldD1 => (row.rates.pd1f1f2, row.errors.pd1f1f2),
            Channel::FourfoldD2 => (row.rates.pd2f1f2, row.errors.pd2f1f2),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Channel::D1F1F2 => "d1f1f2",
            Channel::D2F1F2 => "d2f1f2",
            Channel::FourfoldD1 => "fourfold-d1",
            Channel::FourfoldD2 => "fourfold-d2",
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Channel::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown channel '{s}'")))
    }
}

/// Subtract the blocked-path three-fold rates from the raw ones, row by row.
/// Errors add in quadrature; negative results are kept.
pub fn subtract_background(raw: &ScanResult, blocked: &ScanResult) -> Result<ScanResult> {
    if raw.rows.len() != blocked.rows.len()
        || raw
            .rows
            .iter()
            .zip(&blocked.rows)
            .any(|(a, b)| (a.delay_fs - b.delay_fs).abs() > 1e-9)
    {
        return Err(Error::GridMismatch);
    }
    let rows = raw
        .rows
        .iter()
        .zip(&blocked.rows)
        .map(|(a, b)| ScanRow {
            d1f1f2_corr: a.rates.d1f1f2 - b.rates.d1f1f2,
            d2f1f2_corr: a.rates.d2f1f2 - b.rates.d2f1f2,
            err_d1f1f2_corr: a.errors.d1f1f2.hypot(b.errors.d1f1f2),
            err_d2f1f2_corr: a.errors.d2f1f2.hypot(b.errors.d2f1f2),
            ..a.clone()
        })
        .collect();
    Ok(ScanResult {
        rows,
        plateau_threshold_fs: raw.plateau_threshold_fs,
        background_subtracted: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Visibility {
    pub value: f64,
    pub sigma: f64,
    /// Rate the contrast is measured against and its error.
    pub plateau: (f64, f64),
    /// Rate at zero delay (or the minimum) and its error.
    pub dip: (f64, f64),
}

/// `(high - low)/(high + low)` with first-order error propagation.
fn contrast(high: (f64, f64), low: (f64, f64)) -> Result<Visibility> {
    let (p, sp) = high;
    let (d, sd) = low;
    let s = p + d;
    if s.is_nan() || s <= 0.0 {
        return Err(Error::InsufficientScan("channel has no counts".into()));
    }
    let dp = 2.0 * d / (s * s);
    let dd = -2.0 * p / (s * s);
    Ok(Visibility {
        value: (p - d) / s,
        sigma: (dp * sp).hypot(dd * sd),
        plateau: high,
        dip: low,
    })
}

pub fn visibility(scan: &ScanResult, channel: Channel) -> Result<Visibility> {
    visibility_with(scan, channel, VisibilityFormula::PlateauDip)
}

pub fn visibility_with(
    scan: &ScanResult,
    channel: Channel,
    formula: VisibilityFormula,
) -> Result<Visibility> {
    if scan.rows.len() < 3 {
        return Err(Error::InsufficientScan(format!(
            "{} delays, need at least 3",
            scan.rows.len()
        )));
    }
    match formula {
        VisibilityFormula::PlateauDip => {
            let zero = scan
                .row_at(0.0)
                .ok_or_else(|| Error::InsufficientScan("no zero-delay point".into()))?;
            let plateau: Vec<(f64, f64)> = scan.plateau_rows().map(|r| channel.value(r)).collect();
            if plateau.is_empty() {
                return Err(Error::InsufficientScan(format!(
                    "no delays with |delay| >= {:.1} fs",
                    scan.plateau_threshold_fs
                )));
            }
            let k = plateau.len() as f64;
            let mean = plateau.iter().map(|x| x.0).sum::<f64>() / k;
            let err = plateau.iter().map(|x| x.1 * x.1).sum::<f64>().sqrt() / k;
            contrast((mean, err), channel.value(zero))
        }
        VisibilityFormula::MaxMin => {
            let values: Vec<(f64, f64)> = scan.rows.iter().map(|r| channel.value(r)).collect();
            let max = values
                .iter()
                .copied()
                .fold(
                    (f64::NEG_INFINITY, 0.0),
                    |a, b| if b.0 > a.0 { b } else { a },
                );
            let min =
                values
                    .iter()
                    .copied()
                    .fold((f64::INFINITY, 0.0), |a, b| if b.0 < a.0 { b } else { a });
            contrast(max, min)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::tally::CoincidenceRates;

    fn scan(values: &[(f64, f64)]) -> ScanResult {
        let rows = values
            .iter()
            .map(|&(d, v)| {
                let rates = CoincidenceRates {
                    d1f1f2: v,
                    pd1f1f2: v,
                    ..Default::default()
                };
                let errors = CoincidenceRates {
                    d1f1f2: 0.01,
                    pd1f1f2: 0.01,
                    ..Default::default()
                };
                ScanRow::new(d, None, rates, errors)
            })
            .collect();
        ScanResult {
            rows,
            plateau_threshold_fs: 900.0,
            background_subtracted: false,
        }
    }

    #[test]
    fn plateau_dip_visibility() {
        let s = scan(&[
            (-1200.0, 0.25),
            (-300.0, 0.1),
            (0.0, 0.05),
            (300.0, 0.1),
            (1200.0, 0.25),
        ]);
        let v = visibility(&s, Channel::D1F1F2).unwrap();
        assert!((v.value - 0.2 / 0.3).abs() < 1e-12);
        let expect = ((2.0 * 0.05 / 0.09) * 0.01 / 2f64.sqrt()).hypot(2.0 * 0.25 / 0.09 * 0.01);
        assert!((v.sigma - expect).abs() < 1e-12);
        let ideal = scan(&[(-1200.0, 0.25), (0.0, 0.0), (1200.0, 0.25)]);
        assert_eq!(visibility(&ideal, Channel::FourfoldD1).unwrap().value, 1.0);
    }

    #[test]
    fn max_min_formula() {
        let s = scan(&[(-1200.0, 0.2), (0.0, 0.05), (1200.0, 0.3)]);
        let v = visibility_with(&s, Channel::D1F1F2, VisibilityFormula::MaxMin).unwrap();
        assert!((v.value - 0.25 / 0.35).abs() < 1e-12);
    }

    #[test]
    fn insufficient_scans() {
        assert!(matches!(
            visibility(&scan(&[(0.0, 0.1), (1200.0, 0.2)]), Channel::D1F1F2),
            Err(Error::InsufficientScan(_))
        ));
        let no_zero = scan(&[(-1200.0, 0.2), (300.0, 0.1), (1200.0, 0.2)]);
        assert!(matches!(
            visibility(&no_zero, Channel::D1F1F2),
            Err(Error::InsufficientScan(_))
        ));
        let no_plateau = scan(&[(-300.0, 0.2), (0.0, 0.1), (300.0, 0.2)]);
        assert!(matches!(
            visibility(&no_plateau, Channel::D1F1F2),
            Err(Error::InsufficientScan(_))
        ));
    }

    #[test]
    fn subtraction() {
        let raw = scan(&[(-1200.0, 0.3), (0.0, 0.1), (1200.0, 0.3)]);
        let zero = scan(&[(-1200.0, 0.0), (0.0, 0.0), (1200.0, 0.0)]);
        let same = subtract_background(&raw, &zero).unwrap();
        assert_eq!(
            same.rows.iter().map(|r| r.d1f1f2_corr).collect::<Vec<_>>(),
            vec![0.3, 0.1, 0.3]
        );
        let bg = scan(&[(-1200.0, 0.05), (0.0, 0.15), (1200.0, 0.05)]);
        let c = subtract_background(&raw, &bg).unwrap();
        assert!(c.rows[1].d1f1f2_corr < 0.0);
        assert!((c.rows[1].err_d1f1f2_corr - 0.01 * 2f64.sqrt()).abs() < 1e-15);
        // four-fold columns are untouched
        assert_eq!(c.rows[1].rates.pd1f1f2, 0.1);
        let other = scan(&[(-1500.0, 0.0), (0.0, 0.0), (1500.0, 0.0)]);
        assert_eq!(
            subtract_background(&raw, &other).unwrap_err(),
            Error::GridMismatch
        );
    }

    #[test]
    fn channel_names_round_trip() {
        for c in Channel::ALL {
            assert_eq!(c.name().parse::<Channel>().unwrap(), c);
        }
    }
}
