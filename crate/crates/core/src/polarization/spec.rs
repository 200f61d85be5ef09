use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::polarization::PureState;
use crate::scalar::{c, Real};

/// Named single-photon polarization.
///
/// `+45 = (H + V)/√2`, `-45 = (H - V)/√2`, `R = (H + iV)/√2`, `L = (H - iV)/√2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolarizationSpec {
    Horizontal,
    Vertical,
    Diagonal,
    AntiDiagonal,
    RightCircular,
    LeftCircular,
    Custom { alpha: Complex64, beta: Complex64 },
}

impl PolarizationSpec {
    /// The five input polarizations of the visibility table.
    pub const TABLE: [PolarizationSpec; 5] = [
        PolarizationSpec::Diagonal,
        PolarizationSpec::AntiDiagonal,
        PolarizationSpec::Horizontal,
        PolarizationSpec::Vertical,
        PolarizationSpec::RightCircular,
    ];

    pub fn custom(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let n = alpha.norm_sqr() + beta.norm_sqr();
        if (n - 1.0).abs() > f64::INPUT_TOL {
            return Err(Error::NotNormalized { norm_sqr: n });
        }
        let s = 1.0 / n.sqrt();
        Ok(Self::Custom {
            alpha: alpha * s,
            beta: beta * s,
        })
    }

    /// `(alpha, beta)` in the H/V basis.
    pub fn amplitudes(&self) -> (Complex64, Complex64) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match *self {
            Self::Horizontal => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
            Self::Vertical => (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
            Self::Diagonal => (Complex64::new(s, 0.0), Complex64::new(s, 0.0)),
            Self::AntiDiagonal => (Complex64::new(s, 0.0), Complex64::new(-s, 0.0)),
            Self::RightCircular => (Complex64::new(s, 0.0), Complex64::new(0.0, s)),
            Self::LeftCircular => (Complex64::new(s, 0.0), Complex64::new(0.0, -s)),
            Self::Custom { alpha, beta } => (alpha, beta),
        }
    }

    pub fn state<T: Real>(&self) -> PureState<T> {
        let (a, b) = self.amplitudes();
        let amps = vec![c(T::lit(a.re), T::lit(a.im)), c(T::lit(b.re), T::lit(b.im))];
        PureState::from_amplitudes(amps).expect("named polarizations are normalized")
    }

    /// The orthogonal polarization, `(-β*, α*)` for custom states.
    pub fn orthogonal(&self) -> Self {
        match *self {
            Self::Horizontal => Self::Vertical,
            Self::Vertical => Self::Horizontal,
            Self::Diagonal => Self::AntiDiagonal,
            Self::AntiDiagonal => Self::Diagonal,
            Self::RightCircular => Self::LeftCircular,
            Self::LeftCircular => Self::RightCircular,
            Self::Custom { alpha, beta } => Self::Custom {
                alpha: -beta.conj(),
                beta: alpha.conj(),
            },
        }
    }

    /// Short label used in file names.
    pub fn slug(&self) -> String {
        match self {
            Self::Horizontal => "h".into(),
            Self::Vertical => "v".into(),
            Self::Diagonal => "p45".into(),
            Self::AntiDiagonal => "m45".into(),
            Self::RightCircular => "r".into(),
            Self::LeftCircular => "l".into(),
            Self::Custom { .. } => "custom".into(),
        }
    }
}

fn format_complex(z: Complex64) -> String {
    match (z.re == 0.0, z.im == 0.0) {
        (_, true) => format!("{}", z.re),
        (true, false) => format!("{}i", z.im),
        (false, false) if z.im < 0.0 => format!("{}-{}i", z.re, -z.im),
        (false, false) => format!("{}+{}i", z.re, z.im),
    }
}

fn parse_real(s: &str) -> Option<f64> {
    match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => s.parse().ok(),
    }
}

/// Parses `0.6`, `0.9i`, `-i`, `0.5+0.5i`, `1e-3-2i`.
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s: String = s.chars().filter(|ch| !ch.is_whitespace()).collect();
    let Some(body) = s.strip_suffix('i') else {
        return s.parse().ok().map(|re| Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Some(Complex64::new(
            body[..k].parse().ok()?,
            parse_real(&body[k..])?,
        )),
        None => Some(Complex64::new(0.0, parse_real(body)?)),
    }
}

impl FromStr for PolarizationSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let named = match t.to_ascii_lowercase().as_str() {
            "h" | "0" | "0deg" => Some(Self::Horizontal),
            "v" | "90" | "+90" | "90deg" => Some(Self::Vertical),
            "+45" | "45" | "d" | "45deg" => Some(Self::Diagonal),
            "-45" | "a" | "-45deg" => Some(Self::AntiDiagonal),
            "r" | "circular" => Some(Self::RightCircular),
            "l" => Some(Self::LeftCircular),
            _ => None,
        };
        if let Some(p) = named {
            return Ok(p);
        }
        let (a, b) = t
            .split_once(',')
            .ok_or_else(|| Error::BadPolarization(s.into()))?;
        let alpha = parse_complex(a).ok_or_else(|| Error::BadPolarization(s.into()))?;
        let beta = parse_complex(b).ok_or_else(|| Error::BadPolarization(s.into()))?;
        Self::custom(alpha, beta)
    }
}

impl fmt::Display for PolarizationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Horizontal => f.write_str("H"),
            Self::Vertical => f.write_str("V"),
            Self::Diagonal => f.write_str("+45"),
            Self::AntiDiagonal => f.write_str("-45"),
            Self::RightCircular => f.write_str("R"),
            Self::LeftCircular => f.write_str("L"),
            Self::Custom { alpha, beta } => {
                write!(f, "{},{}", format_complex(*alpha), format_complex(*beta))
            }
        }
    }
}

impl Serialize for PolarizationSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PolarizationSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_named_labels() {
        assert_eq!(
            "+45".parse::<PolarizationSpec>().unwrap(),
            PolarizationSpec::Diagonal
        );
        assert_eq!(
            "90".parse::<PolarizationSpec>().unwrap(),
            PolarizationSpec::Vertical
        );
        assert_eq!(
            "circular".parse::<PolarizationSpec>().unwrap(),
            PolarizationSpec::RightCircular
        );
        assert_eq!(
            "h".parse::<PolarizationSpec>().unwrap(),
            PolarizationSpec::Horizontal
        );
    }

    #[test]
    fn parses_custom_amplitudes() {
        let p: PolarizationSpec = "0.6,0.8i".parse().unwrap();
        let (a, b) = p.amplitudes();
        assert!((a - Complex64::new(0.6, 0.0)).norm() < 1e-12);
        assert!((b - Complex64::new(0.0, 0.8)).norm() < 1e-12);
        assert!(matches!(
            "0.6,0.9i".parse::<PolarizationSpec>(),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            "bogus".parse::<PolarizationSpec>(),
            Err(Error::BadPolarization(_))
        ));
    }

    #[test]
    fn complex_parser_forms() {
        assert_eq!(parse_complex("-i"), Some(Complex64::new(0.0, -1.0)));
        assert_eq!(parse_complex("0.5-0.5i"), Some(Complex64::new(0.5, -0.5)));
        assert_eq!(parse_complex("1e-3+2i"), Some(Complex64::new(1e-3, 2.0)));
        assert_eq!(parse_complex("-2.5"), Some(Complex64::new(-2.5, 0.0)));
        assert_eq!(parse_complex("x"), None);
    }

    #[test]
    fn orthogonal_states_are_orthogonal() {
        for p in PolarizationSpec::TABLE
            .iter()
            .chain([PolarizationSpec::LeftCircular].iter())
        {
            let ip = p.state::<f64>().inner(&p.orthogonal().state()).unwrap();
            assert!(ip.norm() < 1e-12, "{p}");
        }
    }

    proptest! {
        #[test]
        fn custom_display_round_trips(theta in 0.0..std::f64::consts::PI, phi in -3.0..3.0f64) {
            let p = PolarizationSpec::custom(
                Complex64::new(theta.cos(), 0.0),
                Complex64::from_polar(theta.sin(), phi),
            ).unwrap();
            let q: PolarizationSpec = p.to_string().parse().unwrap();
            let (a, b) = p.amplitudes();
            let (qa, qb) = q.amplitudes();
            prop_assert!((a - qa).norm() < 1e-12 && (b - qb).norm() < 1e-12);
        }
    }
}
