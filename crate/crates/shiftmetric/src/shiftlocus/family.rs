use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::base::base_length_derivative;
use super::segment::base_of;
use crate::error::{domain, Result};
use crate::polydyn::CriticalHeights;
use crate::rosemetric::PathSpec;

/// Heights `h_j(k) = coef_j * k^pow_j * (log2 k)^logPow_j` sampled on `kGrid`.
///
/// Named cubic regimes fill in the exponents; `"power"` takes them verbatim.
///
/// ```json
/// {"D":3,"regime":"h2=a*h1","a":0.5,"kGrid":[2,4,8]}
/// {"D":4,"regime":"power","coef":[1,1,0.5],"pow":[1,0.5,0.5],"kGrid":[100,1000,10000]}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceFamily {
    #[serde(rename = "D")]
    pub degree: usize,
    pub regime: String,
    #[serde(default = "one")]
    pub a: f64,
    #[serde(rename = "kGrid")]
    pub k_grid: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coef: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pow: Option<Vec<f64>>,
    #[serde(default, rename = "logPow", skip_serializing_if = "Option::is_none")]
    pub log_pow: Option<Vec<f64>>,
}

fn one() -> f64 {
    1.0
}

pub const NAMED_REGIMES: [&str; 6] = [
    "h1=1,h2=1/k",
    "h2=h1/log(h1)",
    "h2=a*h1",
    "h2=h1^3",
    "h2=h1^1.5",
    "h2=a*h1^2",
];

struct Terms {
    coef: Vec<f64>,
    pow: Vec<f64>,
    log_pow: Vec<f64>,
}

impl SequenceFamily {
    pub fn named(degree: usize, regime: &str, a: f64, k_grid: Vec<f64>) -> Self {
        SequenceFamily {
            degree,
            regime: regime.to_string(),
            a,
            k_grid,
            coef: None,
            pow: None,
            log_pow: None,
        }
    }

    pub fn power(coef: Vec<f64>, pow: Vec<f64>, k_grid: Vec<f64>) -> Self {
        SequenceFamily {
            degree: coef.len() + 1,
            regime: "power".into(),
            a: 1.0,
            k_grid,
            coef: Some(coef),
            pow: Some(pow),
            log_pow: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let fam: SequenceFamily = serde_json::from_str(text)?;
        fam.terms()?;
        if fam.k_grid.len() < 3 {
            return domain("kGrid needs at least three probes");
        }
        Ok(fam)
    }

    fn terms(&self) -> Result<Terms> {
        let a = self.a;
        let named = |c: [f64; 2], p: [f64; 2], q: [f64; 2]| -> Result<Terms> {
            if self.degree != 3 {
                return domain(format!("regime {:?} is a cubic regime", self.regime));
            }
            Ok(Terms {
                coef: c.to_vec(),
                pow: p.to_vec(),
                log_pow: q.to_vec(),
            })
        };
        match self.regime.as_str() {
            "h1=1,h2=1/k" => named([1.0, 1.0], [0.0, -1.0], [0.0, 0.0]),
            "h2=h1/log(h1)" => named([1.0, 1.0], [1.0, 1.0], [0.0, -1.0]),
            "h2=a*h1" => named([1.0, a], [1.0, 1.0], [0.0, 0.0]),
            "h2=h1^3" => named([1.0, 1.0], [-1.0, -3.0], [0.0, 0.0]),
            "h2=h1^1.5" => named([1.0, 1.0], [-1.0, -1.5], [0.0, 0.0]),
            "h2=a*h1^2" => named([1.0, a], [-1.0, -2.0], [0.0, 0.0]),
            "power" => {
                let k = self.degree.saturating_sub(1);
                let coef = self.coef.clone().unwrap_or_default();
                let pow = self.pow.clone().unwrap_or_default();
                let log_pow = self.log_pow.clone().unwrap_or_else(|| vec![0.0; k]);
                if self.degree < 2 || coef.len() != k || pow.len() != k || log_pow.len() != k {
                    return domain("power regime needs coef, pow (and optional logPow) with D - 1 entries");
                }
                Ok(Terms { coef, pow, log_pow })
            }
            other => domain(format!("unknown regime {other:?}")),
        }
    }

    /// Critical heights at parameter `k`.
    pub fn heights(&self, k: f64) -> Result<CriticalHeights> {
        let t = self.terms()?;
        CriticalHeights::new(Self::raw_heights(&t, k))
    }

    fn raw_heights(t: &Terms, k: f64) -> Vec<f64> {
        (0..t.coef.len())
            .map(|j| t.coef[j] * k.powf(t.pow[j]) * k.log2().powf(t.log_pow[j]))
            .collect()
    }

    /// The family itself between parameters `k0` and `k1`, with `k` moving
    /// geometrically. Only heights change along it.
    pub fn arc(&self, k0: f64, k1: f64) -> Result<PathSpec> {
        self.heights(k0)?;
        self.heights(k1)?;
        let t = self.terms()?;
        let (t2, rate) = (self.terms()?, (k1 / k0).ln());
        let k_at = move |s: f64| k0 * (rate * s).exp();
        let value = move |s: f64| base_of(&Self::raw_heights(&t, k_at(s)));
        let derivative = move |s: f64| {
            let k = k_at(s);
            let h = Self::raw_heights(&t2, k);
            let dh: Vec<f64> = h
                .iter()
                .enumerate()
                .map(|(j, x)| x * (t2.pow[j] + t2.log_pow[j] / k.ln()) * rate)
                .collect();
            base_length_derivative(&h, &dh)
        };
        Ok(PathSpec::Curve {
            value: Arc::new(value),
            derivative: Some(Arc::new(derivative)),
        })
    }
}
