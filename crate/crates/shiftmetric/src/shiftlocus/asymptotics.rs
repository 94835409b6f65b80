use rayon::prelude::*;
use serde::Serialize;

use super::base::base_length;
use super::family::SequenceFamily;
use crate::error::{domain, Error, Result};
use crate::numeric::quadrature::QuadratureConfig;
use crate::rosemetric::{path_length, rose};

/// A coordinate whose ratio `min / l_i` ends below this cut (and is still
/// falling) is treated as `o(min)`.
pub const RATIO_CUT: f64 = 0.05;
/// Degenerating means the first petal length passes this value.
const DEGENERATING_LENGTH: f64 = 1e3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexSetReport {
    /// Petals (0-based) whose lengths stay comparable to the shortest petal.
    pub index_set: Vec<usize>,
    pub singular: bool,
    pub degenerating: bool,
    pub divergent: bool,
    pub uniformly_divergent: bool,
    pub probes: Vec<f64>,
    pub lengths: Vec<Vec<f64>>,
    /// `min_j l_j / l_i` per probe.
    pub ratio_table: Vec<Vec<f64>>,
}

fn monotone(seq: &[f64], increasing: bool) -> bool {
    seq.windows(2).all(|w| {
        let slack = 1e-12 * w[0].abs().max(w[1].abs());
        if increasing {
            w[1] >= w[0] - slack
        } else {
            w[1] <= w[0] + slack
        }
    })
}

fn tends_to_zero(seq: &[f64]) -> bool {
    monotone(seq, false) && seq[seq.len() - 1] <= 0.1 * seq[0]
}

fn tends_to_infinity(seq: &[f64]) -> bool {
    monotone(seq, true) && seq[seq.len() - 1] >= 10.0 * seq[0]
}

fn probe_lengths(fam: &SequenceFamily, probes: &[f64]) -> Result<Vec<Vec<f64>>> {
    probes
        .iter()
        .map(|&k| Ok(base_length(&fam.heights(k)?)?.as_slice().to_vec()))
        .collect()
}

/// Index set of the base length sequence, read off a ratio table.
pub fn index_set(fam: &SequenceFamily, probes: &[f64]) -> Result<IndexSetReport> {
    if probes.len() < 3 {
        return domain("need at least three probes");
    }
    let lengths = probe_lengths(fam, probes)?;
    let n = lengths[0].len();
    let ratio_table: Vec<Vec<f64>> = lengths
        .iter()
        .map(|l| {
            let m = l.iter().cloned().fold(f64::INFINITY, f64::min);
            l.iter().map(|x| m / x).collect()
        })
        .collect();
    let column = |table: &[Vec<f64>], i: usize| -> Vec<f64> { table.iter().map(|row| row[i]).collect() };

    let mins: Vec<f64> = lengths
        .iter()
        .map(|l| l.iter().cloned().fold(f64::INFINITY, f64::min))
        .collect();
    let mut index = Vec::new();
    if !(mins[mins.len() - 1] > DEGENERATING_LENGTH && tends_to_infinity(&mins)) {
        for i in 0..n {
            let r = column(&ratio_table, i);
            let (first, last) = (r[0], r[r.len() - 1]);
            let decay = last / first;
            let excluded = last < RATIO_CUT && decay < 0.5;
            let included = decay >= 0.5 || (last >= RATIO_CUT && decay >= 0.1);
            if included {
                index.push(i);
            } else if !excluded {
                return Err(Error::ClassificationUncertain { table: ratio_table });
            }
        }
    }

    let cols: Vec<Vec<f64>> = (0..n).map(|i| column(&lengths, i)).collect();
    let divergent = cols.iter().any(|c| tends_to_zero(c) || tends_to_infinity(c));
    let uniformly_divergent = divergent && cols.iter().all(|c| monotone(c, true) || monotone(c, false));
    let last = &lengths[lengths.len() - 1];
    Ok(IndexSetReport {
        singular: index.len() == 1,
        index_set: index,
        degenerating: last[0] > DEGENERATING_LENGTH,
        divergent,
        uniformly_divergent,
        probes: probes.to_vec(),
        lengths,
        ratio_table,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AsymptoticCase {
    /// Entropy has a finite positive limit.
    Finite,
    /// Degree 2, `h1 -> inf`: entropy tends to 0.
    QuadraticToZero,
    /// Degree 2, `h1 -> 0`: entropy is `o(1/h1)`.
    QuadraticToInfinity,
    /// `h_{D-1} ~ h_{D-2} = o(h1^2)`: entropy comparable to `h1/h_{D-1}`.
    Case2a,
    /// `h_{D-1} ~ h1^2`: entropy comparable to `h1/h_{D-1}`.
    Case2b,
    /// `h_{D-1}` negligible against every other height and `h1^2`: entropy is `o(h1/h_{D-1})`.
    Case2c,
    /// `h1^2 = o(h_{D-1})`: entropy is `o(1/h1)`.
    Case2d,
}

impl AsymptoticCase {
    pub fn label(self) -> &'static str {
        match self {
            AsymptoticCase::Finite => "finite",
            AsymptoticCase::QuadraticToZero => "D2:h1->inf",
            AsymptoticCase::QuadraticToInfinity => "D2:h1->0",
            AsymptoticCase::Case2a => "2a",
            AsymptoticCase::Case2b => "2b",
            AsymptoticCase::Case2c => "2c",
            AsymptoticCase::Case2d => "2d",
        }
    }

    /// Whether the prediction is `entropy ~ rate` (true) or `entropy = o(rate)`.
    pub fn comparable(self) -> bool {
        matches!(
            self,
            AsymptoticCase::Finite | AsymptoticCase::Case2a | AsymptoticCase::Case2b
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticsReport {
    pub case: AsymptoticCase,
    pub index: IndexSetReport,
    pub entropies: Vec<f64>,
    pub rates: Vec<f64>,
    /// `entropy / rate` per probe.
    pub ratios: Vec<f64>,
    /// Smallest `C` with every ratio in `[g/C, g C]`, `g` the geometric mean.
    pub fitted_c: f64,
    pub pass: bool,
}

/// Compare the entropy along a family with the predicted growth rate.
pub fn entropy_asymptotics(fam: &SequenceFamily, probes: &[f64]) -> Result<AsymptoticsReport> {
    let index = index_set(fam, probes)?;
    let heights: Vec<Vec<f64>> = probes
        .iter()
        .map(|&k| Ok(fam.heights(k)?.as_slice().to_vec()))
        .collect::<Result<_>>()?;
    let entropies: Vec<f64> = index.lengths.iter().map(|l| rose::entropy(l)).collect::<Result<_>>()?;
    let h1: Vec<f64> = heights.iter().map(|h| h[0]).collect();
    let d = fam.degree;

    let case = if d == 2 {
        if tends_to_zero(&h1) {
            AsymptoticCase::QuadraticToInfinity
        } else if tends_to_infinity(&h1) {
            AsymptoticCase::QuadraticToZero
        } else {
            AsymptoticCase::Finite
        }
    } else {
        let mins: Vec<f64> = index
            .lengths
            .iter()
            .map(|l| l.iter().cloned().fold(f64::INFINITY, f64::min))
            .collect();
        if !tends_to_zero(&mins) {
            AsymptoticCase::Finite
        } else if index.index_set.len() >= 2 {
            if index.index_set.contains(&0) {
                AsymptoticCase::Case2b
            } else {
                AsymptoticCase::Case2a
            }
        } else if index.index_set == [0] {
            AsymptoticCase::Case2d
        } else if index.index_set == [d - 2] {
            AsymptoticCase::Case2c
        } else {
            return Err(Error::ClassificationUncertain {
                table: index.ratio_table.clone(),
            });
        }
    };

    let rates: Vec<f64> = heights
        .iter()
        .map(|h| match case {
            AsymptoticCase::Case2a | AsymptoticCase::Case2b | AsymptoticCase::Case2c => h[0] / h[h.len() - 1],
            AsymptoticCase::Case2d | AsymptoticCase::QuadraticToInfinity => 1.0 / h[0],
            AsymptoticCase::Finite | AsymptoticCase::QuadraticToZero => 1.0,
        })
        .collect();
    let ratios: Vec<f64> = entropies.iter().zip(&rates).map(|(e, r)| e / r).collect();
    let log_mean = ratios.iter().map(|r| r.ln()).sum::<f64>() / ratios.len() as f64;
    let fitted_c = ratios
        .iter()
        .map(|r| (r.ln() - log_mean).abs().exp())
        .fold(1.0, f64::max);
    let shrinking = |s: &[f64]| s.windows(2).all(|w| w[1] < w[0]) && s[s.len() - 1] <= 0.5 * s[0];
    let pass = match case {
        AsymptoticCase::Finite | AsymptoticCase::Case2a | AsymptoticCase::Case2b => fitted_c <= 10.0,
        AsymptoticCase::Case2c | AsymptoticCase::Case2d | AsymptoticCase::QuadraticToInfinity => {
            shrinking(&ratios) && entropies.windows(2).all(|w| w[1] > w[0])
        }
        AsymptoticCase::QuadraticToZero => shrinking(&entropies),
    };
    Ok(AsymptoticsReport {
        case,
        index,
        entropies,
        rates,
        ratios,
        fitted_c,
        pass,
    })
}

/// Geometric decay below this rate counts as summable.
const CAUCHY_DECAY: f64 = 0.5;
const LEG_NOISE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CauchyReport {
    pub probes: Vec<f64>,
    /// Entropy length of the family's arc between consecutive probes.
    pub legs: Vec<f64>,
    pub partial_sums: Vec<f64>,
    /// Per-leg decay rate fitted on the second half of the legs.
    pub decay: f64,
    /// Geometric tail estimate; infinite when the legs do not decay.
    pub tail_bound: f64,
    pub cauchy_consistent: bool,
}

/// Summability test for the chain of height segments through the probes.
pub fn cauchy_probe(fam: &SequenceFamily, probes: &[f64], cfg: &QuadratureConfig) -> Result<CauchyReport> {
    if probes.len() < 3 {
        return domain("need at least three probes");
    }
    let legs: Vec<f64> = probes
        .par_windows(2)
        .map(|w| path_length(&fam.arc(w[0], w[1])?, cfg))
        .collect::<Result<_>>()?;
    let partial_sums: Vec<f64> = legs
        .iter()
        .scan(0.0, |s, x| {
            *s += x;
            Some(*s)
        })
        .collect();
    let last = legs.len() - 1;
    let mid = legs.len() / 2;
    // Legs this far below the running total are quadrature noise.
    let floor = LEG_NOISE * partial_sums[last];
    let decay = if legs[last] <= floor {
        0.0
    } else if legs[mid] <= floor || mid == last {
        f64::INFINITY
    } else {
        (legs[last] / legs[mid]).powf(1.0 / (last - mid) as f64)
    };
    let cauchy_consistent = decay < CAUCHY_DECAY;
    let tail_bound = if decay < 1.0 {
        legs[last] * decay / (1.0 - decay)
    } else {
        f64::INFINITY
    };
    Ok(CauchyReport {
        probes: probes.to_vec(),
        legs,
        partial_sums,
        decay,
        tail_bound,
        cauchy_consistent,
    })
}
