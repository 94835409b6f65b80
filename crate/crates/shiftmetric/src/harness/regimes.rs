use serde::Serialize;

use super::fmt_float;
use crate::error::Result;
use crate::numeric::quadrature::QuadratureConfig;
use crate::shiftlocus::{cauchy_probe, entropy_asymptotics, AsymptoticsReport, CauchyReport, SequenceFamily};

#[derive(Debug, Clone, Serialize)]
pub struct RegimeReport {
    pub family: SequenceFamily,
    pub heights: Vec<Vec<f64>>,
    pub asymptotics: AsymptoticsReport,
    pub cauchy: CauchyReport,
}

/// Index set, entropy growth and Cauchy probe for a family on its `kGrid`.
pub fn regimes(fam: &SequenceFamily, cfg: &QuadratureConfig) -> Result<RegimeReport> {
    let probes = &fam.k_grid;
    let heights = probes
        .iter()
        .map(|&k| Ok(fam.heights(k)?.as_slice().to_vec()))
        .collect::<Result<_>>()?;
    Ok(RegimeReport {
        family: fam.clone(),
        heights,
        asymptotics: entropy_asymptotics(fam, probes)?,
        cauchy: cauchy_probe(fam, probes, cfg)?,
    })
}

impl RegimeReport {
    /// Summary as `#` comment lines, then one row per probe. The leg in row
    /// `i` joins probes `i - 1` and `i`.
    pub fn to_csv(&self) -> String {
        let a = &self.asymptotics;
        let c = &self.cauchy;
        let idx: Vec<String> = a.index.index_set.iter().map(|i| i.to_string()).collect();
        let mut out = String::new();
        out.push_str(&format!("# regime={} D={}\n", self.family.regime, self.family.degree));
        out.push_str(&format!(
            "# index_set={} singular={} degenerating={} divergent={} uniformly_divergent={}\n",
            idx.join(" "),
            a.index.singular,
            a.index.degenerating,
            a.index.divergent,
            a.index.uniformly_divergent
        ));
        out.push_str(&format!(
            "# case={} fitted_c={} asymptotics_pass={}\n",
            a.case.label(),
            fmt_float(a.fitted_c),
            a.pass
        ));
        out.push_str(&format!(
            "# decay={} tail_bound={} verdict={}\n",
            fmt_float(c.decay),
            fmt_float(c.tail_bound),
            if c.cauchy_consistent {
                "cauchy-consistent"
            } else {
                "divergent-consistent"
            }
        ));
        let hcols: Vec<String> = (1..=self.family.degree - 1).map(|j| format!("h{j}")).collect();
        out.push_str(&format!("k,{},entropy,rate,ratio,leg,partial_sum\n", hcols.join(",")));
        for (i, k) in c.probes.iter().enumerate() {
            let h: Vec<String> = self.heights[i].iter().map(|x| fmt_float(*x)).collect();
            let (leg, sum) = if i == 0 {
                (String::new(), fmt_float(0.0))
            } else {
                (fmt_float(c.legs[i - 1]), fmt_float(c.partial_sums[i - 1]))
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                fmt_float(*k),
                h.join(","),
                fmt_float(a.entropies[i]),
                fmt_float(a.rates[i]),
                fmt_float(a.ratios[i]),
                leg,
                sum
            ));
        }
        out
    }
}
