//! Genericity of W = {v_p(tr) < 0}: four translates cover SL2(Q_p), while no
//! finite family of translates of the complement W' does.

mod sampler;
mod witness;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cartan::{classify, ClassKind};
use crate::error::{Error, Result};
use crate::padic::{format_rational, Prime, Rational};

pub use sampler::{Sampler, SamplerConfig};
pub use witness::{
    cover_witness, covering_family, escape_witness_general, escape_witness_paper, in_w,
    w_orbit_check, CoverWitness, EscapeWitness,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericityReport {
    pub p: u64,
    pub n: usize,
    pub seed: u64,
    /// Exact fractions, as rational strings.
    #[serde(rename = "fractionW")]
    pub fraction_w: String,
    #[serde(rename = "fractionWPrime")]
    pub fraction_w_prime: String,
    #[serde(rename = "classCounts")]
    pub class_counts: BTreeMap<ClassKind, usize>,
    /// Counts of cover witness indices 1 to 4.
    #[serde(rename = "coverHistogram")]
    pub cover_histogram: [usize; 4],
}

pub fn genericity_stats(config: SamplerConfig, n: usize, p: &Prime) -> Result<GenericityReport> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let mut in_w_count = 0usize;
    let mut class_counts = BTreeMap::new();
    let mut cover_histogram = [0usize; 4];
    for a in Sampler::new(config, p).take(n) {
        if in_w(&a, p) {
            in_w_count += 1;
        }
        *class_counts.entry(classify(&a, p)?.kind).or_insert(0) += 1;
        cover_histogram[cover_witness(&a, p)?.index - 1] += 1;
    }
    let frac = |k: usize| format_rational(&Rational::new(k.into(), n.into()));
    Ok(GenericityReport {
        p: p.value(),
        n,
        seed: config.seed,
        fraction_w: frac(in_w_count),
        fraction_w_prime: frac(n - in_w_count),
        class_counts,
        cover_histogram,
    })
}
