use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::padic::{Prime, Rational, SquareClass};
use crate::sl2core::{Mat2, SL2Mat};

/// Random products of elementary matrices `[[1, r], [0, 1]]` and
/// `[[1, 0], [r, 1]]` with `r = ±(a/b) p^e`, `0 <= a <= height`,
/// `1 <= b <= height`, `|e| <= p_exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SamplerConfig {
    pub seed: u64,
    #[serde(rename = "maxFactors")]
    pub max_factors: usize,
    pub height: u64,
    #[serde(rename = "pExponent")]
    pub p_exponent: i32,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: 0,
            max_factors: 12,
            height: 9,
            p_exponent: 2,
        }
    }
}

impl SamplerConfig {
    pub fn with_seed(seed: u64) -> Self {
        SamplerConfig {
            seed,
            ..Default::default()
        }
    }
}

/// A deterministic stream of random elements of SL2(Q) for a fixed prime.
pub struct Sampler {
    rng: ChaCha8Rng,
    config: SamplerConfig,
    p: Prime,
}

impl Sampler {
    pub fn new(config: SamplerConfig, p: &Prime) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            config,
            p: p.clone(),
        }
    }

    /// An independent stream for worker `index`, derived from the seed.
    pub fn substream(config: SamplerConfig, p: &Prime, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(index + 1);
        Sampler {
            rng,
            config,
            p: p.clone(),
        }
    }

    /// `±(a/b) p^e`, possibly zero.
    pub fn rational(&mut self) -> Rational {
        let h = self.config.height;
        let a = self.rng.gen_range(0..=h);
        let b = self.rng.gen_range(1..=h);
        let e = self
            .rng
            .gen_range(-self.config.p_exponent..=self.config.p_exponent);
        let mut r = Rational::new(BigInt::from(a), BigInt::from(b));
        let pr = Rational::from_integer(self.p.as_bigint().clone());
        r *= pr.pow(e);
        if self.rng.gen_bool(0.5) {
            -r
        } else {
            r
        }
    }

    /// A nonzero `±(a/b) p^e`.
    pub fn unit_rational(&mut self) -> Rational {
        loop {
            let r = self.rational();
            if !r.is_zero() {
                return r;
            }
        }
    }

    pub fn next_sl2(&mut self) -> SL2Mat {
        let k = self.rng.gen_range(1..=self.config.max_factors);
        // multiply the elementary factors in directly: no general products
        let (mut a, mut b, mut c, mut d) = (
            Rational::from_integer(1.into()),
            <Rational as Zero>::zero(),
            <Rational as Zero>::zero(),
            Rational::from_integer(1.into()),
        );
        for _ in 0..k {
            let r = self.rational();
            if r.is_zero() {
                continue;
            }
            if self.rng.gen_bool(0.5) {
                // right multiplication by [[1, r], [0, 1]]
                b += &a * &r;
                d += &c * &r;
            } else {
                // right multiplication by [[1, 0], [r, 1]]
                a += &b * &r;
                c += &d * &r;
            }
        }
        SL2Mat::new(Mat2::new(a, b, c, d)).expect("products of elementary matrices have det 1")
    }

    /// `diag(r, 1/r)` with `r != 0, ±1`.
    pub fn next_q1(&mut self) -> SL2Mat {
        loop {
            let t = SL2Mat::torus(self.unit_rational()).expect("nonzero");
            if !t.is_central() {
                return t;
            }
        }
    }

    /// `[[a, b], [b delta, a]]` from `a = (1 + delta t^2) / (1 - delta t^2)`,
    /// `b = 2t / (1 - delta t^2)`; `t != 0` keeps it away from `I`.
    pub fn next_qdelta(&mut self, class: &SquareClass) -> SL2Mat {
        let delta = class.representative();
        loop {
            let t = self.unit_rational();
            let dt2 = delta * &t * &t;
            let one = Rational::from_integer(1.into());
            let den = &one - &dt2;
            if den.is_zero() {
                continue;
            }
            let a = (&one + &dt2) / &den;
            let b = Rational::from_integer(2.into()) * &t / &den;
            let c = &b * delta;
            return SL2Mat::new(Mat2::new(a.clone(), b, c, a)).expect("a^2 - delta b^2 = 1");
        }
    }

    /// A random SL2(Q) conjugate `g^{-1} u g` of `±[[1, r], [0, 1]]`, `r != 0`.
    pub fn next_unipotent(&mut self) -> SL2Mat {
        let r = self.unit_rational();
        let u = SL2Mat::unipotent(self.rng.gen_bool(0.5), r);
        let g = self.next_sl2();
        u.conjugate(g.matrix()).expect("g is invertible")
    }

    /// A random element of `[1, max]`.
    pub fn index(&mut self, max: usize) -> usize {
        self.rng.gen_range(1..=max)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }
}

impl Iterator for Sampler {
    type Item = SL2Mat;

    fn next(&mut self) -> Option<SL2Mat> {
        Some(self.next_sl2())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2core::{subgroup_membership, SubgroupTag};

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn same_seed_same_stream() {
        let a: Vec<_> = Sampler::new(SamplerConfig::with_seed(7), &p(5))
            .take(20)
            .collect();
        let b: Vec<_> = Sampler::new(SamplerConfig::with_seed(7), &p(5))
            .take(20)
            .collect();
        let c: Vec<_> = Sampler::new(SamplerConfig::with_seed(8), &p(5))
            .take(20)
            .collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
        let s1: Vec<_> = Sampler::substream(SamplerConfig::with_seed(7), &p(5), 1)
            .take(20)
            .collect();
        assert_ne!(a, s1);
    }

    #[test]
    fn subgroup_samplers_stay_inside() {
        let mut s = Sampler::new(SamplerConfig::with_seed(3), &p(7));
        for class in SquareClass::all(&p(7))
            .into_iter()
            .filter(|c| !c.is_identity())
        {
            let tag = SubgroupTag::Qdelta(class.clone());
            for _ in 0..20 {
                let a = s.next_qdelta(&class);
                assert!(subgroup_membership(&a, &tag));
                assert!(!a.is_central());
            }
        }
        for _ in 0..20 {
            assert!(subgroup_membership(&s.next_q1(), &SubgroupTag::Q1));
            let u = s.next_unipotent();
            assert!(!u.is_central());
            let t = u.trace();
            assert!(
                t == Rational::from_integer(2.into()) || t == Rational::from_integer((-2).into())
            );
        }
    }
}
