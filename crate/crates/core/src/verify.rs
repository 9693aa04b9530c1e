//! Invariant suites run at scale from a seed. Each suite reports a summary and
//! every counterexample found; a counterexample is a falsification event.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cartan::{classify, verify_partition, ClassKind};
use crate::error::{Error, Result};
use crate::generosity::{
    cover_witness, escape_witness_general, escape_witness_paper, in_w, w_orbit_check, Sampler,
    SamplerConfig,
};
use crate::padic::{is_pow2k_power, vp, PadicCtx, Prime, Rational, SquareClass};
use crate::sl2core::{centralizer_tag, commutant_basis, Mat2, SL2Mat, SubgroupTag};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Partition,
    Cover,
    Escape,
    WOrbit,
    Centralizer,
    Omega,
    All,
}

impl Suite {
    const EACH: [Suite; 6] = [
        Suite::Partition,
        Suite::Cover,
        Suite::Escape,
        Suite::WOrbit,
        Suite::Centralizer,
        Suite::Omega,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Partition => "partition",
            Suite::Cover => "cover",
            Suite::Escape => "escape",
            Suite::WOrbit => "w-orbit",
            Suite::Centralizer => "centralizer",
            Suite::Omega => "omega",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One counterexample, with the offending input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Falsification {
    pub suite: String,
    pub p: u64,
    pub input: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub p: u64,
    pub n: usize,
    pub checked: usize,
    pub counterexamples: usize,
    pub details: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub precision: u32,
    pub results: Vec<SuiteSummary>,
    #[serde(skip)]
    pub falsifications: Vec<Falsification>,
}

impl VerifyReport {
    pub fn counterexamples(&self) -> usize {
        self.results.iter().map(|r| r.counterexamples).sum()
    }
}

struct Run<'a> {
    suite: Suite,
    p: &'a Prime,
    events: Vec<Falsification>,
    checked: usize,
}

impl<'a> Run<'a> {
    fn new(suite: Suite, p: &'a Prime) -> Self {
        Run {
            suite,
            p,
            events: Vec::new(),
            checked: 0,
        }
    }

    fn check(&mut self, ok: bool, input: impl fmt::Display, reason: &str) {
        self.checked += 1;
        if !ok {
            self.events.push(Falsification {
                suite: self.suite.to_string(),
                p: self.p.value(),
                input: input.to_string(),
                reason: reason.to_string(),
            });
        }
    }

    fn finish(self, n: usize, details: Value, out: &mut VerifyReport) {
        out.results.push(SuiteSummary {
            suite: self.suite.to_string(),
            p: self.p.value(),
            n,
            checked: self.checked,
            counterexamples: self.events.len(),
            details,
        });
        out.falsifications.extend(self.events);
    }
}

/// Runs `suite` at every prime with `n` samples each.
pub fn run_verify(
    suite: Suite,
    primes: &[Prime],
    n: usize,
    seed: u64,
    precision: u32,
) -> Result<VerifyReport> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let mut report = VerifyReport {
        seed,
        precision,
        results: Vec::new(),
        falsifications: Vec::new(),
    };
    let suites: Vec<Suite> = match suite {
        Suite::All => Suite::EACH.to_vec(),
        s => vec![s],
    };
    for p in primes {
        let ctx = PadicCtx::new(p.clone(), precision)?;
        for &s in &suites {
            let config = SamplerConfig::with_seed(seed);
            match s {
                Suite::Partition => partition(&ctx, n, config, &mut report)?,
                Suite::Cover => cover(&ctx, n, config, &mut report)?,
                Suite::Escape => escape(&ctx, n, config, &mut report)?,
                Suite::WOrbit => w_orbit(&ctx, n, config, &mut report)?,
                Suite::Centralizer => centralizer(&ctx, n, config, &mut report)?,
                Suite::Omega => omega(&ctx, n, config, &mut report)?,
                Suite::All => unreachable!(),
            }
        }
    }
    Ok(report)
}

fn partition(
    ctx: &PadicCtx,
    n: usize,
    config: SamplerConfig,
    out: &mut VerifyReport,
) -> Result<()> {
    let p = ctx.prime();
    let sample: Vec<SL2Mat> = Sampler::new(config, p).take(n).collect();
    let r = verify_partition(&sample, p)?;
    let mut run = Run::new(Suite::Partition, p);
    run.checked = r.total;
    for v in &r.violations {
        run.check(false, v, "partition");
    }
    let sum: usize = r.counts.values().sum();
    run.check(sum == n, sum, "class counts do not sum to the sample size");
    run.finish(
        n,
        json!({"counts": r.counts, "deltaCounts": r.delta_counts}),
        out,
    );
    Ok(())
}

fn cover(ctx: &PadicCtx, n: usize, config: SamplerConfig, out: &mut VerifyReport) -> Result<()> {
    let p = ctx.prime();
    let mut run = Run::new(Suite::Cover, p);
    let mut histogram = [0usize; 4];
    for m in Sampler::new(config, p).take(n) {
        match cover_witness(&m, p) {
            Ok(w) => {
                histogram[w.index - 1] += 1;
                run.check(
                    vp(&w.checked_trace, p).is_negative(),
                    &m,
                    "trace valuation not negative",
                );
            }
            Err(Error::CoverageViolation { .. }) => run.check(false, &m, "no translate covers"),
            Err(e) => return Err(e),
        }
    }
    run.finish(n, json!({"coverHistogram": histogram}), out);
    Ok(())
}

/// Kinds of random translate families: diagonal only, antidiagonal only,
/// random with one antidiagonal translate, random.
pub const FAMILY_KINDS: [&str; 4] = ["diagonal", "antidiagonal", "mixed", "random"];

fn bounded(a: &SL2Mat, p: &Prime, bound: i64) -> bool {
    a.matrix()
        .rows()
        .iter()
        .flatten()
        .all(|x| vp(x, p).finite().is_none_or(|v| v.abs() <= bound))
}

/// `[[0, -1/b], [b, 0]]`.
pub fn antidiagonal(b: &Rational) -> SL2Mat {
    let z = <Rational as Zero>::zero();
    SL2Mat::new(Mat2::new(z.clone(), -b.recip(), b.clone(), z)).expect("det 1")
}

/// A random family of one to eight translates of the given kind (an index
/// into [`FAMILY_KINDS`]), with entries of valuation at most 5 in absolute value.
pub fn random_family(s: &mut Sampler, p: &Prime, kind: usize) -> Vec<SL2Mat> {
    let size = s.index(8);
    let random = |s: &mut Sampler| loop {
        let a = s.next_sl2();
        if bounded(&a, p, 5) {
            return a;
        }
    };
    let mut fam: Vec<SL2Mat> = (0..size)
        .map(|_| match kind {
            0 => s.next_q1(),
            1 => antidiagonal(&s.unit_rational()),
            _ => random(s),
        })
        .collect();
    if kind == 2 {
        let at = s.index(size) - 1;
        fam[at] = antidiagonal(&s.unit_rational());
    }
    fam
}

fn escape(ctx: &PadicCtx, n: usize, config: SamplerConfig, out: &mut VerifyReport) -> Result<()> {
    let p = ctx.prime();
    let mut run = Run::new(Suite::Escape, p);
    let mut s = Sampler::new(config, p);
    let mut diagonal = BTreeMap::<&str, usize>::new();
    let mut with_antidiagonal = 0;
    for i in 0..n {
        let fam = random_family(&mut s, p, i % FAMILY_KINDS.len());
        let has_anti = fam.iter().any(|a| a.matrix().is_antidiagonal());
        with_antidiagonal += has_anti as usize;
        let label = || {
            fam.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        let w = escape_witness_general(&fam, p)?;
        run.check(
            w.escapes(p),
            label(),
            "general witness stays in some translate of W'",
        );
        let outcome = match escape_witness_paper(&fam, p) {
            Ok(w) => {
                run.check(
                    w.escapes(p),
                    label(),
                    "diagonal witness stays in some translate of W'",
                );
                "escaped"
            }
            Err(Error::AntidiagonalTranslate { .. }) => {
                run.check(
                    has_anti,
                    label(),
                    "antidiagonal error without antidiagonal translate",
                );
                "antidiagonal"
            }
            Err(Error::ZeroTopLeftTranslate { .. }) => "zeroTopLeft",
            Err(e) => return Err(e),
        };
        *diagonal.entry(outcome).or_default() += 1;
    }
    run.finish(
        n,
        json!({"familiesWithAntidiagonal": with_antidiagonal, "diagonalWitness": diagonal}),
        out,
    );
    Ok(())
}

fn nonidentity_classes(p: &Prime) -> Vec<SquareClass> {
    SquareClass::all(p)
        .into_iter()
        .filter(|c| !c.is_identity())
        .collect()
}

fn w_orbit(ctx: &PadicCtx, n: usize, config: SamplerConfig, out: &mut VerifyReport) -> Result<()> {
    let p = ctx.prime();
    let mut run = Run::new(Suite::WOrbit, p);
    let mut in_w_count = 0;
    let mut s = Sampler::new(config, p);
    for a in s.by_ref().take(n) {
        if in_w(&a, p) {
            in_w_count += 1;
            run.check(
                w_orbit_check(&a, p)?,
                &a,
                "element of W with nonsquare discriminant",
            );
            run.check(
                classify(&a, p)?.kind == ClassKind::Split,
                &a,
                "element of W not split",
            );
        }
    }
    let per_class = n.min(100);
    for class in nonidentity_classes(p) {
        for _ in 0..per_class {
            let g = s.next_sl2();
            let a = s.next_qdelta(&class).conjugate(g.matrix())?;
            run.check(!in_w(&a, p), &a, "conjugate of Qdelta element lies in W");
        }
    }
    run.finish(
        n,
        json!({"inW": in_w_count, "qdeltaConjugatesPerClass": per_class}),
        out,
    );
    Ok(())
}

fn centralizer(
    ctx: &PadicCtx,
    n: usize,
    config: SamplerConfig,
    out: &mut VerifyReport,
) -> Result<()> {
    let p = ctx.prime();
    let mut run = Run::new(Suite::Centralizer, p);
    let mut s = Sampler::new(config, p);
    let expect = |run: &mut Run, a: &SL2Mat, tag: &SubgroupTag| -> Result<()> {
        run.check(
            commutant_basis(a).dim == 2,
            a,
            "commutant of a regular element is not 2-dimensional",
        );
        let c = centralizer_tag(a, p)?;
        run.check(c.tag() == Some(tag), a, "wrong centralizer");
        Ok(())
    };
    for _ in 0..n {
        let a = s.next_q1();
        expect(&mut run, &a, &SubgroupTag::Q1)?;
    }
    for class in nonidentity_classes(p) {
        let tag = SubgroupTag::Qdelta(class.clone());
        for _ in 0..n {
            let a = s.next_qdelta(&class);
            expect(&mut run, &a, &tag)?;
        }
    }
    for _ in 0..n.div_ceil(4) {
        let a = s.next_unipotent();
        let c = centralizer_tag(&a, p)?;
        run.check(
            c.tag() == Some(&SubgroupTag::U),
            &a,
            "unipotent centralizer is not U",
        );
    }
    run.finish(n, json!({}), out);
    Ok(())
}

fn omega(ctx: &PadicCtx, n: usize, config: SamplerConfig, out: &mut VerifyReport) -> Result<()> {
    let p = ctx.prime();
    let mut run = Run::new(Suite::Omega, p);
    let mut s = Sampler::new(config, p);
    let w = SL2Mat::<Rational>::omega();
    run.check(w.group_op(&w)?.is_minus_identity(), &w, "omega^2 != -I");
    for _ in 0..n {
        let t = s.next_q1();
        run.check(
            t.conjugate(w.matrix())? == t.inverse(),
            &t,
            "t^omega != t^-1",
        );
        run.check(
            w.commutator(&t)? == t.group_op(&t)?,
            &t,
            "[omega, t] != t^2",
        );
    }
    let pr = Rational::from_integer(p.as_bigint().clone());
    let mut c = SL2Mat::torus(pr.clone())?;
    let mut chain = Vec::new();
    for i in 1..=8u32 {
        c = w.commutator(&c)?;
        let top = pr.pow(1 << i);
        let expected = SL2Mat::torus(top.clone())?;
        run.check(c == expected, &c, "iterated commutator");
        let is_level = is_pow2k_power(&top, i, ctx)?;
        let is_next = is_pow2k_power(&top, i + 1, ctx)?;
        run.check(is_level && !is_next, &c, "chain is not strictly descending");
        chain.push(i);
    }
    run.finish(n, json!({"chainLevels": chain}), out);
    Ok(())
}
