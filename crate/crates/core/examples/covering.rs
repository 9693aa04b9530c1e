//! Four translates of W = {g : v_p(tr g) < 0} cover SL2(Q_p).

use sl2qp::generosity::{cover_witness, covering_family, in_w, Sampler, SamplerConfig};
use sl2qp::padic::Prime;
use sl2qp::sl2core::SL2Mat;

fn main() -> sl2qp::Result<()> {
    let p = Prime::new(5)?;
    for (i, a) in covering_family(&p).iter().enumerate() {
        println!("A_{} = {a}", i + 1);
    }
    for m in [
        SL2Mat::identity(),
        SL2Mat::omega(),
        SL2Mat::from_ints(7, 2, 3, 1)?,
    ] {
        let w = cover_witness(&m, &p)?;
        println!(
            "{m}: in W {}, covered by A_{} with trace {}",
            in_w(&m, &p),
            w.index,
            w.checked_trace
        );
    }

    let mut histogram = [0usize; 4];
    for m in Sampler::new(SamplerConfig::with_seed(1), &p).take(10_000) {
        histogram[cover_witness(&m, &p)?.index - 1] += 1;
    }
    println!("first covering translate over 10000 samples: {histogram:?}");
    Ok(())
}
