//! How often random elements fall in W and W', and which translate first
//! covers them.

use sl2qp::generosity::{genericity_stats, SamplerConfig};
use sl2qp::padic::Prime;

fn main() -> sl2qp::Result<()> {
    for p in [2u64, 3, 5, 13] {
        let p = Prime::new(p)?;
        let report = genericity_stats(SamplerConfig::with_seed(42), 5_000, &p)?;
        println!("{}", serde_json::to_string(&report).unwrap());
    }
    Ok(())
}
