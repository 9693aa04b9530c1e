//! Cartan classes of a few matrices, with the refinement of nonsplit
//! classes into SL2 orbits.

use sl2qp::cartan::{classify, classify_refined};
use sl2qp::padic::{PadicCtx, Prime};
use sl2qp::sl2core::SL2Mat;

fn main() -> sl2qp::Result<()> {
    let matrices = [
        ("I", SL2Mat::identity()),
        ("-I", SL2Mat::minus_identity()),
        ("omega", SL2Mat::omega()),
        ("[[1,1],[0,1]]", SL2Mat::from_ints(1, 1, 0, 1)?),
        ("[[-1,3],[0,-1]]", SL2Mat::from_ints(-1, 3, 0, -1)?),
        ("[[2,1],[1,1]]", SL2Mat::from_ints(2, 1, 1, 1)?),
        ("[[3,1],[8,3]]", SL2Mat::from_ints(3, 1, 8, 3)?),
    ];
    for p in [2u64, 3, 5] {
        let p = Prime::new(p)?;
        let ctx = PadicCtx::with_default_precision(p.clone());
        println!("p = {p}");
        for (name, a) in &matrices {
            let c = classify(a, &p)?;
            let refined = classify_refined(a, &ctx)?;
            println!(
                "  {name:<16} {}  refined {}",
                serde_json::to_string(&c).unwrap(),
                serde_json::to_string(&refined).unwrap()
            );
        }
    }
    Ok(())
}
