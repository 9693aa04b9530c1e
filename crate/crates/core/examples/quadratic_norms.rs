//! Arithmetic in Q_p(sqrt(delta)) and the norm subgroup.

use sl2qp::padic::{parse_rational, PadicCtx, Prime, SquareClass};
use sl2qp::quadext::{is_norm, quad_inv, quad_mul, quad_norm, QuadCtx, QuadElem};

fn main() -> sl2qp::Result<()> {
    let p = Prime::new(5)?;
    let ctx = PadicCtx::with_default_precision(p.clone());
    let q = QuadCtx::new(&parse_rational("2")?, &ctx)?;
    let u = QuadElem::new(parse_rational("3")?, parse_rational("1")?, &q);
    let w = QuadElem::new(parse_rational("1/2")?, parse_rational("-2")?, &q);
    let uw = quad_mul(&u, &w)?;
    println!("u = {}", serde_json::to_string(&u).unwrap());
    println!("u w = {}", serde_json::to_string(&uw).unwrap());
    println!(
        "N(u) = {}, N(w) = {}, N(uw) = {}",
        quad_norm(&u),
        quad_norm(&w),
        quad_norm(&uw)
    );
    println!("u^-1 = {}", serde_json::to_string(&quad_inv(&u)?).unwrap());

    // which square classes are norms, for each quadratic extension
    for p in [2u64, 3, 5] {
        let p = Prime::new(p)?;
        let ctx = PadicCtx::with_default_precision(p.clone());
        let classes = SquareClass::all(&p);
        for d in classes.iter().filter(|c| !c.is_identity()) {
            let q = QuadCtx::new(d.representative(), &ctx)?;
            let mut norms = Vec::new();
            for c in &classes {
                if is_norm(c.representative(), &q)? {
                    norms.push(c.representative().to_string());
                }
            }
            println!(
                "p = {p}, delta = {}: norms {}",
                d.representative(),
                norms.join(" ")
            );
        }
    }
    Ok(())
}
