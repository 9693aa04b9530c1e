//! Square roots in Z_p by Hensel lifting, and powers of p in the
//! 2^k-th power chain.

use sl2qp::padic::{hensel_sqrt, is_pow2k_power, parse_rational, PadicCtx, Prime};

fn main() -> sl2qp::Result<()> {
    let ctx = PadicCtx::new(Prime::new(7)?, 20)?;
    for text in ["2", "-3", "1/2", "49"] {
        let x = parse_rational(text)?;
        let r = hensel_sqrt(&x, &ctx)?;
        let back = r.mul(&r);
        println!(
            "sqrt({text}) in Q_7 = {r}; squared agrees with {text}: {}",
            back.agrees_with(&x)
        );
    }

    let dyadic = PadicCtx::new(Prime::new(2)?, 32)?;
    let r = hensel_sqrt(&parse_rational("17")?, &dyadic)?;
    println!("sqrt(17) in Q_2 = {r}");
    match hensel_sqrt(&parse_rational("3")?, &dyadic) {
        Ok(r) => println!("sqrt(3) in Q_2 = {r}"),
        Err(e) => println!("sqrt(3) in Q_2: {e}"),
    }

    let x = parse_rational("81")?;
    let three = PadicCtx::new(Prime::new(3)?, 20)?;
    for k in 0..4 {
        println!(
            "81 a 2^{k}-th power in Q_3: {}",
            is_pow2k_power(&x, k, &three)?
        );
    }
    Ok(())
}
