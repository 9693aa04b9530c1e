//! Square classes of Q_p^x: four for odd p, eight for p = 2.

use sl2qp::padic::{is_square, parse_rational, square_class, vp, Prime, SquareClass};

fn main() -> sl2qp::Result<()> {
    for p in [2u64, 3, 7] {
        let p = Prime::new(p)?;
        let reps: Vec<String> = SquareClass::all(&p).iter().map(|c| c.to_string()).collect();
        println!("p = {p}: {}", reps.join(", "));
        for text in ["-1", "2", "-3", "7/4", "50", "-7/9"] {
            let x = parse_rational(text)?;
            println!(
                "  {text:>5}: v_p = {}, square = {}, class {}",
                vp(&x, &p),
                is_square(&x, &p)?,
                square_class(&x, &p)?
            );
        }
    }
    Ok(())
}
