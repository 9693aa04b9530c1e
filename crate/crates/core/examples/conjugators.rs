//! Explicit conjugators into the standard Cartan subgroups.

use sl2qp::cartan::{diagonalize, qdelta_form, unipotent_form, Conjugator};
use sl2qp::padic::{PadicCtx, Prime, Rational};
use sl2qp::sl2core::SL2Mat;

fn show(what: &str, a: &SL2Mat, c: &Conjugator) -> sl2qp::Result<()> {
    println!("{what}: A = {a}");
    println!("  P = {}", c.matrix);
    println!("  P^-1 A P = {}", c.target);
    println!(
        "  subgroup {}, exact {}, window {:?}, roundtrip {}",
        c.subgroup,
        c.is_exact(),
        c.window(),
        c.roundtrip(a)?
    );
    Ok(())
}

fn main() -> sl2qp::Result<()> {
    let ctx = PadicCtx::new(Prime::new(7)?, 12)?;

    // a conjugate of diag(2, 1/2): the discriminant 9/4 is a rational square
    let g = SL2Mat::from_ints(2, 1, 1, 1)?;
    let split_exact = SL2Mat::torus(Rational::from_integer(2.into()))?.conjugate(g.matrix())?;
    show(
        "split, rational eigenvalues",
        &split_exact,
        &diagonalize(&split_exact, &ctx)?,
    )?;

    // discriminant 32, a square in Q_7 but not in Q
    let split = SL2Mat::from_ints(5, 4, 1, 1)?;
    show("split over Q_7", &split, &diagonalize(&split, &ctx)?)?;

    // discriminants 5 and -4, both nonsquare units mod 7
    for nonsplit in [SL2Mat::from_ints(2, 1, 1, 1)?, SL2Mat::omega()] {
        show("nonsplit", &nonsplit, &qdelta_form(&nonsplit, &ctx)?)?;
    }

    let unipotent = SL2Mat::from_ints(3, -4, 1, -1)?;
    show(
        "unipotent",
        &unipotent,
        &unipotent_form(&unipotent, ctx.prime())?,
    )?;
    Ok(())
}
