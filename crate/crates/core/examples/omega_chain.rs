//! The Weyl element omega inverts the split torus, and iterated
//! commutators with it climb the chain diag(p^(2^i), p^(-2^i)).

use sl2qp::padic::{is_pow2k_power, PadicCtx, Prime, Rational};
use sl2qp::sl2core::SL2Mat;

fn main() -> sl2qp::Result<()> {
    let w = SL2Mat::omega();
    println!("omega = {w}, omega^2 = {}", w.group_op(&w)?);

    let t = SL2Mat::torus(Rational::new(3.into(), 2.into()))?;
    println!("t = {t}");
    println!("t^omega = {}", t.conjugate(w.matrix())?);
    println!("[omega, t] = {}", w.commutator(&t)?);

    let p = Prime::new(3)?;
    let ctx = PadicCtx::with_default_precision(p.clone());
    let mut x = SL2Mat::torus(Rational::from_integer(p.as_bigint().clone()))?;
    for i in 1..=6u32 {
        x = w.commutator(&x)?;
        let top = x.matrix().a11().clone();
        println!(
            "step {i}: top entry 3^{}, a 2^{i}-th power: {}, a 2^{}-th power: {}",
            1u64 << i,
            is_pow2k_power(&top, i, &ctx)?,
            i + 1,
            is_pow2k_power(&top, i + 1, &ctx)?
        );
    }
    Ok(())
}
