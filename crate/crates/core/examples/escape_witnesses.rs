//! No finite union of translates of W' = {g : v_p(tr g) >= 0} covers
//! SL2(Q_p): an explicit element escapes each family.

use sl2qp::generosity::{escape_witness_general, escape_witness_paper};
use sl2qp::padic::{Prime, Rational};
use sl2qp::sl2core::SL2Mat;

fn main() -> sl2qp::Result<()> {
    let p = Prime::new(5)?;
    let families = [
        ("[I]", vec![SL2Mat::identity()]),
        (
            "[diag(25, 1/25)]",
            vec![SL2Mat::torus(Rational::from_integer(25.into()))?],
        ),
        ("[omega]", vec![SL2Mat::omega()]),
        ("[I, omega]", vec![SL2Mat::identity(), SL2Mat::omega()]),
        ("[[[0,-1],[1,1]]]", vec![SL2Mat::from_ints(0, -1, 1, 1)?]),
    ];
    for (name, family) in &families {
        match escape_witness_paper(family, &p) {
            Ok(w) => println!("{name}: diagonal witness x = {}", w.x),
            Err(e) => println!("{name}: no diagonal witness ({e})"),
        }
        let w = escape_witness_general(family, &p)?;
        println!(
            "  M = {}, traces {:?}, escapes {}",
            w.witness_matrix,
            w.per_translate_traces
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>(),
            w.escapes(&p)
        );
    }
    Ok(())
}
