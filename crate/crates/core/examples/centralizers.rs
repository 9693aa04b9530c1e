//! Commutants, centralizers and normalizers of the standard Cartan
//! subgroups.

use sl2qp::padic::{parse_rational, Prime, SquareClass};
use sl2qp::sl2core::{centralizer_tag, commutant_basis, normalizer_checks, SL2Mat, SubgroupTag};

fn main() -> sl2qp::Result<()> {
    let p = Prime::new(5)?;
    let torus = SL2Mat::torus(parse_rational("3")?)?;
    let elements = [
        ("I", SL2Mat::identity()),
        ("diag(3, 1/3)", torus.clone()),
        ("[[2,1],[1,1]]", SL2Mat::from_ints(2, 1, 1, 1)?),
        ("[[1,2],[0,1]]", SL2Mat::from_ints(1, 2, 0, 1)?),
        (
            "conjugated torus",
            torus.conjugate(SL2Mat::from_ints(1, 1, 1, 2)?.matrix())?,
        ),
    ];
    for (name, a) in &elements {
        let basis = commutant_basis(a);
        println!("{name}: commutant dimension {}", basis.dim);
        println!(
            "  centralizer {}",
            serde_json::to_string(&centralizer_tag(a, &p)?).unwrap()
        );
    }

    let u = SquareClass::all(&p)
        .into_iter()
        .find(|c| !c.is_identity())
        .unwrap();
    let tags = [SubgroupTag::Q1, SubgroupTag::U, SubgroupTag::qdelta(u)?];
    for g in [SL2Mat::omega(), SL2Mat::from_ints(1, 1, 0, 1)?, torus] {
        for tag in &tags {
            println!("{g} normalizes {tag}: {}", normalizer_checks(&g, tag)?);
        }
    }
    Ok(())
}
