//! Deal a secret on C^3 and recover it from every edge.

use hypershare::field::Field;
use hypershare::scheme::build_cube_scheme;
use hypershare::Error;

fn main() -> hypershare::Result<()> {
    let s = build_cube_scheme(3, Some(Field::new(11)?))?;
    let secret = [4, 9];
    let bundle = s.deal(&secret, 2024)?;

    for share in &bundle.shares {
        println!("{}: {:?}", s.graph().label(share.vertex), share.values);
    }

    for &(u, v) in s.graph().edges() {
        let got = s.reconstruct_bundle(&bundle, u, v)?;
        assert_eq!(got, secret);
    }
    println!("all {} edges recover {:?}", s.graph().edges().len(), secret);

    // 000 and 011 are not adjacent.
    match s.reconstruct_bundle(&bundle, 0b000, 0b011) {
        Err(Error::UnqualifiedPair(u, v)) => println!("pair ({u}, {v}) refused"),
        other => panic!("unexpected {other:?}"),
    }
    Ok(())
}
