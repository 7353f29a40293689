//! Twisted complexes, their hom complexes, cones and the shift isomorphism.

use dgglue::dgcat::{validate_category, DgCategory};
use dgglue::random;
use dgglue::twisted::{cone_tw, epsilon, epsilon_inv, tw_category, tw_compose, tw_identity, validate_twisted, TwHom, TwistedComplex};
use dgglue::Field;

fn main() -> dgglue::Result<()> {
    let q = Field::Rational;
    let a2 = DgCategory::a2_quiver(q);
    let (x, y) = (TwistedComplex::object(0, 0), TwistedComplex::object(1, 0));
    let h = TwHom::new(&a2, &x, &y);
    println!("Hom(x, y) = {:?}", h.complex.cohomology());

    let f = h.mor_from_coords(&a2, 0, &[q.one()]);
    let c = cone_tw(&a2, &x, &y, &f)?;
    validate_twisted(&a2, &c.cone)?;
    println!("cone of the arrow: {} terms, End = {:?}", c.cone.len(), TwHom::new(&a2, &c.cone, &c.cone).complex.cohomology());

    let e = epsilon(&a2, &c.cone);
    let back = tw_compose(&a2, &c.cone, &c.cone.shift(q, 1), &c.cone, &epsilon_inv(&a2, &c.cone), &e);
    println!("ε⁻¹ ε = id: {}", back.sub(&tw_identity(&a2, &c.cone)).is_zero());

    let mut rng = random::rng(9);
    let t = random::twisted(&a2, &mut rng, &[0, 1], 2);
    let tw = tw_category(&a2, vec![x, y, c.cone, t])?;
    println!("tw(A2) on four objects satisfies the axioms: {}", validate_category(&tw).ok);
    Ok(())
}
