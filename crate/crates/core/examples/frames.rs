//! Tangent frame, induced metric, normal bundle and second fundamental form
//! of the cone at one point.

use parageo::corpus;
use parageo::parse;
use parageo::submanifold::TangentVec;
use parageo::VectorField;

fn main() {
    let scene = corpus::cone();
    let m = &scene.immersion;
    let p = [1.0, 0.5, 1.0];
    let f = m.frame_at(&p).expect("regular point");
    print!("metric{}", f.metric());
    print!("normal frame{}", f.normal());

    let d2 = TangentVec::coordinate(3, 1);
    let h22 = f.second_fundamental_form(&d2, &d2);
    println!("h(d2, d2) in the normal frame: {:?}", h22.coeffs().as_slice());

    let (e1, e2) = (VectorField::coordinate(3, 0), VectorField::coordinate(3, 1));
    let nabla = m.connection(&p, &e1, &e2).unwrap();
    println!("nabla_d1 d2 = {:?}", nabla.coeffs().as_slice());

    let grad = m.gradient(&p, &parse("x1", 3).unwrap()).unwrap();
    println!("grad x1 = {:?}", grad.coeffs().as_slice());
}
