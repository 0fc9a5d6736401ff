//! The flat para-Kaehler space R^2m: structure checks and the 2-form.

use nalgebra::DVector;
use parageo::AmbientSpace;

fn main() {
    let a = AmbientSpace::canonical(3);
    let r = a.verify_structure(1e-12);
    println!(
        "R^{}: |P^2 - I| = {:.1e}, |P^T G P + G| = {:.1e}, signature ({}, {}), pass {}",
        r.dimension, r.product_residual, r.compatibility_residual, r.positive, r.negative, r.pass
    );

    let u = DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    let v = a.apply_p(&u).unwrap();
    // P maps a spacelike vector to a timelike one and is skew for omega
    println!("Pu = {:?}", v.as_slice());
    println!("<u,u> = {}, <Pu,Pu> = {}", a.inner(&u, &u).unwrap(), a.inner(&v, &v).unwrap());
    println!("omega(u, Pu) = {}, omega(Pu, u) = {}", a.omega(&u, &v).unwrap(), a.omega(&v, &u).unwrap());
}
