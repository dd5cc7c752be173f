//! Displacement matrix elements from the Laguerre closed form, checked
//! against coherent-state photon statistics.

use fock_receiver::operators::{
    assoc_laguerre, displace, displacement_element, displacement_matrix,
};
use fock_receiver::FockVector;
use num_complex::Complex64 as C64;

fn main() -> fock_receiver::Result<()> {
    let beta = C64::new(0.7, 0.0);
    let shifted = displace(&FockVector::basis(24, 0), beta);
    println!("D(0.7)|0>: discarded {:.2e}", shifted.discarded);
    let mean = beta.norm_sqr();
    let mut poisson = (-mean).exp();
    for n in 0..6 {
        println!(
            "  n={n}  |amp|^2 = {:.10}  Poisson = {:.10}",
            shifted.state.amp(n).norm_sqr(),
            poisson
        );
        poisson *= mean / (n + 1) as f64;
    }

    println!(
        "<3|D(0.4-0.2i)|5> = {:.8}",
        displacement_element(3, 5, C64::new(0.4, -0.2))
    );
    println!("L_4^(2)(1.5) = {:.8}", assoc_laguerre(4, 2, 1.5)?);

    let d = displacement_matrix(C64::new(0.3, 0.1), 24);
    let gram = d.adjoint().matmul(&d)?;
    println!(
        "D^dag D on the leading 12x12 block deviates from I by {:.2e}",
        (0..12)
            .flat_map(|i| (0..12).map(move |j| (i, j)))
            .map(|(i, j)| (gram.get(i, j) - if i == j { 1.0 } else { 0.0 }).norm())
            .fold(0.0, f64::max)
    );
    Ok(())
}
