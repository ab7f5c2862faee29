use ellq_core::bounds::*;
use ellq_core::real::Real;
use ellq_core::Rational;
use num_bigint::BigInt;
fn main() {
    let eps = Rational::new(BigInt::from(1), BigInt::from(1_000_000));
    let eta = Real::from_f64(0.7, 128).unwrap();
    for m in 2..=8u32 {
        println!("R({m}) = {:e}", r_expression(m, &eps, &eta).unwrap().to_f64());
    }
    println!("m0 = {}", choose_m0(&eps).unwrap());
}
