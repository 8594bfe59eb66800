//! Exact arithmetic in Q(sqrt d) and the angle theta.

use cat0knot::exact::QuadScalar;
use cat0knot::group::ThetaSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x: QuadScalar = "1/2 + 3/4*sqrt(2)".parse()?;
    let y: QuadScalar = "-2 + 1/3*sqrt(2)".parse()?;
    println!("x = {x}, y = {y}");
    println!("x + y = {}", &x + &y);
    println!("x * y = {}", &x * &y);
    println!("x / y = {}", &x / &y);
    println!("x < y: {}  (floats {} vs {})", x < y, x.to_f64(), y.to_f64());

    for spec in [ThetaSpec::quarter_pi(), ThetaSpec::third_pi()] {
        println!("cos = {}, sin = {}", spec.cos_theta, spec.sin_theta);
    }
    let t = "1/2".parse()?;
    let th = ThetaSpec::from_half_tangent(&t)?;
    println!("t = 1/2: cos = {}, sin = {}", th.cos_theta, th.sin_theta);
    Ok(())
}
