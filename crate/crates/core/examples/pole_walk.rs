//! Rotating the up pole of a wall boundary by theta: closure for rational
//! multiples of pi, no closure for cos theta = 3/5.

use cat0knot::boundary::wall_boundary_walk;
use cat0knot::group::ThetaSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let specs = [
        ("pi/4", ThetaSpec::quarter_pi()),
        ("pi/3", ThetaSpec::third_pi()),
        ("cos 3/5", ThetaSpec::from_half_tangent(&"1/2".parse()?)?),
    ];
    for (name, spec) in specs {
        let w = wall_boundary_walk(&spec, 2000)?;
        println!(
            "{name}: closure {:?}, {} distinct points, every step exactly theta: {}",
            w.closure, w.distinct, w.steps_exact
        );
        let (c, s) = w.point(3);
        println!("  z_3 = ({c}, {s})");
    }
    Ok(())
}
