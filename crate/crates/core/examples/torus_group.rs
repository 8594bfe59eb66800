//! Words in a torus-knot group <a, b | a^p = b^q>: normal forms, the
//! meridian omega, and translation heights.

use cat0knot::group::{check_no_right_angle, ext_euclid, TorusGroup};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = TorusGroup::new(2, 5)?;
    let (m, n) = ext_euclid(2, 5)?;
    println!("(p, q) = (2, 5): m = {m}, n = {n}");
    let names = ["a", "b", "t"];
    println!("tau = {}, omega = {}", g.format(&g.tau(), names), g.format(&g.omega(), names));
    let w = g.parse("a^1.b^3.a^1.b^-1")?;
    println!("w = {}, height = {} units", g.format(&w, names), g.height_units(&w));
    let w2 = g.mul(&w, &w);
    println!("w^2 = {}, height = {}", g.format(&w2, names), g.height_units(&w2));
    let table = check_no_right_angle(7)?;
    for e in table {
        println!("({}, {}): lambda(omega)/lambda(tau) = {}", e.p, e.q, e.ratio);
    }
    Ok(())
}
