//! Geodesics across joint lines, with their derivative certificates.

use cat0knot::complex::geodesic::{geodesic_cross, GeodesicOptions};
use cat0knot::config::Config;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cx = Config::default().complex()?;
    let opts = GeodesicOptions {
        epsilon: 1e-9,
        max_crossings: 64,
    };
    let pairs = [
        ("(G-, a^1, 1/5, 1)", "(G+, b^2, 1/10, -1)"),
        ("(G-, 1, 0, 0)", "(b+^1.a-^1.G+, 1, 1/5, 1/2)"),
    ];
    for (a, b) in pairs {
        let (x, y) = (cx.parse_point(a)?, cx.parse_point(b)?);
        let g = geodesic_cross(&cx, &x, &y, &opts)?;
        println!("{a} -> {b}");
        println!("  length {:.12}, certified {}", g.length, g.certified());
        for (line, t) in &g.crossings {
            println!("  crosses {} at t = {t:.12}", line.label(&cx.am));
        }
    }
    Ok(())
}
