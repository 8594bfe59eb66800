//! A ball in the Bass-Serre tree of Z_2 * Z_3 with the wall shadows through
//! its centre; writes the ball as DOT to stdout.

use cat0knot::group::{Side, ThetaSpec};
use cat0knot::complex::Complex;
use cat0knot::tree::{build_ball, lines_through_vertex, shadow_label, shadows_through, TreeCell};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cx = Complex::new((2, 3), (2, 5), &ThetaSpec::third_pi())?;
    let tree = cx.tree(Side::Minus);
    let ball = build_ball(tree, 4, 10_000)?;
    eprintln!("{} vertices, {} edges", ball.vertices.len(), ball.edges.len());
    for s in lines_through_vertex(tree, &tree.v_a()) {
        eprintln!("shadow through v_a: {}", shadow_label(&s));
    }
    let n = shadows_through(tree, &ball, &TreeCell::Vertex(tree.v_b()))?.len();
    eprintln!("shadows through v_b: {n}");
    print!("{}", ball.to_dot());
    Ok(())
}
