//! Block boundaries: Tits angles between poles, intersection classes of
//! block boundaries, and the classification of periodic rays.

use cat0knot::boundary::{
    boundary_intersection_class, classify_rational, neighbor_pole_angle, pole_set, tits_angle_in_block, Angle,
    RaySpec, TreeEnd,
};
use cat0knot::complex::nhat::{nerve_hat_ball, NhatVertex};
use cat0knot::config::Config;
use cat0knot::group::Side;
use cat0knot::tree::BlockKey;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = Config::default();
    let cx = cfg.complex()?;
    let w = cfg.windows(&cx)?;
    let ball = nerve_hat_ball(&cx, [&w[0], &w[1]], 2, 4, 100_000)?;
    let gm = NhatVertex::Natural(BlockKey::base(Side::Minus));
    let [up, down] = pole_set(&gm);
    println!("poles of G-: angle {}", tits_angle_in_block(&up, &down)?.angle.to_radians());
    for j in ball.neighbors(&gm).iter().take(3) {
        let a = neighbor_pole_angle(&cx, &gm, j)?;
        println!("G- / {}: cos {}", j.label(&cx), a.angle.cos);
    }
    // a joint neighbor shares a wall; its other natural neighbors share poles
    let j = &ball.neighbors(&gm)[0];
    let b = ball.neighbors(j).into_iter().find(|b| *b != gm).expect("joint block has two neighbors");
    for v in [&gm, j, &b] {
        let class = boundary_intersection_class(&cx, &ball, &gm, v)?;
        println!("G- vs {}: {}", v.label(&cx), class.to_json(&cx));
    }
    let g = cx.factor(Side::Minus).group;
    let gp = cx.factor(Side::Plus).group;
    let ray = RaySpec {
        start: BlockKey::base(Side::Minus),
        polar: Angle::theta(&cx),
        longitude: Some(TreeEnd::shadow_end(cx.tree(Side::Minus), &[], true)),
        prefix: vec![],
        period: vec![g.tau(), gp.tau()],
    };
    println!("tau_- tau_+ ray: {}", classify_rational(&cx, &ray)?.to_json(&cx));
    Ok(())
}
