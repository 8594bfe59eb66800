//! Seeded random blocks and points for property checks.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Complex, ComplexPoint};
use crate::exact::QuadScalar;
use crate::group::{FpWord, Side, Syllable, TorusWord, GEN_A, GEN_B};
use crate::tree::{BlockKey, JointLineKey};

/// Natural block reached from `G_-` or `G_+` by `steps` random window
/// crossings (backtracking allowed).
pub fn random_block<R: Rng>(cx: &Complex, rng: &mut R, windows: [&[TorusWord]; 2], steps: usize) -> BlockKey {
    let side = if rng.gen_bool(0.5) { Side::Minus } else { Side::Plus };
    let mut block = BlockKey::base(side);
    let mut elem = block.element();
    for _ in 0..steps {
        let win = windows[block.side as usize];
        let c = win.choose(rng).expect("window is nonempty");
        elem = cx.am.mul(&elem, &cx.am.from_factor(block.side, c));
        let (m, p) = JointLineKey::from_element(&elem).ends();
        block = if m == block { p } else { m };
        elem = block.element();
    }
    block
}

/// Random reduced word of length at most `len` in `Z_p * Z_q`.
pub fn random_edge<R: Rng>(cx: &Complex, rng: &mut R, side: Side, len: usize) -> FpWord {
    let g = &cx.factor(side).group;
    let n = rng.gen_range(0..=len);
    let mut gen = if rng.gen_bool(0.5) { GEN_A } else { GEN_B };
    let mut w = Vec::with_capacity(n);
    for _ in 0..n {
        let m = if gen == GEN_A { g.p } else { g.q };
        w.push(Syllable::new(gen, rng.gen_range(1..m)));
        gen = 1 - gen;
    }
    w
}

/// Random point of `block`: edge within `tree_radius` of `v_a`, offset a
/// multiple of `alpha / 16`, height a multiple of `1 / 8` in `[-3, 3]`.
pub fn random_point_in<R: Rng>(cx: &Complex, rng: &mut R, block: &BlockKey, tree_radius: usize) -> ComplexPoint {
    let side = block.side;
    let edge = random_edge(cx, rng, side, tree_radius);
    let offset = cx.alpha(side) * &QuadScalar::from_ratio(rng.gen_range(0..16), 16);
    let height = QuadScalar::from_ratio(rng.gen_range(-24..=24), 8);
    cx.point(block.clone(), &edge, offset, height)
        .expect("offset lies in [0, alpha)")
}

/// Random point in a random block.
pub fn random_point<R: Rng>(
    cx: &Complex,
    rng: &mut R,
    windows: [&[TorusWord]; 2],
    block_steps: usize,
    tree_radius: usize,
) -> ComplexPoint {
    let steps = rng.gen_range(0..=block_steps);
    let b = random_block(cx, rng, windows, steps);
    random_point_in(cx, rng, &b, tree_radius)
}
