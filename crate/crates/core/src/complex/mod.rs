//! The glued space `X`: natural blocks `g Y_pm` (copies of `Gamma^{p,q} x R`)
//! meeting along joint lines `g gamma_0`.
//!
//! A point is stored in the chart of one natural block: a tree position and
//! a height. A joint line `g <omega>` with key word `c_1 ... c_n` is
//! `c_n gamma_0` in the chart of the block on `c_n`'s side and `gamma_0` in
//! the other, parametrized by the arclength `T` of `key . gamma_0(T)`, where
//! `gamma_0(T) = (L_0(T sin theta), T cos theta)` and `omega` shifts `T` by 1.

pub mod geodesic;
pub mod joint;
pub mod nhat;
pub mod sample;

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::QuadScalar;
use crate::group::word::format_fp;
use crate::group::{Amalgam, AmalgamWord, Side, ThetaSpec, TorusKnotParams, TorusWord};
use crate::tree::{lines_through_vertex, BlockKey, JointLineKey, Tree, TreeLine, TreePos};

pub use geodesic::{geodesic_cross, Geodesic, GeodesicOptions};

/// The model space for `K_- # K_+` at a fixed joint angle.
#[derive(Clone, Debug)]
pub struct Complex {
    pub am: Amalgam,
    pub theta: ThetaSpec,
    pub factors: [TorusKnotParams; 2],
    pub trees: [Tree; 2],
}

/// A point of `X` in the chart of a natural block.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoint {
    pub block: BlockKey,
    pub pos: TreePos<QuadScalar>,
    pub height: QuadScalar,
}

/// A joint line in the chart of one of its two natural blocks.
#[derive(Clone, Debug)]
pub struct LineChart {
    pub block: BlockKey,
    /// `c` with line `= block . c gamma_0`; `c` lies in `ker L`, so heights
    /// along the line are `T cos theta`.
    pub element: TorusWord,
    pub shadow: TreeLine,
}

impl Complex {
    pub fn new(
        (p_minus, q_minus): (i64, i64),
        (p_plus, q_plus): (i64, i64),
        theta: &ThetaSpec,
    ) -> Result<Self> {
        let m = TorusKnotParams::new(p_minus, q_minus, theta)?;
        let p = TorusKnotParams::new(p_plus, q_plus, theta)?;
        Ok(Complex {
            am: Amalgam::new(m.group, p.group),
            theta: theta.clone(),
            trees: [Tree::new(m.group), Tree::new(p.group)],
            factors: [m, p],
        })
    }

    pub fn factor(&self, side: Side) -> &TorusKnotParams {
        &self.factors[side as usize]
    }

    pub fn tree(&self, side: Side) -> &Tree {
        &self.trees[side as usize]
    }

    pub fn alpha(&self, side: Side) -> &QuadScalar {
        &self.factor(side).alpha
    }

    pub fn cos(&self) -> &QuadScalar {
        &self.theta.cos_theta
    }

    pub fn sin(&self) -> &QuadScalar {
        &self.theta.sin_theta
    }

    /// Base point `x_0 = (v_a, 0)` of the block `G_side`.
    pub fn x0(&self, side: Side) -> ComplexPoint {
        ComplexPoint {
            block: BlockKey::base(side),
            pos: TreePos {
                edge: vec![],
                offset: QuadScalar::zero(),
            },
            height: QuadScalar::zero(),
        }
    }

    /// Builds and canonicalizes a point from block, edge word, offset, height.
    pub fn point(
        &self,
        block: BlockKey,
        edge: &[crate::group::Syllable],
        offset: QuadScalar,
        height: QuadScalar,
    ) -> Result<ComplexPoint> {
        let alpha = self.alpha(block.side);
        if offset.sign() == crate::exact::Sign::Negative || offset > *alpha {
            return Err(Error::InvalidConfig {
                field: "offset".into(),
                reason: format!("{offset} outside [0, alpha = {alpha}]"),
            });
        }
        let tree = self.tree(block.side);
        let pos = tree.canonical_pos(
            alpha,
            &TreePos {
                edge: tree.fp.mul(&[], edge),
                offset,
            },
        );
        Ok(self.canonical(&ComplexPoint { block, pos, height }))
    }

    /// Action of `g` in `G_side` on a point of the chart, staying in the chart
    /// of the image block.
    fn act_in_factor(&self, side: Side, g: &TorusWord, x: &ComplexPoint) -> ComplexPoint {
        let tree = self.tree(side);
        let gb = tree.group.project(g);
        ComplexPoint {
            block: x.block.clone(),
            pos: tree.canonical_pos(self.alpha(side), &tree.act_pos(&gb, &x.pos)),
            height: &x.height + self.factor(side).lambda(g),
        }
    }

    /// Left action of an element of `G`.
    pub fn act(&self, h: &AmalgamWord, x: &ComplexPoint) -> ComplexPoint {
        let side = x.block.side;
        let w = self.am.mul(h, &x.block.element());
        let mut syllables = w.syllables;
        let g = self.factor(side).group;
        let mut local = g.pow(&g.omega(), w.omega);
        if matches!(syllables.last(), Some((s, _)) if *s == side) {
            let (_, c) = syllables.pop().unwrap();
            local = g.mul(&c, &local);
        }
        let block = BlockKey { side, word: syllables };
        let moved = self.act_in_factor(side, &local, x);
        self.canonical(&ComplexPoint { block, ..moved })
    }

    pub fn line_chart(&self, line: &JointLineKey, side: Side) -> LineChart {
        let (block, element) = line.chart(side);
        let shadow = self.tree(side).line(&element.syllables);
        LineChart {
            block,
            element,
            shadow,
        }
    }

    /// `line(T)` in the chart of its block on `side`.
    pub fn line_point(&self, line: &JointLineKey, t: &QuadScalar, side: Side) -> ComplexPoint {
        let chart = self.line_chart(line, side);
        let tree = self.tree(side);
        let u = t * self.sin();
        ComplexPoint {
            block: chart.block,
            pos: chart.shadow.point_at(tree, self.alpha(side), &u),
            height: t * self.cos(),
        }
    }

    /// Joint lines through `x`, with the arclength parameter of `x` on each.
    pub fn joint_lines_at(&self, x: &ComplexPoint) -> Vec<(JointLineKey, QuadScalar)> {
        let side = x.block.side;
        let tree = self.tree(side);
        let params = self.factor(side);
        let alpha = self.alpha(side);
        let (va, vb) = tree.edge_ends(&x.pos.edge);
        let keys = match tree.pos_vertex(alpha, &x.pos) {
            Some(v) => lines_through_vertex(tree, &v),
            None => lines_through_vertex(tree, &va)
                .into_iter()
                .filter(|s| tree.line(s).contains_vertex(tree, &vb))
                .collect(),
        };
        let cot = self.cos() / self.sin();
        let mut out = Vec::new();
        for s in keys {
            let line = tree.line(&s);
            let proj = line.project_point(tree, alpha, &x.pos);
            debug_assert!(proj.dist.is_zero());
            let u = proj.u_foot;
            let lift = params.group.lift(&s);
            let k = (&x.height - params.lambda(&lift) - &u * &cot) / &params.beta;
            let Some(k) = k.to_integer() else { continue };
            let k: i64 = k.try_into().expect("tau power fits in i64");
            let g = &params.group;
            let c0 = g.mul(&lift, &g.pow(&g.tau(), k));
            let j = g.height_units(&c0);
            let c = g.mul(&c0, &g.pow(&g.omega(), -j));
            let key_elem = self.am.mul(&x.block.element(), &self.am.from_factor(side, &c));
            debug_assert_eq!(key_elem.omega, 0);
            let t = &u / self.sin() + QuadScalar::from_int(j);
            out.push((JointLineKey::from_element(&key_elem), t));
        }
        out
    }

    /// `x` in the chart of every natural block containing it, its own first.
    pub fn memberships(&self, x: &ComplexPoint) -> Vec<ComplexPoint> {
        let mut out = vec![x.clone()];
        for (line, t) in self.joint_lines_at(x) {
            let other = self.line_point(&line, &t, x.block.side.other());
            if !out.iter().any(|p| p.block == other.block) {
                out.push(other);
            }
        }
        out
    }

    /// Points on joint lines are stored in the chart of their least block.
    pub fn canonical(&self, x: &ComplexPoint) -> ComplexPoint {
        self.memberships(x)
            .into_iter()
            .min_by(|a, b| a.block.cmp(&b.block))
            .unwrap()
    }

    /// Squared distance between two points of one natural block.
    pub fn dist_sq_within_block(&self, x: &ComplexPoint, y: &ComplexPoint) -> Result<QuadScalar> {
        for xm in self.memberships(x) {
            for ym in self.memberships(y) {
                if xm.block == ym.block {
                    let side = xm.block.side;
                    let d = self
                        .tree(side)
                        .point_dist(self.alpha(side), &xm.pos, &ym.pos);
                    let h = &xm.height - &ym.height;
                    return Ok(d.square() + h.square());
                }
            }
        }
        Err(Error::DifferentBlocks)
    }

    /// Joint lines crossed by the `N`-geodesic from `from` to `to`, in order.
    pub fn nerve_path(&self, from: &BlockKey, to: &BlockKey) -> Vec<JointLineKey> {
        let rel = self.am.mul(&self.am.inv(&from.element()), &to.element());
        let mut syl = rel.syllables;
        if matches!(syl.last(), Some((s, _)) if *s == to.side) {
            syl.pop();
        }
        let start = match syl.first() {
            Some((s, _)) if *s == from.side => 1,
            None if to.side == from.side => return Vec::new(),
            _ => 0,
        };
        (start..=syl.len())
            .map(|i| {
                let prefix = AmalgamWord {
                    syllables: syl[..i].to_vec(),
                    omega: 0,
                };
                JointLineKey::from_element(&self.am.mul(&from.element(), &prefix))
            })
            .collect()
    }

    /// Natural itinerary `[from, ..., to]`.
    pub fn itinerary_n(&self, from: &BlockKey, to: &BlockKey) -> Vec<BlockKey> {
        let mut blocks = vec![from.clone()];
        for line in self.nerve_path(from, to) {
            let (m, p) = line.ends();
            let last = blocks.last().unwrap();
            let next = if m == *last { p } else { m };
            blocks.push(next);
        }
        debug_assert_eq!(blocks.last(), Some(to));
        blocks
    }

    /// Parses a block label such as `G-` or `a-^1.b+^2.G+`.
    pub fn parse_block(&self, s: &str) -> Result<BlockKey> {
        let s = s.trim();
        let (word, side) = if let Some(w) = s.strip_suffix("G-") {
            (w, Side::Minus)
        } else if let Some(w) = s.strip_suffix("G+") {
            (w, Side::Plus)
        } else {
            return Err(Error::Parse(format!("block label '{s}' must end in G- or G+")));
        };
        let word = word.strip_suffix('.').unwrap_or(word);
        let g = if word.is_empty() {
            AmalgamWord::identity()
        } else {
            self.am.parse(word)?
        };
        let mut syllables = g.syllables;
        if matches!(syllables.last(), Some((s, _)) if *s == side) {
            syllables.pop();
        }
        Ok(BlockKey { side, word: syllables })
    }

    /// Parses a point literal `(block, edge word, offset, height)`, e.g.
    /// `(G-, b^1, 1/5, 3/10)`; the edge word `1` is the base edge.
    pub fn parse_point(&self, s: &str) -> Result<ComplexPoint> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("point literal '{s}' needs parentheses")))?;
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!(
                "point literal '{s}' needs 4 fields: block, edge word, offset, height"
            )));
        }
        let block = self.parse_block(parts[0])?;
        let g = self.factor(block.side).group;
        let edge = if parts[1] == "1" || parts[1].is_empty() {
            vec![]
        } else {
            g.project(&g.parse(parts[1])?)
        };
        let offset: QuadScalar = parts[2].parse()?;
        let height: QuadScalar = parts[3].parse()?;
        self.point(block, &edge, offset, height)
    }

    pub fn block_label(&self, b: &BlockKey) -> String {
        b.label(&self.am)
    }

    pub fn point_label(&self, x: &ComplexPoint) -> String {
        let e = if x.pos.edge.is_empty() {
            "1".to_string()
        } else {
            format_fp(&x.pos.edge, ["a", "b"])
        };
        format!(
            "({}, {}, {}, {})",
            self.block_label(&x.block),
            e,
            x.pos.offset,
            x.height
        )
    }

    pub fn to_json(&self) -> Value {
        let f = |s: Side| {
            let k = self.factor(s);
            json!({
                "p": k.p(),
                "q": k.q(),
                "m": k.group.m,
                "n": k.group.n,
                "alpha": k.alpha.to_string(),
                "beta": k.beta.to_string(),
                "lambda_omega": k.lambda(&k.group.omega()).to_string(),
                "lambda_tau": k.lambda(&k.group.tau()).to_string(),
                "joint_loop_length_sq": k.joint_loop_length_sq().to_string(),
            })
        };
        json!({
            "theta": {
                "cos": self.cos().to_string(),
                "sin": self.sin().to_string(),
                "d": self.theta.d,
            },
            "minus": f(Side::Minus),
            "plus": f(Side::Plus),
        })
    }
}

impl fmt::Display for ComplexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.block,
            format_fp(&self.pos.edge, ["a", "b"]),
            self.pos.offset,
            self.height
        )
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use num_rational::BigRational;

    pub(crate) fn cx() -> Complex {
        let th = ThetaSpec::from_half_tangent(&BigRational::new(1.into(), 2.into())).unwrap();
        Complex::new((2, 3), (2, 5), &th).unwrap()
    }

    #[test]
    fn distances_from_base_point() {
        let c = cx();
        let x0 = c.x0(Side::Minus);
        let g = c.factor(Side::Minus).group;
        let tau = c.am.from_factor(Side::Minus, &g.tau());
        let tx = c.act(&tau, &x0);
        assert_eq!(
            c.dist_sq_within_block(&x0, &tx).unwrap(),
            c.factor(Side::Minus).beta.square()
        );
        let wx = c.act(&c.am.omega_pow(1), &x0);
        assert_eq!(c.dist_sq_within_block(&x0, &wx).unwrap(), QuadScalar::one());
        assert_eq!(c.dist_sq_within_block(&x0, &x0).unwrap(), QuadScalar::zero());
    }

    #[test]
    fn base_point_lies_on_gamma0() {
        let c = cx();
        let x0 = c.x0(Side::Plus);
        let canon = c.canonical(&x0);
        assert_eq!(canon.block, BlockKey::base(Side::Minus));
        let lines = c.joint_lines_at(&c.x0(Side::Minus));
        assert!(lines.contains(&(JointLineKey::default(), QuadScalar::zero())));
        // same point seen from the other chart
        assert_eq!(c.dist_sq_within_block(&x0, &c.x0(Side::Minus)).unwrap(), QuadScalar::zero());
    }

    #[test]
    fn line_points_are_on_their_lines() {
        let c = cx();
        let key = JointLineKey::from_element(&c.am.parse("a-^1.b+^1").unwrap());
        for t in ["0", "1/3", "-7/4", "5/2"] {
            let t: QuadScalar = t.parse().unwrap();
            for side in [Side::Minus, Side::Plus] {
                let x = c.line_point(&key, &t, side);
                let found = c.joint_lines_at(&x);
                assert!(found.contains(&(key.clone(), t.clone())), "{found:?}");
            }
            let a = c.line_point(&key, &t, Side::Minus);
            let b = c.line_point(&key, &t, Side::Plus);
            assert_eq!(c.canonical(&a), c.canonical(&b));
        }
    }

    #[test]
    fn nerve_paths() {
        let c = cx();
        let bm = BlockKey::base(Side::Minus);
        let bp = BlockKey::base(Side::Plus);
        assert!(c.nerve_path(&bm, &bm).is_empty());
        assert_eq!(c.nerve_path(&bm, &bp), vec![JointLineKey::default()]);
        let far = c.parse_block("a-^1.b+^1.G-").unwrap();
        let it = c.itinerary_n(&bm, &far);
        assert_eq!(it.len(), 3);
        assert_eq!(it[0], bm);
        let back = c.itinerary_n(&far, &bm);
        assert_eq!(back.into_iter().rev().collect::<Vec<_>>(), it);
    }

    #[test]
    fn point_literals() {
        let c = cx();
        let x = c.parse_point("(G-, b^1, 1/5, 3/10)").unwrap();
        assert_eq!(x.block, BlockKey::base(Side::Minus));
        assert!(c.parse_point("(G-, b^1, 9, 0)").is_err());
        assert!(c.parse_point("G-, 1, 0, 0").is_err());
        let y = c.parse_point(&c.point_label(&x)).unwrap();
        assert_eq!(x, y);
    }
}
