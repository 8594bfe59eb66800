//! Block boundaries as spherical suspensions.
//!
//! The boundary of a block `T x R` is the suspension of the ends of `T`: a
//! point is a longitude (an end of the tree) and a polar angle measured from
//! the up pole. Natural blocks have poles `tau^(+-inf)`, joint blocks have
//! poles along their joint lines. Angles are stored as exact cosine/sine
//! pairs, so every comparison below is decided in the coordinate field.

pub mod polewalk;
pub mod ray;

use serde::Serialize;
use serde_json::{json, Value};

use crate::complex::joint::{JointBlockKey, WallKey};
use crate::complex::nhat::{NhatBall, NhatVertex};
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::exact::{QuadScalar, Sign};
use crate::tree::BlockKey;

pub use polewalk::{wall_boundary_walk, PoleWalk, KEPT};
pub use ray::{bifurcation_approximants, classify_rational, Approximant, RayClass, RaySpec, TreeEnd};

/// An angle in `[0, pi]`, stored as `(cos, sin)` with `sin >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Angle {
    pub cos: QuadScalar,
    pub sin: QuadScalar,
}

impl Angle {
    pub fn new(cos: QuadScalar, sin: QuadScalar) -> Result<Self> {
        if sin.sign() == Sign::Negative || cos.square() + sin.square() != QuadScalar::one() {
            return Err(Error::Model(format!("({cos}, {sin}) is not an angle in [0, pi]")));
        }
        Ok(Angle { cos, sin })
    }

    pub fn zero() -> Self {
        Angle {
            cos: QuadScalar::one(),
            sin: QuadScalar::zero(),
        }
    }

    pub fn pi() -> Self {
        Angle {
            cos: QuadScalar::from_int(-1),
            sin: QuadScalar::zero(),
        }
    }

    pub fn theta(cx: &Complex) -> Self {
        Angle {
            cos: cx.cos().clone(),
            sin: cx.sin().clone(),
        }
    }

    /// `pi - self`.
    pub fn supplement(&self) -> Self {
        Angle {
            cos: -&self.cos,
            sin: self.sin.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sin.is_zero() && self.cos.sign() == Sign::Positive
    }

    pub fn is_pi(&self) -> bool {
        self.sin.is_zero() && self.cos.sign() == Sign::Negative
    }

    /// `|self - other|`.
    pub fn abs_diff(&self, other: &Angle) -> Angle {
        Angle {
            cos: &self.cos * &other.cos + &self.sin * &other.sin,
            sin: (&self.sin * &other.cos - &self.cos * &other.sin).abs(),
        }
    }

    /// `min(self + other, pi)` and whether the cap applied.
    pub fn capped_sum(&self, other: &Angle) -> (Angle, bool) {
        if self.is_zero() {
            return (other.clone(), other.is_pi());
        }
        if other.is_zero() {
            return (self.clone(), self.is_pi());
        }
        let sin = &self.sin * &other.cos + &self.cos * &other.sin;
        // with both summands in (0, pi], the sum reaches pi exactly when
        // its sine is no longer positive
        if sin.sign() != Sign::Positive {
            return (Angle::pi(), true);
        }
        let cos = &self.cos * &other.cos - &self.sin * &other.sin;
        (Angle { cos, sin }, false)
    }

    /// Suspension distance between points on distinct longitudes:
    /// `min(a + b, 2 pi - a - b)`, flagged when the sum reaches pi and the
    /// shorter route runs through the down pole.
    pub fn join(&self, other: &Angle) -> (Angle, bool) {
        if self.is_zero() || other.is_zero() {
            return self.capped_sum(other);
        }
        let sin = &self.sin * &other.cos + &self.cos * &other.sin;
        let cos = &self.cos * &other.cos - &self.sin * &other.sin;
        match sin.sign() {
            Sign::Positive => (Angle { cos, sin }, false),
            _ => (Angle { cos, sin: -sin }, true),
        }
    }

    /// Angles are ordered by decreasing cosine.
    pub fn le(&self, other: &Angle) -> bool {
        self.cos >= other.cos
    }

    pub fn to_radians(&self) -> f64 {
        self.sin.to_f64().atan2(self.cos.to_f64())
    }
}

/// A Tits angle with the suspension cap flag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TitsAngle {
    pub angle: Angle,
    pub clamped: bool,
}

impl TitsAngle {
    pub fn cos(&self) -> &QuadScalar {
        &self.angle.cos
    }

    pub fn to_json(&self) -> Value {
        json!({
            "cos": self.angle.cos.to_string(),
            "sin": self.angle.sin.to_string(),
            "radians": format!("{:.15}", self.angle.to_radians()),
            "clamped": self.clamped,
        })
    }
}

/// A point of a block boundary. Poles carry no longitude.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryPoint {
    pub block: NhatVertex,
    pub longitude: Option<TreeEnd>,
    pub polar: Angle,
}

impl BoundaryPoint {
    pub fn new(block: NhatVertex, longitude: Option<TreeEnd>, polar: Angle) -> Result<Self> {
        let pole = polar.is_zero() || polar.is_pi();
        if pole != longitude.is_none() {
            return Err(Error::Model(
                "boundary points carry a longitude exactly when they are not poles".into(),
            ));
        }
        Ok(BoundaryPoint {
            block,
            longitude,
            polar,
        })
    }

    pub fn is_pole(&self) -> bool {
        self.longitude.is_none()
    }

    pub fn label(&self, cx: &Complex) -> String {
        let lon = match &self.longitude {
            None => "pole".to_string(),
            Some(e) => e.label(),
        };
        format!("{}:{}@cos={}", self.block.label(cx), lon, self.polar.cos)
    }
}

/// Up and down poles of a block.
pub fn pole_set(b: &NhatVertex) -> [BoundaryPoint; 2] {
    [
        BoundaryPoint {
            block: b.clone(),
            longitude: None,
            polar: Angle::zero(),
        },
        BoundaryPoint {
            block: b.clone(),
            longitude: None,
            polar: Angle::pi(),
        },
    ]
}

/// Suspension metric: equal longitudes (or a pole) give the polar difference,
/// distinct longitudes the polar sum capped at `pi`.
pub fn tits_angle_in_block(u: &BoundaryPoint, v: &BoundaryPoint) -> Result<TitsAngle> {
    if u.block != v.block {
        return Err(Error::DifferentBlocks);
    }
    if u.is_pole() || v.is_pole() || u.longitude == v.longitude {
        return Ok(TitsAngle {
            angle: u.polar.abs_diff(&v.polar),
            clamped: false,
        });
    }
    let (angle, clamped) = u.polar.join(&v.polar);
    Ok(TitsAngle { angle, clamped })
}

/// The up pole of a joint block, seen in the boundary of a neighboring
/// natural block: the forward end of the shared wall's shadow at polar
/// angle theta.
pub fn joint_pole_in(cx: &Complex, b: &BlockKey, j: &JointBlockKey) -> Result<BoundaryPoint> {
    let wall = cx.shared_wall(b, j)?;
    let end = TreeEnd::shadow_end(cx.tree(b.side), &wall.shadow, true);
    BoundaryPoint::new(NhatVertex::Natural(b.clone()), Some(end), Angle::theta(cx))
}

/// Tits angle between the up poles of a natural block and an adjacent joint
/// block, computed inside the natural block's boundary.
pub fn neighbor_pole_angle(cx: &Complex, x: &NhatVertex, y: &NhatVertex) -> Result<TitsAngle> {
    let (b, j) = match (x, y) {
        (NhatVertex::Natural(b), NhatVertex::Joint(j)) | (NhatVertex::Joint(j), NhatVertex::Natural(b)) => (b, j),
        _ => {
            return Err(Error::NotAdjacent(
                "pole angles are taken between a natural and a joint block".into(),
            ))
        }
    };
    let up = &pole_set(&NhatVertex::Natural(b.clone()))[0];
    tits_angle_in_block(up, &joint_pole_in(cx, b, j)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundaryClass {
    Same,
    WallBoundary(WallKey),
    PoleSet(NhatVertex),
    /// `separation` certifies disjointness at distance 3: the poles of the two
    /// middle blocks are a positive Tits angle apart.
    Empty {
        distance: usize,
        separation: Option<TitsAngle>,
    },
}

impl BoundaryClass {
    pub fn to_json(&self, cx: &Complex) -> Value {
        match self {
            BoundaryClass::Same => json!({"class": "same"}),
            BoundaryClass::WallBoundary(w) => json!({"class": "wall", "wall": cx.wall_label(w)}),
            BoundaryClass::PoleSet(m) => json!({"class": "poles", "block": m.label(cx)}),
            BoundaryClass::Empty {
                distance,
                separation,
            } => json!({
                "class": "empty",
                "distance": distance,
                "separation": separation.as_ref().map(|s| s.to_json()),
            }),
        }
    }
}

/// How the boundaries of two blocks meet, read off their distance in the
/// nerve of all blocks. Blocks within 2 of the ball's frontier are refused.
pub fn boundary_intersection_class(
    cx: &Complex,
    ball: &NhatBall,
    b0: &NhatVertex,
    b1: &NhatVertex,
) -> Result<BoundaryClass> {
    for b in [b0, b1] {
        match ball.vertices.get(b) {
            Some(&d) if d + 2 <= ball.radius => {}
            _ => {
                return Err(Error::OutOfBall(format!(
                    "{} is not at least 2 inside the radius-{} ball",
                    b.label(cx),
                    ball.radius
                )))
            }
        }
    }
    let path = ball
        .path(b0, b1)
        .ok_or_else(|| Error::Model("ball is disconnected".into()))?;
    Ok(match path.len() - 1 {
        0 => BoundaryClass::Same,
        1 => {
            let (b, j) = match (b0, b1) {
                (NhatVertex::Natural(b), NhatVertex::Joint(j)) | (NhatVertex::Joint(j), NhatVertex::Natural(b)) => {
                    (b, j)
                }
                _ => return Err(Error::Model("adjacent blocks of the same kind".into())),
            };
            let w = ball
                .edges
                .get(&(b.clone(), j.clone()))
                .ok_or_else(|| Error::Model("edge without a wall".into()))?;
            BoundaryClass::WallBoundary(w.clone())
        }
        2 => BoundaryClass::PoleSet(path[1].clone()),
        3 => {
            let sep = neighbor_pole_angle(cx, &path[1], &path[2])?;
            if sep.angle.is_zero() {
                return Err(Error::Model("middle blocks of a distance-3 pair share a pole".into()));
            }
            BoundaryClass::Empty {
                distance: 3,
                separation: Some(sep),
            }
        }
        d => BoundaryClass::Empty {
            distance: d,
            separation: None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::nhat::nerve_hat_ball;
    use crate::complex::tests::cx;
    use crate::group::Side;
    use crate::tree::{window_lines, JointLineKey, NerveWindow};

    fn ball(c: &Complex, r: i64) -> NhatBall {
        let w = NerveWindow {
            rho: 1,
            height: c.factor(Side::Minus).beta.clone(),
        };
        let wm = window_lines(c.factor(Side::Minus), &w).unwrap();
        let wp = window_lines(c.factor(Side::Plus), &w).unwrap();
        nerve_hat_ball(c, [&wm, &wp], 2, r, 100_000).unwrap()
    }

    #[test]
    fn suspension_examples() {
        let c = cx();
        let b = NhatVertex::Natural(BlockKey::base(Side::Minus));
        let [up, down] = pole_set(&b);
        assert_eq!(tits_angle_in_block(&up, &down).unwrap().angle, Angle::pi());
        assert_eq!(tits_angle_in_block(&up, &up).unwrap().angle, Angle::zero());
        let tree = c.tree(Side::Minus);
        let half = Angle::new(QuadScalar::zero(), QuadScalar::one()).unwrap();
        let e1 = TreeEnd::shadow_end(tree, &[], true);
        let e2 = TreeEnd::shadow_end(tree, &[], false);
        let x = BoundaryPoint::new(b.clone(), Some(e1), half.clone()).unwrap();
        let y = BoundaryPoint::new(b.clone(), Some(e2.clone()), half).unwrap();
        let t = tits_angle_in_block(&x, &y).unwrap();
        assert_eq!(t.angle, Angle::pi());
        assert!(t.clamped);
        // near the down pole the short route runs through it: 2 theta, not pi
        let th = Angle::theta(&c);
        let x = BoundaryPoint::new(b.clone(), Some(TreeEnd::shadow_end(tree, &[], true)), th.supplement()).unwrap();
        let y = BoundaryPoint::new(b, Some(e2), th.supplement()).unwrap();
        let t = tits_angle_in_block(&x, &y).unwrap();
        assert_eq!(t.angle, th.capped_sum(&th).0);
        assert!(t.clamped);
    }

    #[test]
    fn joint_poles_at_theta() {
        let c = cx();
        let gm = NhatVertex::Natural(BlockKey::base(Side::Minus));
        let j0 = NhatVertex::Joint(c.joint_block_of(&JointLineKey::default()));
        let t = neighbor_pole_angle(&c, &gm, &j0).unwrap();
        assert_eq!(t.angle, Angle::theta(&c));
        // two joint neighbors of G_-: 2 theta
        let bl = ball(&c, 2);
        let js = bl.neighbors(&gm);
        assert!(js.len() >= 2);
        let pole = |j: &NhatVertex| match j {
            NhatVertex::Joint(j) => joint_pole_in(&c, &BlockKey::base(Side::Minus), j).unwrap(),
            _ => unreachable!(),
        };
        let t2 = tits_angle_in_block(&pole(&js[0]), &pole(&js[1])).unwrap();
        let th = Angle::theta(&c);
        assert_eq!(t2.angle, th.capped_sum(&th).0);
        assert!(!t2.clamped);
    }

    #[test]
    fn intersection_classes() {
        let c = cx();
        let bl = ball(&c, 5);
        let gm = NhatVertex::Natural(BlockKey::base(Side::Minus));
        let j = bl.neighbors(&gm)[0].clone();
        assert!(matches!(
            boundary_intersection_class(&c, &bl, &gm, &j).unwrap(),
            BoundaryClass::WallBoundary(_)
        ));
        let b2 = bl.neighbors(&j).into_iter().find(|v| *v != gm).unwrap();
        assert_eq!(
            boundary_intersection_class(&c, &bl, &gm, &b2).unwrap(),
            BoundaryClass::PoleSet(j.clone())
        );
        let j3 = bl.neighbors(&b2).into_iter().find(|v| *v != j).unwrap();
        match boundary_intersection_class(&c, &bl, &gm, &j3).unwrap() {
            BoundaryClass::Empty {
                distance: 3,
                separation: Some(s),
            } => assert_eq!(s.angle, Angle::theta(&c)),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            boundary_intersection_class(&c, &bl, &j3, &gm).unwrap(),
            boundary_intersection_class(&c, &bl, &gm, &j3).unwrap()
        );
    }
}
