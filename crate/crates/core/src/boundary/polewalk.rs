//! Rotating the up pole around the boundary circle of a wall by theta.
//!
//! With `cos theta = C / D` and `sin theta = S / D` for `C, S` in `Z[sqrt d]`,
//! the `k`-th point is `(x_k, y_k) / D^k` with integral numerators, so each
//! step is a multiplication by small constants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::Result;
use crate::exact::{common_denominator, QuadScalar};
use crate::group::ThetaSpec;

/// `a + b sqrt(d)` with integer coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
struct ZSqrt {
    a: BigInt,
    b: BigInt,
}

impl ZSqrt {
    fn mul(&self, o: &ZSqrt, d: &BigInt) -> ZSqrt {
        ZSqrt {
            a: &self.a * &o.a + &self.b * &o.b * d,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }

    fn add(&self, o: &ZSqrt) -> ZSqrt {
        ZSqrt {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }

    fn sub(&self, o: &ZSqrt) -> ZSqrt {
        ZSqrt {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
        }
    }

    fn from_scaled(x: &QuadScalar, den: &BigInt) -> ZSqrt {
        let f = |r: &BigRational| {
            let s = r * BigRational::from_integer(den.clone());
            debug_assert!(s.is_integer());
            s.to_integer()
        };
        ZSqrt { a: f(x.a()), b: f(x.b()) }
    }

    fn to_quad(&self, den: &BigInt, d: u64) -> QuadScalar {
        let r = |n: &BigInt| BigRational::new(n.clone(), den.clone());
        QuadScalar::new(r(&self.a), r(&self.b), d).expect("radicand already validated")
    }
}

#[derive(Clone, Debug)]
pub struct PoleWalk {
    pub steps: usize,
    /// First `k > 0` with `z_k = z_0`.
    pub closure: Option<usize>,
    /// Number of distinct points among `z_0 .. z_K`.
    pub distinct: usize,
    /// Every consecutive pair is exactly theta apart.
    pub steps_exact: bool,
    d: u64,
    den: BigInt,
    /// The first `KEPT + 1` points.
    points: Vec<(ZSqrt, ZSqrt)>,
}

/// Points retained for output; the walk itself keeps only the current one.
pub const KEPT: usize = 256;

impl PoleWalk {
    /// `(cos, sin)` of `z_k`, exact, for `k <= KEPT`.
    pub fn point(&self, k: usize) -> (QuadScalar, QuadScalar) {
        let dk = num_traits::pow(self.den.clone(), k);
        let (x, y) = &self.points[k];
        (x.to_quad(&dk, self.d), y.to_quad(&dk, self.d))
    }

    /// Whether the orbit size divides twice the rotation order.
    pub fn orbit_divides(&self, order: usize) -> bool {
        self.closure.is_some_and(|k| (2 * order) % k == 0)
    }

    /// JSON listing of the first `limit` points.
    pub fn to_json(&self, limit: usize) -> Value {
        let pts: Vec<Value> = (0..self.points.len().min(limit + 1))
            .map(|k| {
                let (c, s) = self.point(k);
                json!({
                    "k": k,
                    "cos": c.to_string(),
                    "sin": s.to_string(),
                    "equals_z0": k > 0 && self.returns_at(k),
                })
            })
            .collect();
        json!({
            "steps": self.steps,
            "closure": self.closure,
            "distinct_points": self.distinct,
            "consecutive_angles_exact": self.steps_exact,
            "points": pts,
        })
    }

    fn returns_at(&self, k: usize) -> bool {
        let (x, y) = &self.points[k];
        y.a.is_zero() && y.b.is_zero() && x.b.is_zero() && x.a == num_traits::pow(self.den.clone(), k)
    }
}

/// Walks `z_0 = ` up pole, `z_{k+1} = z_k` rotated by theta, for `steps`
/// steps. Stops at the first exact return to `z_0`.
pub fn wall_boundary_walk(theta: &ThetaSpec, steps: usize) -> Result<PoleWalk> {
    let (c, s) = (&theta.cos_theta, &theta.sin_theta);
    let den = num_integer::Integer::lcm(&common_denominator(c), &common_denominator(s));
    let cz = ZSqrt::from_scaled(c, &den);
    let sz = ZSqrt::from_scaled(s, &den);
    let d = BigInt::from(theta.d);
    let zero = ZSqrt {
        a: BigInt::zero(),
        b: BigInt::zero(),
    };
    let mut cur = (
        ZSqrt {
            a: BigInt::one(),
            b: BigInt::zero(),
        },
        zero,
    );
    let mut points = vec![cur.clone()];
    let mut closure = None;
    let mut steps_exact = true;
    // D^(2k), to compare x_k x_{k+1} + y_k y_{k+1} with C D^(2k)
    let mut d2k = BigInt::one();
    let den2 = &den * &den;
    let mut dk = BigInt::one();
    for k in 0..steps {
        let (x, y) = &cur;
        let nx = x.mul(&cz, &d).sub(&y.mul(&sz, &d));
        let ny = x.mul(&sz, &d).add(&y.mul(&cz, &d));
        let dot = x.mul(&nx, &d).add(&y.mul(&ny, &d));
        let want = ZSqrt {
            a: &cz.a * &d2k,
            b: &cz.b * &d2k,
        };
        steps_exact &= dot == want;
        d2k *= &den2;
        dk *= &den;
        let back = ny.a.is_zero() && ny.b.is_zero() && nx.b.is_zero() && nx.a == dk;
        cur = (nx, ny);
        if k < KEPT {
            points.push(cur.clone());
        }
        if back {
            closure = Some(k + 1);
            break;
        }
    }
    let distinct = closure.unwrap_or(steps + 1);
    Ok(PoleWalk {
        steps,
        closure,
        distinct,
        steps_exact,
        d: theta.d,
        den,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_for_rational_multiples_of_pi() {
        let w = wall_boundary_walk(&ThetaSpec::quarter_pi(), 20).unwrap();
        assert_eq!(w.closure, Some(8));
        assert_eq!(w.distinct, 8);
        assert!(w.steps_exact);
        assert!(w.orbit_divides(8));
        let w = wall_boundary_walk(&ThetaSpec::third_pi(), 20).unwrap();
        assert_eq!(w.closure, Some(6));
        let (c, s) = w.point(3);
        assert_eq!(c, QuadScalar::from_int(-1));
        assert!(s.is_zero());
    }

    #[test]
    fn no_closure_for_three_fifths() {
        let th = ThetaSpec::from_half_tangent(&BigRational::new(1.into(), 2.into())).unwrap();
        let w = wall_boundary_walk(&th, 500).unwrap();
        assert_eq!(w.closure, None);
        assert_eq!(w.distinct, 501);
        assert!(w.steps_exact);
        let (c, _) = w.point(1);
        assert_eq!(c, QuadScalar::from_ratio(3, 5));
    }
}
