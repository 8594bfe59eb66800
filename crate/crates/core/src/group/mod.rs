//! Torus-knot groups, their amalgam along the meridian, and the metric data
//! (rectangle sides, translation heights) tuned to a joint angle.

pub mod amalgam;
pub mod word;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{QuadScalar, Sign};

pub use amalgam::{Amalgam, AmalgamWord, Side};
pub use word::{ext_euclid, FreeProduct, FpWord, Syllable, TorusGroup, TorusWord, GEN_A, GEN_B};

/// Exact cosine and sine of the angle between joint lines and vertical lines.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaSpec {
    pub cos_theta: QuadScalar,
    pub sin_theta: QuadScalar,
    pub d: u64,
}

impl ThetaSpec {
    /// Rational point of the unit circle from the tangent of the half angle.
    pub fn from_half_tangent(t: &BigRational) -> Result<Self> {
        let zero = BigRational::from_integer(BigInt::from(0));
        let one = BigRational::from_integer(BigInt::from(1));
        if *t <= zero || *t >= one {
            return Err(Error::InvalidConfig {
                field: "theta.t".into(),
                reason: format!("half-angle tangent must lie in (0, 1), got {t}"),
            });
        }
        let t2 = t * t;
        let den = &one + &t2;
        let cos = QuadScalar::rational((&one - &t2) / &den);
        let sin = QuadScalar::rational(BigRational::from_integer(BigInt::from(2)) * t / &den);
        Self::new(cos, sin, 1)
    }

    pub fn new(cos_theta: QuadScalar, sin_theta: QuadScalar, d: u64) -> Result<Self> {
        let bad = |reason: String| Error::InvalidConfig {
            field: "theta".into(),
            reason,
        };
        for x in [&cos_theta, &sin_theta] {
            if !x.is_rational() && x.radicand() != d {
                return Err(bad(format!(
                    "value {x} does not live in Q(sqrt({d}))"
                )));
            }
        }
        if cos_theta.square() + sin_theta.square() != QuadScalar::one() {
            return Err(bad("cos^2 + sin^2 != 1".into()));
        }
        let one = QuadScalar::one();
        for (name, x) in [("cos", &cos_theta), ("sin", &sin_theta)] {
            if x.sign() != Sign::Positive || *x >= one {
                return Err(bad(format!(
                    "{name} theta = {x} outside (0, 1); theta must lie strictly between 0 and pi/2"
                )));
            }
        }
        Ok(ThetaSpec {
            cos_theta,
            sin_theta,
            d,
        })
    }

    /// `theta = pi/4`.
    pub fn quarter_pi() -> Self {
        let h = QuadScalar::from_ratio(1, 2) * QuadScalar::sqrt_of(2).unwrap();
        Self::new(h.clone(), h, 2).unwrap()
    }

    /// `theta = pi/3`.
    pub fn third_pi() -> Self {
        let s = QuadScalar::from_ratio(1, 2) * QuadScalar::sqrt_of(3).unwrap();
        Self::new(QuadScalar::from_ratio(1, 2), s, 3).unwrap()
    }
}

/// One torus-knot factor with its rectangle `[0, alpha] x [0, beta]` chosen
/// so that the meridian loop has length 1 and leans at angle theta.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusKnotParams {
    pub group: TorusGroup,
    pub alpha: QuadScalar,
    pub beta: QuadScalar,
    pub cos_theta: QuadScalar,
    pub sin_theta: QuadScalar,
}

impl TorusKnotParams {
    pub fn new(p: i64, q: i64, theta: &ThetaSpec) -> Result<Self> {
        let group = TorusGroup::new(p, q)?;
        // 2 alpha = sin theta, beta / pq = cos theta.
        let alpha = &theta.sin_theta * QuadScalar::from_ratio(1, 2);
        let beta = &theta.cos_theta * QuadScalar::from_int(p * q);
        Ok(TorusKnotParams {
            group,
            alpha,
            beta,
            cos_theta: theta.cos_theta.clone(),
            sin_theta: theta.sin_theta.clone(),
        })
    }

    pub fn p(&self) -> i64 {
        self.group.p
    }

    pub fn q(&self) -> i64 {
        self.group.q
    }

    /// Translation height `lambda(g)` of `g` along the line factor.
    pub fn lambda(&self, g: &TorusWord) -> QuadScalar {
        let pq = self.p() * self.q();
        QuadScalar::from_ratio(self.group.height_units(g), pq) * &self.beta
    }

    /// Squared length of the closed geodesic representing the meridian.
    pub fn joint_loop_length_sq(&self) -> QuadScalar {
        let two_alpha = &self.alpha * QuadScalar::from_int(2);
        let rise = &self.beta * QuadScalar::from_ratio(1, self.p() * self.q());
        two_alpha.square() + rise.square()
    }
}

/// One row of the no-right-angle certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NoRightAngleEntry {
    pub p: i64,
    pub q: i64,
    /// `lambda(omega) / lambda(tau)` as a reduced fraction.
    pub ratio: String,
    pub nonzero: bool,
    pub matches_one_over_pq: bool,
}

/// Certifies that the meridian always drifts vertically: for every coprime
/// `2 <= p < q <= p_max`, `lambda(omega) / lambda(tau) = 1/pq != 0`. The ratio
/// is independent of the rectangle, so it is computed in height units.
pub fn check_no_right_angle(p_max: i64) -> Result<Vec<NoRightAngleEntry>> {
    if p_max < 3 {
        return Err(Error::InvalidConfig {
            field: "p_max".into(),
            reason: "need p_max >= 3".into(),
        });
    }
    let mut out = Vec::new();
    for p in 2..=p_max {
        for q in (p + 1)..=p_max {
            if num_integer::gcd(p, q) != 1 {
                continue;
            }
            let g = TorusGroup::new(p, q)?;
            let ratio = BigRational::new(
                BigInt::from(g.height_units(&g.omega())),
                BigInt::from(g.height_units(&g.tau())),
            );
            let expect = BigRational::new(BigInt::from(1), BigInt::from(p * q));
            out.push(NoRightAngleEntry {
                p,
                q,
                ratio: format!("{}/{}", ratio.numer(), ratio.denom()),
                nonzero: ratio != BigRational::from_integer(BigInt::from(0)),
                matches_one_over_pq: ratio == expect,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> ThetaSpec {
        ThetaSpec::from_half_tangent(&BigRational::new(1.into(), 2.into())).unwrap()
    }

    #[test]
    fn half_tangent_gives_three_fifths() {
        let th = half();
        assert_eq!(th.cos_theta, QuadScalar::from_ratio(3, 5));
        assert_eq!(th.sin_theta, QuadScalar::from_ratio(4, 5));
    }

    #[test]
    fn theta_range_enforced() {
        assert!(ThetaSpec::new(QuadScalar::one(), QuadScalar::zero(), 1).is_err());
        assert!(ThetaSpec::new(QuadScalar::zero(), QuadScalar::one(), 1).is_err());
        assert!(ThetaSpec::new(
            QuadScalar::from_ratio(3, 5),
            QuadScalar::from_ratio(3, 5),
            1
        )
        .is_err());
        ThetaSpec::quarter_pi();
        ThetaSpec::third_pi();
    }

    #[test]
    fn lambda_values() {
        let k = TorusKnotParams::new(2, 3, &half()).unwrap();
        let g = &k.group;
        assert_eq!(k.lambda(&g.tau()), k.beta);
        assert_eq!(k.lambda(&TorusWord::identity()), QuadScalar::zero());
        assert_eq!(
            k.lambda(&g.omega()),
            &k.beta * QuadScalar::from_ratio(1, 6)
        );
        assert_eq!(k.joint_loop_length_sq(), QuadScalar::one());
    }

    #[test]
    fn no_right_angle_small() {
        let rows = check_no_right_angle(5).unwrap();
        assert!(rows.iter().all(|r| r.nonzero && r.matches_one_over_pq));
        let r23 = rows.iter().find(|r| (r.p, r.q) == (2, 3)).unwrap();
        assert_eq!(r23.ratio, "1/6");
        let r34 = rows.iter().find(|r| (r.p, r.q) == (3, 4)).unwrap();
        assert_eq!(r34.ratio, "1/12");
    }
}
