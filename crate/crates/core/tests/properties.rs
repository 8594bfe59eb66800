//! Property tests over random inputs.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cat0knot::boundary::{tits_angle_in_block, wall_boundary_walk, Angle, BoundaryPoint, TreeEnd};
use cat0knot::complex::geodesic::{geodesic_cross, GeodesicOptions};
use cat0knot::complex::nhat::NhatVertex;
use cat0knot::complex::sample::{random_edge, random_point};
use cat0knot::complex::Complex;
use cat0knot::config::Config;
use cat0knot::exact::QuadScalar;
use cat0knot::group::{Side, ThetaSpec, TorusGroup, TorusWord, GEN_A, GEN_B};
use cat0knot::tree::{BlockKey, VertexKind};

fn quad(d: u64) -> impl Strategy<Value = QuadScalar> {
    (-50i64..50, 1i64..20, -50i64..50, 1i64..20).prop_map(move |(an, ad, bn, bd)| {
        QuadScalar::new(
            BigRational::new(BigInt::from(an), BigInt::from(ad)),
            BigRational::new(BigInt::from(bn), BigInt::from(bd)),
            d,
        )
        .unwrap()
    })
}

fn word(g: TorusGroup) -> impl Strategy<Value = TorusWord> {
    prop::collection::vec((any::<bool>(), -7i64..7), 0..8).prop_map(move |letters| {
        let letters: Vec<_> = letters
            .into_iter()
            .map(|(a, e)| (if a { GEN_A } else { GEN_B }, e))
            .collect();
        g.normalize(&letters)
    })
}

fn cx() -> Complex {
    let t = BigRational::new(BigInt::from(1), BigInt::from(2));
    Complex::new((2, 3), (2, 5), &ThetaSpec::from_half_tangent(&t).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn quad_field_laws(x in quad(2), y in quad(2), z in quad(2)) {
        prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
        if !y.is_zero() {
            prop_assert_eq!(&(&x / &y) * &y, x.clone());
        }
        let parsed: QuadScalar = x.to_string().parse().unwrap();
        prop_assert_eq!(&parsed, &x);
        if (x.to_f64() - y.to_f64()).abs() > 1e-9 {
            prop_assert_eq!(x < y, x.to_f64() < y.to_f64());
        }
    }

    #[test]
    fn torus_words_form_a_group(x in word(TorusGroup::new(2, 3).unwrap()),
                                y in word(TorusGroup::new(2, 3).unwrap()),
                                z in word(TorusGroup::new(2, 3).unwrap())) {
        let g = TorusGroup::new(2, 3).unwrap();
        prop_assert_eq!(g.mul(&g.mul(&x, &y), &z), g.mul(&x, &g.mul(&y, &z)));
        prop_assert!(g.mul(&x, &g.inv(&x)).is_identity());
        // the height is a homomorphism to Z
        prop_assert_eq!(g.height_units(&g.mul(&x, &y)), g.height_units(&x) + g.height_units(&y));
        let text = g.format(&x, ["a", "b", "t"]);
        prop_assert_eq!(g.parse(&text).unwrap(), x);
    }

    #[test]
    fn tree_distance_is_an_invariant_metric(seed in any::<u64>()) {
        let c = cx();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tree = c.tree(Side::Plus);
        let v = |rng: &mut ChaCha8Rng, k| tree.vertex(k, &random_edge(&c, rng, Side::Plus, 4));
        let (x, y, z) = (v(&mut rng, VertexKind::A), v(&mut rng, VertexKind::B), v(&mut rng, VertexKind::A));
        let g = random_edge(&c, &mut rng, Side::Plus, 3);
        prop_assert_eq!(tree.dist(&x, &y), tree.dist(&y, &x));
        prop_assert!(tree.dist(&x, &z) <= tree.dist(&x, &y) + tree.dist(&y, &z));
        prop_assert_eq!(tree.dist(&x, &z) % 2, 0);
        prop_assert_eq!(tree.dist(&tree.act(&g, &x), &tree.act(&g, &y)), tree.dist(&x, &y));
    }

    #[test]
    fn pole_walk_steps_are_exact(n in 1i64..12, d in 2i64..13) {
        prop_assume!(n < d);
        let t = BigRational::new(BigInt::from(n), BigInt::from(d));
        let w = wall_boundary_walk(&ThetaSpec::from_half_tangent(&t).unwrap(), 60).unwrap();
        prop_assert!(w.steps_exact);
        // a rational t in (0, 1) gives a rational cos theta in (0, 1); by
        // Niven's theorem theta is then no rational multiple of pi
        prop_assert_eq!(w.closure, None);
    }

    #[test]
    fn config_round_trips(r in 0i64..6, depth in 1usize..5, seed in any::<u64>()) {
        let cfg = Config { ball_radius: r, joint_depth: depth, seed, ..Config::default() };
        let text = serde_json::to_string(&cfg).unwrap();
        prop_assert_eq!(Config::from_json(&text).unwrap(), cfg);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn suspension_metric_axioms(i in 0usize..6, j in 0usize..6, k in 0usize..6,
                                li in 0usize..2, lj in 0usize..2, lk in 0usize..2) {
        let c = cx();
        let th = Angle::theta(&c);
        let right = Angle::new(QuadScalar::zero(), QuadScalar::one()).unwrap();
        let polars = [Angle::zero(), th.clone(), right, th.supplement(), th.capped_sum(&th).0, Angle::pi()];
        let b = NhatVertex::Natural(BlockKey::base(Side::Minus));
        let tree = c.tree(Side::Minus);
        let pt = |p: usize, l: usize| {
            let polar = polars[p].clone();
            let lon = (!polar.is_zero() && !polar.is_pi()).then(|| TreeEnd::shadow_end(tree, &[], l == 0));
            BoundaryPoint::new(b.clone(), lon, polar).unwrap()
        };
        let (u, v, w) = (pt(i, li), pt(j, lj), pt(k, lk));
        let d = |x: &BoundaryPoint, y: &BoundaryPoint| tits_angle_in_block(x, y).unwrap().angle;
        prop_assert_eq!(d(&u, &v), d(&v, &u));
        prop_assert!(d(&u, &u).is_zero());
        prop_assert!(d(&u, &w).le(&d(&u, &v).capped_sum(&d(&v, &w)).0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn geodesics_are_symmetric(seed in any::<u64>()) {
        let c = cx();
        let cfg = Config::default();
        let w = cfg.windows(&c).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_point(&c, &mut rng, [&w[0], &w[1]], 2, 2);
        let y = random_point(&c, &mut rng, [&w[0], &w[1]], 2, 2);
        let opts = GeodesicOptions { epsilon: 1e-9, max_crossings: 64 };
        let xy = geodesic_cross(&c, &x, &y, &opts).unwrap();
        let yx = geodesic_cross(&c, &y, &x, &opts).unwrap();
        prop_assert!(xy.certified() && yx.certified());
        prop_assert!((xy.length - yx.length).abs() <= 2e-9);
        let mut back = yx.blocks.clone();
        back.reverse();
        prop_assert_eq!(xy.blocks, back);
    }
}
