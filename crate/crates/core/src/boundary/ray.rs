//! Symbolic rays: ends of trees as eventually periodic words, ray specs by
//! their natural itinerary, bifurcation at branch vertices, and the
//! rational/irrational classification.

use serde_json::{json, Value};

use super::{Angle, BoundaryPoint};
use crate::complex::joint::{JointBlockKey, WallKey};
use crate::complex::nhat::NhatVertex;
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::group::word::{canonical_end, format_fp};
use crate::group::{FpWord, FreeProduct, Side, Syllable, TorusWord};
use crate::tree::{lines_through_vertex, BlockKey, JointLineKey, Tree, TreeVertex};

/// An end of a Bass-Serre tree, as the infinite reduced word
/// `prefix . period . period ...` read from `v_a`: a word starting with `a^i`
/// leaves `v_a` along the edge `a^i`, one starting with `b` leaves along the
/// edge `1` to `v_b` first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeEnd {
    pub prefix: FpWord,
    pub period: FpWord,
}

impl TreeEnd {
    pub fn new(fp: &FreeProduct, prefix: &[Syllable], period: &[Syllable]) -> Result<Self> {
        if period.is_empty() || period.len() % 2 != 0 {
            return Err(Error::InvalidConfig {
                field: "ray.period".into(),
                reason: "period of a tree end must be a nonempty alternating word of even length".into(),
            });
        }
        let mut full = prefix.to_vec();
        full.extend_from_slice(period);
        full.extend_from_slice(period);
        let reduced = full.windows(2).all(|w| w[0].gen != w[1].gen)
            && full.iter().all(|s| fp.reduce_exp(s.gen, s.exp) == s.exp && s.exp != 0);
        if !reduced {
            return Err(Error::InvalidConfig {
                field: "ray".into(),
                reason: "end word is not reduced".into(),
            });
        }
        let (prefix, period) = canonical_end(prefix, period);
        Ok(TreeEnd { prefix, period })
    }

    /// Forward (`omega^inf`) or backward end of the shadow `s L_0`.
    pub fn shadow_end(tree: &Tree, s: &[Syllable], forward: bool) -> Self {
        let period = if forward {
            tree.omega_bar.clone()
        } else {
            tree.fp.inv(&tree.omega_bar)
        };
        TreeEnd::new(&tree.fp, &[], &period)
            .expect("shadow period is reduced")
            .act(&tree.fp, s)
    }

    /// The first `len` syllables.
    pub fn unroll(&self, len: usize) -> FpWord {
        self.prefix
            .iter()
            .chain(self.period.iter().cycle())
            .take(len)
            .copied()
            .collect()
    }

    /// Image under `g`.
    pub fn act(&self, fp: &FreeProduct, g: &[Syllable]) -> Self {
        let reps = (g.len() + 2).div_ceil(self.period.len()) + 1;
        let mut w = self.prefix.clone();
        for _ in 0..reps {
            w.extend_from_slice(&self.period);
        }
        let head = fp.mul(g, &w);
        let (prefix, period) = canonical_end(&head, &self.period);
        TreeEnd { prefix, period }
    }

    pub fn is_shadow_end(&self, tree: &Tree) -> bool {
        let rotations = |p: &FpWord| -> Vec<FpWord> {
            (0..p.len())
                .map(|i| {
                    let mut r = p.clone();
                    r.rotate_left(i);
                    r
                })
                .collect()
        };
        let fwd = TreeEnd::shadow_end(tree, &[], true).period;
        let bwd = TreeEnd::shadow_end(tree, &[], false).period;
        rotations(&fwd).contains(&self.period) || rotations(&bwd).contains(&self.period)
    }

    /// Length of the common initial segment, up to `max` syllables.
    pub fn common_prefix(&self, other: &TreeEnd, max: usize) -> usize {
        let (x, y) = (self.unroll(max), other.unroll(max));
        x.iter().zip(&y).take_while(|(a, b)| a == b).count()
    }

    /// Edges of the ray from `v_a`.
    pub fn edges(&self, count: usize) -> Vec<FpWord> {
        let w = self.unroll(count);
        let mut out = Vec::with_capacity(count);
        let mut cur: FpWord = Vec::new();
        if w.first().is_some_and(|s| s.gen == crate::group::GEN_B) {
            out.push(Vec::new());
        }
        for s in w {
            if out.len() == count {
                break;
            }
            cur.push(s);
            out.push(cur.clone());
        }
        out
    }

    /// Vertices `v_a = v_0, v_1, ...` of the ray.
    pub fn vertices(&self, tree: &Tree, count: usize) -> Vec<TreeVertex> {
        let mut out = vec![tree.v_a()];
        for e in self.edges(count.saturating_sub(1)) {
            let (a, b) = tree.edge_ends(&e);
            let last = out.last().unwrap();
            out.push(if a == *last { b } else { a });
        }
        out
    }

    pub fn label(&self) -> String {
        format!(
            "{}({})^inf",
            if self.prefix.is_empty() {
                String::new()
            } else {
                format!("{}.", format_fp(&self.prefix, ["a", "b"]))
            },
            format_fp(&self.period, ["a", "b"])
        )
    }
}

/// A geodesic ray from the basepoint of `start`: its polar angle, its tree
/// end inside `start` (none for vertical rays), and the joint lines it
/// crosses, given as the eventually periodic sequence of steps `c_k` of the
/// natural itinerary (each `c_k` in the factor of the current block).
#[derive(Clone, Debug)]
pub struct RaySpec {
    pub start: BlockKey,
    pub polar: Angle,
    pub longitude: Option<TreeEnd>,
    pub prefix: Vec<TorusWord>,
    pub period: Vec<TorusWord>,
}

impl RaySpec {
    pub fn vertical(start: BlockKey) -> Self {
        RaySpec {
            start,
            polar: Angle::zero(),
            longitude: None,
            prefix: vec![],
            period: vec![],
        }
    }

    fn validate(&self) -> Result<()> {
        let vertical = self.polar.is_zero() || self.polar.is_pi();
        if vertical && (!self.prefix.is_empty() || !self.period.is_empty()) {
            return Err(Error::InvalidConfig {
                field: "ray".into(),
                reason: "a vertical ray stays in its block and crosses no joint line".into(),
            });
        }
        if vertical != self.longitude.is_none() {
            return Err(Error::InvalidConfig {
                field: "ray.longitude".into(),
                reason: "non-vertical rays need a tree end, vertical ones none".into(),
            });
        }
        if self.period.len() % 2 != 0 {
            return Err(Error::InvalidConfig {
                field: "ray.period".into(),
                reason: "itinerary period must have even length to return to the same side".into(),
            });
        }
        Ok(())
    }

    /// Natural block after `k` steps.
    pub fn block_after(&self, cx: &Complex, k: usize) -> BlockKey {
        let mut block = self.start.clone();
        let mut elem = self.start.element();
        for c in self.prefix.iter().chain(self.period.iter().cycle()).take(k) {
            elem = cx.am.mul(&elem, &cx.am.from_factor(block.side, c));
            let (m, p) = JointLineKey::from_element(&elem).ends();
            block = if m == block { p } else { m };
        }
        block
    }
}

/// The end of the nerve of all blocks a ray converges to, as the stable
/// initial part of its itinerary from `G_-`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NhatEnd {
    pub stem: Vec<NhatVertex>,
    /// Growth of the itinerary per period.
    pub growth: usize,
}

impl NhatEnd {
    /// Two ends agree if neither stem leaves the other.
    pub fn agrees(&self, other: &NhatEnd) -> bool {
        self.stem.iter().zip(&other.stem).all(|(a, b)| a == b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RayClass {
    /// Finite itinerary ending at `itinerary.last()`. `infinite_natural` marks
    /// rays that still cross infinitely many natural blocks, all inside that
    /// final joint block.
    Rational {
        itinerary: Vec<NhatVertex>,
        infinite_natural: bool,
    },
    Irrational(NhatEnd),
}

impl RayClass {
    pub fn to_json(&self, cx: &Complex) -> Value {
        let labels = |v: &[NhatVertex]| v.iter().map(|x| x.label(cx)).collect::<Vec<_>>();
        match self {
            RayClass::Rational {
                itinerary,
                infinite_natural,
            } => json!({
                "class": "rational",
                "itinerary": labels(itinerary),
                "infinite_natural_itinerary": infinite_natural,
            }),
            RayClass::Irrational(e) => json!({
                "class": "irrational",
                "stem": labels(&e.stem),
                "growth_per_period": e.growth,
            }),
        }
    }
}

/// Rational when the itinerary through all blocks stays bounded, irrational
/// when it grows with every period.
pub fn classify_rational(cx: &Complex, ray: &RaySpec) -> Result<RayClass> {
    ray.validate()?;
    if ray.period.is_empty() {
        let last = ray.block_after(cx, ray.prefix.len());
        return Ok(RayClass::Rational {
            itinerary: cx.itinerary_nhat(&ray.start, &last),
            infinite_natural: false,
        });
    }
    let at = |r: usize| ray.block_after(cx, ray.prefix.len() + r * ray.period.len());
    let blocks: Vec<BlockKey> = (1..=4).map(at).collect();
    let d: Vec<usize> = blocks.iter().map(|b| cx.nhat_distance(&ray.start, b)).collect();
    if d[1] == d[2] && d[2] == d[3] {
        let mut itinerary = cx.itinerary_nhat(&ray.start, &blocks[3]);
        itinerary.pop();
        return Ok(RayClass::Rational {
            itinerary,
            infinite_natural: true,
        });
    }
    if !(d[1] < d[2] && d[2] < d[3] && d[3] - d[2] == d[2] - d[1]) {
        return Err(Error::Model(format!(
            "itinerary lengths {d:?} neither stabilize nor grow periodically"
        )));
    }
    let root = BlockKey::base(Side::Minus);
    let i3 = cx.itinerary_nhat(&root, &blocks[2]);
    let i4 = cx.itinerary_nhat(&root, &blocks[3]);
    let stem: Vec<NhatVertex> = i3
        .iter()
        .zip(&i4)
        .take_while(|(a, b)| a == b)
        .map(|(a, _)| a.clone())
        .collect();
    Ok(RayClass::Irrational(NhatEnd {
        stem,
        growth: d[3] - d[2],
    }))
}

/// One wall-confined approximant of a ray.
#[derive(Clone, Debug)]
pub struct Approximant {
    /// Index along the ray of the branch vertex.
    pub index: usize,
    pub branch_vertex: TreeVertex,
    pub wall: WallKey,
    pub point: BoundaryPoint,
    /// Joint block whose pole the approximant lands on.
    pub pole_of: Option<JointBlockKey>,
    /// Syllables shared with the ray's end word.
    pub shared_prefix: usize,
}

impl Approximant {
    pub fn to_json(&self, cx: &Complex) -> Value {
        json!({
            "index": self.index,
            "branch_vertex": self.branch_vertex.label(),
            "wall": cx.wall_label(&self.wall),
            "point": self.point.label(cx),
            "pole_of": self.pole_of.as_ref().map(|j| cx.joint_block_label(j)),
            "shared_prefix": self.shared_prefix,
        })
    }
}

/// The first `n` bifurcations of a ray inside its start block: at the `k`-th
/// vertex of valence at least 3, leave along a third edge inside a wall and
/// follow that wall's shadow to its end. For polar angle theta (or its
/// supplement) the wall is oriented so that the approximant is the pole of
/// the wall's joint block. A ray confined to one shadow has no
/// bifurcations.
pub fn bifurcation_approximants(cx: &Complex, ray: &RaySpec, n: usize) -> Result<Vec<Approximant>> {
    ray.validate()?;
    let side = ray.start.side;
    let tree = cx.tree(side);
    let block = NhatVertex::Natural(ray.start.clone());
    let vertical = ray.longitude.is_none();
    // a vertical ray bifurcates along any tree ray; use the forward end of L_0
    let lon = match &ray.longitude {
        Some(e) if e.is_shadow_end(tree) => return Ok(vec![]),
        Some(e) => e.clone(),
        None => TreeEnd::shadow_end(tree, &[], true),
    };
    let theta = Angle::theta(cx);
    let forward = ray.polar.cos.sign() != crate::exact::Sign::Negative;
    let mut out = Vec::new();
    let mut len = 2 * n + 4;
    while out.len() < n {
        let verts = lon.vertices(tree, len);
        out.clear();
        for i in 1..verts.len() - 1 {
            if out.len() == n {
                break;
            }
            let v = &verts[i];
            if tree.valence(v.kind) < 3 {
                continue;
            }
            let (prev, next) = (&verts[i - 1], &verts[i + 1]);
            let Some(third) = tree.neighbors(v).into_iter().find(|w| w != prev && w != next) else {
                continue;
            };
            let (s, dir_out) = lines_through_vertex(tree, v)
                .into_iter()
                .find_map(|s| {
                    let line = tree.line(&s);
                    let (kv, _) = line.project_vertex(tree, v);
                    let (kw, dw) = line.project_vertex(tree, &third);
                    // outward along the third edge for forward, inward for backward
                    let ok = dw == 0 && ((kw == kv + 1) == forward);
                    ok.then_some((s, forward))
                })
                .ok_or_else(|| Error::Model(format!("no shadow leaves {} as required", v.label())))?;
            let end = TreeEnd::shadow_end(tree, &s, dir_out);
            let wall = WallKey {
                block: ray.start.clone(),
                shadow: s,
            };
            let lands = (ray.polar == theta && dir_out) || (ray.polar == theta.supplement() && !dir_out);
            let point = if vertical {
                BoundaryPoint::new(block.clone(), None, ray.polar.clone())?
            } else {
                BoundaryPoint::new(block.clone(), Some(end.clone()), ray.polar.clone())?
            };
            out.push(Approximant {
                index: i,
                branch_vertex: v.clone(),
                pole_of: lands.then(|| cx.joint_block_of_wall(&wall)),
                wall,
                point,
                shared_prefix: end.common_prefix(&lon, len + 8),
            });
        }
        if out.len() < n {
            len *= 2;
            if len > 1 << 16 {
                return Err(Error::Model("ray passes too few branch vertices".into()));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::tests::cx;
    use crate::group::GEN_A;
    use crate::group::GEN_B;

    fn generic_end(c: &Complex) -> TreeEnd {
        // (2,3) tree: alternate b and b^2 so the ray is in no shadow
        let fp = &c.tree(Side::Minus).fp;
        TreeEnd::new(
            fp,
            &[],
            &[
                Syllable::new(GEN_B, 1),
                Syllable::new(GEN_A, 1),
                Syllable::new(GEN_B, 1),
                Syllable::new(GEN_A, 1),
                Syllable::new(GEN_B, 2),
                Syllable::new(GEN_A, 1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn ends_and_actions() {
        let c = cx();
        let tree = c.tree(Side::Minus);
        let f = TreeEnd::shadow_end(tree, &[], true);
        assert!(f.is_shadow_end(tree));
        // omega_bar fixes its own axis end
        assert_eq!(f.act(&tree.fp, &tree.omega_bar), f);
        let g = generic_end(&c);
        assert!(!g.is_shadow_end(tree));
        let vs = g.vertices(tree, 6);
        for w in vs.windows(2) {
            assert_eq!(tree.dist(&w[0], &w[1]), 1);
        }
        assert_eq!(tree.dist(&vs[0], &vs[5]), 5);
    }

    #[test]
    fn bifurcations() {
        let c = cx();
        let gm = BlockKey::base(Side::Minus);
        let ray = RaySpec {
            start: gm.clone(),
            polar: Angle::theta(&c),
            longitude: Some(generic_end(&c)),
            prefix: vec![],
            period: vec![],
        };
        let ap = bifurcation_approximants(&c, &ray, 3).unwrap();
        assert_eq!(ap.len(), 3);
        for w in ap.windows(2) {
            assert!(w[1].shared_prefix > w[0].shared_prefix);
        }
        assert!(ap.iter().all(|a| a.pole_of.is_some()));
        let confined = RaySpec {
            longitude: Some(TreeEnd::shadow_end(c.tree(Side::Minus), &[], true)),
            ..ray.clone()
        };
        assert!(bifurcation_approximants(&c, &confined, 3).unwrap().is_empty());
        let v = bifurcation_approximants(&c, &RaySpec::vertical(gm), 2).unwrap();
        assert!(v.iter().all(|a| a.point.is_pole()));
    }

    #[test]
    fn classification() {
        let c = cx();
        let gm = BlockKey::base(Side::Minus);
        assert!(matches!(
            classify_rational(&c, &RaySpec::vertical(gm.clone())).unwrap(),
            RayClass::Rational { infinite_natural: false, .. }
        ));
        let gp = c.factor(Side::Plus).group;
        let gmi = c.factor(Side::Minus).group;
        let kerl = |g: &crate::group::TorusGroup, w: TorusWord| {
            let j = g.height_units(&w);
            g.mul(&w, &g.pow(&g.omega(), -j))
        };
        let base = RaySpec {
            start: gm.clone(),
            polar: Angle::theta(&c),
            longitude: Some(generic_end(&c)),
            prefix: vec![],
            period: vec![],
        };
        // tau_- then tau_+ : every crossing stays in the joint block of gamma_0
        let diag = RaySpec {
            period: vec![gmi.tau(), gp.tau()],
            ..base.clone()
        };
        match classify_rational(&c, &diag).unwrap() {
            RayClass::Rational {
                itinerary,
                infinite_natural,
            } => {
                assert!(infinite_natural);
                assert_eq!(itinerary.len(), 2);
            }
            other => panic!("{other:?}"),
        }
        // leaving each joint block through a transverse wall
        let b_m = kerl(&gmi, gmi.parse("b").unwrap());
        let b_p = kerl(&gp, gp.parse("b").unwrap());
        let alt = RaySpec {
            period: vec![b_m.clone(), b_p.clone()],
            ..base.clone()
        };
        let RayClass::Irrational(e1) = classify_rational(&c, &alt).unwrap() else {
            panic!("expected an irrational ray");
        };
        assert!(e1.growth > 0);
        // the same ray started one block later converges to the same end
        let later = RaySpec {
            start: alt.block_after(&c, 1),
            prefix: vec![b_p.clone()],
            period: vec![b_m.clone(), b_p.clone()],
            ..alt.clone()
        };
        let RayClass::Irrational(e2) = classify_rational(&c, &later).unwrap() else {
            panic!("expected an irrational ray");
        };
        assert!(e1.agrees(&e2));
        // kerl(a) = kerl(b) in the (2,3) group since a omega^-1 = b
        let b2_m = kerl(&gmi, gmi.parse("b^2").unwrap());
        let other = RaySpec {
            period: vec![b2_m, b_p],
            ..base
        };
        let RayClass::Irrational(e3) = classify_rational(&c, &other).unwrap() else {
            panic!("expected an irrational ray");
        };
        assert!(!e1.agrees(&e3));
    }
}
