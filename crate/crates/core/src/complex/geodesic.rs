//! Geodesics across joint lines.
//!
//! The natural itinerary of a geodesic is the `N`-path between the blocks of
//! its endpoints, so the only unknowns are the crossing parameters `T_i` on
//! the joint lines of that path. Inside one block the length of a segment is
//! `sqrt(d_tree^2 + dh^2)`, with tree distances from projections onto wall
//! shadows. The total length is convex in the `T_i`; it is minimized by
//! cyclic coordinate descent with golden-section line searches, and the
//! result is certified by exact signs of the one-sided partial derivatives.

use serde::Serialize;
use serde_json::{json, Value};

use super::{Complex, ComplexPoint};
use crate::error::{Error, Result};
use crate::exact::{ratio_sum_sign, QuadScalar, Scalar, Sign};
use crate::tree::{BlockKey, JointLineKey, LinePair, PointProjection};

#[derive(Clone, Debug)]
pub struct GeodesicOptions {
    /// Target accuracy of the length.
    pub epsilon: f64,
    /// Longest natural itinerary the solver accepts, in joint lines.
    pub max_crossings: usize,
}

impl Default for GeodesicOptions {
    fn default() -> Self {
        GeodesicOptions {
            epsilon: 1e-9,
            max_crossings: 64,
        }
    }
}

#[derive(Clone, Debug)]
enum End<R> {
    Fixed(R),
    Var(usize),
}

#[derive(Clone, Debug)]
enum TreeTerm<R> {
    Const(R),
    PointLine(PointProjection<R>),
    /// The first end's shadow is `L1` of the pair.
    LineLine(LinePair),
}

#[derive(Clone, Debug)]
struct Segment<R> {
    a: End<R>,
    b: End<R>,
    tree: TreeTerm<R>,
    alpha: R,
}

#[derive(Clone, Debug)]
struct Problem<R> {
    segs: Vec<Segment<R>>,
    n: usize,
    sin: R,
    cos: R,
}

fn sgn<R: Scalar>(x: &R) -> i64 {
    if *x > R::zero() {
        1
    } else if *x < R::zero() {
        -1
    } else {
        0
    }
}

impl<R: Scalar> Segment<R> {
    fn height(&self, e: &End<R>, t: &[R], cos: &R) -> R {
        match e {
            End::Fixed(h) => h.clone(),
            End::Var(i) => t[*i].clone() * cos.clone(),
        }
    }

    fn var(&self) -> Option<usize> {
        match (&self.a, &self.b) {
            (End::Var(i), _) | (_, End::Var(i)) => Some(*i),
            _ => None,
        }
    }

    /// Tree distance and height difference.
    fn parts(&self, t: &[R], sin: &R, cos: &R) -> (R, R) {
        let h = self.height(&self.a, t, cos) - self.height(&self.b, t, cos);
        let d = match &self.tree {
            TreeTerm::Const(d) => d.clone(),
            TreeTerm::PointLine(p) => {
                let i = self.var().unwrap();
                p.eval(&(t[i].clone() * sin.clone()))
            }
            TreeTerm::LineLine(pair) => {
                let (End::Var(i), End::Var(j)) = (&self.a, &self.b) else {
                    unreachable!()
                };
                pair.eval(
                    &self.alpha,
                    &(t[*i].clone() * sin.clone()),
                    &(t[*j].clone() * sin.clone()),
                )
            }
        };
        (d, h)
    }

    /// Numerator `a` of `d/dT_k sqrt(m) = a / sqrt(m)`.
    fn deriv_numerator(&self, k: usize, t: &[R], sin: &R, cos: &R) -> R {
        let (d, h) = self.parts(t, sin, cos);
        let dh = match (&self.a, &self.b) {
            (End::Var(i), _) if *i == k => 1,
            (_, End::Var(j)) if *j == k => -1,
            _ => 0,
        };
        let slope = match &self.tree {
            TreeTerm::Const(_) => 0,
            TreeTerm::PointLine(p) => sgn(&(t[k].clone() * sin.clone() - p.u_foot.clone())),
            TreeTerm::LineLine(pair) => {
                let (End::Var(i), End::Var(j)) = (&self.a, &self.b) else {
                    unreachable!()
                };
                let (g1, g2) = pair.grad(
                    &self.alpha,
                    &(t[*i].clone() * sin.clone()),
                    &(t[*j].clone() * sin.clone()),
                );
                if *i == k {
                    g1
                } else {
                    g2
                }
            }
        };
        d * R::from_i64(slope) * sin.clone() + h * R::from_i64(dh) * cos.clone()
    }

    fn touches(&self, k: usize) -> bool {
        matches!(self.a, End::Var(i) if i == k) || matches!(self.b, End::Var(j) if j == k)
    }
}

fn to_f64_problem(p: &Problem<QuadScalar>) -> Problem<f64> {
    let c = |x: &QuadScalar| x.to_f64();
    let end = |e: &End<QuadScalar>| match e {
        End::Fixed(h) => End::Fixed(c(h)),
        End::Var(i) => End::Var(*i),
    };
    Problem {
        segs: p
            .segs
            .iter()
            .map(|s| Segment {
                a: end(&s.a),
                b: end(&s.b),
                tree: match &s.tree {
                    TreeTerm::Const(d) => TreeTerm::Const(c(d)),
                    TreeTerm::PointLine(pp) => TreeTerm::PointLine(PointProjection {
                        dist: c(&pp.dist),
                        u_foot: c(&pp.u_foot),
                    }),
                    TreeTerm::LineLine(pair) => TreeTerm::LineLine(pair.clone()),
                },
                alpha: c(&s.alpha),
            })
            .collect(),
        n: p.n,
        sin: c(&p.sin),
        cos: c(&p.cos),
    }
}

impl Problem<f64> {
    fn seg_len(&self, s: &Segment<f64>, t: &[f64]) -> f64 {
        let (d, h) = s.parts(t, &self.sin, &self.cos);
        d.hypot(h)
    }

    fn total(&self, t: &[f64]) -> f64 {
        self.segs.iter().map(|s| self.seg_len(s, t)).sum()
    }

    fn local(&self, k: usize, t: &[f64]) -> f64 {
        self.segs
            .iter()
            .filter(|s| s.touches(k))
            .map(|s| self.seg_len(s, t))
            .sum()
    }
}

/// Minimizes a convex function of one variable near `x0`.
pub(crate) fn minimize_convex(f: impl Fn(f64) -> f64, x0: f64, tol: f64) -> f64 {
    let (mut a, mut fa) = (x0, f(x0));
    let mut step = 1.0;
    let (mut b, mut fb) = (a + step, f(a + step));
    if fb > fa {
        step = -step;
        b = a + step;
        fb = f(b);
        if fb > fa {
            return golden(&f, a - 1.0, a + 1.0, tol);
        }
    }
    loop {
        step *= 2.0;
        let c = b + step;
        let fc = f(c);
        if fc >= fb {
            return golden(&f, a.min(c), a.max(c), tol);
        }
        (a, fa, b, fb) = (b, fb, c, fc);
        let _ = fa;
        if step.abs() > 1e12 {
            return b;
        }
    }
}

fn golden(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    const R: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - R * (hi - lo);
    let mut x2 = lo + R * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo <= tol * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            (x2, f2) = (x1, f1);
            x1 = hi - R * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            (x1, f1) = (x2, f2);
            x2 = lo + R * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        x1
    } else {
        x2
    }
}

/// Cyclic coordinate descent, with line searches along `e_i +- e_{i+1}` to
/// escape the diagonal creases where coordinate moves stall.
fn solve(p: &Problem<f64>, epsilon: f64) -> (Vec<f64>, usize) {
    let mut t = vec![0.0; p.n];
    let tol = 1e-14;
    let mut sweeps = 0;
    loop {
        let mut max_change: f64 = 0.0;
        for k in 0..p.n {
            let old = t[k];
            let probe = std::cell::RefCell::new(t.clone());
            let best = minimize_convex(
                |x| {
                    let mut pr = probe.borrow_mut();
                    pr[k] = x;
                    p.local(k, &pr)
                },
                old,
                tol,
            );
            let mut cand = t.clone();
            cand[k] = best;
            if p.local(k, &cand) <= p.local(k, &t) {
                t[k] = best;
                max_change = max_change.max((best - old).abs());
            }
        }
        sweeps += 1;
        if sweeps > 100_000 {
            break;
        }
        if max_change >= epsilon / 10.0 {
            continue;
        }
        let before = p.total(&t);
        for k in 0..p.n.saturating_sub(1) {
            for sign in [1.0, -1.0] {
                let base = t.clone();
                let s = minimize_convex(
                    |x| {
                        let mut c = base.clone();
                        c[k] += x;
                        c[k + 1] += sign * x;
                        p.total(&c)
                    },
                    0.0,
                    tol,
                );
                let mut c = base.clone();
                c[k] += s;
                c[k + 1] += sign * s;
                if p.total(&c) < p.total(&t) {
                    t = c;
                }
            }
        }
        if before - p.total(&t) <= 1e-15 * (1.0 + before) {
            break;
        }
    }
    (t, sweeps)
}

/// Exact one-sided derivative signs at a crossing: `below` at `T - h`,
/// `above` at `T + h`. A minimum is bracketed when `below <= 0 <= above`.
#[derive(Clone, Debug, Serialize)]
pub struct DerivativeBracket {
    pub line: String,
    pub t: f64,
    pub h: f64,
    pub below: i8,
    pub above: i8,
}

impl DerivativeBracket {
    pub fn valid(&self) -> bool {
        self.below <= 0 && self.above >= 0
    }
}

/// A geodesic segment between two points (or two blocks) of `X`.
#[derive(Clone, Debug)]
pub struct Geodesic {
    pub length: f64,
    /// Length recomputed from exact squared segment lengths at the solution.
    pub exact_length: f64,
    pub blocks: Vec<BlockKey>,
    pub crossings: Vec<(JointLineKey, f64)>,
    pub certificate: Vec<DerivativeBracket>,
    pub sweeps: usize,
}

impl Geodesic {
    pub fn certified(&self) -> bool {
        self.certificate.iter().all(DerivativeBracket::valid)
    }

    pub fn to_json(&self, cx: &Complex) -> Value {
        json!({
            "length": format!("{:.15}", self.length),
            "exact_length": format!("{:.15}", self.exact_length),
            "itinerary": self.blocks.iter().map(|b| cx.block_label(b)).collect::<Vec<_>>(),
            "crossings": self.crossings.iter().map(|(l, t)| json!({
                "line": l.label(&cx.am),
                "t": format!("{t:.15}"),
            })).collect::<Vec<_>>(),
            "certificate": self.certificate,
            "certified": self.certified(),
            "sweeps": self.sweeps,
        })
    }
}

fn build(
    cx: &Complex,
    blocks: &[BlockKey],
    lines: &[JointLineKey],
    x: Option<&ComplexPoint>,
    y: Option<&ComplexPoint>,
) -> Problem<QuadScalar> {
    let n = lines.len();
    let mut segs = Vec::new();
    for (i, block) in blocks.iter().enumerate() {
        let side = block.side;
        let tree = cx.tree(side);
        let alpha = cx.alpha(side).clone();
        let entry = if i == 0 { None } else { Some(i - 1) };
        let exit = if i == n { None } else { Some(i) };
        let chart = |l: usize| {
            let c = cx.line_chart(&lines[l], side);
            debug_assert_eq!(&c.block, block);
            c
        };
        let seg = match (entry, exit) {
            (None, None) => {
                let (Some(x), Some(y)) = (x, y) else { continue };
                Segment {
                    a: End::Fixed(x.height.clone()),
                    b: End::Fixed(y.height.clone()),
                    tree: TreeTerm::Const(tree.point_dist(&alpha, &x.pos, &y.pos)),
                    alpha,
                }
            }
            (None, Some(l)) => {
                let Some(x) = x else { continue };
                Segment {
                    a: End::Fixed(x.height.clone()),
                    b: End::Var(l),
                    tree: TreeTerm::PointLine(chart(l).shadow.project_point(tree, &alpha, &x.pos)),
                    alpha,
                }
            }
            (Some(l), None) => {
                let Some(y) = y else { continue };
                Segment {
                    a: End::Var(l),
                    b: End::Fixed(y.height.clone()),
                    tree: TreeTerm::PointLine(chart(l).shadow.project_point(tree, &alpha, &y.pos)),
                    alpha,
                }
            }
            (Some(l1), Some(l2)) => Segment {
                a: End::Var(l1),
                b: End::Var(l2),
                tree: TreeTerm::LineLine(chart(l1).shadow.pair_with(tree, &chart(l2).shadow)),
                alpha,
            },
        };
        segs.push(seg);
    }
    Problem {
        segs,
        n,
        sin: cx.sin().clone(),
        cos: cx.cos().clone(),
    }
}

fn finish(
    cx: &Complex,
    exact: &Problem<QuadScalar>,
    blocks: Vec<BlockKey>,
    lines: Vec<JointLineKey>,
    opts: &GeodesicOptions,
) -> Result<Geodesic> {
    let p = to_f64_problem(exact);
    let (t, sweeps) = solve(&p, opts.epsilon);
    let length = p.total(&t);
    let tq: Vec<QuadScalar> = t.iter().map(|&v| QuadScalar::from_f64(v)).collect();
    let mut exact_length = 0.0;
    for s in &exact.segs {
        let (d, h) = s.parts(&tq, &exact.sin, &exact.cos);
        exact_length += (d.square() + h.square()).to_f64().sqrt();
    }
    let h = 1e-6;
    let mut certificate = Vec::new();
    for (k, line) in lines.iter().enumerate() {
        let sign_at = |delta: f64| -> Result<Sign> {
            let mut at = tq.clone();
            at[k] = QuadScalar::from_f64(t[k] + delta);
            let terms: Vec<(QuadScalar, QuadScalar)> = exact
                .segs
                .iter()
                .filter(|s| s.touches(k))
                .map(|s| {
                    let (d, hh) = s.parts(&at, &exact.sin, &exact.cos);
                    (
                        s.deriv_numerator(k, &at, &exact.sin, &exact.cos),
                        d.square() + hh.square(),
                    )
                })
                .collect();
            match terms.as_slice() {
                [(a, m)] => {
                    if m.sign() != Sign::Positive {
                        return Err(Error::DegenerateGeometry("zero-length segment".into()));
                    }
                    Ok(a.sign())
                }
                [(a1, m1), (a2, m2)] => ratio_sum_sign(a1, m1, a2, m2),
                _ => Err(Error::Model("crossing touches no segment".into())),
            }
        };
        certificate.push(DerivativeBracket {
            line: line.label(&cx.am),
            t: t[k],
            h,
            below: sign_at(-h)?.as_i8(),
            above: sign_at(h)?.as_i8(),
        });
    }
    Ok(Geodesic {
        length,
        exact_length,
        blocks,
        crossings: lines.into_iter().zip(t).collect(),
        certificate,
        sweeps,
    })
}

/// Geodesic from `x` to `y`; the crossing joint lines are read off the
/// natural itinerary.
pub fn geodesic_cross(
    cx: &Complex,
    x: &ComplexPoint,
    y: &ComplexPoint,
    opts: &GeodesicOptions,
) -> Result<Geodesic> {
    let mut best: Option<(ComplexPoint, ComplexPoint, Vec<JointLineKey>)> = None;
    for xm in cx.memberships(x) {
        for ym in cx.memberships(y) {
            let path = cx.nerve_path(&xm.block, &ym.block);
            if best.as_ref().is_none_or(|b| path.len() < b.2.len()) {
                best = Some((xm.clone(), ym, path));
            }
        }
    }
    let (xm, ym, lines) = best.unwrap();
    if lines.len() > opts.max_crossings {
        return Err(Error::SizeCap {
            what: format!("natural itinerary with {} joint lines", lines.len()),
            cap: opts.max_crossings,
        });
    }
    let blocks = cx.itinerary_n(&xm.block, &ym.block);
    let exact = build(cx, &blocks, &lines, Some(&xm), Some(&ym));
    finish(cx, &exact, blocks, lines, opts)
}

/// Distance between two natural blocks: zero when they meet, otherwise the
/// shortest path from the first joint line of the itinerary to the last.
pub fn block_distance(
    cx: &Complex,
    from: &BlockKey,
    to: &BlockKey,
    opts: &GeodesicOptions,
) -> Result<Geodesic> {
    let lines = cx.nerve_path(from, to);
    let blocks = cx.itinerary_n(from, to);
    if lines.len() > opts.max_crossings {
        return Err(Error::SizeCap {
            what: format!("natural itinerary with {} joint lines", lines.len()),
            cap: opts.max_crossings,
        });
    }
    let exact = build(cx, &blocks, &lines, None, None);
    if lines.len() <= 1 {
        return Ok(Geodesic {
            length: 0.0,
            exact_length: 0.0,
            blocks,
            crossings: lines.into_iter().map(|l| (l, 0.0)).collect(),
            certificate: vec![],
            sweeps: 0,
        });
    }
    finish(cx, &exact, blocks, lines, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::tests::cx;
    use crate::group::Side;

    #[test]
    fn minimize_convex_finds_minimum() {
        let x = minimize_convex(|x| (x - 3.5).abs() + 0.1 * (x - 3.5).powi(2), -10.0, 1e-14);
        assert!((x - 3.5).abs() < 1e-9);
        let y = minimize_convex(|x| (x + 1e3).powi(2), 0.0, 1e-14);
        assert!((y + 1e3).abs() < 1e-6);
    }

    #[test]
    fn within_block_matches_exact_distance() {
        let c = cx();
        let x = c.parse_point("(G-, b^1, 1/5, 3/10)").unwrap();
        let y = c.parse_point("(G-, a^1.b^2, 1/10, -1)").unwrap();
        let g = geodesic_cross(&c, &x, &y, &GeodesicOptions::default()).unwrap();
        assert!(g.crossings.is_empty());
        let d2 = c.dist_sq_within_block(&x, &y).unwrap().to_f64();
        assert!((g.length - d2.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn one_crossing_is_certified_and_symmetric() {
        let c = cx();
        let x = c.parse_point("(G-, b^1, 1/5, 3/10)").unwrap();
        let y = c.parse_point("(G+, a^1.b^3, 1/10, 2)").unwrap();
        let opts = GeodesicOptions::default();
        let g = geodesic_cross(&c, &x, &y, &opts).unwrap();
        assert_eq!(g.crossings.len(), 1);
        assert!(g.certified(), "{:?}", g.certificate);
        assert!((g.length - g.exact_length).abs() < 1e-9);
        let r = geodesic_cross(&c, &y, &x, &opts).unwrap();
        assert!((g.length - r.length).abs() < 2e-9);
    }

    #[test]
    fn multi_crossing_triangle_inequality() {
        let c = cx();
        let opts = GeodesicOptions::default();
        let x = c.parse_point("(G-, b^1, 1/5, 3/10)").unwrap();
        let y = c.parse_point("(a-^1.b+^1.G-, b^2.a^1, 1/7, -1/2)").unwrap();
        let z = c.parse_point("(a-^1.G+, a^1, 1/9, 1)").unwrap();
        let xy = geodesic_cross(&c, &x, &y, &opts).unwrap();
        let xz = geodesic_cross(&c, &x, &z, &opts).unwrap();
        let zy = geodesic_cross(&c, &z, &y, &opts).unwrap();
        assert!(xy.crossings.len() >= 2);
        assert!(xy.certified(), "{:?}", xy.certificate);
        assert!(xy.length <= xz.length + zy.length + 2e-9);
    }

    #[test]
    fn point_on_joint_line_in_other_chart_has_length_zero() {
        let c = cx();
        let key = JointLineKey::default();
        let t: QuadScalar = "2/3".parse().unwrap();
        let a = c.line_point(&key, &t, Side::Minus);
        let b = c.line_point(&key, &t, Side::Plus);
        let g = geodesic_cross(&c, &a, &b, &GeodesicOptions::default()).unwrap();
        assert!(g.length.abs() < 1e-15);
    }
}
