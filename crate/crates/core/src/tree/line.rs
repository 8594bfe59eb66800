//! Wall shadows: translates `g . L_0` of the axis `L_0` of the meridian.
//!
//! `L_0` runs through `V_k = omega_bar^(k/2) v_a` (k even) and
//! `omega_bar^((k-1)/2) v_b` (k odd), so `omega_bar` translates it by two
//! edges. Arclength parameter `u` puts `V_k` at `u = k alpha`.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{EdgeKey, Tree, TreeBall, TreePos, TreeVertex, VertexKind};
use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::group::{FpWord, Syllable, TorusWord, GEN_B};

/// The shadow `g . L_0` with its parametrization.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeLine {
    pub g: FpWord,
}

/// `d(P, L(u)) = dist + |u - u_foot|`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointProjection<R> {
    pub dist: R,
    pub u_foot: R,
}

impl<R: Scalar> PointProjection<R> {
    pub fn eval(&self, u: &R) -> R {
        self.dist.clone() + (u.clone() - self.u_foot.clone()).abs_val()
    }
}

/// Relative position of two shadows `L1`, `L2`, in vertex indices. The
/// affine map `phi(u2) = k_ref alpha + sigma (u2 - j_ref alpha)` sends
/// `L2`-parameters to `L1`-parameters on the overlap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum LinePair {
    /// Bridge from `L1(k1 alpha)` to `L2(k2 alpha)` of `gap` edges.
    Disjoint { k1: i64, k2: i64, gap: i64 },
    /// Common segment `L1[lo alpha, hi alpha]`.
    Overlap {
        lo: i64,
        hi: i64,
        k_ref: i64,
        j_ref: i64,
        sigma: i64,
    },
    /// Same line, `L2(u) = L1(u + shift alpha)`.
    Same { shift: i64 },
}

impl LinePair {
    /// `d(L1(u1), L2(u2))` in the tree.
    pub fn eval<R: Scalar>(&self, alpha: &R, u1: &R, u2: &R) -> R {
        let at = |k: i64| alpha.clone() * R::from_i64(k);
        match self {
            LinePair::Disjoint { k1, k2, gap } => {
                (u1.clone() - at(*k1)).abs_val() + at(*gap) + (u2.clone() - at(*k2)).abs_val()
            }
            LinePair::Same { shift } => (u1.clone() - u2.clone() - at(*shift)).abs_val(),
            LinePair::Overlap {
                lo,
                hi,
                k_ref,
                j_ref,
                sigma,
            } => {
                let v = at(*k_ref) + R::from_i64(*sigma) * (u2.clone() - at(*j_ref));
                let clamp = |x: &R| {
                    if *x < at(*lo) {
                        at(*lo)
                    } else if *x > at(*hi) {
                        at(*hi)
                    } else {
                        x.clone()
                    }
                };
                let x = clamp(u1);
                let y = clamp(&v);
                (u1.clone() - x.clone()).abs_val()
                    + (x - y.clone()).abs_val()
                    + (v - y).abs_val()
            }
        }
    }

    /// Partial derivatives `(dd/du1, dd/du2)` of [`LinePair::eval`] at a point
    /// where it is differentiable; each lies in `{-1, 0, 1}`.
    pub fn grad<R: Scalar>(&self, alpha: &R, u1: &R, u2: &R) -> (i64, i64) {
        let at = |k: i64| alpha.clone() * R::from_i64(k);
        let sgn = |x: R| {
            if x > R::zero() {
                1
            } else if x < R::zero() {
                -1
            } else {
                0
            }
        };
        match self {
            LinePair::Disjoint { k1, k2, .. } => {
                (sgn(u1.clone() - at(*k1)), sgn(u2.clone() - at(*k2)))
            }
            LinePair::Same { shift } => {
                let s = sgn(u1.clone() - u2.clone() - at(*shift));
                (s, -s)
            }
            LinePair::Overlap {
                lo,
                hi,
                k_ref,
                j_ref,
                sigma,
            } => {
                let v = at(*k_ref) + R::from_i64(*sigma) * (u2.clone() - at(*j_ref));
                let (l, h) = (at(*lo), at(*hi));
                let clamp = |x: &R| {
                    if *x < l {
                        l.clone()
                    } else if *x > h {
                        h.clone()
                    } else {
                        x.clone()
                    }
                };
                let (x, y) = (clamp(u1), clamp(&v));
                let inside = |z: &R| *z > l && *z < h;
                let d1 = if inside(u1) {
                    sgn(x.clone() - y.clone())
                } else {
                    sgn(u1.clone() - x.clone())
                };
                let dv = if inside(&v) {
                    sgn(y - x)
                } else {
                    sgn(v.clone() - y)
                };
                (d1, sigma * dv)
            }
        }
    }

    /// Number of shared edges.
    pub fn shared_edges(&self) -> Option<i64> {
        match self {
            LinePair::Disjoint { .. } => Some(0),
            LinePair::Overlap { lo, hi, .. } => Some(hi - lo),
            LinePair::Same { .. } => None,
        }
    }
}

impl TreeLine {
    pub fn new(_tree: &Tree, g: &[Syllable]) -> Self {
        TreeLine { g: g.to_vec() }
    }

    pub fn key(&self, tree: &Tree) -> FpWord {
        tree.shadow_key(&self.g)
    }

    fn b_n(tree: &Tree) -> i64 {
        tree.fp.reduce_exp(GEN_B, tree.group.n)
    }

    pub fn vertex_at(&self, tree: &Tree, k: i64) -> TreeVertex {
        let j = k.div_euclid(2);
        let base = tree.fp.mul(&self.g, &tree.fp.pow(&tree.omega_bar, j));
        let kind = if k.rem_euclid(2) == 0 {
            VertexKind::A
        } else {
            VertexKind::B
        };
        tree.vertex(kind, &base)
    }

    /// Edge from `V_k` to `V_{k+1}`.
    pub fn edge_at(&self, tree: &Tree, k: i64) -> EdgeKey {
        let j = k.div_euclid(2);
        let mut base = tree.fp.mul(&self.g, &tree.fp.pow(&tree.omega_bar, j));
        if k.rem_euclid(2) == 1 {
            tree.fp.push(&mut base, GEN_B, Self::b_n(tree));
        }
        base
    }

    pub fn point_at<R: Scalar>(&self, tree: &Tree, alpha: &R, u: &R) -> TreePos<R> {
        let k = u.floor_div(alpha);
        let frac = u.clone() - alpha.clone() * R::from_i64(k);
        let edge = self.edge_at(tree, k);
        // even edges run A -> B along the line, odd edges B -> A
        let offset = if k.rem_euclid(2) == 0 {
            frac
        } else {
            alpha.clone() - frac
        };
        tree.canonical_pos(alpha, &TreePos { edge, offset })
    }

    /// Index of the nearest line vertex to `v`, and the distance in edges.
    pub fn project_vertex(&self, tree: &Tree, v: &TreeVertex) -> (i64, i64) {
        // d(v, V_k) = D + |k - k*| with |k*| <= d(v, V_0)
        let d0 = tree.dist(v, &self.vertex_at(tree, 0));
        if d0 == 0 {
            return (0, 0);
        }
        let dp = tree.dist(v, &self.vertex_at(tree, d0));
        let dm = tree.dist(v, &self.vertex_at(tree, -d0));
        let k = (d0 - dp + d0) / 2 - (d0 - dm + d0) / 2;
        (k, d0 - k.abs())
    }

    pub fn contains_vertex(&self, tree: &Tree, v: &TreeVertex) -> bool {
        self.project_vertex(tree, v).1 == 0
    }

    pub fn project_point<R: Scalar>(
        &self,
        tree: &Tree,
        alpha: &R,
        p: &TreePos<R>,
    ) -> PointProjection<R> {
        let (va, vb) = tree.edge_ends(&p.edge);
        let (ka, da) = self.project_vertex(tree, &va);
        let (kb, db) = self.project_vertex(tree, &vb);
        let at = |k: i64| alpha.clone() * R::from_i64(k);
        if da == 0 && db == 0 {
            let u = if kb == ka + 1 {
                at(ka) + p.offset.clone()
            } else {
                at(ka) - p.offset.clone()
            };
            return PointProjection {
                dist: R::zero(),
                u_foot: u,
            };
        }
        let ca = p.offset.clone() + at(da);
        let cb = alpha.clone() - p.offset.clone() + at(db);
        if ca < cb {
            PointProjection {
                dist: ca,
                u_foot: at(ka),
            }
        } else {
            PointProjection {
                dist: cb,
                u_foot: at(kb),
            }
        }
    }

    pub fn same_as(&self, tree: &Tree, other: &TreeLine) -> bool {
        self.key(tree) == other.key(tree)
    }

    /// Relative position of `self` (as `L1`) and `other` (as `L2`).
    pub fn pair_with(&self, tree: &Tree, other: &TreeLine) -> LinePair {
        let proj = |j: i64| self.project_vertex(tree, &other.vertex_at(tree, j));
        if self.same_as(tree, other) {
            let (k0, _) = proj(0);
            return LinePair::Same { shift: k0 };
        }
        let (_, d0) = proj(0);
        let (mut jbest, mut best) = (0, d0);
        for j in -d0..=d0 {
            let (_, d) = proj(j);
            if d < best {
                best = d;
                jbest = j;
            }
        }
        if best > 0 {
            let (k, _) = proj(jbest);
            return LinePair::Disjoint {
                k1: k,
                k2: jbest,
                gap: best,
            };
        }
        let (mut j_lo, mut j_hi) = (jbest, jbest);
        while proj(j_lo - 1).1 == 0 {
            j_lo -= 1;
        }
        while proj(j_hi + 1).1 == 0 {
            j_hi += 1;
        }
        let (k_lo, _) = proj(j_lo);
        let (k_hi, _) = proj(j_hi);
        let sigma = if j_hi > j_lo { (k_hi - k_lo) / (j_hi - j_lo) } else { 1 };
        LinePair::Overlap {
            lo: k_lo.min(k_hi),
            hi: k_lo.max(k_hi),
            k_ref: k_lo,
            j_ref: j_lo,
            sigma,
        }
    }

    /// The vertices of the line inside the ball, in order of increasing index.
    pub fn segment_in(&self, tree: &Tree, ball: &TreeBall) -> Vec<(i64, TreeVertex)> {
        let (k0, d) = self.project_vertex(tree, &tree.v_a());
        if d > ball.radius {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut k = k0;
        while ball.contains(&self.vertex_at(tree, k - 1)) {
            k -= 1;
        }
        loop {
            let v = self.vertex_at(tree, k);
            if !ball.contains(&v) {
                break;
            }
            out.push((k, v));
            k += 1;
        }
        out
    }
}

/// A wall shadow restricted to a ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallShadow {
    /// Canonical conjugator `g`: the shadow is the axis of `g omega g^-1`.
    pub conjugator: FpWord,
    pub vertices: Vec<TreeVertex>,
    pub edges: Vec<EdgeKey>,
}

impl WallShadow {
    pub fn from_line(tree: &Tree, line: &TreeLine, ball: &TreeBall) -> Self {
        let seg = line.segment_in(tree, ball);
        let edges = seg.windows(2).map(|w| line.edge_at(tree, w[0].0)).collect();
        WallShadow {
            conjugator: line.key(tree),
            vertices: seg.into_iter().map(|(_, v)| v).collect(),
            edges,
        }
    }

    pub fn line(&self) -> TreeLine {
        TreeLine {
            g: self.conjugator.clone(),
        }
    }
}

/// Axis of a hyperbolic element inside a ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeAxis {
    pub translation: i64,
    /// Key of the wall shadow containing the axis, when it is one.
    pub shadow_key: Option<FpWord>,
    pub vertices: Vec<TreeVertex>,
    pub edges: Vec<EdgeKey>,
}

impl TreeAxis {
    pub fn to_wall_shadow(&self) -> Option<WallShadow> {
        self.shadow_key.as_ref().map(|k| WallShadow {
            conjugator: k.clone(),
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
        })
    }
}

/// Axis of `h` (an element of the torus-knot group) restricted to the ball,
/// located by minimal displacement over the ball's vertices.
pub fn axis_in_tree(tree: &Tree, ball: &TreeBall, h: &TorusWord) -> Result<TreeAxis> {
    let hb = tree.group.project(h);
    let mut min = i64::MAX;
    let mut on_axis = Vec::new();
    for v in ball.vertices.keys() {
        let d = tree.dist(v, &tree.act(&hb, v));
        if d < min {
            min = d;
            on_axis.clear();
        }
        if d == min {
            on_axis.push(v.clone());
        }
    }
    if min == 0 {
        return Err(Error::Elliptic {
            fixed: on_axis[0].label(),
        });
    }
    // order the axis vertices along the path starting at a leaf
    let set: BTreeSet<_> = on_axis.iter().cloned().collect();
    let nbrs = |v: &TreeVertex| -> Vec<TreeVertex> {
        tree.neighbors(v)
            .into_iter()
            .filter(|u| set.contains(u))
            .collect()
    };
    let start = on_axis
        .iter()
        .find(|v| nbrs(v).len() <= 1)
        .cloned()
        .ok_or_else(|| Error::Model("axis within ball has no end".into()))?;
    let mut vertices = vec![start.clone()];
    let mut prev: Option<TreeVertex> = None;
    let mut cur = start;
    loop {
        let next = nbrs(&cur).into_iter().find(|u| Some(u) != prev.as_ref());
        match next {
            Some(n) => {
                prev = Some(cur);
                cur = n;
                vertices.push(cur.clone());
            }
            None => break,
        }
    }
    if vertices.len() != on_axis.len() {
        return Err(Error::Model("minimal displacement set is not a path".into()));
    }
    let edges = vertices
        .windows(2)
        .map(|w| tree.edge_between(&w[0], &w[1]).unwrap())
        .collect();
    Ok(TreeAxis {
        translation: min,
        shadow_key: shadow_key_of_path(tree, &vertices),
        vertices,
        edges,
    })
}

/// Shadow key of the wall shadow containing a vertex path of length >= 3, if any.
fn shadow_key_of_path(tree: &Tree, path: &[TreeVertex]) -> Option<FpWord> {
    if path.len() < 3 {
        return None;
    }
    let first = &path[0];
    let through = lines_through_vertex(tree, first);
    through.into_iter().find_map(|g| {
        let line = TreeLine { g: g.clone() };
        path.iter()
            .all(|v| line.contains_vertex(tree, v))
            .then_some(g)
    })
}

/// Shadow keys of all walls through a vertex: `h a^i L_0` or `h b^j L_0`.
pub fn lines_through_vertex(tree: &Tree, v: &TreeVertex) -> Vec<FpWord> {
    let gen = v.kind.gen();
    // V_0 = v_a and V_1 = v_b lie on L_0
    let mut out = BTreeSet::new();
    for i in 0..tree.valence(v.kind) {
        let mut g = v.word.clone();
        tree.fp.push(&mut g, gen, i);
        out.insert(tree.shadow_key(&g));
    }
    out.into_iter().collect()
}

/// Either a vertex or an edge of the tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeCell {
    Vertex(TreeVertex),
    Edge(EdgeKey),
}

/// All distinct wall shadows meeting a vertex or edge at least 2 away from
/// the ball frontier.
pub fn shadows_through(tree: &Tree, ball: &TreeBall, x: &TreeCell) -> Result<Vec<FpWord>> {
    let ends = match x {
        TreeCell::Vertex(v) => vec![v.clone()],
        TreeCell::Edge(e) => {
            let (a, b) = tree.edge_ends(e);
            vec![a, b]
        }
    };
    for v in &ends {
        match ball.margin(v) {
            Some(m) if m >= 2 => {}
            _ => {
                return Err(Error::InsufficientMargin(format!(
                    "{} needs distance >= 2 from the frontier of the radius-{} ball",
                    v.label(),
                    ball.radius
                )))
            }
        }
    }
    let mut keys = lines_through_vertex(tree, &ends[0]);
    if ends.len() == 2 {
        keys.retain(|g| TreeLine { g: g.clone() }.contains_vertex(tree, &ends[1]));
    }
    Ok(keys)
}

/// Edges shared by two shadows within the ball.
pub fn shadow_intersection(s1: &WallShadow, s2: &WallShadow) -> Vec<EdgeKey> {
    let other: BTreeSet<_> = s2.edges.iter().collect();
    s1.edges
        .iter()
        .filter(|e| other.contains(e))
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::build_ball;
    use crate::group::{TorusGroup, GEN_A};

    fn tree(p: i64, q: i64) -> Tree {
        Tree::new(TorusGroup::new(p, q).unwrap())
    }

    #[test]
    fn axis_of_omega() {
        let t = tree(2, 3);
        let ball = build_ball(&t, 4, 10_000).unwrap();
        let axis = axis_in_tree(&t, &ball, &t.group.omega()).unwrap();
        assert_eq!(axis.translation, 2);
        let bn = t.vertex(VertexKind::A, &[Syllable::new(GEN_B, t.group.n)]);
        for v in [t.v_a(), t.v_b(), bn] {
            assert!(axis.vertices.contains(&v), "{v}");
        }
        assert_eq!(axis.shadow_key, Some(Vec::new()));
        let err = axis_in_tree(&t, &ball, &t.group.a()).unwrap_err();
        assert!(matches!(err, Error::Elliptic { fixed } if fixed == "v_a"));
    }

    #[test]
    fn line_parametrization_is_consistent() {
        let t = tree(3, 5);
        let line = TreeLine::new(&t, &[Syllable::new(GEN_A, 1), Syllable::new(GEN_B, 2)]);
        let alpha = 0.4f64;
        for k in -6..6 {
            let (a, b) = (line.vertex_at(&t, k), line.vertex_at(&t, k + 1));
            assert_eq!(t.dist(&a, &b), 1);
            assert_eq!(t.edge_between(&a, &b).unwrap(), line.edge_at(&t, k));
            assert_eq!(line.project_vertex(&t, &a), (k, 0));
            let p = line.point_at(&t, &alpha, &(k as f64 * alpha + 0.1));
            let proj = line.project_point(&t, &alpha, &p);
            assert_eq!(proj.dist, 0.0);
            assert!((proj.u_foot - (k as f64 * alpha + 0.1)).abs() < 1e-12);
        }
    }

    #[test]
    fn shadow_counts() {
        for (p, q) in [(2, 3), (3, 5)] {
            let t = tree(p, q);
            let ball = build_ball(&t, 5, 100_000).unwrap();
            for v in ball.vertices.keys().filter(|v| ball.margin(v).unwrap() >= 2) {
                let n = shadows_through(&t, &ball, &TreeCell::Vertex(v.clone()))
                    .unwrap()
                    .len() as i64;
                assert_eq!(n, t.valence(v.kind), "{v}");
            }
            for (e, (a, b)) in &ball.edges {
                if ball.margin(a).unwrap() >= 2 && ball.margin(b).unwrap() >= 2 {
                    let n = shadows_through(&t, &ball, &TreeCell::Edge(e.clone())).unwrap();
                    assert_eq!(n.len(), 2);
                }
            }
        }
    }

    #[test]
    fn shadows_sharing_two_edges_at_valence_two() {
        let t = tree(2, 3);
        let ball = build_ball(&t, 4, 10_000).unwrap();
        let s0 = WallShadow::from_line(&t, &t.line(&[]), &ball);
        let g = [Syllable::new(GEN_B, -t.group.n)];
        let s1 = WallShadow::from_line(&t, &t.line(&t.fp.mul(&[], &g)), &ball);
        let shared = shadow_intersection(&s0, &s1);
        assert_eq!(shared.len(), 2);
        let pair = t.line(&[]).pair_with(&t, &t.line(&t.fp.mul(&[], &g)));
        assert_eq!(pair.shared_edges(), Some(2));
    }

    #[test]
    fn line_pair_distance_matches_point_distance() {
        let t = tree(2, 5);
        let alpha = 0.3f64;
        let l1 = t.line(&[Syllable::new(GEN_B, 1)]);
        let l2 = t.line(&[Syllable::new(GEN_A, 1), Syllable::new(GEN_B, 3)]);
        let l3 = t.line(&[Syllable::new(GEN_B, 2)]);
        for other in [&l2, &l3, &l1] {
            let pair = l1.pair_with(&t, other);
            for i in -8..8 {
                for j in -8..8 {
                    let (u1, u2) = (i as f64 * 0.17, j as f64 * 0.23);
                    let direct = t.point_dist(
                        &alpha,
                        &l1.point_at(&t, &alpha, &u1),
                        &other.point_at(&t, &alpha, &u2),
                    );
                    let fast = pair.eval(&alpha, &u1, &u2);
                    assert!((direct - fast).abs() < 1e-9, "{pair:?} {u1} {u2}");
                    let h = 1e-7;
                    let (g1, g2) = pair.grad(&alpha, &u1, &u2);
                    let n1 = (pair.eval(&alpha, &(u1 + h), &u2) - fast) / h;
                    let n2 = (pair.eval(&alpha, &u1, &(u2 + h)) - fast) / h;
                    let b1 = (fast - pair.eval(&alpha, &(u1 - h), &u2)) / h;
                    let b2 = (fast - pair.eval(&alpha, &u1, &(u2 - h))) / h;
                    if (n1 - b1).abs() > 1e-6 || (n2 - b2).abs() > 1e-6 {
                        continue; // kink
                    }
                    assert!((n1 - g1 as f64).abs() < 1e-6, "{pair:?} {u1} {u2}");
                    assert!((n2 - g2 as f64).abs() < 1e-6, "{pair:?} {u1} {u2}");
                }
            }
        }
    }
}
