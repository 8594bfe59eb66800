//! Bass-Serre trees `Gamma^{p,q}` of torus-knot groups, geodesic lines in
//! them (axes of conjugates of the meridian, called wall shadows), and the
//! nerve of natural blocks.
//!
//! Vertices are cosets `g<a>` (A-type, valence `p`) and `g<b>` (B-type,
//! valence `q`); edges are cosets `g<tau>`. The central `tau` acts trivially,
//! so everything is keyed by reduced words in `Z_p * Z_q`.

pub mod ball;
pub mod line;
pub mod nerve;

use std::fmt;

use serde::Serialize;

use crate::exact::Scalar;
use crate::group::word::format_fp;
use crate::group::{FpWord, FreeProduct, Syllable, TorusGroup, GEN_A, GEN_B};

pub use ball::{build_ball, TreeBall};
pub use line::{
    axis_in_tree, lines_through_vertex, shadow_intersection, shadows_through, LinePair,
    PointProjection, TreeAxis, TreeCell, TreeLine, WallShadow,
};
pub use nerve::{nerve_ball, window_lines, BlockKey, JointLineKey, NerveBall, NerveWindow};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum VertexKind {
    A,
    B,
}

impl VertexKind {
    pub fn gen(self) -> u8 {
        match self {
            VertexKind::A => GEN_A,
            VertexKind::B => GEN_B,
        }
    }

    pub fn other(self) -> VertexKind {
        match self {
            VertexKind::A => VertexKind::B,
            VertexKind::B => VertexKind::A,
        }
    }
}

/// Vertex `word . v_a` or `word . v_b`, with `word` the canonical coset
/// representative (no trailing syllable of the stabilizing generator).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeVertex {
    pub kind: VertexKind,
    pub word: FpWord,
}

impl TreeVertex {
    pub fn label(&self) -> String {
        let base = match self.kind {
            VertexKind::A => "v_a",
            VertexKind::B => "v_b",
        };
        if self.word.is_empty() {
            base.to_string()
        } else {
            format!("{}.{}", format_fp(&self.word, ["a", "b"]), base)
        }
    }
}

impl fmt::Display for TreeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Edge `g<tau>`, keyed by the reduced word of `g`; joins `g v_a` to `g v_b`.
pub type EdgeKey = FpWord;

/// A point of the tree: an edge and the distance from its A-end, in `[0, alpha]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TreePos<R> {
    pub edge: EdgeKey,
    pub offset: R,
}

/// Combinatorics of one Bass-Serre tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    pub group: TorusGroup,
    pub fp: FreeProduct,
    /// Image of the meridian in `Z_p * Z_q`.
    pub omega_bar: FpWord,
}

impl Tree {
    pub fn new(group: TorusGroup) -> Self {
        let fp = group.free_part();
        let omega_bar = group.project(&group.omega());
        Tree {
            group,
            fp,
            omega_bar,
        }
    }

    pub fn valence(&self, kind: VertexKind) -> i64 {
        match kind {
            VertexKind::A => self.group.p,
            VertexKind::B => self.group.q,
        }
    }

    pub fn vertex(&self, kind: VertexKind, word: &[Syllable]) -> TreeVertex {
        TreeVertex {
            kind,
            word: self.fp.coset_rep(&self.fp.mul(&[], word), kind.gen()),
        }
    }

    pub fn v_a(&self) -> TreeVertex {
        self.vertex(VertexKind::A, &[])
    }

    pub fn v_b(&self) -> TreeVertex {
        self.vertex(VertexKind::B, &[])
    }

    pub fn edge_ends(&self, e: &[Syllable]) -> (TreeVertex, TreeVertex) {
        (self.vertex(VertexKind::A, e), self.vertex(VertexKind::B, e))
    }

    pub fn neighbors(&self, v: &TreeVertex) -> Vec<TreeVertex> {
        let gen = v.kind.gen();
        (0..self.valence(v.kind))
            .map(|i| {
                let mut w = v.word.clone();
                self.fp.push(&mut w, gen, i);
                self.vertex(v.kind.other(), &w)
            })
            .collect()
    }

    /// Edges at `v`, one per neighbor, in the same order as [`Tree::neighbors`].
    pub fn star(&self, v: &TreeVertex) -> Vec<EdgeKey> {
        let gen = v.kind.gen();
        (0..self.valence(v.kind))
            .map(|i| {
                let mut w = v.word.clone();
                self.fp.push(&mut w, gen, i);
                w
            })
            .collect()
    }

    /// The edge joining two adjacent vertices.
    pub fn edge_between(&self, u: &TreeVertex, v: &TreeVertex) -> Option<EdgeKey> {
        if u.kind == v.kind {
            return None;
        }
        self.star(u).into_iter().find(|e| {
            let (a, b) = self.edge_ends(e);
            if u.kind == VertexKind::A {
                b == *v
            } else {
                a == *v
            }
        })
    }

    /// Left action of `g` (an element of `Z_p * Z_q`) on a vertex.
    pub fn act(&self, g: &[Syllable], v: &TreeVertex) -> TreeVertex {
        self.vertex(v.kind, &self.fp.mul(g, &v.word))
    }

    pub fn act_edge(&self, g: &[Syllable], e: &[Syllable]) -> EdgeKey {
        self.fp.mul(g, e)
    }

    /// Distance in edges from the base vertex of `kind` to `w . v_target`.
    fn dist_from_base(&self, kind: VertexKind, w: &[Syllable], target: VertexKind) -> i64 {
        let w = self.fp.coset_rep(w, target.gen());
        let r = w.len() as i64;
        let starts_own = w.first().is_some_and(|s| s.gen == kind.gen());
        let extra = if kind == target {
            r > 0 && !starts_own
        } else {
            r == 0 || !starts_own
        };
        r + extra as i64
    }

    /// Combinatorial distance between two vertices.
    pub fn dist(&self, u: &TreeVertex, v: &TreeVertex) -> i64 {
        let rel = self.fp.mul(&self.fp.inv(&u.word), &v.word);
        self.dist_from_base(u.kind, &rel, v.kind)
    }

    /// Metric distance between two tree points, with edges of length `alpha`.
    pub fn point_dist<R: Scalar>(&self, alpha: &R, p: &TreePos<R>, q: &TreePos<R>) -> R {
        if p.edge == q.edge {
            return (p.offset.clone() - q.offset.clone()).abs_val();
        }
        let (pa, pb) = self.edge_ends(&p.edge);
        let (qa, qb) = self.edge_ends(&q.edge);
        let p_off = [p.offset.clone(), alpha.clone() - p.offset.clone()];
        let q_off = [q.offset.clone(), alpha.clone() - q.offset.clone()];
        let mut best: Option<R> = None;
        for (i, pe) in [&pa, &pb].into_iter().enumerate() {
            for (j, qe) in [&qa, &qb].into_iter().enumerate() {
                let d = p_off[i].clone()
                    + alpha.clone() * R::from_i64(self.dist(pe, qe))
                    + q_off[j].clone();
                if best.as_ref().is_none_or(|b| d < *b) {
                    best = Some(d);
                }
            }
        }
        best.unwrap()
    }

    /// Position of a vertex as a tree point.
    pub fn vertex_pos<R: Scalar>(&self, alpha: &R, v: &TreeVertex) -> TreePos<R> {
        match v.kind {
            VertexKind::A => TreePos {
                edge: v.word.clone(),
                offset: R::zero(),
            },
            VertexKind::B => TreePos {
                edge: v.word.clone(),
                offset: alpha.clone(),
            },
        }
    }

    /// If the point sits on a vertex, that vertex.
    pub fn pos_vertex<R: Scalar>(&self, alpha: &R, p: &TreePos<R>) -> Option<TreeVertex> {
        if p.offset == R::zero() {
            Some(self.vertex(VertexKind::A, &p.edge))
        } else if p.offset == *alpha {
            Some(self.vertex(VertexKind::B, &p.edge))
        } else {
            None
        }
    }

    /// Canonical form: vertices are re-expressed on the edge `coset_rep . e_0`.
    pub fn canonical_pos<R: Scalar>(&self, alpha: &R, p: &TreePos<R>) -> TreePos<R> {
        match self.pos_vertex(alpha, p) {
            Some(v) => self.vertex_pos(alpha, &v),
            None => p.clone(),
        }
    }

    pub fn act_pos<R: Scalar>(&self, g: &[Syllable], p: &TreePos<R>) -> TreePos<R> {
        TreePos {
            edge: self.act_edge(g, &p.edge),
            offset: p.offset.clone(),
        }
    }

    /// Canonical representative of the wall shadow `g . L_0` (the axis of
    /// `g omega g^-1`), i.e. of the coset `g <omega, tau>`: the shortest, then
    /// lexicographically least, element of `g <omega_bar>`.
    pub fn shadow_key(&self, g: &[Syllable]) -> FpWord {
        let g = g.to_vec();
        let bound = g.len() as i64 + 1;
        let mut best: Option<FpWord> = None;
        for k in -bound..=bound {
            let cand = self.fp.mul(&g, &self.fp.pow(&self.omega_bar, k));
            let better = match &best {
                None => true,
                Some(b) => (cand.len(), &cand) < (b.len(), b),
            };
            if better {
                best = Some(cand);
            }
        }
        best.unwrap()
    }

    pub fn line(&self, g: &[Syllable]) -> TreeLine {
        TreeLine::new(self, g)
    }
}

/// Label of a wall shadow key.
pub fn shadow_label(key: &[Syllable]) -> String {
    format!("L[{}]", format_fp(key, ["a", "b"]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{HashMap, VecDeque};

    fn bfs_dist(t: &Tree, from: &TreeVertex, radius: i64) -> HashMap<TreeVertex, i64> {
        let mut seen = HashMap::new();
        seen.insert(from.clone(), 0);
        let mut queue = VecDeque::from([from.clone()]);
        while let Some(v) = queue.pop_front() {
            let d = seen[&v];
            if d == radius {
                continue;
            }
            for u in t.neighbors(&v) {
                if !seen.contains_key(&u) {
                    seen.insert(u.clone(), d + 1);
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    #[test]
    fn distance_formula_matches_bfs() {
        for (p, q) in [(2, 3), (3, 5), (2, 5)] {
            let t = Tree::new(TorusGroup::new(p, q).unwrap());
            let ball = bfs_dist(&t, &t.v_a(), 5);
            for (v, d) in &ball {
                assert_eq!(t.dist(&t.v_a(), v), *d, "{v}");
            }
            let from = t.vertex(VertexKind::B, &[Syllable::new(GEN_A, 1)]);
            let ball_b = bfs_dist(&t, &from, 4);
            for (v, d) in &ball_b {
                assert_eq!(t.dist(&from, v), *d, "{from} -> {v}");
                assert_eq!(t.dist(v, &from), *d);
            }
        }
    }

    #[test]
    fn action_examples() {
        let t = Tree::new(TorusGroup::new(2, 3).unwrap());
        let va = t.v_a();
        assert_eq!(t.act(&[], &va), va);
        assert_eq!(t.act(&[Syllable::new(GEN_A, 1)], &va), va);
        let bva = t.act(&[Syllable::new(GEN_B, 1)], &va);
        assert_ne!(bva, va);
        assert_eq!(bva.kind, VertexKind::A);
        assert_eq!(t.dist(&bva, &t.v_b()), 1);
    }

    #[test]
    fn point_distance_within_and_across_edges() {
        let t = Tree::new(TorusGroup::new(2, 3).unwrap());
        let alpha = 0.4f64;
        let p = TreePos {
            edge: vec![],
            offset: 0.1,
        };
        let q = TreePos {
            edge: vec![Syllable::new(GEN_B, 1)],
            offset: 0.3,
        };
        // p -> v_b (0.3), then v_b -> b.v_a along edge b (0.4 - 0.3 = 0.1 from B end).
        let d = t.point_dist(&alpha, &p, &q);
        assert!((d - 0.4).abs() < 1e-12, "{d}");
        assert_eq!(t.point_dist(&alpha, &p, &p), 0.0);
    }
}
