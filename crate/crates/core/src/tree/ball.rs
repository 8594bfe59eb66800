use std::collections::{BTreeMap, VecDeque};

use serde_json::{json, Value};

use super::{EdgeKey, Tree, TreeVertex, VertexKind};
use crate::error::{Error, Result};
use crate::group::word::format_fp;

/// Vertices and edges of the tree within distance `radius` of `v_a`.
#[derive(Clone, Debug)]
pub struct TreeBall {
    pub radius: i64,
    /// Vertex, distance from `v_a`.
    pub vertices: BTreeMap<TreeVertex, i64>,
    /// Edge key with its two ends.
    pub edges: BTreeMap<EdgeKey, (TreeVertex, TreeVertex)>,
}

impl TreeBall {
    pub fn contains(&self, v: &TreeVertex) -> bool {
        self.vertices.contains_key(v)
    }

    /// Vertices at the boundary sphere, whose neighborhoods are truncated.
    pub fn is_frontier(&self, v: &TreeVertex) -> bool {
        self.vertices.get(v) == Some(&self.radius)
    }

    /// Distance from the frontier, `None` outside the ball.
    pub fn margin(&self, v: &TreeVertex) -> Option<i64> {
        self.vertices.get(v).map(|d| self.radius - d)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph tree {\n");
        for (v, d) in &self.vertices {
            let shape = match v.kind {
                VertexKind::A => "circle",
                VertexKind::B => "box",
            };
            out.push_str(&format!(
                "  \"{}\" [shape={shape}, label=\"{}\\nd={d}\"];\n",
                v.label(),
                v.label()
            ));
        }
        for (a, b) in self.edges.values() {
            out.push_str(&format!("  \"{}\" -- \"{}\";\n", a.label(), b.label()));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> Value {
        let vertices: Vec<Value> = self
            .vertices
            .iter()
            .map(|(v, d)| {
                json!({
                    "label": v.label(),
                    "kind": v.kind,
                    "depth": d,
                    "frontier": *d == self.radius,
                })
            })
            .collect();
        let edges: Vec<Value> = self
            .edges
            .iter()
            .map(|(e, (a, b))| {
                json!({
                    "key": format_fp(e, ["a", "b"]),
                    "a_end": a.label(),
                    "b_end": b.label(),
                })
            })
            .collect();
        json!({ "radius": self.radius, "vertices": vertices, "edges": edges })
    }
}

/// Closed-form vertex count of the ball: the tree is `(p, q)`-biregular and
/// `v_a` has valence `p`.
pub fn ball_vertex_count(p: i64, q: i64, radius: i64) -> u128 {
    let mut total: u128 = 1;
    let mut layer: u128 = 1;
    for k in 1..=radius {
        // vertices at depth k-1 have valence p (even depth) or q (odd depth)
        let val = if (k - 1) % 2 == 0 { p } else { q } as u128;
        layer *= if k == 1 { val } else { val - 1 };
        total += layer;
    }
    total
}

/// Enumerates the ball of radius `radius` around `v_a`, refusing to build more
/// than `max_vertices` vertices.
pub fn build_ball(tree: &Tree, radius: i64, max_vertices: usize) -> Result<TreeBall> {
    if radius < 0 {
        return Err(Error::InvalidConfig {
            field: "ball_radius".into(),
            reason: "must be nonnegative".into(),
        });
    }
    let predicted = ball_vertex_count(tree.group.p, tree.group.q, radius);
    if predicted > max_vertices as u128 {
        return Err(Error::SizeCap {
            what: format!("tree ball of radius {radius} ({predicted} vertices)"),
            cap: max_vertices,
        });
    }
    let mut vertices = BTreeMap::new();
    let mut edges = BTreeMap::new();
    let root = tree.v_a();
    vertices.insert(root.clone(), 0);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let d = vertices[&v];
        if d == radius {
            continue;
        }
        for (u, e) in tree.neighbors(&v).into_iter().zip(tree.star(&v)) {
            if !vertices.contains_key(&u) {
                vertices.insert(u.clone(), d + 1);
                queue.push_back(u);
            }
            edges.entry(e.clone()).or_insert_with(|| tree.edge_ends(&e));
        }
    }
    Ok(TreeBall {
        radius,
        vertices,
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::TorusGroup;

    #[test]
    fn small_balls() {
        let t = Tree::new(TorusGroup::new(2, 3).unwrap());
        assert_eq!(build_ball(&t, 0, 100).unwrap().vertices.len(), 1);
        let b1 = build_ball(&t, 1, 100).unwrap();
        assert_eq!(b1.vertices.len(), 3);
        assert_eq!(b1.edges.len(), 2);
        for (p, q) in [(2, 3), (3, 5), (2, 7)] {
            let t = Tree::new(TorusGroup::new(p, q).unwrap());
            for r in 0..6 {
                let b = build_ball(&t, r, 1 << 20).unwrap();
                assert_eq!(b.vertices.len() as u128, ball_vertex_count(p, q, r));
                assert_eq!(b.edges.len() + 1, b.vertices.len());
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let t = Tree::new(TorusGroup::new(3, 5).unwrap());
        let err = build_ball(&t, 8, 1000).unwrap_err();
        assert!(matches!(err, Error::SizeCap { .. }));
    }

    #[test]
    fn frontier_flags() {
        let t = Tree::new(TorusGroup::new(2, 3).unwrap());
        let b = build_ball(&t, 2, 100).unwrap();
        assert!(!b.is_frontier(&t.v_a()));
        assert!(b.is_frontier(&t.vertex(VertexKind::A, &[crate::group::Syllable::new(1, 1)])));
        assert!(b.to_dot().contains("v_b"));
    }
}
