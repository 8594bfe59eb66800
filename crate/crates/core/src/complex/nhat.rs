//! The nerve of all blocks: natural blocks and joint blocks, joined when they
//! share a wall. It is a tree, and no two joint blocks share two natural
//! neighbors.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde_json::{json, Value};

use super::joint::{grow_joint_block, JointBlockKey, WallKey};
use super::{Complex, ComplexPoint};
use crate::error::{Error, Result};
use crate::group::{Side, TorusWord};
use crate::tree::nerve::UnionFind;
use crate::tree::{BlockKey, JointLineKey};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NhatVertex {
    Natural(BlockKey),
    Joint(JointBlockKey),
}

impl NhatVertex {
    pub fn label(&self, cx: &Complex) -> String {
        match self {
            NhatVertex::Natural(b) => cx.block_label(b),
            NhatVertex::Joint(j) => cx.joint_block_label(j),
        }
    }

    pub fn as_natural(&self) -> Option<&BlockKey> {
        match self {
            NhatVertex::Natural(b) => Some(b),
            NhatVertex::Joint(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NhatBall {
    pub radius: i64,
    pub vertices: BTreeMap<NhatVertex, i64>,
    /// Edge `(B, J)` labelled by the wall `B` and `J` share.
    pub edges: BTreeMap<(BlockKey, JointBlockKey), WallKey>,
    /// Breadth-first parent of each vertex but the root `G_-`.
    parent: BTreeMap<NhatVertex, NhatVertex>,
    adjacency: BTreeMap<NhatVertex, Vec<NhatVertex>>,
}

impl NhatBall {
    pub fn naturals(&self) -> impl Iterator<Item = &BlockKey> {
        self.vertices.keys().filter_map(|v| v.as_natural())
    }

    /// Largest number of natural blocks shared by two joint blocks.
    pub fn max_shared_neighbors(&self) -> usize {
        let mut by_natural: BTreeMap<&BlockKey, Vec<&JointBlockKey>> = BTreeMap::new();
        for (b, j) in self.edges.keys() {
            by_natural.entry(b).or_default().push(j);
        }
        let mut shared: BTreeMap<(&JointBlockKey, &JointBlockKey), usize> = BTreeMap::new();
        for js in by_natural.values() {
            for (i, a) in js.iter().enumerate() {
                for b in &js[i + 1..] {
                    *shared.entry((a, b)).or_default() += 1;
                }
            }
        }
        shared.values().copied().max().unwrap_or(0)
    }

    /// Vertices joined to `v` in the ball.
    pub fn neighbors(&self, v: &NhatVertex) -> Vec<NhatVertex> {
        self.adjacency.get(v).cloned().unwrap_or_default()
    }

    /// The unique path between two vertices of the ball, through their
    /// lowest common ancestor in the breadth-first tree.
    pub fn path(&self, from: &NhatVertex, to: &NhatVertex) -> Option<Vec<NhatVertex>> {
        let (mut a, mut b) = (from, to);
        let (mut up, mut down) = (vec![a.clone()], vec![b.clone()]);
        while a != b {
            let (da, db) = (*self.vertices.get(a)?, *self.vertices.get(b)?);
            if da >= db {
                a = self.parent.get(a)?;
                up.push(a.clone());
            }
            if db >= da && a != b {
                b = self.parent.get(b)?;
                down.push(b.clone());
            }
        }
        down.pop();
        up.extend(down.into_iter().rev());
        Some(up)
    }

    pub fn to_dot(&self, cx: &Complex) -> String {
        let mut out = String::from("graph nerve_hat {\n");
        for (v, d) in &self.vertices {
            let shape = match v {
                NhatVertex::Natural(_) => "ellipse",
                NhatVertex::Joint(_) => "box",
            };
            out.push_str(&format!("  \"{}\" [shape={shape}, label=\"{}\\nd={d}\"];\n", v.label(cx), v.label(cx)));
        }
        for ((b, j), w) in &self.edges {
            out.push_str(&format!(
                "  \"{}\" -- \"{}\" [label=\"{}\"];\n",
                cx.block_label(b),
                cx.joint_block_label(j),
                cx.wall_label(w)
            ));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self, cx: &Complex) -> Value {
        let vertices: Vec<Value> = self
            .vertices
            .iter()
            .map(|(v, d)| {
                let kind = match v {
                    NhatVertex::Natural(_) => "natural",
                    NhatVertex::Joint(_) => "joint",
                };
                json!({"label": v.label(cx), "kind": kind, "depth": d})
            })
            .collect();
        let edges: Vec<Value> = self
            .edges
            .iter()
            .map(|((b, j), w)| {
                json!({"natural": cx.block_label(b), "joint": cx.joint_block_label(j), "wall": cx.wall_label(w)})
            })
            .collect();
        json!({
            "radius": self.radius,
            "vertices": vertices,
            "edges": edges,
            "max_shared_neighbors": self.max_shared_neighbors(),
        })
    }
}

/// Walls of a natural block met by the window lines of its factor.
pub fn block_walls(cx: &Complex, b: &BlockKey, window: &[TorusWord]) -> BTreeMap<WallKey, JointLineKey> {
    let mut out = BTreeMap::new();
    let g = b.element();
    for c in window {
        let line = JointLineKey::from_element(&cx.am.mul(&g, &cx.am.from_factor(b.side, c)));
        out.entry(cx.wall_of_line(&line, b.side)).or_insert(line);
    }
    out
}

/// Breadth-first ball around `G_-`. A natural block's neighbors come from its
/// window walls, a joint block's from its skeleton grown to `joint_depth`.
/// A cycle, or a natural block meeting one joint block in two walls, is a
/// fatal model error.
pub fn nerve_hat_ball(
    cx: &Complex,
    windows: [&[TorusWord]; 2],
    joint_depth: usize,
    radius: i64,
    max_vertices: usize,
) -> Result<NhatBall> {
    let mut vertices = BTreeMap::new();
    let mut ids: BTreeMap<NhatVertex, usize> = BTreeMap::new();
    let mut edges = BTreeMap::new();
    let mut uf = UnionFind { parent: vec![] };
    let mut parent = BTreeMap::new();
    let root = NhatVertex::Natural(BlockKey::base(Side::Minus));
    vertices.insert(root.clone(), 0);
    ids.insert(root.clone(), uf.add());
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let d = vertices[&v];
        if d == radius {
            continue;
        }
        let incident: Vec<(BlockKey, JointBlockKey, WallKey)> = match &v {
            NhatVertex::Natural(b) => {
                let mut seen = BTreeSet::new();
                let mut out = Vec::new();
                for (w, line) in block_walls(cx, b, windows[b.side as usize]) {
                    let j = cx.joint_block_of(&line);
                    if !seen.insert(j.clone()) {
                        return Err(Error::Model(format!(
                            "{} meets {} in two walls",
                            cx.block_label(b),
                            cx.joint_block_label(&j)
                        )));
                    }
                    out.push((b.clone(), j, w));
                }
                out
            }
            NhatVertex::Joint(j) => {
                let seed = cx.line_in_wall(&j.wall());
                let jb = grow_joint_block(cx, &seed, joint_depth)?;
                let mut out = Vec::new();
                for w in jb.walls.into_keys() {
                    if !cx.in_neighborhood(j, &w.block) {
                        return Err(Error::Model(format!(
                            "wall {} of {} fails the itinerary test",
                            cx.wall_label(&w),
                            cx.joint_block_label(j)
                        )));
                    }
                    out.push((w.block.clone(), j.clone(), w));
                }
                out
            }
        };
        for (b, j, w) in incident {
            let ekey = (b.clone(), j.clone());
            if let Some(prev) = edges.get(&ekey) {
                if *prev != w {
                    return Err(Error::Model(format!(
                        "{} meets {} in two walls",
                        cx.block_label(&b),
                        cx.joint_block_label(&j)
                    )));
                }
                continue;
            }
            let other = match &v {
                NhatVertex::Natural(_) => NhatVertex::Joint(j.clone()),
                NhatVertex::Joint(_) => NhatVertex::Natural(b.clone()),
            };
            let oid = match ids.get(&other) {
                Some(&i) => i,
                None => {
                    if vertices.len() >= max_vertices {
                        return Err(Error::SizeCap {
                            what: format!("nerve of all blocks, radius {radius}"),
                            cap: max_vertices,
                        });
                    }
                    let i = uf.add();
                    ids.insert(other.clone(), i);
                    vertices.insert(other.clone(), d + 1);
                    parent.insert(other.clone(), v.clone());
                    queue.push_back(other);
                    i
                }
            };
            if !uf.union(ids[&v], oid) {
                return Err(Error::Model(format!(
                    "cycle in the nerve of all blocks through {}",
                    cx.wall_label(&w)
                )));
            }
            edges.insert(ekey, w);
        }
    }
    let mut adjacency: BTreeMap<NhatVertex, Vec<NhatVertex>> = BTreeMap::new();
    for (b, j) in edges.keys() {
        let (nb, nj) = (NhatVertex::Natural(b.clone()), NhatVertex::Joint(j.clone()));
        adjacency.entry(nb.clone()).or_default().push(nj.clone());
        adjacency.entry(nj).or_default().push(nb);
    }
    Ok(NhatBall {
        radius,
        vertices,
        edges,
        parent,
        adjacency,
    })
}

impl Complex {
    /// Itinerary through all blocks: maximal runs of natural-itinerary joint
    /// lines in one joint block collapse to that joint block.
    pub fn itinerary_nhat(&self, from: &BlockKey, to: &BlockKey) -> Vec<NhatVertex> {
        let lines = self.nerve_path(from, to);
        let blocks = self.itinerary_n(from, to);
        let mut out = vec![NhatVertex::Natural(from.clone())];
        let mut i = 0;
        while i < lines.len() {
            let j = self.joint_block_of(&lines[i]);
            let mut k = i + 1;
            while k < lines.len() && self.joint_block_of(&lines[k]) == j {
                k += 1;
            }
            out.push(NhatVertex::Joint(j));
            out.push(NhatVertex::Natural(blocks[k].clone()));
            i = k;
        }
        out
    }

    pub fn nhat_distance(&self, from: &BlockKey, to: &BlockKey) -> usize {
        self.itinerary_nhat(from, to).len() - 1
    }

    /// Whether a point of a natural block lies in the wall it shares with a
    /// joint block.
    pub fn point_in_joint_wall(&self, x: &ComplexPoint, j: &JointBlockKey) -> bool {
        let Ok(w) = self.shared_wall(&x.block, j) else {
            return false;
        };
        let side = w.block.side;
        let tree = self.tree(side);
        tree.line(&w.shadow)
            .project_point(tree, self.alpha(side), &x.pos)
            .dist
            .is_zero()
    }

    /// Itinerary of a pair of points. An end block is dropped when the point
    /// already lies in the wall of the next joint block.
    pub fn itinerary_nhat_points(&self, x: &ComplexPoint, y: &ComplexPoint) -> Vec<NhatVertex> {
        let mut best: Option<(ComplexPoint, ComplexPoint, Vec<NhatVertex>)> = None;
        for xm in self.memberships(x) {
            for ym in self.memberships(y) {
                let it = self.itinerary_nhat(&xm.block, &ym.block);
                if best.as_ref().is_none_or(|b| it.len() < b.2.len()) {
                    best = Some((xm.clone(), ym, it));
                }
            }
        }
        let (xm, ym, mut it) = best.unwrap();
        if it.len() >= 3 {
            if let NhatVertex::Joint(j) = &it[it.len() - 2] {
                if self.point_in_joint_wall(&ym, j) {
                    it.pop();
                }
            }
            if let NhatVertex::Joint(j) = &it[1] {
                if self.point_in_joint_wall(&xm, j) {
                    it.remove(0);
                }
            }
        }
        it
    }

    /// Checks that the natural itinerary is the concatenation of the natural
    /// itineraries between consecutive natural blocks of the full itinerary,
    /// each crossing only joint lines of the joint block between them.
    pub fn check_itinerary_chain(&self, from: &BlockKey, to: &BlockKey) -> bool {
        let it = self.itinerary_nhat(from, to);
        let mut chained = vec![from.clone()];
        for w in it.windows(3).step_by(2) {
            let (NhatVertex::Natural(a), NhatVertex::Joint(j), NhatVertex::Natural(b)) =
                (&w[0], &w[1], &w[2])
            else {
                return false;
            };
            if !self.nerve_path(a, b).iter().all(|l| self.joint_block_of(l) == *j) {
                return false;
            }
            chained.extend(self.itinerary_n(a, b).into_iter().skip(1));
        }
        chained == self.itinerary_n(from, to)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::tests::cx;
    use crate::tree::{window_lines, NerveWindow};

    fn windows(c: &Complex) -> [Vec<TorusWord>; 2] {
        let w = NerveWindow {
            rho: 1,
            height: c.factor(Side::Minus).beta.clone(),
        };
        [
            window_lines(c.factor(Side::Minus), &w).unwrap(),
            window_lines(c.factor(Side::Plus), &w).unwrap(),
        ]
    }

    #[test]
    fn ball_is_a_tree_without_squares() {
        let c = cx();
        let w = windows(&c);
        let ball = nerve_hat_ball(&c, [&w[0], &w[1]], 2, 3, 100_000).unwrap();
        assert_eq!(ball.edges.len() + 1, ball.vertices.len());
        assert!(ball.max_shared_neighbors() <= 1);
        let j0 = c.joint_block_of(&JointLineKey::default());
        assert!(ball.vertices.contains_key(&NhatVertex::Joint(j0)));
        assert!(ball.vertices.contains_key(&NhatVertex::Natural(BlockKey::base(Side::Plus))));
    }

    #[test]
    fn itineraries_through_joint_blocks() {
        let c = cx();
        let gm = BlockKey::base(Side::Minus);
        let gp = BlockKey::base(Side::Plus);
        let it = c.itinerary_nhat(&gm, &gp);
        assert_eq!(it.len(), 3);
        let far = c.parse_block("b+^1.a-^1.G+").unwrap();
        for b in [&gp, &far] {
            assert!(c.check_itinerary_chain(&gm, b));
        }
    }

    #[test]
    fn point_itinerary_trims_wall_points() {
        let c = cx();
        // above the joint line gamma_0 in the wall of its joint block
        let x = c.parse_point("(G-, 1, 0, 1/2)").unwrap();
        let y = c.parse_point("(G+, 1, 0, 1/2)").unwrap();
        let j0 = c.joint_block_of(&JointLineKey::default());
        assert!(c.point_in_joint_wall(&x, &j0));
        assert_eq!(c.itinerary_nhat_points(&x, &y), vec![NhatVertex::Joint(j0)]);
        let z = c.parse_point("(G+, b^1, 1/5, 0)").unwrap();
        assert_eq!(c.itinerary_nhat_points(&x, &z).len(), 2);
    }
}
