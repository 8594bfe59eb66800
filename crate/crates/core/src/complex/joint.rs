//! Walls, joint blocks and the joint-line disjointness check.
//!
//! A wall is `shadow x R` inside a natural block. Joint lines are parallel
//! exactly when they lie in a common wall, and the joint block of `gamma_0`
//! is swept out by the translates `h gamma_0`, `h` in the free group
//! `<tau_-, tau_+>`: its skeleton is the 4-valent Cayley tree, with
//! `h gamma_0` joined to `h tau_pm^(+-1) gamma_0` inside the wall they share.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use serde_json::{json, Value};

use super::geodesic::minimize_convex;
use super::Complex;
use crate::error::{Error, Result};
use crate::exact::QuadScalar;
use crate::group::word::format_fp;
use crate::group::{AmalgamWord, FpWord, Side};
use crate::tree::{BlockKey, JointLineKey, LinePair, TreeLine};

/// Wall `block . (shadow x R)`, with `shadow` a canonical shadow key.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WallKey {
    pub block: BlockKey,
    pub shadow: FpWord,
}

/// A joint block, keyed by the natural block `anchor` of its itinerary class
/// nearest to `G_-` in the nerve, and its wall there.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JointBlockKey {
    pub anchor: BlockKey,
    pub shadow: FpWord,
}

impl JointBlockKey {
    pub fn wall(&self) -> WallKey {
        WallKey {
            block: self.anchor.clone(),
            shadow: self.shadow.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum WallIntersection {
    Empty,
    /// Shadows meet in one vertex.
    VerticalLine { vertex_index: i64 },
    /// Shadows share `edges` edges.
    VerticalStrip { edges: i64 },
    Identical,
}

impl Complex {
    pub fn wall_label(&self, w: &WallKey) -> String {
        format!(
            "{}:L[{}]",
            self.block_label(&w.block),
            format_fp(&w.shadow, ["a", "b"])
        )
    }

    pub fn joint_block_label(&self, j: &JointBlockKey) -> String {
        format!("J({})", self.wall_label(&j.wall()))
    }

    /// The wall of the block on `side` containing a joint line.
    pub fn wall_of_line(&self, line: &JointLineKey, side: Side) -> WallKey {
        let chart = self.line_chart(line, side);
        WallKey {
            shadow: chart.shadow.key(self.tree(side)),
            block: chart.block,
        }
    }

    /// A joint line inside a wall.
    pub fn line_in_wall(&self, w: &WallKey) -> JointLineKey {
        let g = self.factor(w.block.side).group;
        let lift = g.lift(&w.shadow);
        let c = self.am.transversal(w.block.side, &lift);
        let elem = self.am.mul(&w.block.element(), &self.am.from_factor(w.block.side, &c));
        JointLineKey::from_element(&elem)
    }

    /// Joint block of a joint line: walk towards `G_-` while the next joint
    /// line back lies in the same wall.
    pub fn joint_block_of(&self, line: &JointLineKey) -> JointBlockKey {
        let mut word = line.word.clone();
        while let Some((side, c)) = word.pop() {
            let s = self.tree(side).shadow_key(&c.syllables);
            if !s.is_empty() {
                return JointBlockKey {
                    anchor: BlockKey { side, word },
                    shadow: s,
                };
            }
        }
        JointBlockKey {
            anchor: BlockKey::base(Side::Minus),
            shadow: vec![],
        }
    }

    pub fn joint_block_of_wall(&self, w: &WallKey) -> JointBlockKey {
        self.joint_block_of(&self.line_in_wall(w))
    }

    /// Whether a natural block neighbors the joint block, i.e. every joint
    /// line on the nerve path from the anchor lies in the joint block.
    pub fn in_neighborhood(&self, j: &JointBlockKey, b: &BlockKey) -> bool {
        self.nerve_path(&j.anchor, b)
            .iter()
            .all(|l| self.joint_block_of(l) == *j)
    }

    /// The wall shared by a natural block and a neighboring joint block.
    pub fn shared_wall(&self, b: &BlockKey, j: &JointBlockKey) -> Result<WallKey> {
        if !self.in_neighborhood(j, b) {
            return Err(Error::NotAdjacent(format!(
                "{} does not meet {} in a wall",
                self.block_label(b),
                self.joint_block_label(j)
            )));
        }
        if *b == j.anchor {
            return Ok(j.wall());
        }
        let path = self.nerve_path(&j.anchor, b);
        Ok(self.wall_of_line(path.last().unwrap(), b.side))
    }

    /// Intersection of two walls of one natural block.
    pub fn wall_intersection(&self, w1: &WallKey, w2: &WallKey) -> Result<WallIntersection> {
        if w1.block != w2.block {
            return Err(Error::NotAdjacent("walls lie in different natural blocks".into()));
        }
        let tree = self.tree(w1.block.side);
        let pair = tree.line(&w1.shadow).pair_with(tree, &tree.line(&w2.shadow));
        Ok(match pair {
            LinePair::Same { .. } => WallIntersection::Identical,
            LinePair::Disjoint { .. } => WallIntersection::Empty,
            LinePair::Overlap { lo, hi, .. } if lo == hi => {
                WallIntersection::VerticalLine { vertex_index: lo }
            }
            LinePair::Overlap { lo, hi, .. } => WallIntersection::VerticalStrip { edges: hi - lo },
        })
    }
}

/// Skeleton of a joint block grown by the `D^n` construction.
#[derive(Clone, Debug)]
pub struct JointBlock {
    pub seed: JointLineKey,
    pub key: JointBlockKey,
    pub depth: usize,
    /// Joint lines (skeleton vertices) with their distance from the seed.
    pub lines: BTreeMap<JointLineKey, usize>,
    /// Skeleton edges: two joint lines adjacent in a common wall.
    pub edges: BTreeSet<(JointLineKey, JointLineKey)>,
    /// Walls with the layer `n` of `D^n` that adds them.
    pub walls: BTreeMap<WallKey, usize>,
}

impl JointBlock {
    /// Number of walls added at each layer `1..=depth`.
    pub fn layer_counts(&self) -> Vec<usize> {
        (1..=self.depth)
            .map(|n| self.walls.values().filter(|&&l| l == n).count())
            .collect()
    }

    pub fn valence(&self, v: &JointLineKey) -> usize {
        self.edges.iter().filter(|(a, b)| a == v || b == v).count()
    }

    /// Natural blocks meeting the skeleton's walls.
    pub fn natural_neighbors(&self) -> BTreeSet<BlockKey> {
        self.walls.keys().map(|w| w.block.clone()).collect()
    }

    pub fn to_json(&self, cx: &Complex) -> Value {
        json!({
            "seed": self.seed.label(&cx.am),
            "key": cx.joint_block_label(&self.key),
            "depth": self.depth,
            "layers": self.layer_counts(),
            "lines": self.lines.len(),
            "walls": self.walls.keys().map(|w| cx.wall_label(w)).collect::<Vec<_>>(),
        })
    }
}

/// Grows `D^depth` around a joint line. `D^1` holds the two walls through the
/// seed; every later layer adds the second wall through each skeleton vertex
/// reached in the previous one.
pub fn grow_joint_block(cx: &Complex, seed: &JointLineKey, depth: usize) -> Result<JointBlock> {
    let key = cx.joint_block_of(seed);
    let seed_elem = AmalgamWord {
        syllables: seed.word.clone(),
        omega: 0,
    };
    let step = |side: Side, e: i64| {
        let g = cx.factor(side).group;
        cx.am.from_factor(side, &g.pow(&g.tau(), e))
    };
    let mut lines = BTreeMap::new();
    let mut edges = BTreeSet::new();
    let mut walls = BTreeMap::new();
    // frontier: (element, joint line, wall side and direction it was reached by)
    let mut frontier: Vec<(AmalgamWord, JointLineKey, Option<(Side, i64)>)> =
        vec![(seed_elem, seed.clone(), None)];
    lines.insert(seed.clone(), 0);
    for layer in 1..=depth {
        let mut next = Vec::new();
        for (elem, line, via) in &frontier {
            let mut moves = Vec::new();
            for side in [Side::Minus, Side::Plus] {
                if via.map(|v| v.0) == Some(side) {
                    continue;
                }
                let w = cx.wall_of_line(line, side);
                if walls.insert(w.clone(), layer).is_some() {
                    return Err(Error::Model(format!(
                        "wall {} reached twice while growing a joint block",
                        cx.wall_label(&w)
                    )));
                }
                moves.push((side, 1, w.clone()));
                moves.push((side, -1, w));
            }
            // the old wall continues past this vertex
            if let Some((side, e)) = via {
                moves.push((*side, *e, cx.wall_of_line(line, *side)));
            }
            if layer == depth {
                continue;
            }
            for (side, e, w) in moves {
                let ne = cx.am.mul(elem, &step(side, e));
                let nl = JointLineKey::from_element(&ne);
                if cx.wall_of_line(&nl, side) != w {
                    return Err(Error::Model(format!(
                        "{} and {} are not in a common wall",
                        line.label(&cx.am),
                        nl.label(&cx.am)
                    )));
                }
                if lines.insert(nl.clone(), layer).is_some() {
                    return Err(Error::Model("joint block skeleton has a cycle".into()));
                }
                let edge = if *line < nl {
                    (line.clone(), nl.clone())
                } else {
                    (nl.clone(), line.clone())
                };
                edges.insert(edge);
                next.push((ne, nl, Some((side, e))));
            }
        }
        frontier = next;
    }
    for l in lines.keys() {
        if cx.joint_block_of(l) != key {
            return Err(Error::Model(format!(
                "{} grown from {} has a different joint block key",
                l.label(&cx.am),
                seed.label(&cx.am)
            )));
        }
    }
    Ok(JointBlock {
        seed: seed.clone(),
        key,
        depth,
        lines,
        edges,
        walls,
    })
}

/// Outcome of the pairwise disjointness check.
#[derive(Clone, Debug, Serialize)]
pub struct DisjointnessReport {
    pub lines: usize,
    pub pairs_checked: usize,
    pub parallel_pairs: usize,
    pub transverse_pairs: usize,
    /// Minimal positive separation found.
    pub delta: f64,
    /// Pairs realizing `delta`.
    pub delta_witness: (String, String),
    /// Intersecting pairs (must be empty).
    pub intersections: Vec<(String, String)>,
}

impl DisjointnessReport {
    pub fn passed(&self) -> bool {
        self.intersections.is_empty() && self.delta > 0.0
    }

    pub fn epsilon(&self) -> f64 {
        self.delta / 2.0
    }
}

/// Joint lines meeting `G_-` or `G_+` through their windows, as keys.
pub fn base_joint_lines(
    cx: &Complex,
    windows: [&[crate::group::TorusWord]; 2],
) -> Vec<JointLineKey> {
    let mut out = BTreeSet::new();
    for side in [Side::Minus, Side::Plus] {
        for c in windows[side as usize] {
            out.insert(JointLineKey::from_element(&cx.am.from_factor(side, c)));
        }
    }
    out.into_iter().collect()
}

/// Lines in the chart of one block with height offsets `T cos + delta`.
struct ChartLine<'a> {
    key: &'a JointLineKey,
    shadow: TreeLine,
    offset: QuadScalar,
}

/// Checks that no two joint lines meet. Two joint lines can only meet inside
/// a natural block containing both, so pairs are tested in each shared block.
/// `fault` shifts one line's heights (a deliberately corrupted gluing).
pub fn verify_joint_lines_disjoint(
    cx: &Complex,
    lines: &[JointLineKey],
    fault: Option<(&JointLineKey, &QuadScalar)>,
) -> Result<DisjointnessReport> {
    let mut by_block: BTreeMap<BlockKey, Vec<ChartLine>> = BTreeMap::new();
    for key in lines {
        for side in [Side::Minus, Side::Plus] {
            let chart = cx.line_chart(key, side);
            let offset = match fault {
                Some((k, d)) if k == key => d.clone(),
                _ => QuadScalar::zero(),
            };
            by_block.entry(chart.block).or_default().push(ChartLine {
                key,
                shadow: chart.shadow,
                offset,
            });
        }
    }
    let tan = cx.sin() / cx.cos();
    let mut report = DisjointnessReport {
        lines: lines.len(),
        pairs_checked: 0,
        parallel_pairs: 0,
        transverse_pairs: 0,
        delta: f64::INFINITY,
        delta_witness: (String::new(), String::new()),
        intersections: vec![],
    };
    for (block, ls) in &by_block {
        let side = block.side;
        let tree = cx.tree(side);
        let alpha = cx.alpha(side);
        for i in 0..ls.len() {
            for j in (i + 1)..ls.len() {
                let (l1, l2) = (&ls[i], &ls[j]);
                report.pairs_checked += 1;
                // meeting point: L1(u) = L2(u + e), heights force e
                let e = (&l1.offset - &l2.offset) * &tan;
                let pair = l1.shadow.pair_with(tree, &l2.shadow);
                let (meets, dist) = match &pair {
                    LinePair::Same { shift } => {
                        report.parallel_pairs += 1;
                        // perpendicular distance inside the wall
                        let a = alpha * QuadScalar::from_int(*shift);
                        let sep = (&a * cx.cos() + (&l1.offset - &l2.offset) * cx.sin()).abs();
                        (sep.is_zero(), sep.to_f64())
                    }
                    LinePair::Disjoint { .. } => {
                        report.transverse_pairs += 1;
                        (false, transverse_distance(cx, side, &pair, l1, l2))
                    }
                    LinePair::Overlap {
                        lo,
                        hi,
                        k_ref,
                        j_ref,
                        sigma,
                    } => {
                        report.transverse_pairs += 1;
                        let meets = if *sigma == 1 {
                            (alpha * QuadScalar::from_int(k_ref - j_ref) + &e).is_zero()
                        } else {
                            // 2u = (k_ref + j_ref) alpha - e within [lo, hi] alpha
                            let two_u = alpha * QuadScalar::from_int(k_ref + j_ref) - &e;
                            let lo2 = alpha * QuadScalar::from_int(2 * lo);
                            let hi2 = alpha * QuadScalar::from_int(2 * hi);
                            two_u >= lo2 && two_u <= hi2
                        };
                        let d = if meets {
                            0.0
                        } else {
                            transverse_distance(cx, side, &pair, l1, l2)
                        };
                        (meets, d)
                    }
                };
                let names = (l1.key.label(&cx.am), l2.key.label(&cx.am));
                if meets {
                    report.intersections.push(names);
                } else if dist > 0.0 && dist < report.delta {
                    report.delta = dist;
                    report.delta_witness = names;
                }
            }
        }
    }
    if report.delta.is_infinite() {
        report.delta = 0.0;
    }
    Ok(report)
}

/// Distance between two non-parallel lines of a block, by nested convex
/// minimization over the two arclength parameters.
fn transverse_distance(
    cx: &Complex,
    side: Side,
    pair: &LinePair,
    l1: &ChartLine,
    l2: &ChartLine,
) -> f64 {
    let alpha = cx.alpha(side).to_f64();
    let (s, c) = (cx.sin().to_f64(), cx.cos().to_f64());
    let (o1, o2) = (l1.offset.to_f64(), l2.offset.to_f64());
    let dist = |t1: f64, t2: f64| {
        let d = pair.eval(&alpha, &(t1 * s), &(t2 * s));
        let h = t1 * c + o1 - t2 * c - o2;
        d.hypot(h)
    };
    let inner = |t1: f64| {
        let t2 = minimize_convex(|t2| dist(t1, t2), t1, 1e-12);
        dist(t1, t2)
    };
    let t1 = minimize_convex(inner, 0.0, 1e-12);
    inner(t1)
}

/// A height offset that makes two joint lines of `G_-` cross: used to check
/// that the disjointness test can fail.
pub fn fault_offset(cx: &Complex, lines: &[JointLineKey]) -> Option<(JointLineKey, QuadScalar)> {
    let side = Side::Minus;
    let tree = cx.tree(side);
    let alpha = cx.alpha(side);
    let cot = cx.cos() / cx.sin();
    let base = cx.line_chart(&JointLineKey::default(), side);
    for key in lines {
        let chart = cx.line_chart(key, side);
        if chart.block != base.block || *key == JointLineKey::default() {
            continue;
        }
        if let LinePair::Overlap {
            lo,
            hi,
            k_ref,
            j_ref,
            sigma: -1,
        } = base.shadow.pair_with(tree, &chart.shadow)
        {
            // meet at the midpoint of the overlap: e = (k_ref + j_ref - lo - hi) alpha
            let e = alpha * QuadScalar::from_int(k_ref + j_ref - lo - hi);
            // e = (0 - offset) tan
            let offset = -(&e * &cot);
            return Some((key.clone(), offset));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::tests::cx;
    use crate::tree::{window_lines, NerveWindow};

    #[test]
    fn layers_match_the_d_n_construction() {
        let c = cx();
        let jb = grow_joint_block(&c, &JointLineKey::default(), 3).unwrap();
        assert_eq!(jb.layer_counts(), vec![2, 4, 12]);
        let interior: Vec<_> = jb.lines.iter().filter(|(_, &d)| d + 1 < 3).collect();
        for (l, _) in interior {
            assert_eq!(jb.valence(l), 4);
        }
    }

    #[test]
    fn joint_block_keys() {
        let c = cx();
        let g = c.factor(Side::Minus).group;
        let tau = c.am.from_factor(Side::Minus, &g.tau());
        let l = JointLineKey::from_element(&tau);
        assert_eq!(c.joint_block_of(&l), c.joint_block_of(&JointLineKey::default()));
        let other = JointLineKey::from_element(&c.am.parse("b-^1").unwrap());
        assert_ne!(c.joint_block_of(&other), c.joint_block_of(&JointLineKey::default()));
        let j0 = c.joint_block_of(&JointLineKey::default());
        assert!(c.in_neighborhood(&j0, &BlockKey::base(Side::Plus)));
    }

    #[test]
    fn wall_intersections() {
        let c = cx();
        let b = BlockKey::base(Side::Minus);
        let w0 = WallKey {
            block: b.clone(),
            shadow: vec![],
        };
        let n = c.factor(Side::Minus).group.n;
        let tree = c.tree(Side::Minus);
        let s1 = tree.shadow_key(&tree.fp.mul(&[], &[crate::group::Syllable::new(1, -n)]));
        let w1 = WallKey { block: b, shadow: s1 };
        assert_eq!(
            c.wall_intersection(&w0, &w1).unwrap(),
            WallIntersection::VerticalStrip { edges: 2 }
        );
        assert_eq!(c.wall_intersection(&w0, &w0).unwrap(), WallIntersection::Identical);
    }

    #[test]
    fn disjointness_and_fault_injection() {
        let c = cx();
        let w = NerveWindow {
            rho: 1,
            height: c.factor(Side::Minus).beta.clone(),
        };
        let wm = window_lines(c.factor(Side::Minus), &w).unwrap();
        let wp = window_lines(c.factor(Side::Plus), &w).unwrap();
        let lines = base_joint_lines(&c, [&wm, &wp]);
        let rep = verify_joint_lines_disjoint(&c, &lines, None).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let (k, off) = fault_offset(&c, &lines).unwrap();
        let bad = verify_joint_lines_disjoint(&c, &lines, Some((&k, &off))).unwrap();
        assert!(!bad.passed());
    }
}
