//! The nerve `N` of natural blocks: the Bass-Serre tree of `G_- *_Z G_+`.
//!
//! Vertices are blocks `g G_-`, `g G_+`; edges are joint lines `g <omega>`.
//! Each block meets infinitely many joint lines, so balls are truncated by a
//! [`NerveWindow`]: only joint lines passing near the block's base point.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde_json::{json, Value};

use super::{build_ball, Tree};
use crate::error::{Error, Result};
use crate::exact::QuadScalar;
use crate::group::amalgam::AmSyllable;
use crate::group::{Amalgam, AmalgamWord, Side, TorusKnotParams, TorusWord};

/// Natural block `g G_side`, keyed by the transversal syllables of `g` with
/// no trailing syllable from `side`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockKey {
    pub side: Side,
    pub word: Vec<AmSyllable>,
}

impl BlockKey {
    pub fn base(side: Side) -> Self {
        BlockKey { side, word: vec![] }
    }

    pub fn element(&self) -> AmalgamWord {
        AmalgamWord {
            syllables: self.word.clone(),
            omega: 0,
        }
    }

    pub fn label(&self, am: &Amalgam) -> String {
        let g = if self.word.is_empty() {
            String::new()
        } else {
            format!("{}.", am.format(&self.element()))
        };
        format!("{g}G{}", self.side)
    }
}

/// Joint line `g <omega>`, keyed by the transversal syllables of `g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct JointLineKey {
    pub word: Vec<AmSyllable>,
}

impl JointLineKey {
    pub fn from_element(g: &AmalgamWord) -> Self {
        JointLineKey {
            word: g.syllables.clone(),
        }
    }

    /// The block on `side` containing this line, and the element `c` of that
    /// factor with line `= block . c gamma_0`.
    pub fn chart(&self, side: Side) -> (BlockKey, TorusWord) {
        let mut word = self.word.clone();
        let c = match word.last() {
            Some((s, _)) if *s == side => word.pop().unwrap().1,
            _ => TorusWord::identity(),
        };
        (BlockKey { side, word }, c)
    }

    pub fn ends(&self) -> (BlockKey, BlockKey) {
        (self.chart(Side::Minus).0, self.chart(Side::Plus).0)
    }

    pub fn label(&self, am: &Amalgam) -> String {
        let g = AmalgamWord {
            syllables: self.word.clone(),
            omega: 0,
        };
        format!("{}<w>", am.format(&g))
    }
}

impl fmt::Display for BlockKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} syllables, G{}", self.word.len(), self.side)
    }
}

/// Which joint lines of a block count as its neighbors in a truncated nerve:
/// those whose shadow passes within `rho` edges of the base vertex and whose
/// height there is at most `height` in absolute value.
#[derive(Clone, Debug, PartialEq)]
pub struct NerveWindow {
    pub rho: i64,
    pub height: QuadScalar,
}

/// Window lines of one factor, as elements `c` of `ker L` (so `c gamma_0`
/// are distinct lines), sorted and deduplicated.
pub fn window_lines(params: &TorusKnotParams, window: &NerveWindow) -> Result<Vec<TorusWord>> {
    let tree = Tree::new(params.group);
    let ball = build_ball(&tree, window.rho, 1 << 22)?;
    let mut keys = BTreeSet::new();
    for v in ball.vertices.keys() {
        keys.extend(super::line::lines_through_vertex(&tree, v));
    }
    let cot = &params.cos_theta / &params.sin_theta;
    let am_side = |c: &TorusWord| {
        let g = &params.group;
        let j = g.height_units(c);
        g.mul(c, &g.pow(&g.omega(), -j))
    };
    let mut out = BTreeSet::new();
    for s in keys {
        let line = tree.line(&s);
        let (kf, _) = line.project_vertex(&tree, &tree.v_a());
        let u_f = &params.alpha * QuadScalar::from_int(kf);
        let lift = params.group.lift(&s);
        let base = params.lambda(&lift) + &u_f * &cot;
        // heights base + k beta with |.| <= H
        let lo = ((-&window.height - &base) / &params.beta).floor();
        let hi = ((&window.height - &base) / &params.beta).floor();
        let lo: i64 = lo.try_into().map_err(|_| Error::Model("height window overflow".into()))?;
        let hi: i64 = hi.try_into().map_err(|_| Error::Model("height window overflow".into()))?;
        for k in lo..=hi + 1 {
            let h = &base + &params.beta * QuadScalar::from_int(k);
            if h.abs() <= window.height {
                let g = params.group.mul(&lift, &params.group.pow(&params.group.tau(), k));
                out.insert(am_side(&g));
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// A ball in the nerve around `G_-`.
#[derive(Clone, Debug)]
pub struct NerveBall {
    pub radius: i64,
    pub blocks: BTreeMap<BlockKey, i64>,
    pub lines: BTreeMap<JointLineKey, (BlockKey, BlockKey)>,
}

impl NerveBall {
    pub fn is_frontier(&self, b: &BlockKey) -> bool {
        self.blocks.get(b) == Some(&self.radius)
    }

    pub fn neighbors(&self, b: &BlockKey) -> Vec<(JointLineKey, BlockKey)> {
        self.lines
            .iter()
            .filter_map(|(l, (m, p))| {
                if m == b {
                    Some((l.clone(), p.clone()))
                } else if p == b {
                    Some((l.clone(), m.clone()))
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn to_dot(&self, am: &Amalgam) -> String {
        let mut out = String::from("graph nerve {\n");
        for (b, d) in &self.blocks {
            out.push_str(&format!(
                "  \"{}\" [label=\"{}\\nd={d}\"];\n",
                b.label(am),
                b.label(am)
            ));
        }
        for (l, (m, p)) in &self.lines {
            out.push_str(&format!(
                "  \"{}\" -- \"{}\" [label=\"{}\"];\n",
                m.label(am),
                p.label(am),
                l.label(am)
            ));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self, am: &Amalgam) -> Value {
        let blocks: Vec<Value> = self
            .blocks
            .iter()
            .map(|(b, d)| json!({"label": b.label(am), "depth": d, "frontier": *d == self.radius}))
            .collect();
        let lines: Vec<Value> = self
            .lines
            .iter()
            .map(|(l, (m, p))| json!({"line": l.label(am), "minus": m.label(am), "plus": p.label(am)}))
            .collect();
        json!({"radius": self.radius, "blocks": blocks, "joint_lines": lines})
    }
}

pub(crate) struct UnionFind {
    pub(crate) parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn add(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    /// False if already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Breadth-first ball of radius `radius` around `G_-`, with each block's
/// neighbors given by the window lines of its factor. Acyclicity is checked
/// by union-find as edges are added; a cycle is a fatal model error.
pub fn nerve_ball(
    am: &Amalgam,
    windows: [&[TorusWord]; 2],
    radius: i64,
    max_blocks: usize,
) -> Result<NerveBall> {
    let mut blocks = BTreeMap::new();
    let mut ids: BTreeMap<BlockKey, usize> = BTreeMap::new();
    let mut lines = BTreeMap::new();
    let mut uf = UnionFind { parent: vec![] };
    let root = BlockKey::base(Side::Minus);
    blocks.insert(root.clone(), 0);
    ids.insert(root.clone(), uf.add());
    let mut queue = VecDeque::from([root]);
    while let Some(b) = queue.pop_front() {
        let d = blocks[&b];
        if d == radius {
            continue;
        }
        let win = windows[b.side as usize];
        let g = b.element();
        for c in win {
            let line = am.mul(&g, &am.from_factor(b.side, c));
            let key = JointLineKey::from_element(&line);
            if lines.contains_key(&key) {
                continue;
            }
            let ends = key.ends();
            let other = if b.side == Side::Minus {
                ends.1.clone()
            } else {
                ends.0.clone()
            };
            debug_assert_eq!(
                if b.side == Side::Minus { &ends.0 } else { &ends.1 },
                &b
            );
            let oid = match ids.get(&other) {
                Some(&i) => i,
                None => {
                    if blocks.len() >= max_blocks {
                        return Err(Error::SizeCap {
                            what: format!("nerve ball of radius {radius}"),
                            cap: max_blocks,
                        });
                    }
                    let i = uf.add();
                    ids.insert(other.clone(), i);
                    blocks.insert(other.clone(), d + 1);
                    queue.push_back(other.clone());
                    i
                }
            };
            if !uf.union(ids[&b], oid) {
                return Err(Error::Model(format!(
                    "cycle in the nerve through joint line {}",
                    key.label(am)
                )));
            }
            lines.insert(key, ends);
        }
    }
    Ok(NerveBall {
        radius,
        blocks,
        lines,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::ThetaSpec;
    use num_rational::BigRational;

    fn setup() -> (Amalgam, TorusKnotParams, TorusKnotParams) {
        let th = ThetaSpec::from_half_tangent(&BigRational::new(1.into(), 2.into())).unwrap();
        let m = TorusKnotParams::new(2, 3, &th).unwrap();
        let p = TorusKnotParams::new(2, 5, &th).unwrap();
        (Amalgam::new(m.group, p.group), m, p)
    }

    #[test]
    fn window_contains_gamma0_and_tau_translates() {
        let (_, m, _) = setup();
        let w = NerveWindow {
            rho: 1,
            height: m.beta.clone(),
        };
        let lines = window_lines(&m, &w).unwrap();
        assert!(lines.contains(&TorusWord::identity()));
        let tau_rep = {
            let g = &m.group;
            g.mul(&g.tau(), &g.pow(&g.omega(), -g.height_units(&g.tau())))
        };
        assert!(lines.contains(&tau_rep));
        for c in &lines {
            assert_eq!(m.group.height_units(c), 0);
        }
    }

    #[test]
    fn small_nerve_balls() {
        let (am, m, p) = setup();
        let w = NerveWindow {
            rho: 1,
            height: m.beta.clone(),
        };
        let wm = window_lines(&m, &w).unwrap();
        let wp = window_lines(&p, &w).unwrap();
        let b0 = nerve_ball(&am, [&wm, &wp], 0, 1000).unwrap();
        assert_eq!(b0.blocks.len(), 1);
        let b1 = nerve_ball(&am, [&wm, &wp], 1, 1000).unwrap();
        assert!(b1.blocks.contains_key(&BlockKey::base(Side::Plus)));
        assert_eq!(b1.blocks.len(), wm.len() + 1);
        let b2 = nerve_ball(&am, [&wm, &wp], 2, 100_000).unwrap();
        assert_eq!(b2.lines.len() + 1, b2.blocks.len());
        assert!(b2.to_dot(&am).contains("G+"));
    }

    #[test]
    fn joint_line_charts() {
        let (am, _, _) = setup();
        let g = am.parse("a-^1.b+^1").unwrap();
        let key = JointLineKey::from_element(&g);
        let (bm, cm) = key.chart(Side::Minus);
        let (bp, cp) = key.chart(Side::Plus);
        assert_eq!(bp.word.len(), 1);
        assert!(!cp.is_identity());
        assert_eq!(bm.word.len(), 2);
        assert!(cm.is_identity());
    }
}
