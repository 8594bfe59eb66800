//! The lemma suite behind `cat0knot verify`: every finitely checkable
//! statement about the configured complex, decided on bounded balls.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::boundary::{
    boundary_intersection_class, classify_rational, neighbor_pole_angle, tits_angle_in_block, wall_boundary_walk,
    Angle, BoundaryClass, BoundaryPoint, RayClass, RaySpec, TreeEnd,
};
use crate::complex::geodesic::{block_distance, geodesic_cross, GeodesicOptions};
use crate::complex::joint::{base_joint_lines, fault_offset, grow_joint_block, verify_joint_lines_disjoint};
use crate::complex::nhat::{nerve_hat_ball, NhatBall, NhatVertex};
use crate::complex::sample::random_point;
use crate::complex::Complex;
use crate::config::Config;
use crate::error::Result;
use crate::exact::QuadScalar;
use crate::group::{check_no_right_angle, Side, TorusWord};
use crate::tree::{build_ball, nerve_ball, shadows_through, BlockKey, JointLineKey, LinePair, NerveBall, TreeCell};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub statement: &'static str,
    pub status: Status,
    pub witness: Value,
    /// Wall-clock time; kept out of the JSON so reports are reproducible.
    #[serde(skip)]
    pub elapsed: std::time::Duration,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

struct Ctx<'a> {
    cx: &'a Complex,
    cfg: &'a Config,
    windows: [Vec<TorusWord>; 2],
    nerve: OnceLock<Result<NerveBall>>,
    nhat: OnceLock<Result<NhatBall>>,
}

impl Ctx<'_> {
    fn nerve(&self) -> Result<&NerveBall> {
        self.nerve
            .get_or_init(|| nerve_ball(&self.cx.am, self.win(), self.radius(), self.cfg.caps.max_vertices))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn nhat(&self) -> Result<&NhatBall> {
        self.nhat
            .get_or_init(|| {
                nerve_hat_ball(
                    self.cx,
                    self.win(),
                    self.cfg.joint_depth,
                    self.radius(),
                    self.cfg.caps.max_vertices,
                )
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    fn win(&self) -> [&[TorusWord]; 2] {
        [&self.windows[0], &self.windows[1]]
    }

    fn opts(&self) -> GeodesicOptions {
        GeodesicOptions {
            epsilon: self.cfg.epsilon_geo,
            max_crossings: self.cfg.caps.max_itinerary,
        }
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt)
    }

    fn radius(&self) -> i64 {
        self.cfg.ball_radius
    }
}

type Outcome = Result<(Status, Value)>;
type CheckFn = fn(&Ctx) -> Outcome;

fn verdict(ok: bool, witness: Value) -> Outcome {
    Ok((if ok { Status::Pass } else { Status::Fail }, witness))
}

fn skipped(reason: &str) -> Outcome {
    Ok((Status::Skipped, json!({ "reason": reason })))
}

const CHECKS: &[(&str, &str, CheckFn)] = &[
    (
        "boundary_classes",
        "boundaries of blocks at distance 1, 2, 3 in the nerve of all blocks meet in a wall circle, a pole pair, or not at all",
        boundary_classes,
    ),
    (
        "geodesic_metric",
        "cross-block geodesics are certified, symmetric and satisfy the triangle inequality",
        geodesic_metric,
    ),
    (
        "itinerary_chain",
        "natural itineraries are concatenations of those between consecutive natural blocks of the full itinerary",
        itinerary_chain,
    ),
    (
        "itinerary_soundness",
        "geodesics cross exactly the joint lines of the nerve path, each between the predicted blocks",
        itinerary_soundness,
    ),
    (
        "joint_block_growth",
        "D^n adds 2, 4, 12, ... walls and the skeleton is 4-valent",
        joint_block_growth,
    ),
    (
        "joint_line_disjointness",
        "distinct joint lines are disjoint, with a positive minimal separation",
        joint_line_disjointness,
    ),
    ("joint_loop_unit", "the meridian loop has length 1", joint_loop_unit),
    (
        "nerve_hat_tree",
        "the nerve of all blocks is a tree and joint blocks share at most one natural neighbor",
        nerve_hat_tree,
    ),
    ("nerve_tree", "the nerve of natural blocks is a tree", nerve_tree),
    (
        "no_right_angle",
        "lambda(omega) / lambda(tau) = 1/pq is nonzero",
        no_right_angle,
    ),
    (
        "pole_angles",
        "poles of adjacent natural and joint blocks are exactly theta apart",
        pole_angles,
    ),
    (
        "pole_walk",
        "rotating a wall boundary by theta moves exactly theta per step; closure is reported",
        pole_walk,
    ),
    (
        "ray_classification",
        "periodic rays inside one joint block are rational, transverse ones irrational with a common end for equal tails",
        ray_classification,
    ),
    (
        "separation",
        "natural blocks 4k apart in the nerve of all blocks are at distance at least k delta",
        separation,
    ),
    (
        "shadow_intersections",
        "two wall shadows share at most one edge, or two edges through a 2-valent vertex",
        shadow_intersections,
    ),
    (
        "suspension_axioms",
        "the suspension Tits metric is symmetric and satisfies the triangle inequality",
        suspension_axioms,
    ),
    (
        "translation_heights",
        "lambda(tau) = beta and lambda(omega) = beta/pq",
        translation_heights,
    ),
    (
        "wall_shadow_counts",
        "interior vertices lie on valence-many shadows and interior edges on exactly two",
        wall_shadow_counts,
    ),
];

/// Runs every check in parallel; the report is ordered by check name.
pub fn run_suite(cfg: &Config) -> Result<Report> {
    let cx = cfg.complex()?;
    let windows = cfg.windows(&cx)?;
    let ctx = Ctx {
        cx: &cx,
        cfg,
        windows,
        nerve: OnceLock::new(),
        nhat: OnceLock::new(),
    };
    let mut checks: Vec<CheckResult> = CHECKS
        .par_iter()
        .map(|(name, statement, f)| {
            let start = std::time::Instant::now();
            let (status, witness) = match f(&ctx) {
                Ok(o) => o,
                Err(e) => (Status::Fail, json!({ "error": e.to_string() })),
            };
            CheckResult {
                name,
                statement,
                status,
                witness,
                elapsed: start.elapsed(),
            }
        })
        .collect();
    checks.sort_by_key(|c| c.name);
    Ok(Report {
        passed: checks.iter().all(|c| c.status != Status::Fail),
        checks,
    })
}

fn joint_loop_unit(ctx: &Ctx) -> Outcome {
    let mut ok = true;
    let mut w = serde_json::Map::new();
    for side in [Side::Minus, Side::Plus] {
        let l = ctx.cx.factor(side).joint_loop_length_sq();
        ok &= l == QuadScalar::one();
        w.insert(format!("{side:?}").to_lowercase(), json!(l.to_string()));
    }
    verdict(ok, Value::Object(w))
}

fn translation_heights(ctx: &Ctx) -> Outcome {
    let mut ok = true;
    let mut w = serde_json::Map::new();
    for side in [Side::Minus, Side::Plus] {
        let f = ctx.cx.factor(side);
        let g = &f.group;
        let lt = f.lambda(&g.tau());
        let lo = f.lambda(&g.omega());
        ok &= lt == f.beta && lo == &f.beta / &QuadScalar::from_int(g.p * g.q);
        w.insert(
            format!("{side:?}").to_lowercase(),
            json!({"lambda_tau": lt.to_string(), "lambda_omega": lo.to_string()}),
        );
    }
    verdict(ok, Value::Object(w))
}

fn no_right_angle(ctx: &Ctx) -> Outcome {
    let mut ok = true;
    for side in [Side::Minus, Side::Plus] {
        let f = ctx.cx.factor(side);
        let g = &f.group;
        let r = f.lambda(&g.omega()) / f.lambda(&g.tau());
        ok &= !r.is_zero() && r == QuadScalar::from_ratio(1, g.p * g.q);
    }
    let table = check_no_right_angle(20)?;
    ok &= table.iter().all(|e| e.nonzero && e.matches_one_over_pq);
    verdict(ok, json!({ "pairs_checked": table.len() }))
}

fn wall_shadow_counts(ctx: &Ctx) -> Outcome {
    let r = ctx.radius().min(5);
    if r < 2 {
        return skipped("ball radius below 2 leaves no interior vertex");
    }
    let mut ok = true;
    let mut w = serde_json::Map::new();
    for side in [Side::Minus, Side::Plus] {
        let tree = ctx.cx.tree(side);
        let ball = build_ball(tree, r, ctx.cfg.caps.max_vertices)?;
        let (mut nv, mut ne) = (0, 0);
        for v in ball.vertices.keys().filter(|v| ball.margin(v).unwrap() >= 2) {
            let n = shadows_through(tree, &ball, &TreeCell::Vertex(v.clone()))?.len() as i64;
            ok &= n == tree.valence(v.kind);
            nv += 1;
        }
        for (e, (a, b)) in &ball.edges {
            if ball.margin(a).unwrap() >= 2 && ball.margin(b).unwrap() >= 2 {
                ok &= shadows_through(tree, &ball, &TreeCell::Edge(e.clone()))?.len() == 2;
                ne += 1;
            }
        }
        w.insert(
            format!("{side:?}").to_lowercase(),
            json!({"radius": r, "interior_vertices": nv, "interior_edges": ne}),
        );
    }
    verdict(ok, Value::Object(w))
}

fn shadow_intersections(ctx: &Ctx) -> Outcome {
    let mut ok = true;
    let mut w = serde_json::Map::new();
    for side in [Side::Minus, Side::Plus] {
        let tree = ctx.cx.tree(side);
        let ball = build_ball(tree, 2, ctx.cfg.caps.max_vertices)?;
        let keys: BTreeSet<_> = ball
            .vertices
            .keys()
            .flat_map(|v| crate::tree::lines_through_vertex(tree, v))
            .collect();
        let keys: Vec<_> = keys.into_iter().collect();
        let (mut pairs, mut two) = (0, 0);
        for i in 0..keys.len() {
            for j in (i + 1)..keys.len() {
                let (l1, l2) = (tree.line(&keys[i]), tree.line(&keys[j]));
                pairs += 1;
                if let LinePair::Overlap { lo, hi, .. } = l1.pair_with(tree, &l2) {
                    match hi - lo {
                        0 | 1 => {}
                        2 => {
                            two += 1;
                            ok &= tree.valence(l1.vertex_at(tree, lo + 1).kind) == 2;
                        }
                        _ => ok = false,
                    }
                }
            }
        }
        w.insert(
            format!("{side:?}").to_lowercase(),
            json!({"pairs": pairs, "sharing_two_edges": two}),
        );
    }
    verdict(ok, Value::Object(w))
}

fn joint_line_disjointness(ctx: &Ctx) -> Outcome {
    let lines = base_joint_lines(ctx.cx, ctx.win());
    if lines.len() < 2 {
        return skipped("fewer than two joint lines in the window");
    }
    let fault = if ctx.cfg.fault_injection {
        fault_offset(ctx.cx, &lines)
    } else {
        None
    };
    let rep = verify_joint_lines_disjoint(ctx.cx, &lines, fault.as_ref().map(|(k, d)| (k, d)))?;
    verdict(
        rep.passed(),
        json!({
            "lines": rep.lines,
            "pairs": rep.pairs_checked,
            "parallel_pairs": rep.parallel_pairs,
            "transverse_pairs": rep.transverse_pairs,
            "delta": format!("{:.12}", rep.delta),
            "epsilon": format!("{:.12}", rep.epsilon()),
            "delta_witness": [rep.delta_witness.0, rep.delta_witness.1],
            "intersections": rep.intersections.iter().take(5).map(|(a, b)| [a, b]).collect::<Vec<_>>(),
            "fault_injected": fault.is_some(),
        }),
    )
}

fn joint_block_growth(ctx: &Ctx) -> Outcome {
    let depth = ctx.cfg.joint_depth;
    let jb = grow_joint_block(ctx.cx, &JointLineKey::default(), depth)?;
    let layers = jb.layer_counts();
    let expected: Vec<usize> = (1..=depth)
        .map(|n| if n == 1 { 2 } else { 4 * 3usize.pow(n as u32 - 2) })
        .collect();
    let interior_ok = jb
        .lines
        .iter()
        .filter(|(_, &d)| d + 1 < depth)
        .all(|(l, _)| jb.valence(l) == 4);
    verdict(
        layers == expected && interior_ok,
        json!({"depth": depth, "layers": layers, "expected": expected, "skeleton_lines": jb.lines.len()}),
    )
}

fn nerve_tree(ctx: &Ctx) -> Outcome {
    if ctx.radius() == 0 {
        return skipped("radius 0: a single block");
    }
    let ball = ctx.nerve()?;
    verdict(
        ball.lines.len() + 1 == ball.blocks.len(),
        json!({"radius": ctx.radius(), "blocks": ball.blocks.len(), "joint_lines": ball.lines.len()}),
    )
}

fn nerve_hat_tree(ctx: &Ctx) -> Outcome {
    if ctx.radius() == 0 {
        return skipped("radius 0: a single block");
    }
    let ball = ctx.nhat()?;
    let shared = ball.max_shared_neighbors();
    verdict(
        ball.edges.len() + 1 == ball.vertices.len() && shared <= 1,
        json!({
            "radius": ctx.radius(),
            "vertices": ball.vertices.len(),
            "edges": ball.edges.len(),
            "max_shared_neighbors": shared,
        }),
    )
}

fn itinerary_chain(ctx: &Ctx) -> Outcome {
    if ctx.radius() == 0 {
        return skipped("radius 0: a single block");
    }
    let ball = ctx.nerve()?;
    let root = BlockKey::base(Side::Minus);
    let mut checked = 0;
    let mut bad = Vec::new();
    for b in ball.blocks.keys().take(ctx.cfg.samples * 10) {
        checked += 1;
        if !ctx.cx.check_itinerary_chain(&root, b) {
            bad.push(ctx.cx.block_label(b));
        }
    }
    verdict(bad.is_empty(), json!({"pairs": checked, "failures": bad}))
}

fn geodesic_metric(ctx: &Ctx) -> Outcome {
    if ctx.radius() == 0 {
        return skipped("radius 0: no cross-block pairs");
    }
    let steps = (ctx.radius() as usize).min(2);
    let mut rng = ctx.rng(1);
    let opts = ctx.opts();
    let tol = 2.0 * ctx.cfg.epsilon_geo;
    let (mut worst_sym, mut worst_tri, mut uncertified) = (0f64, 0f64, 0usize);
    for _ in 0..ctx.cfg.samples {
        let x = random_point(ctx.cx, &mut rng, ctx.win(), steps, 2);
        let y = random_point(ctx.cx, &mut rng, ctx.win(), steps, 2);
        let z = random_point(ctx.cx, &mut rng, ctx.win(), steps, 2);
        let xy = geodesic_cross(ctx.cx, &x, &y, &opts)?;
        let yx = geodesic_cross(ctx.cx, &y, &x, &opts)?;
        let xz = geodesic_cross(ctx.cx, &x, &z, &opts)?;
        let zy = geodesic_cross(ctx.cx, &z, &y, &opts)?;
        worst_sym = worst_sym.max((xy.length - yx.length).abs());
        worst_tri = worst_tri.max(xy.length - xz.length - zy.length);
        uncertified += [&xy, &yx, &xz, &zy].iter().filter(|g| !g.certified()).count();
    }
    verdict(
        worst_sym <= tol && worst_tri <= tol && uncertified == 0,
        json!({
            "triples": ctx.cfg.samples,
            "max_asymmetry": format!("{worst_sym:.3e}"),
            "max_triangle_excess": format!("{:.3e}", worst_tri.max(0.0)),
            "uncertified": uncertified,
        }),
    )
}

/// Path between two blocks by breadth-first search in the enumerated nerve.
fn nerve_bfs(ball: &NerveBall, from: &BlockKey, to: &BlockKey) -> Option<Vec<BlockKey>> {
    let mut adj: BTreeMap<&BlockKey, Vec<&BlockKey>> = BTreeMap::new();
    for (m, p) in ball.lines.values() {
        adj.entry(m).or_default().push(p);
        adj.entry(p).or_default().push(m);
    }
    let mut parent: BTreeMap<&BlockKey, &BlockKey> = BTreeMap::new();
    let mut queue = VecDeque::from([from]);
    let mut seen = BTreeSet::from([from]);
    while let Some(v) = queue.pop_front() {
        for &w in adj.get(v).into_iter().flatten() {
            if seen.insert(w) {
                parent.insert(w, v);
                queue.push_back(w);
            }
        }
    }
    let mut path = vec![to.clone()];
    while path.last() != Some(from) {
        path.push((*parent.get(path.last().unwrap())?).clone());
    }
    path.reverse();
    Some(path)
}

fn itinerary_soundness(ctx: &Ctx) -> Outcome {
    if ctx.radius() < 2 {
        return skipped("radius below 2 leaves no room for sampled pairs");
    }
    let ball = ctx.nerve()?;
    let steps = (ctx.radius() as usize - 1).min(3);
    let mut rng = ctx.rng(2);
    let opts = ctx.opts();
    let mut bad = Vec::new();
    let mut crossings = 0;
    for _ in 0..ctx.cfg.samples {
        let x = random_point(ctx.cx, &mut rng, ctx.win(), steps, 2);
        let y = random_point(ctx.cx, &mut rng, ctx.win(), steps, 2);
        let g = geodesic_cross(ctx.cx, &x, &y, &opts)?;
        let (Some(first), Some(last)) = (g.blocks.first(), g.blocks.last()) else {
            continue;
        };
        let predicted = nerve_bfs(ball, first, last);
        let mut ok = predicted.as_ref() == Some(&g.blocks);
        for (i, (line, t)) in g.crossings.iter().enumerate() {
            let (m, p) = line.ends();
            let (a, b) = (&g.blocks[i], &g.blocks[i + 1]);
            ok &= (m == *a && p == *b) || (m == *b && p == *a);
            // the crossing point lies on the line in both adjacent charts
            let t = QuadScalar::from_f64(*t);
            for side in [Side::Minus, Side::Plus] {
                let pt = ctx.cx.line_point(line, &t, side);
                ok &= ctx.cx.joint_lines_at(&pt).iter().any(|(l, _)| l == line);
            }
            crossings += 1;
        }
        ok &= g.certified();
        if !ok {
            bad.push(format!("{} -> {}", x, y));
        }
    }
    verdict(
        bad.is_empty(),
        json!({"pairs": ctx.cfg.samples, "crossings": crossings, "failures": bad}),
    )
}

fn separation(ctx: &Ctx) -> Outcome {
    if ctx.radius() < 2 {
        return skipped("radius below 2 has no natural blocks 4 apart");
    }
    let lines = base_joint_lines(ctx.cx, ctx.win());
    let delta = verify_joint_lines_disjoint(ctx.cx, &lines, None)?.delta;
    let ball = ctx.nhat()?;
    let naturals: Vec<&BlockKey> = ball.naturals().collect();
    let root = BlockKey::base(Side::Minus);
    let opts = ctx.opts();
    let (mut checked, mut worst) = (0usize, f64::INFINITY);
    let mut bad = Vec::new();
    let mut per_k: BTreeMap<usize, usize> = BTreeMap::new();
    for b in &naturals {
        let d = ctx.cx.nhat_distance(&root, b);
        let k = d / 4;
        if k == 0 {
            continue;
        }
        let n = per_k.entry(k).or_default();
        if *n >= ctx.cfg.samples {
            continue;
        }
        *n += 1;
        let g = block_distance(ctx.cx, &root, b, &opts)?;
        checked += 1;
        let ratio = g.length / (k as f64 * delta);
        worst = worst.min(ratio);
        if g.length + ctx.cfg.epsilon_geo < k as f64 * delta {
            bad.push(ctx.cx.block_label(b));
        }
    }
    if checked == 0 {
        return skipped("no natural block pair 4 apart in the ball");
    }
    verdict(
        bad.is_empty(),
        json!({
            "delta": format!("{delta:.12}"),
            "pairs": checked,
            "pairs_by_k": per_k,
            "min_length_over_k_delta": format!("{worst:.6}"),
            "failures": bad,
        }),
    )
}

fn pole_angles(ctx: &Ctx) -> Outcome {
    if ctx.radius() == 0 {
        return skipped("radius 0: no adjacent blocks");
    }
    let ball = ctx.nhat()?;
    let theta = Angle::theta(ctx.cx);
    let mut bad = Vec::new();
    for (b, j) in ball.edges.keys() {
        let a = neighbor_pole_angle(ctx.cx, &NhatVertex::Natural(b.clone()), &NhatVertex::Joint(j.clone()))?;
        if a.angle != theta || a.clamped {
            bad.push(format!("{} / {}", ctx.cx.block_label(b), ctx.cx.joint_block_label(j)));
        }
    }
    verdict(
        bad.is_empty(),
        json!({"pairs": ball.edges.len(), "cos_theta": theta.cos.to_string(), "failures": bad}),
    )
}

fn boundary_classes(ctx: &Ctx) -> Outcome {
    if ctx.radius() < 4 {
        return skipped("distance-3 pairs 2 inside the frontier need radius >= 4");
    }
    let ball = ctx.nhat()?;
    // the innermost vertices, so that every distance up to 4 occurs
    let mut inner: Vec<(&NhatVertex, i64)> = ball
        .vertices
        .iter()
        .filter(|(_, &d)| d + 2 <= ball.radius)
        .map(|(v, &d)| (v, d))
        .collect();
    inner.sort_by_key(|&(_, d)| d);
    let inner: Vec<&NhatVertex> = inner.into_iter().take(ctx.cfg.samples * 3).map(|(v, _)| v).collect();
    let mut counts = BTreeMap::new();
    let mut bad = Vec::new();
    for (i, a) in inner.iter().enumerate() {
        for b in &inner[i..] {
            let c = boundary_intersection_class(ctx.cx, ball, a, b)?;
            let back = boundary_intersection_class(ctx.cx, ball, b, a)?;
            let kind = match &c {
                BoundaryClass::Same => "same",
                BoundaryClass::WallBoundary(_) => "wall",
                BoundaryClass::PoleSet(_) => "poles",
                BoundaryClass::Empty { distance: 3, separation } => {
                    if separation.as_ref().map(|s| &s.angle) != Some(&Angle::theta(ctx.cx)) {
                        bad.push(format!("{} / {}", a.label(ctx.cx), b.label(ctx.cx)));
                    }
                    "empty_at_3"
                }
                BoundaryClass::Empty { .. } => "empty",
            };
            if c != back {
                bad.push(format!("asymmetric {} / {}", a.label(ctx.cx), b.label(ctx.cx)));
            }
            *counts.entry(kind).or_insert(0usize) += 1;
        }
    }
    let ok = bad.is_empty() && ["same", "wall", "poles", "empty_at_3"].iter().all(|k| counts.contains_key(k));
    verdict(ok, json!({"classes": counts, "failures": bad}))
}

fn suspension_axioms(ctx: &Ctx) -> Outcome {
    let cx = ctx.cx;
    let b = NhatVertex::Natural(BlockKey::base(Side::Minus));
    let tree = cx.tree(Side::Minus);
    let th = Angle::theta(cx);
    let right = Angle::new(QuadScalar::zero(), QuadScalar::one())?;
    let polars = [Angle::zero(), th.clone(), right, th.supplement(), Angle::pi()];
    let ends: Vec<TreeEnd> = (0..3)
        .flat_map(|i| {
            let s = crate::tree::lines_through_vertex(tree, &tree.v_a())[i % tree.valence(crate::tree::VertexKind::A) as usize].clone();
            [TreeEnd::shadow_end(tree, &s, true), TreeEnd::shadow_end(tree, &s, false)]
        })
        .collect();
    let mut pts = Vec::new();
    for p in &polars {
        if p.is_zero() || p.is_pi() {
            pts.push(BoundaryPoint::new(b.clone(), None, p.clone())?);
        } else {
            for e in &ends {
                pts.push(BoundaryPoint::new(b.clone(), Some(e.clone()), p.clone())?);
            }
        }
    }
    let mut triples = 0usize;
    let mut ok = true;
    for u in &pts {
        for v in &pts {
            let uv = tits_angle_in_block(u, v)?;
            ok &= uv == tits_angle_in_block(v, u)?;
            for w in &pts {
                let uw = tits_angle_in_block(u, w)?;
                let vw = tits_angle_in_block(v, w)?;
                let (sum, _) = uv.angle.capped_sum(&vw.angle);
                ok &= uw.angle.le(&sum);
                triples += 1;
            }
        }
    }
    verdict(ok, json!({"points": pts.len(), "triples": triples}))
}

fn pole_walk(ctx: &Ctx) -> Outcome {
    let theta = ctx.cfg.theta_spec()?;
    let w = wall_boundary_walk(&theta, 1000)?;
    verdict(
        w.steps_exact,
        json!({"steps": w.steps, "closure": w.closure, "distinct_points": w.distinct}),
    )
}

fn ray_classification(ctx: &Ctx) -> Outcome {
    let cx = ctx.cx;
    let gm = cx.factor(Side::Minus).group;
    let gp = cx.factor(Side::Plus).group;
    let start = BlockKey::base(Side::Minus);
    let lon = TreeEnd::shadow_end(cx.tree(Side::Minus), &[], true);
    let base = RaySpec {
        start: start.clone(),
        polar: Angle::theta(cx),
        longitude: Some(lon),
        prefix: vec![],
        period: vec![],
    };
    // a ray inside the joint block of gamma_0 crossing tau_- then tau_+
    let diag = RaySpec {
        period: vec![gm.tau(), gp.tau()],
        ..base.clone()
    };
    let diag_class = classify_rational(cx, &diag)?;
    let diag_ok = matches!(diag_class, RayClass::Rational { infinite_natural: true, .. });
    // transverse steps: b times the power of omega that cancels its height
    let kerl = |g: &crate::group::TorusGroup| -> Result<TorusWord> {
        let b = g.parse("b")?;
        let j = g.height_units(&b);
        Ok(g.mul(&b, &g.pow(&g.omega(), -j)))
    };
    let (sm, sp) = (kerl(&gm)?, kerl(&gp)?);
    let alt = RaySpec {
        period: vec![sm.clone(), sp.clone()],
        ..base.clone()
    };
    let later = RaySpec {
        start: alt.block_after(cx, 1),
        prefix: vec![sp.clone()],
        period: vec![sm, sp],
        ..base
    };
    let (c1, c2) = (classify_rational(cx, &alt)?, classify_rational(cx, &later)?);
    let irr_ok = match (&c1, &c2) {
        (RayClass::Irrational(e1), RayClass::Irrational(e2)) => e1.agrees(e2),
        _ => false,
    };
    // natural itineraries of periodic rays never close up
    let mut n_ok = true;
    for ray in [&diag, &alt] {
        let d: Vec<usize> = (1..=3)
            .map(|r| cx.nerve_path(&start, &ray.block_after(cx, r * ray.period.len())).len())
            .collect();
        n_ok &= d[0] < d[1] && d[1] < d[2];
    }
    verdict(
        diag_ok && irr_ok && n_ok,
        json!({
            "joint_block_ray": diag_class.to_json(cx),
            "transverse_ray": c1.to_json(cx),
            "natural_itineraries_grow": n_ok,
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ball_suite_passes() {
        let cfg = Config {
            ball_radius: 2,
            joint_depth: 2,
            samples: 3,
            ..Config::default()
        };
        let rep = run_suite(&cfg).unwrap();
        for c in &rep.checks {
            assert_ne!(c.status, Status::Fail, "{}: {}", c.name, c.witness);
        }
        assert_eq!(rep.get("separation").unwrap().status, Status::Skipped);
        let names: Vec<_> = rep.checks.iter().map(|c| c.name).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
    }

    #[test]
    fn fault_injection_is_caught() {
        let cfg = Config {
            ball_radius: 1,
            joint_depth: 1,
            samples: 1,
            fault_injection: true,
            ..Config::default()
        };
        let rep = run_suite(&cfg).unwrap();
        let c = rep.get("joint_line_disjointness").unwrap();
        assert_eq!(c.status, Status::Fail);
        assert!(!rep.passed);
    }
}
