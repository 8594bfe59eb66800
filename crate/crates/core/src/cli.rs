//! `cat0knot build|verify|geodesic|tits|nerve|polewalk`.
//!
//! Every command reads one JSON config (by path, `-` for stdin, or the
//! defaults), applies flag overrides and writes sorted-key JSON to stdout or
//! `--out`. Exit status: 0 success, 1 verification failure or runtime error,
//! 2 usage, config or out-of-ball errors.

use std::ffi::OsString;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::boundary::{joint_pole_in, pole_set, tits_angle_in_block, wall_boundary_walk, Angle, BoundaryPoint, TreeEnd, KEPT};
use crate::complex::geodesic::{geodesic_cross, GeodesicOptions};
use crate::complex::nhat::{nerve_hat_ball, NhatVertex};
use crate::complex::Complex;
use crate::config::{Config, ThetaConfig};
use crate::error::{Error, Result};
use crate::group::Side;
use crate::tree::{nerve_ball, BlockKey};
use crate::verify::run_suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "cat0knot", version, about = "Exact CAT(0) model spaces for connected sums of torus knots")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// JSON config file, or `-` for stdin. Defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    radius: Option<i64>,
    #[arg(long, global = true)]
    joint_depth: Option<usize>,
    /// Half-angle tangent of theta, a rational such as `1/2`.
    #[arg(long, global = true)]
    theta_t: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    epsilon_geo: Option<f64>,
    /// Shift one joint line so that it crosses gamma_0 (test hook).
    #[arg(long, global = true)]
    fault_injection: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the complex and summarize it.
    Build,
    /// Run the lemma suite.
    Verify,
    /// Geodesic between two point literals `(block, edge word, offset, height)`.
    Geodesic {
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
    },
    /// Tits angle between two boundary directions of `G-`:
    /// `up`, `down`, `omega`, `omega_inv` or `joint:K`.
    Tits {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Export a nerve ball as JSON, optionally DOT.
    Nerve {
        #[arg(long, value_enum, default_value = "n")]
        which: Which,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Rotate a wall boundary's up pole by theta, step by step.
    Polewalk {
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        /// Points to list in the output.
        #[arg(long, default_value_t = 16)]
        limit: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Which {
    #[value(name = "N", alias = "n")]
    N,
    #[value(name = "Nhat", alias = "nhat")]
    Nhat,
}

fn usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidConfig { .. } | Error::Parse(_) | Error::OutOfBall(_) | Error::InvalidRadicand(_) | Error::NotCoprime { .. }
    )
}

fn load_config(c: &Common) -> Result<Config> {
    let text = match &c.config {
        None => "{}".to_string(),
        Some(p) if p.as_os_str() == "-" => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::InvalidConfig { field: "config".into(), reason: e.to_string() })?;
            s
        }
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::InvalidConfig {
            field: "config".into(),
            reason: format!("{}: {e}", p.display()),
        })?,
    };
    let mut cfg: Config = serde_json::from_str(&text).map_err(|e| Error::InvalidConfig {
        field: "config".into(),
        reason: e.to_string(),
    })?;
    if let Some(r) = c.radius {
        cfg.ball_radius = r;
    }
    if let Some(d) = c.joint_depth {
        cfg.joint_depth = d;
    }
    if let Some(t) = &c.theta_t {
        cfg.theta = ThetaConfig::HalfTangent { t: t.clone() };
    }
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if let Some(s) = c.samples {
        cfg.samples = s;
    }
    if let Some(e) = c.epsilon_geo {
        cfg.epsilon_geo = e;
    }
    cfg.fault_injection |= c.fault_injection;
    if let Ok(mb) = std::env::var("CAT0KNOT_MAX_MB") {
        let mb = mb.trim().parse::<usize>().map_err(|_| Error::InvalidConfig {
            field: "CAT0KNOT_MAX_MB".into(),
            reason: format!("not a size in MB: {mb:?}"),
        })?;
        cfg.apply_memory_cap(Some(mb));
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_out(out: Option<&Path>, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v).expect("json serializes") + "\n";
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::InvalidConfig {
            field: "out".into(),
            reason: format!("{}: {e}", p.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn build(cfg: &Config) -> Result<Value> {
    let cx = cfg.complex()?;
    let w = cfg.windows(&cx)?;
    let nerve = nerve_ball(&cx.am, [&w[0], &w[1]], cfg.ball_radius, cfg.caps.max_vertices)?;
    let nhat = nerve_hat_ball(&cx, [&w[0], &w[1]], cfg.joint_depth, cfg.ball_radius, cfg.caps.max_vertices)?;
    Ok(json!({
        "config": cfg,
        "complex": cx.to_json(),
        "window_lines": {"minus": w[0].len(), "plus": w[1].len()},
        "nerve": nerve.to_json(&cx.am),
        "nerve_hat": {
            "radius": nhat.radius,
            "vertices": nhat.vertices.len(),
            "edges": nhat.edges.len(),
        },
    }))
}

fn direction(cx: &Complex, cfg: &Config, name: &str) -> Result<BoundaryPoint> {
    let b = BlockKey::base(Side::Minus);
    let v = NhatVertex::Natural(b.clone());
    let tree = cx.tree(Side::Minus);
    let [up, down] = pole_set(&v);
    match name {
        "up" | "tau" => Ok(up),
        "down" | "tau_inv" => Ok(down),
        "omega" => BoundaryPoint::new(v, Some(TreeEnd::shadow_end(tree, &[], true)), Angle::theta(cx)),
        "omega_inv" => BoundaryPoint::new(
            v,
            Some(TreeEnd::shadow_end(tree, &[], false)),
            Angle::theta(cx).supplement(),
        ),
        _ => {
            let k: usize = name
                .strip_prefix("joint:")
                .and_then(|k| k.parse().ok())
                .ok_or_else(|| Error::Parse(format!("unknown direction {name:?}; use up, down, omega, omega_inv or joint:K")))?;
            let w = cfg.windows(cx)?;
            let ball = nerve_hat_ball(cx, [&w[0], &w[1]], cfg.joint_depth, 1, cfg.caps.max_vertices)?;
            let js = ball.neighbors(&v);
            match js.get(k) {
                Some(NhatVertex::Joint(j)) => joint_pole_in(cx, &b, j),
                _ => Err(Error::OutOfBall(format!(
                    "joint:{k} but G- has {} joint neighbors in the window",
                    js.len()
                ))),
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    let cfg = load_config(&cli.common)?;
    let out = cli.common.out.as_deref();
    let value = match &cli.cmd {
        Command::Build => build(&cfg)?,
        Command::Verify => {
            let rep = run_suite(&cfg)?;
            write_out(out, &rep.to_json())?;
            return Ok(if rep.passed { EXIT_OK } else { EXIT_FAIL });
        }
        Command::Geodesic { from, to } => {
            let cx = cfg.complex()?;
            let (x, y) = (cx.parse_point(from)?, cx.parse_point(to)?);
            let opts = GeodesicOptions {
                epsilon: cfg.epsilon_geo,
                max_crossings: cfg.caps.max_itinerary,
            };
            let g = geodesic_cross(&cx, &x, &y, &opts)?;
            json!({
                "from": cx.point_label(&x),
                "to": cx.point_label(&y),
                "geodesic": g.to_json(&cx),
            })
        }
        Command::Tits { from, to } => {
            let cx = cfg.complex()?;
            let (u, v) = (direction(&cx, &cfg, from)?, direction(&cx, &cfg, to)?);
            json!({
                "from": from,
                "to": to,
                "block": "G-",
                "angle": tits_angle_in_block(&u, &v)?.to_json(),
            })
        }
        Command::Nerve { which, dot } => {
            let cx = cfg.complex()?;
            let w = cfg.windows(&cx)?;
            let (json, text, acyclic) = match which {
                Which::N => {
                    let b = nerve_ball(&cx.am, [&w[0], &w[1]], cfg.ball_radius, cfg.caps.max_vertices)?;
                    (b.to_json(&cx.am), b.to_dot(&cx.am), b.lines.len() + 1 == b.blocks.len())
                }
                Which::Nhat => {
                    let b = nerve_hat_ball(&cx, [&w[0], &w[1]], cfg.joint_depth, cfg.ball_radius, cfg.caps.max_vertices)?;
                    (b.to_json(&cx), b.to_dot(&cx), b.edges.len() + 1 == b.vertices.len())
                }
            };
            if let Some(p) = dot {
                std::fs::write(p, text).map_err(|e| Error::InvalidConfig {
                    field: "dot".into(),
                    reason: format!("{}: {e}", p.display()),
                })?;
            }
            json!({"ball": json, "acyclic": acyclic})
        }
        Command::Polewalk { steps, limit } => {
            let w = wall_boundary_walk(&cfg.theta_spec()?, *steps)?;
            w.to_json((*limit).min(KEPT))
        }
    };
    write_out(out, &value)?;
    Ok(EXIT_OK)
}

/// Runs the CLI on explicit arguments (the first is the program name).
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if usage_error(&e) {
                EXIT_USAGE
            } else {
                EXIT_FAIL
            }
        }
    }
}

pub fn main() -> i32 {
    run(std::env::args_os())
}
