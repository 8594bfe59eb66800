//! Enumerates the joint lines meeting the base blocks and checks that no
//! two of them meet; prints the minimal separation.

use cat0knot::complex::joint::{base_joint_lines, verify_joint_lines_disjoint};
use cat0knot::config::{Config, WindowConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (rho, betas) in [(1, 1), (1, 2), (3, 1), (3, 2)] {
        let cfg = Config {
            window: WindowConfig { rho, betas },
            ..Config::default()
        };
        let cx = cfg.complex()?;
        let w = cfg.windows(&cx)?;
        let lines = base_joint_lines(&cx, [&w[0], &w[1]]);
        let rep = verify_joint_lines_disjoint(&cx, &lines, None)?;
        println!(
            "rho={rho} betas={betas}: {} lines, {} pairs in a common block, delta = {:.6}, intersections = {}",
            rep.lines,
            rep.pairs_checked,
            rep.delta,
            rep.intersections.len()
        );
    }
    Ok(())
}
