//! Runs the lemma suite on the default configuration and prints one line
//! per check with its timing.

use cat0knot::config::Config;
use cat0knot::verify::run_suite;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let radius = std::env::args().nth(1).map(|r| r.parse()).transpose()?.unwrap_or(4);
    let cfg = Config {
        ball_radius: radius,
        ..Config::default()
    };
    let rep = run_suite(&cfg)?;
    for c in &rep.checks {
        println!("{:8} {:26} {:>8.2}s", format!("{:?}", c.status), c.name, c.elapsed.as_secs_f64());
    }
    println!("all passed: {}", rep.passed);
    Ok(())
}
