//! Growth of the joint block around gamma_0: walls added per layer and the
//! 4-valent skeleton.

use cat0knot::complex::joint::grow_joint_block;
use cat0knot::config::Config;
use cat0knot::tree::JointLineKey;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cx = Config::default().complex()?;
    for depth in 1..=4 {
        let jb = grow_joint_block(&cx, &JointLineKey::default(), depth)?;
        println!(
            "D^{depth}: layers {:?}, {} skeleton lines, {} natural neighbors",
            jb.layer_counts(),
            jb.lines.len(),
            jb.natural_neighbors().len()
        );
    }
    let jb = grow_joint_block(&cx, &JointLineKey::default(), 2)?;
    println!("{}", serde_json::to_string_pretty(&jb.to_json(&cx))?);
    Ok(())
}
