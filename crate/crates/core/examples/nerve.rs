//! The nerve of natural blocks and the nerve of all blocks: ball sizes and
//! itineraries between blocks.

use cat0knot::complex::nhat::nerve_hat_ball;
use cat0knot::config::Config;
use cat0knot::tree::nerve_ball;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = Config::default();
    let cx = cfg.complex()?;
    let w = cfg.windows(&cx)?;
    for r in 1..=3 {
        let n = nerve_ball(&cx.am, [&w[0], &w[1]], r, 100_000)?;
        let h = nerve_hat_ball(&cx, [&w[0], &w[1]], 2, r, 100_000)?;
        println!(
            "radius {r}: {} natural blocks; {} blocks in all, {} edges",
            n.blocks.len(),
            h.vertices.len(),
            h.edges.len()
        );
    }
    let root = cx.parse_block("G-")?;
    let far = cx.parse_block("b+^1.a-^1.G+")?;
    let natural: Vec<String> = cx.itinerary_n(&root, &far).iter().map(|b| cx.block_label(b)).collect();
    let all: Vec<String> = cx.itinerary_nhat(&root, &far).iter().map(|v| v.label(&cx)).collect();
    println!("natural itinerary: {}", natural.join(" -> "));
    println!("full itinerary:    {}", all.join(" -> "));
    Ok(())
}
