use tricover::*;
use tricover::builder::{Chooser, BuildCtx};
use tricover::surface::future_center_sets;

fn main() {
    let json = r#"{"base":"P2","centers":[
        {"level":1,"chart":"S0","coords":["0","0"]},
        {"level":2,"chart":"S0","coords":["1","1"]},
        {"level":3,"chart":"S1","coords":["2","3"]}]}"#;
    let sp = parse_presentation(json).unwrap();
    let atlas = StandardAtlas::build(&sp).unwrap();
    let cfg = ChoiceConfig::default();
    let mut chooser = Chooser::search(cfg.clone());
    let mut ctx = BuildCtx::default();

    let t = std::time::Instant::now();
    let avoid: Vec<_> = atlas.centers.iter().map(|(c, p)| atlas.pushforward(c, p, 0)).collect();
    let mut cover = base_cover_p2(&atlas, &avoid, &mut chooser).unwrap();
    eprintln!("base: {:?}", t.elapsed());
    for i in 1..=atlas.levels {
        let t = std::time::Instant::now();
        let (a1, a2) = future_center_sets(&atlas, i);
        let p = atlas.centers[i - 1].clone();
        cover = inductive_step(&atlas, &mut ctx, &cover, i, &p, &a1, &a2, &mut chooser).unwrap();
        eprintln!("step {i}: {:?}", t.elapsed());
        for (j, ch) in cover.charts.iter().enumerate() {
            let degs: Vec<u32> = ch.complement.iter().flat_map(|r| r.traces.values().map(|t| t.total_degree().unwrap_or(0))).collect();
            let to_deg = ch.to_reference.components.iter().map(|c| c.num().total_degree().unwrap_or(0).max(c.den().total_degree().unwrap_or(0))).max().unwrap();
            eprintln!("  U{j}: trace degrees {:?} to_ref deg {}", degs, to_deg);
        }
    }
    let t = std::time::Instant::now();
    let out = verify_emptiness(&cover, &atlas);
    eprintln!("verify: {:?} pass={}", t.elapsed(), out.is_pass());
}
