use tricover::*;

fn run(name: &str, json: &str, seed: u64) {
    let t0 = std::time::Instant::now();
    let sp = parse_presentation(json).unwrap();
    let cfg = ChoiceConfig { seed, ..Default::default() };
    match construct_cover(&sp, &cfg) {
        Ok((cover, atlas)) => {
            let build_t = t0.elapsed();
            let t1 = std::time::Instant::now();
            let out = verify_emptiness(&cover, &atlas);
            let (_, finite) = verify_pairwise_finite(&cover, &atlas);
            let samp = sample_coverage(&cover, &atlas, 200, seed);
            println!(
                "{name} seed={seed}: build {:?} verify {:?} empty={} finite={} sample={}",
                build_t, t1.elapsed(), out.is_pass(), finite, samp.pass
            );
            if let EmptinessOutcome::Counterexample { chart, labels, basis } = out {
                println!("   FAIL in {}: {:?} basis {:?}", chart.name, labels, basis);
            }
        }
        Err(e) => println!("{name} seed={seed}: BUILD ERROR {e}"),
    }
}

fn main() {
    // three generic blowups of the plane
    run("P2 r=3", r#"{"base":"P2","centers":[
        {"level":1,"chart":"S0","coords":["0","0"]},
        {"level":2,"chart":"S0","coords":["1","1"]},
        {"level":3,"chart":"S1","coords":["2","3"]}]}"#, 0);
    // five blowups with a tower of infinitely near points
    run("P2 r=5 inf-near", r#"{"base":"P2","centers":[
        {"level":1,"chart":"S0","coords":["0","0"]},
        {"level":2,"chart":"B1a","coords":["0","1"]},
        {"level":3,"chart":"S0","coords":["1","2"]},
        {"level":4,"chart":"S2","coords":["3","1"]},
        {"level":5,"chart":"B2a","coords":["0","-1"]}]}"#, 0);
    // Hirzebruch tower
    run("S2 r=3", r#"{"base":{"hirzebruch":2},"centers":[
        {"level":1,"chart":"H00","coords":["1","1"]},
        {"level":2,"chart":"H00","coords":["-1","2"]},
        {"level":3,"chart":"B1a","coords":["0","1"]}]}"#, 0);
    run("S3 r=5", r#"{"base":{"hirzebruch":3},"centers":[
        {"level":1,"chart":"H00","coords":["1","1"]},
        {"level":2,"chart":"H10","coords":["2","1"]},
        {"level":3,"chart":"H01","coords":["-1","1"]},
        {"level":4,"chart":"B3a","coords":["0","2"]},
        {"level":5,"chart":"H00","coords":["4","5"]}]}"#, 0);
}
