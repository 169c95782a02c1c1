use radofactor::{
    parse_pattern, DigitSet, Engine, Family, HostGraph, ManifestEvent, VertexId,
};

fn short(v: &VertexId) -> String {
    let b = v.as_biguint();
    if b.bits() <= 40 {
        format!("{b}")
    } else {
        format!("[{}bits]", b.bits())
    }
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let stages: u64 = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(50);
    let trace = std::env::var("TRACE").is_ok();
    let specs: Vec<&str> = if args.len() > 2 {
        args[2..].iter().map(|s| s.as_str()).collect()
    } else {
        vec!["path", "tree:3", "rado:2:1", "matching"]
    };
    let host = match std::env::var("HOST").as_deref() {
        Ok("complete") => HostGraph::Complete,
        Ok("r20") => HostGraph::Rado(DigitSet::new(2, [0]).unwrap()),
        _ => HostGraph::Rado(DigitSet::new(2, [1]).unwrap()),
    };
    let family =
        Family::repeating(specs.iter().map(|s| parse_pattern(s).unwrap()).collect()).unwrap();
    let mut eng = Engine::new(host, family).unwrap();
    let mut died = None;
    let mut seen_events = 0usize;
    for s in 0..stages {
        let touched = eng.touched_vertices().len();
        let used = eng.used_edges().len();
        let maxbits = eng
            .touched_vertices()
            .iter()
            .map(|v| v.as_biguint().bits())
            .max()
            .unwrap_or(0);
        println!("stage {s} touched={touched} used={used} maxseen_bits={maxbits}");
        let r = eng.run_stage();
        if trace {
            for ev in &eng.manifest().events()[seen_events..] {
                match ev {
                    ManifestEvent::Edge { index, factor } => {
                        println!("  E {index} f{factor}");
                    }
                    ManifestEvent::Map { factor, pattern, host } => {
                        println!("  M f{factor} p{pattern} -> {}", short(host));
                    }
                }
            }
            seen_events = eng.manifest().events().len();
        }
        if let Err(e) = r {
            died = Some((s, e));
            break;
        }
    }
    match died {
        None => println!("{stages} stages clean"),
        Some((s, e)) => {
            println!("DIED at stage {s}: {e}");
            if !trace {
                for (pair, alpha) in eng.used_edges() {
                    println!(
                        "  edge {{{}, {}}} -> {alpha}",
                        short(pair.lo()),
                        short(pair.hi())
                    );
                }
            }
        }
    }
}
