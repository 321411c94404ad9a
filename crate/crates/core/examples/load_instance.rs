// Reads a GTSPLIB file and prints its size, clusters and a few edge costs.
//
//     cargo run --example load_instance -- path/to/30kroA150.gtsp

use std::path::PathBuf;

use gtsp_dsta::{parse_gtsplib, Instance};

pub fn run(path: PathBuf) -> Instance {
    let inst = Instance::from_file(&path).unwrap_or_else(|e| panic!("{e}"));
    println!(
        "{}: {} vertices in {} clusters, {}",
        inst.name(),
        inst.n(),
        inst.m(),
        inst.weight_kind()
    );
    if let Some(c) = inst.comment() {
        println!("comment: {c}");
    }
    let sizes: Vec<usize> = inst.clusters().iter().map(Vec::len).collect();
    println!(
        "cluster sizes: min {} max {}",
        sizes.iter().min().unwrap(),
        sizes.iter().max().unwrap()
    );
    // public indices are 1-based, as in the file
    for v in 1..=inst.n().min(3) {
        let w = inst.n() + 1 - v;
        println!(
            "d({v}, {w}) = {}  clusters {} / {}",
            inst.edge_cost(v, w).unwrap(),
            inst.cluster_of(v).unwrap(),
            inst.cluster_of(w).unwrap()
        );
    }
    let again = parse_gtsplib(&inst.to_gtsplib()).expect("round trip");
    assert_eq!(again.clusters(), inst.clusters());
    inst
}

#[allow(dead_code)]
fn main() {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(concat!(
                env!("CARGO_MANIFEST_DIR"),
                "/data/instances/30synth150.gtsp"
            ))
        });
    run(path);
}
