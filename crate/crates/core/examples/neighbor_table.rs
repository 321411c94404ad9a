// Cluster correlation, relevancy and the K-Neighbor lists.
//
//     cargo run --example neighbor_table -- path/to/instance.gtsp 8

use std::path::PathBuf;

use gtsp_dsta::{Instance, NeighborModel};

pub fn run(path: PathBuf, k: usize) -> NeighborModel {
    let inst = Instance::from_file(&path).unwrap_or_else(|e| panic!("{e}"));
    let nm = NeighborModel::build(&inst, k).expect("non-degenerate geometry");
    for i in 0..nm.m() {
        let r = nm.correlation.row_sum(i);
        let p = nm.relevancy.row_sum(i);
        assert!((r - 1.0).abs() < 1e-9 && (p - 1.0).abs() < 1e-9);
    }
    for (c, row) in nm.table().iter().enumerate().take(5) {
        let list: Vec<String> = row
            .iter()
            .map(|&j| format!("{}({:.3})", j + 1, nm.relevancy.get(c, j)))
            .collect();
        println!("cluster {:>3}: {}", c + 1, list.join(" "));
    }
    if nm.m() > 5 {
        println!("... {} more clusters", nm.m() - 5);
    }
    nm
}

#[allow(dead_code)]
fn main() {
    let mut args = std::env::args().skip(1);
    let path = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/data/instances/30synth150.gtsp"
        ))
    });
    let k = args.next().map_or(8, |k| k.parse().expect("k"));
    run(path, k);
}
