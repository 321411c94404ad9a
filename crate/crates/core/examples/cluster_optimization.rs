// Picking one vertex per cluster for a fixed order, globally and in windows.

use std::path::PathBuf;

use gtsp_dsta::{full_co, short_co, Instance, Tour};

pub fn run(path: PathBuf) -> (i64, i64, i64) {
    let inst = Instance::from_file(&path).unwrap_or_else(|e| panic!("{e}"));
    // last member of every cluster, in cluster index order
    let order: Vec<usize> = (0..inst.m()).collect();
    let choice = order
        .iter()
        .map(|&c| *inst.cluster_members_idx(c).last().unwrap())
        .collect();
    let t = Tour::new(&inst, order, choice).unwrap();
    let window = short_co(&inst, &t, &[1]);
    let full = full_co(&inst, &t);
    println!("order {:?}", t.cluster_sequence());
    println!("  as given   {:>6}  {:?}", t.cost(), t.vertex_sequence());
    println!(
        "  short CO   {:>6}  {:?}",
        window.cost(),
        window.vertex_sequence()
    );
    println!(
        "  full CO    {:>6}  {:?}",
        full.cost(),
        full.vertex_sequence()
    );
    assert!(full.cost() <= window.cost() && window.cost() <= t.cost());
    (t.cost(), window.cost(), full.cost())
}

#[allow(dead_code)]
fn main() {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(concat!(
                env!("CARGO_MANIFEST_DIR"),
                "/data/instances/choice3.gtsp"
            ))
        });
    run(path);
}
