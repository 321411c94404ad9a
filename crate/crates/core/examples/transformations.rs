// The four transformation operators on a ring of singleton clusters.
//
// Every move returns the new tour with an incrementally updated cost and the
// positions whose neighbors changed.

use gtsp_dsta::operators::{apply_move, Arc, Move, MoveParams};
use gtsp_dsta::{tour_cost, Instance, Tour, WeightKind};

pub fn run() -> Vec<Vec<usize>> {
    let m = 8;
    let points = (0..m)
        .map(|i| {
            let a = i as f64 * std::f64::consts::TAU / m as f64;
            (100.0 * a.cos(), 100.0 * a.sin())
        })
        .collect();
    let inst = Instance::from_coords(
        "ring8",
        WeightKind::Euc2d,
        points,
        (0..m).map(|i| vec![i]).collect(),
    )
    .unwrap();
    let t = Tour::with_first_vertices(&inst, (0..m).collect()).unwrap();
    println!("start        {:?} cost {}", t.cluster_sequence(), t.cost());

    let moves = [
        MoveParams::Swap {
            positions: vec![1, 4],
            perm: vec![1, 0],
        },
        MoveParams::Shift {
            start: 1,
            len: 2,
            after: 5,
        },
        MoveParams::Symmetry { center: 3, half: 2 },
        MoveParams::Circle {
            cut_a: 1,
            cut_b: 4,
            broken: Arc::First,
            break_at: 1,
            insert_at: 2,
            reversed: true,
        },
    ];
    let mut orders = Vec::new();
    for params in moves {
        let c = apply_move(&inst, &t, &Move::unguided(params.clone()));
        assert_eq!(c.tour.cost(), tour_cost(&inst, &c.tour));
        let changed: Vec<usize> = c.changed.iter().map(|p| p + 1).collect();
        println!(
            "{:<12} {:?} cost {} changed positions {:?}",
            format!("{:?}", Move::unguided(params).kind()).to_lowercase(),
            c.tour.cluster_sequence(),
            c.tour.cost(),
            changed
        );
        orders.push(c.tour.cluster_sequence());
    }
    orders
}

#[allow(dead_code)]
fn main() {
    run();
}
