// Builds a seeded clustered instance and prints it in GTSPLIB format.
//
//     cargo run --example generate_instance -- 150 30 7 > 30synth150.gtsp

use gtsp_dsta::generate;
use gtsp_dsta::parse_gtsplib;

pub fn run(n: usize, m: usize, seed: u64) -> String {
    let name = format!("{m}synth{n}");
    let inst = generate::clustered(&name, n, m, seed).with_comment(format!(
        "uniform points, farthest-point centers, seed {seed}"
    ));
    let text = inst.to_gtsplib();
    let back = parse_gtsplib(&text).expect("generated text parses");
    assert_eq!(back, inst);
    text
}

#[allow(dead_code)]
fn main() {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("usage: generate_instance [N M SEED]"))
        .collect();
    let (n, m, seed) = match args[..] {
        [n, m, seed] => (n as usize, m as usize, seed),
        [] => (150, 30, 7),
        _ => panic!("usage: generate_instance [N M SEED]"),
    };
    print!("{}", run(n, m, seed));
}
