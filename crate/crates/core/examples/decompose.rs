// Greedy decomposition of an integer and its block structure.

use num_bigint::BigUint;
use zeck::{
    decompose, generate_sequence, is_super_legal, reconstruct, segment_blocks, RecurrenceSpec,
};

fn main() {
    let spec = RecurrenceSpec::with_initial(&[1, 2, 3], &[1, 3, 8]).unwrap();
    let table = generate_sequence(&spec, 8);
    for m in [1274u32, 1277] {
        let d = decompose(&BigUint::from(m), &table).unwrap();
        assert_eq!(reconstruct(&d, &table), BigUint::from(m));
        let seg = segment_blocks(d.coeffs(), &spec).unwrap();
        let blocks: Vec<_> = seg.blocks.iter().map(|b| &b.digits).collect();
        println!(
            "{m}: coeffs {:?}, blocks {blocks:?}, super-legal {}",
            d.coeffs(),
            is_super_legal(d.coeffs(), &spec)
        );
    }

    // Fibonacci: no two adjacent ones.
    let fib = RecurrenceSpec::fibonacci();
    let table = generate_sequence(&fib, 30);
    let m = BigUint::from(1_000_000u32);
    let d = decompose(&m, &table).unwrap();
    let parts: Vec<String> = (1..=d.len())
        .rev()
        .filter(|&i| d.coeff_of(i) == 1)
        .map(|i| table.g(i).to_string())
        .collect();
    println!("{m} = {}", parts.join(" + "));
    println!("{}", serde_json::to_string(&d.to_json(&fib)).unwrap());
}
