// The legality grammar as an automaton: accept/reject digit strings and
// list where each digit sits in its block.

use zeck::decomposition::{fine_positions, GrammarState};
use zeck::{is_legal, is_super_legal, RecurrenceSpec};

fn main() {
    let spec = RecurrenceSpec::canonical(&[1, 2, 3]).unwrap();
    for digits in [
        vec![1, 2, 2, 1, 0, 0, 0, 1],
        vec![1, 2, 2, 1, 0, 0, 1, 1],
        vec![1, 2, 3],
        vec![0, 1, 2],
        vec![2],
    ] {
        println!(
            "{digits:?}: legal {}, super-legal {}",
            is_legal(&digits, &spec),
            is_super_legal(&digits, &spec)
        );
    }

    // Largest digit allowed in each state.
    for r in 0..spec.depth() {
        println!(
            "state {r}: max digit {:?}",
            GrammarState(r).max_digit(&spec)
        );
    }

    for p in fine_positions(&[1, 2, 2, 1, 0, 0, 0, 1], &spec).unwrap() {
        println!(
            "  block length {}, position {}, {:?}",
            p.length, p.position, p.closing
        );
    }
}
