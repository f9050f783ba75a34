// Audits the map from fixed-length legal strings to integers.

use zeck::{bijection_oracle, generate_sequence, Budget, RecurrenceSpec};

fn main() {
    for spec in [
        RecurrenceSpec::fibonacci(),
        RecurrenceSpec::canonical(&[1, 2, 3]).unwrap(),
        RecurrenceSpec::canonical(&[2, 1]).unwrap(),
    ] {
        let table = generate_sequence(&spec, 12);
        let r = bijection_oracle(&table, 10, Budget::default()).unwrap();
        println!(
            "c = {:?}, n = 10: {} strings onto [0, {}), bijective {}",
            spec.coeffs(),
            r.string_count,
            r.bound,
            r.bijective
        );
    }

    // Non-canonical initial terms leave gaps.
    let spec = RecurrenceSpec::with_initial(&[1, 2, 3], &[1, 3, 8]).unwrap();
    let table = generate_sequence(&spec, 3);
    let r = bijection_oracle(&table, 2, Budget::default()).unwrap();
    println!(
        "initial 1,3,8, n = 2: bijective {}, missing {:?}",
        r.bijective, r.missing
    );
}
