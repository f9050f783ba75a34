// Super-legal counts H_n, their recurrence, and the ratio H_n/G_n.

use zeck::{
    count_super_legal, generate_sequence, hn_gn_ratio, with_super_legal, Budget, CountMethod,
    RecurrenceSpec,
};

fn main() {
    let spec = RecurrenceSpec::canonical(&[1, 2, 3]).unwrap();
    let by_rec = count_super_legal(&spec, 12, CountMethod::Recurrence, Budget::default()).unwrap();
    let by_enum =
        count_super_legal(&spec, 12, CountMethod::Enumeration, Budget::default()).unwrap();
    assert_eq!(by_rec.h_values, by_enum.h_values);
    let h: Vec<String> = by_rec.h_values.iter().map(|x| x.to_string()).collect();
    println!("H_1..H_12 = {}", h.join(", "));

    let table = with_super_legal(&generate_sequence(&spec, 40)).unwrap();
    let report = hn_gn_ratio(&table, 1..=40).unwrap();
    for p in report.points.iter().step_by(8) {
        println!("n = {:>2}: H/G = {:.12}", p.n, p.value);
    }
    println!("limit estimate {:.12}", report.limit_estimate);
}
