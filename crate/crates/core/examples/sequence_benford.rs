// Leading digits of the sequence itself against Benford's law.

use zeck::{generate_sequence, sequence_benford_report, RecurrenceSpec};

fn main() {
    let table = generate_sequence(&RecurrenceSpec::fibonacci(), 1000);
    let report = sequence_benford_report(&table, 1000, 10).unwrap();
    print!("{}", report.histogram.to_csv());
    for p in &report.discrepancy {
        println!(
            "discrepancy of log10 G_i mod 1, first {:>4}: {:.5}",
            p.n, p.discrepancy
        );
    }

    // Other bases work the same way.
    let report = sequence_benford_report(&table, 1000, 3).unwrap();
    println!("base 3: sup distance {:.4}", report.histogram.sup_distance);
}
