// Leading digits of the summands in random decompositions.

use zeck::{generate_sequence, summand_digit_report, RecurrenceSpec};

fn main() {
    let spec = RecurrenceSpec::canonical(&[1, 2, 3]).unwrap();
    let table = generate_sequence(&spec, 501);
    let hist = summand_digit_report(&table, 500, 10, 42, 200, 4).unwrap();
    println!("{} summands pooled from 200 samples", hist.total);
    print!("{}", hist.to_csv());
}
