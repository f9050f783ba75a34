// Y_n/X_n concentrating at the density of a set.

use zeck::{concentration, generate_sequence, RecurrenceSpec, SetPredicate};

fn main() {
    let table = generate_sequence(&RecurrenceSpec::fibonacci(), 801);
    let ladder = [100, 200, 400, 800];

    // Every third Fibonacci number is even.
    let even = concentration(
        &table,
        &ladder,
        &SetPredicate::even(),
        0.05,
        7,
        500,
        Some(1.0 / 3.0),
        4,
    )
    .unwrap();
    for p in &even.points {
        println!(
            "even, n = {:>3}: P(|Y/X - 1/3| < 0.05) = {:.3}",
            p.n, p.fraction
        );
    }

    let digit1 = SetPredicate::leading_digit(10, 1).unwrap();
    let r = concentration(&table, &ladder, &digit1, 0.05, 7, 500, None, 4).unwrap();
    println!(
        "leading digit 1, density {:.5} ({})",
        r.density, r.density_source
    );
    for p in &r.points {
        println!(
            "  n = {:>3}: fraction {:.3}, mean Y/X {:.5}",
            p.n, p.fraction, p.ratio_mean
        );
    }
}
