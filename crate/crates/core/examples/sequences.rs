// Terms, dominant root and Binet constant for a few recurrences.

use zeck::{dominant_root, fit_binet_constant, generate_sequence, RecurrenceSpec};

fn main() {
    let specs = [
        RecurrenceSpec::fibonacci(),
        RecurrenceSpec::canonical(&[1, 2, 3]).unwrap(),
        RecurrenceSpec::canonical(&[2, 1]).unwrap(),
        RecurrenceSpec::with_initial(&[1, 2, 3], &[1, 3, 8]).unwrap(),
    ];
    for spec in &specs {
        let table = generate_sequence(spec, 60);
        let lambda = dominant_root(spec, 1e-14);
        let fit = fit_binet_constant(&table, lambda).unwrap();
        let head: Vec<String> = table.g_values()[..8]
            .iter()
            .map(|g| g.to_string())
            .collect();
        println!(
            "c = {:?}, G = {} ...\n  lambda1 = {lambda:.12}, A = {:.12}, G_60/G_59 = {:.12}",
            spec.coeffs(),
            head.join(", "),
            fit.a_const,
            table.growth_ratio(59),
        );
    }
}
