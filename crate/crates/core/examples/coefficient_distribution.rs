// Exact p_{j,k}(n), closed-form block counts, and a conditional
// distribution.

use zeck::counting::{conditional_distribution, interior_keys};
use zeck::{
    block_position_count, block_position_tally, coefficient_distribution, generate_sequence,
    Budget, RecurrenceSpec, Route,
};

fn main() {
    let spec = RecurrenceSpec::fibonacci();
    let table = generate_sequence(&spec, 41);
    let dist = coefficient_distribution(&table, 40, Route::Formula, Budget::default()).unwrap();
    for j in [1, 2, 5, 20, 35, 39, 40] {
        println!("p_({j:>2},1)(40) = {:.10}", dist.probability_f64(j, 1));
    }
    println!("asymptotic p_k: {:?}", dist.marginal);
    println!("E[X_40] = {}", dist.expected_summands());

    // Closed form against brute force.
    let n = 12;
    let tally = block_position_tally(&table, n, Budget::default(), 2).unwrap();
    let keys = interior_keys(&spec, n);
    let agree = keys.iter().all(|&(j, k, l, r)| {
        let f =
            block_position_count(&table, n, j, k, l, r, Route::Formula, Budget::default()).unwrap();
        f.count == tally.get(&(j, k, l, r)).copied().unwrap_or(0).into()
    });
    println!(
        "{} interior (j,k,l,r) at n = {n}, formula == enumeration: {agree}",
        keys.len()
    );

    let c = conditional_distribution(&table, 16, 5, 1, 6, 1, Budget::default()).unwrap();
    println!("P(a_6 = 1 | a_5 = 1) = {}", c.exact);
    let c = conditional_distribution(&table, 16, 5, 1, 12, 1, Budget::default()).unwrap();
    println!(
        "P(a_12 = 1 | a_5 = 1) = {:.6} vs unconditional {:.6}",
        c.value, c.unconditional
    );
}
