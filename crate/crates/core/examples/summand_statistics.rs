// Mean and variance of the number of summands, exactly and by sampling.

use zeck::{generate_sequence, xy_ladder, xy_stats, Budget, Plan, RecurrenceSpec, SetPredicate};

fn main() {
    let table = generate_sequence(&RecurrenceSpec::fibonacci(), 301);
    let all = SetPredicate::Everything;

    let exact = xy_ladder(
        &table,
        &[8, 12, 16],
        &all,
        &Plan::Exact,
        2,
        Budget::default(),
    )
    .unwrap();
    for r in &exact {
        let e = r.stats.exact.as_ref().unwrap();
        println!(
            "n = {:>2}: E[X] = {} ({:.6}), Var[X] = {}",
            r.n, e.x_mean, r.stats.x_mean, e.x_var
        );
    }
    println!("slope of E[X_n]: {:.6}", exact[0].c_estimate.unwrap());

    let plan = Plan::Sampled {
        seed: 1,
        count: 1000,
    };
    let r = xy_stats(
        &table,
        300,
        &SetPredicate::even(),
        &plan,
        4,
        Budget::default(),
    )
    .unwrap();
    println!(
        "n = 300 sampled: E[X] = {:.3} +- {:.3}, E[Y] = {:.3}, mean Y/X = {:.4}",
        r.stats.x_mean, r.stats.x_mean_se, r.stats.y_mean, r.stats.ratio_mean
    );
}
