use icx_core::digit_bounds::certify_base;
use icx_core::expr::binary_expansion;
use icx_core::synth::synthesize;
use icx_core::table::build_table;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};

fn main() {
    let t = build_table(100_000).unwrap();
    let db = certify_base(24, &t).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut violations = 0u64;
    let mut max_excess = 0i64;
    let mut sum_margin = 0f64;
    let total = 20_000;
    for _ in 0..total {
        let n: u64 = rng.gen_range(1_000_000..=1_000_000_000_000);
        let nb = BigUint::from(n);
        let res = synthesize(&nb, &db, 1..64, &t).unwrap();
        let bin = binary_expansion(&nb).unwrap().ones();
        let excess = res.predicted_cost as i64 - bin as i64;
        sum_margin += excess as f64;
        if excess > 0 { violations += 1; max_excess = max_excess.max(excess); }
    }
    println!("{violations}/{total} violations, max excess {max_excess}, mean margin {:.2}", sum_margin / total as f64);
}
