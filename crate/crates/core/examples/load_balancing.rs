//! Assigning intervals to machines with a k-independent generator and
//! comparing overflow rates against fully random placement.

use kgen::field::FieldContext;
use kgen::generator::Blueprint;
use kgen::loadbalance::{run_baseline, run_experiment, ExperimentConfig, Sweep, Workload};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (m, b) = (8, 16);
    let workload = Workload::Poisson {
        rate: 20.0,
        duration: 2.0,
        horizon: 50.0,
    };
    let tasks = workload.tasks(&mut ChaCha8Rng::seed_from_u64(1))?;
    let (load, time) = Sweep::new(&tasks).max_load();
    println!(
        "{} tasks, at most {load} active at once (t = {time:.2})",
        tasks.len()
    );

    let config = ExperimentConfig {
        m,
        b,
        eps: 0.5,
        repetitions: 2000,
        seed: 7,
    };
    let bp = Blueprint::fft_batch(FieldContext::binary(64)?, m * b)?;
    let ours = run_experiment(&tasks, &config, &bp)?;
    let random = run_baseline(&tasks, &config)?;
    println!(
        "k = {}: overflow in {} of {} runs, frequency {:.4}",
        m * b,
        ours.overflows,
        ours.runs.len(),
        ours.frequency
    );
    println!(
        "fully random: frequency {:.4}, 99% interval [{:.4}, {:.4}]",
        random.frequency, random.wilson.0, random.wilson.1
    );
    let mut csv = Vec::new();
    ours.write_csv(&mut csv)?;
    let text = String::from_utf8(csv)?;
    println!(
        "CSV head:\n{}",
        text.lines().take(3).collect::<Vec<_>>().join("\n")
    );
    Ok(())
}
