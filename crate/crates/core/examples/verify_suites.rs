//! Runs the invariant suites behind `sl2qp verify` at a small scale.

use sl2qp::padic::{Prime, DEFAULT_PRECISION};
use sl2qp::verify::{run_verify, Suite};

fn main() -> sl2qp::Result<()> {
    let primes = [2u64, 3, 5].map(|p| Prime::new(p).unwrap());
    let report = run_verify(Suite::All, &primes, 200, 7, DEFAULT_PRECISION)?;
    for s in &report.results {
        println!(
            "{:<12} p = {:<2} checked {:>5}, counterexamples {}",
            s.suite.to_string(),
            s.p,
            s.checked,
            s.counterexamples
        );
    }
    println!("total counterexamples: {}", report.counterexamples());
    Ok(())
}
