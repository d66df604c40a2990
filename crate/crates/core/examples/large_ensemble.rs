//! Full statistics for a 10⁴-atom half-excited ensemble at 1000 time points.

use std::time::Instant;

use dicke_core::{DickeState, Process};

fn main() -> Result<(), dicke_core::Error> {
    let n_atoms: i64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(10_000);
    let state = DickeState::from_excited_count(n_atoms, n_atoms / 2, 0.0)?;

    let start = Instant::now();
    let process = Process::new(&state)?;
    println!("decomposition (d = {}): {:.2?}", state.dimension(), start.elapsed());

    let taus: Vec<f64> = (0..1000).map(|i| i as f64 / 999.0).collect();
    let start = Instant::now();
    let stats: Vec<_> = process.distributions(&taus).iter().map(dicke_core::moments).collect();
    println!("1000 time points: {:.2?}", start.elapsed());

    let worst = process
        .distributions(&[0.37, 1.0])
        .iter()
        .map(|d| (d.total() - 1.0).abs())
        .fold(0.0, f64::max);
    let q_min = stats.iter().filter_map(|s| s.mandel_q).fold(f64::INFINITY, f64::min);
    println!("min Q = {q_min:.6}, worst norm defect = {worst:.2e}");
    Ok(())
}
