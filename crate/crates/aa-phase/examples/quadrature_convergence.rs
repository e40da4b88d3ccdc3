//! Convergence of the finite-difference phase quadrature on a dt-halving
//! ladder, against the closed form and against the exact spectral
//! prediction of the discrete integral.
//!
//! Run:
//!   cargo run --release -p aa-phase --example quadrature_convergence

use aa_phase::evolution::decompose;
use aa_phase::fock::FockState;
use aa_phase::hamiltonian::{build_hamiltonian, lambda_and_period, QesParams};
use aa_phase::oracles::predicted_quadrature_phase;
use aa_phase::phase::{geometric_phase_closed, geometric_phase_quadrature};
use num_complex::Complex64;

fn main() {
    // (|0> + |2>)/sqrt(2) under the pure band Hamiltonian A_0 = 1:
    // beta_closed = 2*pi (1 + sqrt(2)).
    let params = QesParams::new(vec![0.0], vec![1.0]).unwrap();
    let dim = 16;
    let inv = Complex64::new(1.0 / 2.0f64.sqrt(), 0.0);
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    amps[0] = inv;
    amps[2] = inv;
    let psi = FockState::from_amplitudes(amps).unwrap();

    let h = build_hamiltonian(&params, dim).unwrap();
    let sd = decompose(&h).unwrap();
    let schedule = lambda_and_period(&params).unwrap();
    let beta_closed = geometric_phase_closed(&params, &psi).unwrap();

    eprintln!("=== Quadrature convergence ===");
    eprintln!("beta_closed = {beta_closed:.15}\n");

    println!("# steps\t|beta_quad - beta_closed|\tratio\t|beta_quad - prediction|");
    let mut previous: Option<f64> = None;
    let mut points = Vec::new();
    for exponent in 5..=12 {
        let steps = 1usize << exponent; // 32 .. 4096
        let beta_quad = geometric_phase_quadrature(&sd, &psi, &schedule, steps).unwrap();
        let predicted = predicted_quadrature_phase(&sd, &psi, &schedule, steps).unwrap();
        let gap = (beta_quad - beta_closed).abs();
        let ratio = previous.map_or("-".to_string(), |p: f64| format!("{:.3}", p / gap));
        println!(
            "{steps}\t{gap:.6e}\t{ratio}\t{:.3e}",
            (beta_quad - predicted).abs()
        );
        previous = Some(gap);
        let dt = schedule.period() / steps as f64;
        points.push((dt.ln(), gap.ln()));
    }

    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let order = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum::<f64>()
        / points.iter().map(|p| (p.0 - mean_x).powi(2)).sum::<f64>();
    println!("\n# least-squares convergence order: {order:.4}  (central differences: 2)");
    println!("# the prediction column isolates pipeline roundoff from the O(dt^2) scheme error");
}
