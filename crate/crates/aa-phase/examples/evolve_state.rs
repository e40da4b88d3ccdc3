//! Exact spectral propagation over one gauge period, with conservation
//! checks and the gauged (single-valued) trajectory.
//!
//! Run:
//!   cargo run --release -p aa-phase --example evolve_state

use aa_phase::evolution::decompose;
use aa_phase::hamiltonian::{build_hamiltonian, lambda_and_period, QesParams};
use aa_phase::statistics::{amplitudes, StatisticsSpec};

fn main() {
    let params = QesParams::new(vec![0.8], vec![0.3, 0.05]).unwrap();
    let spec = StatisticsSpec::Coherent {
        alpha_mag: 1.2,
        theta: 0.4,
    };

    let (state, tail) = amplitudes(&spec, 1e-12).unwrap();
    let dim = state.dim() + params.support_margin();
    let psi0 = state.zero_padded(dim).unwrap();
    let h = build_hamiltonian(&params, dim).unwrap();
    let sd = decompose(&h).unwrap();
    let schedule = lambda_and_period(&params).unwrap();

    eprintln!("=== Spectral propagation ===");
    eprintln!(
        "state dim {} (+{} margin slots), tail mass {:.2e}",
        tail.dim_used,
        params.support_margin(),
        tail.tail_mass
    );
    eprintln!(
        "spectrum: E_min = {:.6}, E_max = {:.6}; lambda = {:.4}, T = {:.6}\n",
        sd.eigenvalues()[0],
        sd.eigenvalues()[dim - 1],
        schedule.lambda(),
        schedule.period()
    );

    let e0 = h.expectation(&psi0).unwrap();
    println!("# t/T\tnorm defect\tenergy drift\t|<psi0|psi(t)>|\tRe <psi0|psi~(t)>");
    let samples = sd.sample_trajectory(&psi0, &schedule, 8).unwrap();
    for sample in &samples {
        let norm_defect = (sample.state.norm() - 1.0).abs();
        let energy_drift = (h.expectation(&sample.state).unwrap() - e0).abs();
        let overlap = psi0.inner(&sample.state).unwrap().norm();
        let gauged_overlap = psi0.inner(&sample.gauged_state).unwrap().re;
        println!(
            "{:.3}\t{norm_defect:.3e}\t{energy_drift:.3e}\t{overlap:.9}\t{gauged_overlap:.9}",
            sample.time / schedule.period()
        );
    }

    // Composition: evolving twice by T/2 is evolving once by T.
    let half = sd.evolve(&psi0, schedule.period() / 2.0).unwrap();
    let twice = sd.evolve(&half, schedule.period() / 2.0).unwrap();
    let once = sd.evolve(&psi0, schedule.period()).unwrap();
    let composition_gap = (0..dim)
        .map(|n| (once.amplitude(n) - twice.amplitude(n)).norm())
        .fold(0.0f64, f64::max);
    println!("\n# composition defect |U(T/2)U(T/2) - U(T)| on this state: {composition_gap:.3e}");
}
