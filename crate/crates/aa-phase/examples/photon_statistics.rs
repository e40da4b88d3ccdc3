//! The initial-state families and their classification by Mandel Q.
//!
//! Run:
//!   cargo run --release -p aa-phase --example photon_statistics

use aa_phase::statistics::{amplitudes, mandel_q, mean_photon, StatisticsSpec};

fn classify(q: f64) -> &'static str {
    if q < -1e-10 {
        "sub-Poissonian"
    } else if q > 1e-10 {
        "super-Poissonian"
    } else {
        "Poissonian"
    }
}

fn main() {
    let tail_tol = 1e-12;
    let families = [
        (
            "binomial(N=10, p=0.3)",
            StatisticsSpec::Binomial {
                trials: 10,
                prob: 0.3,
                theta: 0.0,
            },
        ),
        (
            "coherent(|alpha|^2 = 3)",
            StatisticsSpec::Coherent {
                alpha_mag: 3.0f64.sqrt(),
                theta: 0.0,
            },
        ),
        (
            "negative-binomial(W=3, q=0.5)",
            StatisticsSpec::NegativeBinomial {
                w: 3,
                q: 0.5,
                theta: 0.0,
            },
        ),
    ];

    eprintln!("=== Photon statistics families (tail tolerance {tail_tol:.0e}) ===\n");
    println!("# family\tdim\ttail_mass\tmean_photon\tmandel_q\tclass");
    for (name, spec) in &families {
        let (state, tail) = amplitudes(spec, tail_tol).unwrap();
        let mean = mean_photon(&state);
        let q = mandel_q(&state).unwrap();
        println!(
            "{name}\t{}\t{:.3e}\t{mean:.12}\t{q:.12}\t{}",
            tail.dim_used,
            tail.tail_mass,
            classify(q)
        );
    }

    // Number distributions side by side.
    println!("\n# n\tbinomial |C_n|^2\tcoherent |C_n|^2\tnegative-binomial |C_n|^2");
    let states: Vec<_> = families
        .iter()
        .map(|(_, spec)| amplitudes(spec, tail_tol).unwrap().0)
        .collect();
    for n in 0..12 {
        let column = |k: usize| {
            if n < states[k].dim() {
                format!("{:.9}", states[k].amplitude(n).norm_sqr())
            } else {
                "0".to_string()
            }
        };
        println!("{n}\t{}\t{}\t{}", column(0), column(1), column(2));
    }

    // The phase ramp theta moves amplitude phases only, never |C_n|^2.
    let ramped = StatisticsSpec::NegativeBinomial {
        w: 3,
        q: 0.5,
        theta: 1.1,
    };
    let (ramped_state, _) = amplitudes(&ramped, tail_tol).unwrap();
    let base = &states[2];
    let max_pmf_shift = (0..base.dim().min(ramped_state.dim()))
        .map(|n| (base.amplitude(n).norm_sqr() - ramped_state.amplitude(n).norm_sqr()).abs())
        .fold(0.0f64, f64::max);
    println!(
        "\n# theta ramp leaves the distribution unchanged: max |C_n|^2 shift = {max_pmf_shift:e}"
    );
}
