//! Capacity of unit-modulus signalling in complex AWGN against the Gaussian
//! codebook, including the low-SNR regime where the two coincide.
//!
//! `cargo run --release --example wyner_capacity`

use mrs_lab::receiver::{mrs_rate_gaussian, mrs_rate_wpc, mrs_rate_wpc_nats, wyner_pdf_mass};

fn main() -> mrs_lab::Result<()> {
    println!(
        "{:>10} {:>10} {:>10} {:>8} {:>12}",
        "SNR", "unit-mod", "Gaussian", "ratio", "pdf mass-1"
    );
    for db in (-30..=30).step_by(5) {
        let g = 10f64.powf(db as f64 / 10.0);
        let wpc = mrs_rate_wpc(g)?;
        let gauss = mrs_rate_gaussian(g);
        let mass = wyner_pdf_mass(g, 1e-12)?;
        println!(
            "{db:>7} dB {wpc:>10.5} {gauss:>10.5} {:>8.4} {:>12.1e}",
            wpc / gauss,
            mass - 1.0
        );
    }
    let small = 0.01;
    println!(
        "R(γ)/γ at γ = {small}: {:.4} (nats)",
        mrs_rate_wpc_nats(small)? / small
    );
    Ok(())
}
