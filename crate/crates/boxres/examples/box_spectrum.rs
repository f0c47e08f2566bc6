//! Discrete spectrum of the model potential in a spherical box, with the
//! exactly solvable cases as cross-checks.
//!
//! Run: cargo run --release --example box_spectrum

use std::f64::consts::PI;

use boxres::potential::PotentialSpec;
use boxres::solver::{list_eigenvalues, solve_eigenvalue, IntegrationParams};

fn main() -> boxres::Result<()> {
    // model potential 7.5 r^2 e^-r - 1/r in a box of 10 bohr
    let spec = PotentialSpec::model(0);
    let params = IntegrationParams::new(1e-4, 10.0)?;
    let states = list_eigenvalues(&spec, &params, 6.0, 32)?;
    println!("model potential, l = 0, box R = 10:");
    println!("{:>4} {:>16}", "n", "E");
    for s in &states {
        println!("{:>4} {:>16.10}", s.n, s.energy);
    }

    // free particle: E_n = (n+1)^2 pi^2 / (2 R^2)
    let free = PotentialSpec::new(0.0, 0.0, 0);
    let free_states = list_eigenvalues(&free, &params, 1.0, 8)?;
    println!("\nfree particle levels vs (n+1)^2 pi^2/(2R^2):");
    for s in &free_states {
        let exact = ((s.n + 1) * (s.n + 1)) as f64 * PI * PI / 200.0;
        println!(
            "  n = {}: {:.12}  exact {:.12}  rel {:.1e}",
            s.n,
            s.energy,
            exact,
            (s.energy - exact).abs() / exact
        );
    }

    // hydrogen ground state in a 30 bohr box
    let hydrogen = PotentialSpec::new(0.0, -1.0, 0);
    let h_params = IntegrationParams::new(1e-4, 30.0)?;
    let ground = solve_eigenvalue(&hydrogen, &h_params, 0, (-0.6, -0.4))?;
    println!(
        "\nhydrogen 1s in a 30 bohr box: E = {:.10} (exact -0.5)",
        ground.energy
    );
    Ok(())
}
