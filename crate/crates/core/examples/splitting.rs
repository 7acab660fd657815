//! Deformed level ladder, the first-excited-shell splitting, and its inverse.
//!
//! Run with `cargo run --example splitting`.

use qhydrogen::{
    fit_q, pauli_spectrum, splitting, AtomConfig, EnergyUnit, QParam, ReducedMass, DEFAULT_FIT_TOL,
};

fn main() -> qhydrogen::Result<()> {
    // Deformed j-shell ladder: E/E0 = 1/(4[j][j+1] + 1) for 2j = 0..=4.
    let q = QParam::real(1.004)?;
    for level in pauli_spectrum(4, &q)? {
        println!("2j={}  E/E0 = {:.12}", level.two_j, level.energy_ratio);
    }

    // Splitting of the first excited shell in wavenumbers, and its inverse.
    let atom = AtomConfig::new(1, ReducedMass::Hydrogen)?;
    let s = splitting(&q, &atom, EnergyUnit::Wavenumber)?;
    let fit = fit_q(
        s.delta_exact.abs(),
        EnergyUnit::Wavenumber,
        &atom,
        DEFAULT_FIT_TOL,
    )?;
    println!(
        "delta = {:.9} cm^-1 -> q = {:.12}",
        s.delta_exact, fit.q_fitted
    );
    Ok(())
}
