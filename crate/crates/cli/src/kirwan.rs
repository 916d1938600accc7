use vortex_core::qh::{kirwan_q_lambda, EquivariantElement};

use crate::CliError;

pub fn run(expression: &str, n: usize) -> Result<(), CliError> {
    if n < 2 {
        return Err(CliError::input("the quotient ring needs N ≥ 2"));
    }
    let element = EquivariantElement::parse(expression)?;
    println!("{}", kirwan_q_lambda(&element, n));
    Ok(())
}
