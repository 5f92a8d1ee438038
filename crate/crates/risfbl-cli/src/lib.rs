//! Library side of the command-line tool: config parsing, curve/CSV
//! rendering, the curve pipelines, and the validation suite. The binary in
//! `main.rs` is a thin argument-parsing shell over these modules, and the
//! acceptance tests drive them directly.

pub mod commands;
pub mod config;
pub mod curve;
pub mod validate;

use risfbl_core::PhaseMode;

/// Parses a comma-separated phase-mode list: `perfect`, `unadjusted`, or a
/// quantizer bit count.
pub fn parse_modes(text: &str) -> Result<Vec<PhaseMode>, String> {
    let mut out = Vec::new();
    for item in text.split(',') {
        let item = item.trim();
        match item {
            "perfect" => out.push(PhaseMode::Perfect),
            "unadjusted" => out.push(PhaseMode::Unadjusted),
            _ => match item.parse::<u8>() {
                Ok(b) if (1..=16).contains(&b) => out.push(PhaseMode::Quantized(b)),
                _ => return Err(format!("unknown phase mode `{item}`")),
            },
        }
    }
    if out.is_empty() {
        return Err("empty phase-mode list".into());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_list_parsing() {
        let modes = parse_modes("perfect,1,2,3").unwrap();
        assert_eq!(
            modes,
            vec![
                PhaseMode::Perfect,
                PhaseMode::Quantized(1),
                PhaseMode::Quantized(2),
                PhaseMode::Quantized(3)
            ]
        );
        assert!(parse_modes("perfect,zero").is_err());
        assert!(parse_modes("").is_err());
        assert!(parse_modes("42").is_err());
    }
}
