//! Deterministic report formatting: fixed significant digits, stable CSV.

use std::fs;
use std::path::Path;

use crate::CliError;

/// Formats to six significant digits as a plain decimal, never scientific.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0.00000".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Signed percent with two decimals, for gate errors on stdout.
pub fn percent(x: f64) -> String {
    format!("{:+.2}%", x * 100.0)
}

/// First comment line of every CSV: tool version plus scenario digest.
pub fn stamp(scenario_hash: &str) -> String {
    format!(
        "dercost {} scenario_sha256={scenario_hash}",
        env!("CARGO_PKG_VERSION")
    )
}

/// Prints a finished report; a closed pipe (e.g. `| head`) ends the run
/// quietly instead of panicking.
pub fn emit(text: &str) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(text.as_bytes()).is_err() || stdout.flush().is_err() {
        std::process::exit(0);
    }
}

/// Writes comments, one header line, then rows; `\n` endings throughout.
pub fn write_csv(
    path: &Path,
    comments: &[String],
    header: &str,
    rows: &[String],
) -> Result<(), CliError> {
    let mut text = String::new();
    for comment in comments {
        text.push_str("# ");
        text.push_str(comment);
        text.push('\n');
    }
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    fs::write(path, text)
        .map_err(|err| CliError::Io(format!("cannot write {}: {err}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig6_spans_magnitudes() {
        assert_eq!(sig6(0.2565), "0.256500");
        assert_eq!(sig6(0.3375), "0.337500");
        assert_eq!(sig6(-0.047384652612962522), "-0.0473847");
        assert_eq!(sig6(35428.780454), "35428.8");
        assert_eq!(sig6(123456.7), "123457");
        assert_eq!(sig6(0.0), "0.00000");
        assert_eq!(sig6(1.0), "1.00000");
    }

    #[test]
    fn percent_is_signed() {
        assert_eq!(percent(-0.047384652612962522), "-4.74%");
        assert_eq!(percent(0.0), "+0.00%");
    }
}
