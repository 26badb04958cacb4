use std::path::Path;

use dynproof::graphs::{io, Graph};
use dynproof::ParseError;

/// Resolves `cycleN`, `completeN`, `kN`, `petersen` or a DIMACS/JSON file.
pub fn resolve(spec: &str) -> Result<Graph, crate::CliError> {
    let lower = spec.to_ascii_lowercase();
    if lower == "petersen" {
        return Ok(Graph::petersen());
    }
    for (prefix, build) in [
        ("cycle", Graph::cycle as fn(usize) -> Graph),
        ("complete", Graph::complete),
        ("k", Graph::complete),
    ] {
        if let Some(rest) = lower.strip_prefix(prefix) {
            if let Ok(n) = rest.parse::<usize>() {
                if prefix == "cycle" && n < 3 {
                    return Err(ParseError::Graph(format!("cycle needs n >= 3, got {n}")).into());
                }
                return Ok(build(n));
            }
        }
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(ParseError::Graph(format!("{spec:?} is neither a named graph nor a file")).into());
    }
    let text = std::fs::read_to_string(path)?;
    Ok(io::parse_any(&text)?)
}
