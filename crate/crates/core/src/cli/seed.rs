//! Hex encoding of seeds: one width-padded big-endian word per element.

use crate::field::{Field, FieldContext};

use super::CliError;

/// Hex digits per element.
pub fn hex_width(field: &FieldContext) -> usize {
    2 * field.byte_width()
}

pub fn encode_element(field: &FieldContext, x: u64) -> String {
    format!("{x:0width$x}", width = hex_width(field))
}

/// Elements joined by `,`.
pub fn encode_seed(field: &FieldContext, seed: &[u64]) -> String {
    seed.iter()
        .map(|&x| encode_element(field, x))
        .collect::<Vec<_>>()
        .join(",")
}

/// Parses elements separated by commas or whitespace. A token longer than
/// one element is split into consecutive width-padded elements.
pub fn decode_seed(field: &FieldContext, text: &str) -> Result<Vec<u64>, CliError> {
    let width = hex_width(field);
    let mut out = Vec::new();
    for token in text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
    {
        let token = token.strip_prefix("0x").unwrap_or(token);
        let chunks: Vec<&str> = if token.len() > width {
            if token.len() % width != 0 {
                return Err(CliError::Config(format!(
                    "seed token `{token}` is not a whole number of {width}-digit elements"
                )));
            }
            (0..token.len())
                .step_by(width)
                .map(|i| &token[i..i + width])
                .collect()
        } else {
            vec![token]
        };
        for chunk in chunks {
            let x = u64::from_str_radix(chunk, 16)
                .map_err(|e| CliError::Config(format!("seed element `{chunk}`: {e}")))?;
            out.push(
                field
                    .check(x)
                    .map_err(|e| CliError::Config(e.to_string()))?,
            );
        }
    }
    Ok(out)
}
