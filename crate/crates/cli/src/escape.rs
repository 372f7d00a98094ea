//! `\xNN` escapes for byte patterns on the command line and in output.

use anyhow::{bail, Result};

/// Decodes `\xNN` (two hex digits) and `\\`; other characters are taken as
/// their UTF-8 bytes.
pub fn unescape(s: &str) -> Result<Vec<u8>> {
    let bytes = s.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] != b'\\' {
            out.push(bytes[i]);
            i += 1;
            continue;
        }
        match bytes.get(i + 1) {
            Some(b'\\') => {
                out.push(b'\\');
                i += 2;
            }
            Some(b'x') => {
                let hex = s.get(i + 2..i + 4).filter(|h| h.bytes().all(|b| b.is_ascii_hexdigit()));
                let Some(hex) = hex else {
                    bail!("bad escape in {s:?}: expected two hex digits after \\x");
                };
                out.push(u8::from_str_radix(hex, 16)?);
                i += 4;
            }
            _ => bail!("bad escape in {s:?}: use \\xNN or \\\\"),
        }
    }
    Ok(out)
}

/// Printable ASCII as is, everything else (and the backslash) as `\xNN`.
pub fn escape(bytes: &[u8]) -> String {
    bytes.iter().map(|&b| xbwtrie::entropy::symbol_name(b)).collect()
}
