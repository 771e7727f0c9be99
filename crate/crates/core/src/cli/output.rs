//! CSV text helpers, the self-describing header and atomic file output.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use super::CliError;

pub const TOOL: &str = "algossip";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const COMMAND_PREFIX: &str = "# command: ";

/// Formats like C's `%.17g`: 17 significant digits, trailing zeros dropped,
/// scientific notation below `1e-4` and from `1e17` up.
pub fn g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let m = trim_zeros(mantissa.to_string());
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Escapes `%`, whitespace and control characters so that an argument
/// survives a space-joined header line.
pub fn encode_arg(arg: &str) -> String {
    let mut out = String::with_capacity(arg.len());
    for c in arg.chars() {
        if c == '%' || c.is_whitespace() || c.is_control() {
            let mut buf = [0u8; 4];
            for b in c.encode_utf8(&mut buf).bytes() {
                write!(out, "%{b:02X}").expect("writing to a String");
            }
        } else {
            out.push(c);
        }
    }
    out
}

pub fn decode_arg(arg: &str) -> Result<String, CliError> {
    let bytes = arg.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'%' {
            let hex = arg
                .get(i + 1..i + 3)
                .and_then(|h| u8::from_str_radix(h, 16).ok())
                .ok_or_else(|| CliError::Usage(format!("bad escape in header argument {arg:?}")))?;
            out.push(hex);
            i += 3;
        } else {
            out.push(bytes[i]);
            i += 1;
        }
    }
    String::from_utf8(out).map_err(|_| CliError::Usage(format!("header argument {arg:?} is not UTF-8")))
}

/// Header echoing the tool version and the canonical command, followed by
/// any extra comment lines.
pub fn header(argv: &[String], notes: &[String]) -> String {
    let mut s = format!("# {TOOL} {VERSION}\n{COMMAND_PREFIX}");
    let encoded: Vec<String> = argv.iter().map(|a| encode_arg(a)).collect();
    s.push_str(&encoded.join(" "));
    s.push('\n');
    for note in notes {
        s.push_str("# ");
        s.push_str(note);
        s.push('\n');
    }
    s
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.flush().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_matches_printf() {
        // reference strings from C printf("%.17g")
        let cases = [
            (0.1, "0.10000000000000001"),
            (1.0, "1"),
            (2.5, "2.5"),
            (1.0 / 3.0, "0.33333333333333331"),
            (123456.0, "123456"),
            (1e17, "1e+17"),
            (1.5e-7, "1.4999999999999999e-07"),
            (0.0001, "0.0001"),
            (-2.0, "-2"),
            (12345678901234567.0, "12345678901234568"),
        ];
        for (x, want) in cases {
            assert_eq!(g17(x), want, "{x}");
        }
        assert_eq!(g17(0.0), "0");
    }

    #[test]
    fn arg_escaping_round_trips() {
        for a in ["plain", "with space", "100%", "tab\there", "ünï"] {
            let e = encode_arg(a);
            assert!(!e.contains(' ') && !e.contains('\t'));
            assert_eq!(decode_arg(&e).unwrap(), a);
        }
        assert!(decode_arg("%G1").is_err());
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.csv");
        write_atomic(&p, "a\n").unwrap();
        write_atomic(&p, "b\n").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "b\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
        assert!(matches!(write_atomic(&dir.path().join("no/such/x.csv"), "a"), Err(CliError::Io(_))));
    }
}
