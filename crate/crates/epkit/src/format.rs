//! Deterministic output formatting: JSON with fixed-width scientific
//! floats and the CSV dialect used by all commands (comma separator, "."
//! decimal point, mandatory header, LF line endings).
//!
//! Floats are printed with 17 significant digits so golden files
//! round-trip bit-exactly.

use std::io::{self, Write};

use epkit_core::complex2::{Mat2, Vec2, C64};
use serde::Serialize;

/// Formats a float with 17 significant digits in scientific notation.
pub fn sci(value: f64) -> String {
    format!("{value:.16e}")
}

struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes to compact JSON with deterministic float formatting and a
/// trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, serde_json::Error> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serializer emits UTF-8"))
}

/// Complex number as a `[re, im]` pair for JSON output.
pub fn complex(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

/// 2-vector as a pair of `[re, im]` pairs.
pub fn vec2(v: &Vec2) -> [[f64; 2]; 2] {
    [complex(v.0[0]), complex(v.0[1])]
}

/// 2x2 matrix as rows of `[re, im]` pairs.
pub fn mat2(m: &Mat2) -> [[[f64; 2]; 2]; 2] {
    [
        [complex(m.0[0][0]), complex(m.0[0][1])],
        [complex(m.0[1][0]), complex(m.0[1][1])],
    ]
}

/// Incremental CSV writer for the fixed dialect.
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn with_header(columns: &[&str]) -> Self {
        let mut buf = String::new();
        buf.push_str(&columns.join(","));
        buf.push('\n');
        Csv { buf }
    }

    /// Appends one row of float cells.
    pub fn row(&mut self, cells: &[f64]) {
        let mut first = true;
        for &cell in cells {
            if !first {
                self.buf.push(',');
            }
            first = false;
            self.buf.push_str(&sci(cell));
        }
        self.buf.push('\n');
    }

    /// Appends a row with a trailing integer cell (flags).
    pub fn row_with_flag(&mut self, cells: &[f64], flag: u8) {
        for &cell in cells {
            self.buf.push_str(&sci(cell));
            self.buf.push(',');
        }
        self.buf.push_str(&flag.to_string());
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}
