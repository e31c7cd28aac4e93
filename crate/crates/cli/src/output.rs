//! Report serialization: compact JSON with every float printed to 17
//! significant digits, complex values as `{"re", "im"}`, and plain CSV.

use std::io::{self, Write};

use graph_zeta::Complex64;
use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::{json, Value};

struct ExactFloats;

impl Formatter for ExactFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{}", float(value))
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
}

/// `{:.16e}`, which is 17 significant digits and round-trips exactly.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn complex(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn complexes(zs: &[Complex64]) -> Value {
    Value::Array(zs.iter().map(|&z| complex(z)).collect())
}

pub enum Report {
    Json(Value),
    Csv(String),
    /// Pre-formatted text, written as is (orbit JSON lines).
    Raw(String),
}

impl Report {
    pub fn write(&self, mut w: impl Write) -> io::Result<()> {
        match self {
            Report::Json(v) => {
                let mut ser = serde_json::Serializer::with_formatter(&mut w, ExactFloats);
                v.serialize(&mut ser).map_err(io::Error::other)?;
                writeln!(w)
            }
            Report::Csv(s) | Report::Raw(s) => w.write_all(s.as_bytes()),
        }
    }
}

/// Builds CSV text row by row; floats use the same 17-digit format as JSON.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv {
            text: format!("{}\n", header.join(",")),
        }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> Report {
        Report::Csv(self.text)
    }
}
