use std::io::Write;
use std::path::Path;

use hyperstokes::num::decimal;
use hyperstokes::Complex;
use rug::Float;
use serde_json::{json, Value};

pub fn float(x: &Float, digits: u32) -> Value {
    Value::String(decimal(x, digits as usize))
}

pub fn complex(z: &Complex, digits: u32) -> Value {
    json!({ "re": float(&z.re, digits), "im": float(&z.im, digits) })
}

pub fn opt_complex(z: Option<&Complex>, digits: u32) -> Value {
    z.map_or(Value::Null, |z| complex(z, digits))
}

/// Writes `text` to the file, or to stdout when no path is given.
pub fn emit(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
