use std::io::{self, Write};

use serde_json::Value;

use crate::Format;

fn tsv_cell(v: &Value) -> String {
    let s = match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    s.replace(['\t', '\n'], " ")
}

/// JSON-lines, or TSV with a header line whenever the field set changes.
pub fn write_records<W: Write>(w: &mut W, records: &[Value], format: Format) -> io::Result<()> {
    let mut header: Option<Vec<String>> = None;
    for rec in records {
        match format {
            Format::Json => writeln!(w, "{rec}")?,
            Format::Tsv => {
                let Value::Object(m) = rec else {
                    writeln!(w, "{}", tsv_cell(rec))?;
                    continue;
                };
                let keys: Vec<String> = m.keys().cloned().collect();
                if header.as_ref() != Some(&keys) {
                    writeln!(w, "#{}", keys.join("\t"))?;
                    header = Some(keys);
                }
                let cells: Vec<String> = m.values().map(tsv_cell).collect();
                writeln!(w, "{}", cells.join("\t"))?;
            }
        }
    }
    Ok(())
}
