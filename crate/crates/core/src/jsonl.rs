//! Line-delimited JSON records in the `{"key": value, "k2": [a, b]}` style.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};

/// Compact JSON with a space after every `:` and `,`.
#[derive(Debug, Default, Clone, Copy)]
pub struct SpacedFormatter;

impl Formatter for SpacedFormatter {
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            writer.write_all(b", ")
        }
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            writer.write_all(b", ")
        }
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        writer.write_all(b": ")
    }
}

/// One record, without the trailing newline.
pub fn to_line<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, SpacedFormatter);
    value.serialize(&mut ser).expect("in-memory serialization of plain records cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn spacing() {
        let v = json!({"a": 1, "b": [true, "x"], "c": {"d": null}, "e": []});
        assert_eq!(to_line(&v), r#"{"a": 1, "b": [true, "x"], "c": {"d": null}, "e": []}"#);
    }

    #[test]
    fn parses_back() {
        let v = json!({"pattern": "011", "label": 0});
        let back: serde_json::Value = serde_json::from_str(&to_line(&v)).unwrap();
        assert_eq!(back, v);
    }
}
