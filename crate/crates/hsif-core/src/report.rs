//! Deterministic report serialization.
//!
//! Reports are emitted with sorted object keys and fixed `%.12e` float
//! formatting so that identical analyses produce byte-identical files.

use std::collections::BTreeMap;
use std::fmt::Write;

/// `%.12e`-style formatting (two-digit signed exponent).
pub fn fmt_e12(x: f64) -> String {
    if x == 0.0 {
        return "0.000000000000e+00".into();
    }
    let s = format!("{:.12e}", x);
    let (mant, exp) = s.split_once('e').expect("exponential format");
    let e: i32 = exp.parse().expect("integer exponent");
    format!("{mant}e{:+03}", e)
}

/// Minimal JSON value with deterministic emission.
#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(BTreeMap<String, Json>),
}

impl Json {
    pub fn obj() -> BTreeMap<String, Json> {
        BTreeMap::new()
    }

    pub fn of_str(s: impl Into<String>) -> Json {
        Json::Str(s.into())
    }

    /// Complex value as a two-field object.
    pub fn complex(re: f64, im: f64) -> Json {
        let mut o = Json::obj();
        o.insert("re".into(), Json::Num(re));
        o.insert("im".into(), Json::Num(im));
        Json::Obj(o)
    }

    pub fn to_string_pretty(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => {
                write!(out, "{i}").unwrap();
            }
            Json::Num(x) => out.push_str(&fmt_e12(*x)),
            Json::Str(s) => write_escaped(out, s),
            Json::Arr(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    push_indent(out, indent + 1);
                    item.write(out, indent + 1);
                }
                out.push('\n');
                push_indent(out, indent);
                out.push(']');
            }
            Json::Obj(map) => {
                if map.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push('{');
                for (i, (key, value)) in map.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    push_indent(out, indent + 1);
                    write_escaped(out, key);
                    out.push_str(": ");
                    value.write(out, indent + 1);
                }
                out.push('\n');
                push_indent(out, indent);
                out.push('}');
            }
        }
    }
}

fn push_indent(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

fn write_escaped(out: &mut String, s: &str) {
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                write!(out, "\\u{:04x}", c as u32).unwrap();
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting() {
        assert_eq!(fmt_e12(0.5), "5.000000000000e-01");
        assert_eq!(fmt_e12(1.0), "1.000000000000e+00");
        assert_eq!(fmt_e12(-2.0 / 3.0), "-6.666666666667e-01");
        assert_eq!(fmt_e12(0.0), "0.000000000000e+00");
        assert_eq!(fmt_e12(1.5e-12), "1.500000000000e-12");
        assert_eq!(fmt_e12(3.0e120), "3.000000000000e+120");
    }

    #[test]
    fn emission_is_sorted_and_stable() {
        let mut o = Json::obj();
        o.insert("zeta".into(), Json::Int(1));
        o.insert("alpha".into(), Json::Num(0.25));
        o.insert("list".into(), Json::Arr(vec![Json::Bool(true), Json::of_str("x\"y")]));
        let v = Json::Obj(o);
        let a = v.to_string_pretty();
        let b = v.to_string_pretty();
        assert_eq!(a, b);
        let alpha = a.find("alpha").unwrap();
        let zeta = a.find("zeta").unwrap();
        assert!(alpha < zeta);
        assert!(a.contains("2.500000000000e-01"));
        assert!(a.contains("\\\""));
    }
}
