//! Deterministic JSON emission: insertion-ordered objects and a fixed
//! 12-significant-digit float format, so identical inputs produce
//! byte-identical reports.

/// JSON value with ordered object keys and preformatted numbers.
#[derive(Debug, Clone)]
pub enum Json {
    Null,
    Bool(bool),
    Num(String),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

impl Json {
    pub fn num(x: f64) -> Json {
        Json::Num(sig12(x))
    }

    pub fn int(x: i64) -> Json {
        Json::Num(x.to_string())
    }

    pub fn str(s: impl Into<String>) -> Json {
        Json::Str(s.into())
    }

    pub fn obj(fields: Vec<(&str, Json)>) -> Json {
        Json::Obj(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }

    pub fn write(&self, out: &mut String, indent: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Num(s) => out.push_str(s),
            Json::Str(s) => {
                out.push('"');
                for c in s.chars() {
                    match c {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        '\n' => out.push_str("\\n"),
                        '\r' => out.push_str("\\r"),
                        '\t' => out.push_str("\\t"),
                        c if (c as u32) < 0x20 => {
                            out.push_str(&format!("\\u{:04x}", c as u32))
                        }
                        c => out.push(c),
                    }
                }
                out.push('"');
            }
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
                    out.push_str(&"  ".repeat(indent + 1));
                    item.write(out, indent + 1);
                }
                out.push('\n');
                out.push_str(&"  ".repeat(indent));
                out.push(']');
            }
            Json::Obj(fields) => {
                if fields.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push('{');
                for (i, (k, v)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    out.push_str(&"  ".repeat(indent + 1));
                    Json::Str(k.clone()).write(out, indent + 1);
                    out.push_str(": ");
                    v.write(out, indent + 1);
                }
                out.push('\n');
                out.push_str(&"  ".repeat(indent));
                out.push('}');
            }
        }
    }

    pub fn to_string_pretty(&self) -> String {
        let mut s = String::new();
        self.write(&mut s, 0);
        s.push('\n');
        s
    }
}

/// Formats with 12 significant digits, trailing zeros trimmed, positional
/// notation for moderate magnitudes and e-notation otherwise.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        // infinities appear only in interval echoes, serialized as strings
        return if x > 0.0 { "1e400".into() } else { "-1e400".into() };
    }
    let neg = x < 0.0;
    let formatted = format!("{:.11e}", x.abs());
    let (mant, exp) = formatted.split_once('e').expect("e-format");
    let exp: i32 = exp.parse().expect("exponent");
    let digits: String = mant.chars().filter(|c| *c != '.').collect();
    let trimmed = digits.trim_end_matches('0');
    let digits = if trimmed.is_empty() { "0" } else { trimmed };

    let body = if (0..15).contains(&exp) {
        let point = exp as usize + 1;
        if digits.len() <= point {
            format!("{}{}", digits, "0".repeat(point - digits.len()))
        } else {
            format!("{}.{}", &digits[..point], &digits[point..])
        }
    } else if (-5..0).contains(&exp) {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    } else if digits.len() == 1 {
        format!("{digits}e{exp}")
    } else {
        format!("{}.{}e{}", &digits[..1], &digits[1..], exp)
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting() {
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(0.5), "0.5");
        assert_eq!(sig12(1.0), "1");
        assert_eq!(sig12(-2.0), "-2");
        assert_eq!(sig12(128.0), "128");
        assert_eq!(sig12(0.0001), "0.0001");
        assert_eq!(sig12(1e-7), "1e-7");
        assert_eq!(sig12(1.25e-7), "1.25e-7");
        assert_eq!(sig12(std::f64::consts::TAU), "6.28318530718");
        assert_eq!(sig12(1e20), "1e20");
    }

    #[test]
    fn twelve_digit_round_trip_accuracy() {
        for &x in &[std::f64::consts::PI, 0.2973017787506803, 7.211853, 1.0 / 3.0] {
            let back: f64 = sig12(x).parse().unwrap();
            assert!((back - x).abs() <= 1e-11 * x.abs());
        }
    }

    #[test]
    fn object_order_is_insertion_order() {
        let j = Json::obj(vec![
            ("zebra", Json::int(1)),
            ("alpha", Json::str("x")),
            ("mid", Json::Null),
        ]);
        let s = j.to_string_pretty();
        let zi = s.find("zebra").unwrap();
        let ai = s.find("alpha").unwrap();
        assert!(zi < ai);
    }

    #[test]
    fn string_escaping() {
        let j = Json::str("a\"b\\c\nd");
        assert_eq!(j.to_string_pretty(), "\"a\\\"b\\\\c\\nd\"\n");
    }
}
