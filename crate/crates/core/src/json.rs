//! JSON output with every float written as `{:.16e}` (17 significant digits).

use std::io;

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};

/// Version tag of every JSON document the crate writes.
pub const SCHEMA: &str = "quadcalc/1";

struct Exact<F>(F);

macro_rules! forward {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
            self.0.$name(w $(, $arg)*)
        })*
    };
}

impl<F: Formatter> Formatter for Exact<F> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(w, "{value:.16e}")
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    forward! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        end_object_key();
        begin_object_value();
        end_object_value();
    }
}

fn write<T: Serialize + ?Sized, F: Formatter>(value: &T, formatter: F) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Exact(formatter));
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// Pretty-printed JSON.
pub fn to_string<T: Serialize + ?Sized>(value: &T) -> String {
    write(value, PrettyFormatter::new())
}

pub fn to_string_compact<T: Serialize + ?Sized>(value: &T) -> String {
    write(value, CompactFormatter)
}

#[cfg(test)]
mod tests {
    #[test]
    fn floats_round_trip_with_seventeen_digits() {
        let x = [0.1_f64, -2.5e-300, 1.0 / 3.0];
        let s = super::to_string_compact(&x);
        assert_eq!(s, "[1.0000000000000001e-1,-2.5000000000000000e-300,3.3333333333333331e-1]");
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }
}
