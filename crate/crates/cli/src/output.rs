//! Every printed number parses back to the same `f64`: CSV cells carry 17
//! significant digits and JSON uses the shortest round-trip form.

use schwarz_core::C64;
use serde_json::{Number, Value};

pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Non-finite values become `null`.
pub fn real(x: f64) -> Value {
    Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

/// `[re, im]`.
pub fn complex(z: C64) -> Value {
    Value::Array(vec![real(z.re), real(z.im)])
}

pub fn optional_complex(z: Option<C64>) -> Value {
    z.map(complex).unwrap_or(Value::Null)
}

pub fn to_pretty(v: &Value) -> String {
    // serialising a Value cannot fail
    serde_json::to_string_pretty(v).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_to_the_last_bit() {
        for x in [5.0 / 6.0, -1.0 / 3.0, 1e-300, 123456.789, std::f64::consts::PI] {
            let text = serde_json::to_string(&real(x)).unwrap();
            assert_eq!(text.parse::<f64>().unwrap().to_bits(), x.to_bits());
            assert_eq!(fmt_real(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
        assert_eq!(real(f64::NAN), Value::Null);
    }
}
