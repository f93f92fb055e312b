//! Text encodings shared by reports: exact values as "p/q", floats with
//! 17 significant digits.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use serde::Serializer;

pub fn ratio64(r: &Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// "p/q" or an integer.
pub fn parse_ratio64(s: &str) -> crate::Result<Rational64> {
    let bad = || crate::Error::InvalidArgument(format!("bad rational `{s}`"));
    let (p, q) = s.trim().split_once('/').unwrap_or((s.trim(), "1"));
    let p: i64 = p.trim().parse().map_err(|_| bad())?;
    let q: i64 = q.trim().parse().map_err(|_| bad())?;
    if q == 0 {
        return Err(bad());
    }
    Ok(Rational64::new(p, q))
}

pub fn big_ratio(r: &BigRational) -> String {
    if *r.denom() == BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    format!("{:.16e}", x)
}

pub fn ser_ratio64<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&ratio64(r))
}

pub fn ser_ratio64_vec<S: Serializer>(v: &[(String, Rational64)], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for (g, r) in v {
        seq.serialize_element(&(g, ratio64(r)))?;
    }
    seq.end()
}

pub fn ser_big_ratio<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&big_ratio(r))
}

pub fn ser_float<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&float(*x))
}

pub fn ser_opt_float<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.serialize_str(&float(*x)),
        None => s.serialize_none(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        assert_eq!(ratio64(&Rational64::new(6, 16)), "3/8");
        assert_eq!(ratio64(&Rational64::new(4, 2)), "2");
        assert_eq!(float(0.5), "5.0000000000000000e-1");
        let r = BigRational::new(BigInt::from(-3), BigInt::from(9));
        assert_eq!(big_ratio(&r), "-1/3");
    }
}
