//! Fixed-point currency with two fractional digits.

use alloc::string::String;
use core::fmt;
use core::str::FromStr;

/// An amount in hundredths of the currency unit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Money(i64);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MoneyError {
    Malformed(String),
    TooManyDecimals(String),
    Overflow,
}

impl fmt::Display for MoneyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoneyError::Malformed(s) => write!(f, "malformed amount {s:?}"),
            MoneyError::TooManyDecimals(s) => write!(f, "amount {s:?} has more than two decimals"),
            MoneyError::Overflow => f.write_str("amount overflow"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for MoneyError {}

impl Money {
    pub const ZERO: Money = Money(0);

    pub const fn from_cents(cents: i64) -> Self {
        Money(cents)
    }

    pub const fn cents(self) -> i64 {
        self.0
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    pub fn checked_add(self, other: Money) -> Option<Money> {
        self.0.checked_add(other.0).map(Money)
    }

    pub fn checked_mul(self, qty: u32) -> Option<Money> {
        self.0.checked_mul(i64::from(qty)).map(Money)
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        write!(f, "{sign}{}.{:02}", abs / 100, abs % 100)
    }
}

impl FromStr for Money {
    type Err = MoneyError;

    /// Accepts `12`, `12.5`, `12.50`, optionally signed. Never rounds.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || MoneyError::Malformed(String::from(s));
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (whole, frac) = match body.split_once('.') {
            Some((w, f)) => (w, f),
            None => (body, ""),
        };
        if whole.is_empty() || !whole.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        if !frac.bytes().all(|b| b.is_ascii_digit()) || (body.contains('.') && frac.is_empty()) {
            return Err(malformed());
        }
        if frac.len() > 2 {
            return Err(MoneyError::TooManyDecimals(String::from(s)));
        }
        let units: i128 = whole.parse().map_err(|_| MoneyError::Overflow)?;
        let mut hundredths: i128 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| malformed())? };
        if frac.len() == 1 {
            hundredths *= 10;
        }
        let cents = units.checked_mul(100).and_then(|c| c.checked_add(hundredths)).ok_or(MoneyError::Overflow)?;
        let signed = if negative { -cents } else { cents };
        i64::try_from(signed).map(Money).map_err(|_| MoneyError::Overflow)
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Money {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Money {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct Visitor;

        impl serde::de::Visitor<'_> for Visitor {
            type Value = Money;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a decimal amount string with at most two fractional digits")
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Money, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_str(Visitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn formats_two_decimals() {
        assert_eq!(Money::from_cents(1000).to_string(), "10.00");
        assert_eq!(Money::from_cents(7).to_string(), "0.07");
        assert_eq!(Money::from_cents(-50).to_string(), "-0.50");
    }

    #[test]
    fn parses() {
        assert_eq!("10".parse(), Ok(Money::from_cents(1000)));
        assert_eq!("10.5".parse(), Ok(Money::from_cents(1050)));
        assert_eq!("0.05".parse(), Ok(Money::from_cents(5)));
        assert_eq!("-1.25".parse(), Ok(Money::from_cents(-125)));
        assert!(matches!("1.234".parse::<Money>(), Err(MoneyError::TooManyDecimals(_))));
        for bad in ["", ".5", "1.", "1,00", "abc", "1.-2", "--1"] {
            assert!(bad.parse::<Money>().is_err(), "{bad:?}");
        }
    }

    proptest::proptest! {
        #[test]
        fn display_parse_round_trip(cents in proptest::num::i64::ANY) {
            let m = Money::from_cents(cents);
            proptest::prop_assert_eq!(m.to_string().parse::<Money>(), Ok(m));
        }
    }
}
