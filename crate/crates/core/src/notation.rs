//! Text form of a system: `L{n}({a},{b},{m1}^{r1},...)`, e.g. `L6(0,4,3^11)`.
//!
//! Printing groups equal multiplicities in descending order and writes a
//! single point as a bare `m`; parsing accepts `m`, `m^r` in any order and
//! repeated groups. Printing a parsed spec is the canonical key used in
//! every report.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lattice::SystemSpec;

impl fmt::Display for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}({},{}", self.n(), self.a(), self.b())?;
        for (m, count) in self.runs() {
            if count == 1 {
                write!(f, ",{m}")?;
            } else {
                write!(f, ",{m}^{count}")?;
            }
        }
        write!(f, ")")
    }
}

impl FromStr for SystemSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Parser::new(s).spec()
    }
}

impl serde::Serialize for SystemSpec {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

pub fn parse_spec(s: &str) -> Result<SystemSpec> {
    s.parse()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser {
            src: s.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            Some(got) => self.err(format!("expected '{}', found '{}'", c as char, got as char)),
            None => self.err(format!("expected '{}', found end of input", c as char)),
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return self.err("expected an integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse().or_else(|_| {
            self.pos = start;
            self.err(format!("integer '{text}' out of range"))
        })
    }

    fn spec(&mut self) -> Result<SystemSpec> {
        match self.peek() {
            Some(b'L') => self.pos += 1,
            _ => return self.err("a system starts with 'L'"),
        }
        if self.src.get(self.pos) == Some(&b'_') {
            self.pos += 1;
        }
        let n_pos = self.pos;
        let n = self.int()?;
        let n = u32::try_from(n).or_else(|_| {
            self.pos = n_pos;
            self.err(format!("surface index {n} must be a non-negative integer"))
        })?;
        self.expect(b'(')?;
        let a = self.int()?;
        self.expect(b',')?;
        let b = self.int()?;
        let mut mults = Vec::new();
        loop {
            match self.peek() {
                Some(b')') => {
                    self.pos += 1;
                    break;
                }
                Some(b',') => {
                    self.pos += 1;
                    let m_pos = self.pos;
                    let m = self.int()?;
                    if m < 0 {
                        self.pos = m_pos;
                        return self.err("multiplicities must be non-negative");
                    }
                    let count = if self.peek() == Some(b'^') {
                        self.pos += 1;
                        let c_pos = self.pos;
                        let c = self.int()?;
                        usize::try_from(c).or_else(|_| {
                            self.pos = c_pos;
                            self.err("point count must be non-negative")
                        })?
                    } else {
                        1
                    };
                    if count > 1 << 20 {
                        return self.err("point count is unreasonably large");
                    }
                    mults.extend(std::iter::repeat_n(m, count));
                }
                Some(c) => return self.err(format!("unexpected '{}'", c as char)),
                None => return self.err("unterminated system, missing ')'"),
            }
        }
        if self.peek().is_some() {
            return self.err("trailing input after ')'");
        }
        SystemSpec::new(n, a, b, mults)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prints_run_length() {
        let s = SystemSpec::homogeneous(6, 0, 4, 3, 11).unwrap();
        assert_eq!(s.to_string(), "L6(0,4,3^11)");
        let s = SystemSpec::new(1, 5, 4, vec![1, 3, 3, 1, 3, 1, 1, 3, 3, 3]).unwrap();
        assert_eq!(s.to_string(), "L1(5,4,3^6,1^4)");
        assert_eq!(SystemSpec::new(2, 1, 0, vec![1]).unwrap().to_string(), "L2(1,0,1)");
        assert_eq!(SystemSpec::new(0, 2, 2, vec![]).unwrap().to_string(), "L0(2,2)");
    }

    #[test]
    fn parses_variants() {
        let s: SystemSpec = "L6(0,4,3^11)".parse().unwrap();
        assert_eq!(s, SystemSpec::homogeneous(6, 0, 4, 3, 11).unwrap());
        let t: SystemSpec = " L_1 ( 0, 2, 1^2 , 1^3 )".parse().unwrap();
        assert_eq!(t.to_string(), "L1(0,2,1^5)");
        let u: SystemSpec = "L1(0,2,0^1)".parse().unwrap();
        assert_eq!(u.mults(), &[0]);
        assert_eq!(u.to_string(), "L1(0,2,0)");
    }

    #[test]
    fn parse_errors_carry_position() {
        let cases = [
            ("X6(0,4)", 0),
            ("L6(0;4)", 4),
            ("L6(0,4,3^x)", 9),
            ("L6(0,4,-3)", 7),
            ("L-1(0,4)", 1),
            ("L6(0,4", 6),
            ("L6(0,4) x", 8),
        ];
        for (text, want) in cases {
            match text.parse::<SystemSpec>() {
                Err(Error::Parse { pos, .. }) => assert_eq!(pos, want, "{text}"),
                other => panic!("{text}: expected parse error, got {other:?}"),
            }
        }
    }

    #[test]
    fn serializes_as_text() {
        let s: SystemSpec = "L6(0,4,3^11)".parse().unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), "\"L6(0,4,3^11)\"");
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(
            n in 0u32..10,
            a in -20i64..40,
            b in -1i64..20,
            mults in proptest::collection::vec(0i64..6, 0..14),
        ) {
            let s = SystemSpec::new(n, a, b, mults).unwrap();
            let text = s.to_string();
            let back: SystemSpec = text.parse().unwrap();
            prop_assert_eq!(&back, &s);
            prop_assert_eq!(back.to_string(), text);
        }
    }
}
