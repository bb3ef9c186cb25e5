//! Calendar value parsing for datetime attributes.
//!
//! Accepted forms: ISO-8601 `YYYY-MM-DD`, the same followed by `T` or a
//! space and `HH:MM[:SS[.fraction]]` with an optional `Z`/`±HH:MM` offset,
//! and slashed `DD/MM/YYYY` or `MM/DD/YYYY` depending on `day_first`.
//! Offsets are normalised to UTC.

use alloc::string::String;
use core::fmt;

use chrono::{Datelike, NaiveDate, NaiveDateTime, NaiveTime, TimeDelta, Timelike};

/// A parsed calendar value. `date_only` remembers whether the source had a
/// time component so the value can be written back as `xsd:date` or
/// `xsd:dateTime`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp {
    datetime: NaiveDateTime,
    date_only: bool,
}

impl Timestamp {
    pub fn from_date(date: NaiveDate) -> Self {
        Timestamp {
            datetime: date.and_time(NaiveTime::MIN),
            date_only: true,
        }
    }

    pub fn from_datetime(datetime: NaiveDateTime) -> Self {
        Timestamp {
            datetime,
            date_only: false,
        }
    }

    pub fn datetime(&self) -> NaiveDateTime {
        self.datetime
    }

    pub fn is_date_only(&self) -> bool {
        self.date_only
    }

    pub fn year(&self) -> i32 {
        self.datetime.year()
    }

    /// Parses one cell. `day_first` resolves `01/02/2020` as 1 February.
    pub fn parse(raw: &str, day_first: bool) -> Option<Self> {
        let s = raw.trim_ascii().as_bytes();
        if s.len() >= 8 && s.contains(&b'/') {
            return parse_slashed(s, day_first);
        }
        parse_iso(s)
    }

    /// Parses the canonical lexical form produced by `Display`.
    pub fn parse_iso_str(raw: &str) -> Option<Self> {
        parse_iso(raw.as_bytes())
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.datetime.date();
        write!(f, "{:04}-{:02}-{:02}", d.year(), d.month(), d.day())?;
        if self.date_only {
            return Ok(());
        }
        let t = self.datetime.time();
        write!(f, "T{:02}:{:02}:{:02}", t.hour(), t.minute(), t.second())?;
        let nanos = t.nanosecond();
        if nanos != 0 {
            let mut frac = String::new();
            let _ = fmt::write(&mut frac, format_args!("{nanos:09}"));
            write!(f, ".{}", frac.trim_end_matches('0'))?;
        }
        Ok(())
    }
}

struct Cursor<'a> {
    b: &'a [u8],
    i: usize,
}

impl<'a> Cursor<'a> {
    fn digits(&mut self, min: usize, max: usize) -> Option<u32> {
        let start = self.i;
        let mut v: u32 = 0;
        while self.i < self.b.len() && self.i - start < max && self.b[self.i].is_ascii_digit() {
            v = v * 10 + u32::from(self.b[self.i] - b'0');
            self.i += 1;
        }
        (self.i - start >= min).then_some(v)
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.b.get(self.i) == Some(&c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn peek(&self) -> Option<u8> {
        self.b.get(self.i).copied()
    }

    fn done(&self) -> bool {
        self.i == self.b.len()
    }
}

fn parse_slashed(s: &[u8], day_first: bool) -> Option<Timestamp> {
    let mut c = Cursor { b: s, i: 0 };
    let first = c.digits(1, 2)?;
    c.eat(b'/').then_some(())?;
    let second = c.digits(1, 2)?;
    c.eat(b'/').then_some(())?;
    let year = c.digits(4, 4)?;
    if !c.done() {
        return None;
    }
    let (day, month) = if day_first {
        (first, second)
    } else {
        (second, first)
    };
    NaiveDate::from_ymd_opt(year as i32, month, day).map(Timestamp::from_date)
}

fn parse_iso(s: &[u8]) -> Option<Timestamp> {
    let mut c = Cursor { b: s, i: 0 };
    let year = c.digits(4, 4)?;
    c.eat(b'-').then_some(())?;
    let month = c.digits(2, 2)?;
    c.eat(b'-').then_some(())?;
    let day = c.digits(2, 2)?;
    let date = NaiveDate::from_ymd_opt(year as i32, month, day)?;
    if c.done() {
        return Some(Timestamp::from_date(date));
    }
    if !(c.eat(b'T') || c.eat(b' ')) {
        return None;
    }
    let hour = c.digits(2, 2)?;
    c.eat(b':').then_some(())?;
    let minute = c.digits(2, 2)?;
    let mut second = 0;
    let mut nanos = 0;
    if c.eat(b':') {
        second = c.digits(2, 2)?;
        if c.eat(b'.') {
            let start = c.i;
            let frac = c.digits(1, 9)?;
            nanos = frac * 10u32.pow(9 - (c.i - start) as u32);
            // digits past nanosecond precision are dropped
            while c.peek().is_some_and(|b| b.is_ascii_digit()) {
                c.i += 1;
            }
        }
    }
    let time = NaiveTime::from_hms_nano_opt(hour, minute, second, nanos)?;
    let mut datetime = date.and_time(time);
    match c.peek() {
        None => {}
        Some(b'Z') => {
            c.i += 1;
        }
        Some(sign @ (b'+' | b'-')) => {
            c.i += 1;
            let oh = c.digits(2, 2)?;
            c.eat(b':');
            let om = c.digits(2, 2)?;
            if oh > 23 || om > 59 {
                return None;
            }
            let offset = TimeDelta::minutes(i64::from(oh * 60 + om));
            // local = utc + offset
            datetime = if sign == b'+' {
                datetime.checked_sub_signed(offset)?
            } else {
                datetime.checked_add_signed(offset)?
            };
        }
        Some(_) => return None,
    }
    c.done().then_some(Timestamp::from_datetime(datetime))
}

#[cfg(feature = "serde")]
impl serde::Serialize for Timestamp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Timestamp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = <String as serde::Deserialize>::deserialize(d)?;
        Timestamp::parse_iso_str(&s).ok_or_else(|| serde::de::Error::custom("invalid timestamp"))
    }
}
