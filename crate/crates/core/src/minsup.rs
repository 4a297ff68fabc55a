use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Minimum support, either absolute or relative to the number of sequences.
///
/// Percentages are kept as exact decimals (`num / den` percent) so that the
/// conversion `ceil(m * pct / 100)` has no rounding error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinSup {
    Count(u32),
    Percent { num: u64, den: u64 },
}

impl MinSup {
    /// Absolute threshold for a database of `m` sequences.
    pub fn resolve(self, m: usize) -> Result<u32> {
        let count = match self {
            MinSup::Count(c) => c as u64,
            MinSup::Percent { num, den } => {
                let top = m as u128 * num as u128;
                let bottom = 100 * den as u128;
                top.div_ceil(bottom) as u64
            }
        };
        if count < 1 {
            return Err(Error::Parameter("minsup must be at least 1".into()));
        }
        u32::try_from(count).map_err(|_| Error::Parameter("minsup too large".into()))
    }
}

impl FromStr for MinSup {
    type Err = Error;

    /// Parses `"12"` as a count and `"2.5%"` as a percentage in (0, 100].
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parameter(format!("invalid minsup {s:?}"));
        if let Some(pct) = s.strip_suffix('%') {
            let (int, frac) = pct.split_once('.').unwrap_or((pct, ""));
            if int.is_empty() && frac.is_empty()
                || !int.bytes().all(|b| b.is_ascii_digit())
                || !frac.bytes().all(|b| b.is_ascii_digit())
                || frac.len() > 9
            {
                return Err(bad());
            }
            let den = 10u64.pow(frac.len() as u32);
            let int: u64 = if int.is_empty() {
                0
            } else {
                int.parse().map_err(|_| bad())?
            };
            let frac: u64 = if frac.is_empty() {
                0
            } else {
                frac.parse().map_err(|_| bad())?
            };
            let num = int
                .checked_mul(den)
                .and_then(|v| v.checked_add(frac))
                .ok_or_else(bad)?;
            if num == 0 || num > 100 * den {
                return Err(Error::Parameter(format!(
                    "minsup percentage must be in (0, 100], got {s}"
                )));
            }
            Ok(MinSup::Percent { num, den })
        } else {
            let c: u32 = s.parse().map_err(|_| bad())?;
            if c == 0 {
                return Err(Error::Parameter("minsup must be at least 1".into()));
            }
            Ok(MinSup::Count(c))
        }
    }
}

impl fmt::Display for MinSup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MinSup::Count(c) => write!(f, "{c}"),
            MinSup::Percent { num, den } => {
                let digits = den.trailing_zeros_base10();
                if digits == 0 {
                    write!(f, "{num}%")
                } else {
                    write!(f, "{}.{:0width$}%", num / den, num % den, width = digits)
                }
            }
        }
    }
}

trait Base10 {
    fn trailing_zeros_base10(self) -> usize;
}

impl Base10 for u64 {
    fn trailing_zeros_base10(mut self) -> usize {
        let mut n = 0;
        while self > 1 && self.is_multiple_of(10) {
            self /= 10;
            n += 1;
        }
        n
    }
}
