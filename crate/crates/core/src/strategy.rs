//! Restart strategy math: the Luby sequence, schedule resolution, and the
//! catalog of representative bet-and-run strategies.
//!
//! All schedule arithmetic is done in integer time units. Percentages are
//! exact rationals, so a per-run share like 0.25% resolves the same way on
//! every platform, and `phase1 + phase2 == total` holds exactly.

use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::Ticks;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error("Luby sequence index must be at least 1")]
    LubyIndexZero,
    #[error("a strategy needs at least one phase-1 run")]
    NoRuns,
    #[error("percentage must be positive")]
    NonPositivePercent,
    #[error("invalid percentage `{0}`")]
    BadPercent(String),
    #[error("cannot parse strategy `{input}`: {reason}")]
    BadStrategy { input: String, reason: String },
    #[error("phase 1 of `{strategy}` would claim more than 100% of the budget")]
    InfeasibleStrategy { strategy: String },
    #[error("per-run budget rounds to zero time units ({unit_pct}% of {total})")]
    BudgetTooSmall { total: Ticks, unit_pct: String },
}

/// The i-th term of the universal restart sequence (1,1,2,1,1,2,4,1,1,2,...).
///
/// Terms are defined by `S(2^k - 1) = 2^(k-1)` together with the
/// self-similar rule `S(i) = S(i - 2^(k-1) + 1)` for `2^(k-1) <= i < 2^k - 1`.
/// Evaluated iteratively, one block per bit of `i`.
pub fn luby(i: u64) -> Result<u64, StrategyError> {
    if i == 0 {
        return Err(StrategyError::LubyIndexZero);
    }
    let mut i = i;
    loop {
        if (i + 1).is_power_of_two() {
            return Ok((i + 1) / 2);
        }
        // i + 1 lies in [2^(k-1), 2^k); fold back into the previous block.
        let k = 64 - (i + 1).leading_zeros();
        i = i - (1u64 << (k - 1)) + 1;
    }
}

/// Sum of the first `k` Luby terms: the number of unit slots a Luby phase 1
/// of length `k` occupies. Length 40 sums to 94.
pub fn luby_prefix_sum(k: u64) -> Result<u64, StrategyError> {
    if k == 0 {
        return Err(StrategyError::LubyIndexZero);
    }
    let mut sum = 0u64;
    for i in 1..=k {
        sum += luby(i)?;
    }
    Ok(sum)
}

/// An exact percentage, stored as a reduced fraction over percent so that
/// decimal inputs like `0.25` or `2.5` never pick up floating-point error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Percent {
    numer: u64,
    denom: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Percent {
    pub fn new(numer: u64, denom: u64) -> Result<Self, StrategyError> {
        if numer == 0 || denom == 0 {
            return Err(StrategyError::NonPositivePercent);
        }
        let g = gcd(numer, denom);
        Ok(Percent {
            numer: numer / g,
            denom: denom / g,
        })
    }

    pub fn from_int(pct: u64) -> Result<Self, StrategyError> {
        Self::new(pct, 1)
    }

    /// floor(value * self%), the integer number of time units this
    /// percentage carves out of `value`.
    pub fn floor_share(&self, value: Ticks) -> Ticks {
        ((value as u128 * self.numer as u128) / (self.denom as u128 * 100)) as Ticks
    }

    /// Exact check of `factor * self <= 100%`.
    pub fn times_within_hundred(&self, factor: u64) -> bool {
        factor as u128 * self.numer as u128 <= 100u128 * self.denom as u128
    }
}

impl FromStr for Percent {
    type Err = StrategyError;

    /// Parses a positive decimal with a dot separator: `100`, `2.5`, `0.25`.
    fn from_str(s: &str) -> Result<Self, StrategyError> {
        let bad = || StrategyError::BadPercent(s.to_string());
        let (int_part, frac_part) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        let digits_ok = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
        if !digits_ok(int_part) || !digits_ok(frac_part) || frac_part.len() > 15 {
            return Err(bad());
        }
        let int: u64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let frac: u64 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().map_err(|_| bad())?
        };
        let denom = 10u64.pow(frac_part.len() as u32);
        let numer = int
            .checked_mul(denom)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(bad)?;
        Percent::new(numer, denom).map_err(|_| bad())
    }
}

impl fmt::Display for Percent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // After reduction of a decimal input the denominator is 2^a * 5^b;
        // max(a, b) decimal digits render it exactly.
        let mut d = self.denom;
        let (mut twos, mut fives) = (0u32, 0u32);
        while d % 2 == 0 {
            d /= 2;
            twos += 1;
        }
        while d % 5 == 0 {
            d /= 5;
            fives += 1;
        }
        debug_assert_eq!(d, 1, "percent denominator must divide a power of 10");
        let digits = twos.max(fives);
        let scaled = self.numer as u128 * 10u128.pow(digits) / self.denom as u128;
        if digits == 0 {
            write!(f, "{scaled}")
        } else {
            let s = format!("{:0>width$}", scaled, width = digits as usize + 1);
            let (int, frac) = s.split_at(s.len() - digits as usize);
            write!(f, "{int}.{frac}")
        }
    }
}

/// How phase-1 run lengths are derived from the unit percentage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    /// `k` runs, each `x`% of the total budget.
    Fixed,
    /// Run `i` gets `S(i)` Luby units, each unit `x`% of the total budget.
    Luby,
}

/// A bet-and-run restart policy: the number of phase-1 runs and their share
/// of the total budget. Construction rejects policies whose phase 1 would
/// exceed the whole budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Strategy {
    kind: StrategyKind,
    runs: u32,
    unit_pct: Percent,
}

impl Strategy {
    pub fn fixed(runs: u32, unit_pct: Percent) -> Result<Self, StrategyError> {
        Self::validated(StrategyKind::Fixed, runs, unit_pct)
    }

    pub fn luby(runs: u32, unit_pct: Percent) -> Result<Self, StrategyError> {
        Self::validated(StrategyKind::Luby, runs, unit_pct)
    }

    fn validated(kind: StrategyKind, runs: u32, unit_pct: Percent) -> Result<Self, StrategyError> {
        if runs == 0 {
            return Err(StrategyError::NoRuns);
        }
        let s = Strategy {
            kind,
            runs,
            unit_pct,
        };
        if !unit_pct.times_within_hundred(s.phase1_units()?) {
            return Err(StrategyError::InfeasibleStrategy {
                strategy: s.to_string(),
            });
        }
        Ok(s)
    }

    pub fn kind(&self) -> StrategyKind {
        self.kind
    }

    /// Number of phase-1 runs (the Luby sequence length for Luby strategies).
    pub fn runs(&self) -> u32 {
        self.runs
    }

    /// Budget share of one run (fixed) or one Luby unit (Luby).
    pub fn unit_pct(&self) -> Percent {
        self.unit_pct
    }

    /// Total unit slots phase 1 occupies: `k` for fixed strategies, the Luby
    /// prefix sum for Luby strategies.
    fn phase1_units(&self) -> Result<u64, StrategyError> {
        match self.kind {
            StrategyKind::Fixed => Ok(self.runs as u64),
            StrategyKind::Luby => luby_prefix_sum(self.runs as u64),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            StrategyKind::Fixed => "restarts",
            StrategyKind::Luby => "luby",
        };
        write!(f, "{tag}:{}:{}", self.runs, self.unit_pct)
    }
}

impl FromStr for Strategy {
    type Err = StrategyError;

    /// Grammar: `restarts:<k>:<x>` or `luby:<k>:<x>` with `k` a positive
    /// integer and `x` a positive decimal percentage.
    fn from_str(s: &str) -> Result<Self, StrategyError> {
        let bad = |reason: &str| StrategyError::BadStrategy {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let mut parts = s.split(':');
        let (tag, k, x) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some(tag), Some(k), Some(x), None) => (tag, k, x),
            _ => return Err(bad("expected `<kind>:<k>:<x>`")),
        };
        let kind = match tag {
            "restarts" => StrategyKind::Fixed,
            "luby" => StrategyKind::Luby,
            _ => return Err(bad("kind must be `restarts` or `luby`")),
        };
        let runs: u32 = k.parse().map_err(|_| bad("run count must be a positive integer"))?;
        let unit_pct: Percent = x.parse().map_err(|_| bad("bad percentage"))?;
        Strategy::validated(kind, runs, unit_pct)
    }
}

impl Serialize for Strategy {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Strategy {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// A resolved two-phase plan in time units. `phase1` holds one budget per
/// run; whatever integer truncation leaves over accrues to `phase2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub phase1: Vec<Ticks>,
    pub phase2: Ticks,
    pub total: Ticks,
}

/// Turns a strategy and a total budget into per-run phase-1 budgets plus the
/// phase-2 remainder. The percentage converts by floor, so the parts always
/// sum to `total` exactly.
pub fn resolve_schedule(strategy: &Strategy, total: Ticks) -> Result<Schedule, StrategyError> {
    let unit = strategy.unit_pct.floor_share(total);
    if unit == 0 {
        return Err(StrategyError::BudgetTooSmall {
            total,
            unit_pct: strategy.unit_pct.to_string(),
        });
    }
    let phase1: Vec<Ticks> = match strategy.kind {
        StrategyKind::Fixed => vec![unit; strategy.runs as usize],
        StrategyKind::Luby => (1..=strategy.runs as u64)
            .map(|i| luby(i).map(|term| term * unit))
            .collect::<Result<_, _>>()?,
    };
    let spent: Ticks = phase1.iter().sum();
    if spent > total {
        return Err(StrategyError::InfeasibleStrategy {
            strategy: strategy.to_string(),
        });
    }
    Ok(Schedule {
        phase2: total - spent,
        phase1,
        total,
    })
}

/// The catalog of 14 representative strategies, grouped by how much of the
/// total time phase 1 occupies (100%, 40%, 10%, 4%, then the Luby variants).
pub fn catalog() -> Vec<Strategy> {
    const SPECS: [&str; 14] = [
        "restarts:1:100",
        "restarts:4:25",
        "restarts:4:10",
        "restarts:10:4",
        "restarts:40:1",
        "restarts:4:2.5",
        "restarts:10:1",
        "restarts:40:0.25",
        "restarts:4:1",
        "restarts:10:0.4",
        "restarts:40:0.1",
        "luby:4:1",
        "luby:10:1",
        "luby:40:1",
    ];
    SPECS
        .iter()
        .map(|s| s.parse().expect("catalog entries are valid"))
        .collect()
}
