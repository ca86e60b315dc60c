//! The two families of model groups and their closed-form size data.
//!
//! A postcritical orbit of length `r` selects either the periodic family
//! (critical point on the cycle) or the strictly pre-periodic family with
//! tail length `s`, `1 <= s < r`. Level-group orders and the Hausdorff
//! dimension admit exact formulas in both families; breadth-first closure
//! cross-checks them at desk scale.

use num_rational::Rational64;

use crate::error::{Error, Result};

/// Combinatorial type of a finite postcritical orbit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum GroupCase {
    /// Critical point periodic with period `r >= 1`.
    Periodic { period: u32 },
    /// Critical point strictly pre-periodic: tail `s`, cycle entered after
    /// `s` steps, orbit length `r`, `1 <= s < r`.
    PrePeriodic { preperiod: u32, period: u32 },
}

impl GroupCase {
    pub fn periodic(r: u32) -> Result<Self> {
        if r == 0 {
            return Err(Error::Parameter("period must be at least 1".into()));
        }
        Ok(GroupCase::Periodic { period: r })
    }

    pub fn preperiodic(s: u32, r: u32) -> Result<Self> {
        if s == 0 || s >= r {
            return Err(Error::Parameter(format!(
                "pre-periodic case needs 1 <= s < r, got s={s}, r={r}"
            )));
        }
        Ok(GroupCase::PrePeriodic {
            preperiod: s,
            period: r,
        })
    }

    /// Number of generators (= orbit length).
    pub fn generator_count(&self) -> u32 {
        match *self {
            GroupCase::Periodic { period } => period,
            GroupCase::PrePeriodic { period, .. } => period,
        }
    }
}

impl std::fmt::Display for GroupCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            GroupCase::Periodic { period } => write!(f, "periodic:{period}"),
            GroupCase::PrePeriodic { preperiod, period } => {
                write!(f, "prep:{preperiod},{period}")
            }
        }
    }
}

/// Exact `log2` of the order of the level-`n` quotient of the model group.
pub fn closed_form_log2_order(case: &GroupCase, n: u32) -> i64 {
    match *case {
        GroupCase::Periodic { period } => {
            let r = period as i64;
            let mut total = (1i64 << n) - 1;
            for m in 0..n as i64 {
                total -= (1i64 << (n as i64 - 1 - m)) * (m / r);
            }
            total
        }
        GroupCase::PrePeriodic { preperiod, period } => {
            let s = preperiod;
            let r = period;
            if n <= r {
                (1i64 << n) - 1
            } else if s == 1 && r == 2 {
                n as i64 + 1
            } else if s == 1 {
                (1i64 << n) - 3 * (1i64 << (n - r)) + 2
            } else if s == 2 && r == 3 {
                (1i64 << n) - 5 * (1i64 << (n - 4)) + 2
            } else {
                (1i64 << n) - (1i64 << (n - r + 1)) + 1
            }
        }
    }
}

/// Exact Hausdorff dimension of the model group.
pub fn hausdorff_exact(case: &GroupCase) -> Rational64 {
    let one = Rational64::from_integer(1);
    match *case {
        GroupCase::Periodic { period } => one - Rational64::new(1, (1i64 << period) - 1),
        GroupCase::PrePeriodic { preperiod, period } => {
            let s = preperiod;
            let r = period;
            if s == 1 && r == 2 {
                Rational64::from_integer(0)
            } else if s == 1 {
                one - Rational64::new(3, 1i64 << r)
            } else if s == 2 && r == 3 {
                one - Rational64::new(5, 16)
            } else {
                one - Rational64::new(1, 1i64 << (r - 1))
            }
        }
    }
}

/// Density of the level-`n` quotient: `log2|G_n| / (2^n - 1)`. Converges
/// to the exact dimension.
pub fn hausdorff_partial(case: &GroupCase, n: u32) -> Result<Rational64> {
    if n == 0 || n > 30 {
        return Err(Error::Parameter("partial density needs 1 <= n <= 30".into()));
    }
    Ok(Rational64::new(
        closed_form_log2_order(case, n),
        (1i64 << n) - 1,
    ))
}
