use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::vertex::VertexId;

/// Largest digit position the constrained-successor search will materialize.
/// A value with a forced nonzero digit beyond this position would need more
/// than a megabyte of digits; such requests are rejected rather than built.
const POS_CAP: u64 = 1 << 20;

/// A base together with a nonempty proper subset of its digits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitSet {
    q: u64,
    digits: BTreeSet<u64>,
}

impl DigitSet {
    pub fn new(q: u64, digits: impl IntoIterator<Item = u64>) -> Result<Self> {
        if !(2..=256).contains(&q) {
            return Err(Error::Config(format!("base must be in 2..=256, got {q}")));
        }
        let digits: BTreeSet<u64> = digits.into_iter().collect();
        if let Some(d) = digits.iter().find(|d| **d >= q) {
            return Err(Error::Config(format!("digit {d} out of range for base {q}")));
        }
        if digits.is_empty() || digits.len() as u64 == q {
            return Err(Error::Config(format!(
                "digit set must be a nonempty proper subset of 0..{q}"
            )));
        }
        Ok(DigitSet { q, digits })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn digits(&self) -> &BTreeSet<u64> {
        &self.digits
    }

    pub fn contains(&self, d: u64) -> bool {
        self.digits.contains(&d)
    }

    pub fn zero_selected(&self) -> bool {
        self.digits.contains(&0)
    }

    pub fn min_digit(&self) -> u64 {
        *self.digits.iter().next().expect("nonempty")
    }

    /// Least digit of the base not in the set.
    pub fn min_complement_digit(&self) -> u64 {
        (0..self.q).find(|d| !self.digits.contains(d)).expect("proper subset")
    }

    /// Unordered adjacency: with x < y, whether digit x of y lies in the set.
    pub fn adjacent(&self, a: &VertexId, b: &VertexId) -> bool {
        if a == b {
            return false;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.contains(digit_at(hi.as_biguint(), lo.as_biguint(), self.q))
    }
}

impl fmt::Display for DigitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "base {} digits {{", self.q)?;
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "}}")
    }
}

/// Digit of `y` at position `pos` in base `q`. Positions at or beyond the
/// binary length of `y` hold digit 0 for every base >= 2, which is what makes
/// astronomically large positions cheap to answer.
pub fn digit_at(y: &BigUint, pos: &BigUint, q: u64) -> u64 {
    let Some(p) = pos.to_u64() else {
        return 0; // pos > u64::MAX >= y.bits()
    };
    if p >= y.bits() {
        return 0;
    }
    if q == 2 {
        return u64::from(y.bit(p));
    }
    let p = u32::try_from(p).expect("position below the binary length cap");
    let shifted = y / BigUint::from(q).pow(p);
    (shifted % q).to_u64().expect("digit fits")
}

/// Number of base-q digits of `y`; 0 for y = 0.
pub fn digit_len(y: &BigUint, q: u64) -> u64 {
    if y.is_zero() {
        return 0;
    }
    if q == 2 {
        return y.bits();
    }
    y.to_radix_le(q as u32).len() as u64
}

/// q^exp as a big integer.
pub fn pow_q(q: u64, exp: u64) -> BigUint {
    let e = u32::try_from(exp).expect("exponent fits u32");
    if q == 2 {
        BigUint::from(1u32) << e
    } else {
        BigUint::from(q).pow(e)
    }
}

/// Constraint on a single digit position relative to a `DigitSet`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DigitRule {
    /// Digit must lie in the set.
    In,
    /// Digit must avoid the set.
    Out,
}

/// Least z > floor whose digit at each ruled position satisfies its rule.
///
/// Positions beyond `POS_CAP` are served only when digit 0 satisfies their
/// rule (then any value short enough satisfies them for free); otherwise the
/// requested value could not be written down and the call fails.
pub fn least_above_with_digits(
    ds: &DigitSet,
    rules: &BTreeMap<VertexId, DigitRule>,
    floor: &VertexId,
) -> Result<VertexId> {
    let q = ds.q;
    let target = floor.as_biguint() + 1u32;

    let mut small: BTreeMap<u64, DigitRule> = BTreeMap::new();
    for (pos, rule) in rules {
        match pos.to_u64() {
            Some(p) if p <= POS_CAP => {
                small.insert(p, *rule);
            }
            _ => {
                let zero_ok = match rule {
                    DigitRule::In => ds.zero_selected(),
                    DigitRule::Out => !ds.zero_selected(),
                };
                if !zero_ok {
                    return Err(Error::WitnessImpossible(format!(
                        "position {pos} requires a nonzero digit, so every \
                         solution has more than {POS_CAP} digits"
                    )));
                }
            }
        }
    }

    let len_t = digit_len(&target, q);
    if len_t > POS_CAP {
        return Err(Error::WitnessImpossible(format!(
            "lower bound already has {len_t} digits, beyond the {POS_CAP} cap"
        )));
    }
    if small.is_empty() {
        return Ok(VertexId::from(target));
    }

    // Ruled positions can dwarf the length of the answer, so nothing here
    // materializes ranges of positions: only the target's own digits and the
    // ruled positions are ever visited.
    let t = target.to_radix_le(q as u32);
    let digit_of_t = |p: u64| -> u64 {
        t.get(p as usize).map_or(0, |d| u64::from(*d))
    };
    let rule_at = |p: u64| small.get(&p).copied();
    let allowed = |p: u64, d: u64| match rule_at(p) {
        Some(DigitRule::In) => ds.digits.contains(&d),
        Some(DigitRule::Out) => !ds.digits.contains(&d),
        None => true,
    };
    let min_allowed = |p: u64| -> u64 {
        match rule_at(p) {
            Some(DigitRule::In) => ds.min_digit(),
            Some(DigitRule::Out) => ds.min_complement_digit(),
            None => 0,
        }
    };
    let min_allowed_above = |p: u64, d: u64| -> Option<u64> {
        (d + 1..q).find(|&c| allowed(p, c))
    };

    // only ruled positions can violate: unruled digits are free
    let worst = small
        .iter()
        .rev()
        .find(|(p, _)| !allowed(**p, digit_of_t(**p)))
        .map(|(p, _)| *p);
    let Some(worst) = worst else {
        return Ok(VertexId::from(target));
    };

    // Increase candidates at or above the worst violation, ascending: every
    // position below the target's length, ruled positions beyond it, and the
    // first unruled position past both, where a zero digit can always grow.
    let mut candidates: Vec<u64> = (worst..len_t).collect();
    candidates.extend(small.keys().copied().filter(|p| *p >= len_t.max(worst)));
    let mut sentinel = len_t.max(worst);
    while small.contains_key(&sentinel) {
        sentinel += 1;
    }
    candidates.push(sentinel);
    candidates.sort_unstable();
    candidates.dedup();

    for i in candidates {
        if let Some(d) = min_allowed_above(i, digit_of_t(i)) {
            // target's digits above i, d at i, minimal allowed digits below
            let shift = pow_q(q, i + 1);
            let mut z = (&target / &shift) * &shift;
            z += BigUint::from(d) * pow_q(q, i);
            for (p, _) in small.range(..i) {
                let m = min_allowed(*p);
                if m > 0 {
                    z += BigUint::from(m) * pow_q(q, *p);
                }
            }
            return Ok(VertexId::from(z));
        }
    }
    unreachable!("a zero digit past every rule always admits an increase");
}

/// Positions of `y` whose digit lies in the set, listed ascending, together
/// with the digit length of `y` and whether every position past that length
/// also qualifies (i.e. whether the set selects digit 0).
#[derive(Debug, Clone)]
pub struct SelectedPositions {
    pub below_len: Vec<u64>,
    pub len: u64,
    pub tail_selected: bool,
}

pub fn selected_positions(y: &BigUint, ds: &DigitSet) -> SelectedPositions {
    let len = digit_len(y, ds.q);
    let mut below_len = Vec::new();
    if ds.q == 2 {
        let want = ds.contains(1);
        for p in 0..len {
            if y.bit(p) == want {
                below_len.push(p);
            }
        }
    } else {
        for (p, d) in y.to_radix_le(ds.q as u32).iter().enumerate() {
            if ds.contains(u64::from(*d)) {
                below_len.push(p as u64);
            }
        }
    }
    SelectedPositions {
        below_len,
        len,
        tail_selected: ds.zero_selected(),
    }
}
