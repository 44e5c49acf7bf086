//! Complete, duplicate-free streams of concave lattice polygons.
//!
//! The search engines need every element of B(GL_n), equivalently every
//! concave polygon with lattice breakpoints, matching a rank, an integer
//! degree, a slope window, and optional positionwise envelopes. Finiteness
//! comes from the lattice condition: a run of slope `p/q` has length at least
//! `q`, so denominators never exceed the remaining length.
//!
//! Generation is a depth-first recursion over runs. Each level walks the
//! admissible slopes below the previous run's slope in descending order (a
//! Farey walk, not a grid filter; the grid filter lives in `oracle` as the
//! independent route), tries run lengths in descending multiples of the
//! denominator, and prunes by exact degree feasibility. The resulting stream
//! is lexicographically descending on slope tuples and deterministic.

use num_rational::Rational64;
use thiserror::Error;

use crate::polygon::{ConcavePolygon, Run, Slope, TuplarPolygon};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("enumeration rank must be at least 1")]
    ZeroRank,
    #[error("slope window is inverted: min {min} exceeds max {max}")]
    WindowInverted { min: Slope, max: Slope },
    #[error("envelope has rank {got}, expected {expected}")]
    EnvelopeLength { expected: usize, got: usize },
    #[error("stream of modifications of a non-semistable polygon is not defined here")]
    NotSemistable,
}

/// All reduced fractions with denominator at most `max_den` inside
/// `[lo, hi]`, in descending order.
///
/// Implemented as a Farey-neighbor walk on each unit interval (shifting by
/// integers preserves reduced denominators), not by filtering a grid.
pub fn farey_descending(lo: Slope, hi: Slope, max_den: usize) -> Vec<Slope> {
    if lo > hi || max_den == 0 {
        return Vec::new();
    }
    let n = max_den as i64;
    let mut out = Vec::new();
    let base_lo = lo.floor().to_integer();
    let base_hi = hi.floor().to_integer();
    for base in base_lo..=base_hi {
        let shift = Rational64::from_integer(base);
        // Farey sequence of order n on [0, 1], by the neighbor recurrence.
        // The left endpoint 0/1 duplicates the previous window's 1/1, so it
        // is emitted only in the first window.
        let (mut a, mut b, mut c, mut d) = (0i64, 1i64, 1i64, n);
        loop {
            let value = Rational64::new(a, b) + shift;
            if value > hi {
                break;
            }
            let leading_duplicate = a == 0 && b == 1 && base > base_lo;
            if value >= lo && !leading_duplicate {
                out.push(value);
            }
            if a == 1 && b == 1 {
                break;
            }
            let k = (n + b) / d;
            let (a2, b2) = (c, d);
            let (c2, d2) = (k * c - a, k * d - b);
            a = a2;
            b = b2;
            c = c2;
            d = d2;
        }
    }
    out.reverse();
    out
}

/// Constraints for [`enumerate_concave`]: rank, exact integer degree, a slope
/// window, and optional positionwise slope envelopes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationBounds {
    rank: usize,
    degree: i64,
    min_slope: Slope,
    max_slope: Slope,
    lower_envelope: Option<Vec<Slope>>,
    upper_envelope: Option<Vec<Slope>>,
}

impl EnumerationBounds {
    pub fn new(
        rank: usize,
        degree: i64,
        min_slope: Slope,
        max_slope: Slope,
    ) -> Result<Self, BoundsError> {
        if rank == 0 {
            return Err(BoundsError::ZeroRank);
        }
        if min_slope > max_slope {
            return Err(BoundsError::WindowInverted { min: min_slope, max: max_slope });
        }
        Ok(EnumerationBounds {
            rank,
            degree,
            min_slope,
            max_slope,
            lower_envelope: None,
            upper_envelope: None,
        })
    }

    /// Requires `slope_at(i) >= envelope_i` for every position.
    pub fn with_lower_envelope(mut self, envelope: &TuplarPolygon) -> Result<Self, BoundsError> {
        if envelope.rank() != self.rank {
            return Err(BoundsError::EnvelopeLength { expected: self.rank, got: envelope.rank() });
        }
        self.lower_envelope = Some(envelope.slopes().to_vec());
        Ok(self)
    }

    /// Requires `slope_at(i) <= envelope_i` for every position.
    pub fn with_upper_envelope(mut self, envelope: &TuplarPolygon) -> Result<Self, BoundsError> {
        if envelope.rank() != self.rank {
            return Err(BoundsError::EnvelopeLength { expected: self.rank, got: envelope.rank() });
        }
        self.upper_envelope = Some(envelope.slopes().to_vec());
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    fn admits(&self, position: usize, s: Slope) -> bool {
        if let Some(lower) = &self.lower_envelope {
            if s < lower[position] {
                return false;
            }
        }
        if let Some(upper) = &self.upper_envelope {
            if s > upper[position] {
                return false;
            }
        }
        true
    }
}

struct Frame {
    partial: Vec<Run>,
    consumed: usize,
    remaining_degree: i64,
    moves: Vec<(Slope, usize)>,
    next: usize,
}

/// Depth-first stream over all concave lattice polygons matching the bounds.
/// Lexicographically descending on slope tuples; empty when infeasible.
pub struct ConcaveEnumerator {
    bounds: EnumerationBounds,
    stack: Vec<Frame>,
}

impl ConcaveEnumerator {
    fn new(bounds: EnumerationBounds) -> Self {
        let moves = moves_for(&bounds, 0, bounds.rank, bounds.degree, bounds.max_slope, true);
        let root = Frame {
            partial: Vec::new(),
            consumed: 0,
            remaining_degree: bounds.degree,
            moves,
            next: 0,
        };
        ConcaveEnumerator { bounds, stack: vec![root] }
    }
}

/// Admissible `(slope, run length)` moves at a recursion level, in descending
/// lexicographic order. `cap` is the previous run's slope; inclusive only at
/// the root.
fn moves_for(
    bounds: &EnumerationBounds,
    consumed: usize,
    remaining: usize,
    remaining_degree: i64,
    cap: Slope,
    cap_inclusive: bool,
) -> Vec<(Slope, usize)> {
    let mut moves = Vec::new();
    let slopes = farey_descending(bounds.min_slope, cap, remaining);
    for s in slopes {
        if !cap_inclusive && s >= cap {
            continue;
        }
        let q = *s.denom() as usize;
        // Longest runs first: more copies of the larger slope sorts higher.
        let mut m = (remaining / q) * q;
        while m >= q {
            let feasible = (|| {
                for position in consumed..consumed + m {
                    if !bounds.admits(position, s) {
                        return false;
                    }
                }
                let contribution = s * Rational64::from_integer(m as i64);
                debug_assert!(contribution.is_integer());
                let rest_degree = remaining_degree - contribution.to_integer();
                let rest_len = remaining - m;
                if rest_len == 0 {
                    return rest_degree == 0;
                }
                let rest = Rational64::from_integer(rest_degree);
                let len = Rational64::from_integer(rest_len as i64);
                // Later slopes sit in [min_slope, s): the strict upper bound
                // makes equality with len * s infeasible.
                rest >= len * bounds.min_slope && rest < len * s
            })();
            if feasible {
                moves.push((s, m));
            }
            m -= q;
        }
    }
    moves
}

impl Iterator for ConcaveEnumerator {
    type Item = ConcavePolygon;

    fn next(&mut self) -> Option<ConcavePolygon> {
        loop {
            let frame = self.stack.last_mut()?;
            if frame.next >= frame.moves.len() {
                self.stack.pop();
                continue;
            }
            let (s, m) = frame.moves[frame.next];
            frame.next += 1;
            let consumed = frame.consumed + m;
            let contribution = (s * Rational64::from_integer(m as i64)).to_integer();
            let remaining_degree = frame.remaining_degree - contribution;
            let mut partial = frame.partial.clone();
            partial.push(Run::new(s, m));
            let remaining = self.bounds.rank - consumed;
            if remaining == 0 {
                debug_assert_eq!(remaining_degree, 0);
                let polygon =
                    ConcavePolygon::new(partial).expect("enumerator maintains the invariants");
                return Some(polygon);
            }
            let moves = moves_for(&self.bounds, consumed, remaining, remaining_degree, s, false);
            self.stack.push(Frame { partial, consumed, remaining_degree, moves, next: 0 });
        }
    }
}

/// Every concave lattice polygon with the given rank, degree, slope window,
/// and envelopes, exactly once, in descending lexicographic order.
pub fn enumerate_concave(bounds: &EnumerationBounds) -> ConcaveEnumerator {
    ConcaveEnumerator::new(bounds.clone())
}

/// All polygons `d'` of the same rank as the semistable `d` that satisfy the
/// slopewise sandwich `d' + 1 >= d >= d'`: slopes in `[λ-1, λ]` where `λ` is
/// the slope of `d`. Streamed by descending degree (smallest twist first),
/// each degree in enumeration order. Errors unless `d` is semistable of
/// positive rank.
pub fn enumerate_sandwich_candidates(
    d: &ConcavePolygon,
) -> Result<impl Iterator<Item = ConcavePolygon>, BoundsError> {
    if !d.is_semistable() || d.is_empty() {
        return Err(BoundsError::NotSemistable);
    }
    let lambda = d.max_slope().expect("nonempty");
    let rank = d.rank();
    let degree = d.degree();
    let lo = lambda - Rational64::from_integer(1);
    let degrees = (degree - rank as i64..=degree).rev();
    Ok(degrees.flat_map(move |dd| {
        let bounds = EnumerationBounds::new(rank, dd, lo, lambda)
            .expect("window [λ-1, λ] is well formed");
        enumerate_concave(&bounds)
    }))
}

/// Degree of the slope-`c` segment over `length` units when integral, used by
/// feasibility pre-checks.
pub fn integral_degree(c: Slope, length: usize) -> Option<i64> {
    let d = c * Rational64::from_integer(length as i64);
    if d.is_integer() {
        Some(d.to_integer())
    } else {
        None
    }
}
