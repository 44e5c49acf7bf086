//! Rational slope polygons and the two dominance orders used throughout the engine.
//!
//! A rank-`n` polygon is the graph of a piecewise-linear function on `[0, n]`
//! starting at the origin, with rational slope `P_i` on `[i-1, i]`. We work with
//! two representations:
//!
//! * [`TuplarPolygon`]: an arbitrary ordered tuple of slopes. Closed under
//!   rearrangement and pointwise addition; this is where the order-theoretic
//!   lemmas live.
//! * [`ConcavePolygon`]: slopes weakly decreasing, grouped into runs of equal
//!   slope, with every run length divisible by the slope denominator so that
//!   run boundaries land on lattice points. These are exactly the
//!   Harder-Narasimhan polygons of vector bundles on the Fargues-Fontaine
//!   curve, i.e. the elements of the Kottwitz set B(GL_n).
//!
//! Two partial orders appear: the Bruhat order (`bruhat_geq`: prefix sums
//! dominate, with equality of endpoints) and slopewise dominance
//! (`slopewise_geq`: every slope dominates). Slopewise dominance is strictly
//! finer and does not require equal degrees.
//!
//! All arithmetic is exact; no floating point anywhere.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::Zero;
use thiserror::Error;

/// Exact rational slope, always in lowest terms with positive denominator.
pub type Slope = Rational64;

/// Shorthand constructor for a slope `num/den`. Panics if `den == 0`.
pub fn slope(num: i64, den: i64) -> Slope {
    Rational64::new(num, den)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolygonError {
    #[error("run {index}: slope {slope} does not strictly decrease below previous slope {previous}")]
    NotDescending { index: usize, slope: Slope, previous: Slope },
    #[error("run {index}: length {length} is not divisible by the denominator {denominator} of slope {slope}")]
    OffLattice { index: usize, slope: Slope, length: usize, denominator: usize },
    #[error("run {index} has zero length")]
    ZeroLengthRun { index: usize },
    #[error("slice [{x0}, {x1}] is not a subinterval of [0, {rank}]")]
    BadSlice { x0: usize, x1: usize, rank: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("at byte {offset}: {message}")]
pub struct ParseLiteralError {
    pub offset: usize,
    pub message: String,
}

impl ParseLiteralError {
    fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseLiteralError { offset, message: message.into() }
    }
}

// ---------------------------------------------------------------------------
// TuplarPolygon
// ---------------------------------------------------------------------------

/// An ordered tuple of rational slopes; the graph from `(0, 0)` to
/// `(n, degree)`. Not required to be monotone.
///
/// Structural equality and the derived `Ord` are representation orders for use
/// in collections; they are not the Bruhat order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TuplarPolygon {
    slopes: Vec<Slope>,
}

impl TuplarPolygon {
    pub fn new(slopes: Vec<Slope>) -> Self {
        TuplarPolygon { slopes }
    }

    /// Polygon with every slope equal to `c`: the segment from `(0,0)` to `(rank, c*rank)`.
    pub fn constant(c: Slope, rank: usize) -> Self {
        TuplarPolygon { slopes: vec![c; rank] }
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        TuplarPolygon { slopes: entries.iter().map(|&e| Slope::from_integer(e)).collect() }
    }

    pub fn rank(&self) -> usize {
        self.slopes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slopes.is_empty()
    }

    pub fn slopes(&self) -> &[Slope] {
        &self.slopes
    }

    pub fn degree(&self) -> Slope {
        self.slopes.iter().sum()
    }

    /// Heights of the graph above `x = 1, ..., n` (inclusive prefix sums).
    pub fn prefix_sums(&self) -> Vec<Slope> {
        let mut acc = Slope::zero();
        self.slopes
            .iter()
            .map(|s| {
                acc += s;
                acc
            })
            .collect()
    }

    /// Bruhat order: every prefix sum of `self` dominates the corresponding
    /// prefix sum of `other`, with equality at the right endpoint. Unequal
    /// degrees therefore compare as false, never as an error.
    ///
    /// Panics if the ranks differ.
    pub fn bruhat_geq(&self, other: &TuplarPolygon) -> bool {
        assert_eq!(self.rank(), other.rank(), "bruhat_geq: rank mismatch");
        let n = self.rank();
        let mut a = Slope::zero();
        let mut b = Slope::zero();
        for i in 0..n {
            a += self.slopes[i];
            b += other.slopes[i];
            if a < b {
                return false;
            }
        }
        a == b
    }

    /// Slopewise dominance: `self_i >= other_i` for every position.
    ///
    /// Panics if the ranks differ.
    pub fn slopewise_geq(&self, other: &TuplarPolygon) -> bool {
        assert_eq!(self.rank(), other.rank(), "slopewise_geq: rank mismatch");
        self.slopes.iter().zip(&other.slopes).all(|(a, b)| a >= b)
    }

    /// Degree-negating involution: `dual(P)_i = -P_{n+1-i}`.
    pub fn dual(&self) -> TuplarPolygon {
        TuplarPolygon { slopes: self.slopes.iter().rev().map(|s| -s).collect() }
    }

    /// The slopes sorted into weakly decreasing order: the concave profile of
    /// the same slope multiset, and the Bruhat-maximal rearrangement.
    pub fn concave_rearrangement(&self) -> TuplarPolygon {
        let mut slopes = self.slopes.clone();
        slopes.sort_unstable_by(|a, b| b.cmp(a));
        TuplarPolygon { slopes }
    }

    /// Concave rearrangement of the concatenation; models the HN polygon of a
    /// direct sum of bundles.
    pub fn direct_sum(&self, other: &TuplarPolygon) -> TuplarPolygon {
        let mut slopes = Vec::with_capacity(self.rank() + other.rank());
        slopes.extend_from_slice(&self.slopes);
        slopes.extend_from_slice(&other.slopes);
        slopes.sort_unstable_by(|a, b| b.cmp(a));
        TuplarPolygon { slopes }
    }

    /// Positionwise sum. Panics if the ranks differ.
    pub fn pointwise_add(&self, other: &TuplarPolygon) -> TuplarPolygon {
        assert_eq!(self.rank(), other.rank(), "pointwise_add: rank mismatch");
        TuplarPolygon {
            slopes: self.slopes.iter().zip(&other.slopes).map(|(a, b)| a + b).collect(),
        }
    }

    /// Adds the constant `c` to every slope (a fractional twist).
    pub fn add_constant(&self, c: Slope) -> TuplarPolygon {
        TuplarPolygon { slopes: self.slopes.iter().map(|s| s + c).collect() }
    }

    /// Checked conversion: requires weakly decreasing slopes and run lengths
    /// divisible by slope denominators.
    pub fn to_concave(&self) -> Result<ConcavePolygon, PolygonError> {
        ConcavePolygon::from_slopes(&self.slopes)
    }
}

impl fmt::Display for TuplarPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.slopes.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// ConcavePolygon
// ---------------------------------------------------------------------------

/// A maximal run of equal slopes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Run {
    pub slope: Slope,
    pub length: usize,
}

impl Run {
    pub fn new(slope: Slope, length: usize) -> Self {
        Run { slope, length }
    }

    /// Integer by the lattice invariant once inside a `ConcavePolygon`.
    fn degree(&self) -> Slope {
        self.slope * Slope::from_integer(self.length as i64)
    }
}

/// A concave polygon with lattice breakpoints: runs of strictly decreasing
/// slope, each run length divisible by its slope denominator. Equality is
/// structural on the canonical merged-run form.
///
/// Rank 0 (no runs) is permitted as a degenerate value so that empty kernels
/// and quotients in the extension calculus have a representation; parsing and
/// the query constructors insist on rank >= 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ConcavePolygon {
    runs: Vec<Run>,
}

impl ConcavePolygon {
    /// Builds from runs, merging adjacent equal slopes first, then validating
    /// strict descent and the lattice condition.
    pub fn new(runs: Vec<Run>) -> Result<Self, PolygonError> {
        let mut merged: Vec<Run> = Vec::with_capacity(runs.len());
        for (index, run) in runs.iter().enumerate() {
            if run.length == 0 {
                return Err(PolygonError::ZeroLengthRun { index });
            }
            match merged.last_mut() {
                Some(last) if last.slope == run.slope => last.length += run.length,
                _ => merged.push(*run),
            }
        }
        for (index, run) in merged.iter().enumerate() {
            if index > 0 {
                let previous = merged[index - 1].slope;
                if run.slope >= previous {
                    return Err(PolygonError::NotDescending { index, slope: run.slope, previous });
                }
            }
            let den = *run.slope.denom() as usize;
            if run.length % den != 0 {
                return Err(PolygonError::OffLattice {
                    index,
                    slope: run.slope,
                    length: run.length,
                    denominator: den,
                });
            }
        }
        Ok(ConcavePolygon { runs: merged })
    }

    pub fn from_slopes(slopes: &[Slope]) -> Result<Self, PolygonError> {
        ConcavePolygon::new(slopes.iter().map(|&s| Run::new(s, 1)).collect())
    }

    /// The rank-0 polygon.
    pub fn empty() -> Self {
        ConcavePolygon { runs: Vec::new() }
    }

    /// Single-run polygon; errors if `rank` is off-lattice for `c`.
    pub fn constant(c: Slope, rank: usize) -> Result<Self, PolygonError> {
        ConcavePolygon::new(vec![Run::new(c, rank)])
    }

    /// The segment from `(0, 0)` to `(rank, degree)`: constant slope
    /// `degree/rank`. Always on-lattice. Panics if `rank == 0`.
    pub fn line(degree: i64, rank: usize) -> Self {
        assert!(rank > 0, "line segment needs positive rank");
        let c = Slope::new(degree, rank as i64);
        ConcavePolygon::constant(c, rank).expect("reduced denominator divides rank")
    }

    pub fn rank(&self) -> usize {
        self.runs.iter().map(|r| r.length).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Integer total degree; integrality is what the lattice condition buys.
    pub fn degree(&self) -> i64 {
        let d: Slope = self.runs.iter().map(|r| r.degree()).sum();
        debug_assert!(d.is_integer());
        d.to_integer()
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn slopes(&self) -> Vec<Slope> {
        let mut out = Vec::with_capacity(self.rank());
        for run in &self.runs {
            out.extend(std::iter::repeat(run.slope).take(run.length));
        }
        out
    }

    /// Semistable means at most one slope: a single run (or rank 0).
    pub fn is_semistable(&self) -> bool {
        self.runs.len() <= 1
    }

    pub fn max_slope(&self) -> Option<Slope> {
        self.runs.first().map(|r| r.slope)
    }

    pub fn min_slope(&self) -> Option<Slope> {
        self.runs.last().map(|r| r.slope)
    }

    /// Interior x-coordinates where the slope changes, strictly increasing.
    /// Lattice points by the run-length invariant.
    pub fn breakpoints(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut x = 0;
        for run in self.runs.iter().take(self.runs.len().saturating_sub(1)) {
            x += run.length;
            out.push(x);
        }
        out
    }

    /// Graph vertices `(x, y)` at 0, each breakpoint, and the right endpoint.
    /// All lattice points.
    pub fn vertices(&self) -> Vec<(usize, i64)> {
        let mut out = vec![(0usize, 0i64)];
        let mut x = 0usize;
        let mut y = Slope::zero();
        for run in &self.runs {
            x += run.length;
            y += run.degree();
            debug_assert!(y.is_integer());
            out.push((x, y.to_integer()));
        }
        out
    }

    pub fn to_tuplar(&self) -> TuplarPolygon {
        TuplarPolygon::new(self.slopes())
    }

    /// Slope over `[i, i+1]`, zero-based. Panics if out of range.
    pub fn slope_at(&self, mut i: usize) -> Slope {
        for run in &self.runs {
            if i < run.length {
                return run.slope;
            }
            i -= run.length;
        }
        panic!("slope_at: index out of range");
    }

    pub fn bruhat_geq(&self, other: &ConcavePolygon) -> bool {
        self.to_tuplar().bruhat_geq(&other.to_tuplar())
    }

    pub fn slopewise_geq(&self, other: &ConcavePolygon) -> bool {
        self.to_tuplar().slopewise_geq(&other.to_tuplar())
    }

    /// Degree-negating involution; concavity and the lattice are preserved.
    pub fn dual(&self) -> ConcavePolygon {
        let runs = self.runs.iter().rev().map(|r| Run::new(-r.slope, r.length)).collect();
        ConcavePolygon::new(runs).expect("dual preserves the invariants")
    }

    /// HN polygon of a direct sum: merge the runs in decreasing slope order.
    pub fn direct_sum(&self, other: &ConcavePolygon) -> ConcavePolygon {
        let mut runs: Vec<Run> = Vec::with_capacity(self.runs.len() + other.runs.len());
        let (mut a, mut b) = (self.runs.iter().peekable(), other.runs.iter().peekable());
        loop {
            let next = match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => {
                    if x.slope >= y.slope {
                        *a.next().unwrap()
                    } else {
                        *b.next().unwrap()
                    }
                }
                (Some(_), None) => *a.next().unwrap(),
                (None, Some(_)) => *b.next().unwrap(),
                (None, None) => break,
            };
            match runs.last_mut() {
                Some(last) if last.slope == next.slope => last.length += next.length,
                _ => runs.push(next),
            }
        }
        ConcavePolygon { runs }
    }

    /// Adds the integer `k` to every slope (twist by a degree-`k` line
    /// bundle); the lattice is preserved because denominators do not change.
    pub fn shift(&self, k: i64) -> ConcavePolygon {
        let c = Slope::from_integer(k);
        let runs = self.runs.iter().map(|r| Run::new(r.slope + c, r.length)).collect();
        ConcavePolygon::new(runs).expect("integer shift preserves the invariants")
    }

    /// The polygon over `[x0, x1]`, renormalized to start at the origin.
    /// Errors when the slice boundary cuts a run off-lattice.
    pub fn restrict(&self, x0: usize, x1: usize) -> Result<ConcavePolygon, PolygonError> {
        let rank = self.rank();
        if x0 > x1 || x1 > rank {
            return Err(PolygonError::BadSlice { x0, x1, rank });
        }
        let slopes = self.slopes();
        ConcavePolygon::from_slopes(&slopes[x0..x1])
    }

    /// Splits off the maximal-slope run: `(top, rest)` with
    /// `self = top ⊕ rest`. `None` when there is at most one run.
    pub fn split_top(&self) -> Option<(ConcavePolygon, ConcavePolygon)> {
        if self.runs.len() < 2 {
            return None;
        }
        let top = ConcavePolygon { runs: vec![self.runs[0]] };
        let rest = ConcavePolygon { runs: self.runs[1..].to_vec() };
        Some((top, rest))
    }
}

impl fmt::Display for ConcavePolygon {
    /// Canonical literal: runs as `slope^length`, `^1` omitted, e.g.
    /// `2/3^3,3/5^5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, run) in self.runs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", run.slope)?;
            if run.length != 1 {
                write!(f, "^{}", run.length)?;
            }
        }
        Ok(())
    }
}

impl FromStr for ConcavePolygon {
    type Err = ParseLiteralError;

    /// Parses the canonical literal grammar `slope[^length](,slope[^length])*`
    /// with slopes `p` or `p/q`. Adjacent equal slopes merge, so `1,1` and
    /// `1^2` denote the same polygon. Errors carry the byte offset of the
    /// offending token.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Err(ParseLiteralError::new(0, "empty polygon literal"));
        }
        let mut runs: Vec<(usize, Run)> = Vec::new();
        let mut offset = 0usize;
        for piece in s.split(',') {
            let token = piece.trim();
            let token_offset = offset + (piece.len() - piece.trim_start().len());
            if token.is_empty() {
                return Err(ParseLiteralError::new(token_offset, "empty run"));
            }
            let (slope_text, length) = match token.split_once('^') {
                None => (token, 1usize),
                Some((st, lt)) => {
                    let length: usize = lt.parse().map_err(|_| {
                        ParseLiteralError::new(
                            token_offset + st.len() + 1,
                            format!("invalid run length `{lt}`"),
                        )
                    })?;
                    (st, length)
                }
            };
            let slope: Slope = slope_text.parse().map_err(|_| {
                ParseLiteralError::new(token_offset, format!("invalid slope `{slope_text}`"))
            })?;
            if length == 0 {
                return Err(ParseLiteralError::new(token_offset, "run length must be positive"));
            }
            runs.push((token_offset, Run::new(slope, length)));
            offset += piece.len() + 1;
        }
        // Merge adjacent equal slopes before validating, keeping the offset of
        // the first token of each merged run for diagnostics.
        let mut merged: Vec<(usize, Run)> = Vec::new();
        for (off, run) in runs {
            match merged.last_mut() {
                Some((_, last)) if last.slope == run.slope => last.length += run.length,
                _ => merged.push((off, run)),
            }
        }
        for (i, (off, run)) in merged.iter().enumerate() {
            if i > 0 {
                let prev = merged[i - 1].1.slope;
                if run.slope >= prev {
                    return Err(ParseLiteralError::new(
                        *off,
                        format!("slope {} does not strictly decrease below {}", run.slope, prev),
                    ));
                }
            }
            let den = *run.slope.denom() as usize;
            if run.length % den != 0 {
                return Err(ParseLiteralError::new(
                    *off,
                    format!(
                        "run length {} is not divisible by the denominator {} of slope {}",
                        run.length, den, run.slope
                    ),
                ));
            }
        }
        Ok(ConcavePolygon { runs: merged.into_iter().map(|(_, r)| r).collect() })
    }
}

// ---------------------------------------------------------------------------
// Cocharacters
// ---------------------------------------------------------------------------

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CocharacterError {
    #[error("cocharacter must have at least one entry")]
    Empty,
    #[error("entry {index} ({value}) exceeds the previous entry ({previous}); entries must be non-increasing")]
    NotDominant { index: usize, value: i64, previous: i64 },
    #[error("minuscule degree {degree} is outside 0..={rank}")]
    DegreeOutOfRange { degree: i64, rank: usize },
}

/// A dominant cocharacter of GL_n: a non-increasing tuple of integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DominantCocharacter {
    entries: Vec<i64>,
}

impl DominantCocharacter {
    pub fn new(entries: Vec<i64>) -> Result<Self, CocharacterError> {
        if entries.is_empty() {
            return Err(CocharacterError::Empty);
        }
        for i in 1..entries.len() {
            if entries[i] > entries[i - 1] {
                return Err(CocharacterError::NotDominant {
                    index: i,
                    value: entries[i],
                    previous: entries[i - 1],
                });
            }
        }
        Ok(DominantCocharacter { entries })
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn degree(&self) -> i64 {
        self.entries.iter().sum()
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    /// Dominant representative of the inverse: reverse and negate.
    pub fn dual(&self) -> DominantCocharacter {
        DominantCocharacter { entries: self.entries.iter().rev().map(|e| -e).collect() }
    }

    pub fn to_tuplar(&self) -> TuplarPolygon {
        TuplarPolygon::from_ints(&self.entries)
    }

    /// When the entries take at most the two values `{m, m+1}`, returns the
    /// shift `m` and the standard minuscule cocharacter with entries in
    /// `{0, 1}`. A constant cocharacter decomposes with degree 0.
    pub fn minuscule_decomposition(&self) -> Option<(i64, MinusculeCocharacter)> {
        let max = *self.entries.first().unwrap();
        let min = *self.entries.last().unwrap();
        if max - min > 1 {
            return None;
        }
        let d = self.entries.iter().filter(|&&e| e == min + 1).count() as i64;
        let standard = MinusculeCocharacter::new(self.rank(), d)
            .expect("count of max entries is within 0..=rank");
        Some((min, standard))
    }

    pub fn is_minuscule(&self) -> bool {
        self.minuscule_decomposition().is_some()
    }
}

impl fmt::Display for DominantCocharacter {
    /// Run form, e.g. `1^4,0^4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut grouped: Vec<(i64, usize)> = Vec::new();
        for &e in &self.entries {
            match grouped.last_mut() {
                Some((v, c)) if *v == e => *c += 1,
                _ => grouped.push((e, 1)),
            }
        }
        for (i, (v, c)) in grouped.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
            if *c != 1 {
                write!(f, "^{c}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for DominantCocharacter {
    type Err = ParseLiteralError;

    /// Integer tuple with optional run exponents: `2,2,1,1` or `2^2,1^2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().is_empty() {
            return Err(ParseLiteralError::new(0, "empty cocharacter literal"));
        }
        let mut entries = Vec::new();
        let mut offset = 0usize;
        for piece in s.split(',') {
            let token = piece.trim();
            let token_offset = offset + (piece.len() - piece.trim_start().len());
            let (value_text, count) = match token.split_once('^') {
                None => (token, 1usize),
                Some((vt, ct)) => {
                    let count: usize = ct.parse().map_err(|_| {
                        ParseLiteralError::new(
                            token_offset + vt.len() + 1,
                            format!("invalid run length `{ct}`"),
                        )
                    })?;
                    (vt, count)
                }
            };
            let value: i64 = value_text.parse().map_err(|_| {
                ParseLiteralError::new(token_offset, format!("invalid integer entry `{value_text}`"))
            })?;
            if count == 0 {
                return Err(ParseLiteralError::new(token_offset, "run length must be positive"));
            }
            entries.extend(std::iter::repeat(value).take(count));
            offset += piece.len() + 1;
        }
        DominantCocharacter::new(entries)
            .map_err(|e| ParseLiteralError::new(0, e.to_string()))
    }
}

/// A minuscule dominant cocharacter of GL_n: entries `(1^d, 0^(n-d))`,
/// determined by rank and degree with `0 <= d <= n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MinusculeCocharacter {
    rank: usize,
    degree: i64,
}

impl MinusculeCocharacter {
    pub fn new(rank: usize, degree: i64) -> Result<Self, CocharacterError> {
        if rank == 0 {
            return Err(CocharacterError::Empty);
        }
        if degree < 0 || degree > rank as i64 {
            return Err(CocharacterError::DegreeOutOfRange { degree, rank });
        }
        Ok(MinusculeCocharacter { rank, degree })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn to_dominant(&self) -> DominantCocharacter {
        let mut entries = vec![1i64; self.degree as usize];
        entries.resize(self.rank, 0);
        DominantCocharacter::new(entries).expect("minuscule tuple is dominant")
    }

    /// The dominant dual `(0^(n-d), (-1)^d)` as a tuplar polygon, ready for
    /// pointwise addition.
    pub fn dual_tuplar(&self) -> TuplarPolygon {
        let d = self.degree as usize;
        let mut entries = vec![0i64; self.rank - d];
        entries.extend(std::iter::repeat(-1).take(d));
        TuplarPolygon::from_ints(&entries)
    }
}

impl fmt::Display for MinusculeCocharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dominant())
    }
}

/// Multiset of slopes with multiplicities; a convenience for permutation
/// arguments and tests.
pub fn slope_multiset(p: &ConcavePolygon) -> BTreeMap<Slope, usize> {
    let mut out = BTreeMap::new();
    for run in p.runs() {
        *out.entry(run.slope).or_insert(0) += run.length;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cp(lit: &str) -> ConcavePolygon {
        lit.parse().unwrap()
    }

    fn tp(slopes: &[(i64, i64)]) -> TuplarPolygon {
        TuplarPolygon::new(slopes.iter().map(|&(p, q)| slope(p, q)).collect())
    }

    #[test]
    fn degree_examples() {
        assert_eq!(cp("2/3^3,3/5^5").degree(), 5);
        assert_eq!(cp("1,0").degree(), 1);
        assert_eq!(cp("-1/3^3").degree(), -1);
        assert_eq!(tp(&[(1, 2), (1, 3)]).degree(), slope(5, 6));
    }

    #[test]
    fn bruhat_needs_equal_degree_and_prefix_domination() {
        assert!(cp("1,0").bruhat_geq(&cp("1/2^2")));
        assert!(!cp("1/2^2").bruhat_geq(&cp("1,0")));
        // Unequal degrees compare as false, not as an error.
        assert!(!cp("1,0").bruhat_geq(&cp("0^2")));
        assert!(!cp("0^2").bruhat_geq(&cp("1,0")));
        // Reflexive.
        assert!(cp("2/3^3").bruhat_geq(&cp("2/3^3")));
    }

    #[test]
    #[should_panic(expected = "rank mismatch")]
    fn bruhat_rank_mismatch_panics() {
        let _ = cp("1,0").bruhat_geq(&cp("1"));
    }

    #[test]
    fn slopewise_examples() {
        assert!(cp("3/5^5").slopewise_geq(&cp("1/2^4,0")));
        assert!(!cp("1/2^4,0").slopewise_geq(&cp("3/5^5")));
        // Slopewise does not need equal degrees.
        assert!(cp("1^2").slopewise_geq(&cp("0^2")));
    }

    #[test]
    fn slopewise_is_finer_than_bruhat() {
        // Equal degree + slopewise implies equality, hence Bruhat both ways.
        let p = cp("1/2^2");
        let q = cp("1/2^2");
        assert!(p.slopewise_geq(&q) && q.slopewise_geq(&p));
        // Bruhat-comparable but not slopewise-comparable:
        assert!(cp("1,0").bruhat_geq(&cp("1/2^2")));
        assert!(!cp("1,0").slopewise_geq(&cp("1/2^2")));
    }

    #[test]
    fn dual_examples() {
        assert_eq!(cp("2/3^3").dual(), cp("-2/3^3"));
        assert_eq!(cp("1,0").dual(), cp("0,-1"));
        assert_eq!(cp("2/3^3,3/5^5").dual(), cp("-3/5^5,-2/3^3"));
        let mu = DominantCocharacter::new(vec![1, 1, 0]).unwrap();
        assert_eq!(mu.dual().entries(), &[0, -1, -1]);
    }

    #[test]
    fn concave_rearrangement_sorts_descending() {
        let p = TuplarPolygon::from_ints(&[0, 1, -1]);
        assert_eq!(p.concave_rearrangement(), TuplarPolygon::from_ints(&[1, 0, -1]));
        // Maximality: the rearrangement dominates the original in Bruhat order.
        assert!(p.concave_rearrangement().bruhat_geq(&p));
    }

    #[test]
    fn to_concave_enforces_lattice() {
        assert!(tp(&[(1, 2), (1, 2)]).to_concave().is_ok());
        let err = tp(&[(1, 2)]).to_concave().unwrap_err();
        assert!(matches!(err, PolygonError::OffLattice { .. }));
        let err = tp(&[(0, 1), (1, 1)]).to_concave().unwrap_err();
        assert!(matches!(err, PolygonError::NotDescending { .. }));
    }

    #[test]
    fn direct_sum_merges_runs() {
        assert_eq!(cp("2/3^3").direct_sum(&cp("3/5^5")), cp("2/3^3,3/5^5"));
        assert_eq!(cp("3/5^5").direct_sum(&cp("2/3^3")), cp("2/3^3,3/5^5"));
        assert_eq!(cp("1,0").direct_sum(&cp("1/2^2")), cp("1,1/2^2,0"));
        assert_eq!(cp("0").direct_sum(&cp("0^2")), cp("0^3"));
        assert_eq!(ConcavePolygon::empty().direct_sum(&cp("1,0")), cp("1,0"));
    }

    #[test]
    fn pointwise_add_examples() {
        let sum = cp("2/3^3").to_tuplar().pointwise_add(&TuplarPolygon::from_ints(&[-1, -1, -1]));
        assert_eq!(sum, cp("-1/3^3").to_tuplar());
    }

    #[test]
    fn restrict_examples() {
        let p = cp("2/3^3,3/5^5");
        assert_eq!(p.restrict(0, 3).unwrap(), cp("2/3^3"));
        assert_eq!(p.restrict(3, 8).unwrap(), cp("3/5^5"));
        // Cutting mid-run off-lattice is an error.
        assert!(matches!(p.restrict(2, 4), Err(PolygonError::OffLattice { .. })));
        assert!(matches!(p.restrict(3, 9), Err(PolygonError::BadSlice { .. })));
    }

    #[test]
    fn breakpoints_examples() {
        assert_eq!(cp("2/3^3,3/5^5").breakpoints(), vec![3]);
        assert_eq!(cp("3/5^5").breakpoints(), Vec::<usize>::new());
        assert_eq!(cp("1^2,1/3^3,0^2").breakpoints(), vec![2, 5]);
    }

    #[test]
    fn vertices_are_lattice_points() {
        assert_eq!(cp("2/3^3,3/5^5").vertices(), vec![(0, 0), (3, 2), (8, 5)]);
        assert_eq!(cp("-1/3^3").vertices(), vec![(0, 0), (3, -1)]);
    }

    #[test]
    fn line_segments() {
        assert_eq!(ConcavePolygon::line(1, 1), cp("1"));
        assert_eq!(ConcavePolygon::line(5, 8), cp("5/8^8"));
        assert_eq!(ConcavePolygon::line(-2, 4), cp("-1/2^4"));
        assert_eq!(ConcavePolygon::line(4, 4), cp("1^4"));
    }

    #[test]
    fn shift_twists_every_slope() {
        assert_eq!(cp("2/3^3,3/5^5").shift(1), cp("5/3^3,8/5^5"));
        assert_eq!(cp("1/4^4,0^4").shift(-1), cp("-3/4^4,-1^4"));
    }

    #[test]
    fn split_top_peels_the_maximal_run() {
        let (top, rest) = cp("2/3^3,3/5^5").split_top().unwrap();
        assert_eq!(top, cp("2/3^3"));
        assert_eq!(rest, cp("3/5^5"));
        assert!(cp("3/5^5").split_top().is_none());
    }

    #[test]
    fn parse_and_render_literals() {
        assert_eq!(cp("2/3^3,3/5^5").to_string(), "2/3^3,3/5^5");
        assert_eq!(cp("1,0").to_string(), "1,0");
        assert_eq!(cp("1,1").to_string(), "1^2");
        assert_eq!(cp("-1").to_string(), "-1");
        // Adjacent equal slopes merge and then satisfy the lattice condition.
        assert_eq!(cp("1/2,1/2"), cp("1/2^2"));
    }

    #[test]
    fn parse_rejects_bad_literals() {
        let err = "1/2^1".parse::<ConcavePolygon>().unwrap_err();
        assert!(err.message.contains("not divisible"));
        let err = "0,1".parse::<ConcavePolygon>().unwrap_err();
        assert!(err.message.contains("strictly decrease"));
        assert_eq!(err.offset, 2);
        let err = "2/0".parse::<ConcavePolygon>().unwrap_err();
        assert!(err.message.contains("invalid slope"));
        assert!("".parse::<ConcavePolygon>().is_err());
        assert!("1^0".parse::<ConcavePolygon>().is_err());
        assert!("1,,0".parse::<ConcavePolygon>().is_err());
    }

    #[test]
    fn cocharacter_literals_and_duals() {
        let mu: DominantCocharacter = "2,2,1,1".parse().unwrap();
        assert_eq!(mu.to_string(), "2^2,1^2");
        assert_eq!(mu.degree(), 6);
        let (shift, std) = mu.minuscule_decomposition().unwrap();
        assert_eq!(shift, 1);
        assert_eq!((std.rank(), std.degree()), (4, 2));
        assert!("1,2".parse::<DominantCocharacter>().is_err());
        assert!(DominantCocharacter::new(vec![3, 1]).unwrap().minuscule_decomposition().is_none());
        // Constant cocharacters decompose with standard degree zero.
        let nu: DominantCocharacter = "2^3".parse().unwrap();
        assert_eq!(nu.minuscule_decomposition().unwrap(), (2, MinusculeCocharacter::new(3, 0).unwrap()));
    }

    #[test]
    fn minuscule_forms() {
        let mu = MinusculeCocharacter::new(8, 4).unwrap();
        assert_eq!(mu.to_dominant().entries(), &[1, 1, 1, 1, 0, 0, 0, 0]);
        assert_eq!(mu.dual_tuplar(), TuplarPolygon::from_ints(&[0, 0, 0, 0, -1, -1, -1, -1]));
        assert_eq!(mu.to_string(), "1^4,0^4");
        assert!(MinusculeCocharacter::new(2, 5).is_err());
        assert!(MinusculeCocharacter::new(2, -1).is_err());
        let zero = MinusculeCocharacter::new(3, 0).unwrap();
        assert_eq!(zero.to_dominant().entries(), &[0, 0, 0]);
    }

    // Property tests over structurally valid concave polygons.

    fn arb_concave() -> impl Strategy<Value = ConcavePolygon> {
        proptest::collection::vec((-6i64..=6, 1i64..=3, 1usize..=2), 1..=3).prop_map(|raw| {
            let mut runs: Vec<Run> = raw
                .into_iter()
                .map(|(p, q, k)| {
                    let s = slope(p, q);
                    let len = (*s.denom() as usize) * k;
                    Run::new(s, len)
                })
                .collect();
            runs.sort_by(|a, b| b.slope.cmp(&a.slope));
            ConcavePolygon::new(runs).expect("sorted lattice runs are valid")
        })
    }

    proptest! {
        #[test]
        fn dual_is_a_degree_negating_involution(p in arb_concave()) {
            prop_assert_eq!(p.dual().dual(), p.clone());
            prop_assert_eq!(p.dual().degree(), -p.degree());
        }

        #[test]
        fn direct_sum_adds_rank_and_degree(p in arb_concave(), q in arb_concave()) {
            let s = p.direct_sum(&q);
            prop_assert_eq!(s.rank(), p.rank() + q.rank());
            prop_assert_eq!(s.degree(), p.degree() + q.degree());
            prop_assert_eq!(p.direct_sum(&q), q.direct_sum(&p));
        }

        #[test]
        fn literal_roundtrip(p in arb_concave()) {
            let rendered = p.to_string();
            let reparsed: ConcavePolygon = rendered.parse().unwrap();
            prop_assert_eq!(reparsed, p);
        }

        #[test]
        fn slopewise_antisymmetry(p in arb_concave(), q in arb_concave()) {
            if p.rank() == q.rank() {
                let (pt, qt) = (p.to_tuplar(), q.to_tuplar());
                if pt.slopewise_geq(&qt) && qt.slopewise_geq(&pt) {
                    prop_assert_eq!(&p, &q);
                }
                // One direction plus equal degree already forces equality.
                if pt.slopewise_geq(&qt) && p.degree() == q.degree() {
                    prop_assert_eq!(&p, &q);
                }
            }
        }
    }
}
