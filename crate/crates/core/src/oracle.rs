//! Brute-force reference implementations for the test suites.
//!
//! Everything here trades speed for literalness: permutations are checked by
//! enumerating the tagged multiset outright, polygons by filtering descending
//! tuples over a denominator grid. Guards are hard errors; an oracle that
//! silently truncates is not an oracle. Nothing in this module calls the
//! optimized searches it exists to validate.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::enumeration::{enumerate_concave, EnumerationBounds};
use crate::extensions::SlopeOrigin;
use crate::polygon::{slope, ConcavePolygon, Slope};
use crate::strata::ModificationQuery;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{what} {got} exceeds the brute-force guard {limit}")]
    GuardExceeded { what: &'static str, got: usize, limit: usize },
    #[error("slope window is empty")]
    EmptyWindow,
    #[error("rank bound must be at least 1")]
    ZeroRank,
    #[error("denominator bound must be at least 1")]
    ZeroDenominator,
}

/// Bounds for generated test corpora: rank, slope denominators, and the
/// slope window, all inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusSpec {
    max_rank: usize,
    max_denominator: usize,
    window: (Slope, Slope),
}

impl CorpusSpec {
    pub fn new(
        max_rank: usize,
        max_denominator: usize,
        window: (Slope, Slope),
    ) -> Result<Self, OracleError> {
        if max_rank == 0 {
            return Err(OracleError::ZeroRank);
        }
        if max_denominator == 0 {
            return Err(OracleError::ZeroDenominator);
        }
        if window.0 > window.1 {
            return Err(OracleError::EmptyWindow);
        }
        Ok(CorpusSpec { max_rank, max_denominator, window })
    }

    pub fn max_rank(&self) -> usize {
        self.max_rank
    }

    pub fn max_denominator(&self) -> usize {
        self.max_denominator
    }

    pub fn window(&self) -> (Slope, Slope) {
        self.window
    }
}

/// Literal check of the tagged-arrangement definition: some distinct
/// permutation of the kernel and quotient slopes dominates the target
/// prefix-wise with equal total, every slope strictly below the target slot
/// drawn from the kernel and every slope strictly above drawn from the
/// quotient.
///
/// Guarded at rank 8; the enumeration is factorial by design.
pub fn brute_permutation_exists(
    sub: &ConcavePolygon,
    total: &ConcavePolygon,
    quot: &ConcavePolygon,
) -> Result<bool, OracleError> {
    if total.rank() > 8 {
        return Err(OracleError::GuardExceeded { what: "rank", got: total.rank(), limit: 8 });
    }
    assert_eq!(sub.rank() + quot.rank(), total.rank(), "ranks must add up");
    let mut items: Vec<(Slope, SlopeOrigin)> = Vec::new();
    for run in sub.runs() {
        items.extend(std::iter::repeat((run.slope, SlopeOrigin::Sub)).take(run.length));
    }
    for run in quot.runs() {
        items.extend(std::iter::repeat((run.slope, SlopeOrigin::Quot)).take(run.length));
    }
    items.sort_unstable();
    let target = total.slopes();
    let mut used = vec![false; items.len()];
    let mut current = Vec::with_capacity(items.len());
    Ok(any_distinct_permutation(&items, &mut used, &mut current, &|perm| {
        satisfies_definition(perm, &target)
    }))
}

/// Walks every distinct permutation of a sorted multiset, applying the
/// predicate at the leaves. Equal items are taken left to right, which is
/// what makes the walk duplicate-free.
fn any_distinct_permutation(
    items: &[(Slope, SlopeOrigin)],
    used: &mut [bool],
    current: &mut Vec<(Slope, SlopeOrigin)>,
    predicate: &dyn Fn(&[(Slope, SlopeOrigin)]) -> bool,
) -> bool {
    if current.len() == items.len() {
        return predicate(current);
    }
    for i in 0..items.len() {
        if used[i] {
            continue;
        }
        if i > 0 && items[i] == items[i - 1] && !used[i - 1] {
            continue;
        }
        used[i] = true;
        current.push(items[i]);
        if any_distinct_permutation(items, used, current, predicate) {
            return true;
        }
        current.pop();
        used[i] = false;
    }
    false
}

fn satisfies_definition(perm: &[(Slope, SlopeOrigin)], target: &[Slope]) -> bool {
    let mut arranged = Slope::from(0);
    let mut wanted = Slope::from(0);
    for (i, &(s, origin)) in perm.iter().enumerate() {
        arranged += s;
        wanted += target[i];
        if arranged < wanted {
            return false;
        }
        if s < target[i] && origin != SlopeOrigin::Sub {
            return false;
        }
        if s > target[i] && origin != SlopeOrigin::Quot {
            return false;
        }
    }
    arranged == wanted
}

/// Every concave lattice polygon of the given rank and degree with slopes on
/// the grid: reduced fractions inside the window with denominator at most
/// the bound. Descending tuples over the grid, filtered by exact sum and by
/// polygon validity.
///
/// Guarded at rank 5.
pub fn brute_concave_enumeration(
    spec: &CorpusSpec,
    rank: usize,
    degree: i64,
) -> Result<BTreeSet<ConcavePolygon>, OracleError> {
    if rank == 0 {
        return Err(OracleError::ZeroRank);
    }
    if rank > 5 {
        return Err(OracleError::GuardExceeded { what: "rank", got: rank, limit: 5 });
    }
    let grid = slope_grid(spec);
    let mut out = BTreeSet::new();
    let mut stack = Vec::with_capacity(rank);
    descending_tuples(&grid, rank, degree, Slope::from(0), 0, &mut stack, &mut out);
    Ok(out)
}

/// All reduced slopes within the window with denominator at most the bound,
/// ascending.
fn slope_grid(spec: &CorpusSpec) -> Vec<Slope> {
    let mut grid = BTreeSet::new();
    for den in 1..=spec.max_denominator as i64 {
        let lo = (spec.window.0 * den).ceil().to_integer();
        let hi = (spec.window.1 * den).floor().to_integer();
        for num in lo..=hi {
            grid.insert(slope(num, den));
        }
    }
    grid.into_iter().collect()
}

fn descending_tuples(
    grid: &[Slope],
    rank: usize,
    degree: i64,
    sum: Slope,
    start: usize,
    stack: &mut Vec<Slope>,
    out: &mut BTreeSet<ConcavePolygon>,
) {
    if stack.len() == rank {
        if sum == Slope::from(degree) {
            if let Ok(p) = ConcavePolygon::from_slopes(stack) {
                out.insert(p);
            }
        }
        return;
    }
    // The grid is ascending; taking indices from `start` upward while
    // pushing to the front keeps the tuple descending.
    for i in start..grid.len() {
        stack.insert(0, grid[i]);
        descending_tuples(grid, rank, degree, sum + grid[i], i, stack, out);
        stack.remove(0);
    }
}

/// Deterministic stream of all modification queries within the bounds:
/// equal-rank pairs with degree difference between 0 and the rank. Ranks
/// ascend, then original degrees, then enumeration order on each side.
pub fn corpus(spec: CorpusSpec) -> impl Iterator<Item = ModificationQuery> {
    (1..=spec.max_rank).flat_map(move |rank| {
        let r = rank as i64;
        let deg_lo = (spec.window.0 * r).ceil().to_integer();
        let deg_hi = (spec.window.1 * r).floor().to_integer();
        (deg_lo..=deg_hi).flat_map(move |deg_e| {
            bounded_polygons(spec, rank, deg_e).into_iter().flat_map(move |original| {
                ((deg_e - r)..=deg_e).flat_map(move |deg_p| {
                    let original = original.clone();
                    bounded_polygons(spec, rank, deg_p).into_iter().map(move |modified| {
                        ModificationQuery::new(original.clone(), modified)
                            .expect("ranks are equal by construction")
                    })
                })
            })
        })
    })
}

fn bounded_polygons(spec: CorpusSpec, rank: usize, degree: i64) -> Vec<ConcavePolygon> {
    let Ok(bounds) = EnumerationBounds::new(rank, degree, spec.window.0, spec.window.1) else {
        return Vec::new();
    };
    enumerate_concave(&bounds)
        .filter(|p| {
            p.runs().iter().all(|run| *run.slope.denom() as usize <= spec.max_denominator)
        })
        .collect()
}
