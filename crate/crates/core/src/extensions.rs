//! When does a bundle arise as an extension with prescribed kernel and
//! quotient? The answer is a calculus on slope arrangements.
//!
//! For a short exact sequence `0 -> D -> E -> F -> 0` the slopes of
//! `HN(D ⊕ F)` can be rearranged into a polygon that dominates `HN(E)` in the
//! Bruhat order, with every slope placed strictly below `HN(E)` coming from
//! `D` and every slope placed strictly above coming from `F`. Such a tagged
//! arrangement is a [`PermutationWitness`]. Conversely, when `F` is broken
//! into its semistable pieces `F_1, ..., F_m` by descending slope, `E` is an
//! extension of `F` by `D` exactly when a chain
//! `D = E_0, E_1, ..., E_m = E` exists in which each `E_i` admits such a
//! witness against `E_{i-1} ⊕ F_i`; the chain with its per-step witnesses is
//! an [`ExtensionWitness`].
//!
//! Searches here are deterministic: first witness in a fixed exploration
//! order. Witnesses verify themselves independently of any search state.

use std::collections::HashSet;

use thiserror::Error;

use crate::enumeration::{enumerate_concave, EnumerationBounds};
use crate::polygon::{ConcavePolygon, Slope, TuplarPolygon};

/// Which side of the extension a slope copy is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SlopeOrigin {
    /// The kernel `D`.
    Sub,
    /// The quotient `F`.
    Quot,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("assignment has {got} slots, polygon has rank {expected}")]
    AssignmentLength { expected: usize, got: usize },
    #[error("assignment is not composed of the kernel and quotient slope multisets")]
    MultisetMismatch,
    #[error("arranged polygon does not dominate the target in Bruhat order")]
    NotBruhatDominant,
    #[error("slot {position}: slope {slope} sits {side} the target slope {target} but is tagged {origin:?}")]
    TagClause { position: usize, slope: Slope, target: Slope, side: &'static str, origin: SlopeOrigin },
    #[error("chain endpoints do not match the kernel and the total polygon")]
    ChainEndpoints,
    #[error("chain has {chain} polygons and {steps} step witnesses for {runs} quotient runs")]
    ChainShape { chain: usize, steps: usize, runs: usize },
    #[error("chain link {index}: rank or degree does not add up")]
    ChainArithmetic { index: usize },
}

/// A tagged arrangement witnessing one extension step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationWitness {
    assignment: Vec<(Slope, SlopeOrigin)>,
}

impl PermutationWitness {
    pub fn assignment(&self) -> &[(Slope, SlopeOrigin)] {
        &self.assignment
    }

    /// The arranged polygon, slot by slot.
    pub fn polygon(&self) -> TuplarPolygon {
        TuplarPolygon::new(self.assignment.iter().map(|&(s, _)| s).collect())
    }

    /// Checks every witness invariant against the triple, with no reference
    /// to how the witness was found:
    /// the tagged multiset splits into the kernel and quotient slopes, the
    /// arrangement dominates the target in Bruhat order, and each slot's tag
    /// is forced by its position relative to the target slope.
    pub fn verify(
        &self,
        sub: &ConcavePolygon,
        total: &ConcavePolygon,
        quot: &ConcavePolygon,
    ) -> Result<(), WitnessError> {
        let n = total.rank();
        if self.assignment.len() != n {
            return Err(WitnessError::AssignmentLength { expected: n, got: self.assignment.len() });
        }
        let mut got: Vec<(Slope, SlopeOrigin)> = self.assignment.clone();
        got.sort_unstable();
        let mut expected: Vec<(Slope, SlopeOrigin)> = tagged_slopes(sub, SlopeOrigin::Sub)
            .chain(tagged_slopes(quot, SlopeOrigin::Quot))
            .collect();
        expected.sort_unstable();
        if got != expected {
            return Err(WitnessError::MultisetMismatch);
        }
        if !self.polygon().bruhat_geq(&total.to_tuplar()) {
            return Err(WitnessError::NotBruhatDominant);
        }
        let target = total.slopes();
        for (position, &(slope, origin)) in self.assignment.iter().enumerate() {
            if slope < target[position] && origin != SlopeOrigin::Sub {
                return Err(WitnessError::TagClause {
                    position,
                    slope,
                    target: target[position],
                    side: "below",
                    origin,
                });
            }
            if slope > target[position] && origin != SlopeOrigin::Quot {
                return Err(WitnessError::TagClause {
                    position,
                    slope,
                    target: target[position],
                    side: "above",
                    origin,
                });
            }
        }
        Ok(())
    }
}

fn tagged_slopes(
    p: &ConcavePolygon,
    origin: SlopeOrigin,
) -> impl Iterator<Item = (Slope, SlopeOrigin)> + '_ {
    p.runs().iter().flat_map(move |r| std::iter::repeat((r.slope, origin)).take(r.length))
}

/// Equal-rank subsheaf criterion: `sub` embeds into `ambient` as a subsheaf
/// of full rank exactly when `ambient` dominates slopewise.
///
/// Panics if the ranks differ.
pub fn is_subsheaf(sub: &ConcavePolygon, ambient: &ConcavePolygon) -> bool {
    ambient.slopewise_geq(sub)
}

/// Every extension of `quot` by `sub` splits when the kernel's minimal slope
/// dominates the quotient's maximal slope. Degenerate ranks split vacuously.
pub fn every_extension_splits(sub: &ConcavePolygon, quot: &ConcavePolygon) -> bool {
    match (sub.min_slope(), quot.max_slope()) {
        (Some(lo), Some(hi)) => lo >= hi,
        _ => true,
    }
}

/// First tagged arrangement of the kernel and quotient slopes that dominates
/// `total` in Bruhat order and satisfies the tag clauses, or `None`.
///
/// Backtracking over slots in descending slope order with three prunes: the
/// per-slot tag clauses, the running prefix-sum constraint (exact, not a
/// heuristic), and a descending-completion bound justified by the maximality
/// of the concave rearrangement. Dead remainder multisets are memoized.
///
/// Panics unless ranks and degrees add up.
pub fn permutation_exists(
    sub: &ConcavePolygon,
    total: &ConcavePolygon,
    quot: &ConcavePolygon,
) -> Option<PermutationWitness> {
    assert_eq!(
        sub.rank() + quot.rank(),
        total.rank(),
        "permutation_exists: ranks must add up"
    );
    assert_eq!(
        sub.degree() + quot.degree(),
        total.degree(),
        "permutation_exists: degrees must add up"
    );
    let mut pool: Vec<(Slope, SlopeOrigin, usize)> = Vec::new();
    for run in sub.runs() {
        pool.push((run.slope, SlopeOrigin::Sub, run.length));
    }
    for run in quot.runs() {
        pool.push((run.slope, SlopeOrigin::Quot, run.length));
    }
    // Descending slope, kernel copies before quotient copies at equal slope.
    pool.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut search = PermutationSearch {
        target: total.slopes(),
        target_prefix: total.to_tuplar().prefix_sums(),
        items: pool.iter().map(|&(s, o, _)| (s, o)).collect(),
        counts: pool.iter().map(|&(_, _, c)| c).collect(),
        assignment: Vec::with_capacity(total.rank()),
        dead: HashSet::new(),
    };
    if search.dfs(0, Slope::default()) {
        Some(PermutationWitness { assignment: search.assignment })
    } else {
        None
    }
}

struct PermutationSearch {
    target: Vec<Slope>,
    target_prefix: Vec<Slope>,
    items: Vec<(Slope, SlopeOrigin)>,
    counts: Vec<usize>,
    assignment: Vec<(Slope, SlopeOrigin)>,
    dead: HashSet<Vec<usize>>,
}

impl PermutationSearch {
    /// The remaining multiset determines the slot index and the running sum,
    /// so it is the whole memo key.
    fn dfs(&mut self, slot: usize, running: Slope) -> bool {
        if slot == self.target.len() {
            return true;
        }
        if self.dead.contains(&self.counts) {
            return false;
        }
        if !self.descending_completion_feasible(slot, running) {
            self.dead.insert(self.counts.clone());
            return false;
        }
        for idx in 0..self.items.len() {
            if self.counts[idx] == 0 {
                continue;
            }
            let (slope, origin) = self.items[idx];
            if slope < self.target[slot] && origin != SlopeOrigin::Sub {
                continue;
            }
            if slope > self.target[slot] && origin != SlopeOrigin::Quot {
                continue;
            }
            let next_running = running + slope;
            if next_running < self.target_prefix[slot] {
                continue;
            }
            self.counts[idx] -= 1;
            self.assignment.push((slope, origin));
            if self.dfs(slot + 1, next_running) {
                return true;
            }
            self.assignment.pop();
            self.counts[idx] += 1;
        }
        self.dead.insert(self.counts.clone());
        false
    }

    /// Upper bound: placing the remaining slopes in descending order
    /// maximizes every prefix sum, so if even that violates a prefix
    /// constraint no completion exists. Ignores tag clauses, hence admissible.
    fn descending_completion_feasible(&self, slot: usize, running: Slope) -> bool {
        let mut acc = running;
        let mut position = slot;
        for (idx, &(slope, _)) in self.items.iter().enumerate() {
            for _ in 0..self.counts[idx] {
                acc += slope;
                if acc < self.target_prefix[position] {
                    return false;
                }
                position += 1;
            }
        }
        true
    }
}

/// A chain of intermediate polygons with one permutation witness per
/// semistable quotient piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionWitness {
    chain: Vec<ConcavePolygon>,
    steps: Vec<PermutationWitness>,
}

impl ExtensionWitness {
    pub fn chain(&self) -> &[ConcavePolygon] {
        &self.chain
    }

    pub fn steps(&self) -> &[PermutationWitness] {
        &self.steps
    }

    /// Full independent re-check: endpoints, one step per quotient run, rank
    /// and degree bookkeeping per link, and every step witness.
    pub fn verify(
        &self,
        sub: &ConcavePolygon,
        total: &ConcavePolygon,
        quot: &ConcavePolygon,
    ) -> Result<(), WitnessError> {
        let runs = quot.runs();
        if self.chain.len() != runs.len() + 1 || self.steps.len() != runs.len() {
            return Err(WitnessError::ChainShape {
                chain: self.chain.len(),
                steps: self.steps.len(),
                runs: runs.len(),
            });
        }
        if self.chain.first() != Some(sub) || self.chain.last() != Some(total) {
            return Err(WitnessError::ChainEndpoints);
        }
        for (index, run) in runs.iter().enumerate() {
            let piece = ConcavePolygon::constant(run.slope, run.length)
                .expect("runs of a valid polygon are on-lattice");
            let before = &self.chain[index];
            let after = &self.chain[index + 1];
            if before.rank() + piece.rank() != after.rank()
                || before.degree() + piece.degree() != after.degree()
            {
                return Err(WitnessError::ChainArithmetic { index });
            }
            self.steps[index].verify(before, after, &piece)?;
        }
        Ok(())
    }
}

/// Searches for a chain witnessing `total` as an extension of `quot` by
/// `sub`. Intermediate candidates at each level are drawn from the complete
/// enumeration bounded by the direct sum so far, filtered by Bruhat
/// domination and by reachability of `total` under the remaining quotient
/// pieces. Dead `(level, polygon)` states are memoized; reachability of the
/// total from a state does not depend on how the state was reached.
///
/// A rank-0 quotient admits only the empty chain: witness iff `sub == total`.
///
/// Panics unless ranks and degrees add up.
pub fn extension_exists(
    sub: &ConcavePolygon,
    total: &ConcavePolygon,
    quot: &ConcavePolygon,
) -> Option<ExtensionWitness> {
    assert_eq!(
        sub.rank() + quot.rank(),
        total.rank(),
        "extension_exists: ranks must add up"
    );
    assert_eq!(
        sub.degree() + quot.degree(),
        total.degree(),
        "extension_exists: degrees must add up"
    );
    let pieces: Vec<ConcavePolygon> = quot
        .runs()
        .iter()
        .map(|r| ConcavePolygon::constant(r.slope, r.length).expect("run is on-lattice"))
        .collect();
    if pieces.is_empty() {
        if sub == total {
            return Some(ExtensionWitness { chain: vec![sub.clone()], steps: Vec::new() });
        }
        return None;
    }
    // suffix[i] = F_i ⊕ ... ⊕ F_{m-1}, for the reachability prune.
    let mut suffix = vec![ConcavePolygon::empty(); pieces.len() + 1];
    for i in (0..pieces.len()).rev() {
        suffix[i] = pieces[i].direct_sum(&suffix[i + 1]);
    }
    let mut search = ChainSearch { total, pieces: &pieces, suffix, dead: HashSet::new() };
    let mut chain = vec![sub.clone()];
    let mut steps = Vec::new();
    if search.dfs(0, &mut chain, &mut steps) {
        let witness = ExtensionWitness { chain, steps };
        debug_assert!(witness.verify(sub, total, quot).is_ok());
        debug_assert!(sub.direct_sum(quot).bruhat_geq(total));
        Some(witness)
    } else {
        None
    }
}

struct ChainSearch<'a> {
    total: &'a ConcavePolygon,
    pieces: &'a [ConcavePolygon],
    suffix: Vec<ConcavePolygon>,
    dead: HashSet<(usize, ConcavePolygon)>,
}

impl ChainSearch<'_> {
    fn dfs(
        &mut self,
        level: usize,
        chain: &mut Vec<ConcavePolygon>,
        steps: &mut Vec<PermutationWitness>,
    ) -> bool {
        let current = chain.last().expect("chain starts nonempty").clone();
        let piece = &self.pieces[level];
        if level + 1 == self.pieces.len() {
            if let Some(w) = permutation_exists(&current, self.total, piece) {
                chain.push(self.total.clone());
                steps.push(w);
                return true;
            }
            return false;
        }
        let ds = current.direct_sum(piece);
        let bounds = EnumerationBounds::new(
            ds.rank(),
            ds.degree(),
            ds.min_slope().expect("nonempty"),
            ds.max_slope().expect("nonempty"),
        )
        .expect("direct-sum window is well formed");
        for candidate in enumerate_concave(&bounds) {
            if !ds.bruhat_geq(&candidate) {
                continue;
            }
            // total must stay Bruhat-reachable under the remaining pieces.
            if !candidate.direct_sum(&self.suffix[level + 1]).bruhat_geq(self.total) {
                continue;
            }
            let state = (level + 1, candidate.clone());
            if self.dead.contains(&state) {
                continue;
            }
            if let Some(w) = permutation_exists(&current, &candidate, piece) {
                chain.push(candidate);
                steps.push(w);
                if self.dfs(level + 1, chain, steps) {
                    return true;
                }
                steps.pop();
                chain.pop();
            }
            self.dead.insert(state);
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::slope;

    fn cp(lit: &str) -> ConcavePolygon {
        lit.parse().unwrap()
    }

    #[test]
    fn subsheaf_is_slopewise_domination_of_the_ambient() {
        assert!(is_subsheaf(&cp("1/2^4,0"), &cp("3/5^5")));
        assert!(!is_subsheaf(&cp("3/5^5"), &cp("1/2^4,0")));
        assert!(is_subsheaf(&cp("2/3^3"), &cp("2/3^3")));
    }

    #[test]
    fn splitting_compares_extreme_slopes() {
        assert!(every_extension_splits(&cp("2/3^3"), &cp("3/5^5")));
        assert!(!every_extension_splits(&cp("3/5^5"), &cp("2/3^3")));
        assert!(every_extension_splits(&cp("0^2"), &cp("0^3")));
        assert!(every_extension_splits(&cp("1,0"), &ConcavePolygon::empty()));
    }

    #[test]
    fn permutation_witness_for_a_twisted_kernel() {
        let sub = cp("-1/3^3");
        let total = cp("1/4^4,0^4");
        let quot = cp("1/2^4,0");
        let w = permutation_exists(&sub, &total, &quot).expect("witness exists");
        w.verify(&sub, &total, &quot).unwrap();
        assert!(w.polygon().bruhat_geq(&total.to_tuplar()));
    }

    #[test]
    fn permutation_blocked_by_unplaceable_slope() {
        // Every copy of -1/5 would sit strictly below the target but belongs
        // to the quotient.
        let sub = cp("2/3^3");
        let total = cp("1/4^4,0^4");
        let quot = cp("-1/5^5");
        assert!(permutation_exists(&sub, &total, &quot).is_none());
    }

    #[test]
    fn identity_permutation_on_equal_multisets() {
        let sub = cp("0");
        let total = cp("0^2");
        let quot = cp("0");
        let w = permutation_exists(&sub, &total, &quot).unwrap();
        w.verify(&sub, &total, &quot).unwrap();
        assert_eq!(w.polygon(), total.to_tuplar());
    }

    #[test]
    #[should_panic(expected = "ranks must add up")]
    fn permutation_rank_precondition_panics() {
        let _ = permutation_exists(&cp("0"), &cp("0^2"), &cp("0^2"));
    }

    #[test]
    fn corrupting_a_witness_fails_verification() {
        let sub = cp("-1/3^3");
        let total = cp("1/4^4,0^4");
        let quot = cp("1/2^4,0");
        let w = permutation_exists(&sub, &total, &quot).unwrap();
        let mut tampered = w.clone();
        // Flip the first tag. The slope sits strictly above the target, so
        // the tag clause (or at worst the multiset check) must fire.
        tampered.assignment[0].1 = match tampered.assignment[0].1 {
            SlopeOrigin::Sub => SlopeOrigin::Quot,
            SlopeOrigin::Quot => SlopeOrigin::Sub,
        };
        assert!(tampered.verify(&sub, &total, &quot).is_err());
        let mut reordered = w.clone();
        reordered.assignment.reverse();
        assert!(reordered.verify(&sub, &total, &quot).is_err());
    }

    #[test]
    fn extension_chain_with_two_quotient_pieces() {
        let sub = cp("-1/3^3");
        let total = cp("1/4^4,0^4");
        let quot = cp("1/2^4,0");
        let w = extension_exists(&sub, &total, &quot).expect("extension exists");
        w.verify(&sub, &total, &quot).unwrap();
        assert_eq!(w.chain().len(), 3);
        assert_eq!(w.chain().first(), Some(&sub));
        assert_eq!(w.chain().last(), Some(&total));
    }

    #[test]
    fn extension_with_semistable_quotient() {
        let sub = cp("1/4^4");
        let total = cp("3/5^5,1/3^3");
        let quot = cp("3/4^4");
        let w = extension_exists(&sub, &total, &quot).expect("extension exists");
        w.verify(&sub, &total, &quot).unwrap();
        assert_eq!(w.chain().len(), 2);
    }

    #[test]
    fn split_extension_always_exists() {
        for (d, f) in [
            ("2/3^3", "3/5^5"),
            ("0", "1,0"),
            ("1/2^2", "1/2^2"),
            ("-1^2", "1^3"),
        ] {
            let sub = cp(d);
            let quot = cp(f);
            let total = sub.direct_sum(&quot);
            let w = extension_exists(&sub, &total, &quot)
                .unwrap_or_else(|| panic!("split extension missing for {d} and {f}"));
            w.verify(&sub, &total, &quot).unwrap();
        }
    }

    #[test]
    fn rank_zero_quotient_means_equality() {
        let d = cp("2/3^3");
        let w = extension_exists(&d, &d, &ConcavePolygon::empty()).unwrap();
        assert_eq!(w.chain(), &[d.clone()]);
        assert!(w.steps().is_empty());
        w.verify(&d, &d, &ConcavePolygon::empty()).unwrap();
        assert!(extension_exists(&cp("1,0"), &cp("1/2^2"), &ConcavePolygon::empty()).is_none());
    }

    #[test]
    fn blocked_extension_with_forced_slots() {
        // The third copy of slope 1 cannot be placed: the two slots where the
        // target carries slope 1 absorb two copies, and everywhere else the
        // copy would sit above a target slope of at most 1/3 while the
        // quotient has no slope 1.
        assert!(extension_exists(&cp("1^3"), &cp("1^2,1/3^3,0^2"), &cp("0^4")).is_none());
    }

    #[test]
    fn positive_results_are_bruhat_dominated_by_the_direct_sum() {
        let cases = [
            ("-1/3^3", "1/4^4,0^4", "1/2^4,0"),
            ("1/4^4", "3/5^5,1/3^3", "3/4^4"),
            ("0", "1,1/2^2", "1^2"),
        ];
        for (d, e, f) in cases {
            let (sub, total, quot) = (cp(d), cp(e), cp(f));
            if let Some(w) = extension_exists(&sub, &total, &quot) {
                w.verify(&sub, &total, &quot).unwrap();
                let ds = sub.direct_sum(&quot);
                assert!(ds.bruhat_geq(&total));
                assert!(ds.max_slope().unwrap() >= total.max_slope().unwrap());
                assert!(ds.min_slope().unwrap() <= total.min_slope().unwrap());
            }
        }
    }

    /// Exhaustive dichotomy for semistable kernel and quotient: with
    /// dominating kernel slope only the split total works; otherwise the
    /// Bruhat window below the direct sum is exactly the set of totals.
    #[test]
    fn semistable_pair_dichotomy() {
        let slopes = [slope(-1, 1), slope(-1, 2), slope(0, 1), slope(1, 2), slope(1, 1)];
        for &ls in &slopes {
            for &lq in &slopes {
                for sub_rank in 1..=2usize {
                    for quot_rank in 1..=2usize {
                        let sub = match ConcavePolygon::constant(ls, sub_rank) {
                            Ok(p) => p,
                            Err(_) => continue,
                        };
                        let quot = match ConcavePolygon::constant(lq, quot_rank) {
                            Ok(p) => p,
                            Err(_) => continue,
                        };
                        let ds = sub.direct_sum(&quot);
                        let bounds = EnumerationBounds::new(
                            ds.rank(),
                            ds.degree(),
                            ds.min_slope().unwrap(),
                            ds.max_slope().unwrap(),
                        )
                        .unwrap();
                        for total in enumerate_concave(&bounds) {
                            let got = extension_exists(&sub, &total, &quot);
                            let expected = if ls >= lq {
                                total == ds
                            } else {
                                ds.bruhat_geq(&total)
                            };
                            assert_eq!(
                                got.is_some(),
                                expected,
                                "sub {sub}, quot {quot}, total {total}"
                            );
                            if let Some(w) = got {
                                w.verify(&sub, &total, &quot).unwrap();
                            }
                        }
                    }
                }
            }
        }
    }
}
