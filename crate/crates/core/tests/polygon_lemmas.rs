//! Order-theoretic lemmas about the Bruhat order, concave rearrangement, and
//! direct sums, checked exhaustively at small scale and by property tests at
//! larger ranks. The acceptance suite repeats the exhaustive sweeps at the
//! contractual bounds.

use newton_strata::enumeration::{enumerate_concave, EnumerationBounds};
use newton_strata::{slope, ConcavePolygon, Slope, TuplarPolygon};
use proptest::prelude::*;

/// Reduced slopes in [-1, 1] with denominator at most `max_den`, ascending.
fn grid(max_den: i64) -> Vec<Slope> {
    let mut out = std::collections::BTreeSet::new();
    for den in 1..=max_den {
        for num in -den..=den {
            out.insert(slope(num, den));
        }
    }
    out.into_iter().collect()
}

fn for_each_tuple(grid: &[Slope], rank: usize, f: &mut impl FnMut(&[Slope])) {
    let mut indices = vec![0usize; rank];
    loop {
        let tuple: Vec<Slope> = indices.iter().map(|&i| grid[i]).collect();
        f(&tuple);
        let mut pos = rank;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            indices[pos] += 1;
            if indices[pos] < grid.len() {
                break;
            }
            indices[pos] = 0;
        }
    }
}

fn concave_family(rank: usize, degree: i64) -> Vec<ConcavePolygon> {
    match EnumerationBounds::new(rank, degree, slope(-1, 1), slope(1, 1)) {
        Ok(bounds) => enumerate_concave(&bounds).collect(),
        Err(_) => Vec::new(),
    }
}

#[test]
fn concave_rearrangement_is_bruhat_maximal() {
    let grid = grid(3);
    let mut checked = 0usize;
    for rank in 1..=4usize {
        for_each_tuple(&grid, rank, &mut |slopes| {
            let p = TuplarPolygon::new(slopes.to_vec());
            assert!(
                p.concave_rearrangement().bruhat_geq(&p),
                "rearrangement fails to dominate {p}"
            );
            checked += 1;
        });
    }
    assert!(checked > 5000);
}

#[test]
fn bruhat_is_a_partial_order_on_fixed_degree_tuples() {
    let grid = grid(2);
    let mut by_degree: std::collections::BTreeMap<Slope, Vec<TuplarPolygon>> = Default::default();
    for_each_tuple(&grid, 3, &mut |slopes| {
        let p = TuplarPolygon::new(slopes.to_vec());
        by_degree.entry(p.degree()).or_default().push(p);
    });
    for class in by_degree.values() {
        for p in class {
            assert!(p.bruhat_geq(p));
        }
        for p in class {
            for q in class {
                if p.bruhat_geq(q) && q.bruhat_geq(p) {
                    assert_eq!(p, q, "antisymmetry fails");
                }
            }
        }
    }
    // Transitivity on the heaviest class only, to keep the cube tractable.
    let class = by_degree.values().max_by_key(|c| c.len()).unwrap();
    for p in class {
        for q in class {
            if !p.bruhat_geq(q) {
                continue;
            }
            for r in class {
                if q.bruhat_geq(r) {
                    assert!(p.bruhat_geq(r), "transitivity fails: {p} {q} {r}");
                }
            }
        }
    }
}

/// For concave inputs the direct sum respects the Bruhat order.
#[test]
fn direct_sum_is_bruhat_monotone_on_concave_inputs() {
    let mut checked = 0usize;
    for left_rank in 1..=2usize {
        for right_rank in 1..=2usize {
            for left_deg in -2..=2i64 {
                for right_deg in -2..=2i64 {
                    let lefts = concave_family(left_rank, left_deg);
                    let rights = concave_family(right_rank, right_deg);
                    for p in &lefts {
                        for p2 in &lefts {
                            if !p.bruhat_geq(p2) {
                                continue;
                            }
                            for q in &rights {
                                for q2 in &rights {
                                    if !q.bruhat_geq(q2) {
                                        continue;
                                    }
                                    assert!(
                                        p.direct_sum(q).bruhat_geq(&p2.direct_sum(q2)),
                                        "monotonicity fails: ({p})⊕({q}) vs ({p2})⊕({q2})"
                                    );
                                    checked += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 150);
}

/// Concavity in the monotonicity lemma is essential: a line segment
/// dominates a convex tuple, yet the direct sums compare the other way.
#[test]
fn monotonicity_needs_concavity() {
    let p = TuplarPolygon::new(vec![slope(1, 2), slope(1, 2)]);
    let convex = TuplarPolygon::new(vec![slope(0, 1), slope(1, 1)]);
    assert!(p.bruhat_geq(&convex));
    let left = p.direct_sum(&p);
    let right = convex.direct_sum(&convex);
    assert_eq!(left, TuplarPolygon::new(vec![slope(1, 2); 4]));
    assert_eq!(
        right,
        TuplarPolygon::new(vec![slope(1, 1), slope(1, 1), slope(0, 1), slope(0, 1)])
    );
    assert!(!left.bruhat_geq(&right));
}

/// (P⊕Q) + (P′⊕Q′) dominates (P+P′) ⊕ (Q+Q′) for arbitrary tuples.
#[test]
fn pointwise_sum_of_direct_sums_dominates() {
    let grid = grid(2);
    let mut pairs_one: Vec<(TuplarPolygon, TuplarPolygon)> = Vec::new();
    for_each_tuple(&grid, 2, &mut |slopes| {
        pairs_one.push((
            TuplarPolygon::new(vec![slopes[0]]),
            TuplarPolygon::new(vec![slopes[1]]),
        ));
    });
    let mut pairs_two: Vec<(TuplarPolygon, TuplarPolygon)> = Vec::new();
    for_each_tuple(&grid, 4, &mut |slopes| {
        pairs_two.push((
            TuplarPolygon::new(slopes[..2].to_vec()),
            TuplarPolygon::new(slopes[2..].to_vec()),
        ));
    });
    let mut checked = 0usize;
    for (p, p2) in &pairs_one {
        for (q, q2) in &pairs_two {
            let left = p.direct_sum(q).pointwise_add(&p2.direct_sum(q2));
            let right = p.pointwise_add(p2).direct_sum(&q.pointwise_add(q2));
            assert!(left.bruhat_geq(&right), "P={p} P'={p2} Q={q} Q'={q2}");
            checked += 1;
        }
    }
    assert!(checked > 10_000);
}

fn arb_slope(max_den: i64) -> impl Strategy<Value = Slope> {
    (1..=max_den).prop_flat_map(move |den| {
        (-3 * den..=3 * den).prop_map(move |num| slope(num, den))
    })
}

fn arb_tuple(rank: usize) -> impl Strategy<Value = Vec<Slope>> {
    proptest::collection::vec(arb_slope(12), rank)
}

proptest! {
    #[test]
    fn maximality_at_larger_rank(slopes in (1..=8usize).prop_flat_map(arb_tuple)) {
        let p = TuplarPolygon::new(slopes);
        prop_assert!(p.concave_rearrangement().bruhat_geq(&p));
    }

    #[test]
    fn sum_of_direct_sums_at_larger_rank(
        left in (1..=4usize).prop_flat_map(|r| (arb_tuple(r), arb_tuple(r))),
        right in (1..=4usize).prop_flat_map(|r| (arb_tuple(r), arb_tuple(r))),
    ) {
        let (p, p2) = (TuplarPolygon::new(left.0), TuplarPolygon::new(left.1));
        let (q, q2) = (TuplarPolygon::new(right.0), TuplarPolygon::new(right.1));
        let lhs = p.direct_sum(&q).pointwise_add(&p2.direct_sum(&q2));
        let rhs = p.pointwise_add(&p2).direct_sum(&q.pointwise_add(&q2));
        prop_assert!(lhs.bruhat_geq(&rhs));
    }

    #[test]
    fn dual_distributes_over_direct_sum(
        left in (1..=4usize).prop_flat_map(arb_tuple),
        right in (1..=4usize).prop_flat_map(arb_tuple),
    ) {
        let p = TuplarPolygon::new(left);
        let q = TuplarPolygon::new(right);
        let direct = p.direct_sum(&q).dual();
        let distributed = p.dual().direct_sum(&q.dual());
        // Duals reverse the order, so compare as multisets via rearrangement.
        prop_assert_eq!(
            direct.concave_rearrangement(),
            distributed.concave_rearrangement()
        );
    }
}
