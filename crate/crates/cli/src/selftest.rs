//! Bounded replay of the property corpus behind `newton-strata selftest`.
//!
//! Each section mirrors one family of invariants from the test suites but at
//! a scale controlled by `--max-rank` and `--max-denominator`, so a user can
//! revalidate an installed binary in seconds. Failures are collected, never
//! panicked, and printed as polygon literals.

use std::collections::BTreeSet;

use newton_strata::enumeration::{enumerate_concave, farey_descending, EnumerationBounds};
use newton_strata::extensions::permutation_exists;
use newton_strata::oracle::{
    brute_concave_enumeration, brute_permutation_exists, corpus, CorpusSpec,
};
use newton_strata::strata::{
    duality_transport, explicit_criterion, reduce_to_standard, verify_certificate,
    StratumQuery,
};
use newton_strata::{
    slope, ConcavePolygon, Engine, MinusculeCocharacter, ModificationQuery, Slope,
    TuplarPolygon,
};

pub struct SelftestReport {
    pub sections: Vec<(String, usize)>,
    pub failures: Vec<String>,
}

pub fn run(max_rank: usize, max_denominator: usize) -> SelftestReport {
    let mut report = SelftestReport { sections: Vec::new(), failures: Vec::new() };
    rearrangement_maximality(max_rank, max_denominator, &mut report);
    enumeration_agreement(max_rank, max_denominator, &mut report);
    permutation_agreement(max_rank, max_denominator, &mut report);
    explicit_vs_inductive(max_rank, max_denominator, &mut report);
    duality_invariance(max_rank, max_denominator, &mut report);
    regression_examples(&mut report);
    report
}

/// The concave rearrangement Bruhat-dominates every arrangement. Iterating
/// the full slope-tuple grid visits every permutation of every multiset.
fn rearrangement_maximality(max_rank: usize, max_denominator: usize, report: &mut SelftestReport) {
    let grid = farey_descending(slope(-1, 1), slope(1, 1), max_denominator);
    let mut checked = 0usize;
    for rank in 1..=max_rank.min(4) {
        let mut index = vec![0usize; rank];
        loop {
            let slopes: Vec<Slope> = index.iter().map(|&i| grid[i]).collect();
            let tuple = TuplarPolygon::new(slopes);
            if !tuple.concave_rearrangement().bruhat_geq(&tuple) {
                report
                    .failures
                    .push(format!("rearrangement maximality: {:?}", tuple.slopes()));
            }
            checked += 1;
            if !advance(&mut index, grid.len()) {
                break;
            }
        }
    }
    report.sections.push(("rearrangement maximality".into(), checked));
}

fn advance(index: &mut [usize], base: usize) -> bool {
    for digit in index.iter_mut().rev() {
        *digit += 1;
        if *digit < base {
            return true;
        }
        *digit = 0;
    }
    false
}

/// Generator agrees with the brute-force polygon family.
fn enumeration_agreement(max_rank: usize, max_denominator: usize, report: &mut SelftestReport) {
    let spec = CorpusSpec::new(5, max_denominator, (slope(-1, 1), slope(1, 1)))
        .expect("selftest corpus spec");
    let mut checked = 0usize;
    for rank in 1..=max_rank.min(5) {
        for degree in -(rank as i64)..=rank as i64 {
            let brute = brute_concave_enumeration(&spec, rank, degree)
                .expect("rank within guard");
            let fast: BTreeSet<ConcavePolygon> =
                bounded_family(rank, degree, max_denominator).collect();
            if brute != fast {
                let missing: Vec<_> =
                    brute.symmetric_difference(&fast).map(|p| p.to_string()).collect();
                report.failures.push(format!(
                    "enumeration agreement: rank {rank} degree {degree}: {}",
                    missing.join(", ")
                ));
            }
            checked += 1 + brute.len();
        }
    }
    report.sections.push(("enumeration agreement".into(), checked));
}

/// Polygons in the window [-1, 1] with run-slope denominators bounded.
fn bounded_family(
    rank: usize,
    degree: i64,
    max_denominator: usize,
) -> impl Iterator<Item = ConcavePolygon> {
    let bounds = EnumerationBounds::new(rank, degree, slope(-1, 1), slope(1, 1))
        .expect("window is not inverted");
    enumerate_concave(&bounds).filter(move |p| {
        p.runs().iter().all(|run| *run.slope.denom() as usize <= max_denominator)
    })
}

/// Backtracking permutation search agrees with the exhaustive walk.
fn permutation_agreement(max_rank: usize, max_denominator: usize, report: &mut SelftestReport) {
    let mut checked = 0usize;
    for total_rank in 2..=max_rank.min(5) {
        for sub_rank in 1..total_rank {
            let quot_rank = total_rank - sub_rank;
            for sub_degree in -(sub_rank as i64)..=sub_rank as i64 {
                for quot_degree in -(quot_rank as i64)..=quot_rank as i64 {
                    let total_degree = sub_degree + quot_degree;
                    if total_degree.unsigned_abs() as usize > total_rank {
                        continue;
                    }
                    for sub in bounded_family(sub_rank, sub_degree, max_denominator) {
                        for quot in bounded_family(quot_rank, quot_degree, max_denominator) {
                            for total in
                                bounded_family(total_rank, total_degree, max_denominator)
                            {
                                check_one_permutation(
                                    &sub, &total, &quot, &mut checked, report,
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    report.sections.push(("permutation agreement".into(), checked));
}

fn check_one_permutation(
    sub: &ConcavePolygon,
    total: &ConcavePolygon,
    quot: &ConcavePolygon,
    checked: &mut usize,
    report: &mut SelftestReport,
) {
    let brute = brute_permutation_exists(sub, total, quot).expect("rank within guard");
    let witness = permutation_exists(sub, total, quot);
    if brute != witness.is_some() {
        report.failures.push(format!(
            "permutation agreement: sub {sub} total {total} quot {quot}: brute {brute}"
        ));
    }
    if let Some(w) = witness {
        if w.verify(sub, total, quot).is_err() {
            report.failures.push(format!(
                "permutation witness replay: sub {sub} total {total} quot {quot}"
            ));
        }
    }
    *checked += 1;
}

/// Where every slope gap of the original polygon exceeds 1, the closed-form
/// criterion must match the recursive engine.
fn explicit_vs_inductive(max_rank: usize, max_denominator: usize, report: &mut SelftestReport) {
    let engine = Engine::new();
    let mut checked = 0usize;
    for rank in 1..=max_rank {
        for degree in -(2 * rank as i64)..=2 * rank as i64 {
            let bounds = EnumerationBounds::new(rank, degree, slope(-2, 1), slope(2, 1))
                .expect("window is not inverted");
            let originals = enumerate_concave(&bounds).filter(|p| {
                p.runs().iter().all(|r| *r.slope.denom() as usize <= max_denominator)
                    && wide_gaps(p)
            });
            for original in originals {
                for d in 0..=rank as i64 {
                    for modified in sandwich_family(&original, d) {
                        let q = ModificationQuery::new(original.clone(), modified)
                            .expect("ranks match");
                        let explicit = explicit_criterion(&q).expect("gaps exceed 1");
                        let inductive = engine.minuscule_modification_exists(&q);
                        if explicit != inductive.is_some() {
                            report.failures.push(format!(
                                "explicit vs inductive: {} -> {} (explicit {explicit})",
                                q.original(),
                                q.modified()
                            ));
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    report.sections.push(("explicit vs inductive".into(), checked));
}

fn wide_gaps(p: &ConcavePolygon) -> bool {
    p.runs().windows(2).all(|w| w[0].slope - w[1].slope > slope(1, 1))
}

/// Candidates for the modified polygon: slopewise between original - 1 and
/// original, with the degree dropped by d. Complete for positives, and both
/// procedures reject everything outside this window.
fn sandwich_family(original: &ConcavePolygon, d: i64) -> Vec<ConcavePolygon> {
    let upper = original.to_tuplar();
    let lower = upper.add_constant(slope(-1, 1));
    let lo = original.min_slope().expect("nonempty") - 1;
    let hi = original.max_slope().expect("nonempty");
    let bounds = EnumerationBounds::new(original.rank(), original.degree() - d, lo, hi)
        .expect("window is not inverted")
        .with_lower_envelope(&lower)
        .expect("envelope has matching length")
        .with_upper_envelope(&upper)
        .expect("envelope has matching length");
    enumerate_concave(&bounds).collect()
}

/// Swapping the roles of the two polygons (with a twist) preserves the
/// decision.
fn duality_invariance(max_rank: usize, max_denominator: usize, report: &mut SelftestReport) {
    let spec = CorpusSpec::new(max_rank.min(4), max_denominator, (slope(-1, 1), slope(1, 1)))
        .expect("selftest corpus spec");
    let engine = Engine::new();
    let mut checked = 0usize;
    for q in corpus(spec) {
        let forward = engine.minuscule_modification_exists(&q).is_some();
        let transported = duality_transport(&q);
        let backward = engine.minuscule_modification_exists(&transported).is_some();
        if forward != backward {
            report.failures.push(format!(
                "duality transport: {} -> {} decided {forward}, transported {backward}",
                q.original(),
                q.modified()
            ));
        }
        checked += 1;
    }
    report.sections.push(("duality transport".into(), checked));
}

/// The worked GL_7 and GL_8 examples, with certificate replay.
fn regression_examples(report: &mut SelftestReport) {
    let mut checked = 0usize;
    let mut run_case = |b: &str, n: usize, d: i64, b_prime: &str, expect: bool| {
        let query = StratumQuery::new(
            b.parse().expect("valid literal"),
            MinusculeCocharacter::new(n, d).expect("valid cocharacter").to_dominant(),
            b_prime.parse().expect("valid literal"),
        )
        .expect("ranks match");
        let (_, mq) = reduce_to_standard(&query).expect("minuscule input");
        let engine = Engine::new();
        let certificate = engine.minuscule_modification_exists(&mq);
        if certificate.is_some() != expect {
            report.failures.push(format!(
                "regression: {b} with min:{n}:{d} vs {b_prime}: expected {expect}"
            ));
        }
        if let Some(cert) = certificate {
            if !verify_certificate(&mq, &cert) {
                report.failures.push(format!(
                    "regression replay: {b} with min:{n}:{d} vs {b_prime}"
                ));
            }
        }
        checked += 1;
    };
    run_case("2/3^3,3/5^5", 8, 4, "1/4^4,0^4", true);
    run_case("4/3^3,3/4^4", 7, 4, "1^2,1/3^3,0^2", false);
    run_case("5/4^4,3/4^4", 8, 4, "3/5^5,1/3^3", true);
    report.sections.push(("regression examples".into(), checked));
}
