//! Decision procedures for nonemptiness of Newton strata.
//!
//! A point of the Kottwitz set B(GL_n) is a concave polygon; a stratum query
//! carries the polygons of `b` and `b′` together with a dominant cocharacter
//! `μ`. For minuscule `μ` the stratum is nonempty exactly when the bundle
//! with polygon `ν(b)` admits an effective elementary modification to the
//! bundle with polygon `ν(b′)`, which turns the question into a finite
//! combinatorial search:
//!
//! * a semistable total polygon is settled by a two-sided slopewise sandwich;
//! * otherwise the maximal-slope run `D` is peeled off `E = D ⊕ F` and the
//!   query reduces to a twisted kernel `D′`, a recursive query on `F`, and an
//!   extension step checked by the permutation calculus;
//! * when all slope gaps of `E` exceed 1 a closed-form three-part criterion
//!   applies, with no search at all.
//!
//! Positive answers come with a [`Certificate`] that replays against the
//! theorem conditions independently of the search.

use std::collections::HashMap;
use std::sync::Mutex;

use thiserror::Error;

use crate::enumeration::{enumerate_concave, enumerate_sandwich_candidates, EnumerationBounds};
use crate::extensions::{extension_exists, ExtensionWitness};
use crate::polygon::{ConcavePolygon, DominantCocharacter, MinusculeCocharacter, Slope};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrataError {
    #[error("ranks differ: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("polygon is not semistable")]
    NotSemistable,
    #[error("cocharacter {0} is not minuscule")]
    NotMinuscule(DominantCocharacter),
    #[error("adjacent slope gap {gap} is not greater than 1")]
    GapTooSmall { gap: Slope },
}

/// A Newton stratum: `b` and `b′` by their polygons, `μ` dominant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumQuery {
    b: ConcavePolygon,
    mu: DominantCocharacter,
    b_prime: ConcavePolygon,
}

impl StratumQuery {
    pub fn new(
        b: ConcavePolygon,
        mu: DominantCocharacter,
        b_prime: ConcavePolygon,
    ) -> Result<Self, StrataError> {
        if b.rank() != mu.rank() {
            return Err(StrataError::RankMismatch { left: b.rank(), right: mu.rank() });
        }
        if b.rank() != b_prime.rank() {
            return Err(StrataError::RankMismatch { left: b.rank(), right: b_prime.rank() });
        }
        Ok(StratumQuery { b, mu, b_prime })
    }

    pub fn b(&self) -> &ConcavePolygon {
        &self.b
    }

    pub fn mu(&self) -> &DominantCocharacter {
        &self.mu
    }

    pub fn b_prime(&self) -> &ConcavePolygon {
        &self.b_prime
    }
}

/// A modification question: does the bundle with polygon `original` admit an
/// effective elementary modification to the bundle with polygon `modified`?
/// The modification degree is `degree(original) - degree(modified)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModificationQuery {
    original: ConcavePolygon,
    modified: ConcavePolygon,
}

impl ModificationQuery {
    pub fn new(
        original: ConcavePolygon,
        modified: ConcavePolygon,
    ) -> Result<Self, StrataError> {
        if original.rank() != modified.rank() {
            return Err(StrataError::RankMismatch {
                left: original.rank(),
                right: modified.rank(),
            });
        }
        Ok(ModificationQuery { original, modified })
    }

    pub fn original(&self) -> &ConcavePolygon {
        &self.original
    }

    pub fn modified(&self) -> &ConcavePolygon {
        &self.modified
    }

    pub fn degree(&self) -> i64 {
        self.original.degree() - self.modified.degree()
    }
}

/// Replayable evidence for a positive decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Degree zero: the modification is an isomorphism.
    Identity,
    /// Semistable total polygon: the slopewise sandwich settles the query.
    Basic { degree: i64 },
    /// Non-semistable total `E = D ⊕ F` with `D` the maximal-slope run: a
    /// twisted kernel `D′` under `D`, a recursive certificate for the rest,
    /// and an extension realizing the modified polygon.
    Inductive {
        top_modified: ConcavePolygon,
        rest_modified: ConcavePolygon,
        extension: ExtensionWitness,
        rest: Box<Certificate>,
    },
}

/// The decision engine. One instance carries one memo table, shared across
/// the recursion and across queries; `without_memo` disables it (decisions
/// must not change, only speed).
#[derive(Debug)]
pub struct Engine {
    memo: Option<Mutex<HashMap<ModificationQuery, Option<Certificate>>>>,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new()
    }
}

impl Engine {
    pub fn new() -> Self {
        Engine { memo: Some(Mutex::new(HashMap::new())) }
    }

    pub fn without_memo() -> Self {
        Engine { memo: None }
    }

    /// Decides whether the modification exists; `Some` holds a certificate.
    ///
    /// Deterministic: kernel candidates by descending degree, rest
    /// candidates in enumeration order, first success wins.
    pub fn minuscule_modification_exists(&self, q: &ModificationQuery) -> Option<Certificate> {
        let d = q.degree();
        if d < 0 || d > q.original.rank() as i64 {
            return None;
        }
        if let Some(memo) = &self.memo {
            if let Some(hit) = memo.lock().expect("memo poisoned").get(q) {
                return hit.clone();
            }
        }
        let result = self.decide(&q.original, &q.modified, d);
        if let Some(memo) = &self.memo {
            memo.lock()
                .expect("memo poisoned")
                .entry(q.clone())
                .or_insert_with(|| result.clone());
        }
        result
    }

    fn decide(&self, e: &ConcavePolygon, e_prime: &ConcavePolygon, d: i64) -> Option<Certificate> {
        let et = e.to_tuplar();
        let pt = e_prime.to_tuplar();
        // Necessary for any positive: two-sided slopewise sandwich and the
        // Bruhat inequality against the twisted polygon. Not sufficient in
        // general, but sound as a rejection filter.
        if !et.slopewise_geq(&pt) || !pt.add_constant(Slope::from(1)).slopewise_geq(&et) {
            return None;
        }
        let mu = MinusculeCocharacter::new(e.rank(), d).expect("degree range checked");
        if !et.pointwise_add(&mu.dual_tuplar()).bruhat_geq(&pt) {
            return None;
        }
        if d == 0 {
            // Sandwich plus equal degree forces equality.
            return (e == e_prime).then_some(Certificate::Identity);
        }
        if e.is_semistable() {
            // For a single run the sandwich just checked is the criterion.
            return Some(Certificate::Basic { degree: d });
        }
        let (top, rest) = e.split_top().expect("at least two runs");
        let rest_t = rest.to_tuplar();
        for top_mod in enumerate_sandwich_candidates(&top).expect("top run is semistable") {
            let rest_deg = e_prime.degree() - top_mod.degree();
            let d_rest = rest.degree() - rest_deg;
            if d_rest < 0 || d_rest > rest.rank() as i64 {
                continue;
            }
            let bounds = EnumerationBounds::new(
                rest.rank(),
                rest_deg,
                rest.min_slope().expect("rest is nonempty") - 1,
                rest.max_slope().expect("rest is nonempty"),
            )
            .expect("window is well formed")
            .with_lower_envelope(&rest_t.add_constant(Slope::from(-1)))
            .expect("rank matches")
            .with_upper_envelope(&rest_t)
            .expect("rank matches");
            for rest_mod in enumerate_concave(&bounds) {
                let sub_query = ModificationQuery {
                    original: rest.clone(),
                    modified: rest_mod.clone(),
                };
                let Some(sub_cert) = self.minuscule_modification_exists(&sub_query) else {
                    continue;
                };
                let Some(extension) = extension_exists(&top_mod, e_prime, &rest_mod) else {
                    continue;
                };
                return Some(Certificate::Inductive {
                    top_modified: top_mod,
                    rest_modified: rest_mod,
                    extension,
                    rest: Box::new(sub_cert),
                });
            }
        }
        None
    }

    /// Stratum nonemptiness for minuscule `μ` up to central shift: reduce to
    /// the standard form, rule out degree mismatch, then decide.
    pub fn stratum_nonempty(
        &self,
        q: &StratumQuery,
    ) -> Result<Option<Certificate>, StrataError> {
        let Some((mu_std, mq)) = reduce_to_standard(q) else {
            return Err(StrataError::NotMinuscule(q.mu.clone()));
        };
        if mq.degree() != mu_std.degree() {
            return Ok(None);
        }
        Ok(self.minuscule_modification_exists(&mq))
    }

    /// All `b′` whose stratum under `(b, μ)` is nonempty, with certificates.
    /// Complete and duplicate-free; candidates are cut down by the necessity
    /// sandwich before the full decision runs.
    pub fn enumerate_nonempty_strata(
        &self,
        b: &ConcavePolygon,
        mu: MinusculeCocharacter,
    ) -> Result<Vec<(ConcavePolygon, Certificate)>, StrataError> {
        if b.rank() != mu.rank() {
            return Err(StrataError::RankMismatch { left: b.rank(), right: mu.rank() });
        }
        let bt = b.to_tuplar();
        let bounds = EnumerationBounds::new(
            b.rank(),
            b.degree() - mu.degree(),
            b.min_slope().expect("rank is positive") - 1,
            b.max_slope().expect("rank is positive"),
        )
        .expect("window is well formed")
        .with_lower_envelope(&bt.add_constant(Slope::from(-1)))
        .expect("rank matches")
        .with_upper_envelope(&bt)
        .expect("rank matches");
        let mut out = Vec::new();
        for candidate in enumerate_concave(&bounds) {
            let q = ModificationQuery { original: b.clone(), modified: candidate.clone() };
            if let Some(cert) = self.minuscule_modification_exists(&q) {
                out.push((candidate, cert));
            }
        }
        Ok(out)
    }
}

/// Nonemptiness over a basic (semistable) `b` for an arbitrary dominant
/// cocharacter: a single Bruhat inequality against the twisted polygon.
pub fn basic_stratum_nonempty(
    b: &ConcavePolygon,
    mu: &DominantCocharacter,
    b_prime: &ConcavePolygon,
) -> Result<bool, StrataError> {
    if b.rank() != mu.rank() {
        return Err(StrataError::RankMismatch { left: b.rank(), right: mu.rank() });
    }
    if b.rank() != b_prime.rank() {
        return Err(StrataError::RankMismatch { left: b.rank(), right: b_prime.rank() });
    }
    if !b.is_semistable() {
        return Err(StrataError::NotSemistable);
    }
    let twisted = b.to_tuplar().pointwise_add(&mu.dual().to_tuplar());
    Ok(twisted.bruhat_geq(&b_prime.to_tuplar()))
}

/// Modification criterion for a semistable total polygon: the two-sided
/// slopewise sandwich. A degree outside `0..=rank` is a plain `false`.
pub fn semistable_modification_exists(q: &ModificationQuery) -> Result<bool, StrataError> {
    if !q.original.is_semistable() {
        return Err(StrataError::NotSemistable);
    }
    let d = q.degree();
    if d < 0 || d > q.original.rank() as i64 {
        return Ok(false);
    }
    let et = q.original.to_tuplar();
    let pt = q.modified.to_tuplar();
    Ok(et.slopewise_geq(&pt) && pt.add_constant(Slope::from(1)).slopewise_geq(&et))
}

/// Closed-form criterion, valid when all adjacent run slopes of the original
/// polygon differ by more than 1: the Bruhat inequality against the twisted
/// polygon, the slopewise sandwich, and refinement of breakpoints.
pub fn explicit_criterion(q: &ModificationQuery) -> Result<bool, StrataError> {
    let runs = q.original.runs();
    for pair in runs.windows(2) {
        let gap = pair[0].slope - pair[1].slope;
        if gap <= Slope::from(1) {
            return Err(StrataError::GapTooSmall { gap });
        }
    }
    let d = q.degree();
    if d < 0 || d > q.original.rank() as i64 {
        return Ok(false);
    }
    let et = q.original.to_tuplar();
    let pt = q.modified.to_tuplar();
    let mu = MinusculeCocharacter::new(q.original.rank(), d).expect("degree range checked");
    let bruhat = et.pointwise_add(&mu.dual_tuplar()).bruhat_geq(&pt);
    let sandwich =
        et.slopewise_geq(&pt) && pt.add_constant(Slope::from(1)).slopewise_geq(&et);
    let original_bp = q.original.breakpoints();
    let modified_bp = q.modified.breakpoints();
    let refined = original_bp.iter().all(|x| modified_bp.contains(x));
    Ok(bruhat && sandwich && refined)
}

/// Rewrites a stratum query so that the cocharacter takes values in `{0, 1}`:
/// for entries in `{m, m+1}` the central twist by `m` moves onto `b′`. `None`
/// when the cocharacter is not minuscule.
pub fn reduce_to_standard(q: &StratumQuery) -> Option<(MinusculeCocharacter, ModificationQuery)> {
    let (shift, standard) = q.mu.minuscule_decomposition()?;
    let mq = ModificationQuery {
        original: q.b.clone(),
        modified: q.b_prime.shift(shift),
    };
    Some((standard, mq))
}

/// One-shot stratum decision with a fresh engine.
pub fn stratum_nonempty(q: &StratumQuery) -> Result<Option<Certificate>, StrataError> {
    Engine::new().stratum_nonempty(q)
}

/// One-shot modification decision with a fresh engine.
pub fn minuscule_modification_exists(q: &ModificationQuery) -> Option<Certificate> {
    Engine::new().minuscule_modification_exists(q)
}

/// The dual query: `(E, E′)` of degree `d` maps to `(E′, E − ℓ_1)` of degree
/// `rank − d`. Nonemptiness is invariant; applying the transport twice gives
/// the original query shifted down by a full twist.
pub fn duality_transport(q: &ModificationQuery) -> ModificationQuery {
    ModificationQuery {
        original: q.modified.clone(),
        modified: q.original.shift(-1),
    }
}

/// Independent replay of a certificate against the theorem conditions. Never
/// consults the search: every inequality and witness is re-checked from the
/// query alone.
pub fn verify_certificate(q: &ModificationQuery, cert: &Certificate) -> bool {
    verify_pair(&q.original, &q.modified, cert)
}

fn verify_pair(e: &ConcavePolygon, e_prime: &ConcavePolygon, cert: &Certificate) -> bool {
    if e.rank() != e_prime.rank() {
        return false;
    }
    let d = e.degree() - e_prime.degree();
    match cert {
        Certificate::Identity => e == e_prime,
        Certificate::Basic { degree } => {
            let et = e.to_tuplar();
            let pt = e_prime.to_tuplar();
            *degree == d
                && d >= 0
                && d <= e.rank() as i64
                && e.is_semistable()
                && et.slopewise_geq(&pt)
                && pt.add_constant(Slope::from(1)).slopewise_geq(&et)
        }
        Certificate::Inductive { top_modified, rest_modified, extension, rest } => {
            let Some((top, rest_poly)) = e.split_top() else {
                return false;
            };
            if top_modified.rank() != top.rank() {
                return false;
            }
            let tt = top.to_tuplar();
            let tm = top_modified.to_tuplar();
            tt.slopewise_geq(&tm)
                && tm.add_constant(Slope::from(1)).slopewise_geq(&tt)
                && extension.verify(top_modified, e_prime, rest_modified).is_ok()
                && verify_pair(&rest_poly, rest_modified, rest)
        }
    }
}
