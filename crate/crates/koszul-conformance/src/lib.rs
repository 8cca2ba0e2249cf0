//! Deterministic, seeded identity-conformance suite for the graded calculus
//! engine.
//!
//! The suite is a registry of named cases. Each case checks one mathematical
//! law — an algebraic axiom, a bracket identity, a frozen fixture value, or
//! the deliberate failure of an identity under a mutated sign convention —
//! on randomized instances drawn from a per-case seeded generator, or on
//! hand-frozen instances. Failing randomized instances are shrunk to a
//! minimal counterexample before being reported.
//!
//! Determinism: the per-case random stream is seeded with
//! `suite_seed ^ fnv1a(case id)`, so results are independent of filtering,
//! ordering, and the number of worker threads.

pub mod cases;
pub mod gen;

use koszul_core::SignConventions;
use serde::Serialize;

/// Context handed to every case: the sign conventions under test, the
/// already-mixed per-case seed, and the number of randomized instances the
/// case should draw (fixture cases ignore it).
pub struct Ctx {
    pub conv: SignConventions,
    pub seed: u64,
    pub trials: usize,
}

impl Ctx {
    pub fn rng(&self) -> rand_chacha::ChaCha8Rng {
        use rand::SeedableRng;
        rand_chacha::ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// What a case reports back.
pub enum Verdict {
    Pass { trials: usize },
    Fail { trials: usize, counterexample: String },
}

/// A registered identity case.
pub struct IdentityCase {
    /// Stable kebab-case identifier (also the manifest key).
    pub id: &'static str,
    /// Neutral one-sentence statement of the law being checked.
    pub anchor: &'static str,
    /// Filter tags (shared identity families like "jacobi", "master").
    pub tags: &'static [&'static str],
    pub run: fn(&Ctx) -> Verdict,
}

/// Result of one case run, serializable for the JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct CaseResult {
    pub id: String,
    pub anchor: String,
    pub tags: Vec<String>,
    pub passed: bool,
    pub trials: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    pub millis: u128,
}

/// Full suite report, serializable as schema 1.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub seed: u64,
    pub trials: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filter: Option<String>,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub cases: Vec<CaseResult>,
}

/// Stable 64-bit FNV-1a hash used to mix case ids into the suite seed.
pub fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn case_matches(case: &IdentityCase, filter: Option<&str>) -> bool {
    match filter {
        None => true,
        Some(f) => {
            let f = f.trim();
            f.is_empty()
                || f == "suite"
                || case.id == f
                || case.id.starts_with(f)
                || case.tags.contains(&f)
        }
    }
}

/// Runs one case under the given conventions.
pub fn run_case(
    case: &IdentityCase,
    conv: &SignConventions,
    seed: u64,
    trials: usize,
) -> CaseResult {
    let ctx = Ctx {
        conv: *conv,
        seed: seed ^ fnv1a(case.id),
        trials,
    };
    let start = std::time::Instant::now();
    let verdict = (case.run)(&ctx);
    let millis = start.elapsed().as_millis();
    let (passed, trials, counterexample) = match verdict {
        Verdict::Pass { trials } => (true, trials, None),
        Verdict::Fail {
            trials,
            counterexample,
        } => (false, trials, Some(counterexample)),
    };
    CaseResult {
        id: case.id.to_string(),
        anchor: case.anchor.to_string(),
        tags: case.tags.iter().map(|t| t.to_string()).collect(),
        passed,
        trials,
        counterexample,
        millis,
    }
}

/// Runs every registered case whose id or tags match the filter, spreading
/// the cases over `jobs` worker threads. Results are returned in registry
/// order and are identical for any `jobs` value.
pub fn run_suite(
    filter: Option<&str>,
    conv: &SignConventions,
    seed: u64,
    trials: usize,
    jobs: usize,
) -> SuiteReport {
    let registry = cases::registry();
    let selected: Vec<(usize, &IdentityCase)> = registry
        .iter()
        .enumerate()
        .filter(|(_, c)| case_matches(c, filter))
        .collect();
    let jobs = jobs.max(1).min(selected.len().max(1));
    let mut results: Vec<(usize, CaseResult)> = Vec::with_capacity(selected.len());
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for chunk in selected.chunks(selected.len().div_ceil(jobs).max(1)) {
            let conv = *conv;
            handles.push(scope.spawn(move || {
                chunk
                    .iter()
                    .map(|(i, c)| (*i, run_case(c, &conv, seed, trials)))
                    .collect::<Vec<_>>()
            }));
        }
        for h in handles {
            results.extend(h.join().expect("conformance worker panicked"));
        }
    });
    results.sort_by_key(|(i, _)| *i);
    let cases: Vec<CaseResult> = results.into_iter().map(|(_, r)| r).collect();
    let passed = cases.iter().filter(|c| c.passed).count();
    SuiteReport {
        schema: 1,
        seed,
        trials,
        filter: filter.map(|f| f.to_string()),
        total: cases.len(),
        passed,
        failed: cases.len() - passed,
        cases,
    }
}

/// One text line per case in the stable `PASS <id> — <anchor>` format used
/// by both the CLI text reporter and the acceptance log.
pub fn format_case_line(r: &CaseResult) -> String {
    let status = if r.passed { "PASS" } else { "FAIL" };
    match &r.counterexample {
        None => format!("{status} {} — {}", r.id, r.anchor),
        Some(c) => format!("{status} {} — {}\n  counterexample:\n{}", r.id, r.anchor, c),
    }
}
