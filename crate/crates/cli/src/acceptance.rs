//! Full-scale runs of the property checks, one verdict per criterion.

use std::time::{Duration, Instant};

use crate::checks::{self, Scale, Tally};

/// Seed of the acceptance corpora.
pub const SEED: u64 = 20_240_601;

#[derive(Clone, Debug)]
pub struct Verdict {
    pub id: u8,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Option<Duration>,
}

impl Verdict {
    /// `C<id> PASS|FAIL <title>: <detail> [<time> / limit]`.
    pub fn line(&self) -> String {
        let time = match self.limit {
            Some(l) => format!("{:.1}s of {}s", self.elapsed.as_secs_f64(), l.as_secs()),
            None => format!("{:.1}s", self.elapsed.as_secs_f64()),
        };
        format!(
            "C{} {} {}: {} [{time}]",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.title,
            self.detail
        )
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn summary(ts: &[&Tally]) -> String {
    ts.iter()
        .map(|t| {
            let mut s = format!("{} {}/{}", t.name, t.cases - t.failures.len(), t.cases);
            if let Some(f) = t.failures.first() {
                s.push_str(&format!(" (first failure: {f})"));
            }
            s
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn verdict(id: u8, title: &'static str, ts: &[&Tally], min_cases: &[usize], elapsed: Duration, limit: Option<u64>) -> Verdict {
    let enough = ts.iter().zip(min_cases).all(|(t, &m)| t.cases >= m);
    let limit = limit.map(Duration::from_secs);
    let in_time = limit.is_none_or(|l| elapsed <= l);
    Verdict {
        id,
        title,
        pass: enough && in_time && ts.iter().all(|t| t.ok()),
        detail: summary(ts),
        elapsed,
        limit,
    }
}

pub fn coding_fidelity(sc: &Scale) -> Verdict {
    let (t, el) = timed(|| checks::coding_round_trips(sc.coding_limit));
    verdict(1, "coding fidelity", &[&t], &[1_000_000], el, Some(10))
}

pub fn compiler_equivalence(sc: &Scale) -> Verdict {
    let ((f, r), el) = timed(|| {
        (
            checks::compile_forward(SEED + 2, sc.forward),
            checks::compile_reverse(SEED + 3, sc.reverse),
        )
    });
    verdict(2, "compiler equivalence", &[&f, &r], &[100, 20], el, Some(120))
}

pub fn diagonalization(sc: &Scale) -> Verdict {
    let (t, el) = timed(|| checks::diagonalization(SEED + 4, sc.diagonal));
    let mut v = verdict(3, "diagonalization", &[&t], &[50], el, Some(60));
    v.detail.push_str(&format!("; {}", t.notes.join("; ")));
    v
}

pub fn jump_commutation(sc: &Scale) -> Verdict {
    let (t, el) = timed(|| checks::jump_commutation(SEED + 5, sc.commute));
    verdict(4, "jump commutation", &[&t], &[200], el, Some(120))
}

pub fn kleene_completeness(sc: &Scale) -> Verdict {
    let (t, el) = timed(|| checks::kleene_completeness(SEED + 6, sc.kleene));
    let mut v = verdict(5, "Kleene completeness", &[&t], &[1], el, None);
    v.detail.push_str(&format!("; {}", t.notes.join("; ")));
    v
}

pub fn genericity(sc: &Scale) -> Verdict {
    let (t, el) = timed(|| checks::genericity(SEED + 7, sc.generic));
    verdict(6, "genericity", &[&t], &[50], el, None)
}

pub fn interpretations(sc: &Scale) -> Verdict {
    let ((genuine, bi, faults), el) = timed(|| {
        (
            checks::interp_genuine(SEED + 8, sc.interp_random),
            checks::interp_biinterp(SEED + 9, sc.interp_random),
            checks::interp_faults(SEED + 10, sc.faults),
        )
    });
    let mut ts: Vec<&Tally> = genuine.iter().collect();
    ts.push(&bi);
    let mins = vec![1; ts.len()];
    let mut v = verdict(7, "interpretations", &ts, &mins, el, Some(180));
    let mut rates = Vec::new();
    for (t, caught) in &faults {
        let rate = *caught as f64 / t.cases.max(1) as f64;
        if t.cases == 0 || rate < 0.95 {
            v.pass = false;
        }
        rates.push(format!("{} {caught}/{}", t.name, t.cases));
    }
    v.detail.push_str(&format!("; faults detected: {}", rates.join(", ")));
    v
}

pub fn seq_codings(sc: &Scale) -> Verdict {
    let (t, el) = timed(|| checks::seq_round_trips(SEED + 1, sc.seq_random));
    let mut v = verdict(8, "seq/set codings", &[&t], &[1], el, None);
    v.detail.push_str(
        "; all X of {0..63} covered by per-length fibers, exhaustive on {0..15}, random on {0..63}",
    );
    v
}

/// Criteria 1 to 8. The determinism criterion needs the built binary and
/// lives in the acceptance test target.
pub fn run(sc: &Scale) -> Vec<Verdict> {
    vec![
        coding_fidelity(sc),
        compiler_equivalence(sc),
        diagonalization(sc),
        jump_commutation(sc),
        kleene_completeness(sc),
        genericity(sc),
        interpretations(sc),
        seq_codings(sc),
    ]
}
