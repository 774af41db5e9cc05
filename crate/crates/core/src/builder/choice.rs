//! Seeded generic-choice engine. Candidates come from deterministic integer
//! streams (spiral order, offset by a seed hash per choice site); every
//! predicate is an exact test, and the first passing candidate wins. The
//! audit log keeps the accepted raw candidate plus the predicate
//! descriptions so a replay can re-check everything.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::algebra::{parse_scalar, Scalar};
use crate::rng::splitmix64;

use super::BuildError;

#[derive(Debug, Clone)]
pub struct ChoiceConfig {
    pub seed: u64,
    pub max_retries: u32,
    /// bound on the seed-derived offset into each candidate stream; larger
    /// values spread choices further along the spiral
    pub search_radius: u32,
}

impl Default for ChoiceConfig {
    fn default() -> Self {
        ChoiceConfig {
            seed: 0,
            max_retries: 64,
            search_radius: 8,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct AuditEntry {
    pub site: String,
    pub candidate: Vec<String>,
    pub predicates: Vec<String>,
    pub attempts: u32,
}

enum Source {
    Search,
    Replay(VecDeque<AuditEntry>),
}

/// Draws candidates for one construction run. In search mode the stream is
/// consumed from a seed-dependent offset; in replay mode the logged
/// candidates are forced and must still pass every predicate.
pub struct Chooser {
    cfg: ChoiceConfig,
    site_counter: u64,
    source: Source,
    audit: Vec<AuditEntry>,
}

pub struct Predicate<'a, T> {
    pub desc: String,
    pub test: Box<dyn Fn(&T) -> bool + 'a>,
}

impl<'a, T> Predicate<'a, T> {
    pub fn new(desc: impl Into<String>, test: impl Fn(&T) -> bool + 'a) -> Self {
        Predicate {
            desc: desc.into(),
            test: Box::new(test),
        }
    }
}

impl Chooser {
    pub fn search(cfg: ChoiceConfig) -> Self {
        Chooser {
            cfg,
            site_counter: 0,
            source: Source::Search,
            audit: Vec::new(),
        }
    }

    pub fn replay(cfg: ChoiceConfig, audit: &[AuditEntry]) -> Result<Self, BuildError> {
        Ok(Chooser {
            cfg,
            site_counter: 0,
            source: Source::Replay(audit.iter().cloned().collect()),
            audit: Vec::new(),
        })
    }

    pub fn audit(&self) -> &[AuditEntry] {
        &self.audit
    }

    pub fn seed(&self) -> u64 {
        self.cfg.seed
    }

    /// Picks the first candidate satisfying every predicate. `stream` yields
    /// raw rational tuples; `build` turns a tuple into a typed candidate
    /// (None marks a degenerate tuple that is skipped but counted).
    pub fn choose<T>(
        &mut self,
        site: &str,
        stream: &mut dyn Iterator<Item = Vec<Scalar>>,
        build: &dyn Fn(&[Scalar]) -> Option<T>,
        predicates: &[Predicate<'_, T>],
    ) -> Result<T, BuildError> {
        self.site_counter += 1;
        match &mut self.source {
            Source::Search => {
                let offset = splitmix64(self.cfg.seed ^ (self.site_counter.wrapping_mul(0x9e3779b9)))
                    % (self.cfg.search_radius as u64 + 1);
                for _ in 0..offset {
                    stream.next();
                }
                let mut attempts = 0;
                while attempts < self.cfg.max_retries {
                    attempts += 1;
                    let Some(raw) = stream.next() else { break };
                    let Some(cand) = build(&raw) else { continue };
                    if predicates.iter().all(|p| (p.test)(&cand)) {
                        self.audit.push(AuditEntry {
                            site: site.to_string(),
                            candidate: raw.iter().map(|s| s.to_string()).collect(),
                            predicates: predicates.iter().map(|p| p.desc.clone()).collect(),
                            attempts,
                        });
                        return Ok(cand);
                    }
                }
                Err(BuildError::ChoiceExhausted {
                    site: site.to_string(),
                    attempts,
                })
            }
            Source::Replay(queue) => {
                let entry = queue.pop_front().ok_or_else(|| {
                    BuildError::ReplayMismatch(format!("audit exhausted at site {site:?}"))
                })?;
                if entry.site != site {
                    return Err(BuildError::ReplayMismatch(format!(
                        "expected site {:?}, audit has {:?}",
                        site, entry.site
                    )));
                }
                let raw: Vec<Scalar> = entry
                    .candidate
                    .iter()
                    .map(|s| parse_scalar(s))
                    .collect::<Result<_, _>>()
                    .map_err(|e| BuildError::ReplayMismatch(e.to_string()))?;
                let cand = build(&raw).ok_or_else(|| {
                    BuildError::ReplayMismatch(format!("candidate at {site:?} is degenerate"))
                })?;
                for p in predicates {
                    if !(p.test)(&cand) {
                        return Err(BuildError::ReplayMismatch(format!(
                            "predicate {:?} fails at site {:?}",
                            p.desc, site
                        )));
                    }
                }
                self.audit.push(entry);
                Ok(cand)
            }
        }
    }
}

/// Stream of single integers in spiral order 0, 1, -1, 2, ...
pub fn int_stream() -> impl Iterator<Item = Vec<Scalar>> {
    (0u64..).map(|i| vec![Scalar::from_integer(crate::rng::spiral(i).into())])
}

/// Stream of primitive integer coefficient triples ordered by height, used
/// for projective lines. The first nonzero entry is positive and the gcd of
/// the entries is one, so each projective line appears exactly once.
pub fn triple_stream() -> impl Iterator<Item = Vec<Scalar>> {
    (1i64..).flat_map(|h| {
        let mut out = Vec::new();
        for a in -h..=h {
            for b in -h..=h {
                for c in -h..=h {
                    if a.abs().max(b.abs()).max(c.abs()) != h {
                        continue;
                    }
                    let first = [a, b, c].into_iter().find(|v| *v != 0).unwrap_or(0);
                    if first <= 0 {
                        continue;
                    }
                    if gcd3(a.unsigned_abs(), b.unsigned_abs(), c.unsigned_abs()) != 1 {
                        continue;
                    }
                    out.push(vec![
                        Scalar::from_integer(a.into()),
                        Scalar::from_integer(b.into()),
                        Scalar::from_integer(c.into()),
                    ]);
                }
            }
        }
        out
    })
}

fn gcd3(a: u64, b: u64, c: u64) -> u64 {
    fn gcd(x: u64, y: u64) -> u64 {
        if y == 0 {
            x
        } else {
            gcd(y, x % y)
        }
    }
    gcd(gcd(a, b), c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::int;

    #[test]
    fn chooses_first_passing_candidate() {
        let mut chooser = Chooser::search(ChoiceConfig {
            seed: 0,
            max_retries: 16,
            search_radius: 0,
        });
        let picked = chooser
            .choose(
                "test",
                &mut int_stream(),
                &|raw| Some(raw[0].clone()),
                &[Predicate::new("not 0", |s: &Scalar| s != &int(0)),
                  Predicate::new("not 1", |s: &Scalar| s != &int(1))],
            )
            .unwrap();
        assert_eq!(picked, int(-1));
        assert_eq!(chooser.audit().len(), 1);
        assert_eq!(chooser.audit()[0].attempts, 3);
    }

    #[test]
    fn empty_predicates_take_stream_head() {
        let mut chooser = Chooser::search(ChoiceConfig {
            seed: 0,
            max_retries: 4,
            search_radius: 0,
        });
        let picked = chooser
            .choose("head", &mut int_stream(), &|raw| Some(raw[0].clone()), &[])
            .unwrap();
        assert_eq!(picked, int(0));
    }

    #[test]
    fn exhaustion_is_an_error() {
        let mut chooser = Chooser::search(ChoiceConfig {
            seed: 3,
            max_retries: 5,
            search_radius: 2,
        });
        let res = chooser.choose(
            "never",
            &mut int_stream(),
            &|raw| Some(raw[0].clone()),
            &[Predicate::new("impossible", |_: &Scalar| false)],
        );
        assert!(matches!(res, Err(BuildError::ChoiceExhausted { .. })));
    }

    #[test]
    fn replay_checks_predicates() {
        let entry = AuditEntry {
            site: "s".into(),
            candidate: vec!["2".into()],
            predicates: vec!["nonzero".into()],
            attempts: 1,
        };
        let mut ok = Chooser::replay(ChoiceConfig::default(), &[entry.clone()]).unwrap();
        let got = ok
            .choose(
                "s",
                &mut int_stream(),
                &|raw| Some(raw[0].clone()),
                &[Predicate::new("nonzero", |s: &Scalar| s != &int(0))],
            )
            .unwrap();
        assert_eq!(got, int(2));

        let mut bad = Chooser::replay(ChoiceConfig::default(), &[entry]).unwrap();
        let res = bad.choose(
            "s",
            &mut int_stream(),
            &|raw| Some(raw[0].clone()),
            &[Predicate::new("must be odd", |s: &Scalar| s == &int(3))],
        );
        assert!(matches!(res, Err(BuildError::ReplayMismatch(_))));
    }

    #[test]
    fn triples_are_primitive_and_lines_first() {
        let first: Vec<Vec<Scalar>> = triple_stream().take(3).collect();
        assert_eq!(first[0], vec![int(0), int(0), int(1)]);
        assert_eq!(first[1], vec![int(0), int(1), int(-1)]);
        assert_eq!(first[2], vec![int(0), int(1), int(0)]);
        for t in triple_stream().take(200) {
            assert!(t.iter().any(|v| v != &int(0)));
        }
    }
}
