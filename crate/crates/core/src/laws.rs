//! Budgeted law checking: exhaustive when a case space is small enough,
//! seeded sampling otherwise, with replayable witnesses.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Elem, FinAbGroup};

pub const DEFAULT_SEED: u64 = 0x5eed_7ac4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Case spaces up to this size are checked exhaustively.
    pub exhaustive_limit: u128,
    /// Number of samples drawn per object tuple otherwise.
    pub samples: usize,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            exhaustive_limit: 1 << 16,
            samples: 4096,
            seed: DEFAULT_SEED,
        }
    }
}

impl Budget {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn exhaustive(limit: u128) -> Self {
        Budget {
            exhaustive_limit: limit,
            ..Budget::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Sampled,
    Mixed,
    Vacuous,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub law: String,
    pub objects: Vec<usize>,
    pub elements: Vec<Elem>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawResult {
    pub law: String,
    pub passed: bool,
    pub cases: u64,
    pub mode: Mode,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub laws: Vec<LawResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.laws.iter().all(|l| l.passed)
    }

    pub fn get(&self, law: &str) -> Option<&LawResult> {
        self.laws.iter().find(|l| l.law == law)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawResult> {
        self.laws.iter().filter(|l| !l.passed)
    }

    pub fn extend(&mut self, other: Report) {
        self.laws.extend(other.laws);
    }

    pub fn push(&mut self, r: LawResult) {
        self.laws.push(r);
    }

    /// A single pass/fail entry for a check that is not case-based.
    pub fn record(&mut self, law: &str, passed: bool, detail: impl Into<String>) {
        let detail = detail.into();
        self.laws.push(LawResult {
            law: law.to_string(),
            passed,
            cases: 1,
            mode: Mode::Exhaustive,
            seed: 0,
            witness: (!passed).then(|| Witness {
                law: law.to_string(),
                objects: vec![],
                elements: vec![],
                detail,
            }),
        });
    }

    pub fn record_result(&mut self, law: &str, r: Result<(), String>) {
        match r {
            Ok(()) => self.record(law, true, ""),
            Err(e) => self.record(law, false, e),
        }
    }
}

pub type GroupsFn<'a> = Box<dyn Fn(&[usize]) -> Option<Vec<FinAbGroup>> + 'a>;
pub type CheckFn<'a> = Box<dyn Fn(&[usize], &[Elem]) -> Result<(), String> + 'a>;

/// A law quantified over object tuples and elements of groups that depend
/// on the tuple. `groups` returns `None` for tuples the law skips.
pub struct Law<'a> {
    pub name: String,
    pub arity: usize,
    pub groups: GroupsFn<'a>,
    pub check: CheckFn<'a>,
}

impl<'a> Law<'a> {
    pub fn new(
        name: impl Into<String>,
        arity: usize,
        groups: impl Fn(&[usize]) -> Option<Vec<FinAbGroup>> + 'a,
        check: impl Fn(&[usize], &[Elem]) -> Result<(), String> + 'a,
    ) -> Self {
        Law {
            name: name.into(),
            arity,
            groups: Box::new(groups),
            check: Box::new(check),
        }
    }
}

fn fnv(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

pub fn object_tuples(n: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |o| {
                    let mut t = t.clone();
                    t.push(o);
                    t
                })
            })
            .collect();
    }
    out
}

pub fn random_element(g: &FinAbGroup, rng: &mut impl Rng) -> Elem {
    g.orders()
        .iter()
        .map(|&d| rng.gen_range(0..d) as i64)
        .collect()
}

/// Visits the cases of one object tuple; returns `(cases, exhaustive)` or
/// the first failure.
pub fn for_cases(
    groups: &[FinAbGroup],
    budget: &Budget,
    salt: u64,
    mut f: impl FnMut(&[Elem]) -> Result<(), String>,
) -> Result<(u64, bool), (Vec<Elem>, String)> {
    let total = groups
        .iter()
        .fold(1u128, |acc, g| acc.saturating_mul(g.order()));
    if total <= budget.exhaustive_limit {
        let mut cur: Vec<Elem> = groups.iter().map(|g| g.zero()).collect();
        let mut count = 0u64;
        loop {
            if let Err(e) = f(&cur) {
                return Err((cur, e));
            }
            count += 1;
            // odometer, last group and last component fastest
            let mut i = groups.len();
            let mut done = true;
            'outer: while i > 0 {
                i -= 1;
                let orders = groups[i].orders();
                let mut j = orders.len();
                while j > 0 {
                    j -= 1;
                    cur[i][j] += 1;
                    if (cur[i][j] as u64) < orders[j] {
                        done = false;
                        break 'outer;
                    }
                    cur[i][j] = 0;
                }
            }
            if done {
                return Ok((count, true));
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ salt);
        for _ in 0..budget.samples {
            let case: Vec<Elem> = groups.iter().map(|g| random_element(g, &mut rng)).collect();
            if let Err(e) = f(&case) {
                return Err((case, e));
            }
        }
        Ok((budget.samples as u64, false))
    }
}

pub fn run_law(law: &Law<'_>, num_objects: usize, budget: &Budget) -> LawResult {
    let mut cases = 0u64;
    let mut any_exh = false;
    let mut any_sampled = false;
    for (k, objs) in object_tuples(num_objects, law.arity).into_iter().enumerate() {
        let Some(groups) = (law.groups)(&objs) else {
            continue;
        };
        let salt = fnv(&law.name).wrapping_add((k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        match for_cases(&groups, budget, salt, |els| (law.check)(&objs, els)) {
            Ok((n, exh)) => {
                cases += n;
                if exh {
                    any_exh = true;
                } else {
                    any_sampled = true;
                }
            }
            Err((elements, detail)) => {
                return LawResult {
                    law: law.name.clone(),
                    passed: false,
                    cases: cases + 1,
                    mode: if any_sampled { Mode::Mixed } else { Mode::Exhaustive },
                    seed: budget.seed,
                    witness: Some(Witness {
                        law: law.name.clone(),
                        objects: objs,
                        elements,
                        detail,
                    }),
                };
            }
        }
    }
    let mode = match (any_exh, any_sampled) {
        (true, false) => Mode::Exhaustive,
        (false, true) => Mode::Sampled,
        (true, true) => Mode::Mixed,
        (false, false) => Mode::Vacuous,
    };
    LawResult {
        law: law.name.clone(),
        passed: true,
        cases,
        mode,
        seed: budget.seed,
        witness: None,
    }
}

pub fn run_laws(laws: &[Law<'_>], num_objects: usize, budget: &Budget) -> Report {
    Report {
        laws: laws.iter().map(|l| run_law(l, num_objects, budget)).collect(),
    }
}

/// Re-evaluates a witness against the law of the same name.
pub fn replay(laws: &[Law<'_>], w: &Witness) -> Option<Result<(), String>> {
    let law = laws.iter().find(|l| l.name == w.law)?;
    Some((law.check)(&w.objects, &w.elements))
}

/// Helper for law bodies: `Err` with both sides when they differ.
pub fn expect_eq<T: PartialEq + std::fmt::Debug>(lhs: T, rhs: T, what: &str) -> Result<(), String> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("{what}: {lhs:?} != {rhs:?}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_counts_every_case() {
        let g = vec![FinAbGroup::cyclic(3), FinAbGroup::new(vec![2, 2]).unwrap()];
        let mut seen = vec![];
        let r = for_cases(&g, &Budget::default(), 0, |c| {
            seen.push(c.to_vec());
            Ok(())
        });
        assert_eq!(r, Ok((12, true)));
        assert_eq!(seen.first().unwrap(), &vec![vec![0], vec![0, 0]]);
        assert_eq!(seen.last().unwrap(), &vec![vec![2], vec![1, 1]]);
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 12);
    }

    #[test]
    fn sampling_is_reproducible() {
        let g = vec![FinAbGroup::elementary(5, 10)];
        let budget = Budget {
            exhaustive_limit: 10,
            samples: 50,
            seed: 7,
        };
        let collect = || {
            let mut v = vec![];
            for_cases(&g, &budget, 3, |c| {
                v.push(c.to_vec());
                Ok(())
            })
            .unwrap();
            v
        };
        assert_eq!(collect(), collect());
    }

    #[test]
    fn failure_reports_first_witness() {
        let law = Law::new(
            "nonzero",
            1,
            |_| Some(vec![FinAbGroup::cyclic(4)]),
            |_, e| if e[0][0] == 2 { Err("two".into()) } else { Ok(()) },
        );
        let r = run_law(&law, 2, &Budget::default());
        assert!(!r.passed);
        let w = r.witness.unwrap();
        assert_eq!(w.objects, vec![0]);
        assert_eq!(w.elements, vec![vec![2]]);
        assert_eq!(replay(&[law], &w), Some(Err("two".into())));
    }
}
