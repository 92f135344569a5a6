//! Edge semantics of the directed graph on the solution set: up-edges
//! `x -> (x+d)^e`, down-edges `x^e -> x`, path witnesses and their
//! validation, the belt/ladder/chute decomposition of label strings, the
//! UUDD infeasibility check, and the explicit ladder-belt-chute path that
//! connects any two vertices in the classic `d=5, e=2` instance.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith;

/// The triple `(d, e, r)` defining one problem instance: row 1 holds `r`,
/// the up-rule sends `x` to `(x+d)^e`, the down-rule takes exact `e`-th
/// roots. The classic Putnam instance is `(5, 2, 2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProblemParams {
    d: u64,
    e: u32,
    r: u64,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PathError {
    #[error("d, e and r must all be at least 2 (got d={d}, e={e}, r={r})")]
    InvalidParams { d: u64, e: u32, r: u64 },
    #[error("step {0}: down-step applied to a value that is not a perfect power")]
    InvalidDownStep(u64),
    #[error("label character {0:?} is not 'U' or 'D'")]
    InvalidLabel(char),
    #[error("{0} is not a vertex: vertices are integers >= 2 not divisible by {1}")]
    NotAVertex(BigUint, u64),
    #[error("the connecting-path construction is specific to d=5, e=2 (got d={0}, e={1})")]
    UnsupportedParams(u64, u32),
    #[error("connecting belt needs {0} pairs, beyond the supported 2^64-1 steps")]
    BeltTooLong(BigUint),
}

impl ProblemParams {
    pub fn new(d: u64, e: u32, r: u64) -> Result<Self, PathError> {
        if d < 2 || e < 2 || r < 2 {
            return Err(PathError::InvalidParams { d, e, r });
        }
        Ok(Self { d, e, r })
    }

    /// The `(5, 2, 2)` instance from the 2017 Putnam A1 problem.
    pub fn putnam() -> Self {
        Self { d: 5, e: 2, r: 2 }
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn r(&self) -> u64 {
        self.r
    }
}

/// One edge label: `Up` is `x -> (x+d)^e`, `Down` is `x^e -> x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Up,
    Down,
}

impl Step {
    fn ch(self) -> char {
        match self {
            Step::Up => 'U',
            Step::Down => 'D',
        }
    }
}

/// The up-edge: `x -> (x+d)^e`, exact unbounded arithmetic.
pub fn apply_up(x: &BigUint, params: &ProblemParams) -> BigUint {
    (x + params.d).pow(params.e)
}

/// The down-edge: the exact `e`-th root of `x`, when `x` is a perfect
/// `e`-th power. `None` means `x` has no outgoing down-edge.
pub fn apply_down(x: &BigUint, params: &ProblemParams) -> Option<BigUint> {
    arith::exact_eth_root(x, params.e)
}

/// Internal run encoding for label sequences. `Pair(n)` is `(UD)^n`; the
/// runs are kept in the canonical greedy form produced by scanning the
/// label string left to right and pairing every `U` that is immediately
/// followed by a `D`. Belts of trillions of pairs therefore cost one run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Run {
    Up(u64),
    Down(u64),
    Pair(u64),
}

impl Run {
    fn step_count(self) -> u64 {
        match self {
            Run::Up(n) | Run::Down(n) => n,
            Run::Pair(n) => n.saturating_mul(2),
        }
    }
}

/// A finite sequence over `{U, D}`, stored run-compressed.
///
/// Two `Labels` values are equal exactly when they denote the same step
/// sequence; the canonical internal form makes derived equality correct.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Labels {
    runs: Vec<Run>,
}

impl Labels {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses a string of `U`/`D` characters.
    pub fn parse(s: &str) -> Result<Self, PathError> {
        let mut labels = Labels::new();
        for c in s.chars() {
            match c {
                'U' => labels.push(Step::Up),
                'D' => labels.push(Step::Down),
                other => return Err(PathError::InvalidLabel(other)),
            }
        }
        Ok(labels)
    }

    pub fn from_steps<I: IntoIterator<Item = Step>>(steps: I) -> Self {
        let mut labels = Labels::new();
        for s in steps {
            labels.push(s);
        }
        labels
    }

    /// Appends one step, keeping the canonical run form: a `D` landing on a
    /// trailing `U` closes that `U` into a belt pair.
    pub fn push(&mut self, step: Step) {
        match step {
            Step::Up => match self.runs.last_mut() {
                Some(Run::Up(n)) => *n += 1,
                _ => self.runs.push(Run::Up(1)),
            },
            Step::Down => match self.runs.last_mut() {
                Some(Run::Down(n)) => *n += 1,
                Some(Run::Up(n)) => {
                    if *n == 1 {
                        self.runs.pop();
                        match self.runs.last_mut() {
                            Some(Run::Pair(k)) => *k += 1,
                            _ => self.runs.push(Run::Pair(1)),
                        }
                    } else {
                        *n -= 1;
                        self.runs.push(Run::Pair(1));
                    }
                }
                _ => self.runs.push(Run::Down(1)),
            },
        }
    }

    /// Appends `n` copies of `step` in O(1).
    pub fn push_many(&mut self, step: Step, n: u64) {
        if n == 0 {
            return;
        }
        self.push(step);
        match (step, self.runs.last_mut()) {
            (Step::Up, Some(Run::Up(k))) | (Step::Down, Some(Run::Down(k))) => *k += n - 1,
            (Step::Down, _) if n > 1 => self.runs.push(Run::Down(n - 1)),
            _ => {}
        }
    }

    /// Appends `(UD)^n` in O(1).
    pub fn push_pairs(&mut self, n: u64) {
        if n == 0 {
            return;
        }
        match self.runs.last_mut() {
            Some(Run::Pair(k)) => *k += n,
            _ => self.runs.push(Run::Pair(n)),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Total number of steps; belts count two steps per pair.
    pub fn step_count(&self) -> u64 {
        self.runs
            .iter()
            .fold(0u64, |acc, r| acc.saturating_add(r.step_count()))
    }

    /// Lazily expands the runs into individual steps.
    pub fn steps(&self) -> impl Iterator<Item = Step> + '_ {
        self.runs.iter().flat_map(|run| {
            let (a, b, n) = match *run {
                Run::Up(n) => (Step::Up, None, n),
                Run::Down(n) => (Step::Down, None, n),
                Run::Pair(n) => (Step::Up, Some(Step::Down), n),
            };
            (0..n).flat_map(move |_| std::iter::once(a).chain(b))
        })
    }
}

impl fmt::Display for Labels {
    /// Writes the fully expanded label string; intended for desk-scale
    /// sequences (a belt of `n` pairs expands to `2n` characters).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.steps() {
            write!(f, "{}", s.ch())?;
        }
        Ok(())
    }
}

impl FromStr for Labels {
    type Err = PathError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Labels::parse(s)
    }
}

/// A start vertex plus a label sequence: the concrete object behind
/// "path in the graph". Wire format: `{"start": "2", "labels": "UDDUD"}`,
/// with the start vertex as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathWitness {
    start: BigUint,
    labels: Labels,
}

impl PathWitness {
    pub fn new(start: BigUint, labels: Labels) -> Self {
        Self { start, labels }
    }

    pub fn start(&self) -> &BigUint {
        &self.start
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn edge_count(&self) -> u64 {
        self.labels.step_count()
    }
}

impl Serialize for PathWitness {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("PathWitness", 2)?;
        s.serialize_field("start", &self.start.to_string())?;
        s.serialize_field("labels", &self.labels.to_string())?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for PathWitness {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            start: String,
            labels: String,
        }
        let raw = Raw::deserialize(deserializer)?;
        let start = BigUint::from_str(&raw.start)
            .map_err(|_| D::Error::custom(format!("invalid start integer {:?}", raw.start)))?;
        let labels = Labels::parse(&raw.labels).map_err(D::Error::custom)?;
        Ok(PathWitness::new(start, labels))
    }
}

/// Evaluates a witness into its full vertex sequence (`edge_count + 1`
/// entries). Fails with the 1-based step index when a down-step lands on a
/// value that is not a perfect `e`-th power.
///
/// This materializes every vertex; use [`validate_path`] for witnesses with
/// belts too long to expand.
pub fn evaluate_path(
    witness: &PathWitness,
    params: &ProblemParams,
) -> Result<Vec<BigUint>, PathError> {
    let hint = usize::try_from(witness.edge_count()).unwrap_or(usize::MAX);
    let mut vertices = Vec::with_capacity(hint.saturating_add(1).min(1 << 20));
    vertices.push(witness.start.clone());
    let mut current = witness.start.clone();
    for (i, step) in witness.labels.steps().enumerate() {
        current = match step {
            Step::Up => apply_up(&current, params),
            Step::Down => {
                apply_down(&current, params).ok_or(PathError::InvalidDownStep(i as u64 + 1))?
            }
        };
        vertices.push(current.clone());
    }
    Ok(vertices)
}

/// Checks a witness and returns its final vertex without materializing the
/// vertex sequence. A belt pair `x -> (x+d)^e -> x+d` is valid for every
/// `x`, so `Pair` runs advance in one addition; only ladder and chute steps
/// are evaluated individually.
pub fn validate_path(witness: &PathWitness, params: &ProblemParams) -> Result<BigUint, PathError> {
    let mut current = witness.start.clone();
    let mut step_index = 0u64;
    for run in &witness.labels.runs {
        match *run {
            Run::Up(n) => {
                for _ in 0..n {
                    current = apply_up(&current, params);
                    step_index += 1;
                }
            }
            Run::Down(n) => {
                for _ in 0..n {
                    step_index += 1;
                    current = apply_down(&current, params)
                        .ok_or(PathError::InvalidDownStep(step_index))?;
                }
            }
            Run::Pair(n) => {
                current += BigUint::from(n) * params.d;
                step_index += 2 * n;
            }
        }
    }
    Ok(current)
}

/// Reduces the witness's vertex sequence modulo `d`. Belt pairs preserve
/// the residue class, so the even positions inside a belt all agree.
pub fn project_residues(
    witness: &PathWitness,
    params: &ProblemParams,
) -> Result<Vec<u64>, PathError> {
    let vertices = evaluate_path(witness, params)?;
    let d = BigUint::from(params.d);
    Ok(vertices
        .iter()
        .map(|v| {
            let m = v % &d;
            m.iter_u64_digits().next().unwrap_or(0)
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SegmentKind {
    Belt,
    Ladder,
    Chute,
}

/// One maximal piece of a label string: `(UD)^repeat`, `U^repeat` or
/// `D^repeat`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Segment {
    pub kind: SegmentKind,
    pub repeat: u64,
}

impl Segment {
    pub fn step_count(&self) -> u64 {
        match self.kind {
            SegmentKind::Belt => 2 * self.repeat,
            _ => self.repeat,
        }
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}x{}", self.kind, self.repeat)
    }
}

/// Splits a label sequence into belt, ladder and chute segments.
///
/// The split is the greedy left-to-right one: every `U` immediately
/// followed by a `D` joins a belt, maximal runs of pairs merge, and the
/// leftovers become ladders or chutes. Concatenating the segments always
/// reproduces the input; adjacent segments never share a kind; and a
/// ladder is never directly followed by a chute (the `U` before a `D`
/// would have formed a belt pair).
///
/// The function accepts label strings that no valid path realizes (such as
/// `UUDD`); checking a path against the graph is `evaluate_path`'s job.
pub fn decompose(labels: &Labels) -> Vec<Segment> {
    labels
        .runs
        .iter()
        .map(|run| match *run {
            Run::Up(n) => Segment {
                kind: SegmentKind::Ladder,
                repeat: n,
            },
            Run::Down(n) => Segment {
                kind: SegmentKind::Chute,
                repeat: n,
            },
            Run::Pair(n) => Segment {
                kind: SegmentKind::Belt,
                repeat: n,
            },
        })
        .collect()
}

/// Verifies that no `UUDD` subpath exists with either up-step launched from
/// `2..=x_max`: two consecutive up-steps followed by two down-steps would
/// force an integer `y` with `y^e - (x+d)^e = d`, i.e. `(x+d)^e + d` would
/// have to be a perfect `e`-th power.
pub fn check_uudd_infeasible(params: &ProblemParams, x_max: u64) -> bool {
    assert!(x_max >= 2, "x_max must be at least 2");
    for x in 2..=x_max {
        let inner = apply_up(&BigUint::from(x), params) + params.d;
        if arith::exact_eth_root(&inner, params.e).is_some() {
            return false;
        }
    }
    true
}

/// Builds the explicit path from `x` to `y` in the `d=5, e=2` graph:
/// two up-steps to `w = ((x+5)^2+5)^2`, a belt of `(z-w)/5` pairs to the
/// least `z = y^(2^k)` with `z = 1 (mod 5)` and `z >= w`, then `k`
/// down-steps to `y`.
///
/// Rejects parameters other than `d=5, e=2` and endpoints that are not
/// vertices (below 2 or divisible by 5).
pub fn connecting_path(
    x: &BigUint,
    y: &BigUint,
    params: &ProblemParams,
) -> Result<PathWitness, PathError> {
    if params.d != 5 || params.e != 2 {
        return Err(PathError::UnsupportedParams(params.d, params.e));
    }
    let five = BigUint::from(5u32);
    let two = BigUint::from(2u32);
    for v in [x, y] {
        if *v < two || (v % &five).is_zero() {
            return Err(PathError::NotAVertex(v.clone(), 5));
        }
    }

    let w = apply_up(&apply_up(x, params), params);
    let one = BigUint::from(1u32);
    let mut z = y.clone();
    let mut down_steps = 0u64;
    while z < w || &z % &five != one {
        z = &z * &z;
        down_steps += 1;
    }

    let pairs_big = (&z - &w) / &five;
    let mut digits = pairs_big.iter_u64_digits();
    let pairs = digits.next().unwrap_or(0);
    if digits.next().is_some() {
        return Err(PathError::BeltTooLong(pairs_big));
    }

    let mut labels = Labels::new();
    labels.push_many(Step::Up, 2);
    labels.push_pairs(pairs);
    labels.push_many(Step::Down, down_steps);
    Ok(PathWitness::new(x.clone(), labels))
}
