//! The row engine: generate rows exactly (uncapped) or under a certified
//! cutoff, and compute first appearances with reconstructable witness paths.
//!
//! Row 1 holds `{r}`. Each later row applies the up-rule `(x+d)^e`
//! (cutoff-filtered, when a cutoff is set) and the down-rule `m` for every
//! perfect `e`-th power `m^e` in the previous row (never filtered; roots
//! only shrink). A value's first row equals 1 + the length of the shortest
//! path reaching it, which is what lets the bounds module certify results.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use thiserror::Error;

use crate::bounds::{self, BoundQuery};
use crate::paths::{apply_down, apply_up, Labels, PathWitness, ProblemParams, Step};

/// One row: an index (1-based) and its entries, deduplicated and ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    index: u32,
    entries: Vec<BigUint>,
}

impl Row {
    /// Builds a row, sorting and deduplicating the entries.
    pub fn new(index: u32, mut entries: Vec<BigUint>) -> Self {
        assert!(index >= 1, "row indices are 1-based");
        entries.sort();
        entries.dedup();
        Self { index, entries }
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn entries(&self) -> &[BigUint] {
        &self.entries
    }

    pub fn contains(&self, value: &BigUint) -> bool {
        self.entries.binary_search(value).is_ok()
    }
}

/// Guards against computations whose output could not be stored anyway:
/// uncapped entries grow like 2^(2^i), and over-wide capped rows signal a
/// cutoff far beyond anything certifiable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RowLimits {
    pub max_uncapped_rows: u32,
    pub max_row_entries: usize,
}

impl Default for RowLimits {
    fn default() -> Self {
        Self {
            max_uncapped_rows: 8,
            max_row_entries: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum RowsError {
    #[error(
        "uncapped generation is limited to {limit} rows (entries grow doubly \
         exponentially); set a cutoff or raise the row limit"
    )]
    UncappedDepth { limit: u32 },
    #[error("row {index} exceeds the {limit}-entry guard")]
    RowTooWide { index: u32, limit: usize },
    #[error(
        "cutoff {given} is below the certified bound {required} for this query; \
         first appearances under it could silently miss shorter paths"
    )]
    CutoffTooSmall { given: BigUint, required: BigUint },
}

/// Applies one step of the recurrence. Up-results above the cutoff are
/// dropped; down-results never are.
pub fn next_row(current: &Row, params: &ProblemParams, cutoff: Option<&BigUint>) -> Row {
    let mut entries = Vec::with_capacity(current.entries.len() * 2);
    for x in &current.entries {
        let up = apply_up(x, params);
        if cutoff.is_none_or(|m| &up <= m) {
            entries.push(up);
        }
        if let Some(root) = apply_down(x, params) {
            entries.push(root);
        }
    }
    Row::new(current.index + 1, entries)
}

/// Rows 1 through `count`. Uncapped generation refuses to go deeper than
/// `limits.max_uncapped_rows`; capped generation refuses rows wider than
/// `limits.max_row_entries`.
pub fn generate_rows(
    params: &ProblemParams,
    count: u32,
    cutoff: Option<&BigUint>,
    limits: &RowLimits,
) -> Result<Vec<Row>, RowsError> {
    assert!(count >= 1, "row count must be at least 1");
    if cutoff.is_none() && count > limits.max_uncapped_rows {
        return Err(RowsError::UncappedDepth {
            limit: limits.max_uncapped_rows,
        });
    }
    let mut rows = Vec::with_capacity(count as usize);
    rows.push(Row::new(1, vec![BigUint::from(params.r())]));
    while rows.len() < count as usize {
        let next = next_row(rows.last().unwrap(), params, cutoff);
        if next.entries.len() > limits.max_row_entries {
            return Err(RowsError::RowTooWide {
                index: next.index,
                limit: limits.max_row_entries,
            });
        }
        rows.push(next);
    }
    Ok(rows)
}

/// Rows 1 through `count` flattened in row-major order, ascending within
/// each row.
pub fn emit_triangle(
    params: &ProblemParams,
    count: u32,
    cutoff: Option<&BigUint>,
    limits: &RowLimits,
) -> Result<Vec<BigUint>, RowsError> {
    Ok(generate_rows(params, count, cutoff, limits)?
        .into_iter()
        .flat_map(|row| row.entries)
        .collect())
}

/// A certified first appearance: the minimal row index of `target`, plus a
/// witness path from `r` with exactly `row_index - 1` edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstAppearance {
    pub target: BigUint,
    pub row_index: u32,
    pub witness: PathWitness,
}

/// Outcome of a first-appearance query. Targets that never showed up
/// within `max_rows` land in `absent`; absence is a finding, not an error.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FirstAppearances {
    pub found: BTreeMap<BigUint, FirstAppearance>,
    pub absent: Vec<BigUint>,
}

/// The smallest cutoff this module will accept for a first-appearance
/// query: the path bound for the worst target, with `half_length` covering
/// `max_rows - 1` edges. The specialized bound serves the `d=5, e=2`
/// instance; every other instance gets the general one.
pub fn required_cutoff(params: &ProblemParams, targets: &[BigUint], max_rows: u32) -> BigUint {
    let half_length = u64::from(max_rows.saturating_sub(1)).div_ceil(2).max(1);
    let start = BigUint::from(params.r());
    targets
        .iter()
        .map(|y| {
            let query = BoundQuery::new(start.clone(), y.clone(), half_length, *params)
                .expect("half_length >= 1");
            if params.d() == 5 && params.e() == 2 {
                bounds::path_max_bound(&query)
            } else {
                bounds::general_path_max_bound(&query)
            }
        })
        .max()
        .unwrap_or_else(|| BigUint::from(0u32))
}

#[derive(Clone)]
struct Discovery {
    row: u32,
    parent: Option<(BigUint, Step)>,
}

/// Finds the minimal row index of each target within `max_rows` rows under
/// the given cutoff, with a validated-by-construction witness path.
///
/// The search is row-synchronous breadth-first expansion: rows are the BFS
/// frontier, re-derivations of already-seen values are suppressed (their
/// expansions already happened in an earlier row), and when an up-parent
/// and a down-parent reach the same value in the same round the down-parent
/// wins, which keeps witnesses deterministic.
///
/// Rejects cutoffs below [`required_cutoff`] — results under a smaller
/// cutoff could miss shorter paths and would certify nothing.
pub fn first_appearances(
    params: &ProblemParams,
    targets: &[BigUint],
    max_rows: u32,
    cutoff: &BigUint,
) -> Result<FirstAppearances, RowsError> {
    let required = required_cutoff(params, targets, max_rows);
    if *cutoff < required {
        return Err(RowsError::CutoffTooSmall {
            given: cutoff.clone(),
            required,
        });
    }

    let start = BigUint::from(params.r());
    let mut seen: HashMap<BigUint, Discovery> = HashMap::new();
    seen.insert(
        start.clone(),
        Discovery {
            row: 1,
            parent: None,
        },
    );
    let mut remaining: Vec<&BigUint> = targets.iter().filter(|t| **t != start).collect();
    let mut frontier = vec![start];

    for row in 2..=max_rows {
        if remaining.is_empty() {
            break;
        }
        let mut next = Vec::new();
        // down-steps first so a down-parent claims ties in this round
        for x in &frontier {
            if let Some(root) = apply_down(x, params) {
                if !seen.contains_key(&root) {
                    seen.insert(
                        root.clone(),
                        Discovery {
                            row,
                            parent: Some((x.clone(), Step::Down)),
                        },
                    );
                    next.push(root);
                }
            }
        }
        for x in &frontier {
            let up = apply_up(x, params);
            if up <= *cutoff && !seen.contains_key(&up) {
                seen.insert(
                    up.clone(),
                    Discovery {
                        row,
                        parent: Some((x.clone(), Step::Up)),
                    },
                );
                next.push(up);
            }
        }
        remaining.retain(|t| !seen.contains_key(*t));
        next.sort();
        frontier = next;
    }

    let mut result = FirstAppearances::default();
    for target in targets {
        match seen.get(target) {
            Some(hit) => {
                let witness = reconstruct_witness(&seen, target);
                debug_assert_eq!(witness.edge_count(), u64::from(hit.row) - 1);
                result.found.insert(
                    target.clone(),
                    FirstAppearance {
                        target: target.clone(),
                        row_index: hit.row,
                        witness,
                    },
                );
            }
            None => result.absent.push(target.clone()),
        }
    }
    result.absent.sort();
    result.absent.dedup();
    Ok(result)
}

fn reconstruct_witness(seen: &HashMap<BigUint, Discovery>, target: &BigUint) -> PathWitness {
    let mut steps = Vec::new();
    let mut cursor = target;
    loop {
        let info = &seen[cursor];
        match &info.parent {
            Some((parent, step)) => {
                steps.push(*step);
                cursor = parent;
            }
            None => break,
        }
    }
    steps.reverse();
    PathWitness::new(cursor.clone(), Labels::from_steps(steps))
}
