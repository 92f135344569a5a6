//! Power-map graphs modulo primes: build the functional graph `x -> x^e`
//! on the units `1..p`, count its weakly connected components both by
//! traversal and by the divisor-sum formula, decide when a problem
//! instance has the maximal solution (all non-multiples of `d`), and
//! classify the prime families where that happens.
//!
//! Connectivity is always taken in the undirected sense: the solution-set
//! closure walks edges both ways, taking powers forward and roots backward.

use std::fmt;

use thiserror::Error;

use crate::arith;
use crate::paths::ProblemParams;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ModGraphError {
    #[error("{0} is not prime")]
    CompositeModulus(u64),
    #[error("exponent must be at least 2, got {0}")]
    ExponentTooSmall(u64),
    #[error("modulus {0} exceeds the brute-force limit {1}")]
    ModulusTooLarge(u64, u64),
}

/// The functional graph of `x -> x^e mod p` on the units `{1, ..., p-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerGraph {
    p: u64,
    e: u64,
    succ: Vec<u64>,
}

/// Builds the graph for a prime modulus. Residue 0 is not a vertex: the
/// solution sets in this crate only ever contain non-multiples of `p`.
pub fn build_power_graph(p: u64, e: u64) -> Result<PowerGraph, ModGraphError> {
    if e < 2 {
        return Err(ModGraphError::ExponentTooSmall(e));
    }
    if !arith::is_prime(p) {
        return Err(ModGraphError::CompositeModulus(p));
    }
    let succ = (1..p).map(|x| arith::mod_pow(x, e, p)).collect();
    Ok(PowerGraph { p, e, succ })
}

impl PowerGraph {
    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u64 {
        self.e
    }

    /// Where the unit `x` maps: `x^e mod p`.
    pub fn successor(&self, x: u64) -> u64 {
        assert!(x >= 1 && x < self.p, "{x} is not a unit mod {}", self.p);
        self.succ[(x - 1) as usize]
    }

    fn component_labels(&self) -> Vec<usize> {
        let n = self.succ.len();
        let mut uf = UnionFind::new(n);
        for (i, &target) in self.succ.iter().enumerate() {
            uf.union(i, (target - 1) as usize);
        }
        (0..n).map(|i| uf.find(i)).collect()
    }

    /// Graphviz DOT rendering: one directed edge per unit, vertices filled
    /// by connected component.
    pub fn to_dot(&self) -> String {
        use fmt::Write;
        let labels = self.component_labels();
        let mut color_of = vec![usize::MAX; labels.len()];
        let mut next_color = 0usize;
        let mut out = String::new();
        let _ = writeln!(out, "digraph power_map_mod_{} {{", self.p);
        let _ = writeln!(out, "  label=\"x -> x^{} mod {}\";", self.e, self.p);
        let _ = writeln!(out, "  node [style=filled, colorscheme=set312];");
        for x in 1..self.p {
            let root = labels[(x - 1) as usize];
            if color_of[root] == usize::MAX {
                color_of[root] = next_color;
                next_color += 1;
            }
            let _ = writeln!(out, "  {} [fillcolor={}];", x, color_of[root] % 12 + 1);
        }
        for x in 1..self.p {
            let _ = writeln!(out, "  {} -> {};", x, self.successor(x));
        }
        out.push_str("}\n");
        out
    }
}

/// Number of weakly connected components, by union-find over the edges.
pub fn count_components_traversal(graph: &PowerGraph) -> u64 {
    let labels = graph.component_labels();
    let mut roots: Vec<usize> = labels.clone();
    roots.sort_unstable();
    roots.dedup();
    roots.len() as u64
}

/// Number of components by the divisor-sum formula: with `rho` the largest
/// divisor of `p-1` coprime to `e`, the count is the sum over `d | rho` of
/// `phi(d) / ord_d(e)`. Returns `(rho, count)`; every summand divides
/// exactly.
pub fn count_components_formula(p: u64, e: u64) -> Result<(u64, u64), ModGraphError> {
    if e < 2 {
        return Err(ModGraphError::ExponentTooSmall(e));
    }
    if !arith::is_prime(p) {
        return Err(ModGraphError::CompositeModulus(p));
    }
    let mut rho = p - 1;
    for q in arith::factorize(e).primes() {
        while rho % q == 0 {
            rho /= q;
        }
    }
    let mut count = 0;
    for d in arith::divisors(rho) {
        let phi = arith::euler_phi(d);
        let ord = arith::mult_order(e, d);
        assert!(
            phi % ord == 0,
            "phi({d}) = {phi} not divisible by ord_{d}({e}) = {ord}"
        );
        count += phi / ord;
    }
    Ok((rho, count))
}

/// Everything this crate knows about one `(p, e)` power map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerMapAnalysis {
    pub p: u64,
    pub e: u64,
    pub rho: u64,
    pub formula_count: u64,
    pub traversal_count: u64,
    pub is_connected: bool,
    pub is_star: bool,
}

/// Runs both component counts and cross-checks them against each other and
/// against the `rho = 1` connectivity criterion.
pub fn analyze(p: u64, e: u64) -> Result<PowerMapAnalysis, ModGraphError> {
    let (rho, formula_count) = count_components_formula(p, e)?;
    let graph = build_power_graph(p, e)?;
    let traversal_count = count_components_traversal(&graph);
    assert_eq!(
        formula_count, traversal_count,
        "component formula disagrees with traversal for p={p}, e={e}"
    );
    assert_eq!(formula_count == 1, rho == 1);
    Ok(PowerMapAnalysis {
        p,
        e,
        rho,
        formula_count,
        traversal_count,
        is_connected: formula_count == 1,
        is_star: is_star(p, e)?,
    })
}

/// Why an instance fails to be maximal; conditions are checked in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MaximalityFailure {
    DNotPrime { d: u64 },
    RootMultipleOfD,
    RadicalDoesNotDivide { radical: u64, e: u32 },
}

impl fmt::Display for MaximalityFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaximalityFailure::DNotPrime { d } => write!(f, "d = {d} is not prime"),
            MaximalityFailure::RootMultipleOfD => write!(f, "r ≡ 0 (mod d)"),
            MaximalityFailure::RadicalDoesNotDivide { radical, e } => {
                write!(f, "radical(d-1) = {radical} does not divide e = {e}")
            }
        }
    }
}

/// Verdict on whether the solution set of an instance is all integers
/// `>= 2` not divisible by `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalityVerdict {
    pub maximal: bool,
    pub failure: Option<MaximalityFailure>,
}

impl fmt::Display for MaximalityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "true"),
            Some(reason) => write!(f, "false: {reason}"),
        }
    }
}

/// Decides maximality by the three-condition criterion: `d` prime, `r` a
/// unit mod `d`, and every prime factor of `d-1` dividing `e`.
pub fn is_maximal(params: &ProblemParams) -> MaximalityVerdict {
    let failure = if !arith::is_prime(params.d()) {
        Some(MaximalityFailure::DNotPrime { d: params.d() })
    } else if params.r() % params.d() == 0 {
        Some(MaximalityFailure::RootMultipleOfD)
    } else {
        let radical = arith::radical(params.d() - 1);
        if u64::from(params.e()) % radical != 0 {
            Some(MaximalityFailure::RadicalDoesNotDivide {
                radical,
                e: params.e(),
            })
        } else {
            None
        }
    };
    MaximalityVerdict {
        maximal: failure.is_none(),
        failure,
    }
}

/// Maximum modulus accepted by [`is_maximal_bruteforce`].
pub const BRUTEFORCE_MODULUS_LIMIT: u64 = 2000;

/// Independent maximality oracle: closes `{r mod d}` under the residue
/// power map and its inverse, and checks the closure covers every nonzero
/// residue. Deliberately shares no logic with [`is_maximal`] beyond the
/// primality and unit preconditions both definitions impose.
pub fn is_maximal_bruteforce(params: &ProblemParams) -> Result<bool, ModGraphError> {
    let d = params.d();
    if d > BRUTEFORCE_MODULUS_LIMIT {
        return Err(ModGraphError::ModulusTooLarge(d, BRUTEFORCE_MODULUS_LIMIT));
    }
    if !arith::is_prime(d) || params.r() % d == 0 {
        return Ok(false);
    }
    // closure of {r} under x -> x^e and its preimages = the weakly
    // connected component of r in the power-map graph on units
    let n = (d - 1) as usize;
    let mut uf = UnionFind::new(n);
    for x in 1..d {
        let y = arith::mod_pow(x, u64::from(params.e()), d);
        uf.union((x - 1) as usize, (y - 1) as usize);
    }
    let r_root = uf.find((params.r() % d - 1) as usize);
    Ok((0..n).all(|i| uf.find(i) == r_root))
}

/// True when every unit maps to 1 in one step, i.e. `p - 1` divides `e`.
pub fn is_star(p: u64, e: u64) -> Result<bool, ModGraphError> {
    if !arith::is_prime(p) {
        return Err(ModGraphError::CompositeModulus(p));
    }
    Ok(e % (p - 1) == 0)
}

/// An exponent `2 <= e <= p-2` whose power map mod `p` is connected, when
/// one exists: `e = (p-1)/q` for the least prime `q` with `q^2 | p-1`.
/// Such an exponent exists exactly when `p-1` is not squarefree.
pub fn small_maximal_exponent(p: u64) -> Result<Option<u64>, ModGraphError> {
    if !arith::is_prime(p) {
        return Err(ModGraphError::CompositeModulus(p));
    }
    if p == 2 {
        return Ok(None);
    }
    let repeated = arith::factorize(p - 1)
        .factors()
        .iter()
        .find(|&&(_, k)| k >= 2)
        .map(|&(q, _)| q);
    Ok(repeated.map(|q| (p - 1) / q))
}

/// Structural facts about `p - 1` that control the power-map families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeClassification {
    /// `Some(q)` when `p = q^k + 1` for a prime `q` and some `k >= 1`.
    pub fermat_like_base: Option<u64>,
    pub p_minus_1_squarefree: bool,
}

/// Reports whether `p - 1` is a prime power (and of which prime), and
/// whether it is squarefree. `k = 1` cases are reported too; callers that
/// need `k >= 2` filter on the exponent themselves.
pub fn classify_prime(p: u64) -> Result<PrimeClassification, ModGraphError> {
    if !arith::is_prime(p) {
        return Err(ModGraphError::CompositeModulus(p));
    }
    let factorization = arith::factorize(p - 1);
    let fermat_like_base = match factorization.factors() {
        [(q, _)] => Some(*q),
        _ => None,
    };
    Ok(PrimeClassification {
        fermat_like_base,
        p_minus_1_squarefree: arith::is_squarefree(p - 1),
    })
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(d: u64, e: u32, r: u64) -> ProblemParams {
        ProblemParams::new(d, e, r).unwrap()
    }

    #[test]
    fn squaring_graph_mod_five() {
        let g = build_power_graph(5, 2).unwrap();
        assert_eq!(g.successor(1), 1);
        assert_eq!(g.successor(2), 4);
        assert_eq!(g.successor(3), 4);
        assert_eq!(g.successor(4), 1);
        assert_eq!(count_components_traversal(&g), 1);
    }

    #[test]
    fn star_graph_mod_five() {
        let g = build_power_graph(5, 4).unwrap();
        for x in 1..5 {
            assert_eq!(g.successor(x), 1);
        }
    }

    #[test]
    fn composite_modulus_rejected() {
        assert_eq!(
            build_power_graph(15, 2).unwrap_err(),
            ModGraphError::CompositeModulus(15)
        );
        assert_eq!(
            count_components_formula(1, 2).unwrap_err(),
            ModGraphError::CompositeModulus(1)
        );
    }

    #[test]
    fn traversal_counts() {
        let g = build_power_graph(7, 2).unwrap();
        assert_eq!(count_components_traversal(&g), 2);
        // components {1, 6} and {2, 3, 4, 5}
        let labels = g.component_labels();
        assert_eq!(labels[0], labels[5]);
        assert_eq!(labels[1], labels[2]);
        assert_eq!(labels[1], labels[3]);
        assert_eq!(labels[1], labels[4]);
        assert_ne!(labels[0], labels[1]);

        let g13 = build_power_graph(13, 2).unwrap();
        assert_eq!(count_components_traversal(&g13), 2);
    }

    #[test]
    fn formula_counts() {
        assert_eq!(count_components_formula(5, 2).unwrap(), (1, 1));
        assert_eq!(count_components_formula(7, 2).unwrap(), (3, 2));
        assert_eq!(count_components_formula(13, 2).unwrap(), (3, 2));
        assert_eq!(count_components_formula(17, 4).unwrap(), (1, 1));
    }

    #[test]
    fn formula_matches_traversal_small_range() {
        for p in (2..100).filter(|&p| arith::is_prime(p)) {
            for e in 2..=8 {
                let (rho, formula) = count_components_formula(p, e).unwrap();
                let traversal = count_components_traversal(&build_power_graph(p, e).unwrap());
                assert_eq!(formula, traversal, "p={p} e={e}");
                assert_eq!(formula == 1, rho == 1, "p={p} e={e}");
            }
        }
    }

    #[test]
    fn analysis_cross_checks() {
        let a = analyze(17, 4).unwrap();
        assert_eq!(a.rho, 1);
        assert_eq!(a.formula_count, 1);
        assert!(a.is_connected);
        assert!(!a.is_star);
    }

    #[test]
    fn maximality_examples() {
        assert!(is_maximal(&params(5, 2, 2)).maximal);
        assert!(is_maximal(&params(17, 4, 2)).maximal);
        let v = is_maximal(&params(7, 2, 2));
        assert!(!v.maximal);
        assert_eq!(
            v.failure,
            Some(MaximalityFailure::RadicalDoesNotDivide { radical: 6, e: 2 })
        );
        assert_eq!(
            v.to_string(),
            "false: radical(d-1) = 6 does not divide e = 2"
        );
        let v = is_maximal(&params(5, 2, 10));
        assert_eq!(v.to_string(), "false: r ≡ 0 (mod d)");
        let v = is_maximal(&params(6, 2, 5));
        assert_eq!(v.failure, Some(MaximalityFailure::DNotPrime { d: 6 }));
    }

    #[test]
    fn bruteforce_examples() {
        assert!(is_maximal_bruteforce(&params(5, 2, 2)).unwrap());
        assert!(!is_maximal_bruteforce(&params(7, 2, 2)).unwrap());
        assert!(!is_maximal_bruteforce(&params(5, 2, 10)).unwrap());
        assert_eq!(
            is_maximal_bruteforce(&params(2001, 2, 2)).unwrap_err(),
            ModGraphError::ModulusTooLarge(2001, 2000)
        );
    }

    #[test]
    fn theorem_matches_bruteforce_small_range() {
        for d in (2..60).filter(|&d| arith::is_prime(d)) {
            for e in 2..=6u32 {
                for r in 2..=d + 1 {
                    let p = params(d, e, r);
                    assert_eq!(
                        is_maximal(&p).maximal,
                        is_maximal_bruteforce(&p).unwrap(),
                        "d={d} e={e} r={r}"
                    );
                }
            }
        }
    }

    #[test]
    fn star_examples() {
        assert!(is_star(5, 4).unwrap());
        assert!(!is_star(5, 2).unwrap());
        assert!(!is_star(17, 4).unwrap());
        assert!(is_star(5, 8).unwrap());
    }

    #[test]
    fn star_implies_connected() {
        for p in (3..60).filter(|&p| arith::is_prime(p)) {
            let a = analyze(p, p - 1).unwrap();
            assert!(a.is_star);
            assert!(a.is_connected, "p={p}");
        }
    }

    #[test]
    fn small_exponent_examples() {
        assert_eq!(small_maximal_exponent(5).unwrap(), Some(2));
        assert_eq!(small_maximal_exponent(7).unwrap(), None);
        assert_eq!(small_maximal_exponent(17).unwrap(), Some(8));
    }

    #[test]
    fn small_exponent_iff_not_squarefree() {
        for p in (3..10_000).filter(|&p| arith::is_prime(p)) {
            let e = small_maximal_exponent(p).unwrap();
            assert_eq!(e.is_some(), !arith::is_squarefree(p - 1), "p={p}");
            if let Some(e) = e {
                assert!((2..=p - 2).contains(&e), "p={p} e={e}");
                let (rho, count) = count_components_formula(p, e).unwrap();
                assert_eq!((rho, count), (1, 1), "p={p} e={e}");
            }
        }
    }

    #[test]
    fn classification_examples() {
        let c = classify_prime(5).unwrap();
        assert_eq!(c.fermat_like_base, Some(2));
        assert!(!c.p_minus_1_squarefree);

        let c = classify_prime(17).unwrap();
        assert_eq!(c.fermat_like_base, Some(2));
        assert!(!c.p_minus_1_squarefree);

        let c = classify_prime(11).unwrap();
        assert_eq!(c.fermat_like_base, None);
        assert!(c.p_minus_1_squarefree);

        // k = 1: p - 1 itself prime
        let c = classify_prime(3).unwrap();
        assert_eq!(c.fermat_like_base, Some(2));
        assert!(c.p_minus_1_squarefree);
    }

    #[test]
    fn squaring_connected_iff_fermat_prime() {
        for p in (3..100_000).filter(|&p| arith::is_prime(p)) {
            let (_, count) = count_components_formula(p, 2).unwrap();
            let power_of_two = (p - 1) & (p - 2) == 0;
            assert_eq!(count == 1, power_of_two, "p={p}");
        }
    }

    #[test]
    fn dot_export_shape() {
        let g = build_power_graph(5, 2).unwrap();
        let dot = g.to_dot();
        assert!(dot.starts_with("digraph power_map_mod_5 {"));
        assert!(dot.contains("2 -> 4;"));
        assert!(dot.contains("4 -> 1;"));
        assert!(dot.contains("colorscheme=set312"));
        assert!(dot.trim_end().ends_with('}'));

        let g7 = build_power_graph(7, 2).unwrap();
        let dot = g7.to_dot();
        // two components, two fill colors
        assert!(dot.contains("1 [fillcolor=1];"));
        assert!(dot.contains("2 [fillcolor=2];"));
        assert!(dot.contains("6 [fillcolor=1];"));
    }
}
