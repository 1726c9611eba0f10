//! Exact model counting over bounded integer boxes, and the frequency-weighted
//! performance estimate `Σ δ·pind / Σ δ`.
//!
//! Counting splits a condition into groups of constraints that share
//! variables. A group over one variable with affine constraints is solved as
//! an interval; larger affine groups enumerate their smallest-domain variable
//! and recurse; groups with non-affine constraints are enumerated point by
//! point. Variables that no constraint mentions contribute their full domain
//! size.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_rational::Ratio;

use crate::pathex::{Constraint, PathCondition, Rel, SymExpr};

/// Inclusive `(lo, hi)` per input variable.
pub type Domains = BTreeMap<String, (i64, i64)>;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CountError {
    #[error("variable `{0}` has no declared domain")]
    UnboundedDomain(String),
    #[error("model counting needs more than {0} enumeration steps")]
    BudgetExceeded(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EstimateError {
    #[error("no path carries a positive frequency")]
    EmptyOrZeroWeight,
}

/// Number of points in the box of `domains` satisfying `cond`.
pub fn model_count(cond: &PathCondition, domains: &Domains) -> Result<u128, CountError> {
    model_count_with_budget(cond, domains, DEFAULT_BUDGET)
}

/// As [`model_count`]; `budget` caps the number of enumerated values.
pub fn model_count_with_budget(
    cond: &PathCondition,
    domains: &Domains,
    budget: u64,
) -> Result<u128, CountError> {
    for v in cond.vars() {
        if !domains.contains_key(&v) {
            return Err(CountError::UnboundedDomain(v));
        }
    }
    let mut counter = Counter { budget, work: 0 };
    counter.count(&cond.constraints, domains)
}

fn domain_size((lo, hi): (i64, i64)) -> u128 {
    if lo > hi {
        0
    } else {
        (hi as i128 - lo as i128 + 1) as u128
    }
}

struct Counter {
    budget: u64,
    work: u64,
}

impl Counter {
    fn spend(&mut self, n: u128) -> Result<(), CountError> {
        self.work = self
            .work
            .saturating_add(u64::try_from(n).unwrap_or(u64::MAX));
        if self.work > self.budget {
            Err(CountError::BudgetExceeded(self.budget))
        } else {
            Ok(())
        }
    }

    fn count(&mut self, cs: &[Constraint], domains: &Domains) -> Result<u128, CountError> {
        let mut live = Vec::new();
        for c in cs {
            if c.vars().is_empty() {
                if !c.holds(&|_| 0) {
                    return Ok(0);
                }
            } else {
                live.push(c.clone());
            }
        }
        let mut total: u128 = 1;
        let mut covered = BTreeSet::new();
        for group in components(&live) {
            let vars: BTreeSet<String> = group.iter().flat_map(|c| c.vars()).collect();
            let n = self.component(&group, &vars, domains)?;
            if n == 0 {
                return Ok(0);
            }
            total = total.saturating_mul(n);
            covered.extend(vars);
        }
        for (v, d) in domains {
            if !covered.contains(v) {
                total = total.saturating_mul(domain_size(*d));
            }
        }
        Ok(total)
    }

    fn component(
        &mut self,
        cs: &[Constraint],
        vars: &BTreeSet<String>,
        domains: &Domains,
    ) -> Result<u128, CountError> {
        let affine = cs.iter().all(|c| c.expr.is_affine());
        if affine && vars.len() == 1 {
            let v = vars.iter().next().expect("one variable");
            return Ok(interval_count(cs, v, domains[v]));
        }
        if !affine {
            let size = vars
                .iter()
                .fold(1u128, |acc, v| acc.saturating_mul(domain_size(domains[v])));
            self.spend(size)?;
            return Ok(brute_force(cs, vars, domains));
        }
        let pivot = vars
            .iter()
            .min_by_key(|v| domain_size(domains[*v]))
            .expect("non-empty component");
        let (lo, hi) = domains[pivot];
        if lo > hi {
            return Ok(0);
        }
        self.spend(domain_size((lo, hi)))?;
        let rest: Domains = vars
            .iter()
            .filter(|v| *v != pivot)
            .map(|v| (v.clone(), domains[v]))
            .collect();
        let mut total = 0u128;
        for x in lo..=hi {
            let reduced: Vec<Constraint> = cs.iter().map(|c| c.substitute(pivot, x)).collect();
            total += self.count(&reduced, &rest)?;
        }
        Ok(total)
    }
}

/// Groups constraints into connected components of shared variables. Groups
/// stay pairwise disjoint, so merging on the new constraint's variables is
/// enough.
fn components(cs: &[Constraint]) -> Vec<Vec<Constraint>> {
    let mut groups: Vec<(BTreeSet<String>, Vec<Constraint>)> = Vec::new();
    for c in cs {
        let vars = c.vars();
        let mut merged = (vars.clone(), vec![c.clone()]);
        let mut i = 0;
        while i < groups.len() {
            if !groups[i].0.is_disjoint(&vars) {
                let (gv, mut gc) = groups.remove(i);
                merged.0.extend(gv);
                gc.extend(merged.1);
                merged.1 = gc;
            } else {
                i += 1;
            }
        }
        groups.push(merged);
    }
    groups.into_iter().map(|(_, c)| c).collect()
}

fn floor_div(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn ceil_div(a: i128, b: i128) -> i128 {
    -floor_div(-a, b)
}

/// Closed-form count for affine constraints over the single variable `v`.
fn interval_count(cs: &[Constraint], v: &str, (lo, hi): (i64, i64)) -> u128 {
    let (mut lo, mut hi) = (lo as i128, hi as i128);
    let mut excluded = BTreeSet::new();
    for c in cs {
        let SymExpr::Affine(a) = &c.expr else {
            unreachable!("affine component")
        };
        let k = a.coeffs[v] as i128;
        let c0 = a.constant as i128;
        // k·x + c0 rel 0
        match c.rel {
            Rel::Lt | Rel::Le => {
                let bound = -c0 - i128::from(c.rel == Rel::Lt);
                if k > 0 {
                    hi = hi.min(floor_div(bound, k));
                } else {
                    lo = lo.max(ceil_div(bound, k));
                }
            }
            Rel::Gt | Rel::Ge => {
                let bound = -c0 + i128::from(c.rel == Rel::Gt);
                if k > 0 {
                    lo = lo.max(ceil_div(bound, k));
                } else {
                    hi = hi.min(floor_div(bound, k));
                }
            }
            Rel::Eq => {
                if (-c0) % k != 0 {
                    return 0;
                }
                let x = -c0 / k;
                lo = lo.max(x);
                hi = hi.min(x);
            }
            Rel::Ne => {
                if (-c0) % k == 0 {
                    excluded.insert(-c0 / k);
                }
            }
        }
    }
    if lo > hi {
        return 0;
    }
    let holes = excluded.range(lo..=hi).count() as u128;
    (hi - lo + 1) as u128 - holes
}

fn brute_force(cs: &[Constraint], vars: &BTreeSet<String>, domains: &Domains) -> u128 {
    let vars: Vec<&String> = vars.iter().collect();
    if vars.iter().any(|v| domains[*v].0 > domains[*v].1) {
        return 0;
    }
    let mut point: Vec<i64> = vars.iter().map(|v| domains[*v].0).collect();
    let mut n = 0u128;
    loop {
        let env = |name: &str| {
            let i = vars
                .iter()
                .position(|v| *v == name)
                .expect("bound variable");
            point[i]
        };
        if cs.iter().all(|c| c.holds(&env)) {
            n += 1;
        }
        // Odometer increment.
        let mut i = 0;
        loop {
            if i == vars.len() {
                return n;
            }
            if point[i] < domains[vars[i]].1 {
                point[i] += 1;
                break;
            }
            point[i] = domains[vars[i]].0;
            i += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathWeight {
    pub path_id: usize,
    pub delta: u128,
    pub pind: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Estimate {
    pub per_path: Vec<PathWeight>,
    pub total_weight: u128,
    pub weighted_sum: u128,
    pub value: Ratio<u128>,
}

/// Paths numbered in input order.
pub fn estimate_performance(paths: &[(u128, u64)]) -> Result<Estimate, EstimateError> {
    let weights: Vec<PathWeight> = paths
        .iter()
        .enumerate()
        .map(|(i, &(delta, pind))| PathWeight {
            path_id: i,
            delta,
            pind,
        })
        .collect();
    estimate_weighted(weights)
}

pub fn estimate_weighted(per_path: Vec<PathWeight>) -> Result<Estimate, EstimateError> {
    let total_weight: u128 = per_path.iter().map(|p| p.delta).sum();
    if total_weight == 0 {
        return Err(EstimateError::EmptyOrZeroWeight);
    }
    let weighted_sum: u128 = per_path.iter().map(|p| p.delta * p.pind as u128).sum();
    Ok(Estimate {
        per_path,
        total_weight,
        weighted_sum,
        value: Ratio::new(weighted_sum, total_weight),
    })
}

impl Estimate {
    /// Unreduced `Σδ·pind/Σδ`.
    pub fn fraction_text(&self) -> String {
        format!("{}/{}", self.weighted_sum, self.total_weight)
    }

    /// Decimal with at most `precision` fractional digits, rounded half up,
    /// trailing zeros trimmed.
    pub fn decimal(&self, precision: usize) -> String {
        decimal(self.weighted_sum, self.total_weight, precision)
    }

    /// `"<num>/<den> = <decimal>"` at the default precision of 6.
    pub fn render(&self) -> String {
        format!("{} = {}", self.fraction_text(), self.decimal(6))
    }
}

/// Exact decimal rendering of `num/den` by long division.
pub fn decimal(num: u128, den: u128, precision: usize) -> String {
    let mut int = num / den;
    let mut rem = num % den;
    let mut digits = Vec::with_capacity(precision);
    for _ in 0..precision {
        rem *= 10;
        digits.push((rem / den) as u8);
        rem %= den;
    }
    if rem * 2 >= den {
        let mut i = digits.len();
        loop {
            if i == 0 {
                int += 1;
                break;
            }
            i -= 1;
            if digits[i] == 9 {
                digits[i] = 0;
            } else {
                digits[i] += 1;
                break;
            }
        }
    }
    while digits.last() == Some(&0) {
        digits.pop();
    }
    let mut out = int.to_string();
    if !digits.is_empty() {
        out.push('.');
        for d in digits {
            let _ = write!(out, "{}", d);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pc(text: &str) -> PathCondition {
        PathCondition::from_text(text).unwrap()
    }

    fn doms(spec: &[(&str, i64, i64)]) -> Domains {
        spec.iter()
            .map(|(v, lo, hi)| (v.to_string(), (*lo, *hi)))
            .collect()
    }

    #[test]
    fn worked_example_frequencies() {
        let d = doms(&[("x", -1000, 1000)]);
        assert_eq!(
            model_count(&pc("x > 20 && x <= 100 && x - 10 > 30"), &d),
            Ok(60)
        );
        assert_eq!(
            model_count(&pc("x > 20 && x <= 100 && x - 10 <= 30"), &d),
            Ok(20)
        );
    }

    #[test]
    fn free_box_and_equalities() {
        let d = doms(&[("x", 0, 9), ("y", 0, 9)]);
        assert_eq!(model_count(&PathCondition::default(), &d), Ok(100));
        let d = doms(&[("x", 0, 5), ("y", 0, 5)]);
        assert_eq!(model_count(&pc("x + y == 5"), &d), Ok(6));
        assert_eq!(model_count(&pc("2 * x == 3"), &d), Ok(0));
        assert_eq!(
            model_count(&pc("x != 2 && x != 2 && x != 9"), &d),
            Ok(5 * 6)
        );
    }

    #[test]
    fn negative_coefficients_and_bounds() {
        let d = doms(&[("x", -10, 10)]);
        let brute = |c: &PathCondition| (-10..=10).filter(|&x| c.holds(&|_| x)).count() as u128;
        for t in [
            "-3 * x + 4 < 0",
            "-3 * x + 4 >= 1",
            "5 * x - 7 <= -2",
            "-2 * x > 7",
            "x % 3 == 1",
        ] {
            let c = pc(t);
            assert_eq!(model_count(&c, &d).unwrap(), brute(&c), "{}", t);
        }
    }

    #[test]
    fn errors() {
        let d = doms(&[("x", 0, 9)]);
        assert_eq!(
            model_count(&pc("y > 0"), &d),
            Err(CountError::UnboundedDomain("y".into()))
        );
        let d = doms(&[("x", 0, 9999), ("y", 0, 9999)]);
        assert_eq!(
            model_count_with_budget(&pc("x * y > 5"), &d, 1000),
            Err(CountError::BudgetExceeded(1000))
        );
        let d = doms(&[("x", 5, 4)]);
        assert_eq!(model_count(&PathCondition::default(), &d), Ok(0));
    }

    #[test]
    fn estimator() {
        let e = estimate_performance(&[(60, 3), (20, 2)]).unwrap();
        assert_eq!(e.decimal(6), "2.75");
        assert_eq!(e.fraction_text(), "220/80");
        assert_eq!(e.value, Ratio::new(11, 4));
        assert_eq!(estimate_performance(&[(7, 9)]).unwrap().decimal(6), "9");
        assert_eq!(
            estimate_performance(&[(1, 0), (1, 10)]).unwrap().decimal(6),
            "5"
        );
        assert_eq!(
            estimate_performance(&[]),
            Err(EstimateError::EmptyOrZeroWeight)
        );
        assert_eq!(
            estimate_performance(&[(0, 4)]),
            Err(EstimateError::EmptyOrZeroWeight)
        );
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(decimal(1, 3, 6), "0.333333");
        assert_eq!(decimal(2, 3, 6), "0.666667");
        assert_eq!(decimal(1, 8, 2), "0.13");
        assert_eq!(decimal(1999999, 1000000, 3), "2");
        assert_eq!(decimal(0, 5, 6), "0");
    }
}
