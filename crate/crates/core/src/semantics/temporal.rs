use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::{Condition, SemanticForm, Var};

/// Strict precedence over event times, with its transitive closure.
///
/// Simultaneity is folded in: `τ(a)=τ(b)` makes `a` and `b` share every
/// predecessor and successor, so `a≺c, τ(a)=τ(b), c≺b` is a cycle.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrecedenceOrder {
    pub elements: BTreeSet<Var>,
    pub pairs: BTreeSet<(Var, Var)>,
    pub simultaneous: BTreeSet<(Var, Var)>,
    pub closure: BTreeSet<(Var, Var)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("temporal inconsistency: cycle {}", render_cycle(.cycle))]
pub struct TemporalInconsistency {
    /// Events along the cycle, first element not repeated at the end.
    pub cycle: Vec<Var>,
}

fn render_cycle(cycle: &[Var]) -> String {
    let mut parts: Vec<String> = cycle.iter().map(|v| format!("τ({})", v)).collect();
    if let Some(first) = cycle.first() {
        parts.push(format!("τ({})", first));
    }
    parts.join("≺")
}

impl PrecedenceOrder {
    pub fn precedes(&self, a: &Var, b: &Var) -> bool {
        self.closure.contains(&(a.clone(), b.clone()))
    }

    /// Elements in a topological order, ties broken by natural order.
    pub fn linear_extension(&self) -> Vec<Var> {
        let mut remaining: BTreeSet<Var> = self.elements.clone();
        let mut out = Vec::new();
        while !remaining.is_empty() {
            let next = remaining
                .iter()
                .find(|v| !remaining.iter().any(|u| self.precedes(u, v)))
                .cloned()
                .unwrap_or_else(|| remaining.iter().next().cloned().unwrap());
            remaining.remove(&next);
            out.push(next);
        }
        out
    }

    /// Whether every pair of distinct elements is ordered or simultaneous.
    pub fn is_total(&self) -> bool {
        let els: Vec<&Var> = self.elements.iter().collect();
        els.iter().enumerate().all(|(i, a)| {
            els[i + 1..]
                .iter()
                .all(|b| self.precedes(a, b) || self.precedes(b, a) || self.same_time(a, b))
        })
    }

    fn same_time(&self, a: &Var, b: &Var) -> bool {
        let key = if a <= b {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        };
        self.simultaneous.contains(&key)
    }

    /// Closure pairs between consecutive elements of the linear extension,
    /// rendered `τ(e1)≺τ(e2)≺τ(e3)` when the order is a chain.
    pub fn chain(&self) -> Option<String> {
        let ext = self.linear_extension();
        if ext.len() < 2 || !ext.windows(2).all(|w| self.precedes(&w[0], &w[1])) {
            return None;
        }
        Some(
            ext.iter()
                .map(|v| format!("τ({})", v))
                .collect::<Vec<_>>()
                .join("≺"),
        )
    }

    /// Covering pairs: closure pairs not implied by a third element.
    pub fn covering_pairs(&self) -> Vec<(Var, Var)> {
        self.closure
            .iter()
            .filter(|(a, b)| {
                !self
                    .elements
                    .iter()
                    .any(|m| self.precedes(a, m) && self.precedes(m, b))
            })
            .cloned()
            .collect()
    }
}

impl fmt::Display for PrecedenceOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(chain) = self.chain() {
            return f.write_str(&chain);
        }
        let parts: Vec<String> = self
            .covering_pairs()
            .iter()
            .map(|(a, b)| format!("τ({})≺τ({})", a, b))
            .collect();
        f.write_str(&parts.join(", "))
    }
}

/// Collect `≺` and simultaneity conditions and close them transitively.
pub fn temporal_order(form: &SemanticForm) -> Result<PrecedenceOrder, TemporalInconsistency> {
    let mut order = PrecedenceOrder::default();
    for c in &form.conditions {
        match c {
            Condition::Precedes(a, b) => {
                order.elements.insert(a.clone());
                order.elements.insert(b.clone());
                order.pairs.insert((a.clone(), b.clone()));
            }
            Condition::Simultaneous(a, b) => {
                order.elements.insert(a.clone());
                order.elements.insert(b.clone());
                let key = if a <= b {
                    (a.clone(), b.clone())
                } else {
                    (b.clone(), a.clone())
                };
                order.simultaneous.insert(key);
            }
            _ => {}
        }
    }

    // Adjacency: strict edges, plus simultaneity as edges that carry no
    // strictness. A cycle through at least one strict edge is inconsistent.
    let mut strict: BTreeMap<Var, BTreeSet<Var>> = BTreeMap::new();
    let mut equal: BTreeMap<Var, BTreeSet<Var>> = BTreeMap::new();
    for (a, b) in &order.pairs {
        strict.entry(a.clone()).or_default().insert(b.clone());
    }
    for (a, b) in &order.simultaneous {
        equal.entry(a.clone()).or_default().insert(b.clone());
        equal.entry(b.clone()).or_default().insert(a.clone());
    }

    for start in &order.elements {
        // BFS over (node, passed_strict_edge) states, remembering parents.
        let mut parent: BTreeMap<(Var, bool), (Var, bool)> = BTreeMap::new();
        let mut seen: BTreeSet<(Var, bool)> = BTreeSet::new();
        let mut queue = std::collections::VecDeque::new();
        seen.insert((start.clone(), false));
        queue.push_back((start.clone(), false));
        while let Some((node, strict_seen)) = queue.pop_front() {
            let strict_next = strict
                .get(&node)
                .into_iter()
                .flatten()
                .map(|n| (n.clone(), true));
            let equal_next = equal
                .get(&node)
                .into_iter()
                .flatten()
                .map(|n| (n.clone(), strict_seen));
            for next in strict_next.chain(equal_next).collect::<Vec<_>>() {
                if !seen.insert(next.clone()) {
                    continue;
                }
                parent.insert(next.clone(), (node.clone(), strict_seen));
                if next.1 {
                    order.closure.insert((start.clone(), next.0.clone()));
                }
                queue.push_back(next);
            }
        }
        if seen.contains(&(start.clone(), true)) {
            let mut cycle = Vec::new();
            let mut cur = (start.clone(), true);
            while let Some(p) = parent.get(&cur) {
                cycle.push(p.0.clone());
                if p == &(start.clone(), false) {
                    break;
                }
                cur = p.clone();
            }
            cycle.reverse();
            return Err(TemporalInconsistency { cycle });
        }
    }
    Ok(order)
}
