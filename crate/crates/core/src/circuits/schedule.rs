use std::collections::BTreeSet;

use serde::Serialize;

use super::ir::Circuit;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScheduleMode {
    /// Each op goes into the earliest moment where its qubits are free.
    Greedy,
    /// Like greedy, but no op crosses a barrier.
    FigureFaithful,
}

/// Ops grouped into moments of pairwise disjoint qubits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MomentSchedule {
    /// Op indices per moment.
    pub moments: Vec<Vec<usize>>,
}

impl MomentSchedule {
    pub fn depth(&self) -> usize {
        self.moments.len()
    }

    /// Checks the disjointness and per-qubit ordering invariants.
    pub fn is_valid_for(&self, c: &Circuit) -> bool {
        let mut last_seen = vec![None::<usize>; c.n_qubits()];
        let mut seen = 0;
        for moment in &self.moments {
            let mut used = BTreeSet::new();
            for &i in moment {
                for &q in &c.ops()[i].targets {
                    if !used.insert(q) {
                        return false;
                    }
                    if last_seen[q].is_some_and(|prev| prev > i) {
                        return false;
                    }
                    last_seen[q] = Some(i);
                }
                seen += 1;
            }
        }
        seen == c.len()
    }
}

pub fn moments(c: &Circuit, mode: ScheduleMode) -> MomentSchedule {
    let mut free_at = vec![0usize; c.n_qubits()];
    let mut floor = 0;
    let mut depth = 0;
    let mut barriers = c.barriers().iter().peekable();
    let mut moments: Vec<Vec<usize>> = Vec::new();
    for (i, op) in c.ops().iter().enumerate() {
        while let Some(&&b) = barriers.peek() {
            if b > i {
                break;
            }
            if mode == ScheduleMode::FigureFaithful {
                floor = depth;
            }
            barriers.next();
        }
        let level = op
            .targets
            .iter()
            .map(|&q| free_at[q])
            .max()
            .unwrap_or(0)
            .max(floor);
        if level == moments.len() {
            moments.push(Vec::new());
        }
        moments[level].push(i);
        for &q in &op.targets {
            free_at[q] = level + 1;
        }
        depth = depth.max(level + 1);
    }
    MomentSchedule { moments }
}

/// Undirected hardware connectivity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CouplingMap {
    n_qubits: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl CouplingMap {
    pub fn new(n_qubits: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a == b || a >= n_qubits || b >= n_qubits {
                return Err(Error::InvalidTarget {
                    targets: vec![a, b],
                    reason: format!("not an edge of a {n_qubits}-qubit device"),
                });
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Self {
            n_qubits,
            edges: set,
        })
    }

    /// Chain `0–1–…–(n−1)`.
    pub fn linear(n_qubits: usize) -> Self {
        let edges: Vec<_> = (1..n_qubits).map(|q| (q - 1, q)).collect();
        Self::new(n_qubits, &edges).expect("chain edges are valid")
    }

    pub fn connects(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayoutReport {
    pub ok: bool,
    /// `(op index, targets)` of two-qubit ops off the coupling map.
    pub violations: Vec<(usize, Vec<usize>)>,
}

pub fn validate_layout(c: &Circuit, map: &CouplingMap) -> LayoutReport {
    let violations: Vec<_> = c
        .ops()
        .iter()
        .enumerate()
        .filter(|(_, op)| op.targets.len() == 2 && !map.connects(op.targets[0], op.targets[1]))
        .map(|(i, op)| (i, op.targets.clone()))
        .collect();
    LayoutReport {
        ok: violations.is_empty(),
        violations,
    }
}
