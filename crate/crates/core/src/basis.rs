//! Two-mode occupation basis and its angular-momentum relabeling.
//!
//! A state `|n1, n2>` maps to `j = (n1 + n2)/2`, `m = (n1 - n2)/2`; the box
//! `0 <= n1, n2 <= n_max` therefore holds complete j blocks for `2j <= n_max`
//! and truncated ones above. Quantum numbers are carried doubled (`two_j`,
//! `two_m`) so half-integers stay exact.

use crate::error::{Error, Result};

/// Occupation numbers of the two boson modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TwoModeState {
    pub n1: u32,
    pub n2: u32,
}

/// Angular momentum labels, doubled: `two_j = 2j`, `two_m = 2m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AngularLabel {
    pub two_j: u32,
    pub two_m: i32,
}

/// `|j m>  ->  |n1 n2>` with `n1 = j + m`, `n2 = j - m`.
pub fn jm_to_modes(label: AngularLabel) -> Result<TwoModeState> {
    let two_j = label.two_j as i64;
    let two_m = label.two_m as i64;
    if two_m.abs() > two_j || (two_j + two_m) % 2 != 0 {
        return Err(Error::ParameterDomain(format!(
            "no occupation state for 2j = {two_j}, 2m = {two_m}"
        )));
    }
    Ok(TwoModeState {
        n1: ((two_j + two_m) / 2) as u32,
        n2: ((two_j - two_m) / 2) as u32,
    })
}

/// `|n1 n2>  ->  |j m>`; total quanta give 2j, the imbalance gives 2m.
pub fn modes_to_jm(state: TwoModeState) -> AngularLabel {
    AngularLabel {
        two_j: state.n1 + state.n2,
        two_m: state.n1 as i32 - state.n2 as i32,
    }
}

/// The truncated product basis `0 <= n1, n2 <= n_max`, enumerated
/// lexicographically by `(n1, n2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedBasis {
    n_max: u32,
    states: Vec<TwoModeState>,
}

impl TruncatedBasis {
    pub fn new(n_max: u32) -> Self {
        let side = n_max + 1;
        let mut states = Vec::with_capacity((side * side) as usize);
        for n1 in 0..side {
            for n2 in 0..side {
                states.push(TwoModeState { n1, n2 });
            }
        }
        TruncatedBasis { n_max, states }
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[TwoModeState] {
        &self.states
    }

    pub fn state(&self, index: usize) -> TwoModeState {
        self.states[index]
    }

    /// Index of a state, or `None` when it lies outside the box (the matrix
    /// builders treat that as annihilation).
    pub fn index_of(&self, state: TwoModeState) -> Option<usize> {
        if state.n1 > self.n_max || state.n2 > self.n_max {
            None
        } else {
            Some((state.n1 * (self.n_max + 1) + state.n2) as usize)
        }
    }

    /// Indices with `n1, n2 <= n_max - budget`: entries of a product of
    /// operators whose per-mode shift totals at most `budget` are exact there.
    pub fn interior_indices(&self, budget: u32) -> Vec<usize> {
        let Some(cap) = self.n_max.checked_sub(budget) else {
            return Vec::new();
        };
        (0..self.dim())
            .filter(|&i| {
                let s = self.states[i];
                s.n1 <= cap && s.n2 <= cap
            })
            .collect()
    }

    /// Indices of the block with `n1 + n2 = two_j` (complete iff
    /// `two_j <= n_max`, where it has `two_j + 1` states).
    pub fn block_indices(&self, two_j: u32) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| {
                let s = self.states[i];
                s.n1 + s.n2 == two_j
            })
            .collect()
    }
}
