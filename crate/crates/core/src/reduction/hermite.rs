use std::ops::ControlFlow;

use crate::enumeration::{is_primitive_system, shortest_extension_with, Enumerator};
use crate::error::{Error, Result};
use crate::exactlin::{CoordVector, GramMatrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HermiteOutcome {
    /// A basis whose sorted length profile is lexicographically smaller than
    /// that of the input basis, so the input basis is not Hermite-reduced.
    Witness {
        basis: Vec<CoordVector>,
        profile: Vec<Rational>,
        nodes_explored: usize,
    },
    /// No witness found. With `search_complete` the whole tree was explored,
    /// which shows that none exists.
    NoneWithinBudget {
        nodes_explored: usize,
        search_complete: bool,
    },
}

struct OutOfBudget;

struct Dfs<'a> {
    list: &'a [(CoordVector, Rational)],
    profile: &'a [Rational],
    nodes: usize,
    budget: usize,
}

fn extends_primitively(chosen: &[CoordVector]) -> Result<bool> {
    match is_primitive_system(chosen) {
        Err(Error::LinearlyDependent { .. }) => Ok(false),
        r => r,
    }
}

impl Dfs<'_> {
    /// Prefix of a basis matching the input profile so far; returns a prefix
    /// that beats the profile at its last position.
    fn search(
        &mut self,
        depth: usize,
        start: usize,
        chosen: &mut Vec<CoordVector>,
    ) -> std::result::Result<Result<bool>, OutOfBudget> {
        let n = self.profile.len();
        for idx in start..self.list.len() {
            let (v, q) = &self.list[idx];
            if *q > self.profile[depth] {
                break;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(OutOfBudget);
            }
            chosen.push(v.clone());
            match extends_primitively(chosen) {
                Err(e) => return Ok(Err(e)),
                Ok(false) => {}
                Ok(true) => {
                    if *q < self.profile[depth] {
                        return Ok(Ok(true));
                    }
                    if depth + 1 < n {
                        match self.search(depth + 1, idx + 1, chosen)? {
                            Ok(false) => {}
                            other => return Ok(other),
                        }
                    }
                }
            }
            chosen.pop();
        }
        Ok(Ok(false))
    }
}

/// Looks for a basis that is lexicographically shorter than the input basis,
/// exploring at most `budget` nodes (each a primitivity test).
///
/// The search walks over vectors no longer than the longest basis vector in
/// increasing order; a prefix must repeat the input's sorted lengths until one
/// vector is strictly shorter, after which the basis is completed greedily.
pub fn hermite_witness_search(g: &GramMatrix, budget: usize) -> Result<HermiteOutcome> {
    let n = g.dim();
    let mut profile = g.diagonal();
    profile.sort();
    let Some(bound) = profile.last().cloned() else {
        return Ok(HermiteOutcome::NoneWithinBudget {
            nodes_explored: 0,
            search_complete: true,
        });
    };
    let en = Enumerator::new(g);
    let mut list: Vec<(CoordVector, Rational)> = Vec::new();
    let mut too_many = false;
    en.visit(&bound, false, |v, q| {
        if list.len() >= budget {
            too_many = true;
            return ControlFlow::Break(());
        }
        list.push((v.canonical(), q.clone()));
        ControlFlow::Continue(())
    })?;
    if too_many {
        return Ok(HermiteOutcome::NoneWithinBudget {
            nodes_explored: 0,
            search_complete: false,
        });
    }
    list.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));

    let mut dfs = Dfs {
        list: &list,
        profile: &profile,
        nodes: 0,
        budget,
    };
    let mut chosen = Vec::with_capacity(n);
    match dfs.search(0, 0, &mut chosen) {
        Err(OutOfBudget) => Ok(HermiteOutcome::NoneWithinBudget {
            nodes_explored: budget,
            search_complete: false,
        }),
        Ok(Err(e)) => Err(e),
        Ok(Ok(false)) => Ok(HermiteOutcome::NoneWithinBudget {
            nodes_explored: dfs.nodes,
            search_complete: true,
        }),
        Ok(Ok(true)) => {
            while chosen.len() < n {
                let (v, _) = shortest_extension_with(&en, &chosen)?;
                chosen.push(v);
            }
            let mut basis: Vec<(Rational, CoordVector)> =
                chosen.into_iter().map(|v| (g.value(v.as_slice()), v)).collect();
            basis.sort_by(|a, b| a.0.cmp(&b.0));
            Ok(HermiteOutcome::Witness {
                profile: basis.iter().map(|(q, _)| q.clone()).collect(),
                basis: basis.into_iter().map(|(_, v)| v).collect(),
                nodes_explored: dfs.nodes,
            })
        }
    }
}
