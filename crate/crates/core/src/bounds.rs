//! Upper bounds on the secret key capacity.
//!
//! For a hypergraphical source and a partition `P` of the users into at
//! least two blocks, the lamination bound reads
//!
//! ```text
//! α(P)·R ≥ (1 − α(P))·(C_S(R) − H(G))
//! α(P) = (max over non-global edges e of |{C ∈ P : C ∩ ξ(e) ≠ ∅}| − 1) / (|P| − 1)
//! ```
//!
//! so for `α < 1` the capacity satisfies `C_S(R) ≤ H(G) + α/(1−α)·R`.

use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gf::FiniteMatrix;
use crate::mcf::gk_hypergraphical;
use crate::partition::{set_partitions, Partition};
use crate::sources::{HypergraphicalSource, Source};

/// Default largest user count for exhaustive partition search.
pub const DEFAULT_MAX_USERS_FOR_SEARCH: usize = 8;

pub fn singleton_partition(m: usize) -> Result<Partition> {
    if m < 2 {
        return Err(Error::PartitionInvalid(format!("need at least 2 users, got {m}")));
    }
    Ok(Partition::singletons(m))
}

fn check_partition(h: &HypergraphicalSource, p: &Partition) -> Result<()> {
    if p.ground_size() != h.user_count() {
        return Err(Error::PartitionInvalid(format!(
            "partition covers {} users, source has {}",
            p.ground_size(),
            h.user_count()
        )));
    }
    if p.len() < 2 {
        return Err(Error::PartitionInvalid("need at least two blocks".into()));
    }
    Ok(())
}

/// Exact `α(P)`; zero when every edge is global.
pub fn alpha(h: &HypergraphicalSource, p: &Partition) -> Result<Ratio<u64>> {
    check_partition(h, p)?;
    let worst = h
        .edges()
        .iter()
        .filter(|e| !h.is_global(e))
        .map(|e| p.blocks_touched(e.user_mask()) - 1)
        .max();
    Ok(match worst {
        Some(w) => Ratio::new(w as u64, p.len() as u64 - 1),
        None => Ratio::zero(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaminationBound {
    pub partition: Partition,
    pub alpha: Ratio<u64>,
    /// `H(G)` of the globally observed edges.
    pub h_g_bits: f64,
}

impl LaminationBound {
    pub fn is_vacuous(&self) -> bool {
        self.alpha.is_one()
    }

    /// `α/(1−α)`, or `None` when `α = 1`.
    pub fn slope(&self) -> Option<f64> {
        if self.is_vacuous() {
            return None;
        }
        let a = self.alpha.to_f64().unwrap_or(f64::NAN);
        Some(a / (1.0 - a))
    }

    /// Upper bound on `C_S(rate)`. With `α = 1` the bound is `+∞` for a
    /// positive rate and undefined at rate zero.
    pub fn bound_at(&self, rate: f64) -> Option<f64> {
        match self.slope() {
            Some(s) => Some(self.h_g_bits + s * rate),
            None if rate > 0.0 => Some(f64::INFINITY),
            None => None,
        }
    }
}

pub fn lamination_bound(h: &HypergraphicalSource, p: &Partition) -> Result<LaminationBound> {
    Ok(LaminationBound {
        alpha: alpha(h, p)?,
        h_g_bits: gk_hypergraphical(h).entropy_bits,
        partition: p.clone(),
    })
}

/// Exhaustive search for the partition with the smallest `α`, breaking
/// ties by fewer blocks and then by the block lists.
pub fn best_partition(
    h: &HypergraphicalSource,
    max_users: usize,
) -> Result<(Partition, LaminationBound)> {
    let m = h.user_count();
    if m > max_users {
        return Err(Error::TooManyUsers { users: m, limit: max_users });
    }
    let mut best: Option<LaminationBound> = None;
    for p in set_partitions(m).filter(|p| p.len() >= 2) {
        let candidate = lamination_bound(h, &p)?;
        let better = match &best {
            None => true,
            Some(b) => {
                (candidate.alpha, candidate.partition.len(), candidate.partition.blocks())
                    < (b.alpha, b.partition.len(), b.partition.blocks())
            }
        };
        if better {
            best = Some(candidate);
        }
    }
    let bound = best.expect("at least one partition with two blocks when m >= 2");
    Ok((bound.partition.clone(), bound))
}

fn check_ordering(m: usize, ordering: &[usize]) -> Result<()> {
    let mut seen = vec![false; m];
    if ordering.len() != m
        || ordering.iter().any(|&u| u >= m || std::mem::replace(&mut seen[u], true))
    {
        return Err(Error::Model(format!("ordering {ordering:?} is not a permutation of the users")));
    }
    Ok(())
}

/// The hypergraphical form used for lamination bounds. Two-user finite
/// linear sources are converted; the flag reports whether that happened.
pub fn hypergraphical_view(s: &Source) -> Result<(HypergraphicalSource, bool)> {
    match s {
        Source::Hypergraphical(h) => Ok((h.clone(), false)),
        Source::FiniteLinear(f) if f.user_count() == 2 => Ok((f.to_hypergraphical()?, true)),
        Source::FiniteLinear(f) => Err(Error::UnsupportedModel(format!(
            "lamination bounds need a hypergraphical source; finite linear sources with {} users are not hypergraphical in general",
            f.user_count()
        ))),
        Source::Discrete(_) => Err(Error::UnsupportedModel(
            "lamination bounds need a hypergraphical source".into(),
        )),
    }
}

/// `H(W_m)` for the chain `W_1 = Z_σ(1)`, `W_{j+1}` = pairwise common part of
/// `Z_σ(j+1)` and `W_j`, with users visited in `ordering` (0-based).
pub fn chain_bound(s: &Source, ordering: &[usize]) -> Result<f64> {
    check_ordering(s.user_count(), ordering)?;
    match s {
        Source::Hypergraphical(h) => {
            let mut shared: Vec<bool> = vec![true; h.edges().len()];
            for &u in ordering {
                for (keep, e) in shared.iter_mut().zip(h.edges()) {
                    *keep &= e.is_observed_by(u);
                }
            }
            Ok(h.edges()
                .iter()
                .zip(&shared)
                .filter(|(_, &k)| k)
                .map(|(e, _)| e.distribution.entropy_bits())
                .sum())
        }
        Source::FiniteLinear(f) => {
            let mats = f.matrices();
            let mut w = mats[ordering[0]].canonical_column_basis();
            for &u in &ordering[1..] {
                w = FiniteMatrix::column_space_intersection(&w, &mats[u])?;
            }
            Ok(w.cols() as f64 * f.field().bits())
        }
        Source::Discrete(_) => Err(Error::UnsupportedModel(
            "the chain bound needs a hypergraphical or finite linear source".into(),
        )),
    }
}
