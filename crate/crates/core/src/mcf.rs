//! Maximum common function: the random variable of largest entropy that
//! every user can compute from its own observation.
//!
//! Hypergraphical and finite linear sources have closed forms (globally
//! observed edges, intersection of observation column spaces). Any
//! enumerable source can be handled by the support-graph oracle: two joint
//! realizations are linked when some user sees the same symbol in both, and
//! the connected components of that graph are the values of the maximum
//! common function.

use petgraph::unionfind::UnionFind;

use crate::error::Result;
use crate::gf::FiniteMatrix;
use crate::prob::entropy_bits;
use crate::sources::{DiscreteSource, FiniteLinearSource, HypergraphicalSource, Limits, Source};

/// Component labeling of a joint support.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportLabeling {
    /// Every positive-probability realization with its component label, in
    /// lexicographic order of realizations.
    pub labels: Vec<(Vec<usize>, usize)>,
    /// Probability mass of each component, indexed by label.
    pub masses: Vec<f64>,
    /// Lexicographically smallest realization of each component.
    pub representatives: Vec<Vec<usize>>,
}

impl SupportLabeling {
    pub fn component_count(&self) -> usize {
        self.masses.len()
    }

    pub fn label_of(&self, realization: &[usize]) -> Option<usize> {
        self.labels
            .binary_search_by(|(r, _)| r.as_slice().cmp(realization))
            .ok()
            .map(|i| self.labels[i].1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WitnessPayload {
    /// Names of the edges observed by every user.
    Edges(Vec<String>),
    /// `M` with `<M>` the common observation subspace; `G = x·M`.
    Subspace(FiniteMatrix),
    Labeling(SupportLabeling),
}

/// A maximum common function `G` and `H(G)` in bits.
#[derive(Debug, Clone, PartialEq)]
pub struct CommonFunctionWitness {
    pub payload: WitnessPayload,
    pub entropy_bits: f64,
}

impl CommonFunctionWitness {
    pub fn kind(&self) -> &'static str {
        match self.payload {
            WitnessPayload::Edges(_) => "edge-subset",
            WitnessPayload::Subspace(_) => "subspace-basis",
            WitnessPayload::Labeling(_) => "support-labeling",
        }
    }
}

/// `G` is the tuple of edge variables whose edge covers every user.
pub fn gk_hypergraphical(h: &HypergraphicalSource) -> CommonFunctionWitness {
    let global: Vec<_> = h.edges().iter().filter(|e| h.is_global(e)).collect();
    CommonFunctionWitness {
        entropy_bits: global.iter().map(|e| e.distribution.entropy_bits()).sum(),
        payload: WitnessPayload::Edges(global.iter().map(|e| e.name.clone()).collect()),
    }
}

/// `G = x·M` with `<M>` the intersection of all users' column spaces.
pub fn gk_finite_linear(f: &FiniteLinearSource) -> Result<CommonFunctionWitness> {
    let m = FiniteMatrix::intersect_all(f.matrices())?;
    Ok(CommonFunctionWitness {
        entropy_bits: m.cols() as f64 * f.field().bits(),
        payload: WitnessPayload::Subspace(m),
    })
}

/// Connected components of the support graph, via union-find over
/// per-coordinate buckets. Labels are numbered by each component's smallest
/// realization.
pub fn support_components(d: &DiscreteSource) -> SupportLabeling {
    let support = d.support();
    let mut uf = UnionFind::<usize>::new(support.len());
    for (user, &size) in d.alphabet_sizes().iter().enumerate() {
        let mut first_seen: Vec<Option<usize>> = vec![None; size];
        for (idx, (symbols, _)) in support.iter().enumerate() {
            match first_seen[symbols[user]] {
                Some(anchor) => {
                    uf.union(anchor, idx);
                }
                None => first_seen[symbols[user]] = Some(idx),
            }
        }
    }

    let mut label_of_root = vec![usize::MAX; support.len()];
    let mut labels = Vec::with_capacity(support.len());
    let mut masses = Vec::new();
    let mut representatives = Vec::new();
    for (idx, (symbols, p)) in support.iter().enumerate() {
        let root = uf.find(idx);
        if label_of_root[root] == usize::MAX {
            label_of_root[root] = masses.len();
            masses.push(0.0);
            representatives.push(symbols.to_vec());
        }
        let label = label_of_root[root];
        masses[label] += p;
        labels.push((symbols.to_vec(), label));
    }
    SupportLabeling { labels, masses, representatives }
}

/// Brute-force maximum common function of an enumerated joint pmf.
pub fn gk_oracle(d: &DiscreteSource) -> CommonFunctionWitness {
    let labeling = support_components(d);
    CommonFunctionWitness {
        entropy_bits: entropy_bits(labeling.masses.iter().copied()),
        payload: WitnessPayload::Labeling(labeling),
    }
}

/// Oracle on any source model, expanding structured models first.
pub fn gk_oracle_source(s: &Source, limits: &Limits) -> Result<CommonFunctionWitness> {
    Ok(gk_oracle(&s.expand(limits)?))
}

/// Whether `H(G)` is the proven secrecy capacity at zero discussion rate
/// or only its achievable lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapacityStatus {
    /// Hypergraphical and finite linear sources.
    Proven,
    /// General sources: achievable, conjectured tight.
    LowerBound,
}

impl CapacityStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CapacityStatus::Proven => "capacity",
            CapacityStatus::LowerBound => "lower_bound",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Jgk {
    pub witness: CommonFunctionWitness,
    pub status: CapacityStatus,
}

impl Jgk {
    pub fn bits(&self) -> f64 {
        self.witness.entropy_bits
    }
}

/// Gács–Körner common information of any supported source, dispatching to
/// the closed form when one exists.
pub fn jgk(s: &Source, limits: &Limits) -> Result<Jgk> {
    Ok(match s {
        Source::Hypergraphical(h) => Jgk { witness: gk_hypergraphical(h), status: CapacityStatus::Proven },
        Source::FiniteLinear(f) => Jgk { witness: gk_finite_linear(f)?, status: CapacityStatus::Proven },
        Source::Discrete(d) => Jgk {
            witness: gk_oracle_source(&Source::Discrete(d.clone()), limits)?,
            status: CapacityStatus::LowerBound,
        },
    })
}
