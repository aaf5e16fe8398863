//! Source models: general discrete, hypergraphical and finite linear.
//!
//! Users are 0-based here; the file format and all rendered output use
//! 1-based user ids.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{FieldOrder, FiniteMatrix};
use crate::prob::{check_distribution, entropy_bits, Probability};

/// Default cap on the number of joint realizations any expansion may produce.
pub const DEFAULT_EXPANSION_LIMIT: u64 = 1_000_000;

/// Environment variable overriding [`DEFAULT_EXPANSION_LIMIT`].
pub const EXPANSION_LIMIT_ENV: &str = "ZEROTALK_EXPANSION_LIMIT";

/// Tolerance for entropy comparisons, in bits.
pub const ENTROPY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub expansion: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { expansion: DEFAULT_EXPANSION_LIMIT }
    }
}

impl Limits {
    /// Default limits, with the expansion cap taken from the environment when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(EXPANSION_LIMIT_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map(|expansion| Limits { expansion })
                .map_err(|_| Error::Parse(format!("{EXPANSION_LIMIT_ENV}={v:?} is not an integer"))),
            Err(_) => Ok(Limits::default()),
        }
    }

    fn check(&self, needed: u128) -> Result<()> {
        if needed > self.expansion as u128 {
            Err(Error::ExpansionTooLarge { needed, limit: self.expansion })
        } else {
            Ok(())
        }
    }
}

/// Joint pmf over a product of finite alphabets, one coordinate per user.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteSource {
    alphabet_sizes: Vec<usize>,
    pmf: BTreeMap<Vec<usize>, Probability>,
}

impl DiscreteSource {
    pub fn new(alphabet_sizes: Vec<usize>, entries: Vec<(Vec<usize>, Probability)>) -> Result<Self> {
        if alphabet_sizes.len() < 2 {
            return Err(Error::Model(format!(
                "a source needs at least 2 users, got {}",
                alphabet_sizes.len()
            )));
        }
        if alphabet_sizes.contains(&0) {
            return Err(Error::Model("alphabet sizes must be positive".into()));
        }
        let mut pmf = BTreeMap::new();
        for (symbols, p) in entries {
            if symbols.len() != alphabet_sizes.len() {
                return Err(Error::Model(format!(
                    "realization {symbols:?} has {} coordinates, expected {}",
                    symbols.len(),
                    alphabet_sizes.len()
                )));
            }
            if let Some(i) = (0..symbols.len()).find(|&i| symbols[i] >= alphabet_sizes[i]) {
                return Err(Error::Model(format!(
                    "symbol {} of user {} exceeds alphabet size {}",
                    symbols[i],
                    i + 1,
                    alphabet_sizes[i]
                )));
            }
            if pmf.contains_key(&symbols) {
                return Err(Error::Model(format!("realization {symbols:?} listed twice")));
            }
            pmf.insert(symbols, p);
        }
        let probs: Vec<Probability> = pmf.values().cloned().collect();
        check_distribution(&probs, "joint pmf")?;
        Ok(DiscreteSource { alphabet_sizes, pmf })
    }

    pub fn user_count(&self) -> usize {
        self.alphabet_sizes.len()
    }

    pub fn alphabet_sizes(&self) -> &[usize] {
        &self.alphabet_sizes
    }

    /// All listed realizations, zero-mass ones included, in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (&[usize], &Probability)> {
        self.pmf.iter().map(|(s, p)| (s.as_slice(), p))
    }

    /// Positive-probability realizations in lexicographic order.
    pub fn support(&self) -> Vec<(&[usize], f64)> {
        self.pmf
            .iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(s, p)| (s.as_slice(), p.to_f64()))
            .collect()
    }

    /// H(Z_S) in bits for the users whose bits are set in `mask`.
    pub fn subset_entropy(&self, mask: u64) -> f64 {
        let mut marginal: HashMap<Vec<usize>, f64> = HashMap::new();
        for (symbols, p) in self.support() {
            let key: Vec<usize> = (0..symbols.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| symbols[i])
                .collect();
            *marginal.entry(key).or_insert(0.0) += p;
        }
        let mut masses: Vec<f64> = marginal.into_values().collect();
        masses.sort_by(f64::total_cmp);
        entropy_bits(masses)
    }
}

/// Distribution of one edge variable.
#[derive(Debug, Clone, PartialEq)]
pub enum EdgeDistribution {
    /// Uniform over an alphabet of the given size.
    Uniform(u64),
    Pmf(Vec<Probability>),
}

impl EdgeDistribution {
    pub fn alphabet_size(&self) -> u64 {
        match self {
            EdgeDistribution::Uniform(k) => *k,
            EdgeDistribution::Pmf(p) => p.len() as u64,
        }
    }

    pub fn entropy_bits(&self) -> f64 {
        match self {
            EdgeDistribution::Uniform(k) => (*k as f64).log2(),
            EdgeDistribution::Pmf(p) => entropy_bits(p.iter().map(Probability::to_f64)),
        }
    }

    pub fn probability(&self, value: u64) -> Probability {
        match self {
            EdgeDistribution::Uniform(k) => Probability::ratio(1, *k),
            EdgeDistribution::Pmf(p) => p[value as usize].clone(),
        }
    }

    fn validate(&self, edge: &str) -> Result<()> {
        match self {
            EdgeDistribution::Uniform(0) => {
                Err(Error::Model(format!("edge {edge}: alphabet size must be positive")))
            }
            EdgeDistribution::Uniform(_) => Ok(()),
            EdgeDistribution::Pmf(p) => check_distribution(p, &format!("edge {edge}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub name: String,
    /// Sorted 0-based ids of the users observing this edge.
    pub users: Vec<usize>,
    pub distribution: EdgeDistribution,
}

impl Edge {
    pub fn new(name: impl Into<String>, users: &[usize], distribution: EdgeDistribution) -> Self {
        let mut users = users.to_vec();
        users.sort_unstable();
        users.dedup();
        Edge { name: name.into(), users, distribution }
    }

    pub fn user_mask(&self) -> u64 {
        self.users.iter().fold(0, |m, &u| m | 1 << u)
    }

    pub fn is_observed_by(&self, user: usize) -> bool {
        self.users.binary_search(&user).is_ok()
    }
}

/// Each user observes the independent edge variables of the hyperedges
/// containing it.
#[derive(Debug, Clone, PartialEq)]
pub struct HypergraphicalSource {
    users: usize,
    edges: Vec<Edge>,
}

impl HypergraphicalSource {
    pub fn new(users: usize, edges: Vec<Edge>) -> Result<Self> {
        if users < 2 {
            return Err(Error::Model(format!("a source needs at least 2 users, got {users}")));
        }
        if users > 63 {
            return Err(Error::Model(format!("at most 63 users are supported, got {users}")));
        }
        for (i, e) in edges.iter().enumerate() {
            if e.users.is_empty() {
                return Err(Error::Model(format!("edge {} has an empty user set", e.name)));
            }
            if let Some(&u) = e.users.iter().find(|&&u| u >= users) {
                return Err(Error::Model(format!(
                    "edge {} references user {} but there are {users} users",
                    e.name,
                    u + 1
                )));
            }
            if edges[..i].iter().any(|f| f.name == e.name) {
                return Err(Error::Model(format!("duplicate edge name {}", e.name)));
            }
            e.distribution.validate(&e.name)?;
        }
        Ok(HypergraphicalSource { users, edges })
    }

    pub fn user_count(&self) -> usize {
        self.users
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn all_users_mask(&self) -> u64 {
        (1u64 << self.users) - 1
    }

    /// Whether every user observes the edge.
    pub fn is_global(&self, e: &Edge) -> bool {
        e.users.len() == self.users
    }

    /// H(Z_S) as the total entropy of the edges touching S.
    pub fn subset_entropy(&self, mask: u64) -> f64 {
        self.edges
            .iter()
            .filter(|e| e.user_mask() & mask != 0)
            .map(|e| e.distribution.entropy_bits())
            .sum()
    }

    /// Joint pmf where user i's symbol is a mixed-radix index of its incident
    /// edge values (in edge order).
    pub fn expand(&self, limits: &Limits) -> Result<DiscreteSource> {
        let sizes: Vec<u64> = self.edges.iter().map(|e| e.distribution.alphabet_size()).collect();
        let total = sizes
            .iter()
            .try_fold(1u128, |acc, &k| acc.checked_mul(k as u128))
            .unwrap_or(u128::MAX);
        limits.check(total)?;

        let incident: Vec<Vec<usize>> = (0..self.users)
            .map(|u| (0..self.edges.len()).filter(|&e| self.edges[e].is_observed_by(u)).collect())
            .collect();
        let alphabet_sizes: Vec<usize> = incident
            .iter()
            .map(|es| es.iter().map(|&e| sizes[e] as usize).product())
            .collect();

        let mut entries = Vec::with_capacity(total as usize);
        let mut values = vec![0u64; self.edges.len()];
        loop {
            let p = values
                .iter()
                .zip(&self.edges)
                .fold(Probability::one(), |acc, (&v, e)| &acc * &e.distribution.probability(v));
            let symbols = incident
                .iter()
                .map(|es| es.iter().fold(0usize, |acc, &e| acc * sizes[e] as usize + values[e] as usize))
                .collect();
            entries.push((symbols, p));
            if !odometer_step(&mut values, &sizes) {
                break;
            }
        }
        DiscreteSource::new(alphabet_sizes, entries)
    }
}

/// Advances a mixed-radix counter (last digit fastest); false after wrapping.
fn odometer_step(digits: &mut [u64], radix: &[u64]) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radix[i] {
            return true;
        }
        digits[i] = 0;
    }
    false
}

/// User i observes `x · M_i` for a uniform row vector `x` over GF(q).
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteLinearSource {
    q: FieldOrder,
    dim: usize,
    matrices: Vec<FiniteMatrix>,
}

impl FiniteLinearSource {
    pub fn new(q: FieldOrder, dim: usize, matrices: Vec<FiniteMatrix>) -> Result<Self> {
        if matrices.len() < 2 {
            return Err(Error::Model(format!(
                "a source needs at least 2 users, got {}",
                matrices.len()
            )));
        }
        if matrices.len() > 63 {
            return Err(Error::Model("at most 63 users are supported".into()));
        }
        for (i, m) in matrices.iter().enumerate() {
            if m.field() != q || m.rows() != dim {
                return Err(Error::Model(format!(
                    "matrix of user {} is {}x{} over {}, expected {dim} rows over {q}",
                    i + 1,
                    m.rows(),
                    m.cols(),
                    m.field()
                )));
            }
        }
        Ok(FiniteLinearSource { q, dim, matrices })
    }

    pub fn field(&self) -> FieldOrder {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn user_count(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[FiniteMatrix] {
        &self.matrices
    }

    /// `[M_i : i ∈ S]` for the users in `mask`.
    pub fn stacked(&self, mask: u64) -> FiniteMatrix {
        let mut out = FiniteMatrix::zeros(self.q, self.dim, 0);
        for (i, m) in self.matrices.iter().enumerate() {
            if mask >> i & 1 == 1 {
                out = out.hcat(m).expect("validated shapes");
            }
        }
        out
    }

    /// H(Z_S) = rank([M_i : i ∈ S]) · log2 q.
    pub fn subset_entropy(&self, mask: u64) -> f64 {
        self.stacked(mask).rank() as f64 * self.q.bits()
    }

    /// Enumerates all q^d values of `x`. User i's symbol encodes `x · M_i`
    /// restricted to a column basis of `M_i`, which determines the rest.
    /// Values of `x` with identical observations are merged.
    pub fn expand(&self, limits: &Limits) -> Result<DiscreteSource> {
        let q = self.q.get();
        let total = (q as u128).checked_pow(self.dim as u32).unwrap_or(u128::MAX);
        limits.check(total)?;

        let reduced: Vec<FiniteMatrix> =
            self.matrices.iter().map(FiniteMatrix::reduce_to_full_column_rank).collect();
        let alphabet_sizes: Vec<usize> =
            reduced.iter().map(|m| (q as usize).pow(m.cols() as u32)).collect();

        // distinct x can give identical observations when x is not fully seen
        let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
        let radix = vec![q; self.dim];
        let mut x = vec![0u64; self.dim];
        loop {
            let symbols = reduced
                .iter()
                .map(|m| {
                    m.left_mul_vec(&x)
                        .into_iter()
                        .fold(0usize, |acc, v| acc * q as usize + v as usize)
                })
                .collect();
            *counts.entry(symbols).or_insert(0) += 1;
            if !odometer_step(&mut x, &radix) {
                break;
            }
        }
        let entries = counts
            .into_iter()
            .map(|(symbols, c)| (symbols, Probability::ratio(c, total as u64)))
            .collect();
        DiscreteSource::new(alphabet_sizes, entries)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Hypergraphical(HypergraphicalSource),
    FiniteLinear(FiniteLinearSource),
    Discrete(DiscreteSource),
}

impl Source {
    pub fn user_count(&self) -> usize {
        match self {
            Source::Hypergraphical(h) => h.user_count(),
            Source::FiniteLinear(f) => f.user_count(),
            Source::Discrete(d) => d.user_count(),
        }
    }

    pub fn model_name(&self) -> &'static str {
        match self {
            Source::Hypergraphical(_) => "hypergraphical",
            Source::FiniteLinear(_) => "finite_linear",
            Source::Discrete(_) => "discrete",
        }
    }

    /// The joint distribution of the source, enumerated.
    pub fn expand(&self, limits: &Limits) -> Result<DiscreteSource> {
        match self {
            Source::Hypergraphical(h) => h.expand(limits),
            Source::FiniteLinear(f) => f.expand(limits),
            Source::Discrete(d) => {
                limits.check(d.pmf.len() as u128)?;
                Ok(d.clone())
            }
        }
    }

    /// Entropies of all nonempty user subsets, using the closed form of
    /// each structured model.
    pub fn entropy_profile(&self, limits: &Limits) -> Result<EntropyProfile> {
        let m = self.user_count();
        limits.check(1u128 << m)?;
        match self {
            Source::Hypergraphical(h) => Ok(EntropyProfile::build(m, |s| h.subset_entropy(s))),
            Source::FiniteLinear(f) => Ok(EntropyProfile::build(m, |s| f.subset_entropy(s))),
            Source::Discrete(d) => {
                limits.check(d.pmf.len() as u128)?;
                Ok(EntropyProfile::build(m, |s| d.subset_entropy(s)))
            }
        }
    }
}

impl From<HypergraphicalSource> for Source {
    fn from(h: HypergraphicalSource) -> Self {
        Source::Hypergraphical(h)
    }
}

impl From<FiniteLinearSource> for Source {
    fn from(f: FiniteLinearSource) -> Self {
        Source::FiniteLinear(f)
    }
}

impl From<DiscreteSource> for Source {
    fn from(d: DiscreteSource) -> Self {
        Source::Discrete(d)
    }
}

/// `H(Z_S)` for every nonempty `S ⊆ V`, indexed by bitmask.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyProfile {
    users: usize,
    /// Index 0 is the empty set and always 0.
    values: Vec<f64>,
}

impl EntropyProfile {
    pub fn build(users: usize, mut h: impl FnMut(u64) -> f64) -> Self {
        let values = (0..1u64 << users).map(|s| if s == 0 { 0.0 } else { h(s) }).collect();
        EntropyProfile { users, values }
    }

    pub fn user_count(&self) -> usize {
        self.users
    }

    pub fn get(&self, mask: u64) -> f64 {
        self.values[mask as usize]
    }

    /// `(subset mask, entropy)` for every nonempty subset.
    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.values.iter().enumerate().skip(1).map(|(s, &h)| (s as u64, h))
    }

    /// Largest absolute difference to another profile over the same users.
    pub fn max_abs_diff(&self, other: &Self) -> Option<f64> {
        (self.users == other.users).then(|| {
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other).is_some_and(|d| d <= tol)
    }

    pub fn is_monotone(&self, tol: f64) -> bool {
        (0..self.values.len()).all(|s| {
            (0..self.users).all(|i| self.values[s | 1 << i] + tol >= self.values[s])
        })
    }

    pub fn is_submodular(&self, tol: f64) -> bool {
        let n = self.values.len();
        (0..n).all(|s| {
            (0..n).all(|t| {
                self.values[s] + self.values[t] + tol >= self.values[s | t] + self.values[s & t]
            })
        })
    }
}

impl fmt::Display for EntropyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, h) in self.iter() {
            writeln!(f, "H({}) = {h:.6}", format_user_set(s))?;
        }
        Ok(())
    }
}

/// Renders a user bitmask as a 1-based set, e.g. `{1,3}`.
pub fn format_user_set(mask: u64) -> String {
    let ids: Vec<String> = (0..64).filter(|i| mask >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", ids.join(","))
}

/// Matrices from the two-user linear-to-hypergraphical reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoUserDecomposition {
    /// Basis of `<M_1> ∩ <M_2>`.
    pub common: FiniteMatrix,
    /// Completes `common` to a basis of `<M_1>`.
    pub private1: FiniteMatrix,
    /// Completes `common` to a basis of `<M_2>`.
    pub private2: FiniteMatrix,
    /// `[common | private1 | private2]`, full column rank.
    pub transform: FiniteMatrix,
}

impl FiniteLinearSource {
    pub fn two_user_decomposition(&self) -> Result<TwoUserDecomposition> {
        if self.user_count() != 2 {
            return Err(Error::NotTwoUsers(self.user_count()));
        }
        let m1 = self.matrices[0].reduce_to_full_column_rank();
        let m2 = self.matrices[1].reduce_to_full_column_rank();
        let common = FiniteMatrix::column_space_intersection(&m1, &m2)?;
        let private1 = FiniteMatrix::extend_basis(&common, &m1)?;
        let private2 = FiniteMatrix::extend_basis(&common, &m2)?;
        let transform = common.hcat(&private1)?.hcat(&private2)?;
        if !transform.has_full_column_rank() {
            return Err(Error::InternalRank(format!(
                "[M | N1 | N2] has rank {} but {} columns",
                transform.rank(),
                transform.cols()
            )));
        }
        Ok(TwoUserDecomposition { common, private1, private2, transform })
    }

    /// Equivalent hypergraphical source for two users: one uniform edge
    /// shared by both carrying `x·M`, and one private uniform edge per user
    /// carrying `x·N_i`. Zero-dimensional edges are omitted.
    pub fn to_hypergraphical(&self) -> Result<HypergraphicalSource> {
        let dec = self.two_user_decomposition()?;
        let q = self.q.get();
        let parts = [
            ("common", &dec.common, &[0usize, 1][..]),
            ("private1", &dec.private1, &[0][..]),
            ("private2", &dec.private2, &[1][..]),
        ];
        let mut edges = Vec::new();
        for (name, basis, users) in parts {
            if basis.cols() == 0 {
                continue;
            }
            let size = q
                .checked_pow(basis.cols() as u32)
                .ok_or_else(|| Error::Model(format!("edge alphabet {q}^{} overflows", basis.cols())))?;
            edges.push(Edge::new(name, users, EdgeDistribution::Uniform(size)));
        }
        let h = HypergraphicalSource::new(2, edges)?;
        let src: Source = self.clone().into();
        let lhs = src.entropy_profile(&Limits::default())?;
        let rhs = Source::Hypergraphical(h.clone()).entropy_profile(&Limits::default())?;
        if !lhs.approx_eq(&rhs, ENTROPY_TOLERANCE) {
            return Err(Error::InternalRank("converted source has a different entropy profile".into()));
        }
        Ok(h)
    }
}

pub mod examples {
    //! The small worked sources used throughout the tests and docs.

    use super::*;

    fn gf2() -> FieldOrder {
        FieldOrder::new(2).expect("2 is prime")
    }

    fn m2(rows: &[&[i64]]) -> FiniteMatrix {
        let data: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        FiniteMatrix::from_rows(gf2(), data.len(), &data).expect("well-formed")
    }

    /// Three users, uniform bits a, b, c with Z1 = (a,b,c), Z2 = (b,c), Z3 = (a,c).
    pub fn three_user_hypergraph() -> HypergraphicalSource {
        let bit = || EdgeDistribution::Uniform(2);
        HypergraphicalSource::new(
            3,
            vec![
                Edge::new("a", &[0, 2], bit()),
                Edge::new("b", &[0, 1], bit()),
                Edge::new("c", &[0, 1, 2], bit()),
            ],
        )
        .expect("valid")
    }

    /// Z1 = a, Z2 = b, Z3 = a xor b.
    pub fn xor_triangle() -> FiniteLinearSource {
        FiniteLinearSource::new(gf2(), 2, vec![m2(&[&[1], &[0]]), m2(&[&[0], &[1]]), m2(&[&[1], &[1]])])
            .expect("valid")
    }

    /// Z1 = (a, b, a xor b), Z2 = (c, a xor b xor c).
    pub fn two_user_linear() -> FiniteLinearSource {
        FiniteLinearSource::new(
            gf2(),
            3,
            vec![
                m2(&[&[1, 0, 1], &[0, 1, 1], &[0, 0, 0]]),
                m2(&[&[0, 1], &[0, 1], &[1, 1]]),
            ],
        )
        .expect("valid")
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= ENTROPY_TOLERANCE
    }

    #[test]
    fn hypergraph_expansion_is_uniform_over_edges() {
        let h = three_user_hypergraph();
        let d = h.expand(&Limits::default()).unwrap();
        assert_eq!(d.support().len(), 8);
        assert!(d.support().iter().all(|(_, p)| close(*p, 0.125)));
        assert!(close(d.subset_entropy(0b111), 3.0));
        assert_eq!(d.alphabet_sizes(), &[8, 4, 4]);
    }

    #[test]
    fn single_global_edge_gives_equal_symbols() {
        let h = HypergraphicalSource::new(
            3,
            vec![Edge::new("g", &[0, 1, 2], EdgeDistribution::Uniform(3))],
        )
        .unwrap();
        let d = h.expand(&Limits::default()).unwrap();
        for (s, _) in d.support() {
            assert!(s.iter().all(|&x| x == s[0]));
        }
    }

    #[test]
    fn two_private_bits_are_independent() {
        let h = HypergraphicalSource::new(
            2,
            vec![
                Edge::new("x", &[0], EdgeDistribution::Uniform(2)),
                Edge::new("y", &[1], EdgeDistribution::Uniform(2)),
            ],
        )
        .unwrap();
        let d = h.expand(&Limits::default()).unwrap();
        let (h1, h2, h12) = (d.subset_entropy(1), d.subset_entropy(2), d.subset_entropy(3));
        assert!(close(h1, 1.0) && close(h2, 1.0));
        assert!(close(h1 + h2 - h12, 0.0));
    }

    #[test]
    fn xor_triangle_profile() {
        let f = xor_triangle();
        let d = f.expand(&Limits::default()).unwrap();
        assert!(close(d.subset_entropy(0b111), 2.0));
        let p = Source::FiniteLinear(f).entropy_profile(&Limits::default()).unwrap();
        for (s, h) in p.iter() {
            let expected = if s.count_ones() == 1 { 1.0 } else { 2.0 };
            assert!(close(h, expected), "H({s:b}) = {h}");
        }
        // third user is the xor of the first two
        for (s, _) in d.support() {
            let (a, b, c) = (s[0], s[1], s[2]);
            assert_eq!(c, a ^ b);
        }
    }

    #[test]
    fn zero_column_matrices_are_deterministic() {
        let q = FieldOrder::new(3).unwrap();
        let f = FiniteLinearSource::new(q, 2, vec![FiniteMatrix::zeros(q, 2, 0); 2]).unwrap();
        let d = f.expand(&Limits::default()).unwrap();
        assert!(close(d.subset_entropy(0b11), 0.0));
        let p = Source::FiniteLinear(f).entropy_profile(&Limits::default()).unwrap();
        assert!(p.iter().all(|(_, h)| h == 0.0));
    }

    #[test]
    fn two_user_linear_entropies() {
        let f = two_user_linear();
        let d = f.expand(&Limits::default()).unwrap();
        assert!(close(d.subset_entropy(1), 2.0));
        assert!(close(d.subset_entropy(2), 2.0));
        assert!(close(d.subset_entropy(3), 3.0));
    }

    #[test]
    fn hypergraph_profile_matches_expansion() {
        let h = three_user_hypergraph();
        let closed = Source::Hypergraphical(h.clone()).entropy_profile(&Limits::default()).unwrap();
        let expanded = Source::Discrete(h.expand(&Limits::default()).unwrap())
            .entropy_profile(&Limits::default())
            .unwrap();
        assert!(closed.approx_eq(&expanded, ENTROPY_TOLERANCE));
        // user 2 sees edges b and c
        assert!(close(closed.get(0b010), 2.0));
        assert!(closed.is_monotone(1e-9) && closed.is_submodular(1e-9));
    }

    #[test]
    fn conversion_of_two_user_linear_source() {
        let h = two_user_linear().to_hypergraphical().unwrap();
        let shape: Vec<(Vec<usize>, u64)> =
            h.edges().iter().map(|e| (e.users.clone(), e.distribution.alphabet_size())).collect();
        assert_eq!(shape, vec![(vec![0, 1], 2), (vec![0], 2), (vec![1], 2)]);
    }

    #[test]
    fn conversion_of_identical_observations() {
        let q = FieldOrder::new(3).unwrap();
        let id = FiniteMatrix::identity(q, 2);
        let f = FiniteLinearSource::new(q, 2, vec![id.clone(), id]).unwrap();
        let h = f.to_hypergraphical().unwrap();
        assert_eq!(h.edges().len(), 1);
        assert_eq!(h.edges()[0].users, vec![0, 1]);
        assert!(close(h.edges()[0].distribution.entropy_bits(), 2.0 * 3f64.log2()));
    }

    #[test]
    fn conversion_needs_two_users() {
        assert_eq!(xor_triangle().to_hypergraphical(), Err(Error::NotTwoUsers(3)));
    }

    #[test]
    fn expansion_limit_is_enforced() {
        let limits = Limits { expansion: 4 };
        assert_eq!(
            three_user_hypergraph().expand(&limits),
            Err(Error::ExpansionTooLarge { needed: 8, limit: 4 })
        );
        assert!(matches!(two_user_linear().expand(&limits), Err(Error::ExpansionTooLarge { .. })));
    }

    #[test]
    fn discrete_validation() {
        let half = || Probability::ratio(1, 2);
        assert!(DiscreteSource::new(vec![2], vec![(vec![0], Probability::one())]).is_err());
        assert!(DiscreteSource::new(vec![2, 2], vec![(vec![0, 2], Probability::one())]).is_err());
        assert!(DiscreteSource::new(vec![2, 2], vec![(vec![0, 0], half())]).is_err());
        assert!(DiscreteSource::new(vec![2, 2], vec![(vec![0, 0], half()), (vec![0, 0], half())]).is_err());
        assert!(DiscreteSource::new(vec![2, 2], vec![(vec![0, 0], half()), (vec![1, 1], half())]).is_ok());
    }

    #[test]
    fn hypergraph_validation() {
        let bit = EdgeDistribution::Uniform(2);
        assert!(HypergraphicalSource::new(1, vec![]).is_err());
        assert!(HypergraphicalSource::new(2, vec![Edge::new("e", &[], bit.clone())]).is_err());
        assert!(HypergraphicalSource::new(2, vec![Edge::new("e", &[2], bit.clone())]).is_err());
        assert!(HypergraphicalSource::new(
            2,
            vec![Edge::new("e", &[0], bit.clone()), Edge::new("e", &[1], bit)]
        )
        .is_err());
        let bad_pmf = EdgeDistribution::Pmf(vec![Probability::ratio(1, 3)]);
        assert!(HypergraphicalSource::new(2, vec![Edge::new("e", &[0], bad_pmf)]).is_err());
    }

    #[test]
    fn user_set_formatting() {
        assert_eq!(format_user_set(0b101), "{1,3}");
        assert_eq!(format_user_set(0), "{}");
    }
}
