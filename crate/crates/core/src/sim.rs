//! Key agreement without public discussion.
//!
//! Every user maps each of its own symbols to the value of the maximum
//! common function. Applied to i.i.d. samples this gives all users the same
//! label sequence, a key of rate `H(G)` with zero bits exchanged.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::mcf::{jgk, CommonFunctionWitness, WitnessPayload};
use crate::prob::entropy_bits;
use crate::sources::{DiscreteSource, Limits, Source};

/// Per-user decoding tables from own symbol to common-function label.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyExtractor {
    /// `maps[i][symbol]` is the label user i assigns; `None` off the
    /// marginal support.
    maps: Vec<Vec<Option<u64>>>,
}

impl KeyExtractor {
    pub fn user_count(&self) -> usize {
        self.maps.len()
    }

    pub fn decode(&self, user: usize, symbol: usize) -> Option<u64> {
        self.maps.get(user)?.get(symbol).copied().flatten()
    }
}

fn mixed_radix_digits(mut value: usize, radix: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; radix.len()];
    for i in (0..radix.len()).rev() {
        digits[i] = value % radix[i];
        value /= radix[i];
    }
    digits
}

/// Builds the decoding tables for `s` from a witness, then checks on the
/// enumerated joint support that all users decode every realization alike.
///
/// Symbols are interpreted in the encoding produced by [`Source::expand`].
pub fn build_extractor(
    s: &Source,
    w: &CommonFunctionWitness,
    limits: &Limits,
) -> Result<KeyExtractor> {
    let joint = s.expand(limits)?;
    let maps = match (s, &w.payload) {
        (Source::Hypergraphical(h), WitnessPayload::Edges(names)) => {
            let sizes: Vec<usize> =
                h.edges().iter().map(|e| e.distribution.alphabet_size() as usize).collect();
            let chosen: Vec<usize> = names
                .iter()
                .map(|n| {
                    h.edges()
                        .iter()
                        .position(|e| &e.name == n)
                        .ok_or_else(|| Error::WitnessInvalid(format!("unknown edge {n}")))
                })
                .collect::<Result<_>>()?;
            (0..h.user_count())
                .map(|u| {
                    let incident: Vec<usize> =
                        (0..h.edges().len()).filter(|&e| h.edges()[e].is_observed_by(u)).collect();
                    if let Some(&e) = chosen.iter().find(|e| !incident.contains(e)) {
                        return Err(Error::WitnessInvalid(format!(
                            "user {} does not observe edge {}",
                            u + 1,
                            h.edges()[e].name
                        )));
                    }
                    let radix: Vec<usize> = incident.iter().map(|&e| sizes[e]).collect();
                    let alphabet = joint.alphabet_sizes()[u];
                    Ok((0..alphabet)
                        .map(|symbol| {
                            let digits = mixed_radix_digits(symbol, &radix);
                            let label = chosen.iter().fold(0u64, |acc, e| {
                                let pos = incident.iter().position(|x| x == e).expect("checked");
                                acc * sizes[*e] as u64 + digits[pos] as u64
                            });
                            Some(label)
                        })
                        .collect())
                })
                .collect::<Result<Vec<_>>>()?
        }
        (Source::FiniteLinear(f), WitnessPayload::Subspace(m)) => {
            let q = f.field().get();
            f.matrices()
                .iter()
                .enumerate()
                .map(|(u, mi)| {
                    let reduced = mi.reduce_to_full_column_rank();
                    let coeffs = reduced.solve_right(m)?.ok_or_else(|| {
                        Error::WitnessInvalid(format!("<M> is not contained in the view of user {}", u + 1))
                    })?;
                    let radix = vec![q as usize; reduced.cols()];
                    Ok((0..joint.alphabet_sizes()[u])
                        .map(|symbol| {
                            let z: Vec<u64> = mixed_radix_digits(symbol, &radix)
                                .into_iter()
                                .map(|d| d as u64)
                                .collect();
                            Some(coeffs.left_mul_vec(&z).into_iter().fold(0u64, |acc, g| acc * q + g))
                        })
                        .collect())
                })
                .collect::<Result<Vec<_>>>()?
        }
        (_, WitnessPayload::Labeling(l)) => {
            let mut maps: Vec<Vec<Option<u64>>> =
                joint.alphabet_sizes().iter().map(|&k| vec![None; k]).collect();
            for (realization, label) in &l.labels {
                for (u, &symbol) in realization.iter().enumerate() {
                    let slot = maps
                        .get_mut(u)
                        .and_then(|m| m.get_mut(symbol))
                        .ok_or_else(|| Error::WitnessInvalid("labeling does not match the source".into()))?;
                    match slot {
                        Some(prev) if *prev != *label as u64 => {
                            return Err(Error::WitnessInvalid(format!(
                                "symbol {symbol} of user {} carries labels {prev} and {label}",
                                u + 1
                            )))
                        }
                        _ => *slot = Some(*label as u64),
                    }
                }
            }
            maps
        }
        (s, _) => {
            return Err(Error::WitnessInvalid(format!(
                "{} witness does not apply to a {} source",
                w.kind(),
                s.model_name()
            )))
        }
    };
    let extractor = KeyExtractor { maps };
    check_agreement(&extractor, &joint)?;
    Ok(extractor)
}

fn check_agreement(x: &KeyExtractor, joint: &DiscreteSource) -> Result<()> {
    for (realization, _) in joint.support() {
        let first = x.decode(0, realization[0]);
        if first.is_none() {
            return Err(Error::WitnessInvalid(format!("realization {realization:?} is unlabeled")));
        }
        if (1..realization.len()).any(|u| x.decode(u, realization[u]) != first) {
            return Err(Error::WitnessInvalid(format!(
                "users decode realization {realization:?} differently"
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationRun {
    pub n: usize,
    pub seed: u64,
    /// Label sequence computed by each user.
    pub per_user_keys: Vec<Vec<u64>>,
    pub agreement: bool,
    /// Plug-in entropy of the key labels, bits per sample.
    pub empirical_rate_bits: f64,
    /// `H(G)` of the witness used.
    pub h_g_bits: f64,
    /// Allowed deviation of the empirical rate from `H(G)`.
    pub tolerance_bits: f64,
    pub within_tolerance: bool,
    pub discussion_bits: u64,
}

/// Deviation allowance for the plug-in rate: three standard deviations of
/// the information density plus a chi-square term for the estimator's
/// second-order error with `k` labels.
pub fn rate_tolerance(masses: &[f64], n: usize) -> f64 {
    let h = entropy_bits(masses.iter().copied());
    let varentropy: f64 = masses
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * (-p.log2() - h).powi(2))
        .sum();
    let k = masses.iter().filter(|&&p| p > 0.0).count();
    let n = n as f64;
    3.0 * (varentropy / n).sqrt() + 4.5 * k.saturating_sub(1) as f64 / (n * std::f64::consts::LN_2)
}

/// Samples `n` i.i.d. realizations with a seeded ChaCha8 stream and lets
/// every user decode its own coordinate.
pub fn run(s: &Source, n: usize, seed: u64, limits: &Limits) -> Result<SimulationRun> {
    if n == 0 {
        return Err(Error::Model("sample count must be at least 1".into()));
    }
    let witness = jgk(s, limits)?.witness;
    let extractor = build_extractor(s, &witness, limits)?;
    let joint = s.expand(limits)?;
    let support = joint.support();

    let mut cumulative = Vec::with_capacity(support.len());
    let mut acc = 0.0;
    for (_, p) in &support {
        acc += p;
        cumulative.push(acc);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = joint.user_count();
    let mut per_user_keys = vec![Vec::with_capacity(n); m];
    for _ in 0..n {
        let u: f64 = rng.gen::<f64>() * acc;
        let idx = cumulative.partition_point(|&c| c <= u).min(support.len() - 1);
        let realization = support[idx].0;
        for (user, keys) in per_user_keys.iter_mut().enumerate() {
            let label = extractor
                .decode(user, realization[user])
                .ok_or_else(|| Error::WitnessInvalid("sampled symbol has no label".into()))?;
            keys.push(label);
        }
    }

    let agreement = per_user_keys.windows(2).all(|w| w[0] == w[1]);
    let mut counts: HashMap<u64, usize> = HashMap::new();
    for &label in &per_user_keys[0] {
        *counts.entry(label).or_insert(0) += 1;
    }
    let mut freqs: Vec<f64> = counts.values().map(|&c| c as f64 / n as f64).collect();
    freqs.sort_by(f64::total_cmp);
    let empirical_rate_bits = entropy_bits(freqs);

    let masses = match &crate::mcf::gk_oracle(&joint).payload {
        WitnessPayload::Labeling(l) => l.masses.clone(),
        _ => unreachable!("oracle always labels"),
    };
    let tolerance_bits = rate_tolerance(&masses, n);
    let within_tolerance = (empirical_rate_bits - witness.entropy_bits).abs() <= tolerance_bits + 1e-12;

    Ok(SimulationRun {
        n,
        seed,
        per_user_keys,
        agreement,
        empirical_rate_bits,
        h_g_bits: witness.entropy_bits,
        tolerance_bits,
        within_tolerance,
        discussion_bits: 0,
    })
}
