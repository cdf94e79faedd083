//! Pigeonhole block analysis for finite-valued sequences.
//!
//! Coefficients are numbered from 1 here, `c_k = a_{k-1}`, and the aligned
//! `p`-blocks are `c_{ℓp+1} .. c_{(ℓ+1)p}`. Among `#V^p + 1` blocks two must
//! agree, say blocks `ℓ₁ < ℓ₂`; with `P = ℓ₁p`, `Q = ℓ₂p` the witness is the
//! least `L >= p+1` where `c_{P+L} != c_{Q+L}`.

use super::{detect_eventual_periodicity, Materialized, SearchConfig};
use crate::error::{precondition, Error, Result};
use crate::sequence::OneSidedSequence;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

const MAX_ALPHABET: usize = 64;
/// Direct comparisons tried before a shift's full mismatch list is built.
const DIRECT_SCAN: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum SzegoOutcome {
    Witness {
        #[serde(rename = "P")]
        p_offset: u64,
        #[serde(rename = "Q")]
        q_offset: u64,
        #[serde(rename = "L")]
        l: u64,
    },
    /// Blocks at `P` and `Q` agree and keep agreeing through the horizon.
    NoMismatch {
        #[serde(rename = "P")]
        p_offset: u64,
        #[serde(rename = "Q")]
        q_offset: u64,
    },
    Skipped { note: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SzegoEntry {
    pub p: usize,
    #[serde(flatten)]
    pub outcome: SzegoOutcome,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "overall", rename_all = "kebab-case")]
pub enum SzegoOverall {
    MismatchAtEveryP,
    EventuallyPeriodic { preperiod: u64, period: u64 },
    HorizonExhausted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SzegoReport {
    pub alphabet: Vec<Complex64>,
    pub horizon: u64,
    pub witnesses: Vec<SzegoEntry>,
    #[serde(flatten)]
    pub overall: SzegoOverall,
}

impl SzegoReport {
    /// Re-checks every witness on freshly evaluated coefficients.
    pub fn verify(&self, seq: &OneSidedSequence) -> std::result::Result<(), String> {
        let c = |k: u64| seq.eval(k - 1);
        for entry in &self.witnesses {
            let p = entry.p as u64;
            if let SzegoOutcome::Witness { p_offset, q_offset, l } = entry.outcome {
                if p_offset >= q_offset || p_offset % p != 0 || q_offset % p != 0 {
                    return Err(format!("p = {p}: offsets ({p_offset}, {q_offset}) not aligned"));
                }
                if l < p + 1 {
                    return Err(format!("p = {p}: L = {l} below p + 1"));
                }
                for j in 1..l {
                    if c(p_offset + j) != c(q_offset + j) {
                        return Err(format!("p = {p}: mismatch before L at j = {j}"));
                    }
                }
                if c(p_offset + l) == c(q_offset + l) {
                    return Err(format!("p = {p}: no mismatch at L = {l}"));
                }
            }
        }
        Ok(())
    }
}

/// Positions where `c` disagrees with its shift by `s`, built lazily.
struct ShiftMismatches<'a> {
    values: &'a [u8],
    cache: HashMap<usize, Vec<usize>>,
}

impl<'a> ShiftMismatches<'a> {
    /// First `x >= from` (0-based) with `values[x] != values[x + s]`, if any
    /// before the data runs out.
    fn first_from(&mut self, s: usize, from: usize) -> Option<usize> {
        let v = self.values;
        let end = v.len().saturating_sub(s);
        if from >= end {
            return None;
        }
        if let Some(list) = self.cache.get(&s) {
            let i = list.partition_point(|&x| x < from);
            return list.get(i).copied();
        }
        let direct_end = end.min(from + DIRECT_SCAN);
        if let Some(x) = (from..direct_end).find(|&x| v[x] != v[x + s]) {
            return Some(x);
        }
        if direct_end == end {
            return None;
        }
        let list: Vec<usize> = (0..end).filter(|&x| v[x] != v[x + s]).collect();
        let i = list.partition_point(|&x| x < from);
        let found = list.get(i).copied();
        self.cache.insert(s, list);
        found
    }
}

fn alphabet_codes(values: &[Complex64]) -> Result<(Vec<Complex64>, Vec<u8>)> {
    let mut alphabet: Vec<Complex64> = Vec::new();
    let mut codes = Vec::with_capacity(values.len());
    for (n, v) in values.iter().enumerate() {
        let code = match alphabet.iter().position(|a| a == v) {
            Some(i) => i,
            None => {
                if alphabet.len() == MAX_ALPHABET {
                    return Err(Error::NotFiniteValued(format!(
                        "more than {MAX_ALPHABET} distinct values by index {n}"
                    )));
                }
                alphabet.push(*v);
                alphabet.len() - 1
            }
        };
        codes.push(code as u8);
    }
    Ok((alphabet, codes))
}

fn analyse_p(
    codes: &[u8],
    alphabet_len: usize,
    p: usize,
    extra_blocks: usize,
    mismatches: &mut ShiftMismatches,
) -> SzegoOutcome {
    let total = codes.len() / p;
    let needed = (alphabet_len as u128)
        .checked_pow(p as u32)
        .map_or(u128::MAX, |x| x.saturating_add(1));
    if (total as u128) < needed {
        return SzegoOutcome::Skipped {
            note: format!("{total} blocks of length {p}, pigeonhole needs {needed}"),
        };
    }
    // Blocks past the pigeonhole bound are still examined far enough to reach
    // the periodic part of an eventually periodic input.
    let limit = total.min(needed as usize + extra_blocks);
    let mut seen: HashMap<&[u8], Vec<usize>> = HashMap::new();
    let mut first: Option<(usize, usize, usize)> = None;
    for l2 in 0..limit {
        let block = &codes[l2 * p..(l2 + 1) * p];
        let earlier = seen.entry(block).or_default();
        for &l1 in earlier.iter() {
            // 0-based position of c_{P+p+1} is P + p
            match mismatches.first_from((l2 - l1) * p, l1 * p + p) {
                None => {
                    return SzegoOutcome::NoMismatch {
                        p_offset: (l1 * p) as u64,
                        q_offset: (l2 * p) as u64,
                    }
                }
                Some(x) if first.is_none() => first = Some((l1, l2, x)),
                Some(_) => {}
            }
        }
        earlier.push(l2);
    }
    match first {
        Some((l1, l2, x)) => SzegoOutcome::Witness {
            p_offset: (l1 * p) as u64,
            q_offset: (l2 * p) as u64,
            l: (x + 1 - l1 * p) as u64,
        },
        None => SzegoOutcome::Skipped {
            note: format!("no recurring block of length {p} within the horizon"),
        },
    }
}

/// Runs the block analysis for `p = 1 ..= cfg.p_max` on `c_1 .. c_horizon`.
pub fn szego_block_analysis(seq: &OneSidedSequence, cfg: &SearchConfig) -> Result<SzegoReport> {
    precondition(seq.value_kind().is_exact(), || {
        "block analysis needs exact-valued input".into()
    })?;
    precondition(cfg.p_max >= 1, || "p_max must be at least 1".into())?;
    let data = Materialized::new(seq, cfg.horizon)?;
    let (alphabet, codes) = alphabet_codes(&data.values)?;
    let mut mismatches = ShiftMismatches {
        values: &codes,
        cache: HashMap::new(),
    };
    let mut witnesses = Vec::with_capacity(cfg.p_max);
    for p in 1..=cfg.p_max {
        let extra =
            (cfg.max_preperiod + cfg.max_period).div_ceil(p as u64) as usize + cfg.max_period as usize;
        let outcome = analyse_p(&codes, alphabet.len(), p, extra, &mut mismatches);
        witnesses.push(SzegoEntry { p, outcome });
    }
    let all_witnessed = witnesses
        .iter()
        .all(|e| matches!(e.outcome, SzegoOutcome::Witness { .. }));
    let overall = if all_witnessed {
        SzegoOverall::MismatchAtEveryP
    } else {
        match detect_eventual_periodicity(
            seq,
            cfg.max_period,
            cfg.max_preperiod,
            cfg.horizon.saturating_sub(1),
            0.0,
        ) {
            Ok(Some((preperiod, period))) => SzegoOverall::EventuallyPeriodic { preperiod, period },
            Ok(None) => SzegoOverall::HorizonExhausted,
            Err(Error::Precondition(_)) => SzegoOverall::HorizonExhausted,
            Err(e) => return Err(e),
        }
    };
    Ok(SzegoReport {
        alphabet,
        horizon: cfg.horizon,
        witnesses,
        overall,
    })
}
