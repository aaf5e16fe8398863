//! Set partitions of the user set.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Disjoint nonempty blocks covering `{0, …, n-1}`.
///
/// Stored canonically: each block sorted, blocks ordered by their smallest
/// element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut canonical = Vec::with_capacity(blocks.len());
        for mut b in blocks {
            if b.is_empty() {
                return Err(Error::PartitionInvalid("empty block".into()));
            }
            b.sort_unstable();
            for &u in &b {
                if u >= n {
                    return Err(Error::PartitionInvalid(format!("user {} out of range", u + 1)));
                }
                if std::mem::replace(&mut seen[u], true) {
                    return Err(Error::PartitionInvalid(format!("user {} appears twice", u + 1)));
                }
            }
            canonical.push(b);
        }
        if let Some(u) = seen.iter().position(|s| !s) {
            return Err(Error::PartitionInvalid(format!("user {} is not covered", u + 1)));
        }
        canonical.sort();
        Ok(Partition { blocks: canonical })
    }

    pub fn singletons(n: usize) -> Self {
        Partition { blocks: (0..n).map(|i| vec![i]).collect() }
    }

    /// Partition from a restricted growth string: element i goes to block `rgs[i]`.
    pub fn from_rgs(rgs: &[usize]) -> Self {
        let count = rgs.iter().max().map_or(0, |&m| m + 1);
        let mut blocks = vec![Vec::new(); count];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].push(i);
        }
        Partition { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn ground_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Block index of every element.
    pub fn block_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.ground_size()];
        for (b, block) in self.blocks.iter().enumerate() {
            for &u in block {
                idx[u] = b;
            }
        }
        idx
    }

    /// Number of blocks meeting the users in `mask`.
    pub fn blocks_touched(&self, mask: u64) -> usize {
        self.blocks
            .iter()
            .filter(|b| b.iter().any(|&u| mask >> u & 1 == 1))
            .count()
    }

    /// Parses `"1,2|3"` style 1-based blocks, or `"singletons"`.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("singletons") {
            return Ok(Self::singletons(n));
        }
        let blocks = s
            .split('|')
            .map(|block| {
                block
                    .split(',')
                    .map(|u| match u.trim().parse::<usize>() {
                        Ok(id) if id >= 1 => Ok(id - 1),
                        _ => Err(Error::PartitionInvalid(format!("bad user id {u:?} in {s:?}"))),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, blocks)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            let ids: Vec<String> = b.iter().map(|u| (u + 1).to_string()).collect();
            write!(f, "{{{}}}", ids.join(","))?;
        }
        write!(f, "}}")
    }
}

/// Iterator over all partitions of an `n`-set in lexicographic order of
/// their restricted growth strings.
pub struct SetPartitions {
    rgs: Vec<usize>,
    /// `max[i]` = max of `rgs[0..i]`.
    max: Vec<usize>,
    done: bool,
}

pub fn set_partitions(n: usize) -> SetPartitions {
    SetPartitions { rgs: vec![0; n], max: vec![0; n], done: false }
}

impl Iterator for SetPartitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let out = Partition::from_rgs(&self.rgs);
        let n = self.rgs.len();
        // rightmost position that can still grow
        match (1..n).rev().find(|&i| self.rgs[i] <= self.max[i]) {
            Some(i) => {
                self.rgs[i] += 1;
                for j in i + 1..n {
                    self.max[j] = self.max[j - 1].max(self.rgs[j - 1]);
                    self.rgs[j] = 0;
                }
            }
            None => self.done = true,
        }
        Some(out)
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses explicit blocks; the ground set is inferred from the largest id.
    fn from_str(s: &str) -> Result<Self> {
        let n = s
            .split(['|', ','])
            .filter_map(|u| u.trim().parse::<usize>().ok())
            .max()
            .unwrap_or(0);
        Partition::parse(n, s)
    }
}
