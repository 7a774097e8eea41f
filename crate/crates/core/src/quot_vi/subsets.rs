use crate::error::{Error, Result};

pub fn binomial(n: u32, k: u32) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i + 1) as u128;
    }
    Some(acc)
}

/// Lexicographic stream of `r`-element subsets of `{0, .., n-1}`, restartable
/// at any rank.
#[derive(Debug, Clone)]
pub struct SubsetStream {
    n: u32,
    current: Option<Vec<u32>>,
}

pub fn enumerate_subsets(n: u32, r: u32) -> SubsetStream {
    SubsetStream::starting_at(n, r, 0).expect("rank 0 always exists")
}

impl SubsetStream {
    /// Stream positioned at the subset of lexicographic rank `rank`.
    pub fn starting_at(n: u32, r: u32, rank: u128) -> Result<Self> {
        let total = binomial(n, r)
            .ok_or_else(|| Error::InvalidParameters(format!("C({n}, {r}) overflows")))?;
        if rank >= total {
            return Ok(SubsetStream { n, current: None });
        }
        Ok(SubsetStream {
            n,
            current: Some(unrank(n, r, rank)),
        })
    }
}

/// The subset of lexicographic rank `rank`.
pub fn unrank(n: u32, r: u32, mut rank: u128) -> Vec<u32> {
    let mut out = Vec::with_capacity(r as usize);
    let mut next = 0;
    for slot in 0..r {
        let remaining = r - slot - 1;
        let mut x = next;
        loop {
            // subsets whose element at this slot is x
            let block = binomial(n - x - 1, remaining).unwrap_or(u128::MAX);
            if rank < block {
                break;
            }
            rank -= block;
            x += 1;
        }
        out.push(x);
        next = x + 1;
    }
    out
}

impl Iterator for SubsetStream {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let cur = self.current.take()?;
        let r = cur.len();
        let mut succ = cur.clone();
        let mut i = r;
        while i > 0 {
            i -= 1;
            if succ[i] < self.n - (r - i) as u32 {
                succ[i] += 1;
                for j in i + 1..r {
                    succ[j] = succ[j - 1] + 1;
                }
                self.current = Some(succ);
                return Some(cur);
            }
        }
        Some(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_stream() {
        let all: Vec<_> = enumerate_subsets(3, 2).collect();
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        let tail: Vec<_> = SubsetStream::starting_at(3, 2, 2).unwrap().collect();
        assert_eq!(tail, vec![vec![1, 2]]);
        assert_eq!(SubsetStream::starting_at(3, 2, 3).unwrap().count(), 0);
    }

    #[test]
    fn counts() {
        assert_eq!(binomial(24, 4), Some(10626));
        assert_eq!(enumerate_subsets(24, 4).count(), 10626);
        assert_eq!(enumerate_subsets(5, 0).count(), 1);
    }

    #[test]
    fn restart_matches_skip() {
        for (n, r) in [(7, 3), (9, 4), (6, 1), (8, 7)] {
            let all: Vec<_> = enumerate_subsets(n, r).collect();
            for rank in 0..all.len() {
                let resumed: Vec<_> = SubsetStream::starting_at(n, r, rank as u128)
                    .unwrap()
                    .collect();
                assert_eq!(resumed, all[rank..].to_vec());
            }
        }
    }
}
