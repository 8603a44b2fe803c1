//! Sums of exactly `k` positive squares.
//!
//! [`ReprTable`] memoizes `entry(n, j)`: whether `n` is a sum of exactly `j`
//! positive squares, for `1 <= j <= k` and `0 <= n <= bound`. Witnesses are
//! found by depth-first search over nondecreasing tuples, pruned by the table,
//! which yields multisets exactly once and in lexicographic order.

use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A multiset of positive integers, stored sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Witness(Vec<u64>);

impl Witness {
    /// Checks the witness invariants against the queried `n` and `k`.
    pub fn new(mut parts: Vec<u64>, n: u64, k: usize) -> Result<Witness> {
        parts.sort_unstable();
        let sum: u64 = parts.iter().map(|x| x * x).sum();
        if parts.len() != k || parts.first() == Some(&0) || sum != n {
            return Err(Error::input(alloc::format!(
                "{parts:?} is not a sum of {k} positive squares equal to {n}"
            )));
        }
        Ok(Witness(parts))
    }

    fn from_search(parts: Vec<u64>, n: u64, k: usize) -> Witness {
        debug_assert!(parts.windows(2).all(|w| w[0] <= w[1]));
        debug_assert_eq!(parts.len(), k);
        debug_assert!(parts.iter().all(|&x| x >= 1));
        debug_assert_eq!(parts.iter().map(|x| x * x).sum::<u64>(), n);
        let _ = (n, k);
        Witness(parts)
    }

    pub fn parts(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn square_sum(&self) -> u64 {
        self.0.iter().map(|x| x * x).sum()
    }
}

impl fmt::Debug for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

pub(crate) fn check_k(k: usize) -> Result<()> {
    if k < 3 {
        return Err(Error::input(alloc::format!(
            "k = {k}: the equation is only considered for k >= 3"
        )));
    }
    Ok(())
}

fn is_square(n: u64) -> bool {
    n >= 1 && {
        let r = n.isqrt();
        r * r == n
    }
}

/// Memoized representability for a fixed part count.
#[derive(Debug, Clone)]
pub struct ReprTable {
    k: usize,
    /// `rows[j - 1][n]`
    rows: Vec<Vec<bool>>,
}

impl ReprTable {
    pub fn new(bound: u64, k: usize) -> Result<ReprTable> {
        check_k(k)?;
        let mut t = ReprTable {
            k,
            rows: alloc::vec![Vec::new(); k],
        };
        t.extend_to(bound);
        Ok(t)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn bound(&self) -> u64 {
        self.rows[0].len() as u64 - 1
    }

    /// Grows the table in place; entries only depend on smaller `n`.
    pub fn extend_to(&mut self, bound: u64) {
        let start = self.rows[0].len() as u64;
        for n in start..=bound {
            self.rows[0].push(is_square(n));
            for j in 2..=self.k {
                let prev = &self.rows[j - 2];
                let mut hit = false;
                let mut x = 1u64;
                while x * x + (j as u64 - 1) <= n {
                    if prev[(n - x * x) as usize] {
                        hit = true;
                        break;
                    }
                    x += 1;
                }
                self.rows[j - 1].push(hit);
            }
        }
    }

    /// Whether `n` is a sum of exactly `j` positive squares, `1 <= j <= k`.
    pub fn entry(&self, n: u64, j: usize) -> bool {
        assert!((1..=self.k).contains(&j), "part count {j} outside 1..={}", self.k);
        self.rows[j - 1][n as usize]
    }

    pub fn is_representable(&self, n: u64) -> bool {
        self.entry(n, self.k)
    }

    /// At most `limit` witnesses for `n`, lexicographic.
    pub fn witnesses(&self, n: u64, limit: Option<usize>) -> Vec<Witness> {
        assert!(n <= self.bound(), "n = {n} past table bound {}", self.bound());
        let mut out = Vec::new();
        if limit == Some(0) || !self.is_representable(n) {
            return out;
        }
        let mut cur = Vec::with_capacity(self.k);
        self.search(n, self.k, 1, &mut cur, &mut out, limit.unwrap_or(usize::MAX), n);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn search(
        &self,
        rest: u64,
        parts: usize,
        min: u64,
        cur: &mut Vec<u64>,
        out: &mut Vec<Witness>,
        limit: usize,
        n: u64,
    ) {
        if parts == 1 {
            if is_square(rest) && rest.isqrt() >= min {
                cur.push(rest.isqrt());
                out.push(Witness::from_search(cur.clone(), n, self.k));
                cur.pop();
            }
            return;
        }
        let mut x = min;
        while (parts as u64) * x * x <= rest && out.len() < limit {
            if self.entry(rest - x * x, parts - 1) {
                cur.push(x);
                self.search(rest - x * x, parts - 1, x, cur, out, limit, n);
                cur.pop();
            }
            x += 1;
        }
    }

    /// Sorted list of `n` in `1..=bound` with no representation.
    pub fn non_representable(&self, bound: u64) -> Vec<u64> {
        (1..=bound).filter(|&n| !self.is_representable(n)).collect()
    }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::input("n must be a positive integer"));
    }
    Ok(())
}

/// The lexicographically smallest witness, if any.
pub fn is_representable(n: u64, k: usize) -> Result<(bool, Option<Witness>)> {
    check_n(n)?;
    let table = ReprTable::new(n, k)?;
    let w = table.witnesses(n, Some(1)).pop();
    Ok((w.is_some(), w))
}

pub fn representations(n: u64, k: usize, limit: Option<usize>) -> Result<Vec<Witness>> {
    check_n(n)?;
    Ok(ReprTable::new(n, k)?.witnesses(n, limit))
}

pub fn non_representable_up_to(bound: u64, k: usize) -> Result<Vec<u64>> {
    check_n(bound)?;
    Ok(ReprTable::new(bound, k)?.non_representable(bound))
}
