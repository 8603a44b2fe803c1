use alloc::vec::Vec;
use core::borrow::Borrow;

use serde::Serialize;

use crate::error::Result;
use crate::repr::{check_k, ReprTable, Witness};

/// One constraint `f(n) = f(x1)^2 + ... + f(xk)^2` with `n = sum xi^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub k: usize,
    pub xs: Witness,
    pub n: u64,
}

/// Instances with `lo <= n <= hi`, ordered by `n` then lexicographically.
///
/// Witnesses are produced one `n` at a time; the full stream is never held.
pub struct Instances<T> {
    table: T,
    next_n: u64,
    hi: u64,
    buffer: alloc::vec::IntoIter<Witness>,
    current: u64,
}

impl<T: Borrow<ReprTable>> Instances<T> {
    /// Stream over a prebuilt table; `hi` is clamped to the table bound.
    pub fn over(table: T, lo: u64, hi: u64) -> Self {
        let hi = hi.min(table.borrow().bound());
        Instances {
            table,
            next_n: lo.max(1),
            hi,
            buffer: Vec::new().into_iter(),
            current: 0,
        }
    }
}

impl<T: Borrow<ReprTable>> Iterator for Instances<T> {
    type Item = Instance;

    fn next(&mut self) -> Option<Instance> {
        loop {
            if let Some(xs) = self.buffer.next() {
                return Some(Instance {
                    k: self.table.borrow().k(),
                    xs,
                    n: self.current,
                });
            }
            if self.next_n > self.hi {
                return None;
            }
            self.current = self.next_n;
            self.next_n += 1;
            self.buffer = self.table.borrow().witnesses(self.current, None).into_iter();
        }
    }
}

/// Every multiset `x1 <= ... <= xk` with `sum xi^2 <= bound`. Empty when `bound < k`.
pub fn enumerate_instances(bound: u64, k: usize) -> Result<Instances<ReprTable>> {
    check_k(k)?;
    let table = ReprTable::new(bound, k)?;
    Ok(Instances::over(table, k as u64, bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn small_enumeration() {
        let got: Vec<(Vec<u64>, u64)> = enumerate_instances(12, 3)
            .unwrap()
            .map(|i| (i.xs.parts().to_vec(), i.n))
            .collect();
        assert_eq!(
            got,
            vec![
                (vec![1, 1, 1], 3),
                (vec![1, 1, 2], 6),
                (vec![1, 2, 2], 9),
                (vec![1, 1, 3], 11),
                (vec![2, 2, 2], 12),
            ]
        );
    }

    #[test]
    fn boundary_cases() {
        for k in 3..8 {
            let all: Vec<Instance> = enumerate_instances(k as u64, k).unwrap().collect();
            assert_eq!(all.len(), 1);
            assert_eq!(all[0].xs.parts(), vec![1u64; k].as_slice());
        }
        assert_eq!(enumerate_instances(2, 3).unwrap().count(), 0);
        assert!(enumerate_instances(10, 2).is_err());
    }

    #[test]
    fn stream_matches_brute_force() {
        // independent triple loop for k = 3
        let bound = 300u64;
        let mut brute = Vec::new();
        for a in 1..=17u64 {
            for b in a..=17 {
                for c in b..=17 {
                    let n = a * a + b * b + c * c;
                    if n <= bound {
                        brute.push((n, vec![a, b, c]));
                    }
                }
            }
        }
        brute.sort();
        let got: Vec<(u64, Vec<u64>)> = enumerate_instances(bound, 3)
            .unwrap()
            .map(|i| (i.n, i.xs.parts().to_vec()))
            .collect();
        assert_eq!(got, brute);
    }
}
