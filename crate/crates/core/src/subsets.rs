//! Small combinatorics helpers: k-subset iteration and binomial estimates.

/// Iterator over all k-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Combinations {
    Combinations {
        n,
        k,
        cur: (0..k).collect(),
        started: false,
        done: k > n,
    }
}

pub struct Combinations {
    n: usize,
    k: usize,
    cur: Vec<usize>,
    started: bool,
    done: bool,
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.cur.clone());
        }
        // Advance the rightmost index that still has room.
        let k = self.k;
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.cur[i] + 1 <= self.n - (k - i) {
                self.cur[i] += 1;
                for j in i + 1..k {
                    self.cur[j] = self.cur[j - 1] + 1;
                }
                return Some(self.cur.clone());
            }
        }
    }
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn choose(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        let num = (n - i) as u128;
        acc = match acc.checked_mul(num) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Natural log of the binomial coefficient, computed stably as a sum of logs.
pub fn ln_choose(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    (0..k)
        .map(|i| (((n - i) as f64) / ((i + 1) as f64)).ln())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_order_and_count() {
        let all: Vec<_> = combinations(4, 2).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(10, 4).count() as u128, choose(10, 4));
    }

    #[test]
    fn empty_and_degenerate() {
        assert_eq!(combinations(5, 0).collect::<Vec<_>>(), vec![Vec::new()]);
        assert_eq!(combinations(3, 4).count(), 0);
        assert_eq!(combinations(0, 0).count(), 1);
    }

    #[test]
    fn choose_values() {
        assert_eq!(choose(6, 3), 20);
        assert_eq!(choose(60, 12), 1_399_358_844_975);
        assert_eq!(choose(5, 9), 0);
        assert_eq!(choose(0, 0), 1);
    }

    #[test]
    fn ln_choose_matches_choose() {
        for (n, k) in [(10, 3), (20, 10), (36, 4)] {
            let exact = choose(n, k) as f64;
            assert!((ln_choose(n, k) - exact.ln()).abs() < 1e-9);
        }
    }
}
