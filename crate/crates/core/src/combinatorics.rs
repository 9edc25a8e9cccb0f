//! Binomials and subset enumeration.

/// `C(n, k)`, or `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// `Σ_{k ≤ upto} C(n, k)`.
pub fn binomial_prefix_sum(n: u64, upto: u64) -> Option<u128> {
    (0..=upto.min(n)).try_fold(0u128, |acc, k| acc.checked_add(binomial(n, k)?))
}

/// All `k`-subsets of `{0, …, n − 1}` as increasing vectors, in colex order.
pub fn subsets_colex(n: usize, k: usize) -> SubsetsColex {
    SubsetsColex { n, current: (k <= n).then(|| (0..k).collect()) }
}

pub struct SubsetsColex {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for SubsetsColex {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        let j = (0..k).find(|&j| {
            let limit = if j + 1 < k { next[j + 1] } else { self.n };
            next[j] + 1 < limit
        });
        if let Some(j) = j {
            next[j] += 1;
            for (i, slot) in next.iter_mut().enumerate().take(j) {
                *slot = i;
            }
            self.current = Some(next);
        }
        Some(out)
    }
}
