/// Min/max segment tree over a fixed array.
#[derive(Clone, Debug)]
pub(crate) struct MinMaxTree {
    n: usize,
    min: Vec<f64>,
    max: Vec<f64>,
}

impl MinMaxTree {
    pub fn new(lo: &[f64], hi: &[f64]) -> Self {
        let n = lo.len();
        let mut min = vec![f64::INFINITY; 2 * n];
        let mut max = vec![f64::NEG_INFINITY; 2 * n];
        min[n..].copy_from_slice(lo);
        max[n..].copy_from_slice(hi);
        for i in (1..n).rev() {
            min[i] = min[2 * i].min(min[2 * i + 1]);
            max[i] = max[2 * i].max(max[2 * i + 1]);
        }
        Self { n, min, max }
    }

    /// `(min, max)` over indices `[l, r)`; `(inf, -inf)` when empty.
    pub fn query(&self, l: usize, r: usize) -> (f64, f64) {
        let (mut l, mut r) = (l + self.n, r + self.n);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        while l < r {
            if l & 1 == 1 {
                lo = lo.min(self.min[l]);
                hi = hi.max(self.max[l]);
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                lo = lo.min(self.min[r]);
                hi = hi.max(self.max[r]);
            }
            l >>= 1;
            r >>= 1;
        }
        (lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_linear_scan() {
        let lo: Vec<f64> = (0..37).map(|i| ((i * 7919) % 101) as f64).collect();
        let hi: Vec<f64> = lo.iter().map(|v| v + ((*v as usize) % 5) as f64).collect();
        let t = MinMaxTree::new(&lo, &hi);
        for l in 0..37 {
            for r in l + 1..=37 {
                let mn = lo[l..r].iter().copied().fold(f64::INFINITY, f64::min);
                let mx = hi[l..r].iter().copied().fold(f64::NEG_INFINITY, f64::max);
                assert_eq!(t.query(l, r), (mn, mx));
            }
        }
    }
}
