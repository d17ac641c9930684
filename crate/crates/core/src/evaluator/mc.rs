//! Monte Carlo oracle for `F_{γ,λ}` in 1D.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bvcalc::{Bv1d, OpenSet1D};
use crate::error::{param, Result};

/// Number of independent substreams; fixed so results do not depend on the
/// thread count.
pub(crate) const SHARDS: u64 = 64;

/// Per-shard sums combined in shard order.
pub(crate) fn sharded<F>(samples: u64, seed: u64, body: F) -> (f64, f64)
where
    F: Fn(&mut ChaCha8Rng, u64) -> (f64, f64) + Sync,
{
    let parts: Vec<(f64, f64)> = (0..SHARDS)
        .into_par_iter()
        .map(|s| {
            let n = samples / SHARDS + u64::from(s < samples % SHARDS);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s);
            body(&mut rng, n)
        })
        .collect();
    parts.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1))
}

/// Mean and standard error of `λ |W|² |x - y|^{γ-1} 1_E(x, y)` for `(x, y)`
/// uniform on `W × W`.
pub fn f_eval_mc(u: &Bv1d, w: &OpenSet1D, gamma: f64, lambda: f64, samples: u64, seed: u64) -> Result<(f64, f64)> {
    if samples == 0 {
        return param("sample count must be positive");
    }
    w.require_subset_of(u.domain())?;
    let wt = u.working_domain(w)?;
    let ivs = wt.intervals().to_vec();
    let total = wt.measure();
    let cum: Vec<f64> = ivs.iter().scan(0.0, |s, &(a, b)| {
        *s += b - a;
        Some(*s)
    }).collect();
    let draw = |rng: &mut ChaCha8Rng| {
        let r = rng.random::<f64>() * total;
        let i = cum.partition_point(|&c| c <= r).min(ivs.len() - 1);
        let start = if i == 0 { 0.0 } else { cum[i - 1] };
        ivs[i].0 + (r - start)
    };
    let scale = lambda * total * total;
    let (s1, s2) = sharded(samples, seed, |rng, n| {
        let (mut s1, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            let (x, y) = (draw(rng), draw(rng));
            let d = (x - y).abs();
            if d == 0.0 {
                continue;
            }
            if (u.value(x) - u.value(y)).abs() > lambda * d.powf(1.0 + gamma) {
                let v = scale * d.powf(gamma - 1.0);
                s1 += v;
                s2 += v * v;
            }
        }
        (s1, s2)
    });
    let n = samples as f64;
    let mean = s1 / n;
    let var = (s2 / n - mean * mean).max(0.0);
    Ok((mean, (var / n).sqrt()))
}
