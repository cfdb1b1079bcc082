//! Minimal derivative-free simplex descent (Nelder–Mead) in four dimensions.
//!
//! Deterministic: no randomness, fixed coefficients, fixed tie-breaking.

/// Minimize `f` starting from `start`, with an initial simplex of edge
/// `step`. Stops when the best value drops to `target`, the simplex
/// degenerates, or `max_iter` iterations have run. Returns the best point.
pub(crate) fn nelder_mead<F>(f: F, start: [f64; 4], step: f64, target: f64, max_iter: usize) -> [f64; 4]
where
    F: Fn(&[f64; 4]) -> f64,
{
    const ALPHA: f64 = 1.0; // reflection
    const GAMMA: f64 = 2.0; // expansion
    const RHO: f64 = 0.5; // contraction
    const SIGMA: f64 = 0.5; // shrink

    let n = 4;
    let mut pts: Vec<[f64; 4]> = Vec::with_capacity(n + 1);
    pts.push(start);
    for d in 0..n {
        let mut v = start;
        v[d] += step;
        pts.push(v);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();

    for _ in 0..max_iter {
        // Order best..worst.
        let mut idx: Vec<usize> = (0..=n).collect();
        idx.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap_or(std::cmp::Ordering::Equal));
        let ordered: Vec<[f64; 4]> = idx.iter().map(|&i| pts[i]).collect();
        let ordered_vals: Vec<f64> = idx.iter().map(|&i| vals[i]).collect();
        pts = ordered;
        vals = ordered_vals;

        if vals[0] <= target || (vals[n] - vals[0]).abs() < 1e-300 {
            break;
        }

        let mut centroid = [0.0; 4];
        for p in pts.iter().take(n) {
            for d in 0..n {
                centroid[d] += p[d] / n as f64;
            }
        }

        let lerp = |a: &[f64; 4], b: &[f64; 4], t: f64| {
            let mut out = [0.0; 4];
            for d in 0..n {
                out[d] = a[d] + t * (b[d] - a[d]);
            }
            out
        };

        let reflected = lerp(&centroid, &pts[n], -ALPHA);
        let f_r = f(&reflected);
        if f_r < vals[0] {
            let expanded = lerp(&centroid, &pts[n], -GAMMA);
            let f_e = f(&expanded);
            if f_e < f_r {
                pts[n] = expanded;
                vals[n] = f_e;
            } else {
                pts[n] = reflected;
                vals[n] = f_r;
            }
        } else if f_r < vals[n - 1] {
            pts[n] = reflected;
            vals[n] = f_r;
        } else {
            let contracted = if f_r < vals[n] {
                lerp(&centroid, &pts[n], -RHO)
            } else {
                lerp(&centroid, &pts[n], RHO)
            };
            let f_c = f(&contracted);
            if f_c < vals[n].min(f_r) {
                pts[n] = contracted;
                vals[n] = f_c;
            } else {
                let best = pts[0];
                for i in 1..=n {
                    pts[i] = lerp(&best, &pts[i], SIGMA);
                    vals[i] = f(&pts[i]);
                }
            }
        }
    }

    let mut best = 0;
    for i in 1..=n {
        if vals[i] < vals[best] {
            best = i;
        }
    }
    pts[best]
}
