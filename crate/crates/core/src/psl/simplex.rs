/// Euclidean projection onto the probability simplex `{x >= 0, sum x = 1}`.
pub fn project_simplex(values: &[f64]) -> Vec<f64> {
    let mut out = values.to_vec();
    project_simplex_in_place(&mut out, &mut Vec::with_capacity(values.len()));
    out
}

/// In-place projection; `scratch` is reused across calls to avoid allocation.
///
/// Sort-based: find the largest `k` such that `u_k - (sum_{i<=k} u_i - 1) / k > 0` over the
/// values sorted descending, then shift by that threshold and clip at zero.
pub fn project_simplex_in_place(values: &mut [f64], scratch: &mut Vec<f64>) {
    if values.is_empty() {
        return;
    }
    scratch.clear();
    scratch.extend_from_slice(values);
    scratch.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (i, &u) in scratch.iter().enumerate() {
        cumulative += u;
        let t = (cumulative - 1.0) / (i + 1) as f64;
        if u - t > 0.0 {
            theta = t;
        } else {
            break;
        }
    }
    for v in values.iter_mut() {
        *v = (*v - theta).max(0.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn examples() {
        assert!(close(&project_simplex(&[0.5, 0.5, 0.5]), &[1.0 / 3.0; 3]));
        assert!(close(&project_simplex(&[2.0, 0.0, 0.0]), &[1.0, 0.0, 0.0]));
        assert!(close(&project_simplex(&[0.6, 0.3, 0.1]), &[0.6, 0.3, 0.1]));
    }

    /// Brute force: minimize distance over a fine grid of the 2-simplex.
    fn grid_projection(v: &[f64; 3]) -> [f64; 3] {
        let n = 400;
        let mut best = ([0.0; 3], f64::INFINITY);
        for i in 0..=n {
            for j in 0..=(n - i) {
                let p = [i as f64 / n as f64, j as f64 / n as f64, (n - i - j) as f64 / n as f64];
                let d: f64 = p.iter().zip(v).map(|(a, b)| (a - b).powi(2)).sum();
                if d < best.1 {
                    best = (p, d);
                }
            }
        }
        best.0
    }

    proptest! {
        #[test]
        fn lands_on_simplex(v in prop::collection::vec(-5.0f64..5.0, 1..8)) {
            let p = project_simplex(&v);
            prop_assert!(p.iter().all(|&x| x >= 0.0));
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }

        #[test]
        fn no_grid_point_is_closer(a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0) {
            let v = [a, b, c];
            let p = project_simplex(&v);
            let g = grid_projection(&v);
            let dist = |q: &[f64]| q.iter().zip(&v).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
            prop_assert!(dist(&p) <= dist(&g) + 1e-12);
        }
    }
}
