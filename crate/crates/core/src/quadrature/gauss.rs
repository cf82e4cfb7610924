//! Cached Gauss–Legendre rules on `[-1, 1]`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use gauss_quad::legendre::GaussLegendre;

pub type Rule = Arc<Vec<(f64, f64)>>;

static CACHE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();

/// Node/weight pairs of the `n`-point rule (`n ≥ 1`).
pub fn gauss_legendre(n: usize) -> Rule {
    let n = n.max(1);
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("gauss cache poisoned");
    map.entry(n)
        .or_insert_with(|| {
            if n == 1 {
                return Arc::new(vec![(0.0, 2.0)]);
            }
            let rule = GaussLegendre::new(n).expect("degree at least 2");
            let mut pairs = rule.as_node_weight_pairs().to_vec();
            pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite nodes"));
            Arc::new(pairs)
        })
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        for n in 1..12 {
            let r = gauss_legendre(n);
            let deg = 2 * n - 1;
            let q: f64 = r.iter().map(|(x, w)| w * x.powi(deg as i32 - 1)).sum();
            let exact = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((q - exact).abs() < 1e-13, "n = {n}");
        }
    }
}
