//! Minimum-cost assignment (Hungarian algorithm, potentials form).
//!
//! Used to match predicted cluster labels to ground-truth labels when
//! scoring a clustering: the confusion-matrix overlap is maximized by
//! minimizing its negation here. O(n³) and exact.

use ndarray::Array2;

use crate::error::{Error, Result};

/// Finds the column permutation minimizing `Σ cost[i][σ(i)]` over a
/// square cost matrix. Returns (row → column mapping, total cost).
pub fn min_cost_assignment(cost: &Array2<f64>) -> Result<(Vec<usize>, f64)> {
    let n = cost.nrows();
    if n == 0 || n != cost.ncols() {
        return Err(Error::invalid(format!(
            "assignment needs a square nonempty matrix, got {}x{}",
            n,
            cost.ncols()
        )));
    }
    if cost.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("assignment costs must be finite"));
    }

    // Potentials u (rows) and v (columns) with 1-based sentinel column 0;
    // p[j] is the row matched to column j.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[[i0 - 1, j - 1]] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut row_to_col = vec![0usize; n];
    let mut total = 0.0;
    for j in 1..=n {
        row_to_col[p[j] - 1] = j - 1;
        total += cost[[p[j] - 1, j - 1]];
    }
    Ok((row_to_col, total))
}

/// Exhaustive assignment minimum over all column permutations; factorial
/// cost, for cross-checking the Hungarian result at small sizes.
pub fn brute_force_assignment(cost: &Array2<f64>) -> Result<f64> {
    let n = cost.nrows();
    if n == 0 || n != cost.ncols() {
        return Err(Error::invalid("assignment needs a square nonempty matrix"));
    }
    let mut cols: Vec<usize> = (0..n).collect();
    let mut best = f64::INFINITY;
    permute(&mut cols, 0, cost, &mut best);
    Ok(best)
}

fn permute(cols: &mut Vec<usize>, depth: usize, cost: &Array2<f64>, best: &mut f64) {
    let n = cols.len();
    if depth == n {
        let total: f64 = (0..n).map(|i| cost[[i, cols[i]]]).sum();
        if total < *best {
            *best = total;
        }
        return;
    }
    for i in depth..n {
        cols.swap(depth, i);
        permute(cols, depth + 1, cost, best);
        cols.swap(depth, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_is_optimal_when_diagonal_is_cheap() {
        let cost = array![[0.0, 5.0], [5.0, 0.0]];
        let (map, total) = min_cost_assignment(&cost).unwrap();
        assert_eq!(map, vec![0, 1]);
        assert_eq!(total, 0.0);
    }

    #[test]
    fn known_three_by_three() {
        let cost = array![[4.0, 1.0, 3.0], [2.0, 0.0, 5.0], [3.0, 2.0, 2.0]];
        let (map, total) = min_cost_assignment(&cost).unwrap();
        // Optimal: row0->col1 (1), row1->col0 (2), row2->col2 (2) = 5.
        assert_eq!(total, 5.0);
        assert_eq!(map, vec![1, 0, 2]);
    }

    #[test]
    fn matches_brute_force_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let n = rng.gen_range(1..=5);
            let mut cost = Array2::<f64>::zeros((n, n));
            for e in cost.iter_mut() {
                *e = rng.gen_range(-10.0..10.0);
            }
            let (_, hungarian) = min_cost_assignment(&cost).unwrap();
            let brute = brute_force_assignment(&cost).unwrap();
            assert!(
                (hungarian - brute).abs() < 1e-9,
                "hungarian {hungarian} vs brute {brute} at n={n}"
            );
        }
    }

    #[test]
    fn mapping_is_a_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut cost = Array2::<f64>::zeros((7, 7));
        for e in cost.iter_mut() {
            *e = rng.gen();
        }
        let (map, _) = min_cost_assignment(&cost).unwrap();
        let mut seen = vec![false; 7];
        for &j in &map {
            assert!(!seen[j]);
            seen[j] = true;
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(min_cost_assignment(&Array2::<f64>::zeros((0, 0))).is_err());
        assert!(min_cost_assignment(&Array2::<f64>::zeros((2, 3))).is_err());
        let nan = array![[f64::NAN]];
        assert!(min_cost_assignment(&nan).is_err());
    }
}
