//! Lloyd's k-means with k-means++ seeding and best-of-restarts selection.
//!
//! Every tie is broken toward the lowest index (nearest-centroid
//! assignment, D² sampling walk, farthest-point repair), which together
//! with the seeded RNG makes a run a pure function of its inputs.

use ndarray::{Array2, ArrayView1};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Partition;
use crate::scalar::Scalar;

/// Result of the best restart: labels plus the quantities used to pick it.
#[derive(Debug, Clone)]
pub struct KmeansOutcome<S: Scalar = f64> {
    pub partition: Partition,
    pub centroids: Array2<S>,
    /// Within-cluster sum of squared distances of the final assignment.
    pub wcss: S,
    /// Lloyd iterations the winning restart used.
    pub iterations: usize,
}

/// Clusters the rows of `points` into `k` groups.
///
/// Runs `restarts` independent k-means++ initializations, polishes each
/// with Lloyd iterations until the assignment stops changing (or
/// `max_iter`), and keeps the restart with the smallest WCSS.
pub fn kmeans<S: Scalar>(
    points: &Array2<S>,
    k: usize,
    restarts: usize,
    max_iter: usize,
    seed: u64,
) -> Result<KmeansOutcome<S>> {
    let n = points.nrows();
    if n == 0 {
        return Err(Error::invalid("kmeans needs at least one point"));
    }
    if k == 0 || k > n {
        return Err(Error::invalid(format!(
            "cluster count {k} outside 1..={n}"
        )));
    }
    if restarts == 0 {
        return Err(Error::invalid("kmeans needs at least one restart"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<KmeansOutcome<S>> = None;
    for _ in 0..restarts {
        let candidate = run_once(points, k, max_iter, &mut rng)?;
        let better = match &best {
            None => true,
            Some(b) => candidate.wcss < b.wcss,
        };
        if better {
            best = Some(candidate);
        }
    }
    Ok(best.expect("restarts >= 1"))
}

fn run_once<S: Scalar>(
    points: &Array2<S>,
    k: usize,
    max_iter: usize,
    rng: &mut ChaCha8Rng,
) -> Result<KmeansOutcome<S>> {
    let n = points.nrows();
    let dim = points.ncols();
    let mut centroids = seed_plus_plus(points, k, rng);
    let mut labels = vec![0usize; n];
    let mut iterations = 0usize;

    loop {
        let new_labels = assign(points, &centroids);
        let changed = new_labels != labels || iterations == 0;
        labels = new_labels;

        // Recompute means; repair empty clusters by donating the point
        // farthest from its centroid (from a cluster that keeps at least
        // one member).
        let mut counts = vec![0usize; k];
        for &l in &labels {
            counts[l] += 1;
        }
        for j in 0..k {
            if counts[j] == 0 {
                let mut far: Option<(usize, S)> = None;
                for i in 0..n {
                    if counts[labels[i]] < 2 {
                        continue;
                    }
                    let d = dist2(points.row(i), centroids.row(labels[i]));
                    let better = match far {
                        None => true,
                        Some((_, fd)) => d > fd,
                    };
                    if better {
                        far = Some((i, d));
                    }
                }
                let (donor, _) = far.expect("k <= n guarantees a donatable point");
                counts[labels[donor]] -= 1;
                labels[donor] = j;
                counts[j] = 1;
            }
        }
        let mut sums = Array2::<S>::zeros((k, dim));
        for i in 0..n {
            for c in 0..dim {
                sums[[labels[i], c]] += points[[i, c]];
            }
        }
        for j in 0..k {
            let inv = S::one() / S::of(counts[j] as f64);
            for c in 0..dim {
                centroids[[j, c]] = sums[[j, c]] * inv;
            }
        }

        if !changed || iterations >= max_iter {
            break;
        }
        iterations += 1;
    }

    let mut wcss = S::zero();
    for i in 0..n {
        wcss += dist2(points.row(i), centroids.row(labels[i]));
    }
    Ok(KmeansOutcome {
        partition: Partition::new(labels, k)?,
        centroids,
        wcss,
        iterations,
    })
}

/// k-means++ seeding: first centroid uniform, then D² sampling against
/// the nearest chosen centroid. A zero total weight (all remaining points
/// coincide with a centroid) falls back to the lowest unchosen index.
fn seed_plus_plus<S: Scalar>(points: &Array2<S>, k: usize, rng: &mut ChaCha8Rng) -> Array2<S> {
    let n = points.nrows();
    let dim = points.ncols();
    let mut centroids = Array2::<S>::zeros((k, dim));
    let mut chosen = vec![false; n];

    let first = rng.gen_range(0..n);
    centroids.row_mut(0).assign(&points.row(first));
    chosen[first] = true;

    let mut d2: Vec<S> = (0..n)
        .map(|i| dist2(points.row(i), centroids.row(0)))
        .collect();
    for c in 1..k {
        let total: S = d2
            .iter()
            .enumerate()
            .filter(|(i, _)| !chosen[*i])
            .map(|(_, &d)| d)
            .sum();
        let pick = if total > S::zero() {
            let r = S::of(rng.gen::<f64>()) * total;
            let mut acc = S::zero();
            let mut pick = None;
            for i in 0..n {
                if chosen[i] {
                    continue;
                }
                acc += d2[i];
                if acc > r {
                    pick = Some(i);
                    break;
                }
            }
            // Floating accumulation can leave the walk just short of the
            // final candidate; take the last unchosen index then.
            pick.unwrap_or_else(|| (0..n).rfind(|&i| !chosen[i]).expect("k <= n"))
        } else {
            (0..n).find(|&i| !chosen[i]).expect("k <= n")
        };
        centroids.row_mut(c).assign(&points.row(pick));
        chosen[pick] = true;
        for i in 0..n {
            let d = dist2(points.row(i), centroids.row(c));
            if d < d2[i] {
                d2[i] = d;
            }
        }
    }
    centroids
}

/// Nearest-centroid labels; equidistant points go to the lower index.
fn assign<S: Scalar>(points: &Array2<S>, centroids: &Array2<S>) -> Vec<usize> {
    let n = points.nrows();
    let k = centroids.nrows();
    let mut labels = vec![0usize; n];
    for i in 0..n {
        let mut best = 0usize;
        let mut best_d = dist2(points.row(i), centroids.row(0));
        for j in 1..k {
            let d = dist2(points.row(i), centroids.row(j));
            if d < best_d {
                best = j;
                best_d = d;
            }
        }
        labels[i] = best;
    }
    labels
}

fn dist2<S: Scalar>(a: ArrayView1<S>, b: ArrayView1<S>) -> S {
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b.iter()) {
        let d = *x - *y;
        acc += d * d;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::Rng;

    #[test]
    fn repeated_locations_group_exactly() {
        // Three distinct locations, each repeated: WCSS must hit zero.
        let pts: Array2<f64> = array![
            [0.0, 0.0],
            [5.0, 5.0],
            [0.0, 9.0],
            [0.0, 0.0],
            [5.0, 5.0],
            [0.0, 9.0],
        ];
        let out = kmeans(&pts, 3, 5, 100, 1).unwrap();
        assert_eq!(out.wcss, 0.0);
        let l = out.partition.labels();
        assert_eq!(l[0], l[3]);
        assert_eq!(l[1], l[4]);
        assert_eq!(l[2], l[5]);
        assert_ne!(l[0], l[1]);
        assert_ne!(l[1], l[2]);
    }

    #[test]
    fn single_cluster_centroid_is_mean() {
        let pts: Array2<f64> = array![[1.0], [2.0], [6.0]];
        let out = kmeans(&pts, 1, 1, 10, 0).unwrap();
        assert_eq!(out.partition.labels(), &[0, 0, 0]);
        assert!((out.centroids[[0, 0]] - 3.0).abs() < 1e-12);
        let expected_wcss = 4.0 + 1.0 + 9.0;
        assert!((out.wcss - expected_wcss).abs() < 1e-12);
    }

    #[test]
    fn separated_gaussians_split_correctly() {
        // Two clouds 10 sigma apart; every seeded run must split them.
        for seed in 0..20u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
            let mut gauss = move || {
                let u1: f64 = rng.gen::<f64>().max(1e-12);
                let u2: f64 = rng.gen();
                (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
            };
            let mut pts = Array2::<f64>::zeros((100, 2));
            for i in 0..50 {
                pts[[i, 0]] = gauss();
                pts[[i, 1]] = gauss();
            }
            for i in 50..100 {
                pts[[i, 0]] = 10.0 + gauss();
                pts[[i, 1]] = 10.0 + gauss();
            }
            let out = kmeans(&pts, 2, 5, 100, seed).unwrap();
            let l = out.partition.labels();
            assert!(l[..50].iter().all(|&x| x == l[0]), "seed {seed}");
            assert!(l[50..].iter().all(|&x| x == l[50]), "seed {seed}");
            assert_ne!(l[0], l[50], "seed {seed}");
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut pts = Array2::<f64>::zeros((40, 3));
        for e in pts.iter_mut() {
            *e = rng.gen();
        }
        let a = kmeans(&pts, 4, 8, 50, 9).unwrap();
        let b = kmeans(&pts, 4, 8, 50, 9).unwrap();
        assert_eq!(a.partition.labels(), b.partition.labels());
        assert_eq!(a.wcss, b.wcss);
    }

    #[test]
    fn every_cluster_ends_nonempty() {
        // More clusters than natural groups: repair must still populate
        // all of them.
        let pts: Array2<f64> = array![[0.0], [0.0], [0.0], [10.0], [10.0]];
        let out = kmeans(&pts, 4, 3, 50, 2).unwrap();
        let mut seen = vec![false; 4];
        for &l in out.partition.labels() {
            seen[l] = true;
        }
        assert!(seen.iter().all(|&s| s), "labels {:?}", out.partition.labels());
    }

    #[test]
    fn input_validation() {
        let pts: Array2<f64> = array![[1.0], [2.0]];
        assert!(kmeans(&pts, 0, 1, 10, 0).is_err());
        assert!(kmeans(&pts, 3, 1, 10, 0).is_err());
        assert!(kmeans(&pts, 1, 0, 10, 0).is_err());
        let empty = Array2::<f64>::zeros((0, 2));
        assert!(kmeans(&empty, 1, 1, 10, 0).is_err());
    }
}
