//! Graph representation and the block-plus-noise generative model.
//!
//! Graphs are undirected and simple, stored as dense 0/1 adjacency
//! matrices. The generative model produces a disjoint union of complete
//! graphs ("blocks") and perturbs it by XOR-ing in an Erdős–Rényi mask,
//! which flips each off-diagonal entry independently with probability `p`.

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense adjacency matrix of an undirected simple graph.
///
/// Invariants enforced at construction: square with `n >= 1`, entries in
/// `{0,1}`, symmetric, zero diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    entries: Array2<u8>,
}

impl AdjacencyMatrix {
    /// Validates and wraps a raw 0/1 matrix.
    pub fn from_entries(entries: Array2<u8>) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows == 0 || rows != cols {
            return Err(Error::invalid(format!(
                "adjacency matrix must be square and nonempty, got {rows}x{cols}"
            )));
        }
        for i in 0..rows {
            if entries[[i, i]] != 0 {
                return Err(Error::invalid(format!("nonzero diagonal at node {i}")));
            }
            for j in 0..cols {
                let e = entries[[i, j]];
                if e > 1 {
                    return Err(Error::invalid(format!(
                        "entry ({i},{j}) is {e}, expected 0 or 1"
                    )));
                }
                if entries[[i, j]] != entries[[j, i]] {
                    return Err(Error::invalid(format!(
                        "asymmetric entries at ({i},{j})"
                    )));
                }
            }
        }
        Ok(AdjacencyMatrix { entries })
    }

    /// Edgeless graph on `n` nodes.
    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("graph needs at least one node"));
        }
        Ok(AdjacencyMatrix {
            entries: Array2::zeros((n, n)),
        })
    }

    /// Builds a graph from undirected edges, rejecting self-loops,
    /// out-of-range endpoints, and repeated pairs.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut a = Self::zero(n)?;
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!(
                    "edge ({u},{v}) out of range for n={n}"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at node {u}")));
            }
            if a.entries[[u, v]] == 1 {
                return Err(Error::invalid(format!("duplicate edge ({u},{v})")));
            }
            a.entries[[u, v]] = 1;
            a.entries[[v, u]] = 1;
        }
        Ok(a)
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<u8> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[[i, j]]
    }

    /// Edges as `(u, v)` pairs with `u < v`, ordered lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if self.entries[[u, v]] == 1 {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        let total: usize = self.entries.iter().map(|&e| e as usize).sum();
        total / 2
    }

    /// Casts the 0/1 entries into a floating-point matrix.
    pub fn to_dense<S: Scalar>(&self) -> Array2<S> {
        self.entries.mapv(|e| S::of(e as f64))
    }

    /// Relabels nodes: node `i` becomes `perm[i]`. `perm` must be a
    /// permutation of `0..n`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        if perm.len() != n {
            return Err(Error::invalid("permutation length differs from node count"));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::invalid("not a permutation of 0..n"));
            }
            seen[p] = true;
        }
        let mut entries = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                entries[[perm[i], perm[j]]] = self.entries[[i, j]];
            }
        }
        Ok(AdjacencyMatrix { entries })
    }
}

/// Sizes of the complete blocks making up an ideal graph.
///
/// Sizes are nondecreasing and each at least 2; nodes are laid out
/// contiguously, block 0 first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSpec {
    sizes: Vec<usize>,
}

impl BlockSpec {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::invalid("block spec needs at least one block"));
        }
        if let Some(&c) = sizes.iter().find(|&&c| c < 2) {
            return Err(Error::invalid(format!("block size {c} is below 2")));
        }
        if sizes.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::invalid("block sizes must be nondecreasing"));
        }
        Ok(BlockSpec { sizes })
    }

    /// Like [`BlockSpec::new`] but sorts the sizes first.
    pub fn from_unsorted(mut sizes: Vec<usize>) -> Result<Self> {
        sizes.sort_unstable();
        Self::new(sizes)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Ground-truth labels: node ids within block `i` map to label `i`.
    pub fn partition(&self) -> Partition {
        let mut labels = Vec::with_capacity(self.n());
        for (i, &c) in self.sizes.iter().enumerate() {
            labels.extend(std::iter::repeat(i).take(c));
        }
        Partition {
            labels,
            k: self.k(),
        }
    }

    /// Half-open node-id range of block `i`.
    pub fn block_range(&self, i: usize) -> std::ops::Range<usize> {
        let start: usize = self.sizes[..i].iter().sum();
        start..start + self.sizes[i]
    }
}

/// Node degrees of a graph (row sums of the adjacency matrix).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Degrees(Vec<usize>);

impl Degrees {
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn min(&self) -> usize {
        self.0.iter().copied().min().unwrap_or(0)
    }
}

/// The three Laplacian-style matrices used by the spectral baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaplacianKind {
    /// `D - A`.
    Unnormalized,
    /// The degree-normalized adjacency `D^{-1/2} A D^{-1/2}`. Its
    /// informative eigenvectors sit at the top of the spectrum.
    Symmetric,
    /// `I - D^{-1} A`. Not symmetric unless the graph is regular.
    RandomWalk,
}

/// Cluster labels for every node.
///
/// Labels live in `0..k`. Constructors derived from graph structure
/// (components, ground truth) use every label; labelings read off an
/// indicator matrix may skip a label when a column never wins the argmax,
/// and scoring pads for that.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<usize>,
    k: usize,
}

impl Partition {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::invalid("partition needs at least one node"));
        }
        if k == 0 {
            return Err(Error::invalid("partition needs at least one cluster"));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= k) {
            return Err(Error::invalid(format!(
                "label {bad} out of range for k={k}"
            )));
        }
        Ok(Partition { labels, k })
    }

    /// Infers `k` as one past the largest label.
    pub fn from_labels(labels: Vec<usize>) -> Result<Self> {
        let k = labels.iter().copied().max().map(|m| m + 1).unwrap_or(0);
        Self::new(labels, k.max(1))
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Relabels nodes by `perm` (node `i` becomes `perm[i]`); cluster ids
    /// are untouched.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.labels.len() {
            return Err(Error::invalid("permutation length differs from node count"));
        }
        let mut labels = vec![0; self.labels.len()];
        for (i, &p) in perm.iter().enumerate() {
            if p >= labels.len() {
                return Err(Error::invalid("not a permutation of 0..n"));
            }
            labels[p] = self.labels[i];
        }
        Partition::new(labels, self.k)
    }
}

/// Block-diagonal adjacency matrix of a disjoint union of complete graphs.
pub fn generate_ideal(spec: &BlockSpec) -> AdjacencyMatrix {
    let n = spec.n();
    let mut entries = Array2::zeros((n, n));
    for i in 0..spec.k() {
        let range = spec.block_range(i);
        for u in range.clone() {
            for v in range.clone() {
                if u != v {
                    entries[[u, v]] = 1;
                }
            }
        }
    }
    AdjacencyMatrix { entries }
}

/// Erdős–Rényi graph: each pair `i < j` gets an edge independently with
/// probability `p`. Deterministic for a fixed seed; entries are drawn in
/// row-major upper-triangle order.
pub fn generate_er(n: usize, p: f64, seed: u64) -> Result<AdjacencyMatrix> {
    if n == 0 {
        return Err(Error::invalid("graph needs at least one node"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("probability {p} outside [0,1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Array2::zeros((n, n));
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen::<f64>() < p {
                entries[[i, j]] = 1;
                entries[[j, i]] = 1;
            }
        }
    }
    Ok(AdjacencyMatrix { entries })
}

/// Entrywise XOR of two graphs: an edge of `b` toggles the corresponding
/// entry of `a` (present becomes absent and vice versa).
pub fn perturb(a: &AdjacencyMatrix, b: &AdjacencyMatrix) -> Result<AdjacencyMatrix> {
    if a.n() != b.n() {
        return Err(Error::invalid(format!(
            "size mismatch: {} vs {}",
            a.n(),
            b.n()
        )));
    }
    let entries = ndarray::Zip::from(&a.entries)
        .and(&b.entries)
        .map_collect(|&x, &y| x ^ y);
    Ok(AdjacencyMatrix { entries })
}

/// Row sums of the adjacency matrix.
pub fn degrees(a: &AdjacencyMatrix) -> Degrees {
    let d = a
        .entries
        .rows()
        .into_iter()
        .map(|row| row.iter().map(|&e| e as usize).sum())
        .collect();
    Degrees(d)
}

/// Builds the requested Laplacian-style matrix.
///
/// `Symmetric` and `RandomWalk` divide by node degrees and therefore
/// reject graphs with isolated nodes; `Unnormalized` accepts any graph.
pub fn laplacian<S: Scalar>(a: &AdjacencyMatrix, kind: LaplacianKind) -> Result<Array2<S>> {
    let n = a.n();
    let d = degrees(a);
    if matches!(kind, LaplacianKind::Symmetric | LaplacianKind::RandomWalk) {
        if let Some(node) = d.as_slice().iter().position(|&di| di == 0) {
            return Err(Error::IsolatedNode { node });
        }
    }
    let mut out = Array2::<S>::zeros((n, n));
    match kind {
        LaplacianKind::Unnormalized => {
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        out[[i, j]] = S::of(d.get(i) as f64);
                    } else {
                        out[[i, j]] = -S::of(a.get(i, j) as f64);
                    }
                }
            }
        }
        LaplacianKind::Symmetric => {
            for i in 0..n {
                for j in 0..n {
                    let scale = 1.0 / ((d.get(i) as f64) * (d.get(j) as f64)).sqrt();
                    out[[i, j]] = S::of(a.get(i, j) as f64 * scale);
                }
            }
        }
        LaplacianKind::RandomWalk => {
            for i in 0..n {
                for j in 0..n {
                    let off = -(a.get(i, j) as f64) / (d.get(i) as f64);
                    out[[i, j]] = S::of(if i == j { 1.0 + off } else { off });
                }
            }
        }
    }
    Ok(out)
}

/// Exact connected components by breadth-first search. Components are
/// numbered by first occurrence: the component of node 0 gets label 0.
pub fn connected_components(a: &AdjacencyMatrix) -> Partition {
    let n = a.n();
    let mut labels = vec![usize::MAX; n];
    let mut next = 0;
    let mut queue = std::collections::VecDeque::new();
    for start in 0..n {
        if labels[start] != usize::MAX {
            continue;
        }
        labels[start] = next;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if a.get(u, v) == 1 && labels[v] == usize::MAX {
                    labels[v] = next;
                    queue.push_back(v);
                }
            }
        }
        next += 1;
    }
    Partition { labels, k: next }
}

/// Uniformly random permutation of `0..n`, deterministic for a fixed seed.
pub fn random_permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    perm
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn ideal(sizes: &[usize]) -> AdjacencyMatrix {
        generate_ideal(&BlockSpec::new(sizes.to_vec()).unwrap())
    }

    #[test]
    fn ideal_two_blocks() {
        let a = ideal(&[2, 3]);
        let expected = array![
            [0u8, 1, 0, 0, 0],
            [1, 0, 0, 0, 0],
            [0, 0, 0, 1, 1],
            [0, 0, 1, 0, 1],
            [0, 0, 1, 1, 0],
        ];
        assert_eq!(a.entries(), &expected);
    }

    #[test]
    fn ideal_single_edge() {
        assert_eq!(ideal(&[2]).entries(), &array![[0u8, 1], [1, 0]]);
    }

    #[test]
    fn ideal_three_pairs_edge_count() {
        assert_eq!(ideal(&[2, 2, 2]).edge_count(), 3);
    }

    #[test]
    fn block_spec_rejects_small_and_unsorted() {
        assert!(BlockSpec::new(vec![1, 3]).is_err());
        assert!(BlockSpec::new(vec![3, 2]).is_err());
        assert!(BlockSpec::new(vec![]).is_err());
        assert_eq!(
            BlockSpec::from_unsorted(vec![3, 2]).unwrap().sizes(),
            &[2, 3]
        );
    }

    #[test]
    fn er_extreme_probabilities() {
        let zero = generate_er(4, 0.0, 7).unwrap();
        assert_eq!(zero.edge_count(), 0);
        let full = generate_er(4, 1.0, 7).unwrap();
        assert_eq!(full.edge_count(), 6);
        assert!(generate_er(4, 1.5, 7).is_err());
        assert!(generate_er(4, -0.1, 7).is_err());
    }

    #[test]
    fn er_density_matches_probability() {
        // Monte Carlo estimate of the edge density over many seeds; the
        // CLT puts the mean well within 0.01 of p.
        let n = 100;
        let pairs = (n * (n - 1) / 2) as f64;
        let mut total = 0.0;
        for seed in 0..1000u64 {
            let g = generate_er(n, 0.3, seed).unwrap();
            total += g.edge_count() as f64 / pairs;
        }
        let mean = total / 1000.0;
        assert!((mean - 0.3).abs() <= 0.01, "mean density {mean}");
    }

    #[test]
    fn er_is_seed_deterministic() {
        let a = generate_er(30, 0.4, 99).unwrap();
        let b = generate_er(30, 0.4, 99).unwrap();
        assert_eq!(a, b);
        let c = generate_er(30, 0.4, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn perturb_follows_xor_table() {
        // Entries: (1,1)->0, (0,0)->0, (1,0)->1, (0,1)->1.
        let a = AdjacencyMatrix::from_edges(3, &[(0, 1)]).unwrap();
        let b = AdjacencyMatrix::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let t = perturb(&a, &b).unwrap();
        assert_eq!(t.get(0, 1), 0);
        assert_eq!(t.get(0, 2), 0);
        assert_eq!(t.get(1, 2), 1);
    }

    #[test]
    fn perturb_identity_and_complement() {
        let a = ideal(&[2, 3]);
        let zero = AdjacencyMatrix::zero(5).unwrap();
        assert_eq!(perturb(&a, &zero).unwrap(), a);
        let full = generate_er(5, 1.0, 0).unwrap();
        let comp = perturb(&a, &full).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                if i != j {
                    assert_eq!(comp.get(i, j), 1 - a.get(i, j));
                }
            }
        }
        let tiny = AdjacencyMatrix::zero(3).unwrap();
        assert!(perturb(&a, &tiny).is_err());
    }

    #[test]
    fn degrees_examples() {
        assert_eq!(degrees(&ideal(&[2, 3])).as_slice(), &[1, 1, 2, 2, 2]);
        assert_eq!(degrees(&AdjacencyMatrix::zero(3).unwrap()).as_slice(), &[0, 0, 0]);
        assert_eq!(degrees(&ideal(&[4])).as_slice(), &[3, 3, 3, 3]);
    }

    #[test]
    fn laplacian_path_unnormalized() {
        let p3 = AdjacencyMatrix::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let l: Array2<f64> = laplacian(&p3, LaplacianKind::Unnormalized).unwrap();
        let expected = array![[1.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 1.0]];
        assert_eq!(l, expected);
    }

    #[test]
    fn laplacian_k2_normalized_kinds() {
        let k2 = ideal(&[2]);
        let rw: Array2<f64> = laplacian(&k2, LaplacianKind::RandomWalk).unwrap();
        assert_eq!(rw, array![[1.0, -1.0], [-1.0, 1.0]]);
        let sym: Array2<f64> = laplacian(&k2, LaplacianKind::Symmetric).unwrap();
        assert_eq!(sym, array![[0.0, 1.0], [1.0, 0.0]]);
    }

    #[test]
    fn laplacian_rejects_isolated_for_normalized() {
        let g = AdjacencyMatrix::from_edges(3, &[(0, 1)]).unwrap();
        assert!(matches!(
            laplacian::<f64>(&g, LaplacianKind::Symmetric),
            Err(Error::IsolatedNode { node: 2 })
        ));
        assert!(matches!(
            laplacian::<f64>(&g, LaplacianKind::RandomWalk),
            Err(Error::IsolatedNode { node: 2 })
        ));
        assert!(laplacian::<f64>(&g, LaplacianKind::Unnormalized).is_ok());
    }

    #[test]
    fn unnormalized_rows_sum_to_zero() {
        let g = generate_er(20, 0.3, 5).unwrap();
        let l: Array2<f64> = laplacian(&g, LaplacianKind::Unnormalized).unwrap();
        for row in l.rows() {
            assert!(row.sum().abs() < 1e-12);
        }
    }

    #[test]
    fn components_examples() {
        let p = connected_components(&ideal(&[2, 3]));
        assert_eq!(p.labels(), &[0, 0, 1, 1, 1]);
        assert_eq!(p.k(), 2);

        let singletons = connected_components(&AdjacencyMatrix::zero(3).unwrap());
        assert_eq!(singletons.labels(), &[0, 1, 2]);

        let one = connected_components(&ideal(&[4]));
        assert_eq!(one.labels(), &[0, 0, 0, 0]);
        assert_eq!(one.k(), 1);
    }

    #[test]
    fn components_match_block_spec() {
        let spec = BlockSpec::new(vec![2, 2, 5]).unwrap();
        let p = connected_components(&generate_ideal(&spec));
        assert_eq!(p.labels(), spec.partition().labels());
        assert_eq!(p.k(), 3);
    }

    #[test]
    fn adjacency_rejects_malformed() {
        assert!(AdjacencyMatrix::from_entries(array![[0u8, 1], [0, 0]]).is_err());
        assert!(AdjacencyMatrix::from_entries(array![[1u8]]).is_err());
        assert!(AdjacencyMatrix::from_entries(array![[0u8, 2], [2, 0]]).is_err());
        assert!(AdjacencyMatrix::from_edges(3, &[(0, 0)]).is_err());
        assert!(AdjacencyMatrix::from_edges(3, &[(0, 3)]).is_err());
        assert!(AdjacencyMatrix::from_edges(3, &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn permuted_preserves_edges() {
        let a = ideal(&[2, 3]);
        let perm = vec![4, 3, 2, 1, 0];
        let b = a.permuted(&perm).unwrap();
        assert_eq!(b.edge_count(), a.edge_count());
        for (u, v) in a.edges() {
            assert_eq!(b.get(perm[u], perm[v]), 1);
        }
        assert!(a.permuted(&[0, 0, 1, 2, 3]).is_err());
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![0, 2], 2).is_err());
        assert!(Partition::new(vec![], 1).is_err());
        let p = Partition::from_labels(vec![1, 0, 1]).unwrap();
        assert_eq!(p.k(), 2);
    }

    #[test]
    fn random_permutation_is_valid_and_seeded() {
        let p = random_permutation(10, 3);
        let mut sorted = p.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..10).collect::<Vec<_>>());
        assert_eq!(p, random_permutation(10, 3));
    }
}
