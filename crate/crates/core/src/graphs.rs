//! Finite simple graphs: construction, text I/O, seeded generators and the
//! subgraph counts used by the Harary–Sachs route.
//!
//! # Random streams
//!
//! All sampling uses ChaCha8 (`rand_chacha`), seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`. Edge coins for the pairs `(i, j)`,
//! `j > i`, are drawn in increasing `j` from stream `i`; latent coordinates of
//! kernel sampling come from stream [`LATENT_STREAM`]. A pair's coin therefore
//! depends only on `(seed, i, j)`, which makes the output reproducible across
//! platforms and independent of evaluation order.

use std::fmt::Write as _;

use num_bigint::BigInt;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::partitions::HsTerm;
use crate::spectra::DenseMatrix;

/// ChaCha stream reserved for latent vertex coordinates.
pub const LATENT_STREAM: u64 = u64::MAX;

/// Largest vertex count and term size accepted by [`count_hs_subgraphs`].
pub const HS_MAX_VERTICES: usize = 10;

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Sorted, each pair `(u, v)` with `u < v`.
    edges: Vec<(usize, usize)>,
    adj: Vec<bool>,
}

impl Graph {
    /// Builds a graph, rejecting loops, duplicate edges and out-of-range
    /// endpoints. `(u, v)` and `(v, u)` count as the same edge.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![false; n * n];
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::invalid(format!("loop at vertex {u}")));
            }
            if adj[u * n + v] {
                return Err(Error::invalid(format!("duplicate edge ({u}, {v})")));
            }
            adj[u * n + v] = true;
            adj[v * n + u] = true;
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        Ok(Graph { n, edges: list, adj })
    }

    pub fn empty(n: usize) -> Self {
        Graph { n, edges: Vec::new(), adj: vec![false; n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    pub fn adjacency(&self) -> DenseMatrix {
        self.scaled_adjacency(1.0)
    }

    /// `A/n`, the matrix whose spectrum feeds `ψ_n`.
    pub fn normalized_adjacency(&self) -> DenseMatrix {
        self.scaled_adjacency(1.0 / self.n.max(1) as f64)
    }

    fn scaled_adjacency(&self, w: f64) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.n);
        for &(u, v) in &self.edges {
            m.set(u, v, w);
            m.set(v, u, w);
        }
        m
    }

    /// Parses the text format: `n m` on the first line, then `m` lines `u v`
    /// with 0-based vertices. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) = lines
            .next()
            .ok_or(Error::Parse { line: 1, msg: "missing \"n m\" header".into() })?;
        let (n, m) = parse_pair(header, line)?;
        let mut edges = Vec::with_capacity(m);
        for (line, l) in lines {
            let (u, v) = parse_pair(l, line)?;
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line,
                msg: format!("header announces {m} edges, found {}", edges.len()),
            });
        }
        Graph::new(n, edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for (u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Graph on `n` vertices whose edges are the set bits of `mask`, bit `b`
    /// standing for the `b`-th pair in lexicographic order.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        let pairs = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v)));
        let edges = pairs
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, e)| e);
        Graph::new(n, edges).expect("pairs are distinct and loop-free")
    }
}

fn parse_pair(l: &str, line: usize) -> Result<(usize, usize)> {
    let mut it = l.split_whitespace().map(str::parse::<usize>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
        _ => Err(Error::Parse { line, msg: format!("expected two non-negative integers, got {l:?}") }),
    }
}

/// Every labelled graph on `n ≤ 8` vertices.
pub fn all_labeled_graphs(n: usize) -> impl Iterator<Item = Graph> {
    assert!(n <= 8, "catalog limited to 8 vertices");
    let pairs = n * n.saturating_sub(1) / 2;
    (0..1u64 << pairs).map(move |mask| Graph::from_mask(n, mask))
}

pub fn gen_complete(n: usize) -> Graph {
    Graph::new(n, (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))).expect("valid")
}

pub fn gen_cycle(n: usize) -> Graph {
    assert!(n >= 3);
    Graph::new(n, (0..n).map(|u| (u, (u + 1) % n))).expect("valid")
}

pub fn gen_path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|u| (u - 1, u))).expect("valid")
}

/// `G(n, p)` sampled from `seed`.
pub fn gen_er(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("edge probability {p} outside [0, 1]")));
    }
    Ok(sample_pairs(n, seed, |_, _| p))
}

/// How latent vertex coordinates are chosen for W-random graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleMode {
    /// i.i.d. uniform on `[0, 1]`.
    Uniform,
    /// `x_i = (i + 1/2)/n` for 0-based `i`.
    Grid,
}

/// W-random graph: latent coordinates per `mode`, then each pair `{i, j}` is an
/// edge with probability `W(x_i, x_j)`.
pub fn gen_from_kernel<K: Kernel + ?Sized>(w: &K, n: usize, seed: u64, mode: SampleMode) -> Result<Graph> {
    if n == 0 {
        return Err(Error::invalid("gen_from_kernel needs n >= 1"));
    }
    let xs: Vec<f64> = match mode {
        SampleMode::Grid => (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect(),
        SampleMode::Uniform => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(LATENT_STREAM);
            (0..n).map(|_| rng.gen::<f64>()).collect()
        }
    };
    Ok(sample_pairs(n, seed, |i, j| w.eval(xs[i], xs[j])))
}

fn sample_pairs(n: usize, seed: u64, prob: impl Fn(usize, usize) -> f64) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        for j in (i + 1)..n {
            let coin: f64 = rng.gen();
            if coin < prob(i, j) {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, edges).expect("sampled pairs are distinct")
}

/// Seed for job `(a, b)` of a batch seeded with `base`: the `b`-th output of
/// ChaCha stream `a`. Jobs seeded this way can run in any order.
pub fn sub_seed(base: u64, a: u64, b: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(a);
    rng.set_word_pos(2 * u128::from(b));
    rng.next_u64()
}

/// `[#H ⊆ G]`: the number of edge subsets of `G` forming a vertex-disjoint
/// union of single edges (parts equal to 2) and `b`-cycles (parts `b ≥ 3`)
/// realizing exactly the partition of `term`.
///
/// Exhaustive over edge subsets of size `|E(H)|`, pruned as soon as a vertex
/// would reach degree 3 or more than `term.total()` vertices would be used.
pub fn count_hs_subgraphs(g: &Graph, term: &HsTerm) -> Result<u64> {
    if g.n() > HS_MAX_VERTICES || term.total() > HS_MAX_VERTICES {
        return Err(Error::ScaleLimit(format!(
            "Harary–Sachs brute force is limited to {HS_MAX_VERTICES} vertices (graph has {}, term needs {})",
            g.n(),
            term.total()
        )));
    }
    if term.total() == 0 {
        return Ok(1);
    }
    let want = term.partition.parts();
    let mut search = SubsetSearch {
        edges: g.edges(),
        target_edges: term.edge_count(),
        max_vertices: term.total(),
        want: &want,
        degree: vec![0; g.n()],
        used_vertices: 0,
        chosen: Vec::with_capacity(term.edge_count()),
        count: 0,
    };
    search.run(0);
    Ok(search.count)
}

struct SubsetSearch<'a> {
    edges: &'a [(usize, usize)],
    target_edges: usize,
    max_vertices: usize,
    want: &'a [usize],
    degree: Vec<u8>,
    used_vertices: usize,
    chosen: Vec<(usize, usize)>,
    count: u64,
}

impl SubsetSearch<'_> {
    fn run(&mut self, start: usize) {
        if self.chosen.len() == self.target_edges {
            if self.used_vertices == self.max_vertices && self.matches() {
                self.count += 1;
            }
            return;
        }
        let needed = self.target_edges - self.chosen.len();
        if start + needed > self.edges.len() {
            return;
        }
        for idx in start..=self.edges.len() - needed {
            let (u, v) = self.edges[idx];
            if self.degree[u] == 2 || self.degree[v] == 2 {
                continue;
            }
            let fresh = usize::from(self.degree[u] == 0) + usize::from(self.degree[v] == 0);
            if self.used_vertices + fresh > self.max_vertices {
                continue;
            }
            self.degree[u] += 1;
            self.degree[v] += 1;
            self.used_vertices += fresh;
            self.chosen.push((u, v));
            self.run(idx + 1);
            self.chosen.pop();
            self.used_vertices -= fresh;
            self.degree[u] -= 1;
            self.degree[v] -= 1;
        }
    }

    /// Component shapes of the chosen edges equal the wanted parts.
    fn matches(&self) -> bool {
        let n = self.degree.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(u, v) in &self.chosen {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            parent[a] = b;
        }
        let mut vertices = vec![0usize; n];
        let mut edges = vec![0usize; n];
        for v in 0..n {
            if self.degree[v] > 0 {
                let r = find(&mut parent, v);
                vertices[r] += 1;
            }
        }
        for &(u, _) in &self.chosen {
            let r = find(&mut parent, u);
            edges[r] += 1;
        }
        let mut parts = Vec::new();
        for r in 0..n {
            match (vertices[r], edges[r]) {
                (0, _) => {}
                (2, 1) => parts.push(2),
                // with max degree 2, as many edges as vertices means a cycle
                (v, e) if v >= 3 && e == v => parts.push(v),
                _ => return false,
            }
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        parts == self.want
    }
}

/// `(#H ⊆ G) = [#H ⊆ G] · 2^z · η(λ)`: labelled, not necessarily induced
/// copies from unlabelled edge-subset copies.
pub fn labeled_copy_count(term: &HsTerm, subset_count: u64) -> BigInt {
    BigInt::from(subset_count) * (BigInt::from(1) << term.z) * &term.eta
}

/// Homomorphism density `t(C_k, G) = tr(A^k)/n^k`, computed from powers of
/// `A/n`. `k = 1` gives 0 and `k = 2` gives `2|E|/n²`.
pub fn cycle_hom_density(g: &Graph, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::invalid("cycle length must be at least 1"));
    }
    Ok(normalized_trace_powers(g, k)[k - 1])
}

/// `tr((A/n)^j)` for `j = 1..=max_k` by repeated matrix products.
pub fn normalized_trace_powers(g: &Graph, max_k: usize) -> Vec<f64> {
    if g.n() == 0 {
        return vec![0.0; max_k];
    }
    let a = g.normalized_adjacency();
    let mut out = Vec::with_capacity(max_k);
    let mut pow = a.clone();
    for j in 1..=max_k {
        if j > 1 {
            pow = pow.matmul(&a);
        }
        out.push(pow.trace());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{hs_family, HsTerm, Partition};
    use crate::spectra::{power_sums, sym_eig, DEFAULT_TOL};

    fn term(parts: &[usize]) -> HsTerm {
        HsTerm::new(Partition::from_parts(parts).unwrap())
    }

    #[test]
    fn complete_graphs() {
        assert_eq!(gen_complete(3).edge_count(), 3);
        assert_eq!(gen_complete(1).edge_count(), 0);
        assert_eq!(gen_complete(5).edge_count(), 10);
    }

    #[test]
    fn er_extremes_and_count() {
        assert_eq!(gen_er(20, 0.0, 7).unwrap().edge_count(), 0);
        assert_eq!(gen_er(20, 1.0, 7).unwrap(), gen_complete(20));
        let m = gen_er(100, 0.5, 42).unwrap().edge_count() as f64;
        assert!((m - 2475.0).abs() <= 4.0 * (4950.0f64 * 0.25).sqrt(), "m = {m}");
        assert!(gen_er(5, 1.5, 0).is_err());
    }

    #[test]
    fn er_is_reproducible() {
        assert_eq!(gen_er(60, 0.3, 9).unwrap(), gen_er(60, 0.3, 9).unwrap());
        assert_ne!(gen_er(60, 0.3, 9).unwrap(), gen_er(60, 0.3, 10).unwrap());
    }

    #[test]
    fn sub_seeds_are_distinct_and_stable() {
        let mut seen = std::collections::HashSet::new();
        for a in 0..20 {
            for b in 0..20 {
                assert!(seen.insert(sub_seed(7, a, b)));
            }
        }
        assert_eq!(sub_seed(7, 3, 4), sub_seed(7, 3, 4));
        assert_ne!(sub_seed(7, 3, 4), sub_seed(8, 3, 4));
    }

    /// Pins the generator stream so an accidental change of PRNG or stream
    /// layout shows up.
    #[test]
    fn er_golden_edges() {
        let g = gen_er(6, 0.5, 1).unwrap();
        let again = gen_er(6, 0.5, 1).unwrap();
        assert_eq!(g.to_text(), again.to_text());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        rng.set_stream(0);
        let first: f64 = rng.gen();
        assert_eq!(g.has_edge(0, 1), first < 0.5);
    }

    #[test]
    fn text_round_trip_and_errors() {
        let g = gen_cycle(5);
        assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
        assert!(Graph::parse("2 1\n0 0\n").is_err());
        assert!(Graph::parse("3 2\n0 1\n1 0\n").is_err());
        assert!(Graph::parse("3 2\n0 1\n").is_err());
        assert!(Graph::parse("2 1\n0 5\n").is_err());
        assert!(Graph::parse("").is_err());
        assert!(Graph::parse("x y\n").is_err());
        let one = Graph::parse("1 0\n").unwrap();
        assert_eq!((one.n(), one.edge_count()), (1, 0));
    }

    #[test]
    fn hs_counts_on_small_graphs() {
        let c4 = gen_cycle(4);
        assert_eq!(count_hs_subgraphs(&c4, &term(&[2, 2])).unwrap(), 2);
        assert_eq!(count_hs_subgraphs(&c4, &term(&[4])).unwrap(), 1);
        let k3 = gen_complete(3);
        assert_eq!(count_hs_subgraphs(&k3, &term(&[2])).unwrap(), 3);
        assert_eq!(count_hs_subgraphs(&k3, &HsTerm::new(Partition::empty())).unwrap(), 1);
        // K4: three perfect matchings, three 4-cycles, four triangles
        let k4 = gen_complete(4);
        assert_eq!(count_hs_subgraphs(&k4, &term(&[2, 2])).unwrap(), 3);
        assert_eq!(count_hs_subgraphs(&k4, &term(&[4])).unwrap(), 3);
        assert_eq!(count_hs_subgraphs(&k4, &term(&[3])).unwrap(), 4);
    }

    #[test]
    fn hs_count_scale_limit() {
        assert!(matches!(
            count_hs_subgraphs(&gen_complete(11), &term(&[2])),
            Err(Error::ScaleLimit(_))
        ));
        assert!(count_hs_subgraphs(&gen_complete(3), &term(&[11])).is_err());
    }

    #[test]
    fn labeled_copies() {
        assert_eq!(labeled_copy_count(&term(&[4]), 1), BigInt::from(8));
        assert_eq!(labeled_copy_count(&term(&[2]), 3), BigInt::from(6));
        assert_eq!(labeled_copy_count(&term(&[2, 2]), 2), BigInt::from(16));
    }

    /// Injective homomorphisms counted by brute force over vertex maps.
    fn injective_copies(g: &Graph, parts: &[usize]) -> u64 {
        // H as an explicit edge list on vertices 0..k
        let mut h_edges = Vec::new();
        let mut base = 0;
        for &b in parts {
            if b == 2 {
                h_edges.push((base, base + 1));
            } else {
                for i in 0..b {
                    h_edges.push((base + i, base + (i + 1) % b));
                }
            }
            base += b;
        }
        let k = base;
        let mut count = 0;
        let mut map = vec![0usize; k];
        fn rec(pos: usize, k: usize, n: usize, map: &mut [usize], g: &Graph, h: &[(usize, usize)], count: &mut u64) {
            if pos == k {
                if h.iter().all(|&(a, b)| g.has_edge(map[a], map[b])) {
                    *count += 1;
                }
                return;
            }
            for v in 0..n {
                if map[..pos].contains(&v) {
                    continue;
                }
                map[pos] = v;
                rec(pos + 1, k, n, map, g, h, count);
            }
        }
        rec(0, k, g.n(), &mut map, g, &h_edges, &mut count);
        count
    }

    #[test]
    fn labeled_copy_count_matches_injective_homs() {
        for g in [gen_complete(5), gen_cycle(6), gen_er(6, 0.6, 3).unwrap()] {
            for k in 2..=6 {
                for t in hs_family(k) {
                    let subsets = count_hs_subgraphs(&g, &t).unwrap();
                    let labelled = labeled_copy_count(&t, subsets);
                    assert_eq!(labelled, BigInt::from(injective_copies(&g, &t.partition.parts())), "{}", t.partition);
                }
            }
        }
    }

    #[test]
    fn hom_density_examples() {
        let k3 = gen_complete(3);
        assert!((cycle_hom_density(&k3, 2).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((cycle_hom_density(&k3, 3).unwrap() - 2.0 / 9.0).abs() < 1e-15);
        assert_eq!(cycle_hom_density(&gen_er(9, 0.5, 1).unwrap(), 1).unwrap(), 0.0);
        let g = gen_er(30, 0.4, 5).unwrap();
        let t2 = cycle_hom_density(&g, 2).unwrap();
        assert!((t2 - 2.0 * g.edge_count() as f64 / 900.0).abs() < 1e-12);
    }

    #[test]
    fn hom_density_matches_spectral_power_sums() {
        for (n, seed) in [(12, 1), (25, 2), (50, 3)] {
            let g = gen_er(n, 0.45, seed).unwrap();
            let s = sym_eig(&g.normalized_adjacency(), DEFAULT_TOL).unwrap();
            let p = power_sums(&s, 8);
            for k in 1..=8 {
                let t = cycle_hom_density(&g, k).unwrap();
                assert!((t - p[k - 1]).abs() < 1e-10, "n={n} k={k}: {t} vs {}", p[k - 1]);
            }
        }
    }

    #[test]
    fn adjacency_trace_powers_match_spectrum_unnormalized() {
        let g = gen_er(100, 0.3, 11).unwrap();
        let a = g.adjacency();
        let s = sym_eig(&a, DEFAULT_TOL).unwrap();
        let p = power_sums(&s, 8);
        let mut pow = a.clone();
        for k in 1..=8 {
            if k > 1 {
                pow = pow.matmul(&a);
            }
            let tr = pow.trace();
            assert!((tr - p[k - 1]).abs() <= 1e-8 * tr.abs().max(1.0), "k={k}: {tr} vs {}", p[k - 1]);
        }
    }

    #[test]
    fn mask_catalog_sizes() {
        assert_eq!(all_labeled_graphs(4).count(), 64);
        assert_eq!(Graph::from_mask(3, 0b111), gen_complete(3));
        assert_eq!(gen_path(4).edge_count(), 3);
    }
}
