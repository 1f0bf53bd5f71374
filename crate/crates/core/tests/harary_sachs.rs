//! The subgraph-count route against the spectral route and against a
//! characteristic polynomial expanded term by term over permutations.

use graphon_psi::charseries::{psi_from_graph, Route};
use graphon_psi::graphs::{all_labeled_graphs, gen_cycle, gen_er, Graph};

/// Coefficients of `det(xI − A)`, lowest degree first, by the Leibniz formula
/// with polynomial entries. Exact in integers.
fn char_poly_leibniz(g: &Graph) -> Vec<i64> {
    let n = g.n();
    let mut total = vec![0i64; n + 1];
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        // product of entries (x·δ_ij − a_ij) along the permutation
        let mut poly = vec![1i64];
        let mut vanished = false;
        for (i, &j) in perm.iter().enumerate() {
            if i == j {
                let mut next = vec![0i64; poly.len() + 1];
                for (d, c) in poly.iter().enumerate() {
                    next[d + 1] += c;
                }
                poly = next;
            } else if g.has_edge(i, j) {
                poly.iter_mut().for_each(|c| *c = -*c);
            } else {
                vanished = true;
                break;
            }
        }
        if !vanished {
            let sign = permutation_sign(&perm);
            for (d, c) in poly.iter().enumerate() {
                total[d] += sign * c;
            }
        }
        if !next_permutation(&mut perm) {
            return total;
        }
    }
}

fn permutation_sign(perm: &[usize]) -> i64 {
    let inversions = (0..perm.len())
        .flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| perm[i] > perm[j])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// `c_k = [x^{n−k}] det(xI − A) / n^k`.
fn psi_from_char_poly(g: &Graph, k: usize) -> Vec<f64> {
    let n = g.n();
    let phi = char_poly_leibniz(g);
    (0..=k)
        .map(|j| if j <= n { phi[n - j] as f64 / (n as f64).powi(j as i32) } else { 0.0 })
        .collect()
}

fn assert_close(a: &[f64], b: &[f64], tol: f64, what: &str) {
    for (k, (x, y)) in a.iter().zip(b).enumerate() {
        assert!((x - y).abs() <= tol, "{what}: c_{k} {x} vs {y}");
    }
}

#[test]
fn all_graphs_up_to_five_vertices_match_leibniz() {
    for n in 1..=5 {
        for g in all_labeled_graphs(n) {
            let hs = psi_from_graph(&g, 6, Route::HararySachs).unwrap();
            let oracle = psi_from_char_poly(&g, 6);
            assert_close(hs.coeffs(), &oracle, 1e-12, &g.to_text());
        }
    }
}

#[test]
fn six_and_more_vertices_match_leibniz_and_eigen() {
    let mut graphs: Vec<Graph> = (0..40).map(|s| gen_er(6, 0.5, s).unwrap()).collect();
    graphs.extend((0..10).map(|s| gen_er(7, 0.6, 100 + s).unwrap()));
    graphs.push(gen_cycle(6));
    graphs.push(gen_cycle(8));
    for g in &graphs {
        let hs = psi_from_graph(g, 8, Route::HararySachs).unwrap();
        assert_close(hs.coeffs(), &psi_from_char_poly(g, 8), 1e-12, "leibniz");
        let eig = psi_from_graph(g, 8, Route::Eigen).unwrap();
        assert_close(hs.coeffs(), eig.coeffs(), 1e-9, "eigen");
    }
}

#[test]
fn ten_vertex_limit() {
    let g = gen_er(10, 0.5, 3).unwrap();
    let hs = psi_from_graph(&g, 8, Route::HararySachs).unwrap();
    let eig = psi_from_graph(&g, 8, Route::Eigen).unwrap();
    assert_close(hs.coeffs(), eig.coeffs(), 1e-9, "n=10");
}
