//! Greedy vertex coloring and bipartite multigraph edge coloring.

use crate::error::{Error, Result};

/// Greedy proper coloring: vertices are visited in index order and each
/// takes the smallest color (0-based) unused by its already-colored
/// neighbours. Uses at most `max degree + 1` colors.
pub fn greedy_vertex_coloring(adjacency: &[Vec<usize>]) -> Vec<usize> {
    let n = adjacency.len();
    let mut colors: Vec<Option<usize>> = vec![None; n];
    let mut used = Vec::new();
    for v in 0..n {
        used.clear();
        used.resize(adjacency[v].len() + 1, false);
        for &u in &adjacency[v] {
            if let Some(c) = colors[u] {
                if c < used.len() {
                    used[c] = true;
                }
            }
        }
        colors[v] = Some(used.iter().position(|&b| !b).expect("a free color exists"));
    }
    colors.into_iter().map(|c| c.expect("all vertices colored")).collect()
}

/// Number of colors used by a coloring (max + 1, or 0 when empty).
pub fn color_count(colors: &[usize]) -> usize {
    colors.iter().map(|c| c + 1).max().unwrap_or(0)
}

/// Edge coloring of a bipartite multigraph with exactly `max degree` colors.
///
/// `left[v]` declares the side of vertex `v`; edges joining two vertices on
/// the same side are rejected. Edges are colored in input order; each edge
/// takes the lowest color free at its left endpoint, and when that color is
/// busy at the right endpoint the alternating path of that color and the
/// lowest color free on the right is swapped first. Returns 0-based colors.
pub fn bipartite_edge_coloring(left: &[bool], edges: &[(usize, usize)]) -> Result<Vec<usize>> {
    let n = left.len();
    let mut degree = vec![0usize; n];
    for (i, &(a, b)) in edges.iter().enumerate() {
        if a >= n || b >= n {
            return Err(Error::NotBipartite(format!("edge {i} references a missing vertex")));
        }
        if left[a] == left[b] {
            return Err(Error::NotBipartite(format!("edge {i} joins two vertices on the same side")));
        }
        degree[a] += 1;
        degree[b] += 1;
    }
    let delta = degree.iter().copied().max().unwrap_or(0);
    // at[v][c] = edge of color c at vertex v
    let mut at: Vec<Vec<Option<usize>>> = vec![vec![None; delta]; n];
    let mut color: Vec<usize> = vec![usize::MAX; edges.len()];
    for (e, &(a, b)) in edges.iter().enumerate() {
        let (u, v) = if left[a] { (a, b) } else { (b, a) };
        let alpha = (0..delta).find(|&c| at[u][c].is_none()).expect("free color at u");
        let beta = (0..delta).find(|&c| at[v][c].is_none()).expect("free color at v");
        if at[v][alpha].is_some() {
            // Collect the alpha/beta alternating path starting at v with color alpha.
            let mut path = Vec::new();
            let mut cur = v;
            let mut want = alpha;
            while let Some(pe) = at[cur][want] {
                path.push(pe);
                let (x, y) = edges[pe];
                cur = if x == cur { y } else { x };
                want = if want == alpha { beta } else { alpha };
            }
            for &pe in &path {
                let (x, y) = edges[pe];
                at[x][color[pe]] = None;
                at[y][color[pe]] = None;
            }
            for &pe in &path {
                let (x, y) = edges[pe];
                let c = if color[pe] == alpha { beta } else { alpha };
                color[pe] = c;
                at[x][c] = Some(pe);
                at[y][c] = Some(pe);
            }
        }
        color[e] = alpha;
        at[u][alpha] = Some(e);
        at[v][alpha] = Some(e);
    }
    Ok(color)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn proper_vertex(adj: &[Vec<usize>], c: &[usize]) -> bool {
        adj.iter().enumerate().all(|(v, ns)| ns.iter().all(|&u| c[u] != c[v]))
    }

    #[test]
    fn vertex_coloring_examples() {
        let path = vec![vec![1], vec![0, 2], vec![1]];
        let c = greedy_vertex_coloring(&path);
        assert!(proper_vertex(&path, &c));
        assert_eq!(color_count(&c), 2);
        let tri = vec![vec![1, 2], vec![0, 2], vec![0, 1]];
        assert_eq!(color_count(&greedy_vertex_coloring(&tri)), 3);
        let empty = vec![vec![], vec![], vec![]];
        assert_eq!(color_count(&greedy_vertex_coloring(&empty)), 1);
    }

    #[test]
    fn edge_coloring_examples() {
        let sides = [true, true, false, false];
        let matching = bipartite_edge_coloring(&sides, &[(0, 2), (1, 3)]).unwrap();
        assert_eq!(color_count(&matching), 1);
        let k22 = bipartite_edge_coloring(&sides, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        assert_eq!(color_count(&k22), 2);
        let double = bipartite_edge_coloring(&sides, &[(0, 2), (0, 2)]).unwrap();
        assert_eq!(color_count(&double), 2);
        assert!(matches!(bipartite_edge_coloring(&sides, &[(0, 1)]), Err(Error::NotBipartite(_))));
    }
}
