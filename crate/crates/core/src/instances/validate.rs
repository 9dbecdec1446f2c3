use std::collections::HashMap;

use serde::Serialize;

use super::Hypergraph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearityReport {
    pub ok: bool,
    /// First pair of edges (by index) sharing two or more vertices.
    pub violation: Option<(usize, usize)>,
}

/// A triangle: three edges and the pairwise intersection witnesses
/// `u ∈ e∩f`, `v ∈ f∩g`, `w ∈ e∩g`, none of which lies in all three edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Triangle {
    pub edges: [usize; 3],
    pub vertices: [usize; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriangleReport {
    pub ok: bool,
    pub triangle: Option<Triangle>,
}

fn pair_key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Every pair of distinct edges must share at most one vertex.
pub fn check_linear(h: &Hypergraph) -> LinearityReport {
    let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
    let mut first: Option<(usize, usize)> = None;
    for (idx, e) in h.edges().iter().enumerate() {
        for (i, &a) in e.iter().enumerate() {
            for &b in &e[i + 1..] {
                if let Some(&prev) = owner.get(&pair_key(a, b)) {
                    let cand = (prev, idx);
                    if first.is_none_or(|f| cand < f) {
                        first = Some(cand);
                    }
                } else {
                    owner.insert(pair_key(a, b), idx);
                }
            }
        }
    }
    LinearityReport {
        ok: first.is_none(),
        violation: first,
    }
}

/// Triangle check. On linear input a triangle is exactly an edge `g` with
/// two of its vertices `a ≠ b` sharing a common neighbor outside `g`; the
/// linking edges are then forced to be distinct. Non-linear input falls
/// back to [`check_triangle_free_general`].
pub fn check_triangle_free(h: &Hypergraph) -> TriangleReport {
    if !check_linear(h).ok {
        return check_triangle_free_general(h);
    }
    // neighbor lists with the edge that realizes each adjacency
    let mut nbr: Vec<Vec<(usize, usize)>> = vec![Vec::new(); h.n()];
    for (idx, e) in h.edges().iter().enumerate() {
        for &a in e {
            for &x in e {
                if x != a {
                    nbr[a].push((x, idx));
                }
            }
        }
    }
    for list in &mut nbr {
        list.sort_unstable();
    }
    for (g_idx, g) in h.edges().iter().enumerate() {
        for (i, &a) in g.iter().enumerate() {
            for &b in &g[i + 1..] {
                let (na, nb) = (&nbr[a], &nbr[b]);
                let (mut s, mut t) = (0, 0);
                while s < na.len() && t < nb.len() {
                    let (xa, ea) = na[s];
                    let (xb, eb) = nb[t];
                    match xa.cmp(&xb) {
                        std::cmp::Ordering::Less => s += 1,
                        std::cmp::Ordering::Greater => t += 1,
                        std::cmp::Ordering::Equal => {
                            if g.binary_search(&xa).is_err() {
                                // e = ea ∋ a, x ; f = eb ∋ b, x
                                return TriangleReport {
                                    ok: false,
                                    triangle: Some(Triangle {
                                        edges: [ea, eb, g_idx],
                                        vertices: [xa, b, a],
                                    }),
                                };
                            }
                            s += 1;
                            t += 1;
                        }
                    }
                }
            }
        }
    }
    TriangleReport {
        ok: true,
        triangle: None,
    }
}

fn witness_outside(x: &[usize], y: &[usize], z: &[usize]) -> Option<usize> {
    x.iter()
        .copied()
        .find(|v| y.binary_search(v).is_ok() && z.binary_search(v).is_err())
}

/// Triangle check straight from the definition, valid for any hypergraph.
/// `{u, v, w} ∩ e ∩ f ∩ g = ∅` means each witness lies outside the third
/// edge, so it suffices to find `e∩f∖g`, `f∩g∖e`, `e∩g∖f` all nonempty.
pub fn check_triangle_free_general(h: &Hypergraph) -> TriangleReport {
    let edges = h.edges();
    let m = edges.len();
    for a in 0..m {
        for b in a + 1..m {
            if witness_outside(&edges[a], &edges[b], &[]).is_none() {
                continue;
            }
            for c in b + 1..m {
                let (e, f, g) = (&edges[a], &edges[b], &edges[c]);
                if let (Some(u), Some(v), Some(w)) = (
                    witness_outside(e, f, g),
                    witness_outside(f, g, e),
                    witness_outside(e, g, f),
                ) {
                    return TriangleReport {
                        ok: false,
                        triangle: Some(Triangle {
                            edges: [a, b, c],
                            vertices: [u, v, w],
                        }),
                    };
                }
            }
        }
    }
    TriangleReport {
        ok: true,
        triangle: None,
    }
}
