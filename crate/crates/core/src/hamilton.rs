//! Hamilton circuits in triangulations and the split along a circuit
//! into an inner and an outer triangulated polygon.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{TriangleHost, Triangulation, Triple, VertexId};
use crate::polygon::{PolygonError, PolygonTriangulation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitError {
    NotHamiltonian,
    EdgeNotOnCircuit,
    Polygon(PolygonError),
}

impl fmt::Display for SplitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitError::NotHamiltonian => write!(f, "sequence is not a Hamilton circuit"),
            SplitError::EdgeNotOnCircuit => write!(f, "base edge is not on the circuit"),
            SplitError::Polygon(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for SplitError {}

impl From<PolygonError> for SplitError {
    fn from(e: PolygonError) -> Self {
        SplitError::Polygon(e)
    }
}

/// A Hamilton circuit with a chosen base edge and the two polygons it
/// cuts the triangulation into. Both polygons carry the circuit as
/// perimeter; the outer one had its triangle senses inverted so that
/// [`crate::polygon::combine_polygons`] restores the original graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamiltonSplit {
    pub circuit: Vec<VertexId>,
    pub base: (VertexId, VertexId),
    pub inner: PolygonTriangulation,
    pub outer: PolygonTriangulation,
}

fn sorted_adjacency(g: &Triangulation) -> Vec<Vec<VertexId>> {
    let mut adj: Vec<BTreeSet<VertexId>> = vec![BTreeSet::new(); g.vertex_count()];
    for e in g.edges() {
        adj[e.lo.index()].insert(e.hi);
        adj[e.hi.index()].insert(e.lo);
    }
    adj.into_iter().map(|s| s.into_iter().collect()).collect()
}

/// Exhaustive depth-first search for a Hamilton circuit, smallest
/// vertex first. With `through` the circuit is forced to contain that
/// edge. Returns the circuit rotated to start at its smallest vertex,
/// direction fixed by the smaller neighbour.
pub fn find_hamilton_circuit(
    g: &Triangulation,
    through: Option<(VertexId, VertexId)>,
) -> Option<Vec<VertexId>> {
    let n = g.vertex_count();
    let adj = sorted_adjacency(g);
    let mut path: Vec<VertexId> = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    let start;
    match through {
        Some((u, w)) => {
            if u.index() >= n || w.index() >= n || !adj[u.index()].contains(&w) {
                return None;
            }
            start = u;
            path.push(u);
            path.push(w);
            visited[u.index()] = true;
            visited[w.index()] = true;
        }
        None => {
            start = VertexId(0);
            path.push(start);
            visited[0] = true;
        }
    }
    if extend_circuit(&adj, start, &mut path, &mut visited) {
        Some(canonical_cycle(&path))
    } else {
        None
    }
}

fn extend_circuit(
    adj: &[Vec<VertexId>],
    start: VertexId,
    path: &mut Vec<VertexId>,
    visited: &mut [bool],
) -> bool {
    let n = adj.len();
    if path.len() == n {
        return adj[path[n - 1].index()].contains(&start);
    }
    let head = *path.last().unwrap();
    // every unvisited vertex still needs two usable connections
    for x in 0..n {
        if visited[x] {
            continue;
        }
        let usable = adj[x]
            .iter()
            .filter(|w| !visited[w.index()] || **w == head || **w == start)
            .count();
        if usable < 2 {
            return false;
        }
    }
    for &w in &adj[head.index()] {
        if visited[w.index()] {
            continue;
        }
        visited[w.index()] = true;
        path.push(w);
        if extend_circuit(adj, start, path, visited) {
            return true;
        }
        path.pop();
        visited[w.index()] = false;
    }
    false
}

fn canonical_cycle(path: &[VertexId]) -> Vec<VertexId> {
    let n = path.len();
    let pos = path.iter().position(|&v| v == *path.iter().min().unwrap()).unwrap();
    let rotated: Vec<VertexId> = (0..n).map(|k| path[(pos + k) % n]).collect();
    if rotated[1] <= rotated[n - 1] {
        rotated
    } else {
        let mut rev = rotated.clone();
        rev[1..].reverse();
        rev
    }
}

/// Every Hamilton circuit, each once up to rotation and reflection,
/// in deterministic order.
pub fn all_hamilton_circuits(g: &Triangulation) -> Vec<Vec<VertexId>> {
    let n = g.vertex_count();
    let adj = sorted_adjacency(g);
    let mut out = Vec::new();
    let mut path = vec![VertexId(0)];
    let mut visited = vec![false; n];
    visited[0] = true;
    collect_circuits(&adj, &mut path, &mut visited, &mut out);
    out
}

fn collect_circuits(
    adj: &[Vec<VertexId>],
    path: &mut Vec<VertexId>,
    visited: &mut [bool],
    out: &mut Vec<Vec<VertexId>>,
) {
    let n = adj.len();
    if path.len() == n {
        if adj[path[n - 1].index()].contains(&VertexId(0)) && path[1] < path[n - 1] {
            out.push(path.clone());
        }
        return;
    }
    let head = *path.last().unwrap();
    for x in 0..n {
        if visited[x] {
            continue;
        }
        let usable = adj[x]
            .iter()
            .filter(|w| !visited[w.index()] || **w == head || w.index() == 0)
            .count();
        if usable < 2 {
            return;
        }
    }
    for &w in &adj[head.index()] {
        if visited[w.index()] {
            continue;
        }
        visited[w.index()] = true;
        path.push(w);
        collect_circuits(adj, path, visited, out);
        path.pop();
        visited[w.index()] = false;
    }
}

/// Cut the triangulation along a Hamilton circuit. Each triangle falls
/// on exactly one side; the side whose triangles traverse the circuit
/// in its listed direction becomes the inner polygon.
pub fn split_by_circuit(
    g: &Triangulation,
    circuit: &[VertexId],
    base: (VertexId, VertexId),
) -> Result<HamiltonSplit, SplitError> {
    let n = g.vertex_count();
    if circuit.len() != n {
        return Err(SplitError::NotHamiltonian);
    }
    let distinct: BTreeSet<VertexId> = circuit.iter().copied().collect();
    if distinct.len() != n || circuit.iter().any(|v| v.index() >= n) {
        return Err(SplitError::NotHamiltonian);
    }
    // one edge occurrence per circuit edge, smallest index first
    let mut circuit_occ: Vec<usize> = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b) = (circuit[i], circuit[(i + 1) % n]);
        let occ = g
            .edges()
            .iter()
            .position(|e| (e.lo, e.hi) == (a.min(b), a.max(b)))
            .ok_or(SplitError::NotHamiltonian)?;
        circuit_occ.push(occ);
    }
    let base_pos = (0..n)
        .find(|&i| {
            let (a, b) = (circuit[i], circuit[(i + 1) % n]);
            (a, b) == base || (b, a) == base
        })
        .ok_or(SplitError::EdgeNotOnCircuit)?;

    // seed: the triangle traversing circuit[0] -> circuit[1]
    let (c0, c1) = (circuit[0], circuit[1]);
    let e0 = &g.edges()[circuit_occ[0]];
    let seed = if c0 < c1 { e0.fwd } else { e0.bwd };
    let Some((seed, _)) = seed else {
        return Err(SplitError::NotHamiltonian);
    };

    let crossing: BTreeSet<usize> = circuit_occ.iter().copied().collect();
    let mut side = vec![false; g.triangle_count()];
    side[seed] = true;
    let mut stack = vec![seed];
    while let Some(t) = stack.pop() {
        for s in 0..3 {
            let ei = g.slot_edge()[t][s];
            if crossing.contains(&ei) {
                continue;
            }
            let e = &g.edges()[ei];
            for half in [e.fwd, e.bwd].into_iter().flatten() {
                if half.0 != t && !side[half.0] {
                    side[half.0] = true;
                    stack.push(half.0);
                }
            }
        }
    }
    let mut inner_triples: Vec<Triple> = Vec::new();
    let mut outer_triples: Vec<Triple> = Vec::new();
    for (t, tri) in g.triangles().iter().enumerate() {
        if side[t] {
            inner_triples.push(*tri);
        } else {
            outer_triples.push([tri[2], tri[1], tri[0]]);
        }
    }
    if outer_triples.is_empty() {
        return Err(SplitError::NotHamiltonian);
    }
    let inner = PolygonTriangulation::from_parts(circuit.to_vec(), base_pos, inner_triples)?;
    let outer = PolygonTriangulation::from_parts(circuit.to_vec(), base_pos, outer_triples)?;
    Ok(HamiltonSplit {
        circuit: circuit.to_vec(),
        base: (circuit[base_pos], circuit[(base_pos + 1) % n]),
        inner,
        outer,
    })
}

/// The lexicographically smallest circuit edge, the default base.
pub fn default_base(circuit: &[VertexId]) -> (VertexId, VertexId) {
    let n = circuit.len();
    (0..n)
        .map(|i| {
            let (a, b) = (circuit[i], circuit[(i + 1) % n]);
            (a.min(b), a.max(b))
        })
        .min()
        .unwrap()
}

/// Order in which the inner polygon's triangles can be added onto the
/// outer polygon, each step capping a non-base ear tip of what remains.
/// Applying the sequence via `add_ear` ends in the degenerate polygon
/// on the two base vertices.
pub fn reconstruction_order(
    inner: &PolygonTriangulation,
) -> Result<Vec<(usize, VertexId)>, PolygonError> {
    inner.ear_cut_order()
}
