//! Triangulations of the sphere stored as oriented triangle lists.
//!
//! Every face, including the outer one, is a triangle, so a valid
//! instance with `v` vertices has exactly `2(v-2)` triangles and
//! `3(v-2)` edges counted with multiplicity.  Multi-edges are
//! first-class: an edge is an *occurrence* pairing two directed slots
//! of two triangles, never just an endpoint pair.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Dense vertex identifier, unique within one graph or polygon.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An oriented vertex triple. Slot `s` is the directed edge from
/// `t[s]` to `t[(s+1)%3]`.
pub type Triple = [VertexId; 3];

/// Rotate a triple so its smallest vertex comes first. The cyclic
/// order, and with it the orientation sense, is unchanged.
pub fn rotate_min_first(t: Triple) -> Triple {
    let m = if t[0] <= t[1] && t[0] <= t[2] {
        0
    } else if t[1] <= t[0] && t[1] <= t[2] {
        1
    } else {
        2
    };
    [t[m], t[(m + 1) % 3], t[(m + 2) % 3]]
}

/// One edge occurrence: a matched pair of directed triangle slots
/// (or a single slot on a polygon boundary).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeOcc {
    pub lo: VertexId,
    pub hi: VertexId,
    /// Triangle slot traversing `lo -> hi`.
    pub fwd: Option<(usize, u8)>,
    /// Triangle slot traversing `hi -> lo`.
    pub bwd: Option<(usize, u8)>,
}

impl EdgeOcc {
    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.lo, self.hi)
    }

    pub fn touches(&self, v: VertexId) -> bool {
        self.lo == v || self.hi == v
    }

    pub fn other(&self, v: VertexId) -> VertexId {
        if v == self.lo {
            self.hi
        } else {
            self.lo
        }
    }

    /// Both sides present, i.e. the occurrence borders two triangles.
    pub fn is_interior(&self) -> bool {
        self.fwd.is_some() && self.bwd.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphError {
    NotATriangulation(&'static str),
    InconsistentOrientation,
    UnknownVertex(VertexId),
    NotSeparating,
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::NotATriangulation(why) => write!(f, "not a triangulation: {why}"),
            GraphError::InconsistentOrientation => write!(f, "triangle orientations admit no consistent global sense"),
            GraphError::UnknownVertex(v) => write!(f, "unknown vertex {v}"),
            GraphError::NotSeparating => write!(f, "triangle is not separating"),
        }
    }
}

impl core::error::Error for GraphError {}

/// Anything that owns an oriented triangle list with paired edge
/// occurrences: closed triangulations and triangulated polygons.
pub trait TriangleHost {
    fn vertex_count(&self) -> usize;
    fn triangles(&self) -> &[Triple];
    fn edges(&self) -> &[EdgeOcc];
    /// Per triangle, per slot: index into `edges()`.
    fn slot_edge(&self) -> &[[usize; 3]];
    /// Per vertex, the incident corners `(triangle, corner position)`
    /// in rotation order. Closed fans are cycles, boundary fans paths.
    fn fans(&self) -> &[Vec<(usize, u8)>];

    fn triangle_count(&self) -> usize {
        self.triangles().len()
    }

    /// Number of triangles incident to `u` (the triangle degree).
    fn triangle_degree(&self, u: VertexId) -> Result<usize, GraphError> {
        self.fans()
            .get(u.index())
            .map(Vec::len)
            .ok_or(GraphError::UnknownVertex(u))
    }
}

// ---------------------------------------------------------------------------
// Mesh assembly: pairing directed slots into edge occurrences.

pub(crate) struct MeshParts {
    pub edges: Vec<EdgeOcc>,
    pub slot_edge: Vec<[usize; 3]>,
    pub fans: Vec<Vec<(usize, u8)>>,
}

#[derive(Debug)]
pub(crate) enum MeshError {
    BadTriple,
    Unbalanced,
    NoValidPairing,
    PairingTooAmbiguous,
}

struct Bucket {
    fwd: Vec<(usize, u8)>,
    bwd: Vec<(usize, u8)>,
    need_f: usize,
    need_b: usize,
}

/// All ways to pick `k` indices out of `0..n`, lexicographic.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

/// One way to resolve a bucket into occurrences.
type Resolution = Vec<EdgeOcc>;

fn bucket_resolutions(lo: VertexId, hi: VertexId, b: &Bucket) -> Vec<Resolution> {
    let matched = b.fwd.len() - b.need_f;
    let mut out = Vec::new();
    for f_bound in subsets(b.fwd.len(), b.need_f) {
        for b_bound in subsets(b.bwd.len(), b.need_b) {
            let f_rest: Vec<usize> = (0..b.fwd.len()).filter(|i| !f_bound.contains(i)).collect();
            let b_rest: Vec<usize> = (0..b.bwd.len()).filter(|i| !b_bound.contains(i)).collect();
            for perm in permutations(matched) {
                let mut res = Vec::new();
                for (i, &fi) in f_rest.iter().enumerate() {
                    res.push(EdgeOcc {
                        lo,
                        hi,
                        fwd: Some(b.fwd[fi]),
                        bwd: Some(b.bwd[b_rest[perm[i]]]),
                    });
                }
                for &fi in &f_bound {
                    res.push(EdgeOcc { lo, hi, fwd: Some(b.fwd[fi]), bwd: None });
                }
                for &bi in &b_bound {
                    res.push(EdgeOcc { lo, hi, fwd: None, bwd: Some(b.bwd[bi]) });
                }
                out.push(res);
            }
        }
    }
    out
}

/// Pair every directed slot with its reverse, leaving the listed
/// `boundary` directed edges single-sided, and validate that every
/// vertex fan is one cycle (interior) or one path (boundary).
///
/// Multi-edges make the pairing ambiguous; all choices are tried in a
/// deterministic order and the first that yields valid fans wins.
pub(crate) fn build_mesh(
    vertex_count: usize,
    triangles: &[Triple],
    boundary: &[(VertexId, VertexId)],
) -> Result<MeshParts, MeshError> {
    for t in triangles {
        if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
            return Err(MeshError::BadTriple);
        }
        if t.iter().any(|v| v.index() >= vertex_count) {
            return Err(MeshError::BadTriple);
        }
    }

    let mut buckets: BTreeMap<(VertexId, VertexId), Bucket> = BTreeMap::new();
    for (ti, t) in triangles.iter().enumerate() {
        for s in 0..3u8 {
            let a = t[s as usize];
            let b = t[(s as usize + 1) % 3];
            let key = (a.min(b), a.max(b));
            let bucket = buckets.entry(key).or_insert(Bucket {
                fwd: Vec::new(),
                bwd: Vec::new(),
                need_f: 0,
                need_b: 0,
            });
            if a < b {
                bucket.fwd.push((ti, s));
            } else {
                bucket.bwd.push((ti, s));
            }
        }
    }
    for &(a, b) in boundary {
        let key = (a.min(b), a.max(b));
        let bucket = buckets.get_mut(&key).ok_or(MeshError::Unbalanced)?;
        if a < b {
            bucket.need_f += 1;
        } else {
            bucket.need_b += 1;
        }
    }
    for b in buckets.values() {
        if b.fwd.len() < b.need_f || b.bwd.len() < b.need_b {
            return Err(MeshError::Unbalanced);
        }
        if b.fwd.len() - b.need_f != b.bwd.len() - b.need_b {
            return Err(MeshError::Unbalanced);
        }
    }

    let keys: Vec<(VertexId, VertexId)> = buckets.keys().copied().collect();
    let options: Vec<Vec<Resolution>> = keys
        .iter()
        .map(|k| {
            let b = &buckets[k];
            bucket_resolutions(k.0, k.1, b)
        })
        .collect();
    let mut combos: u64 = 1;
    for o in &options {
        combos = combos.saturating_mul(o.len() as u64);
        if combos > 1 << 16 {
            return Err(MeshError::PairingTooAmbiguous);
        }
    }

    let boundary_vertices: BTreeSet<VertexId> =
        boundary.iter().flat_map(|&(a, b)| [a, b]).collect();

    let mut choice = vec![0usize; options.len()];
    loop {
        let mut edges: Vec<EdgeOcc> = Vec::new();
        for (i, opts) in options.iter().enumerate() {
            edges.extend(opts[choice[i]].iter().cloned());
        }
        let mut slot_edge = vec![[usize::MAX; 3]; triangles.len()];
        for (ei, e) in edges.iter().enumerate() {
            if let Some((t, s)) = e.fwd {
                slot_edge[t][s as usize] = ei;
            }
            if let Some((t, s)) = e.bwd {
                slot_edge[t][s as usize] = ei;
            }
        }
        if let Ok(fans) =
            compute_fans(vertex_count, triangles, &edges, &slot_edge, &boundary_vertices)
        {
            return Ok(MeshParts { edges, slot_edge, fans });
        }
        // advance odometer
        let mut i = 0;
        loop {
            if i == options.len() {
                return Err(MeshError::NoValidPairing);
            }
            choice[i] += 1;
            if choice[i] < options[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Walk the corners around each vertex. Interior vertices must close
/// into a single cycle, boundary vertices must form a single open path.
fn compute_fans(
    vertex_count: usize,
    triangles: &[Triple],
    edges: &[EdgeOcc],
    slot_edge: &[[usize; 3]],
    boundary_vertices: &BTreeSet<VertexId>,
) -> Result<Vec<Vec<(usize, u8)>>, ()> {
    let mut corners: Vec<Vec<(usize, u8)>> = vec![Vec::new(); vertex_count];
    for (ti, t) in triangles.iter().enumerate() {
        for p in 0..3u8 {
            corners[t[p as usize].index()].push((ti, p));
        }
    }

    // Successor of corner (t, p) around its vertex: cross the outgoing
    // slot p to the partner triangle.
    let succ = |t: usize, p: u8| -> Option<(usize, u8)> {
        let e = &edges[slot_edge[t][p as usize]];
        let partner = if e.fwd == Some((t, p)) { e.bwd } else { e.fwd };
        partner.map(|(t2, s2)| (t2, (s2 + 1) % 3))
    };
    let pred = |t: usize, p: u8| -> Option<(usize, u8)> {
        let in_slot = (p + 2) % 3;
        let e = &edges[slot_edge[t][in_slot as usize]];
        let partner = if e.fwd == Some((t, in_slot)) { e.bwd } else { e.fwd };
        partner.map(|(t2, s2)| (t2, s2))
    };

    let mut fans: Vec<Vec<(usize, u8)>> = vec![Vec::new(); vertex_count];
    for v in 0..vertex_count {
        let cs = &corners[v];
        if cs.is_empty() {
            if boundary_vertices.contains(&VertexId(v as u32)) {
                continue; // legal only for the bare base; caller checks
            }
            return Err(());
        }
        let starts: Vec<(usize, u8)> =
            cs.iter().copied().filter(|&(t, p)| pred(t, p).is_none()).collect();
        let set: BTreeSet<(usize, u8)> = cs.iter().copied().collect();
        let walk_from = |start: (usize, u8)| -> Option<Vec<(usize, u8)>> {
            let mut seen = BTreeSet::new();
            let mut order = Vec::new();
            let mut cur = start;
            loop {
                if !set.contains(&cur) || !seen.insert(cur) {
                    return None;
                }
                order.push(cur);
                match succ(cur.0, cur.1) {
                    Some(next) => {
                        if next == start {
                            break;
                        }
                        cur = next;
                    }
                    None => break,
                }
            }
            (order.len() == cs.len()).then_some(order)
        };
        let fan = if starts.is_empty() {
            // closed fan: canonical start at the smallest corner
            let start = *cs.iter().min().unwrap();
            let fan = walk_from(start).ok_or(())?;
            // must have wrapped around, not stopped at a loose end
            if succ(fan[fan.len() - 1].0, fan[fan.len() - 1].1) != Some(start) {
                return Err(());
            }
            if boundary_vertices.contains(&VertexId(v as u32)) {
                return Err(());
            }
            fan
        } else {
            if starts.len() != 1 || !boundary_vertices.contains(&VertexId(v as u32)) {
                return Err(());
            }
            let fan = walk_from(starts[0]).ok_or(())?;
            if succ(fan[fan.len() - 1].0, fan[fan.len() - 1].1).is_some() {
                return Err(());
            }
            fan
        };
        fans[v] = fan;
    }
    Ok(fans)
}

// ---------------------------------------------------------------------------
// Triangulation

/// A triangulation of the sphere: oriented triangle list with one
/// consistent global sense, multi-edges allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    vertex_count: usize,
    triangles: Vec<Triple>,
    edges: Vec<EdgeOcc>,
    slot_edge: Vec<[usize; 3]>,
    fans: Vec<Vec<(usize, u8)>>,
    adjacency: BTreeSet<(VertexId, VertexId)>,
}

impl TriangleHost for Triangulation {
    fn vertex_count(&self) -> usize {
        self.vertex_count
    }
    fn triangles(&self) -> &[Triple] {
        &self.triangles
    }
    fn edges(&self) -> &[EdgeOcc] {
        &self.edges
    }
    fn slot_edge(&self) -> &[[usize; 3]] {
        &self.slot_edge
    }
    fn fans(&self) -> &[Vec<(usize, u8)>] {
        &self.fans
    }
}

impl Triangulation {
    /// Validate and build from raw vertex triples.
    ///
    /// Triples may come with mixed senses; for simple graphs the
    /// orientation is repaired to one global sense anchored at the
    /// first triple. Multi-edge inputs must already be consistent.
    pub fn new(vertex_count: usize, raw: &[[u32; 3]]) -> Result<Self, GraphError> {
        if raw.is_empty() {
            return Err(GraphError::NotATriangulation("empty triangle list"));
        }
        if vertex_count < 3 {
            return Err(GraphError::NotATriangulation("fewer than 3 vertices"));
        }
        let mut triangles: Vec<Triple> = Vec::with_capacity(raw.len());
        let mut used = vec![false; vertex_count];
        for t in raw {
            let t = [VertexId(t[0]), VertexId(t[1]), VertexId(t[2])];
            for v in t {
                if v.index() >= vertex_count {
                    return Err(GraphError::NotATriangulation("vertex id out of range"));
                }
                used[v.index()] = true;
            }
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(GraphError::NotATriangulation("degenerate triple"));
            }
            triangles.push(rotate_min_first(t));
        }
        if used.iter().any(|u| !u) {
            return Err(GraphError::NotATriangulation("vertex ids not dense"));
        }
        if triangles.len() != 2 * (vertex_count - 2) {
            return Err(GraphError::NotATriangulation("triangle count is not 2(v-2)"));
        }

        if !directions_balanced(&triangles) {
            triangles = repair_orientation(triangles)?;
        }

        let parts = build_mesh(vertex_count, &triangles, &[]).map_err(|e| match e {
            MeshError::Unbalanced => GraphError::InconsistentOrientation,
            MeshError::BadTriple => GraphError::NotATriangulation("degenerate triple"),
            MeshError::NoValidPairing => {
                GraphError::NotATriangulation("no planar edge pairing exists")
            }
            MeshError::PairingTooAmbiguous => {
                GraphError::NotATriangulation("multi-edge pairing too ambiguous")
            }
        })?;

        if !dual_connected(triangles.len(), &parts.edges) {
            return Err(GraphError::NotATriangulation("triangle set is disconnected"));
        }

        let adjacency = parts
            .edges
            .iter()
            .flat_map(|e| [(e.lo, e.hi), (e.hi, e.lo)])
            .collect();
        Ok(Triangulation {
            vertex_count,
            triangles,
            edges: parts.edges,
            slot_edge: parts.slot_edge,
            fans: parts.fans,
            adjacency,
        })
    }

    pub fn from_triples(vertex_count: usize, triples: &[Triple]) -> Result<Self, GraphError> {
        let raw: Vec<[u32; 3]> = triples.iter().map(|t| [t[0].0, t[1].0, t[2].0]).collect();
        Self::new(vertex_count, &raw)
    }

    /// Edge occurrences counted with multiplicity; equals `3(v-2)`.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacency.contains(&(u, v))
    }

    pub fn neighbors(&self, u: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adjacency
            .range((u, VertexId(0))..=(u, VertexId(u32::MAX)))
            .map(|&(_, v)| v)
    }

    /// True if no endpoint pair carries more than one edge occurrence.
    pub fn is_simple(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges.iter().all(|e| seen.insert((e.lo, e.hi)))
    }

    /// The triangle list as a sorted multiset, for order-insensitive
    /// comparison.
    pub fn triangle_multiset(&self) -> Vec<Triple> {
        let mut v = self.triangles.clone();
        v.sort();
        v
    }

    /// Same triangulation with the opposite global sense.
    pub fn mirrored(&self) -> Triangulation {
        let flipped: Vec<Triple> = self.triangles.iter().map(|t| [t[2], t[1], t[0]]).collect();
        Self::from_triples(self.vertex_count, &flipped)
            .expect("mirror of a valid triangulation is valid")
    }

    /// All non-facial 3-cycles, by vertex set, sorted.
    pub fn find_separating_triangles(&self) -> Vec<SeparatingTriangle> {
        let face_sets: BTreeSet<[VertexId; 3]> = self
            .triangles
            .iter()
            .map(|t| {
                let mut s = *t;
                s.sort();
                s
            })
            .collect();
        let n = self.vertex_count as u32;
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if !self.adjacent(VertexId(a), VertexId(b)) {
                    continue;
                }
                for c in b + 1..n {
                    if self.adjacent(VertexId(a), VertexId(c))
                        && self.adjacent(VertexId(b), VertexId(c))
                        && !face_sets.contains(&[VertexId(a), VertexId(b), VertexId(c)])
                    {
                        out.push(SeparatingTriangle {
                            vertices: [VertexId(a), VertexId(b), VertexId(c)],
                        });
                    }
                }
            }
        }
        out
    }

    /// Cut the graph along a separating triangle. The child keeps the
    /// interior side (fewer vertices, ties by smallest id), the parent
    /// keeps the rest; both gain the shared triangle as a face.
    pub fn split_off_separating_triangle(
        &self,
        s: &SeparatingTriangle,
    ) -> Result<SplitOff, GraphError> {
        let [a, b, c] = s.vertices;
        for v in [a, b, c] {
            if v.index() >= self.vertex_count {
                return Err(GraphError::UnknownVertex(v));
            }
        }
        if !self.find_separating_triangles().contains(s) {
            return Err(GraphError::NotSeparating);
        }

        // components of the vertex graph with a, b, c removed
        let mut comp = vec![usize::MAX; self.vertex_count];
        let mut n_comp = 0;
        for v in 0..self.vertex_count {
            let vid = VertexId(v as u32);
            if vid == a || vid == b || vid == c || comp[v] != usize::MAX {
                continue;
            }
            let mut stack = vec![vid];
            comp[v] = n_comp;
            while let Some(u) = stack.pop() {
                for w in self.neighbors(u) {
                    if w == a || w == b || w == c || comp[w.index()] != usize::MAX {
                        continue;
                    }
                    comp[w.index()] = n_comp;
                    stack.push(w);
                }
            }
            n_comp += 1;
        }
        if n_comp < 2 {
            return Err(GraphError::NotSeparating);
        }
        let mut sizes = vec![(0usize, VertexId(u32::MAX)); n_comp];
        for v in 0..self.vertex_count {
            if comp[v] != usize::MAX {
                sizes[comp[v]].0 += 1;
                sizes[comp[v]].1 = sizes[comp[v]].1.min(VertexId(v as u32));
            }
        }
        let interior = (0..n_comp).min_by_key(|&i| sizes[i]).unwrap();

        let in_interior = |v: VertexId| comp[v.index()] == interior;
        let mut child_triples: Vec<Triple> = Vec::new();
        let mut parent_triples: Vec<Triple> = Vec::new();
        for t in &self.triangles {
            if t.iter().any(|&v| in_interior(v)) {
                child_triples.push(*t);
            } else {
                parent_triples.push(*t);
            }
        }
        let child_cap = closing_triple(&child_triples).ok_or(GraphError::NotSeparating)?;
        let parent_cap = closing_triple(&parent_triples).ok_or(GraphError::NotSeparating)?;
        child_triples.push(child_cap);
        parent_triples.push(parent_cap);

        let (child, child_vertices) = relabel_dense(self.vertex_count, &child_triples)?;
        let (parent, parent_vertices) = relabel_dense(self.vertex_count, &parent_triples)?;
        Ok(SplitOff { parent, parent_vertices, child, child_vertices, shared: s.vertices })
    }

    /// Canonical relabeled triangle list: the minimum BFS code over all
    /// rooted flags and both senses. Equal codes mean isomorphic
    /// embeddings, which is the dedup notion used by the audits.
    pub fn canonical_code(&self) -> Vec<[u32; 3]> {
        let mirror = self.mirrored();
        let mut best: Option<Vec<[u32; 3]>> = None;
        for g in [self, &mirror] {
            for t in 0..g.triangles.len() {
                for s in 0..3u8 {
                    let code = bfs_code(g, t, s);
                    if best.as_ref().is_none_or(|b| code < *b) {
                        best = Some(code);
                    }
                }
            }
        }
        best.unwrap()
    }

    // ----- named instances -----

    pub fn complete4() -> Self {
        Self::new(4, &[[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]]).unwrap()
    }

    pub fn octahedron() -> Self {
        Self::new(
            6,
            &[
                [0, 1, 2],
                [0, 2, 3],
                [0, 3, 4],
                [0, 4, 1],
                [5, 2, 1],
                [5, 3, 2],
                [5, 4, 3],
                [5, 1, 4],
            ],
        )
        .unwrap()
    }

    pub fn icosahedron() -> Self {
        let mut f: Vec<[u32; 3]> = Vec::new();
        for i in 0..5u32 {
            let u = 1 + i;
            let v = 1 + (i + 1) % 5;
            let w = 6 + i;
            let x = 6 + (i + 1) % 5;
            f.push([0, u, v]);
            f.push([u, w, v]);
            f.push([v, w, x]);
            f.push([11, x, w]);
        }
        Self::new(12, &f).unwrap()
    }

    /// K4 with `depth` successively stacked degree-3 vertices, each
    /// placed in a face of the previous one. Has `depth` separating
    /// triangles.
    pub fn stacked(depth: usize) -> Self {
        let mut triples: Vec<[u32; 3]> = vec![[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]];
        let mut v = 4u32;
        for _ in 0..depth {
            let [a, b, c] = triples.pop().unwrap();
            triples.push([a, b, v]);
            triples.push([b, c, v]);
            triples.push([c, a, v]);
            v += 1;
        }
        Self::new(v as usize, &triples).unwrap()
    }

    /// Replace the face at `idx` by an octahedron patch (three new
    /// vertices). Preserves the parity of every vertex degree.
    pub fn replace_face_with_octahedron(&self, idx: usize) -> Result<Self, GraphError> {
        if idx >= self.triangles.len() {
            return Err(GraphError::NotATriangulation("face index out of range"));
        }
        let [a, b, c] = self.triangles[idx];
        let (a, b, c) = (a.0, b.0, c.0);
        let x = self.vertex_count as u32;
        let (y, z) = (x + 1, x + 2);
        let mut triples: Vec<[u32; 3]> = self
            .triangles
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != idx)
            .map(|(_, t)| [t[0].0, t[1].0, t[2].0])
            .collect();
        triples.extend([
            [b, a, x],
            [b, x, y],
            [c, b, y],
            [c, y, z],
            [a, c, z],
            [a, z, x],
            [z, y, x],
        ]);
        Self::new(self.vertex_count + 3, &triples)
    }
}

/// A non-facial 3-cycle; vertices sorted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SeparatingTriangle {
    pub vertices: [VertexId; 3],
}

/// Result of cutting along a separating triangle. Vertex ids in each
/// part are re-densified; the maps give the original ids.
#[derive(Clone, Debug)]
pub struct SplitOff {
    pub parent: Triangulation,
    pub parent_vertices: Vec<VertexId>,
    pub child: Triangulation,
    pub child_vertices: Vec<VertexId>,
    pub shared: [VertexId; 3],
}

fn directions_balanced(triangles: &[Triple]) -> bool {
    let mut count: BTreeMap<(VertexId, VertexId), i32> = BTreeMap::new();
    for t in triangles {
        for s in 0..3 {
            let a = t[s];
            let b = t[(s + 1) % 3];
            if a < b {
                *count.entry((a, b)).or_insert(0) += 1;
            } else {
                *count.entry((b, a)).or_insert(0) -= 1;
            }
        }
    }
    count.values().all(|&c| c == 0)
}

/// Flip triples of a simple triple list until adjacent triangles
/// traverse every shared edge in opposite directions.
fn repair_orientation(triangles: Vec<Triple>) -> Result<Vec<Triple>, GraphError> {
    let mut by_pair: BTreeMap<(VertexId, VertexId), Vec<(usize, bool)>> = BTreeMap::new();
    for (ti, t) in triangles.iter().enumerate() {
        for s in 0..3 {
            let a = t[s];
            let b = t[(s + 1) % 3];
            let key = (a.min(b), a.max(b));
            by_pair.entry(key).or_default().push((ti, a < b));
        }
    }
    for v in by_pair.values() {
        if v.len() != 2 {
            // repair is only defined for simple lists
            return Err(GraphError::InconsistentOrientation);
        }
    }
    let mut flip: Vec<Option<bool>> = vec![None; triangles.len()];
    flip[0] = Some(false);
    let mut queue = vec![0usize];
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); triangles.len()];
    for v in by_pair.values() {
        let (t1, d1) = v[0];
        let (t2, d2) = v[1];
        // same traversal direction means exactly one of the two must flip
        adj[t1].push((t2, d1 == d2));
        adj[t2].push((t1, d1 == d2));
    }
    while let Some(t) = queue.pop() {
        let f = flip[t].unwrap();
        for &(u, must_differ) in &adj[t] {
            let want = f ^ must_differ;
            match flip[u] {
                None => {
                    flip[u] = Some(want);
                    queue.push(u);
                }
                Some(have) if have != want => return Err(GraphError::InconsistentOrientation),
                _ => {}
            }
        }
    }
    if flip.iter().any(Option::is_none) {
        return Err(GraphError::NotATriangulation("triangle set is disconnected"));
    }
    let repaired: Vec<Triple> = triangles
        .iter()
        .zip(&flip)
        .map(|(t, f)| {
            if f.unwrap() {
                rotate_min_first([t[2], t[1], t[0]])
            } else {
                *t
            }
        })
        .collect();
    if directions_balanced(&repaired) {
        Ok(repaired)
    } else {
        Err(GraphError::InconsistentOrientation)
    }
}

fn dual_connected(n_triangles: usize, edges: &[EdgeOcc]) -> bool {
    if n_triangles == 0 {
        return false;
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n_triangles];
    for e in edges {
        if let (Some((t1, _)), Some((t2, _))) = (e.fwd, e.bwd) {
            adj[t1].push(t2);
            adj[t2].push(t1);
        }
    }
    let mut seen = vec![false; n_triangles];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(t) = stack.pop() {
        for &u in &adj[t] {
            if !seen[u] {
                seen[u] = true;
                count += 1;
                stack.push(u);
            }
        }
    }
    count == n_triangles
}

/// The oriented triple that balances the three unmatched directed
/// edges of a capped-off triangle set, if they form a 3-cycle.
fn closing_triple(triples: &[Triple]) -> Option<Triple> {
    let mut count: BTreeMap<(VertexId, VertexId), i32> = BTreeMap::new();
    for t in triples {
        for s in 0..3 {
            let a = t[s];
            let b = t[(s + 1) % 3];
            *count.entry((a, b)).or_insert(0) += 1;
            *count.entry((b, a)).or_insert(0) -= 1;
        }
    }
    let missing: Vec<(VertexId, VertexId)> = count
        .iter()
        .filter(|&(_, &c)| c < 0)
        .flat_map(|(&(a, b), &c)| core::iter::repeat((a, b)).take((-c) as usize))
        .collect();
    if missing.len() != 3 {
        return None;
    }
    let (a, b) = missing[0];
    let (_, c) = *missing.iter().find(|&&(x, _)| x == b)?;
    if missing.contains(&(c, a)) && a != c {
        Some(rotate_min_first([a, b, c]))
    } else {
        None
    }
}

fn relabel_dense(
    vertex_count: usize,
    triples: &[Triple],
) -> Result<(Triangulation, Vec<VertexId>), GraphError> {
    let mut present: Vec<bool> = vec![false; vertex_count];
    for t in triples {
        for v in t {
            present[v.index()] = true;
        }
    }
    let originals: Vec<VertexId> = (0..vertex_count as u32)
        .map(VertexId)
        .filter(|v| present[v.index()])
        .collect();
    let mut map = vec![u32::MAX; vertex_count];
    for (new, old) in originals.iter().enumerate() {
        map[old.index()] = new as u32;
    }
    let relabeled: Vec<[u32; 3]> = triples
        .iter()
        .map(|t| [map[t[0].index()], map[t[1].index()], map[t[2].index()]])
        .collect();
    let g = Triangulation::new(originals.len(), &relabeled)?;
    Ok((g, originals))
}

fn bfs_code(g: &Triangulation, t0: usize, s0: u8) -> Vec<[u32; 3]> {
    let mut label = vec![u32::MAX; g.vertex_count];
    let mut next = 0u32;
    let mut visited = vec![false; g.triangles.len()];
    let mut queue = alloc::collections::VecDeque::new();
    queue.push_back((t0, s0));
    let mut out: Vec<[u32; 3]> = Vec::with_capacity(g.triangles.len());
    while let Some((t, s)) = queue.pop_front() {
        if visited[t] {
            continue;
        }
        visited[t] = true;
        let mut coded = [0u32; 3];
        for k in 0..3 {
            let v = g.triangles[t][(s as usize + k) % 3];
            if label[v.index()] == u32::MAX {
                label[v.index()] = next;
                next += 1;
            }
            coded[k] = label[v.index()];
        }
        out.push(min_rotation(coded));
        for k in 0..3u8 {
            let slot = (s + k) % 3;
            let e = &g.edges[g.slot_edge[t][slot as usize]];
            let partner = if e.fwd == Some((t, slot)) { e.bwd } else { e.fwd };
            if let Some((t2, s2)) = partner {
                if !visited[t2] {
                    queue.push_back((t2, s2));
                }
            }
        }
    }
    out.sort();
    out
}

fn min_rotation(t: [u32; 3]) -> [u32; 3] {
    let m = if t[0] <= t[1] && t[0] <= t[2] {
        0
    } else if t[1] <= t[0] && t[1] <= t[2] {
        1
    } else {
        2
    };
    [t[m], t[(m + 1) % 3], t[(m + 2) % 3]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_counts() {
        let g = Triangulation::complete4();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.triangle_count(), 4);
        assert_eq!(g.edge_count(), 6);
        for v in 0..4 {
            assert_eq!(g.triangle_degree(VertexId(v)).unwrap(), 3);
        }
    }

    #[test]
    fn octahedron_counts() {
        let g = Triangulation::octahedron();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.triangle_count(), 8);
        assert_eq!(g.edge_count(), 12);
        for v in 0..6 {
            assert_eq!(g.triangle_degree(VertexId(v)).unwrap(), 4);
        }
    }

    #[test]
    fn icosahedron_counts() {
        let g = Triangulation::icosahedron();
        assert_eq!(g.vertex_count(), 12);
        assert_eq!(g.triangle_count(), 20);
        assert_eq!(g.edge_count(), 30);
        for v in 0..12 {
            assert_eq!(g.triangle_degree(VertexId(v)).unwrap(), 5);
        }
        assert!(g.find_separating_triangles().is_empty());
    }

    #[test]
    fn face_gap_is_rejected() {
        // square pyramid with an open quadrilateral floor
        let r = Triangulation::new(5, &[[4, 1, 0], [4, 2, 1], [4, 3, 2], [4, 0, 3]]);
        assert_eq!(r, Err(GraphError::NotATriangulation("triangle count is not 2(v-2)")));
    }

    #[test]
    fn mixed_senses_are_repaired() {
        let g = Triangulation::new(4, &[[0, 1, 2], [0, 2, 3], [0, 3, 1], [2, 3, 1]]).unwrap();
        assert_eq!(g.triangle_multiset(), Triangulation::complete4().triangle_multiset());
    }

    #[test]
    fn unbalanced_multi_edge_is_rejected() {
        let r = Triangulation::new(4, &[[0, 1, 2], [0, 2, 3], [2, 1, 0], [0, 2, 3]]);
        assert_eq!(r, Err(GraphError::InconsistentOrientation));
    }

    #[test]
    fn doubled_diagonal_square_builds() {
        // two fans over the same square diagonal, outer side mirrored
        let g = Triangulation::new(4, &[[0, 1, 2], [0, 2, 3], [2, 1, 0], [3, 2, 0]]).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert!(!g.is_simple());
        let doubled: Vec<_> = g
            .edges()
            .iter()
            .filter(|e| (e.lo, e.hi) == (VertexId(0), VertexId(2)))
            .collect();
        assert_eq!(doubled.len(), 2);
    }

    #[test]
    fn octahedron_has_no_separating_triangle() {
        assert!(Triangulation::octahedron().find_separating_triangles().is_empty());
    }

    #[test]
    fn stacked_tetrahedron_has_one_separating_triangle() {
        let g = Triangulation::stacked(1);
        let seps = g.find_separating_triangles();
        assert_eq!(seps.len(), 1);
        assert_eq!(seps[0].vertices, [VertexId(1), VertexId(2), VertexId(3)]);
    }

    #[test]
    fn stacked_depth_two_has_two_separating_triangles() {
        assert_eq!(Triangulation::stacked(2).find_separating_triangles().len(), 2);
    }

    #[test]
    fn split_stacked_yields_two_k4() {
        let g = Triangulation::stacked(1);
        let s = g.find_separating_triangles()[0];
        let parts = g.split_off_separating_triangle(&s).unwrap();
        assert_eq!(parts.parent.vertex_count(), 4);
        assert_eq!(parts.child.vertex_count(), 4);
        assert_eq!(parts.parent.canonical_code(), Triangulation::complete4().canonical_code());
        assert_eq!(parts.child.canonical_code(), Triangulation::complete4().canonical_code());
    }

    #[test]
    fn split_nested_stack_recurses() {
        let g = Triangulation::stacked(2);
        let seps = g.find_separating_triangles();
        let parts = g.split_off_separating_triangle(&seps[0]).unwrap();
        let (small, big) = if parts.parent.vertex_count() == 4 {
            (&parts.parent, &parts.child)
        } else {
            (&parts.child, &parts.parent)
        };
        assert_eq!(small.vertex_count(), 4);
        assert_eq!(big.vertex_count(), 5);
        assert_eq!(big.find_separating_triangles().len(), 1);
    }

    #[test]
    fn split_parts_reglue_to_original() {
        let g = Triangulation::stacked(1);
        let s = g.find_separating_triangles()[0];
        let parts = g.split_off_separating_triangle(&s).unwrap();
        // map both sides back to original labels, drop the two caps
        let mut glued: Vec<Triple> = Vec::new();
        let mut shared_sorted = parts.shared;
        shared_sorted.sort();
        for (side, map) in [
            (&parts.parent, &parts.parent_vertices),
            (&parts.child, &parts.child_vertices),
        ] {
            let mut cap_dropped = false;
            for t in side.triangles() {
                let orig = [map[t[0].index()], map[t[1].index()], map[t[2].index()]];
                let mut sorted = orig;
                sorted.sort();
                if sorted == shared_sorted && !cap_dropped {
                    cap_dropped = true;
                    continue;
                }
                glued.push(rotate_min_first(orig));
            }
            assert!(cap_dropped);
        }
        glued.sort();
        assert_eq!(glued, g.triangle_multiset());
    }

    #[test]
    fn splitting_a_face_fails() {
        let g = Triangulation::octahedron();
        let s = SeparatingTriangle { vertices: [VertexId(0), VertexId(1), VertexId(2)] };
        assert_eq!(g.split_off_separating_triangle(&s).err(), Some(GraphError::NotSeparating));
    }

    #[test]
    fn canonical_code_ignores_labels_and_sense() {
        let g = Triangulation::octahedron();
        // relabel by an arbitrary permutation
        let perm = [3u32, 5, 0, 1, 4, 2];
        let relabeled: Vec<[u32; 3]> = g
            .triangles()
            .iter()
            .map(|t| [perm[t[0].index()], perm[t[1].index()], perm[t[2].index()]])
            .collect();
        let h = Triangulation::new(6, &relabeled).unwrap();
        assert_eq!(g.canonical_code(), h.canonical_code());
        assert_eq!(g.canonical_code(), g.mirrored().canonical_code());
    }

    #[test]
    fn canonical_code_distinguishes_shapes() {
        let a = Triangulation::octahedron();
        let b = Triangulation::stacked(2);
        assert_ne!(a.canonical_code(), b.canonical_code());
    }

    #[test]
    fn octahedron_replacement_keeps_degrees_even() {
        let g = Triangulation::octahedron().replace_face_with_octahedron(7).unwrap();
        assert_eq!(g.vertex_count(), 9);
        assert_eq!(g.triangle_count(), 14);
        for v in 0..9 {
            assert_eq!(g.triangle_degree(VertexId(v)).unwrap() % 2, 0);
        }
    }
}
