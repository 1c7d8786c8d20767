//! Triangulated polygons on a distinguished base edge.
//!
//! A polygon stores its perimeter cycle, the base position and an
//! oriented triangle list. Every perimeter edge is traversed by
//! exactly one triangle, in the perimeter direction; interior edges
//! are traversed once each way. A polygon may contain inner vertices
//! (then `t = v_p + 2(v_i - 1)`), including the degenerate form with
//! two perimeter vertices joined by a doubled base.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{
    build_mesh, rotate_min_first, EdgeOcc, GraphError, MeshError, TriangleHost, Triangulation,
    Triple, VertexId,
};
use crate::schemes::{cv3_from_ct2, OrientationAssignment, VertexNumbering};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolygonError {
    InvalidPolygon(&'static str),
    /// Operation needs a plain polygon: at least three perimeter
    /// vertices and no inner ones.
    DegeneratePolygon,
    /// The numbering is not realizable: an ear tip carried value 0 at
    /// cut time.
    NoPreimage { vertex: VertexId },
    TipOnBase,
    NotOnPerimeter,
    TooLarge,
    PerimeterMismatch,
    Graph(GraphError),
}

impl fmt::Display for PolygonError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolygonError::InvalidPolygon(why) => write!(f, "invalid polygon: {why}"),
            PolygonError::DegeneratePolygon => write!(f, "operation needs a non-degenerate polygon without inner vertices"),
            PolygonError::NoPreimage { vertex } => {
                write!(f, "numbering has no generating assignment (vertex {vertex} hit 0 at cut time)")
            }
            PolygonError::TipOnBase => write!(f, "ear tip may not be a base vertex"),
            PolygonError::NotOnPerimeter => write!(f, "vertex is not on the perimeter"),
            PolygonError::TooLarge => write!(f, "instance exceeds the configured exhaustion bound"),
            PolygonError::PerimeterMismatch => write!(f, "perimeter cycles or bases do not match"),
            PolygonError::Graph(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for PolygonError {}

impl From<GraphError> for PolygonError {
    fn from(e: GraphError) -> Self {
        PolygonError::Graph(e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonTriangulation {
    perimeter: Vec<VertexId>,
    base_pos: usize,
    triangles: Vec<Triple>,
    inner_vertices: Vec<VertexId>,
    vertex_count: usize,
    edges: Vec<EdgeOcc>,
    slot_edge: Vec<[usize; 3]>,
    fans: Vec<Vec<(usize, u8)>>,
    /// Perimeter position -> edge occurrence index.
    perimeter_occ: Vec<usize>,
}

impl TriangleHost for PolygonTriangulation {
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

impl PolygonTriangulation {
    /// Build from an explicit triangle list. Validates the perimeter
    /// convention, the triangle count `v_p + 2(v_i - 1)` and that every
    /// vertex fan is a single path (perimeter) or cycle (inner).
    pub fn from_parts(
        perimeter: Vec<VertexId>,
        base_pos: usize,
        triangles: Vec<Triple>,
    ) -> Result<Self, PolygonError> {
        let v_p = perimeter.len();
        if v_p < 2 {
            return Err(PolygonError::InvalidPolygon("perimeter needs at least 2 vertices"));
        }
        if base_pos >= v_p {
            return Err(PolygonError::InvalidPolygon("base position out of range"));
        }
        let distinct: BTreeSet<VertexId> = perimeter.iter().copied().collect();
        if distinct.len() != v_p {
            return Err(PolygonError::InvalidPolygon("perimeter vertices repeat"));
        }

        let mut present: BTreeSet<VertexId> = distinct.clone();
        for t in &triangles {
            present.extend(t.iter().copied());
        }
        let vertex_count = present.iter().next_back().map_or(0, |v| v.index() + 1);
        if present.len() != vertex_count {
            return Err(PolygonError::InvalidPolygon("vertex ids not dense"));
        }
        let v_i = vertex_count - v_p;
        let expected = v_p as i64 + 2 * (v_i as i64 - 1);
        if v_i == 0 && v_p == 2 {
            if !triangles.is_empty() {
                return Err(PolygonError::InvalidPolygon("bare base cannot carry triangles"));
            }
        } else if triangles.len() as i64 != expected {
            return Err(PolygonError::InvalidPolygon("triangle count is not v_p + 2(v_i - 1)"));
        }

        let triangles: Vec<Triple> = triangles.into_iter().map(rotate_min_first).collect();

        if triangles.is_empty() {
            // the bare base: one edge occurrence walked twice
            let (a, b) = (perimeter[0], perimeter[1]);
            let edges = vec![EdgeOcc { lo: a.min(b), hi: a.max(b), fwd: None, bwd: None }];
            return Ok(PolygonTriangulation {
                perimeter,
                base_pos,
                triangles,
                inner_vertices: Vec::new(),
                vertex_count,
                edges,
                slot_edge: Vec::new(),
                fans: vec![Vec::new(); vertex_count],
                perimeter_occ: vec![0, 0],
            });
        }

        let boundary: Vec<(VertexId, VertexId)> =
            (0..v_p).map(|i| (perimeter[i], perimeter[(i + 1) % v_p])).collect();
        let parts = build_mesh(vertex_count, &triangles, &boundary).map_err(|e| match e {
            MeshError::BadTriple => PolygonError::InvalidPolygon("degenerate triple"),
            MeshError::Unbalanced => {
                PolygonError::InvalidPolygon("edges do not close up against the perimeter")
            }
            MeshError::NoValidPairing => PolygonError::InvalidPolygon("no disk edge pairing exists"),
            MeshError::PairingTooAmbiguous => {
                PolygonError::InvalidPolygon("multi-edge pairing too ambiguous")
            }
        })?;

        let mut perimeter_occ = vec![usize::MAX; v_p];
        for (i, &(a, b)) in boundary.iter().enumerate() {
            let found = parts.edges.iter().position(|e| {
                (e.lo, e.hi) == (a.min(b), a.max(b))
                    && if a < b {
                        e.fwd.is_some() && e.bwd.is_none()
                    } else {
                        e.bwd.is_some() && e.fwd.is_none()
                    }
            });
            perimeter_occ[i] =
                found.ok_or(PolygonError::InvalidPolygon("perimeter edge not traversed"))?;
        }

        if !disk_dual_connected(triangles.len(), &parts.edges) {
            return Err(PolygonError::InvalidPolygon("triangle set is disconnected"));
        }

        let inner_vertices: Vec<VertexId> = (0..vertex_count as u32)
            .map(VertexId)
            .filter(|v| !distinct.contains(v))
            .collect();
        Ok(PolygonTriangulation {
            perimeter,
            base_pos,
            triangles,
            inner_vertices,
            vertex_count,
            edges: parts.edges,
            slot_edge: parts.slot_edge,
            fans: parts.fans,
            perimeter_occ,
        })
    }

    /// Build a plain polygon (no inner vertices) from its perimeter,
    /// base edge and diagonal set, recovering the triangles by
    /// repeated ear cutting.
    pub fn from_diagonals(
        perimeter: &[u32],
        base: (u32, u32),
        diagonals: &[(u32, u32)],
    ) -> Result<Self, PolygonError> {
        let perimeter: Vec<VertexId> = perimeter.iter().map(|&v| VertexId(v)).collect();
        let n = perimeter.len();
        if n < 2 {
            return Err(PolygonError::InvalidPolygon("perimeter needs at least 2 vertices"));
        }
        let base = (VertexId(base.0), VertexId(base.1));
        let base_pos = (0..n)
            .find(|&i| {
                let (a, b) = (perimeter[i], perimeter[(i + 1) % n]);
                (a, b) == base || (b, a) == base
            })
            .ok_or(PolygonError::InvalidPolygon("base is not a perimeter edge"))?;

        let expected_diagonals = n.saturating_sub(3);
        if diagonals.len() != expected_diagonals {
            return Err(PolygonError::InvalidPolygon("diagonal count is not v_p - 3"));
        }
        let pos_of: BTreeMap<VertexId, usize> =
            perimeter.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        if pos_of.len() != n {
            return Err(PolygonError::InvalidPolygon("perimeter vertices repeat"));
        }

        let mut remaining: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
        let mut diag_count: BTreeMap<VertexId, usize> = BTreeMap::new();
        for &(a, b) in diagonals {
            let (a, b) = (VertexId(a), VertexId(b));
            if a == b || !pos_of.contains_key(&a) || !pos_of.contains_key(&b) {
                return Err(PolygonError::InvalidPolygon("diagonal endpoint not on perimeter"));
            }
            let d = (pos_of[&a] + n - pos_of[&b]) % n;
            if d == 1 || d == n - 1 {
                return Err(PolygonError::InvalidPolygon("diagonal parallels a perimeter edge"));
            }
            if !remaining.insert((a.min(b), a.max(b))) {
                return Err(PolygonError::InvalidPolygon("duplicate diagonal"));
            }
            *diag_count.entry(a).or_insert(0) += 1;
            *diag_count.entry(b).or_insert(0) += 1;
        }

        let mut triangles: Vec<Triple> = Vec::new();
        if n > 2 {
            let mut next: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            let mut prev: Vec<usize> = (0..n).map(|i| (i + n - 1) % n).collect();
            let mut alive = vec![true; n];
            let mut alive_count = n;
            while alive_count > 3 {
                let mut cut = None;
                for i in 0..n {
                    if !alive[i] {
                        continue;
                    }
                    let b = perimeter[i];
                    if diag_count.get(&b).copied().unwrap_or(0) != 0 {
                        continue;
                    }
                    let a = perimeter[prev[i]];
                    let c = perimeter[next[i]];
                    if remaining.contains(&(a.min(c), a.max(c))) {
                        cut = Some((i, a, b, c));
                        break;
                    }
                }
                let Some((i, a, b, c)) = cut else {
                    return Err(PolygonError::InvalidPolygon(
                        "diagonals do not triangulate the polygon",
                    ));
                };
                triangles.push([a, b, c]);
                remaining.remove(&(a.min(c), a.max(c)));
                *diag_count.get_mut(&a).unwrap() -= 1;
                *diag_count.get_mut(&c).unwrap() -= 1;
                alive[i] = false;
                alive_count -= 1;
                next[prev[i]] = next[i];
                prev[next[i]] = prev[i];
            }
            let order: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
            triangles.push([perimeter[order[0]], perimeter[order[1]], perimeter[order[2]]]);
        }
        if !remaining.is_empty() {
            return Err(PolygonError::InvalidPolygon("diagonals do not triangulate the polygon"));
        }
        Self::from_parts(perimeter, base_pos, triangles)
    }

    pub fn perimeter(&self) -> &[VertexId] {
        &self.perimeter
    }

    pub fn perimeter_len(&self) -> usize {
        self.perimeter.len()
    }

    pub fn base_pos(&self) -> usize {
        self.base_pos
    }

    /// The directed base edge `(perimeter[b], perimeter[b+1])`.
    pub fn base_edge(&self) -> (VertexId, VertexId) {
        (
            self.perimeter[self.base_pos],
            self.perimeter[(self.base_pos + 1) % self.perimeter.len()],
        )
    }

    pub fn is_base_vertex(&self, v: VertexId) -> bool {
        let (a, b) = self.base_edge();
        v == a || v == b
    }

    pub fn inner_vertices(&self) -> &[VertexId] {
        &self.inner_vertices
    }

    pub fn inner_count(&self) -> usize {
        self.inner_vertices.len()
    }

    /// Edge occurrence carrying the perimeter edge at `pos`.
    pub fn perimeter_occ(&self, pos: usize) -> usize {
        self.perimeter_occ[pos]
    }

    /// Degenerate end state: two perimeter vertices and a doubled base.
    pub fn is_degenerate(&self) -> bool {
        self.perimeter.len() == 2 && !self.triangles.is_empty()
    }

    /// Interior edges joining two perimeter vertices, sorted. Only
    /// meaningful (and only unique) without inner vertices.
    pub fn diagonals(&self) -> Vec<(VertexId, VertexId)> {
        let on_perimeter: BTreeSet<VertexId> = self.perimeter.iter().copied().collect();
        let mut out: Vec<(VertexId, VertexId)> = self
            .edges
            .iter()
            .filter(|e| {
                e.is_interior() && on_perimeter.contains(&e.lo) && on_perimeter.contains(&e.hi)
            })
            .map(|e| (e.lo, e.hi))
            .collect();
        out.sort();
        out
    }

    /// Non-base perimeter vertices, walked along the perimeter
    /// starting just past the base edge.
    pub fn non_base_vertices(&self) -> Vec<VertexId> {
        let n = self.perimeter.len();
        (2..n).map(|k| self.perimeter[(self.base_pos + k) % n]).collect()
    }

    fn require_plain(&self) -> Result<(), PolygonError> {
        if self.perimeter.len() < 3 || !self.inner_vertices.is_empty() {
            return Err(PolygonError::DegeneratePolygon);
        }
        Ok(())
    }

    /// All ears, one entry per tip of triangle degree 1, in perimeter
    /// order. A triangulated polygon always has at least two.
    pub fn find_ears(&self) -> Result<Vec<EarInfo>, PolygonError> {
        self.require_plain()?;
        let mut out = Vec::new();
        for &v in &self.perimeter {
            if self.fans[v.index()].len() != 1 {
                continue;
            }
            let (t, p) = self.fans[v.index()][0];
            let tri = self.triangles[t];
            let e_in = (tri[(p as usize + 2) % 3], v);
            let e_out = (v, tri[(p as usize + 1) % 3]);
            out.push(EarInfo { triangle: t, tip: v, perimeter_edges: [e_in, e_out] });
        }
        Ok(out)
    }

    /// Deterministic ear-cut order toward the base: among the eligible
    /// non-base ear tips always cut the one with the smallest perimeter
    /// position. Returns `(triangle, tip)` pairs covering every
    /// triangle.
    pub fn ear_cut_order(&self) -> Result<Vec<(usize, VertexId)>, PolygonError> {
        self.require_plain()?;
        let n = self.perimeter.len();
        let mut faces: BTreeMap<[VertexId; 3], usize> = BTreeMap::new();
        for (i, t) in self.triangles.iter().enumerate() {
            let mut key = *t;
            key.sort();
            faces.insert(key, i);
        }
        let mut next: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let mut prev: Vec<usize> = (0..n).map(|i| (i + n - 1) % n).collect();
        let mut alive = vec![true; n];
        let base_a = self.base_pos;
        let base_b = (self.base_pos + 1) % n;
        let mut order = Vec::with_capacity(n - 2);
        for _ in 0..n - 2 {
            let mut found = None;
            for i in 0..n {
                if !alive[i] || i == base_a || i == base_b {
                    continue;
                }
                let mut key =
                    [self.perimeter[prev[i]], self.perimeter[i], self.perimeter[next[i]]];
                key.sort();
                if let Some(&t) = faces.get(&key) {
                    found = Some((i, key, t));
                    break;
                }
            }
            let Some((i, key, t)) = found else {
                return Err(PolygonError::InvalidPolygon("ear cutting got stuck"));
            };
            faces.remove(&key);
            order.push((t, self.perimeter[i]));
            alive[i] = false;
            next[prev[i]] = next[i];
            prev[next[i]] = prev[i];
        }
        Ok(order)
    }

    /// The base-induced bijection between non-base vertices and
    /// triangles, with the dual-tree parent of each triangle.
    pub fn associate(&self) -> Result<VertexTriangleAssociation, PolygonError> {
        let order = self.ear_cut_order()?;
        let mut vertex_triangle: Vec<Option<usize>> = vec![None; self.vertex_count];
        let mut triangle_vertex: Vec<VertexId> = vec![VertexId(u32::MAX); self.triangles.len()];
        for &(t, v) in &order {
            vertex_triangle[v.index()] = Some(t);
            triangle_vertex[t] = v;
        }
        // the parent of an ear is the other triangle on its closing edge
        let mut parent: Vec<Option<usize>> = vec![None; self.triangles.len()];
        let mut cut: Vec<bool> = vec![false; self.triangles.len()];
        for &(t, v) in &order {
            cut[t] = true;
            let slots = self.slot_edge[t];
            let vpos = self.triangles[t].iter().position(|&x| x == v).unwrap();
            // the edge opposite the tip
            let closing = slots[(vpos + 1) % 3];
            let e = &self.edges[closing];
            for side in [e.fwd, e.bwd].into_iter().flatten() {
                if side.0 != t {
                    parent[t] = Some(side.0);
                }
            }
        }
        let _ = cut;
        Ok(VertexTriangleAssociation { vertex_triangle, triangle_vertex, parent, cut_order: order })
    }

    /// Recover the unique orientation assignment generating the given
    /// numbering on the non-base vertices, by iterated ear cutting:
    /// each cut ear takes the tip's current adjusted value (which must
    /// be 1 or 2), and that value is subtracted from both neighbours.
    pub fn decode_numbering(
        &self,
        numbering: &VertexNumbering,
    ) -> Result<OrientationAssignment, PolygonError> {
        self.require_plain()?;
        if numbering.0.len() != self.vertex_count {
            return Err(PolygonError::InvalidPolygon("numbering length mismatch"));
        }
        let n = self.perimeter.len();
        let mut faces: BTreeMap<[VertexId; 3], usize> = BTreeMap::new();
        for (i, t) in self.triangles.iter().enumerate() {
            let mut key = *t;
            key.sort();
            faces.insert(key, i);
        }
        let mut vals: Vec<u8> = numbering.0.clone();
        let mut next: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let mut prev: Vec<usize> = (0..n).map(|i| (i + n - 1) % n).collect();
        let mut alive = vec![true; n];
        let base_a = self.base_pos;
        let base_b = (self.base_pos + 1) % n;
        let mut assignment = vec![0u8; self.triangles.len()];
        for _ in 0..n - 2 {
            let mut found = None;
            for i in 0..n {
                if !alive[i] || i == base_a || i == base_b {
                    continue;
                }
                let mut key =
                    [self.perimeter[prev[i]], self.perimeter[i], self.perimeter[next[i]]];
                key.sort();
                if let Some(&t) = faces.get(&key) {
                    found = Some((i, key, t));
                    break;
                }
            }
            let Some((i, key, t)) = found else {
                return Err(PolygonError::InvalidPolygon("ear cutting got stuck"));
            };
            let tip = self.perimeter[i];
            let value = vals[tip.index()];
            if value == 0 {
                return Err(PolygonError::NoPreimage { vertex: tip });
            }
            assignment[t] = value;
            let (a, c) = (self.perimeter[prev[i]], self.perimeter[next[i]]);
            vals[a.index()] = (vals[a.index()] + 3 - value) % 3;
            vals[c.index()] = (vals[c.index()] + 3 - value) % 3;
            faces.remove(&key);
            alive[i] = false;
            next[prev[i]] = next[i];
            prev[next[i]] = prev[i];
        }
        Ok(OrientationAssignment(assignment))
    }

    /// Per non-base vertex, the orientation of its vertex-triangle.
    /// Bijective with the assignments: every triangle is exactly one
    /// vertex's vertex-triangle.
    pub fn x1x2_code(
        &self,
        a: &OrientationAssignment,
    ) -> Result<X1X2Code, PolygonError> {
        if a.0.len() != self.triangles.len() {
            return Err(PolygonError::InvalidPolygon("assignment length mismatch"));
        }
        let assoc = self.associate()?;
        let vertices = self.non_base_vertices();
        let symbols = vertices
            .iter()
            .map(|v| a.0[assoc.vertex_triangle[v.index()].unwrap()])
            .collect();
        Ok(X1X2Code { vertices, symbols })
    }

    /// Check, over all assignments, that flipping only a vertex's own
    /// vertex-triangle always moves its value by exactly +1 mod 3, for
    /// every fixed code of the other vertices — and that the pairs stay
    /// distinct after adding any constant to any one vertex's column.
    pub fn verify_difference_property(&self) -> Result<DifferenceOutcome, PolygonError> {
        let assoc = self.associate()?;
        let nb = self.non_base_vertices();
        let t = self.triangles.len();
        if t > 24 {
            return Err(PolygonError::TooLarge);
        }
        // value table: per assignment mask, the numbering at the
        // non-base vertices
        let masks = 1u64 << t;
        let mut table: Vec<Vec<u8>> = Vec::with_capacity(masks as usize);
        for mask in 0..masks {
            let a = OrientationAssignment::from_mask(t, mask);
            let n = cv3_from_ct2(self, &a).expect("total assignment");
            table.push(nb.iter().map(|v| n.0[v.index()]).collect());
        }
        let mut pairs_checked = 0u64;
        for (xi, &x) in nb.iter().enumerate() {
            let tx = assoc.vertex_triangle[x.index()].unwrap();
            let bit = 1u64 << tx;
            for mask in 0..masks {
                if mask & bit != 0 {
                    continue;
                }
                let v1 = table[mask as usize][xi];
                let v2 = table[(mask | bit) as usize][xi];
                pairs_checked += 1;
                if v2 != (v1 + 1) % 3 {
                    return Ok(DifferenceOutcome::Violation { vertex: x, mask });
                }
                // invariance: shifting any one column keeps the pair distinct
                for shift in 1..3u8 {
                    if (v2 + shift) % 3 == (v1 + shift) % 3 {
                        return Ok(DifferenceOutcome::Violation { vertex: x, mask });
                    }
                }
            }
        }
        Ok(DifferenceOutcome::Holds { pairs_checked })
    }

    /// Cap a non-base perimeter vertex: join its two neighbours with a
    /// new triangle, turning the tip into an inner vertex.
    pub fn add_ear(&self, tip: VertexId) -> Result<PolygonTriangulation, PolygonError> {
        let n = self.perimeter.len();
        let pos = self
            .perimeter
            .iter()
            .position(|&v| v == tip)
            .ok_or(PolygonError::NotOnPerimeter)?;
        if self.is_base_vertex(tip) {
            return Err(PolygonError::TipOnBase);
        }
        debug_assert!(n >= 3);
        let prev = self.perimeter[(pos + n - 1) % n];
        let next = self.perimeter[(pos + 1) % n];
        let mut triangles = self.triangles.clone();
        triangles.push([next, tip, prev]);
        let (ba, bb) = self.base_edge();
        let perimeter: Vec<VertexId> =
            self.perimeter.iter().copied().filter(|&v| v != tip).collect();
        let m = perimeter.len();
        let base_pos = (0..m)
            .find(|&i| perimeter[i] == ba && perimeter[(i + 1) % m] == bb)
            .expect("base edge survives an ear addition");
        Self::from_parts(perimeter, base_pos, triangles)
    }

    /// Exact number of distinct numberings restricted to everything
    /// except the two base vertices, by exhausting all `2^t`
    /// assignments.
    pub fn distinct_numbering_count(&self, max_triangles: usize) -> Result<u64, PolygonError> {
        let t = self.triangles.len();
        if t > max_triangles || t > 62 {
            return Err(PolygonError::TooLarge);
        }
        let (ba, bb) = self.base_edge();
        let tracked: Vec<usize> = (0..self.vertex_count)
            .filter(|&v| VertexId(v as u32) != ba && VertexId(v as u32) != bb)
            .collect();
        if tracked.len() > 31 {
            return Err(PolygonError::TooLarge);
        }
        let mut seen: BTreeSet<u64> = BTreeSet::new();
        let mut sums = vec![0u8; self.vertex_count];
        for mask in 0..(1u64 << t) {
            sums.fill(0);
            for (i, tri) in self.triangles.iter().enumerate() {
                let val = 1 + ((mask >> i) & 1) as u8;
                for v in tri {
                    sums[v.index()] = (sums[v.index()] + val) % 3;
                }
            }
            let mut packed = 0u64;
            for (k, &v) in tracked.iter().enumerate() {
                packed |= (sums[v] as u64) << (2 * k);
            }
            seen.insert(packed);
        }
        Ok(seen.len() as u64)
    }
}

/// One ear: a triangle with two perimeter edges meeting at a tip of
/// triangle degree 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EarInfo {
    pub triangle: usize,
    pub tip: VertexId,
    pub perimeter_edges: [(VertexId, VertexId); 2],
}

/// The bijection between non-base vertices and triangles induced by
/// cutting ears toward the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexTriangleAssociation {
    /// Per vertex, its triangle; `None` for the two base vertices.
    pub vertex_triangle: Vec<Option<usize>>,
    /// Per triangle, its vertex.
    pub triangle_vertex: Vec<VertexId>,
    /// Per triangle, the dual-tree parent toward the base.
    pub parent: Vec<Option<usize>>,
    /// `(triangle, tip)` pairs in deterministic cut order.
    pub cut_order: Vec<(usize, VertexId)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct X1X2Code {
    pub vertices: Vec<VertexId>,
    pub symbols: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DifferenceOutcome {
    Holds { pairs_checked: u64 },
    Violation { vertex: VertexId, mask: u64 },
}

fn disk_dual_connected(n_triangles: usize, edges: &[EdgeOcc]) -> bool {
    if n_triangles == 0 {
        return true;
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

/// Exact Catalan count of triangulated polygons on a base with `v`
/// vertices, via the standard convolution recurrence.
pub fn catalan_count(v: usize) -> u64 {
    assert!((2..=35).contains(&v), "catalan_count overflows u64 beyond v = 35");
    let n = v - 2;
    let mut c = vec![0u64; n + 1];
    c[0] = 1;
    for i in 1..=n {
        for j in 0..i {
            c[i] += c[j] * c[i - 1 - j];
        }
    }
    c[n]
}

/// Stream of all triangulated polygons on a base with `v` vertices,
/// each exactly once, in genealogical depth-first order.
///
/// Growth step: an ear may be added on any perimeter edge except the
/// base and the edges between the base and the most recently added
/// ear; this makes every diagonal set reachable by exactly one growth
/// history.
pub fn enumerate_polygons_on_base(v: usize) -> PolygonEnumerator {
    assert!(v >= 2);
    PolygonEnumerator {
        target: v,
        stack: vec![Frame { chain: vec![0, 1], triangles: Vec::new(), free_from: 0 }],
    }
}

struct Frame {
    chain: Vec<u32>,
    triangles: Vec<[u32; 3]>,
    free_from: usize,
}

pub struct PolygonEnumerator {
    target: usize,
    stack: Vec<Frame>,
}

impl Iterator for PolygonEnumerator {
    type Item = PolygonTriangulation;

    fn next(&mut self) -> Option<PolygonTriangulation> {
        while let Some(frame) = self.stack.pop() {
            if frame.chain.len() == self.target {
                return Some(emit(&frame));
            }
            let edges = frame.chain.len() - 1;
            let new_label = frame.chain.len() as u32;
            for j in (frame.free_from..edges).rev() {
                let mut chain = frame.chain.clone();
                chain.insert(j + 1, new_label);
                let mut triangles = frame.triangles.clone();
                triangles.push([frame.chain[j], new_label, frame.chain[j + 1]]);
                self.stack.push(Frame { chain, triangles, free_from: j });
            }
        }
        None
    }
}

fn emit(frame: &Frame) -> PolygonTriangulation {
    let v = frame.chain.len();
    let mut pos = vec![0u32; v];
    for (i, &label) in frame.chain.iter().enumerate() {
        pos[label as usize] = i as u32;
    }
    let perimeter: Vec<VertexId> = (0..v as u32).map(VertexId).collect();
    let triangles: Vec<Triple> = frame
        .triangles
        .iter()
        .map(|t| {
            [
                VertexId(pos[t[0] as usize]),
                VertexId(pos[t[1] as usize]),
                VertexId(pos[t[2] as usize]),
            ]
        })
        .collect();
    PolygonTriangulation::from_parts(perimeter, v - 1, triangles)
        .expect("genealogical growth emits valid polygons")
}

/// Glue two polygons with identical perimeter cycles and base into a
/// closed triangulation. The second polygon's triangle senses are
/// inverted on combination; `n` common diagonals yield `n` double
/// edges.
pub fn combine_polygons(
    inner: &PolygonTriangulation,
    outer: &PolygonTriangulation,
) -> Result<Triangulation, PolygonError> {
    if inner.inner_count() != 0 || outer.inner_count() != 0 {
        return Err(PolygonError::DegeneratePolygon);
    }
    let n = inner.perimeter_len();
    if outer.perimeter_len() != n {
        return Err(PolygonError::PerimeterMismatch);
    }
    // align the outer perimeter by rotation only
    let rot = (0..n).find(|&r| {
        (0..n).all(|i| outer.perimeter[(r + i) % n] == inner.perimeter[i])
    });
    let Some(rot) = rot else {
        return Err(PolygonError::PerimeterMismatch);
    };
    let inner_base = {
        let (a, b) = inner.base_edge();
        (a.min(b), a.max(b))
    };
    let outer_base = {
        let (a, b) = outer.base_edge();
        (a.min(b), a.max(b))
    };
    let _ = rot;
    if inner_base != outer_base {
        return Err(PolygonError::PerimeterMismatch);
    }
    let mut triples: Vec<Triple> = inner.triangles.clone();
    triples.extend(outer.triangles.iter().map(|t| [t[2], t[1], t[0]]));
    Triangulation::from_triples(n.max(inner.vertex_count), &triples).map_err(PolygonError::Graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes;

    fn fan(v: usize) -> PolygonTriangulation {
        // all diagonals from vertex 0
        let perimeter: Vec<u32> = (0..v as u32).collect();
        let diagonals: Vec<(u32, u32)> = (2..v as u32 - 1).map(|k| (0, k)).collect();
        PolygonTriangulation::from_diagonals(&perimeter, (v as u32 - 1, 0), &diagonals).unwrap()
    }

    #[test]
    fn catalan_sequence() {
        let expect = [1u64, 1, 2, 5, 14, 42, 132];
        for (i, &c) in expect.iter().enumerate() {
            assert_eq!(catalan_count(i + 2), c);
        }
    }

    #[test]
    fn enumeration_matches_catalan_and_is_duplicate_free() {
        for v in 2..=9 {
            let polys: Vec<_> = enumerate_polygons_on_base(v).collect();
            assert_eq!(polys.len() as u64, catalan_count(v), "v={v}");
            let mut seen = BTreeSet::new();
            for p in &polys {
                assert!(seen.insert(p.diagonals()), "duplicate diagonal set at v={v}");
                assert_eq!(p.triangles().len(), v - 2);
                assert_eq!(p.perimeter_len(), v);
            }
        }
    }

    #[test]
    fn degenerate_start_polygon() {
        let polys: Vec<_> = enumerate_polygons_on_base(2).collect();
        assert_eq!(polys.len(), 1);
        assert_eq!(polys[0].perimeter_len(), 2);
        assert_eq!(polys[0].triangles().len(), 0);
        assert_eq!(polys[0].edges().len(), 1);
    }

    #[test]
    fn every_hexagon_has_at_least_two_ears() {
        for p in enumerate_polygons_on_base(6) {
            let ears = p.find_ears().unwrap();
            assert!(ears.len() >= 2);
            assert!(ears.iter().any(|e| !p.is_base_vertex(e.tip)));
            // tips of distinct ears are never adjacent for v >= 4
            for a in &ears {
                for b in &ears {
                    if a.tip < b.tip {
                        assert!(!p
                            .edges()
                            .iter()
                            .any(|e| (e.lo, e.hi) == (a.tip.min(b.tip), a.tip.max(b.tip))));
                    }
                }
            }
        }
    }

    #[test]
    fn triangle_reports_an_ear_per_qualifying_tip() {
        let p = PolygonTriangulation::from_diagonals(&[0, 1, 2], (2, 0), &[]).unwrap();
        let ears = p.find_ears().unwrap();
        assert_eq!(ears.len(), 3);
        let non_base: Vec<_> = ears.iter().filter(|e| !p.is_base_vertex(e.tip)).collect();
        assert_eq!(non_base.len(), 1);
        assert_eq!(non_base[0].tip, VertexId(1));
    }

    #[test]
    fn fan_has_exactly_two_ears() {
        let p = fan(6);
        let ears = p.find_ears().unwrap();
        assert_eq!(ears.len(), 2);
        let tips: Vec<u32> = ears.iter().map(|e| e.tip.0).collect();
        assert_eq!(tips, vec![1, 5]);
        for e in &ears {
            assert_eq!(p.triangle_degree(e.tip).unwrap(), 1);
        }
    }

    #[test]
    fn association_is_a_bijection_and_matches_the_dual_tree() {
        for v in 3..=7 {
            for p in enumerate_polygons_on_base(v) {
                let assoc = p.associate().unwrap();
                let mut seen = BTreeSet::new();
                for &x in &p.non_base_vertices() {
                    let t = assoc.vertex_triangle[x.index()].expect("every non-base vertex");
                    assert!(seen.insert(t));
                    assert_eq!(assoc.triangle_vertex[t], x);
                }
                assert_eq!(seen.len(), p.triangles().len());
                // independent route: root the dual tree at the base
                // triangle, each triangle's vertex is the one it does
                // not share with its parent
                let root = {
                    let occ = p.perimeter_occ(p.base_pos());
                    let e = &p.edges()[occ];
                    e.fwd.or(e.bwd).unwrap().0
                };
                assert_eq!(assoc.parent[root], None);
                for (t, par) in assoc.parent.iter().enumerate() {
                    if let Some(par) = par {
                        let shared: Vec<VertexId> = p.triangles()[t]
                            .iter()
                            .copied()
                            .filter(|v| p.triangles()[*par].contains(v))
                            .collect();
                        assert_eq!(shared.len(), 2);
                        let own = p.triangles()[t]
                            .iter()
                            .copied()
                            .find(|v| !shared.contains(v))
                            .unwrap();
                        assert_eq!(assoc.triangle_vertex[t], own);
                    } else {
                        assert_eq!(t, root);
                        let (a, b) = p.base_edge();
                        let own = p.triangles()[t]
                            .iter()
                            .copied()
                            .find(|&v| v != a && v != b)
                            .unwrap();
                        assert_eq!(assoc.triangle_vertex[t], own);
                    }
                }
            }
        }
    }

    #[test]
    fn association_depends_on_the_base() {
        let perimeter = [0u32, 1, 2, 3, 4];
        let diagonals = [(0u32, 2), (2, 4)];
        let p1 = PolygonTriangulation::from_diagonals(&perimeter, (4, 0), &diagonals).unwrap();
        let p2 = PolygonTriangulation::from_diagonals(&perimeter, (2, 3), &diagonals).unwrap();
        let a1 = p1.associate().unwrap();
        let a2 = p2.associate().unwrap();
        assert_ne!(a1.vertex_triangle, a2.vertex_triangle);
    }

    #[test]
    fn single_triangle_decode() {
        let p = PolygonTriangulation::from_diagonals(&[0, 1, 2], (2, 0), &[]).unwrap();
        let mut numbering = VertexNumbering(vec![0; 3]);
        numbering.0[1] = 1;
        let a = p.decode_numbering(&numbering).unwrap();
        assert_eq!(a.0, vec![1]);
    }

    #[test]
    fn decode_inverts_numbering_exhaustively() {
        for v in 3..=7 {
            for p in enumerate_polygons_on_base(v) {
                let t = p.triangles().len();
                let mut images = BTreeSet::new();
                for mask in 0..(1u64 << t) {
                    let a = OrientationAssignment::from_mask(t, mask);
                    let full = cv3_from_ct2(&p, &a).unwrap();
                    let mut masked = full.clone();
                    let (ba, bb) = p.base_edge();
                    masked.0[ba.index()] = 0;
                    masked.0[bb.index()] = 0;
                    assert!(images.insert(masked.clone()), "numbering collision at v={v}");
                    let decoded = p.decode_numbering(&masked).unwrap();
                    assert_eq!(decoded, a, "decode mismatch at v={v} mask={mask}");
                }
                assert_eq!(images.len() as u64, 1 << (v - 2));
            }
        }
    }

    #[test]
    fn unreachable_numbering_has_no_preimage() {
        // quadrilateral with diagonal {0, 2}: vertex 1 is an ear tip,
        // its partial value is always 1 or 2
        let p = PolygonTriangulation::from_diagonals(&[0, 1, 2, 3], (3, 0), &[(0, 2)]).unwrap();
        for x in 0..3u8 {
            let numbering = VertexNumbering(vec![0, 0, x, 0]);
            let none_generates = (0..4u64).all(|mask| {
                let a = OrientationAssignment::from_mask(2, mask & 0b11);
                let n = cv3_from_ct2(&p, &a).unwrap();
                n.0[1] != 0 || n.0[2] != x
            });
            assert!(none_generates);
        }
        let numbering = VertexNumbering(vec![0, 0, 1, 0]);
        assert_eq!(
            p.decode_numbering(&numbering),
            Err(PolygonError::NoPreimage { vertex: VertexId(1) })
        );
    }

    #[test]
    fn code_is_a_bijection_with_assignments() {
        for v in 3..=8 {
            for p in enumerate_polygons_on_base(v) {
                let t = p.triangles().len();
                let mut codes = BTreeSet::new();
                for mask in 0..(1u64 << t) {
                    let a = OrientationAssignment::from_mask(t, mask);
                    let code = p.x1x2_code(&a).unwrap();
                    assert!(codes.insert(code.symbols.clone()));
                    // complement flips every symbol
                    let cc = p.x1x2_code(&schemes::complement(&a)).unwrap();
                    for (s, c) in code.symbols.iter().zip(&cc.symbols) {
                        assert_eq!(*c, 3 - *s);
                    }
                }
                assert_eq!(codes.len() as u64, 1 << (v - 2));
            }
        }
    }

    #[test]
    fn difference_property_on_all_pentagons() {
        for p in enumerate_polygons_on_base(5) {
            match p.verify_difference_property().unwrap() {
                DifferenceOutcome::Holds { pairs_checked } => {
                    // 3 vertices, 4 pairs each
                    assert_eq!(pairs_checked, 12);
                }
                v => panic!("difference property violated: {v:?}"),
            }
        }
    }

    #[test]
    fn ear_addition_turns_a_pair_into_a_trio() {
        // square with diagonal; watch vertex 1 while capping it
        let p = PolygonTriangulation::from_diagonals(&[0, 1, 2, 3], (3, 0), &[(0, 2)]).unwrap();
        let values_at = |poly: &PolygonTriangulation, v: usize| -> BTreeSet<u8> {
            let t = poly.triangles().len();
            (0..(1u64 << t))
                .map(|m| {
                    cv3_from_ct2(poly, &OrientationAssignment::from_mask(t, m)).unwrap().0[v]
                })
                .collect()
        };
        let before = values_at(&p, 1);
        assert_eq!(before.len(), 2);
        let q = p.add_ear(VertexId(1)).unwrap();
        assert_eq!(q.perimeter_len(), 3);
        assert_eq!(q.inner_vertices(), &[VertexId(1)]);
        assert_eq!(q.triangles().len(), 3);
        let after = values_at(&q, 1);
        assert_eq!(after.len(), 3);
    }

    #[test]
    fn ear_addition_rejects_base_tips() {
        let p = fan(5);
        let (a, b) = p.base_edge();
        assert_eq!(p.add_ear(a), Err(PolygonError::TipOnBase));
        assert_eq!(p.add_ear(b), Err(PolygonError::TipOnBase));
        assert_eq!(p.add_ear(VertexId(99)), Err(PolygonError::NotOnPerimeter));
    }

    #[test]
    fn ear_addition_reaches_the_degenerate_polygon() {
        let mut p = fan(6);
        for _ in 0..4 {
            let tip = p.non_base_vertices()[0];
            p = p.add_ear(tip).unwrap();
        }
        assert!(p.is_degenerate());
        assert_eq!(p.perimeter_len(), 2);
        assert_eq!(p.inner_count(), 4);
        assert_eq!(p.triangles().len(), 8); // 2(v-2) for v = 6
        // Euler-style counts on the degenerate disk
        let e = p.edges().len();
        let t = p.triangles().len();
        assert_eq!(2 * e, 3 * t + 2);
        assert_eq!(t as i64, 2 + 2 * (p.inner_count() as i64 - 1));
    }

    #[test]
    fn distinct_numbering_counts() {
        // plain polygons: exactly 2^(v-2)
        for v in 3..=7 {
            for p in enumerate_polygons_on_base(v) {
                assert_eq!(p.distinct_numbering_count(16).unwrap(), 1 << (v - 2));
            }
        }
        // single triangle
        let tri = PolygonTriangulation::from_diagonals(&[0, 1, 2], (2, 0), &[]).unwrap();
        assert_eq!(tri.distinct_numbering_count(16).unwrap(), 2);
        // pentagon wheel: hub as inner vertex
        let wheel = PolygonTriangulation::from_parts(
            (0..5).map(VertexId).collect(),
            4,
            (0..5)
                .map(|i| [VertexId(i), VertexId((i + 1) % 5), VertexId(5)])
                .collect(),
        )
        .unwrap();
        assert_eq!(wheel.inner_count(), 1);
        let count = wheel.distinct_numbering_count(16).unwrap();
        assert!(count >= 24, "wheel count {count} below 3 * 2^3");
    }

    #[test]
    fn combine_shares_a_diagonal_into_a_double_edge() {
        let polys: Vec<_> = enumerate_polygons_on_base(4).collect();
        assert_eq!(polys.len(), 2);
        let g = combine_polygons(&polys[0], &polys[0]).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert!(!g.is_simple());
        let doubles = g
            .edges()
            .iter()
            .zip(g.edges().iter().skip(1))
            .filter(|(a, b)| (a.lo, a.hi) == (b.lo, b.hi))
            .count();
        assert_eq!(doubles, 1);
    }

    #[test]
    fn combine_distinct_hexagons_gives_a_simple_graph() {
        let polys: Vec<_> = enumerate_polygons_on_base(6).collect();
        // find a pair with disjoint diagonal sets
        let mut found = false;
        'outer: for a in &polys {
            for b in &polys {
                let da: BTreeSet<_> = a.diagonals().into_iter().collect();
                let db: BTreeSet<_> = b.diagonals().into_iter().collect();
                if da.is_disjoint(&db) {
                    let g = combine_polygons(a, b).unwrap();
                    assert_eq!(g.vertex_count(), 6);
                    assert!(g.is_simple());
                    found = true;
                    break 'outer;
                }
            }
        }
        assert!(found);
    }

    #[test]
    fn combine_rejects_mismatched_perimeters() {
        let a = enumerate_polygons_on_base(4).next().unwrap();
        let b = enumerate_polygons_on_base(5).next().unwrap();
        assert_eq!(combine_polygons(&a, &b), Err(PolygonError::PerimeterMismatch));
    }

    #[test]
    fn crossed_fans_combine_into_a_separating_triangle() {
        // inner fan from 0, outer fan from 2: the cycle 0-2-4 is
        // pairwise adjacent but never a face
        let inner = fan(6);
        let outer = PolygonTriangulation::from_diagonals(
            &[0, 1, 2, 3, 4, 5],
            (5, 0),
            &[(2, 0), (2, 4), (2, 5)],
        )
        .unwrap();
        let g = combine_polygons(&inner, &outer).unwrap();
        let seps = g.find_separating_triangles();
        assert!(seps.iter().any(|s| s.vertices == [VertexId(0), VertexId(2), VertexId(4)]));
    }

    #[test]
    fn diagonal_triangle_bounding_a_face_is_not_separating() {
        // the central triangle of three chained diagonals is a face,
        // so its vertex triple must not be reported
        let p = PolygonTriangulation::from_diagonals(
            &[0, 1, 2, 3, 4, 5],
            (5, 0),
            &[(0, 2), (2, 4), (0, 4)],
        )
        .unwrap();
        let g = combine_polygons(&p, &fan(6)).unwrap();
        let seps = g.find_separating_triangles();
        assert!(!seps.iter().any(|s| s.vertices == [VertexId(0), VertexId(2), VertexId(4)]));
    }

    #[test]
    fn from_diagonals_rejects_bad_input() {
        assert!(PolygonTriangulation::from_diagonals(&[0, 1, 2, 3], (3, 0), &[]).is_err());
        assert!(
            PolygonTriangulation::from_diagonals(&[0, 1, 2, 3], (3, 0), &[(0, 1)]).is_err()
        );
        assert!(PolygonTriangulation::from_diagonals(&[0, 1, 2, 3], (1, 3), &[(0, 2)]).is_err());
    }

    #[test]
    fn eq6_holds_on_enumerated_and_grown_instances() {
        for v in 3..=7 {
            for p in enumerate_polygons_on_base(v) {
                assert_eq!(
                    p.triangles().len() as i64,
                    p.perimeter_len() as i64 + 2 * (p.inner_count() as i64 - 1)
                );
                let mut state = p.clone();
                while let Some(&tip) = state.non_base_vertices().first() {
                    state = state.add_ear(tip).unwrap();
                    assert_eq!(
                        state.triangles().len() as i64,
                        state.perimeter_len() as i64 + 2 * (state.inner_count() as i64 - 1)
                    );
                }
            }
        }
    }
}
