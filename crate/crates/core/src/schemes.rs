//! The three colouring schemes on a triangulation and the conversions
//! between them.
//!
//! * `VertexColoring` — proper 4-colouring of the vertices (C, M, Y, K).
//! * `EdgeColoring` — Tait colouring: every triangle carries the three
//!   edge colours r = 0, g = 1, b = 2.
//! * `OrientationAssignment` — a value in {1, 2} per triangle; summing
//!   the values around a vertex mod 3 gives its `VertexNumbering`.
//!
//! An assignment is *good* when every vertex sums to 0; good
//! assignments carry exactly the same information as a proper vertex
//! 4-colouring, which is what the solver exploits.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{TriangleHost, VertexId};

/// The four vertex colours, encoded as the Klein four-group
/// (two bits each) so that edge colours fall out of a XOR.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum VertexColor {
    C,
    M,
    Y,
    K,
}

pub const VERTEX_COLORS: [VertexColor; 4] =
    [VertexColor::C, VertexColor::M, VertexColor::Y, VertexColor::K];

impl VertexColor {
    pub fn bits(self) -> u8 {
        match self {
            VertexColor::C => 0b00,
            VertexColor::M => 0b01,
            VertexColor::Y => 0b10,
            VertexColor::K => 0b11,
        }
    }

    pub fn from_bits(bits: u8) -> Self {
        VERTEX_COLORS[(bits & 0b11) as usize]
    }

    pub fn letter(self) -> char {
        match self {
            VertexColor::C => 'C',
            VertexColor::M => 'M',
            VertexColor::Y => 'Y',
            VertexColor::K => 'K',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'C' => Some(VertexColor::C),
            'M' => Some(VertexColor::M),
            'Y' => Some(VertexColor::Y),
            'K' => Some(VertexColor::K),
            _ => None,
        }
    }
}

impl fmt::Display for VertexColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

pub const EDGE_COLOR_LETTERS: [char; 3] = ['r', 'g', 'b'];

/// Proper vertex 4-colouring; indexed by vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct VertexColoring(pub Vec<VertexColor>);

impl VertexColoring {
    pub fn color(&self, v: VertexId) -> VertexColor {
        self.0[v.index()]
    }

    pub fn distinct_colors(&self) -> usize {
        let set: BTreeSet<VertexColor> = self.0.iter().copied().collect();
        set.len()
    }

    pub fn is_proper(&self, host: &impl TriangleHost) -> bool {
        self.0.len() == host.vertex_count()
            && host.edges().iter().all(|e| self.0[e.lo.index()] != self.0[e.hi.index()])
    }
}

/// Edge colours in {0, 1, 2}, indexed by edge occurrence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EdgeColoring(pub Vec<u8>);

impl EdgeColoring {
    /// Every triangle must carry all three colours.
    pub fn is_proper(&self, host: &impl TriangleHost) -> bool {
        self.0.len() == host.edges().len()
            && self.0.iter().all(|&c| c < 3)
            && host.slot_edge().iter().all(|slots| {
                let c = [self.0[slots[0]], self.0[slots[1]], self.0[slots[2]]];
                c[0] != c[1] && c[1] != c[2] && c[0] != c[2]
            })
    }
}

/// A value in {1, 2} per triangle.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrientationAssignment(pub Vec<u8>);

impl OrientationAssignment {
    pub fn from_mask(n: usize, mask: u64) -> Self {
        OrientationAssignment((0..n).map(|i| 1 + ((mask >> i) & 1) as u8).collect())
    }

    pub fn is_total(&self, host: &impl TriangleHost) -> bool {
        self.0.len() == host.triangle_count() && self.0.iter().all(|&v| v == 1 || v == 2)
    }
}

/// A value in {0, 1, 2} per vertex: the mod-3 sum of the incident
/// triangle values. Partial when computed over a polygon.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexNumbering(pub Vec<u8>);

impl VertexNumbering {
    pub fn value(&self, v: VertexId) -> u8 {
        self.0[v.index()]
    }

    pub fn all_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchemeError {
    ImproperInput,
    IncompleteAssignment,
    /// Colour propagation met a contradiction; the edge colouring does
    /// not come from any vertex 4-colouring.
    Inconsistent,
    /// The assignment is not good; the witness lists a triangle cycle
    /// along which propagation disagrees.
    NotGood { cycle: Vec<usize> },
}

impl fmt::Display for SchemeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeError::ImproperInput => write!(f, "input colouring is not proper"),
            SchemeError::IncompleteAssignment => {
                write!(f, "assignment does not cover all triangles")
            }
            SchemeError::Inconsistent => write!(f, "edge colouring admits no vertex colouring"),
            SchemeError::NotGood { cycle } => {
                write!(f, "assignment is not good; conflicting triangle cycle {cycle:?}")
            }
        }
    }
}

impl core::error::Error for SchemeError {}

/// Mod-3 sum of the incident triangle values, per vertex.
pub fn cv3_from_ct2(
    host: &impl TriangleHost,
    a: &OrientationAssignment,
) -> Result<VertexNumbering, SchemeError> {
    if !a.is_total(host) {
        return Err(SchemeError::IncompleteAssignment);
    }
    let mut sums = vec![0u8; host.vertex_count()];
    for (t, &val) in host.triangles().iter().zip(&a.0) {
        for v in t {
            sums[v.index()] = (sums[v.index()] + val) % 3;
        }
    }
    Ok(VertexNumbering(sums))
}

/// True iff the induced numbering is identically zero.
pub fn is_good(host: &impl TriangleHost, a: &OrientationAssignment) -> bool {
    matches!(cv3_from_ct2(host, a), Ok(n) if n.all_zero())
}

/// Swap the 1s and 2s. An involution; the complement of a good
/// assignment is good.
pub fn complement(a: &OrientationAssignment) -> OrientationAssignment {
    OrientationAssignment(a.0.iter().map(|&v| 3 - v).collect())
}

fn klein_edge_color(a: VertexColor, b: VertexColor) -> Option<u8> {
    match a.bits() ^ b.bits() {
        0b01 => Some(0),
        0b10 => Some(1),
        0b11 => Some(2),
        _ => None,
    }
}

fn klein_shift(color: u8) -> u8 {
    match color {
        0 => 0b01,
        1 => 0b10,
        _ => 0b11,
    }
}

/// Edge colour from the endpoint colour pair, via the fixed Klein
/// pairing. Doubled edges receive equal colours on both occurrences.
pub fn v4c_to_e3c(
    host: &impl TriangleHost,
    c: &VertexColoring,
) -> Result<EdgeColoring, SchemeError> {
    if !c.is_proper(host) {
        return Err(SchemeError::ImproperInput);
    }
    let colors = host
        .edges()
        .iter()
        .map(|e| klein_edge_color(c.color(e.lo), c.color(e.hi)).unwrap())
        .collect();
    Ok(EdgeColoring(colors))
}

/// Inverse of [`v4c_to_e3c`]: seed one vertex, then propagate Klein
/// codes across the edges. The seed fixes which of the 24 colourings
/// of the orbit is returned.
pub fn e3c_to_v4c(
    host: &impl TriangleHost,
    ec: &EdgeColoring,
    seed_vertex: VertexId,
    seed_color: VertexColor,
) -> Result<VertexColoring, SchemeError> {
    if !ec.is_proper(host) {
        return Err(SchemeError::ImproperInput);
    }
    let n = host.vertex_count();
    if seed_vertex.index() >= n {
        return Err(SchemeError::ImproperInput);
    }
    let mut bits: Vec<Option<u8>> = vec![None; n];
    bits[seed_vertex.index()] = Some(seed_color.bits());
    let mut queue = VecDeque::from([seed_vertex]);
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in host.edges().iter().enumerate() {
        incident[e.lo.index()].push(i);
        incident[e.hi.index()].push(i);
    }
    while let Some(u) = queue.pop_front() {
        let ub = bits[u.index()].unwrap();
        for &ei in &incident[u.index()] {
            let e = &host.edges()[ei];
            let w = e.other(u);
            let want = ub ^ klein_shift(ec.0[ei]);
            match bits[w.index()] {
                None => {
                    bits[w.index()] = Some(want);
                    queue.push_back(w);
                }
                Some(have) if have != want => return Err(SchemeError::Inconsistent),
                _ => {}
            }
        }
    }
    if bits.iter().any(Option::is_none) {
        return Err(SchemeError::Inconsistent);
    }
    Ok(VertexColoring(bits.iter().map(|b| VertexColor::from_bits(b.unwrap())).collect()))
}

/// Orientation per triangle: 1 when the colours r, g, b follow the
/// stored cyclic slot order, 2 when they run against it.
pub fn e3c_to_ct2(
    host: &impl TriangleHost,
    ec: &EdgeColoring,
) -> Result<OrientationAssignment, SchemeError> {
    if !ec.is_proper(host) {
        return Err(SchemeError::ImproperInput);
    }
    let values = host
        .slot_edge()
        .iter()
        .map(|slots| {
            let c0 = ec.0[slots[0]];
            let c1 = ec.0[slots[1]];
            if c1 == (c0 + 1) % 3 {
                1
            } else {
                2
            }
        })
        .collect();
    Ok(OrientationAssignment(values))
}

/// Colour the edges from an orientation assignment by breadth-first
/// propagation over the triangle adjacency, starting from `first_edge`
/// coloured `first_color`.
///
/// Inside a triangle with value 1 the colours step +1 per slot, with
/// value 2 they step -1. A contradiction means the assignment is not
/// good on some interior vertex; the offending triangle cycle is
/// reported.
pub fn ct2_to_e3c(
    host: &impl TriangleHost,
    a: &OrientationAssignment,
    first_edge: usize,
    first_color: u8,
) -> Result<EdgeColoring, SchemeError> {
    if !a.is_total(host) {
        return Err(SchemeError::IncompleteAssignment);
    }
    if first_edge >= host.edges().len() || first_color > 2 {
        return Err(SchemeError::ImproperInput);
    }
    let nt = host.triangle_count();
    let mut edge_color: Vec<Option<u8>> = vec![None; host.edges().len()];
    edge_color[first_edge] = Some(first_color);
    let mut parent: Vec<Option<usize>> = vec![None; nt];
    let mut done = vec![false; nt];
    let mut queue: VecDeque<usize> = VecDeque::new();
    let e0 = &host.edges()[first_edge];
    for side in [e0.fwd, e0.bwd].into_iter().flatten() {
        queue.push_back(side.0);
    }
    while let Some(t) = queue.pop_front() {
        if done[t] {
            continue;
        }
        let slots = host.slot_edge()[t];
        let Some(s0) = (0..3).find(|&s| edge_color[slots[s]].is_some()) else {
            continue;
        };
        done[t] = true;
        let step: i16 = if a.0[t] == 1 { 1 } else { 2 };
        let base = edge_color[slots[s0]].unwrap() as i16;
        for k in 1..3 {
            let s = (s0 + k) % 3;
            let want = ((base + step * k as i16) % 3) as u8;
            match edge_color[slots[s]] {
                None => edge_color[slots[s]] = Some(want),
                Some(have) if have != want => {
                    return Err(SchemeError::NotGood {
                        cycle: conflict_cycle(&parent, t, host, slots[s]),
                    })
                }
                _ => {}
            }
        }
        for s in 0..3 {
            let e = &host.edges()[slots[s]];
            for side in [e.fwd, e.bwd].into_iter().flatten() {
                if !done[side.0] {
                    if parent[side.0].is_none() && side.0 != t {
                        parent[side.0] = Some(t);
                    }
                    queue.push_back(side.0);
                }
            }
        }
    }
    if edge_color.iter().any(Option::is_none) {
        // reachable only on disconnected hosts, which never validate
        return Err(SchemeError::ImproperInput);
    }
    Ok(EdgeColoring(edge_color.iter().map(|c| c.unwrap()).collect()))
}

/// Walk both triangles of the conflicting edge up the propagation tree
/// until the paths meet; the joined walk is the offending cycle.
fn conflict_cycle(
    parent: &[Option<usize>],
    t: usize,
    host: &impl TriangleHost,
    conflict_edge: usize,
) -> Vec<usize> {
    let other = {
        let e = &host.edges()[conflict_edge];
        let mut o = t;
        for side in [e.fwd, e.bwd].into_iter().flatten() {
            if side.0 != t {
                o = side.0;
            }
        }
        o
    };
    let chain = |mut x: usize| {
        let mut path = vec![x];
        while let Some(p) = parent[x] {
            path.push(p);
            x = p;
        }
        path
    };
    let a = chain(t);
    let b = chain(other);
    let bset: BTreeSet<usize> = b.iter().copied().collect();
    let mut cycle: Vec<usize> = Vec::new();
    for &x in &a {
        cycle.push(x);
        if bset.contains(&x) {
            break;
        }
    }
    let meet = *cycle.last().unwrap();
    let tail: Vec<usize> = b.iter().copied().take_while(|&x| x != meet).collect();
    cycle.extend(tail.iter().rev());
    cycle
}

/// Seeds fixing one representative of the colouring orbits when
/// converting an orientation assignment all the way to vertex colours.
#[derive(Clone, Copy, Debug)]
pub struct ColorSeeds {
    pub edge: usize,
    pub edge_color: u8,
    pub vertex: VertexId,
    pub vertex_color: VertexColor,
}

impl Default for ColorSeeds {
    fn default() -> Self {
        ColorSeeds { edge: 0, edge_color: 0, vertex: VertexId(0), vertex_color: VertexColor::C }
    }
}

/// Good assignment to proper vertex colouring, via the edge colours.
/// Across a shared edge the two opposite vertices receive equal
/// colours exactly when the two triangle values differ.
pub fn ct2_to_v4c(
    host: &impl TriangleHost,
    a: &OrientationAssignment,
    seeds: ColorSeeds,
) -> Result<VertexColoring, SchemeError> {
    let ec = ct2_to_e3c(host, a, seeds.edge, seeds.edge_color)?;
    e3c_to_v4c(host, &ec, seeds.vertex, seeds.vertex_color)
}

/// All 24 colourings reachable by permuting the four colours.
pub fn orbit_v4c(
    host: &impl TriangleHost,
    c: &VertexColoring,
) -> Result<Vec<VertexColoring>, SchemeError> {
    if !c.is_proper(host) {
        return Err(SchemeError::ImproperInput);
    }
    let mut out = BTreeSet::new();
    for p in permutations4() {
        out.insert(VertexColoring(c.0.iter().map(|&col| p[col.bits() as usize]).collect()));
    }
    Ok(out.into_iter().collect())
}

/// All 6 colourings reachable by permuting the three edge colours.
pub fn orbit_e3c(
    host: &impl TriangleHost,
    ec: &EdgeColoring,
) -> Result<Vec<EdgeColoring>, SchemeError> {
    if !ec.is_proper(host) {
        return Err(SchemeError::ImproperInput);
    }
    let mut out = BTreeSet::new();
    for p in PERMS3 {
        out.insert(EdgeColoring(ec.0.iter().map(|&c| p[c as usize]).collect()));
    }
    Ok(out.into_iter().collect())
}

/// The assignment and its complement.
pub fn orbit_ct2(a: &OrientationAssignment) -> Vec<OrientationAssignment> {
    let mut out = BTreeSet::new();
    out.insert(a.clone());
    out.insert(complement(a));
    out.into_iter().collect()
}

const PERMS3: [[u8; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn permutations4() -> Vec<[VertexColor; 4]> {
    let mut out = Vec::with_capacity(24);
    let cs = VERTEX_COLORS;
    for i in 0..4 {
        for j in 0..4 {
            if j == i {
                continue;
            }
            for k in 0..4 {
                if k == i || k == j {
                    continue;
                }
                let l = 6 - i - j - k;
                out.push([cs[i], cs[j], cs[k], cs[l]]);
            }
        }
    }
    out
}

/// Colour of the far edge of a fan walk: starting from the first
/// occurrence of `occ_path` coloured `start_color`, rotate at each
/// shared vertex from the incoming to the outgoing occurrence, adding
/// the values of the crossed triangles mod 3.
///
/// For good assignments the result does not depend on the rotation
/// direction chosen at any step.
pub fn propagate_along_path(
    host: &impl TriangleHost,
    a: &OrientationAssignment,
    start_color: u8,
    occ_path: &[usize],
) -> Result<u8, SchemeError> {
    if !a.is_total(host) {
        return Err(SchemeError::IncompleteAssignment);
    }
    if occ_path.is_empty() || start_color > 2 {
        return Err(SchemeError::ImproperInput);
    }
    let mut color = start_color as u16;
    for w in occ_path.windows(2) {
        let (e, f) = (&host.edges()[w[0]], &host.edges()[w[1]]);
        let shared = if f.touches(e.lo) { e.lo } else { e.hi };
        if !f.touches(shared) {
            return Err(SchemeError::ImproperInput);
        }
        let (crossed, forward) =
            fan_sector(host, shared, w[0], w[1]).ok_or(SchemeError::ImproperInput)?;
        let sum: u16 = crossed.iter().map(|&t| a.0[t] as u16).sum();
        color = if forward { (color + sum) % 3 } else { (color + 2 * sum) % 3 };
    }
    Ok(color as u8)
}

/// Triangles crossed when rotating around `v` from occurrence `from`
/// to occurrence `to`; the flag is true for the forward fan direction.
pub fn fan_sector(
    host: &impl TriangleHost,
    v: VertexId,
    from: usize,
    to: usize,
) -> Option<(Vec<usize>, bool)> {
    let fan = &host.fans()[v.index()];
    let in_edge = |&(t, p): &(usize, u8)| host.slot_edge()[t][((p + 2) % 3) as usize];
    let out_edge = |&(t, p): &(usize, u8)| host.slot_edge()[t][p as usize];
    if let Some(i0) = fan.iter().position(|c| in_edge(c) == from) {
        let mut crossed = Vec::new();
        for k in 0..fan.len() {
            let c = fan[(i0 + k) % fan.len()];
            crossed.push(c.0);
            if out_edge(&c) == to {
                return Some((crossed, true));
            }
        }
    }
    if let Some(i0) = fan.iter().position(|c| out_edge(c) == from) {
        let mut crossed = Vec::new();
        for k in 0..fan.len() {
            let c = fan[(i0 + fan.len() - k) % fan.len()];
            crossed.push(c.0);
            if in_edge(&c) == to {
                return Some((crossed, false));
            }
        }
    }
    None
}
