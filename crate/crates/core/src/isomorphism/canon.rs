//! Canonical labeling of colored graphs by partition refinement.
//!
//! The search tree individualizes one vertex of the first smallest
//! non-singleton cell at every node and refines to an equitable partition.
//! Each node carries a hash of its refinement trace; the canonical leaf is
//! the one with the smallest (trace sequence, relabeled edge list). Subtrees
//! whose trace prefix exceeds the current best are cut, and automorphisms
//! discovered at equivalent leaves prune sibling orbits.

use std::collections::VecDeque;

use super::graph::{ColoredGraph, CLASS_COUNT};

/// Canonical form of a colored graph. Equal certificates identify
/// isomorphic graphs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Certificate(Vec<u8>);

impl Certificate {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

struct Csr {
    offsets: Vec<u32>,
    adj: Vec<u32>,
}

impl Csr {
    fn new(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut deg = vec![0u32; n + 1];
        for &(a, b) in edges {
            deg[a as usize] += 1;
            deg[b as usize] += 1;
        }
        let mut offsets = vec![0u32; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + deg[v];
        }
        let mut fill = offsets.clone();
        let mut adj = vec![0u32; offsets[n] as usize];
        for &(a, b) in edges {
            adj[fill[a as usize] as usize] = b;
            fill[a as usize] += 1;
            adj[fill[b as usize] as usize] = a;
            fill[b as usize] += 1;
        }
        Csr { offsets, adj }
    }

    #[inline]
    fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[self.offsets[v as usize] as usize..self.offsets[v as usize + 1] as usize]
    }
}

/// Ordered partition; cells are identified by their start position.
#[derive(Clone)]
struct Partition {
    elems: Vec<u32>,
    pos: Vec<u32>,
    cell_of: Vec<u32>,
    len_at: Vec<u32>,
    cells: u32,
}

impl Partition {
    fn from_colors(colors: &[(u8, u64)]) -> Self {
        let n = colors.len();
        let mut elems: Vec<u32> = (0..n as u32).collect();
        elems.sort_by_key(|&v| colors[v as usize]);
        let mut pos = vec![0; n];
        let mut cell_of = vec![0; n];
        let mut len_at = vec![0; n];
        let mut cells = 0;
        let mut start = 0;
        for i in 0..n {
            let v = elems[i];
            pos[v as usize] = i as u32;
            if i > 0 && colors[v as usize] != colors[elems[i - 1] as usize] {
                start = i;
            }
            if start == i {
                cells += 1;
            }
            cell_of[v as usize] = start as u32;
            len_at[start] += 1;
        }
        Partition { elems, pos, cell_of, len_at, cells }
    }

    fn is_discrete(&self) -> bool {
        self.cells as usize == self.elems.len()
    }

    fn cell_starts(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.cells as usize);
        let mut i = 0;
        while i < self.elems.len() {
            out.push(i as u32);
            i += self.len_at[i] as usize;
        }
        out
    }

    /// First cell of minimal size among the non-singleton cells.
    fn target_cell(&self) -> Option<u32> {
        let mut best: Option<(u32, u32)> = None;
        let mut i = 0;
        while i < self.elems.len() {
            let len = self.len_at[i];
            if len > 1 && best.is_none_or(|(_, l)| len < l) {
                best = Some((i as u32, len));
            }
            i += len as usize;
        }
        best.map(|(s, _)| s)
    }
}

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    (h ^ x).wrapping_mul(0x100_0000_01b3).rotate_left(5) ^ 0x9e37_79b9_7f4a_7c15
}

struct Refiner {
    count: Vec<u32>,
    touched: Vec<u32>,
    cell_mark: Vec<bool>,
    in_queue: Vec<bool>,
    tcells: Vec<u32>,
    queue: VecDeque<u32>,
    fragments: Vec<(u32, u32)>,
}

impl Refiner {
    fn new(n: usize) -> Self {
        Refiner {
            count: vec![0; n],
            touched: Vec::new(),
            cell_mark: vec![false; n],
            in_queue: vec![false; n],
            tcells: Vec::new(),
            queue: VecDeque::new(),
            fragments: Vec::new(),
        }
    }

    /// Refines `p` to the coarsest equitable partition finer than it, using
    /// `splitters` as the initial queue. Returns the trace hash.
    fn refine(&mut self, g: &Csr, p: &mut Partition, splitters: &[u32]) -> u64 {
        let mut trace = 0xcbf2_9ce4_8422_2325u64;
        for &s in splitters {
            self.queue.push_back(s);
            self.in_queue[s as usize] = true;
        }
        while let Some(w) = self.queue.pop_front() {
            self.in_queue[w as usize] = false;
            if p.is_discrete() {
                continue;
            }
            let wlen = p.len_at[w as usize];
            for i in w..w + wlen {
                let v = p.elems[i as usize];
                for &u in g.neighbors(v) {
                    if self.count[u as usize] == 0 {
                        self.touched.push(u);
                    }
                    self.count[u as usize] += 1;
                }
            }
            for &u in &self.touched {
                let c = p.cell_of[u as usize];
                if !self.cell_mark[c as usize] {
                    self.cell_mark[c as usize] = true;
                    self.tcells.push(c);
                }
            }
            self.tcells.sort_unstable();
            trace = mix(trace, w as u64);
            for ti in 0..self.tcells.len() {
                let c = self.tcells[ti];
                self.cell_mark[c as usize] = false;
                trace = self.split_cell(p, c, trace);
            }
            self.tcells.clear();
            for &u in &self.touched {
                self.count[u as usize] = 0;
            }
            self.touched.clear();
        }
        mix(trace, p.cells as u64)
    }

    fn split_cell(&mut self, p: &mut Partition, c: u32, mut trace: u64) -> u64 {
        let len = p.len_at[c as usize];
        let (lo, hi) = (c as usize, (c + len) as usize);
        let count = &self.count;
        let (mut min, mut max) = (u32::MAX, 0);
        for &v in &p.elems[lo..hi] {
            let k = count[v as usize];
            min = min.min(k);
            max = max.max(k);
        }
        trace = mix(trace, ((c as u64) << 32) | min as u64);
        if min == max {
            return trace;
        }
        p.elems[lo..hi].sort_unstable_by_key(|&v| count[v as usize]);
        self.fragments.clear();
        let mut start = lo;
        for i in lo..=hi {
            if i == hi || count[p.elems[i] as usize] != count[p.elems[start] as usize] {
                let k = count[p.elems[start] as usize];
                self.fragments.push((start as u32, (i - start) as u32));
                trace = mix(trace, ((k as u64) << 32) | (i - start) as u64);
                start = i;
            }
        }
        for i in lo..hi {
            p.pos[p.elems[i] as usize] = i as u32;
        }
        for &(s, l) in &self.fragments {
            p.len_at[s as usize] = l;
            for i in s..s + l {
                p.cell_of[p.elems[i as usize] as usize] = s;
            }
        }
        p.cells += self.fragments.len() as u32 - 1;
        if self.in_queue[c as usize] {
            for &(s, _) in &self.fragments[1..] {
                self.in_queue[s as usize] = true;
                self.queue.push_back(s);
            }
        } else {
            let mut largest = 0;
            for (i, f) in self.fragments.iter().enumerate() {
                if f.1 > self.fragments[largest].1 {
                    largest = i;
                }
            }
            for (i, &(s, _)) in self.fragments.iter().enumerate() {
                if i != largest {
                    self.in_queue[s as usize] = true;
                    self.queue.push_back(s);
                }
            }
        }
        trace
    }

    /// Splits `v` off the front of its cell and refines.
    fn individualize(&mut self, g: &Csr, p: &mut Partition, v: u32) -> u64 {
        let c = p.cell_of[v as usize];
        let len = p.len_at[c as usize];
        let pv = p.pos[v as usize];
        let u = p.elems[c as usize];
        p.elems[pv as usize] = u;
        p.pos[u as usize] = pv;
        p.elems[c as usize] = v;
        p.pos[v as usize] = c;
        p.len_at[c as usize] = 1;
        p.len_at[(c + 1) as usize] = len - 1;
        for i in c + 1..c + len {
            p.cell_of[p.elems[i as usize] as usize] = c + 1;
        }
        p.cells += 1;
        let trace = self.refine(g, p, &[c]);
        mix(trace, c as u64)
    }
}

struct Leaf {
    pos: Vec<u32>,
    code: Vec<u64>,
    traces: Vec<u64>,
    path: Vec<u32>,
}

struct Search<'g> {
    g: &'g Csr,
    edges: &'g [(u32, u32)],
    refiner: Refiner,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Vec<u32>>,
    path: Vec<u32>,
    traces: Vec<u64>,
}

fn common_prefix(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let next = parent[x as usize];
        parent[x as usize] = parent[next as usize];
        x = next;
    }
    x
}

impl<'g> Search<'g> {
    fn leaf_code(&self, p: &Partition) -> Vec<u64> {
        let mut code: Vec<u64> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (p.pos[a as usize], p.pos[b as usize]);
                let (x, y) = if x < y { (x, y) } else { (y, x) };
                ((x as u64) << 32) | y as u64
            })
            .collect();
        code.sort_unstable();
        code
    }

    /// Compares the current trace prefix with a leaf's traces at the same
    /// depths. A stored sequence that ends early compares as smaller.
    fn prefix_cmp(&self, leaf: &Leaf) -> std::cmp::Ordering {
        let d = self.traces.len().min(leaf.traces.len());
        self.traces[..d]
            .cmp(&leaf.traces[..d])
            .then(if leaf.traces.len() < self.traces.len() {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            })
    }

    fn record_automorphism(&mut self, p: &Partition, reference_pos: &[u32]) -> Vec<u32> {
        let gamma: Vec<u32> = reference_pos.iter().map(|&i| p.elems[i as usize]).collect();
        if gamma.iter().enumerate().any(|(v, &x)| v as u32 != x) {
            self.generators.push(gamma.clone());
        }
        gamma
    }

    fn leaf(&mut self, p: &Partition) -> Option<usize> {
        let code = self.leaf_code(p);
        let make_leaf = |s: &Self, code: Vec<u64>| Leaf {
            pos: p.pos.clone(),
            code,
            traces: s.traces.clone(),
            path: s.path.clone(),
        };
        let Some(first) = &self.first else {
            self.first = Some(make_leaf(self, code.clone()));
            self.best = Some(make_leaf(self, code));
            return None;
        };
        if self.traces == first.traces && code == first.code {
            let first_pos = first.pos.clone();
            let c = common_prefix(&self.path, &first.path);
            let gamma = self.record_automorphism(p, &first_pos);
            return self.backtrack_level(&gamma, c);
        }
        let best = self.best.as_ref().expect("best leaf set with first");
        let ord = self.traces.cmp(&best.traces).then_with(|| code.cmp(&best.code));
        match ord {
            std::cmp::Ordering::Less => {
                self.best = Some(make_leaf(self, code));
                None
            }
            std::cmp::Ordering::Equal => {
                let best_pos = best.pos.clone();
                let c = common_prefix(&self.path, &best.path);
                let gamma = self.record_automorphism(p, &best_pos);
                self.backtrack_level(&gamma, c)
            }
            std::cmp::Ordering::Greater => None,
        }
    }

    /// Level to unwind to after finding `gamma`: the divergence depth, if
    /// `gamma` fixes the shared prefix of the two paths.
    fn backtrack_level(&self, gamma: &[u32], c: usize) -> Option<usize> {
        let fixes = self.path[..c].iter().all(|&v| gamma[v as usize] == v);
        fixes.then_some(c)
    }

    fn orbits_fixing_path(&self, n: usize) -> Vec<u32> {
        let mut parent: Vec<u32> = (0..n as u32).collect();
        for gamma in &self.generators {
            if self.path.iter().all(|&v| gamma[v as usize] == v) {
                for (v, &x) in gamma.iter().enumerate() {
                    let (a, b) = (find(&mut parent, v as u32), find(&mut parent, x));
                    if a != b {
                        parent[a.max(b) as usize] = a.min(b);
                    }
                }
            }
        }
        parent
    }

    fn search(&mut self, p: &Partition) -> Option<usize> {
        let Some(target) = p.target_cell() else {
            return self.leaf(p);
        };
        let depth = self.path.len();
        let len = p.len_at[target as usize];
        let children: Vec<u32> = p.elems[target as usize..(target + len) as usize].to_vec();
        let mut explored: Vec<u32> = Vec::new();
        let mut orbit_cache: Option<(usize, Vec<u32>)> = None;
        for w in children {
            if !explored.is_empty() && !self.generators.is_empty() {
                let stale = orbit_cache.as_ref().is_none_or(|(g, _)| *g != self.generators.len());
                if stale {
                    orbit_cache = Some((self.generators.len(), self.orbits_fixing_path(p.elems.len())));
                }
                let parent = &mut orbit_cache.as_mut().expect("just filled").1;
                let rw = find(parent, w);
                if explored.iter().any(|&u| find(parent, u) == rw) {
                    continue;
                }
            }
            explored.push(w);
            let mut child = p.clone();
            let t = self.refiner.individualize(self.g, &mut child, w);
            self.path.push(w);
            self.traces.push(t);
            let prune = self.best.as_ref().is_some_and(|b| self.prefix_cmp(b) == std::cmp::Ordering::Greater)
                && !self.first.as_ref().is_some_and(|f| self.prefix_cmp(f) == std::cmp::Ordering::Equal);
            let result = if prune { None } else { self.search(&child) };
            self.path.pop();
            self.traces.pop();
            if let Some(level) = result {
                if level < depth {
                    return Some(level);
                }
            }
        }
        None
    }
}

/// Computes the canonical certificate of `g`.
pub fn canonical_certificate(g: &ColoredGraph) -> Certificate {
    canonical_certificate_with(g, &[], &[])
}

fn is_automorphism(colors: &[(u8, u64)], g: &Csr, gamma: &[u32]) -> bool {
    let n = colors.len();
    if gamma.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &x in gamma {
        if x as usize >= n || std::mem::replace(&mut seen[x as usize], true) {
            return false;
        }
    }
    if (0..n).any(|v| colors[gamma[v] as usize] != colors[v]) {
        return false;
    }
    let mut mark = vec![u32::MAX; n];
    (0..n as u32).all(|v| {
        let image = g.neighbors(gamma[v as usize]);
        if image.len() != g.neighbors(v).len() {
            return false;
        }
        for &u in image {
            mark[u as usize] = v;
        }
        g.neighbors(v).iter().all(|&u| mark[gamma[u as usize] as usize] == v)
    })
}

/// Like [`canonical_certificate`], with two aids supplied by the caller.
///
/// `keys` (empty, or one per vertex) must be invariant under every
/// color-preserving isomorphism; they split color classes before refinement.
/// `known` lists automorphisms of `g` used for pruning; permutations that are
/// not automorphisms respecting `keys` are ignored and do not change the result.
pub fn canonical_certificate_with(g: &ColoredGraph, keys: &[u64], known: &[Vec<u32>]) -> Certificate {
    let n = g.vertex_count();
    assert!(keys.is_empty() || keys.len() == n, "one key per vertex");
    let csr = Csr::new(n, g.edges());
    let colors: Vec<(u8, u64)> =
        g.colors().iter().enumerate().map(|(v, &c)| (c as u8, keys.get(v).copied().unwrap_or(0))).collect();
    let mut root = Partition::from_colors(&colors);
    let mut refiner = Refiner::new(n);
    let starts = root.cell_starts();
    let t = refiner.refine(&csr, &mut root, &starts);
    let generators = if known.is_empty() {
        Vec::new()
    } else {
        known.iter().filter(|gamma| is_automorphism(&colors, &csr, gamma)).cloned().collect()
    };
    let mut search = Search {
        g: &csr,
        edges: g.edges(),
        refiner,
        first: None,
        best: None,
        generators,
        path: Vec::new(),
        traces: vec![t],
    };
    search.search(&root);
    let best = search.best.expect("search visits at least one leaf");

    let sizes = g.class_sizes();
    let wide = n > u16::MAX as usize;
    let mut bytes = Vec::with_capacity(1 + 4 * CLASS_COUNT + best.code.len() * if wide { 8 } else { 4 });
    bytes.push(u8::from(wide));
    for s in sizes {
        bytes.extend_from_slice(&s.to_le_bytes());
    }
    for &e in &best.code {
        let (a, b) = ((e >> 32) as u32, e as u32);
        if wide {
            bytes.extend_from_slice(&a.to_le_bytes());
            bytes.extend_from_slice(&b.to_le_bytes());
        } else {
            bytes.extend_from_slice(&(a as u16).to_le_bytes());
            bytes.extend_from_slice(&(b as u16).to_le_bytes());
        }
    }
    Certificate(bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isomorphism::graph::VertexClass;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn plain(n: usize, edges: &[(u32, u32)]) -> ColoredGraph {
        ColoredGraph::new(vec![VertexClass::Run; n], edges.to_vec())
    }

    fn shuffled(g: &ColoredGraph, seed: u64) -> ColoredGraph {
        let mut perm: Vec<u32> = (0..g.vertex_count() as u32).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        g.relabel(&perm)
    }

    #[test]
    fn cycle_and_path_differ() {
        let c6 = plain(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        let two_triangles = plain(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        assert_ne!(canonical_certificate(&c6), canonical_certificate(&two_triangles));
        for seed in 0..10 {
            assert_eq!(canonical_certificate(&c6), canonical_certificate(&shuffled(&c6, seed)));
            assert_eq!(
                canonical_certificate(&two_triangles),
                canonical_certificate(&shuffled(&two_triangles, seed))
            );
        }
    }

    #[test]
    fn petersen_relabelings_agree() {
        let mut edges = Vec::new();
        for i in 0..5u32 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        let g = plain(10, &edges);
        let cert = canonical_certificate(&g);
        for seed in 0..20 {
            assert_eq!(cert, canonical_certificate(&shuffled(&g, seed)));
        }
    }

    #[test]
    fn colors_matter() {
        let a = ColoredGraph::new(vec![VertexClass::Run, VertexClass::TwoLevelFactor], vec![(0, 1)]);
        let b = ColoredGraph::new(vec![VertexClass::Run, VertexClass::FourLevelFactor], vec![(0, 1)]);
        assert_ne!(canonical_certificate(&a), canonical_certificate(&b));
    }

    #[test]
    fn strongly_regular_pair_is_separated() {
        // 4x4 rook's graph and the Shrikhande graph share parameters (16,6,2,2)
        let idx = |i: u32, j: u32| 4 * (i % 4) + (j % 4);
        let mut rook = Vec::new();
        let mut shrikhande = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                rook.push((idx(i, j), idx(i + 1, j)));
                rook.push((idx(i, j), idx(i, j + 1)));
                rook.push((idx(i, j), idx(i + 2, j)));
                rook.push((idx(i, j), idx(i, j + 2)));
                shrikhande.push((idx(i, j), idx(i + 1, j)));
                shrikhande.push((idx(i, j), idx(i, j + 1)));
                shrikhande.push((idx(i, j), idx(i + 1, j + 1)));
            }
        }
        let dedup = |mut e: Vec<(u32, u32)>| {
            for x in e.iter_mut() {
                if x.0 > x.1 {
                    *x = (x.1, x.0);
                }
            }
            e.sort();
            e.dedup();
            e
        };
        let rook = plain(16, &dedup(rook));
        let shr = plain(16, &dedup(shrikhande));
        assert_eq!(rook.edges().len(), 48);
        assert_eq!(shr.edges().len(), 48);
        let (cr, cs) = (canonical_certificate(&rook), canonical_certificate(&shr));
        assert_ne!(cr, cs);
        for seed in 0..5 {
            assert_eq!(cr, canonical_certificate(&shuffled(&rook, seed)));
            assert_eq!(cs, canonical_certificate(&shuffled(&shr, seed)));
        }
    }
}
