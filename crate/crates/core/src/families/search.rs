//! Exact maximum search for (cross) t-intersecting families.
//!
//! Single mode is a maximum-clique search on the agreement graph over S_n
//! (vertices are permutations, edges join pairs agreeing on >= t points),
//! branch-and-bound with a greedy colouring bound and degree-descending
//! vertex order. A second pass re-walks the tree to collect every maximum
//! witness, so `all_umvirates` is decided from the complete witness list.
//!
//! Cross mode scores pairs (A, B) with A, B mutually t-agreeing. The search
//! scope is the closure pairs seeded by single-family maximal cliques: for a
//! maximal clique C it scores (N(N(C)), N(C)) where N(X) is the set of
//! permutations agreeing with all of X. This scope is reported, not claimed
//! exhaustive over all cross pairs.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cube::{BiasedMeasure, CubeFamily};
use crate::error::{Error, Result};
use crate::families::{factorial, symmetric_group, PermFamily, Permutation};

/// Exact caps for the permutation searches.
pub const MAX_SEARCH_N_SINGLE: usize = 7;
pub const MAX_SEARCH_N_CROSS: usize = 5;
/// Cap for the cube-family search (the oracle is doubly exponential).
pub const MAX_SEARCH_CUBE_N: usize = 4;
/// At most this many witnesses are materialized; the count is always exact.
pub const WITNESS_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Single,
    Cross,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum SearchWitness {
    Family(PermFamily),
    Pair(PermFamily, PermFamily),
}

/// Result of an exact maximum search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchResult {
    pub mode: SearchMode,
    /// Maximum family size in single mode; maximum |A||B| in cross mode.
    pub max_size: u64,
    pub witnesses: Vec<SearchWitness>,
    pub witness_count: u64,
    /// True iff every maximum witness equals a t-umvirate (in cross mode,
    /// both sides the same umvirate).
    pub all_umvirates: bool,
}

/// Adjacency bitsets over a fixed vertex list.
struct BitGraph {
    words: usize,
    adj: Vec<u64>,
}

impl BitGraph {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitGraph {
            words,
            adj: vec![0u64; n * words],
        }
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u * self.words + v / 64] |= 1 << (v % 64);
        self.adj[v * self.words + u / 64] |= 1 << (u % 64);
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.row(u)[v / 64] >> (v % 64) & 1 == 1
    }

    fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }
}

fn agreement_graph(perms: &[Permutation], t: usize) -> BitGraph {
    let mut g = BitGraph::new(perms.len());
    for i in 0..perms.len() {
        for j in i + 1..perms.len() {
            let agree = perms[i]
                .image()
                .iter()
                .zip(perms[j].image())
                .filter(|(a, b)| a == b)
                .count();
            if agree >= t {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// Greedy colouring of `cand` (ascending colour classes); returns the
/// candidates ordered so that colour numbers are non-decreasing, paired with
/// their colour (a clique-size upper bound for the prefix ending there).
fn colour_sort(g: &BitGraph, cand: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::with_capacity(cand.len());
    let mut remaining: Vec<usize> = cand.to_vec();
    let mut colour = 0;
    while !remaining.is_empty() {
        colour += 1;
        let mut next_round = Vec::new();
        let mut class_members: Vec<usize> = Vec::new();
        'outer: for &v in &remaining {
            for &u in &class_members {
                if g.has_edge(u, v) {
                    next_round.push(v);
                    continue 'outer;
                }
            }
            class_members.push(v);
            out.push((v, colour));
        }
        remaining = next_round;
    }
    out
}

fn max_clique_size(g: &BitGraph, order: &[usize]) -> usize {
    let mut best = 0;
    let mut current = Vec::new();
    expand_max(g, order.to_vec(), &mut current, &mut best);
    best
}

fn expand_max(g: &BitGraph, cand: Vec<usize>, current: &mut Vec<usize>, best: &mut usize) {
    if cand.is_empty() {
        *best = (*best).max(current.len());
        return;
    }
    let coloured = colour_sort(g, &cand);
    for idx in (0..coloured.len()).rev() {
        let (v, colour) = coloured[idx];
        if current.len() + colour <= *best {
            return; // colour bound prunes this and all earlier candidates
        }
        let next: Vec<usize> = coloured[..idx]
            .iter()
            .map(|&(u, _)| u)
            .filter(|&u| g.has_edge(u, v))
            .collect();
        current.push(v);
        expand_max(g, next, current, best);
        current.pop();
    }
}

/// Walk the same tree again, keeping branches that can still reach `target`,
/// and hand every clique of exactly `target` vertices to the visitor.
fn enumerate_cliques_of_size(
    g: &BitGraph,
    cand: Vec<usize>,
    target: usize,
    current: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if current.len() == target {
        visit(current);
        return;
    }
    if cand.is_empty() {
        return;
    }
    let coloured = colour_sort(g, &cand);
    for idx in (0..coloured.len()).rev() {
        let (v, colour) = coloured[idx];
        if current.len() + colour < target {
            return;
        }
        let next: Vec<usize> = coloured[..idx]
            .iter()
            .map(|&(u, _)| u)
            .filter(|&u| g.has_edge(u, v))
            .collect();
        current.push(v);
        enumerate_cliques_of_size(g, next, target, current, visit);
        current.pop();
    }
}

/// Does F equal (S_n)_{spec} for some spec? Constructive: collect the
/// constraints shared by every member and compare sizes.
pub(crate) fn is_umvirate(f: &PermFamily) -> bool {
    if f.is_empty() {
        return false;
    }
    let n = f.n();
    let first = &f.members()[0];
    let mut common = 0usize;
    for i in 1..=n {
        let j = first.apply(i);
        if f.members().iter().all(|p| p.apply(i) == j) {
            common += 1;
        }
    }
    n - common <= super::MAX_ENUM_FACTORIAL && f.len() as u64 == factorial(n - common)
}

/// Exact maximum (cross) t-intersecting search over S_n.
pub fn max_t_intersecting(n: usize, t: usize, mode: SearchMode) -> Result<SearchResult> {
    let cap = match mode {
        SearchMode::Single => MAX_SEARCH_N_SINGLE,
        SearchMode::Cross => MAX_SEARCH_N_CROSS,
    };
    if n > cap {
        return Err(Error::ResourceGuard {
            what: "search degree n",
            cap,
            requested: n,
        });
    }
    if n == 0 {
        return Err(Error::precondition("need n >= 1"));
    }
    let everything = symmetric_group(n)?;
    if t == 0 {
        // agreement >= 0 is vacuous: the whole group wins
        let (max_size, witness) = match mode {
            SearchMode::Single => (
                everything.len() as u64,
                SearchWitness::Family(everything.clone()),
            ),
            SearchMode::Cross => (
                (everything.len() as u64).pow(2),
                SearchWitness::Pair(everything.clone(), everything.clone()),
            ),
        };
        return Ok(SearchResult {
            mode,
            max_size,
            witnesses: vec![witness],
            witness_count: 1,
            all_umvirates: true,
        });
    }
    if t > n {
        return Ok(SearchResult {
            mode,
            max_size: 0,
            witnesses: Vec::new(),
            witness_count: 0,
            all_umvirates: false,
        });
    }
    let perms = everything.members().to_vec();
    let g = agreement_graph(&perms, t);
    match mode {
        SearchMode::Single => search_single(n, &perms, &g),
        SearchMode::Cross => search_cross(n, &perms, &g, t),
    }
}

fn degree_descending_order(g: &BitGraph, count: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..count).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    order
}

fn search_single(n: usize, perms: &[Permutation], g: &BitGraph) -> Result<SearchResult> {
    let order = degree_descending_order(g, perms.len());
    let best = max_clique_size(g, &order);
    let mut witnesses = Vec::new();
    let mut witness_count = 0u64;
    let mut all_umvirates = true;
    let mut current = Vec::new();
    enumerate_cliques_of_size(g, order.clone(), best, &mut current, &mut |clique| {
        witness_count += 1;
        let fam = PermFamily::new(n, clique.iter().map(|&v| perms[v].clone()).collect())
            .expect("clique members share n");
        if !is_umvirate(&fam) {
            all_umvirates = false;
        }
        if witnesses.len() < WITNESS_CAP {
            witnesses.push(SearchWitness::Family(fam));
        }
    });
    Ok(SearchResult {
        mode: SearchMode::Single,
        max_size: best as u64,
        witnesses,
        witness_count,
        all_umvirates: all_umvirates && witness_count > 0,
    })
}

/// Dense bitset over the vertex list.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct VertexSet(Vec<u64>);

impl VertexSet {
    fn full(n: usize) -> Self {
        let words = n.div_ceil(64);
        let mut v = vec![u64::MAX; words];
        if !n.is_multiple_of(64) {
            v[words - 1] = (1u64 << (n % 64)) - 1;
        }
        VertexSet(v)
    }

    fn intersect_with(&mut self, row: &[u64]) {
        for (a, b) in self.0.iter_mut().zip(row) {
            *a &= b;
        }
    }


    fn count(&self) -> u64 {
        self.0.iter().map(|w| w.count_ones() as u64).sum()
    }

    fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }
}

/// N(X): vertices agreeing with every member of X (self-agreement counts).
fn common_neighbors(g: &BitGraph, members: impl Iterator<Item = usize>, total: usize) -> VertexSet {
    let mut acc = VertexSet::full(total);
    let mut touched = false;
    for v in members {
        let mut row = g.row(v).to_vec();
        row[v / 64] |= 1 << (v % 64); // a permutation fully agrees with itself
        acc.intersect_with(&row);
        touched = true;
    }
    debug_assert!(touched);
    acc
}

fn search_cross(n: usize, perms: &[Permutation], g: &BitGraph, _t: usize) -> Result<SearchResult> {
    let total = perms.len();
    // candidate seeds: all maximal cliques of the agreement graph
    let mut best: u64 = 0;
    let mut best_pairs: Vec<(VertexSet, VertexSet)> = Vec::new();
    bron_kerbosch(g, total, &mut |clique: &[usize]| {
        let b = common_neighbors(g, clique.iter().copied(), total);
        let a = common_neighbors(g, b.iter_ones(), total);
        let product = a.count() * b.count();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        if product > best {
            best = product;
            best_pairs.clear();
            best_pairs.push((lo, hi));
        } else if product == best && !best_pairs.contains(&(lo.clone(), hi.clone())) {
            best_pairs.push((lo, hi));
        }
    });
    let mut witnesses = Vec::new();
    let mut all_umvirates = true;
    best_pairs.sort();
    for (a, b) in &best_pairs {
        let fam_a = PermFamily::new(n, a.iter_ones().map(|v| perms[v].clone()).collect())?;
        let fam_b = PermFamily::new(n, b.iter_ones().map(|v| perms[v].clone()).collect())?;
        if !(fam_a == fam_b && is_umvirate(&fam_a)) {
            all_umvirates = false;
        }
        if witnesses.len() < WITNESS_CAP {
            witnesses.push(SearchWitness::Pair(fam_a, fam_b));
        }
    }
    let witness_count = best_pairs.len() as u64;
    Ok(SearchResult {
        mode: SearchMode::Cross,
        max_size: best,
        witnesses,
        witness_count,
        all_umvirates: all_umvirates && witness_count > 0,
    })
}

/// Bron-Kerbosch with pivoting; visits every maximal clique once.
fn bron_kerbosch(g: &BitGraph, total: usize, visit: &mut impl FnMut(&[usize])) {
    let mut r = Vec::new();
    let p: Vec<usize> = (0..total).collect();
    let x: Vec<usize> = Vec::new();
    bk_rec(g, &mut r, p, x, visit);
}

fn bk_rec(
    g: &BitGraph,
    r: &mut Vec<usize>,
    p: Vec<usize>,
    x: Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if p.is_empty() && x.is_empty() {
        visit(r);
        return;
    }
    // pivot: vertex of P u X with most neighbours in P
    let pivot = p
        .iter()
        .chain(&x)
        .copied()
        .max_by_key(|&u| p.iter().filter(|&&v| g.has_edge(u, v)).count())
        .unwrap();
    let branch: Vec<usize> = p
        .iter()
        .copied()
        .filter(|&v| !g.has_edge(pivot, v))
        .collect();
    let mut p = p;
    let mut x = x;
    for v in branch {
        let np: Vec<usize> = p.iter().copied().filter(|&u| g.has_edge(u, v)).collect();
        let nx: Vec<usize> = x.iter().copied().filter(|&u| g.has_edge(u, v)).collect();
        r.push(v);
        bk_rec(g, r, np, nx, visit);
        r.pop();
        p.retain(|&u| u != v);
        x.push(v);
    }
}

/// Exact maximum mu_p over t-intersecting cube families on n <= 4
/// coordinates, by max-weight clique over pairwise-compatible points.
pub fn max_t_intersecting_cube(n: usize, t: usize, p: f64) -> Result<(f64, CubeFamily)> {
    let m = BiasedMeasure::new(p)?;
    let weights = |mask: u32| {
        let ones = mask.count_ones() as i32;
        m.p().powi(ones) * (1.0 - m.p()).powi(n as i32 - ones)
    };
    max_cube_generic(n, t, weights)
}

/// Exact-rational twin of [`max_t_intersecting_cube`].
pub fn max_t_intersecting_cube_exact(
    n: usize,
    t: usize,
    p: &BigRational,
) -> Result<(BigRational, CubeFamily)> {
    use num_traits::One;
    if p <= &BigRational::zero() || p >= &BigRational::one() {
        return Err(Error::InvalidBias(0.0));
    }
    let q = BigRational::one() - p;
    let weights = |mask: u32| {
        let mut w = BigRational::one();
        for _ in 0..mask.count_ones() {
            w *= p;
        }
        for _ in 0..n as u32 - mask.count_ones() {
            w *= &q;
        }
        w
    };
    max_cube_generic(n, t, weights)
}

fn max_cube_generic<W>(n: usize, t: usize, weight: impl Fn(u32) -> W) -> Result<(W, CubeFamily)>
where
    W: Clone + PartialOrd + Zero + for<'a> std::ops::AddAssign<&'a W>,
{
    if n > MAX_SEARCH_CUBE_N {
        return Err(Error::ResourceGuard {
            what: "cube search dimension",
            cap: MAX_SEARCH_CUBE_N,
            requested: n,
        });
    }
    // vertices: points with >= t elements (the diagonal pair condition)
    let points: Vec<u32> = (0..1u32 << n)
        .filter(|m| m.count_ones() as usize >= t)
        .collect();
    let w: Vec<W> = points.iter().map(|&m| weight(m)).collect();
    // adjacency over at most 16 vertices as u32 masks
    let k = points.len();
    let mut adj = vec![0u32; k];
    for i in 0..k {
        for j in i + 1..k {
            if (points[i] & points[j]).count_ones() as usize >= t {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    // suffix weight sums for the bound
    let mut suffix: Vec<W> = vec![W::zero(); k + 1];
    for i in (0..k).rev() {
        let mut s = suffix[i + 1].clone();
        s += &w[i];
        suffix[i] = s;
    }
    let mut best_w = W::zero();
    let mut best_set: u32 = 0;

    // take-or-skip over vertices in index order; `cand` holds the vertices
    // still compatible with everything chosen so far
    #[allow(clippy::too_many_arguments)]
    fn rec<W>(
        i: usize,
        cand: u32,
        acc: W,
        chosen: u32,
        k: usize,
        adj: &[u32],
        w: &[W],
        suffix: &[W],
        best_w: &mut W,
        best_set: &mut u32,
    ) where
        W: Clone + PartialOrd + Zero + for<'a> std::ops::AddAssign<&'a W>,
    {
        if i == k {
            if acc > *best_w {
                *best_w = acc;
                *best_set = chosen;
            }
            return;
        }
        let mut optimistic = acc.clone();
        optimistic += &suffix[i];
        if optimistic <= *best_w {
            return;
        }
        if cand >> i & 1 == 1 {
            let mut with = acc.clone();
            with += &w[i];
            rec(
                i + 1,
                cand & adj[i],
                with,
                chosen | 1 << i,
                k,
                adj,
                w,
                suffix,
                best_w,
                best_set,
            );
        }
        rec(i + 1, cand, acc, chosen, k, adj, w, suffix, best_w, best_set);
    }

    let full = if k >= 32 { u32::MAX } else { (1u32 << k) - 1 };
    rec(
        0,
        full,
        W::zero(),
        0,
        k,
        &adj,
        &w,
        &suffix,
        &mut best_w,
        &mut best_set,
    );
    let members: Vec<u32> = (0..k)
        .filter(|&i| best_set >> i & 1 == 1)
        .map(|i| points[i])
        .collect();
    Ok((best_w, CubeFamily::new(n, members)?))
}
