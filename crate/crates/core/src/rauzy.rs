//! Rauzy graphs, special factors, eight shapes and deconnectability.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::ops::RangeInclusive;

use serde::Serialize;

use crate::error::{QwError, Result};
use crate::factors::FactorIndex;
use crate::stream::WordStream;
use crate::word::{Alphabet, FiniteWord, Letter};

/// `G_n`: vertices `L_n`, one edge `u -> v` per `w` in `L_{n+1}` with prefix
/// `u` and suffix `v`.
#[derive(Debug, Clone, Serialize)]
pub struct RauzyGraph {
    pub order: usize,
    pub horizon: usize,
    pub vertices: Vec<FiniteWord>,
    /// `(from, to)` vertex indices, one per factor of length `order + 1`.
    pub edges: Vec<(usize, usize)>,
    #[serde(skip)]
    index: HashMap<FiniteWord, usize>,
    #[serde(skip)]
    out: Vec<Vec<usize>>,
    #[serde(skip)]
    inc: Vec<Vec<usize>>,
}

impl RauzyGraph {
    fn from_parts(
        order: usize,
        horizon: usize,
        vertices: Vec<FiniteWord>,
        mut edges: Vec<(usize, usize)>,
    ) -> Self {
        edges.sort_unstable();
        let index = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let mut out = vec![Vec::new(); vertices.len()];
        let mut inc = vec![Vec::new(); vertices.len()];
        for &(a, b) in &edges {
            out[a].push(b);
            inc[b].push(a);
        }
        RauzyGraph {
            order,
            horizon,
            vertices,
            edges,
            index,
            out,
            inc,
        }
    }

    /// Build from ids of orders `n` and `n + 1` over the same text.
    fn from_index(
        text: &[Letter],
        ids_n: &[u32],
        ids_next: &[u32],
        order: usize,
        horizon: usize,
    ) -> Self {
        let mut reps: HashMap<u32, usize> = HashMap::new();
        for (i, &id) in ids_n.iter().enumerate() {
            reps.entry(id).or_insert(i);
        }
        let mut order_ids: Vec<(FiniteWord, u32)> = reps
            .into_iter()
            .map(|(id, i)| (FiniteWord::from(&text[i..i + order]), id))
            .collect();
        order_ids.sort_unstable();
        let mut slot = vec![0usize; order_ids.len()];
        for (k, (_, id)) in order_ids.iter().enumerate() {
            slot[*id as usize] = k;
        }
        let mut seen: HashMap<u32, (usize, usize)> = HashMap::new();
        for (i, &w) in ids_next.iter().enumerate() {
            seen.entry(w)
                .or_insert_with(|| (slot[ids_n[i] as usize], slot[ids_n[i + 1] as usize]));
        }
        let vertices = order_ids.into_iter().map(|(v, _)| v).collect();
        Self::from_parts(order, horizon, vertices, seen.into_values().collect())
    }

    pub fn vertex(&self, word: &[Letter]) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.inc[v].len()
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Strong connectivity: every vertex reaches and is reached from vertex 0.
    pub fn is_strongly_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return true;
        }
        let reach = |adj: &Vec<Vec<usize>>| {
            let mut seen = vec![false; n];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        reach(&self.out) && reach(&self.inc)
    }

    /// Graphviz rendering; special factors are filled, removed vertices
    /// dashed.
    pub fn to_dot(&self, alphabet: &Alphabet, removed: &[FiniteWord]) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph G{} {{", self.order);
        for (i, v) in self.vertices.iter().enumerate() {
            let label = alphabet.render(v);
            let left = self.in_degree(i) > 1;
            let right = self.out_degree(i) > 1;
            let mut attrs = vec![format!("label=\"{label}\"")];
            match (left, right) {
                (true, true) => attrs.push("style=filled, fillcolor=\"#c9a0dc\"".into()),
                (true, false) => attrs.push("style=filled, fillcolor=\"#a0c4ff\"".into()),
                (false, true) => attrs.push("style=filled, fillcolor=\"#ffadad\"".into()),
                (false, false) => {}
            }
            if removed.contains(v) {
                attrs.push("style=dashed".into());
            }
            let _ = writeln!(s, "  v{i} [{}];", attrs.join(", "));
        }
        for &(a, b) in &self.edges {
            let mut w = self.vertices[a].to_vec();
            w.push(*self.vertices[b].last().unwrap());
            let _ = writeln!(s, "  v{a} -> v{b} [label=\"{}\"];", alphabet.render(&w));
        }
        s.push_str("}\n");
        s
    }
}

fn check_horizon(order: usize, horizon: usize) -> Result<()> {
    if order == 0 {
        return Err(QwError::Malformed(
            "Rauzy graph order must be at least 1".into(),
        ));
    }
    if horizon < 2 * (order + 1) {
        return Err(QwError::HorizonTooSmall {
            horizon,
            required: 2 * (order + 1),
        });
    }
    Ok(())
}

/// Rauzy graphs of every order in `orders`, built from `prefix(horizon)`.
/// An order is refused with [`QwError::Unsaturated`] when its vertex or edge
/// count still grows between `horizon` and `2 * horizon`.
pub fn build_range(
    x: &WordStream,
    orders: RangeInclusive<usize>,
    horizon: usize,
) -> Result<Vec<RauzyGraph>> {
    let (lo, hi) = (*orders.start(), *orders.end());
    if lo > hi {
        return Ok(Vec::new());
    }
    check_horizon(lo, horizon)?;
    check_horizon(hi, horizon)?;
    x.with_prefix(2 * horizon, |long| {
        let short = &long[..horizon];
        let mut a = FactorIndex::new(short);
        let mut b = FactorIndex::new(long);
        while a.order() < lo {
            a.advance();
            b.advance();
        }
        let mut graphs = Vec::with_capacity(hi - lo + 1);
        for n in lo..=hi {
            let (ids_n, counts_n) = (a.ids().to_vec(), (a.distinct(), b.distinct()));
            a.advance();
            b.advance();
            if counts_n.0 != counts_n.1 || a.distinct() != b.distinct() {
                return Err(QwError::Unsaturated { order: n, horizon });
            }
            graphs.push(RauzyGraph::from_index(short, &ids_n, a.ids(), n, horizon));
        }
        Ok(graphs)
    })?
}

pub fn build(x: &WordStream, n: usize, horizon: usize) -> Result<RauzyGraph> {
    Ok(build_range(x, n..=n, horizon)?.pop().unwrap())
}

/// Rauzy graph of a finite text, without any saturation check.
pub fn build_from_text(text: &[Letter], n: usize) -> RauzyGraph {
    let mut idx = FactorIndex::new(text);
    while idx.order() < n {
        idx.advance();
    }
    let ids_n = idx.ids().to_vec();
    idx.advance();
    RauzyGraph::from_index(text, &ids_n, idx.ids(), n, text.len())
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SpecialFactors {
    /// In-degree greater than one.
    pub left: Vec<FiniteWord>,
    /// Out-degree greater than one.
    pub right: Vec<FiniteWord>,
}

pub fn special_factors(g: &RauzyGraph) -> SpecialFactors {
    let pick = |pred: &dyn Fn(usize) -> bool| {
        (0..g.vertex_count())
            .filter(|&v| pred(v))
            .map(|v| g.vertices[v].clone())
            .collect()
    };
    SpecialFactors {
        left: pick(&|v| g.in_degree(v) > 1),
        right: pick(&|v| g.out_degree(v) > 1),
    }
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
pub struct EightShape {
    pub holds: bool,
    /// Edge counts of the two loops through the center, shortest first.
    pub loops: Option<(usize, usize)>,
}

/// Whether `g` is exactly two cycles through `center` that share no other
/// vertex.
pub fn eight_shape(g: &RauzyGraph, center: &[Letter]) -> Result<EightShape> {
    let c = g.vertex(center).ok_or(QwError::NotAVertex)?;
    let no = EightShape {
        holds: false,
        loops: None,
    };
    if g.out_degree(c) != 2 || g.in_degree(c) != 2 {
        return Ok(no);
    }
    let n = g.vertex_count();
    if (0..n).any(|v| v != c && (g.out_degree(v) != 1 || g.in_degree(v) != 1)) {
        return Ok(no);
    }
    let mut visited = vec![false; n];
    visited[c] = true;
    let mut lens = [0usize; 2];
    for (k, &start) in g.successors(c).iter().enumerate() {
        let mut v = start;
        let mut len = 1;
        while v != c {
            if visited[v] {
                return Ok(no);
            }
            visited[v] = true;
            v = g.successors(v)[0];
            len += 1;
        }
        lens[k] = len;
    }
    if visited.iter().any(|&s| !s) {
        return Ok(no);
    }
    lens.sort_unstable();
    Ok(EightShape {
        holds: true,
        loops: Some((lens[0], lens[1])),
    })
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct DeconnectReport {
    pub order: usize,
    pub removed: usize,
    pub acyclic: bool,
    /// Longest path in edges; `None` when a cycle remains.
    pub longest_path: Option<usize>,
    pub bound: usize,
    pub holds: bool,
}

/// Delete `removed` and check that what is left is acyclic with every path
/// of at most `k_prime * order` edges.
pub fn deconnect_check(g: &RauzyGraph, removed: &[FiniteWord], k_prime: usize) -> DeconnectReport {
    let n = g.vertex_count();
    let mut gone = vec![false; n];
    for r in removed {
        if let Some(v) = g.vertex(r) {
            gone[v] = true;
        }
    }
    let mut indeg = vec![0usize; n];
    for &(a, b) in &g.edges {
        if !gone[a] && !gone[b] {
            indeg[b] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| !gone[v] && indeg[v] == 0).collect();
    // longest[v]: edges on the longest path ending at v
    let mut longest = vec![0usize; n];
    let mut done = 0;
    while let Some(v) = queue.pop_front() {
        done += 1;
        for &w in g.successors(v) {
            if gone[w] {
                continue;
            }
            longest[w] = longest[w].max(longest[v] + 1);
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push_back(w);
            }
        }
    }
    let live = gone.iter().filter(|&&x| !x).count();
    let acyclic = done == live;
    let longest_path = acyclic.then(|| {
        (0..n)
            .filter(|&v| !gone[v])
            .map(|v| longest[v])
            .max()
            .unwrap_or(0)
    });
    let bound = k_prime * g.order;
    DeconnectReport {
        order: g.order,
        removed: gone.iter().filter(|&&x| x).count(),
        acyclic,
        holds: longest_path.is_some_and(|l| l <= bound),
        longest_path,
        bound,
    }
}
