//! Fixed-size bitmask kernels for the hot enumeration paths.
//!
//! Masks are `[u64; W]` with `W` chosen at runtime from the graph order via
//! [`dispatch_width!`]. Everything here is allocation-free per emitted set.

use super::StructureGraph;

pub(crate) type Mask<const W: usize> = [u64; W];

/// Largest graph order the mask kernels accept.
pub const MAX_MASK_VERTICES: usize = 64 * 64;

/// Runs `$body` with the const `$w` bound to the smallest supported mask
/// width holding `$n` vertices. Evaluates to `None` when `$n` is too large.
macro_rules! dispatch_width {
    ($n:expr, $w:ident => $body:expr) => {{
        let n: usize = $n;
        if n <= 64 {
            const $w: usize = 1;
            Some($body)
        } else if n <= 128 {
            const $w: usize = 2;
            Some($body)
        } else if n <= 256 {
            const $w: usize = 4;
            Some($body)
        } else if n <= 512 {
            const $w: usize = 8;
            Some($body)
        } else if n <= 1024 {
            const $w: usize = 16;
            Some($body)
        } else if n <= $crate::graph::mask::MAX_MASK_VERTICES {
            const $w: usize = 64;
            Some($body)
        } else {
            None
        }
    }};
}
pub(crate) use dispatch_width;

#[inline]
pub(crate) fn zero<const W: usize>() -> Mask<W> {
    [0; W]
}

#[inline]
pub(crate) fn bit<const W: usize>(v: usize) -> Mask<W> {
    let mut m = [0; W];
    m[v / 64] = 1 << (v % 64);
    m
}

#[inline]
pub(crate) fn or<const W: usize>(a: &Mask<W>, b: &Mask<W>) -> Mask<W> {
    std::array::from_fn(|i| a[i] | b[i])
}

#[inline]
pub(crate) fn and_not<const W: usize>(a: &Mask<W>, b: &Mask<W>) -> Mask<W> {
    std::array::from_fn(|i| a[i] & !b[i])
}

#[inline]
pub(crate) fn and<const W: usize>(a: &Mask<W>, b: &Mask<W>) -> Mask<W> {
    std::array::from_fn(|i| a[i] & b[i])
}

#[inline]
pub(crate) fn is_zero<const W: usize>(a: &Mask<W>) -> bool {
    a.iter().all(|&w| w == 0)
}

#[inline]
pub(crate) fn has<const W: usize>(a: &Mask<W>, v: usize) -> bool {
    a[v / 64] >> (v % 64) & 1 == 1
}

#[inline]
pub(crate) fn popcount<const W: usize>(a: &Mask<W>) -> usize {
    a.iter().map(|w| w.count_ones() as usize).sum()
}

/// Removes and returns the lowest set bit.
#[inline]
pub(crate) fn pop_lowest<const W: usize>(a: &mut Mask<W>) -> Option<usize> {
    for (i, w) in a.iter_mut().enumerate() {
        if *w != 0 {
            let b = w.trailing_zeros() as usize;
            *w &= *w - 1;
            return Some(i * 64 + b);
        }
    }
    None
}

#[inline]
pub(crate) fn lowest<const W: usize>(a: &Mask<W>) -> Option<usize> {
    a.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

pub(crate) fn full<const W: usize>(n: usize) -> Mask<W> {
    let mut m = [0; W];
    for v in 0..n {
        m[v / 64] |= 1 << (v % 64);
    }
    m
}

pub(crate) fn adjacency<const W: usize>(g: &StructureGraph) -> Vec<Mask<W>> {
    (0..g.order())
        .map(|v| {
            let mut m = zero::<W>();
            for &u in g.neighbors(v) {
                m[u / 64] |= 1 << (u % 64);
            }
            m
        })
        .collect()
}

/// Whether the subgraph induced by `set` is connected. The empty set is not.
pub(crate) fn is_connected_mask<const W: usize>(adj: &[Mask<W>], set: &Mask<W>) -> bool {
    let Some(start) = lowest(set) else {
        return false;
    };
    let mut reached = bit::<W>(start);
    let mut frontier = reached;
    while let Some(v) = pop_lowest(&mut frontier) {
        let fresh = and_not(&and(&adj[v], set), &reached);
        reached = or(&reached, &fresh);
        frontier = or(&frontier, &fresh);
    }
    reached == *set
}

struct Frame<const W: usize> {
    set: Mask<W>,
    neighborhood: Mask<W>,
    forbidden: Mask<W>,
    candidates: Mask<W>,
    size: usize,
}

/// Streams every connected vertex subset of size `1..=max_size` exactly once.
///
/// Each set is generated from its minimum vertex `v` by a depth-first search
/// that only adds vertices above `v`. At a node with set `S`, the frontier
/// `N(S) \ (S ∪ F)` is consumed in ascending order; after branching on `u`,
/// `u` joins the forbidden set `F` for the remaining siblings, so a set `T`
/// is reached only through the branch of its smallest frontier vertex.
pub(crate) struct ConnectedMasks<const W: usize> {
    adj: Vec<Mask<W>>,
    max_size: usize,
    next_root: usize,
    stack: Vec<Frame<W>>,
}

impl<const W: usize> ConnectedMasks<W> {
    pub(crate) fn new(adj: Vec<Mask<W>>, max_size: usize) -> Self {
        Self {
            adj,
            max_size,
            next_root: 0,
            stack: Vec::with_capacity(max_size + 1),
        }
    }
}

impl<const W: usize> Iterator for ConnectedMasks<W> {
    type Item = Mask<W>;

    fn next(&mut self) -> Option<Mask<W>> {
        if self.max_size == 0 {
            return None;
        }
        loop {
            if let Some(top) = self.stack.last_mut() {
                if top.size >= self.max_size {
                    self.stack.pop();
                    continue;
                }
                let Some(u) = pop_lowest(&mut top.candidates) else {
                    self.stack.pop();
                    continue;
                };
                let ub = bit::<W>(u);
                let set = or(&top.set, &ub);
                let neighborhood = or(&top.neighborhood, &self.adj[u]);
                let forbidden = top.forbidden;
                top.forbidden = or(&top.forbidden, &ub);
                let candidates = and_not(&and_not(&neighborhood, &set), &forbidden);
                let size = top.size + 1;
                self.stack.push(Frame {
                    set,
                    neighborhood,
                    forbidden,
                    candidates,
                    size,
                });
                return Some(set);
            }
            let v = self.next_root;
            if v >= self.adj.len() {
                return None;
            }
            self.next_root += 1;
            let set = bit::<W>(v);
            let forbidden = full::<W>(v);
            let neighborhood = self.adj[v];
            let candidates = and_not(&and_not(&neighborhood, &set), &forbidden);
            self.stack.push(Frame {
                set,
                neighborhood,
                forbidden,
                candidates,
                size: 1,
            });
            return Some(set);
        }
    }
}
