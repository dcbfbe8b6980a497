//! Deterministic generators for the resolution-graph test corpus.
//!
//! Builders produce the catalogue shapes (chains, three-armed stars, and
//! their degree-2 and degree-3 folded variants) in the normalization
//! where every vertex satisfies E^2 = -2 deg E, plus a few deliberately
//! inadmissible configurations. `catalogue` lists them all with a
//! descriptor recording what was built, so tests can derive expected
//! verdicts from construction data rather than from the classifier.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::graph::{DualGraph, Vertex};

/// Small deterministic generator for id shuffles in tests.
pub struct XorShift64 {
    state: u64,
}

impl XorShift64 {
    pub fn new(seed: u64) -> XorShift64 {
        XorShift64 { state: seed.wrapping_mul(2685821657736338717).max(1) }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.state = x;
        x
    }

    /// Uniform-ish draw in 0..n (n > 0).
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            xs.swap(i, j);
        }
    }
}

/// Construction record for a corpus graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuiltShape {
    Chain { n: usize },
    Star { dets: [u64; 3] },
    TwistedChain { n: usize, inseparable: bool },
    TwistedStarFold2 { arm: u64, tail_det: u64, inseparable: bool },
    TwistedStarFold3 { inseparable: bool },
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub shape: BuiltShape,
    pub graph: DualGraph,
}

/// A simple path with the given self-intersections, ids 1.., all curves
/// separable of degree one.
pub fn chain(selfs: &[i64]) -> DualGraph {
    let verts: Vec<Vertex> = selfs
        .iter()
        .enumerate()
        .map(|(i, &s)| Vertex::new(i as u32 + 1, s, 1, true))
        .collect();
    let edges: Vec<(u32, u32, u32)> = (1..selfs.len() as u32).map(|i| (i, i + 1, 1)).collect();
    DualGraph::new(verts, edges).expect("chain builder produces a valid graph")
}

/// The A_n configuration: n curves of self-intersection -2 in a path.
pub fn minus_two_chain(n: usize) -> DualGraph {
    chain(&alloc::vec![-2; n])
}

/// A star: one center plus arms given as chains of self-intersections
/// ordered away from the center. Center id 0, arms numbered consecutively.
pub fn star_with_arms(center_self: i64, arms: &[&[i64]]) -> DualGraph {
    let mut verts = alloc::vec![Vertex::new(0, center_self, 1, true)];
    let mut edges = Vec::new();
    let mut next = 1u32;
    for arm in arms {
        let mut prev = 0u32;
        for &s in *arm {
            verts.push(Vertex::new(next, s, 1, true));
            edges.push((prev, next, 1));
            prev = next;
            next += 1;
        }
    }
    DualGraph::new(verts, edges).expect("star builder produces a valid graph")
}

/// The star of (-2)-curves with arm lattice determinants `dets`
/// (arm of determinant d has d - 1 vertices), center id 0.
pub fn minus_two_star(dets: [u64; 3]) -> DualGraph {
    let arms: Vec<Vec<i64>> = dets
        .iter()
        .map(|&d| alloc::vec![-2; d as usize - 1])
        .collect();
    star_with_arms(-2, &[&arms[0], &arms[1], &arms[2]])
}

/// A folded chain on n vertices: all edges of multiplicity two, degrees
/// (1, 2, .., 2) from the free end, self-intersections -2 deg. When
/// `separable` is false the first degree-two curve is marked inseparable.
pub fn twisted_chain(n: usize, separable: bool) -> DualGraph {
    assert!(n >= 2, "twisted chains need at least two vertices");
    let mut verts = alloc::vec![Vertex::new(1, -2, 1, true)];
    for i in 2..=n as u32 {
        verts.push(Vertex::new(i, -4, 2, separable || i > 2));
    }
    let edges: Vec<(u32, u32, u32)> = (1..n as u32).map(|i| (i, i + 1, 2)).collect();
    DualGraph::new(verts, edges).expect("twisted chain builder produces a valid graph")
}

/// A degree-2 folded star: a prefix of degree-two (-4)-curves of halved
/// determinant `arm` joined by double edges, crossing into a degree-one
/// center with a (-2)-tail of determinant `tail_det`. When `separable`
/// is false the outermost prefix curve is marked inseparable.
pub fn fold2_star(arm: u64, tail_det: u64, separable: bool) -> DualGraph {
    assert!(arm >= 2 && tail_det >= 2, "arm and tail determinants must be >= 2");
    let prefix = arm as u32 - 1;
    let mut verts = Vec::new();
    let mut edges = Vec::new();
    for i in 1..=prefix {
        verts.push(Vertex::new(i, -4, 2, separable || i > 1));
        edges.push((i, i + 1, 2));
    }
    let center = prefix + 1;
    verts.push(Vertex::new(center, -2, 1, true));
    for i in 0..tail_det as u32 - 1 {
        verts.push(Vertex::new(center + 1 + i, -2, 1, true));
        edges.push((center + i, center + 1 + i, 1));
    }
    DualGraph::new(verts, edges).expect("fold2 star builder produces a valid graph")
}

/// The degree-3 folded star: a degree-three (-6)-curve triple-joined to a
/// degree-one (-2)-curve.
pub fn fold3_star(separable: bool) -> DualGraph {
    DualGraph::new(
        alloc::vec![Vertex::new(1, -6, 3, separable), Vertex::new(2, -2, 1, true)],
        alloc::vec![(1, 2, 3)],
    )
    .expect("fold3 star builder produces a valid graph")
}

/// The full deterministic corpus.
pub fn catalogue() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for n in 1..=6usize {
        out.push(CorpusEntry {
            name: format!("chain-a{}", n),
            shape: BuiltShape::Chain { n },
            graph: minus_two_chain(n),
        });
    }
    out.push(CorpusEntry {
        name: String::from("chain-1-weight-3"),
        shape: BuiltShape::Chain { n: 1 },
        graph: chain(&[-3]),
    });
    out.push(CorpusEntry {
        name: String::from("chain-2-mixed"),
        shape: BuiltShape::Chain { n: 2 },
        graph: chain(&[-2, -3]),
    });
    out.push(CorpusEntry {
        name: String::from("chain-4-mixed"),
        shape: BuiltShape::Chain { n: 4 },
        graph: chain(&[-3, -2, -2, -4]),
    });
    for dets in [
        [2u64, 2, 2],
        [2, 2, 3],
        [2, 2, 4],
        [2, 2, 5],
        [2, 3, 3],
        [2, 3, 4],
        [2, 3, 5],
    ] {
        out.push(CorpusEntry {
            name: format!("star-{}-{}-{}", dets[0], dets[1], dets[2]),
            shape: BuiltShape::Star { dets },
            graph: minus_two_star(dets),
        });
    }
    out.push(CorpusEntry {
        name: String::from("star-2-2-3-short-arm"),
        shape: BuiltShape::Star { dets: [2, 2, 3] },
        graph: star_with_arms(-2, &[&[-2], &[-2], &[-3]]),
    });
    for dets in [[2u64, 3, 6], [3, 3, 3], [2, 3, 7]] {
        out.push(CorpusEntry {
            name: format!("star-{}-{}-{}-inadmissible", dets[0], dets[1], dets[2]),
            shape: BuiltShape::Star { dets },
            graph: minus_two_star(dets),
        });
    }
    for n in 2..=4usize {
        for inseparable in [false, true] {
            out.push(CorpusEntry {
                name: format!(
                    "twisted-chain-{}{}",
                    n,
                    if inseparable { "-insep" } else { "" }
                ),
                shape: BuiltShape::TwistedChain { n, inseparable },
                graph: twisted_chain(n, !inseparable),
            });
        }
    }
    for tail_det in 2..=5u64 {
        out.push(CorpusEntry {
            name: format!("twisted-star-2-2-{}", tail_det),
            shape: BuiltShape::TwistedStarFold2 { arm: 2, tail_det, inseparable: false },
            graph: fold2_star(2, tail_det, true),
        });
    }
    out.push(CorpusEntry {
        name: String::from("twisted-star-2-2-2-insep"),
        shape: BuiltShape::TwistedStarFold2 { arm: 2, tail_det: 2, inseparable: true },
        graph: fold2_star(2, 2, false),
    });
    for inseparable in [false, true] {
        out.push(CorpusEntry {
            name: format!(
                "twisted-star-2-3-3{}",
                if inseparable { "-insep" } else { "" }
            ),
            shape: BuiltShape::TwistedStarFold2 { arm: 3, tail_det: 2, inseparable },
            graph: fold2_star(3, 2, !inseparable),
        });
    }
    for inseparable in [false, true] {
        out.push(CorpusEntry {
            name: format!(
                "twisted-star-fold3{}",
                if inseparable { "-insep" } else { "" }
            ),
            shape: BuiltShape::TwistedStarFold3 { inseparable },
            graph: fold3_star(!inseparable),
        });
    }
    out
}

/// A relabeled isomorphic copy: fresh ids, shuffled vertex and edge
/// order, random edge orientation. Deterministic in the seed.
pub fn permuted(g: &DualGraph, seed: u64) -> DualGraph {
    let mut rng = XorShift64::new(seed);
    let n = g.n();
    let mut new_ids: Vec<u32> = Vec::with_capacity(n);
    while new_ids.len() < n {
        let cand = rng.below(10_000) as u32;
        if !new_ids.contains(&cand) {
            new_ids.push(cand);
        }
    }
    let old_ids = g.ids();
    let relabel = |id: u32| {
        let idx = old_ids.iter().position(|&o| o == id).unwrap();
        new_ids[idx]
    };
    let mut verts: Vec<Vertex> = g
        .vertices()
        .iter()
        .map(|v| {
            let mut w = Vertex::new(relabel(v.id), v.self_int, v.degree, v.separable);
            w.genus_zero = v.genus_zero;
            w
        })
        .collect();
    let mut edges: Vec<(u32, u32, u32)> = g
        .edges()
        .iter()
        .map(|&(u, v, m)| {
            if rng.below(2) == 0 {
                (relabel(u), relabel(v), m)
            } else {
                (relabel(v), relabel(u), m)
            }
        })
        .collect();
    rng.shuffle(&mut verts);
    rng.shuffle(&mut edges);
    DualGraph::new(verts, edges).expect("relabeling preserves validity")
}
