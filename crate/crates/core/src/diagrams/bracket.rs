//! The Kauffman bracket at a primitive eighth root of unity.
//!
//! With `A = x`, `x⁴ = -1`, the loop value `-A² - A⁻²` vanishes, so only
//! states that smooth the diagram into a single circle contribute. The
//! search runs depth first over crossings in traversal order and abandons a
//! partial state as soon as a circle closes with crossings left.

use std::collections::{BTreeMap, VecDeque};

use num_integer::Roots;
use rayon::prelude::*;

use super::{Diagram, DiagramError};

pub const CROSSING_BUDGET: usize = 26;

/// Depth of the sequential prefix before the search fans out to workers.
const SPLIT_DEPTH: usize = 12;

pub fn determinant(d: &Diagram) -> Result<u64, DiagramError> {
    determinant_with_budget(d, CROSSING_BUDGET)
}

pub fn determinant_with_budget(d: &Diagram, budget: usize) -> Result<u64, DiagramError> {
    if !d.is_closed() {
        return Err(DiagramError::Open(d.endpoints().len()));
    }
    let n = d.crossings().len();
    if n > budget {
        return Err(DiagramError::OverBudget(n, budget));
    }
    if n == 0 {
        return match d.loops() {
            0 => Err(DiagramError::Malformed("empty diagram".into())),
            1 => Ok(1),
            _ => Ok(0),
        };
    }
    if d.loops() > 0 {
        return Ok(0);
    }
    let counts = monocyclic_counts(d);
    let mut v = [0i128; 4];
    for (k, &c) in counts.iter().enumerate() {
        v = add(v, scale(power(2 * k as i64 - n as i64), c as i128));
    }
    let w = d.writhe();
    let unit = scale(power(-3 * w), if w % 2 == 0 { 1 } else { -1 });
    let v = mul(v, unit);
    let norm = mul(v, conj(v));
    if norm[1..] != [0, 0, 0] || norm[0] < 0 {
        return Err(DiagramError::NotSquare(norm[0]));
    }
    let root = norm[0].sqrt();
    if root * root != norm[0] {
        return Err(DiagramError::NotSquare(norm[0]));
    }
    Ok(root as u64)
}

type Ring = [i128; 4];

/// `x^e` in `Z[x]/(x⁴ + 1)`.
fn power(e: i64) -> Ring {
    let e = e.rem_euclid(8) as usize;
    let mut r = [0; 4];
    r[e % 4] = if e < 4 { 1 } else { -1 };
    r
}

fn add(a: Ring, b: Ring) -> Ring {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

fn scale(a: Ring, k: i128) -> Ring {
    a.map(|c| c * k)
}

fn mul(a: Ring, b: Ring) -> Ring {
    let mut r = [0i128; 4];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            let k = i + j;
            if k < 4 {
                r[k] += ai * bj;
            } else {
                r[k - 4] -= ai * bj;
            }
        }
    }
    r
}

/// `x ↦ x⁻¹ = -x³`.
fn conj(a: Ring) -> Ring {
    [a[0], -a[3], -a[2], -a[1]]
}

/// Crossings reordered breadth first along shared arcs, labels compacted.
fn prepare(d: &Diagram) -> (Vec<[usize; 4]>, usize) {
    let cr = d.crossings();
    let mut by_label: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, c) in cr.iter().enumerate() {
        for &a in c {
            by_label.entry(a).or_default().push(i);
        }
    }
    let mut order = Vec::with_capacity(cr.len());
    let mut seen = vec![false; cr.len()];
    for start in 0..cr.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            order.push(i);
            for a in cr[i] {
                for &j in &by_label[&a] {
                    if !seen[j] {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
        }
    }
    let index: BTreeMap<u32, usize> = by_label.keys().enumerate().map(|(k, &a)| (a, k)).collect();
    let out = order.into_iter().map(|i| cr[i].map(|a| index[&a])).collect();
    (out, index.len())
}

#[derive(Clone)]
struct Dsu {
    parent: Vec<u32>,
    size: Vec<u32>,
    open: Vec<i32>,
    log: Vec<(u32, u32, u32, i32)>,
}

impl Dsu {
    fn new(m: usize) -> Dsu {
        Dsu {
            parent: (0..m as u32).collect(),
            size: vec![1; m],
            open: vec![2; m],
            log: Vec::new(),
        }
    }

    fn find(&self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            x = self.parent[x as usize];
        }
        x
    }

    fn save(&mut self, x: u32) {
        let i = x as usize;
        self.log.push((x, self.parent[i], self.size[i], self.open[i]));
    }

    fn consume(&mut self, x: u32) {
        let r = self.find(x);
        self.save(r);
        self.open[r as usize] -= 1;
    }

    fn union(&mut self, a: u32, b: u32) -> u32 {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return ra;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.save(ra);
        self.save(rb);
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        self.open[ra as usize] += self.open[rb as usize];
        ra
    }

    fn rollback(&mut self, mark: usize) {
        while self.log.len() > mark {
            let (x, p, s, o) = self.log.pop().expect("nonempty log");
            let i = x as usize;
            self.parent[i] = p;
            self.size[i] = s;
            self.open[i] = o;
        }
    }
}

struct Search<'a> {
    crossings: &'a [[usize; 4]],
}

impl Search<'_> {
    /// Applies one smoothing at `depth`; returns the number of circles it
    /// closed.
    fn smooth(&self, dsu: &mut Dsu, depth: usize, a_type: bool) -> usize {
        let [a, b, c, d] = self.crossings[depth].map(|x| x as u32);
        for x in [a, b, c, d] {
            dsu.consume(x);
        }
        let (r1, r2) = if a_type {
            (dsu.union(a, d), dsu.union(b, c))
        } else {
            (dsu.union(a, b), dsu.union(c, d))
        };
        let (r1, r2) = (dsu.find(r1), dsu.find(r2));
        let closed = |r: u32| usize::from(dsu.open[r as usize] == 0);
        if r1 == r2 {
            closed(r1)
        } else {
            closed(r1) + closed(r2)
        }
    }

    fn run(&self, dsu: &mut Dsu, depth: usize, a_count: usize, counts: &mut [u64]) {
        let n = self.crossings.len();
        for a_type in [true, false] {
            let mark = dsu.log.len();
            let closed = self.smooth(dsu, depth, a_type);
            let k = a_count + usize::from(a_type);
            if depth + 1 == n {
                if closed == 1 {
                    counts[k] += 1;
                }
            } else if closed == 0 {
                self.run(dsu, depth + 1, k, counts);
            }
            dsu.rollback(mark);
        }
    }

    fn frontier(&self, dsu: &mut Dsu, depth: usize, stop: usize, a_count: usize, out: &mut Vec<(Dsu, usize)>) {
        if depth == stop {
            let mut snapshot = dsu.clone();
            snapshot.log.clear();
            out.push((snapshot, a_count));
            return;
        }
        for a_type in [true, false] {
            let mark = dsu.log.len();
            if self.smooth(dsu, depth, a_type) == 0 {
                self.frontier(dsu, depth + 1, stop, a_count + usize::from(a_type), out);
            }
            dsu.rollback(mark);
        }
    }
}

/// Number of single-circle states, indexed by how many A-smoothings they use.
fn monocyclic_counts(d: &Diagram) -> Vec<u64> {
    let (crossings, m) = prepare(d);
    let n = crossings.len();
    let search = Search { crossings: &crossings };
    let mut dsu = Dsu::new(m);
    if n <= SPLIT_DEPTH + 2 {
        let mut counts = vec![0u64; n + 1];
        search.run(&mut dsu, 0, 0, &mut counts);
        return counts;
    }
    let mut seeds = Vec::new();
    search.frontier(&mut dsu, 0, SPLIT_DEPTH, 0, &mut seeds);
    seeds
        .into_par_iter()
        .map(|(mut dsu, a_count)| {
            let mut counts = vec![0u64; n + 1];
            search.run(&mut dsu, SPLIT_DEPTH, a_count, &mut counts);
            counts
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut x, y| {
                x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
                x
            },
        )
}
