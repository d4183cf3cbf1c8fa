//! Triangulations of a convex polygon, diagonal flips and Catalan numbers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Diagonal = (usize, usize);

/// Largest `n` for which [`enumerate_triangulations`] runs (`c_11 = 58786`).
pub const ENUMERATION_LIMIT: usize = 12;

/// Orders the endpoints so that `a < c`.
pub fn normalize(d: Diagonal) -> Diagonal {
    if d.0 <= d.1 {
        d
    } else {
        (d.1, d.0)
    }
}

/// True when `a` and `c` are neighbours on the `n_plus_1`-gon.
pub fn adjacent(n_plus_1: usize, a: usize, c: usize) -> bool {
    let (a, c) = normalize((a, c));
    c - a == 1 || (a == 0 && c + 1 == n_plus_1)
}

/// Two diagonals cross when their endpoints interleave strictly.
pub fn crosses(d1: Diagonal, d2: Diagonal) -> bool {
    let (a, b) = normalize(d1);
    let (c, d) = normalize(d2);
    let inside = |x: usize| a < x && x < b;
    let shared = a == c || a == d || b == c || b == d;
    !shared && (inside(c) != inside(d))
}

pub fn is_non_crossing(diagonals: &[Diagonal]) -> bool {
    diagonals
        .iter()
        .enumerate()
        .all(|(i, &d)| diagonals[i + 1..].iter().all(|&e| !crosses(d, e)))
}

/// A maximal set of non-crossing diagonals of the regular `n_plus_1`-gon.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triangulation {
    pub n_plus_1: usize,
    pub diagonals: Vec<Diagonal>,
}

impl Triangulation {
    pub fn new(n_plus_1: usize, diagonals: Vec<Diagonal>) -> Result<Self> {
        let mut diagonals: Vec<Diagonal> = diagonals.into_iter().map(normalize).collect();
        diagonals.sort_unstable();
        diagonals.dedup();
        for &(a, c) in &diagonals {
            if c >= n_plus_1 || adjacent(n_plus_1, a, c) || a == c {
                return Err(Error::InvalidDiagonal(a, c));
            }
        }
        if !is_non_crossing(&diagonals) || diagonals.len() + 3 != n_plus_1 {
            return Err(Error::Precondition(format!(
                "{:?} is not a triangulation of the {n_plus_1}-gon",
                diagonals
            )));
        }
        Ok(Self { n_plus_1, diagonals })
    }

    fn has_edge(&self, a: usize, c: usize) -> bool {
        adjacent(self.n_plus_1, a, c) || self.diagonals.binary_search(&normalize((a, c))).is_ok()
    }

    /// The two apexes of the triangles on either side of an edge `(a, c)`,
    /// `a < c`; the first lies strictly between `a` and `c`.
    pub fn apexes(&self, d: Diagonal) -> (Option<usize>, Option<usize>) {
        let (a, c) = normalize(d);
        let inner = (a + 1..c).find(|&b| self.has_edge(a, b) && self.has_edge(b, c));
        let outer = (0..self.n_plus_1)
            .filter(|&b| b < a || b > c)
            .find(|&b| self.has_edge(a, b) && self.has_edge(b, c));
        (inner, outer)
    }
}

/// `c_m = binom(2m, m) / (m + 1)`, i.e. `c_{n-1} = binom(2n-2, n-1)/n` with `n = m + 1`.
pub fn catalan(m: usize) -> Result<u64> {
    if m == 0 {
        return Err(Error::Precondition("catalan index must be at least 1".into()));
    }
    if m > 30 {
        return Err(Error::Overflow(format!("catalan({m}) is outside the supported range")));
    }
    // binom(2m, m) by the multiplicative formula; every partial product is an
    // integer and fits in u128 for m <= 30
    let mut binom: u128 = 1;
    for i in 0..m as u128 {
        binom = binom * (2 * m as u128 - i) / (i + 1);
    }
    Ok((binom / (m as u128 + 1)) as u64)
}

/// All triangulations of the `(n+1)`-gon, sorted.
pub fn enumerate_triangulations(n: usize) -> Result<Vec<Triangulation>> {
    if n > ENUMERATION_LIMIT {
        return Err(Error::BudgetExceeded(n));
    }
    if n < 3 {
        return Err(Error::Precondition(format!("n = {n}, need n >= 3")));
    }
    let mut out: Vec<Triangulation> = sub_triangulations(0, n)
        .into_iter()
        .map(|mut d| {
            d.sort_unstable();
            Triangulation { n_plus_1: n + 1, diagonals: d }
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Triangulations of the sub-polygon `i, i+1, ..., j` whose edge `(i, j)` is given.
fn sub_triangulations(i: usize, j: usize) -> Vec<Vec<Diagonal>> {
    if j - i < 2 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for apex in i + 1..j {
        let left = sub_triangulations(i, apex);
        let right = sub_triangulations(apex, j);
        for l in &left {
            for r in &right {
                let mut d = Vec::with_capacity(l.len() + r.len() + 2);
                if apex > i + 1 {
                    d.push((i, apex));
                }
                if j > apex + 1 {
                    d.push((apex, j));
                }
                d.extend_from_slice(l);
                d.extend_from_slice(r);
                out.push(d);
            }
        }
    }
    out
}

/// Replaces `diagonal` by the other diagonal of the quadrilateral formed by
/// its two triangles.
pub fn flip(t: &Triangulation, diagonal: Diagonal) -> Result<Triangulation> {
    let d = normalize(diagonal);
    let pos = t
        .diagonals
        .binary_search(&d)
        .map_err(|_| Error::InvalidDiagonal(d.0, d.1))?;
    let (inner, outer) = t.apexes(d);
    let (b, e) = match (inner, outer) {
        (Some(b), Some(e)) => (b, e),
        _ => return Err(Error::InvalidDiagonal(d.0, d.1)),
    };
    let mut diagonals = t.diagonals.clone();
    diagonals.remove(pos);
    diagonals.push(normalize((b, e)));
    diagonals.sort_unstable();
    Ok(Triangulation {
        n_plus_1: t.n_plus_1,
        diagonals,
    })
}

/// Adjacency lists of the flip graph on `enumerate_triangulations(n)`.
pub fn flip_graph(n: usize) -> Result<(Vec<Triangulation>, Vec<Vec<usize>>)> {
    let all = enumerate_triangulations(n)?;
    let mut adj = Vec::with_capacity(all.len());
    for t in &all {
        let mut nbrs = Vec::new();
        for &d in &t.diagonals {
            let f = flip(t, d)?;
            let idx = all.binary_search(&f).map_err(|_| Error::Precondition("flip left the enumeration".into()))?;
            nbrs.push(idx);
        }
        nbrs.sort_unstable();
        adj.push(nbrs);
    }
    Ok((all, adj))
}

/// Extends a non-crossing set to a triangulation by greedily adding the
/// lexicographically smallest compatible diagonals.
pub fn complete(n_plus_1: usize, diagonals: &[Diagonal]) -> Triangulation {
    let mut set: Vec<Diagonal> = diagonals.iter().copied().map(normalize).collect();
    for a in 0..n_plus_1 {
        for c in a + 2..n_plus_1 {
            if adjacent(n_plus_1, a, c) || set.contains(&(a, c)) {
                continue;
            }
            if set.iter().all(|&e| !crosses((a, c), e)) {
                set.push((a, c));
            }
        }
    }
    set.sort_unstable();
    Triangulation {
        n_plus_1,
        diagonals: set,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{BTreeSet, VecDeque};

    #[test]
    fn catalan_values() {
        assert_eq!(catalan(2).unwrap(), 2);
        assert_eq!(catalan(3).unwrap(), 5);
        assert_eq!(catalan(5).unwrap(), 42);
        assert_eq!(catalan(30).unwrap(), 3_814_986_502_092_304);
        assert!(matches!(catalan(31), Err(Error::Overflow(_))));
        assert!(catalan(0).is_err());
    }

    /// Brute force: all subsets of diagonals that are non-crossing and maximal.
    fn brute_force_count(n_plus_1: usize) -> usize {
        let diags: Vec<Diagonal> = (0..n_plus_1)
            .flat_map(|a| (a + 2..n_plus_1).map(move |c| (a, c)))
            .filter(|&(a, c)| !adjacent(n_plus_1, a, c))
            .collect();
        let mut count = 0;
        for mask in 0u32..(1 << diags.len()) {
            let set: Vec<Diagonal> = (0..diags.len()).filter(|i| mask >> i & 1 == 1).map(|i| diags[i]).collect();
            if set.len() + 3 == n_plus_1 && is_non_crossing(&set) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn counts() {
        assert_eq!(enumerate_triangulations(3).unwrap().len(), 2);
        assert_eq!(enumerate_triangulations(4).unwrap().len(), 5);
        assert_eq!(enumerate_triangulations(6).unwrap().len(), 42);
        assert_eq!(brute_force_count(7), 42);
        for n in 3..=8 {
            let all = enumerate_triangulations(n).unwrap();
            assert_eq!(all.len() as u64, catalan(n - 1).unwrap());
            let unique: BTreeSet<_> = all.iter().collect();
            assert_eq!(unique.len(), all.len());
            for t in &all {
                assert!(Triangulation::new(t.n_plus_1, t.diagonals.clone()).is_ok());
            }
        }
        assert!(matches!(enumerate_triangulations(13), Err(Error::BudgetExceeded(13))));
    }

    #[test]
    fn square_flip_swaps_diagonals() {
        let t = Triangulation::new(4, vec![(0, 2)]).unwrap();
        let f = flip(&t, (0, 2)).unwrap();
        assert_eq!(f.diagonals, vec![(1, 3)]);
        assert!(matches!(flip(&t, (1, 3)), Err(Error::InvalidDiagonal(1, 3))));
    }

    #[test]
    fn flip_is_an_involution() {
        for t in enumerate_triangulations(6).unwrap() {
            for &d in &t.diagonals {
                let f = flip(&t, d).unwrap();
                let new: Vec<_> = f.diagonals.iter().filter(|e| !t.diagonals.contains(e)).collect();
                assert_eq!(new.len(), 1);
                assert_eq!(flip(&f, *new[0]).unwrap(), t);
            }
        }
    }

    #[test]
    fn pentagon_flip_graph_is_a_cycle() {
        let (all, adj) = flip_graph(4).unwrap();
        assert_eq!(all.len(), 5);
        assert!(adj.iter().all(|a| a.len() == 2));
        // connected 2-regular graph on 5 vertices is the 5-cycle
        assert_eq!(component_size(&adj), 5);
    }

    #[test]
    fn hexagon_flip_graph() {
        let (all, adj) = flip_graph(5).unwrap();
        assert_eq!(all.len(), 14);
        assert!(adj.iter().all(|a| a.len() == 3));
    }

    #[test]
    fn flip_graph_connected() {
        for n in 3..=8 {
            let (all, adj) = flip_graph(n).unwrap();
            assert_eq!(component_size(&adj), all.len(), "n = {n}");
        }
    }

    fn component_size(adj: &[Vec<usize>]) -> usize {
        let mut seen = vec![false; adj.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count
    }

    #[test]
    fn crossing_predicate() {
        assert!(crosses((0, 2), (1, 3)));
        assert!(!crosses((0, 2), (2, 4)));
        assert!(!crosses((0, 3), (1, 2)));
        assert!(crosses((3, 0), (2, 1)) == false);
    }
}
