//! Shortest safe polyline in the lambda-plane of a complex line: Dijkstra on
//! an m x m raster with 8-neighbors, then greedy string pulling.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::cvec::C64;

/// Safety oracle on the lambda-plane.
pub(crate) trait SafeSet: Sync {
    /// Distance to the boundary minus the required clearance at `lambda`.
    fn slack(&self, lambda: C64) -> f64;
    /// Whether the whole segment is safe.
    fn segment_safe(&self, a: C64, b: C64) -> bool;
    /// Scale from lambda units to distances in C^n, i.e. `|z|`.
    fn stretch(&self) -> f64;
}

#[derive(Clone, Copy, PartialEq)]
struct Entry {
    cost: f64,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (cost, node)
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Raster path from `start` to `end` inside `|Re|, |Im| <= half`, or `None`
/// if the safe nodes do not connect them.
pub(crate) fn raster_path<S: SafeSet>(
    safe: &S,
    start: C64,
    end: C64,
    half: f64,
    m: usize,
) -> Option<Vec<C64>> {
    let h = 2.0 * half / m as f64;
    let node_at =
        |i: usize, j: usize| C64::new(-half + (i as f64 + 0.5) * h, -half + (j as f64 + 0.5) * h);
    // edges between safe nodes stay within h/sqrt(2) of an endpoint
    let margin = h * safe.stretch();
    let ok: Vec<bool> = (0..m * m)
        .into_par_iter()
        .map(|k| safe.slack(node_at(k % m, k / m)) >= margin)
        .collect();
    let near = |p: C64| -> Vec<usize> {
        let ci = ((p.re + half) / h).floor() as i64;
        let cj = ((p.im + half) / h).floor() as i64;
        let mut v = Vec::new();
        for dj in -2..=2 {
            for di in -2..=2 {
                let (i, j) = (ci + di, cj + dj);
                if i < 0 || j < 0 || i >= m as i64 || j >= m as i64 {
                    continue;
                }
                let k = j as usize * m + i as usize;
                if ok[k] && safe.segment_safe(p, node_at(i as usize, j as usize)) {
                    v.push(k);
                }
            }
        }
        v
    };
    let starts = near(start);
    let ends: Vec<usize> = near(end);
    if starts.is_empty() || ends.is_empty() {
        return None;
    }
    let mut is_end = vec![false; m * m];
    for &k in &ends {
        is_end[k] = true;
    }
    let mut dist = vec![f64::INFINITY; m * m];
    let mut prev = vec![usize::MAX; m * m];
    let mut heap = BinaryHeap::new();
    for &k in &starts {
        let c = (node_at(k % m, k / m) - start).norm();
        if c < dist[k] {
            dist[k] = c;
            heap.push(Entry { cost: c, node: k });
        }
    }
    let mut best_end: Option<(f64, usize)> = None;
    while let Some(Entry { cost, node }) = heap.pop() {
        if cost > dist[node] {
            continue;
        }
        if let Some((b, _)) = best_end {
            if cost >= b {
                break;
            }
        }
        let (i, j) = (node % m, node / m);
        if is_end[node] {
            let total = cost + (end - node_at(i, j)).norm();
            if best_end.map_or(true, |(b, _)| total < b) {
                best_end = Some((total, node));
            }
        }
        for dj in -1i64..=1 {
            for di in -1i64..=1 {
                if di == 0 && dj == 0 {
                    continue;
                }
                let (ni, nj) = (i as i64 + di, j as i64 + dj);
                if ni < 0 || nj < 0 || ni >= m as i64 || nj >= m as i64 {
                    continue;
                }
                let nk = nj as usize * m + ni as usize;
                if !ok[nk] {
                    continue;
                }
                let c = cost + h * ((di * di + dj * dj) as f64).sqrt();
                if c < dist[nk] {
                    dist[nk] = c;
                    prev[nk] = node;
                    heap.push(Entry { cost: c, node: nk });
                }
            }
        }
    }
    let (_, last) = best_end?;
    let mut chain = vec![end];
    let mut k = last;
    loop {
        chain.push(node_at(k % m, k / m));
        if prev[k] == usize::MAX {
            break;
        }
        k = prev[k];
    }
    chain.push(start);
    chain.reverse();
    Some(string_pull(safe, &chain))
}

/// Greedy shortcutting: from each kept node jump to the farthest node
/// reachable by a safe segment, scanning forward.
pub(crate) fn string_pull<S: SafeSet>(safe: &S, chain: &[C64]) -> Vec<C64> {
    let mut out = vec![chain[0]];
    let mut i = 0;
    while i + 1 < chain.len() {
        let mut j = i + 1;
        while j + 1 < chain.len() && safe.segment_safe(chain[i], chain[j + 1]) {
            j += 1;
        }
        out.push(chain[j]);
        i = j;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plane with a round obstacle of radius 1 at the origin.
    struct Disk;

    impl SafeSet for Disk {
        fn slack(&self, l: C64) -> f64 {
            l.norm() - 1.0 - 0.05
        }
        fn segment_safe(&self, a: C64, b: C64) -> bool {
            (0..=200).all(|k| self.slack(a + (b - a) * (k as f64 / 200.0)) >= 0.0)
        }
        fn stretch(&self) -> f64 {
            1.0
        }
    }

    #[test]
    fn detours_around_an_obstacle() {
        let (a, b) = (C64::new(-2.0, 0.0), C64::new(2.0, 0.0));
        let path = raster_path(&Disk, a, b, 3.0, 128).unwrap();
        assert_eq!(path[0], a);
        assert_eq!(*path.last().unwrap(), b);
        for w in path.windows(2) {
            assert!(Disk.segment_safe(w[0], w[1]));
        }
        let len: f64 = path.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
        // the geodesic around a disk of radius 1.05 has length about 5.3
        assert!(len < 5.8, "length {len}");
    }

    #[test]
    fn deterministic_and_monotone_in_resolution() {
        let (a, b) = (C64::new(-2.0, 0.1), C64::new(2.0, -0.1));
        assert_eq!(
            raster_path(&Disk, a, b, 3.0, 96),
            raster_path(&Disk, a, b, 3.0, 96)
        );
        let coarse = raster_path(&Disk, a, b, 3.0, 64).unwrap();
        let fine = raster_path(&Disk, a, b, 3.0, 256).unwrap();
        let len = |p: &[C64]| p.windows(2).map(|w| (w[1] - w[0]).norm()).sum::<f64>();
        assert!(len(&fine) <= len(&coarse) + 0.1);
    }

    #[test]
    fn enclosed_target_is_unreachable() {
        assert!(raster_path(&Disk, C64::new(-2.0, 0.0), C64::new(0.0, 0.0), 3.0, 64).is_none());
    }
}
