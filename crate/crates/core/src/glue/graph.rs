//! Shortest paths on complete graphs with extra zero-length identification edges.

use rayon::prelude::*;

/// Distances from one source, with the number of identification edges on
/// each chosen path.
#[derive(Debug, Clone)]
pub struct Paths {
    pub dist: Vec<f64>,
    pub crossings: Vec<usize>,
}

/// Dense Dijkstra on `n` nodes. Every pair is joined by an edge of length
/// `weight(i, j)`; `partners[i]` lists nodes identified with `i` (length 0).
/// Weights are evaluated lazily, so memory stays linear in `n`.
pub fn shortest_paths<W>(n: usize, source: usize, weight: W, partners: &[Vec<usize>]) -> Paths
where
    W: Fn(usize, usize) -> f64 + Sync,
{
    let mut dist = vec![f64::INFINITY; n];
    let mut crossings = vec![usize::MAX; n];
    let mut done = vec![false; n];
    dist[source] = 0.0;
    crossings[source] = 0;
    for _ in 0..n {
        let Some(u) = (0..n).filter(|&i| !done[i]).min_by(|&a, &b| {
            dist[a].total_cmp(&dist[b]).then(crossings[a].cmp(&crossings[b]))
        }) else {
            break;
        };
        if dist[u].is_infinite() {
            break;
        }
        done[u] = true;
        let (du, cu) = (dist[u], crossings[u]);
        for &p in &partners[u] {
            if !done[p] && (du < dist[p] || (du == dist[p] && cu + 1 < crossings[p])) {
                dist[p] = du;
                crossings[p] = cu + 1;
            }
        }
        dist.par_iter_mut()
            .zip(crossings.par_iter_mut())
            .zip(done.par_iter())
            .enumerate()
            .with_min_len(256)
            .for_each(|(v, ((d, c), &finished))| {
                if finished {
                    return;
                }
                let alt = du + weight(u, v);
                if alt < *d || (alt == *d && cu < *c) {
                    *d = alt;
                    *c = cu;
                }
            });
    }
    Paths { dist, crossings }
}
