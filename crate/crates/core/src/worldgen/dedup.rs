use rayon::prelude::*;
use serde::Serialize;

use super::WorldgenError;
use crate::gridmap::{Cell, CellState, OccupancyGrid};

/// Maps differing in fewer than this fraction of cells are duplicates.
pub const DEFAULT_DIFF_THRESHOLD: f64 = 0.005;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DedupReport {
    /// Indices kept, ascending.
    pub kept: Vec<usize>,
    /// `(duplicate, representative)` for every dropped map.
    pub removed: Vec<(usize, usize)>,
}

struct Summary {
    centroid: (f64, f64),
    free: usize,
}

fn summarize(g: &OccupancyGrid) -> Summary {
    let (mut sx, mut sy, mut n) = (0.0, 0.0, 0usize);
    for (i, s) in g.cells().iter().enumerate() {
        if *s == CellState::Free {
            let c = g.cell_at_index(i);
            sx += c.x as f64 + 0.5;
            sy += c.y as f64 + 0.5;
            n += 1;
        }
    }
    let centroid = if n == 0 { (0.0, 0.0) } else { (sx / n as f64, sy / n as f64) };
    Summary { centroid, free: n }
}

/// Alignment of `b` onto `a` (cell shift) and the padded canvas extents in `a`'s frame.
fn alignment(a: &OccupancyGrid, sa: &Summary, b: &OccupancyGrid, sb: &Summary) -> ((i32, i32), Cell, Cell) {
    let shift = ((sa.centroid.0 - sb.centroid.0).round() as i32, (sa.centroid.1 - sb.centroid.1).round() as i32);
    let lo = Cell::new(shift.0.min(0), shift.1.min(0));
    let hi = Cell::new(
        (a.width() as i32).max(b.width() as i32 + shift.0),
        (a.height() as i32).max(b.height() as i32 + shift.1),
    );
    (shift, lo, hi)
}

fn diff_aligned(a: &OccupancyGrid, b: &OccupancyGrid, shift: (i32, i32), lo: Cell, hi: Cell) -> f64 {
    let outside = |g: &OccupancyGrid, c: Cell| g.get(c).unwrap_or(CellState::Obstacle);
    let mut diff = 0usize;
    for y in lo.y..hi.y {
        for x in lo.x..hi.x {
            let c = Cell::new(x, y);
            if outside(a, c) != outside(b, c.offset(-shift.0, -shift.1)) {
                diff += 1;
            }
        }
    }
    diff as f64 / ((hi.x - lo.x) as f64 * (hi.y - lo.y) as f64)
}

/// Fraction of differing cells after aligning free-space centroids and
/// padding both maps (as obstacle) to a common canvas.
pub fn diff_fraction(a: &OccupancyGrid, b: &OccupancyGrid) -> f64 {
    let (sa, sb) = (summarize(a), summarize(b));
    let (shift, lo, hi) = alignment(a, &sa, b, &sb);
    diff_aligned(a, b, shift, lo, hi)
}

/// Drop near-identical maps; one representative (lowest index) is kept per
/// group of duplicates.
pub fn dedup(maps: &[OccupancyGrid], threshold: f64) -> Result<DedupReport, WorldgenError> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(WorldgenError::InvalidParameter { name: "diff threshold", expect: "in [0, 1]", value: threshold });
    }
    let summaries: Vec<Summary> = maps.par_iter().map(summarize).collect();
    let edges: Vec<(usize, usize)> = (0..maps.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let summaries = &summaries;
            (i + 1..maps.len()).filter_map(move |j| {
                let (a, b) = (&maps[i], &maps[j]);
                if (a.resolution() - b.resolution()).abs() > 1e-9 {
                    return None;
                }
                let (shift, lo, hi) = alignment(a, &summaries[i], b, &summaries[j]);
                let area = (hi.x - lo.x) as f64 * (hi.y - lo.y) as f64;
                // every free-count difference is at least one differing cell
                let bound = summaries[i].free.abs_diff(summaries[j].free) as f64 / area;
                if bound >= threshold {
                    return None;
                }
                (diff_aligned(a, b, shift, lo, hi) < threshold).then_some((i, j))
            })
        })
        .collect();

    let mut parent: Vec<usize> = (0..maps.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, j) in edges {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        // the smaller index always becomes the root
        if ri != rj {
            let (lo, hi) = (ri.min(rj), ri.max(rj));
            parent[hi] = lo;
        }
    }
    let mut report = DedupReport { kept: Vec::new(), removed: Vec::new() };
    for i in 0..maps.len() {
        let root = find(&mut parent, i);
        if root == i {
            report.kept.push(i);
        } else {
            report.removed.push((i, root));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn room(w: i32, h: i32, pad: i32, pillar: Option<(i32, i32)>) -> OccupancyGrid {
        let mut g =
            OccupancyGrid::filled((w + 2 * pad) as usize, (h + 2 * pad) as usize, 0.1, (0.0, 0.0), CellState::Obstacle)
                .unwrap();
        for y in 0..h {
            for x in 0..w {
                g.set(Cell::new(x + pad, y + pad), CellState::Free);
            }
        }
        if let Some((x, y)) = pillar {
            for dy in 0..3 {
                for dx in 0..3 {
                    g.set(Cell::new(x + pad + dx, y + pad + dy), CellState::Obstacle);
                }
            }
        }
        g
    }

    #[test]
    fn exact_copies_collapse() {
        let a = room(30, 20, 2, Some((5, 5)));
        let r = dedup(&[a.clone(), a.clone(), a], DEFAULT_DIFF_THRESHOLD).unwrap();
        assert_eq!(r.kept, vec![0]);
        assert_eq!(r.removed, vec![(1, 0), (2, 0)]);
    }

    #[test]
    fn different_houses_both_kept() {
        let a = room(30, 20, 2, None);
        let b = room(12, 40, 2, None);
        assert!(diff_fraction(&a, &b) > 0.2);
        assert_eq!(dedup(&[a, b], DEFAULT_DIFF_THRESHOLD).unwrap().kept, vec![0, 1]);
    }

    #[test]
    fn translated_copy_detected() {
        let a = room(30, 20, 2, Some((4, 7)));
        let b = room(30, 20, 4, Some((4, 7)));
        assert_ne!(a, b);
        assert_eq!(diff_fraction(&a, &b), 0.0);
        let r = dedup(&[a, b], DEFAULT_DIFF_THRESHOLD).unwrap();
        assert_eq!(r.kept, vec![0]);
    }

    #[test]
    fn groups_are_order_insensitive() {
        let a = room(30, 20, 2, None);
        let b = room(20, 30, 2, Some((3, 3)));
        let maps = vec![a.clone(), b.clone(), a.clone(), b.clone()];
        let r = dedup(&maps, DEFAULT_DIFF_THRESHOLD).unwrap();
        assert_eq!(r.kept, vec![0, 1]);
        assert_eq!(r.removed, vec![(2, 0), (3, 1)]);
        let swapped = vec![b.clone(), a.clone(), b, a];
        assert_eq!(dedup(&swapped, DEFAULT_DIFF_THRESHOLD).unwrap().kept, vec![0, 1]);
    }

    #[test]
    fn threshold_validated() {
        assert!(dedup(&[], 1.5).is_err());
        assert!(dedup(&[], 0.0).unwrap().kept.is_empty());
    }
}
