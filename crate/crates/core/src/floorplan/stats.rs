use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::{FloorPlan, PlanError};

#[derive(Debug, Clone, Copy, Default)]
pub struct StatsOptions {
    /// Count plans without room records as one room instead of skipping them.
    pub implicit_room: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsReport {
    pub houses: usize,
    pub total_rooms: usize,
    pub mean_rooms: f64,
    pub median_rooms: f64,
    /// Plans without room metadata that were left out.
    pub skipped_without_rooms: usize,
    pub rooms_per_house: BTreeMap<usize, usize>,
    pub categories: BTreeMap<String, usize>,
}

pub fn corpus_stats<'a, I>(plans: I, options: StatsOptions) -> Result<StatsReport, PlanError>
where
    I: IntoIterator<Item = &'a FloorPlan>,
{
    let mut counts = Vec::new();
    let mut categories = BTreeMap::new();
    let mut skipped = 0;
    for plan in plans {
        match plan.room_count() {
            Some(n) => {
                counts.push(n);
                for room in &plan.rooms {
                    *categories.entry(room.category.clone()).or_insert(0) += 1;
                }
            }
            None if options.implicit_room => counts.push(1),
            None => skipped += 1,
        }
    }
    if counts.is_empty() {
        return Err(PlanError::EmptyCorpus(if skipped > 0 {
            format!("{skipped} plans without room records were skipped")
        } else {
            "no plans given".into()
        }));
    }
    let mut rooms_per_house = BTreeMap::new();
    for &n in &counts {
        *rooms_per_house.entry(n).or_insert(0) += 1;
    }
    let total: usize = counts.iter().sum();
    counts.sort_unstable();
    let mid = counts.len() / 2;
    let median = if counts.len() % 2 == 1 { counts[mid] as f64 } else { (counts[mid - 1] + counts[mid]) as f64 / 2.0 };
    Ok(StatsReport {
        houses: counts.len(),
        total_rooms: total,
        mean_rooms: total as f64 / counts.len() as f64,
        median_rooms: median,
        skipped_without_rooms: skipped,
        rooms_per_house,
        categories,
    })
}

impl StatsReport {
    /// Aligned two-column text rendering.
    pub fn to_table(&self) -> String {
        let mut rows: Vec<(String, String)> = vec![
            ("houses".into(), self.houses.to_string()),
            ("total rooms".into(), self.total_rooms.to_string()),
            ("mean rooms/house".into(), format!("{:.2}", self.mean_rooms)),
            ("median rooms/house".into(), format!("{:.1}", self.median_rooms)),
            ("skipped (no rooms)".into(), self.skipped_without_rooms.to_string()),
        ];
        for (n, houses) in &self.rooms_per_house {
            rows.push((format!("houses with {n} rooms"), houses.to_string()));
        }
        for (cat, n) in &self.categories {
            rows.push((format!("category {cat}"), n.to_string()));
        }
        let key_w = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
        let val_w = rows.iter().map(|r| r.1.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<key_w$}  {v:>val_w$}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floorplan::RoomRecord;

    fn plan_with_rooms(n: usize) -> FloorPlan {
        let mut p = FloorPlan::polygon("p", &[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]);
        for i in 0..n {
            p.rooms.push(RoomRecord::new(if i % 2 == 0 { "bedroom" } else { "kitchen" }, [0.0, 0.0, 1.0, 1.0]));
        }
        p
    }

    #[test]
    fn single_plan() {
        let r = corpus_stats(&[plan_with_rooms(3)], StatsOptions::default()).unwrap();
        assert_eq!((r.houses, r.total_rooms, r.mean_rooms, r.median_rooms), (1, 3, 3.0, 3.0));
    }

    #[test]
    fn two_plans() {
        let r = corpus_stats(&[plan_with_rooms(2), plan_with_rooms(4)], StatsOptions::default()).unwrap();
        assert_eq!((r.total_rooms, r.mean_rooms, r.median_rooms), (6, 3.0, 3.0));
        assert_eq!(r.categories["bedroom"], 3);
        assert_eq!(r.categories["kitchen"], 3);
    }

    #[test]
    fn empty_rejected() {
        assert!(corpus_stats(&[], StatsOptions::default()).is_err());
        assert!(corpus_stats(&[plan_with_rooms(0)], StatsOptions::default()).is_err());
    }

    #[test]
    fn implicit_room_flag() {
        let plans = [plan_with_rooms(0), plan_with_rooms(3)];
        let skip = corpus_stats(&plans, StatsOptions::default()).unwrap();
        assert_eq!((skip.houses, skip.skipped_without_rooms), (1, 1));
        let count = corpus_stats(&plans, StatsOptions { implicit_room: true }).unwrap();
        assert_eq!((count.houses, count.total_rooms, count.median_rooms), (2, 4, 2.0));
    }

    #[test]
    fn permutation_invariant_and_totals_add_up() {
        let plans: Vec<FloorPlan> = [5, 1, 7, 7, 2, 9, 4].iter().map(|&n| plan_with_rooms(n)).collect();
        let a = corpus_stats(&plans, StatsOptions::default()).unwrap();
        let mut rev = plans.clone();
        rev.reverse();
        rev.swap(1, 4);
        let b = corpus_stats(&rev, StatsOptions::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.total_rooms, plans.iter().map(|p| p.rooms.len()).sum::<usize>());
        assert_eq!(a.median_rooms, 5.0);
    }

    #[test]
    fn table_is_aligned() {
        let r = corpus_stats(&[plan_with_rooms(2)], StatsOptions::default()).unwrap();
        let t = r.to_table();
        let widths: Vec<usize> = t.lines().map(str::len).collect();
        assert!(widths.windows(2).all(|w| w[0] == w[1]), "{t}");
    }
}
