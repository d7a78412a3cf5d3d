//! A proper metric space without bounded geometry: clouds `D_j` of `j`
//! points, each at distance one from its own centre, with
//! `d(z, y) = d(z, centre) + |j(z) − j(y)| + d(y, centre)` for `z ≠ y`.

use serde::Serialize;

use crate::length::MetricView;

/// Point `index` of cloud `cloud`; index 0 is the centre.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CloudPoint {
    pub cloud: u32,
    pub index: u32,
}

/// The clouds `D_1, …, D_count` and their metric.
pub fn star_clouds(count: u32) -> (Vec<CloudPoint>, MetricView<CloudPoint, i64>) {
    let points = (1..=count)
        .flat_map(|cloud| (0..cloud).map(move |index| CloudPoint { cloud, index }))
        .collect();
    let metric = MetricView::from_fn("star clouds", |z: &CloudPoint, y: &CloudPoint| {
        if z == y {
            return 0;
        }
        let off = |p: &CloudPoint| i64::from(p.index != 0);
        off(z) + (i64::from(z.cloud) - i64::from(y.cloud)).abs() + off(y)
    });
    (points, metric)
}
