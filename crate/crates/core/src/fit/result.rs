use std::collections::BTreeMap;

use serde::Serialize;

use super::sweep::DistanceSurface;

/// Cells within this of the minimum are listed as the valley.
pub const VALLEY_TOL: f64 = 1e-3;
const TIE_TOL: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValleyCell {
    pub index: [usize; 2],
    pub params: [f64; 2],
    pub value: f64,
}

/// Grid minimum with a one-spacing uncertainty per axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub params: BTreeMap<String, f64>,
    pub min: f64,
    /// Grid spacing per axis.
    pub cell: BTreeMap<String, f64>,
    pub index: [usize; 2],
    /// Several nodes shared the minimum; the one with the smallest
    /// parameters was chosen.
    pub tie: bool,
    pub valley: Vec<ValleyCell>,
}

impl FitResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fit result serializes")
    }

    /// Parameter values in axis order.
    pub fn point(&self, surface: &DistanceSurface) -> [f64; 2] {
        let [a, b] = &surface.grid.axis_names;
        [self.params[a], self.params[b]]
    }
}

/// Global minimum; ties go to the smallest index sum, then the smallest
/// first index.
pub fn locate_minimum(s: &DistanceSurface) -> FitResult {
    let [xs, ys] = s.axes();
    let mut best = (0usize, 0usize);
    let mut min = f64::INFINITY;
    for (i, row) in s.values.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v < min - TIE_TOL {
                min = v;
                best = (i, j);
            }
        }
    }
    let mut tied: Vec<(usize, usize)> = Vec::new();
    let mut valley = Vec::new();
    for (i, row) in s.values.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if (v - min).abs() <= TIE_TOL {
                tied.push((i, j));
            }
            if v - min <= VALLEY_TOL {
                valley.push(ValleyCell {
                    index: [i, j],
                    params: [xs[i], ys[j]],
                    value: v,
                });
            }
        }
    }
    if let Some(&first) = tied.iter().min_by_key(|(i, j)| (i + j, *i)) {
        best = first;
    }
    let names = &s.grid.axis_names;
    FitResult {
        params: BTreeMap::from([
            (names[0].clone(), xs[best.0]),
            (names[1].clone(), ys[best.1]),
        ]),
        min: s.values[best.0][best.1],
        cell: BTreeMap::from([
            (names[0].clone(), s.grid.step[0]),
            (names[1].clone(), s.grid.step[1]),
        ]),
        index: [best.0, best.1],
        tie: tied.len() > 1,
        valley,
    }
}
