//! Peak and band detection used by the preset reproduction checks.

/// A local maximum and its topographic prominence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub index: usize,
    pub prominence: f64,
}

/// Interior local maxima of `values` with their prominence: height above
/// the higher of the two lowest points reachable on either side before
/// meeting a strictly higher sample (or the end). Plateaus count once, at
/// their left edge.
pub fn peaks(values: &[f64]) -> Vec<Peak> {
    let n = values.len();
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if values[i] > values[i - 1] {
            let mut j = i;
            while j + 1 < n && values[j + 1] == values[i] {
                j += 1;
            }
            if j + 1 < n && values[j + 1] < values[i] {
                let h = values[i];
                let mut left_min = h;
                for k in (0..i).rev() {
                    if values[k] > h {
                        break;
                    }
                    left_min = left_min.min(values[k]);
                }
                let mut right_min = h;
                for &v in &values[j + 1..] {
                    if v > h {
                        break;
                    }
                    right_min = right_min.min(v);
                }
                out.push(Peak {
                    index: i,
                    prominence: h - left_min.max(right_min),
                });
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

/// Peaks of `log10(psd)` whose prominence reaches `min_decades`.
pub fn bands(psd: &[f64], min_decades: f64) -> Vec<usize> {
    let log: Vec<f64> = psd.iter().map(|v| v.log10()).collect();
    peaks(&log)
        .into_iter()
        .filter(|p| p.prominence >= min_decades)
        .map(|p| p.index)
        .collect()
}
