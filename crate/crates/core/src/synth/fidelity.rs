use std::io::Write;

use serde::{Deserialize, Serialize};

use super::stats::quartile_stats;
use crate::data::DailyRecord;
use crate::features::{DENSE_FEATURES, MEAN_LEN, MEAN_OFFSET};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityRow {
    pub feature: String,
    /// `Q1`, `Q2` or `Q3`.
    pub quartile: String,
    pub original: f64,
    pub synthetic: f64,
    /// `100 * (synthetic - original) / |original|`; 0 when both are 0 and
    /// infinite when only the original is 0.
    pub relative_change_pct: f64,
}

fn relative_change(original: f64, synthetic: f64) -> f64 {
    if original == 0.0 {
        if synthetic == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        100.0 * (synthetic - original) / original.abs()
    }
}

/// Quartiles of every averaged feature over the original reverts and over
/// the synthetic records, with their relative change.
pub fn fidelity_report(original_reverts: &[DailyRecord], synthetic: &[DailyRecord]) -> Result<Vec<FidelityRow>> {
    let column = |rs: &[DailyRecord], f: usize| rs.iter().map(|r| r.mean_values()[f]).collect::<Vec<_>>();
    let mut rows = Vec::with_capacity(3 * MEAN_LEN);
    for f in 0..MEAN_LEN {
        let o = quartile_stats(&column(original_reverts, f))?.quartiles();
        let s = quartile_stats(&column(synthetic, f))?.quartiles();
        for q in 0..3 {
            rows.push(FidelityRow {
                feature: DENSE_FEATURES[MEAN_OFFSET + f].key.to_string(),
                quartile: format!("Q{}", q + 1),
                original: o[q],
                synthetic: s[q],
                relative_change_pct: relative_change(o[q], s[q]),
            });
        }
    }
    Ok(rows)
}

pub fn write_fidelity_csv<W: Write>(w: W, rows: &[FidelityRow]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for row in rows {
        wtr.serialize(row)?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_change_cases() {
        assert!((relative_change(2.0, 2.2) - 10.0).abs() < 1e-9);
        assert_eq!(relative_change(-2.0, -1.0), 50.0);
        assert_eq!(relative_change(0.0, 0.0), 0.0);
        assert!(relative_change(0.0, 1.0).is_infinite());
    }
}
