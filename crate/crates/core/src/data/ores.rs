//! Precomputed ORES probability blocks attached to each review.

use serde::{Deserialize, Serialize};

/// Edit quality: damaging and good-faith probability pairs.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EditQuality {
    pub damaging_false: f64,
    pub damaging_true: f64,
    pub goodfaith_false: f64,
    pub goodfaith_true: f64,
}

/// Item quality classes A to E.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ItemQuality {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
}

/// Article draft quality.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ArticleQuality {
    pub ok: f64,
    pub attack: f64,
    pub spam: f64,
    pub vandalism: f64,
}

/// WikiProject 1.0 assessment classes.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Wp10 {
    pub b: f64,
    pub c: f64,
    pub fa: f64,
    pub ga: f64,
    pub start: f64,
    pub stub: f64,
}

/// Total number of probability columns across the four blocks.
pub const ORES_LEN: usize = 19;

/// All four blocks, flattened in a fixed order: edit (4), item (5),
/// article (4), wp10 (6).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OresScores {
    pub edit: EditQuality,
    pub item: ItemQuality,
    pub article: ArticleQuality,
    pub wp10: Wp10,
}

impl OresScores {
    pub fn to_array(&self) -> [f64; ORES_LEN] {
        let e = &self.edit;
        let i = &self.item;
        let a = &self.article;
        let w = &self.wp10;
        [
            e.damaging_false,
            e.damaging_true,
            e.goodfaith_false,
            e.goodfaith_true,
            i.a,
            i.b,
            i.c,
            i.d,
            i.e,
            a.ok,
            a.attack,
            a.spam,
            a.vandalism,
            w.b,
            w.c,
            w.fa,
            w.ga,
            w.start,
            w.stub,
        ]
    }

    pub fn from_slice(v: &[f64]) -> Self {
        assert_eq!(v.len(), ORES_LEN, "ORES block needs {ORES_LEN} values");
        Self {
            edit: EditQuality {
                damaging_false: v[0],
                damaging_true: v[1],
                goodfaith_false: v[2],
                goodfaith_true: v[3],
            },
            item: ItemQuality {
                a: v[4],
                b: v[5],
                c: v[6],
                d: v[7],
                e: v[8],
            },
            article: ArticleQuality {
                ok: v[9],
                attack: v[10],
                spam: v[11],
                vandalism: v[12],
            },
            wp10: Wp10 {
                b: v[13],
                c: v[14],
                fa: v[15],
                ga: v[16],
                start: v[17],
                stub: v[18],
            },
        }
    }

    /// Checks ranges and the complementary damaging/good-faith pairs.
    pub fn validate(&self) -> Result<(), String> {
        for (i, p) in self.to_array().iter().enumerate() {
            if !p.is_finite() || !(0.0..=1.0).contains(p) {
                return Err(format!("ORES probability #{i} out of [0, 1]: {p}"));
            }
        }
        let e = &self.edit;
        if (e.damaging_false + e.damaging_true - 1.0).abs() > 1e-6 {
            return Err("damaging probabilities do not sum to 1".into());
        }
        if (e.goodfaith_false + e.goodfaith_true - 1.0).abs() > 1e-6 {
            return Err("goodfaith probabilities do not sum to 1".into());
        }
        Ok(())
    }
}
