//! Tri-state classification of signed margins and the consensus rule used
//! by every battery of equivalent criteria.

use serde::{Deserialize, Serialize};

/// Position of a signed margin relative to the boundary band.
///
/// Margins are positive on the strict side of an inequality (open domain,
/// strictly feasible problem) and negative on the violating side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Interior,
    Boundary,
    Exterior,
}

impl Region {
    pub fn classify(margin: f64, band: f64) -> Region {
        if margin.is_nan() {
            Region::Boundary
        } else if margin > band {
            Region::Interior
        } else if margin < -band {
            Region::Exterior
        } else {
            Region::Boundary
        }
    }

    /// Member of the closed set (interior or boundary band).
    pub fn in_closure(self) -> bool {
        self != Region::Exterior
    }

    pub fn opposes(self, other: Region) -> bool {
        matches!(
            (self, other),
            (Region::Interior, Region::Exterior) | (Region::Exterior, Region::Interior)
        )
    }
}

/// Two criteria that landed strictly on opposite sides of the band.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conflict {
    pub first: String,
    pub second: String,
    #[serde(with = "crate::ext_float::pair")]
    pub margins: (f64, f64),
}

/// Combines per-criterion regions into one verdict.
///
/// Without conflicts: interior if any criterion is interior, exterior if any
/// is exterior, boundary otherwise. With conflicts the strict votes are
/// counted and a tie yields boundary; every opposing pair is returned.
pub fn consensus<'a, I>(items: I) -> (Region, Vec<Conflict>)
where
    I: IntoIterator<Item = (&'a str, Region, f64)>,
{
    let items: Vec<_> = items.into_iter().collect();
    let mut conflicts = Vec::new();
    for (i, a) in items.iter().enumerate() {
        for b in &items[i + 1..] {
            if a.1.opposes(b.1) {
                conflicts.push(Conflict {
                    first: a.0.to_string(),
                    second: b.0.to_string(),
                    margins: (a.2, b.2),
                });
            }
        }
    }
    let inside = items.iter().filter(|t| t.1 == Region::Interior).count();
    let outside = items.iter().filter(|t| t.1 == Region::Exterior).count();
    let overall = match inside.cmp(&outside) {
        _ if inside == 0 && outside == 0 => Region::Boundary,
        std::cmp::Ordering::Greater => Region::Interior,
        std::cmp::Ordering::Less => Region::Exterior,
        std::cmp::Ordering::Equal => Region::Boundary,
    };
    (overall, conflicts)
}
