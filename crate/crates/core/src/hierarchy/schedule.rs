//! Zoom factors `N(k)`, macro-tile sides `L(k)`, group lengths `l(k)`, and
//! the per-level position rules derived from them.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent cap for paper-mode zoom factors: `N(k)` is refused once
/// `C * 2^k` exceeds this many bits.
pub const MAX_ZOOM_BITS: u64 = 1 << 24;

/// Level parameters. A level-`(k+1)` macro-tile is `N(k)`x`N(k)` level-`k`
/// macro-tiles; a level-`k` tile is `L(k)` cells wide; it checks a group
/// of `l(k)` bits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ScheduleRepr", into = "ScheduleRepr")]
pub enum ZoomSchedule {
    /// `N(k) = 2^(C 2^k)` and `l(k) = k`.
    Paper { c: u32 },
    /// Explicit zoom factors; group lengths default to `l(k) = k`.
    Custom {
        zoom: Vec<BigUint>,
        group_len: Option<Vec<usize>>,
    },
}

#[derive(Serialize, Deserialize)]
struct ScheduleRepr {
    /// Inferred from which of `C` and `N` is present when omitted.
    #[serde(default)]
    mode: Option<String>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    c: Option<u32>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    zoom: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    l: Option<Vec<usize>>,
}

impl TryFrom<ScheduleRepr> for ZoomSchedule {
    type Error = Error;
    fn try_from(r: ScheduleRepr) -> Result<Self> {
        let mode = r.mode.as_deref().unwrap_or(if r.c.is_some() { "paper" } else { "custom" });
        match (mode, r.c, r.zoom) {
            ("paper", Some(c), None) => ZoomSchedule::paper(c),
            ("custom", None, Some(n)) => ZoomSchedule::custom(n, r.l),
            _ => Err(Error::Invalid {
                what: "schedule",
                reason: "expected {\"mode\":\"paper\",\"C\":..} or {\"mode\":\"custom\",\"N\":[..]}".into(),
            }),
        }
    }
}

impl From<ZoomSchedule> for ScheduleRepr {
    fn from(s: ZoomSchedule) -> Self {
        match s {
            ZoomSchedule::Paper { c } => ScheduleRepr {
                mode: Some("paper".into()),
                c: Some(c),
                zoom: None,
                l: None,
            },
            ZoomSchedule::Custom { zoom, group_len } => ScheduleRepr {
                mode: Some("custom".into()),
                c: None,
                zoom: Some(zoom.iter().map(|n| n.to_u64().unwrap_or(u64::MAX)).collect()),
                l: group_len,
            },
        }
    }
}

impl ZoomSchedule {
    pub fn paper(c: u32) -> Result<Self> {
        if c == 0 {
            return Err(Error::Invalid {
                what: "schedule",
                reason: "C must be positive".into(),
            });
        }
        Ok(ZoomSchedule::Paper { c })
    }

    pub fn custom(zoom: Vec<u64>, group_len: Option<Vec<usize>>) -> Result<Self> {
        if zoom.is_empty() {
            return Err(Error::Invalid {
                what: "schedule",
                reason: "empty zoom list".into(),
            });
        }
        if let Some(k) = zoom.iter().position(|&n| n < 2) {
            return Err(Error::Invalid {
                what: "schedule",
                reason: format!("N({k}) = {} is below 2", zoom[k]),
            });
        }
        if let Some(l) = &group_len {
            if l.len() < zoom.len() {
                return Err(Error::Invalid {
                    what: "schedule",
                    reason: format!("{} group lengths for {} levels", l.len(), zoom.len()),
                });
            }
        }
        Ok(ZoomSchedule::Custom {
            zoom: zoom.into_iter().map(BigUint::from).collect(),
            group_len,
        })
    }

    /// Highest level with a defined zoom factor, if the schedule is finite.
    pub fn defined_levels(&self) -> Option<usize> {
        match self {
            ZoomSchedule::Paper { .. } => None,
            ZoomSchedule::Custom { zoom, .. } => Some(zoom.len()),
        }
    }

    /// `N(k)`.
    pub fn zoom(&self, k: usize) -> Result<BigUint> {
        match self {
            ZoomSchedule::Paper { c } => {
                let bits = paper_exponent(*c, k).ok_or(Error::ScheduleTooLarge(k))?;
                Ok(BigUint::one() << bits)
            }
            ZoomSchedule::Custom { zoom, .. } => zoom.get(k).cloned().ok_or(Error::LevelBeyondSchedule {
                level: k,
                len: zoom.len(),
            }),
        }
    }

    /// Bit length of `N(k)`, without materializing it in paper mode.
    pub fn zoom_bits(&self, k: usize) -> Result<u64> {
        match self {
            ZoomSchedule::Paper { c } => paper_exponent(*c, k)
                .map(|e| e + 1)
                .ok_or(Error::ScheduleTooLarge(k)),
            ZoomSchedule::Custom { .. } => Ok(self.zoom(k)?.bits()),
        }
    }

    /// `L(k) = N(0) N(1) ... N(k-1)`, with `L(0) = 1`.
    pub fn side(&self, k: usize) -> Result<BigUint> {
        let mut acc = BigUint::one();
        for i in 0..k {
            acc *= self.zoom(i)?;
        }
        Ok(acc)
    }

    /// `l(k)`.
    pub fn group_len(&self, k: usize) -> Result<usize> {
        match self {
            ZoomSchedule::Custom {
                group_len: Some(l), ..
            } => l.get(k).copied().ok_or(Error::LevelBeyondSchedule {
                level: k,
                len: l.len(),
            }),
            _ => Ok(k),
        }
    }

    pub fn zoom_u64(&self, k: usize) -> Result<u64> {
        self.zoom(k)?.to_u64().ok_or(Error::ScheduleTooLarge(k))
    }

    pub fn side_u64(&self, k: usize) -> Result<u64> {
        let s = self.side(k)?;
        s.to_u64()
            .filter(|&v| v <= i64::MAX as u64 / 4)
            .ok_or(Error::ScheduleTooLarge(k))
    }
}

fn paper_exponent(c: u32, k: usize) -> Option<u64> {
    if k >= 40 {
        return None;
    }
    let e = (c as u64).checked_mul(1u64 << k)?;
    (e <= MAX_ZOOM_BITS).then_some(e)
}

pub fn zoom_n(s: &ZoomSchedule, k: usize) -> Result<BigUint> {
    s.zoom(k)
}

pub fn side_l(s: &ZoomSchedule, k: usize) -> Result<BigUint> {
    s.side(k)
}

fn check_vpos(s: &ZoomSchedule, k: usize, vpos: &BigUint) -> Result<()> {
    let n = s.zoom(k)?;
    if vpos >= &n {
        return Err(Error::Invalid {
            what: "vertical position",
            reason: format!("{vpos} is not below N({k}) = {n}"),
        });
    }
    Ok(())
}

/// Offset, within its own zone, of the bit a level-`k` tile at vertical
/// position `vpos` in its father is responsible for. Tiles at
/// `vpos >= L(k)` carry no bit.
pub fn delegated_bit_index(s: &ZoomSchedule, k: usize, vpos: &BigUint) -> Result<Option<BigUint>> {
    check_vpos(s, k, vpos)?;
    Ok((vpos < &s.side(k)?).then(|| vpos.clone()))
}

/// Where the bit group checked by a level-`k` tile starts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSlot {
    /// Offset from the left edge of the extended zone.
    pub start: BigUint,
    pub len: usize,
}

/// A tile's group starts at its vertical position in its father, and
/// exists only if it fits in the `3 L(k)` wide extended zone.
pub fn group_assignment(s: &ZoomSchedule, k: usize, vpos: &BigUint) -> Result<Option<GroupSlot>> {
    check_vpos(s, k, vpos)?;
    let len = s.group_len(k)?;
    let width = s.side(k)? * 3u32;
    Ok((vpos + len <= width).then(|| GroupSlot {
        start: vpos.clone(),
        len,
    }))
}

/// Half-open column interval of the extended zone of level-`k` block
/// `block`: the block plus both horizontal neighbors.
pub fn extended_zone(s: &ZoomSchedule, k: usize, block: i64, alignment: i64) -> Result<(i64, i64)> {
    let l = s.side_u64(k)? as i64;
    let lo = (block - 1)
        .checked_mul(l)
        .and_then(|v| v.checked_add(alignment))
        .ok_or(Error::ScheduleTooLarge(k))?;
    Ok((lo, lo + 3 * l))
}

/// Slack constants standing in for the asymptotic "much less than"
/// relations between schedule parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Margins {
    pub log: u64,
    pub son: u64,
    pub group: u64,
}

impl Default for Margins {
    fn default() -> Self {
        Margins {
            log: 10,
            son: 2,
            group: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ScheduleCheck {
    /// `log·(bitlen N(k+1) + bitlen N(k+2)) <= N(k-1)`: coordinates of
    /// father and grandfather fit.
    #[serde(rename = "a")]
    Coordinates,
    /// `N(k) >= son·L(k)`: enough sons to hold every bit of the zone.
    #[serde(rename = "b")]
    EnoughSons,
    /// `group·(l(k) + 3 l(k+1)) <= N(k-1)`: own group plus three
    /// recorded groups fit.
    #[serde(rename = "c")]
    GroupsFit,
    /// `l(k) <= N(k-1)`: the enumeration budget fits.
    #[serde(rename = "d")]
    Budget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// A side needs a level the schedule does not define.
    Undefined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleRow {
    pub k: usize,
    pub check: ScheduleCheck,
    pub lhs: String,
    pub rhs: String,
    pub status: CheckStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ScheduleReport {
    pub rows: Vec<ScheduleRow>,
}

impl ScheduleReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.status == CheckStatus::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ScheduleRow> {
        self.rows.iter().filter(|r| r.status != CheckStatus::Pass)
    }

    pub fn row(&self, k: usize, check: ScheduleCheck) -> Option<&ScheduleRow> {
        self.rows.iter().find(|r| r.k == k && r.check == check)
    }
}

/// Evaluate the four parameter inequalities at every level up to `kmax`.
/// Checks that refer to `N(k-1)` start at `k = 1`.
pub fn validate_schedule(s: &ZoomSchedule, kmax: usize, m: Margins) -> ScheduleReport {
    let mut rows = Vec::new();
    for k in 0..=kmax {
        let mut push = |check, sides: Result<(BigUint, BigUint)>| {
            let row = match sides {
                Ok((lhs, rhs)) => ScheduleRow {
                    k,
                    check,
                    status: if lhs <= rhs {
                        CheckStatus::Pass
                    } else {
                        CheckStatus::Fail
                    },
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                },
                Err(e) => ScheduleRow {
                    k,
                    check,
                    lhs: e.to_string(),
                    rhs: String::new(),
                    status: CheckStatus::Undefined,
                },
            };
            rows.push(row);
        };
        if k >= 1 {
            push(
                ScheduleCheck::Coordinates,
                (|| {
                    let bits = s.zoom_bits(k + 1)? + s.zoom_bits(k + 2)?;
                    Ok((BigUint::from(m.log) * bits, s.zoom(k - 1)?))
                })(),
            );
        }
        push(
            ScheduleCheck::EnoughSons,
            (|| Ok((s.side(k)? * m.son, s.zoom(k)?)))(),
        );
        if k >= 1 {
            push(
                ScheduleCheck::GroupsFit,
                (|| {
                    let need = s.group_len(k)? + 3 * s.group_len(k + 1)?;
                    Ok((BigUint::from(m.group) * need, s.zoom(k - 1)?))
                })(),
            );
            push(
                ScheduleCheck::Budget,
                (|| Ok((BigUint::from(s.group_len(k)?), s.zoom(k - 1)?)))(),
            );
        }
    }
    ScheduleReport { rows }
}

/// `N(k) / L(k)` when it divides exactly.
pub fn zoom_ratio(s: &ZoomSchedule, k: usize) -> Result<Option<BigUint>> {
    let n = s.zoom(k)?;
    let l = s.side(k)?;
    if l.is_zero() || !(&n % &l).is_zero() {
        return Ok(None);
    }
    Ok(Some(n / l))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn paper_zoom_values() {
        assert_eq!(zoom_n(&ZoomSchedule::paper(1).unwrap(), 0).unwrap(), big(2));
        assert_eq!(zoom_n(&ZoomSchedule::paper(1).unwrap(), 2).unwrap(), big(16));
        assert_eq!(zoom_n(&ZoomSchedule::paper(2).unwrap(), 1).unwrap(), big(16));
    }

    #[test]
    fn paper_side_values() {
        let s = ZoomSchedule::paper(1).unwrap();
        assert_eq!(side_l(&s, 0).unwrap(), big(1));
        assert_eq!(side_l(&s, 2).unwrap(), big(8));
        assert_eq!(side_l(&s, 3).unwrap(), big(128));
        assert_eq!(side_l(&ZoomSchedule::paper(5).unwrap(), 0).unwrap(), big(1));
    }

    #[test]
    fn custom_beyond_list() {
        let s = ZoomSchedule::custom(vec![2, 3], None).unwrap();
        assert_eq!(s.zoom(1).unwrap(), big(3));
        assert!(matches!(s.zoom(2), Err(Error::LevelBeyondSchedule { .. })));
        assert!(ZoomSchedule::custom(vec![1], None).is_err());
        assert!(ZoomSchedule::paper(0).is_err());
    }

    #[test]
    fn paper_ratio_is_two_to_the_c() {
        for c in 1..=3 {
            let s = ZoomSchedule::paper(c).unwrap();
            for k in 0..=8 {
                assert_eq!(zoom_ratio(&s, k).unwrap(), Some(BigUint::one() << c));
            }
        }
    }

    #[test]
    fn enough_sons_holds_for_c1() {
        let s = ZoomSchedule::paper(1).unwrap();
        let r = validate_schedule(&s, 6, Margins::default());
        for k in 0..=6 {
            assert_eq!(
                r.row(k, ScheduleCheck::EnoughSons).unwrap().status,
                CheckStatus::Pass,
                "k={k}"
            );
        }
        let d = r.row(2, ScheduleCheck::Budget).unwrap();
        assert_eq!((d.lhs.as_str(), d.rhs.as_str(), d.status), ("2", "4", CheckStatus::Pass));
    }

    #[test]
    fn constant_two_fails_enough_sons_at_level_two() {
        let s = ZoomSchedule::custom(vec![2; 6], None).unwrap();
        let r = validate_schedule(&s, 3, Margins::default());
        let b = r.row(2, ScheduleCheck::EnoughSons).unwrap();
        assert_eq!((b.lhs.as_str(), b.rhs.as_str()), ("8", "2"));
        assert_eq!(b.status, CheckStatus::Fail);
    }

    #[test]
    fn undefined_levels_are_reported() {
        let s = ZoomSchedule::custom(vec![2, 2], None).unwrap();
        let r = validate_schedule(&s, 2, Margins::default());
        assert!(r.rows.iter().any(|row| row.status == CheckStatus::Undefined));
        assert!(!r.passed());
    }

    #[test]
    fn delegation_rule() {
        let s = ZoomSchedule::paper(1).unwrap();
        assert_eq!(delegated_bit_index(&s, 2, &big(3)).unwrap(), Some(big(3)));
        assert_eq!(delegated_bit_index(&s, 2, &big(0)).unwrap(), Some(big(0)));
        assert_eq!(delegated_bit_index(&s, 2, &big(8)).unwrap(), None);
        assert!(delegated_bit_index(&s, 2, &big(16)).is_err());
    }

    #[test]
    fn group_rule() {
        let s = ZoomSchedule::paper(1).unwrap();
        // N(2) = 16, so probe the fit boundary on a wider custom level too.
        assert_eq!(
            group_assignment(&s, 2, &big(5)).unwrap(),
            Some(GroupSlot { start: big(5), len: 2 })
        );
        let wide = ZoomSchedule::custom(vec![2, 4, 64], None).unwrap();
        assert_eq!(group_assignment(&wide, 2, &big(22)).unwrap().unwrap().start, big(22));
        assert_eq!(group_assignment(&wide, 2, &big(23)).unwrap(), None);
    }

    #[test]
    fn extended_zone_examples() {
        let s = ZoomSchedule::paper(1).unwrap();
        assert_eq!(extended_zone(&s, 1, 0, 0).unwrap(), (-2, 4));
        assert_eq!(extended_zone(&s, 2, 1, 0).unwrap(), (0, 24));
        assert_eq!(extended_zone(&s, 2, 0, 3).unwrap(), (-5, 19));
    }

    #[test]
    fn schedule_json() {
        let p = ZoomSchedule::paper(2).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"{"mode":"paper","C":2}"#);
        let c: ZoomSchedule = serde_json::from_str(r#"{"mode":"custom","N":[2,2],"l":[0,1]}"#).unwrap();
        assert_eq!(c.group_len(1).unwrap(), 1);
        assert_eq!(serde_json::from_str::<ZoomSchedule>(&serde_json::to_string(&c).unwrap()).unwrap(), c);
        assert_eq!(serde_json::from_str::<ZoomSchedule>(r#"{"C":2}"#).unwrap(), p);
        assert_eq!(serde_json::from_str::<ZoomSchedule>(r#"{"N":[2,2],"l":[0,1]}"#).unwrap(), c);
        assert!(serde_json::from_str::<ZoomSchedule>(r#"{"mode":"custom","C":2}"#).is_err());
    }
}
