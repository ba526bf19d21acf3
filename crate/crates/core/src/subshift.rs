//! Bit subshifts defined by step-indexed forbidden-word enumerators.
//!
//! An enumerator is a pure function of the step budget `t`: the words
//! released within `t` steps. The front is monotone in `t` and empty at
//! `t = 0`. Release orders:
//!
//! * `finite`: the `i`-th listed word at step `i + 1`.
//! * `golden_mean`: `11` at step 1, nothing afterwards.
//! * `even_shift`: `1 0^(2k+1) 1` at step `k + 1`.
//! * `program`: breadth-first expansion of a seed list under insertion
//!   rules; each step releases the next unseen word no longer than
//!   `max_len`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest window length the brute-force oracle will enumerate.
pub const MAX_ORACLE_LEN: usize = 20;

/// A finite bit string.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::Invalid {
                what: "word",
                reason: format!("letter {b} is not a bit"),
            });
        }
        Ok(Word(bits))
    }

    pub fn zeros(n: usize) -> Self {
        Word(vec![0; n])
    }

    /// The `n`-bit word spelling `value` most significant bit first.
    pub fn from_index(value: u64, n: usize) -> Self {
        Word((0..n).map(|i| ((value >> (n - 1 - i)) & 1) as u8).collect())
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<u8> {
        self.0.get(i).copied()
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] ^= 1;
    }

    pub fn factor(&self, start: usize, len: usize) -> Word {
        Word(self.0[start..start + len].to_vec())
    }

    /// Offsets at which `pattern` occurs.
    pub fn occurrences<'a>(&'a self, pattern: &'a Word) -> impl Iterator<Item = usize> + 'a {
        let n = pattern.len();
        let starts = (self.len() + 1).saturating_sub(n);
        (0..starts).filter(move |&i| self.0[i..i + n] == pattern.0[..])
    }

    pub fn contains(&self, pattern: &Word) -> bool {
        self.occurrences(pattern).next().is_some()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            f.write_str(if *b == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Invalid {
                    what: "word",
                    reason: format!("`{c}` is not a bit"),
                }),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Anything that releases forbidden words step by step.
///
/// Implementations must be pure, with `enum_step(0)` empty and
/// `enum_step(t)` a prefix of `enum_step(t + 1)`.
pub trait ForbiddenEnumerator {
    fn enum_step(&self, t: usize) -> Vec<Word>;
}

/// One rule of a generator table: insert `insert` at offset `at` of a
/// word (clamped to its length).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Insertion {
    pub at: usize,
    pub insert: Word,
}

/// Bounded word generator for the `program` builtin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorTable {
    pub seeds: Vec<Word>,
    #[serde(default)]
    pub rules: Vec<Insertion>,
    pub max_len: usize,
}

impl GeneratorTable {
    fn release(&self, t: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        let mut queue: VecDeque<Word> = self.seeds.iter().cloned().collect();
        while out.len() < t {
            let Some(w) = queue.pop_front() else { break };
            if w.len() > self.max_len || !seen.insert(w.clone()) {
                continue;
            }
            for r in &self.rules {
                let at = r.at.min(w.len());
                let mut bits = w.0[..at].to_vec();
                bits.extend_from_slice(&r.insert.0);
                bits.extend_from_slice(&w.0[at..]);
                queue.push_back(Word(bits));
            }
            out.push(w);
        }
        out
    }
}

/// A bit subshift given by its forbidden-word enumerator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr", into = "SpecRepr")]
pub enum SubshiftSpec {
    FiniteList(Vec<Word>),
    GoldenMean,
    EvenShift,
    Program(GeneratorTable),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum SpecRepr {
    Finite {
        words: Vec<Word>,
    },
    Builtin {
        name: String,
        #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
        params: serde_json::Value,
    },
}

impl TryFrom<SpecRepr> for SubshiftSpec {
    type Error = Error;
    fn try_from(r: SpecRepr) -> Result<Self> {
        match r {
            SpecRepr::Finite { words } => Ok(SubshiftSpec::FiniteList(words)),
            SpecRepr::Builtin { name, params } => match name.as_str() {
                "golden_mean" => Ok(SubshiftSpec::GoldenMean),
                "even_shift" => Ok(SubshiftSpec::EvenShift),
                "finite_list" => {
                    #[derive(Deserialize)]
                    struct P {
                        words: Vec<Word>,
                    }
                    let p: P = serde_json::from_value(params)?;
                    Ok(SubshiftSpec::FiniteList(p.words))
                }
                "program" => Ok(SubshiftSpec::Program(serde_json::from_value(params)?)),
                other => Err(Error::Invalid {
                    what: "subshift spec",
                    reason: format!("unknown builtin `{other}`"),
                }),
            },
        }
    }
}

impl From<SubshiftSpec> for SpecRepr {
    fn from(s: SubshiftSpec) -> Self {
        let builtin = |name: &str, params: serde_json::Value| SpecRepr::Builtin {
            name: name.into(),
            params,
        };
        match s {
            SubshiftSpec::FiniteList(words) => SpecRepr::Finite { words },
            SubshiftSpec::GoldenMean => builtin("golden_mean", serde_json::Value::Null),
            SubshiftSpec::EvenShift => builtin("even_shift", serde_json::Value::Null),
            SubshiftSpec::Program(g) => {
                builtin("program", serde_json::to_value(g).expect("table serializes"))
            }
        }
    }
}

impl SubshiftSpec {
    pub fn finite<I, S>(words: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        words
            .into_iter()
            .map(|w| w.as_ref().parse())
            .collect::<Result<Vec<Word>>>()
            .map(SubshiftSpec::FiniteList)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    /// Short human-readable name.
    pub fn name(&self) -> &'static str {
        match self {
            SubshiftSpec::FiniteList(_) => "finite",
            SubshiftSpec::GoldenMean => "golden_mean",
            SubshiftSpec::EvenShift => "even_shift",
            SubshiftSpec::Program(_) => "program",
        }
    }
}

impl ForbiddenEnumerator for SubshiftSpec {
    fn enum_step(&self, t: usize) -> Vec<Word> {
        match self {
            SubshiftSpec::FiniteList(words) => words.iter().take(t).cloned().collect(),
            SubshiftSpec::GoldenMean => {
                if t >= 1 {
                    vec![Word(vec![1, 1])]
                } else {
                    vec![]
                }
            }
            SubshiftSpec::EvenShift => (0..t)
                .map(|k| {
                    let mut bits = vec![1];
                    bits.extend(std::iter::repeat_n(0, 2 * k + 1));
                    bits.push(1);
                    Word(bits)
                })
                .collect(),
            SubshiftSpec::Program(g) => g.release(t),
        }
    }
}

/// The forbidden words released within `t` steps.
pub fn enum_step(spec: &SubshiftSpec, t: usize) -> Vec<Word> {
    spec.enum_step(t)
}

/// A forbidden factor and where it starts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Offender {
    pub factor: Word,
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Legality {
    pub legal: bool,
    pub offender: Option<Offender>,
}

/// Leftmost occurrence of any of `forbidden` in `word`; among words
/// occurring at that offset, the shortest.
pub fn first_offender(word: &Word, forbidden: &[Word]) -> Option<Offender> {
    let mut best: Option<Offender> = None;
    for f in forbidden {
        if let Some(offset) = word.occurrences(f).next() {
            let better = match &best {
                None => true,
                Some(b) => (offset, f.len(), f) < (b.offset, b.factor.len(), &b.factor),
            };
            if better {
                best = Some(Offender {
                    factor: f.clone(),
                    offset,
                });
            }
        }
    }
    best
}

pub fn is_legal_window(spec: &SubshiftSpec, word: &Word, t: usize) -> Legality {
    let offender = first_offender(word, &spec.enum_step(t));
    Legality {
        legal: offender.is_none(),
        offender,
    }
}

/// All length-`n` words with no factor released within `t` steps,
/// in increasing binary order.
pub fn legal_words(spec: &SubshiftSpec, n: usize, t: usize) -> Result<Vec<Word>> {
    if n > MAX_ORACLE_LEN {
        return Err(Error::ResourceLimit(format!(
            "window length {n} exceeds oracle cap {MAX_ORACLE_LEN}"
        )));
    }
    let forbidden = spec.enum_step(t);
    Ok((0..1u64 << n)
        .map(|v| Word::from_index(v, n))
        .filter(|w| !forbidden.iter().any(|f| w.contains(f)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn words(list: &[&str]) -> Vec<Word> {
        list.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn even_program() -> SubshiftSpec {
        SubshiftSpec::Program(GeneratorTable {
            seeds: words(&["101"]),
            rules: vec![Insertion {
                at: 1,
                insert: "00".parse().unwrap(),
            }],
            max_len: 40,
        })
    }

    #[test]
    fn step_zero_is_empty() {
        for spec in [
            SubshiftSpec::GoldenMean,
            SubshiftSpec::EvenShift,
            SubshiftSpec::finite(["0"]).unwrap(),
            even_program(),
        ] {
            assert!(enum_step(&spec, 0).is_empty());
        }
    }

    #[test]
    fn golden_mean_releases_one_word() {
        assert_eq!(enum_step(&SubshiftSpec::GoldenMean, 1), words(&["11"]));
        assert_eq!(enum_step(&SubshiftSpec::GoldenMean, 5), words(&["11"]));
    }

    #[test]
    fn even_shift_release_order() {
        assert_eq!(
            enum_step(&SubshiftSpec::EvenShift, 3),
            words(&["101", "10001", "1000001"])
        );
    }

    #[test]
    fn program_reproduces_even_shift() {
        for t in 0..8 {
            assert_eq!(enum_step(&even_program(), t), enum_step(&SubshiftSpec::EvenShift, t));
        }
    }

    #[test]
    fn program_respects_max_len() {
        let g = SubshiftSpec::Program(GeneratorTable {
            seeds: words(&["11"]),
            rules: vec![Insertion {
                at: 0,
                insert: "0".parse().unwrap(),
            }],
            max_len: 4,
        });
        assert_eq!(enum_step(&g, 10), words(&["11", "011", "0011"]));
    }

    #[test]
    fn finite_list_releases_in_order() {
        let s = SubshiftSpec::finite(["00", "111"]).unwrap();
        assert_eq!(enum_step(&s, 1), words(&["00"]));
        assert_eq!(enum_step(&s, 9), words(&["00", "111"]));
    }

    #[test]
    fn golden_mean_oracle() {
        let g = SubshiftSpec::GoldenMean;
        assert_eq!(legal_words(&g, 1, 1).unwrap(), words(&["0", "1"]));
        assert_eq!(legal_words(&g, 2, 1).unwrap(), words(&["00", "01", "10"]));
        assert_eq!(
            legal_words(&g, 3, 1).unwrap(),
            words(&["000", "001", "010", "100", "101"])
        );
        assert!(legal_words(&g, MAX_ORACLE_LEN + 1, 1).is_err());
    }

    #[test]
    fn legality_reports_offender() {
        let g = SubshiftSpec::GoldenMean;
        let v = is_legal_window(&g, &"0110".parse().unwrap(), 1);
        assert!(!v.legal);
        assert_eq!(
            v.offender,
            Some(Offender {
                factor: "11".parse().unwrap(),
                offset: 1
            })
        );
        assert!(is_legal_window(&g, &"0101".parse().unwrap(), 1).legal);
        assert!(is_legal_window(&g, &"1111".parse().unwrap(), 0).legal);
    }

    #[test]
    fn offender_prefers_leftmost_then_shortest() {
        let w: Word = "10101".parse().unwrap();
        let o = first_offender(&w, &words(&["0101", "10101", "101"])).unwrap();
        assert_eq!((o.factor.to_string(), o.offset), ("101".into(), 0));
    }

    #[test]
    fn spec_json_shapes() {
        let s = SubshiftSpec::from_json(r#"{"kind":"finite","words":["11"]}"#).unwrap();
        assert_eq!(s, SubshiftSpec::finite(["11"]).unwrap());
        let e = SubshiftSpec::from_json(r#"{"kind":"builtin","name":"even_shift","params":{}}"#)
            .unwrap();
        assert_eq!(e, SubshiftSpec::EvenShift);
        assert_eq!(
            SubshiftSpec::GoldenMean.to_json(),
            r#"{"kind":"builtin","name":"golden_mean"}"#
        );
        assert!(SubshiftSpec::from_json(r#"{"kind":"builtin","name":"nope"}"#).is_err());
        let p = even_program();
        assert_eq!(SubshiftSpec::from_json(&p.to_json()).unwrap(), p);
    }

    fn arb_spec() -> impl Strategy<Value = SubshiftSpec> {
        prop_oneof![
            Just(SubshiftSpec::GoldenMean),
            Just(SubshiftSpec::EvenShift),
            Just(even_program()),
            proptest::collection::vec(proptest::collection::vec(0u8..2, 1..5), 0..5)
                .prop_map(|ws| SubshiftSpec::FiniteList(
                    ws.into_iter().map(|b| Word::new(b).unwrap()).collect()
                )),
        ]
    }

    proptest! {
        #[test]
        fn enumeration_is_monotone(spec in arb_spec(), t in 0usize..8) {
            let a = enum_step(&spec, t);
            let b = enum_step(&spec, t + 1);
            prop_assert!(b.starts_with(&a));
            prop_assert_eq!(a, enum_step(&spec, t));
        }

        #[test]
        fn legality_is_monotone_in_budget(spec in arb_spec(), n in 0usize..9, t in 0usize..5) {
            let wider = legal_words(&spec, n, t).unwrap();
            for w in legal_words(&spec, n, t + 1).unwrap() {
                prop_assert!(wider.contains(&w));
            }
        }

        #[test]
        fn legal_words_are_factor_closed(spec in arb_spec(), n in 1usize..9, t in 0usize..5) {
            for w in legal_words(&spec, n, t).unwrap() {
                for len in 0..=n {
                    for start in 0..=n - len {
                        prop_assert!(is_legal_window(&spec, &w.factor(start, len), t).legal);
                    }
                }
            }
        }

        #[test]
        fn oracle_matches_window_check(spec in arb_spec(), n in 0usize..9, t in 0usize..5) {
            let legal = legal_words(&spec, n, t).unwrap();
            for v in 0..1u64 << n {
                let w = Word::from_index(v, n);
                prop_assert_eq!(legal.contains(&w), is_legal_window(&spec, &w, t).legal);
            }
        }
    }
}
