//! Deterministic Turing machines on a fixed tape window, and their
//! space-time Wang tilings.
//!
//! Row `y` of a tiling shows the configuration at time `y` on its south
//! edges and time `y + 1` on its north edges. Vertical colors are a tape
//! symbol, or a symbol with the head and its state. Horizontal colors are
//! head-motion signals. Both sides of the window are color 0, so a head
//! leaving the tape admits no tiling.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Patch, WangTile, WangTileSet};
use crate::solver::{AllowedCell, BoundaryConstraint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    L,
    R,
    S,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transition {
    pub q: String,
    pub a: String,
    pub q2: String,
    pub a2: String,
    pub m: Move,
}

/// Machine description as exchanged in JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TMSpec {
    pub states: Vec<String>,
    pub start: String,
    pub accept: String,
    pub blank: String,
    pub delta: Vec<Transition>,
}

/// A validated machine with dense state and symbol indices.
#[derive(Debug, Clone)]
pub struct Machine {
    pub states: Vec<String>,
    /// Tape symbols; index 0 is the blank.
    pub symbols: Vec<String>,
    pub start: usize,
    pub accept: usize,
    delta: HashMap<(usize, usize), (usize, usize, Move)>,
}

impl TMSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("machine serializes")
    }

    /// Check the table and index it. Non-accept states need a transition
    /// for every tape symbol; the accept state has none.
    pub fn compile(&self) -> Result<Machine> {
        let bad = |m: String| Error::MalformedMachine(m);
        let mut states = Vec::new();
        for s in &self.states {
            if states.contains(s) {
                return Err(bad(format!("duplicate state `{s}`")));
            }
            states.push(s.clone());
        }
        let state = |name: &str| {
            states
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| bad(format!("unknown state `{name}`")))
        };
        let start = state(&self.start)?;
        let accept = state(&self.accept)?;

        let mut symbols = vec![self.blank.clone()];
        let extra: BTreeSet<&String> = self
            .delta
            .iter()
            .flat_map(|t| [&t.a, &t.a2])
            .filter(|s| **s != self.blank)
            .collect();
        symbols.extend(extra.into_iter().cloned());
        if let Some(s) = symbols.iter().find(|s| s.chars().count() != 1) {
            return Err(bad(format!("symbol `{s}` is not a single character")));
        }
        let symbol = |name: &str| symbols.iter().position(|s| s == name).expect("collected");

        let mut delta = HashMap::new();
        for t in &self.delta {
            let key = (state(&t.q)?, symbol(&t.a));
            if key.0 == accept {
                return Err(bad(format!("accept state `{}` has a transition", t.q)));
            }
            let val = (state(&t.q2)?, symbol(&t.a2), t.m);
            if delta.insert(key, val).is_some() {
                return Err(bad(format!("two transitions for ({}, {})", t.q, t.a)));
            }
        }
        for q in (0..states.len()).filter(|&q| q != accept) {
            for (a, sym) in symbols.iter().enumerate() {
                if !delta.contains_key(&(q, a)) {
                    return Err(bad(format!("no transition for ({}, {sym})", states[q])));
                }
            }
        }
        Ok(Machine {
            states,
            symbols,
            start,
            accept,
            delta,
        })
    }
}

impl Machine {
    pub fn step(&self, q: usize, a: usize) -> Option<(usize, usize, Move)> {
        self.delta.get(&(q, a)).copied()
    }

    /// Tape indices of an input string, one character per cell.
    pub fn parse_input(&self, input: &str) -> Result<Vec<usize>> {
        input
            .chars()
            .map(|c| {
                self.symbols
                    .iter()
                    .position(|s| s.starts_with(c))
                    .ok_or_else(|| Error::MalformedMachine(format!("input symbol `{c}` not on tape")))
            })
            .collect()
    }

    /// Non-blank symbols, the alphabet inputs are drawn from.
    pub fn input_symbols(&self) -> Vec<char> {
        self.symbols[1..]
            .iter()
            .filter_map(|s| s.chars().next())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Configuration {
    pub tape: String,
    pub head: usize,
    pub state: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Accepted { steps: usize },
    Running,
    OutOfBounds { step: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub configs: Vec<Configuration>,
    pub verdict: Verdict,
}

impl Transcript {
    pub fn accepted(&self) -> bool {
        matches!(self.verdict, Verdict::Accepted { .. })
    }
}

fn render_tape(m: &Machine, tape: &[usize]) -> String {
    tape.iter().map(|&a| m.symbols[a].as_str()).collect()
}

/// Simulate from the left end of a blank-padded window of `tape_width`
/// cells.
pub fn run_tm(tm: &TMSpec, input: &str, max_steps: usize, tape_width: usize) -> Result<Transcript> {
    let m = tm.compile()?;
    let cells = m.parse_input(input)?;
    if cells.len() > tape_width {
        return Err(Error::Invalid {
            what: "input",
            reason: format!("{} symbols exceed tape width {tape_width}", cells.len()),
        });
    }
    if tape_width == 0 {
        return Err(Error::Invalid {
            what: "tape width",
            reason: "must be at least 1".into(),
        });
    }
    let mut tape = cells;
    tape.resize(tape_width, 0);
    let (mut q, mut head) = (m.start, 0usize);
    let snapshot = |tape: &[usize], head, q: usize| Configuration {
        tape: render_tape(&m, tape),
        head,
        state: m.states[q].clone(),
    };
    let mut configs = vec![snapshot(&tape, head, q)];
    for t in 0.. {
        if q == m.accept {
            return Ok(Transcript {
                configs,
                verdict: Verdict::Accepted { steps: t },
            });
        }
        if t == max_steps {
            break;
        }
        let (q2, a2, mv) = m.step(q, tape[head]).expect("table is total");
        tape[head] = a2;
        q = q2;
        let next = match mv {
            Move::L => head.checked_sub(1),
            Move::R => Some(head + 1).filter(|&h| h < tape_width),
            Move::S => Some(head),
        };
        match next {
            Some(h) => head = h,
            None => {
                return Ok(Transcript {
                    configs,
                    verdict: Verdict::OutOfBounds { step: t + 1 },
                })
            }
        }
        configs.push(snapshot(&tape, head, q));
    }
    Ok(Transcript {
        configs,
        verdict: Verdict::Running,
    })
}

/// The space-time tile set of a machine on a `w`-cell window for `h`
/// rows.
#[derive(Debug, Clone)]
pub struct TmEncoding {
    pub machine: Machine,
    pub tiles: WangTileSet,
    pub width: usize,
    pub height: usize,
    /// Tiles whose south edge shows no head in a non-accept state.
    pub halted_rows: Vec<usize>,
}

impl TmEncoding {
    fn sym(&self, a: usize) -> u32 {
        a as u32
    }

    fn head(&self, a: usize, q: usize) -> u32 {
        let ns = self.machine.symbols.len();
        (ns + q * ns + a) as u32
    }

    /// Decode a vertical color into `(symbol, state at head)`.
    pub fn vertical(&self, c: u32) -> (usize, Option<usize>) {
        let ns = self.machine.symbols.len();
        let c = c as usize;
        if c < ns {
            (c, None)
        } else {
            ((c - ns) % ns, Some((c - ns) / ns))
        }
    }

    /// Bottom row shows the initial configuration, sides are closed and
    /// the top row must be halted.
    pub fn boundary(&self, input: &str) -> Result<BoundaryConstraint> {
        let cells = self.machine.parse_input(input)?;
        if cells.len() > self.width {
            return Err(Error::Invalid {
                what: "input",
                reason: format!("{} symbols exceed width {}", cells.len(), self.width),
            });
        }
        let mut south: Vec<Option<u32>> = (0..self.width)
            .map(|x| Some(self.sym(cells.get(x).copied().unwrap_or(0))))
            .collect();
        south[0] = Some(self.head(cells.first().copied().unwrap_or(0), self.machine.start));
        Ok(BoundaryConstraint {
            north: None,
            south: Some(south),
            east: Some(vec![Some(0); self.height]),
            west: Some(vec![Some(0); self.height]),
            fixed: Vec::new(),
            allowed: (0..self.width)
                .map(|x| AllowedCell {
                    x,
                    y: self.height - 1,
                    tiles: self.halted_rows.clone(),
                })
                .collect(),
        })
    }

    /// Read the configurations off a tiling, one per row.
    pub fn decode(&self, tiling: &Patch) -> Result<Transcript> {
        let m = &self.machine;
        let mut configs = Vec::new();
        for y in 0..tiling.height() {
            let mut tape = Vec::new();
            let mut head = None;
            for x in 0..tiling.width() {
                let (a, q) = self.vertical(self.tiles.tile(tiling.get(x, y) as usize).s);
                tape.push(a);
                if let Some(q) = q {
                    if head.replace((x, q)).is_some() {
                        return Err(Error::Invalid {
                            what: "tiling",
                            reason: format!("two heads in row {y}"),
                        });
                    }
                }
            }
            let (x, q) = head.ok_or_else(|| Error::Invalid {
                what: "tiling",
                reason: format!("no head in row {y}"),
            })?;
            configs.push(Configuration {
                tape: render_tape(m, &tape),
                head: x,
                state: m.states[q].clone(),
            });
        }
        let verdict = match configs.iter().position(|c| c.state == m.states[m.accept]) {
            Some(steps) => Verdict::Accepted { steps },
            None => Verdict::Running,
        };
        Ok(Transcript { configs, verdict })
    }
}

/// Encode `tm` on a `w`-cell window for `h` rows. A tiling under
/// [`TmEncoding::boundary`] exists iff the machine accepts within `h - 1`
/// steps without leaving the window.
pub fn tm_to_wang(tm: &TMSpec, w: usize, h: usize) -> Result<TmEncoding> {
    if w == 0 || h == 0 {
        return Err(Error::Invalid {
            what: "tm window",
            reason: "width and height must be at least 1".into(),
        });
    }
    let machine = tm.compile()?;
    let ns = machine.symbols.len();
    let nq = machine.states.len();
    let mut enc = TmEncoding {
        machine,
        tiles: WangTileSet::new_allow_empty(1, Vec::new())?,
        width: w,
        height: h,
        halted_rows: Vec::new(),
    };
    let right = |q: usize| 1 + q as u32;
    let left = |q: usize| 1 + (nq + q) as u32;
    let m = &enc.machine;
    let mut tiles = Vec::new();
    for a in 0..ns {
        tiles.push(WangTile::new(enc.sym(a), 0, enc.sym(a), 0));
        for q in 0..nq {
            // Head arrives from the west or from the east.
            tiles.push(WangTile::new(enc.head(a, q), 0, enc.sym(a), right(q)));
            tiles.push(WangTile::new(enc.head(a, q), left(q), enc.sym(a), 0));
            let s = enc.head(a, q);
            if q == m.accept {
                tiles.push(WangTile::new(s, 0, s, 0));
                continue;
            }
            let (q2, a2, mv) = m.step(q, a).expect("table is total");
            tiles.push(match mv {
                Move::S => WangTile::new(enc.head(a2, q2), 0, s, 0),
                Move::R => WangTile::new(enc.sym(a2), right(q2), s, 0),
                Move::L => WangTile::new(enc.sym(a2), 0, s, left(q2)),
            });
        }
    }
    let colors = (ns + nq * ns).max(1 + 2 * nq) as u32;
    enc.tiles = WangTileSet::new(colors, tiles)?;
    enc.halted_rows = (0..enc.tiles.len())
        .filter(|&i| {
            let (_, q) = enc.vertical(enc.tiles.tile(i).s);
            q.is_none_or(|q| q == enc.machine.accept)
        })
        .collect();
    Ok(enc)
}

/// Shipped example machines.
pub mod fixtures {
    use super::*;

    fn t(q: &str, a: &str, q2: &str, a2: &str, m: Move) -> Transition {
        Transition {
            q: q.into(),
            a: a.into(),
            q2: q2.into(),
            a2: a2.into(),
            m,
        }
    }

    fn machine(states: &[&str], delta: Vec<Transition>) -> TMSpec {
        TMSpec {
            states: states.iter().map(|s| s.to_string()).collect(),
            start: states[0].into(),
            accept: "acc".into(),
            blank: "_".into(),
            delta,
        }
    }

    /// Erase the leading run of 1s, accept at the first blank.
    pub fn unary_erase() -> TMSpec {
        machine(
            &["q0", "acc"],
            vec![t("q0", "1", "q0", "_", Move::R), t("q0", "_", "acc", "_", Move::S)],
        )
    }

    /// Accept iff the leading run of 1s has even length; loop otherwise.
    pub fn parity() -> TMSpec {
        machine(
            &["even", "odd", "acc"],
            vec![
                t("even", "1", "odd", "1", Move::R),
                t("even", "_", "acc", "_", Move::S),
                t("odd", "1", "even", "1", Move::R),
                t("odd", "_", "odd", "_", Move::S),
            ],
        )
    }

    /// Mark the first cell, run to the first blank, walk back to the mark.
    pub fn seek_back() -> TMSpec {
        machine(
            &["mark", "out", "back", "acc"],
            vec![
                t("mark", "1", "out", "x", Move::R),
                t("mark", "_", "acc", "_", Move::S),
                t("mark", "x", "acc", "x", Move::S),
                t("out", "1", "out", "1", Move::R),
                t("out", "x", "out", "x", Move::R),
                t("out", "_", "back", "_", Move::L),
                t("back", "1", "back", "1", Move::L),
                t("back", "_", "back", "_", Move::L),
                t("back", "x", "acc", "1", Move::S),
            ],
        )
    }

    /// Never accepts.
    pub fn self_loop() -> TMSpec {
        machine(
            &["q0", "acc"],
            vec![t("q0", "1", "q0", "1", Move::S), t("q0", "_", "q0", "_", Move::S)],
        )
    }

    /// Walks right forever.
    pub fn right_mover() -> TMSpec {
        machine(
            &["q0", "acc"],
            vec![t("q0", "1", "q0", "1", Move::R), t("q0", "_", "q0", "_", Move::R)],
        )
    }

    pub fn by_name(name: &str) -> Option<TMSpec> {
        Some(match name {
            "unary_erase" => unary_erase(),
            "parity" => parity(),
            "seek_back" => seek_back(),
            "self_loop" => self_loop(),
            "right_mover" => right_mover(),
            _ => return None,
        })
    }
}

/// Every string over `symbols` of length at most `n`, shortest first.
pub fn inputs_up_to(symbols: &[char], n: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..n {
        layer = layer
            .iter()
            .flat_map(|p| symbols.iter().map(move |c| format!("{p}{c}")))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}
