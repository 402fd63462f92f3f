//! Character recognition support: stroke shape primitives, the primitive
//! table, stroke-count tables and reranking of external OCR candidates.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::geom::{self, Point};
use crate::model::{CharacterGroup, Stroke};
use crate::truth::CandidateList;

/// Stroke shape classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Primitive {
    Horizontal,
    Vertical,
    DiagonalUp,
    DiagonalDown,
    CArc,
    RightArc,
    OLoop,
    SCurve,
    JHook,
    UCup,
    Dot,
}

impl Primitive {
    pub const ALL: [Primitive; 11] = [
        Primitive::Horizontal,
        Primitive::Vertical,
        Primitive::DiagonalUp,
        Primitive::DiagonalDown,
        Primitive::CArc,
        Primitive::RightArc,
        Primitive::OLoop,
        Primitive::SCurve,
        Primitive::JHook,
        Primitive::UCup,
        Primitive::Dot,
    ];

    pub fn label(self) -> char {
        match self {
            Primitive::Horizontal => '-',
            Primitive::Vertical => '|',
            Primitive::DiagonalUp => '/',
            Primitive::DiagonalDown => '\\',
            Primitive::CArc => 'C',
            Primitive::RightArc => ')',
            Primitive::OLoop => 'O',
            Primitive::SCurve => 'S',
            Primitive::JHook => 'J',
            Primitive::UCup => 'U',
            Primitive::Dot => '.',
        }
    }

    pub fn from_label(c: char) -> Option<Primitive> {
        Primitive::ALL.into_iter().find(|p| p.label() == c)
    }
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Unordered multiset of primitives, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature(Vec<Primitive>);

impl Signature {
    pub fn new(prims: impl IntoIterator<Item = Primitive>) -> Self {
        let mut v: Vec<Primitive> = prims.into_iter().collect();
        v.sort();
        Signature(v)
    }

    pub fn primitives(&self) -> &[Primitive] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, p: Primitive) -> usize {
        self.0.iter().filter(|&&q| q == p).count()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

pub const DEFAULT_PRIMITIVE_TABLE: &str = include_str!("../data/primitives.table");
pub const DEFAULT_STROKE_COUNTS: &str = include_str!("../data/strokecounts.table");

const PRIMITIVES_HEADER: &str = "infranotes-primitives v1";
const COUNTS_HEADER: &str = "infranotes-strokecounts v1";

/// Letter decompositions; each letter maps to one or more variants.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PrimitiveTable {
    entries: BTreeMap<char, Vec<Signature>>,
}

impl PrimitiveTable {
    /// The shipped table covering A–Z.
    pub fn standard() -> Self {
        Self::parse(DEFAULT_PRIMITIVE_TABLE).expect("shipped primitive table parses")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut table = PrimitiveTable::default();
        for (letter, items, line) in records(text, PRIMITIVES_HEADER)? {
            let prims = items
                .iter()
                .map(|tok| {
                    let mut cs = tok.chars();
                    match (cs.next().and_then(Primitive::from_label), cs.next()) {
                        (Some(p), None) => Ok(p),
                        _ => Err(syntax(line, format!("unknown primitive {tok:?}"))),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            if prims.is_empty() {
                return Err(syntax(line, "variant has no primitives".to_string()));
            }
            table.insert(letter, Signature::new(prims));
        }
        Ok(table)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from(PRIMITIVES_HEADER);
        out.push('\n');
        for (letter, variants) in &self.entries {
            for v in variants {
                out.push_str(&format!("{letter}: {v}\n"));
            }
        }
        out
    }

    fn insert(&mut self, letter: char, sig: Signature) {
        let variants = self.entries.entry(letter).or_default();
        if !variants.contains(&sig) {
            variants.push(sig);
        }
    }

    pub fn variants(&self, letter: char) -> &[Signature] {
        self.entries.get(&letter).map_or(&[], |v| v.as_slice())
    }

    pub fn letters(&self) -> impl Iterator<Item = char> + '_ {
        self.entries.keys().copied()
    }
}

/// Letters having `sig` among their variants.
pub fn table_lookup(table: &PrimitiveTable, sig: &Signature) -> BTreeSet<char> {
    table
        .entries
        .iter()
        .filter(|(_, vs)| vs.contains(sig))
        .map(|(&c, _)| c)
        .collect()
}

/// Returns a copy of `table` with one more variant for `letter`.
pub fn add_variant(table: &PrimitiveTable, letter: char, sig: Signature) -> PrimitiveTable {
    let mut t = table.clone();
    if !sig.is_empty() {
        t.insert(letter, sig);
    }
    t
}

/// Valid stroke counts per symbol.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StrokeCountTable {
    counts: BTreeMap<char, BTreeSet<usize>>,
}

impl StrokeCountTable {
    /// Counts derived from the variant sizes of `table`.
    pub fn derive(table: &PrimitiveTable) -> Self {
        let counts = table
            .entries
            .iter()
            .map(|(&c, vs)| (c, vs.iter().map(Signature::len).collect()))
            .collect();
        StrokeCountTable { counts }
    }

    /// Derived counts with every entry of `overrides` replacing the derived one.
    pub fn with_overrides(table: &PrimitiveTable, overrides: &str) -> Result<Self> {
        let mut t = Self::derive(table);
        for (symbol, items, line) in records(overrides, COUNTS_HEADER)? {
            let set = items
                .iter()
                .map(|tok| match tok.parse::<usize>() {
                    Ok(n) if n >= 1 => Ok(n),
                    _ => Err(syntax(line, format!("bad stroke count {tok:?}"))),
                })
                .collect::<Result<BTreeSet<_>>>()?;
            if set.is_empty() {
                return Err(syntax(line, "no stroke counts".to_string()));
            }
            t.counts.insert(symbol, set);
        }
        Ok(t)
    }

    /// The shipped counts: derived from the standard table plus shipped overrides.
    pub fn standard() -> Self {
        Self::with_overrides(&PrimitiveTable::standard(), DEFAULT_STROKE_COUNTS)
            .expect("shipped stroke counts parse")
    }

    pub fn get(&self, symbol: char) -> Option<&BTreeSet<usize>> {
        self.counts.get(&symbol)
    }

    pub fn set(&mut self, symbol: char, counts: impl IntoIterator<Item = usize>) {
        self.counts.insert(symbol, counts.into_iter().collect());
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from(COUNTS_HEADER);
        out.push('\n');
        for (c, set) in &self.counts {
            out.push(*c);
            out.push(':');
            for n in set {
                out.push_str(&format!(" {n}"));
            }
            out.push('\n');
        }
        out
    }
}

fn syntax(line: usize, message: String) -> Error {
    Error::TableSyntax { line, message }
}

/// Splits `SYMBOL: item item ...` records, skipping comments and blanks.
fn records<'a>(text: &'a str, header: &str) -> Result<Vec<(char, Vec<&'a str>, usize)>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == header => {}
        _ => return Err(syntax(1, format!("expected header {header:?}"))),
    }
    let mut out = Vec::new();
    for (i, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, rest) = line.split_once(':').ok_or_else(|| syntax(i + 1, "missing ':'".to_string()))?;
        let mut kc = key.trim().chars();
        let symbol = match (kc.next(), kc.next()) {
            (Some(c), None) => c,
            _ => return Err(syntax(i + 1, format!("bad symbol {key:?}"))),
        };
        out.push((symbol, rest.split_whitespace().collect(), i + 1));
    }
    Ok(out)
}

const MIN_SAMPLES: usize = 3;
const DOT_PATH_MM: f64 = 3.0;
const STRAIGHTNESS: f64 = 0.12;
const CURVE_STEP_MM: f64 = 3.0;

/// Classifies one smooth on-board stroke.
pub fn primitive_of(stroke: &Stroke) -> Result<Primitive> {
    if stroke.len() < MIN_SAMPLES {
        return Err(Error::TooShort { samples: stroke.len() });
    }
    let pts = geom::smooth_xy(&stroke.samples, 3);
    Ok(classify_points(&pts))
}

/// Classifies a lightly smoothed polyline.
pub fn classify_points(pts: &[Point]) -> Primitive {
    let path = geom::path_length(pts);
    if path < DOT_PATH_MM {
        return Primitive::Dot;
    }
    let (a, b) = (pts[0], pts[pts.len() - 1]);
    let chord = geom::dist(a, b);
    if chord > 0.0 && geom::max_chord_deviation(pts, a, b) < STRAIGHTNESS * chord {
        return straight_bin(geom::principal_axis_deg(pts));
    }
    curve_class(pts, path)
}

fn straight_bin(axis: f64) -> Primitive {
    if !(20.0..160.0).contains(&axis) {
        Primitive::Horizontal
    } else if (70.0..=110.0).contains(&axis) {
        Primitive::Vertical
    } else if axis < 90.0 {
        Primitive::DiagonalUp
    } else {
        Primitive::DiagonalDown
    }
}

fn curve_class(pts: &[Point], path: f64) -> Primitive {
    let smooth = geom::smooth_points(pts, 5);
    let res = geom::resample_min_spacing(&smooth, CURVE_STEP_MM);
    let headings: Vec<f64> = res.windows(2).map(|w| geom::heading_deg(w[0], w[1])).collect();
    let (mut cum, mut lo, mut hi) = (0.0f64, 0.0f64, 0.0f64);
    for w in headings.windows(2) {
        cum += geom::wrap_deg(w[1] - w[0]);
        lo = lo.min(cum);
        hi = hi.max(cum);
    }
    let total = cum;
    if (hi - lo) - libm::fabs(total) > 90.0 {
        return Primitive::SCurve;
    }
    let (a, b) = (pts[0], pts[pts.len() - 1]);
    let closure = geom::dist(a, b) / path;
    if closure < 0.2 && libm::fabs(total) > 270.0 {
        return Primitive::OLoop;
    }
    let chord_axis = geom::fold_axis_deg(geom::heading_deg(a, b));
    if (30.0..=60.0).contains(&chord_axis) || (120.0..=150.0).contains(&chord_axis) {
        return Primitive::JHook;
    }
    let n = pts.len() as f64;
    let (cx, cy) = pts.iter().fold((0.0, 0.0), |s, p| (s.0 + p.0 / n, s.1 + p.1 / n));
    let (mx, my) = ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
    let (bx, by) = (cx - mx, cy - my);
    if libm::fabs(bx) >= libm::fabs(by) {
        if bx < 0.0 {
            Primitive::CArc
        } else {
            Primitive::RightArc
        }
    } else {
        Primitive::UCup
    }
}

/// Unordered primitive multiset of a group.
pub fn signature_of(group: &CharacterGroup) -> Result<Signature> {
    let prims = group.strokes.iter().map(primitive_of).collect::<Result<Vec<_>>>()?;
    Ok(Signature::new(prims))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rerank {
    Symbol(char),
    NoMatch,
}

/// Walks the candidate list from the top and returns the first symbol whose
/// stroke-count set contains `observed_count`.
pub fn rerank_stroke_count(
    candidates: &CandidateList,
    observed_count: usize,
    counts: &StrokeCountTable,
    alphabet_only: bool,
) -> Rerank {
    for c in &candidates.entries {
        if alphabet_only && !c.symbol.is_alphabetic() {
            continue;
        }
        if counts.get(c.symbol).is_some_and(|set| set.contains(&observed_count)) {
            return Rerank::Symbol(c.symbol);
        }
    }
    Rerank::NoMatch
}

/// Candidate symbols that have no stroke-count entry and can never match.
pub fn unknown_symbols(candidates: &CandidateList, counts: &StrokeCountTable) -> Vec<char> {
    candidates.entries.iter().map(|c| c.symbol).filter(|&s| counts.get(s).is_none()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// Unique primitive-table match.
    Pt,
    /// Primitive-table ambiguity broken by OCR probability.
    PtOcr,
    /// OCR list reranked by stroke count.
    Osn,
    None,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Pt => "PT",
            Method::PtOcr => "PT+OCR",
            Method::Osn => "OSN",
            Method::None => "none",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Recognition {
    /// `None` means Unknown.
    pub letter: Option<char>,
    pub method: Method,
}

impl Recognition {
    pub const UNKNOWN: Recognition = Recognition { letter: None, method: Method::None };
}

/// Primitive table first, OCR probability as tie breaker, stroke-count
/// reranking when the table has no match.
pub fn recognize_group(
    group: &CharacterGroup,
    candidates: Option<&CandidateList>,
    table: &PrimitiveTable,
    counts: &StrokeCountTable,
) -> Recognition {
    let found = match signature_of(group) {
        Ok(sig) => table_lookup(table, &sig),
        Err(_) => BTreeSet::new(),
    };
    if found.len() == 1 {
        return Recognition { letter: found.first().copied(), method: Method::Pt };
    }
    match candidates {
        Some(list) if found.len() > 1 => {
            let best = list
                .entries
                .iter()
                .filter(|c| found.contains(&c.symbol))
                .fold(None::<(char, f64)>, |best, c| match best {
                    Some((_, p)) if p >= c.probability => best,
                    _ => Some((c.symbol, c.probability)),
                });
            match best {
                Some((c, _)) => Recognition { letter: Some(c), method: Method::PtOcr },
                None => Recognition::UNKNOWN,
            }
        }
        Some(list) if found.is_empty() => {
            match rerank_stroke_count(list, group.strokes.len(), counts, true) {
                Rerank::Symbol(c) => Recognition { letter: Some(c), method: Method::Osn },
                Rerank::NoMatch => Recognition::UNKNOWN,
            }
        }
        _ => Recognition::UNKNOWN,
    }
}
