//! Pen plans for the uppercase alphabet.
//!
//! Coordinates are fractions of the glyph box: `x` in `[0, 1]` spans
//! `width * letter_width`, `y` in `[0, 1]` spans `letter_height`. Stems sit
//! slightly inside the box edge so that bars and bowls starting at the edge
//! overlap them in x; the grouping splitter relies on that overlap.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::recognize::Primitive;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Piece {
    Line { from: (f64, f64), to: (f64, f64) },
    /// Elliptic arc; angles in degrees, positive sweep is counter-clockwise.
    Arc { center: (f64, f64), rx: f64, ry: f64, start_deg: f64, sweep_deg: f64 },
}

impl Piece {
    pub fn point_at(&self, u: f64) -> (f64, f64) {
        match *self {
            Piece::Line { from, to } => (from.0 + (to.0 - from.0) * u, from.1 + (to.1 - from.1) * u),
            Piece::Arc { center, rx, ry, start_deg, sweep_deg } => {
                let a = (start_deg + sweep_deg * u).to_radians();
                (center.0 + rx * libm::cos(a), center.1 + ry * libm::sin(a))
            }
        }
    }
}

/// Pieces traced in one smooth motion; realizes a single primitive.
#[derive(Clone, Debug, PartialEq)]
pub struct Shape {
    pub pieces: Vec<Piece>,
}

/// Shapes traced without lifting the tool, joined at corners.
#[derive(Clone, Debug, PartialEq)]
pub struct PenStroke {
    pub shapes: Vec<Shape>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GlyphPlan {
    pub letter: char,
    /// Advance width as a multiple of the style's letter width.
    pub width: f64,
    pub strokes: Vec<PenStroke>,
    pub canonical_primitives: Vec<Primitive>,
    /// Number of smooth strokes, i.e. shapes across all pen strokes.
    pub stroke_count: usize,
}

fn line(x0: f64, y0: f64, x1: f64, y1: f64) -> Shape {
    Shape { pieces: vec![Piece::Line { from: (x0, y0), to: (x1, y1) }] }
}

fn arc(cx: f64, cy: f64, rx: f64, ry: f64, start_deg: f64, sweep_deg: f64) -> Shape {
    Shape { pieces: vec![Piece::Arc { center: (cx, cy), rx, ry, start_deg, sweep_deg }] }
}

fn pen(shape: Shape) -> PenStroke {
    PenStroke { shapes: vec![shape] }
}

fn plan(letter: char, width: f64, strokes: Vec<PenStroke>, prims: &[Primitive]) -> GlyphPlan {
    let stroke_count = strokes.iter().map(|s| s.shapes.len()).sum();
    debug_assert_eq!(stroke_count, prims.len(), "plan for {letter}");
    GlyphPlan { letter, width, strokes, canonical_primitives: prims.to_vec(), stroke_count }
}

fn stem() -> PenStroke {
    pen(line(0.06, 1.0, 0.06, 0.0))
}

impl GlyphPlan {
    /// The canonical plan for an uppercase letter.
    pub fn for_letter(letter: char) -> Result<GlyphPlan> {
        use Primitive::*;
        let p = match letter {
            'A' => plan(
                'A',
                1.0,
                vec![pen(line(0.52, 1.0, 0.0, 0.0)), pen(line(0.48, 1.0, 1.0, 0.0)), pen(line(0.15, 0.4, 0.85, 0.4))],
                &[DiagonalUp, DiagonalDown, Horizontal],
            ),
            'B' => plan(
                'B',
                1.0,
                vec![stem(), pen(arc(0.0, 0.75, 0.85, 0.25, 90.0, -180.0)), pen(arc(0.0, 0.25, 0.95, 0.25, 90.0, -180.0))],
                &[Vertical, RightArc, RightArc],
            ),
            'C' => plan('C', 1.0, vec![pen(arc(0.5, 0.5, 0.5, 0.5, 45.0, 270.0))], &[CArc]),
            'D' => plan('D', 1.0, vec![stem(), pen(arc(0.0, 0.5, 0.95, 0.5, 90.0, -180.0))], &[Vertical, RightArc]),
            'E' => plan(
                'E',
                1.0,
                vec![stem(), pen(line(0.0, 1.0, 0.9, 1.0)), pen(line(0.0, 0.5, 0.75, 0.5)), pen(line(0.0, 0.0, 0.9, 0.0))],
                &[Vertical, Horizontal, Horizontal, Horizontal],
            ),
            'F' => plan(
                'F',
                1.0,
                vec![stem(), pen(line(0.0, 1.0, 0.9, 1.0)), pen(line(0.0, 0.5, 0.75, 0.5))],
                &[Vertical, Horizontal, Horizontal],
            ),
            'G' => return Ok(Self::g_variants().swap_remove(0)),
            'H' => plan(
                'H',
                1.0,
                vec![stem(), pen(line(0.0, 0.5, 1.0, 0.5)), pen(line(0.94, 1.0, 0.94, 0.0))],
                &[Vertical, Horizontal, Vertical],
            ),
            'I' => plan('I', 0.3, vec![pen(line(0.5, 1.0, 0.5, 0.0))], &[Vertical]),
            'J' => plan(
                'J',
                1.0,
                vec![PenStroke {
                    shapes: vec![Shape {
                        pieces: vec![
                            Piece::Line { from: (0.7, 1.0), to: (0.7, 0.3) },
                            Piece::Arc { center: (0.45, 0.3), rx: 0.25, ry: 0.3, start_deg: 0.0, sweep_deg: -180.0 },
                        ],
                    }],
                }],
                &[JHook],
            ),
            'K' => plan(
                'K',
                0.55,
                vec![pen(line(0.12, 1.0, 0.12, 0.0)), pen(line(0.9, 1.0, 0.0, 0.4)), pen(line(0.25, 0.55, 0.95, 0.0))],
                &[Vertical, DiagonalUp, DiagonalDown],
            ),
            'L' => plan('L', 1.0, vec![stem(), pen(line(0.0, 0.0, 0.8, 0.0))], &[Vertical, Horizontal]),
            'M' => plan(
                'M',
                1.2,
                vec![
                    pen(line(0.05, 1.0, 0.05, 0.0)),
                    pen(line(0.0, 1.0, 0.53, 0.1)),
                    pen(line(0.47, 0.1, 1.0, 1.0)),
                    pen(line(0.95, 1.0, 0.95, 0.0)),
                ],
                &[Vertical, DiagonalDown, DiagonalUp, Vertical],
            ),
            'N' => plan(
                'N',
                1.0,
                vec![stem(), pen(line(0.0, 1.0, 1.0, 0.0)), pen(line(0.94, 0.0, 0.94, 1.0))],
                &[Vertical, DiagonalDown, Vertical],
            ),
            'O' => plan('O', 1.0, vec![pen(arc(0.5, 0.5, 0.5, 0.5, 90.0, 360.0))], &[OLoop]),
            'P' => plan('P', 1.0, vec![stem(), pen(arc(0.0, 0.725, 0.85, 0.275, 90.0, -180.0))], &[Vertical, RightArc]),
            'Q' => plan(
                'Q',
                1.0,
                vec![pen(arc(0.5, 0.5, 0.5, 0.5, 90.0, 360.0)), pen(line(0.6, 0.4, 0.95, -0.05))],
                &[OLoop, DiagonalDown],
            ),
            'R' => plan(
                'R',
                1.0,
                vec![stem(), pen(arc(0.0, 0.725, 0.85, 0.275, 90.0, -180.0)), pen(line(0.4, 0.5, 0.9, 0.0))],
                &[Vertical, RightArc, DiagonalDown],
            ),
            'S' => plan(
                'S',
                1.0,
                vec![PenStroke {
                    shapes: vec![Shape {
                        pieces: vec![
                            Piece::Arc { center: (0.5, 0.75), rx: 0.45, ry: 0.25, start_deg: 20.0, sweep_deg: 250.0 },
                            Piece::Arc { center: (0.5, 0.25), rx: 0.45, ry: 0.25, start_deg: 90.0, sweep_deg: -250.0 },
                        ],
                    }],
                }],
                &[SCurve],
            ),
            'T' => plan('T', 1.0, vec![pen(line(0.0, 1.0, 1.0, 1.0)), pen(line(0.5, 1.0, 0.5, 0.0))], &[Horizontal, Vertical]),
            'U' => plan(
                'U',
                1.0,
                vec![PenStroke {
                    shapes: vec![Shape {
                        pieces: vec![
                            Piece::Line { from: (0.0, 1.0), to: (0.0, 0.45) },
                            Piece::Arc { center: (0.5, 0.45), rx: 0.5, ry: 0.45, start_deg: 180.0, sweep_deg: 180.0 },
                            Piece::Line { from: (1.0, 0.45), to: (1.0, 1.0) },
                        ],
                    }],
                }],
                &[UCup],
            ),
            'V' => plan(
                'V',
                1.0,
                vec![pen(line(0.0, 1.0, 0.54, 0.0)), pen(line(0.46, 0.0, 1.0, 1.0))],
                &[DiagonalDown, DiagonalUp],
            ),
            'W' => plan(
                'W',
                2.0,
                vec![
                    pen(line(0.0, 1.0, 0.27, 0.0)),
                    pen(line(0.23, 0.0, 0.52, 0.8)),
                    pen(line(0.48, 0.8, 0.77, 0.0)),
                    pen(line(0.73, 0.0, 1.0, 1.0)),
                ],
                &[DiagonalDown, DiagonalUp, DiagonalDown, DiagonalUp],
            ),
            'X' => plan(
                'X',
                1.0,
                vec![pen(line(0.0, 1.0, 1.0, 0.0)), pen(line(0.0, 0.0, 1.0, 1.0))],
                &[DiagonalDown, DiagonalUp],
            ),
            'Y' => plan(
                'Y',
                1.0,
                vec![pen(line(0.0, 1.0, 0.53, 0.35)), pen(line(1.0, 1.0, 0.47, 0.35)), pen(line(0.5, 0.4, 0.5, 0.0))],
                &[DiagonalDown, DiagonalUp, Vertical],
            ),
            // One pen-down stroke with two sharp corners.
            'Z' => plan(
                'Z',
                1.0,
                vec![PenStroke { shapes: vec![line(0.0, 1.0, 1.0, 1.0), line(1.0, 1.0, 0.0, 0.0), line(0.0, 0.0, 1.0, 0.0)] }],
                &[Horizontal, DiagonalUp, Horizontal],
            ),
            other => return Err(Error::NoGlyphPlan(other)),
        };
        Ok(p)
    }

    /// Every plan shipped for a letter; only 'G' has more than one.
    pub fn variants(letter: char) -> Result<Vec<GlyphPlan>> {
        if letter == 'G' {
            Ok(Self::g_variants())
        } else {
            Ok(vec![Self::for_letter(letter)?])
        }
    }

    fn g_variants() -> Vec<GlyphPlan> {
        use Primitive::*;
        vec![
            plan(
                'G',
                1.0,
                vec![pen(arc(0.5, 0.5, 0.5, 0.5, 45.0, 270.0)), pen(line(1.0, 0.45, 0.55, 0.45))],
                &[CArc, Horizontal],
            ),
            plan(
                'G',
                1.0,
                vec![
                    pen(arc(0.5, 0.5, 0.5, 0.5, 45.0, 270.0)),
                    pen(line(1.0, 0.45, 0.55, 0.45)),
                    pen(line(0.93, 0.45, 0.93, 0.0)),
                ],
                &[CArc, Horizontal, Vertical],
            ),
            plan(
                'G',
                1.0,
                vec![pen(arc(0.5, 0.5, 0.5, 0.5, 45.0, 275.0)), pen(line(0.8, 0.45, 0.8, 0.0))],
                &[CArc, Vertical],
            ),
        ]
    }

    /// True for letters with a shipped plan.
    pub fn exists(letter: char) -> bool {
        letter.is_ascii_uppercase()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plans_cover_alphabet() {
        for c in 'A'..='Z' {
            let p = GlyphPlan::for_letter(c).unwrap();
            assert_eq!(p.stroke_count, p.canonical_primitives.len(), "{c}");
        }
        assert_eq!(GlyphPlan::variants('G').unwrap().len(), 3);
        assert_eq!(GlyphPlan::for_letter('a'), Err(Error::NoGlyphPlan('a')));
    }

    #[test]
    fn shapes_within_a_pen_stroke_connect() {
        for c in 'A'..='Z' {
            for pen in GlyphPlan::for_letter(c).unwrap().strokes {
                let ends: Vec<_> = pen
                    .shapes
                    .iter()
                    .map(|s| (s.pieces[0].point_at(0.0), s.pieces.last().unwrap().point_at(1.0)))
                    .collect();
                for w in ends.windows(2) {
                    let (a, b) = (w[0].1, w[1].0);
                    assert!((a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9, "{c}");
                }
            }
        }
    }
}
