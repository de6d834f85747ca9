//! Built-in bitmap font on an 8×12 design grid.
//!
//! Rows 0–1 hold accents, row 2 is a gap, rows 3–10 hold the 8-row body and
//! row 11 is the descender. Bodies start at column 1; columns are trimmed to
//! the ink so narrow glyphs stay narrow.

pub(super) const GRID_W: usize = 8;
pub(super) const GRID_H: usize = 12;
const BODY_TOP: usize = 3;

const BODIES: &[(char, [&str; 8])] = &[
    ('0', [".####.", "#....#", "#...##", "#..#.#", "#.#..#", "##...#", "#....#", ".####."]),
    ('1', ["..#...", ".##...", "#.#...", "..#...", "..#...", "..#...", "..#...", "#####."]),
    ('2', [".####.", "#....#", ".....#", "....#.", "...#..", "..#...", ".#....", "######"]),
    ('3', [".####.", "#....#", ".....#", "..###.", ".....#", ".....#", "#....#", ".####."]),
    ('4', ["....#.", "...##.", "..#.#.", ".#..#.", "#...#.", "######", "....#.", "....#."]),
    ('5', ["######", "#.....", "#.....", "#####.", ".....#", ".....#", ".....#", "#####."]),
    ('6', ["..###.", ".#....", "#.....", "#####.", "#....#", "#....#", "#....#", ".####."]),
    ('7', ["######", ".....#", "....#.", "...#..", "..#...", "..#...", "..#...", "..#..."]),
    ('8', [".####.", "#....#", "#....#", ".####.", "#....#", "#....#", "#....#", ".####."]),
    ('9', [".####.", "#....#", "#....#", "#....#", ".#####", ".....#", "....#.", ".###.."]),
    ('.', ["..", "..", "..", "..", "..", "..", "##", "##"]),
    (':', ["..", "..", "##", "##", "..", "..", "##", "##"]),
    ('$', ["..#...", ".#####", "#.#...", ".####.", "..#..#", "#####.", "..#...", "..#..."]),
    ('A', ["..##..", ".#..#.", "#....#", "#....#", "######", "#....#", "#....#", "#....#"]),
    ('B', ["#####.", "#....#", "#....#", "#####.", "#....#", "#....#", "#....#", "#####."]),
    ('C', [".####.", "#....#", "#.....", "#.....", "#.....", "#.....", "#....#", ".####."]),
    ('D', ["####..", "#...#.", "#....#", "#....#", "#....#", "#....#", "#...#.", "####.."]),
    ('E', ["######", "#.....", "#.....", "#####.", "#.....", "#.....", "#.....", "######"]),
    ('F', ["######", "#.....", "#.....", "#####.", "#.....", "#.....", "#.....", "#....."]),
    ('G', [".####.", "#....#", "#.....", "#.....", "#..###", "#....#", "#....#", ".####."]),
    ('H', ["#....#", "#....#", "#....#", "######", "#....#", "#....#", "#....#", "#....#"]),
    ('I', ["#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#..", "#####"]),
    ('J', ["..####", "....#.", "....#.", "....#.", "....#.", "#...#.", "#...#.", ".###.."]),
    ('K', ["#...#.", "#..#..", "#.#...", "##....", "#.#...", "#..#..", "#...#.", "#....#"]),
    ('L', ["#.....", "#.....", "#.....", "#.....", "#.....", "#.....", "#.....", "######"]),
    ('M', ["#....#", "##..##", "#.##.#", "#....#", "#....#", "#....#", "#....#", "#....#"]),
    ('N', ["#....#", "##...#", "#.#..#", "#..#.#", "#...##", "#....#", "#....#", "#....#"]),
    ('O', [".####.", "#....#", "#....#", "#....#", "#....#", "#....#", "#....#", ".####."]),
    ('P', ["#####.", "#....#", "#....#", "#####.", "#.....", "#.....", "#.....", "#....."]),
    ('Q', [".####.", "#....#", "#....#", "#....#", "#....#", "#..#.#", "#...#.", ".###.#"]),
    ('R', ["#####.", "#....#", "#....#", "#####.", "#.#...", "#..#..", "#...#.", "#....#"]),
    ('S', [".####.", "#....#", "#.....", ".####.", ".....#", ".....#", "#....#", ".####."]),
    ('T', ["#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#..", "..#.."]),
    ('U', ["#....#", "#....#", "#....#", "#....#", "#....#", "#....#", "#....#", ".####."]),
    ('V', ["#....#", "#....#", "#....#", "#....#", ".#..#.", ".#..#.", "..##..", "..##.."]),
    ('W', ["#....#", "#....#", "#....#", "#....#", "#.##.#", "#.##.#", "##..##", "#....#"]),
    ('X', ["#....#", "#....#", ".#..#.", "..##..", "..##..", ".#..#.", "#....#", "#....#"]),
    ('Y', ["#...#", "#...#", ".#.#.", "..#..", "..#..", "..#..", "..#..", "..#.."]),
    ('Z', ["######", ".....#", "....#.", "...#..", "..#...", ".#....", "#.....", "######"]),
];

/// Comma: a body dot with a one-row tail into the descender.
const COMMA: ([&str; 2], &str) = (["##", "##"], ".#");

const ACUTE: [&str; 2] = ["..##", ".##."];
const CIRCUMFLEX: [&str; 2] = [".##.", "#..#"];
const TILDE: [&str; 2] = [".#.#", "#.#."];

const ACCENTED: &[(char, char, [&str; 2])] = &[
    ('Á', 'A', ACUTE),
    ('É', 'E', ACUTE),
    ('Í', 'I', ACUTE),
    ('Ó', 'O', ACUTE),
    ('Ú', 'U', ACUTE),
    ('Â', 'A', CIRCUMFLEX),
    ('Ê', 'E', CIRCUMFLEX),
    ('Ô', 'O', CIRCUMFLEX),
    ('Ã', 'A', TILDE),
    ('Õ', 'O', TILDE),
];

/// Grid bitmap: `GRID_H` rows of `GRID_W` flags.
pub(super) type GridBitmap = [[bool; GRID_W]; GRID_H];

fn stamp(grid: &mut GridBitmap, rows: &[&str], top: usize, left: usize) {
    for (dy, row) in rows.iter().enumerate() {
        for (dx, c) in row.chars().enumerate() {
            if c == '#' {
                grid[top + dy][left + dx] = true;
            }
        }
    }
}

fn body_width(rows: &[&str]) -> usize {
    rows.iter().map(|r| r.len()).max().unwrap_or(0)
}

/// Every glyph of the built-in font as a design-grid bitmap.
pub(super) fn glyph_grids() -> Vec<(char, GridBitmap)> {
    let mut out = Vec::new();
    for &(ch, rows) in BODIES {
        let mut g = [[false; GRID_W]; GRID_H];
        stamp(&mut g, &rows, BODY_TOP, 1);
        out.push((ch, g));
    }

    let mut comma = [[false; GRID_W]; GRID_H];
    stamp(&mut comma, &COMMA.0, BODY_TOP + 6, 1);
    stamp(&mut comma, &[COMMA.1], BODY_TOP + 8, 1);
    out.push((',', comma));

    for &(ch, base, accent) in ACCENTED {
        let rows = BODIES
            .iter()
            .find(|(c, _)| *c == base)
            .map(|(_, r)| r)
            .expect("accent base exists");
        let mut g = [[false; GRID_W]; GRID_H];
        stamp(&mut g, rows, BODY_TOP, 1);
        let left = 1 + (body_width(rows) - body_width(&accent)) / 2;
        stamp(&mut g, &accent, 0, left);
        out.push((ch, g));
    }

    let c_rows = BODIES.iter().find(|(c, _)| *c == 'C').unwrap().1;
    let mut cedilla = [[false; GRID_W]; GRID_H];
    stamp(&mut cedilla, &c_rows, BODY_TOP, 1);
    stamp(&mut cedilla, &["..##.."], BODY_TOP + 8, 1);
    out.push(('Ç', cedilla));

    out
}
