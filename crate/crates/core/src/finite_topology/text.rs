//! Plain-text instance format.
//!
//! ```text
//! # Sierpinski space with a self-loop at 0
//! points 2
//! open
//! open 0
//! open 0 1
//! image 0 : 0
//! image 1 : 0 1
//! orbit 1 | 0
//! ```
//!
//! `open` lines list the points of one open set in increasing order (an empty
//! list is `∅`). `image x : ...` gives `S(x)`; points without an `image` line
//! map to `∅`. `orbit tail.. | cycle..` declares an eventually periodic orbit
//! (an empty cycle declares a finite orbit). Blank lines and `#` comments are
//! ignored.

use std::fmt::{self, Write as _};

use super::orbit::{FiniteSetMap, OrbitDescriptor};
use super::space::{from_points, members, FiniteSpace, PointSet};
use super::FiniteError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteInstance {
    pub space: FiniteSpace,
    pub map: Option<FiniteSetMap>,
    pub orbits: Vec<OrbitDescriptor>,
}

fn parse_points(line: usize, text: &str, n: usize) -> Result<Vec<usize>, FiniteError> {
    let mut out = Vec::new();
    for tok in text.split_whitespace() {
        let x: usize = tok.parse().map_err(|_| FiniteError::Parse {
            line,
            message: format!("expected a point index, found `{tok}`"),
        })?;
        if x >= n {
            return Err(FiniteError::Parse {
                line,
                message: format!("point {x} out of range for {n} points"),
            });
        }
        out.push(x);
    }
    Ok(out)
}

impl FiniteInstance {
    pub fn parse(src: &str) -> Result<Self, FiniteError> {
        let mut n: Option<usize> = None;
        let mut opens: Vec<PointSet> = Vec::new();
        let mut images: Option<Vec<PointSet>> = None;
        let mut orbits = Vec::new();
        for (idx, raw) in src.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (keyword, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
            let need_n = || {
                n.ok_or(FiniteError::Parse {
                    line,
                    message: "`points` must come first".into(),
                })
            };
            match keyword {
                "points" => {
                    if n.is_some() {
                        return Err(FiniteError::Parse {
                            line,
                            message: "duplicate `points` line".into(),
                        });
                    }
                    n = Some(rest.trim().parse().map_err(|_| FiniteError::Parse {
                        line,
                        message: format!("bad point count `{}`", rest.trim()),
                    })?);
                }
                "open" => {
                    let pts = parse_points(line, rest, need_n()?)?;
                    if pts.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(FiniteError::Parse {
                            line,
                            message: "open set points must be strictly increasing".into(),
                        });
                    }
                    opens.push(from_points(pts));
                }
                "image" => {
                    let n = need_n()?;
                    let (head, tail) = rest.split_once(':').ok_or(FiniteError::Parse {
                        line,
                        message: "expected `image <x> : <points>`".into(),
                    })?;
                    let x = parse_points(line, head, n)?;
                    if x.len() != 1 {
                        return Err(FiniteError::Parse {
                            line,
                            message: "expected exactly one source point".into(),
                        });
                    }
                    let imgs = images.get_or_insert_with(|| vec![0; n]);
                    imgs[x[0]] = from_points(parse_points(line, tail, n)?);
                }
                "orbit" => {
                    let n = need_n()?;
                    let (tail, cycle) = rest.split_once('|').unwrap_or((rest, ""));
                    let tail = parse_points(line, tail, n)?;
                    let cycle = parse_points(line, cycle, n)?;
                    orbits.push(if cycle.is_empty() {
                        OrbitDescriptor::finite(tail)
                    } else {
                        OrbitDescriptor::new(tail, cycle)
                    });
                }
                other => {
                    return Err(FiniteError::Parse {
                        line,
                        message: format!("unknown keyword `{other}`"),
                    })
                }
            }
        }
        let n = n.ok_or(FiniteError::Parse {
            line: 0,
            message: "missing `points` line".into(),
        })?;
        let space = FiniteSpace::new(n, opens)?;
        let map = images.map(|imgs| FiniteSetMap::new(n, imgs)).transpose()?;
        if !orbits.is_empty() && map.is_none() {
            return Err(FiniteError::Parse {
                line: 0,
                message: "orbits declared without any `image` line".into(),
            });
        }
        Ok(Self { space, map, orbits })
    }
}

fn write_points(out: &mut String, set: PointSet) {
    for x in members(set) {
        let _ = write!(out, " {x}");
    }
}

impl fmt::Display for FiniteInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let _ = writeln!(out, "points {}", self.space.n());
        for &u in self.space.opens() {
            out.push_str("open");
            write_points(&mut out, u);
            out.push('\n');
        }
        if let Some(map) = &self.map {
            for x in 0..map.n() {
                let _ = write!(out, "image {x} :");
                write_points(&mut out, map.image(x));
                out.push('\n');
            }
        }
        for o in &self.orbits {
            out.push_str("orbit");
            for x in o.tail() {
                let _ = write!(out, " {x}");
            }
            out.push_str(" |");
            for x in o.cycle() {
                let _ = write!(out, " {x}");
            }
            out.push('\n');
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SIERPINSKI: &str = "# Sierpinski space with a self-loop at 0
points 2
open
open 0
open 0 1
image 0 : 0
image 1 : 0 1
orbit 1 | 0
";

    #[test]
    fn parses_documented_example() {
        let inst = FiniteInstance::parse(SIERPINSKI).unwrap();
        assert_eq!(inst.space, FiniteSpace::sierpinski());
        let map = inst.map.unwrap();
        assert_eq!(map.images(), &[0b01, 0b11]);
        assert_eq!(inst.orbits, vec![OrbitDescriptor::new(vec![1], vec![0])]);
    }

    #[test]
    fn reports_line_numbers() {
        let err = FiniteInstance::parse("points 2\nopen 0\nopen 3\n").unwrap_err();
        assert!(matches!(err, FiniteError::Parse { line: 3, .. }));
        let err = FiniteInstance::parse("open 0\n").unwrap_err();
        assert!(matches!(err, FiniteError::Parse { line: 1, .. }));
        let err = FiniteInstance::parse("points 2\nopen 1 0\n").unwrap_err();
        assert!(matches!(err, FiniteError::Parse { line: 2, .. }));
    }

    #[test]
    fn invalid_topology_surfaces() {
        let err = FiniteInstance::parse("points 2\nopen\nopen 0\n").unwrap_err();
        assert_eq!(err, FiniteError::MissingFullSet);
    }
}
