//! Branching trail layouts.
//!
//! Text format, one record per line, coordinates in centimetres, `#` starts a
//! comment:
//!
//! ```text
//! NEST x y
//! SEG x1 y1 x2 y2 branch_id parent_id
//! END id x y
//! ```
//!
//! A branch is the polyline of all `SEG` records sharing a `branch_id`, in
//! file order. `parent_id` 0 attaches a branch to the nest. An endpoint sits
//! at the far end of a leaf branch.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::FieldGrid;
use crate::Real;

/// Shipped default layout: a trunk from the left edge splitting into ten
/// endpoints along the right edge.
pub const DEFAULT_LAYOUT: &str = include_str!("../../assets/default_map.txt");

/// How close (cm) an endpoint or child start must be to the branch end it attaches to.
const JOIN_TOLERANCE: Real = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub from: (Real, Real),
    pub to: (Real, Real),
    pub branch: u32,
    pub parent: u32,
}

impl Segment {
    pub fn length(&self) -> Real {
        (self.to.0 - self.from.0).hypot(self.to.1 - self.from.1)
    }

    /// Distance from `p` to the segment.
    pub fn distance(&self, p: (Real, Real)) -> Real {
        let (vx, vy) = (self.to.0 - self.from.0, self.to.1 - self.from.1);
        let len2 = vx * vx + vy * vy;
        let t = if len2 == 0.0 {
            0.0
        } else {
            (((p.0 - self.from.0) * vx + (p.1 - self.from.1) * vy) / len2).clamp(0.0, 1.0)
        };
        let q = (self.from.0 + t * vx, self.from.1 + t * vy);
        (p.0 - q.0).hypot(p.1 - q.1)
    }

    /// The leading part of the segment, `len` centimetres long.
    fn head(&self, len: Real) -> Segment {
        let l = self.length();
        if len >= l || l == 0.0 {
            return *self;
        }
        let f = len / l;
        Segment {
            to: (
                self.from.0 + f * (self.to.0 - self.from.0),
                self.from.1 + f * (self.to.1 - self.from.1),
            ),
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Endpoint {
    pub id: u32,
    pub pos: (Real, Real),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapLayout {
    pub nest: (Real, Real),
    pub segments: Vec<Segment>,
    pub endpoints: Vec<Endpoint>,
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::Syntax {
        line,
        msg: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| Error::Syntax {
        line,
        msg: format!("invalid {what} `{tok}`"),
    })
}

impl MapLayout {
    pub fn default_layout() -> Self {
        Self::parse(DEFAULT_LAYOUT).expect("shipped layout parses")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut nest = None;
        let mut segments = Vec::new();
        let mut endpoints = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut toks = line.split_whitespace();
            let kind = toks.next().unwrap_or_default();
            match kind {
                "NEST" => {
                    if nest.is_some() {
                        return Err(Error::Syntax {
                            line: ln,
                            msg: "duplicate NEST".into(),
                        });
                    }
                    nest = Some((
                        parse_num(toks.next(), ln, "x")?,
                        parse_num(toks.next(), ln, "y")?,
                    ));
                }
                "SEG" => {
                    let x1 = parse_num(toks.next(), ln, "x1")?;
                    let y1 = parse_num(toks.next(), ln, "y1")?;
                    let x2 = parse_num(toks.next(), ln, "x2")?;
                    let y2 = parse_num(toks.next(), ln, "y2")?;
                    let branch: u32 = parse_num(toks.next(), ln, "branch_id")?;
                    let parent: u32 = parse_num(toks.next(), ln, "parent_id")?;
                    if branch == 0 {
                        return Err(Error::Syntax {
                            line: ln,
                            msg: "branch_id 0 is reserved for the nest".into(),
                        });
                    }
                    segments.push(Segment {
                        from: (x1, y1),
                        to: (x2, y2),
                        branch,
                        parent,
                    });
                }
                "END" => {
                    let id = parse_num(toks.next(), ln, "id")?;
                    let x = parse_num(toks.next(), ln, "x")?;
                    let y = parse_num(toks.next(), ln, "y")?;
                    endpoints.push(Endpoint { id, pos: (x, y) });
                }
                other => {
                    return Err(Error::Syntax {
                        line: ln,
                        msg: format!("unknown record `{other}`"),
                    })
                }
            }
            if toks.next().is_some() {
                return Err(Error::Syntax {
                    line: ln,
                    msg: "trailing tokens".into(),
                });
            }
        }
        let nest = nest.ok_or_else(|| Error::config("layout has no NEST record"))?;
        Ok(Self {
            nest,
            segments,
            endpoints,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "NEST {} {}", self.nest.0, self.nest.1);
        for g in &self.segments {
            let _ = writeln!(
                s,
                "SEG {} {} {} {} {} {}",
                g.from.0, g.from.1, g.to.0, g.to.1, g.branch, g.parent
            );
        }
        for e in &self.endpoints {
            let _ = writeln!(s, "END {} {} {}", e.id, e.pos.0, e.pos.1);
        }
        s
    }

    pub fn endpoint(&self, id: u32) -> Option<&Endpoint> {
        self.endpoints.iter().find(|e| e.id == id)
    }

    pub fn branch_ids(&self) -> BTreeSet<u32> {
        self.segments.iter().map(|s| s.branch).collect()
    }

    pub fn branch_segments(&self, branch: u32) -> impl Iterator<Item = &Segment> + '_ {
        self.segments.iter().filter(move |s| s.branch == branch)
    }

    pub fn parent_of(&self, branch: u32) -> Option<u32> {
        self.branch_segments(branch).next().map(|s| s.parent)
    }

    pub fn children_of(&self, branch: u32) -> Vec<u32> {
        self.branch_ids()
            .into_iter()
            .filter(|&b| self.parent_of(b) == Some(branch))
            .collect()
    }

    fn branch_start(&self, branch: u32) -> Option<(Real, Real)> {
        self.branch_segments(branch).next().map(|s| s.from)
    }

    fn branch_end(&self, branch: u32) -> Option<(Real, Real)> {
        self.branch_segments(branch).last().map(|s| s.to)
    }

    /// Leaf branch terminating at each endpoint.
    pub fn endpoint_branches(&self) -> Result<BTreeMap<u32, u32>> {
        let mut out = BTreeMap::new();
        for e in &self.endpoints {
            let leaf = self
                .branch_ids()
                .into_iter()
                .filter(|&b| self.children_of(b).is_empty())
                .find(|&b| {
                    self.branch_end(b)
                        .is_some_and(|p| dist(p, e.pos) <= JOIN_TOLERANCE)
                })
                .ok_or_else(|| {
                    Error::config(format!(
                        "endpoint {} is not at the end of any leaf branch",
                        e.id
                    ))
                })?;
            out.insert(e.id, leaf);
        }
        Ok(out)
    }

    /// Branch chain from the nest to `branch`, root first.
    pub fn path_to(&self, branch: u32) -> Result<Vec<u32>> {
        let mut chain = vec![branch];
        let mut cur = branch;
        loop {
            let parent = self
                .parent_of(cur)
                .ok_or_else(|| Error::config(format!("branch {cur} has no segments")))?;
            if parent == 0 {
                break;
            }
            if chain.contains(&parent) {
                return Err(Error::config(format!("branch {parent} is part of a cycle")));
            }
            chain.push(parent);
            cur = parent;
        }
        chain.reverse();
        Ok(chain)
    }

    /// Checks that every branch is reachable from the nest and properly joined,
    /// and every endpoint terminates a leaf.
    pub fn validate(&self) -> Result<()> {
        if self.segments.is_empty() {
            return Err(Error::config("layout has no segments"));
        }
        let ids = self.branch_ids();
        for &b in &ids {
            let parent = self.parent_of(b).unwrap_or(0);
            if self.branch_segments(b).any(|s| s.parent != parent) {
                return Err(Error::config(format!(
                    "branch {b} has inconsistent parent ids"
                )));
            }
            let start = self.branch_start(b).unwrap_or_default();
            let anchor = if parent == 0 {
                Some(self.nest)
            } else if ids.contains(&parent) {
                self.branch_end(parent)
            } else {
                return Err(Error::config(format!(
                    "branch {b} references missing parent {parent}"
                )));
            };
            if anchor.is_some_and(|a| dist(a, start) > JOIN_TOLERANCE) {
                return Err(Error::config(format!(
                    "branch {b} does not start where its parent ends"
                )));
            }
            self.path_to(b)?;
        }
        let mut seen = BTreeSet::new();
        for e in &self.endpoints {
            if !seen.insert(e.id) {
                return Err(Error::config(format!("duplicate endpoint id {}", e.id)));
            }
        }
        self.endpoint_branches()?;
        Ok(())
    }

    /// Segments of every branch on the nest-to-endpoint paths of `ids`.
    pub fn path_segments(&self, ids: &BTreeSet<u32>) -> Result<Vec<Segment>> {
        let branches = self.path_branches(ids)?;
        Ok(self
            .segments
            .iter()
            .filter(|s| branches.contains(&s.branch))
            .copied()
            .collect())
    }

    pub fn path_branches(&self, ids: &BTreeSet<u32>) -> Result<BTreeSet<u32>> {
        let leaves = self.endpoint_branches()?;
        let mut out = BTreeSet::new();
        for id in ids {
            let leaf = leaves
                .get(id)
                .ok_or_else(|| Error::config(format!("unknown endpoint id {id}")))?;
            out.extend(self.path_to(*leaf)?);
        }
        Ok(out)
    }

    /// The first `length` centimetres of a branch polyline.
    pub fn branch_head(&self, branch: u32, length: Real) -> Vec<Segment> {
        let mut left = length;
        let mut out = Vec::new();
        for s in self.branch_segments(branch) {
            if left <= 0.0 {
                break;
            }
            out.push(s.head(left));
            left -= s.length();
        }
        out
    }
}

fn dist(a: (Real, Real), b: (Real, Real)) -> Real {
    (a.0 - b.0).hypot(a.1 - b.1)
}

/// Cells of `grid`'s lattice whose centre lies within `width / 2` of a segment.
pub fn rasterize(
    segments: &[Segment],
    width: Real,
    grid: &FieldGrid<Real>,
) -> BTreeSet<(usize, usize)> {
    let half = width / 2.0;
    let cs = grid.cell_size();
    let mut cells = BTreeSet::new();
    let clamp_idx =
        |v: Real, n: usize| -> usize { (v / cs).floor().max(0.0).min((n - 1) as Real) as usize };
    for s in segments {
        let x0 = clamp_idx(s.from.0.min(s.to.0) - half, grid.width());
        let x1 = clamp_idx(s.from.0.max(s.to.0) + half, grid.width());
        let y0 = clamp_idx(s.from.1.min(s.to.1) - half, grid.height());
        let y1 = clamp_idx(s.from.1.max(s.to.1) + half, grid.height());
        for y in y0..=y1 {
            for x in x0..=x1 {
                if s.distance(grid.cell_center(x, y)) <= half {
                    cells.insert((x, y));
                }
            }
        }
    }
    cells
}
