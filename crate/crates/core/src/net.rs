//! Net container with per-point provenance.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::geometry::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Trivial,
    QuadLine,
    QuadRecurse,
    Stage0,
    Stage1,
    Stage2,
    Stage3Qs0,
    Stage3Triangle,
    Stage3QLi,
    Clamp,
}

impl Tag {
    pub const ALL: [Tag; 10] = [
        Tag::Trivial,
        Tag::QuadLine,
        Tag::QuadRecurse,
        Tag::Stage0,
        Tag::Stage1,
        Tag::Stage2,
        Tag::Stage3Qs0,
        Tag::Stage3Triangle,
        Tag::Stage3QLi,
        Tag::Clamp,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Trivial => "Trivial",
            Tag::QuadLine => "QuadLine",
            Tag::QuadRecurse => "QuadRecurse",
            Tag::Stage0 => "Stage0",
            Tag::Stage1 => "Stage1",
            Tag::Stage2 => "Stage2",
            Tag::Stage3Qs0 => "Stage3-Qs0",
            Tag::Stage3Triangle => "Stage3-Triangle",
            Tag::Stage3QLi => "Stage3-QLi",
            Tag::Clamp => "Clamp",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownTag(pub String);

impl fmt::Display for UnknownTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown provenance tag {:?}", self.0)
    }
}

impl std::error::Error for UnknownTag {}

impl FromStr for Tag {
    type Err = UnknownTag;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Tag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| UnknownTag(s.to_string()))
    }
}

/// A transversal: points in the plane, each tagged with the step that chose it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Net {
    pub points: Vec<Point>,
    pub tags: Vec<Tag>,
}

impl Net {
    pub fn new() -> Self {
        Net::default()
    }

    pub fn from_points(points: Vec<Point>, tag: Tag) -> Self {
        let tags = vec![tag; points.len()];
        Net { points, tags }
    }

    pub fn push(&mut self, p: Point, tag: Tag) {
        self.points.push(p);
        self.tags.push(tag);
    }

    pub fn extend(&mut self, other: Net) {
        self.points.extend(other.points);
        self.tags.extend(other.tags);
    }

    pub fn extend_tagged(&mut self, other: Net, tag: Tag) {
        self.tags
            .extend(std::iter::repeat_n(tag, other.points.len()));
        self.points.extend(other.points);
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Drops repeated points, keeping the first occurrence and its tag.
    pub fn dedup(&mut self) {
        let mut seen = HashSet::new();
        let mut points = Vec::with_capacity(self.points.len());
        let mut tags = Vec::with_capacity(self.tags.len());
        for (p, t) in self.points.drain(..).zip(self.tags.drain(..)) {
            if seen.insert(p.clone()) {
                points.push(p);
                tags.push(t);
            }
        }
        self.points = points;
        self.tags = tags;
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, Tag)> {
        self.points.iter().zip(self.tags.iter().copied())
    }
}
