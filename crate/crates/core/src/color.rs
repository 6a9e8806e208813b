//! Colors, color sets, colorings and list assignments.
//!
//! Vertices are dense indices `0..n`. A [`Coloring`] is a dense array indexed
//! by vertex where `0` marks "no color" (vertices outside the subgraph a
//! coloring is attached to). Colors are positive integers up to [`MAX_COLOR`].

use std::fmt;

use serde::{Deserialize, Serialize};

pub type Vertex = usize;
pub type Color = u8;

/// Largest color representable in a [`ColorSet`].
pub const MAX_COLOR: Color = 127;

/// Sentinel stored in a [`Coloring`] for vertices without a color.
pub const NO_COLOR: Color = 0;

/// A set of colors in `1..=MAX_COLOR`, stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColorSet(u128);

impl ColorSet {
    pub const fn empty() -> Self {
        ColorSet(0)
    }

    /// The colors `1..=k`.
    pub fn range(k: Color) -> Self {
        assert!(k <= MAX_COLOR, "color {k} out of range");
        if k == 0 {
            return ColorSet(0);
        }
        ColorSet(((1u128 << k) - 1) << 1)
    }

    pub fn from_colors<I: IntoIterator<Item = Color>>(colors: I) -> Self {
        let mut s = ColorSet::empty();
        for c in colors {
            s.insert(c);
        }
        s
    }

    pub fn contains(&self, c: Color) -> bool {
        c != NO_COLOR && c <= MAX_COLOR && self.0 & (1u128 << c) != 0
    }

    pub fn insert(&mut self, c: Color) {
        assert!(c != NO_COLOR && c <= MAX_COLOR, "color {c} out of range");
        self.0 |= 1u128 << c;
    }

    /// Removes `c`; removing [`NO_COLOR`] or an absent color is a no-op.
    pub fn remove(&mut self, c: Color) {
        if c != NO_COLOR && c <= MAX_COLOR {
            self.0 &= !(1u128 << c);
        }
    }

    pub fn without(mut self, c: Color) -> Self {
        self.remove(c);
        self
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn union(&self, other: &ColorSet) -> ColorSet {
        ColorSet(self.0 | other.0)
    }

    pub fn intersection(&self, other: &ColorSet) -> ColorSet {
        ColorSet(self.0 & other.0)
    }

    pub fn difference(&self, other: &ColorSet) -> ColorSet {
        ColorSet(self.0 & !other.0)
    }

    pub fn is_subset(&self, other: &ColorSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn min(&self) -> Option<Color> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as Color)
        }
    }

    pub fn max(&self) -> Option<Color> {
        if self.0 == 0 {
            None
        } else {
            Some((127 - self.0.leading_zeros()) as Color)
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Color> + '_ {
        let bits = self.0;
        (1..=MAX_COLOR).filter(move |c| bits & (1u128 << c) != 0)
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<Color> for ColorSet {
    fn from_iter<I: IntoIterator<Item = Color>>(iter: I) -> Self {
        ColorSet::from_colors(iter)
    }
}

/// A (possibly partial) coloring: `colors[v] == NO_COLOR` means `v` is uncolored.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coloring(pub Vec<Color>);

impl Coloring {
    pub fn uncolored(n: usize) -> Self {
        Coloring(vec![NO_COLOR; n])
    }

    pub fn from_vec(colors: Vec<Color>) -> Self {
        Coloring(colors)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: Vertex) -> Color {
        self.0[v]
    }

    pub fn set(&mut self, v: Vertex, c: Color) {
        self.0[v] = c;
    }

    pub fn as_slice(&self) -> &[Color] {
        &self.0
    }

    /// Copy of `self` keeping only the colors of `vertices`.
    pub fn restrict<I: IntoIterator<Item = Vertex>>(&self, vertices: I) -> Coloring {
        let mut out = Coloring::uncolored(self.len());
        for v in vertices {
            out.0[v] = self.0[v];
        }
        out
    }

    /// Largest color used, 0 for an empty coloring.
    pub fn max_color(&self) -> Color {
        self.0.iter().copied().max().unwrap_or(NO_COLOR)
    }
}

impl fmt::Debug for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coloring{:?}", self.0)
    }
}

/// Per-vertex color lists, indexed by vertex.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListAssignment(pub Vec<ColorSet>);

impl ListAssignment {
    pub fn uniform(n: usize, list: ColorSet) -> Self {
        ListAssignment(vec![list; n])
    }

    pub fn get(&self, v: Vertex) -> ColorSet {
        self.0[v]
    }

    pub fn get_mut(&mut self, v: Vertex) -> &mut ColorSet {
        &mut self.0[v]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Debug for ListAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_and_ops() {
        let s = ColorSet::range(10);
        assert_eq!(s.len(), 10);
        assert_eq!(s.min(), Some(1));
        assert_eq!(s.max(), Some(10));
        assert!(!s.contains(0));
        assert!(!s.contains(11));
        let t = s.without(1).without(10);
        assert_eq!(t.iter().collect::<Vec<_>>(), (2..=9).collect::<Vec<_>>());
        assert!(t.is_subset(&s));
        assert_eq!(s.difference(&t), ColorSet::from_colors([1, 10]));
        assert_eq!(ColorSet::range(0), ColorSet::empty());
        assert_eq!(ColorSet::range(MAX_COLOR).len(), MAX_COLOR as usize);
    }

    #[test]
    fn restrict_keeps_only_requested() {
        let c = Coloring::from_vec(vec![1, 2, 3]);
        assert_eq!(c.restrict([0, 2]).0, vec![1, 0, 3]);
    }
}
