use serde::{Deserialize, Serialize};

use super::{Condition, CoordExpr, SubCondition};

/// Inclusive anchor interval `[lx,ux] x [ly,uy]`. May be empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bounds {
    pub lx: i64,
    pub ux: i64,
    pub ly: i64,
    pub uy: i64,
}

impl Bounds {
    pub fn full(width: u32, height: u32) -> Self {
        Bounds {
            lx: 1,
            ux: i64::from(width),
            ly: 1,
            uy: i64::from(height),
        }
    }

    /// Anchors `(?x,?y)` for which every parameter-relative coordinate of
    /// `c` stays on an `width x height` board. Negation does not matter, and
    /// absolute or extreme coordinates contribute nothing.
    pub fn of_subcondition(c: &SubCondition, width: u32, height: u32) -> Self {
        let (lx, ux) = shrink(&c.x);
        let (ly, uy) = shrink(&c.y);
        Bounds {
            lx: 1 + lx,
            ux: i64::from(width) - ux,
            ly: 1 + ly,
            uy: i64::from(height) - uy,
        }
    }

    /// Intersection over all sub-conditions; the full board for `()`.
    pub fn of_condition(c: &Condition, width: u32, height: u32) -> Self {
        Self::of_subconditions(c.iter(), width, height)
    }

    pub fn of_subconditions<'a>(
        subs: impl IntoIterator<Item = &'a SubCondition>,
        width: u32,
        height: u32,
    ) -> Self {
        subs.into_iter()
            .fold(Bounds::full(width, height), |acc, c| {
                acc.intersect(&Bounds::of_subcondition(c, width, height))
            })
    }

    pub fn intersect(&self, other: &Bounds) -> Bounds {
        Bounds {
            lx: self.lx.max(other.lx),
            ux: self.ux.min(other.ux),
            ly: self.ly.max(other.ly),
            uy: self.uy.min(other.uy),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lx > self.ux || self.ly > self.uy
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        (self.lx..=self.ux).contains(&x) && (self.ly..=self.uy).contains(&y)
    }

    /// `self ⊆ other`; the empty interval is contained in everything.
    pub fn is_within(&self, other: &Bounds) -> bool {
        self.is_empty()
            || (other.lx <= self.lx
                && self.ux <= other.ux
                && other.ly <= self.ly
                && self.uy <= other.uy)
    }

    /// All anchors, column-major (`x` outer, `y` inner).
    pub fn anchors(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (self.lx..=self.ux).flat_map(move |x| (self.ly..=self.uy).map(move |y| (x, y)))
    }

    pub fn anchor_count(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            ((self.ux - self.lx + 1) * (self.uy - self.ly + 1)) as usize
        }
    }
}

fn shrink(e: &CoordExpr) -> (i64, i64) {
    if !e.is_relative() {
        return (0, 0);
    }
    let off = i64::from(e.offset);
    if off < 0 {
        (-off, 0)
    } else {
        (0, off)
    }
}
