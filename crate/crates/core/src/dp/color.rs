use std::fmt;

use smallvec::SmallVec;

use crate::arith::Magnitude;

const UP_BIT: u16 = 1 << 15;

/// Orientation plus magnitude of a bag vertex's distance to its nearest hub.
///
/// `↓i`: the witnessing path stays inside the current subgraph. `↑i`: it leaves
/// it. The encoding orders every `↓` before every `↑`, then by magnitude, which
/// is the tie-break order used when choosing among equally good children.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Color(u16);

impl Color {
    pub fn down(m: Magnitude) -> Self {
        debug_assert!(m < UP_BIT);
        Color(m)
    }

    pub fn up(m: Magnitude) -> Self {
        debug_assert!(m > 0 && m < UP_BIT, "↑0 is not a color");
        Color(m | UP_BIT)
    }

    pub fn is_up(self) -> bool {
        self.0 & UP_BIT != 0
    }

    pub fn is_down(self) -> bool {
        !self.is_up()
    }

    pub fn magnitude(self) -> Magnitude {
        self.0 & !UP_BIT
    }

    /// `↓0`: the vertex itself is an open hub.
    pub fn is_open_hub(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = if self.is_up() { '↑' } else { '↓' };
        write!(f, "{arrow}{}", self.magnitude())
    }
}

/// Colors of a bag, aligned with the bag's sorted vertex list.
pub type Coloring = SmallVec<[Color; 6]>;
