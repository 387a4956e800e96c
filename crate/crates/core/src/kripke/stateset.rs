use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Not, Sub};

/// Upper bound on the number of states in a model.
pub const MAX_STATES: usize = 128;

/// A set of state indices, stored as a 128-bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet(u128);

impl StateSet {
    pub const EMPTY: StateSet = StateSet(0);

    pub fn from_bits(bits: u128) -> Self {
        StateSet(bits)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    /// `{0, .., n-1}`
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_STATES);
        if n == MAX_STATES {
            StateSet(u128::MAX)
        } else {
            StateSet((1u128 << n) - 1)
        }
    }

    pub fn singleton(s: usize) -> Self {
        StateSet(1u128 << s)
    }

    pub fn contains(self, s: usize) -> bool {
        s < MAX_STATES && self.0 >> s & 1 == 1
    }

    pub fn insert(&mut self, s: usize) {
        self.0 |= 1u128 << s;
    }

    pub fn remove(&mut self, s: usize) {
        self.0 &= !(1u128 << s);
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: StateSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: StateSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Smallest member.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// Complement relative to `{0, .., n-1}`.
    pub fn complement(self, n: usize) -> Self {
        StateSet(!self.0 & StateSet::full(n).0)
    }
}

pub struct Iter(u128);

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let s = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(s)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

impl IntoIterator for StateSet {
    type Item = usize;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<usize> for StateSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = StateSet::EMPTY;
        for s in iter {
            set.insert(s);
        }
        set
    }
}

impl BitOr for StateSet {
    type Output = StateSet;
    fn bitor(self, rhs: StateSet) -> StateSet {
        StateSet(self.0 | rhs.0)
    }
}

impl BitOrAssign for StateSet {
    fn bitor_assign(&mut self, rhs: StateSet) {
        self.0 |= rhs.0;
    }
}

impl BitAnd for StateSet {
    type Output = StateSet;
    fn bitand(self, rhs: StateSet) -> StateSet {
        StateSet(self.0 & rhs.0)
    }
}

impl BitAndAssign for StateSet {
    fn bitand_assign(&mut self, rhs: StateSet) {
        self.0 &= rhs.0;
    }
}

impl Sub for StateSet {
    type Output = StateSet;
    fn sub(self, rhs: StateSet) -> StateSet {
        StateSet(self.0 & !rhs.0)
    }
}

/// Complement within the full 128-state universe; use [`StateSet::complement`]
/// when the model size matters.
impl Not for StateSet {
    type Output = StateSet;
    fn not(self) -> StateSet {
        StateSet(!self.0)
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
