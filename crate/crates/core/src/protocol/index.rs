use super::ProtocolError;

/// Layout of the distributed qubit stream: `m` tuples of `n - 1` slots.
///
/// Stream index `p` belongs to tuple `p / (n-1)` and slot `p % (n-1)`;
/// slot `i` of every tuple is the pair shared by the commander and
/// lieutenant `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexScheme {
    n: usize,
    m: usize,
}

impl IndexScheme {
    pub fn new(n: usize, m: usize) -> Result<Self, ProtocolError> {
        if n < 3 {
            return Err(ProtocolError::InvalidConfig(format!(
                "need at least 3 players, got {n}"
            )));
        }
        if m < 1 {
            return Err(ProtocolError::InvalidConfig("need at least one tuple".into()));
        }
        Ok(Self { n, m })
    }

    pub fn players(&self) -> usize {
        self.n
    }

    pub fn lieutenants(&self) -> usize {
        self.n - 1
    }

    pub fn tuples(&self) -> usize {
        self.m
    }

    pub fn stream_len(&self) -> usize {
        self.m * (self.n - 1)
    }

    pub fn tuple(&self, p: usize) -> usize {
        p / (self.n - 1)
    }

    pub fn slot(&self, p: usize) -> usize {
        p % (self.n - 1)
    }

    /// Stream index of lieutenant `i`'s pair in tuple `k`, unchecked.
    #[inline]
    pub(crate) fn index(&self, i: usize, k: usize) -> usize {
        i + (self.n - 1) * k
    }

    pub fn anticorrelated_index(&self, i: usize, k: usize) -> Result<usize, ProtocolError> {
        if i >= self.lieutenants() {
            return Err(ProtocolError::OutOfRange(format!(
                "lieutenant {i} (have {})",
                self.lieutenants()
            )));
        }
        if k >= self.m {
            return Err(ProtocolError::OutOfRange(format!("tuple {k} (have {})", self.m)));
        }
        Ok(self.index(i, k))
    }

    pub fn live_indices(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.m).map(move |k| self.index(i, k))
    }
}

pub fn anticorrelated_index(
    scheme: &IndexScheme,
    i: usize,
    k: usize,
) -> Result<usize, ProtocolError> {
    scheme.anticorrelated_index(i, k)
}
