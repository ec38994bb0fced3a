use std::fmt;

use super::{IndexScheme, ProtocolError};

/// A node's Z-measurement record, one bit per stream index.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector(Vec<u8>);

impl BitVector {
    pub fn new(bits: Vec<u8>) -> Result<Self, ProtocolError> {
        if let Some(p) = bits.iter().position(|&b| b > 1) {
            return Err(ProtocolError::InvalidVector(format!(
                "bit {p} is {}, expected 0 or 1",
                bits[p]
            )));
        }
        Ok(Self(bits))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, p: usize) -> u8 {
        self.0[p]
    }

    pub fn set(&mut self, p: usize, bit: u8) {
        self.0[p] = bit & 1;
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

/// The commander's masked proof of an order, addressed to one lieutenant.
///
/// Masking is tuple-granular: a tuple is either fully revealed (all `n - 1`
/// commander bits) or fully masked.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CommandVector {
    recipient: usize,
    order: u8,
    slots: usize,
    revealed: Vec<bool>,
    // Commander bits; zero wherever the tuple is masked.
    bits: Vec<u8>,
}

impl CommandVector {
    /// Builds a vector from per-index entries (`None` = masked), rejecting
    /// partially masked tuples.
    pub fn from_entries(
        scheme: &IndexScheme,
        recipient: usize,
        order: u8,
        entries: &[Option<u8>],
    ) -> Result<Self, ProtocolError> {
        if order > 1 {
            return Err(ProtocolError::InvalidVector(format!("order {order}")));
        }
        if entries.len() != scheme.stream_len() {
            return Err(ProtocolError::LengthMismatch {
                expected: scheme.stream_len(),
                got: entries.len(),
            });
        }
        let slots = scheme.lieutenants();
        let mut revealed = Vec::with_capacity(scheme.tuples());
        let mut bits = vec![0u8; entries.len()];
        for (k, tuple) in entries.chunks(slots).enumerate() {
            let shown = tuple[0].is_some();
            if tuple.iter().any(|e| e.is_some() != shown) {
                return Err(ProtocolError::InvalidVector(format!(
                    "tuple {k} is partially masked"
                )));
            }
            for (s, e) in tuple.iter().enumerate() {
                match e {
                    Some(b) if *b > 1 => {
                        return Err(ProtocolError::InvalidVector(format!("bit value {b}")))
                    }
                    Some(b) => bits[k * slots + s] = *b,
                    None => {}
                }
            }
            revealed.push(shown);
        }
        Ok(Self {
            recipient,
            order,
            slots,
            revealed,
            bits,
        })
    }

    pub fn recipient(&self) -> usize {
        self.recipient
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn tuples(&self) -> usize {
        self.revealed.len()
    }

    pub fn is_revealed(&self, k: usize) -> bool {
        self.revealed[k]
    }

    pub fn revealed_tuples(&self) -> impl Iterator<Item = usize> + '_ {
        self.revealed
            .iter()
            .enumerate()
            .filter_map(|(k, &r)| r.then_some(k))
    }

    pub fn revealed_count(&self) -> usize {
        self.revealed.iter().filter(|&&r| r).count()
    }

    pub fn entry(&self, p: usize) -> Option<u8> {
        self.revealed[p / self.slots].then(|| self.bits[p])
    }

    /// Bit at `p`, assuming its tuple is revealed.
    #[inline]
    pub(crate) fn bit(&self, p: usize) -> u8 {
        self.bits[p]
    }

    pub fn entries(&self) -> Vec<Option<u8>> {
        (0..self.len()).map(|p| self.entry(p)).collect()
    }

    pub(crate) fn matches_scheme(&self, scheme: &IndexScheme) -> bool {
        self.slots == scheme.lieutenants() && self.revealed.len() == scheme.tuples()
    }
}

impl fmt::Debug for CommandVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CommandVector(to={}, order={}, ", self.recipient, self.order)?;
        for (k, tuple) in self.bits.chunks(self.slots).enumerate() {
            if k > 0 {
                write!(f, "|")?;
            }
            for b in tuple {
                if self.revealed[k] {
                    write!(f, "{b}")?;
                } else {
                    write!(f, "*")?;
                }
            }
        }
        write!(f, ")")
    }
}

/// Masks the commander record `a` for lieutenant `i` under order `c`: tuple
/// `k` is revealed iff the commander's bit at `i`'s pair in that tuple equals `c`.
pub fn build_command_vector(
    a: &BitVector,
    scheme: &IndexScheme,
    i: usize,
    c: u8,
) -> Result<CommandVector, ProtocolError> {
    if a.len() != scheme.stream_len() {
        return Err(ProtocolError::LengthMismatch {
            expected: scheme.stream_len(),
            got: a.len(),
        });
    }
    if c > 1 {
        return Err(ProtocolError::InvalidVector(format!("order {c}")));
    }
    scheme.anticorrelated_index(i, 0)?;
    let slots = scheme.lieutenants();
    let revealed: Vec<bool> = (0..scheme.tuples())
        .map(|k| a.get(scheme.index(i, k)) == c)
        .collect();
    let mut bits = vec![0u8; a.len()];
    for (k, _) in revealed.iter().enumerate().filter(|(_, &r)| r) {
        let range = k * slots..(k + 1) * slots;
        bits[range.clone()].copy_from_slice(&a.as_slice()[range]);
    }
    Ok(CommandVector {
        recipient: i,
        order: c,
        slots,
        revealed,
        bits,
    })
}

pub fn decode_order(v: &CommandVector) -> u8 {
    v.order
}

/// Two proofs contradict when they claim different orders, or reveal
/// different commander bits at the same stream index.
pub fn contradicts(v1: &CommandVector, v2: &CommandVector) -> bool {
    if v1.order != v2.order {
        return true;
    }
    if v1.slots != v2.slots || v1.revealed.len() != v2.revealed.len() {
        return true;
    }
    let slots = v1.slots;
    (0..v1.revealed.len())
        .filter(|&k| v1.revealed[k] && v2.revealed[k])
        .any(|k| v1.bits[k * slots..(k + 1) * slots] != v2.bits[k * slots..(k + 1) * slots])
}
