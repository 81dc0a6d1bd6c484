//! Detector blocks and their binary record format.
//!
//! Record layout (all integers little endian):
//!
//! | offset | size | field                                   |
//! |--------|------|-----------------------------------------|
//! | 0      | 2    | code distance `d`                        |
//! | 2      | 2    | number of syndrome rounds                |
//! | 4      | 8    | shot index                               |
//! | 12     | P    | detector payload, `P = ceil(L * N / 8)`  |
//! | 12 + P | 1    | observable flip, `0` or `1`              |
//!
//! `L = rounds + 1` detector layers and `N = (d^2 - 1) / 2` detectors per
//! layer. Detector `(layer, ancilla)` is bit `layer * N + ancilla` of the
//! payload, least significant bit first within each byte. Unused trailing
//! bits of the last payload byte are zero.

use std::io::{Read, Write};

use crate::error::{Error, Result};

pub const HEADER_BYTES: usize = 12;

/// Detector values for one shot plus the true logical flip.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DetectorBlock {
    d: usize,
    rounds: usize,
    per_layer: usize,
    bits: Vec<bool>,
    pub logical_flip: bool,
}

impl DetectorBlock {
    pub fn zeros(d: usize, rounds: usize) -> Self {
        let per_layer = (d * d - 1) / 2;
        Self { d, rounds, per_layer, bits: vec![false; (rounds + 1) * per_layer], logical_flip: false }
    }

    pub fn distance(&self) -> usize {
        self.d
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn num_layers(&self) -> usize {
        self.rounds + 1
    }

    pub fn per_layer(&self) -> usize {
        self.per_layer
    }

    pub fn num_detectors(&self) -> usize {
        self.bits.len()
    }

    pub fn layer(&self, layer: usize) -> &[bool] {
        &self.bits[layer * self.per_layer..(layer + 1) * self.per_layer]
    }

    pub fn get(&self, layer: usize, anc: usize) -> bool {
        self.bits[layer * self.per_layer + anc]
    }

    pub fn set(&mut self, layer: usize, anc: usize, value: bool) {
        self.bits[layer * self.per_layer + anc] = value;
    }

    /// Flip a detector by flat index `layer * per_layer + ancilla`.
    pub fn toggle(&mut self, index: usize) {
        self.bits[index] ^= true;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn clear(&mut self) {
        self.bits.iter_mut().for_each(|b| *b = false);
        self.logical_flip = false;
    }

    /// Flat indices of active detectors.
    pub fn defects(&self) -> Vec<usize> {
        self.bits.iter().enumerate().filter_map(|(i, &b)| b.then_some(i)).collect()
    }

    pub fn is_silent(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    /// Per-ancilla parity over all layers. Equals the X syndrome of the net
    /// data error at the end of the block.
    pub fn spatial_parity(&self) -> Vec<bool> {
        let mut out = vec![false; self.per_layer];
        for chunk in self.bits.chunks(self.per_layer) {
            for (o, &b) in out.iter_mut().zip(chunk) {
                *o ^= b;
            }
        }
        out
    }

    pub fn payload_bytes(&self) -> usize {
        self.bits.len().div_ceil(8)
    }

    pub fn record_bytes(&self) -> usize {
        HEADER_BYTES + self.payload_bytes() + 1
    }

    pub fn to_record(&self, shot: u64) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.record_bytes());
        out.extend_from_slice(&(self.d as u16).to_le_bytes());
        out.extend_from_slice(&(self.rounds as u16).to_le_bytes());
        out.extend_from_slice(&shot.to_le_bytes());
        let mut payload = vec![0u8; self.payload_bytes()];
        for (i, &b) in self.bits.iter().enumerate() {
            if b {
                payload[i / 8] |= 1 << (i % 8);
            }
        }
        out.extend_from_slice(&payload);
        out.push(self.logical_flip as u8);
        out
    }

    /// Parse one record; returns the shot index and the block.
    pub fn from_record(bytes: &[u8]) -> Result<(u64, Self)> {
        if bytes.len() < HEADER_BYTES + 1 {
            return Err(Error::Format(format!("record too short: {} bytes", bytes.len())));
        }
        let d = u16::from_le_bytes([bytes[0], bytes[1]]) as usize;
        let rounds = u16::from_le_bytes([bytes[2], bytes[3]]) as usize;
        let shot = u64::from_le_bytes(bytes[4..12].try_into().expect("8 bytes"));
        if d < 3 || d.is_multiple_of(2) {
            return Err(Error::Format(format!("bad distance {d}")));
        }
        let mut block = Self::zeros(d, rounds);
        let p = block.payload_bytes();
        if bytes.len() != HEADER_BYTES + p + 1 {
            return Err(Error::Format(format!("expected {} bytes, got {}", HEADER_BYTES + p + 1, bytes.len())));
        }
        let payload = &bytes[HEADER_BYTES..HEADER_BYTES + p];
        for (i, b) in block.bits.iter_mut().enumerate() {
            *b = payload[i / 8] >> (i % 8) & 1 == 1;
        }
        let used = block.bits.len();
        if !used.is_multiple_of(8) && payload[p - 1] >> (used % 8) != 0 {
            return Err(Error::Format("nonzero padding bits".into()));
        }
        block.logical_flip = match bytes[HEADER_BYTES + p] {
            0 => false,
            1 => true,
            v => return Err(Error::Format(format!("observable byte {v}"))),
        };
        Ok((shot, block))
    }

    pub fn write_record<W: Write>(&self, shot: u64, mut w: W) -> Result<()> {
        w.write_all(&self.to_record(shot))?;
        Ok(())
    }

    /// Read one record of a known geometry from a stream. `Ok(None)` at EOF.
    pub fn read_record<R: Read>(d: usize, rounds: usize, mut r: R) -> Result<Option<(u64, Self)>> {
        let len = Self::zeros(d, rounds).record_bytes();
        let mut buf = vec![0u8; len];
        match r.read_exact(&mut buf) {
            Ok(()) => Self::from_record(&buf).map(Some),
            Err(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => Ok(None),
            Err(e) => Err(e.into()),
        }
    }
}
