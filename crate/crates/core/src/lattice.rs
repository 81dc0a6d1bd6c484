//! Rotated surface code geometry.
//!
//! Data qubits sit on an integer grid `(row, col)` with `0 <= row, col < d`.
//! Ancillas sit on plaquettes: plaquette `(i, j)` with `0 <= i, j <= d` is
//! centred at `(i - 0.5, j - 0.5)` in data coordinates and touches the data
//! qubits `(i-1, j-1)`, `(i-1, j)`, `(i, j-1)` and `(i, j)` that exist.
//!
//! Bulk plaquettes alternate X/Z in a checkerboard (`i + j` even is X).
//! Two-qubit X plaquettes live on the top and bottom edges, two-qubit Z
//! plaquettes on the left and right edges, so Z-error chains terminate on the
//! left and right lattice edges.
//!
//! CNOT schedule: X ancillas visit their corners in Z order (TL, TR, BL, BR),
//! Z ancillas in N order (TL, BL, TR, BR). A Z fault on a Z ancilla after its
//! second CNOT therefore spreads to a vertical pair of data qubits (the hook).

use std::fmt::{self, Write as _};

use crate::error::{Error, Result};

pub const MIN_DISTANCE: usize = 3;
pub const MAX_DISTANCE: usize = 25;

/// Index of a data qubit, `row * d + col`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DataId(pub usize);

/// Stabilizer type measured by an ancilla.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    X,
    Z,
}

/// An ancilla reference: basis plus index within that basis' list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AncillaId {
    pub basis: Basis,
    pub index: usize,
}

impl AncillaId {
    pub fn x(index: usize) -> Self {
        Self { basis: Basis::X, index }
    }

    pub fn z(index: usize) -> Self {
        Self { basis: Basis::Z, index }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    Bulk,
    /// Two-qubit Z plaquette on the left or right edge.
    ZBoundary,
    /// Two-qubit X plaquette on the top or bottom edge.
    XBoundary,
}

/// Corner of a plaquette.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Corner {
    TopLeft,
    TopRight,
    BottomLeft,
    BottomRight,
}

impl Corner {
    fn offset(self) -> (isize, isize) {
        match self {
            Corner::TopLeft => (-1, -1),
            Corner::TopRight => (-1, 0),
            Corner::BottomLeft => (0, -1),
            Corner::BottomRight => (0, 0),
        }
    }
}

const X_ORDER: [Corner; 4] = [Corner::TopLeft, Corner::TopRight, Corner::BottomLeft, Corner::BottomRight];
const Z_ORDER: [Corner; 4] = [Corner::TopLeft, Corner::BottomLeft, Corner::TopRight, Corner::BottomRight];

/// Which side of the CNOT the ancilla is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CnotDirection {
    /// X ancilla: ancilla is the control, data the target.
    AncillaControl,
    /// Z ancilla: data is the control, ancilla the target.
    AncillaTarget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CnotStep {
    /// 1..=4
    pub timestep: u8,
    pub data: DataId,
    pub corner: Corner,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ancilla {
    pub basis: Basis,
    /// Plaquette row index `i` in `0..=d`.
    pub row: usize,
    /// Plaquette column index `j` in `0..=d`.
    pub col: usize,
    pub boundary: BoundaryKind,
    /// Schedule ordered by timestep.
    pub schedule: Vec<CnotStep>,
}

impl Ancilla {
    /// Plaquette centre in data-qubit coordinates.
    pub fn center(&self) -> (f64, f64) {
        (self.row as f64 - 0.5, self.col as f64 - 0.5)
    }

    pub fn data_qubits(&self) -> impl Iterator<Item = DataId> + '_ {
        self.schedule.iter().map(|s| s.data)
    }

    pub fn touches(&self, q: DataId) -> bool {
        self.schedule.iter().any(|s| s.data == q)
    }

    /// Timestep at which this ancilla interacts with `q`, if it does.
    pub fn timestep_of(&self, q: DataId) -> Option<u8> {
        self.schedule.iter().find(|s| s.data == q).map(|s| s.timestep)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    d: usize,
    x_ancillas: Vec<Ancilla>,
    z_ancillas: Vec<Ancilla>,
    /// For every data qubit, the X ancillas touching it (1 or 2).
    data_to_x: Vec<Vec<usize>>,
    /// Plaquette `(i, j)` -> X ancilla index.
    x_at: Vec<Option<usize>>,
}

impl Lattice {
    pub fn new(d: usize) -> Result<Self> {
        build_lattice(d)
    }

    pub fn distance(&self) -> usize {
        self.d
    }

    pub fn num_data(&self) -> usize {
        self.d * self.d
    }

    pub fn num_x(&self) -> usize {
        self.x_ancillas.len()
    }

    pub fn num_z(&self) -> usize {
        self.z_ancillas.len()
    }

    pub fn num_qubits(&self) -> usize {
        self.num_data() + self.num_x() + self.num_z()
    }

    pub fn x_ancillas(&self) -> &[Ancilla] {
        &self.x_ancillas
    }

    pub fn z_ancillas(&self) -> &[Ancilla] {
        &self.z_ancillas
    }

    pub fn ancilla(&self, id: AncillaId) -> Result<&Ancilla> {
        let list = match id.basis {
            Basis::X => &self.x_ancillas,
            Basis::Z => &self.z_ancillas,
        };
        list.get(id.index).ok_or(Error::UnknownAncilla(id))
    }

    pub fn data_id(&self, row: usize, col: usize) -> DataId {
        debug_assert!(row < self.d && col < self.d);
        DataId(row * self.d + col)
    }

    pub fn data_coords(&self, q: DataId) -> (usize, usize) {
        (q.0 / self.d, q.0 % self.d)
    }

    /// X ancillas (by index) whose stabilizer contains `q`.
    pub fn x_neighbors_of(&self, q: DataId) -> &[usize] {
        &self.data_to_x[q.0]
    }

    /// X ancilla index at plaquette `(i, j)`, if one exists there.
    pub fn x_at(&self, i: isize, j: isize) -> Option<usize> {
        let n = self.d as isize + 1;
        if i < 0 || j < 0 || i >= n || j >= n {
            return None;
        }
        self.x_at[(i * n + j) as usize]
    }

    pub fn cnot_schedule(&self, id: AncillaId) -> Result<Vec<(u8, DataId, CnotDirection)>> {
        let anc = self.ancilla(id)?;
        let dir = match id.basis {
            Basis::X => CnotDirection::AncillaControl,
            Basis::Z => CnotDirection::AncillaTarget,
        };
        Ok(anc.schedule.iter().map(|s| (s.timestep, s.data, dir)).collect())
    }

    /// The single data qubit shared by two distinct, lattice-adjacent X ancillas.
    pub fn shared_data_qubit(&self, a: usize, b: usize) -> Option<DataId> {
        if a == b {
            return None;
        }
        let (aa, bb) = (self.x_ancillas.get(a)?, self.x_ancillas.get(b)?);
        let mut shared = aa.data_qubits().filter(|q| bb.touches(*q));
        let first = shared.next()?;
        if shared.next().is_some() {
            return None;
        }
        Some(first)
    }

    /// Parity vector over X ancillas of a set of Z errors on data qubits.
    pub fn x_syndrome_of<I: IntoIterator<Item = DataId>>(&self, qubits: I) -> Vec<bool> {
        let mut syn = vec![false; self.num_x()];
        for q in qubits {
            for &a in self.x_neighbors_of(q) {
                syn[a] ^= true;
            }
        }
        syn
    }

    /// Logical observable support: the leftmost column of data qubits. A Z
    /// chain joining the left and right edges crosses it an odd number of times.
    pub fn observable_qubits(&self) -> impl Iterator<Item = DataId> + '_ {
        (0..self.d).map(move |r| self.data_id(r, 0))
    }

    pub fn on_observable(&self, q: DataId) -> bool {
        q.0.is_multiple_of(self.d)
    }

    /// Line-oriented text dump, one qubit per line.
    /// Check that no qubit is used twice in one timestep and that every X/Z
    /// plaquette pair sharing qubits interleaves so the checks commute.
    pub fn validate_schedule(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidLocation(m));
        let mut busy = vec![[false; 5]; self.num_data()];
        for a in self.x_ancillas.iter().chain(&self.z_ancillas) {
            for s in &a.schedule {
                let slot = &mut busy[s.data.0][s.timestep as usize];
                if *slot {
                    return bad(format!("data qubit {} used twice at timestep {}", s.data.0, s.timestep));
                }
                *slot = true;
            }
        }
        for x in &self.x_ancillas {
            for z in &self.z_ancillas {
                let shared: Vec<DataId> = x.data_qubits().filter(|q| z.touches(*q)).collect();
                let x_first = shared.iter().filter(|q| x.timestep_of(**q) < z.timestep_of(**q)).count();
                if shared.len() % 2 == 1 || x_first % 2 == 1 {
                    return bad(format!("plaquettes at ({},{}) and ({},{}) do not commute", x.row, x.col, z.row, z.col));
                }
            }
        }
        Ok(())
    }

    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# rotated surface code d={}", self.d);
        for r in 0..self.d {
            for c in 0..self.d {
                let xs: Vec<String> = self.data_to_x[r * self.d + c].iter().map(|a| format!("X{a}")).collect();
                let _ = writeln!(out, "data {r} {c} x_neighbors={}", xs.join(","));
            }
        }
        for (basis, list) in [("X", &self.x_ancillas), ("Z", &self.z_ancillas)] {
            for (k, a) in list.iter().enumerate() {
                let sched: Vec<String> = a
                    .schedule
                    .iter()
                    .map(|s| {
                        let (r, c) = self.data_coords(s.data);
                        format!("t{}:({r},{c})", s.timestep)
                    })
                    .collect();
                let _ = writeln!(out, "{basis}{k} {} {} {} {}", a.row, a.col, a.boundary, sched.join(" "));
            }
        }
        out
    }
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryKind::Bulk => "bulk",
            BoundaryKind::ZBoundary => "z-boundary",
            BoundaryKind::XBoundary => "x-boundary",
        })
    }
}

pub fn build_lattice(d: usize) -> Result<Lattice> {
    if d.is_multiple_of(2) || !(MIN_DISTANCE..=MAX_DISTANCE).contains(&d) {
        return Err(Error::InvalidDistance(d));
    }
    let n = d + 1;
    let mut x_ancillas = Vec::new();
    let mut z_ancillas = Vec::new();
    let mut x_at = vec![None; n * n];
    for i in 0..=d {
        for j in 0..=d {
            let is_x = (i + j) % 2 == 0;
            let on_tb = i == 0 || i == d;
            let on_lr = j == 0 || j == d;
            let boundary = match (on_tb, on_lr) {
                (true, true) => continue,
                (false, false) => BoundaryKind::Bulk,
                (true, false) if is_x => BoundaryKind::XBoundary,
                (false, true) if !is_x => BoundaryKind::ZBoundary,
                _ => continue,
            };
            let order = if is_x { &X_ORDER } else { &Z_ORDER };
            let schedule = order
                .iter()
                .enumerate()
                .filter_map(|(t, &corner)| {
                    let (dr, dc) = corner.offset();
                    let (r, c) = (i as isize + dr, j as isize + dc);
                    if r < 0 || c < 0 || r >= d as isize || c >= d as isize {
                        return None;
                    }
                    Some(CnotStep { timestep: t as u8 + 1, data: DataId(r as usize * d + c as usize), corner })
                })
                .collect();
            let anc = Ancilla { basis: if is_x { Basis::X } else { Basis::Z }, row: i, col: j, boundary, schedule };
            if is_x {
                x_at[i * n + j] = Some(x_ancillas.len());
                x_ancillas.push(anc);
            } else {
                z_ancillas.push(anc);
            }
        }
    }
    let mut data_to_x = vec![Vec::new(); d * d];
    for (k, a) in x_ancillas.iter().enumerate() {
        for q in a.data_qubits() {
            data_to_x[q.0].push(k);
        }
    }
    Ok(Lattice { d, x_ancillas, z_ancillas, data_to_x, x_at })
}
