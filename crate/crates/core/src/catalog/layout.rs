//! Where each particle lives in `H_F = M_{8x4}(C)`.
//!
//! Rows 1-4 hold the particle block `F`: rows are (up R, down R, up L, down L),
//! column 1 holds leptons and columns 2-4 the three quark colours. Rows 5-8 hold
//! the antiparticle block `F*`, which is laid out transposed: entry `(4 + r, c)`
//! is the antiparticle of the particle in `F` at `(c, r)`.
//!
//! All indices here are 0-based positions in the 8x4 matrix.

/// Rows of the particle block, in order.
pub const UP_R: usize = 0;
pub const DOWN_R: usize = 1;
pub const UP_L: usize = 2;
pub const DOWN_L: usize = 3;

pub const LEPTON_COLUMN: usize = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Species {
    NuR,
    ER,
    LeptonL,
    UR,
    DR,
    QuarkL,
}

impl Species {
    /// Three times the weak hypercharge.
    pub fn hypercharge3(self) -> i32 {
        match self {
            Species::LeptonL => -3,
            Species::QuarkL => 1,
            Species::NuR => 0,
            Species::ER => -6,
            Species::UR => 4,
            Species::DR => -2,
        }
    }

    pub fn is_lepton(self) -> bool {
        matches!(self, Species::NuR | Species::ER | Species::LeptonL)
    }
}

/// Species sitting at particle-block position `(row, col)`, `row < 4`.
pub fn particle_at(row: usize, col: usize) -> Species {
    let lepton = col == LEPTON_COLUMN;
    match (row, lepton) {
        (UP_R, true) => Species::NuR,
        (DOWN_R, true) => Species::ER,
        (UP_L | DOWN_L, true) => Species::LeptonL,
        (UP_R, false) => Species::UR,
        (DOWN_R, false) => Species::DR,
        (UP_L | DOWN_L, false) => Species::QuarkL,
        _ => panic!("row {row} is outside the particle block"),
    }
}

/// A basis slot of `H_F`: the species and whether it is the antiparticle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Slot {
    pub species: Species,
    pub anti: bool,
}

impl Slot {
    /// Exponent `k` with which `lambda in U(1)` acts as `lambda^k` on this slot.
    pub fn hypercharge3(self) -> i32 {
        let y = self.species.hypercharge3();
        if self.anti {
            -y
        } else {
            y
        }
    }
}

pub fn slot(row: usize, col: usize) -> Slot {
    if row < 4 {
        Slot { species: particle_at(row, col), anti: false }
    } else {
        Slot { species: particle_at(col, row - 4), anti: true }
    }
}

/// All 32 slots, indexed like the column-major flattening (`row + 8 col`).
pub fn slots() -> Vec<Slot> {
    (0..32).map(|k| slot(k % 8, k / 8)).collect()
}
