//! Gate catalog: the 19 mutatable gates plus the simulate-only `cp`.
//!
//! Unitaries use the operand-order convention where bit `k` of a local basis
//! index corresponds to `operands[k]`. For `cx` that makes `operands[0]` the
//! control (bit 0) and `operands[1]` the target (bit 1).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Dense row-major square matrix of size `2^arity`.
pub type Matrix = Vec<Vec<Complex64>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gate {
    Ccx,
    Cswap,
    Cx,
    Cz,
    H,
    Id,
    P,
    Rx,
    Rxx,
    Ry,
    Rz,
    Rzz,
    S,
    Swap,
    Sx,
    T,
    X,
    Y,
    Z,
    Cp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateType {
    Controlled,
    Hadamard,
    Pauli,
    Phase,
    Rotation,
    Swap,
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SizeClass {
    Single,
    Multi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateCatalogEntry {
    pub gate: Gate,
    pub arity: usize,
    pub param_count: usize,
    pub gate_type: GateType,
    pub size_class: SizeClass,
    pub mutatable: bool,
}

impl GateCatalogEntry {
    pub fn name(&self) -> &'static str {
        self.gate.name()
    }

    pub fn unitary(&self, params: &[f64]) -> Matrix {
        unitary(self.gate, params)
    }
}

const fn entry(gate: Gate, arity: usize, param_count: usize, gate_type: GateType) -> GateCatalogEntry {
    GateCatalogEntry {
        gate,
        arity,
        param_count,
        gate_type,
        size_class: if arity == 1 { SizeClass::Single } else { SizeClass::Multi },
        mutatable: !matches!(gate, Gate::Cp),
    }
}

/// Catalog in its canonical order. Enumeration order of mutants follows this.
pub static CATALOG: [GateCatalogEntry; 20] = [
    entry(Gate::Ccx, 3, 0, GateType::Controlled),
    entry(Gate::Cswap, 3, 0, GateType::Controlled),
    entry(Gate::Cx, 2, 0, GateType::Controlled),
    entry(Gate::Cz, 2, 0, GateType::Controlled),
    entry(Gate::H, 1, 0, GateType::Hadamard),
    entry(Gate::Id, 1, 0, GateType::Pauli),
    entry(Gate::P, 1, 1, GateType::Phase),
    entry(Gate::Rx, 1, 1, GateType::Rotation),
    entry(Gate::Rxx, 2, 1, GateType::Rotation),
    entry(Gate::Ry, 1, 1, GateType::Rotation),
    entry(Gate::Rz, 1, 1, GateType::Rotation),
    entry(Gate::Rzz, 2, 1, GateType::Rotation),
    entry(Gate::S, 1, 0, GateType::Phase),
    entry(Gate::Swap, 2, 0, GateType::Swap),
    entry(Gate::Sx, 1, 0, GateType::Phase),
    entry(Gate::T, 1, 0, GateType::T),
    entry(Gate::X, 1, 0, GateType::Pauli),
    entry(Gate::Y, 1, 0, GateType::Pauli),
    entry(Gate::Z, 1, 0, GateType::Pauli),
    entry(Gate::Cp, 2, 1, GateType::Controlled),
];

impl Gate {
    pub const ALL: [Gate; 20] = [
        Gate::Ccx,
        Gate::Cswap,
        Gate::Cx,
        Gate::Cz,
        Gate::H,
        Gate::Id,
        Gate::P,
        Gate::Rx,
        Gate::Rxx,
        Gate::Ry,
        Gate::Rz,
        Gate::Rzz,
        Gate::S,
        Gate::Swap,
        Gate::Sx,
        Gate::T,
        Gate::X,
        Gate::Y,
        Gate::Z,
        Gate::Cp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Gate::Ccx => "ccx",
            Gate::Cswap => "cswap",
            Gate::Cx => "cx",
            Gate::Cz => "cz",
            Gate::H => "h",
            Gate::Id => "id",
            Gate::P => "p",
            Gate::Rx => "rx",
            Gate::Rxx => "rxx",
            Gate::Ry => "ry",
            Gate::Rz => "rz",
            Gate::Rzz => "rzz",
            Gate::S => "s",
            Gate::Swap => "swap",
            Gate::Sx => "sx",
            Gate::T => "t",
            Gate::X => "x",
            Gate::Y => "y",
            Gate::Z => "z",
            Gate::Cp => "cp",
        }
    }

    pub fn entry(self) -> &'static GateCatalogEntry {
        &CATALOG[self.catalog_index()]
    }

    /// Position in [`CATALOG`].
    pub fn catalog_index(self) -> usize {
        Gate::ALL.iter().position(|g| *g == self).expect("gate in catalog")
    }

    pub fn arity(self) -> usize {
        self.entry().arity
    }

    pub fn param_count(self) -> usize {
        self.entry().param_count
    }

    pub fn is_mutatable(self) -> bool {
        self.entry().mutatable
    }

    pub fn gate_type(self) -> GateType {
        self.entry().gate_type
    }

    pub fn size_class(self) -> SizeClass {
        self.entry().size_class
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Gate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Gate::ALL
            .iter()
            .copied()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::UnknownGate(s.to_string()))
    }
}

impl GateType {
    pub fn name(self) -> &'static str {
        match self {
            GateType::Controlled => "Controlled",
            GateType::Hadamard => "Hadamard",
            GateType::Pauli => "Pauli",
            GateType::Phase => "Phase",
            GateType::Rotation => "Rotation",
            GateType::Swap => "Swap",
            GateType::T => "T",
        }
    }
}

impl fmt::Display for GateType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            GateType::Controlled,
            GateType::Hadamard,
            GateType::Pauli,
            GateType::Phase,
            GateType::Rotation,
            GateType::Swap,
            GateType::T,
        ]
        .into_iter()
        .find(|t| t.name().eq_ignore_ascii_case(s))
        .ok_or_else(|| Error::Config(format!("unknown gate type `{s}`")))
    }
}

impl SizeClass {
    pub fn name(self) -> &'static str {
        match self {
            SizeClass::Single => "Single",
            SizeClass::Multi => "Multi",
        }
    }
}

impl fmt::Display for SizeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SizeClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "single" => Ok(SizeClass::Single),
            "multi" => Ok(SizeClass::Multi),
            _ => Err(Error::Config(format!("unknown gate size `{s}`"))),
        }
    }
}

pub fn lookup(name: &str) -> Result<&'static GateCatalogEntry, Error> {
    name.parse::<Gate>().map(Gate::entry)
}

pub fn taxonomy_of(name: &str) -> Result<(GateType, SizeClass), Error> {
    lookup(name).map(|e| (e.gate_type, e.size_class))
}

/// The mutatable gates in catalog order.
pub fn mutatable_gates() -> impl Iterator<Item = Gate> {
    Gate::ALL.into_iter().filter(|g| g.is_mutatable())
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn diag(entries: &[Complex64]) -> Matrix {
    let n = entries.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { entries[i] } else { c(0.0, 0.0) })
                .collect()
        })
        .collect()
}

fn permutation(n: usize, swaps: &[(usize, usize)]) -> Matrix {
    let mut target: Vec<usize> = (0..n).collect();
    for &(a, b) in swaps {
        target.swap(a, b);
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if target[j] == i { c(1.0, 0.0) } else { c(0.0, 0.0) })
                .collect()
        })
        .collect()
}

/// Unitary of `gate` with the given parameters. Missing parameters read as 0.
pub fn unitary(gate: Gate, params: &[f64]) -> Matrix {
    let theta = params.first().copied().unwrap_or(0.0);
    let (half_cos, half_sin) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    match gate {
        Gate::Id => diag(&[one, one]),
        Gate::H => {
            let r = std::f64::consts::FRAC_1_SQRT_2;
            vec![vec![c(r, 0.0), c(r, 0.0)], vec![c(r, 0.0), c(-r, 0.0)]]
        }
        Gate::X => vec![vec![zero, one], vec![one, zero]],
        Gate::Y => vec![vec![zero, c(0.0, -1.0)], vec![c(0.0, 1.0), zero]],
        Gate::Z => diag(&[one, c(-1.0, 0.0)]),
        Gate::S => diag(&[one, c(0.0, 1.0)]),
        Gate::T => diag(&[one, Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)]),
        Gate::Sx => vec![
            vec![c(0.5, 0.5), c(0.5, -0.5)],
            vec![c(0.5, -0.5), c(0.5, 0.5)],
        ],
        Gate::P => diag(&[one, Complex64::from_polar(1.0, theta)]),
        Gate::Rx => vec![
            vec![c(half_cos, 0.0), c(0.0, -half_sin)],
            vec![c(0.0, -half_sin), c(half_cos, 0.0)],
        ],
        Gate::Ry => vec![
            vec![c(half_cos, 0.0), c(-half_sin, 0.0)],
            vec![c(half_sin, 0.0), c(half_cos, 0.0)],
        ],
        Gate::Rz => diag(&[
            Complex64::from_polar(1.0, -theta / 2.0),
            Complex64::from_polar(1.0, theta / 2.0),
        ]),
        Gate::Cx => permutation(4, &[(1, 3)]),
        Gate::Cz => diag(&[one, one, one, c(-1.0, 0.0)]),
        Gate::Cp => diag(&[one, one, one, Complex64::from_polar(1.0, theta)]),
        Gate::Swap => permutation(4, &[(1, 2)]),
        Gate::Rxx => {
            let d = c(half_cos, 0.0);
            let o = c(0.0, -half_sin);
            vec![
                vec![d, zero, zero, o],
                vec![zero, d, o, zero],
                vec![zero, o, d, zero],
                vec![o, zero, zero, d],
            ]
        }
        Gate::Rzz => {
            let even = Complex64::from_polar(1.0, -theta / 2.0);
            let odd = Complex64::from_polar(1.0, theta / 2.0);
            diag(&[even, odd, odd, even])
        }
        Gate::Ccx => permutation(8, &[(3, 7)]),
        Gate::Cswap => permutation(8, &[(3, 5)]),
    }
}
