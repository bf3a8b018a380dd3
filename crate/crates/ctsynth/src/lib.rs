// Copyright contributors to the ctsynth project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Clifford+T synthesis of controlled SU(2), controlled U(2) and SU(4)
//! gates, with T-count accounting and exact verification.
//!
//! The crate is organized around the compilation pipeline:
//!
//! * [`ring`] — exact arithmetic in Z[√2], Z[1/√2] and Z[ζ₈].
//! * [`circuit`] / [`sim`] — gate IR, text format, exact and float
//!   simulation, diamond distances.
//! * [`manf`] — Matsumoto–Amano normal forms: tables, reduction,
//!   enumeration.
//! * [`synth1q`] — ε-approximation of SU(2) targets by normal forms.
//! * [`pad`] — length equalization of even-T-count forms with the movable
//!   middle H and periodic tail.
//! * [`ctrl`] — the controlled-gate compiler: Boolean table, oracle
//!   layer, gadget layer, uncompute; ancilla-free two-qubit path.
//! * [`lbound`] — channel representation over the ring and the sde
//!   T-count lower bound.
//! * [`apps`] — controlled U(2) synthesis, split-half SU(2)⊕SU(2), and
//!   SU(4) synthesis through the SO(6) correspondence.
//!
//! With the default `parallel` feature the enumeration searches fan out
//! over rayon; disabling it falls back to sequential scans with identical
//! results.

pub mod apps;
pub mod circuit;
pub mod ctrl;
pub mod error;
pub mod lbound;
pub mod manf;
pub mod mat;
pub mod pad;
pub mod ring;
pub mod sample;
pub mod sim;
pub mod synth1q;

pub use error::{Error, Result};
