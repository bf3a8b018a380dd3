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

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("simulation capacity exceeded: {0}")]
    CapExceeded(String),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix is not block diagonal: nonzero off-block entry at ({0}, {1})")]
    NotBlockDiagonal(usize, usize),

    #[error("no form within epsilon at T-count <= {m_cap}")]
    EpsilonTooSmall { m_cap: u32 },

    #[error("T-count parity mismatch: {0}")]
    ParityMismatch(String),

    #[error("inconsistent compiler input: {0}")]
    InconsistentInput(String),

    #[error("channel representation entry is not real at ({0}, {1})")]
    NonRealEntry(usize, usize),

    #[error("matrix is not special unitary: {0}")]
    NotSpecialUnitary(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
