//! OFDM signal synthesis: QAM mapping, Hermitian framing and the inverse DFT.

mod batch;
mod constellation;
mod frame;
mod idft;
mod symbol;

pub use batch::{batch_generate, SymbolSource, SymbolStream};
pub use constellation::{Constellation, SUPPORTED_ORDERS};
pub use frame::{check_subcarriers, FrequencyFrame};
pub use idft::{idft, IdftPlan};
pub use symbol::{Samples, TimeSymbol};
