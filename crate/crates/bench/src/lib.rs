//! Placeholder library; the interesting code lives in benches/.
