//! Instance builders shared by the benchmark targets.

use cutlab_core::families::cycle_with_chords;
use cutlab_core::forall::{self, ForAllParams, GapHammingInstance};
use cutlab_core::foreach::{build_graph, random_string, ForEachEncoding, ForEachParams};
use cutlab_core::UndirectedGraph;

pub const SEED: u64 = 0xBEAC4;

/// Chorded cycle with a planted cut of 4 and eight edges per vertex.
pub fn chorded(n: usize) -> UndirectedGraph {
    cycle_with_chords(n, 4, Some(8 * n), SEED).expect("valid family parameters")
}

pub fn packing_params() -> ForEachParams {
    ForEachParams::new(3, 4, 128, 2.0).expect("valid geometry")
}

pub fn packed_instance() -> (Vec<i8>, ForEachEncoding, ForEachParams) {
    let p = packing_params();
    let s = random_string(&p, SEED);
    let enc = build_graph(&s, &p).expect("encoding succeeds");
    (s, enc, p)
}

pub fn gap_params() -> ForAllParams {
    ForAllParams::new(12, 1, 48, 0.05, 20_000).expect("valid geometry")
}

pub fn gap_instance() -> (GapHammingInstance, ForAllParams) {
    let p = gap_params();
    let inst = forall::sample_gap_hamming(&p, SEED).expect("sampling succeeds");
    (inst, p)
}
