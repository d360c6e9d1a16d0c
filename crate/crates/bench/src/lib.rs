//! Benchmark fixtures: seeded systems of fixed shape.

use cframe::random::{self, KKind, SystemShape};
use cframe::{ControlledFrameSystem, ModuleOperator};

/// A commuting system with `d` fibers of dimension at most `n` and up to `family` operators.
pub fn system(seed: u64, d: usize, n: usize, family: usize, k: KKind) -> ControlledFrameSystem {
    let mut rng = random::seeded(seed);
    let shape = SystemShape { max_d: d, max_n: n, max_family: family };
    random::commuting_system(&mut rng, shape, k).expect("random systems are valid")
}

/// A pair `(T, T D)` on a dense-weight module, for Douglas factorisation.
pub fn douglas_pair(seed: u64, d: usize, n: usize) -> (ModuleOperator, ModuleOperator) {
    let mut rng = random::seeded(seed);
    let dims = random::dims(&mut rng, d, n);
    let h = random::space(&mut rng, &dims, random::WeightKind::Dense).expect("random weights are valid");
    let t = random::singular_operator(&mut rng, &h);
    let d = random::operator(&mut rng, &h);
    let tp = t.compose(&d).expect("same module");
    (t, tp)
}
