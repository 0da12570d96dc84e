use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::graph::Graph;

/// Generator for sample `counter` under `seed`; independent of thread schedule.
pub fn sample_rng(seed: u64, counter: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(counter);
    rng
}

/// `G(n, 1/2)`: every pair is an edge independently with probability 1/2.
pub fn gnp_half_from(n: usize, rng: &mut impl Rng) -> Graph {
    let mut g = Graph::empty(n);
    let mut word = 0u64;
    let mut left = 0;
    for j in 1..n {
        for i in 0..j {
            if left == 0 {
                word = rng.next_u64();
                left = 64;
            }
            if word & 1 == 1 {
                g.add_edge(i, j);
            }
            word >>= 1;
            left -= 1;
        }
    }
    g
}

pub fn random_gnp_half(n: usize, seed: u64) -> Graph {
    gnp_half_from(n, &mut sample_rng(seed, 0))
}

/// Uniformly random permutation of `0..n`.
pub fn random_permutation(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}
