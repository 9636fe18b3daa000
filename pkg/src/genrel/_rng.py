import numpy as np


def derive_seed(seed, *keys):
    """Deterministic 64-bit child seed of ``seed`` addressed by integer ``keys``."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def generator(seed, *keys):
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed),
                                                        spawn_key=tuple(int(k) for k in keys)))
