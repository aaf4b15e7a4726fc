"""
Reproducible random substreams
A master seed, a component name and an index fully determine each stream
"""
import zlib

import numpy as np

RNG_ALGORITHM = "numpy.PCG64+SeedSequence"


def component_key(component: str) -> int:
    """Stable 32-bit key for a component name (Python's hash() is salted per process)"""
    return zlib.crc32(component.encode("utf-8"))


def substream(seed: int, component: str, index: int) -> np.random.Generator:
    """
    Independent generator for one unit of work

    Args:
        seed: Master seed of the experiment
        component: Name of the consumer (e.g. 'trajectory', 'siy')
        index: Block or schedule index within the component

    Returns:
        PCG64 generator seeded from SeedSequence(seed, spawn_key=(crc32(component), index))
    """
    sequence = np.random.SeedSequence(
        entropy=int(seed),
        spawn_key=(component_key(component), int(index))
    )
    return np.random.Generator(np.random.PCG64(sequence))
