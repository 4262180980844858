#!/usr/bin/env python3
"""
Seed Parser Utility - Module seeds from presets or sparse "idx:val,..." text
"""

import re

from core.qnum import QuadScalar

PRESETS = ("primary", "e1-diff")

_ENTRY_PATTERN = re.compile(r"^\s*(\d+)\s*:\s*(\S.*?)\s*$")


def preset_seed(name, space, m):
    """
    Named seeds

    primary: the base vertex x.
    e1-diff: y - z for the weight-one words with letters 1 and 2 in the first coordinate.
    """
    one = QuadScalar(1, 0, m)
    if name == "primary":
        return {space.base: one}
    if name == "e1-diff":
        tail = (0,) * (space.D - 1)
        return {space.index((1,) + tail): one, space.index((2,) + tail): -one}
    raise ValueError(f"Unknown preset '{name}'; expected one of {', '.join(PRESETS)}")


def parse_sparse_vector(text, order, m):
    """
    Parse "idx:val,idx:val,..." with values in the a + b*sqrt(m) scalar syntax

    Args:
        text (str): sparse vector text
        order (int): number of vertices
        m (int): radicand of the instance

    Returns:
        dict: vertex -> nonzero QuadScalar
    """
    if not text or not text.strip():
        raise ValueError("Seed must not be empty")

    vector = {}
    for chunk in text.split(","):
        match = _ENTRY_PATTERN.match(chunk)
        if not match:
            raise ValueError(f"Cannot parse seed entry '{chunk.strip()}'; expected 'idx:val'")
        index = int(match.group(1))
        if index >= order:
            raise ValueError(f"Seed index {index} out of range [0, {order})")
        if index in vector:
            raise ValueError(f"Seed index {index} given twice")
        vector[index] = QuadScalar.parse(match.group(2), m)
    return {k: v for k, v in vector.items() if v}


def parse_seed(spec, space, m):
    """Preset name or sparse vector; a zero vector is rejected"""
    text = spec.strip()
    seed = preset_seed(text, space, m) if text in PRESETS else parse_sparse_vector(text, space.order, m)
    if not seed:
        raise ValueError(f"Seed '{spec}' is the zero vector")
    return seed
