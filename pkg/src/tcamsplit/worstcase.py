"""Generators for extremal partitions (tight / near-tight bound instances)."""
from __future__ import annotations

from .core import Partition, new_partition
from .errors import KTooSmall, WidthTooSmall


def _third_split(total: int) -> list[int]:
    """Split a power of two into three near-thirds: [x, x+1, x+1] for even
    x = total // 3, else [x, x, x+1]."""
    x = total // 3
    if x % 2 == 0:
        return [x, x + 1, x + 1]
    return [x, x, x + 1]


def gen_k2(width: int) -> Partition:
    """Two parts around one third / two thirds; the hardest k=2 instance."""
    if width < 1:
        raise WidthTooSmall("need width >= 1")
    total = 1 << width
    # round half up; never hit exactly for a power of two, documented anyway
    x = (2 * total + 3) // 6
    return new_partition([x, total - x], width)


def gen_k3(width: int) -> Partition:
    """Three near-equal parts; costs one rule per bit."""
    if width < 2:
        raise WidthTooSmall("need width >= 2")
    return new_partition(_third_split(1 << width), width)


def _ceil_lg(n: int) -> int:
    return (n - 1).bit_length()


def gen_triplets(k: int, width: int) -> Partition:
    """k >= 4 parts: floor((k-1)/3) hard triplets plus small left-over parts."""
    if k < 4:
        raise KTooSmall("need k >= 4")
    m = (k - 1) // 3
    sub_width = width - 1 - _ceil_lg(m)
    if sub_width < 2:
        raise WidthTooSmall(f"width {width} too small for {m} triplets")
    triplet_total = 1 << sub_width
    weights: list[int] = []
    for _ in range(m):
        weights.extend(_third_split(triplet_total))
    leftover = (1 << width) - m * triplet_total
    r = k - 3 * m
    if r == 1:
        tail = [leftover]
    elif r == 2:
        tail = [1, leftover - 1]
    else:
        if leftover % 2:
            raise WidthTooSmall("odd left-over cannot be split into three parts")
        tail = [1, leftover // 2 - 1, leftover // 2]
    if any(w <= 0 for w in tail):
        raise WidthTooSmall(f"width {width} too small for k={k}")
    return new_partition(weights + tail, width)


def gen_general_hard(k: int, width: int) -> Partition:
    """Parts with identical non-zero signed-digit counts floor(h/2)+1,
    h = width - ceil(lg k); hard for general ternary tables."""
    if k < 2:
        raise KTooSmall("need k >= 2")
    h = width - _ceil_lg(k)
    if h < 2:
        raise WidthTooSmall(f"need width >= ceil(lg k) + 2, got {width}")
    # base values in {2**h, 2**(h+1)} summing to 2**width, large entries last
    big = (1 << _ceil_lg(k)) - k
    base = [1 << h] * (k - big) + [1 << (h + 1)] * big
    delta = sum(1 << (h - 2 * j) for j in range(1, h // 2 + 1))
    if k % 2 == 0:
        parts = [q - delta if i % 2 == 0 else q + delta for i, q in enumerate(base)]
    else:
        parts = [q - delta if i % 2 == 0 else q + delta for i, q in enumerate(base[:-2])]
        parts.append(base[-2] - delta)
        parts.append(base[-1] + 2 * delta)
    return new_partition(parts, width)
