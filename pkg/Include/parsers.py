import math
from typing import Optional, Tuple, Union

FaceDegree = Union[int, float]


def parse_int(val):
    """
    Safely parse an int from val. Returns None if val is empty or invalid.
    """
    try:
        if val == '' or val is None:
            return None
        if isinstance(val, bool):
            return None
        if isinstance(val, float) and not val.is_integer():
            return None
        return int(val)
    except (ValueError, TypeError):
        return None


def parse_bool(val) -> Optional[bool]:
    """
    Parse environment-style booleans ('1', 'true', 'yes', 'on' and their negatives).
    Returns None if val is empty or unrecognised.
    """
    if val is None or val == '':
        return None
    if isinstance(val, bool):
        return val
    text = str(val).strip().lower()
    if text in ('1', 'true', 'yes', 'on'):
        return True
    if text in ('0', 'false', 'no', 'off'):
        return False
    return None


def parse_face_degree(val) -> Optional[FaceDegree]:
    """
    Parse a face degree: an integer >= 3, or infinity written as 'inf', 'infinity' or '∞'.
    Returns None if invalid.
    """
    if isinstance(val, float) and math.isinf(val) and val > 0:
        return math.inf
    if isinstance(val, str) and val.strip().lower() in ('inf', 'infinity', '∞', 'oo'):
        return math.inf
    degree = parse_int(val)
    if degree is None or degree < 3:
        return None
    return degree


def parse_radii(val) -> Optional[Tuple[int, int]]:
    """
    Parse an inclusive radius range 'A:B' (or a single 'A'). Returns None if invalid.
    """
    if val is None or val == '':
        return None
    parts = str(val).split(':')
    if len(parts) == 1:
        parts = [parts[0], parts[0]]
    if len(parts) != 2:
        return None
    low, high = parse_int(parts[0]), parse_int(parts[1])
    if low is None or high is None or low < 0 or high < low:
        return None
    return low, high


def parse_compare(val) -> Optional[Tuple[int, FaceDegree]]:
    """
    Parse a comparison host 'p,q' where q may be infinite. Returns None if invalid.
    """
    if val is None or val == '':
        return None
    parts = str(val).split(',')
    if len(parts) != 2:
        return None
    p = parse_int(parts[0])
    q = parse_face_degree(parts[1])
    if p is None or p < 3 or q is None:
        return None
    return p, q
