import sympy

from core.errors import NonIntegralValue


def exact_int(value, what: str = "value") -> int:
    """
    Converts an exact rational to int, refusing anything non-integral.
    """
    r = sympy.Rational(value)
    if r.q != 1:
        raise NonIntegralValue(f"{what} = {r} is not an integer")
    return int(r.p)


def ceil_div(numerator: int, denominator: int) -> int:
    """Integer ceiling of numerator/denominator for denominator > 0."""
    return -((-numerator) // denominator)


def parse_call_name(text: str):
    """
    Splits ``name(1,2)`` into ``("name", (1, 2))``; plain names get no params.
    Returns None when the text is not of either form.
    """
    text = text.strip()
    if "(" not in text:
        return text, ()
    if not text.endswith(")"):
        return None
    head, _, inner = text[:-1].partition("(")
    try:
        params = tuple(int(p) for p in inner.split(",") if p.strip())
    except ValueError:
        return None
    return head.strip(), params
