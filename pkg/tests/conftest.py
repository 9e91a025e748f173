from __future__ import annotations

from hypothesis import strategies as st

from sldyn import Opinion

_unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False, allow_infinity=False)


@st.composite
def base_rates(draw, k: int) -> tuple[float, ...]:
    """Strictly positive distribution, components bounded away from zero."""
    raw = draw(
        st.lists(
            st.floats(min_value=0.05, max_value=1.0, allow_nan=False),
            min_size=k,
            max_size=k,
        )
    )
    total = sum(raw)
    vals = [x / total for x in raw]
    # Force exact normalization so construction never trips the tolerance.
    vals[-1] = 1.0 - sum(vals[:-1])
    return tuple(vals)


@st.composite
def opinions(
    draw,
    k: int | None = None,
    min_uncertainty: float = 0.0,
    base_rate: tuple[float, ...] | None = None,
):
    """Valid Opinion built on the mass simplex by construction."""
    if base_rate is not None:
        k = len(base_rate)
    elif k is None:
        k = draw(st.integers(min_value=2, max_value=4))
    weights = draw(
        st.lists(
            st.floats(min_value=0.0, max_value=1.0, allow_nan=False),
            min_size=k + 1,
            max_size=k + 1,
        ).filter(lambda ws: sum(ws) > 1e-6)
    )
    total = sum(weights)
    u = weights[0] / total
    if u < min_uncertainty:
        u = min_uncertainty
    belief_raw = weights[1:]
    belief_total = sum(belief_raw)
    if belief_total > 0.0:
        belief = [x / belief_total * (1.0 - u) for x in belief_raw]
    else:
        belief = [0.0] * k
        u = 1.0
    belief[-1] = max(0.0, (1.0 - u) - sum(belief[:-1]))
    if base_rate is None:
        base_rate = draw(base_rates(k))
    return Opinion(tuple(belief), 1.0 - sum(belief), base_rate)


def non_dogmatic_opinions(k: int | None = None, min_uncertainty: float = 1e-6):
    return opinions(k=k, min_uncertainty=min_uncertainty)


@st.composite
def opinion_groups(draw, n: int = 2, min_uncertainty: float = 1e-6):
    """n non-dogmatic opinions sharing one domain and base rate."""
    k = draw(st.integers(min_value=2, max_value=4))
    base = draw(base_rates(k))
    return tuple(
        draw(opinions(min_uncertainty=min_uncertainty, base_rate=base))
        for _ in range(n)
    )
