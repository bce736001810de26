"""Hypothesis strategies for small approval elections."""

from hypothesis import strategies as st

from committee_reconfig.core import Instance


@st.composite
def instances(draw, max_n=8, max_m=6, min_k=1, max_k=None, min_m=1):
    m = draw(st.integers(min_m, max_m))
    k_hi = m if max_k is None else min(m, max_k)
    k = draw(st.integers(min(min_k, k_hi), k_hi))
    n = draw(st.integers(1, max_n))
    ballots = draw(st.lists(st.frozensets(st.integers(0, m - 1), max_size=m), min_size=n, max_size=n))
    return Instance.from_approvals([sorted(b) for b in ballots], m, k)


@st.composite
def instance_and_committee(draw, **kw):
    inst = draw(instances(**kw))
    W = draw(st.lists(st.integers(0, inst.m - 1), min_size=inst.k, max_size=inst.k, unique=True))
    return inst, tuple(sorted(W))
