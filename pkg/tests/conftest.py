"""Shared helpers for the tests: dense matrices out of windowed operators
and small samplers that complement the library's own suite generators."""

from atinfty.fields import Fv


def operator_matrix(op, window=None):
    """Dense rows of the operator on a window: one row per source index in
    scheme order, one column per image index that actually occurs."""
    pairs = op.materialize(window)
    cols = sorted({j for _, img in pairs for j in img})
    zero = op.field.zero()
    return [[img.get(j, zero) for j in cols] for _, img in pairs]


def clip_matrix(rows, n=8):
    """At most n rows and n columns, keeping the leading block."""
    return [row[:n] for row in rows[:n]]


def frobenius_orbit_sum(a: Fv):
    """Trace by the defining Frobenius-conjugate sum a + a^p + ... ."""
    F = a.field
    acc = a
    conj = a
    for _ in range(F.degree - 1):
        conj = conj ** F.p
        acc = acc + conj
    return acc


def frobenius_orbit_product(a: Fv):
    """Norm by the defining Frobenius-conjugate product."""
    F = a.field
    acc = a
    conj = a
    for _ in range(F.degree - 1):
        conj = conj ** F.p
        acc = acc * conj
    return acc


def all_field_elements(F):
    """Every element of a finite field, smallest fields only."""
    if hasattr(F, "degree"):
        p, d = F.p, F.degree
        out = []
        for n in range(p ** d):
            coeffs = []
            k = n
            for _ in range(d):
                coeffs.append(k % p)
                k //= p
            out.append(F(coeffs))
        return out
    return [F(i) for i in range(F.p)]
