"""Rank certification for subgroups generated by lifted loop classes.

An integer combination sum_j c_j * [lift_j] vanishes in R/(Z<a> + Z<t>)
exactly when both rational linear forms

    sum_j c_j * C_j / a      and      sum_j c_j * K_j

vanish.  Reason: the combination equals
(sum c_j C_j) V/(V - t^n) - (sum c_j K_j)/(n+1)! * t^(n+1)/(V - t^n), and
membership A*a + B*t forces, after clearing the denominator and comparing
coefficients of t^0, t^1, t^n, t^(n+1) (all distinct once n >= 2), first
B = 0 and A = 0 and then the two forms above to vanish.  When every C_j is
the reduced fraction a/n_j the first form is sum_j c_j / n_j, with n_j the
order of the base class.

The kernel is therefore the integer nullspace of a 2 x k rational matrix.
It is computed as a saturated lattice basis via unimodular column
reduction (Hermite form), never by scaling a rational basis vector by a
denominator: scaled vectors can span a proper sublattice when the nullity
exceeds one, and a certificate must contain every integer relation.

A structural consequence worth stating up front: every lifted value lies
in the two-dimensional rational span of V/(V - t^n) and t^(n+1)/(V - t^n),
so with three or more generators the kernel is never trivial and the rank
of the generated subgroup never exceeds two.  What can hold for any k is
the weaker independence property that no single generator lies in the
subgroup generated by the others (no relation carries a unit coefficient);
the certificate reports that property per generator as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .period import class_order
from .weinstein import circle_loop_order, lift_value_circle

__all__ = [
    "RankCertificate",
    "integer_kernel",
    "relation_kernel",
    "certify_rank",
    "lemma_num_check",
]


def integer_kernel(rows):
    """Basis of the lattice {c in Z^k : M c = 0} for an integer matrix M.

    Column-reduces M to Hermite form while applying the same unimodular
    column operations to an identity matrix; the identity columns that end
    up over zero columns of the reduced matrix form a basis of the full
    kernel lattice (saturated: every integer kernel vector is an integer
    combination of the basis).
    """
    if not rows:
        raise ValueError("matrix needs at least one row")
    k = len(rows[0])
    if any(len(row) != k for row in rows):
        raise ValueError("ragged matrix")
    work = [[int(v) for v in row] for row in rows]
    unimod = [[1 if i == j else 0 for j in range(k)] for i in range(k)]

    def swap_cols(i, j):
        for row in work:
            row[i], row[j] = row[j], row[i]
        for row in unimod:
            row[i], row[j] = row[j], row[i]

    def add_multiple(dst, src, q):
        # column_dst -= q * column_src
        for row in work:
            row[dst] -= q * row[src]
        for row in unimod:
            row[dst] -= q * row[src]

    pivot_col = 0
    for r in range(len(work)):
        if pivot_col >= k:
            break
        lead = next((j for j in range(pivot_col, k) if work[r][j] != 0), None)
        if lead is None:
            continue
        swap_cols(pivot_col, lead)
        for j in range(pivot_col + 1, k):
            while work[r][j] != 0:
                if work[r][pivot_col] == 0 or abs(work[r][j]) < abs(work[r][pivot_col]):
                    swap_cols(pivot_col, j)
                if work[r][pivot_col] != 0 and work[r][j] != 0:
                    add_multiple(j, pivot_col, work[r][j] // work[r][pivot_col])
        pivot_col += 1
    basis = []
    for j in range(pivot_col, k):
        vector = tuple(unimod[i][j] for i in range(k))
        basis.append(_orient(vector))
    return basis


def _orient(vector):
    """Flip sign so the first nonzero entry is positive (display stability)."""
    for v in vector:
        if v > 0:
            return vector
        if v < 0:
            return tuple(-x for x in vector)
    return vector


@dataclass(frozen=True)
class RankCertificate:
    """Exact relation lattice among lifted classes, with the rank it leaves."""

    rank: int
    kernel_basis: tuple
    orders: tuple
    weight_sums: tuple
    reduction: tuple  # the two rational rows (C_j/a) and (K_j)
    orders_pairwise_coprime: bool
    full_rank: bool
    generators_independent: tuple
    generator_orders_infinite: tuple = ()

    @property
    def k(self):
        return len(self.orders)

    def report(self):
        lines = [
            "generators: %d" % self.k,
            "base orders n_j: %s" % (list(self.orders),),
            "weight sums K_j: %s" % (list(self.weight_sums),),
            "rank: %d" % self.rank,
        ]
        if self.kernel_basis:
            lines.append("kernel basis:")
            for vector in self.kernel_basis:
                lines.append("  %s" % (list(vector),))
        else:
            lines.append("kernel: trivial")
        lines.append("orders pairwise coprime: %s"
                     % ("yes" if self.orders_pairwise_coprime else "no"))
        if all(self.generators_independent):
            lines.append("no generator lies in the subgroup generated by the others")
        else:
            dependent = [i for i, ok in enumerate(self.generators_independent) if not ok]
            lines.append("generators expressible through the others: %s" % (dependent,))
        if self.orders_pairwise_coprime and not self.full_rank:
            lines.append("note: orders are pairwise coprime, yet relations with "
                         "non-unit coefficients exist; the lifted values span a "
                         "rational plane, so the rank cannot exceed two")
        if self.generator_orders_infinite:
            finite = [i for i, inf in enumerate(self.generator_orders_infinite) if not inf]
            if finite:
                lines.append("warning: generators %s have finite lifted order "
                             "(trivial local data)" % (finite,))
            else:
                lines.append("every generator has infinite lifted order")
        return "\n".join(lines)


def relation_kernel(loops, manifold):
    """Exact kernel of c -> sum_j c_j * [lift_j] over the blow-up lattice."""
    if not loops:
        raise ValueError("need at least one loop")
    if manifold.a == 0:
        raise ValueError("degenerate period generator")
    if manifold.n < 2:
        raise ValueError("ambient half-dimension must be at least 2")
    for loop in loops:
        manifold.check_loop(loop)
    orders = tuple(circle_loop_order(loop, manifold) for loop in loops)
    weight_sums = tuple(loop.weight_sum for loop in loops)
    base_row = tuple(loop.C / manifold.a for loop in loops)
    scale = math.lcm(*(f.denominator for f in base_row))
    int_rows = [
        [int(f * scale) for f in base_row],
        [int(w) for w in weight_sums],
    ]
    basis = integer_kernel(int_rows)
    k = len(loops)
    coprime = all(
        math.gcd(orders[i], orders[j]) == 1
        for i in range(k) for j in range(i + 1, k)
    )
    return RankCertificate(
        rank=k - len(basis),
        kernel_basis=tuple(basis),
        orders=orders,
        weight_sums=weight_sums,
        reduction=(base_row, tuple(Fraction(w) for w in weight_sums)),
        orders_pairwise_coprime=coprime,
        full_rank=(len(basis) == 0),
        generators_independent=_independence_flags(basis, k),
    )


def _independence_flags(basis, k):
    """Per generator: True when no relation carries coefficient +-1 there.

    The r-th coordinates of the kernel lattice form a subgroup d*Z of Z;
    a relation expressing generator r through the others exists exactly
    when d = 1.
    """
    flags = []
    for r in range(k):
        coords = [abs(v[r]) for v in basis if v[r] != 0]
        d = math.gcd(*coords) if coords else 0
        flags.append(d != 1)
    return tuple(flags)


def certify_rank(loops, manifold):
    """relation_kernel plus per-generator infinite-order verification."""
    certificate = relation_kernel(loops, manifold)
    infinite = tuple(
        class_order(lift_value_circle(loop, manifold).lifted_class()) is None
        for loop in loops
    )
    return RankCertificate(
        rank=certificate.rank,
        kernel_basis=certificate.kernel_basis,
        orders=certificate.orders,
        weight_sums=certificate.weight_sums,
        reduction=certificate.reduction,
        orders_pairwise_coprime=certificate.orders_pairwise_coprime,
        full_rank=certificate.full_rank,
        generators_independent=certificate.generators_independent,
        generator_orders_infinite=infinite,
    )


def lemma_num_check(n_list, alpha):
    """Exact value of 1/n_1 - sum_j alpha_j / n_(j+1); nonzero when n_1 is
    coprime to every other entry.

    Multiplying by the product N of all entries sends every alpha term to a
    multiple of n_1 while N/n_1 stays coprime to n_1, so the numerator
    cannot vanish.  The preconditions (n_1 >= 2, coprimality, matching
    lengths) are enforced; violating them is reported as a hypothesis
    error, and the non-vanishing claim itself is asserted.
    """
    n_list = [int(v) for v in n_list]
    alpha = [int(v) for v in alpha]
    if not n_list or n_list[0] < 2:
        raise ValueError("hypothesis violated: leading order must be >= 2")
    if len(alpha) != len(n_list) - 1:
        raise ValueError("hypothesis violated: need one coefficient per extra order")
    if any(n <= 0 for n in n_list):
        raise ValueError("hypothesis violated: orders must be positive")
    for n in n_list[1:]:
        if math.gcd(n_list[0], n) != 1:
            raise ValueError("hypothesis violated: orders must be coprime to the first")
    value = Fraction(1, n_list[0])
    for coeff, n in zip(alpha, n_list[1:]):
        value -= Fraction(coeff, n)
    assert value != 0, "coprimality precondition admits no vanishing value"
    return value
