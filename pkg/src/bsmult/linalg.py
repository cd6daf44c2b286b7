"""Exact linear algebra over the rationals.

An incremental echelon tracker: rows are sparse vectors over an arbitrary
hashable basis; each inserted row either extends the row space or yields
the coefficients of a linear dependency on the rows inserted so far (with
coefficient 1 on the newest row).  This backs both the minimal-polynomial
search and nullspace extraction.
"""

from __future__ import annotations

from .rationals import Q, ZERO, ONE


class Echelon:
    """Row space with dependency tracking over sparse Q-vectors."""

    def __init__(self, key=None):
        self.key = key or (lambda t: t)
        self.rows = []  # (pivot, {basis: coeff} normalized, {index: coeff})
        self.count = 0

    def insert(self, vector):
        """Add a row; return dependency coefficients or None.

        `vector` is a dict basis->Q.  If the row is dependent on earlier
        ones, returns {row_index: coeff} with coefficient 1 on this row.
        """
        work = {t: Q(c) for t, c in vector.items() if c != 0}
        combo = {self.count: ONE}
        while work:
            pivot = max(work, key=self.key)
            hit = None
            for rp, row, rcombo in self.rows:
                if rp == pivot:
                    hit = (row, rcombo)
                    break
            if hit is None:
                break
            row, rcombo = hit
            factor = work[pivot]
            for t, c in row.items():
                s = work.get(t, ZERO) - factor * c
                if s == 0:
                    work.pop(t, None)
                else:
                    work[t] = s
            for i, c in rcombo.items():
                s = combo.get(i, ZERO) - factor * c
                if s == 0:
                    combo.pop(i, None)
                else:
                    combo[i] = s
        index = self.count
        self.count += 1
        if not work:
            return combo
        pivot = max(work, key=self.key)
        lc = work[pivot]
        row = {t: c / lc for t, c in work.items()}
        rcombo = {i: c / lc for i, c in combo.items()}
        self.rows.append((pivot, row, rcombo))
        return None

    @property
    def rank(self) -> int:
        return len(self.rows)


def nullspace(rows, key=None):
    """Basis of left kernel combinations of the given sparse rows.

    Returns a list of dicts {row_index: coeff}; each dict d satisfies
    sum_i d[i] * rows[i] = 0 and has coefficient 1 on its largest index.
    """
    ech = Echelon(key=key)
    out = []
    for row in rows:
        dep = ech.insert(row)
        if dep is not None:
            out.append(dep)
    return out
