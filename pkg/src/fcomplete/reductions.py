"""Hardness-instance generators: 3SAT reductions to edge-modification problems.

Three constructions are provided, each with an assignment-to-solution
converter used for forward verification:

* C4-free edge deletion (variable gadgets with true/false edges, clause
  gadgets of two linked triangles), budget |vars| + 2 |clauses|;
* C4-free completion (cyclic square tapes per variable, clause gadgets
  guarded by budget-many paths), budget 14 |clauses|;
* P4-free edge deletion (tower pairs separated by tall stacks, clause
  gadgets of three triangles sharing a hub), budget 16 |clauses|.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

from .graph import CompletionSet, Graph, Pattern, complement

TRUTH_TABLE_LIMIT = 20


@dataclass(frozen=True)
class CnfFormula:
    """3-CNF with exactly three pairwise-distinct variables per clause."""

    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        for clause in self.clauses:
            if len(clause) != 3:
                raise ValueError("clauses must have exactly three literals")
            vs = {abs(l) for l in clause}
            if 0 in vs or len(vs) != 3:
                raise ValueError("clause variables must be distinct and non-zero")
            if max(vs) > self.num_vars:
                raise ValueError("literal exceeds declared variable count")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def occurrences(self, var: int) -> int:
        return sum(1 for cl in self.clauses for l in cl if abs(l) == var)


@dataclass(frozen=True)
class ReductionInstance:
    graph: Graph
    budget: int
    mode: str
    targets: tuple[Pattern, ...]
    roles: dict[int, str]
    name: str


def parse_dimacs(text: str | bytes) -> tuple[int, tuple[tuple[int, ...], ...]]:
    """Parse DIMACS CNF into (num_vars, raw clauses of any width)."""
    if isinstance(text, bytes):
        text = text.decode()
    num_vars: Optional[int] = None
    declared = 0
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {lineno}: bad problem line")
            num_vars, declared = int(parts[2]), int(parts[3])
            continue
        if num_vars is None:
            raise ValueError(f"line {lineno}: clause before problem line")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                if abs(lit) > num_vars:
                    raise ValueError(f"line {lineno}: literal {lit} out of range")
                current.append(lit)
    if current:
        raise ValueError("unterminated clause at end of input")
    if num_vars is None:
        raise ValueError("missing problem line")
    if declared != len(clauses):
        raise ValueError(f"declared {declared} clauses, found {len(clauses)}")
    return num_vars, tuple(clauses)


def regularize(num_vars: int, raw_clauses: Sequence[Sequence[int]]) -> CnfFormula:
    """Equisatisfiable rewrite into exactly-3-distinct-variable clauses.

    Duplicate literals collapse, tautological clauses drop, wide clauses are
    chained with fresh variables, and short clauses are padded with fresh
    variables over all sign patterns.  Unused variables are reindexed away.
    An empty clause is replaced by an unsatisfiable block on fresh variables.
    """
    if not raw_clauses:
        raise ValueError("formula has no clauses")
    next_fresh = num_vars + 1
    work: list[tuple[int, ...]] = []
    for clause in raw_clauses:
        lits: dict[int, int] = {}
        taut = False
        for lit in clause:
            var = abs(lit)
            if var in lits and lits[var] != lit:
                taut = True
                break
            lits[var] = lit
        if taut:
            continue
        work.append(tuple(sorted(lits.values(), key=abs)))
    out: list[tuple[int, int, int]] = []
    for clause in work:
        while len(clause) > 3:
            w = next_fresh
            next_fresh += 1
            out.append(_ordered((clause[0], clause[1], w)))
            clause = (-w,) + clause[2:]
        pad = 3 - len(clause)
        if pad == 0:
            out.append(_ordered(clause))
            continue
        fresh = tuple(range(next_fresh, next_fresh + pad))
        next_fresh += pad
        for signs in product((1, -1), repeat=pad):
            padded = clause + tuple(s * w for s, w in zip(signs, fresh))
            out.append(_ordered(padded))
    if not out:
        raise ValueError("formula reduces to no clauses")
    used = sorted({abs(l) for cl in out for l in cl})
    remap = {v: i + 1 for i, v in enumerate(used)}
    clauses = tuple(
        _ordered(tuple((1 if l > 0 else -1) * remap[abs(l)] for l in cl))
        for cl in out)
    return CnfFormula(len(used), clauses)


def _ordered(clause: Sequence[int]) -> tuple[int, int, int]:
    return tuple(sorted(clause, key=abs))  # type: ignore[return-value]


def ensure_min_occurrences(f: CnfFormula) -> CnfFormula:
    """Duplicate the clause list once when some variable occurs only once."""
    if any(f.occurrences(v) < 2 for v in range(1, f.num_vars + 1)):
        return CnfFormula(f.num_vars, f.clauses + f.clauses)
    return f


def satisfying_assignments(f: CnfFormula):
    """Yield satisfying assignments as tuples of bools (index = var - 1)."""
    if f.num_vars > TRUTH_TABLE_LIMIT:
        raise ValueError("formula too large for truth-table search")
    for values in product((False, True), repeat=f.num_vars):
        if all(any((l > 0) == values[abs(l) - 1] for l in cl) for cl in f.clauses):
            yield values


def is_satisfiable(f: CnfFormula) -> bool:
    return next(satisfying_assignments(f), None) is not None


def _satisfies(f: CnfFormula, alpha: Sequence[bool]) -> bool:
    return all(any((l > 0) == alpha[abs(l) - 1] for l in cl) for cl in f.clauses)


def occurrence_index(f: CnfFormula, var: int, clause_idx: int) -> int:
    """1-based rank of ``clause_idx`` among the clauses containing ``var``."""
    rank = 0
    for i, cl in enumerate(f.clauses):
        if any(abs(l) == var for l in cl):
            rank += 1
        if i == clause_idx:
            return rank
    raise ValueError("variable does not occur in that clause")


# --- C4-free edge deletion -------------------------------------------------

class _C4DelLayout:
    W = (0, 1, 2)
    N, P, T = 3, 4, 5

    def __init__(self, f: CnfFormula):
        self.f = f
        self.var_base = {x: 6 * (x - 1) for x in range(1, f.num_vars + 1)}
        cb = 6 * f.num_vars
        self.clause_base = {c: cb + 6 * c for c in range(f.num_clauses)}
        self.n = cb + 6 * f.num_clauses

    def w(self, x, i):
        return self.var_base[x] + i

    def nxt(self, x):
        return self.var_base[x] + self.N

    def pxt(self, x):
        return self.var_base[x] + self.P

    def txt(self, x):
        return self.var_base[x] + self.T

    def a(self, c, i):
        return self.clause_base[c] + i

    def b(self, c, i):
        return self.clause_base[c] + 3 + i

    def edges(self):
        out = []
        for x in range(1, self.f.num_vars + 1):
            w0, w1, w2 = (self.w(x, i) for i in range(3))
            n, p, t = self.nxt(x), self.pxt(x), self.txt(x)
            out += [(w0, w1), (w1, w2), (w0, w2)]
            out += [(n, w0), (n, w1), (n, w2)]
            out += [(p, w0), (p, w1), (p, w2)]
            out += [(n, t), (p, t)]
        for c in range(self.f.num_clauses):
            a = [self.a(c, i) for i in range(3)]
            b = [self.b(c, i) for i in range(3)]
            out += [(a[0], a[1]), (a[1], a[2]), (a[0], a[2])]
            out += [(b[0], b[1]), (b[1], b[2]), (b[0], b[2])]
            out += [(a[i], b[i]) for i in range(3)]
            for i, lit in enumerate(self.f.clauses[c]):
                x = abs(lit)
                out.append((self.txt(x), a[i]))
                out.append((self.pxt(x) if lit > 0 else self.nxt(x), b[i]))
        return out

    def roles(self):
        r = {}
        for x in range(1, self.f.num_vars + 1):
            for i in range(3):
                r[self.w(x, i)] = f"x{x}.w{i}"
            r[self.nxt(x)] = f"x{x}.n"
            r[self.pxt(x)] = f"x{x}.p"
            r[self.txt(x)] = f"x{x}.t"
        for c in range(self.f.num_clauses):
            for i in range(3):
                r[self.a(c, i)] = f"c{c + 1}.a{i}"
                r[self.b(c, i)] = f"c{c + 1}.b{i}"
        return r


def reduce_to_c4_deletion(f: CnfFormula) -> ReductionInstance:
    lay = _C4DelLayout(f)
    graph = Graph.from_edges(lay.n, lay.edges())
    budget = f.num_vars + 2 * f.num_clauses
    return ReductionInstance(graph, budget, "deletion", (Pattern.C4,),
                             lay.roles(), "c4del")


# --- C4-free completion ----------------------------------------------------

class _C4ComplLayout:
    U, T, B, D = 0, 1, 2, 3

    def __init__(self, f: CnfFormula):
        self.f = f
        self.budget = 14 * f.num_clauses
        self.p = {x: f.occurrences(x) for x in range(1, f.num_vars + 1)}
        if any(p < 2 for p in self.p.values()):
            raise ValueError("every variable must occur in at least two clauses")
        self.var_base = {}
        base = 0
        for x in range(1, f.num_vars + 1):
            self.var_base[x] = base
            base += 16 * self.p[x]
        self.clause_base = {c: base + 8 * c for c in range(f.num_clauses)}
        base += 8 * f.num_clauses
        self.guard_base = {c: base + 2 * self.budget * c
                           for c in range(f.num_clauses)}
        self.n = base + 2 * self.budget * f.num_clauses

    def tape(self, x, kind, i):
        i %= 4 * self.p[x]
        return self.var_base[x] + 4 * i + kind

    def v(self, c, i):
        return self.clause_base[c] + i - 1

    def u(self, c, i):
        return self.clause_base[c] + 4 + i - 1

    def guard(self, c, path, j):
        return self.guard_base[c] + 2 * path + j

    def edges(self):
        out = []
        for x in range(1, self.f.num_vars + 1):
            for i in range(4 * self.p[x]):
                u, t = self.tape(x, self.U, i), self.tape(x, self.T, i)
                b, d = self.tape(x, self.B, i), self.tape(x, self.D, i)
                u2, t2 = self.tape(x, self.U, i + 1), self.tape(x, self.T, i + 1)
                b2, d2 = self.tape(x, self.B, i + 1), self.tape(x, self.D, i + 1)
                out += [(u, t), (u, t2), (t, u2), (t, t2), (t, b),
                        (b, b2), (b, d2), (b, d), (d, b2)]
        occ_seen = {x: 0 for x in self.p}
        for c in range(self.f.num_clauses):
            v = [self.v(c, i) for i in range(1, 5)]
            u = [self.u(c, i) for i in range(1, 5)]
            out += [(v[0], v[3]), (v[3], v[1]), (v[1], v[2]), (v[2], v[0])]
            out += [(v[1], u[0]), (u[0], u[1]), (u[1], v[0])]
            out += [(v[2], u[3]), (u[3], u[2]), (u[2], v[3])]
            for path in range(self.budget):
                g1, g2 = self.guard(c, path, 0), self.guard(c, path, 1)
                out += [(u[3], g1), (g1, g2), (g2, v[3])]
            for i, lit in enumerate(self.f.clauses[c], start=1):
                x = abs(lit)
                occ_seen[x] += 1
                j = 4 * (occ_seen[x] - 1)
                if lit > 0:
                    out.append((self.tape(x, self.T, j + 1), v[i - 1]))
                    out.append((self.tape(x, self.B, j), u[i - 1]))
                else:
                    out.append((self.tape(x, self.T, j), v[i - 1]))
                    out.append((self.tape(x, self.B, j + 1), u[i - 1]))
        return out

    def roles(self):
        names = {self.U: "u", self.T: "t", self.B: "b", self.D: "d"}
        r = {}
        for x in range(1, self.f.num_vars + 1):
            for i in range(4 * self.p[x]):
                for kind, nm in names.items():
                    r[self.tape(x, kind, i)] = f"x{x}.{nm}{i}"
        for c in range(self.f.num_clauses):
            for i in range(1, 5):
                r[self.v(c, i)] = f"c{c + 1}.v{i}"
                r[self.u(c, i)] = f"c{c + 1}.u{i}"
            for path in range(self.budget):
                r[self.guard(c, path, 0)] = f"c{c + 1}.guard{path}.0"
                r[self.guard(c, path, 1)] = f"c{c + 1}.guard{path}.1"
        return r


def reduce_to_c4_completion(f: CnfFormula) -> ReductionInstance:
    lay = _C4ComplLayout(f)
    graph = Graph.from_edges(lay.n, lay.edges())
    return ReductionInstance(graph, lay.budget, "addition", (Pattern.C4,),
                             lay.roles(), "c4compl")


# --- P4-free edge deletion -------------------------------------------------

class _P4DelLayout:
    def __init__(self, f: CnfFormula):
        self.f = f
        self.budget = 16 * f.num_clauses
        self.stack_height = self.budget + 3
        self.p = {x: f.occurrences(x) for x in range(1, f.num_vars + 1)}
        self.var_base = {}
        base = 0
        for x in range(1, f.num_vars + 1):
            self.var_base[x] = base
            base += 7 * self.p[x]
        self.clause_base = {c: base + 7 * c for c in range(f.num_clauses)}
        base += 7 * f.num_clauses
        self.stack_base = {}
        for x in range(1, f.num_vars + 1):
            self.stack_base[x] = base
            base += self.stack_height * self.p[x]
        self.n = base

    def spike(self, x, i, which):
        return self.var_base[x] + 7 * (i - 1) + which - 1

    def base_v(self, x, i, j):
        return self.var_base[x] + 7 * (i - 1) + 2 + j - 1

    def stack(self, x, i, j):
        i = (i - 1) % self.p[x] + 1
        return self.stack_base[x] + self.stack_height * (i - 1) + j - 1

    def hub(self, c):
        return self.clause_base[c]

    def tri(self, c, pos, which):
        return self.clause_base[c] + 1 + 2 * pos + which - 2

    def tower_edges(self, x, i):
        b = [self.base_v(x, i, j) for j in range(1, 6)]
        t1, t2 = self.spike(x, i, 1), self.spike(x, i, 2)
        return [(b[0], b[1]), (b[0], b[2]), (b[1], b[2]),
                (b[2], b[3]), (b[2], b[4]), (b[3], b[4]),
                (b[1], t1), (b[3], t2)]

    def edges(self):
        out = []
        for x in range(1, self.f.num_vars + 1):
            for i in range(1, self.p[x] + 1):
                out += self.tower_edges(x, i)
                for j in range(1, self.stack_height + 1):
                    out.append((self.stack(x, i, j), self.base_v(x, i, 1)))
                    out.append((self.base_v(x, i - 1 if i > 1 else self.p[x], 5),
                                self.stack(x, i, j)))
                out.append((self.base_v(x, i, 5),
                            self.base_v(x, i % self.p[x] + 1, 1)))
        occ_seen = {x: 0 for x in self.p}
        for c in range(self.f.num_clauses):
            hub = self.hub(c)
            for pos, lit in enumerate(self.f.clauses[c]):
                x = abs(lit)
                occ_seen[x] += 1
                i = occ_seen[x]
                u2, u3 = self.tri(c, pos, 2), self.tri(c, pos, 3)
                spike = self.spike(x, i, 1 if lit > 0 else 2)
                out += [(hub, u2), (hub, u3), (u2, u3), (u2, spike), (u3, spike)]
        return out

    def roles(self):
        r = {}
        for x in range(1, self.f.num_vars + 1):
            for i in range(1, self.p[x] + 1):
                r[self.spike(x, i, 1)] = f"x{x}.t{i}.1"
                r[self.spike(x, i, 2)] = f"x{x}.t{i}.2"
                for j in range(1, 6):
                    r[self.base_v(x, i, j)] = f"x{x}.b{i}.{j}"
                for j in range(1, self.stack_height + 1):
                    r[self.stack(x, i, j)] = f"x{x}.s{i}.{j}"
        for c in range(self.f.num_clauses):
            r[self.hub(c)] = f"c{c + 1}.u"
            for pos in range(3):
                r[self.tri(c, pos, 2)] = f"c{c + 1}.lit{pos + 1}.u2"
                r[self.tri(c, pos, 3)] = f"c{c + 1}.lit{pos + 1}.u3"
        return r


def reduce_to_p4_deletion(f: CnfFormula) -> ReductionInstance:
    lay = _P4DelLayout(f)
    graph = Graph.from_edges(lay.n, lay.edges())
    return ReductionInstance(graph, lay.budget, "deletion", (Pattern.P4,),
                             lay.roles(), "p4del")


# --- assignment-to-solution converters --------------------------------------

def solution_from_assignment(f: CnfFormula, alpha: Sequence[bool],
                             which: str) -> CompletionSet:
    """Edit set of exactly the construction budget for a satisfying alpha.

    ``which`` is one of ``c4del``, ``c4compl`` or ``p4del``; ``alpha`` maps
    variable i to ``alpha[i-1]``.  Raises when alpha does not satisfy f.
    """
    if not _satisfies(f, alpha):
        raise ValueError("assignment does not satisfy the formula")
    if which == "c4del":
        return _c4del_solution(f, alpha)
    if which == "c4compl":
        return _c4compl_solution(f, alpha)
    if which == "p4del":
        return _p4del_solution(f, alpha)
    raise ValueError(f"unknown construction {which!r}")


def _first_satisfied(clause: tuple[int, int, int], alpha: Sequence[bool]) -> int:
    for pos, lit in enumerate(clause):
        if (lit > 0) == alpha[abs(lit) - 1]:
            return pos
    raise AssertionError("unsatisfied clause")


def _c4del_solution(f, alpha):
    lay = _C4DelLayout(f)
    pairs = []
    for x in range(1, f.num_vars + 1):
        other = lay.pxt(x) if alpha[x - 1] else lay.nxt(x)
        pairs.append((lay.txt(x), other))
    for c, clause in enumerate(f.clauses):
        keep = _first_satisfied(clause, alpha)
        for i in range(3):
            if i != keep:
                pairs.append((lay.a(c, i), lay.b(c, i)))
    return CompletionSet(tuple(pairs), "deletion")


def _c4compl_solution(f, alpha):
    lay = _C4ComplLayout(f)
    pairs = []
    for x in range(1, f.num_vars + 1):
        for i in range(4 * lay.p[x]):
            if alpha[x - 1]:
                pairs.append((lay.tape(x, lay.T, i), lay.tape(x, lay.B, i + 1)))
            else:
                pairs.append((lay.tape(x, lay.T, i + 1), lay.tape(x, lay.B, i)))
    for c, clause in enumerate(f.clauses):
        pos = _first_satisfied(clause, alpha)
        if pos == 0:
            pairs += [(lay.v(c, 1), lay.v(c, 2)), (lay.v(c, 1), lay.u(c, 1))]
        elif pos == 1:
            pairs += [(lay.v(c, 1), lay.v(c, 2)), (lay.v(c, 2), lay.u(c, 2))]
        else:
            pairs += [(lay.v(c, 3), lay.v(c, 4)), (lay.v(c, 3), lay.u(c, 3))]
    return CompletionSet(tuple(pairs), "addition")


def _p4del_solution(f, alpha):
    lay = _P4DelLayout(f)
    pairs = []
    for x in range(1, f.num_vars + 1):
        for i in range(1, lay.p[x] + 1):
            b = [lay.base_v(x, i, j) for j in range(1, 6)]
            if alpha[x - 1]:
                pairs += [(lay.spike(x, i, 1), b[1]),
                          (b[2], b[3]), (b[2], b[4]), (b[3], b[4])]
            else:
                pairs += [(lay.spike(x, i, 2), b[3]),
                          (b[0], b[1]), (b[0], b[2]), (b[1], b[2])]
    for c, clause in enumerate(f.clauses):
        keep = _first_satisfied(clause, alpha)
        hub = lay.hub(c)
        for pos in range(3):
            if pos != keep:
                pairs.append((hub, lay.tri(c, pos, 2)))
                pairs.append((hub, lay.tri(c, pos, 3)))
    return CompletionSet(tuple(pairs), "deletion")


_COMPLEMENT_PATTERN = {
    Pattern.C4: Pattern.TWO_K2,
    Pattern.TWO_K2: Pattern.C4,
    Pattern.P4: Pattern.P4,
    Pattern.C5: Pattern.C5,
}


def complement_instance(inst: ReductionInstance) -> ReductionInstance:
    """Deletion on G is completion on the complement with complemented targets."""
    try:
        targets = tuple(_COMPLEMENT_PATTERN[p] for p in inst.targets)
    except KeyError as exc:
        raise ValueError(f"pattern {exc.args[0]} has no complement in the family")
    mode = "deletion" if inst.mode == "addition" else "addition"
    return ReductionInstance(complement(inst.graph), inst.budget, mode,
                             targets, dict(inst.roles), inst.name + ".compl")
