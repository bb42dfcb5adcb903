import random
from itertools import product

import pytest

from fcomplete.graph import Pattern, is_f_free, mask_of, occurrences
from fcomplete.oracles import exact_completion, minimal_solutions_within
from fcomplete.reductions import (
    CnfFormula,
    complement_instance,
    ensure_min_occurrences,
    is_satisfiable,
    parse_dimacs,
    reduce_to_c4_completion,
    reduce_to_c4_deletion,
    reduce_to_p4_deletion,
    regularize,
    satisfying_assignments,
    solution_from_assignment,
)


def count_induced(g, pattern):
    return len({frozenset(occ) for occ in occurrences(g, pattern)})


def random_formula(rng, num_vars, num_clauses):
    clauses = []
    for _ in range(num_clauses):
        vs = rng.sample(range(1, num_vars + 1), 3)
        clauses.append(tuple(sorted((v if rng.random() < 0.5 else -v for v in vs),
                                    key=abs)))
    return regularize(num_vars, clauses)


def test_parse_dimacs_basic():
    nv, clauses = parse_dimacs("c comment\np cnf 3 1\n1 2 3 0\n")
    assert nv == 3 and clauses == ((1, 2, 3),)
    nv, clauses = parse_dimacs("p cnf 4 2\n1 -2 0 3\n-4 0\n")
    assert clauses == ((1, -2), (3, -4))


@pytest.mark.parametrize("text", [
    "1 2 3 0\n",                 # clause before header
    "p cnf 2 1\n1 2 3 0\n",      # literal out of range
    "p cnf 3 1\n1 2 3\n",        # unterminated
    "p cnf 3 2\n1 2 3 0\n",      # count mismatch
])
def test_parse_dimacs_errors(text):
    with pytest.raises(ValueError):
        parse_dimacs(text)


def test_regularize_repeated_variable():
    f = regularize(3, [(1, 1, 2), (1, 2, 3)])
    assert all(len({abs(l) for l in cl}) == 3 for cl in f.clauses)
    # equisatisfiability by truth table
    def sat(nv, cls):
        return any(all(any((l > 0) == a[abs(l) - 1] for l in cl) for cl in cls)
                   for a in product((False, True), repeat=nv))
    assert sat(f.num_vars, f.clauses) == sat(3, [(1, 1, 2), (1, 2, 3)])


def test_regularize_tautology_and_padding():
    f = regularize(4, [(1, -1, 2), (3, 4, 2)])
    assert f.num_clauses == 1
    f = regularize(2, [(1,), (1, 2, 1)])
    assert all(len(cl) == 3 for cl in f.clauses)
    assert is_satisfiable(f)
    with pytest.raises(ValueError):
        regularize(3, [])


def test_regularize_unsat_core():
    f = regularize(1, [(1,), (-1,)])
    assert not is_satisfiable(f)


def test_regularize_drops_unused_vars():
    f = regularize(9, [(2, 5, 9)])
    assert f.num_vars == 3 and f.clauses == ((1, 2, 3),)


def test_ensure_min_occurrences():
    f = regularize(3, [(1, 2, 3)])
    f2 = ensure_min_occurrences(f)
    assert f2.num_clauses == 2 * f.num_clauses
    assert ensure_min_occurrences(f2) is f2


def test_c4del_counts_and_forward():
    f = regularize(3, [(1, 2, 3)])
    inst = reduce_to_c4_deletion(f)
    assert inst.graph.n == 24 and inst.graph.m == 48 and inst.budget == 5
    assert inst.mode == "deletion" and inst.targets == (Pattern.C4,)
    assert set(inst.roles) == set(range(24))
    var_mask = mask_of(v for v, r in inst.roles.items() if r.startswith("x1."))
    sub, _ = inst.graph.induced(var_mask)
    assert count_induced(sub, Pattern.C4) == 3
    cl_mask = mask_of(v for v, r in inst.roles.items() if r.startswith("c1."))
    sub, _ = inst.graph.induced(cl_mask)
    assert count_induced(sub, Pattern.C4) == 3
    alpha = next(satisfying_assignments(f))
    sol = solution_from_assignment(f, alpha, "c4del")
    assert sol.size == 5
    sol.validate_against(inst.graph)
    assert is_f_free(sol.apply(inst.graph), (Pattern.C4,))


def test_c4compl_counts_and_forward():
    rng = random.Random(101)
    f = ensure_min_occurrences(random_formula(rng, 4, 2))
    inst = reduce_to_c4_completion(f)
    assert inst.budget == 14 * f.num_clauses
    for x in range(1, f.num_vars + 1):
        px = f.occurrences(x)
        var_mask = mask_of(v for v, r in inst.roles.items()
                           if r.startswith(f"x{x}."))
        assert var_mask.bit_count() == 16 * px
        sub, _ = inst.graph.induced(var_mask)
        assert count_induced(sub, Pattern.C4) == 4 * px
    alpha = next(satisfying_assignments(f))
    sol = solution_from_assignment(f, alpha, "c4compl")
    assert sol.size == inst.budget
    sol.validate_against(inst.graph)
    assert is_f_free(sol.apply(inst.graph), (Pattern.C4,))


def test_c4compl_requires_two_occurrences():
    f = regularize(3, [(1, 2, 3)])
    with pytest.raises(ValueError):
        reduce_to_c4_completion(f)


def test_p4del_counts_and_forward():
    f = regularize(3, [(1, 2, 3)])
    inst = reduce_to_p4_deletion(f)
    assert inst.budget == 16
    kprime = inst.budget + 3
    # per variable: one tower pair (7) plus one stack, plus 7 per clause
    assert inst.graph.n == 3 * (7 + kprime) + 7
    alpha = next(satisfying_assignments(f))
    sol = solution_from_assignment(f, alpha, "p4del")
    assert sol.size == 16
    sol.validate_against(inst.graph)
    assert is_f_free(sol.apply(inst.graph), (Pattern.P4,))


def test_solution_refuses_bad_assignment():
    f = regularize(3, [(1, 2, 3)])
    with pytest.raises(ValueError):
        solution_from_assignment(f, (False, False, False), "c4del")
    with pytest.raises(ValueError):
        solution_from_assignment(f, (True, True, True), "nope")


def test_complement_instance():
    f = regularize(3, [(1, 2, 3)])
    inst = reduce_to_c4_deletion(f)
    compl = complement_instance(inst)
    assert compl.mode == "addition"
    assert compl.targets == (Pattern.TWO_K2,)
    assert compl.budget == inst.budget
    back = complement_instance(compl)
    assert back.graph == inst.graph and back.mode == "deletion"
    p4 = reduce_to_p4_deletion(f)
    assert complement_instance(p4).targets == (Pattern.P4,)


def test_c4del_soundness_single_clause():
    f = regularize(3, [(1, -2, 3)])
    inst = reduce_to_c4_deletion(f)
    sol = exact_completion(inst.graph, inst.targets, inst.budget, "deletion")
    assert sol is not None and sol.size == inst.budget
