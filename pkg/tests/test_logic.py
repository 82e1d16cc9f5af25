import itertools

import numpy as np
import pytest

from matic.errors import (
    AllStandard,
    ConfigError,
    FormulaSyntaxError,
    IllegalSetFormation,
    IllegalTransfer,
    PatternMismatch,
    UnboundVariable,
)
from matic.logic import (
    BinOp,
    ComprehensionStatus,
    FiniteModel,
    LevelAssignment,
    Member,
    Not,
    NotStratified,
    Rel,
    Var,
    apply_idealisation,
    apply_selection,
    apply_transference,
    check_comprehension,
    comprehensions,
    eval_finite_model,
    extension,
    incremental_set,
    is_inductive,
    is_internal,
    is_stratified,
    nonstandard_witness,
    parse_document,
    parse_formula,
    parse_term,
    reverse_transference,
    stratify_formula,
)


def test_connective_precedence():
    f = parse_formula("a in x and b in y or not c in z")
    assert isinstance(f, BinOp) and f.op == "or"
    assert isinstance(f.left, BinOp) and f.left.op == "and"
    assert isinstance(f.right, Not)


def test_implication_is_right_associative_and_binds_tighter_than_iff():
    f = parse_formula("p(x) -> q(x) -> r(x)")
    assert f.op == "->" and f.right.op == "->"
    g = parse_formula("p(x) -> q(x) <-> r(x)")
    assert g.op == "<->" and g.left.op == "->"


def test_comparisons_and_membership_atoms():
    assert parse_formula("x <= y + 1") == Rel("<=", (Var("x"), parse_term("y + 1")))
    assert parse_formula("x in y") == Member(Var("x"), Var("y"))


@pytest.mark.parametrize("text, position", [("x in ] y", 5), ("x @ y", 2), ("forall x x in y", 9)])
def test_syntax_errors_carry_the_offset(text, position):
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula(text)
    assert info.value.position == position


def test_set_literal_membership_is_stratified():
    result = stratify_formula(parse_formula("x in [x, y]"))
    assert isinstance(result, LevelAssignment)
    assert result.levels == {"x": 0, "y": 0}


def test_self_membership_is_not_stratified():
    result = stratify_formula(parse_formula("x in x"))
    assert isinstance(result, NotStratified)
    assert result.cycle == ("x", "x")
    assert not is_stratified(parse_formula("exists y . y = {z | not z in z}"))


def test_membership_chain_gets_increasing_levels():
    result = stratify_formula(parse_formula("x in y and y in w"))
    assert result.levels == {"x": 0, "y": 1, "w": 2}


@pytest.mark.parametrize(
    "text, internal",
    [
        ("n <= n + 1", True),
        ("st(n)", False),
        ("forall^st n . n <= n", False),
        ("forall^stfin z . z = z", False),
        ("limited(n)", False),
        ("forall n . (limited(n) -> n <= n + 1)", False),
    ],
)
def test_internal_classification(text, internal):
    assert is_internal(parse_formula(text)) is internal


def test_definitions_from_a_document_are_classified(scenarios_dir):
    doc = parse_document((scenarios_dir / "formulas.txt").read_text())
    assert {"small", "limited", "infinitesimal"} <= set(doc.definitions)
    assert [number for number, _, _ in doc.formulas] == [3, 4, 5, 6, 7]
    assert is_internal(parse_formula("small(3)"), doc.definitions)


def test_document_errors_name_the_line():
    with pytest.raises(FormulaSyntaxError, match="Line 2"):
        parse_document("x in y\nx in ]")


@pytest.mark.parametrize(
    "text, status",
    [
        ("{z | z in a}", ComprehensionStatus.LEGAL),
        ("{z | not z in z}", ComprehensionStatus.NOT_STRATIFIED),
        ("{n | limited(n)}", ComprehensionStatus.ILLEGAL_SET_FORMATION),
        ("{n | st(n) and n in n}", ComprehensionStatus.ILLEGAL_SET_FORMATION),
    ],
)
def test_comprehension_legality(text, status):
    verdict = check_comprehension(parse_term(text))
    assert verdict.status is status
    assert bool(verdict.cycle) == (status is ComprehensionStatus.NOT_STRATIFIED)


def test_comprehensions_are_found_inside_formulas():
    found = comprehensions(parse_formula("exists y . y = {z | not z in z}"))
    assert [str(c) for c in found] == ["{z | not z in z}"]


def test_transference_drops_the_standard_modifier():
    result = apply_transference(parse_formula("forall^st n . n <= n * 1"))
    assert str(result) == "forall n . n <= n*1"


def test_nested_standard_quantifiers_transfer_first():
    result = apply_transference(parse_formula("forall^st n . exists^st m . n <= m"))
    assert str(result) == "forall n . exists m . n <= m"


def test_transference_of_external_body_is_illegal():
    with pytest.raises(IllegalTransfer) as info:
        apply_transference(parse_formula("forall^st n . limited(n)"))
    assert info.value.reason == IllegalTransfer.EXTERNAL_FORMULA


def test_transference_needs_standard_parameters():
    f = parse_formula("forall^st n . n <= m")
    with pytest.raises(IllegalTransfer) as info:
        apply_transference(f)
    assert info.value.reason == IllegalTransfer.NON_STANDARD_PARAMETER
    assert str(apply_transference(f, ["m"])) == "forall n . n <= m"


def test_reverse_transference():
    assert str(reverse_transference(parse_formula("forall n . n <= n"))) == "forall^st n . n <= n"
    with pytest.raises(PatternMismatch):
        reverse_transference(parse_formula("forall^st n . n <= n"))
    with pytest.raises(PatternMismatch):
        apply_transference(parse_formula("forall n . n <= n"))


def test_idealisation_rewrite():
    f = parse_formula("forall^stfin Z . exists x . forall y in Z . y <= x")
    assert str(apply_idealisation(f)) == "exists x . forall^st y . y <= x"
    with pytest.raises(PatternMismatch):
        apply_idealisation(parse_formula("forall x . x <= x"))
    with pytest.raises(PatternMismatch):
        apply_idealisation(parse_formula("forall^stfin Z . exists x . forall y in Z . limited(y)"))


def test_selection_builds_a_legal_intersection():
    term = apply_selection(Var("A"), Var("B"))
    assert str(term) == "{z | (z in A and z in B)}"
    assert check_comprehension(term).status is ComprehensionStatus.LEGAL
    assert str(apply_selection(Var("A"), Var("A"))) == "{z | z in A}"
    assert apply_selection(Var("z"), Var("B")).var == "z1"


def test_selection_rejects_external_predicates():
    with pytest.raises(IllegalSetFormation):
        apply_selection(parse_term("{n | limited(n)}"), Var("B"))


@pytest.fixture
def small_model():
    return FiniteModel.of(range(5), standard=[0, 1, 2])


@pytest.mark.parametrize(
    "text, expected",
    [
        ("forall^st n . n <= 2", True),
        ("forall n . n <= 2", False),
        ("exists n . not st(n)", True),
        ("limited(1)", True),
        ("limited(4)", False),
        ("forall^stfin Z . exists x . forall y in Z . y <= x", True),
        ("exists x . forall^st y . y <= x", True),
    ],
)
def test_finite_model_evaluation(small_model, text, expected):
    assert eval_finite_model(parse_formula(text), small_model) is expected


def test_free_variables_need_bindings(small_model):
    f = parse_formula("x <= 1")
    with pytest.raises(UnboundVariable):
        eval_finite_model(f, small_model)
    assert eval_finite_model(f, small_model, {"x": 1})


def test_comprehension_extension(small_model):
    assert extension(parse_term("{n | n <= 1}"), small_model) == frozenset({0, 1})


def test_standard_marks_must_lie_in_the_universe():
    with pytest.raises(ConfigError):
        FiniteModel.of(range(3), standard=[7])


def test_nonstandard_witness(small_model):
    assert nonstandard_witness(small_model) == 3
    with pytest.raises(AllStandard):
        nonstandard_witness(FiniteModel.of(range(3)))


def test_incremental_and_inductive_sets():
    m = FiniteModel.of([0, 1])
    empty = frozenset()
    assert incremental_set([empty], m) == {frozenset({0}), frozenset({1})}
    powerset = [empty, frozenset({0}), frozenset({1}), frozenset({0, 1})]
    assert is_inductive(powerset, m)
    assert not is_inductive([empty], m)
    assert not is_inductive([frozenset({0})], m)


def _random_formula(rng, depth, atoms):
    if depth == 0 or rng.random() < 0.35:
        u, v = (str(s) for s in rng.choice(list("abcd"), size=2))
        op = "in" if rng.random() < 0.7 else "="
        atoms.append((u, op, v))
        return f"{u} {op} {v}"
    if rng.random() < 0.2:
        return f"not {_random_formula(rng, depth - 1, atoms)}"
    connective = "and" if rng.random() < 0.5 else "or"
    left = _random_formula(rng, depth - 1, atoms)
    right = _random_formula(rng, depth - 1, atoms)
    return f"({left} {connective} {right})"


def _satisfies(levels, atoms):
    return all(levels[v] == levels[u] + (1 if op == "in" else 0) for u, op, v in atoms)


def _levels_exist(atoms):
    names = sorted({name for u, _, v in atoms for name in (u, v)})
    for choice in itertools.product(range(len(names)), repeat=len(names)):
        if _satisfies(dict(zip(names, choice)), atoms):
            return True
    return False


def test_stratification_agrees_with_exhaustive_level_search():
    rng = np.random.default_rng(0)
    outcomes = set()
    for _ in range(2000):
        atoms = []
        text = _random_formula(rng, 3, atoms)
        result = stratify_formula(parse_formula(text))
        stratified = isinstance(result, LevelAssignment)
        assert stratified is _levels_exist(atoms), text
        if stratified:
            assert _satisfies(result.levels, atoms), text
        outcomes.add(stratified)
    assert outcomes == {True, False}


def test_archimedean_transfer_fixtures():
    archimedean = parse_formula("forall^st x . (x > 0 -> exists^st n . n * x >= 1)")
    transferred = apply_transference(archimedean)
    assert "^st" not in str(transferred)
    assert is_internal(transferred)
    with pytest.raises(IllegalTransfer) as info:
        apply_transference(parse_formula("forall^st n . limited(n)"))
    assert info.value.reason == IllegalTransfer.EXTERNAL_FORMULA
    with pytest.raises(IllegalTransfer) as info:
        apply_transference(parse_formula("forall^st y . y in B"))
    assert info.value.reason == IllegalTransfer.NON_STANDARD_PARAMETER
    assert str(apply_transference(parse_formula("forall^st y . y in B"), ["B"])) == "forall y . y in B"


def test_the_universe_is_a_legal_set():
    assert check_comprehension(parse_term("{x | x = x}")).status is ComprehensionStatus.LEGAL
    assert check_comprehension(parse_term("{x | st(x)}")).status is ComprehensionStatus.ILLEGAL_SET_FORMATION
    assert check_comprehension(parse_term("{x | x in x}")).status is ComprehensionStatus.NOT_STRATIFIED


def test_every_standard_element_lies_in_the_universe():
    universe = range(4)
    m = FiniteModel.of(universe, standard=[0, 2], constants={"V": frozenset(universe)})
    assert eval_finite_model(parse_formula("forall^st x . x in V"), m)
    assert eval_finite_model(parse_formula("forall x . x in V"), m)


def test_nonstandard_elements_exist_only_when_something_is_unmarked():
    f = parse_formula("exists y . not st(y)")
    assert eval_finite_model(f, FiniteModel.of(range(3), standard=[0, 1]))
    assert not eval_finite_model(f, FiniteModel.of(range(3)))


@pytest.mark.parametrize(
    "text",
    [
        "forall^st n . n <= 2",
        "forall^st n . n <= n * 1",
        "exists^st n . n * n > n + 1",
        "forall^st n . exists^st m . n < m",
        "exists^st n . forall^st m . m <= n",
    ],
)
def test_transference_preserves_truth_when_everything_is_standard(text):
    f = parse_formula(text)
    m = FiniteModel.of(range(5))
    assert eval_finite_model(apply_transference(f), m) is eval_finite_model(f, m)


def test_legal_comprehensions_are_internal_and_stratified():
    rng = np.random.default_rng(3)
    corpus = [
        "{z | z in a}",
        "{x | x = x}",
        "{z | not z in z}",
        "{n | limited(n)}",
        "{n | st(n) and n in n}",
        "{n | n <= 3}",
        "{z | forall^st y . y in z}",
    ]
    for _ in range(300):
        body = _random_formula(rng, 2, [])
        if rng.random() < 0.3:
            body = f"(st(a) or {body})"
        corpus.append(f"{{a | {body}}}")
    statuses = set()
    for text in corpus:
        term = parse_term(text)
        verdict = check_comprehension(term)
        well_formed = is_internal(term.body) and is_stratified(term)
        assert verdict.legal is well_formed, text
        statuses.add(verdict.status)
    assert statuses == set(ComprehensionStatus)


@pytest.mark.parametrize("body", ["y <= x", "y < x", "not y = x"])
def test_idealisation_preserves_truth_on_small_universes(body):
    f = parse_formula(f"forall^stfin Z . exists x . forall y in Z . {body}")
    rewritten = apply_idealisation(f)
    for size in range(1, 7):
        universe = list(range(size))
        for marks in itertools.product([False, True], repeat=size):
            m = FiniteModel.of(universe, standard=[x for x, marked in zip(universe, marks) if marked])
            assert eval_finite_model(rewritten, m) is eval_finite_model(f, m), (size, marks)
